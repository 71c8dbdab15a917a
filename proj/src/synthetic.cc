// Copyright 2026 The SegMix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "segmix/synthetic.h"

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "segmix/rng.h"

namespace segmix {
namespace {

using Words = std::vector<std::string_view>;

const Words kFirstNames = {
    "Anna",   "Marcello", "Priya", "Tomas",  "Keiko", "Olu",    "Lena",
    "Rafael", "Ines",     "Dmitri", "Sara",  "Jonas", "Mei",    "Farid",
    "Clara",  "Emeka",    "Noor",  "Pavel",  "Lucia", "Hiro",   "Amara",
    "Viktor", "Elif",     "Mateo", "Yusuf",  "Greta", "Kofi",   "Irene",
    "Bruno",  "Selma"};
const Words kLastNames = {
    "Berg",    "Cuttitta", "Nair",     "Novak",   "Sato",    "Adeyemi",
    "Fischer", "Moreno",   "Silva",    "Petrov",  "Haddad",  "Lind",
    "Chen",    "Rahimi",   "Jordan",   "Lincoln", "Austin",  "Florence",
    "Okafor",  "Kovacs",   "Rossi",    "Tanaka",  "Mensah",  "Weber",
    "Costa",   "Sydney",   "Ivanova",  "Brandt",  "Duarte",  "Keller"};
const Words kCities = {
    "Lisbon",  "Nairobi", "Osaka",   "Quito",   "Tallinn", "Accra",
    "Bergen",  "Cusco",   "Dakar",   "Lyon",    "Pune",    "Hobart",
    "Kraków",  "Tbilisi", "Malmo",   "Porto",   "Jordan",  "Lincoln",
    "Austin",  "Florence", "Sydney", "Halifax", "Bilbao",  "Cork",
    "Oaxaca",  "Perth",   "Gdansk",  "Windhoek", "Leeds",  "Kyoto",
    "Tartu",   "Recife",  "Mombasa", "Split",   "Aarhus",  "Salta"};
const Words kLocSuffixes = {"City", "Valley", "Harbor", "Heights"};
const Words kOrgHeads = {
    "Northwind", "Bluepeak", "Ardent", "Helios",   "Corvid",  "Meridian",
    "Quill",     "Sable",    "Tidewater", "Vantage", "Juniper", "Kestrel",
    "Lumen",     "Orchard",  "Pioneer", "Redwood",  "Summit",  "Granite",
    "Harbor",    "Beacon",   "Crescent", "Falcon",  "Ironbridge", "Nimbus"};
const Words kOrgSuffixes = {"Corp", "Bank", "Institute", "Group", "Labs", "Council"};
const Words kMonths = {"January", "February", "March",     "April",   "May",      "June",
                       "July",    "August",   "September", "October", "November", "December"};
const Words kBrands = {"Zephyr", "Nova",  "Atlas", "Orbit", "Pulse",  "Vertex",
                       "Echo",   "Prism", "Flux",  "Drift", "Vector", "Ember",
                       "Halo",   "Rally", "Aero",  "Spark", "Terra",  "Quasar"};
const Words kModels = {"X1", "X2", "Pro", "Max", "Mini", "S", "Z3", "Air", "One", "Neo"};
const Words kEventHeads = {"Harvest", "Aurora", "Lantern", "Riverside", "Winter",
                           "Solstice", "Coastal", "Jazz",  "Comet",    "Iron"};
const Words kEventSuffixes = {"Festival", "Summit", "Cup", "Expo", "Marathon", "Forum"};
const Words kAdjectives = {"large", "small", "record", "modest", "huge", "quiet", "strong", "weak"};
const Words kVerbs = {"praised", "criticized", "launched", "reviewed", "tested", "promoted"};

// "{X}" slots expand to entities or filler words.
const std::vector<std::string_view> kTemplates = {
    "{PER} visited {LOC} on {DATE} .",
    "{ORG} announced {PRODUCT} at {EVENT} .",
    "{PER} , a {ADJ} analyst at {ORG} , spoke in {LOC} .",
    "the {EVENT} in {LOC} drew {ADJ} crowds on {DATE} .",
    "{PER} {VERB} the {PRODUCT} from {ORG} .",
    "officials in {LOC} said {ORG} {VERB} {PRODUCT} .",
    "{PER} and {PER} met during {EVENT} .",
    "on {DATE} , {ORG} opened an office in {LOC} .",
    "{PRODUCT} sales rose after {EVENT} , {PER} said .",
    "{PER} moved to {LOC} in {DATE} .",
    "a {ADJ} report by {ORG} {VERB} {PER} .",
    "{PER} left {ORG} to join {ORG} .",
    "tickets for {EVENT} sold out in {LOC} .",
    "{ORG} shares fell on {DATE} after {ADJ} results .",
    "{PER} {VERB} {PRODUCT} before {EVENT} .",
    "the {ADJ} crowd in {LOC} cheered {PER} .",
    "{ORG} hired {PER} in {DATE} .",
    "{PER} won the {EVENT} .",
};

std::string_view pick(const Words& words, Rng& rng) { return words[rng.index(words.size())]; }

void push(Sentence& s, std::string_view token, BioLabel label) {
  s.tokens.emplace_back(token);
  s.labels.push_back(std::move(label));
}

void push_entity(Sentence& s, const std::vector<std::string_view>& tokens,
                 const std::string& type) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    push(s, tokens[i], i == 0 ? BioLabel::begin(type) : BioLabel::inside(type));
  }
}

std::vector<std::string_view> make_entity(std::string_view type, Rng& rng) {
  if (type == "PER") {
    const double u = rng.uniform();
    if (u < 0.2) return {pick(kFirstNames, rng)};
    if (u < 0.9) return {pick(kFirstNames, rng), pick(kLastNames, rng)};
    return {pick(kFirstNames, rng), pick(kFirstNames, rng), pick(kLastNames, rng)};
  }
  if (type == "LOC") {
    if (rng.uniform() < 0.25) return {pick(kCities, rng), pick(kLocSuffixes, rng)};
    return {pick(kCities, rng)};
  }
  if (type == "ORG") {
    if (rng.uniform() < 0.2) {
      return {pick(kOrgHeads, rng), pick(kOrgHeads, rng), pick(kOrgSuffixes, rng)};
    }
    return {pick(kOrgHeads, rng), pick(kOrgSuffixes, rng)};
  }
  if (type == "DATE") {
    static const std::array<std::string_view, 28> kDays = {
        "1",  "2",  "3",  "4",  "5",  "6",  "7",  "8",  "9",  "10",
        "11", "12", "13", "14", "15", "16", "17", "18", "19", "20",
        "21", "22", "23", "24", "25", "26", "27", "28"};
    static const std::array<std::string_view, 8> kYears = {
        "2015", "2016", "2017", "2018", "2019", "2020", "2021", "2022"};
    const double u = rng.uniform();
    if (u < 0.5) return {pick(kMonths, rng), kDays[rng.index(kDays.size())]};
    if (u < 0.8) return {pick(kMonths, rng), kYears[rng.index(kYears.size())]};
    return {pick(kMonths, rng)};
  }
  if (type == "PRODUCT") return {pick(kBrands, rng), pick(kModels, rng)};
  // EVENT; a city may head the name, which overlaps with LOC surfaces.
  if (rng.uniform() < 0.3) return {pick(kCities, rng), pick(kEventSuffixes, rng)};
  return {pick(kEventHeads, rng), pick(kEventSuffixes, rng)};
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t j = text.find(' ', i);
    const std::size_t end = j == std::string_view::npos ? text.size() : j;
    if (end > i) out.push_back(text.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

struct RelationTemplate {
  std::string_view pattern;  // {A} is e1, {B} is e2
  std::string_view relation;
  const Words* a;
  const Words* b;
};

const Words kCauses = {"storm", "fire", "virus", "earthquake", "drought", "spark", "leak", "flood"};
const Words kEffects = {"damage", "outage", "fever", "panic", "famine", "explosion", "delay", "erosion"};
const Words kParts = {"wheel", "handle", "engine", "keyboard", "roof", "lens", "blade", "screen"};
const Words kWholes = {"car", "door", "plane", "laptop", "house", "camera", "turbine", "phone"};
const Words kContents = {"apples", "letters", "coins", "water", "books", "tools", "seeds", "wine"};
const Words kContainers = {"basket", "envelope", "jar", "bottle", "box", "bag", "crate", "barrel"};
const Words kThings = {"table", "river", "song", "window", "garden", "ticket", "bridge", "lamp"};

const std::vector<RelationTemplate> kRelationTemplates = {
    {"the {A} caused the {B} .", "Cause-Effect(e1,e2)", &kCauses, &kEffects},
    {"the {A} was caused by the {B} .", "Cause-Effect(e2,e1)", &kEffects, &kCauses},
    {"the {A} of the {B} was replaced .", "Component-Whole(e1,e2)", &kParts, &kWholes},
    {"the {A} has a broken {B} .", "Component-Whole(e2,e1)", &kWholes, &kParts},
    {"the {A} were kept in the {B} .", "Content-Container(e1,e2)", &kContents, &kContainers},
    {"the {A} held the {B} .", "Content-Container(e2,e1)", &kContainers, &kContents},
    {"the {A} and the {B} were there .", "Other", &kThings, &kThings},
    {"near the {A} we saw the {B} .", "Other", &kThings, &kContents},
};

}  // namespace

TaggedCorpus synthesize_ner_corpus(std::size_t sentences, std::uint64_t seed) {
  Rng rng(seed, "synthetic-ner");
  std::vector<Sentence> out;
  out.reserve(sentences);
  for (std::size_t n = 0; n < sentences; ++n) {
    Sentence s;
    for (auto word : split_words(kTemplates[rng.index(kTemplates.size())])) {
      if (word.size() > 2 && word.front() == '{' && word.back() == '}') {
        const std::string slot(word.substr(1, word.size() - 2));
        if (slot == "ADJ") {
          push(s, pick(kAdjectives, rng), BioLabel::outside());
        } else if (slot == "VERB") {
          push(s, pick(kVerbs, rng), BioLabel::outside());
        } else {
          push_entity(s, make_entity(slot, rng), slot);
        }
      } else {
        push(s, word, BioLabel::outside());
      }
    }
    out.push_back(std::move(s));
  }
  return TaggedCorpus(std::move(out));
}

RECorpus synthesize_re_corpus(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed, "synthetic-re");
  std::vector<RESample> out;
  out.reserve(samples);
  for (std::size_t n = 0; n < samples; ++n) {
    const auto& t = kRelationTemplates[rng.index(kRelationTemplates.size())];
    RESample sample;
    for (auto word : split_words(t.pattern)) {
      const bool is_a = word == "{A}";
      if (is_a || word == "{B}") {
        const std::size_t start = sample.tokens.size();
        const Words& words = is_a ? *t.a : *t.b;
        // Occasionally a two-token nominal ("old storm").
        if (rng.uniform() < 0.2) sample.tokens.emplace_back(pick(kAdjectives, rng));
        sample.tokens.emplace_back(pick(words, rng));
        (is_a ? sample.e1 : sample.e2) = {start, sample.tokens.size()};
      } else {
        sample.tokens.emplace_back(word);
      }
    }
    sample.relation = std::string(t.relation);
    out.push_back(std::move(sample));
  }
  return RECorpus(std::move(out));
}

SynonymLexicon synthesize_lexicon() {
  SynonymLexicon lexicon;
  lexicon.add("large", {"big", "huge", "sizable"});
  lexicon.add("small", {"little", "tiny"});
  lexicon.add("huge", {"enormous", "large"});
  lexicon.add("quiet", {"calm", "silent"});
  lexicon.add("strong", {"solid", "robust"});
  lexicon.add("weak", {"feeble", "poor"});
  lexicon.add("praised", {"lauded", "applauded"});
  lexicon.add("criticized", {"faulted", "condemned"});
  lexicon.add("launched", {"released", "introduced"});
  lexicon.add("reviewed", {"assessed", "examined"});
  lexicon.add("tested", {"trialed", "checked"});
  lexicon.add("said", {"stated", "remarked"});
  lexicon.add("visited", {"toured"});
  return lexicon;
}

}  // namespace segmix
