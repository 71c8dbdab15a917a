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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "segmix/corpus.h"
#include "segmix/embedding.h"
#include "segmix/errors.h"
#include "segmix/eval.h"
#include "segmix/experiment.h"
#include "segmix/mixer.h"
#include "segmix/rng.h"
#include "segmix/synthetic.h"

namespace py = pybind11;
using namespace segmix;

namespace {

std::vector<std::vector<BioLabel>> to_labels(const std::vector<std::vector<std::string>>& tags) {
  std::vector<std::vector<BioLabel>> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(parse_labels(t));
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict per_type;
  for (const auto& [type, s] : r.per_type) {
    per_type[py::str(type)] = py::dict(py::arg("precision") = s.precision, py::arg("recall") = s.recall,
                                       py::arg("f1") = s.f1, py::arg("tp") = s.tp, py::arg("fp") = s.fp,
                                       py::arg("fn") = s.fn);
  }
  return py::dict(py::arg("precision") = r.precision, py::arg("recall") = r.recall, py::arg("f1") = r.f1,
                  py::arg("tp") = r.tp, py::arg("fp") = r.fp, py::arg("fn") = r.fn,
                  py::arg("per_type") = per_type);
}

py::list sentences_list(const TaggedCorpus& c) {
  py::list out;
  for (const auto& s : c.sentences()) {
    std::vector<std::string> tags;
    for (const auto& l : s.labels) tags.push_back(l.str());
    out.append(py::make_tuple(s.tokens, tags));
  }
  return out;
}

TaggedCorpus corpus_from(const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& items) {
  std::vector<Sentence> sentences;
  for (const auto& [tokens, tags] : items) sentences.push_back({tokens, parse_labels(tags)});
  return TaggedCorpus(std::move(sentences));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the segmix C++ library";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("label"), py::arg("index") = 0);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform)
      .def("normal", &Rng::normal)
      .def("beta", &Rng::beta, py::arg("a"), py::arg("b"))
      .def("index", &Rng::index, py::arg("n"));

  m.def("sample_lambda", &sample_lambda, py::arg("alpha"), py::arg("rng"));
  m.def("augmentation_budget", &augmentation_budget, py::arg("n"), py::arg("rate"));
  m.def("mix", [](const Matrix& a, const Matrix& b, double lam) {
    const auto [pa, pb] = pad_to_longer(a, b);
    return mix(pa, pb, lam);
  }, py::arg("a"), py::arg("b"), py::arg("lam"),
        "Row-wise lam * a + (1 - lam) * b after zero-padding to the longer input.");
  m.def("pad_to_longer", &pad_to_longer, py::arg("a"), py::arg("b"));

  py::class_<TaggedCorpus>(m, "TaggedCorpus")
      .def(py::init(&corpus_from), py::arg("sentences"),
           "Build from a list of (tokens, tags) pairs.")
      .def("__len__", &TaggedCorpus::size)
      .def_property_readonly("sentences", &sentences_list)
      .def_property_readonly("labels", [](const TaggedCorpus& c) { return c.label_vocab().items(); })
      .def_property_readonly("tokens", [](const TaggedCorpus& c) { return c.token_vocab().items(); });

  m.def("read_conll", [](const std::string& path, bool repair_bio) {
    return read_conll_file(path, {.repair_bio = repair_bio});
  }, py::arg("path"), py::arg("repair_bio") = false);
  m.def("synthesize_ner_corpus", &synthesize_ner_corpus, py::arg("sentences"), py::arg("seed"));

  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def_static("random", [](const TaggedCorpus& corpus, std::size_t dim, std::uint64_t seed) {
        return EmbeddingTable::random(corpus.token_vocab(), dim, seed);
      }, py::arg("corpus"), py::arg("dim"), py::arg("seed"))
      .def_property_readonly("dim", &EmbeddingTable::dim)
      .def("__len__", &EmbeddingTable::vocab_size)
      .def("embed", [](const EmbeddingTable& t, const std::vector<std::string>& tokens) {
        return t.embed(tokens);
      }, py::arg("tokens"))
      .def("nearest", [](const EmbeddingTable& t, const Vector& v) { return nearest_token(t, v); },
           py::arg("vector"));

  py::class_<MixConfig>(m, "MixConfig")
      .def(py::init([](double alpha, double rate, const std::string& variants, const std::string& weights,
                       std::optional<double> fixed_lambda, bool normalize_tail_labels, bool same_type_only,
                       std::uint64_t seed, std::size_t threads) {
             MixConfig c;
             c.alpha = alpha;
             c.rate = rate;
             c.variants = parse_variants(variants, weights);
             c.fixed_lambda = fixed_lambda;
             c.normalize_tail_labels = normalize_tail_labels;
             c.same_type_only = same_type_only;
             c.seed = seed;
             c.threads = threads;
             c.validate();
             return c;
           }),
           py::arg("alpha") = 8.0, py::arg("rate") = 0.2, py::arg("variants") = "mention",
           py::arg("weights") = "", py::arg("fixed_lambda") = py::none(),
           py::arg("normalize_tail_labels") = false, py::arg("same_type_only") = false,
           py::arg("seed") = 0, py::arg("threads") = 1)
      .def_readonly("alpha", &MixConfig::alpha)
      .def_readonly("rate", &MixConfig::rate)
      .def_readonly("seed", &MixConfig::seed);

  m.def("generate", [](const TaggedCorpus& corpus, const EmbeddingTable& table, const MixConfig& config) {
    const NerPools pools(corpus);
    const NerGeneration gen = segmix_generate(corpus, pools.sources(), table, config);
    py::list out;
    for (const auto& ex : gen.examples) {
      const auto& p = ex.provenance;
      out.append(py::dict(py::arg("embeddings") = ex.embeddings, py::arg("soft_labels") = ex.soft_labels,
                          py::arg("source_index") = p.source_index,
                          py::arg("variant") = std::string(to_string(p.variant)),
                          py::arg("lam") = p.lambda));
    }
    return out;
  }, py::arg("corpus"), py::arg("table"), py::arg("config"),
     "Mixed examples as dicts of numpy arrays; label columns follow corpus.labels.");

  m.def("entity_f1", [](const TaggedCorpus& gold, const std::vector<std::vector<std::string>>& pred) {
    return report_dict(entity_f1(gold, to_labels(pred)));
  }, py::arg("gold"), py::arg("predicted"));
  m.def("span_only_f1", [](const TaggedCorpus& gold, const std::vector<std::vector<std::string>>& pred) {
    return report_dict(span_only_f1(gold, to_labels(pred)));
  }, py::arg("gold"), py::arg("predicted"));
}
