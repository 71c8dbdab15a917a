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

#include "segmix/model.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "segmix/binary_io.h"

namespace segmix {
namespace {

constexpr char kCheckpointMagic[9] = "SGMXCKP1";
constexpr std::uint32_t kCheckpointVersion = 1;

Vector mean_rows(const Matrix& m, NominalSpan span) {
  if (span.end > static_cast<std::size_t>(m.rows()) || span.start >= span.end) {
    throw std::invalid_argument("nominal span outside embedding rows");
  }
  return m.middleRows(static_cast<Eigen::Index>(span.start),
                      static_cast<Eigen::Index>(span.size()))
      .colwise()
      .mean()
      .transpose();
}

void check_dim(std::size_t expected, const Matrix& embeddings) {
  if (static_cast<std::size_t>(embeddings.cols()) != expected) {
    throw std::invalid_argument("embedding dim " + std::to_string(embeddings.cols()) +
                                " does not match model dim " + std::to_string(expected));
  }
}

// Shared SGD loop. `batch_step` accumulates gradient and loss of one example
// into the given buffers and returns the number of loss terms it added.
template <typename Model, typename Example, typename Validator>
TrainResult run_sgd(Model& model, std::span<const Example> data,
                    const TrainConfig& config, const Validator& validator,
                    const std::function<std::size_t(const Model&, std::size_t,
                                                    Matrix&, double&)>& batch_step) {
  config.validate();
  TrainResult result;
  if (config.epochs == 0) return result;
  if (data.empty()) throw std::invalid_argument("cannot train on an empty dataset");

  std::vector<std::size_t> order(data.size());
  Matrix best = model.weights();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(config.seed, "epoch", epoch);
    shuffle(order.begin(), order.end(), rng);

    double epoch_loss = 0.0;
    std::size_t epoch_terms = 0;
    Matrix grad(model.weights().rows(), model.weights().cols());
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      grad.setZero();
      double batch_loss = 0.0;
      std::size_t terms = 0;
      const std::size_t stop = std::min(order.size(), b + config.batch_size);
      for (std::size_t k = b; k < stop; ++k) {
        terms += batch_step(model, order[k], grad, batch_loss);
      }
      if (!std::isfinite(batch_loss)) throw TrainingDivergedError(epoch);
      if (terms == 0) continue;
      model.weights() -= (config.learning_rate / static_cast<double>(terms)) * grad;
      if (!model.weights().allFinite()) throw TrainingDivergedError(epoch);
      epoch_loss += batch_loss;
      epoch_terms += terms;
    }
    const double mean_loss =
        epoch_terms ? epoch_loss / static_cast<double>(epoch_terms) : 0.0;
    if (!std::isfinite(mean_loss) || !model.weights().allFinite()) {
      throw TrainingDivergedError(epoch);
    }

    EpochRecord record{epoch, mean_loss, std::nullopt};
    if (validator) {
      const double score = validator(model);
      record.validation_score = score;
      if (!result.best_score || score > *result.best_score) {
        result.best_score = score;
        result.best_epoch = epoch;
        best = model.weights();
        since_best = 0;
      } else {
        ++since_best;
      }
    }
    result.trace.push_back(record);
    if (validator && since_best >= config.patience) break;
  }
  if (validator) model.weights() = best;
  return result;
}

template <typename Model, typename Example>
double check_gradient(const Model& model, const Example& example, Rng& rng,
                      std::size_t samples, double step, double floor) {
  const Matrix analytic = example_gradient(model, example);
  Model probe = model;
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto r = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(model.weights().rows())));
    const auto c = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(model.weights().cols())));
    const double original = probe.weights()(r, c);
    probe.weights()(r, c) = original + step;
    const double up = example_loss(probe, example);
    probe.weights()(r, c) = original - step;
    const double down = example_loss(probe, example);
    probe.weights()(r, c) = original;
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic(r, c);
    const double denom = std::max({std::abs(a), std::abs(numeric), floor});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

}  // namespace

Vector softmax(const Eigen::Ref<const Vector>& logits) {
  const double peak = logits.maxCoeff();
  Vector e = (logits.array() - peak).exp().matrix();
  return e / e.sum();
}

double soft_cross_entropy(const Eigen::Ref<const Vector>& logits,
                          const Eigen::Ref<const Vector>& target) {
  if (logits.size() != target.size()) {
    throw std::invalid_argument("logits and target lengths differ");
  }
  if (!logits.allFinite()) throw std::invalid_argument("non-finite logits");
  const double peak = logits.maxCoeff();
  const double log_z = peak + std::log((logits.array() - peak).exp().sum());
  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.size(); ++c) {
    if (target(c) != 0.0) loss -= target(c) * (logits(c) - log_z);
  }
  return loss;
}

Vector soft_cross_entropy_grad(const Eigen::Ref<const Vector>& logits,
                               const Eigen::Ref<const Vector>& target) {
  if (logits.size() != target.size()) {
    throw std::invalid_argument("logits and target lengths differ");
  }
  return softmax(logits) * target.sum() - target;
}

TaggerModel::TaggerModel(std::size_t dim, std::size_t window, std::size_t num_labels)
    : dim_(dim), window_(window) {
  if (dim == 0 || num_labels == 0) {
    throw std::invalid_argument("tagger needs positive dim and label count");
  }
  weights_ = Matrix::Zero(static_cast<Eigen::Index>(feature_size()),
                          static_cast<Eigen::Index>(num_labels));
}

Matrix TaggerModel::features(const Matrix& embeddings) const {
  check_dim(dim_, embeddings);
  const Eigen::Index n = embeddings.rows();
  const auto d = static_cast<Eigen::Index>(dim_);
  const auto w = static_cast<Eigen::Index>(window_);
  Matrix x = Matrix::Zero(n, static_cast<Eigen::Index>(feature_size()));
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index k = -w; k <= w; ++k) {
      const Eigen::Index src = t + k;
      if (src < 0 || src >= n) continue;
      x.block(t, (k + w) * d, 1, d) = embeddings.row(src);
    }
    x(t, x.cols() - 1) = 1.0;
  }
  return x;
}

Matrix TaggerModel::forward(const Matrix& embeddings) const {
  return features(embeddings) * weights_;
}

REModel::REModel(std::size_t dim, std::size_t num_relations) : dim_(dim) {
  if (dim == 0 || num_relations == 0) {
    throw std::invalid_argument("RE model needs positive dim and relation count");
  }
  weights_ = Matrix::Zero(static_cast<Eigen::Index>(feature_size()),
                          static_cast<Eigen::Index>(num_relations));
}

Vector REModel::features(const Matrix& embeddings, NominalSpan e1, NominalSpan e2) const {
  check_dim(dim_, embeddings);
  Vector x(static_cast<Eigen::Index>(feature_size()));
  const auto d = static_cast<Eigen::Index>(dim_);
  x.segment(0, d) = mean_rows(embeddings, e1);
  x.segment(d, d) = mean_rows(embeddings, e2);
  x(2 * d) = 1.0;
  return x;
}

Vector REModel::forward(const Matrix& embeddings, NominalSpan e1, NominalSpan e2) const {
  return weights_.transpose() * features(embeddings, e1, e2);
}

TaggerExample make_tagger_example(const Sentence& sentence,
                                  const EmbeddingTable& table,
                                  const Vocabulary& label_vocab) {
  return {table.embed(sentence.tokens), one_hot(sentence.labels, label_vocab)};
}

TaggerExample make_tagger_example(const MixedExample& mixed) {
  return {mixed.embeddings, mixed.soft_labels};
}

REExample make_re_example(const RESample& sample, const EmbeddingTable& table,
                          const Vocabulary& relation_vocab) {
  return {table.embed(sample.tokens), sample.e1, sample.e2,
          one_hot(sample.relation, relation_vocab)};
}

REExample make_re_example(const MixedRESample& mixed) {
  return {mixed.embeddings, mixed.e1, mixed.e2, mixed.relation_label};
}

double example_loss(const TaggerModel& model, const TaggerExample& example) {
  const Matrix logits = model.forward(example.embeddings);
  double loss = 0.0;
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    loss += soft_cross_entropy(logits.row(t).transpose(), example.targets.row(t).transpose());
  }
  return loss;
}

Matrix example_gradient(const TaggerModel& model, const TaggerExample& example) {
  const Matrix x = model.features(example.embeddings);
  const Matrix logits = x * model.weights();
  Matrix g(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    g.row(t) = soft_cross_entropy_grad(logits.row(t).transpose(),
                                       example.targets.row(t).transpose())
                   .transpose();
  }
  return x.transpose() * g;
}

double example_loss(const REModel& model, const REExample& example) {
  return soft_cross_entropy(model.forward(example.embeddings, example.e1, example.e2),
                            example.target);
}

Matrix example_gradient(const REModel& model, const REExample& example) {
  const Vector x = model.features(example.embeddings, example.e1, example.e2);
  const Vector logits = model.weights().transpose() * x;
  return x * soft_cross_entropy_grad(logits, example.target).transpose();
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (patience == 0) throw std::invalid_argument("patience must be positive");
}

TrainResult train(TaggerModel& model, std::span<const TaggerExample> data,
                  const TrainConfig& config, const TaggerValidator& validator) {
  std::vector<Matrix> features;
  if (config.epochs > 0) {
    features.reserve(data.size());
    for (const auto& ex : data) {
      if (ex.targets.rows() != ex.embeddings.rows() ||
          static_cast<std::size_t>(ex.targets.cols()) != model.num_labels()) {
        throw std::invalid_argument("training example shape mismatch");
      }
      features.push_back(model.features(ex.embeddings));
    }
  }
  return run_sgd<TaggerModel, TaggerExample>(
      model, data, config, validator,
      [&](const TaggerModel& m, std::size_t i, Matrix& grad, double& loss) {
        const Matrix& x = features[i];
        const Matrix logits = x * m.weights();
        if (!logits.allFinite()) {
          loss = std::numeric_limits<double>::infinity();
          return std::size_t{0};
        }
        Matrix g(logits.rows(), logits.cols());
        for (Eigen::Index t = 0; t < logits.rows(); ++t) {
          const auto target = data[i].targets.row(t).transpose();
          loss += soft_cross_entropy(logits.row(t).transpose(), target);
          g.row(t) = soft_cross_entropy_grad(logits.row(t).transpose(), target).transpose();
        }
        grad.noalias() += x.transpose() * g;
        return static_cast<std::size_t>(logits.rows());
      });
}

TrainResult train(REModel& model, std::span<const REExample> data,
                  const TrainConfig& config, const REValidator& validator) {
  std::vector<Vector> features;
  if (config.epochs > 0) {
    features.reserve(data.size());
    for (const auto& ex : data) {
      if (static_cast<std::size_t>(ex.target.size()) != model.num_labels()) {
        throw std::invalid_argument("training example shape mismatch");
      }
      features.push_back(model.features(ex.embeddings, ex.e1, ex.e2));
    }
  }
  return run_sgd<REModel, REExample>(
      model, data, config, validator,
      [&](const REModel& m, std::size_t i, Matrix& grad, double& loss) {
        const Vector& x = features[i];
        const Vector logits = m.weights().transpose() * x;
        if (!logits.allFinite()) {
          loss = std::numeric_limits<double>::infinity();
          return std::size_t{0};
        }
        loss += soft_cross_entropy(logits, data[i].target);
        grad.noalias() += x * soft_cross_entropy_grad(logits, data[i].target).transpose();
        return std::size_t{1};
      });
}

double gradient_check(const TaggerModel& model, const TaggerExample& example,
                      Rng& rng, std::size_t samples, double step, double floor) {
  return check_gradient(model, example, rng, samples, step, floor);
}

double gradient_check(const REModel& model, const REExample& example, Rng& rng,
                      std::size_t samples, double step, double floor) {
  return check_gradient(model, example, rng, samples, step, floor);
}

void write_loss_trace_csv(const TrainResult& result, std::ostream& out) {
  out << "epoch,train_loss,validation_score\n";
  char buf[64];
  for (const auto& r : result.trace) {
    std::snprintf(buf, sizeof buf, "%.9g", r.train_loss);
    out << r.epoch << ',' << buf << ',';
    if (r.validation_score) {
      std::snprintf(buf, sizeof buf, "%.9g", *r.validation_score);
      out << buf;
    }
    out << '\n';
  }
}

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out) {
  out.write(kCheckpointMagic, 8);
  binary::write_u32(out, kCheckpointVersion);
  const Matrix* weights = nullptr;
  if (const auto* tagger = std::get_if<TaggerModel>(&checkpoint.model)) {
    binary::write_u32(out, 0);
    binary::write_u64(out, tagger->dim());
    binary::write_u64(out, tagger->window());
    weights = &tagger->weights();
  } else {
    const auto& re = std::get<REModel>(checkpoint.model);
    binary::write_u32(out, 1);
    binary::write_u64(out, re.dim());
    binary::write_u64(out, 0);
    weights = &re.weights();
  }
  binary::write_u64(out, static_cast<std::uint64_t>(weights->rows()));
  binary::write_u64(out, static_cast<std::uint64_t>(weights->cols()));
  binary::write_u64(out, checkpoint.labels.size());
  for (const auto& label : checkpoint.labels) binary::write_string(out, label);
  for (Eigen::Index r = 0; r < weights->rows(); ++r) {
    for (Eigen::Index c = 0; c < weights->cols(); ++c) {
      binary::write_f32(out, static_cast<float>((*weights)(r, c)));
    }
  }
  checkpoint.table.save(out);
  if (!out) throw std::runtime_error("failed writing checkpoint");
}

Checkpoint load_checkpoint(std::istream& in) {
  binary::expect_magic(in, kCheckpointMagic);
  if (binary::read_u32(in) != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version");
  }
  const std::uint32_t kind = binary::read_u32(in);
  const auto dim = binary::read_u64(in);
  const auto window = binary::read_u64(in);
  const auto rows = binary::read_u64(in);
  const auto cols = binary::read_u64(in);
  const auto num_labels = binary::read_u64(in);
  if (kind > 1 || dim == 0 || dim > (1u << 16) || window > 64 ||
      num_labels != cols || num_labels == 0 || num_labels > (1u << 20)) {
    throw DataError("implausible checkpoint header");
  }
  Vocabulary labels;
  for (std::uint64_t i = 0; i < num_labels; ++i) labels.add(binary::read_string(in));
  Matrix weights(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < weights.cols(); ++c) weights(r, c) = binary::read_f32(in);
  }
  EmbeddingTable table = EmbeddingTable::load(in);
  if (table.dim() != dim) throw DataError("checkpoint table dim mismatch");

  auto install = [&](auto model) -> Checkpoint {
    if (static_cast<std::uint64_t>(model.weights().rows()) != rows) {
      throw DataError("checkpoint weight shape mismatch");
    }
    model.weights() = weights;
    return Checkpoint{std::move(model), std::move(labels), std::move(table)};
  };
  if (kind == 0) return install(TaggerModel(dim, window, num_labels));
  return install(REModel(dim, num_labels));
}

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  save_checkpoint(checkpoint, out);
}

Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return load_checkpoint(in);
}

}  // namespace segmix
