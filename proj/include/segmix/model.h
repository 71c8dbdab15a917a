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

#ifndef SEGMIX_MODEL_H_
#define SEGMIX_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "segmix/corpus.h"
#include "segmix/embedding.h"
#include "segmix/errors.h"
#include "segmix/mixer.h"
#include "segmix/rng.h"

namespace segmix {

Vector softmax(const Eigen::Ref<const Vector>& logits);

// -sum_c target_c * log softmax(logits)_c. Targets need not sum to one.
// Throws std::invalid_argument on non-finite logits or a length mismatch.
double soft_cross_entropy(const Eigen::Ref<const Vector>& logits,
                          const Eigen::Ref<const Vector>& target);
// d/dlogits = softmax(logits) * sum(target) - target.
Vector soft_cross_entropy_grad(const Eigen::Ref<const Vector>& logits,
                               const Eigen::Ref<const Vector>& target);

// Linear tagger over a window of 2w+1 embeddings plus a bias feature. Rows
// past either end of the sentence read as zeros.
class TaggerModel {
 public:
  TaggerModel(std::size_t dim, std::size_t window, std::size_t num_labels);

  std::size_t dim() const { return dim_; }
  std::size_t window() const { return window_; }
  std::size_t num_labels() const { return static_cast<std::size_t>(weights_.cols()); }
  std::size_t feature_size() const { return (2 * window_ + 1) * dim_ + 1; }

  const Matrix& weights() const { return weights_; }
  Matrix& weights() { return weights_; }

  Matrix features(const Matrix& embeddings) const;
  Matrix forward(const Matrix& embeddings) const;

 private:
  std::size_t dim_;
  std::size_t window_;
  Matrix weights_;
};

// Linear relation classifier over [mean(e1 rows), mean(e2 rows), 1].
class REModel {
 public:
  REModel(std::size_t dim, std::size_t num_relations);

  std::size_t dim() const { return dim_; }
  std::size_t num_labels() const { return static_cast<std::size_t>(weights_.cols()); }
  std::size_t feature_size() const { return 2 * dim_ + 1; }

  const Matrix& weights() const { return weights_; }
  Matrix& weights() { return weights_; }

  Vector features(const Matrix& embeddings, NominalSpan e1, NominalSpan e2) const;
  Vector forward(const Matrix& embeddings, NominalSpan e1, NominalSpan e2) const;

 private:
  std::size_t dim_;
  Matrix weights_;
};

struct TaggerExample {
  Matrix embeddings;
  Matrix targets;
};

struct REExample {
  Matrix embeddings;
  NominalSpan e1;
  NominalSpan e2;
  Vector target;
};

TaggerExample make_tagger_example(const Sentence& sentence,
                                  const EmbeddingTable& table,
                                  const Vocabulary& label_vocab);
TaggerExample make_tagger_example(const MixedExample& mixed);
REExample make_re_example(const RESample& sample, const EmbeddingTable& table,
                          const Vocabulary& relation_vocab);
REExample make_re_example(const MixedRESample& mixed);

// Loss summed over positions, and its gradient with respect to the weights.
double example_loss(const TaggerModel& model, const TaggerExample& example);
Matrix example_gradient(const TaggerModel& model, const TaggerExample& example);
double example_loss(const REModel& model, const REExample& example);
Matrix example_gradient(const REModel& model, const REExample& example);

struct TrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.1;
  std::size_t batch_size = 16;
  // Epochs without validation improvement before stopping.
  std::size_t patience = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  std::optional<double> validation_score;
};

struct TrainResult {
  std::vector<EpochRecord> trace;
  // 0 when no epoch ran or no validator was given.
  std::size_t best_epoch = 0;
  std::optional<double> best_score;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  explicit TrainingDivergedError(std::size_t epoch)
      : std::runtime_error("training diverged (non-finite loss) in epoch " +
                           std::to_string(epoch)),
        epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

using TaggerValidator = std::function<double(const TaggerModel&)>;
using REValidator = std::function<double(const REModel&)>;

// Mini-batch SGD on the per-position mean soft cross-entropy. With a
// validator, training stops after `patience` epochs without improvement and
// the best-scoring weights are restored.
TrainResult train(TaggerModel& model, std::span<const TaggerExample> data,
                  const TrainConfig& config, const TaggerValidator& validator = {});
TrainResult train(REModel& model, std::span<const REExample> data,
                  const TrainConfig& config, const REValidator& validator = {});

// Max relative error between analytic and central-difference gradients over
// `samples` random weights. Denominators are floored at `floor`.
double gradient_check(const TaggerModel& model, const TaggerExample& example,
                      Rng& rng, std::size_t samples = 32, double step = 1e-4,
                      double floor = 1e-6);
double gradient_check(const REModel& model, const REExample& example, Rng& rng,
                      std::size_t samples = 32, double step = 1e-4,
                      double floor = 1e-6);

void write_loss_trace_csv(const TrainResult& result, std::ostream& out);

// Versioned binary checkpoint: model weights, label vocabulary and the
// embedding table the model was trained against.
struct Checkpoint {
  std::variant<TaggerModel, REModel> model;
  Vocabulary labels;
  EmbeddingTable table;

  bool is_tagger() const { return std::holds_alternative<TaggerModel>(model); }
};

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
Checkpoint load_checkpoint(std::istream& in);
void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace segmix

#endif  // SEGMIX_MODEL_H_
