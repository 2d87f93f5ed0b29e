// SPDX-License-Identifier: Apache-2.0
//
// Graph classifier: two graph-convolution layers, Top-K pooling, mean
// readout and a one-hidden-layer MLP, trained with Adam on cross entropy.
// Gradients are derived by hand; everything runs in double precision on one
// thread so a seed fixes every bit of the result.
//
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bacc/dataset.hpp"
#include "bacc/encode.hpp"

namespace bacc {

struct GnnConfig {
  size_t hidden = 64;
  double lr = 1e-3;
  double weight_decay = 1e-5;
  size_t batch = 16;
  size_t epochs = 100;
  bool pooling = true;
  double pool_ratio = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;
  /// Evaluate every N epochs; 0 evaluates after the last epoch only. The last
  /// epoch is always evaluated.
  size_t eval_every = 1;
};

/// Parameter tensors in a fixed order; vectors are stored as 1 x n rows.
enum ParamIndex { kW1, kB1, kW2, kB2, kScore, kM1, kC1, kM2, kC2, kNumParams };
extern const std::array<const char *, kNumParams> kParamNames;

using Params = std::array<Eigen::MatrixXd, kNumParams>;

struct Model {
  GnnConfig config;
  EncodeOptions encoding; // how graphs for this model must be encoded
  size_t num_features = kNumFeatures;
  size_t num_classes = 0;
  Params params;
};

/// Seeded uniform init in +-sqrt(6 / (fan_in + fan_out)); biases start at 0.
Model init_model(size_t num_features, size_t num_classes, const GnnConfig &config,
                 const EncodeOptions &encoding = {});

struct ForwardResult {
  Eigen::MatrixXd node_embeddings; // N x H after the second layer
  std::vector<uint32_t> kept;      // pooled node indices, by decreasing score
  Eigen::RowVectorXd readout;      // 1 x H graph embedding
  Eigen::RowVectorXd logits;       // 1 x K
};

/// Throws DimensionMismatch when the feature width differs from the model's.
ForwardResult gcn_forward(const EncodedGraph &g, const Model &model);

/// Softmax of a logit row, computed stably.
Eigen::RowVectorXd softmax(const Eigen::RowVectorXd &logits);

struct Sample {
  const EncodedGraph *graph = nullptr;
  size_t label = 0;
};

/// Mean cross entropy plus weight_decay/2 * |theta|^2, with the gradient of
/// every parameter. Throws InvalidArgument for an empty batch or a label out
/// of range.
double loss_and_grad(const std::vector<Sample> &batch, const Model &model, Params *grad);

/// ReLU and Top-K decisions of one forward pass, used to detect when a finite
/// difference step crosses a kink.
std::vector<uint8_t> activation_pattern(const EncodedGraph &g, const Model &model);

struct EvalResult {
  double accuracy = 0;
  std::vector<double> per_class; // NaN for classes absent from the records
  std::vector<size_t> predictions;
  Eigen::MatrixXd embeddings; // one readout row per record
};

/// Throws EmptyEval for an empty record list.
EvalResult evaluate(const Model &model, const std::vector<Sample> &records);

struct TrainSample {
  EncodedGraph graph;
  size_t label = 0;
  GroupKind kind = GroupKind::LE;
  Split split = Split::Train;
};

struct EpochStats {
  size_t epoch = 0; // 1-based
  double loss = 0;
  double train_accuracy = 0;
  /// Accuracy per group kind (LE, Neg, Perm, NP) on evaluation epochs. A kind
  /// with eval records is scored on those; a kind that only has train records
  /// is scored on its train records.
  std::optional<std::array<double, kNumGroupKinds>> group_accuracy;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  GnnConfig config;
  /// Kinds whose accuracy comes from train records (no eval records exist).
  std::array<bool, kNumGroupKinds> scored_on_train{};

  /// Evaluated epoch with the highest mean group accuracy, if any.
  std::optional<size_t> best_epoch() const;
};

struct TrainResult {
  Model model;
  TrainHistory history;
};

/// Encodes every manifest record with its label, kind and split.
std::vector<TrainSample> make_samples(const DatasetManifest &m, const EncodeOptions &encoding);

/// Throws EmptySplit when a class has no train sample.
TrainResult train(const std::vector<TrainSample> &samples, size_t num_classes,
                  const GnnConfig &config, const EncodeOptions &encoding = {});

/// Columns: epoch, loss, train_acc, acc_LE, acc_Neg, acc_Perm, acc_NP. Group
/// columns are empty on epochs without evaluation.
std::string history_csv(const TrainHistory &h);

/// Columns: record, label, prediction, e0..e{H-1}.
std::string embeddings_csv(const std::vector<size_t> &record_ids, const std::vector<size_t> &labels,
                           const EvalResult &r);

std::string model_to_json(const Model &m);
/// Throws SchemaMismatch or ParseFailure.
Model model_from_json(std::string_view text);
void save_model(const Model &m, const std::string &path);
Model load_model(const std::string &path);

} // namespace bacc
