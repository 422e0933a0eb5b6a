#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glance/features.hpp"
#include "glance/phantom.hpp"

namespace glance {

struct Sample {
  std::vector<double> x;
  std::size_t label = 0;
};

auto to_samples(std::span<const LabeledItem> items, std::span<const Field> fields) -> std::vector<Sample>;

/// One hidden tanh layer feeding a softmax readout. Inputs are standardised
/// with the training-split mean and scale before the first layer.
struct NetworkModel {
  static constexpr int kFormatVersion = 1;

  std::size_t input_dim = 0;
  std::size_t hidden = 10;
  std::size_t classes = 0;
  std::vector<std::string> fields;
  std::vector<std::string> class_names;
  std::vector<double> mean;
  std::vector<double> scale;
  /// [W1 (hidden x input) | b1 | W2 (classes x hidden) | b2], row-major.
  std::vector<double> params;
  std::uint64_t seed = 0;

  [[nodiscard]] auto param_count() const -> std::size_t
  {
    return hidden * input_dim + hidden + classes * hidden + classes;
  }
  [[nodiscard]] auto logits(std::span<const double> x) const -> std::vector<double>;
  [[nodiscard]] auto probabilities(std::span<const double> x) const -> std::vector<double>;
  [[nodiscard]] auto predict(std::span<const double> x) const -> std::size_t;
};

auto softmax(std::span<const double> logits) -> std::vector<double>;
/// Index of the largest logit, lowest index on ties.
auto argmax(std::span<const double> values) -> std::size_t;

/// Mean cross-entropy of the model over the samples. When `gradient` is
/// non-null it receives d(loss)/d(params).
auto cross_entropy(const NetworkModel &model, std::span<const Sample> samples, std::vector<double> *gradient = nullptr)
    -> double;

struct TrainConfig {
  std::size_t hidden = 10;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::size_t max_epochs = 2000;
  std::size_t patience = 20;
};

/// Full-batch gradient descent with momentum on mean cross-entropy. With a
/// non-empty validation set, training stops once validation loss has not
/// improved for `patience` epochs and the best-validation weights are kept.
/// Throws SingleClassTrainSet when fewer than two classes occur in `train`.
auto train(std::span<const Sample> train, std::span<const Sample> validation, std::vector<std::string> fields,
           std::vector<std::string> class_names, std::uint64_t seed, const TrainConfig &cfg = {}) -> NetworkModel;

auto train(std::span<const LabeledItem> train, std::span<const LabeledItem> validation,
           std::span<const Field> fields, std::vector<std::string> class_names, std::uint64_t seed,
           const TrainConfig &cfg = {}) -> NetworkModel;

class ConfusionMatrix {
public:
  explicit ConfusionMatrix(std::size_t classes) : classes_(classes), counts_(classes * classes, 0) {}

  void add(std::size_t truth, std::size_t predicted) { ++counts_[truth * classes_ + predicted]; }

  [[nodiscard]] auto classes() const noexcept -> std::size_t { return classes_; }
  /// Rows are true classes, columns predictions.
  [[nodiscard]] auto at(std::size_t truth, std::size_t predicted) const -> std::size_t
  {
    return counts_[truth * classes_ + predicted];
  }
  [[nodiscard]] auto row_sum(std::size_t truth) const -> std::size_t;
  [[nodiscard]] auto total() const -> std::size_t;
  [[nodiscard]] auto trace() const -> std::size_t;
  /// trace / total; 0 for an empty matrix.
  [[nodiscard]] auto accuracy() const -> double;

private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

/// Throws DimensionMismatch when a sample's width differs from the model's
/// input_dim or its label is outside the model's classes.
auto evaluate(const NetworkModel &model, std::span<const Sample> samples) -> ConfusionMatrix;
auto evaluate(const NetworkModel &model, std::span<const LabeledItem> items) -> ConfusionMatrix;

struct DatasetSplit {
  std::vector<LabeledItem> train;
  std::vector<LabeledItem> validation;
  std::vector<LabeledItem> test;
};

/// 55 / 10 / 35 percent, largest-remainder rounding (ties favour the
/// earlier part).
auto split_sizes(std::size_t n) -> std::array<std::size_t, 3>;
/// Random partition; throws DatasetTooSmall below 20 items.
auto split(const LabeledDataset &dataset, std::uint64_t seed) -> DatasetSplit;

struct TrialRow {
  double training = 0.0;
  double test = 0.0;
  double all = 0.0;
};

struct TrialSummary {
  std::vector<TrialRow> trials;
  TrialRow mean;
  TrialRow stddev; ///< sample standard deviation (n - 1)
};

auto summarize(std::vector<TrialRow> trials) -> TrialSummary;

/// Trial i splits and trains with seed base_seed + i. Trials may run
/// concurrently; the summary does not depend on scheduling.
auto run_trials(const LabeledDataset &dataset, std::span<const Field> fields, std::size_t n_trials,
                std::uint64_t base_seed, const TrainConfig &cfg = {}) -> TrialSummary;

/// Accuracies as percentages with two decimals; last rows "Average" and
/// "std. dev.".
auto trials_csv(const TrialSummary &summary) -> std::string;
auto confusion_csv(const ConfusionMatrix &cm, std::span<const std::string> class_names) -> std::string;

auto model_to_json(const NetworkModel &model) -> std::string;
auto model_from_json(std::string_view text) -> NetworkModel;

} // namespace glance
