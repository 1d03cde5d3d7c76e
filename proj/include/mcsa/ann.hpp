#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "mcsa/features.hpp"
#include "mcsa/motor.hpp"

namespace mcsa {

enum class Activation { sigmoid, tanh };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Input -> hidden (sigmoid or tanh) -> softmax output.
///
/// w1 is hidden x input, w2 is classes x hidden. `classes[i]` names
/// output i.
struct MlpModel {
  Activation activation = Activation::sigmoid;
  std::vector<FaultLabel> classes;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  std::size_t input_size() const { return static_cast<std::size_t>(w1.cols()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(w1.rows()); }
  std::size_t output_size() const { return static_cast<std::size_t>(w2.rows()); }

  /// Throws ConfigError on inconsistent shapes or non-finite parameters.
  void validate() const;
};

/// {healthy, inter_turn_minor, inter_turn_severe, broken_bar} truncated to n.
std::vector<FaultLabel> default_classes(std::size_t n);

/// Weights ~ N(0, 1) / sqrt(fan_in), zero biases. layer_sizes must be
/// {input, hidden, output}, all >= 1. An empty `classes` picks
/// default_classes(output).
MlpModel init_model(std::span<const std::size_t> layer_sizes, Activation activation,
                    std::uint64_t seed, std::vector<FaultLabel> classes = {});

/// Class probabilities; throws DomainError on a width mismatch.
std::vector<double> forward(const MlpModel& m, std::span<const double> x);

struct Gradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

/// Cross-entropy -log p[y] of one sample; fills `grad` when given.
double loss_and_gradient(const MlpModel& m, std::span<const double> x, std::size_t y,
                         Gradients* grad = nullptr);

/// max over every parameter of |g_analytic - g_numeric| /
/// max(|g_analytic|, |g_numeric|, 1e-12), numeric by central differences.
/// epsilon must lie in (0, 1e-2].
double gradient_check(const MlpModel& m, std::span<const double> x, std::size_t y, double epsilon);

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 500;
  std::size_t batch_size = 16;
  std::uint64_t seed = 7;
  double l2 = 0.0;
};

struct TrainResult {
  MlpModel model;
  /// Objective (mean cross-entropy + l2/2 |W|^2) after each epoch.
  std::vector<double> loss_history;
};

/// Mini-batch gradient descent on shuffled batches. Needs labelled vectors
/// covering at least two classes of the model (TrainingError otherwise);
/// a non-finite loss throws DivergenceError naming the 1-based epoch.
TrainResult train(const MlpModel& initial, const std::vector<FeatureVector>& data,
                  const TrainConfig& cfg);

/// Mean objective over a labelled dataset (same definition as the history).
double dataset_loss(const MlpModel& m, const std::vector<FeatureVector>& data, double l2 = 0.0);

struct Classification {
  FaultLabel label = FaultLabel::healthy;
  double confidence = 0.0;
  /// confidence fell below the reject threshold.
  bool uncertain = false;
};

Classification classify(const MlpModel& m, std::span<const double> x, double reject_threshold = 0.6);

/// Fraction of labelled vectors whose argmax matches the label.
double accuracy(const MlpModel& m, const std::vector<FeatureVector>& data);

// "MCSA-MLP v1" text format, parameters with 17 significant digits.
void save_model(std::ostream& out, const MlpModel& m);
MlpModel load_model(std::istream& in);

}  // namespace mcsa
