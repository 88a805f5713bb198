#pragma once

// Small fully connected networks with exact reverse-mode gradients.
//
// Parameters live in one flat vector in canonical order: layer by layer,
// each layer's weight matrix (row-major, shape out x in) followed by its bias.
// Optimizer state, gradients and Langevin noise all share this layout.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mixne {

class Rng;

enum class Activation { Identity, Tanh, Relu };

std::string_view to_string(Activation act);
Activation activation_from_string(std::string_view name);

using FlatGrad = Eigen::VectorXd;

/// Elementwise tanh on the vector unit; agrees with std::tanh to a few ulp.
Eigen::ArrayXXd fast_tanh(const Eigen::ArrayXXd& x);
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class MlpParams {
 public:
  MlpParams() = default;
  /// Zero-initialized network. layer_sizes holds input, hidden..., output
  /// widths and needs at least two entries.
  MlpParams(std::vector<int> layer_sizes, Activation hidden, Activation output);

  /// Weights and biases uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static MlpParams random(std::vector<int> layer_sizes, Activation hidden, Activation output,
                          Rng& rng);

  [[nodiscard]] const std::vector<int>& layer_sizes() const { return sizes_; }
  [[nodiscard]] Activation hidden_activation() const { return hidden_; }
  [[nodiscard]] Activation output_activation() const { return output_; }
  [[nodiscard]] std::size_t layer_count() const { return sizes_.size() - 1; }
  [[nodiscard]] int input_size() const { return sizes_.front(); }
  [[nodiscard]] int output_size() const { return sizes_.back(); }
  [[nodiscard]] std::size_t parameter_count() const { return static_cast<std::size_t>(values_.size()); }
  [[nodiscard]] Activation activation_of(std::size_t layer) const {
    return layer + 1 == layer_count() ? output_ : hidden_;
  }

  [[nodiscard]] Eigen::VectorXd& values() { return values_; }
  [[nodiscard]] const Eigen::VectorXd& values() const { return values_; }

  [[nodiscard]] Eigen::Map<const RowMajorMatrix> weight(std::size_t layer) const;
  [[nodiscard]] Eigen::Map<RowMajorMatrix> weight(std::size_t layer);
  [[nodiscard]] Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
  [[nodiscard]] Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);

  /// Offsets of layer weights and biases in the flat vector.
  [[nodiscard]] std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  [[nodiscard]] std::size_t bias_offset(std::size_t layer) const;

  [[nodiscard]] bool same_shape(const MlpParams& other) const {
    return sizes_ == other.sizes_ && hidden_ == other.hidden_ && output_ == other.output_;
  }

  friend bool operator==(const MlpParams& a, const MlpParams& b) {
    return a.same_shape(b) && a.values_ == b.values_;
  }

 private:
  std::vector<int> sizes_;
  Activation hidden_ = Activation::Tanh;
  Activation output_ = Activation::Identity;
  Eigen::VectorXd values_;
  std::vector<std::size_t> offsets_;
};

/// Activations of every layer for a batch; columns are samples.
/// activations[0] is the input, activations.back() the network output.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;
};

/// Throws std::invalid_argument on a length mismatch.
Eigen::VectorXd mlp_forward(const MlpParams& params, std::span<const double> input);

Eigen::MatrixXd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                  ForwardCache* cache = nullptr);

/// Gradient of upstream . output with respect to the parameters.
FlatGrad mlp_backward(const MlpParams& params, std::span<const double> input,
                      std::span<const double> upstream);

struct BatchGradient {
  FlatGrad params;            ///< summed over the batch
  Eigen::MatrixXd inputs;     ///< per-sample gradient with respect to the input
};

/// Backward pass for a cached batch. upstream has one column per sample.
BatchGradient mlp_backward_batch(const MlpParams& params, const ForwardCache& cache,
                                 const Eigen::MatrixXd& upstream);

/// Input gradients only; skips the parameter outer products.
Eigen::MatrixXd mlp_input_gradient_batch(const MlpParams& params, const ForwardCache& cache,
                                         const Eigen::MatrixXd& upstream);

/// Per-sample reference for mlp_backward_batch: one forward/backward per
/// column, summed in column order.
FlatGrad mlp_backward_batch_serial(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                   const Eigen::MatrixXd& upstream);

}  // namespace mixne
