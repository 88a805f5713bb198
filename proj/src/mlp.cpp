#include "mixne/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mixne/rng.hpp"

namespace mixne {

namespace {

void apply_activation(Activation act, Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::Identity: break;
    case Activation::Tanh: z = fast_tanh(z.array()).matrix(); break;
    case Activation::Relu: z = z.array().max(0.0); break;
  }
}

// Derivative expressed through the activation output a = act(z). The ReLU
// derivative at z = 0 is 0.
Eigen::MatrixXd activation_derivative(Activation act, const Eigen::MatrixXd& a) {
  switch (act) {
    case Activation::Identity: return Eigen::MatrixXd::Ones(a.rows(), a.cols());
    case Activation::Tanh: return 1.0 - a.array().square();
    case Activation::Relu: return (a.array() > 0.0).cast<double>();
  }
  return {};
}

}  // namespace

Eigen::ArrayXXd fast_tanh(const Eigen::ArrayXXd& x) {
  // Eigen vectorizes exp but not tanh for doubles. Below |x| = 0.1 the
  // exp form cancels, so an odd Taylor polynomial takes over there.
  const Eigen::ArrayXXd ax = x.abs();
  const Eigen::ArrayXXd big = (1.0 - 2.0 / ((2.0 * ax.min(20.0)).exp() + 1.0)) * x.sign();
  const Eigen::ArrayXXd x2 = x.square();
  const Eigen::ArrayXXd small =
      x * (1.0 + x2 * (-1.0 / 3.0 +
                       x2 * (2.0 / 15.0 +
                             x2 * (-17.0 / 315.0 +
                                   x2 * (62.0 / 2835.0 + x2 * (-1382.0 / 155925.0 + x2 * (21844.0 / 6081075.0)))))));
  return (ax < 0.1).select(small, big);
}

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::Identity: return "identity";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "identity") return Activation::Identity;
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

MlpParams::MlpParams(std::vector<int> layer_sizes, Activation hidden, Activation output)
    : sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw std::invalid_argument("an MLP needs at least two layer sizes");
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] <= 0 || sizes_[l + 1] <= 0) throw std::invalid_argument("layer sizes must be positive");
    offsets_.push_back(offset);
    offset += static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l] + 1);
  }
  values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(offset));
}

MlpParams MlpParams::random(std::vector<int> layer_sizes, Activation hidden, Activation output,
                            Rng& rng) {
  MlpParams p(std::move(layer_sizes), hidden, output);
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.sizes_[l]));
    auto w = p.weight(l);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
    auto b = p.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-bound, bound);
  }
  return p;
}

std::size_t MlpParams::bias_offset(std::size_t layer) const {
  return offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) * static_cast<std::size_t>(sizes_[layer]);
}

Eigen::Map<const RowMajorMatrix> MlpParams::weight(std::size_t layer) const {
  return {values_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<RowMajorMatrix> MlpParams::weight(std::size_t layer) {
  return {values_.data() + offsets_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Eigen::VectorXd> MlpParams::bias(std::size_t layer) const {
  return {values_.data() + bias_offset(layer), sizes_[layer + 1]};
}

Eigen::Map<Eigen::VectorXd> MlpParams::bias(std::size_t layer) {
  return {values_.data() + bias_offset(layer), sizes_[layer + 1]};
}

Eigen::MatrixXd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                  ForwardCache* cache) {
  if (inputs.rows() != params.input_size()) throw std::invalid_argument("input size mismatch");
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(inputs);
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    Eigen::MatrixXd z = params.weight(l) * a;
    z.colwise() += params.bias(l);
    apply_activation(params.activation_of(l), z);
    a = std::move(z);
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

Eigen::VectorXd mlp_forward(const MlpParams& params, std::span<const double> input) {
  if (static_cast<int>(input.size()) != params.input_size()) {
    throw std::invalid_argument("input size mismatch");
  }
  Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), params.input_size());
  return mlp_forward_batch(params, x);
}

namespace {

BatchGradient backward(const MlpParams& params, const ForwardCache& cache, const Eigen::MatrixXd& upstream,
                       bool with_params) {
  const std::size_t layers = params.layer_count();
  if (cache.activations.size() != layers + 1) throw std::invalid_argument("forward cache does not match network");
  if (upstream.rows() != params.output_size() || upstream.cols() != cache.activations.back().cols()) {
    throw std::invalid_argument("upstream shape mismatch");
  }
  BatchGradient out;
  if (with_params) out.params = FlatGrad::Zero(static_cast<Eigen::Index>(params.parameter_count()));
  Eigen::MatrixXd delta =
      upstream.cwiseProduct(activation_derivative(params.output_activation(), cache.activations.back()));
  for (std::size_t l = layers; l-- > 0;) {
    const auto& a_prev = cache.activations[l];
    if (with_params) {
      Eigen::Map<RowMajorMatrix> gw(out.params.data() + params.weight_offset(l),
                                    params.layer_sizes()[l + 1], params.layer_sizes()[l]);
      gw.noalias() = delta * a_prev.transpose();
      Eigen::Map<Eigen::VectorXd>(out.params.data() + params.bias_offset(l), params.layer_sizes()[l + 1]) =
          delta.rowwise().sum();
    }
    Eigen::MatrixXd back = params.weight(l).transpose() * delta;
    if (l > 0) {
      delta = back.cwiseProduct(activation_derivative(params.hidden_activation(), a_prev));
    } else {
      out.inputs = std::move(back);
    }
  }
  return out;
}

}  // namespace

BatchGradient mlp_backward_batch(const MlpParams& params, const ForwardCache& cache,
                                 const Eigen::MatrixXd& upstream) {
  return backward(params, cache, upstream, true);
}

Eigen::MatrixXd mlp_input_gradient_batch(const MlpParams& params, const ForwardCache& cache,
                                         const Eigen::MatrixXd& upstream) {
  return backward(params, cache, upstream, false).inputs;
}

FlatGrad mlp_backward(const MlpParams& params, std::span<const double> input,
                      std::span<const double> upstream) {
  if (static_cast<int>(input.size()) != params.input_size()) throw std::invalid_argument("input size mismatch");
  if (static_cast<int>(upstream.size()) != params.output_size()) throw std::invalid_argument("upstream size mismatch");
  ForwardCache cache;
  Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), params.input_size());
  mlp_forward_batch(params, x, &cache);
  Eigen::MatrixXd u = Eigen::Map<const Eigen::VectorXd>(upstream.data(), params.output_size());
  return mlp_backward_batch(params, cache, u).params;
}

FlatGrad mlp_backward_batch_serial(const MlpParams& params, const Eigen::MatrixXd& inputs,
                                   const Eigen::MatrixXd& upstream) {
  if (inputs.cols() != upstream.cols()) throw std::invalid_argument("batch size mismatch");
  FlatGrad total = FlatGrad::Zero(static_cast<Eigen::Index>(params.parameter_count()));
  for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
    const Eigen::VectorXd x = inputs.col(c);
    const Eigen::VectorXd u = upstream.col(c);
    total += mlp_backward(params, {x.data(), static_cast<std::size_t>(x.size())},
                          {u.data(), static_cast<std::size_t>(u.size())});
  }
  return total;
}

}  // namespace mixne
