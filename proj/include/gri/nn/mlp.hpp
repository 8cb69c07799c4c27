#pragma once

#include "gri/common.hpp"

#include <vector>

namespace gri::nn {

enum class Activation { Identity, ReLU, Tanh };

/// Fully connected network. weights[l] is (layer_sizes[l+1] x layer_sizes[l]),
/// one row per output unit; hidden layers share one activation, the output
/// layer has its own.
struct Mlp {
  std::vector<int> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Activation hidden_activation = Activation::ReLU;
  Activation output_activation = Activation::Identity;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }
};

/// Parameter-shaped container used for gradients and Adam moments.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

/// Activations cached by a forward pass; required by backward. as[0] is the
/// input, as[l+1] = act(zs[l]).
struct ForwardCache {
  std::vector<Matrix> zs;
  std::vector<Matrix> as;
  bool valid() const { return !as.empty(); }
};

/// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
Mlp make_mlp(const std::vector<int>& layer_sizes, Activation hidden, Activation output,
             Rng& rng);

Gradients zero_gradients(const Mlp& net);

/// Columns of `input` are samples. Writes pre- and post-activations into
/// `cache` when given.
Matrix forward(const Mlp& net, const Matrix& input, ForwardCache* cache = nullptr);

Vector forward(const Mlp& net, const Vector& input, ForwardCache* cache = nullptr);

/// Backpropagates `output_gradient` (same shape as the forward output)
/// through the cached activations. Gradients are summed over the batch
/// columns. When `input_gradient` is non-null it receives dLoss/dInput,
/// which the actor updates use to differentiate through a frozen critic.
Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& output_gradient,
                   Matrix* input_gradient = nullptr);

/// In-place `target = tau * online + (1 - tau) * target`, per parameter.
void polyak_update(Mlp& target, const Mlp& online, double tau);

int parameter_count(const Mlp& net);

/// Flat views in layer order (weights row-major, then biases), matching the
/// checkpoint layout. Used by the finite-difference tests.
std::vector<double> flatten_parameters(const Mlp& net);
void unflatten_parameters(Mlp& net, const std::vector<double>& flat);
std::vector<double> flatten_gradients(const Mlp& net, const Gradients& g);

}  // namespace gri::nn
