#include "gri/nn/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace gri::nn {
namespace {

Matrix apply_activation(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::Identity:
      return z;
    case Activation::ReLU:
      return z.cwiseMax(0.0);
    case Activation::Tanh:
      return z.array().tanh().matrix();
  }
  throw ValidationError("unknown activation");
}

// Derivative expressed through z (and a = act(z) for tanh).
Matrix activation_derivative(Activation act, const Matrix& z, const Matrix& a) {
  switch (act) {
    case Activation::Identity:
      return Matrix::Ones(z.rows(), z.cols());
    case Activation::ReLU:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::Tanh:
      return (1.0 - a.array().square()).matrix();
  }
  throw ValidationError("unknown activation");
}

}  // namespace

Mlp make_mlp(const std::vector<int>& layer_sizes, Activation hidden, Activation output,
             Rng& rng) {
  if (layer_sizes.size() < 2) throw ValidationError("MLP needs at least input and output layers");
  for (int s : layer_sizes)
    if (s <= 0) throw ValidationError("MLP layer sizes must be positive");

  Mlp net;
  net.layer_sizes = layer_sizes;
  net.hidden_activation = hidden;
  net.output_activation = output;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    int fan_in = layer_sizes[l];
    int fan_out = layer_sizes[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Matrix w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vector::Zero(fan_out));
  }
  return net;
}

Gradients zero_gradients(const Mlp& net) {
  Gradients g;
  for (int l = 0; l < net.num_layers(); ++l) {
    g.weights.push_back(Matrix::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Vector::Zero(net.biases[l].size()));
  }
  return g;
}

Matrix forward(const Mlp& net, const Matrix& input, ForwardCache* cache) {
  if (input.rows() != net.input_dim())
    throw ValidationError("forward: input dimension mismatch, expected " +
                          std::to_string(net.input_dim()) + ", got " +
                          std::to_string(input.rows()));
  if (cache) {
    cache->zs.clear();
    cache->as.clear();
    cache->as.push_back(input);
  }
  Matrix a = input;
  const int L = net.num_layers();
  for (int l = 0; l < L; ++l) {
    Matrix z = (net.weights[l] * a).colwise() + net.biases[l];
    Activation act = (l == L - 1) ? net.output_activation : net.hidden_activation;
    a = apply_activation(act, z);
    if (cache) {
      cache->zs.push_back(std::move(z));
      cache->as.push_back(a);
    }
  }
  return a;
}

Vector forward(const Mlp& net, const Vector& input, ForwardCache* cache) {
  return forward(net, Matrix(input), cache);
}

Gradients backward(const Mlp& net, const ForwardCache& cache, const Matrix& output_gradient,
                   Matrix* input_gradient) {
  const int L = net.num_layers();
  if (!cache.valid() || static_cast<int>(cache.zs.size()) != L)
    throw ValidationError("backward: forward cache missing or does not match network");
  if (cache.as[0].rows() != net.input_dim())
    throw ValidationError("backward: cache was built for a different input dimension");
  if (output_gradient.rows() != net.output_dim() ||
      output_gradient.cols() != cache.as[0].cols())
    throw ValidationError("backward: output gradient shape mismatch");

  Gradients grads;
  grads.weights.resize(L);
  grads.biases.resize(L);

  Matrix delta;
  for (int l = L - 1; l >= 0; --l) {
    Activation act = (l == L - 1) ? net.output_activation : net.hidden_activation;
    if (l == L - 1)
      delta = output_gradient.cwiseProduct(activation_derivative(act, cache.zs[l], cache.as[l + 1]));
    else
      delta = (net.weights[l + 1].transpose() * delta)
                  .cwiseProduct(activation_derivative(act, cache.zs[l], cache.as[l + 1]));
    grads.weights[l] = delta * cache.as[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
  }
  if (input_gradient) *input_gradient = net.weights[0].transpose() * delta;
  return grads;
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (target.layer_sizes != online.layer_sizes)
    throw ValidationError("polyak_update: mismatched network shapes");
  for (int l = 0; l < target.num_layers(); ++l) {
    target.weights[l] = tau * online.weights[l] + (1.0 - tau) * target.weights[l];
    target.biases[l] = tau * online.biases[l] + (1.0 - tau) * target.biases[l];
  }
}

int parameter_count(const Mlp& net) {
  int n = 0;
  for (int l = 0; l < net.num_layers(); ++l)
    n += static_cast<int>(net.weights[l].size() + net.biases[l].size());
  return n;
}

std::vector<double> flatten_parameters(const Mlp& net) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(parameter_count(net)));
  for (int l = 0; l < net.num_layers(); ++l) {
    const Matrix& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) flat.push_back(net.biases[l][i]);
  }
  return flat;
}

void unflatten_parameters(Mlp& net, const std::vector<double>& flat) {
  if (static_cast<int>(flat.size()) != parameter_count(net))
    throw ValidationError("unflatten_parameters: size mismatch");
  std::size_t k = 0;
  for (int l = 0; l < net.num_layers(); ++l) {
    Matrix& w = net.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[k++];
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) net.biases[l][i] = flat[k++];
  }
}

std::vector<double> flatten_gradients(const Mlp& net, const Gradients& g) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(parameter_count(net)));
  for (int l = 0; l < net.num_layers(); ++l) {
    const Matrix& w = g.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    for (Eigen::Index i = 0; i < g.biases[l].size(); ++i) flat.push_back(g.biases[l][i]);
  }
  return flat;
}

}  // namespace gri::nn
