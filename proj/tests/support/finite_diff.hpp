#pragma once

// Central-difference oracle over MLP parameters. Kept independent of the
// backward implementation: it only uses forward passes through perturbed
// parameter vectors.

#include "gri/nn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testsupport {

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

/// d loss / d param_k by central differences for each index in `indices`
/// (all parameters when empty). `loss` must treat the network as const.
inline std::vector<double> finite_diff_gradient(
    gri::nn::Mlp net, const std::function<double(const gri::nn::Mlp&)>& loss,
    std::vector<int> indices = {}, double h = 1e-5) {
  std::vector<double> flat = gri::nn::flatten_parameters(net);
  if (indices.empty()) {
    indices.resize(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) indices[i] = static_cast<int>(i);
  }
  std::vector<double> grad(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const int i = indices[k];
    const double saved = flat[i];
    flat[i] = saved + h;
    gri::nn::unflatten_parameters(net, flat);
    const double f_plus = loss(net);
    flat[i] = saved - h;
    gri::nn::unflatten_parameters(net, flat);
    const double f_minus = loss(net);
    flat[i] = saved;
    gri::nn::unflatten_parameters(net, flat);
    grad[k] = (f_plus - f_minus) / (2.0 * h);
  }
  return grad;
}

/// True when every ReLU pre-activation is at least `margin` away from its
/// kink, so central differences stay on one side of it.
inline bool relu_kink_margin_ok(const gri::nn::Mlp& net, const gri::Matrix& input,
                                double margin = 1e-4) {
  gri::nn::ForwardCache cache;
  gri::nn::forward(net, input, &cache);
  const int L = net.num_layers();
  for (int l = 0; l < L; ++l) {
    const bool relu = (l == L - 1) ? net.output_activation == gri::nn::Activation::ReLU
                                   : net.hidden_activation == gri::nn::Activation::ReLU;
    if (relu && cache.zs[l].cwiseAbs().minCoeff() < margin) return false;
  }
  return true;
}

}  // namespace testsupport
