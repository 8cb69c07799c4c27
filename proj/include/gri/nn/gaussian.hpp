#pragma once

#include "gri/common.hpp"

#include <utility>

namespace gri::nn {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

/// Squashed-Gaussian policy head: per-dimension mean and log standard
/// deviation, log_std clamped to [-20, 2]. Actions are tanh(mean + std*noise),
/// componentwise in (-1, 1).
struct GaussianHead {
  Vector mean;
  Vector log_std;
};

/// Splits a raw network output of size 2d into (mean, clamped log_std).
GaussianHead split_head(const Vector& raw_output);

/// Reparametrized sample plus its log-probability under the squashed
/// Gaussian, including the tanh change-of-variables correction.
std::pair<Vector, double> gaussian_sample_and_logprob(const GaussianHead& head,
                                                      const Vector& noise);

/// Batched sampling for the SAC update path. Columns are samples.
struct GaussianBatch {
  Matrix pre_squash;  // u = mean + std * noise
  Matrix actions;     // tanh(u)
  Vector log_probs;   // one per column
};

GaussianBatch gaussian_sample_batch(const Matrix& means, const Matrix& log_stds,
                                    const Matrix& noise);

/// log(1 - tanh(u)^2), evaluated in a form that does not underflow for
/// large |u|.
double log_one_minus_tanh_sq(double u);

}  // namespace gri::nn
