#include "gri/nn/gaussian.hpp"

#include <cmath>

namespace gri::nn {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2*pi)
}

double log_one_minus_tanh_sq(double u) {
  // 1 - tanh^2(u) = sech^2(u); log sech^2(u) = 2*(log 2 - |u| - log1p(exp(-2|u|)))
  const double a = std::abs(u);
  return 2.0 * (std::log(2.0) - a - std::log1p(std::exp(-2.0 * a)));
}

GaussianHead split_head(const Vector& raw_output) {
  if (raw_output.size() % 2 != 0)
    throw ValidationError("split_head: raw output size must be even");
  const int d = static_cast<int>(raw_output.size()) / 2;
  GaussianHead head;
  head.mean = raw_output.head(d);
  head.log_std = raw_output.tail(d).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  return head;
}

std::pair<Vector, double> gaussian_sample_and_logprob(const GaussianHead& head,
                                                      const Vector& noise) {
  const int d = static_cast<int>(head.mean.size());
  if (noise.size() != d || head.log_std.size() != d)
    throw ValidationError("gaussian_sample_and_logprob: dimension mismatch");

  Vector action(d);
  double logp = 0.0;
  for (int i = 0; i < d; ++i) {
    const double std = std::exp(head.log_std[i]);
    const double u = head.mean[i] + std * noise[i];
    action[i] = std::tanh(u);
    logp += -0.5 * noise[i] * noise[i] - kHalfLog2Pi - head.log_std[i] -
            log_one_minus_tanh_sq(u);
  }
  return {std::move(action), logp};
}

GaussianBatch gaussian_sample_batch(const Matrix& means, const Matrix& log_stds,
                                    const Matrix& noise) {
  if (means.rows() != log_stds.rows() || means.cols() != log_stds.cols() ||
      means.rows() != noise.rows() || means.cols() != noise.cols())
    throw ValidationError("gaussian_sample_batch: shape mismatch");

  GaussianBatch out;
  out.pre_squash = means + log_stds.array().exp().matrix().cwiseProduct(noise);
  out.actions = out.pre_squash.array().tanh().matrix();
  out.log_probs = Vector::Zero(means.cols());
  for (Eigen::Index c = 0; c < means.cols(); ++c) {
    double logp = 0.0;
    for (Eigen::Index r = 0; r < means.rows(); ++r) {
      logp += -0.5 * noise(r, c) * noise(r, c) - kHalfLog2Pi - log_stds(r, c) -
              log_one_minus_tanh_sq(out.pre_squash(r, c));
    }
    out.log_probs[c] = logp;
  }
  return out;
}

}  // namespace gri::nn
