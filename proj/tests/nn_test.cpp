#include "gri/nn/adam.hpp"
#include "gri/nn/checkpoint.hpp"
#include "gri/nn/gaussian.hpp"
#include "gri/nn/mlp.hpp"

#include "doctest.h"
#include "support/finite_diff.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace gri;
using namespace gri::nn;
using testsupport::finite_diff_gradient;
using testsupport::relative_error;
using testsupport::relu_kink_margin_ok;

namespace {

Mlp tiny_net(std::vector<int> sizes, Activation hidden, Activation output,
             std::uint64_t seed) {
  Rng rng(seed);
  return make_mlp(sizes, hidden, output, rng);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("forward: zero parameters map any input to zero") {
  Mlp net = tiny_net({3, 4, 2}, Activation::ReLU, Activation::Identity, 1);
  for (auto& w : net.weights) w.setZero();
  for (auto& b : net.biases) b.setZero();
  Vector in(3);
  in << 1.5, -2.0, 0.25;
  CHECK(forward(net, in).isZero(0.0));
}

TEST_CASE("forward: 1-1 identity net computes 2*3+1") {
  Mlp net = tiny_net({1, 1}, Activation::ReLU, Activation::Identity, 1);
  net.weights[0](0, 0) = 2.0;
  net.biases[0][0] = 1.0;
  Vector in(1);
  in << 3.0;
  CHECK(forward(net, in)[0] == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("forward: 2-2-1 ReLU net matches a hand-evaluated composition") {
  Mlp net = tiny_net({2, 2, 1}, Activation::ReLU, Activation::Identity, 1);
  net.weights[0] << 1.0, -1.0, 0.5, 2.0;
  net.biases[0] << 0.1, -0.2;
  net.weights[1] << 2.0, -1.0;
  net.biases[1] << 0.5;
  Vector in(2);
  in << 1.0, 2.0;
  // z0 = (1*1 - 1*2 + 0.1, 0.5*1 + 2*2 - 0.2) = (-0.9, 4.3)
  // relu -> (0, 4.3); z1 = 2*0 - 1*4.3 + 0.5 = -3.8
  CHECK(forward(net, in)[0] == doctest::Approx(-3.8).epsilon(1e-15));
}

TEST_CASE("forward: dimension mismatch names expected and actual sizes") {
  Mlp net = tiny_net({3, 4, 2}, Activation::ReLU, Activation::Identity, 1);
  Vector in(2);
  in << 1.0, 2.0;
  CHECK_THROWS_WITH_AS(forward(net, in), doctest::Contains("expected 3"), ValidationError);
}

TEST_CASE("forward: deterministic for fixed parameters") {
  Mlp net = tiny_net({5, 16, 3}, Activation::Tanh, Activation::Identity, 7);
  Rng rng(2);
  Vector in = rng.normal_vector(5);
  const Vector a = forward(net, in);
  const Vector b = forward(net, in);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
}

TEST_CASE("backward: zero output gradient gives zero parameter gradients") {
  Mlp net = tiny_net({3, 8, 2}, Activation::ReLU, Activation::Identity, 3);
  Rng rng(4);
  ForwardCache cache;
  forward(net, Vector(rng.normal_vector(3)), &cache);
  Gradients g = backward(net, cache, Matrix::Zero(2, 1));
  for (const auto& w : g.weights) CHECK(w.isZero(0.0));
  for (const auto& b : g.biases) CHECK(b.isZero(0.0));
}

TEST_CASE("backward: linear 1-1 case gives weight grad 3, bias grad 1") {
  Mlp net = tiny_net({1, 1}, Activation::ReLU, Activation::Identity, 1);
  net.weights[0](0, 0) = 2.0;
  net.biases[0][0] = 0.0;
  Vector in(1);
  in << 3.0;
  ForwardCache cache;
  forward(net, in, &cache);
  Gradients g = backward(net, cache, Matrix::Ones(1, 1));
  CHECK(g.weights[0](0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(g.biases[0][0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("backward: missing cache is a hard error") {
  Mlp net = tiny_net({2, 2}, Activation::ReLU, Activation::Identity, 1);
  ForwardCache cache;  // never filled
  CHECK_THROWS_AS(backward(net, cache, Matrix::Zero(2, 1)), ValidationError);
}

TEST_CASE("backward: random 4-8-2 net matches central finite differences") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    Mlp net = tiny_net({4, 8, 2}, Activation::ReLU, Activation::Identity, seed);
    Rng rng(seed + 100);
    Vector in = rng.normal_vector(4);
    if (!relu_kink_margin_ok(net, in)) continue;  // keep the FD oracle valid
    Vector gout = rng.normal_vector(2);

    ForwardCache cache;
    forward(net, in, &cache);
    const std::vector<double> analytic = flatten_gradients(net, backward(net, cache, gout));

    auto loss = [&](const Mlp& m) { return gout.dot(forward(m, in)); };
    const std::vector<double> fd = finite_diff_gradient(net, loss);
    REQUIRE(fd.size() == analytic.size());
    for (std::size_t i = 0; i < fd.size(); ++i)
      CHECK(relative_error(fd[i], analytic[i]) < 1e-4);
  }
}

TEST_CASE("backward: batch gradients equal the sum of per-sample gradients") {
  Mlp net = tiny_net({3, 6, 2}, Activation::Tanh, Activation::Identity, 21);
  Rng rng(22);
  const Matrix inputs = rng.normal_matrix(3, 5);
  const Matrix gout = rng.normal_matrix(2, 5);

  ForwardCache batch_cache;
  forward(net, inputs, &batch_cache);
  Gradients batch_g = backward(net, batch_cache, gout);

  Gradients sum = zero_gradients(net);
  for (int i = 0; i < 5; ++i) {
    ForwardCache c;
    forward(net, Vector(inputs.col(i)), &c);
    Gradients g = backward(net, c, Matrix(gout.col(i)));
    for (int l = 0; l < net.num_layers(); ++l) {
      sum.weights[l] += g.weights[l];
      sum.biases[l] += g.biases[l];
    }
  }
  for (int l = 0; l < net.num_layers(); ++l) {
    CHECK((batch_g.weights[l] - sum.weights[l]).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((batch_g.biases[l] - sum.biases[l]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gradient check across default network shapes, 100 seeds") {
  struct Shape {
    std::vector<int> sizes;
    Activation output;
  };
  const std::vector<Shape> shapes = {
      {{3, 64, 64, 2}, Activation::Identity},   // sac actor (pendulum)
      {{4, 64, 64, 1}, Activation::Identity},   // continuous critic
      {{3, 64, 64, 1}, Activation::Tanh},       // ddpg actor
      {{6, 64, 64, 108}, Activation::Identity}, // dqn q-net (trackdrive)
  };
  int seeds_checked = 0;
  for (std::uint64_t seed = 0; seeds_checked < 100; ++seed) {
    const Shape& shape = shapes[seed % shapes.size()];
    Mlp net = tiny_net(shape.sizes, Activation::ReLU, shape.output, 1000 + seed);
    Rng rng(2000 + seed);
    Vector in = rng.normal_vector(shape.sizes.front());
    if (!relu_kink_margin_ok(net, in)) continue;
    Vector gout = rng.normal_vector(shape.sizes.back());

    ForwardCache cache;
    forward(net, in, &cache);
    const std::vector<double> analytic = flatten_gradients(net, backward(net, cache, gout));

    // Probe a deterministic subsample of parameters per seed.
    const int total = parameter_count(net);
    std::vector<int> probe;
    for (int k = 0; k < 24; ++k)
      probe.push_back(static_cast<int>(Rng(seed * 31 + k).uniform_int(total)));

    auto loss = [&](const Mlp& m) { return gout.dot(forward(m, in)); };
    const std::vector<double> fd = finite_diff_gradient(net, loss, probe);
    for (std::size_t k = 0; k < probe.size(); ++k)
      CHECK(relative_error(fd[k], analytic[probe[k]]) < 1e-4);
    ++seeds_checked;
  }
  CHECK(seeds_checked == 100);
}

TEST_CASE("adam: all-zero gradients leave parameters bitwise unchanged") {
  Mlp net = tiny_net({3, 4, 2}, Activation::ReLU, Activation::Identity, 5);
  const std::vector<double> before = flatten_parameters(net);
  AdamState state = make_adam(net, 0.1);
  const Gradients zeros = zero_gradients(net);
  for (int i = 0; i < 10; ++i) adam_step(net, zeros, state);
  CHECK(state.step_count == 10);
  const std::vector<double> after = flatten_parameters(net);
  CHECK(std::memcmp(before.data(), after.data(), before.size() * sizeof(double)) == 0);
}

TEST_CASE("adam: first scalar step matches the hand-computed trace") {
  double param = 0.0;
  AdamScalarState st;
  st.learning_rate = 0.1;
  adam_step(param, 1.0, st);

  // Hand trace, t=1: m = 0.1, v = 0.001, m_hat = 1, v_hat = 1,
  // param = 0 - 0.1 * 1 / (1 + 1e-8).
  const double expected1 = -0.1 * 1.0 / (1.0 + 1e-8);
  CHECK(param == doctest::Approx(expected1).epsilon(1e-14));
  CHECK(param == doctest::Approx(-0.1).epsilon(1e-7));
  CHECK(st.step_count == 1);

  adam_step(param, 1.0, st);
  // t=2: m = 0.9*0.1 + 0.1 = 0.19, v = 0.999*0.001 + 0.001 = 0.001999,
  // m_hat = 0.19/0.19 = 1, v_hat = 0.001999/0.001999 = 1.
  const double expected2 = expected1 - 0.1 * 1.0 / (1.0 + 1e-8);
  CHECK(param == doctest::Approx(expected2).epsilon(1e-14));
}

TEST_CASE("adam: network update matches the scalar trace on a 1-1 net") {
  Mlp net = tiny_net({1, 1}, Activation::ReLU, Activation::Identity, 1);
  net.weights[0](0, 0) = 0.0;
  net.biases[0][0] = 0.0;
  AdamState state = make_adam(net, 0.1);
  Gradients g = zero_gradients(net);
  g.weights[0](0, 0) = 1.0;
  g.biases[0][0] = 1.0;
  adam_step(net, g, state);
  adam_step(net, g, state);
  const double expected = -0.1 / (1.0 + 1e-8) * 2.0;
  CHECK(net.weights[0](0, 0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(net.biases[0][0] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(state.step_count == 2);
}

TEST_CASE("adam: non-finite gradient aborts naming the layer") {
  Mlp net = tiny_net({2, 3, 1}, Activation::ReLU, Activation::Identity, 6);
  AdamState state = make_adam(net, 0.1);
  Gradients g = zero_gradients(net);
  g.weights[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(adam_step(net, g, state), doctest::Contains("layer 1"),
                       RunAbortError);
}

TEST_CASE("gaussian: clamped log_std, zero noise") {
  Vector raw(2);
  raw << 0.0, -30.0;  // log_std clamps to -20
  GaussianHead head = split_head(raw);
  CHECK(head.log_std[0] == -20.0);
  auto [action, logp] = gaussian_sample_and_logprob(head, Vector::Zero(1));
  CHECK(action[0] == doctest::Approx(0.0));
  // N(0; 0, e-20) log-density minus a vanishing tanh correction at 0.
  const double expected = -0.5 * std::log(2.0 * std::numbers::pi) + 20.0;
  CHECK(logp == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gaussian: unit head at noise 1 matches the closed form") {
  Vector raw(2);
  raw << 0.0, 0.0;
  GaussianHead head = split_head(raw);
  Vector noise(1);
  noise << 1.0;
  auto [action, logp] = gaussian_sample_and_logprob(head, noise);
  CHECK(action[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
  const double log_normal = -0.5 - 0.5 * std::log(2.0 * std::numbers::pi);
  const double correction = std::log(1.0 - std::tanh(1.0) * std::tanh(1.0));
  CHECK(logp == doctest::Approx(log_normal - correction).epsilon(1e-12));
}

TEST_CASE("gaussian: exp(log-prob) integrates to 1 over the action interval") {
  // Density of the squashed variable from first principles:
  //   p(a) = N(atanh(a); mean, std) / (1 - a^2)
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const double mean = rng.uniform(-1.0, 1.0);
    const double log_std = rng.uniform(-1.0, 0.5);
    const double std = std::exp(log_std);

    auto density = [&](double a) {
      const double u = std::atanh(a);
      const double z = (u - mean) / std;
      const double normal =
          std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * std::numbers::pi));
      return normal / (1.0 - a * a);
    };

    // Monte-Carlo over uniform draws in (-1, 1); interval length 2.
    const int n = 100000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += density(rng.uniform(-0.999999, 0.999999));
    const double integral = 2.0 * acc / n;
    CHECK(integral == doctest::Approx(1.0).epsilon(0.02));

    // And the library's log-prob agrees with the same formula at samples.
    Vector raw(2);
    raw << mean, log_std;
    GaussianHead head = split_head(raw);
    for (int i = 0; i < 50; ++i) {
      Vector noise(1);
      noise << rng.normal();
      auto [action, logp] = gaussian_sample_and_logprob(head, noise);
      CHECK(logp == doctest::Approx(std::log(density(action[0]))).epsilon(1e-9));
    }
  }
}

TEST_CASE("gaussian: batch sampling agrees with the single-sample path") {
  Rng rng(123);
  const int d = 3, n = 7;
  const Matrix means = rng.normal_matrix(d, n);
  const Matrix log_stds = rng.normal_matrix(d, n) * 0.3;
  const Matrix noise = rng.normal_matrix(d, n);
  const GaussianBatch g = gaussian_sample_batch(means, log_stds, noise);
  for (int i = 0; i < n; ++i) {
    GaussianHead head{means.col(i), log_stds.col(i)};
    auto [action, logp] = gaussian_sample_and_logprob(head, Vector(noise.col(i)));
    CHECK((g.actions.col(i) - action).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(g.log_probs[i] == doctest::Approx(logp).epsilon(1e-12));
  }
}

TEST_CASE("polyak: exact contraction per parameter") {
  Mlp online = tiny_net({3, 8, 2}, Activation::ReLU, Activation::Identity, 31);
  Mlp target = tiny_net({3, 8, 2}, Activation::ReLU, Activation::Identity, 32);
  const double tau = 0.005;
  Mlp before = target;
  polyak_update(target, online, tau);
  for (int l = 0; l < online.num_layers(); ++l) {
    const Matrix lhs = target.weights[l] - online.weights[l];
    const Matrix rhs = (1.0 - tau) * (before.weights[l] - online.weights[l]);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("checkpoint: round-trip is bit-exact") {
  Mlp net = tiny_net({3, 16, 2}, Activation::ReLU, Activation::Tanh, 41);
  const std::string path = temp_path("nn_roundtrip.grnn");
  save_network(net, path);
  Mlp loaded = load_network(path, Activation::ReLU, Activation::Tanh);
  CHECK(loaded.layer_sizes == net.layer_sizes);
  const auto a = flatten_parameters(net);
  const auto b = flatten_parameters(loaded);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);

  // Save again: byte-identical files.
  const std::string path2 = temp_path("nn_roundtrip2.grnn");
  save_network(loaded, path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(c1 == c2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("checkpoint: corruption is rejected with a byte offset") {
  Mlp net = tiny_net({2, 2}, Activation::ReLU, Activation::Identity, 42);
  const std::string path = temp_path("nn_corrupt.grnn");
  save_network(net, path);

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(load_network(path, Activation::ReLU, Activation::Identity), FormatError);
  }
  SUBCASE("truncation reports where parsing stopped") {
    std::error_code ec;
    std::filesystem::resize_file(path, 20, ec);
    REQUIRE(!ec);
    try {
      load_network(path, Activation::ReLU, Activation::Identity);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() > 0);
      CHECK(e.offset() <= 20);
    }
  }
  std::remove(path.c_str());
}
