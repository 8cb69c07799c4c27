#include "gri/nn/checkpoint.hpp"

#include "gri/io/binary.hpp"

namespace gri::nn {

namespace {
constexpr char kMagic[4] = {'G', 'R', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_network(const Mlp& net, const std::string& path) {
  io::BinaryWriter w;
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(net.layer_sizes.size()));
  for (int s : net.layer_sizes) w.u32(static_cast<std::uint32_t>(s));
  for (int l = 0; l < net.num_layers(); ++l) {
    const Matrix& wm = net.weights[l];
    for (Eigen::Index r = 0; r < wm.rows(); ++r)
      for (Eigen::Index c = 0; c < wm.cols(); ++c) w.f64(wm(r, c));
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) w.f64(net.biases[l][i]);
  }
  w.write_file(path);
}

Mlp load_network(const std::string& path, Activation hidden, Activation output) {
  io::BinaryReader r = io::BinaryReader::from_file(path);
  r.magic(kMagic);
  const std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t n_sizes = r.u32();
  if (n_sizes < 2) r.fail("checkpoint needs at least two layer sizes");

  Mlp net;
  net.hidden_activation = hidden;
  net.output_activation = output;
  for (std::uint32_t i = 0; i < n_sizes; ++i) {
    const std::uint32_t s = r.u32();
    if (s == 0) r.fail("zero layer size");
    net.layer_sizes.push_back(static_cast<int>(s));
  }
  for (std::uint32_t l = 0; l + 1 < n_sizes; ++l) {
    const int rows = net.layer_sizes[l + 1];
    const int cols = net.layer_sizes[l];
    Matrix wm(rows, cols);
    for (int rr = 0; rr < rows; ++rr)
      for (int cc = 0; cc < cols; ++cc) wm(rr, cc) = r.f64();
    Vector b(rows);
    for (int i = 0; i < rows; ++i) b[i] = r.f64();
    net.weights.push_back(std::move(wm));
    net.biases.push_back(std::move(b));
  }
  if (!r.exhausted()) r.fail("trailing bytes after checkpoint payload");
  return net;
}

}  // namespace gri::nn
