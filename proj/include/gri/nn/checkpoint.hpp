#pragma once

#include "gri/nn/mlp.hpp"

#include <string>

namespace gri::nn {

/// Network checkpoint file, magic "GRNN": version u32, layer count u32, the
/// layer sizes as u32, then all parameters as little-endian doubles in layer
/// order (weights row-major, then biases). Activations are configuration,
/// not data, so the loader takes them as arguments.
void save_network(const Mlp& net, const std::string& path);

Mlp load_network(const std::string& path, Activation hidden, Activation output);

}  // namespace gri::nn
