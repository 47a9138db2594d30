#pragma once

#include "aeolus/nn/network.hpp"

#include <string>

namespace aeolus::nn {

/// JSON weights document: format tag, architecture fingerprint, ordered
/// per-parameter arrays (row-major float64), normalization constants.
/// Serialization uses shortest-round-trip doubles, so save -> load -> save
/// is byte-identical.
void save_weights(const std::string& path, const NetworkSpec& spec,
                  const Weights& w);

/// Load and validate against the requesting architecture: format tag,
/// fingerprint, parameter names and shapes must all match (DataError).
Weights load_weights(const std::string& path, const NetworkSpec& spec);

} // namespace aeolus::nn
