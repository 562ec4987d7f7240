#pragma once

#include "grasp/layers.hpp"
#include "grasp/tensor.hpp"

#include <string>
#include <vector>

namespace grasp {

// Binary weight container, byte-exact across platforms:
//   magic "GRASPWTS", u32 version (= 1), then per tensor:
//   u64 name length, name bytes, u64 rank, u64 extents..., f32 payload.
// All integers and floats little-endian. Payloads are 32-bit floats
// regardless of the build scalar; 64-bit builds widen losslessly on load.

void save_weights(const std::vector<const Param*>& params, const std::string& path);

// Loads into the given parameters, matching by name. Throws DataError
// listing every missing, extra, or shape-mismatched tensor.
void load_weights(const std::vector<Param*>& params, const std::string& path);

} // namespace grasp
