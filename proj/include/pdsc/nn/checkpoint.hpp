#pragma once

#include <cstdint>
#include <string>

#include "pdsc/common/binary_io.hpp"
#include "pdsc/nn/mlp.hpp"

// Network checkpoint layout (all integers and floats little-endian):
//   magic     8 bytes  "PDSCMLP\0"
//   version   u32      kMlpFormatVersion
//   seed      u64
//   layers    u32
//   per layer: out u32, in u32, activation name (u32 length + bytes)
//   parameters: f64 values in Mlp::flatten() order
namespace pdsc::nn {

inline constexpr std::uint32_t kMlpFormatVersion = 1;

void write_mlp(BinaryWriter& out, const Mlp& net);
Mlp read_mlp(BinaryReader& in);

void save_mlp(const std::string& path, const Mlp& net);
Mlp load_mlp(const std::string& path);

}  // namespace pdsc::nn
