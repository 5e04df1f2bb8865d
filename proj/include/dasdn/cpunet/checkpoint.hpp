#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "dasdn/cpunet/denoise.hpp"
#include "dasdn/cpunet/network.hpp"
#include "dasdn/patching.hpp"

namespace dasdn::cpunet {

// Checkpoint layout (all integers and floats little-endian):
//
//   "CPUN"  u8 version(=1)
//   u32 input_dim  u32 encoder_dims[4]  u32 decoder_dims[4]
//   f64 fractions[3]  f64 lambda  f64 dropout  f64 ln_eps  u64 seed
//   f64 standardizer mean  f64 standardizer scale  u32 patch size  u32 patch overlap
//   u32 block count, then per block in architecture order:
//     u16 name length, name bytes, u64 value count, f64 values[count]

inline constexpr char kCheckpointMagic[4] = {'C', 'P', 'U', 'N'};
inline constexpr std::uint8_t kCheckpointVersion = 1;

struct Checkpoint {
  std::unique_ptr<CPUNet> net;
  Standardizer stats;
  patching::PatchConfig patch;
};

std::vector<char> encode_checkpoint(CPUNet& net, const Standardizer& stats, const patching::PatchConfig& patch);
Checkpoint decode_checkpoint(const std::vector<char>& bytes, const std::string& context = "checkpoint");

void save_checkpoint(const std::filesystem::path& path, CPUNet& net, const Standardizer& stats,
                     const patching::PatchConfig& patch);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dasdn::cpunet
