#include "dasdn/cpunet/checkpoint.hpp"

#include <algorithm>
#include <string>

#include "dasdn/error.hpp"
#include "dasdn/io/binary.hpp"

namespace dasdn::cpunet {

std::vector<char> encode_checkpoint(CPUNet& net, const Standardizer& stats, const patching::PatchConfig& patch) {
  const auto& c = net.config();
  io::ByteWriter w;
  w.bytes({kCheckpointMagic, 4});
  w.u8(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(c.input_dim));
  for (auto d : c.encoder_dims) w.u32(static_cast<std::uint32_t>(d));
  for (auto d : c.decoder_dims) w.u32(static_cast<std::uint32_t>(d));
  for (double f : c.fractions) w.f64(f);
  w.f64(c.unit.lambda);
  w.f64(c.unit.dropout);
  w.f64(c.unit.ln_eps);
  w.u64(c.seed);
  w.f64(stats.mean);
  w.f64(stats.scale);
  w.u32(static_cast<std::uint32_t>(patch.size));
  w.u32(static_cast<std::uint32_t>(patch.overlap));

  const auto blocks = net.parameters();
  w.u32(static_cast<std::uint32_t>(blocks.size()));
  for (const auto& b : blocks) {
    w.u16(static_cast<std::uint16_t>(b.name.size()));
    w.bytes(b.name);
    w.u64(b.value.size());
    for (double v : b.value) w.f64(v);
  }
  return w.data();
}

Checkpoint decode_checkpoint(const std::vector<char>& bytes, const std::string& context) {
  io::ByteReader r(bytes, context);
  if (r.bytes(4, "magic") != std::string(kCheckpointMagic, 4)) throw FormatError(context + ": bad magic");
  if (const auto v = r.u8("version"); v != kCheckpointVersion) {
    throw FormatError(context + ": unsupported version " + std::to_string(v));
  }

  CPUNetConfig c;
  c.input_dim = r.u32("input_dim");
  for (auto& d : c.encoder_dims) d = r.u32("encoder_dims");
  for (auto& d : c.decoder_dims) d = r.u32("decoder_dims");
  for (auto& f : c.fractions) f = r.f64("fractions");
  c.unit.lambda = r.f64("lambda");
  c.unit.dropout = r.f64("dropout");
  c.unit.ln_eps = r.f64("ln_eps");
  c.seed = r.u64("seed");

  Checkpoint ck;
  ck.stats.mean = r.f64("standardizer mean");
  ck.stats.scale = r.f64("standardizer scale");
  ck.patch.size = r.u32("patch size");
  ck.patch.overlap = r.u32("patch overlap");
  if (static_cast<Eigen::Index>(ck.patch.size * ck.patch.size) != c.input_dim) {
    throw FormatError(context + ": patch size does not match input_dim");
  }

  try {
    ck.net = std::make_unique<CPUNet>(c);
  } catch (const ConfigError& e) {
    throw FormatError(context + ": invalid config block: " + e.what());
  }

  auto blocks = ck.net->parameters();
  if (r.u32("block count") != blocks.size()) throw FormatError(context + ": parameter block count mismatch");
  for (auto& b : blocks) {
    const auto len = r.u16("block name length");
    const std::string name = r.bytes(len, "block name");
    if (name != b.name) throw FormatError(context + ": expected block '" + b.name + "', found '" + name + "'");
    if (r.u64("block length") != b.value.size()) throw FormatError(context + ": block '" + name + "' has wrong length");
    for (double& v : b.value) v = r.f64("parameter values");
  }
  if (r.remaining() != 0) throw FormatError(context + ": trailing bytes after last block");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, CPUNet& net, const Standardizer& stats,
                     const patching::PatchConfig& patch) {
  io::write_file_atomic(path, encode_checkpoint(net, stats, patch));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(io::read_file(path), path.string());
}

}  // namespace dasdn::cpunet
