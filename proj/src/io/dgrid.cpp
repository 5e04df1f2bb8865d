#include "dasdn/io/dgrid.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "dasdn/io/binary.hpp"

namespace dasdn::io {

std::vector<char> encode_dgrid(const Grid2D& g, DType dtype) {
  ByteWriter w;
  w.bytes("DASG");
  w.u8(kDgridVersion);
  w.u32(static_cast<std::uint32_t>(g.rows()));
  w.u32(static_cast<std::uint32_t>(g.cols()));
  w.u8(static_cast<std::uint8_t>(dtype));
  for (double v : g.values()) {
    if (dtype == DType::f32) {
      w.f32(static_cast<float>(v));
    } else {
      w.f64(v);
    }
  }
  return w.data();
}

Grid2D decode_dgrid(const std::vector<char>& bytes, const std::string& context) {
  ByteReader r(bytes, context);
  if (r.bytes(4, "magic") != "DASG") throw FormatError(context + ": bad magic (expected DASG)");
  if (const auto v = r.u8("version"); v != kDgridVersion) {
    throw FormatError(context + ": unsupported version " + std::to_string(v));
  }
  const std::size_t rows = r.u32("rows");
  const std::size_t cols = r.u32("cols");
  const auto code = r.u8("dtype");
  if (code > 1) throw FormatError(context + ": unknown dtype code " + std::to_string(code));
  const auto dtype = static_cast<DType>(code);
  const std::size_t width = dtype == DType::f32 ? 4 : 8;
  if (r.remaining() != rows * cols * width) throw FormatError(context + ": payload length mismatch");

  std::vector<double> data(rows * cols);
  for (double& v : data) v = dtype == DType::f32 ? static_cast<double>(r.f32("payload")) : r.f64("payload");
  return {rows, cols, std::move(data)};
}

void write_dgrid(const std::filesystem::path& path, const Grid2D& g, DType dtype) {
  write_file_atomic(path, encode_dgrid(g, dtype));
}

Grid2D read_dgrid(const std::filesystem::path& path) { return decode_dgrid(read_file(path), path.string()); }

DType dgrid_dtype(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < kDgridHeaderSize) throw FormatError(path.string() + ": truncated header");
  return static_cast<DType>(bytes[kDgridHeaderSize - 1]);
}

void write_csv(const std::filesystem::path& path, const Grid2D& g) {
  std::string text;
  char buf[32];
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (j) text += ',';
      const int n = std::snprintf(buf, sizeof buf, "%.17g", g(i, j));
      text.append(buf, static_cast<std::size_t>(n));
    }
    text += '\n';
  }
  write_file_atomic(path, text);
}

Grid2D read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path.string() + "' for reading");
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t n = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        data.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad number '" + cell + "' on line " + std::to_string(rows + 1));
      }
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols) throw FormatError(path.string() + ": ragged row " + std::to_string(rows + 1));
    ++rows;
  }
  return {rows, cols, std::move(data)};
}

Grid2D read_grid(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_csv(path) : read_dgrid(path);
}

void write_grid(const std::filesystem::path& path, const Grid2D& g, DType dtype) {
  if (path.extension() == ".csv") {
    write_csv(path, g);
  } else {
    write_dgrid(path, g, dtype);
  }
}

}  // namespace dasdn::io
