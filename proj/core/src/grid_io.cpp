#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "evwg/error.hpp"
#include "evwg/io.hpp"

namespace evwg {

namespace {

constexpr char magic[4] = {'E', 'W', 'G', '1'};

template <typename T>
void put(std::string& out, T v) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T take(std::string_view in, std::size_t& pos) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

std::string encode_grid(const Grid& g) {
  const std::size_t expected = static_cast<std::size_t>(g.nx) * g.ny * g.values_per_cell();
  if (g.data.size() != expected) throw std::invalid_argument("write_grid: payload size does not match nx*ny");
  std::string out;
  out.reserve(grid_header_bytes + 8 * expected);
  out.append(magic, 4);
  put<std::uint32_t>(out, g.nx);
  put<std::uint32_t>(out, g.ny);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.kind));
  put(out, g.extent.xmin);
  put(out, g.extent.xmax);
  put(out, g.extent.ymin);
  put(out, g.extent.ymax);
  put(out, g.time);
  for (double v : g.data) put(out, v);
  return out;
}

Grid decode_grid(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
    throw FormatError("grid: bad magic (expected EWG1)");
  }
  if (bytes.size() < grid_header_bytes) throw FormatError("grid: truncated header");
  std::size_t pos = 4;
  Grid g;
  g.nx = take<std::uint32_t>(bytes, pos);
  g.ny = take<std::uint32_t>(bytes, pos);
  const auto kind = take<std::uint8_t>(bytes, pos);
  if (kind > 1) throw FormatError("grid: unknown kind " + std::to_string(kind));
  g.kind = static_cast<GridKind>(kind);
  g.extent.xmin = take<double>(bytes, pos);
  g.extent.xmax = take<double>(bytes, pos);
  g.extent.ymin = take<double>(bytes, pos);
  g.extent.ymax = take<double>(bytes, pos);
  g.time = take<double>(bytes, pos);
  const std::size_t count = static_cast<std::size_t>(g.nx) * g.ny * g.values_per_cell();
  if (bytes.size() - pos != 8 * count) {
    throw FormatError("grid: payload has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                      std::to_string(8 * count));
  }
  g.data.resize(count);
  for (auto& v : g.data) v = take<double>(bytes, pos);
  return g;
}

void write_grid(const Grid& g, const std::filesystem::path& path) { write_file_atomic(path, encode_grid(g)); }

Grid read_grid(const std::filesystem::path& path) { return decode_grid(read_file(path)); }

Grid grid_from_histogram(const Histogram2D& h) {
  Grid g;
  g.nx = static_cast<std::uint32_t>(h.nx);
  g.ny = static_cast<std::uint32_t>(h.ny);
  g.extent = h.extent;
  g.data.assign(h.counts.begin(), h.counts.end());
  return g;
}

namespace {
Grid grid_shell(const Wavefunction& w, GridKind kind) {
  Grid g;
  g.nx = g.ny = static_cast<std::uint32_t>(w.n);
  g.kind = kind;
  g.extent = {-w.half_width, w.half_width, -w.half_width, w.half_width};
  g.time = w.t;
  return g;
}
}  // namespace

Grid grid_from_probability(const Wavefunction& w) {
  Grid g = grid_shell(w, GridKind::real64);
  g.data.reserve(w.amps.size());
  for (const auto& a : w.amps) g.data.push_back(std::norm(a));
  return g;
}

Grid grid_from_wavefunction(const Wavefunction& w) {
  Grid g = grid_shell(w, GridKind::complex128);
  g.data.reserve(2 * w.amps.size());
  for (const auto& a : w.amps) {
    g.data.push_back(a.real());
    g.data.push_back(a.imag());
  }
  return g;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace evwg
