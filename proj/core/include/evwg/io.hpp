#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "evwg/ensemble.hpp"
#include "evwg/quantum.hpp"

namespace evwg {

// ---- binary grid files -----------------------------------------------------
//
// "EWG1", then little-endian u32 nx, u32 ny, u8 kind, 4 x f64 extent
// (xmin, xmax, ymin, ymax), f64 time, then the payload row-major with x
// fastest. Complex values are stored as interleaved (re, im) pairs.

enum class GridKind : std::uint8_t { real64 = 0, complex128 = 1 };

inline constexpr std::size_t grid_header_bytes = 53;

struct Grid {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  GridKind kind = GridKind::real64;
  Extent extent{};
  double time = 0.0;
  std::vector<double> data;  // nx*ny values, or 2*nx*ny for complex128

  std::size_t values_per_cell() const { return kind == GridKind::complex128 ? 2 : 1; }
};

std::string encode_grid(const Grid& g);
/// Throws FormatError on a bad magic, unknown kind, or truncated payload.
Grid decode_grid(std::string_view bytes);

void write_grid(const Grid& g, const std::filesystem::path& path);
Grid read_grid(const std::filesystem::path& path);

Grid grid_from_histogram(const Histogram2D& h);
/// |psi|^2 on the simulation grid (cell-edge extent [-L, L)^2).
Grid grid_from_probability(const Wavefunction& w);
Grid grid_from_wavefunction(const Wavefunction& w);

// ---- CSV ---------------------------------------------------------------------

/// Shortest form that round-trips, never more than 17 significant digits.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);

  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(std::string_view v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(std::uint64_t v);
  void end_row();

  std::size_t rows() const { return rows_; }
  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
};

// ---- files -------------------------------------------------------------------

/// Writes to a temporary sibling and renames it over `path`, so readers never
/// see a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace evwg
