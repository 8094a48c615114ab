#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evwg/classical.hpp"
#include "evwg/ensemble.hpp"
#include "evwg/resonance.hpp"
#include "evwg/units.hpp"

namespace evwg {

enum class Mode { convert_units, freqmap, portrait, fixedpoints, ensemble, detect, quantum, revival };

const char* to_string(Mode m);
/// Throws ConfigError for an unknown name.
Mode parse_mode(std::string_view name);

struct FreqmapSettings {
  double h_min = 0.0;    // 0: just above the axis potential
  double h_max = 50.0;
  int points = 200;
  bool log_spacing = true;  // log-spaced in h0 - s
  int quad_points = 256;
  int j_max = 8;
};

struct PortraitSettings {
  double x_min = 0.0;
  double x_max = 8.0;
  int n_x = 20;
  double px_min = 0.0;
  double px_max = 0.0;
  int n_px = 1;
  int strobes = 500;
};

struct FixedpointSettings {
  std::vector<int> periods{1, 2};
  SearchBox box{};          // defaults resolved from the parameters when unset
  bool box_set = false;
  FixedPointSearch search{};
  int j_max = 8;
};

struct EnsembleSettings {
  EnsembleSpec spec{};
  bool disk_radius_set = false;
  std::vector<int> snapshot_strobes{50};
  int hist_nx = 128;
  int hist_ny = 128;
  int radial_bins = 64;
  double radial_max = 0.0;  // 0 -> r1 + 1
  bool write_atoms = true;
};

struct DetectSettings {
  int s_start = 51;
  int s_end = 150;
  std::size_t n_per_strobe = 200;
  bool fresh_cohorts = true;
};

struct QuantumSettings {
  int n = 256;
  double half_width = 0.0;  // 0 -> r1 + 4
  int steps_per_strobe = 1024;
  bool mask_at_r1 = false;
  double x0 = 0.0, y0 = 0.0, p0x = 0.0, p0y = 0.0;
  double sigma = 0.1;
  int strobes = 50;
  bool record_every_step = false;
  bool asymmetry = true;
  int n_r = 256;
  int n_theta = 256;
  double slice_y = 0.0;
};

struct RevivalSettings {
  double x0 = 0.5, y0 = 0.5, p0x = 0.0, p0y = 0.0;
  double sigma = 0.1;
  MeanEnergyModel model = MeanEnergyModel::packet_expectation;
};

struct RunConfig {
  std::optional<Mode> mode;  // optional in the file; the CLI supplies it too
  std::string name;          // output file stem, defaults to the mode name
  std::uint64_t seed = 1;
  int threads = 1;

  std::optional<PhysicalParams> physical;
  DimensionlessParams params{};  // given directly or derived from `physical`

  IntegratorConfig integrator{};
  std::optional<FreqmapSettings> freqmap;
  std::optional<PortraitSettings> portrait;
  std::optional<FixedpointSettings> fixedpoints;
  std::optional<EnsembleSettings> ensemble;
  std::optional<DetectSettings> detect;
  std::optional<QuantumSettings> quantum;
  std::optional<RevivalSettings> revival;
};

/// Parses `key = value` lines grouped under `[section]` headers; `#` and `;`
/// start comments. Exactly one of [physical] and [dimensionless] must be
/// present. Unknown sections or keys, duplicates and malformed values throw
/// ConfigError carrying the line number and key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks that the sub-blocks `mode` needs are present.
void require_mode_sections(const RunConfig& cfg, Mode mode);

}  // namespace evwg
