#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evwg/classical.hpp"
#include "evwg/units.hpp"

namespace evwg {

/// Initial phase-space distribution: positions uniform on the disk
/// x^2 + y^2 < disk_radius^2, momenta independent normals with variance
/// sigma_p per axis around (p0x, p0y).
struct EnsembleSpec {
  std::size_t n_atoms = 10000;
  double disk_radius = 8.2056;
  double sigma_p = 0.1;  // variance, not standard deviation
  double p0x = 0.0;
  double p0y = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Atom i is drawn from its own counter-based stream keyed by (seed, i), so
/// the result does not depend on `threads`.
std::vector<PhaseState> sample_initial(const EnsembleSpec& spec, int threads = 1);

/// Advances every atom n_strobes modulation periods.
std::vector<PhaseState> evolve_ensemble(std::span<const PhaseState> atoms, int n_strobes,
                                        const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                        int threads = 1);

/// Closed-form initial density Q0(z) of the distribution described by `spec`.
double initial_density(const PhaseState& z, const EnsembleSpec& spec);

/// Q(z, t) = Q0(flow_{-t}(z)): integrates z backward `strobes` periods with
/// the inverse strobe map and evaluates Q0 there. z.t must equal strobes * T.
double evaluate_density(const PhaseState& z, int strobes, const EnsembleSpec& spec,
                        const DimensionlessParams& dp, const IntegratorConfig& cfg);

struct Extent {
  double xmin, xmax, ymin, ymax;
};

/// Default square [-r1 - 1, r1 + 1]^2.
Extent default_extent(const DimensionlessParams& dp);

struct Histogram2D {
  int nx = 0;
  int ny = 0;
  Extent extent{};
  std::vector<std::uint64_t> counts;  // row-major, x fastest
  std::uint64_t overflow = 0;

  std::uint64_t at(int ix, int iy) const { return counts[static_cast<std::size_t>(iy) * nx + ix]; }
  std::uint64_t total() const;
  void merge(const Histogram2D& other);
};

Histogram2D make_histogram(int nx, int ny, const Extent& extent);
void accumulate(Histogram2D& h, std::span<const PhaseState> atoms);
Histogram2D histogram_xy(std::span<const PhaseState> atoms, int nx, int ny, const Extent& extent);

struct RadialBin {
  double r_center;
  std::uint64_t count;
};

/// Counts per annulus (angular sum) on [0, r_max); atoms beyond r_max dropped.
std::vector<RadialBin> radial_profile(std::span<const PhaseState> atoms, int n_bins, double r_max);

struct DetectionResult {
  Histogram2D histogram;
  std::vector<RadialBin> radial;
  std::vector<PhaseState> detected;  // every recorded atom, in strobe order
};

struct DetectOptions {
  bool fresh_cohorts = true;  // false: one ensemble sampled at every strobe
  int hist_nx = 128;
  int hist_ny = 128;
  std::optional<Extent> extent;
  int radial_bins = 64;
  double radial_max = 0.0;  // 0 -> r1 + 1
  int threads = 1;
};

/// Gated low-flux detection: for every strobe s in [s_start, s_end] a cohort
/// of n_per_strobe atoms (stream key derived from (spec.seed, s)) is evolved
/// to strobe s and its positions accumulated into one histogram.
DetectionResult detect_integrated(const EnsembleSpec& spec, const DimensionlessParams& dp,
                                  const IntegratorConfig& cfg, int s_start, int s_end,
                                  std::size_t n_per_strobe, const DetectOptions& options = {});

}  // namespace evwg
