#include "evwg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "evwg/parallel.hpp"
#include "evwg/rng.hpp"

namespace evwg {

using constants::pi;

void EnsembleSpec::validate() const {
  if (n_atoms < 1) throw std::invalid_argument("ensemble: n_atoms must be >= 1");
  if (!(disk_radius > 0.0)) throw std::invalid_argument("ensemble: disk_radius must be positive");
  if (!(sigma_p >= 0.0)) throw std::invalid_argument("ensemble: sigma_p must be non-negative");
}

namespace {

PhaseState sample_atom(const EnsembleSpec& spec, std::uint64_t index) {
  PhaseState a;
  SplitMix64 pos(stream_key(spec.seed, index, StreamPurpose::initial_position));
  const double r = spec.disk_radius;
  do {
    a.x = r * (2.0 * pos.uniform() - 1.0);
    a.y = r * (2.0 * pos.uniform() - 1.0);
  } while (a.x * a.x + a.y * a.y >= r * r);

  if (spec.sigma_p == 0.0) {
    a.px = spec.p0x;
    a.py = spec.p0y;
  } else {
    SplitMix64 mom(stream_key(spec.seed, index, StreamPurpose::initial_momentum));
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.sigma_p));
    a.px = spec.p0x + normal(mom);
    a.py = spec.p0y + normal(mom);
  }
  a.t = 0.0;
  return a;
}

}  // namespace

std::vector<PhaseState> sample_initial(const EnsembleSpec& spec, int threads) {
  spec.validate();
  std::vector<PhaseState> atoms(spec.n_atoms);
  parallel_for(atoms.size(), threads, [&](std::size_t i) { atoms[i] = sample_atom(spec, i); });
  return atoms;
}

std::vector<PhaseState> evolve_ensemble(std::span<const PhaseState> atoms, int n_strobes,
                                        const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                        int threads) {
  const StroboscopicMap map(dp, cfg);
  std::vector<PhaseState> out(atoms.begin(), atoms.end());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = map.iterate(out[i], n_strobes); });
  return out;
}

double initial_density(const PhaseState& z, const EnsembleSpec& spec) {
  const double r2 = spec.disk_radius * spec.disk_radius;
  if (z.x * z.x + z.y * z.y >= r2) return 0.0;
  const double spatial = 1.0 / (pi * r2);
  if (spec.sigma_p == 0.0) {
    return (z.px == spec.p0x && z.py == spec.p0y) ? std::numeric_limits<double>::infinity() : 0.0;
  }
  const double dx = z.px - spec.p0x;
  const double dy = z.py - spec.p0y;
  const double gauss = std::exp(-(dx * dx + dy * dy) / (2.0 * spec.sigma_p)) / (2.0 * pi * spec.sigma_p);
  return spatial * gauss;
}

double evaluate_density(const PhaseState& z, int strobes, const EnsembleSpec& spec,
                        const DimensionlessParams& dp, const IntegratorConfig& cfg) {
  if (strobes < 0) throw std::invalid_argument("evaluate_density: strobes must be >= 0");
  if (strobes == 0) return initial_density(z, spec);
  const StroboscopicMap map(dp, cfg);
  return initial_density(map.iterate(z, -strobes), spec);
}

Extent default_extent(const DimensionlessParams& dp) {
  const double a = dp.r1 + 1.0;
  return {-a, a, -a, a};
}

std::uint64_t Histogram2D::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

void Histogram2D::merge(const Histogram2D& other) {
  if (other.nx != nx || other.ny != ny) throw std::invalid_argument("histogram merge: shape mismatch");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  overflow += other.overflow;
}

Histogram2D make_histogram(int nx, int ny, const Extent& extent) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("histogram: nx and ny must be >= 1");
  if (!(extent.xmax > extent.xmin) || !(extent.ymax > extent.ymin)) {
    throw std::invalid_argument("histogram: empty extent");
  }
  Histogram2D h;
  h.nx = nx;
  h.ny = ny;
  h.extent = extent;
  h.counts.assign(static_cast<std::size_t>(nx) * ny, 0);
  return h;
}

void accumulate(Histogram2D& h, std::span<const PhaseState> atoms) {
  const double sx = h.nx / (h.extent.xmax - h.extent.xmin);
  const double sy = h.ny / (h.extent.ymax - h.extent.ymin);
  for (const auto& a : atoms) {
    const double fx = (a.x - h.extent.xmin) * sx;
    const double fy = (a.y - h.extent.ymin) * sy;
    if (!(fx >= 0.0 && fx < h.nx && fy >= 0.0 && fy < h.ny)) {
      ++h.overflow;
      continue;
    }
    const int ix = std::min(static_cast<int>(fx), h.nx - 1);
    const int iy = std::min(static_cast<int>(fy), h.ny - 1);
    ++h.counts[static_cast<std::size_t>(iy) * h.nx + ix];
  }
}

Histogram2D histogram_xy(std::span<const PhaseState> atoms, int nx, int ny, const Extent& extent) {
  Histogram2D h = make_histogram(nx, ny, extent);
  accumulate(h, atoms);
  return h;
}

std::vector<RadialBin> radial_profile(std::span<const PhaseState> atoms, int n_bins, double r_max) {
  if (n_bins < 1 || !(r_max > 0.0)) throw std::invalid_argument("radial_profile: bad binning");
  std::vector<RadialBin> bins(n_bins);
  const double width = r_max / n_bins;
  for (int i = 0; i < n_bins; ++i) bins[i] = {(i + 0.5) * width, 0};
  for (const auto& a : atoms) {
    const double r = std::hypot(a.x, a.y);
    if (!(r < r_max)) continue;
    const int i = std::min(static_cast<int>(r / width), n_bins - 1);
    ++bins[i].count;
  }
  return bins;
}

DetectionResult detect_integrated(const EnsembleSpec& spec, const DimensionlessParams& dp,
                                  const IntegratorConfig& cfg, int s_start, int s_end,
                                  std::size_t n_per_strobe, const DetectOptions& options) {
  if (s_start < 0 || s_end < s_start) throw std::invalid_argument("detect: need 0 <= s_start <= s_end");
  if (n_per_strobe < 1) throw std::invalid_argument("detect: n_per_strobe must be >= 1");
  spec.validate();
  const StroboscopicMap map(dp, cfg);
  const Extent extent = options.extent.value_or(default_extent(dp));
  const double r_max = options.radial_max > 0.0 ? options.radial_max : dp.r1 + 1.0;

  DetectionResult result;
  result.histogram = make_histogram(options.hist_nx, options.hist_ny, extent);
  result.detected.reserve(static_cast<std::size_t>(s_end - s_start + 1) * n_per_strobe);

  if (options.fresh_cohorts) {
    for (int s = s_start; s <= s_end; ++s) {
      EnsembleSpec cohort = spec;
      cohort.n_atoms = n_per_strobe;
      cohort.seed = stream_key(spec.seed, static_cast<std::uint64_t>(s), StreamPurpose::detection_cohort);
      auto atoms = sample_initial(cohort, options.threads);
      parallel_for(atoms.size(), options.threads,
                   [&](std::size_t i) { atoms[i] = map.iterate(atoms[i], s); });
      accumulate(result.histogram, atoms);
      result.detected.insert(result.detected.end(), atoms.begin(), atoms.end());
    }
  } else {
    EnsembleSpec single = spec;
    single.n_atoms = n_per_strobe;
    auto atoms = sample_initial(single, options.threads);
    parallel_for(atoms.size(), options.threads,
                 [&](std::size_t i) { atoms[i] = map.iterate(atoms[i], s_start); });
    for (int s = s_start; s <= s_end; ++s) {
      if (s > s_start) {
        parallel_for(atoms.size(), options.threads, [&](std::size_t i) { atoms[i] = map(atoms[i]); });
      }
      accumulate(result.histogram, atoms);
      result.detected.insert(result.detected.end(), atoms.begin(), atoms.end());
    }
  }
  result.radial = radial_profile(result.detected, options.radial_bins, r_max);
  return result;
}

}  // namespace evwg
