#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evwg/classical.hpp"
#include "evwg/units.hpp"

namespace evwg {

/// Turning point x_M of the unperturbed 1D motion (y = py = 0) at energy h0.
/// Throws DomainError for h0 <= xi exp(-r1).
double turning_point(double h0, const DimensionlessParams& dp);

/// Angular frequency of the unperturbed 1D oscillation at energy h0,
///   omega0 = pi / Int_{-x_M}^{x_M} [2 (h0 - xi e^{|x| - r1})]^{-1/2} dx.
/// The substitution x = x_M sin u makes the integrand bounded; Gauss-Legendre
/// starting at `quad_points` nodes is doubled until the integral changes by
/// less than 1e-8 relative (AccuracyError if that never happens).
double omega0_of_energy(double h0, const DimensionlessParams& dp, int quad_points = 256);

struct FrequencyRow {
  double h0;
  double x_m;
  double omega0;
};
using FrequencyCurve = std::vector<FrequencyRow>;

/// h_grid must be strictly increasing. Errors carry the offending row index.
FrequencyCurve frequency_curve(const DimensionlessParams& dp, std::span<const double> h_grid,
                               int quad_points = 256);

/// Energies where omega0(h) = omega / j, j = 1..j_max, on every branch of the
/// (non-monotone) frequency curve below h_max.
struct ResonanceRadius {
  int j;
  double h0;
  double x_m;
};
std::vector<ResonanceRadius> resonance_radii(const DimensionlessParams& dp, int j_max, double h_max);

struct SearchBox {
  double x_min = -1.0;
  double x_max = 1.0;
  double px_min = -1.0;
  double px_max = 1.0;

  bool contains(double x, double px) const {
    return x >= x_min && x <= x_max && px >= px_min && px <= px_max;
  }
};

struct FixedPointSearch {
  int seeds_x = 21;
  int seeds_px = 21;
  int max_iterations = 50;
  double tolerance = 1e-10;   // on |map^period(z) - z|
  double dedup_distance = 1e-6;
  double fd_step = 1e-6;
  int threads = 1;
};

enum class Stability { elliptic, hyperbolic };

struct FixedPoint {
  double x;
  double px;
  double residual;
  Stability stability;
  int period;
  // Trace and determinant of the finite-difference Jacobian of map^period.
  // NaN at the axis (x = px = 0), where the conical potential minimum makes
  // the map non-differentiable; the axis is always reported as elliptic.
  double trace;
  double det;
};

/// Newton iteration on map^period(z) - z in the invariant plane, seeded on a
/// regular grid over `box`. Returns deduplicated converged points inside the
/// box in seed order; the axis point is always first when it lies in the box.
std::vector<FixedPoint> find_fixed_points(const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                          const SearchBox& box, int period,
                                          const FixedPointSearch& search = {});

const char* to_string(Stability s);

// ---- revival time ----------------------------------------------------------

enum class MeanEnergyModel {
  packet_expectation,       // <H> of the minimum-uncertainty Gaussian (default)
  center_plus_zero_point,   // H(center) + kbar omega0(H(center)) / 2
};

/// <H> at eps = 0 of the Gaussian with per-axis position variance sigma
/// centred at (center.x, center.y) with mean momentum (center.px, center.py).
double packet_mean_energy(const DimensionlessParams& dp, double sigma, const PhaseState& center);

struct RevivalEstimate {
  double mean_energy;
  double omega0;
  double domega0_de;
  double classical_period;
  double revival_time;
};

/// T_rev = T0 (kbar/2 |d omega0 / dE|)^{-1} at the mean energy, derivative by
/// centered difference with relative step 1e-4. DegenerateError when
/// |d omega0/dE| < 1e-12.
RevivalEstimate revival_time(const std::function<double(double)>& omega0_of_e, double mean_energy,
                             double kbar);
RevivalEstimate revival_time(const DimensionlessParams& dp, double sigma, const PhaseState& center,
                             MeanEnergyModel model = MeanEnergyModel::packet_expectation);

}  // namespace evwg
