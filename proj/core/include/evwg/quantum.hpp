#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "evwg/units.hpp"

namespace evwg {

/// Complex amplitudes on the periodic grid [-L, L)^2 with n points per axis.
struct Wavefunction {
  int n = 0;
  double half_width = 0.0;
  double kbar = 1.0;
  double t = 0.0;
  std::vector<std::complex<double>> amps;  // row-major, x fastest

  double dx() const { return 2.0 * half_width / n; }
  double coord(int i) const { return -half_width + i * dx(); }
  std::complex<double>& at(int ix, int iy) { return amps[static_cast<std::size_t>(iy) * n + ix]; }
  const std::complex<double>& at(int ix, int iy) const {
    return amps[static_cast<std::size_t>(iy) * n + ix];
  }
  /// Sum |psi|^2 dx dy.
  double norm() const;
};

/// Samples the minimum-uncertainty Gaussian with per-axis position variance
/// sigma (psi ~ exp(-(x-x0)^2/(4 sigma)) ...) and renormalises on the grid.
/// Throws std::invalid_argument if n is not a power of two or the packet
/// leaks: |psi| > 1e-12 anywhere on the domain edge.
Wavefunction init_min_uncertainty(int n, double half_width, double kbar, double x0, double y0,
                                  double p0x, double p0y, double sigma);

struct QuantumConfig {
  double dt = 0.0;
  bool mask_at_r1 = false;  // psi <- 0 for r >= r1 after every step

  /// T / dt, required to be an integer.
  int steps_per_strobe(const DimensionlessParams& dp) const;
};

QuantumConfig default_quantum_config(const DimensionlessParams& dp, int steps_per_strobe = 1024);

/// Time-independent factor of the potential; the propagated potential is
/// V(x, y) (1 + eps cos(omega t)).
using StaticPotential = std::function<double(double x, double y)>;

/// xi exp(sqrt(x^2 + y^2) - r1).
StaticPotential evanescent_wall(const DimensionlessParams& dp);

struct Observables {
  double t = 0.0;
  double strobe = 0.0;  // t / T
  double mean_x = 0.0;
  double var_x = 0.0;
  double mean_px = 0.0;
  double var_px = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double asymmetry = 0.0;  // NaN when not evaluated
};

using ObservableSeries = std::vector<Observables>;

/// Strang splitting: half kinetic step in wavenumber space with the exact
/// periodic-grid wavenumbers, full potential step at the mid-step time, half
/// kinetic step. Successive kinetic halves are fused inside `advance`.
class SplitStepPropagator {
 public:
  SplitStepPropagator(int n, double half_width, const DimensionlessParams& dp, const QuantumConfig& qc,
                      StaticPotential potential = {});
  ~SplitStepPropagator();
  SplitStepPropagator(SplitStepPropagator&&) noexcept;
  SplitStepPropagator& operator=(SplitStepPropagator&&) noexcept;

  /// Advances w by n_steps * dt. w.t is updated as t0 + n_steps * dt.
  void advance(Wavefunction& w, int n_steps) const;

  /// Every observable except the asymmetry (left NaN).
  Observables measure(const Wavefunction& w) const;

  double dt() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Single split-operator step (builds a propagator; use SplitStepPropagator
/// for repeated stepping).
Wavefunction split_step(Wavefunction w, const DimensionlessParams& dp, const QuantumConfig& qc,
                        const StaticPotential& potential = {});

struct PropagationOptions {
  StaticPotential potential;     // empty: evanescent wall
  bool record_asymmetry = true;  // evaluated at integer strobes only
  int asymmetry_n_r = 256;
  int asymmetry_n_theta = 256;
};

/// Evolves w in place by n_strobes modulation periods. Records the initial
/// state and then either every step or every integer strobe.
ObservableSeries propagate_strobes(Wavefunction& w, int n_strobes, const DimensionlessParams& dp,
                                   const QuantumConfig& qc, bool record_every_step,
                                   const PropagationOptions& options = {});

// ---- polar analysis --------------------------------------------------------

/// psi sampled on radii r_a = (a + 1/2) L / n_r and angles 2 pi b / n_theta by
/// band-limited (zero-padded FFT) upsampling followed by 6-point Lagrange
/// interpolation.
struct PolarRaster {
  int n_r = 0;
  int n_theta = 0;
  double r_max = 0.0;
  std::vector<std::complex<double>> values;  // [a * n_theta + b]

  double dr() const { return r_max / n_r; }
  double radius(int a) const { return (a + 0.5) * dr(); }
};

PolarRaster sample_polar(const Wavefunction& w, int n_r, int n_theta, int oversample = 4);

struct AngularPopulation {
  int m;
  double population;
};

/// Populations P_m = 2 pi Sum_r |a_m(r)|^2 r dr of psi = Sum_m a_m(r) e^{i m theta},
/// ordered by m from -n_theta/2 to n_theta/2 - 1. Sum_m P_m equals the
/// raster norm (Parseval over angle).
std::vector<AngularPopulation> angular_decompose(const Wavefunction& w, int n_r, int n_theta);

/// L1 distance between |psi|^2 and its angular average on the polar raster,
/// divided by the raster probability. Range [0, 2].
double asymmetry_metric(const Wavefunction& w, int n_r = 256, int n_theta = 256);

struct SlicePoint {
  double x;
  double probability;
};

/// |psi(x, y)|^2 along the grid row nearest to y.
std::vector<SlicePoint> slice_probability(const Wavefunction& w, double y);

}  // namespace evwg
