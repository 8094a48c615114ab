#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "evwg/units.hpp"

namespace evwg {

struct PhaseState {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
  double t = 0.0;
};

enum class Scheme { leapfrog2, forest_ruth4 };

struct IntegratorConfig {
  int steps_per_period = 256;  // power of two, >= 16
  Scheme scheme = Scheme::forest_ruth4;

  void validate() const;
};

struct Force {
  double fx;
  double fy;
};

/// xi exp(r - r1) (1 + eps cos(omega t)).
double potential(double x, double y, double t, const DimensionlessParams& dp);

/// Minus the gradient of `potential`. Returns (0, 0) at r = 0 exactly, where
/// the conical minimum has no unique gradient.
Force force(double x, double y, double t, const DimensionlessParams& dp);

/// Instantaneous H(t) evaluated at s.t.
double hamiltonian(const PhaseState& s, const DimensionlessParams& dp);

/// Advances by an arbitrary (possibly negative) time step. Kicks use the
/// force at their own sub-stage time.
PhaseState advance(const PhaseState& s, double dt, const DimensionlessParams& dp, Scheme scheme);

/// One step of size T / steps_per_period.
PhaseState step(const PhaseState& s, const DimensionlessParams& dp, const IntegratorConfig& cfg);

/// Stroboscopic map over one modulation period T = 2 pi / omega.
///
/// The modulation factor of every kick inside a period is tabulated once, so
/// all periods see bit-identical kicks and the state time is kept as an exact
/// strobe count times T. `inverse` undoes `operator()` sub-step by sub-step in
/// reverse order (time-reversed modulation phase).
class StroboscopicMap {
 public:
  StroboscopicMap(const DimensionlessParams& dp, const IntegratorConfig& cfg);

  /// Precondition: s.t is an integer multiple of T (checked).
  PhaseState operator()(const PhaseState& s) const;
  PhaseState inverse(const PhaseState& s) const;
  PhaseState iterate(PhaseState s, int n) const;

  double period() const { return period_; }
  const DimensionlessParams& params() const { return dp_; }
  const IntegratorConfig& config() const { return cfg_; }

 private:
  long long strobe_index(double t) const;
  void kick(PhaseState& s, double coeff, double modulation) const;

  DimensionlessParams dp_;
  IntegratorConfig cfg_;
  double period_;
  double dt_;
  std::vector<double> drift_;       // per stage, in units of dt
  std::vector<double> kick_;        // per stage, in units of dt
  std::vector<double> modulation_;  // steps * kicks-per-step factors
};

PhaseState strobe_map(const PhaseState& s, const DimensionlessParams& dp, const IntegratorConfig& cfg);

struct PortraitRecord {
  std::size_t seed;
  int strobe;
  double x;
  double px;
};

/// Records (x, px) at strobes 0..n_strobes for every seed; seeds are expected
/// in the invariant plane y = py = 0.
std::vector<PortraitRecord> portrait(std::span<const PhaseState> seeds, int n_strobes,
                                     const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                     int threads = 1);

/// Largest finite-time Lyapunov exponent per modulation period of an orbit in
/// the invariant plane, from the linearised strobe map (centered differences
/// along the current tangent vector, renormalised every strobe).
double finite_time_lyapunov(const PhaseState& seed, int n_strobes, const DimensionlessParams& dp,
                            const IntegratorConfig& cfg);

}  // namespace evwg
