#include "evwg/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "evwg/error.hpp"

namespace evwg {

using constants::hbar;
using constants::pi;

PhysicalParams helium_defaults() {
  PhysicalParams p;
  p.gamma = 2.0 * pi * 1.6e6;
  p.lambda = 1.083e-6;
  p.mass = 4.0 * 1.6726e-27;
  p.i_sat = 1.6;  // 0.16 mW/cm^2
  p.detuning = 2.0 * pi * 1.0e9;
  p.i0 = 2926.0;
  p.n_index = 1.5;
  p.theta = pi / 4.0;
  p.r1_phys = 2.0e-6;
  p.omega_ref = 2.65e5;
  p.temperature_x = 0.0;
  p.temperature_y = 0.0;
  return p;
}

double DimensionlessParams::modulation_period() const { return 2.0 * pi / omega_mod; }

double DimensionlessParams::axis_potential() const { return xi * std::exp(-r1); }

void validate(const PhysicalParams& p) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(p.gamma >= 0.0, "gamma must be non-negative");
  require(p.lambda > 0.0, "lambda must be positive");
  require(p.mass > 0.0, "mass must be positive");
  require(p.i_sat > 0.0, "i_sat must be positive");
  require(p.i0 >= 0.0, "i0 must be non-negative");
  require(p.detuning > 0.0, "detuning must be positive (blue detuned)");
  require(p.n_index > 1.0, "n_index must exceed 1");
  require(p.r1_phys > 0.0, "r1_phys must be positive");
  require(p.omega_ref > 0.0, "omega_ref must be positive");
  require(p.temperature_x >= 0.0 && p.temperature_y >= 0.0, "temperatures must be non-negative");
  const double s = p.n_index * std::sin(p.theta);
  require(s * s > 1.0, "theta must exceed the critical angle asin(1/n_index)");
}

void validate(const DimensionlessParams& dp) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(dp.xi > 0.0, "xi must be positive");
  require(dp.r1 > 0.0, "r1 must be positive");
  require(dp.omega_mod > 0.0, "omega must be positive");
  require(dp.eps >= 0.0 && dp.eps < 1.0, "eps must lie in [0, 1)");
  require(dp.kbar > 0.0, "kbar must be positive");
}

EvanescentCoefficients evanescent_coefficients(const PhysicalParams& p) {
  const double n2 = p.n_index * p.n_index;
  const double sin_t = std::sin(p.theta);
  const double arg = n2 * sin_t * sin_t - 1.0;
  if (!(arg > 0.0)) {
    throw DomainError("evanescent_coefficients: theta at or below the critical angle (n^2 sin^2 theta = " +
                      std::to_string(n2 * sin_t * sin_t) + ")");
  }
  EvanescentCoefficients c;
  c.alpha = 2.0 * std::sqrt(n2 / (n2 - 1.0)) * std::cos(p.theta);
  c.kappa = (2.0 * pi / p.lambda) * std::sqrt(arg);
  return c;
}

double saturation_parameter(double rabi_sq, const PhysicalParams& p) {
  return 0.5 * rabi_sq / (p.detuning * p.detuning + 0.25 * p.gamma * p.gamma);
}

double dipole_potential(double rabi_sq, const PhysicalParams& p, DipoleModel model) {
  if (p.detuning == 0.0) throw std::invalid_argument("dipole_potential: zero detuning");
  switch (model) {
    case DipoleModel::exact:
      return 0.5 * hbar * p.detuning * std::log1p(saturation_parameter(rabi_sq, p));
    case DipoleModel::far_detuned:
      return hbar * rabi_sq / (4.0 * p.detuning);
  }
  return 0.0;
}

double wall_strength(const PhysicalParams& p) {
  const auto c = evanescent_coefficients(p);
  return hbar * p.gamma * p.gamma / (8.0 * p.detuning) * (p.i0 / p.i_sat) * c.alpha * c.alpha;
}

DimensionlessParams scale_to_dimensionless(const PhysicalParams& p, double omega_mod, double eps) {
  validate(p);
  const auto c = evanescent_coefficients(p);
  const double two_kappa = 2.0 * c.kappa;
  DimensionlessParams dp;
  dp.xi = wall_strength(p) * two_kappa * two_kappa / (p.mass * p.omega_ref * p.omega_ref);
  dp.r1 = two_kappa * p.r1_phys;
  dp.kbar = hbar * two_kappa * two_kappa / (p.mass * p.omega_ref);
  dp.omega_mod = omega_mod;
  dp.eps = eps;
  return dp;
}

double momentum_to_velocity(double p_scaled, const PhysicalParams& p) {
  return p_scaled * p.omega_ref / (2.0 * evanescent_coefficients(p).kappa);
}

double velocity_to_momentum(double v, const PhysicalParams& p) {
  return v * 2.0 * evanescent_coefficients(p).kappa / p.omega_ref;
}

double physical_radius(double r1_scaled, const PhysicalParams& p) {
  return r1_scaled / (2.0 * evanescent_coefficients(p).kappa);
}

double omega_ref_from_kbar(double kbar, const PhysicalParams& p) {
  const double two_kappa = 2.0 * evanescent_coefficients(p).kappa;
  return hbar * two_kappa * two_kappa / (p.mass * kbar);
}

double momentum_variance_from_temperature(double temperature, const PhysicalParams& p) {
  const double two_kappa = 2.0 * evanescent_coefficients(p).kappa;
  return constants::boltzmann * temperature /
         (p.mass * p.omega_ref * p.omega_ref / (two_kappa * two_kappa));
}

}  // namespace evwg
