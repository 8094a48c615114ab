#pragma once

// Laboratory <-> scaled units for an atom guided by a blue-detuned evanescent
// wall inside a hollow fiber.
//
// Scaled variables: lengths in units of 1/(2 kappa), time in units of
// 1/omega_ref, momenta in units of M omega_ref / (2 kappa). In these units the
// transverse Hamiltonian is
//
//   H(t) = (px^2 + py^2)/2 + xi exp(sqrt(x^2+y^2) - r1) (1 + eps cos(omega t))
//
// and the commutator [q, p] = i kbar.

namespace evwg {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J/K
inline constexpr double proton_mass = 1.67262192e-27;  // kg
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

struct PhysicalParams {
  double gamma = 0.0;      // atomic linewidth (rad/s)
  double lambda = 0.0;     // laser wavelength (m)
  double mass = 0.0;       // atomic mass (kg)
  double i_sat = 0.0;      // saturation intensity (W/m^2)
  double i0 = 0.0;         // input intensity at the fiber entrance (W/m^2)
  double detuning = 0.0;   // laser detuning, positive = blue (rad/s)
  double n_index = 1.5;    // refractive index of the fiber glass
  double theta = 0.0;      // internal reflection angle (rad)
  double r1_phys = 0.0;    // inner fiber radius (m)
  double omega_ref = 0.0;  // reference angular frequency (rad/s)
  double temperature_x = 0.0;  // transverse temperatures (K)
  double temperature_y = 0.0;
};

/// Helium 2^3S_1 -> 2^3P at 1.083 um in a 2 um radius fiber at 45 degrees.
/// Intensity and detuning are chosen so that xi comes out near 50.
PhysicalParams helium_defaults();

struct DimensionlessParams {
  double xi = 50.0;         // wall strength
  double r1 = 8.2056;       // scaled inner radius
  double omega_mod = 2.0;   // modulation frequency
  double eps = 0.0;         // modulation depth, [0, 1)
  double kbar = 1.0;        // scaled Planck constant

  double modulation_period() const;
  /// Potential value at the fiber axis, xi exp(-r1). Every dynamical quantity
  /// depends on (xi, r1) only through this combination.
  double axis_potential() const;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const PhysicalParams& p);
void validate(const DimensionlessParams& dp);

struct EvanescentCoefficients {
  double alpha;  // field enhancement factor
  double kappa;  // amplitude decay constant (1/m)
};

/// Throws DomainError at or below the critical angle.
EvanescentCoefficients evanescent_coefficients(const PhysicalParams& p);

enum class DipoleModel {
  exact,        // (hbar Delta / 2) ln(1 + p_sat)
  far_detuned,  // hbar Omega^2 / (4 Delta)
};

double saturation_parameter(double rabi_sq, const PhysicalParams& p);
double dipole_potential(double rabi_sq, const PhysicalParams& p, DipoleModel model);

/// Prefactor K of the wall potential K exp(2 kappa (r - r1)) in joules.
double wall_strength(const PhysicalParams& p);

DimensionlessParams scale_to_dimensionless(const PhysicalParams& p, double omega_mod = 2.0,
                                           double eps = 0.0);

double momentum_to_velocity(double p_scaled, const PhysicalParams& p);
double velocity_to_momentum(double v, const PhysicalParams& p);

// Inverse relations of the scaling.
double physical_radius(double r1_scaled, const PhysicalParams& p);
double omega_ref_from_kbar(double kbar, const PhysicalParams& p);

/// Scaled momentum variance of a thermal distribution at temperature T.
double momentum_variance_from_temperature(double temperature, const PhysicalParams& p);

}  // namespace evwg
