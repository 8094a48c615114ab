#include "evwg/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "evwg/error.hpp"
#include "evwg/parallel.hpp"
#include "evwg/quadrature.hpp"

namespace evwg {

using constants::pi;

double turning_point(double h0, const DimensionlessParams& dp) {
  const double s = dp.axis_potential();
  if (!(h0 > s)) {
    throw DomainError("turning_point: energy " + std::to_string(h0) +
                      " is not above the potential minimum " + std::to_string(s));
  }
  return std::log(h0 / s);
}

namespace {

// Int_0^{x_M} [2 (h0 - s e^x)]^{-1/2} dx with x = x_M sin u, u in [0, pi/2].
// With v = pi/2 - u:  h0 - s e^x = -h0 expm1(-2 x_M sin^2(v/2)),
// which keeps full relative precision at the turning point.
double half_action_integral(double h0, double xm, int n) {
  auto integrand = [&](double u) {
    const double v = 0.5 * pi - u;
    const double sv = std::sin(0.5 * v);
    const double gap = -h0 * std::expm1(-2.0 * xm * sv * sv);
    return xm * std::sin(v) / std::sqrt(2.0 * gap);
  };
  return integrate_gauss_legendre(integrand, 0.0, 0.5 * pi, n);
}

}  // namespace

double omega0_of_energy(double h0, const DimensionlessParams& dp, int quad_points) {
  const double xm = turning_point(h0, dp);
  if (quad_points < 2) throw std::invalid_argument("omega0_of_energy: quad_points must be >= 2");
  constexpr int kMaxPoints = 1 << 16;
  int n = quad_points;
  double coarse = half_action_integral(h0, xm, n);
  while (n < kMaxPoints) {
    n *= 2;
    const double fine = half_action_integral(h0, xm, n);
    if (std::abs(fine - coarse) <= 1e-8 * std::abs(fine)) {
      return pi / (2.0 * fine);
    }
    coarse = fine;
  }
  throw AccuracyError("omega0_of_energy: quadrature did not converge at h0 = " + std::to_string(h0));
}

FrequencyCurve frequency_curve(const DimensionlessParams& dp, std::span<const double> h_grid,
                               int quad_points) {
  FrequencyCurve curve;
  curve.reserve(h_grid.size());
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (i > 0 && !(h_grid[i] > h_grid[i - 1])) {
      throw std::invalid_argument("frequency_curve: energy grid not strictly increasing at row " +
                                  std::to_string(i));
    }
    try {
      curve.push_back({h_grid[i], turning_point(h_grid[i], dp),
                       omega0_of_energy(h_grid[i], dp, quad_points)});
    } catch (const DomainError& e) {
      throw DomainError("frequency_curve row " + std::to_string(i) + ": " + e.what());
    } catch (const AccuracyError& e) {
      throw AccuracyError("frequency_curve row " + std::to_string(i) + ": " + e.what());
    }
  }
  return curve;
}

std::vector<ResonanceRadius> resonance_radii(const DimensionlessParams& dp, int j_max, double h_max) {
  const double s = dp.axis_potential();
  if (!(h_max > s)) throw DomainError("resonance_radii: h_max below the potential minimum");
  // Scan in the excess energy (h - s)/s on a log grid; omega0 -> infinity at
  // the bottom and is U-shaped above it.
  constexpr int kScan = 600;
  const double lo = std::log(1e-10);
  const double hi = std::log((h_max - s) / s);
  std::vector<double> h(kScan), w(kScan);
  for (int i = 0; i < kScan; ++i) {
    h[i] = s * (1.0 + std::exp(lo + (hi - lo) * i / (kScan - 1)));
    w[i] = omega0_of_energy(h[i], dp);
  }
  std::vector<ResonanceRadius> out;
  for (int j = 1; j <= j_max; ++j) {
    const double target = dp.omega_mod / j;
    auto f = [&](double e) { return omega0_of_energy(e, dp) - target; };
    for (int i = 0; i + 1 < kScan; ++i) {
      const double a = w[i] - target;
      const double b = w[i + 1] - target;
      if (a == 0.0) {
        out.push_back({j, h[i], turning_point(h[i], dp)});
        continue;
      }
      if (a * b >= 0.0) continue;
      boost::uintmax_t iters = 200;
      auto tol = [](double x0, double x1) { return std::abs(x1 - x0) <= 1e-14 * std::abs(x1); };
      const auto [r0, r1] = boost::math::tools::toms748_solve(f, h[i], h[i + 1], a, b, tol, iters);
      const double root = 0.5 * (r0 + r1);
      out.push_back({j, root, turning_point(root, dp)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ResonanceRadius& l, const ResonanceRadius& r) { return l.h0 < r.h0; });
  return out;
}

const char* to_string(Stability s) { return s == Stability::elliptic ? "elliptic" : "hyperbolic"; }

namespace {

using Vec2 = std::array<double, 2>;

struct Jacobian2 {
  double a, b, c, d;  // [[a, b], [c, d]]
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
};

Vec2 apply_map(const StroboscopicMap& map, const Vec2& z, int period) {
  PhaseState s{z[0], 0.0, z[1], 0.0, 0.0};
  s = map.iterate(s, period);
  return {s.x, s.px};
}

Jacobian2 map_jacobian(const StroboscopicMap& map, const Vec2& z, int period, double h) {
  const Vec2 xp = apply_map(map, {z[0] + h, z[1]}, period);
  const Vec2 xm = apply_map(map, {z[0] - h, z[1]}, period);
  const Vec2 pp = apply_map(map, {z[0], z[1] + h}, period);
  const Vec2 pm = apply_map(map, {z[0], z[1] - h}, period);
  return {(xp[0] - xm[0]) / (2 * h), (pp[0] - pm[0]) / (2 * h), (xp[1] - xm[1]) / (2 * h),
          (pp[1] - pm[1]) / (2 * h)};
}

std::optional<FixedPoint> newton_from(const StroboscopicMap& map, Vec2 z, int period,
                                      const FixedPointSearch& search, const SearchBox& box) {
  const double span = std::hypot(box.x_max - box.x_min, box.px_max - box.px_min);
  for (int it = 0; it <= search.max_iterations; ++it) {
    const Vec2 fz = apply_map(map, z, period);
    const Vec2 f{fz[0] - z[0], fz[1] - z[1]};
    const double residual = std::hypot(f[0], f[1]);
    if (!std::isfinite(residual)) return std::nullopt;
    if (residual < search.tolerance) {
      return FixedPoint{z[0], z[1], residual, Stability::hyperbolic, period, 0.0, 0.0};
    }
    if (it == search.max_iterations) break;
    Jacobian2 j = map_jacobian(map, z, period, search.fd_step);
    j.a -= 1.0;
    j.d -= 1.0;
    const double det = j.det();
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double dx = -(j.d * f[0] - j.b * f[1]) / det;
    const double dp = -(-j.c * f[0] + j.a * f[1]) / det;
    z[0] += dx;
    z[1] += dp;
    if (std::hypot(dx, dp) > span) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                          const SearchBox& box, int period,
                                          const FixedPointSearch& search) {
  if (period < 1) throw std::invalid_argument("find_fixed_points: period must be >= 1");
  if (search.seeds_x < 1 || search.seeds_px < 1) {
    throw std::invalid_argument("find_fixed_points: need at least one seed per axis");
  }
  const StroboscopicMap map(dp, cfg);
  const std::size_t n_seeds = static_cast<std::size_t>(search.seeds_x) * search.seeds_px;
  std::vector<std::optional<FixedPoint>> found(n_seeds);
  auto coord = [](double lo, double hi, int n, int i) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
  };
  parallel_for(n_seeds, search.threads, [&](std::size_t k) {
    const int ix = static_cast<int>(k % search.seeds_x);
    const int ip = static_cast<int>(k / search.seeds_x);
    const Vec2 seed{coord(box.x_min, box.x_max, search.seeds_x, ix),
                    coord(box.px_min, box.px_max, search.seeds_px, ip)};
    found[k] = newton_from(map, seed, period, search, box);
  });

  std::vector<FixedPoint> out;
  auto is_duplicate = [&](double x, double px) {
    return std::any_of(out.begin(), out.end(), [&](const FixedPoint& q) {
      return std::hypot(q.x - x, q.px - px) < search.dedup_distance;
    });
  };
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (box.contains(0.0, 0.0)) {
    out.push_back({0.0, 0.0, 0.0, Stability::elliptic, period, nan, nan});
  }
  for (auto& candidate : found) {
    if (!candidate || !box.contains(candidate->x, candidate->px)) continue;
    if (is_duplicate(candidate->x, candidate->px)) continue;
    if (candidate->x == 0.0 && candidate->px == 0.0) continue;
    const Jacobian2 j = map_jacobian(map, {candidate->x, candidate->px}, period, search.fd_step);
    candidate->trace = j.trace();
    candidate->det = j.det();
    candidate->stability = std::abs(candidate->trace) < 2.0 ? Stability::elliptic : Stability::hyperbolic;
    out.push_back(*candidate);
  }
  return out;
}

// ---- revival time ----------------------------------------------------------

namespace {

// e^{-z} I_0(z) = (1/pi) Int_0^pi exp(z (cos phi - 1)) dphi; the trapezoid rule
// is spectrally accurate for this periodic integrand.
double scaled_bessel_i0(double z) {
  const int n = std::clamp(static_cast<int>(8.0 * std::sqrt(z + 1.0)) + 64, 64, 4096);
  double sum = 0.5 * (1.0 + std::exp(-2.0 * z));
  for (int k = 1; k < n; ++k) sum += std::exp(z * (std::cos(pi * k / n) - 1.0));
  return sum / n;
}

}  // namespace

double packet_mean_energy(const DimensionlessParams& dp, double sigma, const PhaseState& center) {
  if (!(sigma > 0.0)) throw std::invalid_argument("packet_mean_energy: sigma must be positive");
  const double kinetic = 0.5 * (center.px * center.px + center.py * center.py) +
                         dp.kbar * dp.kbar / (4.0 * sigma);
  // Radial density of an isotropic 2D Gaussian (variance sigma per axis)
  // centred a distance d from the axis:
  //   rho(r) = (r / sigma) exp(-(r - d)^2 / (2 sigma)) e^{-z} I_0(z),  z = r d / sigma.
  const double d = std::hypot(center.x, center.y);
  const double width = 12.0 * std::sqrt(sigma);
  const double r_lo = std::max(0.0, d - width);
  const double r_hi = d + width;
  auto integrand = [&](double r) {
    const double z = r * d / sigma;
    const double rho = (r / sigma) * std::exp(-(r - d) * (r - d) / (2.0 * sigma)) * scaled_bessel_i0(z);
    return rho * dp.xi * std::exp(r - dp.r1);
  };
  const double potential_energy = integrate_gauss_legendre(integrand, r_lo, r_hi, 512);
  return kinetic + potential_energy;
}

RevivalEstimate revival_time(const std::function<double(double)>& omega0_of_e, double mean_energy,
                             double kbar) {
  const double h = 1e-4 * std::abs(mean_energy);
  RevivalEstimate est{};
  est.mean_energy = mean_energy;
  est.omega0 = omega0_of_e(mean_energy);
  est.domega0_de = (omega0_of_e(mean_energy + h) - omega0_of_e(mean_energy - h)) / (2.0 * h);
  est.classical_period = 2.0 * pi / est.omega0;
  if (std::abs(est.domega0_de) < 1e-12) {
    throw DegenerateError("revival_time: d omega0/dE vanishes at E = " + std::to_string(mean_energy) +
                          "; the spectrum is locally equally spaced and the revival time unbounded");
  }
  est.revival_time = est.classical_period / (0.5 * kbar * std::abs(est.domega0_de));
  return est;
}

RevivalEstimate revival_time(const DimensionlessParams& dp, double sigma, const PhaseState& center,
                             MeanEnergyModel model) {
  double energy = 0.0;
  switch (model) {
    case MeanEnergyModel::packet_expectation:
      energy = packet_mean_energy(dp, sigma, center);
      break;
    case MeanEnergyModel::center_plus_zero_point: {
      DimensionlessParams unmodulated = dp;
      unmodulated.eps = 0.0;
      PhaseState c = center;
      c.t = 0.0;
      const double classical = hamiltonian(c, unmodulated);
      energy = classical + 0.5 * dp.kbar * omega0_of_energy(classical, dp);
      break;
    }
  }
  const double s = dp.axis_potential();
  if (!(energy * (1.0 - 1e-4) > s)) {
    throw DomainError("revival_time: mean energy " + std::to_string(energy) +
                      " too close to the potential minimum");
  }
  return revival_time([&](double e) { return omega0_of_energy(e, dp); }, energy, dp.kbar);
}

}  // namespace evwg
