#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evwg/classical.hpp"
#include "evwg/error.hpp"
#include "evwg/resonance.hpp"

using namespace evwg;
using constants::pi;

namespace {

// Period of the unperturbed 1D motion from x = x_M at rest, timed by
// integrating until px changes sign for the second time (a full period)
// with linear interpolation of the crossing.
double timed_period(double h0, const DimensionlessParams& dp) {
  PhaseState s{turning_point(h0, dp), 0.0, 0.0, 0.0, 0.0};
  const double dt = 1e-3 * std::min(1.0, std::sqrt(h0));
  int crossings = 0;
  double prev_px = 0.0;
  s = advance(s, dt, dp, Scheme::forest_ruth4);
  prev_px = s.px;
  for (long i = 0; i < 100000000; ++i) {
    const PhaseState next = advance(s, dt, dp, Scheme::forest_ruth4);
    if ((prev_px < 0.0) != (next.px < 0.0) && next.px != 0.0) {
      if (++crossings == 2) {
        const double f = prev_px / (prev_px - next.px);
        return s.t + f * dt;
      }
    }
    prev_px = next.px;
    s = next;
  }
  return NAN;
}

}  // namespace

TEST_CASE("turning point") {
  const DimensionlessParams dp;
  const double s = dp.axis_potential();
  CHECK(turning_point(s * std::exp(2.0), dp) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(turning_point(0.2425, dp) == doctest::Approx(std::log(0.2425 / s)).epsilon(1e-14));
  CHECK_THROWS_AS(turning_point(s, dp), DomainError);
  CHECK_THROWS_AS(turning_point(0.5 * s, dp), DomainError);
}

TEST_CASE("quadrature frequency matches timed orbits") {
  const DimensionlessParams dp;
  for (double h0 : {0.05, 0.5, 5.0, 30.0}) {
    const double timed = 2.0 * pi / timed_period(h0, dp);
    CHECK(omega0_of_energy(h0, dp) == doctest::Approx(timed).epsilon(1e-3));
  }
}

TEST_CASE("near-bottom asymptote of the V-shaped well") {
  const DimensionlessParams dp;
  const double s = dp.axis_potential();
  const double e = 1e-6;
  const double asymptote = pi * s / (2.0 * std::sqrt(2.0 * e));
  CHECK(omega0_of_energy(s + e, dp) == doctest::Approx(asymptote).epsilon(1e-2));
}

TEST_CASE("quadrature is converged under point doubling") {
  const DimensionlessParams dp;
  for (double h0 : {0.02, 0.3, 4.0, 45.0}) {
    const double a = omega0_of_energy(h0, dp, 256);
    const double b = omega0_of_energy(h0, dp, 512);
    CHECK(std::abs(a / b - 1.0) < 1e-8);
  }
}

TEST_CASE("frequencies depend on xi and r1 only through xi exp(-r1)") {
  DimensionlessParams a;
  DimensionlessParams b = a;
  b.xi *= std::exp(1.3);
  b.r1 += 1.3;
  std::vector<double> grid{0.05, 0.1, 1.0, 10.0, 40.0};
  const auto ca = frequency_curve(a, grid);
  const auto cb = frequency_curve(b, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(ca[i].omega0 == doctest::Approx(cb[i].omega0).epsilon(1e-10));
    CHECK(ca[i].x_m == doctest::Approx(cb[i].x_m).epsilon(1e-10));
  }
}

TEST_CASE("frequency curve rejects unsorted grids and names the row") {
  const DimensionlessParams dp;
  std::vector<double> grid{0.1, 0.2, 0.2};
  try {
    frequency_curve(dp, grid);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }
  std::vector<double> below{0.001, 0.2};
  CHECK_THROWS_AS(frequency_curve(dp, below), DomainError);
}

TEST_CASE("frequency curve is U shaped") {
  const DimensionlessParams dp;
  const double s = dp.axis_potential();
  std::vector<double> grid;
  for (int i = 0; i < 120; ++i) grid.push_back(s + std::exp(-12.0 + 16.0 * i / 119.0));
  const auto curve = frequency_curve(dp, grid);
  std::size_t arg_min = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].omega0 < curve[arg_min].omega0) arg_min = i;
  }
  CHECK(arg_min > 0);
  CHECK(arg_min + 1 < curve.size());
  for (std::size_t i = 1; i <= arg_min; ++i) CHECK(curve[i].omega0 < curve[i - 1].omega0);
  for (std::size_t i = arg_min + 1; i < curve.size(); ++i) CHECK(curve[i].omega0 > curve[i - 1].omega0);
}

TEST_CASE("resonance radii solve omega0 = omega / j") {
  const DimensionlessParams dp;
  const auto radii = resonance_radii(dp, 8, 50.0);
  CHECK(radii.size() >= 8);
  for (const auto& r : radii) {
    CHECK(omega0_of_energy(r.h0, dp) == doctest::Approx(dp.omega_mod / r.j).epsilon(1e-9));
    CHECK(r.x_m == doctest::Approx(turning_point(r.h0, dp)).epsilon(1e-12));
  }
}

TEST_CASE("fixed points at strong modulation") {
  DimensionlessParams dp;
  dp.eps = 0.7;
  const SearchBox box{-2.0, 2.0, -1.0, 1.0};
  const auto points = find_fixed_points(dp, {}, box, 1, {9, 9, 50, 1e-10, 1e-6, 1e-6, 1});
  REQUIRE(!points.empty());
  CHECK(points.front().x == 0.0);
  CHECK(points.front().px == 0.0);
  CHECK(points.front().stability == Stability::elliptic);
  const StroboscopicMap map(dp, {});
  for (const auto& fp : points) {
    CHECK(box.contains(fp.x, fp.px));
    const PhaseState image = map({fp.x, 0.0, fp.px, 0.0, 0.0});
    CHECK(std::hypot(image.x - fp.x, image.px - fp.px) < 1e-8);
    if (!std::isnan(fp.det)) CHECK(fp.det == doctest::Approx(1.0).epsilon(1e-6));
    if (fp.stability == Stability::elliptic && !std::isnan(fp.trace)) CHECK(std::abs(fp.trace) < 2.0);
  }
}

TEST_CASE("revival time for a known spectrum") {
  // omega0(E) = 0.3 + 0.02 E: T0 = 2 pi / omega0, T_rev = T0 / (kbar/2 * 0.02).
  auto w = [](double e) { return 0.3 + 0.02 * e; };
  const auto est = revival_time(w, 2.0, 1.0);
  CHECK(est.omega0 == doctest::Approx(0.34).epsilon(1e-12));
  CHECK(est.domega0_de == doctest::Approx(0.02).epsilon(1e-8));
  CHECK(est.revival_time == doctest::Approx(2.0 * pi / 0.34 / 0.01).epsilon(1e-8));
  CHECK_THROWS_AS(revival_time([](double) { return 1.0; }, 2.0, 1.0), DegenerateError);
}

TEST_CASE("packet mean energy against direct grid integration") {
  const DimensionlessParams dp;
  const double sigma = 0.1;
  const PhaseState c{0.5, 0.5, 0.3, -0.2, 0.0};
  // <H> = |p0|^2/2 + kbar^2/(8 sigma) * 2 + <V> for the product Gaussian.
  const int n = 801;
  const double half = 3.0;
  const double h = 2.0 * half / (n - 1);
  double v = 0.0, norm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = c.x - half + i * h, y = c.y - half + j * h;
      const double g = std::exp(-((x - c.x) * (x - c.x) + (y - c.y) * (y - c.y)) / (2.0 * sigma));
      v += g * dp.xi * std::exp(std::hypot(x, y) - dp.r1);
      norm += g;
    }
  }
  const double expected = 0.5 * (0.09 + 0.04) + dp.kbar * dp.kbar / (4.0 * sigma) + v / norm;
  CHECK(packet_mean_energy(dp, sigma, c) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("revival estimate for the displaced packet") {
  const DimensionlessParams dp;
  const auto est = revival_time(dp, 0.1, {0.5, 0.5, 0.0, 0.0, 0.0});
  CHECK(est.mean_energy == doctest::Approx(2.531).epsilon(1e-3));
  CHECK(est.classical_period == doctest::Approx(2.0 * pi / est.omega0).epsilon(1e-14));
  CHECK(est.revival_time > 0.0);
  const auto alt = revival_time(dp, 0.1, {0.5, 0.5, 0.0, 0.0, 0.0}, MeanEnergyModel::center_plus_zero_point);
  CHECK(alt.mean_energy < est.mean_energy);
}
