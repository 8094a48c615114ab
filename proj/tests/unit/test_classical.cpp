#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evwg/classical.hpp"

using namespace evwg;

namespace {

DimensionlessParams params(double eps) {
  DimensionlessParams dp;
  dp.eps = eps;
  return dp;
}

double distance(const PhaseState& a, const PhaseState& b) {
  return std::hypot(std::hypot(a.x - b.x, a.y - b.y), std::hypot(a.px - b.px, a.py - b.py));
}

// Determinant of the full 4x4 strobe-map Jacobian by centered differences.
double jacobian_det(const StroboscopicMap& map, const PhaseState& z, double h) {
  double J[4][4];
  for (int j = 0; j < 4; ++j) {
    PhaseState a = z, b = z;
    double* pa[4] = {&a.x, &a.y, &a.px, &a.py};
    double* pb[4] = {&b.x, &b.y, &b.px, &b.py};
    *pa[j] += h;
    *pb[j] -= h;
    const PhaseState fa = map(a), fb = map(b);
    const double da[4] = {fa.x, fa.y, fa.px, fa.py};
    const double db[4] = {fb.x, fb.y, fb.px, fb.py};
    for (int i = 0; i < 4; ++i) J[i][j] = (da[i] - db[i]) / (2.0 * h);
  }
  // Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    for (int r = c + 1; r < 4; ++r) {
      if (std::abs(J[r][c]) > std::abs(J[p][c])) p = r;
    }
    if (p != c) {
      for (int k = 0; k < 4; ++k) std::swap(J[p][k], J[c][k]);
      det = -det;
    }
    det *= J[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double f = J[r][c] / J[c][c];
      for (int k = c; k < 4; ++k) J[r][k] -= f * J[c][k];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("force is minus the potential gradient and vanishes on the axis") {
  const auto dp = params(0.7);
  const Force f0 = force(0.0, 0.0, 0.3, dp);
  CHECK(f0.fx == 0.0);
  CHECK(f0.fy == 0.0);
  const double h = 1e-6;
  for (auto [x, y, t] : {std::array{1.3, -0.4, 0.2}, std::array{-6.0, 5.0, 1.7}, std::array{0.01, 0.02, 3.0}}) {
    const Force f = force(x, y, t, dp);
    const double gx = (potential(x + h, y, t, dp) - potential(x - h, y, t, dp)) / (2 * h);
    const double gy = (potential(x, y + h, t, dp) - potential(x, y - h, t, dp)) / (2 * h);
    CHECK(f.fx == doctest::Approx(-gx).epsilon(1e-7));
    CHECK(f.fy == doctest::Approx(-gy).epsilon(1e-7));
  }
}

TEST_CASE("energy is conserved without modulation") {
  const auto dp = params(0.0);
  const StroboscopicMap map(dp, {});
  PhaseState s{2.3, -1.1, 0.4, 0.9, 0.0};
  const double e0 = hamiltonian(s, dp);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    s = map(s);
    worst = std::max(worst, std::abs(hamiltonian(s, dp) / e0 - 1.0));
  }
  CHECK(worst < 1e-8);
  CHECK(s.t == doctest::Approx(1000 * map.period()).epsilon(1e-15));
}

TEST_CASE("strobe map is volume preserving") {
  for (double eps : {0.0, 0.7}) {
    const StroboscopicMap map(params(eps), {});
    for (const PhaseState z : {PhaseState{1.0, 0.5, 0.3, -0.2, 0.0}, PhaseState{-4.0, 3.0, -1.0, 2.0, 0.0}}) {
      CHECK(jacobian_det(map, z, 1e-6) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("inverse map undoes the forward map") {
  const StroboscopicMap map(params(0.7), {});
  const PhaseState z{3.1, -2.0, 0.7, 1.5, 0.0};
  const PhaseState back = map.iterate(map.iterate(z, 25), -25);
  CHECK(distance(back, z) < 1e-9);
  CHECK(back.t == 0.0);
  CHECK(distance(map.inverse(map(z)), z) < 1e-12);
}

TEST_CASE("strobe map requires strobe times") {
  const StroboscopicMap map(params(0.7), {});
  PhaseState z{1.0, 0.0, 0.0, 0.0, 0.1};
  CHECK_THROWS_AS(map(z), std::invalid_argument);
  z.t = 3 * map.period();
  CHECK_NOTHROW(map(z));
}

TEST_CASE("integrator configuration validation") {
  IntegratorConfig cfg;
  cfg.steps_per_period = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.steps_per_period = 8;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.steps_per_period = 64;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("axis at rest is a fixed point and the invariant plane is preserved") {
  const StroboscopicMap map(params(0.7), {});
  const PhaseState o = map.iterate(PhaseState{}, 10);
  CHECK(o.x == 0.0);
  CHECK(o.px == 0.0);
  const PhaseState p = map.iterate(PhaseState{2.0, 0.0, 0.5, 0.0, 0.0}, 10);
  CHECK(p.y == 0.0);
  CHECK(p.py == 0.0);
}

TEST_CASE("rotating the initial condition rotates the trajectory") {
  const StroboscopicMap map(params(0.7), {});
  const PhaseState z{2.0, -1.0, 0.3, 0.8, 0.0};
  const double phi = 0.9;
  const double c = std::cos(phi), s = std::sin(phi);
  auto rotate = [&](const PhaseState& p) {
    return PhaseState{c * p.x - s * p.y, s * p.x + c * p.y, c * p.px - s * p.py, s * p.px + c * p.py, p.t};
  };
  CHECK(distance(map.iterate(rotate(z), 10), rotate(map.iterate(z, 10))) < 1e-9);
}

TEST_CASE("global error order of both schemes") {
  const auto dp = params(0.7);
  const PhaseState z{2.0, 1.0, 0.3, -0.4, 0.0};
  const int periods = 4;
  for (auto [scheme, order] : {std::pair{Scheme::leapfrog2, 2.0}, std::pair{Scheme::forest_ruth4, 4.0}}) {
    const PhaseState ref = StroboscopicMap(dp, {4096, scheme}).iterate(z, periods);
    const double e1 = distance(StroboscopicMap(dp, {128, scheme}).iterate(z, periods), ref);
    const double e2 = distance(StroboscopicMap(dp, {256, scheme}).iterate(z, periods), ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(order).epsilon(0.1));
  }
}

TEST_CASE("advance with a negative step reverses a positive one") {
  const auto dp = params(0.7);
  const PhaseState z{1.5, -0.5, 0.2, 0.1, 0.3};
  for (auto scheme : {Scheme::leapfrog2, Scheme::forest_ruth4}) {
    const PhaseState back = advance(advance(z, 0.01, dp, scheme), -0.01, dp, scheme);
    CHECK(distance(back, z) < 1e-13);
    CHECK(back.t == doctest::Approx(z.t).epsilon(1e-15));
  }
}

TEST_CASE("portrait records every strobe and is independent of thread count") {
  const auto dp = params(0.7);
  std::vector<PhaseState> seeds;
  for (int i = 0; i < 7; ++i) seeds.push_back({0.5 + i, 0.0, 0.0, 0.0, 0.0});
  const auto serial = portrait(seeds, 20, dp, {}, 1);
  const auto parallel = portrait(seeds, 20, dp, {}, 3);
  REQUIRE(serial.size() == seeds.size() * 21);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    CHECK(serial[i].strobe == parallel[i].strobe);
    CHECK(serial[i].x == parallel[i].x);
    CHECK(serial[i].px == parallel[i].px);
  }
}

TEST_CASE("finite-time Lyapunov exponent separates regular and chaotic motion") {
  // Without modulation every orbit is regular. A radial orbit would cross the
  // conical apex on the axis, where the tangent map is singular, so this one
  // carries angular momentum.
  const double regular = finite_time_lyapunov({3.0, 0.0, 0.0, 0.5, 0.0}, 400, params(0.0), {});
  CHECK(std::abs(regular) < 0.05);
  double largest = 0.0;
  for (double x : {2.0, 4.0, 6.0, 7.5}) {
    largest = std::max(largest, finite_time_lyapunov({x, 0.0, 0.0, 0.0, 0.0}, 400, params(0.7), {}));
  }
  CHECK(largest > 0.1);
}
