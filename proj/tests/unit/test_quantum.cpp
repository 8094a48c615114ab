#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evwg/quantum.hpp"

using namespace evwg;
using constants::pi;

namespace {

constexpr double L = 12.2056;  // r1 + 4

DimensionlessParams params(double eps) {
  DimensionlessParams dp;
  dp.eps = eps;
  return dp;
}

double l2_distance(const Wavefunction& a, const Wavefunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) d += std::norm(a.amps[i] - b.amps[i]);
  return std::sqrt(d * a.dx() * a.dx());
}

}  // namespace

TEST_CASE("minimum-uncertainty packet") {
  const auto w = init_min_uncertainty(256, 12.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.1);
  CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const SplitStepPropagator prop(256, 12.0, params(0.0), default_quantum_config(params(0.0)));
  const auto o = prop.measure(w);
  CHECK(o.var_x == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(o.var_x * o.var_px == doctest::Approx(0.25).epsilon(5e-3));

  const auto moving = init_min_uncertainty(256, 12.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.1);
  CHECK(std::abs(prop.measure(moving).mean_px - 1.0) < 1e-6);
}

TEST_CASE("packet preconditions") {
  CHECK_THROWS_AS(init_min_uncertainty(200, 12.0, 1.0, 0, 0, 0, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(init_min_uncertainty(256, 12.0, 1.0, 11.0, 0, 0, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(init_min_uncertainty(256, 12.0, 1.0, 0, 0, 0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("time step must divide the modulation period") {
  const auto dp = params(0.0);
  QuantumConfig qc;
  qc.dt = 0.01;
  CHECK_THROWS_AS(qc.steps_per_strobe(dp), std::invalid_argument);
  CHECK(default_quantum_config(dp, 512).steps_per_strobe(dp) == 512);
}

TEST_CASE("free spreading") {
  // T = 0.2 so that one strobe of 64 steps lands exactly on t = 0.2.
  DimensionlessParams dp;
  dp.omega_mod = 2.0 * pi / 0.2;
  const auto qc = default_quantum_config(dp, 64);
  PropagationOptions opt;
  opt.potential = [](double, double) { return 0.0; };
  opt.record_asymmetry = false;
  auto w = init_min_uncertainty(256, 12.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.1);
  const auto series = propagate_strobes(w, 1, dp, qc, false, opt);
  REQUIRE(series.size() == 2);
  CHECK(series.back().t == doctest::Approx(0.2).epsilon(1e-15));
  const double expected = 0.1 + 0.2 * 0.2 / (4.0 * 0.1);
  CHECK(expected == doctest::Approx(0.2));
  CHECK(series.back().var_x == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("unitarity over 10^4 steps") {
  const auto dp = params(0.7);
  const auto qc = default_quantum_config(dp, 1000);
  const SplitStepPropagator prop(128, L, dp, qc);
  auto w = init_min_uncertainty(128, L, 1.0, 0.5, 0.5, 0.3, 0.0, 0.3);
  prop.advance(w, 10000);
  CHECK(std::abs(w.norm() - 1.0) < 1e-10);
}

TEST_CASE("split_step matches one propagator step") {
  const auto dp = params(0.7);
  const auto qc = default_quantum_config(dp, 256);
  const auto w0 = init_min_uncertainty(64, L, 1.0, 0.5, 0.0, 0.0, 0.0, 0.3);
  const auto a = split_step(w0, dp, qc);
  Wavefunction b = w0;
  SplitStepPropagator(64, L, dp, qc).advance(b, 1);
  CHECK(l2_distance(a, b) < 1e-15);
  CHECK(a.t == doctest::Approx(qc.dt));
}

TEST_CASE("second-order global convergence") {
  const auto dp = params(0.7);
  const double T = dp.modulation_period();
  const auto w0 = init_min_uncertainty(128, L, 1.0, 1.0, 0.5, 0.5, 0.0, 0.3);
  auto evolve = [&](int steps) {
    Wavefunction w = w0;
    SplitStepPropagator(128, L, dp, default_quantum_config(dp, steps)).advance(w, steps);
    return w;
  };
  const auto ref = evolve(64 * 32);
  std::vector<double> errs;
  for (int s : {16, 32, 64}) errs.push_back(l2_distance(evolve(s), ref));
  const double slope = std::log2(errs[0] / errs[2]) / 2.0;
  MESSAGE("errors " << errs[0] << " " << errs[1] << " " << errs[2] << " slope " << slope);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(T > 0.0);
}

TEST_CASE("energy expectation is conserved without modulation") {
  const auto dp = params(0.0);
  auto w = init_min_uncertainty(128, L, 1.0, 0.5, 0.5, 0.0, 0.0, 0.3);
  PropagationOptions opt;
  opt.record_asymmetry = false;
  const auto series = propagate_strobes(w, 10, dp, default_quantum_config(dp, 1024), false, opt);
  for (const auto& o : series) CHECK(o.energy == doctest::Approx(series.front().energy).epsilon(1e-6));
  for (const auto& o : series) CHECK(o.var_x * o.var_px >= 0.25 * (1.0 - 1e-3));
}

TEST_CASE("mask at r1 never increases the norm") {
  const auto dp = params(0.7);
  auto qc = default_quantum_config(dp, 256);
  qc.mask_at_r1 = true;
  auto w = init_min_uncertainty(128, L, 1.0, 0.0, 0.0, 3.0, 0.0, 0.3);
  PropagationOptions opt;
  opt.record_asymmetry = false;
  const auto series = propagate_strobes(w, 4, dp, qc, false, opt);
  for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].norm <= series[i - 1].norm + 1e-15);
  CHECK(series.back().norm < 1.0);
}

TEST_CASE("spectral convergence in the grid size") {
  const auto dp = params(0.7);
  PropagationOptions opt;
  opt.record_asymmetry = false;
  auto run = [&](int n) {
    auto w = init_min_uncertainty(n, L, 1.0, 0.5, 0.5, 0.0, 0.0, 0.1);
    return propagate_strobes(w, 1, dp, default_quantum_config(dp, 512), false, opt).back();
  };
  const auto a = run(256);
  const auto b = run(512);
  CHECK(std::abs(a.var_x - b.var_x) < 1e-6 * b.var_x);
  CHECK(std::abs(a.var_px - b.var_px) < 1e-6 * b.var_px);
  CHECK(std::abs(a.energy - b.energy) < 1e-6 * b.energy);
}

TEST_CASE("angular decomposition") {
  const auto centred = init_min_uncertainty(256, L, 1.0, 0.0, 0.0, 0.0, 0.0, 0.1);
  const auto pops = angular_decompose(centred, 256, 256);
  REQUIRE(pops.size() == 256);
  double total = 0.0, others = 0.0, p0 = 0.0;
  for (const auto& p : pops) {
    total += p.population;
    if (p.m == 0) p0 = p.population;
    else others += p.population;
  }
  CHECK(p0 > 0.999);
  CHECK(others < 1e-3);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-2));

  const auto shifted = init_min_uncertainty(256, L, 1.0, 0.5, 0.0, 0.0, 0.0, 0.1);
  const auto sp = angular_decompose(shifted, 256, 256);
  for (int m = 1; m < 128; ++m) CHECK(std::abs(sp[128 + m].population - sp[128 - m].population) < 1e-6);
  CHECK_THROWS_AS(angular_decompose(shifted, 64, 48), std::invalid_argument);
}

TEST_CASE("asymmetry metric") {
  const auto centred = init_min_uncertainty(256, L, 1.0, 0.0, 0.0, 0.0, 0.0, 0.1);
  CHECK(asymmetry_metric(centred) < 1e-8);
  const auto shifted = init_min_uncertainty(256, L, 1.0, 2.0, 0.0, 0.0, 0.0, 0.1);
  const double a = asymmetry_metric(shifted);
  CHECK(a > 1.0);
  CHECK(a <= 2.0);
}

TEST_CASE("rotating the initial state rotates the evolved state") {
  const auto dp = params(0.7);
  const int n_theta = 256;
  const int shift = 29;
  const double alpha = 2.0 * pi * shift / n_theta;
  const double x0 = 1.0, y0 = 0.3, px = 0.4, py = -0.2;
  const double c = std::cos(alpha), s = std::sin(alpha);
  auto a = init_min_uncertainty(256, L, 1.0, x0, y0, px, py, 0.3);
  auto b = init_min_uncertainty(256, L, 1.0, c * x0 - s * y0, s * x0 + c * y0, c * px - s * py, s * px + c * py, 0.3);
  PropagationOptions opt;
  opt.record_asymmetry = false;
  const auto qc = default_quantum_config(dp, 512);
  propagate_strobes(a, 5, dp, qc, false, opt);
  propagate_strobes(b, 5, dp, qc, false, opt);
  const auto ra = sample_polar(a, 128, n_theta);
  const auto rb = sample_polar(b, 128, n_theta);
  double diff = 0.0, ref = 0.0;
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const auto va = ra.values[i * n_theta + j];
      const auto vb = rb.values[i * n_theta + (j + shift) % n_theta];
      const double w = ra.radius(i);
      diff += std::norm(va - vb) * w;
      ref += std::norm(va) * w;
    }
  }
  CHECK(std::sqrt(diff / ref) < 1e-4);
}

TEST_CASE("slices") {
  const double sigma = 0.1;
  const auto w = init_min_uncertainty(256, L, 1.0, 0.0, 0.0, 0.0, 0.0, sigma);
  const auto slice = slice_probability(w, 0.0);
  REQUIRE(slice.size() == 256);
  for (int i = 1; i < 256; ++i) CHECK(std::abs(slice[i].probability - slice[256 - i].probability) < 1e-12);
  const double peak = 1.0 / (2.0 * pi * sigma);
  for (const auto& p : slice) CHECK(std::abs(p.probability - peak * std::exp(-p.x * p.x / (2 * sigma))) < 1e-6);

  // the nearest grid row is used
  const double dx = w.dx();
  CHECK(slice_probability(w, 0.4 * dx)[128].probability == slice[128].probability);

  double total = 0.0;
  for (int j = 0; j < w.n; ++j) {
    for (const auto& p : slice_probability(w, w.coord(j))) total += p.probability;
  }
  CHECK(total * dx * dx == doctest::Approx(1.0).epsilon(1e-9));
}
