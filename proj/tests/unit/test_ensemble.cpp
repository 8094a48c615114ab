#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "evwg/ensemble.hpp"

using namespace evwg;

namespace {

DimensionlessParams params(double eps) {
  DimensionlessParams dp;
  dp.eps = eps;
  return dp;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sa = 0, sb = 0, sab = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += (a[i] - ma) * (a[i] - ma);
    sb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  return sab / std::sqrt(sa * sb);
}

}  // namespace

TEST_CASE("degenerate momentum distribution") {
  EnsembleSpec spec;
  spec.n_atoms = 500;
  spec.sigma_p = 0.0;
  spec.p0x = 0.25;
  spec.p0y = -1.0;
  for (const auto& a : sample_initial(spec)) {
    CHECK(a.px == 0.25);
    CHECK(a.py == -1.0);
  }
}

TEST_CASE("sampled momentum variance and radial law") {
  EnsembleSpec spec;
  spec.n_atoms = 100000;
  spec.sigma_p = 0.1;
  spec.seed = 42;
  const auto atoms = sample_initial(spec);
  double m = 0.0, m2 = 0.0;
  for (const auto& a : atoms) m += a.px;
  m /= atoms.size();
  for (const auto& a : atoms) m2 += (a.px - m) * (a.px - m);
  const double var = m2 / (atoms.size() - 1);
  CHECK(var > 0.097);
  CHECK(var < 0.103);

  std::vector<double> r;
  r.reserve(atoms.size());
  for (const auto& a : atoms) r.push_back(std::hypot(a.x, a.y));
  std::sort(r.begin(), r.end());
  double ks = 0.0;
  const double R2 = spec.disk_radius * spec.disk_radius;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double cdf = r[i] * r[i] / R2;
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / r.size()),
                   std::abs(cdf - static_cast<double>(i + 1) / r.size())});
  }
  CHECK(ks < 0.006);
}

TEST_CASE("sampling is reproducible and independent of threads") {
  EnsembleSpec spec;
  spec.n_atoms = 2000;
  const auto a = sample_initial(spec, 1);
  const auto b = sample_initial(spec, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].py == b[i].py);
  }
  spec.seed = 2;
  CHECK(sample_initial(spec)[0].x != a[0].x);
}

TEST_CASE("evolution conserves atoms, energy without modulation, and the axis") {
  const auto dp = params(0.0);
  EnsembleSpec spec;
  spec.n_atoms = 100;
  auto atoms = sample_initial(spec);
  atoms.push_back({});

  // Atoms starting near the wall carry energies up to xi and bounce off its
  // steep exponential; the drift there is pure discretisation error, so the
  // 1e-8 bound is checked at a step that resolves the bounce.
  const auto fine = evolve_ensemble(atoms, 50, dp, {16384, Scheme::forest_ruth4});
  REQUIRE(fine.size() == atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    CHECK(std::abs(hamiltonian(fine[i], dp) / hamiltonian(atoms[i], dp) - 1.0) < 1e-8);
  }
  CHECK(fine.back().x == 0.0);
  CHECK(fine.back().px == 0.0);

  // At the default step the drift shrinks at fourth order.
  auto worst = [&](int steps) {
    const auto ev = evolve_ensemble(atoms, 50, dp, {steps, Scheme::forest_ruth4});
    double w = 0.0;
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
      w = std::max(w, std::abs(hamiltonian(ev[i], dp) / hamiltonian(atoms[i], dp) - 1.0));
    }
    return w;
  };
  const double coarse = worst(256), finer = worst(512);
  MESSAGE("worst relative energy drift: " << coarse << " at T/256, " << finer << " at T/512");
  CHECK(coarse / finer > 12.0);
}

TEST_CASE("density at t = 0 and along trajectories") {
  const auto dp = params(0.7);
  EnsembleSpec spec;
  const PhaseState z{1.0, -2.0, 0.1, 0.3, 0.0};
  CHECK(evaluate_density(z, 0, spec, dp, {}) == initial_density(z, spec));
  CHECK(initial_density({spec.disk_radius, 0.0, 0.0, 0.0, 0.0}, spec) == 0.0);

  const StroboscopicMap map(dp, {});
  PhaseState s = z;
  const double q0 = initial_density(z, spec);
  for (int k = 1; k <= 20; ++k) {
    s = map(s);
    CHECK(evaluate_density(s, k, spec, dp, {}) == doctest::Approx(q0).epsilon(1e-6));
  }
}

TEST_CASE("histogram bookkeeping") {
  const Extent e{-1.0, 1.0, -1.0, 1.0};
  std::vector<PhaseState> one{{-0.75, 0.25, 0.0, 0.0, 0.0}};
  const auto h = histogram_xy(one, 4, 4, e);
  CHECK(h.total() == 1);
  CHECK(h.at(0, 2) == 1);

  EnsembleSpec spec;
  spec.n_atoms = 5000;
  const auto atoms = sample_initial(spec);
  const auto small = histogram_xy(atoms, 16, 16, {-4.0, 4.0, -4.0, 4.0});
  CHECK(small.total() + small.overflow == atoms.size());
  CHECK(small.overflow > 0);
  CHECK_THROWS_AS(histogram_xy(atoms, 0, 16, e), std::invalid_argument);
}

TEST_CASE("sampled and transported densities agree in phase space") {
  // Occupancy of coarse 4D cells at strobe 10 against the expected count
  // N * volume * <Q>, with <Q> a Monte Carlo average over the cell. Q is
  // filamented far below the cell size by strobe 10, so its value at the cell
  // centre is reported but does not represent the cell.
  const auto dp = params(0.7);
  EnsembleSpec spec;
  spec.n_atoms = 100000;
  spec.seed = 7;
  const int strobes = 10;
  const double t = strobes * dp.modulation_period();
  const auto atoms = evolve_ensemble(sample_initial(spec), strobes, dp, {});

  const int nb = 6;
  const double range[4] = {dp.r1 + 1.0, dp.r1 + 1.0, 1.2, 1.2};
  auto cell = [&](double v, int d) { return static_cast<int>(std::floor((v + range[d]) / (2.0 * range[d]) * nb)); };
  std::map<int, int> counts;
  for (const auto& a : atoms) {
    const double v[4] = {a.x, a.y, a.px, a.py};
    int key = 0;
    bool inside = true;
    for (int d = 0; d < 4; ++d) {
      const int c = cell(v[d], d);
      inside = inside && c >= 0 && c < nb;
      key = key * nb + c;
    }
    if (inside) ++counts[key];
  }

  double volume = 1.0;
  for (double r : range) volume *= 2.0 * r / nb;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> occ, expected, centre;
  for (const auto& [key, n] : counts) {
    if (n < 20) continue;
    double lo[4];
    for (int d = 3, k = key; d >= 0; --d, k /= nb) lo[d] = -range[d] + (k % nb) * 2.0 * range[d] / nb;
    auto at = [&](const double f[4]) {
      double q[4];
      for (int d = 0; d < 4; ++d) q[d] = lo[d] + f[d] * 2.0 * range[d] / nb;
      return evaluate_density({q[0], q[1], q[2], q[3], t}, strobes, spec, dp, {});
    };
    const double half[4] = {0.5, 0.5, 0.5, 0.5};
    centre.push_back(at(half));
    double sum = 0.0;
    const int samples = 128;
    for (int m = 0; m < samples; ++m) {
      const double f[4] = {unit(rng), unit(rng), unit(rng), unit(rng)};
      sum += at(f);
    }
    expected.push_back(spec.n_atoms * volume * sum / samples);
    occ.push_back(n);
  }
  REQUIRE(occ.size() > 50);
  const double r_avg = pearson(occ, expected);
  MESSAGE("pearson r over " << occ.size() << " cells: " << r_avg << " against cell averages, "
                            << pearson(occ, centre) << " against cell centres");
  CHECK(r_avg > 0.95);
  const double total_occ = std::accumulate(occ.begin(), occ.end(), 0.0);
  const double total_exp = std::accumulate(expected.begin(), expected.end(), 0.0);
  CHECK(total_exp == doctest::Approx(total_occ).epsilon(0.02));
}

TEST_CASE("ensembles without mean momentum stay rotationally symmetric") {
  // |sum_i exp(i m theta_i)|^2 / N has unit mean for independent uniform angles.
  EnsembleSpec spec;
  spec.n_atoms = 100000;
  spec.seed = 11;
  const auto atoms = evolve_ensemble(sample_initial(spec), 10, params(0.7), {});
  for (int m = 1; m <= 8; ++m) {
    std::complex<double> c{};
    for (const auto& a : atoms) c += std::polar(1.0, m * std::atan2(a.y, a.x));
    const double power = std::norm(c) / atoms.size();
    CAPTURE(m);
    CHECK(power < 5.0);
  }
}

TEST_CASE("gated detection totals and degenerate protocol") {
  const auto dp = params(0.7);
  EnsembleSpec spec;
  spec.seed = 3;
  IntegratorConfig fast{16, Scheme::leapfrog2};
  const auto r = detect_integrated(spec, dp, fast, 51, 150, 200);
  CHECK(r.histogram.total() + r.histogram.overflow == 20000);
  CHECK(r.detected.size() == 20000);

  // A single strobe with the correlated variant is one snapshot.
  DetectOptions opt;
  opt.fresh_cohorts = false;
  spec.n_atoms = 300;
  const auto single = detect_integrated(spec, dp, fast, 5, 5, 300, opt);
  const auto snap = evolve_ensemble(sample_initial(spec), 5, dp, fast);
  const auto h = histogram_xy(snap, 128, 128, default_extent(dp));
  CHECK(single.histogram.counts == h.counts);
}

TEST_CASE("radial profile") {
  std::vector<PhaseState> atoms{{0.1, 0.0, 0, 0, 0}, {0.0, 1.6, 0, 0, 0}, {3.0, 4.0, 0, 0, 0}};
  const auto bins = radial_profile(atoms, 4, 2.0);
  CHECK(bins[0].count == 1);
  CHECK(bins[3].count == 1);
  CHECK(bins[0].r_center == doctest::Approx(0.25));
}
