#include "evwg/classical.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evwg/parallel.hpp"

namespace evwg {

namespace {

struct Coefficients {
  std::vector<double> drift;  // size = kicks + 1
  std::vector<double> kick;
};

// Position-first splittings. Forest-Ruth: c = 1 / (2 - 2^(1/3)).
Coefficients coefficients(Scheme scheme) {
  switch (scheme) {
    case Scheme::leapfrog2:
      return {{0.5, 0.5}, {1.0}};
    case Scheme::forest_ruth4: {
      const double c = 1.0 / (2.0 - std::cbrt(2.0));
      return {{0.5 * c, 0.5 * (1.0 - c), 0.5 * (1.0 - c), 0.5 * c}, {c, 1.0 - 2.0 * c, c}};
    }
  }
  throw std::invalid_argument("unknown integration scheme");
}

inline double modulation(double t, const DimensionlessParams& dp) {
  return 1.0 + dp.eps * std::cos(dp.omega_mod * t);
}

inline void radial_kick(PhaseState& s, double coeff_dt, double xi_mod, double r1) {
  const double r = std::hypot(s.x, s.y);
  if (r == 0.0) return;
  const double g = coeff_dt * xi_mod * std::exp(r - r1) / r;
  s.px -= g * s.x;
  s.py -= g * s.y;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (steps_per_period < 16 || !std::has_single_bit(static_cast<unsigned>(steps_per_period))) {
    throw std::invalid_argument("steps_per_period must be a power of two >= 16, got " +
                                std::to_string(steps_per_period));
  }
}

double potential(double x, double y, double t, const DimensionlessParams& dp) {
  return dp.xi * std::exp(std::hypot(x, y) - dp.r1) * modulation(t, dp);
}

Force force(double x, double y, double t, const DimensionlessParams& dp) {
  const double r = std::hypot(x, y);
  if (r == 0.0) return {0.0, 0.0};
  const double g = dp.xi * std::exp(r - dp.r1) * modulation(t, dp) / r;
  return {-g * x, -g * y};
}

double hamiltonian(const PhaseState& s, const DimensionlessParams& dp) {
  return 0.5 * (s.px * s.px + s.py * s.py) + potential(s.x, s.y, s.t, dp);
}

PhaseState advance(const PhaseState& s, double dt, const DimensionlessParams& dp, Scheme scheme) {
  const auto c = coefficients(scheme);
  PhaseState out = s;
  double t = s.t;
  for (std::size_t k = 0; k < c.kick.size(); ++k) {
    out.x += c.drift[k] * dt * out.px;
    out.y += c.drift[k] * dt * out.py;
    t += c.drift[k] * dt;
    radial_kick(out, c.kick[k] * dt, dp.xi * modulation(t, dp), dp.r1);
  }
  out.x += c.drift.back() * dt * out.px;
  out.y += c.drift.back() * dt * out.py;
  out.t = s.t + dt;
  return out;
}

PhaseState step(const PhaseState& s, const DimensionlessParams& dp, const IntegratorConfig& cfg) {
  return advance(s, dp.modulation_period() / cfg.steps_per_period, dp, cfg.scheme);
}

StroboscopicMap::StroboscopicMap(const DimensionlessParams& dp, const IntegratorConfig& cfg)
    : dp_(dp), cfg_(cfg), period_(dp.modulation_period()) {
  cfg_.validate();
  dt_ = period_ / cfg_.steps_per_period;
  auto c = coefficients(cfg_.scheme);
  drift_ = std::move(c.drift);
  kick_ = std::move(c.kick);
  modulation_.reserve(static_cast<std::size_t>(cfg_.steps_per_period) * kick_.size());
  for (int i = 0; i < cfg_.steps_per_period; ++i) {
    double tau = i * dt_;
    for (std::size_t k = 0; k < kick_.size(); ++k) {
      tau += drift_[k] * dt_;
      modulation_.push_back(modulation(tau, dp_));
    }
  }
}

long long StroboscopicMap::strobe_index(double t) const {
  const double k = std::round(t / period_);
  if (std::abs(t - k * period_) > 1e-9 * std::max(1.0, std::abs(t))) {
    throw std::invalid_argument("strobe map: state time " + std::to_string(t) +
                                " is not an integer multiple of the modulation period");
  }
  return static_cast<long long>(k);
}

void StroboscopicMap::kick(PhaseState& s, double coeff, double mod) const {
  radial_kick(s, coeff, dp_.xi * mod, dp_.r1);
}

PhaseState StroboscopicMap::operator()(const PhaseState& in) const {
  const long long k = strobe_index(in.t);
  PhaseState s = in;
  const std::size_t nk = kick_.size();
  const double* mod = modulation_.data();
  for (int i = 0; i < cfg_.steps_per_period; ++i) {
    for (std::size_t j = 0; j < nk; ++j) {
      s.x += drift_[j] * dt_ * s.px;
      s.y += drift_[j] * dt_ * s.py;
      kick(s, kick_[j] * dt_, *mod++);
    }
    s.x += drift_[nk] * dt_ * s.px;
    s.y += drift_[nk] * dt_ * s.py;
  }
  s.t = static_cast<double>(k + 1) * period_;
  return s;
}

PhaseState StroboscopicMap::inverse(const PhaseState& in) const {
  const long long k = strobe_index(in.t);
  PhaseState s = in;
  const std::size_t nk = kick_.size();
  const double* mod = modulation_.data() + modulation_.size();
  for (int i = cfg_.steps_per_period - 1; i >= 0; --i) {
    s.x -= drift_[nk] * dt_ * s.px;
    s.y -= drift_[nk] * dt_ * s.py;
    for (std::size_t j = nk; j-- > 0;) {
      kick(s, -kick_[j] * dt_, *--mod);
      s.x -= drift_[j] * dt_ * s.px;
      s.y -= drift_[j] * dt_ * s.py;
    }
  }
  s.t = static_cast<double>(k - 1) * period_;
  return s;
}

PhaseState StroboscopicMap::iterate(PhaseState s, int n) const {
  if (n >= 0) {
    for (int i = 0; i < n; ++i) s = (*this)(s);
  } else {
    for (int i = 0; i < -n; ++i) s = inverse(s);
  }
  return s;
}

PhaseState strobe_map(const PhaseState& s, const DimensionlessParams& dp, const IntegratorConfig& cfg) {
  return StroboscopicMap(dp, cfg)(s);
}

std::vector<PortraitRecord> portrait(std::span<const PhaseState> seeds, int n_strobes,
                                     const DimensionlessParams& dp, const IntegratorConfig& cfg,
                                     int threads) {
  if (n_strobes < 1) throw std::invalid_argument("portrait: n_strobes must be >= 1");
  const StroboscopicMap map(dp, cfg);
  const std::size_t per_seed = static_cast<std::size_t>(n_strobes) + 1;
  std::vector<PortraitRecord> out(seeds.size() * per_seed);
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    PhaseState s = seeds[i];
    PortraitRecord* row = out.data() + i * per_seed;
    row[0] = {i, 0, s.x, s.px};
    for (int k = 1; k <= n_strobes; ++k) {
      s = map(s);
      row[k] = {i, k, s.x, s.px};
    }
  });
  return out;
}

double finite_time_lyapunov(const PhaseState& seed, int n_strobes, const DimensionlessParams& dp,
                            const IntegratorConfig& cfg) {
  if (n_strobes < 1) throw std::invalid_argument("finite_time_lyapunov: n_strobes must be >= 1");
  const StroboscopicMap map(dp, cfg);
  PhaseState s = seed;
  double vx = 1.0, vp = 0.0;
  double log_growth = 0.0;
  for (int k = 0; k < n_strobes; ++k) {
    const double h = 1e-7 * std::max(1.0, std::hypot(s.x, s.px));
    PhaseState a = s, b = s;
    a.x += h * vx;
    a.px += h * vp;
    b.x -= h * vx;
    b.px -= h * vp;
    a = map(a);
    b = map(b);
    const double jx = (a.x - b.x) / (2.0 * h);
    const double jp = (a.px - b.px) / (2.0 * h);
    const double norm = std::hypot(jx, jp);
    log_growth += std::log(norm);
    vx = jx / norm;
    vp = jp / norm;
    s = map(s);
  }
  return log_growth / n_strobes;
}

}  // namespace evwg
