#include "evwg/quantum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace evwg {

using constants::pi;
using detail::FftBuffer;
using detail::Fft2D;
using detail::cmul;
using detail::signed_frequency;

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double squared_norm(const std::complex<double>* a, std::size_t count) {
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += std::norm(a[i]);
  return sum;
}

}  // namespace

double Wavefunction::norm() const { return squared_norm(amps.data(), amps.size()) * dx() * dx(); }

Wavefunction init_min_uncertainty(int n, double half_width, double kbar, double x0, double y0, double p0x,
                                  double p0y, double sigma) {
  if (!is_power_of_two(n) || n < 4) throw std::invalid_argument("init_min_uncertainty: n must be a power of two");
  if (!(half_width > 0.0)) throw std::invalid_argument("init_min_uncertainty: half_width must be positive");
  if (!(kbar > 0.0)) throw std::invalid_argument("init_min_uncertainty: kbar must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("init_min_uncertainty: sigma must be positive");

  Wavefunction w;
  w.n = n;
  w.half_width = half_width;
  w.kbar = kbar;
  w.t = 0.0;
  w.amps.resize(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy) {
    const double y = w.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = w.coord(ix);
      const double env = std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (4.0 * sigma));
      w.at(ix, iy) = std::polar(env, (p0x * x + p0y * y) / kbar);
    }
  }
  const double scale = 1.0 / std::sqrt(w.norm());
  for (auto& a : w.amps) a *= scale;

  double edge = 0.0;
  for (int i = 0; i < n; ++i) {
    edge = std::max({edge, std::abs(w.at(i, 0)), std::abs(w.at(0, i)), std::abs(w.at(i, n - 1)),
                     std::abs(w.at(n - 1, i))});
  }
  if (edge > 1e-12) {
    throw std::invalid_argument("init_min_uncertainty: packet leaks to the domain edge (|psi| = " +
                                std::to_string(edge) + ")");
  }
  return w;
}

int QuantumConfig::steps_per_strobe(const DimensionlessParams& dp) const {
  if (!(dt > 0.0)) throw std::invalid_argument("quantum: dt must be positive");
  const double ratio = dp.modulation_period() / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("quantum: modulation period / dt must be an integer");
  }
  return static_cast<int>(rounded);
}

QuantumConfig default_quantum_config(const DimensionlessParams& dp, int steps_per_strobe) {
  if (steps_per_strobe < 1) throw std::invalid_argument("quantum: steps_per_strobe must be >= 1");
  QuantumConfig qc;
  qc.dt = dp.modulation_period() / steps_per_strobe;
  return qc;
}

StaticPotential evanescent_wall(const DimensionlessParams& dp) {
  const double xi = dp.xi;
  const double r1 = dp.r1;
  return [xi, r1](double x, double y) { return xi * std::exp(std::hypot(x, y) - r1); };
}

struct SplitStepPropagator::Impl {
  int n;
  double half_width;
  double dx;
  DimensionlessParams dp;
  QuantumConfig qc;
  std::size_t count;

  std::vector<double> v0;               // static potential on the grid
  std::vector<double> k2;               // kx^2 + ky^2
  std::vector<double> kx;               // per column
  std::vector<std::complex<double>> half_kinetic;  // exp(-i kbar k^2 dt / 4) / n^2
  std::vector<std::complex<double>> full_kinetic;  // exp(-i kbar k^2 dt / 2) / n^2
  std::vector<std::complex<double>> static_phase;  // exp(-i V dt / kbar), used when eps == 0
  std::vector<unsigned char> mask;                  // 1 where r >= r1

  mutable FftBuffer buf;
  Fft2D fft;  // spectrum held transposed: index [kx * n + ky]

  Impl(int n_, double L, const DimensionlessParams& dp_, const QuantumConfig& qc_, const StaticPotential& pot)
      : n(n_), half_width(L), dx(2.0 * L / n_), dp(dp_), qc(qc_),
        count(static_cast<std::size_t>(n_) * n_), buf(count), fft(n_, buf) {

    const StaticPotential v = pot ? pot : evanescent_wall(dp);
    v0.resize(count);
    mask.assign(count, 0);
    for (int iy = 0; iy < n; ++iy) {
      const double y = -L + iy * dx;
      for (int ix = 0; ix < n; ++ix) {
        const double x = -L + ix * dx;
        const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
        v0[i] = v(x, y);
        mask[i] = std::hypot(x, y) >= dp.r1 ? 1 : 0;
      }
    }

    const double dk = pi / L;
    kx.resize(n);
    for (int i = 0; i < n; ++i) kx[i] = dk * signed_frequency(i, n);
    k2.resize(count);
    half_kinetic.resize(count);
    full_kinetic.resize(count);
    const double inv = 1.0 / (static_cast<double>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
        k2[i] = kx[ix] * kx[ix] + kx[iy] * kx[iy];
        half_kinetic[i] = std::polar(inv, -dp.kbar * k2[i] * qc.dt / 4.0);
        full_kinetic[i] = std::polar(inv, -dp.kbar * k2[i] * qc.dt / 2.0);
      }
    }
    if (dp.eps == 0.0) {
      static_phase.resize(count);
      for (std::size_t i = 0; i < count; ++i) static_phase[i] = std::polar(1.0, -v0[i] * qc.dt / dp.kbar);
    }
  }

  void apply(const std::vector<std::complex<double>>& factor) const {
    auto* a = buf.data();
    for (std::size_t i = 0; i < count; ++i) a[i] = cmul(a[i], factor[i]);
  }

  void apply_potential(double t_mid) const {
    auto* a = buf.data();
    if (dp.eps == 0.0) {
      for (std::size_t i = 0; i < count; ++i) a[i] = cmul(a[i], static_phase[i]);
      return;
    }
    const double c = -(1.0 + dp.eps * std::cos(dp.omega_mod * t_mid)) * qc.dt / dp.kbar;
    for (std::size_t i = 0; i < count; ++i) {
      const double phase = c * v0[i];
      a[i] = cmul(a[i], {std::cos(phase), std::sin(phase)});
    }
  }

  void apply_mask() const {
    auto* a = buf.data();
    for (std::size_t i = 0; i < count; ++i) {
      if (mask[i]) a[i] = 0.0;
    }
  }

  void advance(Wavefunction& w, int n_steps) const {
    if (w.n != n || w.half_width != half_width) throw std::invalid_argument("propagator: grid mismatch");
    if (n_steps <= 0) return;
    std::copy(w.amps.begin(), w.amps.end(), buf.data());
    const double t0 = w.t;
    const double dt = qc.dt;
    if (qc.mask_at_r1) {
      for (int s = 0; s < n_steps; ++s) {
        fft.forward_transposed();
        apply(half_kinetic);
        fft.backward_from_transposed();
        apply_potential(t0 + (s + 0.5) * dt);
        fft.forward_transposed();
        apply(half_kinetic);
        fft.backward_from_transposed();
        apply_mask();
      }
    } else {
      // Adjacent kinetic half steps of consecutive steps merge into one.
      fft.forward_transposed();
      apply(half_kinetic);
      for (int s = 0; s < n_steps; ++s) {
        fft.backward_from_transposed();
        apply_potential(t0 + (s + 0.5) * dt);
        fft.forward_transposed();
        apply(s + 1 < n_steps ? full_kinetic : half_kinetic);
      }
      fft.backward_from_transposed();
    }
    std::copy(buf.data(), buf.data() + count, w.amps.begin());
    w.t = t0 + n_steps * dt;
  }

  Observables measure(const Wavefunction& w) const {
    if (w.n != n || w.half_width != half_width) throw std::invalid_argument("propagator: grid mismatch");
    Observables o;
    o.t = w.t;
    o.strobe = w.t / dp.modulation_period();
    o.asymmetry = std::numeric_limits<double>::quiet_NaN();

    const double modulation = 1.0 + dp.eps * std::cos(dp.omega_mod * w.t);
    double p_sum = 0.0, sx = 0.0, sxx = 0.0, sv = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
        const double x = -half_width + ix * dx;
        const double rho = std::norm(w.amps[i]);
        p_sum += rho;
        sx += rho * x;
        sxx += rho * x * x;
        sv += rho * v0[i];
      }
    }
    o.norm = p_sum * dx * dx;
    o.mean_x = sx / p_sum;
    o.var_x = sxx / p_sum - o.mean_x * o.mean_x;

    std::copy(w.amps.begin(), w.amps.end(), buf.data());
    fft.forward_transposed();
    const auto* a = buf.data();
    double q_sum = 0.0, sk = 0.0, skk = 0.0, sk2 = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
        const double rho = std::norm(a[i]);
        q_sum += rho;
        sk += rho * kx[iy];
        skk += rho * kx[iy] * kx[iy];
        sk2 += rho * k2[i];
      }
    }
    const double kbar = dp.kbar;
    const double mean_k = sk / q_sum;
    o.mean_px = kbar * mean_k;
    o.var_px = kbar * kbar * (skk / q_sum - mean_k * mean_k);
    o.energy = 0.5 * kbar * kbar * sk2 / q_sum + modulation * sv / p_sum;
    return o;
  }
};

SplitStepPropagator::SplitStepPropagator(int n, double half_width, const DimensionlessParams& dp,
                                         const QuantumConfig& qc, StaticPotential potential) {
  validate(dp);
  if (!is_power_of_two(n) || n < 4) throw std::invalid_argument("propagator: n must be a power of two");
  if (!(half_width > 0.0)) throw std::invalid_argument("propagator: half_width must be positive");
  qc.steps_per_strobe(dp);
  impl_ = std::make_unique<Impl>(n, half_width, dp, qc, potential);
}

SplitStepPropagator::~SplitStepPropagator() = default;
SplitStepPropagator::SplitStepPropagator(SplitStepPropagator&&) noexcept = default;
SplitStepPropagator& SplitStepPropagator::operator=(SplitStepPropagator&&) noexcept = default;

void SplitStepPropagator::advance(Wavefunction& w, int n_steps) const { impl_->advance(w, n_steps); }

Observables SplitStepPropagator::measure(const Wavefunction& w) const { return impl_->measure(w); }

double SplitStepPropagator::dt() const { return impl_->qc.dt; }

Wavefunction split_step(Wavefunction w, const DimensionlessParams& dp, const QuantumConfig& qc,
                        const StaticPotential& potential) {
  SplitStepPropagator prop(w.n, w.half_width, dp, qc, potential);
  prop.advance(w, 1);
  return w;
}

ObservableSeries propagate_strobes(Wavefunction& w, int n_strobes, const DimensionlessParams& dp,
                                   const QuantumConfig& qc, bool record_every_step,
                                   const PropagationOptions& options) {
  if (n_strobes < 0) throw std::invalid_argument("propagate_strobes: n_strobes must be >= 0");
  if (w.kbar != dp.kbar) throw std::invalid_argument("propagate_strobes: wavefunction kbar differs from params");
  const SplitStepPropagator prop(w.n, w.half_width, dp, qc, options.potential);
  const int per_strobe = qc.steps_per_strobe(dp);
  const double t_start = w.t;

  ObservableSeries series;
  series.reserve(static_cast<std::size_t>(record_every_step ? n_strobes * per_strobe : n_strobes) + 1);
  auto record = [&](bool at_strobe) {
    Observables o = prop.measure(w);
    if (at_strobe && options.record_asymmetry) {
      o.asymmetry = asymmetry_metric(w, options.asymmetry_n_r, options.asymmetry_n_theta);
    }
    series.push_back(o);
  };

  record(true);
  const long total = static_cast<long>(n_strobes) * per_strobe;
  const int chunk = record_every_step ? 1 : per_strobe;
  for (long done = 0; done < total; done += chunk) {
    w.t = t_start + done * qc.dt;
    prop.advance(w, chunk);
    w.t = t_start + (done + chunk) * qc.dt;
    record((done + chunk) % per_strobe == 0);
  }
  return series;
}

std::vector<SlicePoint> slice_probability(const Wavefunction& w, double y) {
  const double dx = w.dx();
  long j = std::lround((y + w.half_width) / dx);
  j = ((j % w.n) + w.n) % w.n;
  std::vector<SlicePoint> out(w.n);
  for (int ix = 0; ix < w.n; ++ix) out[ix] = {w.coord(ix), std::norm(w.at(ix, static_cast<int>(j)))};
  return out;
}

}  // namespace evwg
