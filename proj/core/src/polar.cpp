#include <array>
#include <cmath>
#include <stdexcept>

#include "evwg/quantum.hpp"
#include "fft.hpp"

namespace evwg {

using constants::pi;
using detail::FftBuffer;
using detail::Fft2D;
using detail::FftPlan;
using detail::signed_frequency;

namespace {

// Weights of the 6-point Lagrange interpolant through nodes -2..3 at
// fractional position f in [0, 1). The stencil is centred on the cell, so
// mirrored points use mirrored weights.
std::array<double, 6> lagrange6(double f) {
  std::array<double, 6> w{};
  for (int k = 0; k < 6; ++k) {
    double num = 1.0, den = 1.0;
    for (int j = 0; j < 6; ++j) {
      if (j == k) continue;
      num *= f - (j - 2);
      den *= static_cast<double>(k - j);
    }
    w[k] = num / den;
  }
  return w;
}

// Band-limited interpolation of w onto an (n * factor)^2 grid over the same
// periodic domain. The Nyquist bin is split evenly between +n/2 and -n/2.
std::vector<std::complex<double>> upsample(const Wavefunction& w, int factor) {
  const int n = w.n;
  const int m = n * factor;
  FftBuffer coarse(static_cast<std::size_t>(n) * n);
  FftBuffer fine(static_cast<std::size_t>(m) * m);
  const Fft2D fwd(n, coarse);
  const Fft2D inv(m, fine);
  std::copy(w.amps.begin(), w.amps.end(), coarse.data());
  fwd.forward();
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = 0.0;

  struct Target {
    int index[2];
    double weight[2];
    int count;
  };
  auto targets = [&](int k) {
    Target t{};
    const int f = signed_frequency(k, n);
    if (factor > 1 && k == n / 2) {
      t = {{n / 2, m - n / 2}, {0.5, 0.5}, 2};
    } else {
      t = {{f >= 0 ? f : m + f, 0}, {1.0, 0.0}, 1};
    }
    return t;
  };

  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int ky = 0; ky < n; ++ky) {
    const Target ty = targets(ky);
    for (int kx = 0; kx < n; ++kx) {
      const Target tx = targets(kx);
      const auto c = coarse[static_cast<std::size_t>(ky) * n + kx] * scale;
      for (int a = 0; a < ty.count; ++a) {
        for (int b = 0; b < tx.count; ++b) {
          fine[static_cast<std::size_t>(ty.index[a]) * m + tx.index[b]] += c * (ty.weight[a] * tx.weight[b]);
        }
      }
    }
  }
  inv.backward();
  return {fine.data(), fine.data() + fine.size()};
}

}  // namespace

PolarRaster sample_polar(const Wavefunction& w, int n_r, int n_theta, int oversample) {
  if (n_r < 1 || n_theta < 1) throw std::invalid_argument("polar raster: n_r and n_theta must be >= 1");
  if (oversample < 1) throw std::invalid_argument("polar raster: oversample must be >= 1");
  const auto fine = upsample(w, oversample);
  const int m = w.n * oversample;
  const double h = w.dx() / oversample;
  const double L = w.half_width;

  PolarRaster raster;
  raster.n_r = n_r;
  raster.n_theta = n_theta;
  raster.r_max = L;
  raster.values.resize(static_cast<std::size_t>(n_r) * n_theta);

  auto wrap = [m](long i) { return static_cast<std::size_t>(((i % m) + m) % m); };
  for (int a = 0; a < n_r; ++a) {
    const double r = raster.radius(a);
    for (int b = 0; b < n_theta; ++b) {
      const double theta = 2.0 * pi * b / n_theta;
      const double ux = (r * std::cos(theta) + L) / h;
      const double uy = (r * std::sin(theta) + L) / h;
      const long ix = static_cast<long>(std::floor(ux));
      const long iy = static_cast<long>(std::floor(uy));
      const auto wx = lagrange6(ux - ix);
      const auto wy = lagrange6(uy - iy);
      std::complex<double> v = 0.0;
      for (int j = 0; j < 6; ++j) {
        const std::size_t row = wrap(iy + j - 2) * static_cast<std::size_t>(m);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < 6; ++i) acc += wx[i] * fine[row + wrap(ix + i - 2)];
        v += wy[j] * acc;
      }
      raster.values[static_cast<std::size_t>(a) * n_theta + b] = v;
    }
  }
  return raster;
}

std::vector<AngularPopulation> angular_decompose(const Wavefunction& w, int n_r, int n_theta) {
  if (n_theta < 64 || (n_theta & (n_theta - 1)) != 0) {
    throw std::invalid_argument("angular_decompose: n_theta must be a power of two >= 64");
  }
  const PolarRaster raster = sample_polar(w, n_r, n_theta);
  FftBuffer buf(raster.values.size());
  const FftPlan plan(n_theta, n_r, buf, FFTW_FORWARD, true);
  std::copy(raster.values.begin(), raster.values.end(), buf.data());
  plan.execute();

  std::vector<double> pop(n_theta, 0.0);
  const double dr = raster.dr();
  for (int a = 0; a < n_r; ++a) {
    const double weight = 2.0 * pi * raster.radius(a) * dr / (static_cast<double>(n_theta) * n_theta);
    for (int k = 0; k < n_theta; ++k) pop[k] += std::norm(buf[static_cast<std::size_t>(a) * n_theta + k]) * weight;
  }
  std::vector<AngularPopulation> out;
  out.reserve(n_theta);
  for (int mval = -n_theta / 2; mval < n_theta / 2; ++mval) {
    out.push_back({mval, pop[mval >= 0 ? mval : n_theta + mval]});
  }
  return out;
}

double asymmetry_metric(const Wavefunction& w, int n_r, int n_theta) {
  const PolarRaster raster = sample_polar(w, n_r, n_theta);
  double l1 = 0.0, total = 0.0;
  std::vector<double> rho(n_theta);
  for (int a = 0; a < n_r; ++a) {
    double mean = 0.0;
    for (int b = 0; b < n_theta; ++b) {
      rho[b] = std::norm(raster.values[static_cast<std::size_t>(a) * n_theta + b]);
      mean += rho[b];
    }
    const double ring_total = mean;
    mean /= n_theta;
    double dev = 0.0;
    for (int b = 0; b < n_theta; ++b) dev += std::abs(rho[b] - mean);
    const double r = raster.radius(a);
    l1 += dev * r;
    total += ring_total * r;
  }
  if (!(total > 0.0)) return 0.0;
  return l1 / total;
}

}  // namespace evwg
