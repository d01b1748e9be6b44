#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "setyoung/common.hpp"
#include "setyoung/sampled_path.hpp"

namespace setyoung {

namespace detail {

// In-place iterative radix-2 FFT (size must be a power of two).
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? -1 : 1);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// Autocovariance of unit-spacing fractional Gaussian noise.
inline double fgn_autocov(double H, std::size_t k) {
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, 2.0 * H) - 2.0 * std::pow(kk, 2.0 * H) +
                std::pow(std::abs(kk - 1.0), 2.0 * H));
}

// Dense in-place lower Cholesky; returns false when a pivot fails.
inline bool cholesky_in_place(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    const double lj = std::sqrt(d);
    a[j * n + j] = lj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / lj;
    }
  }
  return true;
}

// One fBm coordinate on t_i = i*T/m via Cholesky of the node covariance
// 0.5*(t_i^{2H} + t_j^{2H} - |t_i-t_j|^{2H}).
inline std::vector<double> fbm_cholesky(double H, double T, std::size_t m,
                                        Rng& rng) {
  const std::size_t n = m;  // nodes t_1..t_m; B(0) = 0 exactly
  std::vector<double> cov(n * n);
  auto t = [&](std::size_t i) {
    return T * static_cast<double>(i + 1) / static_cast<double>(m);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = 0.5 * (std::pow(t(i), 2.0 * H) + std::pow(t(j), 2.0 * H) -
                              std::pow(std::abs(t(i) - t(j)), 2.0 * H));
      cov[i * n + j] = c;
      cov[j * n + i] = c;
    }
  std::vector<double> work = cov;
  if (!cholesky_in_place(work, n)) {
    // retry once with jitter
    double maxd = 0.0;
    for (std::size_t i = 0; i < n; ++i) maxd = std::max(maxd, cov[i * n + i]);
    work = cov;
    for (std::size_t i = 0; i < n; ++i) work[i * n + i] += 1e-12 * maxd;
    if (!cholesky_in_place(work, n))
      throw NumericalFailure("sample_fbm: covariance not PSD after jitter");
  }
  std::vector<double> z(n);
  for (auto& x : z) x = rng.normal();
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += work[i * n + k] * z[k];
    b[i + 1] = s;
  }
  return b;
}

// One fBm coordinate via circulant embedding of the increment process
// (Davies-Harte), padded to a power of two for the radix-2 FFT. Returns an
// empty vector when the embedding has a significantly negative eigenvalue.
inline std::vector<double> fbm_circulant(double H, double T, std::size_t m,
                                         Rng& rng) {
  std::size_t M = 1;
  while (M < m) M <<= 1;
  const std::size_t N = 2 * M;
  std::vector<std::complex<double>> c(N);
  for (std::size_t j = 0; j <= M; ++j) c[j] = fgn_autocov(H, j);
  for (std::size_t j = M + 1; j < N; ++j) c[j] = c[N - j];
  fft_pow2(c, false);

  double min_ev = 0.0, max_ev = 0.0;
  for (const auto& e : c) {
    min_ev = std::min(min_ev, e.real());
    max_ev = std::max(max_ev, e.real());
  }
  if (min_ev < -1e-9 * max_ev) return {};

  std::vector<std::complex<double>> w(N);
  const double invN = 1.0 / static_cast<double>(N);
  const double l0 = std::max(0.0, c[0].real());
  const double lM = std::max(0.0, c[M].real());
  w[0] = std::sqrt(l0 * invN) * rng.normal();
  w[M] = std::sqrt(lM * invN) * rng.normal();
  for (std::size_t j = 1; j < M; ++j) {
    const double lj = std::max(0.0, c[j].real());
    const double u = rng.normal();
    const double v = rng.normal();
    const double amp = std::sqrt(0.5 * lj * invN);
    w[j] = std::complex<double>(amp * u, amp * v);
    w[N - j] = std::conj(w[j]);
  }
  fft_pow2(w, false);

  const double dt_pow = std::pow(T / static_cast<double>(m), H);
  std::vector<double> b(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    b[i + 1] = b[i] + dt_pow * w[i].real();
  return b;
}

}  // namespace detail

// Fractional Brownian motion with Hurst index H in (1/2,1) on the uniform
// grid over [0,T], one independent coordinate per dimension, exact in law
// at the nodes. Cholesky up to m = 2^12 intervals, circulant embedding
// (Davies-Harte) above, falling back to Cholesky if the embedding fails.
inline SampledPath sample_fbm(double H, double T, std::size_t m, int dims,
                              std::uint64_t seed) {
  if (!(H > 0.5) || !(H < 1.0))
    throw InvalidHurst("sample_fbm: H must lie in (1/2,1)");
  if (m < 2) throw GridError("sample_fbm: need m >= 2");
  if (dims < 1) throw DimMismatch("sample_fbm: dims must be >= 1");
  if (!(T > 0.0)) throw GridError("sample_fbm: T must be > 0");

  std::vector<std::vector<double>> cols;
  cols.reserve(static_cast<std::size_t>(dims));
  for (int c = 0; c < dims; ++c) {
    Rng rng(derive_seed(seed, 0xfb3, static_cast<std::uint64_t>(c)));
    std::vector<double> b;
    if (m > (std::size_t{1} << 12)) {
      b = detail::fbm_circulant(H, T, m, rng);
      if (b.empty()) b = detail::fbm_cholesky(H, T, m, rng);
    } else {
      b = detail::fbm_cholesky(H, T, m, rng);
    }
    cols.push_back(std::move(b));
  }
  std::vector<Vec> vals(m + 1, Vec(static_cast<std::size_t>(dims)));
  for (std::size_t i = 0; i <= m; ++i)
    for (int c = 0; c < dims; ++c)
      vals[i][static_cast<std::size_t>(c)] = cols[static_cast<std::size_t>(c)][i];
  return SampledPath(T, static_cast<std::size_t>(dims), std::move(vals));
}

// Theoretical fBm covariance E[B(s)B(t)].
inline double fbm_covariance(double H, double s, double t) {
  return 0.5 * (std::pow(t, 2.0 * H) + std::pow(s, 2.0 * H) -
                std::pow(std::abs(t - s), 2.0 * H));
}

}  // namespace setyoung
