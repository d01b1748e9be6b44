#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace setyoung {

using Vec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;

// ---------------------------------------------------------------------------
// Error types. One type per contract violation so callers can catch precisely.
// ---------------------------------------------------------------------------

struct InvalidDirection : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DimMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidCoefficient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoCommonExposingDirection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidHurst : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidMeasure : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptyFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidProblem : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Dense helpers on Vec. Dimensions here are desk scale (n <= ~10), so plain
// loops beat any BLAS ceremony.
// ---------------------------------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline double distance_sq(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Vec& a, const Vec& b) {
  return std::sqrt(distance_sq(a, b));
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

// r += s * a
inline void axpy(Vec& r, double s, const Vec& a) {
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline bool all_finite(const Vec& a) {
  return std::all_of(a.begin(), a.end(),
                     [](double x) { return std::isfinite(x); });
}

// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  return std::pow(kPi, n / 2.0) / std::tgamma(1.0 + n / 2.0);
}

// Surface measure of the unit sphere S^{n-1}.
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

// ---------------------------------------------------------------------------
// Deterministic randomness. Every Monte Carlo routine takes an explicit seed
// and derives sub-streams with derive_seed, so results are reproducible and
// independent of evaluation order or thread count.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b));
  h = mix64(h ^ mix64(c));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  // Uniform on [0,1), 53-bit resolution, engine-portable.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Box-Muller; avoids std::normal_distribution so streams are identical
  // across standard library implementations.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0,1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Vec normal_vec(int n) {
    Vec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = normal();
    return v;
  }

  // Uniform direction on S^{n-1}.
  Vec sphere_direction(int n) {
    for (;;) {
      Vec v = normal_vec(n);
      const double r = norm(v);
      if (r > 1e-12) {
        for (auto& x : v) x /= r;
        return v;
      }
    }
  }

  // Uniform point in the closed unit ball of R^n.
  Vec ball_point(int n) {
    Vec v = sphere_direction(n);
    const double r = std::pow(uniform01(), 1.0 / n);
    for (auto& x : v) x *= r;
    return v;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Mean / standard-error accumulator for vector-valued Monte Carlo estimates.
class MeanAccumulator {
 public:
  explicit MeanAccumulator(std::size_t width)
      : mean_(width, 0.0), m2_(width, 0.0) {}

  void add(const Vec& x) {
    ++count_;
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      const double d = x[i] - mean_[i];
      mean_[i] += d / static_cast<double>(count_);
      m2_[i] += d * (x[i] - mean_[i]);
    }
  }

  const Vec& mean() const { return mean_; }
  long count() const { return count_; }

  // Scalar standard error: sqrt(sum of per-coordinate variances / N).
  double std_error() const {
    if (count_ < 2) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double v : m2_) s += v / static_cast<double>(count_ - 1);
    return std::sqrt(s / static_cast<double>(count_));
  }

 private:
  Vec mean_;
  Vec m2_;
  long count_ = 0;
};

}  // namespace setyoung
