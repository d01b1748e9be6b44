#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"

namespace setyoung {

// A vector- (or flattened matrix-) valued function sampled on the uniform
// grid t_i = i*T/m, i = 0..m, with piecewise-linear evaluation in between.
struct SampledPath {
  double horizon = 0.0;       // T
  std::size_t width = 0;      // components per node
  std::vector<Vec> values;    // m+1 nodes

  SampledPath() = default;

  SampledPath(double T, std::size_t w, std::vector<Vec> vals)
      : horizon(T), width(w), values(std::move(vals)) {
    if (!(horizon > 0.0)) throw GridError("SampledPath: horizon must be > 0");
    if (values.size() < 2) throw GridError("SampledPath: need >= 2 nodes");
    for (const Vec& v : values) {
      if (v.size() != width) throw DimMismatch("SampledPath: ragged values");
      if (!all_finite(v)) throw GridError("SampledPath: non-finite value");
    }
  }

  std::size_t intervals() const { return values.size() - 1; }
  std::size_t nodes() const { return values.size(); }
  double mesh() const { return horizon / static_cast<double>(intervals()); }
  double time_at(std::size_t i) const {
    return horizon * static_cast<double>(i) / static_cast<double>(intervals());
  }

  Vec eval(double t) const {
    if (t <= 0.0) return values.front();
    if (t >= horizon) return values.back();
    const double u = t / mesh();
    const std::size_t i = std::min(static_cast<std::size_t>(u), intervals() - 1);
    const double w1 = u - static_cast<double>(i);
    Vec r(width);
    for (std::size_t c = 0; c < width; ++c)
      r[c] = (1.0 - w1) * values[i][c] + w1 * values[i + 1][c];
    return r;
  }

  static SampledPath zero(double T, std::size_t m, std::size_t width) {
    return SampledPath(T, width, std::vector<Vec>(m + 1, Vec(width, 0.0)));
  }

  static SampledPath constant(double T, std::size_t m, Vec value) {
    const std::size_t w = value.size();
    return SampledPath(T, w, std::vector<Vec>(m + 1, std::move(value)));
  }

  static SampledPath from_function(double T, std::size_t m,
                                   const std::function<Vec(double)>& f) {
    std::vector<Vec> vals;
    vals.reserve(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
      vals.push_back(f(T * static_cast<double>(i) / static_cast<double>(m)));
    const std::size_t w = vals.front().size();
    return SampledPath(T, w, std::move(vals));
  }
};

// sup over nodes of ||p(t_i)||.
inline double sup_norm(const SampledPath& p) {
  double s = 0.0;
  for (const Vec& v : p.values) s = std::max(s, norm(v));
  return s;
}

struct HolderReport {
  double seminorm = 0.0;   // ||p||_{alpha,grid}
  double sup = 0.0;        // ||p||_{inf,T} on nodes
  double n_norm = 0.0;     // N_{alpha,T} = sup + seminorm
  std::size_t arg_s = 0, arg_t = 0;  // maximizing node pair
};

// Grid Hoelder seminorm: max over node pairs s < t of
// ||p(t)-p(s)|| / (t-s)^alpha. A lower bound of the seminorm of the
// piecewise-linear interpolant, exact under grid refinement; all r-budgets
// in this library are enforced against this grid quantity.
inline HolderReport holder_seminorm(const SampledPath& p, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidExponent("holder_seminorm: alpha must lie in (0,1]");
  const std::size_t m = p.intervals();
  const double h = p.mesh();
  std::vector<double> inv_pow(m + 1, 0.0);
  for (std::size_t g = 1; g <= m; ++g)
    inv_pow[g] = std::pow(h * static_cast<double>(g), -alpha);
  HolderReport rep;
  double best_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      const double r =
          distance_sq(p.values[i], p.values[j]) * inv_pow[j - i] * inv_pow[j - i];
      if (r > best_sq) {
        best_sq = r;
        rep.arg_s = i;
        rep.arg_t = j;
      }
    }
  rep.seminorm = std::sqrt(best_sq);
  rep.sup = sup_norm(p);
  rep.n_norm = rep.seminorm + rep.sup;
  return rep;
}

// Windowed lower estimate of the grid seminorm for grids too fine for the
// all-pairs scan: near pairs up to `window` apart (where oscillatory suprema
// live) plus all pairs of a coarse node subsample. Any pair subset lower
// bounds the sup, so this is a certified underestimate. The near scan can be
// restricted to the node range [scan_lo, scan_hi].
inline double holder_seminorm_windowed(const SampledPath& p, double alpha,
                                       std::size_t window = 256,
                                       std::size_t coarse_nodes = 1024,
                                       std::size_t scan_lo = 0,
                                       std::size_t scan_hi = SIZE_MAX) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidExponent("holder_seminorm_windowed: alpha must lie in (0,1]");
  const std::size_t m = p.intervals();
  const double h = p.mesh();
  scan_hi = std::min(scan_hi, m);
  std::vector<double> inv_pow(window + 1, 0.0);
  for (std::size_t g = 1; g <= window; ++g)
    inv_pow[g] = std::pow(h * static_cast<double>(g), -2.0 * alpha);
  double best_sq = 0.0;
  for (std::size_t i = scan_lo; i < scan_hi; ++i) {
    const std::size_t jmax = std::min(scan_hi, i + window);
    for (std::size_t j = i + 1; j <= jmax; ++j)
      best_sq = std::max(best_sq,
                         distance_sq(p.values[i], p.values[j]) * inv_pow[j - i]);
  }
  const std::size_t stride = std::max<std::size_t>(1, m / coarse_nodes);
  std::vector<double> inv_pow_c(m / stride + 1, 0.0);
  for (std::size_t g = 1; g <= m / stride; ++g)
    inv_pow_c[g] = std::pow(h * static_cast<double>(g * stride), -2.0 * alpha);
  for (std::size_t i = 0; i < m; i += stride)
    for (std::size_t j = i + stride; j <= m; j += stride)
      best_sq = std::max(best_sq, distance_sq(p.values[i], p.values[j]) *
                                      inv_pow_c[(j - i) / stride]);
  return std::sqrt(best_sq);
}

// Upper bound of the grid seminorm: exact over pairs up to `window` apart,
// and for far pairs ||p(t)-p(s)|| <= value-set bounding-box diagonal, so
// their ratio is at most diag / (window*h)^alpha. Conservative but sound;
// exact whenever the near scan dominates (constants, short oscillations).
inline double holder_seminorm_upper(const SampledPath& p, double alpha,
                                    std::size_t window = 512) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidExponent("holder_seminorm_upper: alpha must lie in (0,1]");
  const std::size_t m = p.intervals();
  const double h = p.mesh();
  window = std::min(window, m);
  std::vector<double> inv_pow(window + 1, 0.0);
  for (std::size_t g = 1; g <= window; ++g)
    inv_pow[g] = std::pow(h * static_cast<double>(g), -2.0 * alpha);
  double near_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t jmax = std::min(m, i + window);
    for (std::size_t j = i + 1; j <= jmax; ++j)
      near_sq = std::max(near_sq,
                         distance_sq(p.values[i], p.values[j]) * inv_pow[j - i]);
  }
  double diag_sq = 0.0;
  for (std::size_t c = 0; c < p.width; ++c) {
    double lo = p.values[0][c], hi = lo;
    for (const Vec& v : p.values) {
      lo = std::min(lo, v[c]);
      hi = std::max(hi, v[c]);
    }
    diag_sq += (hi - lo) * (hi - lo);
  }
  const double far_sq =
      diag_sq * std::pow(h * static_cast<double>(window), -2.0 * alpha);
  return std::sqrt(std::max(near_sq, far_sq));
}

// Exact scan up to exact_limit intervals, upper bound beyond.
inline double holder_seminorm_adaptive(const SampledPath& p, double alpha,
                                       std::size_t exact_limit = 8192) {
  if (p.intervals() <= exact_limit) return holder_seminorm(p, alpha).seminorm;
  return holder_seminorm_upper(p, alpha);
}

// Prepends the running time as a coordinate: W(t) = (t, p(t)).
inline SampledPath time_augmented(const SampledPath& p) {
  std::vector<Vec> vals;
  vals.reserve(p.nodes());
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    Vec v(p.width + 1);
    v[0] = p.time_at(i);
    for (std::size_t c = 0; c < p.width; ++c) v[c + 1] = p.values[i][c];
    vals.push_back(std::move(v));
  }
  return SampledPath(p.horizon, p.width + 1, std::move(vals));
}

// Linear resampling onto a uniform grid with new_m intervals.
inline SampledPath resample(const SampledPath& p, std::size_t new_m) {
  if (new_m < 1) throw GridError("resample: need >= 1 interval");
  std::vector<Vec> vals;
  vals.reserve(new_m + 1);
  for (std::size_t i = 0; i <= new_m; ++i)
    vals.push_back(
        p.eval(p.horizon * static_cast<double>(i) / static_cast<double>(new_m)));
  return SampledPath(p.horizon, p.width, std::move(vals));
}

// Restriction to the node range [i0, i1], re-anchored at time 0. Hoelder
// quantities are shift invariant, so the solver windows use this directly.
inline SampledPath window_subpath(const SampledPath& p, std::size_t i0,
                                  std::size_t i1) {
  if (i0 >= i1 || i1 > p.intervals())
    throw GridError("window_subpath: bad node range");
  std::vector<Vec> vals(p.values.begin() + static_cast<std::ptrdiff_t>(i0),
                        p.values.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
  return SampledPath(p.mesh() * static_cast<double>(i1 - i0), p.width,
                     std::move(vals));
}

// Piecewise-linear interpolation of p through a subset of its own nodes
// (the dissection must contain the first and last node). Values at the
// dissection nodes are preserved exactly.
inline SampledPath interpolate_on_dissection(
    const SampledPath& p, const std::vector<std::size_t>& dissection) {
  if (dissection.size() < 2 || dissection.front() != 0 ||
      dissection.back() != p.intervals())
    throw GridError("interpolate_on_dissection: dissection must span the grid");
  for (std::size_t k = 1; k < dissection.size(); ++k)
    if (dissection[k] <= dissection[k - 1] || dissection[k] > p.intervals())
      throw GridError("interpolate_on_dissection: nodes not on grid");
  std::vector<Vec> vals(p.nodes());
  for (std::size_t k = 0; k + 1 < dissection.size(); ++k) {
    const std::size_t a = dissection[k], b = dissection[k + 1];
    for (std::size_t i = a; i <= b; ++i) {
      const double w1 = static_cast<double>(i - a) / static_cast<double>(b - a);
      Vec v(p.width);
      for (std::size_t c = 0; c < p.width; ++c)
        v[c] = (1.0 - w1) * p.values[a][c] + w1 * p.values[b][c];
      vals[i] = std::move(v);
    }
  }
  return SampledPath(p.horizon, p.width, std::move(vals));
}

}  // namespace setyoung
