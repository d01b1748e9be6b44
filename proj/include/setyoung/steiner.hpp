#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"

namespace setyoung {

struct PointEstimate {
  Vec value;
  double std_error = 0.0;
  long samples = 0;
};

// ---------------------------------------------------------------------------
// Exact Steiner points in ambient dimension <= 2.
//
// dim 1: the Steiner point of [a,b] is the midpoint.
// dim 2: for a polygon with CCW hull v_0..v_{k-1}, the exposed point equals
// v_i exactly when the direction falls in the normal cone of v_i, a sector
// whose angle is the exterior turn angle. Averaging over directions gives
//   St(C) = sum_i v_i * theta_i / (2*pi),   sum_i theta_i = 2*pi.
// ---------------------------------------------------------------------------

inline Vec steiner_point_polygon(const ConvexBody& C) {
  if (C.dim > 2)
    throw DimMismatch("steiner_point_polygon: exact formula needs dim <= 2");
  const ConvexBody H = canonicalized(C);
  if (C.dim == 1) {
    double lo = H.vertices.front()[0], hi = lo;
    for (const Vec& v : H.vertices) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    return {0.5 * (lo + hi)};
  }
  const std::size_t k = H.vertex_count();
  if (k == 1) return H.vertices[0];
  if (k == 2)
    return scaled(add(H.vertices[0], H.vertices[1]), 0.5);

  Vec st(2, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec& prev = H.vertices[(i + k - 1) % k];
    const Vec& cur = H.vertices[i];
    const Vec& next = H.vertices[(i + 1) % k];
    const double e0x = cur[0] - prev[0], e0y = cur[1] - prev[1];
    const double e1x = next[0] - cur[0], e1y = next[1] - cur[1];
    const double turn =
        std::atan2(e0x * e1y - e0y * e1x, e0x * e1x + e0y * e1y);
    total += turn;
    st[0] += cur[0] * turn;
    st[1] += cur[1] * turn;
  }
  // Turn angles of a convex CCW hull sum to 2*pi.
  if (std::abs(total - 2.0 * kPi) > 1e-6)
    throw NumericalFailure("steiner_point_polygon: degenerate hull angles");
  st[0] /= total;
  st[1] /= total;
  return st;
}

// ---------------------------------------------------------------------------
// Steiner point of a face embedded in R^n. The Steiner point is intrinsic
// (independent of the ambient space), so it is computed inside the face's
// affine hull: exactly up to affine dimension 2, by nested Monte Carlo above.
// ---------------------------------------------------------------------------

namespace detail {

struct AffineFrame {
  Vec origin;
  std::vector<Vec> axes;  // orthonormal
};

inline AffineFrame affine_frame(const std::vector<Vec>& pts, double tol) {
  AffineFrame fr;
  fr.origin = pts.front();
  double scale = 1.0;
  for (const Vec& p : pts) scale = std::max(scale, norm(p));
  for (const Vec& p : pts) {
    Vec r = sub(p, fr.origin);
    for (const Vec& ax : fr.axes) axpy(r, -dot(r, ax), ax);
    const double rn = norm(r);
    if (rn > tol * scale * 10.0) {
      fr.axes.push_back(scaled(r, 1.0 / rn));
      if (fr.axes.size() == pts.front().size()) break;
    }
  }
  return fr;
}

inline Vec to_frame(const AffineFrame& fr, const Vec& p) {
  Vec c(fr.axes.size());
  const Vec r = sub(p, fr.origin);
  for (std::size_t i = 0; i < fr.axes.size(); ++i) c[i] = dot(r, fr.axes[i]);
  return c;
}

inline Vec from_frame(const AffineFrame& fr, const Vec& c) {
  Vec p = fr.origin;
  for (std::size_t i = 0; i < fr.axes.size(); ++i) axpy(p, c[i], fr.axes[i]);
  return p;
}

}  // namespace detail

inline PointEstimate steiner_point(const ConvexBody& C, long n_samples,
                                   std::uint64_t seed);

// Steiner point of the convex hull of face_pts, viewed inside its affine
// hull. mc_samples only matters for faces of affine dimension >= 3.
inline Vec face_steiner_point(const std::vector<Vec>& face_pts, double tol,
                              long mc_samples, std::uint64_t seed) {
  if (face_pts.empty())
    throw InvalidCoefficient("face_steiner_point: empty face");
  if (face_pts.size() == 1) return face_pts.front();
  const detail::AffineFrame fr = detail::affine_frame(face_pts, tol);
  const std::size_t adim = fr.axes.size();
  if (adim == 0) return face_pts.front();
  if (adim == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& p : face_pts) {
      const double c = dot(sub(p, fr.origin), fr.axes[0]);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    return detail::from_frame(fr, {0.5 * (lo + hi)});
  }
  std::vector<Vec> coords;
  coords.reserve(face_pts.size());
  for (const Vec& p : face_pts) coords.push_back(detail::to_frame(fr, p));
  ConvexBody face(static_cast<int>(adim), std::move(coords), tol);
  if (adim == 2) return detail::from_frame(fr, steiner_point_polygon(face));
  return detail::from_frame(fr, steiner_point(face, mc_samples, seed).value);
}

// ---------------------------------------------------------------------------
// Monte Carlo Steiner point: average of exposed points over directions drawn
// uniformly on the sphere (equivalently, ball-uniform, since the exposed
// point depends on the direction only). Tie directions are resampled; they
// form a null set for polytopes.
// ---------------------------------------------------------------------------

inline PointEstimate steiner_point(const ConvexBody& C, long n_samples,
                                   std::uint64_t seed) {
  if (n_samples < 1)
    throw InvalidCoefficient("steiner_point: n_samples must be >= 1");
  Rng rng(derive_seed(seed, 0x57e1e3));
  MeanAccumulator acc(static_cast<std::size_t>(C.dim));
  long resample_budget = 100 * n_samples + 1000;
  for (long i = 0; i < n_samples; ++i) {
    for (;;) {
      const Vec l = rng.sphere_direction(C.dim);
      const ExposedResult y = exposed_point(C, l);
      if (y.unique) {
        acc.add(y.point);
        break;
      }
      if (--resample_budget <= 0)
        throw NumericalFailure("steiner_point: tie resampling exhausted");
    }
  }
  PointEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.samples = n_samples;
  return est;
}

// Exact in dimensions <= 2, Monte Carlo otherwise. The selection recipes use
// this; the plain Monte Carlo estimator stays available for cross-checks.
inline PointEstimate steiner_point_auto(const ConvexBody& C, long n_samples,
                                        std::uint64_t seed) {
  if (C.dim <= 2) {
    PointEstimate est;
    est.value = steiner_point_polygon(C);
    est.std_error = 0.0;
    est.samples = 0;
    return est;
  }
  return steiner_point(C, n_samples, seed);
}

// ---------------------------------------------------------------------------
// Smooth probability measures on the closed unit ball: the uniform measure
// and a C^1 polynomial bump family
//   theta(x) = (1 - ||x - c||^2 / rho^2)_+^2 / Z,
// with the bump ball required to sit inside the unit ball so Z is closed
// form. Construction verifies Z against an independent radial quadrature.
// ---------------------------------------------------------------------------

class SmoothBallMeasure {
 public:
  enum class Kind { Uniform, PolynomialBump };

  static SmoothBallMeasure uniform(int dim) {
    SmoothBallMeasure m;
    m.kind_ = Kind::Uniform;
    m.dim_ = dim;
    m.norm_const_ = unit_ball_volume(dim);
    return m;
  }

  static SmoothBallMeasure bump(Vec center, double concentration) {
    SmoothBallMeasure m;
    m.kind_ = Kind::PolynomialBump;
    m.dim_ = static_cast<int>(center.size());
    m.center_ = std::move(center);
    m.rho_ = concentration;
    if (!(m.rho_ > 0.0) || !all_finite(m.center_))
      throw InvalidMeasure("bump: concentration must be positive and finite");
    if (norm(m.center_) + m.rho_ > 1.0 + 1e-12)
      throw InvalidMeasure(
          "bump: support ball must lie inside the unit ball "
          "(||center|| + concentration <= 1)");
    const int n = m.dim_;
    const double radial =
        1.0 / n - 2.0 / (n + 2) + 1.0 / (n + 4);  // int_0^1 (1-u^2)^2 u^{n-1}
    m.norm_const_ = unit_sphere_area(n) * std::pow(m.rho_, n) * radial;
    m.check_normalization();
    return m;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Vec& center() const { return center_; }
  double concentration() const { return rho_; }

  double density(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw DimMismatch("SmoothBallMeasure::density: width mismatch");
    if (norm(x) > 1.0 + 1e-12) return 0.0;
    if (kind_ == Kind::Uniform) return 1.0 / norm_const_;
    const double q = distance_sq(x, center_) / (rho_ * rho_);
    if (q >= 1.0) return 0.0;
    const double b = 1.0 - q;
    return b * b / norm_const_;
  }

  Vec sample(Rng& rng) const {
    if (kind_ == Kind::Uniform) return rng.ball_point(dim_);
    // Rejection from the uniform proposal on the bump ball; the density is
    // maximal at the center with relative value 1.
    for (;;) {
      Vec y = rng.ball_point(dim_);
      for (int i = 0; i < dim_; ++i) y[i] = center_[i] + rho_ * y[i];
      const double q = distance_sq(y, center_) / (rho_ * rho_);
      const double accept = (1.0 - q) * (1.0 - q);
      if (rng.uniform01() < accept) return y;
    }
  }

 private:
  SmoothBallMeasure() = default;

  void check_normalization() const {
    // Simpson quadrature of S_{n-1} * int_0^rho (1-r^2/rho^2)^2 r^{n-1} dr.
    const int steps = 2048;
    const double h = rho_ / steps;
    double s = 0.0;
    auto g = [&](double r) {
      const double b = 1.0 - (r * r) / (rho_ * rho_);
      return b * b * std::pow(r, dim_ - 1);
    };
    for (int i = 0; i < steps; i += 2)
      s += g(i * h) + 4.0 * g((i + 1) * h) + g((i + 2) * h);
    s *= h / 3.0 * unit_sphere_area(dim_);
    if (std::abs(s - norm_const_) > 1e-6 * norm_const_)
      throw NumericalFailure("bump: normalization quadrature check failed");
  }

  Kind kind_ = Kind::Uniform;
  int dim_ = 0;
  Vec center_;
  double rho_ = 0.0;
  double norm_const_ = 1.0;
};

// ---------------------------------------------------------------------------
// Generalized Steiner point St_mu(C): Monte Carlo average over x ~ mu of the
// Steiner point of the exposed face Y(x, C). Faces of affine dimension <= 2
// contribute exactly; higher-dimensional faces recurse into Monte Carlo.
// ---------------------------------------------------------------------------

inline std::vector<Vec> exposed_face(const ConvexBody& C, const Vec& x,
                                     double tie_tol = 1e-9) {
  if (norm(x) <= 1e-12) return C.vertices;  // Y(0, C) = C
  return exposed_point(C, x, tie_tol).face;
}

inline PointEstimate generalized_steiner_point(const ConvexBody& C,
                                               const SmoothBallMeasure& mu,
                                               long n_samples,
                                               std::uint64_t seed,
                                               long face_mc_samples = 256) {
  if (mu.dim() != C.dim)
    throw DimMismatch("generalized_steiner_point: measure dim != body dim");
  if (n_samples < 1)
    throw InvalidCoefficient("generalized_steiner_point: n_samples >= 1");
  Rng rng(derive_seed(seed, 0x65a1));
  MeanAccumulator acc(static_cast<std::size_t>(C.dim));
  for (long i = 0; i < n_samples; ++i) {
    const Vec x = mu.sample(rng);
    const std::vector<Vec> face = exposed_face(C, x);
    acc.add(face_steiner_point(face, C.tol_geom, face_mc_samples,
                               derive_seed(seed, 0xface, i)));
  }
  PointEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.samples = n_samples;
  return est;
}

}  // namespace setyoung
