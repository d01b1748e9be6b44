#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"

namespace setyoung {

// A nonempty compact convex subset of R^n, represented as the convex hull of
// a finite vertex list. Duplicate or interior points are permitted on input;
// canonicalized() removes them without changing the hull.
struct ConvexBody {
  int dim = 0;
  std::vector<Vec> vertices;
  double tol_geom = 1e-10;

  ConvexBody() = default;

  ConvexBody(int dimension, std::vector<Vec> verts, double tol = 1e-10)
      : dim(dimension), vertices(std::move(verts)), tol_geom(tol) {
    if (dim <= 0) throw DimMismatch("ConvexBody: dimension must be positive");
    if (vertices.empty())
      throw InvalidCoefficient("ConvexBody: vertex list must be nonempty");
    for (const Vec& v : vertices) {
      if (static_cast<int>(v.size()) != dim)
        throw DimMismatch("ConvexBody: vertex width != dim");
      if (!all_finite(v))
        throw InvalidCoefficient("ConvexBody: non-finite vertex");
    }
  }

  static ConvexBody singleton(Vec p) {
    const int n = static_cast<int>(p.size());
    return ConvexBody(n, {std::move(p)});
  }

  static ConvexBody interval(double a, double b) {
    if (a > b) std::swap(a, b);
    return ConvexBody(1, {{a}, {b}});
  }

  // Axis-aligned box with 2^n vertices; n small by construction.
  static ConvexBody box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    if (hi.size() != lo.size()) throw DimMismatch("box: corner widths differ");
    std::vector<Vec> verts;
    verts.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Vec v(n);
      for (int i = 0; i < n; ++i)
        v[i] = (mask >> i) & 1 ? hi[i] : lo[i];
      verts.push_back(std::move(v));
    }
    return ConvexBody(n, std::move(verts));
  }

  std::size_t vertex_count() const { return vertices.size(); }
};

// sup_{a in C} ||a||; for a polytope the sup sits at a vertex.
inline double body_norm(const ConvexBody& C) {
  double best = 0.0;
  for (const Vec& v : C.vertices) best = std::max(best, norm(v));
  return best;
}

// delta*(l, C) = max_{x in C} <l, x>. Exact: the max over the hull of a
// linear form is attained at a vertex.
inline double support_function(const ConvexBody& C, const Vec& l) {
  if (static_cast<int>(l.size()) != C.dim)
    throw DimMismatch("support_function: direction width != dim");
  if (!all_finite(l))
    throw InvalidDirection("support_function: non-finite direction");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : C.vertices) best = std::max(best, dot(l, v));
  return best;
}

// Exposed point y(l,C) when the maximizing face is a single vertex, else the
// vertex set of the face Y(l,C). Ties are detected on the unit-normalized
// direction at absolute tolerance tie_tol.
struct ExposedResult {
  bool unique = false;
  Vec point;               // set when unique
  std::vector<Vec> face;   // maximizing vertices (>=2 when not unique)
};

inline ExposedResult exposed_point(const ConvexBody& C, const Vec& l,
                                   double tie_tol = 1e-9) {
  if (static_cast<int>(l.size()) != C.dim)
    throw DimMismatch("exposed_point: direction width != dim");
  const double ln = norm(l);
  if (!(ln > 0.0) || !all_finite(l))
    throw InvalidDirection("exposed_point: direction must be nonzero finite");
  const Vec unit = scaled(l, 1.0 / ln);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(C.vertices.size());
  for (std::size_t i = 0; i < C.vertices.size(); ++i) {
    vals[i] = dot(unit, C.vertices[i]);
    best = std::max(best, vals[i]);
  }
  ExposedResult r;
  for (std::size_t i = 0; i < C.vertices.size(); ++i)
    if (vals[i] >= best - tie_tol) r.face.push_back(C.vertices[i]);
  // Duplicate vertices must not masquerade as a tie.
  if (r.face.size() > 1) {
    std::vector<Vec> distinct;
    for (const Vec& v : r.face) {
      bool dup = false;
      for (const Vec& u : distinct)
        if (distance(u, v) <= C.tol_geom) { dup = true; break; }
      if (!dup) distinct.push_back(v);
    }
    r.face = std::move(distinct);
  }
  if (r.face.size() == 1) {
    r.unique = true;
    r.point = r.face.front();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Projection onto the hull: away-step Frank-Wolfe over the vertex simplex
// with exact line search. The objective ||x - p||^2 is strongly convex, so
// the away-step variant converges linearly and reaches duality gaps far below
// the 1e-9 distance tolerance in a few hundred iterations.
// ---------------------------------------------------------------------------

struct ProjectionResult {
  Vec point;          // projection of p onto hull(C)
  double distance = 0.0;
  double gap = 0.0;   // final Frank-Wolfe duality gap (on the squared scale)
  int iterations = 0;
  std::vector<double> weights;  // convex coefficients over C.vertices
};

inline ProjectionResult project_onto(const ConvexBody& C, const Vec& p,
                                     double gap_tol = 1e-20,
                                     int max_iter = 20000) {
  if (static_cast<int>(p.size()) != C.dim)
    throw DimMismatch("project_onto: point width != dim");
  if (!all_finite(p))
    throw InvalidCoefficient("project_onto: non-finite point");

  const std::size_t k = C.vertices.size();
  ProjectionResult res;
  res.weights.assign(k, 0.0);

  // Start at the vertex nearest p.
  std::size_t start = 0;
  double bestd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double d = distance_sq(C.vertices[i], p);
    if (d < bestd) { bestd = d; start = i; }
  }
  Vec x = C.vertices[start];
  res.weights[start] = 1.0;
  if (k == 1) {
    res.point = x;
    res.distance = std::sqrt(bestd);
    return res;
  }

  const double scale = std::max(1.0, bestd);
  int it = 0;
  for (; it < max_iter; ++it) {
    const Vec g = sub(x, p);  // gradient / 2
    const double fx = norm_sq(g);
    if (fx <= 1e-26 * scale) break;  // p is (numerically) inside

    // Linear minimization oracle and away vertex.
    std::size_t s_idx = 0, a_idx = 0;
    double s_val = std::numeric_limits<double>::infinity();
    double a_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const double v = dot(g, C.vertices[i]);
      if (v < s_val) { s_val = v; s_idx = i; }
      if (res.weights[i] > 0.0 && v > a_val) { a_val = v; a_idx = i; }
    }
    const double gx = dot(g, x);
    const double fw_gap = 2.0 * (gx - s_val);  // >= f(x) - f*
    res.gap = fw_gap;
    if (fw_gap <= gap_tol * scale) break;

    const bool fw_step = (gx - s_val) >= (a_val - gx);
    Vec dir;
    double gamma_max;
    if (fw_step) {
      dir = sub(C.vertices[s_idx], x);
      gamma_max = 1.0;
    } else {
      dir = sub(x, C.vertices[a_idx]);
      const double la = res.weights[a_idx];
      if (la >= 1.0 - 1e-15) break;  // single active vertex; nothing to move
      gamma_max = la / (1.0 - la);
    }
    const double dd = norm_sq(dir);
    if (dd <= 0.0) break;
    double gamma = -dot(g, dir) / dd;
    gamma = std::clamp(gamma, 0.0, gamma_max);
    if (gamma <= 0.0) break;

    axpy(x, gamma, dir);
    if (fw_step) {
      for (double& wgt : res.weights) wgt *= (1.0 - gamma);
      res.weights[s_idx] += gamma;
    } else {
      for (double& wgt : res.weights) wgt *= (1.0 + gamma);
      res.weights[a_idx] -= gamma;
      if (res.weights[a_idx] < 1e-15) res.weights[a_idx] = 0.0;
    }
  }
  res.iterations = it;
  res.point = std::move(x);
  res.distance = distance(res.point, p);
  return res;
}

// Euclidean distance from p to hull(C); 0 when p is inside.
inline double distance_to_set(const Vec& p, const ConvexBody& C) {
  return project_onto(C, p).distance;
}

inline bool contains_point(const ConvexBody& C, const Vec& p,
                           double tol = 1e-9) {
  return distance_to_set(p, C) <= tol;
}

// ---------------------------------------------------------------------------
// Canonicalization: drop duplicates, and (dim<=2 exactly, higher dims on
// demand) interior vertices. The hull is unchanged by contract.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Vec> dedupe(const std::vector<Vec>& pts, double tol) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if (distance(q, p) <= tol) { dup = true; break; }
    if (!dup) out.push_back(p);
  }
  return out;
}

// Andrew monotone chain; returns hull in counter-clockwise order with
// collinear points dropped.
inline std::vector<Vec> hull_2d(std::vector<Vec> pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [tol](const Vec& a, const Vec& b) {
                          return distance(a, b) <= tol;
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;

  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  const double eps = std::max(tol * scale, 1e-300);

  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (m >= 2 && cross(h[m - 2], h[m - 1], pts[i]) <= eps) --m;
    h[m++] = pts[i];
  }
  for (std::size_t i = n - 1, t = m + 1; i-- > 0;) {  // upper
    while (m >= t && cross(h[m - 2], h[m - 1], pts[i]) <= eps) --m;
    h[m++] = pts[i];
  }
  h.resize(m - 1);
  return h;
}

}  // namespace detail

// prune_limit: in dims >= 3 interior-vertex removal costs a projection per
// vertex, so it only runs when the list is larger than this.
inline ConvexBody canonicalized(const ConvexBody& C,
                                std::size_t prune_limit = 32) {
  std::vector<Vec> pts = detail::dedupe(C.vertices, C.tol_geom);
  if (C.dim == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const Vec& p : pts) { lo = std::min(lo, p[0]); hi = std::max(hi, p[0]); }
    std::vector<Vec> out = {{lo}};
    if (hi > lo + C.tol_geom) out.push_back({hi});
    return ConvexBody(1, std::move(out), C.tol_geom);
  }
  if (C.dim == 2) {
    auto h = detail::hull_2d(pts, C.tol_geom);
    if (h.empty()) h = {pts.front()};
    return ConvexBody(2, std::move(h), C.tol_geom);
  }
  if (pts.size() > prune_limit) {
    std::vector<Vec> kept;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<Vec> others;
      others.reserve(pts.size() - 1 + kept.size());
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i) others.push_back(pts[j]);
      ConvexBody rest(C.dim, std::move(others), C.tol_geom);
      if (distance_to_set(pts[i], rest) > 10 * C.tol_geom)
        kept.push_back(pts[i]);
    }
    if (!kept.empty()) pts = std::move(kept);
  }
  return ConvexBody(C.dim, std::move(pts), C.tol_geom);
}

// ---------------------------------------------------------------------------
// Hausdorff distance. Exact for polytopes: d(., B) is convex, so the sup over
// hull(A) is attained at a vertex of A.
// ---------------------------------------------------------------------------

inline double hausdorff_distance(const ConvexBody& A, const ConvexBody& B) {
  if (A.dim != B.dim) throw DimMismatch("hausdorff_distance: dims differ");
  double h = 0.0;
  for (const Vec& a : A.vertices) h = std::max(h, distance_to_set(a, B));
  for (const Vec& b : B.vertices) h = std::max(h, distance_to_set(b, A));
  return h;
}

// lambda*A + nu*B (Minkowski); exact for polytopes as the hull of pairwise
// combinations of vertices.
inline ConvexBody minkowski_combine(double lambda, const ConvexBody& A,
                                    double nu, const ConvexBody& B) {
  if (A.dim != B.dim) throw DimMismatch("minkowski_combine: dims differ");
  if (lambda < 0.0 || nu < 0.0 || !std::isfinite(lambda) || !std::isfinite(nu))
    throw InvalidCoefficient("minkowski_combine: coefficients must be >= 0");
  std::vector<Vec> pts;
  pts.reserve(A.vertex_count() * B.vertex_count());
  for (const Vec& a : A.vertices)
    for (const Vec& b : B.vertices) {
      Vec p(A.dim);
      for (int i = 0; i < A.dim; ++i) p[i] = lambda * a[i] + nu * b[i];
      pts.push_back(std::move(p));
    }
  return canonicalized(
      ConvexBody(A.dim, std::move(pts), std::max(A.tol_geom, B.tol_geom)));
}

// ---------------------------------------------------------------------------
// Demyanov distance, Monte Carlo from below: sample directions on the sphere,
// keep those exposing unique points of both bodies (ties are a null set for
// polytopes), return the max distance between exposed points.
// ---------------------------------------------------------------------------

struct DemyanovEstimate {
  double value = 0.0;
  long accepted = 0;
  long sampled = 0;
};

inline DemyanovEstimate demyanov_distance(const ConvexBody& A,
                                          const ConvexBody& B, long n_dirs,
                                          std::uint64_t seed,
                                          double tie_tol = 1e-9) {
  if (A.dim != B.dim) throw DimMismatch("demyanov_distance: dims differ");
  if (n_dirs < 1)
    throw InvalidCoefficient("demyanov_distance: n_dirs must be >= 1");
  Rng rng(derive_seed(seed, 0x6dD157));
  DemyanovEstimate est;
  est.sampled = n_dirs;
  for (long i = 0; i < n_dirs; ++i) {
    const Vec l = rng.sphere_direction(A.dim);
    const ExposedResult ya = exposed_point(A, l, tie_tol);
    if (!ya.unique) continue;
    const ExposedResult yb = exposed_point(B, l, tie_tol);
    if (!yb.unique) continue;
    ++est.accepted;
    est.value = std::max(est.value, distance(ya.point, yb.point));
  }
  if (est.accepted == 0)
    throw NoCommonExposingDirection(
        "demyanov_distance: no direction exposed unique points of both bodies");
  return est;
}

// Upper bracket for the sharp Steiner Lipschitz constant in dimension n.
inline double steiner_lipschitz_upper(int n) {
  return std::sqrt(2.0 * (n + 1) / kPi);
}

}  // namespace setyoung
