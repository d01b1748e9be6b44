#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/sampled_path.hpp"

namespace setyoung {

// A map t -> convex body sampled on the uniform grid over [0,T]; between
// nodes the body is the Minkowski convex interpolation
//   F(t) = ((t_{i+1}-t)/h) F(t_i) + ((t-t_i)/h) F(t_{i+1}),
// which preserves node values and does not increase the Hoelder seminorm.
struct SetValuedPath {
  double horizon = 0.0;
  std::vector<ConvexBody> bodies;  // one per node, common ambient dim

  SetValuedPath() = default;

  SetValuedPath(double T, std::vector<ConvexBody> node_bodies)
      : horizon(T), bodies(std::move(node_bodies)) {
    if (!(horizon > 0.0)) throw GridError("SetValuedPath: horizon must be > 0");
    if (bodies.size() < 2) throw GridError("SetValuedPath: need >= 2 nodes");
    for (const ConvexBody& b : bodies)
      if (b.dim != bodies.front().dim)
        throw DimMismatch("SetValuedPath: mixed body dimensions");
  }

  std::size_t intervals() const { return bodies.size() - 1; }
  std::size_t nodes() const { return bodies.size(); }
  double mesh() const { return horizon / static_cast<double>(intervals()); }
  double time_at(std::size_t i) const {
    return horizon * static_cast<double>(i) / static_cast<double>(intervals());
  }
  int body_dim() const { return bodies.front().dim; }

  ConvexBody eval(double t) const {
    if (t <= 0.0) return bodies.front();
    if (t >= horizon) return bodies.back();
    const double u = t / mesh();
    const std::size_t i = std::min(static_cast<std::size_t>(u), intervals() - 1);
    const double w1 = u - static_cast<double>(i);
    if (w1 <= 0.0) return bodies[i];
    return minkowski_combine(1.0 - w1, bodies[i], w1, bodies[i + 1]);
  }

  static SetValuedPath constant(double T, std::size_t m, const ConvexBody& C) {
    return SetValuedPath(T, std::vector<ConvexBody>(m + 1, C));
  }

  static SetValuedPath from_function(
      double T, std::size_t m, const std::function<ConvexBody(double)>& f) {
    std::vector<ConvexBody> bs;
    bs.reserve(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
      bs.push_back(f(T * static_cast<double>(i) / static_cast<double>(m)));
    return SetValuedPath(T, std::move(bs));
  }
};

// ||F||_{inf,T} on nodes: sup_t sup_{a in F(t)} ||a||.
inline double sup_norm(const SetValuedPath& F) {
  double s = 0.0;
  for (const ConvexBody& b : F.bodies) s = std::max(s, body_norm(b));
  return s;
}

// Grid alpha-Hoelder seminorm of F under the Hausdorff distance, plus the
// sup norm and N = sup + seminorm.
inline HolderReport hausdorff_holder(const SetValuedPath& F, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidExponent("hausdorff_holder: alpha must lie in (0,1]");
  const std::size_t m = F.intervals();
  const double h = F.mesh();
  HolderReport rep;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      const double r = hausdorff_distance(F.bodies[i], F.bodies[j]) /
                       std::pow(h * static_cast<double>(j - i), alpha);
      if (r > rep.seminorm) {
        rep.seminorm = r;
        rep.arg_s = i;
        rep.arg_t = j;
      }
    }
  rep.sup = sup_norm(F);
  rep.n_norm = rep.sup + rep.seminorm;
  return rep;
}

// Grid alpha-Hoelder seminorm under the Demyanov distance, Monte Carlo from
// below. One direction batch is shared by every node pair: exposed points
// are computed once per (node, direction), pairs combine them afterwards.
struct DemyanovSeminorm {
  double seminorm = 0.0;
  double sup = 0.0;
  double n_norm = 0.0;
  long directions = 0;
  long accepted_pairs = 0;
};

inline DemyanovSeminorm demyanov_holder(const SetValuedPath& F, double alpha,
                                        long n_dirs, std::uint64_t seed,
                                        double tie_tol = 1e-9) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw InvalidExponent("demyanov_holder: alpha must lie in (0,1]");
  if (n_dirs < 1)
    throw InvalidCoefficient("demyanov_holder: n_dirs must be >= 1");
  const std::size_t m = F.intervals();
  const int n = F.body_dim();
  Rng rng(derive_seed(seed, 0xdeed));

  // exposed[k][i]: exposed point of F(t_i) for direction k, empty if tied.
  std::vector<std::vector<Vec>> exposed(static_cast<std::size_t>(n_dirs));
  for (long k = 0; k < n_dirs; ++k) {
    const Vec l = rng.sphere_direction(n);
    auto& row = exposed[static_cast<std::size_t>(k)];
    row.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      const ExposedResult y = exposed_point(F.bodies[i], l, tie_tol);
      if (y.unique) row[i] = y.point;
    }
  }

  DemyanovSeminorm rep;
  rep.directions = n_dirs;
  const double h = F.mesh();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      double dd = 0.0;
      bool any = false;
      for (long k = 0; k < n_dirs; ++k) {
        const auto& row = exposed[static_cast<std::size_t>(k)];
        if (row[i].empty() || row[j].empty()) continue;
        any = true;
        dd = std::max(dd, distance(row[i], row[j]));
      }
      if (!any) continue;
      ++rep.accepted_pairs;
      rep.seminorm = std::max(
          rep.seminorm, dd / std::pow(h * static_cast<double>(j - i), alpha));
    }
  rep.sup = sup_norm(F);
  rep.n_norm = rep.sup + rep.seminorm;
  return rep;
}

// Piecewise Minkowski-convex interpolation of the node bodies through a
// sub-dissection (given as node indices containing 0 and m), evaluated back
// onto the full grid. Dissection node values are preserved exactly.
inline SetValuedPath interpolate_multifunction(
    const SetValuedPath& F, const std::vector<std::size_t>& dissection) {
  if (dissection.size() < 2 || dissection.front() != 0 ||
      dissection.back() != F.intervals())
    throw GridError("interpolate_multifunction: dissection must span the grid");
  for (std::size_t k = 1; k < dissection.size(); ++k)
    if (dissection[k] <= dissection[k - 1] || dissection[k] > F.intervals())
      throw GridError("interpolate_multifunction: nodes not on grid");
  std::vector<ConvexBody> out(F.nodes());
  for (std::size_t k = 0; k + 1 < dissection.size(); ++k) {
    const std::size_t a = dissection[k], b = dissection[k + 1];
    out[a] = F.bodies[a];
    out[b] = F.bodies[b];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double w1 = static_cast<double>(i - a) / static_cast<double>(b - a);
      out[i] = minkowski_combine(1.0 - w1, F.bodies[a], w1, F.bodies[b]);
    }
  }
  return SetValuedPath(F.horizon, std::move(out));
}

// Dissection of every stride-th node (stride must divide the interval count).
inline std::vector<std::size_t> stride_dissection(std::size_t m,
                                                  std::size_t stride) {
  if (stride == 0 || m % stride != 0)
    throw GridError("stride_dissection: stride must divide the grid");
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i <= m; i += stride) d.push_back(i);
  return d;
}

}  // namespace setyoung
