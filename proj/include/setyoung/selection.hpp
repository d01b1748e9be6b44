#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/sampled_path.hpp"
#include "setyoung/set_valued_path.hpp"
#include "setyoung/steiner.hpp"

namespace setyoung {

// ---------------------------------------------------------------------------
// r_min estimate: min of (Steiner Lipschitz upper bracket) * Hausdorff
// alpha-seminorm and the Monte Carlo Demyanov alpha-seminorm, both on the
// grid. Any r at or above this admits at least the Steiner selection.
// ---------------------------------------------------------------------------

struct RminReport {
  double value = 0.0;
  double steiner_term = 0.0;       // L_n-bracket * ||F||_{alpha,grid}
  double demyanov_term = 0.0;      // ||F||_{alpha,grid,D} estimate
  double lipschitz_bracket = 0.0;  // sqrt(2(n+1)/pi)
  double hausdorff_seminorm = 0.0;
  double demyanov_seminorm = 0.0;
};

inline RminReport r_min_estimate(const SetValuedPath& F, double alpha,
                                 long demyanov_dirs = 256,
                                 std::uint64_t seed = 1) {
  RminReport rep;
  rep.lipschitz_bracket = steiner_lipschitz_upper(F.body_dim());
  rep.hausdorff_seminorm = hausdorff_holder(F, alpha).seminorm;
  rep.demyanov_seminorm =
      demyanov_holder(F, alpha, demyanov_dirs, seed).seminorm;
  rep.steiner_term = rep.lipschitz_bracket * rep.hausdorff_seminorm;
  rep.demyanov_term = rep.demyanov_seminorm;
  rep.value = std::min(rep.steiner_term, rep.demyanov_term);
  return rep;
}

// ---------------------------------------------------------------------------
// Selection families: finite, certified stand-ins for S_{alpha,r}(F).
// Every member must (a) lie in F(t_i) at every node within tol_membership
// and (b) have grid alpha-seminorm at most r (+1e-9). Candidates failing
// either certificate are rejected and logged, never repaired.
// ---------------------------------------------------------------------------

struct SelectionProvenance {
  enum class Kind { Steiner, GeneralizedSteiner, ProjectionAnchor, Interpolated, Picard };
  Kind kind = Kind::Steiner;
  int index = -1;  // measure / anchor index where applicable

  std::string label() const {
    switch (kind) {
      case Kind::Steiner: return "steiner";
      case Kind::GeneralizedSteiner:
        return "generalized_steiner(" + std::to_string(index) + ")";
      case Kind::ProjectionAnchor:
        return "projection_anchor(" + std::to_string(index) + ")";
      case Kind::Interpolated: return "interpolated";
      case Kind::Picard: return "picard";
    }
    return "unknown";
  }
};

struct RejectionRecord {
  SelectionProvenance provenance;
  double membership_defect = 0.0;
  double seminorm = 0.0;
  std::string reason;
};

struct SelectionFamily {
  std::vector<SampledPath> members;
  std::vector<SelectionProvenance> provenance;
  double r = 0.0;
  double alpha = 0.0;
  std::vector<RejectionRecord> rejections;

  std::size_t size() const { return members.size(); }
};

struct SelectionBudget {
  long steiner_samples = 512;   // per-node direction budget (dim >= 3)
  long face_mc_samples = 128;   // nested face Steiner budget (face dim >= 3)
  double tol_membership = 1e-8;
  double tol_seminorm = 1e-9;
};

struct CertificationResult {
  bool ok = false;
  double membership_defect = 0.0;
  double seminorm = 0.0;
  std::size_t worst_node = 0;
};

inline CertificationResult certify_selection(const SampledPath& f,
                                             const SetValuedPath& F,
                                             double alpha, double r,
                                             double tol_membership = 1e-8,
                                             double tol_seminorm = 1e-9) {
  CertificationResult res;
  if (f.nodes() != F.nodes() ||
      f.width != static_cast<std::size_t>(F.body_dim()))
    return res;
  for (std::size_t i = 0; i < f.nodes(); ++i) {
    const double d = distance_to_set(f.values[i], F.bodies[i]);
    if (d > res.membership_defect) {
      res.membership_defect = d;
      res.worst_node = i;
    }
  }
  res.seminorm = holder_seminorm_adaptive(f, alpha);
  res.ok = res.membership_defect <= tol_membership &&
           res.seminorm <= r + tol_seminorm;
  return res;
}

// Deterministic default measure family for dimension n: the uniform measure
// followed by polynomial bumps whose centers sweep the sphere directions of
// a seeded stream and whose radii shrink so the support stays in the ball.
// Prefix stability: entry k depends on (seed, k) only, so growing the family
// keeps earlier members unchanged.
inline std::vector<SmoothBallMeasure> default_measure_family(
    int dim, int count, std::uint64_t seed) {
  std::vector<SmoothBallMeasure> ms;
  ms.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      ms.push_back(SmoothBallMeasure::uniform(dim));
      continue;
    }
    Rng rng(derive_seed(seed, 0x3ea5, static_cast<std::uint64_t>(k)));
    const double shell = 0.35 + 0.6 * rng.uniform01();   // center radius
    const double rho = 0.5 * (1.0 - shell);              // fits inside
    Vec c = rng.sphere_direction(dim);
    for (auto& x : c) x *= shell;
    ms.push_back(SmoothBallMeasure::bump(std::move(c), rho));
  }
  return ms;
}

// Deterministic default anchors: constant paths drawn from the inflated
// bounding box of the node bodies. Projections of these onto F(t) supply
// boundary selections that the Steiner-type recipes do not reach.
inline std::vector<SampledPath> default_anchor_paths(const SetValuedPath& F,
                                                     int count,
                                                     std::uint64_t seed) {
  const int n = F.body_dim();
  Vec lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  Vec hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  for (const ConvexBody& b : F.bodies)
    for (const Vec& v : b.vertices)
      for (int c = 0; c < n; ++c) {
        lo[c] = std::min(lo[c], v[c]);
        hi[c] = std::max(hi[c], v[c]);
      }
  std::vector<SampledPath> anchors;
  anchors.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, 0xa2c4, static_cast<std::uint64_t>(k)));
    Vec p(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      const double pad = 0.5 * std::max(1e-6, hi[c] - lo[c]) + 0.1;
      p[c] = rng.uniform(lo[c] - pad, hi[c] + pad);
    }
    anchors.push_back(
        SampledPath::constant(F.horizon, F.intervals(), std::move(p)));
  }
  return anchors;
}

namespace detail {

// Generalized Steiner selection with common random numbers: one batch of
// mu-samples serves every node, which keeps the Monte Carlo noise from
// inflating the grid Hoelder seminorm of the candidate.
// For interval bodies the generalized Steiner point is closed form:
// Y(x,[a,b]) is {b} for x > 0 and {a} for x < 0, so
// St_mu([a,b]) = (1 - mu(x>0)) a + mu(x>0) b.
inline double positive_halfline_weight(const SmoothBallMeasure& mu) {
  if (mu.kind() == SmoothBallMeasure::Kind::Uniform) return 0.5;
  const double c = mu.center()[0], rho = mu.concentration();
  auto prim = [](double u) {  // int (1-u^2)^2 du
    return u - 2.0 * u * u * u / 3.0 + u * u * u * u * u / 5.0;
  };
  const double u0 = std::clamp(-c / rho, -1.0, 1.0);
  return (prim(1.0) - prim(u0)) / (prim(1.0) - prim(-1.0));
}

inline SampledPath generalized_steiner_selection(const SetValuedPath& F,
                                                 const SmoothBallMeasure& mu,
                                                 long n_samples,
                                                 std::uint64_t seed,
                                                 long face_mc_samples) {
  const int n = F.body_dim();
  if (n == 1) {
    const double wpos = positive_halfline_weight(mu);
    std::vector<Vec> vals(F.nodes());
    for (std::size_t i = 0; i < F.nodes(); ++i) {
      double lo = F.bodies[i].vertices.front()[0], hi = lo;
      for (const Vec& v : F.bodies[i].vertices) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      vals[i] = {(1.0 - wpos) * lo + wpos * hi};
    }
    return SampledPath(F.horizon, 1, std::move(vals));
  }
  Rng rng(derive_seed(seed, 0x6e5d));
  std::vector<Vec> xs;
  xs.reserve(static_cast<std::size_t>(n_samples));
  for (long j = 0; j < n_samples; ++j) xs.push_back(mu.sample(rng));

  std::vector<Vec> vals(F.nodes());
  for (std::size_t i = 0; i < F.nodes(); ++i) {
    MeanAccumulator acc(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const std::vector<Vec> face = exposed_face(F.bodies[i], xs[j]);
      acc.add(face_steiner_point(face, F.bodies[i].tol_geom, face_mc_samples,
                                 derive_seed(seed, 0xfa, i, j)));
    }
    vals[i] = acc.mean();
  }
  return SampledPath(F.horizon, static_cast<std::size_t>(n), std::move(vals));
}

// Classical Steiner selection: exact in dim <= 2, shared-direction Monte
// Carlo above.
inline SampledPath steiner_selection(const SetValuedPath& F, long n_samples,
                                     std::uint64_t seed) {
  const int n = F.body_dim();
  std::vector<Vec> vals(F.nodes());
  if (n <= 2) {
    for (std::size_t i = 0; i < F.nodes(); ++i)
      vals[i] = steiner_point_polygon(F.bodies[i]);
  } else {
    Rng rng(derive_seed(seed, 0x57d1));
    std::vector<Vec> dirs;
    dirs.reserve(static_cast<std::size_t>(n_samples));
    for (long j = 0; j < n_samples; ++j) dirs.push_back(rng.sphere_direction(n));
    for (std::size_t i = 0; i < F.nodes(); ++i) {
      MeanAccumulator acc(static_cast<std::size_t>(n));
      Rng retry(derive_seed(seed, 0x57d2, i));
      for (const Vec& l : dirs) {
        ExposedResult y = exposed_point(F.bodies[i], l);
        int guard = 0;
        while (!y.unique && ++guard < 256)
          y = exposed_point(F.bodies[i], retry.sphere_direction(n));
        if (y.unique)
          acc.add(y.point);
        else
          acc.add(face_steiner_point(y.face, F.bodies[i].tol_geom, 64,
                                     derive_seed(seed, 0x57d3, i)));
      }
      vals[i] = acc.mean();
    }
  }
  return SampledPath(F.horizon, static_cast<std::size_t>(n), std::move(vals));
}

inline SampledPath projection_selection(const SetValuedPath& F,
                                        const SampledPath& anchor) {
  if (anchor.nodes() != F.nodes() ||
      anchor.width != static_cast<std::size_t>(F.body_dim()))
    throw GridError("projection_selection: anchor grid/width mismatch");
  std::vector<Vec> vals(F.nodes());
  for (std::size_t i = 0; i < F.nodes(); ++i)
    vals[i] = project_onto(F.bodies[i], anchor.values[i]).point;
  return SampledPath(F.horizon, anchor.width, std::move(vals));
}

}  // namespace detail

// Builds the candidate set {generalized Steiner selections} u {classical
// Steiner selection} u {anchor projections}, keeps exactly the candidates
// passing the S_{alpha,r} certificates, and records the rest. Throws
// EmptyFamily when nothing survives (r too small for the sampled recipes).
inline SelectionFamily build_selection_family(
    const SetValuedPath& F, double alpha, double r,
    std::span<const SmoothBallMeasure> measures,
    std::span<const SampledPath> anchors, std::uint64_t seed,
    const SelectionBudget& budget = {}) {
  SelectionFamily fam;
  fam.alpha = alpha;
  fam.r = r;

  auto consider = [&](SampledPath cand, SelectionProvenance prov) {
    const CertificationResult cert = certify_selection(
        cand, F, alpha, r, budget.tol_membership, budget.tol_seminorm);
    if (cert.ok) {
      fam.members.push_back(std::move(cand));
      fam.provenance.push_back(prov);
    } else {
      RejectionRecord rec;
      rec.provenance = prov;
      rec.membership_defect = cert.membership_defect;
      rec.seminorm = cert.seminorm;
      rec.reason = cert.membership_defect > budget.tol_membership
                       ? "membership"
                       : "seminorm";
      fam.rejections.push_back(std::move(rec));
    }
  };

  consider(detail::steiner_selection(F, budget.steiner_samples,
                                     derive_seed(seed, 0x01)),
           {SelectionProvenance::Kind::Steiner, -1});
  for (std::size_t k = 0; k < measures.size(); ++k)
    consider(detail::generalized_steiner_selection(
                 F, measures[k], budget.steiner_samples,
                 derive_seed(seed, 0x02, k), budget.face_mc_samples),
             {SelectionProvenance::Kind::GeneralizedSteiner,
              static_cast<int>(k)});
  for (std::size_t k = 0; k < anchors.size(); ++k)
    consider(detail::projection_selection(F, anchors[k]),
             {SelectionProvenance::Kind::ProjectionAnchor,
              static_cast<int>(k)});

  if (fam.members.empty())
    throw EmptyFamily(
        "build_selection_family: every candidate failed certification "
        "(r too small for the sampled recipes?)");
  return fam;
}

// Convenience overload with the documented default budgets: 32 measures and
// 64 anchors generated deterministically from the seed.
inline SelectionFamily build_selection_family(const SetValuedPath& F,
                                              double alpha, double r,
                                              std::uint64_t seed,
                                              int n_measures = 32,
                                              int n_anchors = 64,
                                              const SelectionBudget& budget = {}) {
  const auto measures =
      default_measure_family(F.body_dim(), n_measures, derive_seed(seed, 0x11));
  const auto anchors =
      default_anchor_paths(F, n_anchors, derive_seed(seed, 0x12));
  return build_selection_family(F, alpha, r, measures, anchors, seed, budget);
}

// Piecewise-linear interpolation of every member through a dissection; the
// result is a certified-against-F_n family for F_n = interpolate_multifunction
// (same convex weights, so membership transfers node by node).
inline SelectionFamily interpolate_family(
    const SelectionFamily& fam, const SetValuedPath& Fn,
    const std::vector<std::size_t>& dissection, double alpha, double r,
    const SelectionBudget& budget = {}) {
  SelectionFamily out;
  out.alpha = alpha;
  out.r = r;
  for (std::size_t k = 0; k < fam.members.size(); ++k) {
    SampledPath cand = interpolate_on_dissection(fam.members[k], dissection);
    const CertificationResult cert = certify_selection(
        cand, Fn, alpha, r, budget.tol_membership, budget.tol_seminorm);
    if (cert.ok) {
      out.members.push_back(std::move(cand));
      out.provenance.push_back({SelectionProvenance::Kind::Interpolated,
                                static_cast<int>(k)});
    } else {
      RejectionRecord rec;
      rec.provenance = {SelectionProvenance::Kind::Interpolated,
                        static_cast<int>(k)};
      rec.membership_defect = cert.membership_defect;
      rec.seminorm = cert.seminorm;
      rec.reason = "interpolation";
      out.rejections.push_back(std::move(rec));
    }
  }
  if (out.members.empty())
    throw EmptyFamily("interpolate_family: no member survived");
  return out;
}

}  // namespace setyoung
