#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/sampled_path.hpp"
#include "setyoung/selection.hpp"
#include "setyoung/set_valued_path.hpp"
#include "setyoung/young.hpp"

namespace setyoung {

// Outer radius from the Young-Love estimate: every integral of a certified
// selection satisfies ||int_0^T f dw|| <= c T^beta (T^alpha v 1) ||w||_beta
// (r + ||F||_inf). Holds with grid seminorms for the left-point grid sums.
inline double young_love_radius(const YoungConfig& cfg, double T,
                                double w_beta_seminorm, double f_sup_norm,
                                double r) {
  return cfg.sewing_constant() * std::pow(T, cfg.beta) *
         std::max(std::pow(T, cfg.alpha), 1.0) * w_beta_seminorm *
         (r + f_sup_norm);
}

// rho_w(T,r) = C_{alpha,beta,T} (||F||_inf + r) ||w||_beta T^{beta-alpha}:
// the alpha-seminorm bound of the indefinite integral.
inline double rho_w_bound(const YoungConfig& cfg, double T,
                          double w_beta_seminorm, double f_sup_norm,
                          double r) {
  return cfg.global_constant(T) * (f_sup_norm + r) * w_beta_seminorm *
         std::pow(T, cfg.beta - cfg.alpha);
}

// ---------------------------------------------------------------------------
// Aumann-Young integral over [0,T]: the convex hull of the Young integrals
// of the certified family members. An inner approximation of the true
// integral set, convex and nonempty by construction, with the Young-Love
// radius attached as the outer certificate.
// ---------------------------------------------------------------------------

struct AumannIntegral {
  ConvexBody hull;                 // inner estimate in R^e
  double radius_bound = 0.0;       // Young-Love outer radius
  std::size_t family_size = 0;
  double w_beta_seminorm = 0.0;
  double f_sup_norm = 0.0;
  std::vector<Vec> member_values;  // per-member final integrals
};

namespace detail {

inline void check_family_grid(const SetValuedPath& F,
                              const SelectionFamily& family,
                              const SampledPath& w) {
  if (family.members.empty())
    throw EmptyFamily("aumann integral: empty selection family");
  const std::size_t n = static_cast<std::size_t>(F.body_dim());
  if (w.width == 0 || n % w.width != 0)
    throw DimMismatch("aumann integral: body dim not a multiple of driver dim");
  for (const SampledPath& f : family.members) {
    if (f.width != n)
      throw DimMismatch("aumann integral: member width != body dim");
    if (f.nodes() != F.nodes())
      throw GridError("aumann integral: member grid != F grid");
  }
}

}  // namespace detail

inline AumannIntegral aumann_young_integral(const SetValuedPath& F,
                                            const SampledPath& w,
                                            const YoungConfig& cfg, double r,
                                            const SelectionFamily& family) {
  detail::check_family_grid(F, family, w);
  AumannIntegral res;
  res.family_size = family.size();
  res.f_sup_norm = sup_norm(F);
  res.w_beta_seminorm = holder_seminorm_adaptive(w, cfg.beta);
  res.radius_bound =
      young_love_radius(cfg, F.horizon, res.w_beta_seminorm, res.f_sup_norm, r);

  const std::size_t e = static_cast<std::size_t>(F.body_dim()) / w.width;
  std::vector<Vec> finals;
  finals.reserve(family.size());
  for (const SampledPath& f : family.members)
    finals.push_back(young_indefinite(f, w).values.back());
  res.member_values = finals;
  res.hull = canonicalized(ConvexBody(static_cast<int>(e), std::move(finals)));
  return res;
}

// ---------------------------------------------------------------------------
// Indefinite integral: node-wise hulls of the partial integrals of the SAME
// members, i.e. selections are built once on [0,T] and truncated, matching
// the T-dependence of S_{alpha,r}. Value at t=0 is {0}.
// ---------------------------------------------------------------------------

struct IndefiniteAumann {
  SetValuedPath hulls;        // bodies in R^e on the grid of F
  double radius_bound = 0.0;  // Young-Love radius at horizon T
  double rho_bound = 0.0;     // rho_w(T,r)
  std::size_t family_size = 0;
  double w_beta_seminorm = 0.0;
  double f_sup_norm = 0.0;
};

inline IndefiniteAumann indefinite_aumann_integral(const SetValuedPath& F,
                                                   const SampledPath& w,
                                                   const YoungConfig& cfg,
                                                   double r,
                                                   const SelectionFamily& family) {
  detail::check_family_grid(F, family, w);
  IndefiniteAumann res;
  res.family_size = family.size();
  res.f_sup_norm = sup_norm(F);
  res.w_beta_seminorm = holder_seminorm_adaptive(w, cfg.beta);
  res.radius_bound =
      young_love_radius(cfg, F.horizon, res.w_beta_seminorm, res.f_sup_norm, r);
  res.rho_bound =
      rho_w_bound(cfg, F.horizon, res.w_beta_seminorm, res.f_sup_norm, r);

  const std::size_t e = static_cast<std::size_t>(F.body_dim()) / w.width;
  std::vector<SampledPath> partials;
  partials.reserve(family.size());
  for (const SampledPath& f : family.members)
    partials.push_back(young_indefinite(f, w));

  std::vector<ConvexBody> hulls;
  hulls.reserve(F.nodes());
  for (std::size_t i = 0; i < F.nodes(); ++i) {
    std::vector<Vec> pts;
    pts.reserve(family.size());
    for (const SampledPath& p : partials) pts.push_back(p.values[i]);
    hulls.push_back(canonicalized(ConvexBody(static_cast<int>(e), std::move(pts))));
  }
  res.hulls = SetValuedPath(F.horizon, std::move(hulls));
  return res;
}

// ---------------------------------------------------------------------------
// Lipschitz continuity in the driving signal: with one family integrated
// against both signals,
//   d_H(J(F,w1), J(F,w2)) <= c T^beta (T^alpha v 1)(r + ||F||_inf)
//                            ||w1 - w2||_{beta,grid}.
// ---------------------------------------------------------------------------

struct LipschitzInWReport {
  double lhs = 0.0;          // Hausdorff distance between the two hulls
  double rhs = 0.0;          // Lipschitz bound
  double ratio = 0.0;
  double dw_beta_seminorm = 0.0;
  bool satisfied = false;
};

inline LipschitzInWReport integral_lipschitz_in_w_check(
    const SetValuedPath& F, const SampledPath& w1, const SampledPath& w2,
    const YoungConfig& cfg, double r, const SelectionFamily& family) {
  if (w1.width != w2.width || w1.nodes() != w2.nodes())
    throw DimMismatch("integral_lipschitz_in_w_check: signals incompatible");
  const AumannIntegral j1 = aumann_young_integral(F, w1, cfg, r, family);
  const AumannIntegral j2 = aumann_young_integral(F, w2, cfg, r, family);

  std::vector<Vec> diff(w1.nodes());
  for (std::size_t i = 0; i < w1.nodes(); ++i)
    diff[i] = sub(w1.values[i], w2.values[i]);
  const SampledPath dw(w1.horizon, w1.width, std::move(diff));

  LipschitzInWReport rep;
  rep.dw_beta_seminorm = holder_seminorm(dw, cfg.beta).seminorm;
  rep.lhs = hausdorff_distance(j1.hull, j2.hull);
  rep.rhs = cfg.sewing_constant() * std::pow(F.horizon, cfg.beta) *
            std::max(std::pow(F.horizon, cfg.alpha), 1.0) *
            (r + sup_norm(F)) * rep.dw_beta_seminorm;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs
                            : (rep.lhs > 1e-14 ? 1e18 : 0.0);
  rep.satisfied = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Divergence series: the classical contrast showing why the selection class
// must be seminorm bounded. Against w(t) = t^{2 beta} cos(pi/t) on [0,1]
// with F = [-1,1], the selections f_n(t) = -sin(pi/t) 1_{[1/n,1]}(t) have
// exploding alpha-seminorms, and their integrals
//   I_n = -int_{1/n}^1 sin(pi/t) w'(t) dt,
//   w'(t) = 2 beta t^{2 beta - 1} cos(pi/t) + pi t^{2 beta - 2} sin(pi/t),
// decrease without bound (leading term -(pi/2) log n at beta = 1/2), while
// the r-bounded integral hull stays inside the Young-Love radius.
// ---------------------------------------------------------------------------

struct DivergenceSeries {
  std::vector<double> integral_values;  // I_n, n = 1..n_max
  std::vector<double> seminorm_lb;      // windowed grid lower estimates
  double w_beta_seminorm = 0.0;         // windowed grid estimate of ||w||_beta
  double compact_radius = 0.0;          // Young-Love radius at r_report
  double alpha = 0.0;
  double r_report = 0.0;
  bool resolution_warning = false;
};

inline DivergenceSeries divergence_series(double beta, int n_max, long m,
                                          double alpha = 0.75,
                                          double r_report = 10.0) {
  if (!(beta > 0.0) || beta > 0.5)
    throw InvalidExponent("divergence_series: beta must lie in (0,1/2]");
  if (n_max < 2) throw InvalidCoefficient("divergence_series: n_max >= 2");
  if (!(alpha + beta > 1.0))
    throw InvalidExponent("divergence_series: alpha + beta must exceed 1");

  DivergenceSeries out;
  out.alpha = alpha;
  out.r_report = r_report;
  out.resolution_warning =
      m < 100l * static_cast<long>(n_max) * static_cast<long>(n_max);

  auto wfun = [beta](double t) {
    return t <= 0.0 ? 0.0 : std::pow(t, 2.0 * beta) * std::cos(kPi / t);
  };
  auto integrand = [beta](double t) {
    const double wp = 2.0 * beta * std::pow(t, 2.0 * beta - 1.0) *
                          std::cos(kPi / t) +
                      kPi * std::pow(t, 2.0 * beta - 2.0) * std::sin(kPi / t);
    return -std::sin(kPi / t) * wp;
  };

  const std::size_t mm = static_cast<std::size_t>(m);
  SampledPath w = SampledPath::from_function(
      1.0, mm, [&](double t) { return Vec{wfun(t)}; });
  out.w_beta_seminorm = holder_seminorm_windowed(w, beta);
  out.compact_radius =
      young_love_radius(YoungConfig(alpha, beta), 1.0, out.w_beta_seminorm,
                        1.0, r_report);

  for (int n = 1; n <= n_max; ++n) {
    const double a = 1.0 / static_cast<double>(n);
    if (n == 1) {
      out.integral_values.push_back(0.0);  // empty effective support
    } else {
      // composite Simpson on [1/n, 1], step count even and resolution-matched
      std::size_t steps = static_cast<std::size_t>(
          std::ceil((1.0 - a) * static_cast<double>(m)));
      steps += steps % 2;
      steps = std::max<std::size_t>(steps, 2);
      const double h = (1.0 - a) / static_cast<double>(steps);
      double s = 0.0;
      for (std::size_t i = 0; i < steps; i += 2)
        s += integrand(a + h * static_cast<double>(i)) +
             4.0 * integrand(a + h * static_cast<double>(i + 1)) +
             integrand(a + h * static_cast<double>(i + 2));
      out.integral_values.push_back(s * h / 3.0);
    }
    // grid values of f_n on the global grid; the seminorm sup lives within a
    // few oscillation periods of the cut at t = 1/n, so the near-pair scan is
    // restricted there
    std::vector<Vec> fv(mm + 1, Vec{0.0});
    for (std::size_t i = 0; i <= mm; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(mm);
      if (t >= a && t > 0.0) fv[i][0] = -std::sin(kPi / t);
    }
    const SampledPath fn(1.0, 1, std::move(fv));
    const std::size_t cut = mm / static_cast<std::size_t>(n);
    const std::size_t lo = cut > 512 ? cut - 512 : 0;
    const std::size_t hi = std::min(mm, cut + 4096);
    out.seminorm_lb.push_back(
        holder_seminorm_windowed(fn, alpha, 256, 1024, lo, hi));
  }
  return out;
}

}  // namespace setyoung
