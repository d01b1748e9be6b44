#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "setyoung/aumann.hpp"
#include "setyoung/common.hpp"
#include "setyoung/convex_body.hpp"
#include "setyoung/fbm.hpp"
#include "setyoung/sampled_path.hpp"
#include "setyoung/selection.hpp"
#include "setyoung/set_valued_path.hpp"
#include "setyoung/steiner.hpp"
#include "setyoung/young.hpp"

namespace setyoung {

// ---------------------------------------------------------------------------
// Coefficient multifunctions. Each registry entry carries the map
// (t,x) -> convex body in flattened M_{e,d} together with declared constants
//   d_H(Phi(s,x), Phi(t,x)) <= k1 |t-s|^alpha,
//   d_H(Phi(t,x), Phi(t,y)) <= k2 ||x-y||,
//   sup ||Phi|| <= R,
// which are probed before every solve.
// ---------------------------------------------------------------------------

struct PhiSpec {
  std::string name;
  int e = 0, d = 0;  // body dim = e*d
  double k1 = 0.0, k2 = 0.0, R = 0.0;
  std::function<ConvexBody(double, const Vec&)> map;

  ConvexBody operator()(double t, const Vec& x) const { return map(t, x); }
};

inline PhiSpec make_constant_phi(ConvexBody C, int e, int d) {
  if (C.dim != e * d) throw InvalidProblem("constant phi: body dim != e*d");
  PhiSpec p;
  p.name = "constant";
  p.e = e;
  p.d = d;
  p.k1 = 0.0;
  p.k2 = 0.0;
  p.R = body_norm(C);
  p.map = [C](double, const Vec&) { return C; };
  return p;
}

// Phi(t,x) = t*drift + C0; k1 declared for the horizon and exponent in use.
inline PhiSpec make_translate_phi(ConvexBody C0, Vec drift, double T,
                                  double alpha, int e, int d) {
  if (C0.dim != e * d || static_cast<int>(drift.size()) != e * d)
    throw InvalidProblem("translate phi: dims inconsistent");
  PhiSpec p;
  p.name = "translate";
  p.e = e;
  p.d = d;
  p.k1 = norm(drift) * std::pow(T, 1.0 - alpha);
  p.k2 = 0.0;
  p.R = body_norm(C0) + T * norm(drift);
  p.map = [C0, drift](double t, const Vec&) {
    std::vector<Vec> verts = C0.vertices;
    for (Vec& v : verts) axpy(v, t, drift);
    return ConvexBody(C0.dim, std::move(verts), C0.tol_geom);
  };
  return p;
}

// Phi(t,x) = (rho0 + rho1 * tanh(<v,x>)) * P with rho0 >= |rho1| >= 0.
// Scaling a fixed body by a positive factor moves it by exactly
// |scale difference| * ||P|| in Hausdorff distance, so k2 is sharp.
inline PhiSpec make_radius_field_phi(ConvexBody P, double rho0, double rho1,
                                     Vec v, int e, int d) {
  if (P.dim != e * d) throw InvalidProblem("radius_field phi: body dim != e*d");
  if (!(rho0 >= std::abs(rho1)))
    throw InvalidProblem("radius_field phi: need rho0 >= |rho1|");
  if (static_cast<int>(v.size()) != e)
    throw InvalidProblem("radius_field phi: v must live in R^e");
  PhiSpec p;
  p.name = "radius_field";
  p.e = e;
  p.d = d;
  const double pn = body_norm(P);
  p.k1 = 0.0;
  p.k2 = std::abs(rho1) * norm(v) * pn;
  p.R = (rho0 + std::abs(rho1)) * pn;
  p.map = [P, rho0, rho1, v](double, const Vec& x) {
    const double scale = rho0 + rho1 * std::tanh(dot(v, x));
    std::vector<Vec> verts = P.vertices;
    for (Vec& w : verts)
      for (double& c : w) c *= scale;
    return ConvexBody(P.dim, std::move(verts), P.tol_geom);
  };
  return p;
}

// Phi(t,x) = hull{0, (sin t, cos t)} in M_{2,1}: Hausdorff-Lipschitz in t
// while the Demyanov distance between any two positions stays >= 1, so the
// Demyanov seminorm is infinite. The standard separating fixture.
inline PhiSpec make_rotating_segment_phi(double T, double alpha) {
  PhiSpec p;
  p.name = "rotating_segment";
  p.e = 2;
  p.d = 1;
  p.k1 = std::pow(T, 1.0 - alpha);
  p.k2 = 0.0;
  p.R = 1.0;
  p.map = [](double t, const Vec&) {
    return ConvexBody(2, {{0.0, 0.0}, {std::sin(t), std::cos(t)}});
  };
  return p;
}

// ---------------------------------------------------------------------------
// Problems and strategies.
// ---------------------------------------------------------------------------

struct InclusionProblem {
  PhiSpec phi;
  Vec xi;          // initial point in R^e
  SampledPath w;   // driver, width d (first order); scalar w0 (second order)
  double alpha = 0.0, beta = 0.0, r = 0.0;
  // space regularity of Phi(t,.): Hoelder exponent gamma in (0,1], 1 meaning
  // Lipschitz. Certificates and window conditions run at the effective
  // exponent alpha*gamma (alpha*gamma + beta must exceed 1).
  double gamma = 1.0;
  double tol = 1e-6;
  int max_iterations = 50;
  // residual-certification budgets
  int n_measures = 8;
  int n_anchors = 16;
  SelectionBudget budget{};
  double probe_radius = 2.0;
  int n_probes = 32;

  double effective_alpha() const { return alpha * gamma; }
};

// A single-valued branch of the solution multimap: one deterministic rule
// selecting a point of each coefficient body.
struct SelectionStrategy {
  enum class Kind { Steiner, GeneralizedSteiner, AnchorProjection };
  Kind kind = Kind::Steiner;
  std::optional<SmoothBallMeasure> measure;  // GeneralizedSteiner
  Vec anchor;                                // AnchorProjection
  long mc_samples = 512;
  std::uint64_t seed = 0;
  std::string label = "steiner";

  Vec select(const ConvexBody& C) const {
    switch (kind) {
      case Kind::Steiner:
        return steiner_point_auto(C, mc_samples, seed).value;
      case Kind::GeneralizedSteiner:
        return generalized_steiner_point(C, *measure, mc_samples, seed).value;
      case Kind::AnchorProjection:
        return project_onto(C, anchor).point;
    }
    throw InvalidProblem("SelectionStrategy: unknown kind");
  }
};

inline std::vector<SelectionStrategy> default_strategies(
    const InclusionProblem& p, int count, std::uint64_t seed) {
  std::vector<SelectionStrategy> out;
  SelectionStrategy st;
  st.kind = SelectionStrategy::Kind::Steiner;
  st.seed = derive_seed(seed, 0);
  out.push_back(st);
  const int n = p.phi.e * p.phi.d;
  const auto measures =
      default_measure_family(n, std::max(1, (count - 1) / 2 + 1),
                             derive_seed(seed, 1));
  for (std::size_t k = 1; k < measures.size() &&
                          static_cast<int>(out.size()) < (count + 1) / 2 + 1;
       ++k) {
    SelectionStrategy gs;
    gs.kind = SelectionStrategy::Kind::GeneralizedSteiner;
    gs.measure = measures[k];
    gs.seed = derive_seed(seed, 2, k);
    gs.label = "generalized_steiner(" + std::to_string(k) + ")";
    out.push_back(std::move(gs));
  }
  Rng rng(derive_seed(seed, 3));
  while (static_cast<int>(out.size()) < count) {
    SelectionStrategy ap;
    ap.kind = SelectionStrategy::Kind::AnchorProjection;
    ap.anchor = Vec(static_cast<std::size_t>(n));
    for (double& c : ap.anchor)
      c = rng.uniform(-2.0 * (p.phi.R + 1.0), 2.0 * (p.phi.R + 1.0));
    ap.label = "projection_anchor(" + std::to_string(out.size()) + ")";
    out.push_back(std::move(ap));
  }
  out.resize(static_cast<std::size_t>(count), out.front());
  return out;
}

// Probes the declared constants (Hoelder in t, Lipschitz in x, bound R) on
// sampled points around xi before any solve.
inline void validate_problem(const InclusionProblem& p, std::uint64_t seed,
                             double tol = 1e-7) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0) || p.alpha >= p.beta ||
      !(p.alpha + p.beta > 1.0) || p.beta >= 1.0)
    throw InvalidProblem("validate_problem: need 0 < alpha < beta < 1, alpha+beta > 1");
  if (!(p.gamma > 0.0) || p.gamma > 1.0 ||
      !(p.effective_alpha() + p.beta > 1.0))
    throw InvalidProblem(
        "validate_problem: need gamma in (0,1] with alpha*gamma + beta > 1");
  if (static_cast<int>(p.xi.size()) != p.phi.e)
    throw InvalidProblem("validate_problem: xi width != e");
  Rng rng(derive_seed(seed, 0xbe5));
  const double T = p.w.horizon;
  for (int probe = 0; probe < p.n_probes; ++probe) {
    const double s = rng.uniform(0.0, T);
    const double t = rng.uniform(0.0, T);
    Vec x = p.xi, y = p.xi;
    for (double& c : x) c += rng.uniform(-p.probe_radius, p.probe_radius);
    for (double& c : y) c += rng.uniform(-p.probe_radius, p.probe_radius);
    const ConvexBody Psx = p.phi(s, x);
    const ConvexBody Ptx = p.phi(t, x);
    const ConvexBody Pty = p.phi(t, y);
    if (hausdorff_distance(Psx, Ptx) >
        p.phi.k1 * std::pow(std::abs(t - s), p.alpha) + tol)
      throw InvalidProblem("validate_problem: k1 probe failed");
    if (hausdorff_distance(Ptx, Pty) >
        p.phi.k2 * std::pow(distance(x, y), p.gamma) + tol)
      throw InvalidProblem("validate_problem: k2 probe failed");
    if (body_norm(Ptx) > p.phi.R + tol)
      throw InvalidProblem("validate_problem: R probe failed");
  }
}

// ---------------------------------------------------------------------------
// Solution reports.
// ---------------------------------------------------------------------------

struct SolutionReport {
  SampledPath path;  // on [0,T], width e
  bool converged = false;
  int iterations = 0;            // total Picard iterations
  int max_window_iterations = 0;
  double residual = 0.0;         // slack-adjusted membership residual
  double raw_residual = 0.0;     // distance to inner hulls before slack
  double ipp_residual = 0.0;     // second order: integration-by-parts defect
  bool schedule_feasible = true;  // every window meets the smallness bound
  std::vector<double> window_schedule;   // T0 per window
  std::vector<double> window_condition;  // (1+T0^a) rho_w(T0, r_cond)
  std::vector<std::vector<double>> iteration_changes;  // per window
  std::string strategy_label;
};

namespace detail {

// Window boundaries: `wins` windows of (nearly) equal node count.
inline std::vector<std::size_t> window_bounds(std::size_t m, std::size_t wins) {
  std::vector<std::size_t> b(wins + 1);
  for (std::size_t k = 0; k <= wins; ++k)
    b[k] = (k * m) / wins;
  return b;
}

// Smallest power-of-two window count whose longest window satisfies
// (1 + T0^alpha) rho_w(T0, r_cond) <= 1 with the global driver seminorm.
// The condition is sufficient, not necessary: when even single-interval
// windows fail it (large coefficient bodies, rough drivers), the solver
// falls back to a capped schedule and reports feasible = false rather than
// refusing; Picard convergence is then certified only by its own budget.
struct WindowChoice {
  std::size_t wins = 1;
  bool feasible = false;
};

inline WindowChoice choose_window_count(const YoungConfig& cfg, double T,
                                        std::size_t m, double w_beta,
                                        double f_sup, double r_cond,
                                        std::size_t fallback_cap = 64) {
  auto condition = [&](std::size_t wins) {
    const double T0 = T * static_cast<double>((m + wins - 1) / wins) /
                      static_cast<double>(m);
    return (1.0 + std::pow(T0, cfg.alpha)) *
           rho_w_bound(cfg, T0, w_beta, f_sup, r_cond);
  };
  for (std::size_t wins = 1; wins < m; wins *= 2)
    if (condition(wins) <= 1.0) return {wins, true};
  if (condition(m) <= 1.0) return {m, true};
  return {std::min(m, fallback_cap), false};
}

struct WindowCertification {
  double raw = 0.0;
  double slack_adjusted = 0.0;
};

// Residual of the window solution against the inner hulls of the certified
// family (strategy's realized selection included), minus the Young-Love
// outer slack.
inline WindowCertification certify_window(
    const InclusionProblem& p, const YoungConfig& cfg,
    const SetValuedPath& F_win, const SampledPath& w_win,
    const SampledPath& phi_win, const std::vector<Vec>& x_minus_anchor,
    std::uint64_t seed) {
  SelectionFamily fam = build_selection_family(
      F_win, p.effective_alpha(), p.r, seed, p.n_measures, p.n_anchors,
      p.budget);
  const CertificationResult own = certify_selection(
      phi_win, F_win, p.effective_alpha(), p.r, p.budget.tol_membership,
      p.budget.tol_seminorm);
  if (own.ok) {
    fam.members.push_back(phi_win);
    fam.provenance.push_back({SelectionProvenance::Kind::Picard, -1});
  }
  const IndefiniteAumann ind =
      indefinite_aumann_integral(F_win, w_win, cfg, p.r, fam);
  WindowCertification cert;
  for (std::size_t i = 0; i < F_win.nodes(); ++i) {
    const double d = distance_to_set(x_minus_anchor[i], ind.hulls.bodies[i]);
    const double radius_t = young_love_radius(
        cfg, std::max(ind.hulls.time_at(i), F_win.mesh()),
        ind.w_beta_seminorm, ind.f_sup_norm, p.r);
    const double slack = std::max(0.0, radius_t - body_norm(ind.hulls.bodies[i]));
    cert.raw = std::max(cert.raw, d);
    cert.slack_adjusted = std::max(cert.slack_adjusted, std::max(0.0, d - slack));
  }
  return cert;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// First order: x(t) = xi + int_0^t phi(s) dw(s), phi(s) a strategy selection
// of Phi(s, x(s)). Picard iteration on windows small enough for the
// contraction regime, glued left to right. On a non-converged window the
// whole schedule is halved once before giving up.
// ---------------------------------------------------------------------------

inline SolutionReport solve_first_order(const InclusionProblem& p,
                                        const SelectionStrategy& strategy,
                                        std::uint64_t seed) {
  validate_problem(p, seed);
  const double r0 = p.phi.R + p.phi.k1 + p.phi.k2;
  if (p.r + 1e-12 < r0)
    throw InvalidProblem("solve_first_order: r must be >= R + k1 + k2");
  if (static_cast<int>(p.w.width) != p.phi.d)
    throw InvalidProblem("solve_first_order: driver width != d");

  const YoungConfig cfg(p.effective_alpha(), p.beta);
  const double T = p.w.horizon;
  const std::size_t m = p.w.intervals();
  const double w_beta = holder_seminorm_adaptive(p.w, p.beta);

  const detail::WindowChoice choice =
      detail::choose_window_count(cfg, T, m, w_beta, p.phi.R, r0);
  std::size_t wins = choice.wins;

  for (int attempt = 0; attempt < 2; ++attempt, wins = std::min(wins * 2, m)) {
    const std::vector<std::size_t> bounds = detail::window_bounds(m, wins);
    SolutionReport rep;
    rep.strategy_label = strategy.label;
    rep.schedule_feasible = choice.feasible;
    std::vector<Vec> x_nodes(m + 1, p.xi);
    bool all_converged = true;

    for (std::size_t k = 0; k < wins && all_converged; ++k) {
      const std::size_t i0 = bounds[k], i1 = bounds[k + 1];
      if (i0 == i1) continue;
      const SampledPath w_win = window_subpath(p.w, i0, i1);
      const std::size_t mw = i1 - i0;
      const Vec anchor = x_nodes[i0];

      std::vector<Vec> xw(mw + 1, anchor);
      std::vector<Vec> phiw(mw + 1);
      std::vector<double> changes;
      bool converged = false;
      for (int it = 0; it < p.max_iterations; ++it) {
        for (std::size_t i = 0; i <= mw; ++i)
          phiw[i] = strategy.select(p.phi(p.w.time_at(i0 + i), xw[i]));
        // compensated partial sums, matching the young engine
        std::vector<Vec> xn(mw + 1, anchor);
        Vec favg(static_cast<std::size_t>(p.phi.e * p.phi.d));
        for (std::size_t i = 0; i < mw; ++i) {
          xn[i + 1] = xn[i];
          const Vec dw = sub(w_win.values[i + 1], w_win.values[i]);
          for (std::size_t c = 0; c < favg.size(); ++c)
            favg[c] = 0.5 * (phiw[i][c] + phiw[i + 1][c]);
          detail::mat_apply_add(xn[i + 1], favg, dw,
                                static_cast<std::size_t>(p.phi.e),
                                static_cast<std::size_t>(p.phi.d));
        }
        double change = 0.0;
        for (std::size_t i = 0; i <= mw; ++i)
          change = std::max(change, distance(xn[i], xw[i]));
        xw = std::move(xn);
        changes.push_back(change);
        ++rep.iterations;
        if (change <= p.tol) {
          converged = true;
          rep.max_window_iterations =
              std::max(rep.max_window_iterations, it + 1);
          break;
        }
      }
      rep.iteration_changes.push_back(changes);
      const double T0 = w_win.horizon;
      rep.window_schedule.push_back(T0);
      rep.window_condition.push_back(
          (1.0 + std::pow(T0, cfg.alpha)) *
          rho_w_bound(cfg, T0, w_beta, p.phi.R, r0));
      if (!converged) {
        all_converged = false;
        break;
      }
      // refresh phi at the converged iterate, then certify the window
      for (std::size_t i = 0; i <= mw; ++i) {
        phiw[i] = strategy.select(p.phi(p.w.time_at(i0 + i), xw[i]));
        x_nodes[i0 + i] = xw[i];
      }
      std::vector<ConvexBody> bodies;
      bodies.reserve(mw + 1);
      for (std::size_t i = 0; i <= mw; ++i)
        bodies.push_back(p.phi(p.w.time_at(i0 + i), xw[i]));
      const SetValuedPath F_win(w_win.horizon, std::move(bodies));
      const SampledPath phi_path(w_win.horizon,
                                 static_cast<std::size_t>(p.phi.e * p.phi.d),
                                 std::vector<Vec>(phiw));
      std::vector<Vec> x_rel(mw + 1);
      for (std::size_t i = 0; i <= mw; ++i) x_rel[i] = sub(xw[i], anchor);
      const detail::WindowCertification cert = detail::certify_window(
          p, cfg, F_win, w_win, phi_path, x_rel, derive_seed(seed, 0xce7, k));
      rep.raw_residual = std::max(rep.raw_residual, cert.raw);
      rep.residual = std::max(rep.residual, cert.slack_adjusted);
    }

    if (all_converged) {
      rep.converged = true;
      rep.path = SampledPath(T, static_cast<std::size_t>(p.phi.e),
                             std::move(x_nodes));
      return rep;
    }
    if (attempt == 1 || wins >= m) {
      rep.converged = false;
      rep.path = SampledPath(T, static_cast<std::size_t>(p.phi.e),
                             std::move(x_nodes));
      return rep;
    }
  }
  throw NumericalFailure("solve_first_order: unreachable");
}

// ---------------------------------------------------------------------------
// Second order (e = 1, scalar driver w0): the inclusion
//   x(t) in xi + (A) int_0^t [ (A) int_0^s Phi(u, x(u)) dw0(u) ] dw0(s)
// reduces by integration by parts to
//   x(t) = xi + w0(t) I1(t) - I2(t),
//   (I1, I2)(t) = int_0^t phi(s) (dw0(s), w0(s) dw0(s)),
// with phi a scalar selection of Phi(., x(.)). The Picard scheme iterates
// phi on windows while the (I1, I2) prefixes from earlier windows stay
// frozen; x is reconstructed globally from the accumulated integrals.
// ---------------------------------------------------------------------------

inline SolutionReport solve_second_order(const InclusionProblem& p,
                                         std::uint64_t seed,
                                         const SelectionStrategy* strategy_in =
                                             nullptr) {
  if (p.phi.e != 1 || p.phi.d != 1)
    throw InvalidProblem("solve_second_order: Phi must map into cc(R) (e=d=1)");
  if (p.w.width != 1)
    throw InvalidProblem("solve_second_order: driver w0 must be scalar");
  validate_problem(p, seed);

  const YoungConfig cfg(p.effective_alpha(), p.beta);
  const double T = p.w.horizon;
  const std::size_t m = p.w.intervals();
  const SampledPath w2 = iterated_integral(p.w);  // (w0, int w0 dw0)
  const double w2_beta = holder_seminorm_adaptive(w2, p.beta);
  const double w0_nnorm =
      holder_seminorm_adaptive(p.w, cfg.alpha) + sup_norm(p.w);
  const double r_req = p.phi.k1 + p.phi.k2 * (w0_nnorm + 1.0);
  if (p.r + 1e-12 < r_req)
    throw InvalidProblem(
        "solve_second_order: r must be >= k1 + k2 (N_alpha(w0) + 1)");

  SelectionStrategy fallback;
  fallback.seed = derive_seed(seed, 0x2d);
  const SelectionStrategy& strategy =
      strategy_in != nullptr ? *strategy_in : fallback;

  const detail::WindowChoice choice =
      detail::choose_window_count(cfg, T, m, w2_beta, p.phi.R, p.r);
  std::size_t wins = choice.wins;

  for (int attempt = 0; attempt < 2; ++attempt, wins = std::min(wins * 2, m)) {
    const std::vector<std::size_t> bounds = detail::window_bounds(m, wins);
    SolutionReport rep;
    rep.strategy_label = strategy.label;
    rep.schedule_feasible = choice.feasible;
    std::vector<double> x_nodes(m + 1, p.xi[0]);
    std::vector<double> I1(m + 1, 0.0), I2(m + 1, 0.0);
    std::vector<double> phi_all(m + 1, 0.0);
    bool all_converged = true;

    auto w0_at = [&](std::size_t i) { return p.w.values[i][0]; };

    for (std::size_t k = 0; k < wins && all_converged; ++k) {
      const std::size_t i0 = bounds[k], i1 = bounds[k + 1];
      if (i0 == i1) continue;
      const std::size_t mw = i1 - i0;

      std::vector<double> xw(mw + 1);
      for (std::size_t i = 0; i <= mw; ++i) xw[i] = x_nodes[i0];  // warm start
      std::vector<double> phiw(mw + 1, 0.0);
      std::vector<double> changes;
      bool converged = false;
      for (int it = 0; it < p.max_iterations; ++it) {
        for (std::size_t i = 0; i <= mw; ++i) {
          const ConvexBody body = p.phi(p.w.time_at(i0 + i), {xw[i]});
          phiw[i] = strategy.select(body)[0];
        }
        double change = 0.0;
        double a1 = I1[i0], a2 = I2[i0];
        for (std::size_t i = 0; i <= mw; ++i) {
          if (i > 0) {
            const double dw = w0_at(i0 + i) - w0_at(i0 + i - 1);
            a1 += 0.5 * (phiw[i - 1] + phiw[i]) * dw;
            a2 += 0.5 * (phiw[i - 1] * w0_at(i0 + i - 1) +
                         phiw[i] * w0_at(i0 + i)) * dw;
          }
          const double xn = p.xi[0] + w0_at(i0 + i) * a1 - a2;
          change = std::max(change, std::abs(xn - xw[i]));
          xw[i] = xn;
        }
        changes.push_back(change);
        ++rep.iterations;
        if (change <= p.tol) {
          converged = true;
          rep.max_window_iterations =
              std::max(rep.max_window_iterations, it + 1);
          break;
        }
      }
      rep.iteration_changes.push_back(changes);
      const double T0 = w2.horizon * static_cast<double>(mw) /
                        static_cast<double>(m);
      rep.window_schedule.push_back(T0);
      rep.window_condition.push_back(
          (1.0 + std::pow(T0, cfg.alpha)) *
          rho_w_bound(cfg, T0, w2_beta, p.phi.R, p.r));
      if (!converged) {
        all_converged = false;
        break;
      }
      // freeze the window: recompute phi at the converged iterate and extend
      // the integral prefixes
      for (std::size_t i = 0; i <= mw; ++i) {
        const ConvexBody body = p.phi(p.w.time_at(i0 + i), {xw[i]});
        phiw[i] = strategy.select(body)[0];
        phi_all[i0 + i] = phiw[i];
      }
      for (std::size_t i = i0; i < i1; ++i) {
        const double dw = w0_at(i + 1) - w0_at(i);
        I1[i + 1] = I1[i] + 0.5 * (phi_all[i] + phi_all[i + 1]) * dw;
        I2[i + 1] = I2[i] + 0.5 * (phi_all[i] * w0_at(i) +
                                   phi_all[i + 1] * w0_at(i + 1)) * dw;
      }
      for (std::size_t i = i0; i <= i1; ++i)
        x_nodes[i] = p.xi[0] + w0_at(i) * I1[i] - I2[i];

      // membership residual against the 2-D indefinite hulls of a certified
      // family (each scalar member integrated against (dw0, w0 dw0))
      std::vector<ConvexBody> bodies;
      bodies.reserve(mw + 1);
      for (std::size_t i = 0; i <= mw; ++i)
        bodies.push_back(p.phi(p.w.time_at(i0 + i), {x_nodes[i0 + i]}));
      const SetValuedPath F_win(T0, std::move(bodies));
      SelectionFamily fam = build_selection_family(
          F_win, p.effective_alpha(), p.r, derive_seed(seed, 0xce8, k),
          p.n_measures, p.n_anchors, p.budget);
      SampledPath phi_path(T0, 1,
                           [&] {
                             std::vector<Vec> v(mw + 1);
                             for (std::size_t i = 0; i <= mw; ++i)
                               v[i] = Vec{phiw[i]};
                             return v;
                           }());
      const CertificationResult own = certify_selection(
          phi_path, F_win, p.effective_alpha(), p.r, p.budget.tol_membership,
          p.budget.tol_seminorm);
      if (own.ok) {
        fam.members.push_back(phi_path);
        fam.provenance.push_back({SelectionProvenance::Kind::Picard, -1});
      }
      // window driver (w0, prefix-free iterated integral restarted at i0)
      std::vector<Vec> wvals(mw + 1, Vec(2));
      for (std::size_t i = 0; i <= mw; ++i) {
        wvals[i][0] = w0_at(i0 + i);
        wvals[i][1] = 0.0;
      }
      for (std::size_t i = 0; i < mw; ++i) {
        const double dw = w0_at(i0 + i + 1) - w0_at(i0 + i);
        wvals[i + 1][1] =
            wvals[i][1] + 0.5 * (w0_at(i0 + i) + w0_at(i0 + i + 1)) * dw;
      }
      const SampledPath w_win(T0, 2, std::move(wvals));
      // scalar member -> diag(phi, phi) integrand against the 2-D driver
      SelectionFamily fam2;
      fam2.alpha = fam.alpha;
      fam2.r = fam.r;
      for (const SampledPath& f : fam.members) {
        std::vector<Vec> fv(f.nodes(), Vec(4, 0.0));
        for (std::size_t i = 0; i < f.nodes(); ++i) {
          fv[i][0] = f.values[i][0];
          fv[i][3] = f.values[i][0];
        }
        fam2.members.emplace_back(T0, 4, std::move(fv));
        fam2.provenance.push_back({SelectionProvenance::Kind::Interpolated, -1});
      }
      std::vector<ConvexBody> F2b(mw + 1, ConvexBody::box(
          {-p.phi.R, -p.phi.R, -p.phi.R, -p.phi.R},
          {p.phi.R, p.phi.R, p.phi.R, p.phi.R}));
      const SetValuedPath F2(T0, std::move(F2b));
      const IndefiniteAumann ind =
          indefinite_aumann_integral(F2, w_win, cfg, p.r, fam2);
      for (std::size_t i = 0; i <= mw; ++i) {
        const Vec pair = {I1[i0 + i] - I1[i0], I2[i0 + i] - I2[i0]};
        const double dmem = distance_to_set(pair, ind.hulls.bodies[i]);
        const double radius_t = young_love_radius(
            cfg, std::max(ind.hulls.time_at(i), F_win.mesh()),
            ind.w_beta_seminorm, p.phi.R, p.r);
        const double slack =
            std::max(0.0, radius_t - body_norm(ind.hulls.bodies[i]));
        rep.raw_residual = std::max(rep.raw_residual, dmem);
        rep.residual = std::max(rep.residual, std::max(0.0, dmem - slack));
      }
    }

    if (all_converged) {
      // integration-by-parts certificate: the direct double integral
      // int_0^t I1 dw0 must match w0(t) I1(t) - I2(t) within Young tolerance
      std::vector<Vec> i1vals(m + 1);
      for (std::size_t i = 0; i <= m; ++i) i1vals[i] = Vec{I1[i]};
      const SampledPath I1_path(T, 1, std::move(i1vals));
      const SampledPath direct = young_indefinite(I1_path, p.w);
      for (std::size_t i = 0; i <= m; ++i)
        rep.ipp_residual = std::max(
            rep.ipp_residual,
            std::abs(direct.values[i][0] -
                     (w0_at(i) * I1[i] - I2[i])));
      std::vector<Vec> xv(m + 1);
      for (std::size_t i = 0; i <= m; ++i) xv[i] = Vec{x_nodes[i]};
      rep.converged = true;
      rep.path = SampledPath(T, 1, std::move(xv));
      return rep;
    }
    if (attempt == 1 || wins >= m) {
      std::vector<Vec> xv(m + 1);
      for (std::size_t i = 0; i <= m; ++i) xv[i] = Vec{x_nodes[i]};
      rep.converged = false;
      rep.path = SampledPath(T, 1, std::move(xv));
      return rep;
    }
  }
  throw NumericalFailure("solve_second_order: unreachable");
}

// ---------------------------------------------------------------------------
// Solution funnel: one solve per strategy, node-wise hulls of the solution
// values. Non-converged strategies are recorded, not fatal.
// ---------------------------------------------------------------------------

struct FunnelResult {
  std::vector<SolutionReport> reports;
  SetValuedPath funnel;   // node-wise hulls in R^e
  double max_width = 0.0; // max node diameter
};

inline FunnelResult solution_funnel(const InclusionProblem& p,
                                    const std::vector<SelectionStrategy>& strategies,
                                    std::uint64_t seed) {
  if (strategies.empty())
    throw InvalidProblem("solution_funnel: need at least one strategy");
  FunnelResult res;
  for (std::size_t s = 0; s < strategies.size(); ++s)
    res.reports.push_back(
        solve_first_order(p, strategies[s], derive_seed(seed, 0xf1, s)));

  const std::size_t nodes = res.reports.front().path.nodes();
  std::vector<ConvexBody> hulls;
  hulls.reserve(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    std::vector<Vec> pts;
    for (const SolutionReport& rep : res.reports)
      if (rep.converged) pts.push_back(rep.path.values[i]);
    if (pts.empty()) pts.push_back(p.xi);
    ConvexBody h = canonicalized(ConvexBody(p.phi.e, std::move(pts)));
    double diam = 0.0;
    for (const Vec& a : h.vertices)
      for (const Vec& b : h.vertices) diam = std::max(diam, distance(a, b));
    res.max_width = std::max(res.max_width, diam);
    hulls.push_back(std::move(h));
  }
  res.funnel = SetValuedPath(p.w.horizon, std::move(hulls));
  return res;
}

// ---------------------------------------------------------------------------
// Stochastic ensemble: sample fBm drivers, solve pathwise, aggregate.
// order 1: driver W = (t, B_1, ..., B_{d-1}); order 2: scalar w0 = B.
// ---------------------------------------------------------------------------

struct StochasticRunReport {
  int n_paths = 0;
  int successes = 0;
  double success_rate = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double max_iterations = 0.0;
  std::vector<double> per_path_residual;
  std::vector<char> per_path_converged;
  std::vector<Vec> mean_path;  // node-wise average of x(t) - xi
};

inline StochasticRunReport stochastic_inclusion_run(
    double hurst, const InclusionProblem& problem_template, int n_paths,
    std::uint64_t seed, int order = 1,
    const SelectionStrategy* strategy = nullptr) {
  if (!(hurst > 0.5) || !(hurst < 1.0))
    throw InvalidHurst("stochastic_inclusion_run: H must lie in (1/2,1)");
  if (!(problem_template.beta < hurst))
    throw InvalidProblem("stochastic_inclusion_run: need beta < H");
  StochasticRunReport rep;
  rep.n_paths = n_paths;
  const std::size_t m = problem_template.w.intervals();
  const double T = problem_template.w.horizon;
  rep.mean_path.assign(m + 1, Vec(problem_template.xi.size(), 0.0));

  double residual_sum = 0.0;
  for (int path = 0; path < n_paths; ++path) {
    InclusionProblem p = problem_template;
    const std::uint64_t path_seed = derive_seed(seed, 0x5de, path);
    SolutionReport sol;
    if (order == 1) {
      const int bm_dims = p.phi.d - 1;
      if (bm_dims < 1)
        throw InvalidProblem("stochastic_inclusion_run: need d >= 2 (time + fBm)");
      p.w = time_augmented(sample_fbm(hurst, T, m, bm_dims, path_seed));
      SelectionStrategy def;
      def.seed = derive_seed(path_seed, 0x51);
      sol = solve_first_order(p, strategy != nullptr ? *strategy : def,
                              path_seed);
    } else {
      p.w = sample_fbm(hurst, T, m, 1, path_seed);
      sol = solve_second_order(p, path_seed, strategy);
    }
    rep.per_path_converged.push_back(sol.converged ? 1 : 0);
    rep.per_path_residual.push_back(sol.residual);
    rep.max_iterations =
        std::max(rep.max_iterations,
                 static_cast<double>(sol.max_window_iterations));
    if (sol.converged && sol.residual <= p.tol * 1e3) ++rep.successes;
    rep.max_residual = std::max(rep.max_residual, sol.residual);
    residual_sum += sol.residual;
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t c = 0; c < rep.mean_path[i].size(); ++c)
        rep.mean_path[i][c] +=
            (sol.path.values[i][c] - problem_template.xi[c]) / n_paths;
  }
  rep.success_rate =
      n_paths > 0 ? static_cast<double>(rep.successes) / n_paths : 0.0;
  rep.mean_residual = n_paths > 0 ? residual_sum / n_paths : 0.0;
  return rep;
}

}  // namespace setyoung
