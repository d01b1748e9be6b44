// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "setyoung/setyoung.hpp"

using namespace setyoung;
namespace fs = std::filesystem;

namespace {

struct Harness {
  int failures = 0;

  void criterion(int idx, const std::string& name,
                 const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL",
                idx, name.c_str(), secs, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

ConvexBody random_polytope(int dim, int n_verts, Rng& rng) {
  std::vector<Vec> pts;
  for (int v = 0; v < n_verts; ++v) {
    Vec p(static_cast<std::size_t>(dim));
    for (double& c : p) c = rng.uniform(-1, 1);
    pts.push_back(std::move(p));
  }
  return canonicalized(ConvexBody(dim, std::move(pts)));
}

ConvexBody octagon(double radius, Vec center) {
  std::vector<Vec> pts;
  for (int k = 0; k < 8; ++k)
    pts.push_back({center[0] + radius * std::cos(k * kPi / 4),
                   center[1] + radius * std::sin(k * kPi / 4)});
  return ConvexBody(2, std::move(pts));
}

// ---------------------------------------------------------------------------

bool young_exactness(std::string& detail) {
  const std::size_t m = std::size_t{1} << 14;
  const auto f =
      SampledPath::from_function(1.0, m, [](double t) { return Vec{t}; });
  const auto w =
      SampledPath::from_function(1.0, m, [](double t) { return Vec{t * t}; });
  const double poly_err =
      std::abs(young_indefinite(f, w).values.back()[0] - 2.0 / 3.0);
  bool ok = poly_err <= 1e-4;

  const SampledPath b2 = sample_fbm(0.8, 1.0, 256, 2, 5);
  const auto id = SampledPath::constant(1.0, 256, {1, 0, 0, 1});
  const SampledPath I = young_indefinite(id, b2);
  double id_err = 0.0;
  for (std::size_t i = 0; i <= 256; ++i)
    id_err = std::max(id_err,
                      distance(I.values[i], sub(b2.values[i], b2.values[0])));
  ok = ok && id_err <= 1e-13;

  double chain_rel = 0.0;
  for (int s = 0; s < 10; ++s) {
    const SampledPath bw = sample_fbm(0.75, 1.0, m, 1, derive_seed(11, s));
    const double wt = bw.values.back()[0];
    const double expect = 0.5 * wt * wt;
    chain_rel = std::max(chain_rel,
                         std::abs(young_indefinite(bw, bw).values.back()[0] -
                                  expect) /
                             std::max(1.0, std::abs(expect)));
  }
  ok = ok && chain_rel <= 1e-3;
  std::ostringstream os;
  os << "poly_err=" << poly_err << " id_err=" << id_err
     << " chain_rel=" << chain_rel;
  detail = os.str();
  return ok;
}

bool young_love_certification(std::string& detail) {
  const std::size_t m = 512;
  const YoungConfig cfg(0.6, 0.7);
  double worst = 0.0;
  int satisfied = 0;
  for (int c = 0; c < 100; ++c) {
    Rng rng(derive_seed(21, c));
    SampledPath f = SampledPath::zero(1.0, m, 1);
    SampledPath w = SampledPath::zero(1.0, m, 1);
    if (c < 50) {
      const double a1 = rng.uniform(-2, 2), b1 = rng.uniform(0.5, 6);
      const double a2 = rng.uniform(-2, 2), b2 = rng.uniform(0.5, 6);
      for (std::size_t i = 0; i <= m; ++i) {
        const double t = f.time_at(i);
        f.values[i][0] = a1 * std::sin(b1 * t) + 0.5 * t;
        w.values[i][0] = a2 * std::cos(b2 * t) + t;
      }
    } else {
      const double H = 0.7 + 0.05 * (c % 4);
      f = sample_fbm(H, 1.0, m, 1, derive_seed(22, c));
      w = sample_fbm(H, 1.0, m, 1, derive_seed(23, c));
    }
    const YoungLoveReport rep = verify_young_love(f, w, cfg, 64, c);
    worst = std::max(worst, rep.worst_local_ratio);
    if (rep.satisfied) ++satisfied;
  }
  std::ostringstream os;
  os << "satisfied=" << satisfied << "/100 worst_ratio=" << worst;
  detail = os.str();
  return satisfied == 100;
}

bool steiner_suite(std::string& detail) {
  bool ok = true;
  std::ostringstream os;

  // membership
  double worst_membership = 0.0;
  for (int dim : {2, 3, 4}) {
    Rng rng(derive_seed(31, dim));
    for (int rep = 0; rep < 15; ++rep) {
      const ConvexBody C = random_polytope(dim, 8, rng);
      const PointEstimate est =
          steiner_point(C, 20000, derive_seed(32, dim, rep));
      const double d = distance_to_set(est.value, C);
      worst_membership =
          std::max(worst_membership, d - 3.0 * est.std_error - 1e-9);
    }
  }
  ok = ok && worst_membership <= 0.0;

  // symmetry fixture
  const ConvexBody tri(
      2, {{0.0, 1.0}, {-std::sqrt(3.0) / 2, -0.5}, {std::sqrt(3.0) / 2, -0.5}});
  const PointEstimate tri_est = steiner_point(tri, 100000, 33);
  ok = ok && norm(tri_est.value) <= 3.0 * tri_est.std_error;

  // polygon oracle agreement at 1e5 samples
  double worst_oracle = 0.0;
  Rng prng(34);
  for (int rep = 0; rep < 5; ++rep) {
    const ConvexBody C = random_polytope(2, 8, prng);
    const PointEstimate est = steiner_point(C, 100000, derive_seed(35, rep));
    worst_oracle =
        std::max(worst_oracle, distance(est.value, steiner_point_polygon(C)) -
                                   3.0 * est.std_error);
  }
  ok = ok && worst_oracle <= 0.0;

  // empirical Lipschitz ratio across dimensions, 250 pairs each
  double worst_excess = -1e9;
  for (int dim : {1, 2, 3, 4}) {
    const double bracket = steiner_lipschitz_upper(dim);
    Rng rng(derive_seed(36, dim));
    double worst_ratio = 0.0;
    for (int rep = 0; rep < 250; ++rep) {
      const ConvexBody A = random_polytope(dim, 8, rng);
      Vec shift = rng.sphere_direction(dim);
      for (double& c : shift) c *= rng.uniform(0.6, 1.2);
      std::vector<Vec> pts;
      for (const Vec& v : A.vertices) {
        Vec p = add(v, shift);
        for (double& c : p) c += rng.uniform(-0.15, 0.15);
        pts.push_back(std::move(p));
      }
      const ConvexBody B = canonicalized(ConvexBody(dim, std::move(pts)));
      const double dh = hausdorff_distance(A, B);
      double num;
      if (dim <= 2) {
        num = distance(steiner_point_polygon(A), steiner_point_polygon(B));
      } else {
        num = distance(steiner_point(A, 20000, derive_seed(37, dim, rep)).value,
                       steiner_point(B, 20000, derive_seed(38, dim, rep)).value);
      }
      worst_ratio = std::max(worst_ratio, num / dh);
    }
    worst_excess = std::max(worst_excess, worst_ratio - (bracket + 0.05));
    os << "L" << dim << "=" << worst_ratio << "/" << bracket + 0.05 << " ";
  }
  ok = ok && worst_excess <= 0.0;
  detail = os.str();
  return ok;
}

bool metric_suite(std::string& detail) {
  bool ok = true;
  double worst_triangle = 0.0, worst_identity = 0.0, worst_margin = 1e300;
  const struct {
    int dim;
    int count;
    long dirs;
  } plans[] = {{1, 400, 512}, {2, 400, 2048}, {3, 200, 8192}};
  for (const auto& plan : plans) {
    const double eps_mc =
        plan.dim == 1
            ? 0.0
            : 4.0 * std::pow(8.0 * std::log(static_cast<double>(plan.dirs)) /
                                 static_cast<double>(plan.dirs),
                             1.0 / (plan.dim - 1));
    for (int rep = 0; rep < plan.count; ++rep) {
      Rng rng(derive_seed(41, plan.dim, rep));
      const ConvexBody A = random_polytope(plan.dim, 7, rng);
      const ConvexBody B = random_polytope(plan.dim, 7, rng);
      const ConvexBody C = random_polytope(plan.dim, 7, rng);
      const double dab = hausdorff_distance(A, B);
      worst_triangle = std::max(
          worst_triangle,
          dab + hausdorff_distance(B, C) - hausdorff_distance(A, C) < 0
              ? hausdorff_distance(A, C) - dab - hausdorff_distance(B, C)
              : 0.0);
      worst_identity = std::max(worst_identity, hausdorff_distance(A, A));
      const double dd =
          demyanov_distance(A, B, plan.dirs, derive_seed(42, plan.dim, rep))
              .value;
      worst_margin = std::min(worst_margin, dd - (dab - eps_mc));
    }
  }
  ok = ok && worst_triangle <= 1e-9 && worst_identity <= 1e-9 &&
       worst_margin >= -1e-9;

  auto seg = [](double t) {
    return ConvexBody(2, {{0.0, 0.0}, {std::sin(t), std::cos(t)}});
  };
  const double fix_dh = hausdorff_distance(seg(0.3), seg(1.2));
  const double fix_dd = demyanov_distance(seg(0.3), seg(1.2), 4000, 43).value;
  ok = ok && fix_dd >= 0.9 && fix_dh <= 0.9 + 1e-12;

  std::ostringstream os;
  os << "triangle=" << worst_triangle << " identity=" << worst_identity
     << " dd_margin=" << worst_margin << " fixture dH=" << fix_dh
     << " dD=" << fix_dd;
  detail = os.str();
  return ok;
}

bool aumann_properties(std::string& detail) {
  int pass = 0;
  const int total = 50;
  for (int c = 0; c < total; ++c) {
    Rng rng(derive_seed(51, c));
    const std::size_t m = 48;
    const bool two_d = c % 3 == 0;
    SetValuedPath F = [&] {
      if (two_d) {
        const Vec drift = {rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
        const double half = rng.uniform(0.2, 0.6);
        return SetValuedPath::from_function(1.0, m, [=](double t) {
          ConvexBody b = ConvexBody::box({-half, -half}, {half, half});
          for (Vec& v : b.vertices) {
            v[0] += drift[0] * t;
            v[1] += drift[1] * t;
          }
          return b;
        });
      }
      const double lo = rng.uniform(-1.0, -0.2), hi = rng.uniform(0.2, 1.0);
      const double drift = rng.uniform(-0.8, 0.8);
      return SetValuedPath::from_function(1.0, m, [=](double t) {
        return ConvexBody::interval(lo + drift * t, hi + drift * t);
      });
    }();
    const int d = two_d ? 1 : 1;
    const SampledPath w =
        c % 2 == 0
            ? SampledPath::from_function(
                  1.0, m, [&](double t) { return Vec(d, t); })
            : sample_fbm(0.75 + 0.1 * ((c / 2) % 2), 1.0, m, d,
                         derive_seed(52, c));
    const YoungConfig cfg(0.55, c % 2 == 0 ? 0.95 : 0.7);
    const double r =
        r_min_estimate(F, cfg.alpha, 128, derive_seed(53, c)).value +
        rng.uniform(0.5, 2.0);

    const SelectionFamily small =
        build_selection_family(F, cfg.alpha, r, derive_seed(54, c), 4, 8);
    const SelectionFamily large =
        build_selection_family(F, cfg.alpha, r, derive_seed(54, c), 12, 20);
    const SelectionFamily tight =
        build_selection_family(F, cfg.alpha, 0.5 * r, derive_seed(54, c), 12, 20);
    const AumannIntegral Js = aumann_young_integral(F, w, cfg, r, small);
    const AumannIntegral Jl = aumann_young_integral(F, w, cfg, r, large);
    const AumannIntegral Jt =
        aumann_young_integral(F, w, cfg, 0.5 * r, tight);

    bool ok = !Jl.hull.vertices.empty();
    for (const Vec& v : Jl.hull.vertices)
      ok = ok && norm(v) <= Jl.radius_bound + 1e-9;
    for (const Vec& v : Js.hull.vertices)
      ok = ok && contains_point(Jl.hull, v, 1e-8);
    for (const Vec& v : Jt.hull.vertices)
      ok = ok && contains_point(Jl.hull, v, 1e-8);
    if (ok) ++pass;
  }
  std::ostringstream os;
  os << pass << "/" << total << " instances";
  detail = os.str();
  return pass == total;
}

bool discretization_convergence(std::string& detail) {
  const std::size_t m = 128;
  const SetValuedPath F = SetValuedPath::from_function(1.0, m, [](double t) {
    const double s = 0.6 + 0.3 * std::sin(2.0 * kPi * t);
    return ConvexBody::interval(0.2 * t - s, 0.2 * t + s);
  });
  const auto w = SampledPath::from_function(
      1.0, m, [](double t) { return Vec{std::cos(2.0 * t) + 0.5 * t}; });
  const YoungConfig cfg(0.6, 1.0);
  const double r = 4.0;
  const SelectionFamily fam =
      build_selection_family(F, cfg.alpha, r, 55, 16, 24);
  const AumannIntegral ref = aumann_young_integral(F, w, cfg, r, fam);
  double diam = 0.0;
  for (const Vec& a : ref.hull.vertices)
    for (const Vec& b : ref.hull.vertices) diam = std::max(diam, distance(a, b));

  std::vector<ConvexBody> hulls;
  for (int level = 4; level >= 1; --level) {
    const auto diss = stride_dissection(m, std::size_t{1} << level);
    const SetValuedPath Fn = interpolate_multifunction(F, diss);
    const SelectionFamily famn = interpolate_family(fam, Fn, diss, cfg.alpha, r);
    hulls.push_back(aumann_young_integral(Fn, w, cfg, r, famn).hull);
  }
  hulls.push_back(ref.hull);

  bool decreasing = true;
  double prev = 1e300, final_gap = 0.0;
  std::ostringstream os;
  os << "successive gaps:";
  for (std::size_t l = 0; l + 1 < hulls.size(); ++l) {
    const double gap = hausdorff_distance(hulls[l], hulls[l + 1]);
    os << " " << gap;
    if (gap >= prev) decreasing = false;
    prev = gap;
    final_gap = gap;
  }
  os << " diam=" << diam;
  detail = os.str();
  return decreasing && final_gap <= 0.01 * diam;
}

bool indefinite_hoelder_bounds(std::string& detail) {
  int pass = 0;
  const int total = 20;
  double worst_beta = 0.0, worst_alpha = 0.0;
  for (int c = 0; c < total; ++c) {
    Rng rng(derive_seed(61, c));
    const std::size_t m = 48;
    const double lo = rng.uniform(-1.0, -0.2), hi = rng.uniform(0.2, 1.0);
    const double drift = rng.uniform(-0.6, 0.6);
    const SetValuedPath F = SetValuedPath::from_function(1.0, m, [=](double t) {
      return ConvexBody::interval(lo + drift * t, hi + drift * t);
    });
    const SampledPath w =
        sample_fbm(0.85, 1.0, m, 1, derive_seed(62, c));
    const YoungConfig cfg(0.55, 0.8);
    const double r = std::abs(drift) + rng.uniform(0.5, 1.5);
    const SelectionFamily fam =
        build_selection_family(F, cfg.alpha, r, derive_seed(63, c), 8, 12);
    const IndefiniteAumann ind = indefinite_aumann_integral(F, w, cfg, r, fam);

    const double beta_const = cfg.global_constant(1.0) * (sup_norm(F) + r) *
                              holder_seminorm(w, cfg.beta).seminorm;
    const double beta_meas = hausdorff_holder(ind.hulls, cfg.beta).seminorm;
    const double alpha_meas = hausdorff_holder(ind.hulls, cfg.alpha).seminorm;
    worst_beta = std::max(worst_beta, beta_meas / beta_const);
    worst_alpha = std::max(worst_alpha, alpha_meas / ind.rho_bound);
    if (beta_meas <= beta_const * 1.05 && alpha_meas <= ind.rho_bound * 1.05)
      ++pass;
  }
  std::ostringstream os;
  os << pass << "/" << total << " beta_ratio=" << worst_beta
     << " alpha_ratio=" << worst_alpha;
  detail = os.str();
  return pass == total;
}

bool divergence_contrast(std::string& detail) {
  const int n_max = 50;
  const DivergenceSeries ds =
      divergence_series(0.5, n_max, 100l * n_max * n_max);
  int first_below = -1;
  for (int n = 1; n <= n_max; ++n)
    if (ds.integral_values[n - 1] < -1.0) {
      first_below = n;
      break;
    }
  bool tail_decreasing = true;
  for (int n = n_max / 2; n < n_max; ++n)
    if (ds.integral_values[n] >= ds.integral_values[n - 1])
      tail_decreasing = false;

  // the r-budgeted integral hull stays inside the Young-Love radius
  const std::size_t m = 512;
  const double r = 10.0;
  const auto w = SampledPath::from_function(1.0, m, [](double t) {
    return Vec{t <= 0.0 ? 0.0 : t * std::cos(kPi / t)};
  });
  const SetValuedPath F =
      SetValuedPath::constant(1.0, m, ConvexBody::interval(-1, 1));
  const YoungConfig cfg(0.75, 0.5);
  const SelectionFamily fam = build_selection_family(F, 0.75, r, 65, 8, 16);
  const AumannIntegral J = aumann_young_integral(F, w, cfg, r, fam);
  double hull_radius = 0.0;
  for (const Vec& v : J.hull.vertices)
    hull_radius = std::max(hull_radius, std::abs(v[0]));

  std::ostringstream os;
  os << "first_below=-1 at n=" << first_below << " I_50=" << ds.integral_values[49]
     << " seminorm_50=" << ds.seminorm_lb[49] << " hull_radius=" << hull_radius
     << " <= " << J.radius_bound;
  detail = os.str();
  return first_below > 0 && first_below <= 50 && tail_decreasing &&
         ds.seminorm_lb[49] > ds.seminorm_lb[24] &&
         hull_radius <= J.radius_bound + 1e-9;
}

bool inclusion_solver(std::string& detail) {
  std::ostringstream os;
  bool ok = true;

  // trivial first order: constant singleton coefficient
  {
    InclusionProblem p;
    p.phi = make_constant_phi(ConvexBody::singleton({0.7}), 1, 1);
    p.xi = {2.0};
    p.w = SampledPath::from_function(1.0, 512, [](double t) { return Vec{t}; });
    p.alpha = 0.6;
    p.beta = 0.95;
    p.r = 1.4;
    p.n_measures = 4;
    p.n_anchors = 6;
    SelectionStrategy st;
    st.seed = 71;
    const SolutionReport rep = solve_first_order(p, st, 72);
    const double err = std::abs(rep.path.values.back()[0] - 2.7);
    ok = ok && rep.converged && err <= 1e-4 && rep.residual <= 1e-3;
    os << "const_err=" << err << " ";
  }

  // Lipschitz problem over 10 fbm seeds
  {
    InclusionProblem p;
    p.alpha = 0.45;
    p.beta = 0.8;
    p.phi =
        make_radius_field_phi(octagon(0.5, {0.6, 0.25}), 0.08, 0.02, {1.0}, 1, 2);
    p.xi = {0.3};
    p.r = 0.2;
    p.n_measures = 4;
    p.n_anchors = 8;
    p.budget.steiner_samples = 128;
    int converged = 0, feasible = 0;
    double worst_resid = 0.0, worst_cond = 0.0;
    int worst_iters = 0;
    for (int s = 0; s < 10; ++s) {
      p.w = time_augmented(sample_fbm(0.85, 1.0, 256, 1, derive_seed(73, s)));
      SelectionStrategy st;
      st.seed = derive_seed(74, s);
      const SolutionReport rep = solve_first_order(p, st, derive_seed(75, s));
      converged += rep.converged;
      feasible += rep.schedule_feasible;
      worst_resid = std::max(worst_resid, rep.residual);
      worst_iters = std::max(worst_iters, rep.max_window_iterations);
      for (double c : rep.window_condition) worst_cond = std::max(worst_cond, c);
    }
    ok = ok && converged == 10 && feasible == 10 && worst_resid <= 1e-3 &&
         worst_iters <= 50 && worst_cond <= 1.0 + 1e-12;
    os << "lipschitz: conv=" << converged << "/10 resid=" << worst_resid
       << " iters=" << worst_iters << " cond=" << worst_cond << " ";
  }

  // second order, deterministic driver
  {
    InclusionProblem p;
    p.phi = make_constant_phi(ConvexBody::singleton({1.0}), 1, 1);
    p.xi = {0.5};
    p.w = SampledPath::from_function(1.0, 8192, [](double t) { return Vec{t}; });
    p.alpha = 0.6;
    p.beta = 0.95;
    p.r = 0.1;
    p.n_measures = 2;
    p.n_anchors = 2;
    const SolutionReport rep = solve_second_order(p, 76);
    const double err = std::abs(rep.path.values.back()[0] - 1.0);
    ok = ok && rep.converged && err <= 1e-4;
    os << "second_t_err=" << err << " ";
  }

  // second order along fbm: chain rule within 1e-3, parts identity within
  // the Young tolerance (the quadratic variation scale 3 m^{-1/2})
  {
    InclusionProblem p;
    p.alpha = 0.55;
    p.beta = 0.7;
    p.phi = make_constant_phi(ConvexBody::singleton({1.0}), 1, 1);
    p.xi = {0.0};
    const std::size_t m = std::size_t{1} << 16;
    p.w = sample_fbm(0.75, 1.0, m, 1, 77);
    p.r = 0.1;
    p.n_measures = 2;
    p.n_anchors = 2;
    const SolutionReport rep = solve_second_order(p, 78);
    const double wt = p.w.values.back()[0];
    const double err = std::abs(rep.path.values.back()[0] - 0.5 * wt * wt);
    const double young_tol = 3.0 / std::sqrt(static_cast<double>(m));
    ok = ok && rep.converged && err <= 1e-3 && rep.ipp_residual <= young_tol;
    os << "second_fbm_err=" << err << " ipp=" << rep.ipp_residual << "/"
       << young_tol;
  }

  detail = os.str();
  return ok;
}

bool fbm_covariance_criterion(std::string& detail) {
  std::ostringstream os;
  bool ok = true;
  const std::size_t m = 8;
  const int n_paths = 10000;
  for (double H : {0.6, 0.75, 0.9}) {
    std::vector<double> sum(m, 0.0), cross(m * m, 0.0);
    for (int pth = 0; pth < n_paths; ++pth) {
      const SampledPath b =
          sample_fbm(H, 1.0, m, 1,
                     derive_seed(81, pth, static_cast<std::uint64_t>(H * 100)));
      for (std::size_t i = 0; i < m; ++i) {
        sum[i] += b.values[i + 1][0];
        for (std::size_t j = 0; j <= i; ++j)
          cross[i * m + j] += b.values[i + 1][0] * b.values[j + 1][0];
      }
    }
    double max_z = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double n = n_paths;
        const double emp =
            cross[i * m + j] / n - (sum[i] / n) * (sum[j] / n);
        const double ti = static_cast<double>(i + 1) / m;
        const double tj = static_cast<double>(j + 1) / m;
        const double theory = fbm_covariance(H, tj, ti);
        const double se = std::sqrt((fbm_covariance(H, ti, ti) *
                                         fbm_covariance(H, tj, tj) +
                                     theory * theory) /
                                    (n - 1));
        max_z = std::max(max_z, std::abs(emp - theory) / se);
      }
    os << "H=" << H << " max|z|=" << max_z << " ";
    ok = ok && max_z <= 3.0;
  }
  detail = os.str();
  return ok;
}

bool cli_determinism(std::string& detail) {
  const char* bin = std::getenv("SETYOUNG_BIN");
  if (bin == nullptr) {
    detail = "SETYOUNG_BIN not set";
    return false;
  }
  const fs::path dir = fs::temp_directory_path() / "setyoung_acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name);
    out << text;
  };
  write("steiner.json",
        R"({"body": {"dim": 2, "vertices": [[0.0,1.0],[-0.9,-0.5],[0.9,-0.5]]}, "n_samples": 20000})");
  write("metrics.json", R"({"dim": 2, "n_triples": 30, "n_dirs": 512})");
  write("young.json", R"({"case": "fbm", "m": 4096, "n_seeds": 3})");
  write("aumann.json",
        R"({"F": {"kind": "drift_interval", "lo": -0.5, "hi": 0.5, "drift": 0.6},
            "w": {"kind": "fbm", "H": 0.8}, "alpha": 0.55, "beta": 0.7,
            "r": 2.0, "m": 48, "n_measures": 8, "n_anchors": 12})");
  write("discretize.json",
        R"({"F": {"kind": "breathing_interval", "base": 0.6, "amp": 0.3},
            "w": {"kind": "fbm", "H": 0.8}, "alpha": 0.5, "beta": 0.7,
            "r": 4.0, "m": 64, "levels": 3, "n_measures": 8, "n_anchors": 12})");
  write("example3.json", R"({"beta": 0.5, "n_max": 12, "m": 14400})");
  write("inclusion.json",
        R"({"order": 1, "problem": {
          "phi": {"name": "constant", "e": 1, "d": 1,
                  "body": {"dim": 1, "vertices": [[0.2],[0.4]]}},
          "xi": [0.0], "alpha": 0.6, "beta": 0.95, "r": 0.5, "m": 512,
          "driver": {"kind": "linear", "slope": [1.0]},
          "n_measures": 4, "n_anchors": 6}})");
  write("funnel.json",
        R"({"n_strategies": 4, "problem": {
          "phi": {"name": "constant", "e": 1, "d": 1,
                  "body": {"dim": 1, "vertices": [[-0.05],[0.05]]}},
          "xi": [0.0], "alpha": 0.6, "beta": 0.95, "r": 0.1, "m": 256,
          "driver": {"kind": "linear", "slope": [1.0]},
          "n_measures": 4, "n_anchors": 6}})");
  write("fbm-check.json", R"({"H": [0.75], "m": 8, "n_paths": 2000})");

  std::ostringstream os;
  bool ok = true;
  for (const std::string cmd :
       {"steiner", "metrics", "young", "aumann", "discretize", "example3",
        "inclusion", "funnel", "fbm-check"}) {
    const std::string cfg = (dir / (cmd + ".json")).string();
    const std::string out_a = (dir / (cmd + "_a")).string();
    const std::string out_b = (dir / (cmd + "_b")).string();
    const std::string base = std::string(bin) + " " + cmd + " --config " + cfg +
                             " --seed 12345 --out ";
    const int rc1 = std::system((base + out_a + " >/dev/null 2>&1").c_str());
    const int rc2 = std::system((base + out_b + " >/dev/null 2>&1").c_str());
    auto slurp = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    };
    const bool same =
        WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0 &&
        slurp(fs::path(out_a) / "results.json") ==
            slurp(fs::path(out_b) / "results.json") &&
        !slurp(fs::path(out_a) / "results.json").empty() &&
        slurp(fs::path(out_a) / "series.csv") ==
            slurp(fs::path(out_b) / "series.csv");
    if (!same) {
      ok = false;
      os << cmd << ":MISMATCH ";
    }
  }
  if (ok) os << "9 commands byte-identical";
  detail = os.str();
  return ok;
}

}  // namespace

int main() {
  Harness h;
  h.criterion(1, "Young engine exactness", young_exactness);
  h.criterion(2, "Young-Love certification (100 cases)", young_love_certification);
  h.criterion(3, "Steiner suite", steiner_suite);
  h.criterion(4, "Metric suite", metric_suite);
  h.criterion(5, "Aumann-Young integral properties (50 instances)",
              aumann_properties);
  h.criterion(6, "Discretization convergence", discretization_convergence);
  h.criterion(7, "Indefinite integral Hoelder bounds (20 instances)",
              indefinite_hoelder_bounds);
  h.criterion(8, "Divergent-selection contrast", divergence_contrast);
  h.criterion(9, "Inclusion solvers", inclusion_solver);
  h.criterion(10, "fBm covariance (3 Hurst values)", fbm_covariance_criterion);
  h.criterion(11, "CLI determinism", cli_determinism);
  if (h.failures > 0) {
    std::printf("%d criterion(s) failed\n", h.failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
