#include <catch2/catch.hpp>

#include "setyoung/aumann.hpp"
#include "setyoung/fbm.hpp"
#include "setyoung/serialization.hpp"

using namespace setyoung;

namespace {

SetValuedPath drift_interval(double T, std::size_t m, double lo, double hi,
                             double drift) {
  return SetValuedPath::from_function(T, m, [=](double t) {
    return ConvexBody::interval(lo + drift * t, hi + drift * t);
  });
}

SetValuedPath rotating_segment(double T, std::size_t m) {
  return SetValuedPath::from_function(T, m, [](double t) {
    return ConvexBody(2, {{0.0, 0.0}, {std::sin(t), std::cos(t)}});
  });
}

double hull_diameter(const ConvexBody& C) {
  double d = 0.0;
  for (const Vec& a : C.vertices)
    for (const Vec& b : C.vertices) d = std::max(d, distance(a, b));
  return d;
}

}  // namespace

TEST_CASE("set-valued path evaluation preserves nodes") {
  const SetValuedPath F = drift_interval(1.0, 8, -1, 1, 0.5);
  CHECK(hausdorff_distance(F.eval(F.time_at(3)), F.bodies[3]) <= 1e-12);
  const ConvexBody mid = F.eval(0.5 * (F.time_at(3) + F.time_at(4)));
  CHECK(hausdorff_distance(
            mid, minkowski_combine(0.5, F.bodies[3], 0.5, F.bodies[4])) <=
        1e-12);
}

TEST_CASE("r_min estimate on fixtures") {
  const SetValuedPath flat =
      SetValuedPath::constant(1.0, 16, ConvexBody::box({-1, -1}, {1, 1}));
  const RminReport none = r_min_estimate(flat, 0.6, 128, 1);
  CHECK(none.value == Approx(0.0).margin(1e-12));

  // translate of a fixed body: both seminorms are driven by the translation
  const SetValuedPath trans = drift_interval(1.0, 32, -1, 1, 0.7);
  const RminReport tr = r_min_estimate(trans, 1.0, 512, 2);
  CHECK(tr.hausdorff_seminorm == Approx(0.7).margin(1e-9));
  CHECK(tr.demyanov_seminorm == Approx(0.7).margin(1e-6));
  CHECK(tr.demyanov_term <= tr.steiner_term + 1e-9);
  CHECK(tr.value == Approx(0.7).margin(1e-6));
}

TEST_CASE("rotating segment blows up the demyanov term only") {
  const double alpha = 0.5;
  const RminReport coarse =
      r_min_estimate(rotating_segment(1.0, 16), alpha, 256, 3);
  const RminReport fine =
      r_min_estimate(rotating_segment(1.0, 64), alpha, 256, 3);
  CHECK(fine.demyanov_term >= 1.5 * coarse.demyanov_term);
  CHECK(fine.hausdorff_seminorm <= 1.5 * coarse.hausdorff_seminorm + 0.1);
  CHECK(fine.demyanov_term > fine.steiner_term);
}

TEST_CASE("selection family for a constant body") {
  const SetValuedPath F =
      SetValuedPath::constant(1.0, 16, ConvexBody::box({-1, -1}, {1, 1}));
  const SelectionFamily fam = build_selection_family(F, 0.6, 0.5, 11, 8, 12);
  CHECK(fam.size() + fam.rejections.size() == 1 + 8 + 12);
  for (const SampledPath& f : fam.members)
    CHECK(holder_seminorm(f, 0.6).seminorm <= 1e-9);
}

TEST_CASE("selection family for a translated body moves with it") {
  const SetValuedPath F = drift_interval(1.0, 24, -1, 1, 0.9);
  const SelectionFamily fam = build_selection_family(F, 1.0, 2.0, 13, 6, 6);
  REQUIRE(fam.size() > 0);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    const SampledPath& f = fam.members[k];
    const auto kind = fam.provenance[k].kind;
    if (kind == SelectionProvenance::Kind::Steiner ||
        kind == SelectionProvenance::Kind::GeneralizedSteiner) {
      // Steiner-type selections of x(t) + C are exact translates
      for (std::size_t i = 0; i <= 24; ++i)
        CHECK(f.values[i][0] - f.values[0][0] ==
              Approx(0.9 * f.time_at(i)).margin(1e-8));
      CHECK(holder_seminorm(f, 1.0).seminorm == Approx(0.9).margin(1e-6));
    } else {
      // anchor projections may hug the tube differently but stay certified
      CHECK(holder_seminorm(f, 1.0).seminorm <= 2.0 + 1e-9);
    }
  }
}

TEST_CASE("pointwise density improves with the measure family") {
  const ConvexBody body(2,
                        {{1.2, 0.1}, {-0.4, 0.8}, {-0.6, -0.7}, {0.9, -0.9}});
  const SetValuedPath F = SetValuedPath::constant(1.0, 4, body);
  double prev = 1e300;
  for (int n_measures : {2, 8, 32}) {
    const SelectionFamily fam =
        build_selection_family(F, 0.6, 1.0, 17, n_measures, 0);
    std::vector<Vec> at_t;
    for (const SampledPath& f : fam.members) at_t.push_back(f.values[2]);
    const ConvexBody inner = canonicalized(ConvexBody(2, std::move(at_t)));
    const double gap = hausdorff_distance(inner, body);
    CHECK(gap <= prev + 1e-12);
    prev = gap;
  }
  // anchors reach the boundary, closing most of the remaining gap
  const SelectionFamily with_anchors =
      build_selection_family(F, 0.6, 1.0, 17, 32, 64);
  std::vector<Vec> at_t;
  for (const SampledPath& f : with_anchors.members) at_t.push_back(f.values[2]);
  const double gap =
      hausdorff_distance(canonicalized(ConvexBody(2, std::move(at_t))), body);
  CHECK(gap < 0.25 * hull_diameter(body));
}

TEST_CASE("family construction rejects over-budget candidates") {
  // narrow fast tube: every selection must end 1.8 above its start, so no
  // candidate can hold a Lipschitz budget of 0.5
  const SetValuedPath F = drift_interval(1.0, 16, -0.1, 0.1, 2.0);
  CHECK_THROWS_AS(build_selection_family(F, 1.0, 0.5, 19, 4, 4), EmptyFamily);
  const SelectionFamily ok = build_selection_family(F, 1.0, 2.5, 19, 4, 4);
  CHECK(ok.rejections.empty());
}

TEST_CASE("aumann integral of a singleton multifunction") {
  const SetValuedPath F =
      SetValuedPath::constant(1.0, 32, ConvexBody::singleton({0.8}));
  const SampledPath w = sample_fbm(0.8, 1.0, 32, 1, 101);
  const YoungConfig cfg(0.6, 0.75);
  const SelectionFamily fam =
      build_selection_family(F, cfg.alpha, 1.0, 23, 4, 4);
  const AumannIntegral J = aumann_young_integral(F, w, cfg, 1.0, fam);
  REQUIRE(J.hull.vertex_count() == 1);
  CHECK(J.hull.vertices[0][0] ==
        Approx(0.8 * (w.values.back()[0] - w.values[0][0])).margin(1e-12));
}

TEST_CASE("aumann integral of the unit interval against w(t)=t") {
  const SetValuedPath F =
      SetValuedPath::constant(1.0, 64, ConvexBody::interval(-1, 1));
  const auto w =
      SampledPath::from_function(1.0, 64, [](double t) { return Vec{t}; });
  const YoungConfig cfg(0.6, 1.0);
  const SelectionFamily fam =
      build_selection_family(F, cfg.alpha, 1.5, 29, 16, 32);
  const AumannIntegral J = aumann_young_integral(F, w, cfg, 1.5, fam);
  double lo = 1e300, hi = -1e300;
  for (const Vec& v : J.hull.vertices) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
  }
  CHECK(lo == Approx(-1.0).margin(1e-8));  // constant selections reach +-1
  CHECK(hi == Approx(1.0).margin(1e-8));
  CHECK(std::max(std::abs(lo), std::abs(hi)) <= J.radius_bound + 1e-9);
}

TEST_CASE("hull is monotone in family size and in the budget r") {
  const SetValuedPath F = drift_interval(1.0, 32, -0.6, 0.4, 0.5);
  const SampledPath w = sample_fbm(0.8, 1.0, 32, 1, 211);
  const YoungConfig cfg(0.6, 0.75);

  // nested measure families (prefix stable) widen the hull
  const SelectionFamily small =
      build_selection_family(F, cfg.alpha, 2.0, 31, 4, 8);
  const SelectionFamily large =
      build_selection_family(F, cfg.alpha, 2.0, 31, 16, 24);
  const AumannIntegral Js = aumann_young_integral(F, w, cfg, 2.0, small);
  const AumannIntegral Jl = aumann_young_integral(F, w, cfg, 2.0, large);
  for (const Vec& v : Js.hull.vertices) CHECK(contains_point(Jl.hull, v, 1e-9));

  // members certified at smaller r are certified at larger r too
  const SelectionFamily tight =
      build_selection_family(F, cfg.alpha, 0.8, 31, 16, 24);
  const AumannIntegral Jt = aumann_young_integral(F, w, cfg, 0.8, tight);
  for (const Vec& v : Jt.hull.vertices) CHECK(contains_point(Jl.hull, v, 1e-9));
  CHECK(tight.size() <= large.size());
}

TEST_CASE("indefinite integral: zero start, Hoelder bounds, rho bound") {
  const SetValuedPath F = drift_interval(1.0, 48, -0.5, 0.5, 0.6);
  const SampledPath w = sample_fbm(0.85, 1.0, 48, 1, 307);
  const YoungConfig cfg(0.55, 0.8);
  const double r = 1.5;
  const SelectionFamily fam = build_selection_family(F, cfg.alpha, r, 37, 8, 16);
  const IndefiniteAumann ind = indefinite_aumann_integral(F, w, cfg, r, fam);

  REQUIRE(ind.hulls.nodes() == 49);
  CHECK(body_norm(ind.hulls.bodies[0]) <= 1e-12);  // J_0 = {0}

  const double C = cfg.global_constant(1.0) * (sup_norm(F) + r) *
                   holder_seminorm(w, cfg.beta).seminorm;
  const HolderReport beta_rep = hausdorff_holder(ind.hulls, cfg.beta);
  CHECK(beta_rep.seminorm <= C * 1.05);
  const HolderReport alpha_rep = hausdorff_holder(ind.hulls, cfg.alpha);
  CHECK(alpha_rep.seminorm <= ind.rho_bound * 1.05);
  for (const ConvexBody& b : ind.hulls.bodies)
    CHECK(body_norm(b) <= ind.radius_bound + 1e-9);
}

TEST_CASE("interpolation of multifunctions") {
  const SetValuedPath F = drift_interval(1.0, 32, -1, 1, 0.8);
  const auto full = stride_dissection(32, 1);
  const SetValuedPath same = interpolate_multifunction(F, full);
  for (std::size_t i = 0; i <= 32; ++i)
    CHECK(hausdorff_distance(same.bodies[i], F.bodies[i]) <= 1e-12);

  const auto coarse = stride_dissection(32, 8);
  const SetValuedPath Fn = interpolate_multifunction(F, coarse);
  for (std::size_t i : coarse)
    CHECK(hausdorff_distance(Fn.bodies[i], F.bodies[i]) <= 1e-12);
  CHECK(hausdorff_holder(Fn, 0.6).seminorm <=
        hausdorff_holder(F, 0.6).seminorm + 1e-9);

  // uneven dissections are fine as long as they span the grid
  CHECK_NOTHROW(interpolate_multifunction(F, {0, 7, 32}));
  CHECK_THROWS_AS(interpolate_multifunction(F, {0, 16}), GridError);
  CHECK_THROWS_AS(interpolate_multifunction(F, {0, 40}), GridError);
}

TEST_CASE("discretization convergence of the integral hulls") {
  const std::size_t m = 64;
  const SetValuedPath F = SetValuedPath::from_function(1.0, m, [](double t) {
    const double s = 0.6 + 0.3 * std::sin(2.0 * kPi * t);
    return ConvexBody::interval(0.2 * t - s, 0.2 * t + s);
  });
  const auto w = SampledPath::from_function(
      1.0, m, [](double t) { return Vec{std::cos(2.0 * t) + 0.5 * t}; });
  const YoungConfig cfg(0.6, 1.0);
  const double r = 4.0;
  const SelectionFamily fam = build_selection_family(F, cfg.alpha, r, 41, 12, 16);
  const AumannIntegral ref = aumann_young_integral(F, w, cfg, r, fam);

  double prev_gap = 1e300;
  double prev_one_sided = 1e300;
  for (int level = 3; level >= 1; --level) {
    const auto diss = stride_dissection(m, std::size_t{1} << level);
    const SetValuedPath Fn = interpolate_multifunction(F, diss);
    const SelectionFamily famn = interpolate_family(fam, Fn, diss, cfg.alpha, r);
    const AumannIntegral Jn = aumann_young_integral(Fn, w, cfg, r, famn);
    const double gap = hausdorff_distance(Jn.hull, ref.hull);
    CHECK(gap <= prev_gap + 1e-12);
    // semicontinuity surrogate: one-sided distance of the interpolant hull
    // into the reference hull also shrinks
    double one_sided = 0.0;
    for (const Vec& v : Jn.hull.vertices)
      one_sided = std::max(one_sided, distance_to_set(v, ref.hull));
    CHECK(one_sided <= prev_one_sided + 1e-12);
    prev_gap = gap;
    prev_one_sided = one_sided;
  }
  CHECK(prev_gap <= 0.01 * hull_diameter(ref.hull));
}

TEST_CASE("lipschitz of the integral in the driving signal") {
  const SetValuedPath F =
      SetValuedPath::constant(1.0, 32, ConvexBody::interval(-0.7, 0.7));
  const YoungConfig cfg(0.6, 0.75);
  const double r = 1.0;
  const SelectionFamily fam = build_selection_family(F, cfg.alpha, r, 43, 8, 8);
  const SampledPath w1 = sample_fbm(0.8, 1.0, 32, 1, 401);

  const LipschitzInWReport same =
      integral_lipschitz_in_w_check(F, w1, w1, cfg, r, fam);
  CHECK(same.lhs <= 1e-12);
  CHECK(same.satisfied);

  Rng rng(67);
  for (int rep = 0; rep < 20; ++rep) {
    SampledPath w2 = w1;
    const double eps = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i <= 32; ++i)
      w2.values[i][0] += eps * w2.time_at(i);
    const LipschitzInWReport r2 =
        integral_lipschitz_in_w_check(F, w1, w2, cfg, r, fam);
    CHECK(r2.satisfied);
  }
}

TEST_CASE("divergence series against the oscillatory driver") {
  const DivergenceSeries ds = divergence_series(0.5, 20, 100l * 20 * 20);
  CHECK(ds.integral_values[0] == 0.0);  // empty effective support at n = 1
  CHECK(ds.integral_values[4] < -1.0);  // well below -1 by n = 5
  for (int n = 10; n < 20; ++n)
    CHECK(ds.integral_values[n] < ds.integral_values[n - 1]);
  CHECK(ds.seminorm_lb[19] > ds.seminorm_lb[9]);
  CHECK(ds.seminorm_lb[19] > 50.0);
  CHECK(ds.compact_radius > 0.0);
  CHECK(std::isfinite(ds.compact_radius));
  CHECK_FALSE(ds.resolution_warning);
  CHECK(divergence_series(0.5, 10, 100).resolution_warning);
}

TEST_CASE("json round trips for bodies, measures and set-valued paths") {
  const ConvexBody body(2, {{1.0, 0.5}, {-0.25, 0.75}, {0.0, -1.0}});
  const ConvexBody body2 = body_from_json(body_to_json(body));
  CHECK(body2.dim == 2);
  CHECK(body2.vertices == body.vertices);

  const SmoothBallMeasure mu = SmoothBallMeasure::bump({0.3, -0.1}, 0.4);
  const SmoothBallMeasure mu2 = measure_from_json(measure_to_json(mu), 2);
  CHECK(mu2.concentration() == mu.concentration());
  CHECK(mu2.center() == mu.center());
  CHECK(measure_from_json(measure_to_json(SmoothBallMeasure::uniform(3)), 3)
            .kind() == SmoothBallMeasure::Kind::Uniform);

  const SetValuedPath F = drift_interval(2.0, 6, -1, 1, 0.4);
  const SetValuedPath F2 = svp_from_json(svp_to_json(F));
  REQUIRE(F2.nodes() == F.nodes());
  CHECK(F2.horizon == Approx(F.horizon));
  for (std::size_t i = 0; i < F.nodes(); ++i)
    CHECK(hausdorff_distance(F2.bodies[i], F.bodies[i]) == 0.0);
}

TEST_CASE("bounded-budget hull stays compact while selections diverge") {
  // same driver as the divergence series, integrated over a certified family
  const std::size_t m = 512;
  const double alpha = 0.75, r = 10.0;
  const auto w = SampledPath::from_function(1.0, m, [](double t) {
    return Vec{t <= 0.0 ? 0.0 : std::pow(t, 1.0) * std::cos(kPi / t)};
  });
  const SetValuedPath F =
      SetValuedPath::constant(1.0, m, ConvexBody::interval(-1, 1));
  const YoungConfig cfg(alpha, 0.5);
  const SelectionFamily fam = build_selection_family(F, alpha, r, 47, 8, 16);
  const AumannIntegral J = aumann_young_integral(F, w, cfg, r, fam);
  for (const Vec& v : J.hull.vertices)
    CHECK(std::abs(v[0]) <= J.radius_bound + 1e-9);
}
