#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "lilfields/bounds.hpp"
#include "lilfields/errors.hpp"
#include "test_helpers.hpp"

using namespace lilfields;

namespace {

VolterraModel example_volterra() {
  return VolterraModel(PairCoefficientField(2, {{{LatticeIndex{1, 0}, LatticeIndex{0, 1}}, 1.0}}),
                       InnovationSpec::standard_normal());
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("weight profiles") {
  const WeightProfile rect(WeightProfileTag::rect_d_half, 2);
  CHECK(rect.weight(0) == 1.0);
  CHECK(rect.weight(1) == 2.0);  // (1+1)^(2/2)
  CHECK(rect.weight(3) == doctest::Approx(4.0));
  const WeightProfile uni(WeightProfileTag::union_d_logp, 1, 1.5);
  CHECK(uni.weight(0) == 1.0);  // L(0) := 1 via L(max(j,1))
  CHECK(uni.weight(1) == 2.0);  // L(1) = 1
  CHECK(uni.weight(2) == doctest::Approx(3.0));  // L(2) = max(ln 2, 1) = 1
  CHECK(uni.weight(4) == doctest::Approx(5.0 * std::pow(std::log(4.0), 1.0 / 1.5)));
}

TEST_CASE("bound_series worked values") {
  SUBCASE("single mass at j = 0") {
    const BoundReport r = bound_series(WeightProfile(WeightProfileTag::rect_d_half, 3), {1.0});
    CHECK(r.total == 1.0);
  }
  SUBCASE("linear example d = 2 with norms (1, 0.5)") {
    const BoundReport r = bound_series(WeightProfile(WeightProfileTag::rect_d_half, 2), {1.0, 0.5});
    CHECK(r.total == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("union profile d = 1, p = 1.5 with norms (1, 1)") {
    const BoundReport r =
        bound_series(WeightProfile(WeightProfileTag::union_d_logp, 1, 1.5), {1.0, 1.0});
    CHECK(r.total == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("negative norms are rejected") {
    CHECK_THROWS_AS(bound_series(WeightProfile(WeightProfileTag::rect_d_half, 1), {1.0, -0.1}),
                    std::invalid_argument);
  }
  SUBCASE("tail flag fires on a fat last term and stays off for a tiny one") {
    CHECK(bound_series(WeightProfile(WeightProfileTag::rect_d_half, 1), {1.0, 1.0}).tail_flag);
    CHECK_FALSE(
        bound_series(WeightProfile(WeightProfileTag::rect_d_half, 1), {1.0, 1e-9}).tail_flag);
  }
}

TEST_CASE("bound_linear_sets worked values") {
  CHECK(bound_linear_sets(1.0, 1.0, 1.0, 1.5, 1.0) == 1.0);
  CHECK(bound_linear_sets(1.0, 1.0, 0.25, 1.5, 1.0) ==
        doctest::Approx(2.0 * bound_linear_sets(1.0, 1.0, 1.0, 1.5, 1.0)).epsilon(1e-12));
  const double p = 1.25;
  CHECK(bound_linear_sets(1.0, std::pow(2.0, p), 1.0, p, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(bound_linear_sets(1.0, 1.0, 0.0, 1.5, 1.0), std::domain_error);
}

TEST_CASE("shell coefficients") {
  ShellContext rect_ctx;
  rect_ctx.profile = WeightProfileTag::rect_d_half;
  SUBCASE("holder with gamma = 1 reduces to the linear kind") {
    const CoefficientField coeffs(2, {{LatticeIndex{0, 0}, 1.0}, {LatticeIndex{1, 0}, 0.5}});
    const LinearModel lin(coeffs, InnovationSpec::standard_normal());
    const HolderOfLinearModel hol(coeffs, InnovationSpec::standard_normal(),
                                  GSpec::signed_power(1.0), 1.0, 0.0);
    for (int j : {0, 1}) {
      CHECK(shell_coefficient(lin, ShellKind::linear, j, rect_ctx) ==
            doctest::Approx(shell_coefficient(hol, ShellKind::holder, j, rect_ctx)).epsilon(1e-9));
    }
  }
  SUBCASE("volterra single pair counts both orderings: sqrt(2) ||eps||^2") {
    const VolterraModel model = example_volterra();
    // enumeration oracle: the displayed double sum
    // sum_{||s1||=j} sum_{||s2||<=j} (a_{s1,s2}^2 + a_{s2,s1}^2) at j = 1
    double oracle = 0.0;
    for (const LatticeIndex& s1 : shell_sites(2, 1)) {
      for (Coord inner = 0; inner <= 1; ++inner) {
        for (const LatticeIndex& s2 : shell_sites(2, inner)) {
          oracle += std::pow(model.coeffs.at(s1, s2), 2) + std::pow(model.coeffs.at(s2, s1), 2);
        }
      }
    }
    CHECK(oracle == doctest::Approx(2.0));  // the single entry appears once per ordering
    const double norm =
        orlicz_norm_quadrature(InnovationSpec::standard_normal(), OrliczParams(2, 1), 128);
    CHECK(shell_coefficient(model, ShellKind::volterra, 1, rect_ctx) ==
          doctest::Approx(std::sqrt(oracle) * norm * norm).epsilon(1e-9));
  }
  SUBCASE("hermite: shell mass 0.25 gives 0.5 C(f)") {
    // sum a^2 = 1 with 0.25 on shell 1
    const HermiteFunctionalModel model(
        CoefficientField(2, {{LatticeIndex{0, 0}, std::sqrt(0.75)}, {LatticeIndex{1, 0}, 0.5}}),
        {0.0, 1.0});  // f = H_2
    const double cf = series_constant(hermite_delta(2), 2, SumProfile::rectangles).value;
    CHECK(shell_coefficient(model, ShellKind::hermite, 1, rect_ctx) ==
          doctest::Approx(0.5 * cf).epsilon(1e-12));
    CHECK(cf == doctest::Approx(4.0));
  }
  SUBCASE("phys_dep kind needs a matching profile") {
    const LinearModel lin(CoefficientField(2, {{LatticeIndex{0, 0}, 1.0}}),
                          InnovationSpec::standard_normal());
    CHECK_THROWS_AS(shell_coefficient(lin, ShellKind::phys_dep, 0, rect_ctx),
                    std::invalid_argument);
    DependenceProfile profile;
    profile.d = 2;
    profile.r = 0.0;  // union profile wants r = 0, rect wants d-1 = 1
    profile.radius = 0;
    profile.delta[LatticeIndex{0, 0}] = {0.5, 0.0};
    ShellContext ctx = rect_ctx;
    ctx.dependence = &profile;
    CHECK_THROWS_AS(shell_coefficient(lin, ShellKind::phys_dep, 0, ctx), std::invalid_argument);
    ctx.profile = WeightProfileTag::union_d_logp;
    CHECK(shell_coefficient(lin, ShellKind::phys_dep, 0, ctx) == 0.5);
  }
  SUBCASE("holder with gamma <= 1/2 is outside the Orlicz domain") {
    const HolderOfLinearModel m(CoefficientField(1, {{LatticeIndex{0}, 1.0}}),
                                InnovationSpec::standard_normal(), GSpec::abs_power(0.4), 0.4, 0.5);
    CHECK_THROWS_AS(shell_coefficient(m, ShellKind::holder, 0, rect_ctx), capability_error);
  }
}

TEST_CASE("model bound series: exact at the support radius, correct scaling") {
  ShellContext ctx;
  const WeightProfile rect(WeightProfileTag::rect_d_half, 2);
  SUBCASE("linear: no tail flag, exact flag set, degree-1 scaling") {
    const CoefficientField coeffs(2, {{LatticeIndex{0, 0}, 1.0}, {LatticeIndex{1, 0}, 0.5}});
    const LinearModel model(coeffs, InnovationSpec::standard_normal());
    const BoundReport base = model_bound_series(model, ShellKind::linear, rect, ctx);
    CHECK(base.exact_at_jmax);
    CHECK_FALSE(base.tail_flag);
    CHECK(base.constant_free);
    CHECK(base.terms.size() == 2);
    const double alpha = 3.0;
    const LinearModel scaled(coeffs.scaled(alpha), InnovationSpec::standard_normal());
    const BoundReport after = model_bound_series(scaled, ShellKind::linear, rect, ctx);
    CHECK(testing::rel_err(after.total, alpha * base.total) < 1e-12);
  }
  SUBCASE("holder scales with degree gamma") {
    const double gamma = 0.75;
    const CoefficientField coeffs(1, {{LatticeIndex{0}, 1.0}, {LatticeIndex{1}, -0.5}});
    const HolderOfLinearModel model(coeffs, InnovationSpec::standard_normal(),
                                    GSpec::abs_power(gamma), gamma, 0.0);
    const HolderOfLinearModel scaled(coeffs.scaled(2.0), InnovationSpec::standard_normal(),
                                     GSpec::abs_power(gamma), gamma, 0.0);
    const WeightProfile rect1(WeightProfileTag::rect_d_half, 1);
    const double base = model_bound_series(model, ShellKind::holder, rect1, ctx).total;
    const double after = model_bound_series(scaled, ShellKind::holder, rect1, ctx).total;
    CHECK(testing::rel_err(after, std::pow(2.0, gamma) * base) < 1e-12);
  }
  SUBCASE("volterra and hermite scale with degree 1") {
    const VolterraModel volterra = example_volterra();
    const VolterraModel volterra_scaled(volterra.coeffs.scaled(2.5), volterra.innov);
    const double v_base = model_bound_series(volterra, ShellKind::volterra, rect, ctx).total;
    const double v_after =
        model_bound_series(volterra_scaled, ShellKind::volterra, rect, ctx).total;
    CHECK(testing::rel_err(v_after, 2.5 * v_base) < 1e-12);

    // hermite scaling acts on the chaos coefficients (the a's stay unit-mass)
    const CoefficientField unit(2, {{LatticeIndex{0, 0}, 0.6}, {LatticeIndex{1, 1}, 0.8}});
    const HermiteFunctionalModel h(unit, {1.0, 0.5});
    const HermiteFunctionalModel h_scaled(unit, {2.0, 1.0});
    const double h_base = model_bound_series(h, ShellKind::hermite, rect, ctx).total;
    const double h_after = model_bound_series(h_scaled, ShellKind::hermite, rect, ctx).total;
    CHECK(testing::rel_err(h_after, 2.0 * h_base) < 1e-12);
  }
}

TEST_CASE("physical-dependence series is a constant multiple for linear fields") {
  // delta_{2,d-1}(i) = |a_i| ||eps - eps'||_{2,d-1} exactly, so the series
  // term ratio against the linear kind is ||eps - eps'|| / ||eps|| at every j.
  const CoefficientField coeffs(2, {{LatticeIndex{0, 0}, 1.0},
                                    {LatticeIndex{1, 0}, 0.5},
                                    {LatticeIndex{-1, 1}, 0.25}});
  const LinearModel model(coeffs, InnovationSpec::standard_normal());
  const OrliczParams params(2, 1);  // r = d - 1 = 1
  const double norm_eps = orlicz_norm_quadrature(InnovationSpec::standard_normal(), params, 128);
  // eps - eps' ~ sqrt(2) Z; Luxemburg norms are homogeneous
  const double norm_diff = std::sqrt(2.0) * norm_eps;

  DependenceProfile profile;
  profile.d = 2;
  profile.r = 1.0;
  profile.radius = coeffs.support_radius();
  for (Coord j = 0; j <= profile.radius; ++j) {
    for (const LatticeIndex& site : shell_sites(2, j)) {
      profile.delta[site] = {std::abs(coeffs.at(site)) * norm_diff, 0.0};
    }
  }
  ShellContext dep_ctx;
  dep_ctx.profile = WeightProfileTag::rect_d_half;
  dep_ctx.dependence = &profile;
  ShellContext lin_ctx;
  lin_ctx.profile = WeightProfileTag::rect_d_half;
  for (int j = 0; j <= 1; ++j) {
    const double dep = shell_coefficient(model, ShellKind::phys_dep, j, dep_ctx);
    const double lin = shell_coefficient(model, ShellKind::linear, j, lin_ctx);
    CHECK(testing::rel_err(dep, lin * (norm_diff / norm_eps)) < 1e-10);
  }
}

TEST_CASE("bound report json carries per-term breakdown") {
  const BoundReport r = bound_series(WeightProfile(WeightProfileTag::rect_d_half, 2), {1.0, 0.5});
  const std::string json = to_json_string(r);
  CHECK(json.find("\"terms\"") != std::string::npos);
  CHECK(json.find("\"constant_free\": true") != std::string::npos);
}

}  // TEST_SUITE
