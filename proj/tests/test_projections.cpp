#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lilfields/io.hpp"
#include "lilfields/projections.hpp"
#include "test_helpers.hpp"

using namespace lilfields;

namespace {

LinearModel example_linear_2d() {
  return LinearModel(CoefficientField(2, {{LatticeIndex{0, 0}, 1.0}, {LatticeIndex{1, 0}, 0.5}}),
                     InnovationSpec::standard_normal());
}

VolterraModel single_pair_volterra() {
  return VolterraModel(PairCoefficientField(2, {{{LatticeIndex{1, 0}, LatticeIndex{0, 1}}, 1.0}}),
                       InnovationSpec::standard_normal());
}

HermiteFunctionalModel example_hermite() {
  // Y = 0.8 eps_0 + 0.6 eps_(1,1); f = H_1 + 0.5 H_2 + 0.25 H_3
  return HermiteFunctionalModel(
      CoefficientField(2, {{LatticeIndex{0, 0}, 0.8}, {LatticeIndex{1, 1}, 0.6}}),
      {1.0, 0.5, 0.25});
}

// Innovation value the projection samplers see for (rep_seed, site).
double eps_value(const InnovationSpec& innov, std::uint64_t rep_seed, const LatticeIndex& site) {
  SiteStream s(rep_seed, site);
  return innov.draw(s);
}

// Direct X_0 evaluation on the rep_seed innovation realization.
double direct_x0(const FieldModel& model, std::uint64_t rep_seed) {
  const int d = model_dim(model);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          return eps_value(m.innov, rep_seed, LatticeIndex::zero(d));
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          double acc = 0.0;
          for (const auto& [i, a] : m.coeffs.entries()) {
            acc += a * eps_value(m.innov, rep_seed, LatticeIndex::zero(d) - i);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, VolterraModel>) {
          double acc = 0.0;
          for (const auto& [key, a] : m.coeffs.entries()) {
            acc += a * eps_value(m.innov, rep_seed, LatticeIndex::zero(d) - key.first) *
                   eps_value(m.innov, rep_seed, LatticeIndex::zero(d) - key.second);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, HermiteFunctionalModel>) {
          double y = 0.0;
          for (const auto& [i, a] : m.coeffs.entries()) {
            y += a * eps_value(m.innov, rep_seed, LatticeIndex::zero(d) - i);
          }
          double acc = 0.0;
          for (std::size_t q = 1; q <= m.hermite_c.size(); ++q) {
            acc += m.hermite_c[q - 1] * hermite_eval(static_cast<int>(q), y);
          }
          return acc;
        } else {
          double y = 0.0;
          for (const auto& [i, a] : m.coeffs.entries()) {
            y += a * eps_value(m.innov, rep_seed, LatticeIndex::zero(d) - i);
          }
          return m.g(y) - m.centering;
        }
      },
      model);
}

}  // namespace

TEST_SUITE("projections") {

TEST_CASE("linear projection levels") {
  const LinearModel model = example_linear_2d();
  const auto level0 = projection_sampler(model, 0);
  const auto level1 = projection_sampler(model, 1);
  const auto level2 = projection_sampler(model, 2);
  CHECK(level0.closed_form());
  CHECK(level2.identically_zero());
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const std::uint64_t rs = derive_seed(123, rep);
    CHECK(level0.sample(rs) ==
          doctest::Approx(eps_value(model.innov, rs, LatticeIndex{0, 0})).epsilon(1e-15));
    CHECK(level1.sample(rs) ==
          doctest::Approx(0.5 * eps_value(model.innov, rs, LatticeIndex{-1, 0})).epsilon(1e-15));
    CHECK(level2.sample(rs) == 0.0);
  }
}

TEST_CASE("volterra projection levels") {
  const VolterraModel model = single_pair_volterra();
  const auto level0 = projection_sampler(model, 0);
  const auto level1 = projection_sampler(model, 1);
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const std::uint64_t rs = derive_seed(9, rep);
    CHECK(level0.sample(rs) == 0.0);
    const double want = eps_value(model.innov, rs, LatticeIndex{-1, 0}) *
                        eps_value(model.innov, rs, LatticeIndex{0, -1});
    CHECK(level1.sample(rs) == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("telescoping: levels sum to the field value pathwise") {
  const std::vector<FieldModel> models = {example_linear_2d(), single_pair_volterra(),
                                          example_hermite()};
  for (const FieldModel& model : models) {
    const Coord radius = model_support_radius(model);
    std::vector<ProjectionLevel> levels;
    for (Coord j = 0; j <= radius; ++j) {
      levels.push_back(projection_sampler(model, static_cast<int>(j)));
    }
    for (std::uint64_t rep = 0; rep < 500; ++rep) {
      const std::uint64_t rs = derive_seed(2024, rep);
      double acc = 0.0;
      for (const auto& level : levels) acc += level.sample(rs);
      CHECK(std::abs(acc - direct_x0(model, rs)) < 1e-10);
    }
  }
}

TEST_CASE("martingale differences: centered and uncorrelated across levels") {
  const HermiteFunctionalModel model = example_hermite();
  const auto level0 = projection_sampler(model, 0);
  const auto level1 = projection_sampler(model, 1);
  const int n = 100000;
  std::vector<double> x0(n), x1(n), prod(n);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t rs = derive_seed(5150, static_cast<std::uint64_t>(k));
    x0[k] = level0.sample(rs);
    x1[k] = level1.sample(rs);
    prod[k] = x0[k] * x1[k];
  }
  const auto m0 = testing::mean_se(x0);
  const auto m1 = testing::mean_se(x1);
  const auto mp = testing::mean_se(prod);
  CHECK(std::abs(m0.mean) < 3.0 * m0.se);
  CHECK(std::abs(m1.mean) < 3.0 * m1.se);
  // empirical covariance within 3 SE of zero
  CHECK(std::abs(mp.mean - m0.mean * m1.mean) < 3.0 * mp.se);
}

TEST_CASE("monotone information: partial-sum variances are nondecreasing") {
  const LinearModel model(CoefficientField(2, {{LatticeIndex{0, 0}, 0.3},
                                               {LatticeIndex{1, 0}, -0.7},
                                               {LatticeIndex{-2, 1}, 0.4}}),
                          InnovationSpec::standard_normal());
  double cumulative = 0.0;
  double prev = -1.0;
  for (Coord j = 0; j <= model.coeffs.support_radius(); ++j) {
    cumulative += model.coeffs.shell_sum_sq(j);  // exact variance of sum_{l<=j} X_{0,l}
    CHECK(cumulative >= prev);
    prev = cumulative;
  }
  CHECK(cumulative == doctest::Approx(model.coeffs.sum_sq()).epsilon(1e-12));
}

TEST_CASE("projection norms") {
  const LinearModel model = example_linear_2d();
  McConfig mc;
  mc.reps = 100000;
  mc.seed = 31;
  SUBCASE("closed form at (2,0) is exact, Monte Carlo agrees within 2%") {
    const auto level1 = projection_sampler(model, 1);
    const NormEstimate exact = projection_norm(level1, OrliczParams(2, 0), mc);
    CHECK(exact.value == 0.5);
    CHECK(exact.se == 0.0);
    // force the sampling path via r > 0
    const NormEstimate mc_est = projection_norm(level1, OrliczParams(2, 1e-12), mc);
    CHECK(std::abs(mc_est.value - 0.5) / 0.5 < 0.02);
  }
  SUBCASE("levels beyond the support radius have zero norm") {
    const auto level9 = projection_sampler(model, 9);
    const NormEstimate est = projection_norm(level9, OrliczParams(2, 1), mc);
    CHECK(est.value == 0.0);
  }
  SUBCASE("rademacher shell mass v gives norm sqrt(v)") {
    const LinearModel rad(
        CoefficientField(2, {{LatticeIndex{0, 0}, 1.0}, {LatticeIndex{1, 1}, 0.6},
                             {LatticeIndex{-1, 0}, 0.8}}),
        InnovationSpec::rademacher());
    const auto level1 = projection_sampler(rad, 1);
    const NormEstimate est = projection_norm(level1, OrliczParams(2, 0), mc);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));  // sqrt(0.36 + 0.64)
  }
  SUBCASE("volterra closed form counts unordered pairs once") {
    const VolterraModel both(
        PairCoefficientField(2, {{{LatticeIndex{1, 0}, LatticeIndex{0, 1}}, 1.0},
                                 {{LatticeIndex{0, 1}, LatticeIndex{1, 0}}, 2.0}}),
        InnovationSpec::standard_normal());
    const auto level1 = projection_sampler(both, 1);
    // X_{0,1} = (1+2) eps eps: norm 3
    const NormEstimate est = projection_norm(level1, OrliczParams(2, 0), mc);
    CHECK(est.value == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("hermite norm matches the chaos orthogonality value") {
    const HermiteFunctionalModel model_h = example_hermite();
    const auto level1 = projection_sampler(model_h, 1);
    // ||X_{0,1}||^2 = sum_q c_q^2 q! (s_1^{2q} - s_0^{2q}) with s_1 = 1, s_0 = 0.8
    double want_sq = 0.0;
    const std::vector<double> c = {1.0, 0.5, 0.25};
    for (int q = 1; q <= 3; ++q) {
      want_sq += c[q - 1] * c[q - 1] * std::exp(log_factorial(q)) *
                 (1.0 - std::pow(0.8, 2 * q));
    }
    McConfig big = mc;
    big.reps = 200000;
    const NormEstimate est = projection_norm(level1, OrliczParams(2, 0), big);
    CHECK(est.value == doctest::Approx(std::sqrt(want_sq)).epsilon(0.02));
  }
}

TEST_CASE("nested Monte Carlo fallback telescopes within inner noise") {
  const HolderOfLinearModel model = make_holder_model(
      CoefficientField(1, {{LatticeIndex{0}, 1.0}, {LatticeIndex{1}, 0.5}}),
      InnovationSpec::standard_normal(), GSpec::abs_power(1.0), 1.0);
  const auto level0 = projection_sampler(model, 0, 512);
  const auto level1 = projection_sampler(model, 1, 512);
  CHECK_FALSE(level0.closed_form());
  CHECK(level0.bias_warning());
  // E X_{0,j} stays near zero (3 SE over reps; inner noise is averaged out)
  const int n = 4000;
  std::vector<double> l0(n), l1(n);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t rs = derive_seed(808, static_cast<std::uint64_t>(k));
    l0[k] = level0.sample(rs);
    l1[k] = level1.sample(rs);
  }
  const auto m0 = testing::mean_se(l0);
  const auto m1 = testing::mean_se(l1);
  CHECK(std::abs(m0.mean) < 3.5 * m0.se);
  CHECK(std::abs(m1.mean) < 3.5 * m1.se);
}

TEST_CASE("physical dependence of a linear field") {
  const LinearModel model = example_linear_2d();
  McConfig mc;
  mc.reps = 100000;
  mc.seed = 404;
  SUBCASE("delta_{2,0}(i) = |a_i| sqrt(2) within 2%") {
    for (const auto& [site, a] : model.coeffs.entries()) {
      const NormEstimate est = physical_dependence(model, site, 0.0, mc);
      const double want = std::abs(a) * std::sqrt(2.0);
      CHECK(std::abs(est.value - want) / want < 0.02);
    }
  }
  SUBCASE("outside the support radius the measure is exactly zero") {
    const NormEstimate est = physical_dependence(model, LatticeIndex{5, 5}, 0.0, mc);
    CHECK(est.value == 0.0);
    CHECK(est.se == 0.0);
  }
}

TEST_CASE("holder transforms obey the pathwise Hoelder domination") {
  // |g(x) - g(y)| <= |x - y|^gamma for g = abs_power(gamma), so the
  // difference samples are dominated pointwise and so are the norms.
  const double gamma = 0.75;
  const CoefficientField coeffs(1, {{LatticeIndex{0}, 1.0}, {LatticeIndex{1}, -0.5}});
  const HolderOfLinearModel model = make_holder_model(coeffs, InnovationSpec::standard_normal(),
                                                      GSpec::abs_power(gamma), gamma);
  const LatticeIndex site{1};
  const double a_i = coeffs.at(site);
  const int n = 50000;
  std::vector<double> lhs(n), rhs(n);
  const Rect block(site, site);
  for (int k = 0; k < n; ++k) {
    const std::uint64_t rs = derive_seed(777, static_cast<std::uint64_t>(k));
    const auto [grid, swapped] = simulate_coupled_pair(model, block, rs, LatticeIndex{0});
    lhs[k] = grid.at(site) - swapped.at(site);
    SiteStream orig(rs, LatticeIndex{0});
    SiteStream redraw(rs, LatticeIndex{0}, 1);
    const double diff = model.innov.draw(orig) - model.innov.draw(redraw);
    rhs[k] = std::pow(std::abs(a_i * diff), gamma);
    CHECK(std::abs(lhs[k]) <= rhs[k] + 1e-12);
  }
  const OrliczParams params(2, 0);
  CHECK(orlicz_norm_samples(std::span<const double>(lhs), params) <=
        orlicz_norm_samples(std::span<const double>(rhs), params) + 1e-9);
}

TEST_CASE("dependence profile aggregates shells and serializes") {
  const LinearModel model = example_linear_2d();
  McConfig mc;
  mc.reps = 20000;
  mc.seed = 11;
  const DependenceProfile profile = dependence_profile(model, 0.0, mc);
  CHECK(profile.radius == 1);
  CHECK(profile.delta.size() == 9);  // 3x3 window
  const double shell1 = shell_aggregate(profile, 1);
  // only a_(1,0) = 0.5 lives on shell 1: expect 0.5 sqrt(2) within MC error
  CHECK(shell1 == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(0.05));
  CHECK(shell_aggregate(profile, 4) == 0.0);

  DependenceProfile broken = profile;
  broken.delta.erase(LatticeIndex{0, 1});
  CHECK_THROWS_WITH_AS(shell_aggregate(broken, 1), doctest::Contains("(0,1)"),
                       std::invalid_argument);

  std::ostringstream os;
  write_dependence_csv(profile, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("i1,i2,delta,se,reps\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

}  // TEST_SUITE
