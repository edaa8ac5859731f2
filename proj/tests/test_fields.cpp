#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "lilfields/fields.hpp"
#include "lilfields/io.hpp"
#include "test_helpers.hpp"

using namespace lilfields;

namespace {

CoefficientField single_coeff(int d, double a0) {
  return CoefficientField(d, {{LatticeIndex::zero(d), a0}});
}

LinearModel example_linear_2d() {
  // a_0 = 1, a_(1,0) = 0.5
  return LinearModel(CoefficientField(2, {{LatticeIndex{0, 0}, 1.0}, {LatticeIndex{1, 0}, 0.5}}),
                     InnovationSpec::standard_normal());
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("innovation laws are centered with unit variance") {
  for (const InnovationSpec innov :
       {InnovationSpec::standard_normal(), InnovationSpec::rademacher(),
        InnovationSpec::centered_uniform(), InnovationSpec::two_point(0.25)}) {
    SiteStream stream(5);
    const int n = 400000;
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = innov.draw(stream);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)) * 2.0);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  }
  CHECK(InnovationSpec::rademacher().support_bound() == 1.0);
  CHECK(InnovationSpec::two_point(0.1).support_bound() == doctest::Approx(3.0));
  CHECK_FALSE(InnovationSpec::standard_normal().bounded_support());
}

TEST_CASE("rademacher linear field with a_0 = 2 takes values in {-2, 2}") {
  const LinearModel model(single_coeff(2, 2.0), InnovationSpec::rademacher());
  const ValueGrid grid = simulate_block(model, Rect({1, 1}, {8, 8}), 3);
  for (std::int64_t k = 0; k < grid.size(); ++k) {
    CHECK((grid.flat(k) == 2.0 || grid.flat(k) == -2.0));
  }
}

TEST_CASE("iid normal block means concentrate (CLT check over 100 seeds)") {
  const IidModel model(2, InnovationSpec::standard_normal());
  const Rect block({1, 1}, {32, 32});
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ValueGrid grid = simulate_block(model, block, seed);
    double mean = 0.0;
    for (std::int64_t k = 0; k < grid.size(); ++k) mean += grid.flat(k);
    mean /= static_cast<double>(grid.size());
    if (std::abs(mean) <= 4.0 / std::sqrt(1024.0)) ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("volterra single-pair field is the product of two shifted innovations") {
  const VolterraModel model(
      PairCoefficientField(2, {{{LatticeIndex{1, 0}, LatticeIndex{0, 1}}, 1.0}}),
      InnovationSpec::standard_normal());
  const Rect block({1, 1}, {6, 6});
  const std::uint64_t seed = 99;
  const ValueGrid grid = simulate_block(model, block, seed);
  const ValueGrid eps = innovation_block(model.innov, block.inflated(1), seed);
  for (Coord x = 1; x <= 6; ++x) {
    for (Coord y = 1; y <= 6; ++y) {
      const double want = eps.at({x - 1, y}) * eps.at({x, y - 1});
      CHECK(grid.at({x, y}) == doctest::Approx(want).epsilon(1e-15));
    }
  }
}

TEST_CASE("linearity oracle: linear field equals the direct convolution") {
  const LinearModel model(
      CoefficientField(2, {{LatticeIndex{0, 0}, 1.0},
                           {LatticeIndex{1, 0}, 0.5},
                           {LatticeIndex{-1, 1}, -0.25}}),
      InnovationSpec::centered_uniform());
  const Rect block({1, 1}, {5, 5});
  const std::uint64_t seed = 21;
  const ValueGrid grid = simulate_block(model, block, seed);
  const ValueGrid eps = innovation_block(model.innov, block.inflated(1), seed);
  for (Coord x = 1; x <= 5; ++x) {
    for (Coord y = 1; y <= 5; ++y) {
      double want = 0.0;
      for (const auto& [i, a] : model.coeffs.entries()) {
        want += a * eps.at({x - i[0], y - i[1]});
      }
      CHECK(testing::rel_err(grid.at({x, y}), want) < 1e-12);
    }
  }
}

TEST_CASE("reproducibility and block consistency") {
  const FieldModel model = example_linear_2d();
  const ValueGrid a = simulate_block(model, Rect({1, 1}, {6, 6}), 77);
  const ValueGrid b = simulate_block(model, Rect({1, 1}, {6, 6}), 77);
  CHECK(a == b);  // bit-identical
  // value at a site does not depend on the enclosing block
  const ValueGrid big = simulate_block(model, Rect({-3, -3}, {10, 10}), 77);
  for (Coord x = 1; x <= 6; ++x) {
    for (Coord y = 1; y <= 6; ++y) {
      CHECK(a.at({x, y}) == big.at({x, y}));
    }
  }
  const ValueGrid other = simulate_block(model, Rect({1, 1}, {6, 6}), 78);
  CHECK(a.values() != other.values());
}

TEST_CASE("statistical stationarity across seeds") {
  const FieldModel model = example_linear_2d();
  const Rect block({1, 1}, {8, 8});
  std::vector<double> at_a, at_b;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ValueGrid grid = simulate_block(model, block, seed);
    at_a.push_back(grid.at({3, 3}));
    at_b.push_back(grid.at({6, 5}));
  }
  const auto [mean_a, se_a] = testing::mean_se(at_a);
  const auto [mean_b, se_b] = testing::mean_se(at_b);
  CHECK(std::abs(mean_a - mean_b) < 4.0 * std::sqrt(se_a * se_a + se_b * se_b));
}

TEST_CASE("coupled pair") {
  SUBCASE("a_0-only model differs exactly at the swap site") {
    const LinearModel model(single_coeff(2, 1.0), InnovationSpec::standard_normal());
    const LatticeIndex swap{3, 4};
    const auto [base, swapped] = simulate_coupled_pair(model, Rect({1, 1}, {6, 6}), 5, swap);
    int diffs = 0;
    for (Coord x = 1; x <= 6; ++x) {
      for (Coord y = 1; y <= 6; ++y) {
        if (base.at({x, y}) != swapped.at({x, y})) {
          ++diffs;
          CHECK(LatticeIndex{x, y} == swap);
        }
      }
    }
    CHECK(diffs == 1);
    CHECK(base == simulate_block(model, Rect({1, 1}, {6, 6}), 5));
  }
  SUBCASE("grids agree outside the support-radius ball around the swap site") {
    const FieldModel model = example_linear_2d();  // radius 1
    const LatticeIndex swap{4, 4};
    const auto [base, swapped] = simulate_coupled_pair(model, Rect({1, 1}, {8, 8}), 6, swap);
    for (Coord x = 1; x <= 8; ++x) {
      for (Coord y = 1; y <= 8; ++y) {
        const Coord dist = std::max(std::abs(x - 4), std::abs(y - 4));
        if (dist > 1) CHECK(base.at({x, y}) == swapped.at({x, y}));
      }
    }
  }
  SUBCASE("swap outside the padded block changes nothing") {
    const IidModel model(2, InnovationSpec::standard_normal());
    const auto [base, swapped] = simulate_coupled_pair(model, Rect({1, 1}, {4, 4}), 9,
                                                       LatticeIndex{99, 99});
    CHECK(base == swapped);
  }
}

TEST_CASE("hermite functional model validation") {
  CHECK_THROWS_AS(HermiteFunctionalModel(single_coeff(2, 0.7), {1.0}), std::invalid_argument);
  const HermiteFunctionalModel ok(single_coeff(2, 1.0), {0.0, 1.0});
  CHECK(ok.innov.tag() == InnovationTag::standard_normal);
  // H_2 of the innovation itself: values are eps^2 - 1
  const ValueGrid grid = simulate_block(ok, Rect({1, 1}, {4, 4}), 10);
  const ValueGrid eps = innovation_block(ok.innov, Rect({1, 1}, {4, 4}), 10);
  for (std::int64_t k = 0; k < grid.size(); ++k) {
    CHECK(grid.flat(k) == doctest::Approx(eps.flat(k) * eps.flat(k) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("holder centering") {
  SUBCASE("identity-like clip of a centered law is centered") {
    const CenterEstimate c = holder_center(GSpec::clip(-1e9, 1e9), single_coeff(1, 1.0),
                                           InnovationSpec::rademacher(), CenterMethod::monte_carlo,
                                           50000, 3);
    CHECK(std::abs(c.value) < 3.0 * std::max(c.se, 1e-12));
  }
  SUBCASE("E|Z| = sqrt(2/pi) by quadrature") {
    const CenterEstimate c = holder_center(GSpec::abs_power(1.0), single_coeff(1, 1.0),
                                           InnovationSpec::standard_normal());
    CHECK(c.se == 0.0);
    CHECK(c.value == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-6));
  }
  SUBCASE("odd transform of a symmetric law centers at zero") {
    const CenterEstimate c = holder_center(GSpec::signed_power(1.0), single_coeff(1, 1.0),
                                           InnovationSpec::standard_normal());
    CHECK(std::abs(c.value) < 1e-10);
  }
  SUBCASE("frozen adaptive-quadrature oracle values") {
    // computed independently with scipy.integrate.quad
    CHECK(holder_center(GSpec::abs_power(0.75), single_coeff(1, 1.0),
                        InnovationSpec::standard_normal())
              .value == doctest::Approx(0.7972587140718996).epsilon(1e-11));
    CHECK(holder_center(GSpec::clip(-0.5, 1.25), single_coeff(1, 1.0),
                        InnovationSpec::standard_normal())
              .value == doctest::Approx(0.14720968909590093).epsilon(1e-11));
  }
  SUBCASE("make_holder_model produces a centered field") {
    const HolderOfLinearModel model = make_holder_model(
        single_coeff(1, 1.0), InnovationSpec::standard_normal(), GSpec::abs_power(1.0), 1.0);
    const Rect block({1}, {20000});
    const ValueGrid grid = simulate_block(model, block, 4);
    double mean = 0.0;
    for (std::int64_t k = 0; k < grid.size(); ++k) mean += grid.flat(k);
    mean /= static_cast<double>(grid.size());
    CHECK(std::abs(mean) < 0.02);
  }
}

TEST_CASE("grid binary export round-trips and csv has one row per site") {
  const ValueGrid grid = testing::random_grid(Rect({-1, 2}, {3, 4}), 123);
  const std::string path = (std::filesystem::temp_directory_path() / "lilfields_grid.bin").string();
  write_grid_binary(grid, path);
  const ValueGrid back = read_grid_binary(path);
  CHECK(back == grid);
  std::remove(path.c_str());

  std::ostringstream os;
  write_grid_csv(grid, os);
  const std::string csv = os.str();
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == grid.size() + 1);  // header + one per site
  CHECK(csv.rfind("i1,i2,value\n", 0) == 0);
}

}  // TEST_SUITE
