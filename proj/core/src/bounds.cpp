#include "lilfields/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lilfields/chaos.hpp"
#include "lilfields/errors.hpp"
#include "lilfields/scalars.hpp"

namespace lilfields {

WeightProfile::WeightProfile(WeightProfileTag tag_, int d_, double p_) : tag(tag_), d(d_), p(p_) {
  if (d < 1) throw std::invalid_argument("WeightProfile: d must be >= 1");
  if (tag == WeightProfileTag::union_d_logp) validate_lp_exponent(p);
}

double WeightProfile::weight(int j) const {
  if (j < 0) throw std::invalid_argument("WeightProfile: j must be >= 0");
  const double j1 = static_cast<double>(j + 1);
  if (tag == WeightProfileTag::rect_d_half) return std::pow(j1, 0.5 * d);
  // L is defined on (0, inf); the j = 0 weight uses L(max(j,1)) = 1.
  const double lj = slow_log(static_cast<double>(std::max(j, 1)));
  return std::pow(j1, static_cast<double>(d)) * std::pow(lj, 1.0 / p);
}

BoundReport bound_series(const WeightProfile& weights, const std::vector<double>& shell_norms) {
  BoundReport report;
  report.profile = weights.tag == WeightProfileTag::rect_d_half ? "rectangles" : "set_sequence";
  double last_term = 0.0;
  for (std::size_t k = 0; k < shell_norms.size(); ++k) {
    const double norm = shell_norms[k];
    if (!(norm >= 0.0)) {
      throw std::invalid_argument("bound_series: negative shell norm at j=" + std::to_string(k));
    }
    BoundTerm term;
    term.j = static_cast<int>(k);
    term.weight = weights.weight(term.j);
    term.shell_norm = norm;
    term.term = term.weight * norm;
    report.total += term.term;
    last_term = term.term;
    report.terms.push_back(term);
  }
  report.tail_flag = report.total > 0.0 && last_term > 1e-6 * report.total;
  return report;
}

double bound_linear_sets(double sum_abs_a, double C, double delta, double p, double eps_l2) {
  if (!(delta > 0.0)) throw std::domain_error("bound_linear_sets: delta must be positive");
  if (!(C > 0.0)) throw std::domain_error("bound_linear_sets: C must be positive");
  validate_lp_exponent(p);
  if (!(sum_abs_a >= 0.0) || !(eps_l2 >= 0.0)) {
    throw std::invalid_argument("bound_linear_sets: norms must be nonnegative");
  }
  return std::pow(C, 1.0 / p) * std::pow(delta, -0.5) * eps_l2 * sum_abs_a;
}

namespace {

double orlicz_r_for(const ShellContext& ctx, int d) {
  return ctx.profile == WeightProfileTag::rect_d_half ? static_cast<double>(d - 1) : 0.0;
}

}  // namespace

double shell_coefficient(const FieldModel& model, ShellKind kind, int j, const ShellContext& ctx) {
  if (j < 0) throw std::invalid_argument("shell_coefficient: j must be >= 0");
  const int d = model_dim(model);
  const double r = orlicz_r_for(ctx, d);
  switch (kind) {
    case ShellKind::linear: {
      const auto* m = std::get_if<LinearModel>(&model);
      if (!m) throw std::invalid_argument("shell_coefficient: kind=linear needs a Linear model");
      const double mass = std::sqrt(m->coeffs.shell_sum_sq(j));
      if (mass == 0.0) return 0.0;
      return mass * orlicz_norm_quadrature(m->innov, OrliczParams(2.0, r), ctx.quad_nodes);
    }
    case ShellKind::holder: {
      const auto* m = std::get_if<HolderOfLinearModel>(&model);
      if (!m) throw std::invalid_argument("shell_coefficient: kind=holder needs a HolderOfLinear model");
      if (!(m->gamma > 0.5)) {
        throw capability_error(
            "shell_coefficient: the holder shell factor uses the (2 gamma, r) Orlicz norm, which "
            "requires gamma > 1/2");
      }
      const double mass = std::sqrt(m->coeffs.shell_sum_abs_pow(j, 2.0 * m->gamma));
      if (mass == 0.0) return 0.0;
      return mass * orlicz_norm_quadrature(m->innov, OrliczParams(2.0 * m->gamma, r), ctx.quad_nodes);
    }
    case ShellKind::hermite: {
      const auto* m = std::get_if<HermiteFunctionalModel>(&model);
      if (!m) {
        throw std::invalid_argument("shell_coefficient: kind=hermite needs a HermiteFunctional model");
      }
      const double mass = std::sqrt(m->coeffs.shell_sum_sq(j));
      if (mass == 0.0) return 0.0;
      HermiteCoeffs coeffs;
      coeffs.c = m->hermite_c;
      const SumProfile profile = ctx.profile == WeightProfileTag::rect_d_half
                                     ? SumProfile::rectangles
                                     : SumProfile::set_sequence;
      return mass * series_constant(coeffs, d, profile).value;
    }
    case ShellKind::volterra: {
      const auto* m = std::get_if<VolterraModel>(&model);
      if (!m) throw std::invalid_argument("shell_coefficient: kind=volterra needs a Volterra model");
      const double mass = std::sqrt(m->coeffs.shell_pair_sum_sq(j));
      if (mass == 0.0) return 0.0;
      const double norm = orlicz_norm_quadrature(m->innov, OrliczParams(2.0, r), ctx.quad_nodes);
      return mass * norm * norm;
    }
    case ShellKind::phys_dep: {
      if (!ctx.dependence) {
        throw std::invalid_argument("shell_coefficient: kind=phys_dep needs a DependenceProfile");
      }
      if (ctx.dependence->r != r) {
        throw std::invalid_argument(
            "shell_coefficient: dependence profile was estimated with r=" +
            std::to_string(ctx.dependence->r) + " but the profile requires r=" + std::to_string(r));
      }
      return shell_aggregate(*ctx.dependence, j);
    }
  }
  throw std::invalid_argument("shell_coefficient: bad kind");
}

BoundReport model_bound_series(const FieldModel& model, ShellKind kind, const WeightProfile& weights,
                               const ShellContext& ctx) {
  const Coord radius = model_support_radius(model);
  std::vector<double> norms;
  for (Coord j = 0; j <= radius; ++j) {
    norms.push_back(shell_coefficient(model, kind, static_cast<int>(j), ctx));
  }
  BoundReport report = bound_series(weights, norms);
  // Finite support: the series terminates at J_max = R, so there is no tail.
  report.exact_at_jmax = true;
  report.tail_flag = false;
  switch (kind) {
    case ShellKind::linear:
      report.kind = "linear";
      report.scaling_degree = 1.0;
      break;
    case ShellKind::holder: {
      report.kind = "holder";
      report.scaling_degree = std::get<HolderOfLinearModel>(model).gamma;
      break;
    }
    case ShellKind::hermite:
      report.kind = "hermite";
      report.scaling_degree = 1.0;
      break;
    case ShellKind::volterra:
      report.kind = "volterra";
      report.scaling_degree = 1.0;
      break;
    case ShellKind::phys_dep:
      report.kind = "phys_dep";
      report.scaling_degree = 1.0;
      break;
  }
  return report;
}

std::string to_json_string(const BoundReport& report) {
  nlohmann::json j;
  j["kind"] = report.kind;
  j["profile"] = report.profile;
  j["total"] = report.total;
  j["tail_flag"] = report.tail_flag;
  j["exact_at_jmax"] = report.exact_at_jmax;
  j["constant_free"] = report.constant_free;
  j["scaling_degree"] = report.scaling_degree;
  j["terms"] = nlohmann::json::array();
  for (const BoundTerm& t : report.terms) {
    j["terms"].push_back({{"j", t.j}, {"weight", t.weight}, {"shell_norm", t.shell_norm}, {"term", t.term}});
  }
  return j.dump(2);
}

}  // namespace lilfields
