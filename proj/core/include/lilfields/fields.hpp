#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lilfields/chaos.hpp"
#include "lilfields/innovations.hpp"
#include "lilfields/lattice.hpp"

namespace lilfields {

/// Finite-support real coefficients a_i on Z^d. Ordered map storage keeps
/// iteration deterministic.
class CoefficientField {
 public:
  CoefficientField(int d, std::map<LatticeIndex, double> entries);

  int dim() const { return d_; }
  Coord support_radius() const { return radius_; }
  const std::map<LatticeIndex, double>& entries() const { return entries_; }
  double at(const LatticeIndex& i) const;
  double sum_abs() const;
  double sum_sq() const;
  /// sum over the sup-norm shell ||i|| = j of a_i^2
  double shell_sum_sq(Coord j) const { return shell_sum_abs_pow(j, 2.0); }
  /// sum over the shell of |a_i|^e
  double shell_sum_abs_pow(Coord j, double e) const;

  CoefficientField scaled(double alpha) const;

 private:
  int d_;
  std::map<LatticeIndex, double> entries_;
  Coord radius_;
};

/// Coefficients a_{s1,s2} of a second-order Volterra field; the diagonal
/// vanishes by definition and construction rejects it.
class PairCoefficientField {
 public:
  using Key = std::pair<LatticeIndex, LatticeIndex>;

  PairCoefficientField(int d, std::map<Key, double> entries);

  int dim() const { return d_; }
  Coord support_radius() const { return radius_; }
  const std::map<Key, double>& entries() const { return entries_; }
  double at(const LatticeIndex& s1, const LatticeIndex& s2) const;
  double sum_sq() const;
  /// sum_{||s1||=j} sum_{||s2||<=j} (a_{s1,s2}^2 + a_{s2,s1}^2), the squared
  /// shell factor of the Volterra maximal-inequality bounds.
  double shell_pair_sum_sq(Coord j) const;
  /// Exact squared L^2 norm of the level-j projection for unit-variance
  /// innovations: unordered pairs {u,v} with max(||u||,||v||) = j contribute
  /// (a_{u,v} + a_{v,u})^2.
  double projection_l2_sq(Coord j) const;

  PairCoefficientField scaled(double alpha) const;

 private:
  int d_;
  std::map<Key, double> entries_;
  Coord radius_;
};

/// Closed catalog of Hölder transforms with quadrature-friendly centering in
/// the Gaussian case.
class GSpec {
 public:
  enum class Kind { abs_power, signed_power, clip, soft_threshold };

  static GSpec abs_power(double gamma);
  static GSpec signed_power(double gamma);
  static GSpec clip(double lo, double hi);
  static GSpec soft_threshold(double tau);

  Kind kind() const { return kind_; }
  double param1() const { return a_; }
  double param2() const { return b_; }
  /// Hölder exponent of the transform itself (gamma for the power families,
  /// 1 for the Lipschitz ones).
  double holder_exponent() const;
  /// Kink locations; quadrature panels split there.
  std::vector<double> breakpoints() const;
  double operator()(double x) const;
  std::string name() const;

 private:
  GSpec(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_, b_;
};

struct IidModel {
  IidModel(int d, InnovationSpec innov);
  int d;
  InnovationSpec innov;
};

struct LinearModel {
  LinearModel(CoefficientField coeffs, InnovationSpec innov);
  CoefficientField coeffs;
  InnovationSpec innov;
};

struct HolderOfLinearModel {
  /// gamma in (0,1]; centering holds E g(Y_0) so that the field is centered.
  HolderOfLinearModel(CoefficientField coeffs, InnovationSpec innov, GSpec g, double gamma,
                      double centering);
  CoefficientField coeffs;
  InnovationSpec innov;
  GSpec g;
  double gamma;
  double centering;
};

struct VolterraModel {
  VolterraModel(PairCoefficientField coeffs, InnovationSpec innov);
  PairCoefficientField coeffs;
  InnovationSpec innov;
};

struct HermiteFunctionalModel {
  /// Requires standard normal innovations and sum a_i^2 = 1 (within 1e-12);
  /// hermite_c[k] holds c_{k+1}, the expansion starts at chaos level one so
  /// the field is centered.
  HermiteFunctionalModel(CoefficientField coeffs, std::vector<double> hermite_c);
  CoefficientField coeffs;
  std::vector<double> hermite_c;
  InnovationSpec innov;
};

using FieldModel =
    std::variant<IidModel, LinearModel, HolderOfLinearModel, VolterraModel, HermiteFunctionalModel>;

int model_dim(const FieldModel& model);
Coord model_support_radius(const FieldModel& model);
const InnovationSpec& model_innovation(const FieldModel& model);
std::string model_tag(const FieldModel& model);

/// Innovations on a block, one value per site, addressed by
/// (seed, absolute site, stream). Pure function of its arguments.
ValueGrid innovation_block(const InnovationSpec& innov, const Rect& block, std::uint64_t seed,
                           std::uint64_t stream = 0);

/// One realization of the model on the block: innovations are generated on
/// the block inflated by the support radius and the model map is applied per
/// site. Deterministic in (model, block, seed); innovations at a given
/// absolute site depend on (seed, site) only, so overlapping blocks agree
/// pointwise.
ValueGrid simulate_block(const FieldModel& model, const Rect& block, std::uint64_t seed);

/// Two realizations driven by identical innovations except that the
/// innovation at swap_site is redrawn independently in the second grid.
/// The first grid equals simulate_block(model, block, seed).
std::pair<ValueGrid, ValueGrid> simulate_coupled_pair(const FieldModel& model, const Rect& block,
                                                      std::uint64_t seed,
                                                      const LatticeIndex& swap_site);

enum class CenterMethod { automatic, quadrature, monte_carlo };

struct CenterEstimate {
  double value = 0.0;
  double se = 0.0;  // zero for the quadrature path
};

/// Centering constant E g(Y_0) for Y_0 = sum a_i eps_{-i}: Gauss-Hermite
/// quadrature when the innovations are normal (Y_0 is then exactly
/// N(0, sum a^2)), Monte Carlo with a reported standard error otherwise.
CenterEstimate holder_center(const GSpec& g, const CoefficientField& coeffs,
                             const InnovationSpec& innov,
                             CenterMethod method = CenterMethod::automatic,
                             std::int64_t reps = 200000, std::uint64_t seed = 1);

/// HolderOfLinear with the centering computed by holder_center.
HolderOfLinearModel make_holder_model(CoefficientField coeffs, InnovationSpec innov, GSpec g,
                                      double gamma, std::int64_t center_reps = 200000,
                                      std::uint64_t center_seed = 1);

}  // namespace lilfields
