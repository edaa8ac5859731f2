#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lilfields/fields.hpp"
#include "lilfields/projections.hpp"

namespace lilfields {

enum class WeightProfileTag {
  rect_d_half,   // (j+1)^(d/2), summation on rectangles
  union_d_logp,  // (j+1)^d L(j)^(1/p) with L(0) := 1, unions of rectangles
};

struct WeightProfile {
  WeightProfileTag tag;
  int d;
  double p;  // only the union profile reads p

  WeightProfile(WeightProfileTag tag_, int d_, double p_ = 1.5);
  double weight(int j) const;
};

struct BoundTerm {
  int j = 0;
  double weight = 0.0;
  double shell_norm = 0.0;
  double term = 0.0;
};

/// One evaluated bound series. The unspecified absolute constants of the
/// maximal inequalities (c_{p,d} and friends) are never included:
/// constant_free stays true and downstream comparisons are shape-only.
struct BoundReport {
  std::vector<BoundTerm> terms;
  double total = 0.0;
  bool tail_flag = false;
  bool exact_at_jmax = false;  // finite support: no tail beyond J_max
  bool constant_free = true;
  std::string kind;
  std::string profile;
  double scaling_degree = 1.0;  // homogeneity degree in the coefficient field
};

/// sum_j weight(j) * shell_norm(j); tail flag when the last term exceeds
/// 1e-6 of the partial sum. Shell norms must be nonnegative.
BoundReport bound_series(const WeightProfile& weights, const std::vector<double>& shell_norms);

/// C^(1/p) delta^(-1/2) ||eps||_2 sum|a_j| - the linear-process set-sequence
/// bound with the unspecified K(p) factor omitted.
double bound_linear_sets(double sum_abs_a, double C, double delta, double p, double eps_l2);

enum class ShellKind { linear, holder, hermite, volterra, phys_dep };

struct ShellContext {
  WeightProfileTag profile = WeightProfileTag::rect_d_half;
  const DependenceProfile* dependence = nullptr;  // phys_dep only
  int quad_nodes = 128;
};

/// The shell factor at level j of the corollary matching (model, kind):
///   linear    (sum_{||i||=j} a_i^2)^(1/2) * ||eps||_{2,r}
///   holder    (sum_{||i||=j} |a_i|^(2 gamma))^(1/2) * ||eps||_{2 gamma,r}
///   hermite   (sum_{||i||=j} a_i^2)^(1/2) * C(f)
///   volterra  (sum_{||s1||=j, ||s2||<=j} (a^2 + a^2))^(1/2) * ||eps||^2_{2,r}
///   phys_dep  sqrt(sum_{||i||=j} delta(i)^2)
/// with r = d-1 for the rectangle profile and r = 0 for the union profile.
double shell_coefficient(const FieldModel& model, ShellKind kind, int j, const ShellContext& ctx);

/// Full series for a finite-support model, evaluated exactly at
/// J_max = support radius (no tail).
BoundReport model_bound_series(const FieldModel& model, ShellKind kind, const WeightProfile& weights,
                               const ShellContext& ctx);

std::string to_json_string(const BoundReport& report);

}  // namespace lilfields
