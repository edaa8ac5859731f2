#pragma once

#include <map>
#include <optional>

#include "lilfields/fields.hpp"
#include "lilfields/mc.hpp"
#include "lilfields/parallel.hpp"
#include "lilfields/scalars.hpp"

namespace lilfields {

/// Sampler of the level-j martingale projection X_{0,j} of a model: the
/// difference of the conditional expectations of X_0 on the innovation
/// windows of sup-norm radius j and j-1 (level 0 conditions on eps_0 alone).
/// Linear, Volterra and Hermite functionals use closed forms; other models
/// fall back to nested Monte Carlo with a declared inner sample size, whose
/// residual noise inflates downstream norms by O(1/inner_samples).
class ProjectionLevel {
 public:
  ProjectionLevel(FieldModel model, int j, int inner_samples);

  const FieldModel& model() const { return model_; }
  int level() const { return j_; }
  bool closed_form() const { return closed_form_; }
  bool bias_warning() const { return !closed_form_ && !identically_zero(); }
  int inner_samples() const { return inner_samples_; }
  bool identically_zero() const { return j_ > model_support_radius(model_); }

  /// One draw of X_{0,j}; a pure function of rep_seed.
  double sample(std::uint64_t rep_seed) const;

 private:
  FieldModel model_;
  int j_;
  int inner_samples_;
  bool closed_form_;
  // Hermite closed form: s_j^2 = sum_{||i||<=j} a_i^2 cached per level
  double s_cur_ = 0.0;
  double s_prev_ = 0.0;
};

ProjectionLevel projection_sampler(const FieldModel& model, int j, int inner_samples = 256);

/// Orlicz norm of X_{0,j}: exact closed-form L^2 for Linear/Volterra with
/// params (2,0), Monte Carlo through orlicz_norm_samples otherwise (delta-
/// method standard error).
NormEstimate projection_norm(const ProjectionLevel& level, const OrliczParams& params,
                             const McConfig& mc, const ParallelContext& par = ParallelContext());

/// Physical dependence measure delta_{2,r}(i): the (2,r)-Orlicz norm of the
/// change of X_i when the innovation at the origin is redrawn. Sites outside
/// the support radius return exactly zero.
NormEstimate physical_dependence(const FieldModel& model, const LatticeIndex& i, double r,
                                 const McConfig& mc, const ParallelContext& par = ParallelContext());

/// delta_{2,r} estimates for every site of the support window, with
/// Monte Carlo metadata. Serializes to CSV (coordinates..., delta, se, reps).
struct DependenceProfile {
  int d = 1;
  double r = 0.0;
  Coord radius = 0;
  std::int64_t reps = 0;
  std::map<LatticeIndex, NormEstimate> delta;
};

DependenceProfile dependence_profile(const FieldModel& model, double r, const McConfig& mc,
                                     const ParallelContext& par = ParallelContext());

/// Shell aggregate sqrt(sum_{||i||=j} delta(i)^2). Shells beyond the profile
/// radius are exactly zero; shells inside it must be fully present.
double shell_aggregate(const DependenceProfile& profile, Coord j);

/// All lattice points with sup-norm exactly j (j = 0 gives the origin).
std::vector<LatticeIndex> shell_sites(int d, Coord j);

}  // namespace lilfields
