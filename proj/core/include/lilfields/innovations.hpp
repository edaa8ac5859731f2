#pragma once

#include <string>

#include "lilfields/rng.hpp"

namespace lilfields {

enum class InnovationTag { standard_normal, rademacher, centered_uniform, two_point };

/// Centered unit-variance innovation law. All four supported tags are
/// normalized so that draws have mean 0 and variance 1; only the normal has
/// unbounded support.
class InnovationSpec {
 public:
  static InnovationSpec standard_normal() { return InnovationSpec(InnovationTag::standard_normal); }
  static InnovationSpec rademacher() { return InnovationSpec(InnovationTag::rademacher); }
  static InnovationSpec centered_uniform() { return InnovationSpec(InnovationTag::centered_uniform); }
  /// P(hi) = q, P(lo) = 1-q with hi = sqrt((1-q)/q), lo = -sqrt(q/(1-q)):
  /// the unique centered unit-variance two-point law with that split.
  static InnovationSpec two_point(double q);

  InnovationTag tag() const { return tag_; }
  double variance() const { return 1.0; }
  bool bounded_support() const { return tag_ != InnovationTag::standard_normal; }
  /// Smallest c with |eps| <= c a.s.; only valid for bounded tags.
  double support_bound() const;
  double two_point_q() const { return q_; }
  double two_point_hi() const;
  double two_point_lo() const;

  double draw(SiteStream& s) const;
  std::string name() const;

 private:
  explicit InnovationSpec(InnovationTag tag, double q = 0.5) : tag_(tag), q_(q) {}

  InnovationTag tag_;
  double q_;
};

}  // namespace lilfields
