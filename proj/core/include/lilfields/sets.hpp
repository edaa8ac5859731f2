#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lilfields/lattice.hpp"

namespace lilfields {

/// Disjoint union of boxes of Z^d; construction rejects overlapping boxes.
class RectUnion {
 public:
  RectUnion(int d, std::vector<Rect> boxes);

  int dim() const { return d_; }
  const std::vector<Rect>& boxes() const { return boxes_; }
  int box_count() const { return static_cast<int>(boxes_.size()); }
  std::int64_t cardinality() const;
  bool contains(const LatticeIndex& i) const;
  /// Smallest box enclosing the union.
  Rect bounding_box() const;
  /// min over boxes and axes of hi_q - lo_q
  Coord min_side() const;

 private:
  int d_;
  std::vector<Rect> boxes_;
};

std::string to_json_string(const RectUnion& u);
RectUnion rect_union_from_json(const std::string& text);

/// Outcome of validating a cardinality sequence against the growth
/// hypotheses l_{n+1} >= l_n >= exp(n^delta) and
/// sum_{k<=n} sqrt(l_k/LL(l_k)) <= C * rhs(n). Both readings of the second
/// condition are reported: c_linear uses rhs = l_n/LL(l_n) as printed,
/// c_sqrt uses rhs = sqrt(l_n/LL(l_n)) as the proof's b_n device does.
struct GrowthCheck {
  bool ok = false;
  double delta_best = 0.0;
  double c_sqrt = 0.0;
  double c_linear = 0.0;
  int failure_index = 0;    // 1-based n of the first violation, 0 when ok
  int reindex_offset = 0;   // leading terms dropped before validation
  std::string reason;
};

/// horizon caps the number of leading entries examined (entries beyond the
/// list length are not extrapolated). A sequence whose observed tail is flat
/// over the last half of the window is rejected: no exp(n^delta) envelope
/// keeps up with a stalled sequence past the window. allow_reindex drops
/// leading terms below e (the n = 1 requirement) and validates the suffix,
/// recording the offset.
GrowthCheck validate_growth(const std::vector<std::int64_t>& cards, int horizon,
                            bool allow_reindex = false);

/// One summation region: a disjoint union of boxes or an explicit site list.
using Region = std::variant<RectUnion, std::vector<LatticeIndex>>;

std::int64_t region_cardinality(const Region& region);
int region_dim(const Region& region);

struct SetSequence {
  std::vector<Region> regions;
  std::vector<std::int64_t> cards;
  GrowthCheck certificate;
};

/// N growing single-box regions whose cardinalities track floor(a^n) under
/// the constraint that every side has at least 5 points. Construction fails
/// loudly when the growth certificate does not pass.
SetSequence geometric_union_sequence(int d, double a, int count);

/// The level-j residue class of u at remainder a: all i with
/// (4j+2) i + a in u. a must lie in [0, 4j+1]^d.
std::vector<LatticeIndex> residue_partition(const RectUnion& u, int j, const LatticeIndex& a);

/// Exact cardinality of one box's residue class (ceil on the lower edge,
/// floor on the upper, clamped at zero).
std::int64_t residue_box_count(const Rect& box, int j, const LatticeIndex& a);

struct ResidueBoundEntry {
  LatticeIndex a;
  std::int64_t card = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
};

/// Compares every residue-class cardinality against the two-sided bound
/// l/((4j+2)^d 4^d) <= l^{a,j} <= l/(4j+2)^d. The upper bound can fail when
/// the modulus does not divide the side point counts (see
/// modulus_divides_sides); violations are recorded, not asserted away.
struct PartitionBoundsReport {
  int j = 1;
  Coord modulus = 6;
  std::int64_t total_cardinality = 0;
  bool sides_at_least_modulus = false;  // every hi_q - lo_q >= 4j+2
  bool modulus_divides_sides = false;   // every point count divisible by 4j+2
  std::vector<ResidueBoundEntry> entries;
  bool all_lower_ok = false;
  bool all_upper_ok = false;
};

PartitionBoundsReport check_partition_bounds(const RectUnion& u, int j);

}  // namespace lilfields
