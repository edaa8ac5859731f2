#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lilfields {

using Coord = std::int64_t;

/// A point of Z^d. The coordinatewise order (coordwise_leq) is partial;
/// operator<=> is lexicographic and only used for container ordering.
class LatticeIndex {
 public:
  LatticeIndex() = default;
  explicit LatticeIndex(std::vector<Coord> coords) : c_(std::move(coords)) {}
  LatticeIndex(std::initializer_list<Coord> coords) : c_(coords) {}

  static LatticeIndex constant(int d, Coord value);
  static LatticeIndex zero(int d) { return constant(d, 0); }
  static LatticeIndex ones(int d) { return constant(d, 1); }

  int dim() const { return static_cast<int>(c_.size()); }
  Coord operator[](int q) const { return c_[static_cast<std::size_t>(q)]; }
  Coord& operator[](int q) { return c_[static_cast<std::size_t>(q)]; }
  const std::vector<Coord>& coords() const { return c_; }
  std::span<const Coord> span() const { return c_; }

  /// sup-norm max_q |i_q|
  Coord linf() const;

  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;
  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;

 private:
  std::vector<Coord> c_;
};

LatticeIndex operator+(const LatticeIndex& a, const LatticeIndex& b);
LatticeIndex operator-(const LatticeIndex& a, const LatticeIndex& b);

/// i ≼ j in the coordinatewise partial order.
bool coordwise_leq(const LatticeIndex& a, const LatticeIndex& b);

std::string to_string(const LatticeIndex& i);

/// Coordinatewise-ordered box [lo, hi] of Z^d. Nonempty by construction.
class Rect {
 public:
  Rect(LatticeIndex lo, LatticeIndex hi);

  int dim() const { return lo_.dim(); }
  const LatticeIndex& lo() const { return lo_; }
  const LatticeIndex& hi() const { return hi_; }
  /// hi_q - lo_q (one less than the point count along axis q)
  Coord side(int q) const { return hi_[q] - lo_[q]; }
  Coord point_count(int q) const { return side(q) + 1; }
  std::int64_t cardinality() const;
  bool contains(const LatticeIndex& i) const;
  /// Box inflated by radius r in every direction.
  Rect inflated(Coord r) const;

  friend bool operator==(const Rect&, const Rect&) = default;

 private:
  LatticeIndex lo_, hi_;
};

std::string to_string(const Rect& r);

/// Dense grid of real values over a box of Z^d. Storage is dimension-1-major:
/// the first coordinate varies fastest in the flat array.
class ValueGrid {
 public:
  ValueGrid(LatticeIndex origin, std::vector<Coord> extents);
  static ValueGrid zeros(const Rect& domain);

  int dim() const { return origin_.dim(); }
  const LatticeIndex& origin() const { return origin_; }
  const std::vector<Coord>& extents() const { return extents_; }
  Rect domain() const;
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

  double at(const LatticeIndex& i) const { return values_[checked_offset(i)]; }
  double& at(const LatticeIndex& i) { return values_[checked_offset(i)]; }
  double flat(std::int64_t k) const { return values_[static_cast<std::size_t>(k)]; }
  double& flat(std::int64_t k) { return values_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  std::int64_t stride(int q) const { return strides_[static_cast<std::size_t>(q)]; }
  std::int64_t offset_of(const LatticeIndex& i) const;
  bool in_domain(const LatticeIndex& i) const;

  friend bool operator==(const ValueGrid&, const ValueGrid&) = default;

 private:
  std::size_t checked_offset(const LatticeIndex& i) const;

  LatticeIndex origin_;
  std::vector<Coord> extents_;
  std::vector<std::int64_t> strides_;
  std::vector<double> values_;
};

/// Anchored partial-sum table: entry at n holds the sum of the source grid
/// over the box [origin, n]. Rectangle sums come out by 2^d-term
/// inclusion-exclusion; immutable once built.
class PrefixTable {
 public:
  explicit PrefixTable(const ValueGrid& source);

  int dim() const { return table_.dim(); }
  const LatticeIndex& origin() const { return table_.origin(); }
  const std::vector<Coord>& extents() const { return table_.extents(); }
  Rect domain() const { return table_.domain(); }

  /// Sum over [origin, n]; n must lie in the domain.
  double anchored_sum(const LatticeIndex& n) const { return table_.at(n); }
  double anchored_flat(std::int64_t k) const { return table_.flat(k); }
  const ValueGrid& table() const { return table_; }

 private:
  ValueGrid table_;
};

/// One pass per dimension over the grid, O(d*N) arithmetic, dimension 1 first.
PrefixTable build_prefix_table(const ValueGrid& grid);

/// Sum of the source grid over r via inclusion-exclusion on the table.
/// Throws std::domain_error naming the violating coordinate if r leaves the
/// table's domain.
double sum_over_rect(const PrefixTable& table, const Rect& r);

/// All n in N^d with every coordinate in {2^0, ..., 2^max_exponent},
/// lexicographic order; cardinality (max_exponent+1)^d.
std::vector<LatticeIndex> dyadic_indices(int max_exponent, int d);

/// Visits every flat offset of a dense box with the given extents in
/// dimension-1-major order, passing (flat offset, coordinate offsets).
template <typename F>
void for_each_site(std::span<const Coord> extents, F&& f) {
  const int d = static_cast<int>(extents.size());
  std::int64_t total = 1;
  for (Coord e : extents) total *= e;
  if (total <= 0) return;
  std::vector<Coord> idx(static_cast<std::size_t>(d), 0);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    f(flat, std::span<const Coord>(idx));
    for (int q = 0; q < d; ++q) {
      if (++idx[static_cast<std::size_t>(q)] < extents[static_cast<std::size_t>(q)]) break;
      idx[static_cast<std::size_t>(q)] = 0;
    }
  }
}

}  // namespace lilfields
