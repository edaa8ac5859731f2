#include "lilfields/sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lilfields/scalars.hpp"

namespace lilfields {

namespace {

bool boxes_overlap(const Rect& a, const Rect& b) {
  for (int q = 0; q < a.dim(); ++q) {
    if (a.hi()[q] < b.lo()[q] || b.hi()[q] < a.lo()[q]) return false;
  }
  return true;
}

Coord floor_div(Coord num, Coord den) {
  Coord q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

Coord ceil_div(Coord num, Coord den) { return -floor_div(-num, den); }

}  // namespace

RectUnion::RectUnion(int d, std::vector<Rect> boxes) : d_(d), boxes_(std::move(boxes)) {
  if (d_ < 1) throw std::invalid_argument("RectUnion: dimension must be >= 1");
  if (boxes_.empty()) throw std::invalid_argument("RectUnion: need at least one box");
  for (const Rect& b : boxes_) {
    if (b.dim() != d_) throw std::invalid_argument("RectUnion: box dimension mismatch");
  }
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    for (std::size_t k = i + 1; k < boxes_.size(); ++k) {
      if (boxes_overlap(boxes_[i], boxes_[k])) {
        throw std::invalid_argument("RectUnion: boxes " + to_string(boxes_[i]) + " and " +
                                    to_string(boxes_[k]) + " overlap");
      }
    }
  }
}

std::int64_t RectUnion::cardinality() const {
  std::int64_t n = 0;
  for (const Rect& b : boxes_) n += b.cardinality();
  return n;
}

bool RectUnion::contains(const LatticeIndex& i) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Rect& b) { return b.contains(i); });
}

Rect RectUnion::bounding_box() const {
  LatticeIndex lo = boxes_.front().lo();
  LatticeIndex hi = boxes_.front().hi();
  for (const Rect& b : boxes_) {
    for (int q = 0; q < d_; ++q) {
      lo[q] = std::min(lo[q], b.lo()[q]);
      hi[q] = std::max(hi[q], b.hi()[q]);
    }
  }
  return Rect(std::move(lo), std::move(hi));
}

Coord RectUnion::min_side() const {
  Coord m = boxes_.front().side(0);
  for (const Rect& b : boxes_) {
    for (int q = 0; q < d_; ++q) m = std::min(m, b.side(q));
  }
  return m;
}

std::string to_json_string(const RectUnion& u) {
  nlohmann::json j;
  j["d"] = u.dim();
  j["boxes"] = nlohmann::json::array();
  for (const Rect& b : u.boxes()) {
    nlohmann::json box;
    box["lo"] = b.lo().coords();
    box["hi"] = b.hi().coords();
    j["boxes"].push_back(box);
  }
  return j.dump();
}

RectUnion rect_union_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int d = j.at("d").get<int>();
  std::vector<Rect> boxes;
  for (const auto& box : j.at("boxes")) {
    boxes.emplace_back(LatticeIndex(box.at("lo").get<std::vector<Coord>>()),
                       LatticeIndex(box.at("hi").get<std::vector<Coord>>()));
  }
  return RectUnion(d, std::move(boxes));
}

GrowthCheck validate_growth(const std::vector<std::int64_t>& cards, int horizon,
                            bool allow_reindex) {
  GrowthCheck out;
  if (cards.empty()) {
    out.reason = "empty cardinality sequence";
    return out;
  }
  if (allow_reindex) {
    std::size_t drop = 0;
    while (drop < cards.size() && static_cast<double>(cards[drop]) < std::exp(1.0)) ++drop;
    if (drop > 0 && drop < cards.size()) {
      const std::vector<std::int64_t> suffix(cards.begin() + static_cast<std::ptrdiff_t>(drop),
                                             cards.end());
      out = validate_growth(suffix, horizon - static_cast<int>(drop), false);
      out.reindex_offset = static_cast<int>(drop);
      return out;
    }
  }
  const int n_max = std::min<int>(horizon, static_cast<int>(cards.size()));
  if (n_max < 1) {
    out.reason = "horizon must be >= 1";
    return out;
  }
  const double e = std::exp(1.0);
  for (int n = 1; n <= n_max; ++n) {
    const std::int64_t l = cards[static_cast<std::size_t>(n - 1)];
    if (l < 1) {
      out.failure_index = n;
      out.reason = "cardinality below 1 at n=" + std::to_string(n);
      return out;
    }
    if (n > 1 && l < cards[static_cast<std::size_t>(n - 2)]) {
      out.failure_index = n;
      out.reason = "cardinalities decrease at n=" + std::to_string(n);
      return out;
    }
  }
  // n = 1 demands l_1 >= exp(1^delta) = e for every delta > 0.
  if (static_cast<double>(cards[0]) < e) {
    out.failure_index = 1;
    out.reason = "l_1 = " + std::to_string(cards[0]) + " < e";
    return out;
  }
  // delta_best = min_n ln(ln l_n)/ln n over 2 <= n <= horizon; the growth
  // condition is monotone in delta, so the analytic minimum is exact.
  double delta = 1.0;
  for (int n = 2; n <= n_max; ++n) {
    const double l = static_cast<double>(cards[static_cast<std::size_t>(n - 1)]);
    const double ratio = std::log(std::log(l)) / std::log(static_cast<double>(n));
    if (!(ratio > 0.0)) {
      out.failure_index = n;
      out.reason = "l_n = " + std::to_string(cards[static_cast<std::size_t>(n - 1)]) +
                   " <= e at n=" + std::to_string(n) + " (nonpositive growth ratio)";
      return out;
    }
    delta = std::min(delta, ratio);
  }
  // A flat observed tail is incompatible with l_n >= exp(n^delta) continuing
  // past the window for any delta > 0; reject rather than certify.
  if (n_max >= 4) {
    const int tail_start = n_max / 2 + 1;
    bool flat = true;
    for (int n = tail_start; n < n_max; ++n) {
      if (cards[static_cast<std::size_t>(n)] != cards[static_cast<std::size_t>(tail_start - 1)]) {
        flat = false;
        break;
      }
    }
    if (flat) {
      out.failure_index = tail_start;
      out.reason = "growth stalls: cardinalities are constant from n=" +
                   std::to_string(tail_start) + " through the horizon";
      return out;
    }
  }
  double partial = 0.0;
  double c_sqrt = 0.0, c_linear = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double l = static_cast<double>(cards[static_cast<std::size_t>(n - 1)]);
    const double ll = slow_log_log(l);
    partial += std::sqrt(l / ll);
    c_sqrt = std::max(c_sqrt, partial / std::sqrt(l / ll));
    c_linear = std::max(c_linear, partial / (l / ll));
  }
  out.ok = true;
  out.delta_best = std::min(delta, 1.0);
  out.c_sqrt = c_sqrt;
  out.c_linear = c_linear;
  return out;
}

std::int64_t region_cardinality(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::int64_t {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RectUnion>) {
          return r.cardinality();
        } else {
          return static_cast<std::int64_t>(r.size());
        }
      },
      region);
}

int region_dim(const Region& region) {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RectUnion>) {
          return r.dim();
        } else {
          return r.empty() ? 0 : r.front().dim();
        }
      },
      region);
}

SetSequence geometric_union_sequence(int d, double a, int count) {
  if (d < 1) throw std::invalid_argument("geometric_union_sequence: d must be >= 1");
  if (!(a > 1.0)) throw std::invalid_argument("geometric_union_sequence: need a > 1");
  if (count < 1) throw std::invalid_argument("geometric_union_sequence: count must be >= 1");
  constexpr Coord kMinPoints = 5;  // keeps every side length >= 4
  SetSequence seq;
  std::int64_t prev_card = 0;
  for (int n = 1; n <= count; ++n) {
    const double target_raw = std::floor(std::pow(a, n));
    if (!(target_raw < 9e17)) {
      throw std::invalid_argument("geometric_union_sequence: a^" + std::to_string(n) +
                                  " overflows the cardinality range");
    }
    std::int64_t target = std::max<std::int64_t>(static_cast<std::int64_t>(target_raw),
                                                 static_cast<std::int64_t>(std::pow(kMinPoints, d)));
    target = std::max(target, prev_card);
    // Near-cubical box: d-1 sides at floor(target^(1/d)), the last side
    // absorbs the remainder. All sides stay >= kMinPoints.
    std::vector<Coord> sides(static_cast<std::size_t>(d));
    Coord base = static_cast<Coord>(std::floor(std::pow(static_cast<double>(target), 1.0 / d)));
    base = std::max(base, kMinPoints);
    std::int64_t others = 1;
    for (int q = 0; q + 1 < d; ++q) {
      sides[static_cast<std::size_t>(q)] = base;
      others *= base;
    }
    sides[static_cast<std::size_t>(d - 1)] =
        std::max<Coord>(kMinPoints, (target + others - 1) / others);
    LatticeIndex lo = LatticeIndex::ones(d);
    LatticeIndex hi = lo;
    for (int q = 0; q < d; ++q) hi[q] = lo[q] + sides[static_cast<std::size_t>(q)] - 1;
    RectUnion region(d, {Rect(lo, hi)});
    const std::int64_t card = region.cardinality();
    if (card < prev_card) {
      throw std::runtime_error("geometric_union_sequence: construction lost monotonicity");
    }
    prev_card = card;
    seq.cards.push_back(card);
    seq.regions.emplace_back(std::move(region));
  }
  seq.certificate = validate_growth(seq.cards, count);
  if (!seq.certificate.ok) {
    throw std::runtime_error("geometric_union_sequence: growth certificate failed: " +
                             seq.certificate.reason);
  }
  return seq;
}

std::int64_t residue_box_count(const Rect& box, int j, const LatticeIndex& a) {
  if (j < 1) throw std::invalid_argument("residue_box_count: j must be >= 1");
  const Coord m = 4 * static_cast<Coord>(j) + 2;
  std::int64_t count = 1;
  for (int q = 0; q < box.dim(); ++q) {
    const Coord lo = ceil_div(box.lo()[q] - a[q], m);
    const Coord hi = floor_div(box.hi()[q] - a[q], m);
    if (hi < lo) return 0;
    count *= hi - lo + 1;
  }
  return count;
}

std::vector<LatticeIndex> residue_partition(const RectUnion& u, int j, const LatticeIndex& a) {
  if (j < 1) throw std::invalid_argument("residue_partition: j must be >= 1");
  if (a.dim() != u.dim()) throw std::invalid_argument("residue_partition: residue dimension mismatch");
  const Coord m = 4 * static_cast<Coord>(j) + 2;
  for (int q = 0; q < a.dim(); ++q) {
    if (a[q] < 0 || a[q] > m - 1) {
      throw std::invalid_argument("residue_partition: residue coordinate q=" + std::to_string(q + 1) +
                                  " outside [0," + std::to_string(m - 1) + "]");
    }
  }
  std::vector<LatticeIndex> out;
  const int d = u.dim();
  for (const Rect& box : u.boxes()) {
    LatticeIndex lo = a, hi = a;
    bool empty = false;
    for (int q = 0; q < d; ++q) {
      lo[q] = ceil_div(box.lo()[q] - a[q], m);
      hi[q] = floor_div(box.hi()[q] - a[q], m);
      if (hi[q] < lo[q]) empty = true;
    }
    if (empty) continue;
    const Rect preimage(lo, hi);
    std::vector<Coord> extents(static_cast<std::size_t>(d));
    for (int q = 0; q < d; ++q) extents[static_cast<std::size_t>(q)] = preimage.point_count(q);
    std::vector<Coord> site(static_cast<std::size_t>(d));
    for_each_site(std::span<const Coord>(extents), [&](std::int64_t, std::span<const Coord> idx) {
      for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = lo[q] + idx[static_cast<std::size_t>(q)];
      out.emplace_back(site);
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartitionBoundsReport check_partition_bounds(const RectUnion& u, int j) {
  if (j < 1) throw std::invalid_argument("check_partition_bounds: j must be >= 1");
  if (u.min_side() < 4) {
    throw std::invalid_argument("check_partition_bounds: every side must be >= 4, got min side " +
                                std::to_string(u.min_side()));
  }
  PartitionBoundsReport report;
  report.j = j;
  report.modulus = 4 * static_cast<Coord>(j) + 2;
  report.total_cardinality = u.cardinality();
  const int d = u.dim();
  const double md = std::pow(static_cast<double>(report.modulus), d);
  const double lower = static_cast<double>(report.total_cardinality) / (md * std::pow(4.0, d));
  const double upper = static_cast<double>(report.total_cardinality) / md;

  report.sides_at_least_modulus = u.min_side() >= report.modulus;
  report.modulus_divides_sides = true;
  for (const Rect& box : u.boxes()) {
    for (int q = 0; q < d; ++q) {
      if (box.point_count(q) % report.modulus != 0) report.modulus_divides_sides = false;
    }
  }

  report.all_lower_ok = true;
  report.all_upper_ok = true;
  std::vector<Coord> extents(static_cast<std::size_t>(d), report.modulus);
  std::vector<Coord> res(static_cast<std::size_t>(d));
  for_each_site(std::span<const Coord>(extents), [&](std::int64_t, std::span<const Coord> idx) {
    for (int q = 0; q < d; ++q) res[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q)];
    ResidueBoundEntry entry;
    entry.a = LatticeIndex(res);
    entry.card = 0;
    for (const Rect& box : u.boxes()) entry.card += residue_box_count(box, j, entry.a);
    entry.lower_bound = lower;
    entry.upper_bound = upper;
    entry.lower_ok = static_cast<double>(entry.card) >= lower;
    entry.upper_ok = static_cast<double>(entry.card) <= upper;
    report.all_lower_ok = report.all_lower_ok && entry.lower_ok;
    report.all_upper_ok = report.all_upper_ok && entry.upper_ok;
    report.entries.push_back(std::move(entry));
  });
  return report;
}

}  // namespace lilfields
