#include "lilfields/lattice.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace lilfields {

namespace {

void require_same_dim(const LatticeIndex& a, const LatticeIndex& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

LatticeIndex LatticeIndex::constant(int d, Coord value) {
  if (d < 1) throw std::invalid_argument("LatticeIndex: dimension must be >= 1");
  return LatticeIndex(std::vector<Coord>(static_cast<std::size_t>(d), value));
}

Coord LatticeIndex::linf() const {
  Coord m = 0;
  for (Coord c : c_) m = std::max(m, c < 0 ? -c : c);
  return m;
}

LatticeIndex operator+(const LatticeIndex& a, const LatticeIndex& b) {
  require_same_dim(a, b, "operator+");
  std::vector<Coord> out(a.coords());
  for (int q = 0; q < a.dim(); ++q) out[static_cast<std::size_t>(q)] += b[q];
  return LatticeIndex(std::move(out));
}

LatticeIndex operator-(const LatticeIndex& a, const LatticeIndex& b) {
  require_same_dim(a, b, "operator-");
  std::vector<Coord> out(a.coords());
  for (int q = 0; q < a.dim(); ++q) out[static_cast<std::size_t>(q)] -= b[q];
  return LatticeIndex(std::move(out));
}

bool coordwise_leq(const LatticeIndex& a, const LatticeIndex& b) {
  require_same_dim(a, b, "coordwise_leq");
  for (int q = 0; q < a.dim(); ++q) {
    if (a[q] > b[q]) return false;
  }
  return true;
}

std::string to_string(const LatticeIndex& i) {
  std::ostringstream os;
  os << '(';
  for (int q = 0; q < i.dim(); ++q) {
    if (q) os << ',';
    os << i[q];
  }
  os << ')';
  return os.str();
}

Rect::Rect(LatticeIndex lo, LatticeIndex hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_dim(lo_, hi_, "Rect");
  if (!coordwise_leq(lo_, hi_)) {
    throw std::invalid_argument("Rect: lo must be coordinatewise <= hi, got lo=" +
                                to_string(lo_) + " hi=" + to_string(hi_));
  }
}

std::int64_t Rect::cardinality() const {
  std::int64_t n = 1;
  for (int q = 0; q < dim(); ++q) n *= point_count(q);
  return n;
}

bool Rect::contains(const LatticeIndex& i) const {
  return coordwise_leq(lo_, i) && coordwise_leq(i, hi_);
}

Rect Rect::inflated(Coord r) const {
  LatticeIndex lo = lo_, hi = hi_;
  for (int q = 0; q < dim(); ++q) {
    lo[q] -= r;
    hi[q] += r;
  }
  return Rect(std::move(lo), std::move(hi));
}

std::string to_string(const Rect& r) {
  return "[" + to_string(r.lo()) + ", " + to_string(r.hi()) + "]";
}

ValueGrid::ValueGrid(LatticeIndex origin, std::vector<Coord> extents)
    : origin_(std::move(origin)), extents_(std::move(extents)) {
  if (origin_.dim() != static_cast<int>(extents_.size())) {
    throw std::invalid_argument("ValueGrid: origin/extents dimension mismatch");
  }
  std::int64_t total = 1;
  strides_.resize(extents_.size());
  for (std::size_t q = 0; q < extents_.size(); ++q) {
    if (extents_[q] <= 0) throw std::invalid_argument("ValueGrid: extents must be positive");
    strides_[q] = total;
    total *= extents_[q];
  }
  values_.assign(static_cast<std::size_t>(total), 0.0);
}

ValueGrid ValueGrid::zeros(const Rect& domain) {
  std::vector<Coord> ext(static_cast<std::size_t>(domain.dim()));
  for (int q = 0; q < domain.dim(); ++q) ext[static_cast<std::size_t>(q)] = domain.point_count(q);
  return ValueGrid(domain.lo(), std::move(ext));
}

Rect ValueGrid::domain() const {
  LatticeIndex hi = origin_;
  for (int q = 0; q < dim(); ++q) hi[q] += extents_[static_cast<std::size_t>(q)] - 1;
  return Rect(origin_, std::move(hi));
}

std::int64_t ValueGrid::offset_of(const LatticeIndex& i) const {
  std::int64_t off = 0;
  for (int q = 0; q < dim(); ++q) {
    off += (i[q] - origin_[q]) * strides_[static_cast<std::size_t>(q)];
  }
  return off;
}

bool ValueGrid::in_domain(const LatticeIndex& i) const {
  if (i.dim() != dim()) return false;
  for (int q = 0; q < dim(); ++q) {
    const Coord k = i[q] - origin_[q];
    if (k < 0 || k >= extents_[static_cast<std::size_t>(q)]) return false;
  }
  return true;
}

std::size_t ValueGrid::checked_offset(const LatticeIndex& i) const {
  if (!in_domain(i)) {
    throw std::domain_error("ValueGrid: index " + to_string(i) + " outside domain " +
                            to_string(domain()));
  }
  return static_cast<std::size_t>(offset_of(i));
}

PrefixTable::PrefixTable(const ValueGrid& source) : table_(source) {
  const auto& ext = table_.extents();
  const int d = table_.dim();
  auto& v = table_.values();
  const std::int64_t total = table_.size();
  // Sweep dimension 1 first; the order is fixed for bit-reproducibility.
  for (int q = 0; q < d; ++q) {
    const std::int64_t s = table_.stride(q);
    const std::int64_t m = ext[static_cast<std::size_t>(q)];
    const std::int64_t block = s * m;
    for (std::int64_t base = 0; base < total; base += block) {
      for (std::int64_t k = 1; k < m; ++k) {
        const std::int64_t row = base + k * s;
        const std::int64_t prev = row - s;
        for (std::int64_t t = 0; t < s; ++t) {
          v[static_cast<std::size_t>(row + t)] += v[static_cast<std::size_t>(prev + t)];
        }
      }
    }
  }
}

PrefixTable build_prefix_table(const ValueGrid& grid) { return PrefixTable(grid); }

double sum_over_rect(const PrefixTable& table, const Rect& r) {
  const int d = table.dim();
  if (r.dim() != d) throw std::domain_error("sum_over_rect: dimension mismatch");
  const LatticeIndex& origin = table.origin();
  const Rect dom = table.domain();
  for (int q = 0; q < d; ++q) {
    if (r.lo()[q] < origin[q] || r.hi()[q] > dom.hi()[q]) {
      throw std::domain_error("sum_over_rect: rectangle leaves the table domain at coordinate q=" +
                              std::to_string(q + 1) + " (rect " + to_string(r) + ", domain " +
                              to_string(dom) + ")");
    }
  }
  // Corners with lowered coordinates below the origin contribute zero.
  double total = 0.0;
  LatticeIndex corner = r.hi();
  const unsigned masks = 1u << d;
  for (unsigned mask = 0; mask < masks; ++mask) {
    bool empty = false;
    for (int q = 0; q < d; ++q) {
      corner[q] = (mask & (1u << q)) ? r.lo()[q] - 1 : r.hi()[q];
      if (corner[q] < origin[q]) empty = true;
    }
    if (empty) continue;
    const int parity = __builtin_popcount(mask) & 1;
    const double term = table.anchored_sum(corner);
    total += parity ? -term : term;
  }
  return total;
}

std::vector<LatticeIndex> dyadic_indices(int max_exponent, int d) {
  if (max_exponent < 0) throw std::invalid_argument("dyadic_indices: max_exponent must be >= 0");
  if (d < 1) throw std::invalid_argument("dyadic_indices: d must be >= 1");
  std::int64_t total = 1;
  for (int q = 0; q < d; ++q) total *= max_exponent + 1;
  std::vector<LatticeIndex> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  for (std::int64_t k = 0; k < total; ++k) {
    std::vector<Coord> coords(static_cast<std::size_t>(d));
    for (int q = 0; q < d; ++q) coords[static_cast<std::size_t>(q)] = Coord{1} << e[static_cast<std::size_t>(q)];
    out.emplace_back(std::move(coords));
    // lexicographic: last coordinate advances fastest
    for (int q = d - 1; q >= 0; --q) {
      if (++e[static_cast<std::size_t>(q)] <= max_exponent) break;
      e[static_cast<std::size_t>(q)] = 0;
    }
  }
  return out;
}

}  // namespace lilfields
