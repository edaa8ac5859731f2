#include "lilfields/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "lilfields/quadrature.hpp"

namespace lilfields {

CoefficientField::CoefficientField(int d, std::map<LatticeIndex, double> entries)
    : d_(d), entries_(std::move(entries)), radius_(0) {
  if (d_ < 1) throw std::invalid_argument("CoefficientField: dimension must be >= 1");
  for (const auto& [i, a] : entries_) {
    if (i.dim() != d_) {
      throw std::invalid_argument("CoefficientField: entry " + to_string(i) +
                                  " has wrong dimension");
    }
    if (!std::isfinite(a)) throw std::invalid_argument("CoefficientField: non-finite coefficient");
    radius_ = std::max(radius_, i.linf());
  }
}

double CoefficientField::at(const LatticeIndex& i) const {
  const auto it = entries_.find(i);
  return it == entries_.end() ? 0.0 : it->second;
}

double CoefficientField::sum_abs() const {
  double s = 0.0;
  for (const auto& [i, a] : entries_) s += std::abs(a);
  return s;
}

double CoefficientField::sum_sq() const {
  double s = 0.0;
  for (const auto& [i, a] : entries_) s += a * a;
  return s;
}

double CoefficientField::shell_sum_abs_pow(Coord j, double e) const {
  double s = 0.0;
  for (const auto& [i, a] : entries_) {
    if (i.linf() == j && a != 0.0) s += std::pow(std::abs(a), e);
  }
  return s;
}

CoefficientField CoefficientField::scaled(double alpha) const {
  std::map<LatticeIndex, double> out(entries_);
  for (auto& [i, a] : out) a *= alpha;
  return CoefficientField(d_, std::move(out));
}

PairCoefficientField::PairCoefficientField(int d, std::map<Key, double> entries)
    : d_(d), entries_(std::move(entries)), radius_(0) {
  if (d_ < 1) throw std::invalid_argument("PairCoefficientField: dimension must be >= 1");
  for (const auto& [key, a] : entries_) {
    const auto& [s1, s2] = key;
    if (s1.dim() != d_ || s2.dim() != d_) {
      throw std::invalid_argument("PairCoefficientField: entry with wrong dimension");
    }
    if (s1 == s2 && a != 0.0) {
      throw std::invalid_argument("PairCoefficientField: diagonal entries a_{s,s} must vanish");
    }
    if (!std::isfinite(a)) {
      throw std::invalid_argument("PairCoefficientField: non-finite coefficient");
    }
    radius_ = std::max({radius_, s1.linf(), s2.linf()});
  }
}

double PairCoefficientField::at(const LatticeIndex& s1, const LatticeIndex& s2) const {
  const auto it = entries_.find(Key(s1, s2));
  return it == entries_.end() ? 0.0 : it->second;
}

double PairCoefficientField::sum_sq() const {
  double s = 0.0;
  for (const auto& [key, a] : entries_) s += a * a;
  return s;
}

double PairCoefficientField::shell_pair_sum_sq(Coord j) const {
  // Literal evaluation of the double sum over (s1, s2) with ||s1|| = j and
  // ||s2|| <= j of a_{s1,s2}^2 + a_{s2,s1}^2: an entry whose indices both
  // sit on the shell is reached by both orderings and counts twice.
  double s = 0.0;
  for (const auto& [key, a] : entries_) {
    const auto& [s1, s2] = key;
    const Coord n1 = s1.linf();
    const Coord n2 = s2.linf();
    int multiplicity = 0;
    if (n1 == j && n2 <= j) ++multiplicity;
    if (n2 == j && n1 <= j) ++multiplicity;
    s += multiplicity * a * a;
  }
  return s;
}

double PairCoefficientField::projection_l2_sq(Coord j) const {
  double s = 0.0;
  for (const auto& [key, a] : entries_) {
    const auto& [s1, s2] = key;
    if (std::max(s1.linf(), s2.linf()) != j) continue;
    if (s2 < s1) continue;  // visit each unordered pair once
    const double c = at(s1, s2) + at(s2, s1);
    s += c * c;
  }
  return s;
}

PairCoefficientField PairCoefficientField::scaled(double alpha) const {
  std::map<Key, double> out(entries_);
  for (auto& [key, a] : out) a *= alpha;
  return PairCoefficientField(d_, std::move(out));
}

GSpec GSpec::abs_power(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("GSpec::abs_power: gamma must lie in (0,1]");
  }
  return GSpec(Kind::abs_power, gamma, 0.0);
}

GSpec GSpec::signed_power(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("GSpec::signed_power: gamma must lie in (0,1]");
  }
  return GSpec(Kind::signed_power, gamma, 0.0);
}

GSpec GSpec::clip(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("GSpec::clip: need lo < hi");
  return GSpec(Kind::clip, lo, hi);
}

GSpec GSpec::soft_threshold(double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("GSpec::soft_threshold: tau must be >= 0");
  return GSpec(Kind::soft_threshold, tau, 0.0);
}

double GSpec::holder_exponent() const {
  switch (kind_) {
    case Kind::abs_power:
    case Kind::signed_power:
      return a_;
    case Kind::clip:
    case Kind::soft_threshold:
      return 1.0;
  }
  return 1.0;
}

std::vector<double> GSpec::breakpoints() const {
  switch (kind_) {
    case Kind::abs_power:
    case Kind::signed_power:
      return {0.0};
    case Kind::clip:
      return {a_, b_};
    case Kind::soft_threshold:
      return {-a_, a_};
  }
  return {};
}

double GSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::abs_power:
      return std::pow(std::abs(x), a_);
    case Kind::signed_power:
      return std::copysign(std::pow(std::abs(x), a_), x);
    case Kind::clip:
      return std::min(std::max(x, a_), b_);
    case Kind::soft_threshold: {
      const double m = std::abs(x) - a_;
      return m > 0.0 ? std::copysign(m, x) : 0.0;
    }
  }
  return x;
}

std::string GSpec::name() const {
  switch (kind_) {
    case Kind::abs_power:
      return "abs_power(" + std::to_string(a_) + ")";
    case Kind::signed_power:
      return "signed_power(" + std::to_string(a_) + ")";
    case Kind::clip:
      return "clip(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::soft_threshold:
      return "soft_threshold(" + std::to_string(a_) + ")";
  }
  return "?";
}

IidModel::IidModel(int d_, InnovationSpec innov_) : d(d_), innov(innov_) {
  if (d < 1) throw std::invalid_argument("IidModel: dimension must be >= 1");
}

LinearModel::LinearModel(CoefficientField coeffs_, InnovationSpec innov_)
    : coeffs(std::move(coeffs_)), innov(innov_) {}

HolderOfLinearModel::HolderOfLinearModel(CoefficientField coeffs_, InnovationSpec innov_, GSpec g_,
                                         double gamma_, double centering_)
    : coeffs(std::move(coeffs_)), innov(innov_), g(g_), gamma(gamma_), centering(centering_) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("HolderOfLinearModel: gamma must lie in (0,1]");
  }
  if (!std::isfinite(centering)) {
    throw std::invalid_argument("HolderOfLinearModel: centering must be finite");
  }
}

VolterraModel::VolterraModel(PairCoefficientField coeffs_, InnovationSpec innov_)
    : coeffs(std::move(coeffs_)), innov(innov_) {}

HermiteFunctionalModel::HermiteFunctionalModel(CoefficientField coeffs_,
                                               std::vector<double> hermite_c_)
    : coeffs(std::move(coeffs_)),
      hermite_c(std::move(hermite_c_)),
      innov(InnovationSpec::standard_normal()) {
  if (hermite_c.empty()) {
    throw std::invalid_argument("HermiteFunctionalModel: need at least one chaos coefficient");
  }
  const double s2 = coeffs.sum_sq();
  if (std::abs(s2 - 1.0) > 1e-12) {
    throw std::invalid_argument("HermiteFunctionalModel: coefficients must satisfy sum a^2 = 1, got " +
                                std::to_string(s2));
  }
}

int model_dim(const FieldModel& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          return m.d;
        } else {
          return m.coeffs.dim();
        }
      },
      model);
}

Coord model_support_radius(const FieldModel& model) {
  return std::visit(
      [](const auto& m) -> Coord {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          return 0;
        } else {
          return m.coeffs.support_radius();
        }
      },
      model);
}

const InnovationSpec& model_innovation(const FieldModel& model) {
  return std::visit([](const auto& m) -> const InnovationSpec& { return m.innov; }, model);
}

std::string model_tag(const FieldModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          return "iid";
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          return "linear";
        } else if constexpr (std::is_same_v<T, HolderOfLinearModel>) {
          return "holder_of_linear";
        } else if constexpr (std::is_same_v<T, VolterraModel>) {
          return "volterra";
        } else {
          return "hermite_functional";
        }
      },
      model);
}

ValueGrid innovation_block(const InnovationSpec& innov, const Rect& block, std::uint64_t seed,
                           std::uint64_t stream) {
  ValueGrid grid = ValueGrid::zeros(block);
  const LatticeIndex& origin = grid.origin();
  const int d = grid.dim();
  std::vector<Coord> site(static_cast<std::size_t>(d));
  for_each_site(grid.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
    for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = origin[q] + idx[static_cast<std::size_t>(q)];
    SiteStream s(seed, std::span<const Coord>(site), stream);
    grid.flat(flat) = innov.draw(s);
  });
  return grid;
}

namespace {

// Applies the model map site by site, reading innovations from eps.
ValueGrid apply_model(const FieldModel& model, const Rect& block, const ValueGrid& eps) {
  ValueGrid out = ValueGrid::zeros(block);
  const LatticeIndex& origin = out.origin();
  const int d = out.dim();

  // Precomputed relative offsets into the innovation grid keep the hot loop
  // free of map lookups.
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          LatticeIndex site = origin;
          for_each_site(out.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
            for (int q = 0; q < d; ++q) site[q] = origin[q] + idx[static_cast<std::size_t>(q)];
            out.flat(flat) = eps.at(site);
          });
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          std::vector<std::pair<std::int64_t, double>> taps;
          LatticeIndex rel = origin;
          for (const auto& [i, a] : m.coeffs.entries()) {
            for (int q = 0; q < d; ++q) rel[q] = origin[q] - i[q];
            taps.emplace_back(eps.offset_of(rel), a);
          }
          for_each_site(out.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
            std::int64_t shift = 0;
            for (int q = 0; q < d; ++q) shift += idx[static_cast<std::size_t>(q)] * eps.stride(q);
            double acc = 0.0;
            for (const auto& [off, a] : taps) acc += a * eps.flat(off + shift);
            out.flat(flat) = acc;
          });
        } else if constexpr (std::is_same_v<T, HolderOfLinearModel>) {
          std::vector<std::pair<std::int64_t, double>> taps;
          LatticeIndex rel = origin;
          for (const auto& [i, a] : m.coeffs.entries()) {
            for (int q = 0; q < d; ++q) rel[q] = origin[q] - i[q];
            taps.emplace_back(eps.offset_of(rel), a);
          }
          for_each_site(out.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
            std::int64_t shift = 0;
            for (int q = 0; q < d; ++q) shift += idx[static_cast<std::size_t>(q)] * eps.stride(q);
            double acc = 0.0;
            for (const auto& [off, a] : taps) acc += a * eps.flat(off + shift);
            out.flat(flat) = m.g(acc) - m.centering;
          });
        } else if constexpr (std::is_same_v<T, VolterraModel>) {
          std::vector<std::tuple<std::int64_t, std::int64_t, double>> taps;
          LatticeIndex rel = origin;
          for (const auto& [key, a] : m.coeffs.entries()) {
            const auto& [s1, s2] = key;
            for (int q = 0; q < d; ++q) rel[q] = origin[q] - s1[q];
            const std::int64_t o1 = eps.offset_of(rel);
            for (int q = 0; q < d; ++q) rel[q] = origin[q] - s2[q];
            const std::int64_t o2 = eps.offset_of(rel);
            taps.emplace_back(o1, o2, a);
          }
          for_each_site(out.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
            std::int64_t shift = 0;
            for (int q = 0; q < d; ++q) shift += idx[static_cast<std::size_t>(q)] * eps.stride(q);
            double acc = 0.0;
            for (const auto& [o1, o2, a] : taps) {
              acc += a * eps.flat(o1 + shift) * eps.flat(o2 + shift);
            }
            out.flat(flat) = acc;
          });
        } else if constexpr (std::is_same_v<T, HermiteFunctionalModel>) {
          std::vector<std::pair<std::int64_t, double>> taps;
          LatticeIndex rel = origin;
          for (const auto& [i, a] : m.coeffs.entries()) {
            for (int q = 0; q < d; ++q) rel[q] = origin[q] - i[q];
            taps.emplace_back(eps.offset_of(rel), a);
          }
          const int Q = static_cast<int>(m.hermite_c.size());
          for_each_site(out.extents(), [&](std::int64_t flat, std::span<const Coord> idx) {
            std::int64_t shift = 0;
            for (int q = 0; q < d; ++q) shift += idx[static_cast<std::size_t>(q)] * eps.stride(q);
            double y = 0.0;
            for (const auto& [off, a] : taps) y += a * eps.flat(off + shift);
            // sum_q c_q H_q(y) by the recurrence
            double h_prev = 1.0, h_cur = y, acc = 0.0;
            for (int q = 1; q <= Q; ++q) {
              acc += m.hermite_c[static_cast<std::size_t>(q - 1)] * h_cur;
              const double next = y * h_cur - static_cast<double>(q) * h_prev;
              h_prev = h_cur;
              h_cur = next;
            }
            out.flat(flat) = acc;
          });
        }
      },
      model);
  return out;
}

}  // namespace

ValueGrid simulate_block(const FieldModel& model, const Rect& block, std::uint64_t seed) {
  if (block.dim() != model_dim(model)) {
    throw std::invalid_argument("simulate_block: block dimension does not match the model");
  }
  const Rect padded = block.inflated(model_support_radius(model));
  const ValueGrid eps = innovation_block(model_innovation(model), padded, seed);
  return apply_model(model, block, eps);
}

std::pair<ValueGrid, ValueGrid> simulate_coupled_pair(const FieldModel& model, const Rect& block,
                                                      std::uint64_t seed,
                                                      const LatticeIndex& swap_site) {
  if (swap_site.dim() != model_dim(model)) {
    throw std::invalid_argument("simulate_coupled_pair: swap site dimension mismatch");
  }
  const Rect padded = block.inflated(model_support_radius(model));
  const ValueGrid eps = innovation_block(model_innovation(model), padded, seed);
  ValueGrid eps_swapped = eps;
  if (eps_swapped.in_domain(swap_site)) {
    SiteStream redraw(seed, swap_site, 1);
    eps_swapped.at(swap_site) = model_innovation(model).draw(redraw);
  }
  return {apply_model(model, block, eps), apply_model(model, block, eps_swapped)};
}

CenterEstimate holder_center(const GSpec& g, const CoefficientField& coeffs,
                             const InnovationSpec& innov, CenterMethod method, std::int64_t reps,
                             std::uint64_t seed) {
  const bool gaussian = innov.tag() == InnovationTag::standard_normal;
  if (method == CenterMethod::quadrature && !gaussian) {
    throw std::invalid_argument("holder_center: quadrature path requires normal innovations");
  }
  if (method == CenterMethod::automatic) {
    method = gaussian ? CenterMethod::quadrature : CenterMethod::monte_carlo;
  }
  if (method == CenterMethod::quadrature) {
    const double sigma = std::sqrt(coeffs.sum_sq());
    if (sigma == 0.0) return {g(0.0), 0.0};
    std::vector<double> breakpoints;
    for (double b : g.breakpoints()) breakpoints.push_back(b / sigma);
    return {gaussian_expectation([&](double x) { return g(sigma * x); }, breakpoints), 0.0};
  }
  if (reps < 1) throw std::invalid_argument("holder_center: reps must be >= 1");
  const int d = coeffs.dim();
  double sum = 0.0, sum_sq = 0.0;
  std::vector<Coord> site(static_cast<std::size_t>(d));
  for (std::int64_t r = 0; r < reps; ++r) {
    const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(r));
    double y = 0.0;
    for (const auto& [i, a] : coeffs.entries()) {
      for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = -i[q];
      SiteStream s(rs, std::span<const Coord>(site));
      y += a * innov.draw(s);
    }
    const double v = g(y);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

HolderOfLinearModel make_holder_model(CoefficientField coeffs, InnovationSpec innov, GSpec g,
                                      double gamma, std::int64_t center_reps,
                                      std::uint64_t center_seed) {
  const CenterEstimate c =
      holder_center(g, coeffs, innov, CenterMethod::automatic, center_reps, center_seed);
  return HolderOfLinearModel(std::move(coeffs), innov, g, gamma, c.value);
}

}  // namespace lilfields
