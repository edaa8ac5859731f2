#include "lilfields/innovations.hpp"

#include <cmath>
#include <stdexcept>

namespace lilfields {

InnovationSpec InnovationSpec::two_point(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("InnovationSpec::two_point: q must lie in (0,1)");
  }
  return InnovationSpec(InnovationTag::two_point, q);
}

double InnovationSpec::two_point_hi() const { return std::sqrt((1.0 - q_) / q_); }

double InnovationSpec::two_point_lo() const { return -std::sqrt(q_ / (1.0 - q_)); }

double InnovationSpec::support_bound() const {
  switch (tag_) {
    case InnovationTag::rademacher:
      return 1.0;
    case InnovationTag::centered_uniform:
      return std::sqrt(3.0);
    case InnovationTag::two_point:
      return std::max(two_point_hi(), -two_point_lo());
    case InnovationTag::standard_normal:
      break;
  }
  throw std::logic_error("InnovationSpec::support_bound: unbounded law");
}

double InnovationSpec::draw(SiteStream& s) const {
  switch (tag_) {
    case InnovationTag::standard_normal:
      return s.next_normal();
    case InnovationTag::rademacher:
      return s.next_unit() <= 0.5 ? -1.0 : 1.0;
    case InnovationTag::centered_uniform:
      return (2.0 * s.next_unit() - 1.0) * std::sqrt(3.0);
    case InnovationTag::two_point:
      return s.next_unit() <= q_ ? two_point_hi() : two_point_lo();
  }
  throw std::logic_error("InnovationSpec::draw: bad tag");
}

std::string InnovationSpec::name() const {
  switch (tag_) {
    case InnovationTag::standard_normal:
      return "standard_normal";
    case InnovationTag::rademacher:
      return "rademacher";
    case InnovationTag::centered_uniform:
      return "centered_uniform";
    case InnovationTag::two_point:
      return "two_point(" + std::to_string(q_) + ")";
  }
  return "?";
}

}  // namespace lilfields
