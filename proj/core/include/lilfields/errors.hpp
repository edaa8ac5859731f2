#pragma once

#include <stdexcept>

namespace lilfields {

/// A requested computation is outside what the implementation supports
/// (unsupported distribution tag, missing closed form, ...). Distinct from
/// invalid input so callers can map it to a different exit status.
class capability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lilfields
