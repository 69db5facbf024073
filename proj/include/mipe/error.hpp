#pragma once

#include <stdexcept>
#include <string>

namespace mipe {

/// Thrown for malformed input data and violated file contracts.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mipe
