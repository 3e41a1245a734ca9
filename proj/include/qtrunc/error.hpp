#pragma once

#include <stdexcept>
#include <string>

namespace qtrunc {

// A computation refused because it would exceed a desk-scale size guard.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qtrunc
