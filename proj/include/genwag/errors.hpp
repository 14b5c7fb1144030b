#pragma once

#include <stdexcept>
#include <string>

namespace genwag {

// Bad user input: malformed files, out-of-range indices, unknown names.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured cap (profile count, enumeration budget) was exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A proved result failed on some game: implementation bug, not a finding.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical solve did not meet its residual requirement.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace genwag
