#pragma once

#include <stdexcept>
#include <string>

namespace salex {

// Error taxonomy shared across the library. Everything derives from
// std::runtime_error so callers can catch broadly at the CLI boundary.

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoCandidates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace salex
