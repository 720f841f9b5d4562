#pragma once

#include <stdexcept>
#include <string>

namespace wvsim {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Post-selection probability below the 1e-12 floor; the weak value is
// numerically meaningless in this region.
struct DivergentPostSelection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitian : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidDistribution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidStats : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChainUnbalanced : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wvsim
