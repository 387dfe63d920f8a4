#pragma once

#include <stdexcept>

namespace neseek {

// Iterative routine exhausted its budget without reaching tolerance.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// delta parameters violate 0 <= delta_l * w_li < 2 * w_ll.
struct InvalidDelta : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Spectral certificate has gamma >= 1 and cannot bound a decay rate.
struct InvalidCertificate : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Closed-form equilibrium landed on or outside an action interval.
struct NotInterior : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotMonotone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state entry became non-finite during iteration.
struct NumericOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSmoothing : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateReference : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Run document is malformed: missing/unknown keys, bad values, missing files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace neseek
