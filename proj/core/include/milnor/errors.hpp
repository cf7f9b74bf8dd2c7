#pragma once

#include <stdexcept>
#include <string>

namespace milnor {

// Malformed input: bad link file, invalid strand labels, non-pure braid word.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A geometric computation hit a non-generic configuration (projection
// direction, near-singular system). Callers are expected to re-draw.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No usable regular value was found within the retry budget.
class RegularValueExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace milnor
