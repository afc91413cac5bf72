// Error hierarchy shared by all modules. Input problems (bad files, bad
// arguments, preconditions the caller can fix) derive from InvalidInput;
// resource exhaustion is BudgetExceeded; anything else that fires indicates a
// bug in this library and derives from logic_error.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flw {

struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : InvalidInput {
  using InvalidInput::InvalidInput;
};

// A connective required by an operation is absent from the active fragment.
struct MissingConnective : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Formula is not a right-nested fusion of variables.
struct NotFlattenable : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Theory violates the variables-only / nonempty-succedent shape.
struct NotRegular : InvalidInput {
  using InvalidInput::InvalidInput;
};

// User-supplied rule contains connectives or constants.
struct NotStructural : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Sequent mentions a formula outside the active alphabet.
struct NotInAlphabet : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Computation trace does not replay on the given channel system.
struct InvalidTrace : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Wall-clock or cardinality budget exhausted; carries coarse progress counters
// so callers can report how far the run got.
struct BudgetExceeded : std::runtime_error {
  std::uint64_t iterations = 0;
  std::uint64_t frontier_size = 0;
  BudgetExceeded(const std::string& what, std::uint64_t iters, std::uint64_t frontier)
      : std::runtime_error(what), iterations(iters), frontier_size(frontier) {}
};

// A self-check that should be unfalsifiable failed: internal bug.
struct InternalInvariantViolated : std::logic_error {
  explicit InternalInvariantViolated(const std::string& what) : std::logic_error(what) {}
};

} // namespace flw
