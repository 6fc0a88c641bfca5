#pragma once

#include <stdexcept>
#include <string>

namespace qtwist {

// Library errors are exceptions rooted here so the CLI can map them to
// stable exit codes (usage -> 2, budget/guard -> 3).
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Mixing exact and numeric scalars, or incompatible exact phase rings.
struct backend_mismatch : error {
  explicit backend_mismatch(const std::string& what) : error(what) {}
};

// A letter that the current rule set or representation does not admit.
struct unsupported_letter : error {
  explicit unsupported_letter(const std::string& what) : error(what) {}
};

// A configurable resource guard fired (term count, basis dimension, ...).
struct budget_exceeded : error {
  std::string guard;
  budget_exceeded(std::string guard_name, const std::string& what)
      : error(what), guard(std::move(guard_name)) {}
};

// Input leaves no safe subspace / no meaningful domain.
struct degenerate_input : error {
  explicit degenerate_input(const std::string& what) : error(what) {}
};

// Operation requested in a scalar or relation mode that cannot support it.
struct mode_error : error {
  explicit mode_error(const std::string& what) : error(what) {}
};

// A structural invariant the code relies on failed to verify.
struct invariant_violation : error {
  explicit invariant_violation(const std::string& what) : error(what) {}
};

}  // namespace qtwist
