// Exception types thrown across the library. All derive from qbound::error so
// callers can catch one base; parse_error is kept separate at the CLI boundary
// (bad input files exit 2, failed math invariants exit 1).
#pragma once

#include <stdexcept>
#include <string>

namespace qbound {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct non_finite_input : error {
  explicit non_finite_input(const std::string& msg) : error(msg) {}
};

struct dimension_mismatch : error {
  explicit dimension_mismatch(const std::string& msg) : error(msg) {}
};

struct length_mismatch : error {
  explicit length_mismatch(const std::string& msg) : error(msg) {}
};

struct arity_error : error {
  explicit arity_error(const std::string& msg) : error(msg) {}
};

struct not_psd : error {
  explicit not_psd(const std::string& msg) : error(msg) {}
};

struct normalization_error : error {
  explicit normalization_error(const std::string& msg) : error(msg) {}
};

struct degenerate_input : error {
  explicit degenerate_input(const std::string& msg) : error(msg) {}
};

struct convergence_failure : error {
  explicit convergence_failure(const std::string& msg) : error(msg) {}
};

struct invariant_violation : error {
  explicit invariant_violation(const std::string& msg) : error(msg) {}
};

struct parse_error : error {
  explicit parse_error(const std::string& msg) : error(msg) {}
};

}  // namespace qbound
