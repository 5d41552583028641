#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace q1d {

enum class ErrorCode {
  invalid_input,         // malformed file, structural violation, bad parameter
  not_minimal,
  asymmetric_support,
  singular_system,
  domain_error,
  bracket_failure,
  non_convergence,
  runaway_simulation,
  out_of_horizon,
  insufficient_samples,
  asymmetric_grid,
  no_overlap,
  internal_inconsistency,
};

std::string_view to_string(ErrorCode code);

/// Validation-type errors map to CLI exit status 1, the rest to 2.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace q1d
