#pragma once

#include <stdexcept>
#include <string>

namespace msburden {

// Error codes surfaced by the library. Names mirror the rule that was broken
// so callers (and CSV ingestion diagnostics) can cite them verbatim.
enum class errc {
  monotonicity_violation,  // transition times decrease in severity order
  indicator_violation,     // event indicators increase in severity order, or not 0/1
  censor_mismatch,         // censored entries do not share a single censoring time
  negative_time,           // negative or non-finite time
  length_mismatch,         // vector length does not match the state space
  death_excluded,          // endpoint projection dropped the death transition
  empty_sample,            // estimator called on an empty sample
  non_positive_horizon,    // tau <= 0
  degenerate_variance,     // influence values all zero although events demand otherwise
  zero_control_burden,     // AUC ratio undefined (control burden is zero)
  censored_input,          // operation defined only for fully uncensored data
  non_monotone_scores,     // utility scores decrease in severity order
  no_events,               // Cox fit with no events at all
  monotone_likelihood,     // Cox partial likelihood has no finite maximizer
  invalid_scenario,        // simulation scenario fails validation
  parse_error,             // malformed CSV/JSON input
  header_mismatch,         // CSV header does not follow the canonical schema
  validation_error,        // dataset-level validation failure
  state_space_mismatch,    // two-arm operation on differing state spaces
  invalid_config,          // bad analysis/inference configuration
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::monotonicity_violation: return "MonotonicityViolation";
    case errc::indicator_violation: return "IndicatorViolation";
    case errc::censor_mismatch: return "CensorMismatch";
    case errc::negative_time: return "NegativeTime";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::death_excluded: return "DeathExcluded";
    case errc::empty_sample: return "EmptySample";
    case errc::non_positive_horizon: return "NonPositiveHorizon";
    case errc::degenerate_variance: return "DegenerateVariance";
    case errc::zero_control_burden: return "ZeroControlBurden";
    case errc::censored_input: return "CensoredInput";
    case errc::non_monotone_scores: return "NonMonotoneScores";
    case errc::no_events: return "NoEvents";
    case errc::monotone_likelihood: return "MonotoneLikelihood";
    case errc::invalid_scenario: return "InvalidScenario";
    case errc::parse_error: return "ParseError";
    case errc::header_mismatch: return "HeaderMismatch";
    case errc::validation_error: return "ValidationError";
    case errc::state_space_mismatch: return "StateSpaceMismatch";
    case errc::invalid_config: return "InvalidConfig";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

// Outcome of a non-throwing validation check.
struct ValidationResult {
  bool ok = true;
  errc code = errc::validation_error;
  std::string detail;

  explicit operator bool() const { return ok; }

  static ValidationResult pass() { return {}; }
  static ValidationResult fail(errc c, std::string d) { return {false, c, std::move(d)}; }
};

}  // namespace msburden
