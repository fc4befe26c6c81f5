#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "msburden/errors.hpp"
#include "msburden/km.hpp"
#include "msburden/types.hpp"

// General cumulative-utility framework: each state k carries a score and a
// subject accrues score x occupancy-time over [0, tau]. Consecutive integer
// scores recover the AUC machinery; the comparative kind (scoring a state by
// whether an opposing process sits below it) is the bridge to the
// time-in-favor estimand and lives only in its pairwise oracle, so it is not
// evaluable here on a single dataset.

namespace msburden {

enum class UtilityKind { fixed_scores, comparative };

struct UtilitySpec {
  UtilityKind kind = UtilityKind::fixed_scores;
  std::vector<double> scores;  // s_1..s_{K+1}, fixed-scores kind only

  static UtilitySpec fixed(std::vector<double> scores) {
    return UtilitySpec{UtilityKind::fixed_scores, std::move(scores)};
  }
  static UtilitySpec comparative() { return UtilitySpec{UtilityKind::comparative, {}}; }
};

namespace detail {

inline void check_fixed_scores(const UtilitySpec& spec, std::size_t transitions) {
  if (spec.kind != UtilityKind::fixed_scores)
    throw Error(errc::invalid_config,
                "comparative utilities are pair-defined and have no dataset-level evaluation");
  if (spec.scores.size() != transitions)
    throw Error(errc::length_mismatch, "need one score per state above baseline");
  for (std::size_t k = 1; k < spec.scores.size(); ++k)
    if (spec.scores[k] < spec.scores[k - 1])
      throw Error(errc::non_monotone_scores, "scores must be non-decreasing in severity");
}

}  // namespace detail

// Exact subject-level utility: sum over states of score times time spent in
// that state within [0, tau]. The trajectory holds the true transition times.
inline double cumulative_utility(const std::vector<double>& transition_times,
                                 const UtilitySpec& spec, double tau) {
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  detail::check_fixed_scores(spec, transition_times.size());
  for (std::size_t k = 0; k < transition_times.size(); ++k) {
    if (!(transition_times[k] >= 0.0))
      throw Error(errc::negative_time, "transition times must be non-negative");
    if (k > 0 && transition_times[k] < transition_times[k - 1])
      throw Error(errc::monotonicity_violation, "transition times must be non-decreasing");
  }

  const std::size_t m = transition_times.size();
  long double acc = 0.0L;
  for (std::size_t k = 0; k < m; ++k) {
    double entry = std::min(transition_times[k], tau);
    double exit = (k + 1 < m) ? std::min(transition_times[k + 1], tau) : tau;
    acc += static_cast<long double>(spec.scores[k]) * (exit - entry);
  }
  return static_cast<double>(acc);
}

inline double cumulative_utility(const SubjectRecord& record, const UtilitySpec& spec,
                                 double tau) {
  for (int d : record.delta)
    if (d != 1)
      throw Error(errc::censored_input, "subject-level utility needs an uncensored trajectory (" +
                                            record.subject_id + ")");
  return cumulative_utility(record.x, spec, tau);
}

struct UtilityContrast {
  double tau = 0.0;
  double treated_expected = 0.0;  // score x time units
  double control_expected = 0.0;
  double reduction = 0.0;         // control - treated; positive favors treatment
};

namespace detail {

// KM plug-in: E{U} = sum_k (s_k - s_{k-1}) * (tau - rmst_k), s_0 = 0; each
// score increment weights the expected time spent at or beyond state k
inline double expected_utility_arm(const ArmDataset& data, const UtilitySpec& spec, double tau) {
  const int m = data.state_space.transition_count();
  long double acc = 0.0L;
  double prev_score = 0.0;
  for (int k = 1; k <= m; ++k) {
    double r = rmst(fit_km(transition_sample(data, k)), tau);
    acc += static_cast<long double>(spec.scores[static_cast<std::size_t>(k) - 1] - prev_score) *
           (tau - r);
    prev_score = spec.scores[static_cast<std::size_t>(k) - 1];
  }
  return static_cast<double>(acc);
}

}  // namespace detail

// Two-arm contrast of expected cumulative utility, reported as the reduction
// achieved by treatment (control minus treated) so that positive values favor
// treatment, in line with the time-in-favor sign convention. With consecutive
// integer scores the reduction equals the negated AUC difference.
inline UtilityContrast expected_utility_contrast(const ArmDataset& treated,
                                                 const ArmDataset& control,
                                                 const UtilitySpec& spec, double tau) {
  if (!(treated.state_space == control.state_space))
    throw Error(errc::state_space_mismatch, "arms use different state spaces");
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  detail::check_fixed_scores(spec,
                             static_cast<std::size_t>(treated.state_space.transition_count()));

  UtilityContrast out;
  out.tau = tau;
  out.treated_expected = detail::expected_utility_arm(treated, spec, tau);
  out.control_expected = detail::expected_utility_arm(control, spec, tau);
  out.reduction = out.control_expected - out.treated_expected;
  return out;
}

}  // namespace msburden
