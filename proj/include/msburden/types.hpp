#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "msburden/errors.hpp"

// Data model for progressive multistate outcomes: K ordered non-fatal severity
// states plus death, observed as censored transition times per subject.

namespace msburden {

// States 0..K+1: 0 = event-free baseline, 1..K = ordered severity states,
// K+1 = death. Transition k (1-based) is entry into state k or worse.
struct StateSpace {
  int k_severity_states = 0;        // K
  std::vector<std::string> labels;  // one label per transition target, states 1..K+1

  bool operator==(const StateSpace&) const = default;

  int transition_count() const { return k_severity_states + 1; }  // K+1

  static StateSpace make(std::vector<std::string> labels) {
    if (labels.empty())
      throw Error(errc::invalid_config, "state space needs at least one transition (death)");
    for (const auto& l : labels)
      if (l.empty()) throw Error(errc::invalid_config, "state labels must be non-empty");
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size())
      throw Error(errc::invalid_config, "state labels must be unique");
    StateSpace s;
    s.k_severity_states = static_cast<int>(labels.size()) - 1;
    s.labels = std::move(labels);
    return s;
  }
};

// One participant: censored transition times x_k = min(T_k, C) and event
// indicators delta_k, k = 1..K+1 stored 0-based. Ties x_j = x_{j+1} with both
// indicators 1 encode state skipping.
struct SubjectRecord {
  std::string subject_id;
  int arm = 0;                // 1 = treatment, 0 = control
  std::vector<double> x;      // length K+1, non-decreasing
  std::vector<int> delta;     // length K+1, 0/1, non-increasing

  bool operator==(const SubjectRecord&) const = default;
};

inline ValidationResult validate_subject(const SubjectRecord& r, const StateSpace& space) {
  const std::size_t m = static_cast<std::size_t>(space.transition_count());
  if (r.x.size() != m || r.delta.size() != m)
    return ValidationResult::fail(
        errc::length_mismatch,
        "expected " + std::to_string(m) + " transitions, got x:" + std::to_string(r.x.size()) +
            " delta:" + std::to_string(r.delta.size()));
  if (r.arm != 0 && r.arm != 1)
    return ValidationResult::fail(errc::validation_error, "arm must be 0 or 1");
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(r.x[k]) || r.x[k] < 0.0)
      return ValidationResult::fail(errc::negative_time,
                                    "x[" + std::to_string(k + 1) + "] negative or non-finite");
    if (r.delta[k] != 0 && r.delta[k] != 1)
      return ValidationResult::fail(errc::indicator_violation,
                                    "delta[" + std::to_string(k + 1) + "] not 0/1");
  }
  for (std::size_t k = 1; k < m; ++k) {
    if (r.x[k] < r.x[k - 1])
      return ValidationResult::fail(errc::monotonicity_violation,
                                    "x decreases at transition " + std::to_string(k + 1));
    if (r.delta[k] > r.delta[k - 1])
      return ValidationResult::fail(errc::indicator_violation,
                                    "delta increases at transition " + std::to_string(k + 1));
  }
  // all censored entries carry the single censoring time C
  double censor_time = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (r.delta[k] == 0) {
      if (censor_time < 0.0) {
        censor_time = r.x[k];
      } else if (r.x[k] != censor_time) {
        return ValidationResult::fail(errc::censor_mismatch,
                                      "censored transitions disagree on the censoring time");
      }
    }
  }
  return ValidationResult::pass();
}

// Immutable-by-convention container for one arm's validated records.
struct ArmDataset {
  int arm = 0;
  StateSpace state_space;
  std::vector<SubjectRecord> subjects;

  bool operator==(const ArmDataset&) const = default;

  std::size_t size() const { return subjects.size(); }

  static ArmDataset make(int arm, StateSpace space, std::vector<SubjectRecord> subjects) {
    if (subjects.empty())
      throw Error(errc::validation_error, "arm " + std::to_string(arm) + " has no subjects");
    for (const auto& r : subjects) {
      if (r.arm != arm)
        throw Error(errc::validation_error,
                    "subject " + r.subject_id + ": arm label does not match dataset arm");
      ValidationResult v = validate_subject(r, space);
      if (!v)
        throw Error(v.code, "subject " + r.subject_id + ": " + v.detail);
    }
    ArmDataset d;
    d.arm = arm;
    d.state_space = std::move(space);
    d.subjects = std::move(subjects);
    return d;
  }
};

// Restricts the dataset to a subset of transitions, keeping each retained
// transition's original (x, delta). keep holds 1-based transition indices in
// severity order and must contain the death transition K+1; death keeps the
// top score in the reduced space.
inline ArmDataset project_endpoints(const ArmDataset& data, const std::vector<int>& keep) {
  const int m = data.state_space.transition_count();
  if (keep.empty()) throw Error(errc::invalid_config, "keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > m)
      throw Error(errc::invalid_config, "keep index " + std::to_string(keep[i]) + " out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw Error(errc::invalid_config, "keep indices must be strictly increasing");
  }
  if (keep.back() != m) throw Error(errc::death_excluded, "keep must contain the death transition");

  std::vector<std::string> labels;
  for (int k : keep) labels.push_back(data.state_space.labels[static_cast<std::size_t>(k - 1)]);
  StateSpace reduced = StateSpace::make(std::move(labels));

  std::vector<SubjectRecord> subjects;
  subjects.reserve(data.subjects.size());
  for (const auto& r : data.subjects) {
    SubjectRecord s;
    s.subject_id = r.subject_id;
    s.arm = r.arm;
    for (int k : keep) {
      s.x.push_back(r.x[static_cast<std::size_t>(k - 1)]);
      s.delta.push_back(r.delta[static_cast<std::size_t>(k - 1)]);
    }
    subjects.push_back(std::move(s));
  }
  return ArmDataset::make(data.arm, std::move(reduced), std::move(subjects));
}

// Per-state counts of each subject's first observed event; ties at the first
// event time resolve to the most severe tied state, so every subject with at
// least one event lands in exactly one column.
struct FirstEventSummary {
  std::vector<long> counts;  // per transition 1..K+1
  long total_events = 0;     // subjects with >= 1 event

  bool operator==(const FirstEventSummary&) const = default;
};

inline FirstEventSummary summarize_first_events(const ArmDataset& data) {
  const std::size_t m = static_cast<std::size_t>(data.state_space.transition_count());
  FirstEventSummary out;
  out.counts.assign(m, 0);
  for (const auto& r : data.subjects) {
    if (r.delta[0] != 1) continue;  // no events at all
    double first_time = r.x[0];
    std::size_t most_severe = 0;
    for (std::size_t k = 0; k < m; ++k)
      if (r.delta[k] == 1 && r.x[k] == first_time) most_severe = k;
    ++out.counts[most_severe];
    ++out.total_events;
  }
  return out;
}

// Per-state counts of the worst observed state, plus the no-event column.
struct WorstStateSummary {
  std::vector<long> counts;  // per transition 1..K+1
  long censored = 0;         // subjects with no observed events

  bool operator==(const WorstStateSummary&) const = default;
};

inline WorstStateSummary summarize_worst_state(const ArmDataset& data) {
  const std::size_t m = static_cast<std::size_t>(data.state_space.transition_count());
  WorstStateSummary out;
  out.counts.assign(m, 0);
  for (const auto& r : data.subjects) {
    int worst = -1;
    for (std::size_t k = 0; k < m; ++k)
      if (r.delta[k] == 1) worst = static_cast<int>(k);
    if (worst < 0)
      ++out.censored;
    else
      ++out.counts[static_cast<std::size_t>(worst)];
  }
  return out;
}

}  // namespace msburden
