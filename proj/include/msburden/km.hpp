#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "msburden/errors.hpp"
#include "msburden/step_curve.hpp"
#include "msburden/types.hpp"

// One-sample nonparametric machinery per transition: Kaplan-Meier survival,
// Nelson-Aalen hazard increments, restricted mean survival time, at-risk
// fractions.

namespace msburden {

// Marginal right-censored sample for one transition.
struct TransitionSample {
  std::vector<double> times;
  std::vector<int> events;  // 1 = transition observed, 0 = censored

  std::size_t size() const { return times.size(); }

  void validate() const {
    if (times.size() != events.size())
      throw Error(errc::length_mismatch, "times/events size mismatch");
    for (double t : times)
      if (!std::isfinite(t) || t < 0.0) throw Error(errc::negative_time, "negative or non-finite time");
    for (int e : events)
      if (e != 0 && e != 1) throw Error(errc::indicator_violation, "event indicator not 0/1");
  }
};

// Column k (1-based transition index) of a validated dataset.
inline TransitionSample transition_sample(const ArmDataset& data, int k) {
  if (k < 1 || k > data.state_space.transition_count())
    throw Error(errc::invalid_config, "transition index out of range");
  TransitionSample s;
  s.times.reserve(data.subjects.size());
  s.events.reserve(data.subjects.size());
  for (const auto& r : data.subjects) {
    s.times.push_back(r.x[static_cast<std::size_t>(k - 1)]);
    s.events.push_back(r.delta[static_cast<std::size_t>(k - 1)]);
  }
  return s;
}

// Nelson-Aalen building blocks: distinct event times with the number of events
// and the at-risk count at each. increments[j] = events[j] / at_risk[j].
struct HazardIncrements {
  std::vector<double> jump_times;
  std::vector<double> increments;
  std::vector<long> events;
  std::vector<long> at_risk;

  std::size_t size() const { return jump_times.size(); }

  // cumulative hazard as a right-continuous step curve
  StepCurve cumulative() const {
    StepCurve c;
    c.initial_value = 0.0;
    c.jump_times = jump_times;
    long double acc = 0.0L;
    for (double d : increments) {
      acc += d;
      c.values.push_back(static_cast<double>(acc));
    }
    return c;
  }
};

namespace detail {

// Sorts the sample and collapses it to distinct event times. At tied times
// events are processed before censorings: a subject censored at t still counts
// at risk for events at t.
inline HazardIncrements risk_table(const TransitionSample& sample) {
  sample.validate();
  if (sample.size() == 0) throw Error(errc::empty_sample, "no observations");

  std::vector<std::size_t> order(sample.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample.times[a] < sample.times[b]; });

  HazardIncrements out;
  std::size_t i = 0;
  long at_risk = static_cast<long>(sample.size());
  while (i < order.size()) {
    double t = sample.times[order[i]];
    long d = 0, c = 0;
    std::size_t j = i;
    while (j < order.size() && sample.times[order[j]] == t) {
      if (sample.events[order[j]] == 1)
        ++d;
      else
        ++c;
      ++j;
    }
    if (d > 0) {
      out.jump_times.push_back(t);
      out.events.push_back(d);
      out.at_risk.push_back(at_risk);
      out.increments.push_back(static_cast<double>(d) / static_cast<double>(at_risk));
    }
    at_risk -= d + c;
    i = j;
  }
  return out;
}

}  // namespace detail

// Nelson-Aalen cumulative hazard increments d_j / Y_j at each event time.
inline HazardIncrements fit_nelson_aalen(const TransitionSample& sample) {
  return detail::risk_table(sample);
}

// Product-limit survival curve; S(0-) = 1 and S(t) = prod_{u <= t} (1 - dL(u)).
inline StepCurve fit_km(const TransitionSample& sample) {
  HazardIncrements inc = detail::risk_table(sample);
  StepCurve c;
  c.initial_value = 1.0;
  c.jump_times = inc.jump_times;
  double s = 1.0;
  for (std::size_t j = 0; j < inc.size(); ++j) {
    s *= 1.0 - inc.increments[j];
    c.values.push_back(s);
  }
  return c;
}

// Restricted mean survival time: exact area under the survival curve on [0, tau].
inline double rmst(const StepCurve& curve, double tau) {
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  return curve.integral(0.0, tau);
}

// Empirical at-risk fraction. With inclusive = false this is P(X > t); the
// left-limit variant P(X >= t) feeds the martingale integrals at jump points.
inline double at_risk_fraction(const TransitionSample& sample, double t, bool inclusive = false) {
  if (sample.size() == 0) return 0.0;
  long n = 0;
  for (double x : sample.times)
    if (inclusive ? x >= t : x > t) ++n;
  return static_cast<double>(n) / static_cast<double>(sample.size());
}

}  // namespace msburden
