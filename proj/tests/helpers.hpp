#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "msburden/msburden.hpp"

// Shared test utilities: random dataset generators and slow, independent
// reimplementations the suites check library results against.

namespace testutil {

// tolerance for identities that should hold to rounding error
inline bool close_exact(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

template <typename F>
msburden::errc thrown_code(F&& f) {
  try {
    f();
  } catch (const msburden::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an msburden::Error");
}

struct FuzzSpec {
  int k_severity_states = 2;
  std::size_t n = 20;
  double rate = 0.7;         // exponential rate for each between-state gap
  double censor_rate = 0.0;  // 0 keeps every subject fully observed
  double grid = 0.0;         // >0 rounds non-fatal onsets up to the grid, forcing ties
  double admin = std::numeric_limits<double>::infinity();
};

inline msburden::ArmDataset fuzz_arm(std::mt19937_64& eng, int arm, const FuzzSpec& spec) {
  using msburden::detail::uniform01;
  const std::size_t m = static_cast<std::size_t>(spec.k_severity_states) + 1;
  std::vector<msburden::SubjectRecord> subjects;
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::vector<double> t(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      acc += -std::log(uniform01(eng)) / spec.rate;
      t[k] = acc;
    }
    if (spec.grid > 0.0) {
      for (std::size_t k = 0; k + 1 < m; ++k)
        t[k] = std::min(std::ceil(t[k] / spec.grid) * spec.grid, t[m - 1]);
    }
    double censor = spec.admin;
    if (spec.censor_rate > 0.0)
      censor = std::min(censor, -std::log(uniform01(eng)) / spec.censor_rate);
    msburden::SubjectRecord r;
    r.subject_id = (arm == 1 ? "T" : "C") + std::to_string(i);
    r.arm = arm;
    r.x.resize(m);
    r.delta.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      r.x[k] = std::min(t[k], censor);
      r.delta[k] = t[k] <= censor ? 1 : 0;
    }
    subjects.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  for (int k = 1; k <= spec.k_severity_states; ++k) labels.push_back("state_" + std::to_string(k));
  labels.push_back("death");
  return msburden::ArmDataset::make(arm, msburden::StateSpace::make(labels), std::move(subjects));
}

// survival of a sum of independent exponentials with pairwise distinct rates
inline double hypoexp_survival(const std::vector<double>& rates, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < rates.size(); ++j)
      if (j != i) w *= rates[j] / (rates[j] - rates[i]);
    s += w * std::exp(-rates[i] * t);
  }
  return s;
}

// product-limit survival recomputed the O(n^2) way
inline double naive_km(const std::vector<double>& x, const std::vector<int>& d, double t) {
  std::vector<double> event_times;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (d[i] == 1 && x[i] <= t) event_times.push_back(x[i]);
  std::sort(event_times.begin(), event_times.end());
  event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());
  double s = 1.0;
  for (double u : event_times) {
    std::size_t at_risk = 0, events = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] >= u) ++at_risk;
      if (d[i] == 1 && x[i] == u) ++events;
    }
    s *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
  }
  return s;
}

inline double naive_rmst(const std::vector<double>& x, const std::vector<int>& d, double tau) {
  std::vector<double> cuts{0.0};
  for (std::size_t i = 0; i < x.size(); ++i)
    if (d[i] == 1 && x[i] < tau) cuts.push_back(x[i]);
  cuts.push_back(tau);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    area += naive_km(x, d, cuts[i]) * (cuts[i + 1] - cuts[i]);
  return area;
}

// two-sample log-rank z statistic; valid as a score-test oracle only for
// tie-free event times
inline double logrank_z(const std::vector<double>& times, const std::vector<int>& events,
                        const std::vector<int>& group1) {
  std::vector<double> event_times;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (events[i] == 1) event_times.push_back(times[i]);
  std::sort(event_times.begin(), event_times.end());
  event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());
  double observed_minus_expected = 0.0, variance = 0.0;
  for (double u : event_times) {
    double n = 0, n1 = 0, d = 0, d1 = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] >= u) {
        n += 1;
        if (group1[i] == 1) n1 += 1;
      }
      if (events[i] == 1 && times[i] == u) {
        d += 1;
        if (group1[i] == 1) d1 += 1;
      }
    }
    observed_minus_expected += d1 - d * n1 / n;
    if (n > 1) variance += d * (n1 / n) * (1.0 - n1 / n) * (n - d) / (n - 1);
  }
  return observed_minus_expected / std::sqrt(variance);
}

// bisection solve of the partial-likelihood score equation, fed by any score
// function; used as an independent check on the Newton fit
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace testutil
