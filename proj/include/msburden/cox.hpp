#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "msburden/errors.hpp"
#include "msburden/km.hpp"
#include "msburden/stats.hpp"
#include "msburden/step_curve.hpp"
#include "msburden/types.hpp"

// Conventional comparator: time to the first transition, analyzed as a
// two-sample Cox proportional hazards model with a single binary treatment
// covariate. One-dimensional safeguarded Newton on the partial likelihood,
// Efron tie correction by default.

namespace msburden {

struct CompositeSample {
  std::vector<double> times;
  std::vector<int> events;
  std::vector<int> arms;  // 1 treated, 0 control
  std::size_t size() const { return times.size(); }
};

// First transition is the earliest recorded time, so the composite row is
// simply (x_1, delta_1).
inline CompositeSample to_composite(const ArmDataset& treated, const ArmDataset& control) {
  CompositeSample out;
  const std::size_t n = treated.size() + control.size();
  out.times.reserve(n);
  out.events.reserve(n);
  out.arms.reserve(n);
  for (const ArmDataset* arm : {&treated, &control}) {
    for (const auto& r : arm->subjects) {
      out.times.push_back(r.x.front());
      out.events.push_back(r.delta.front());
      out.arms.push_back(arm->arm);
    }
  }
  return out;
}

enum class TieMethod { efron, breslow };

struct CoxFit {
  double beta = 0.0;
  double se = 0.0;
  double hazard_ratio = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  double p = 1.0;
  double log_likelihood = 0.0;
  double alpha = 0.05;
  TieMethod ties = TieMethod::efron;
  int iterations = 0;
};

struct ScoreTest {
  double score = 0.0;        // partial-likelihood gradient at beta = 0
  double information = 0.0;  // negative curvature at beta = 0
  double z = 0.0;
  double p = 1.0;
};

namespace detail {

// risk-set table over distinct event times, ascending
struct CoxTable {
  std::vector<double> time;
  std::vector<int> d;   // events at this time
  std::vector<int> m1;  // of which treated
  std::vector<int> r1;  // treated at risk (time >= t)
  std::vector<int> r0;  // control at risk
};

inline CoxTable cox_table(const CompositeSample& sample) {
  const std::size_t n = sample.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample.times[a] < sample.times[b]; });

  int n1 = 0, n0 = 0;
  for (int a : sample.arms) (a == 1 ? n1 : n0)++;

  CoxTable table;
  int gone1 = 0, gone0 = 0;
  std::size_t i = 0;
  while (i < n) {
    double t = sample.times[order[i]];
    int d = 0, m1 = 0, leaving1 = 0, leaving0 = 0;
    std::size_t j = i;
    for (; j < n && sample.times[order[j]] == t; ++j) {
      std::size_t row = order[j];
      (sample.arms[row] == 1 ? leaving1 : leaving0)++;
      if (sample.events[row] == 1) {
        ++d;
        if (sample.arms[row] == 1) ++m1;
      }
    }
    if (d > 0) {
      table.time.push_back(t);
      table.d.push_back(d);
      table.m1.push_back(m1);
      table.r1.push_back(n1 - gone1);
      table.r0.push_back(n0 - gone0);
    }
    gone1 += leaving1;
    gone0 += leaving0;
    i = j;
  }
  return table;
}

struct CoxEval {
  double loglik = 0.0;
  double score = 0.0;
  double info = 0.0;
};

inline CoxEval cox_eval(const CoxTable& table, double beta, TieMethod ties) {
  const double eb = std::exp(beta);
  long double ll = 0.0L, u = 0.0L, info = 0.0L;
  for (std::size_t j = 0; j < table.time.size(); ++j) {
    const double d = table.d[j];
    const double m1 = table.m1[j];
    const double m0 = table.d[j] - table.m1[j];
    const double s0 = table.r0[j] + table.r1[j] * eb;
    const double s1 = table.r1[j] * eb;          // first and second moments agree
    const double s0d = m0 + m1 * eb;             // tied-event block sums
    const double s1d = m1 * eb;
    ll += beta * m1;
    if (ties == TieMethod::breslow) {
      ll -= d * std::log(s0);
      const double a = s1 / s0;
      u += m1 - d * a;
      info += d * (a - a * a);
    } else {
      for (int l = 0; l < table.d[j]; ++l) {
        const double f = static_cast<double>(l) / d;
        const double den = s0 - f * s0d;
        const double a = (s1 - f * s1d) / den;
        ll -= std::log(den);
        u += m1 / d - a;
        info += a - a * a;
      }
    }
  }
  return {static_cast<double>(ll), static_cast<double>(u), static_cast<double>(info)};
}

inline void require_bilateral_events(const CompositeSample& sample) {
  int e1 = 0, e0 = 0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (sample.events[i] == 1) (sample.arms[i] == 1 ? e1 : e0)++;
  if (e1 == 0 || e0 == 0)
    throw Error(errc::no_events,
                e1 + e0 == 0 ? "no composite events in either arm"
                             : std::string("no composite events in the ") +
                                   (e1 == 0 ? "treated" : "control") + " arm");
}

}  // namespace detail

inline ScoreTest cox_score_test(const CompositeSample& sample, TieMethod ties = TieMethod::efron) {
  detail::require_bilateral_events(sample);
  detail::CoxEval e = detail::cox_eval(detail::cox_table(sample), 0.0, ties);
  ScoreTest out;
  out.score = e.score;
  out.information = e.info;
  out.z = e.info > 0.0 ? e.score / std::sqrt(e.info) : 0.0;
  out.p = two_sided_p(out.z);
  return out;
}

inline CoxFit fit_cox_hr(const CompositeSample& sample, double alpha = 0.05,
                         TieMethod ties = TieMethod::efron) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::invalid_config, "alpha must lie in (0, 1)");
  detail::require_bilateral_events(sample);
  const detail::CoxTable table = detail::cox_table(sample);

  double beta = 0.0;
  detail::CoxEval e = detail::cox_eval(table, beta, ties);
  CoxFit fit;
  fit.alpha = alpha;
  fit.ties = ties;

  for (int iter = 1; iter <= 100; ++iter) {
    fit.iterations = iter;
    if (std::abs(e.score) < 1e-10) break;

    double step;
    if (e.info > 0.0 && std::isfinite(e.score / e.info)) {
      step = e.score / e.info;
    } else {
      // expand away from beta in the uphill direction until the score flips
      // sign, then bisect the bracket
      double lo = beta, hi = beta + (e.score > 0.0 ? 1.0 : -1.0);
      while (detail::cox_eval(table, hi, ties).score * e.score > 0.0) {
        hi += hi - lo + (e.score > 0.0 ? 1.0 : -1.0);
        if (std::abs(hi) > 15.0)
          throw Error(errc::monotone_likelihood,
                      "partial likelihood keeps rising; hazard ratio diverges");
      }
      for (int b = 0; b < 20; ++b) {
        double mid = 0.5 * (lo + hi);
        (detail::cox_eval(table, mid, ties).score * e.score > 0.0 ? lo : hi) = mid;
      }
      step = 0.5 * (lo + hi) - beta;
    }

    double scale = 1.0;
    detail::CoxEval trial = detail::cox_eval(table, beta + scale * step, ties);
    while (!(trial.loglik >= e.loglik) && scale > 1e-8) {
      scale *= 0.5;
      trial = detail::cox_eval(table, beta + scale * step, ties);
    }
    beta += scale * step;
    e = trial;
    if (std::abs(beta) > 15.0)
      throw Error(errc::monotone_likelihood,
                  "partial likelihood keeps rising; hazard ratio diverges");
    if (std::abs(scale * step) < 1e-12) break;
  }

  fit.beta = beta;
  fit.log_likelihood = e.loglik;
  fit.se = e.info > 0.0 ? 1.0 / std::sqrt(e.info) : 0.0;
  fit.hazard_ratio = std::exp(beta);
  const double z = norm_quantile(1.0 - alpha / 2.0);
  fit.lower = std::exp(beta - z * fit.se);
  fit.upper = std::exp(beta + z * fit.se);
  fit.p = two_sided_p(wald_z(beta, fit.se));
  return fit;
}

struct HazardCurves {
  StepCurve treated;
  StepCurve control;
};

// Nelson-Aalen per arm on the composite endpoint (plotting data)
inline HazardCurves cumulative_hazard_curves(const CompositeSample& sample) {
  auto arm_curve = [&](int arm) {
    TransitionSample s;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (sample.arms[i] != arm) continue;
      s.times.push_back(sample.times[i]);
      s.events.push_back(sample.events[i]);
    }
    if (s.times.empty()) return StepCurve{};
    return fit_nelson_aalen(s).cumulative();
  };
  return {arm_curve(1), arm_curve(0)};
}

}  // namespace msburden
