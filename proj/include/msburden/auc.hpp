#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "msburden/errors.hpp"
#include "msburden/km.hpp"
#include "msburden/stats.hpp"
#include "msburden/step_curve.hpp"
#include "msburden/types.hpp"

// Ordinal-score AUC estimand: the expected area under the cumulative disease
// score trajectory. With consecutive scores the per-arm AUC reduces to
// (K+1)*tau minus the sum of per-transition restricted mean survival times,
// and its variance follows from a counting-process martingale expansion.

namespace msburden {

struct AucArmEstimate {
  double tau = 0.0;
  double auc = 0.0;                     // event-years of burden
  std::vector<double> rmst_components;  // per-transition RMST on [0, tau]
  double se = 0.0;
  std::size_t n = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline void check_shared_space(const ArmDataset& treated, const ArmDataset& control) {
  if (!(treated.state_space == control.state_space))
    throw Error(errc::state_space_mismatch, "arms use different state spaces");
}

// warn (not error) when tau runs past an arm's observed follow-up; KM tails
// are carried forward there
inline void append_follow_up_warning(const ArmDataset& data, double tau,
                                     std::vector<std::string>& warnings) {
  double max_x = 0.0;
  for (const auto& r : data.subjects)
    if (!r.x.empty()) max_x = std::max(max_x, r.x.back());
  if (tau > max_x) {
    warnings.push_back("tau=" + std::to_string(tau) + " exceeds the largest observed time " +
                       std::to_string(max_x) + " in arm " + std::to_string(data.arm) +
                       "; survival tails carried forward");
  }
}

}  // namespace detail

// Mean cumulative score curve (K+1) - sum_k KM_k(t) on [0, tau]; jumps at the
// union of the component KM jump times, values non-decreasing in [0, K+1].
inline StepCurve mean_score_curve(const ArmDataset& data, double tau) {
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  const int m = data.state_space.transition_count();
  std::vector<StepCurve> km;
  km.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) km.push_back(fit_km(transition_sample(data, k)));

  StepCurve out;
  out.initial_value = 0.0;
  out.jump_times = merged_jump_times(km, tau);
  out.values.reserve(out.jump_times.size());
  std::vector<StepWalker> walkers(km.begin(), km.end());
  for (double t : out.jump_times) {
    double s = 0.0;
    for (auto& w : walkers) s += w.advance(t);
    out.values.push_back(static_cast<double>(m) - s);
  }
  return out;
}

// sqrt(mean_i xi_i^2 / n) where xi_i sums, over transitions, the martingale
// integral of the remaining-survival tail area over the empirical at-risk
// fraction. Plug-ins: Nelson-Aalen increments, KM survival, left-limit at-risk.
inline double auc_influence_se(const ArmDataset& data, double tau) {
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  const int m = data.state_space.transition_count();
  const std::size_t n = data.size();
  std::vector<double> xi(n, 0.0);
  // an event below tau with remaining burden mass and a non-exhausted risk set
  // must leave a trace in some xi; if none does the estimator is broken
  bool informative_event = false;

  for (int k = 1; k <= m; ++k) {
    TransitionSample sample = transition_sample(data, k);
    HazardIncrements inc = detail::risk_table(sample);
    StepCurve surv = fit_km(sample);

    // g_j = int_{u_j}^{tau} S(v) dv for each event time u_j <= tau, backward scan
    std::size_t n_jumps = 0;
    while (n_jumps < inc.size() && inc.jump_times[n_jumps] <= tau) ++n_jumps;
    std::vector<double> tail_area(n_jumps, 0.0);
    {
      long double acc = 0.0L;
      double upper = tau;
      for (std::size_t j = n_jumps; j-- > 0;) {
        // S is constant at values[j] on [u_j, next event time)
        acc += static_cast<long double>(surv.values[j]) * (upper - inc.jump_times[j]);
        tail_area[j] = static_cast<double>(acc);
        upper = inc.jump_times[j];
        if (tail_area[j] > 0.0 && inc.events[j] < inc.at_risk[j]) informative_event = true;
      }
    }

    // compensator prefix sums: H_j = sum_{l<=j} g_l * dL_l * n / Y_l
    std::vector<double> compensator(n_jumps, 0.0);
    {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < n_jumps; ++j) {
        acc += static_cast<long double>(tail_area[j]) * inc.increments[j] *
               static_cast<double>(n) / static_cast<double>(inc.at_risk[j]);
        compensator[j] = static_cast<double>(acc);
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      double x = sample.times[i];
      double horizon = std::min(x, tau);
      // last event index with u_j <= horizon
      auto it = std::upper_bound(inc.jump_times.begin(), inc.jump_times.begin() + n_jumps, horizon);
      double comp = 0.0;
      if (it != inc.jump_times.begin())
        comp = compensator[static_cast<std::size_t>(it - inc.jump_times.begin()) - 1];

      double jump = 0.0;
      if (sample.events[i] == 1 && x <= tau) {
        auto jt = std::lower_bound(inc.jump_times.begin(), inc.jump_times.begin() + n_jumps, x);
        std::size_t j = static_cast<std::size_t>(jt - inc.jump_times.begin());
        jump = tail_area[j] * static_cast<double>(n) / static_cast<double>(inc.at_risk[j]);
      }
      xi[i] += jump - comp;
    }
  }

  long double sum_sq = 0.0L;
  bool all_zero = true;
  for (double v : xi) {
    sum_sq += static_cast<long double>(v) * v;
    if (v != 0.0) all_zero = false;
  }
  if (all_zero && informative_event)
    throw Error(errc::degenerate_variance,
                "influence values identically zero although informative events exist");
  return std::sqrt(static_cast<double>(sum_sq)) / static_cast<double>(n);
}

// Per-arm AUC via the RMST identity, cross-checked against the exact integral
// of the mean score curve.
inline AucArmEstimate auc_arm(const ArmDataset& data, double tau) {
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  const int m = data.state_space.transition_count();

  AucArmEstimate est;
  est.tau = tau;
  est.n = data.size();
  long double rmst_sum = 0.0L;
  for (int k = 1; k <= m; ++k) {
    double r = rmst(fit_km(transition_sample(data, k)), tau);
    est.rmst_components.push_back(r);
    rmst_sum += r;
  }
  est.auc = static_cast<double>(static_cast<long double>(m) * tau - rmst_sum);

  double via_curve = mean_score_curve(data, tau).integral(0.0, tau);
  if (std::abs(via_curve - est.auc) > 1e-9 * std::max(1.0, std::abs(est.auc)))
    throw std::logic_error("auc_arm: RMST identity and score-curve integral disagree");

  est.se = auc_influence_se(data, tau);
  detail::append_follow_up_warning(data, tau, est.warnings);
  return est;
}

// Ratio block of an AUC contrast; inference on the log scale.
struct AucRatio {
  double ratio = 1.0;
  double log_se = 0.0;
  double lower = 1.0;
  double upper = 1.0;
  double p = 1.0;
};

struct AucContrast {
  double tau = 0.0;
  double alpha = 0.05;
  AucArmEstimate treated;
  AucArmEstimate control;
  QuantityInference difference;          // treated - control, event-years
  std::optional<AucRatio> ratio;         // absent when the control burden is zero
  std::string ratio_error;               // names ZeroControlBurden when absent
  std::vector<double> rmst_differences;  // per-transition treated - control
  std::vector<std::string> warnings;
};

inline AucContrast auc_contrast(const ArmDataset& treated, const ArmDataset& control, double tau,
                                double alpha = 0.05) {
  detail::check_shared_space(treated, control);
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::invalid_config, "alpha must lie in (0, 1)");

  AucContrast out;
  out.tau = tau;
  out.alpha = alpha;
  out.treated = auc_arm(treated, tau);
  out.control = auc_arm(control, tau);

  double se_diff = std::sqrt(out.treated.se * out.treated.se + out.control.se * out.control.se);
  out.difference = wald_inference(out.treated.auc - out.control.auc, se_diff, alpha);

  for (std::size_t k = 0; k < out.treated.rmst_components.size(); ++k)
    out.rmst_differences.push_back(out.treated.rmst_components[k] - out.control.rmst_components[k]);

  if (out.control.auc > 0.0 && out.treated.auc > 0.0) {
    AucRatio r;
    r.ratio = out.treated.auc / out.control.auc;
    r.log_se = std::sqrt(out.treated.se * out.treated.se / (out.treated.auc * out.treated.auc) +
                         out.control.se * out.control.se / (out.control.auc * out.control.auc));
    double z = norm_quantile(1.0 - alpha / 2.0);
    double log_r = std::log(r.ratio);
    r.lower = std::exp(log_r - z * r.log_se);
    r.upper = std::exp(log_r + z * r.log_se);
    r.p = two_sided_p(wald_z(log_r, r.log_se));
    out.ratio = r;
  } else if (out.control.auc <= 0.0) {
    out.ratio_error = std::string(errc_name(errc::zero_control_burden)) +
                      ": control burden is zero, ratio undefined";
  } else {
    out.ratio_error = "treated burden is zero, log-scale ratio inference undefined";
  }

  out.warnings = out.treated.warnings;
  out.warnings.insert(out.warnings.end(), out.control.warnings.begin(),
                      out.control.warnings.end());
  return out;
}

struct RunningAucRatio {
  std::vector<double> times;
  std::vector<double> ratios;  // NaN until the control burden turns positive
};

// R(t) swept over the pooled event grid: the ratio of the two arms' mean
// cumulative burdens integrated up to each grid time (plotting data)
inline RunningAucRatio running_auc_ratio(const ArmDataset& treated, const ArmDataset& control,
                                         double tau) {
  detail::check_shared_space(treated, control);
  std::array<StepCurve, 2> curves{mean_score_curve(treated, tau), mean_score_curve(control, tau)};
  std::vector<double> grid = merged_jump_times(curves, tau);
  if (grid.empty() || grid.back() != tau) grid.push_back(tau);

  RunningAucRatio out;
  out.times.reserve(grid.size());
  out.ratios.reserve(grid.size());
  StepWalker w1(curves[0]), w0(curves[1]);
  long double a1 = 0.0L, a0 = 0.0L;
  double v1 = curves[0].initial_value, v0 = curves[1].initial_value;
  double prev = 0.0;
  for (double t : grid) {
    a1 += static_cast<long double>(v1) * (t - prev);
    a0 += static_cast<long double>(v0) * (t - prev);
    out.times.push_back(t);
    out.ratios.push_back(a0 > 0.0L ? static_cast<double>(a1 / a0)
                                   : std::numeric_limits<double>::quiet_NaN());
    v1 = w1.advance(t);
    v0 = w0.advance(t);
    prev = t;
  }
  return out;
}

}  // namespace msburden
