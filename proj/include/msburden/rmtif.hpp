#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "msburden/detail/parallel.hpp"
#include "msburden/detail/rng.hpp"
#include "msburden/errors.hpp"
#include "msburden/km.hpp"
#include "msburden/stats.hpp"
#include "msburden/step_curve.hpp"
#include "msburden/types.hpp"

// Restricted mean time in favor of treatment: the net expected time a treated
// process spends in a strictly better state than an independent control
// process over [0, tau], split additively into per-state stages. Stage K+1 is
// the familiar RMST difference for death. Point estimation is a KM plug-in
// under independence of arms; inference is a subject-level bootstrap; an exact
// all-pairs oracle over uncensored data verifies the plug-in.

namespace msburden {

struct RmtifEstimate {
  double tau = 0.0;
  std::vector<double> stages;  // stage k at index k-1, k = 1..K+1, time units
  double overall = 0.0;        // sum of stages
};

namespace detail {

// Plug-in integral over the union of all jump times. For stage k the
// integrand is S1_k*(S0_{k+1} - S0_k) - S0_k*(S1_{k+1} - S1_k) with the
// convention S_{K+2} = 1, i.e. the signed probability that one arm sits in
// state k while the other sits below it.
inline RmtifEstimate rmtif_core(const std::vector<TransitionSample>& treated,
                                const std::vector<TransitionSample>& control, double tau) {
  const std::size_t m = treated.size();
  std::vector<StepCurve> curves;
  curves.reserve(2 * m);
  for (const auto& s : treated) curves.push_back(fit_km(s));
  for (const auto& s : control) curves.push_back(fit_km(s));

  std::vector<double> grid = merged_jump_times(curves, tau);
  std::vector<StepWalker> walkers(curves.begin(), curves.end());
  std::vector<double> s1(m + 1, 1.0), s0(m + 1, 1.0);  // slot m holds S_{K+2} = 1
  std::vector<long double> acc(m, 0.0L);

  double prev = 0.0;
  for (std::size_t g = 0; g <= grid.size(); ++g) {
    double next = (g < grid.size()) ? grid[g] : tau;
    double len = next - prev;
    if (len > 0.0) {
      for (std::size_t k = 0; k < m; ++k) {
        double a = s1[k] * (s0[k + 1] - s0[k]);
        double b = s0[k] * (s1[k + 1] - s1[k]);
        acc[k] += static_cast<long double>(a - b) * len;
      }
      prev = next;
    }
    if (g < grid.size()) {
      for (std::size_t k = 0; k < m; ++k) {
        s1[k] = walkers[k].advance(grid[g]);
        s0[k] = walkers[m + k].advance(grid[g]);
      }
      prev = grid[g];
    }
  }

  RmtifEstimate est;
  est.tau = tau;
  est.stages.reserve(m);
  for (std::size_t k = 0; k < m; ++k) est.stages.push_back(static_cast<double>(acc[k]));
  est.overall = std::accumulate(est.stages.begin(), est.stages.end(), 0.0);
  return est;
}

inline std::vector<TransitionSample> all_transition_samples(const ArmDataset& data) {
  std::vector<TransitionSample> out;
  const int m = data.state_space.transition_count();
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) out.push_back(transition_sample(data, k));
  return out;
}

}  // namespace detail

inline RmtifEstimate rmtif_estimate(const ArmDataset& treated, const ArmDataset& control,
                                    double tau) {
  if (!(treated.state_space == control.state_space))
    throw Error(errc::state_space_mismatch, "arms use different state spaces");
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  return detail::rmtif_core(detail::all_transition_samples(treated),
                            detail::all_transition_samples(control), tau);
}

struct RmtifOracleResult {
  double tau = 0.0;
  std::vector<double> stages;
  double overall = 0.0;
  double gross_win_time = 0.0;   // average time the treated member of a pair is better
  double gross_loss_time = 0.0;  // average time the control member is better
};

// Exact all-pairs computation on fully uncensored data: for every treated x
// control pair, integrate who holds the better (lower) state over [0, tau].
// A win interval is credited to the stage equal to the losing process's
// current state. Ground truth for rmtif_estimate when nothing is censored.
inline RmtifOracleResult rmtif_pairwise_oracle(const ArmDataset& treated,
                                               const ArmDataset& control, double tau) {
  if (!(treated.state_space == control.state_space))
    throw Error(errc::state_space_mismatch, "arms use different state spaces");
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  for (const ArmDataset* arm : {&treated, &control})
    for (const auto& r : arm->subjects)
      for (int d : r.delta)
        if (d != 1)
          throw Error(errc::censored_input,
                      "pairwise oracle requires fully uncensored data (subject " + r.subject_id +
                          ")");

  const std::size_t m = static_cast<std::size_t>(treated.state_space.transition_count());
  std::vector<long double> acc(m, 0.0L);
  long double win = 0.0L, loss = 0.0L;
  std::vector<double> cuts;
  cuts.reserve(2 * m + 2);

  for (const auto& ti : treated.subjects) {
    for (const auto& cj : control.subjects) {
      cuts.clear();
      cuts.push_back(0.0);
      for (double t : ti.x)
        if (t < tau) cuts.push_back(t);
      for (double t : cj.x)
        if (t < tau) cuts.push_back(t);
      cuts.push_back(tau);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

      std::size_t a = 0, b = 0;  // transitions taken so far = current state
      for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        double start = cuts[s];
        while (a < m && ti.x[a] <= start) ++a;
        while (b < m && cj.x[b] <= start) ++b;
        double len = cuts[s + 1] - start;
        if (a < b) {
          acc[b - 1] += len;
          win += len;
        } else if (b < a) {
          acc[a - 1] -= len;
          loss += len;
        }
      }
    }
  }

  const long double pairs = static_cast<long double>(treated.size()) *
                            static_cast<long double>(control.size());
  RmtifOracleResult out;
  out.tau = tau;
  out.stages.reserve(m);
  for (std::size_t k = 0; k < m; ++k) out.stages.push_back(static_cast<double>(acc[k] / pairs));
  out.overall = std::accumulate(out.stages.begin(), out.stages.end(), 0.0);
  out.gross_win_time = static_cast<double>(win / pairs);
  out.gross_loss_time = static_cast<double>(loss / pairs);
  return out;
}

struct BootstrapInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct RmtifReport {
  double tau = 0.0;
  double alpha = 0.05;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  RmtifEstimate point;
  QuantityInference overall;                          // normal CI with bootstrap SE
  std::vector<QuantityInference> stages;              // one per stage, same style
  BootstrapInterval overall_percentile;               // percentile CI alternative
  std::vector<BootstrapInterval> stage_percentiles;
};

// Nonparametric bootstrap, resampling subjects with replacement within each
// arm. Replicate b draws its engine from (seed, b), so the result does not
// depend on how replicates are scheduled.
inline RmtifReport rmtif_infer(const ArmDataset& treated, const ArmDataset& control, double tau,
                               std::size_t replicates, std::uint64_t seed, double alpha = 0.05) {
  if (replicates < 100)
    throw Error(errc::invalid_config, "bootstrap needs at least 100 replicates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(errc::invalid_config, "alpha must lie in (0, 1)");

  RmtifReport report;
  report.tau = tau;
  report.alpha = alpha;
  report.replicates = replicates;
  report.seed = seed;
  report.point = rmtif_estimate(treated, control, tau);

  const auto base1 = detail::all_transition_samples(treated);
  const auto base0 = detail::all_transition_samples(control);
  const std::size_t m = base1.size();
  const std::size_t n1 = treated.size(), n0 = control.size();

  std::vector<std::vector<double>> rep_stage(m, std::vector<double>(replicates, 0.0));
  std::vector<double> rep_overall(replicates, 0.0);

  detail::parallel_for(replicates, [&](std::size_t b) {
    std::mt19937_64 eng = detail::make_engine(seed, 0x626F6F74ULL, b);  // "boot"
    std::vector<std::size_t> idx1(n1), idx0(n0);
    for (auto& i : idx1) i = detail::bounded(eng(), n1);
    for (auto& i : idx0) i = detail::bounded(eng(), n0);

    auto gather = [m](const std::vector<TransitionSample>& base,
                      const std::vector<std::size_t>& idx) {
      std::vector<TransitionSample> out(m);
      for (std::size_t k = 0; k < m; ++k) {
        out[k].times.reserve(idx.size());
        out[k].events.reserve(idx.size());
        for (std::size_t i : idx) {
          out[k].times.push_back(base[k].times[i]);
          out[k].events.push_back(base[k].events[i]);
        }
      }
      return out;
    };

    RmtifEstimate rep = detail::rmtif_core(gather(base1, idx1), gather(base0, idx0), tau);
    for (std::size_t k = 0; k < m; ++k) rep_stage[k][b] = rep.stages[k];
    rep_overall[b] = rep.overall;
  });

  report.overall = wald_inference(report.point.overall, sample_sd(rep_overall), alpha);
  report.overall_percentile = {empirical_quantile(rep_overall, alpha / 2.0),
                               empirical_quantile(rep_overall, 1.0 - alpha / 2.0)};
  report.stages.reserve(m);
  report.stage_percentiles.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    report.stages.push_back(wald_inference(report.point.stages[k], sample_sd(rep_stage[k]), alpha));
    report.stage_percentiles.push_back({empirical_quantile(rep_stage[k], alpha / 2.0),
                                        empirical_quantile(rep_stage[k], 1.0 - alpha / 2.0)});
  }
  return report;
}

}  // namespace msburden
