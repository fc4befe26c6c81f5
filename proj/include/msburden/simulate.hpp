#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "msburden/detail/parallel.hpp"
#include "msburden/detail/rng.hpp"
#include "msburden/errors.hpp"
#include "msburden/stats.hpp"
#include "msburden/types.hpp"

// Two-arm trial generator for verification and power studies. Subjects
// progress through sequential exponential gap times, optionally correlated by
// a gamma frailty multiplying all of a subject's hazards, censored by the
// earlier of an administrative horizon and exponential dropout, and observed
// either continuously or on a periodic assessment schedule. Every subject owns
// an RNG stream derived from the master seed, so output is independent of
// scheduling order.

namespace msburden {

struct TrialScenario {
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  int k_severity_states = 0;          // K non-fatal states; death is K+1
  std::vector<double> treated_rates;  // K+1 gap-time hazards per year
  std::vector<double> control_rates;
  double frailty_variance = 0.0;      // 0 = independent transitions
  double admin_censor_time = 0.0;
  double dropout_rate = 0.0;          // exponential, 0 = none
  double assessment_interval = 0.0;   // 0 = continuous observation
  std::uint64_t seed = 0;
  std::vector<std::string> labels;    // optional; defaults to state_k / death
};

namespace detail {

inline void check_scenario(const TrialScenario& sc) {
  auto fail = [](const std::string& what) { throw Error(errc::invalid_scenario, what); };
  if (sc.n_treated == 0 || sc.n_control == 0) fail("both arms need at least one subject");
  if (sc.k_severity_states < 0) fail("severity state count cannot be negative");
  const std::size_t m = static_cast<std::size_t>(sc.k_severity_states) + 1;
  if (sc.treated_rates.size() != m || sc.control_rates.size() != m)
    fail("need one gap-time rate per transition (" + std::to_string(m) + ")");
  for (const auto* rates : {&sc.treated_rates, &sc.control_rates})
    for (double r : *rates)
      if (!(r > 0.0) || !std::isfinite(r)) fail("gap-time rates must be positive");
  if (!(sc.frailty_variance >= 0.0)) fail("frailty variance cannot be negative");
  if (!(sc.admin_censor_time > 0.0)) fail("administrative censoring time must be positive");
  if (!(sc.dropout_rate >= 0.0)) fail("dropout rate cannot be negative");
  if (!(sc.assessment_interval >= 0.0)) fail("assessment interval cannot be negative");
  if (!sc.labels.empty() && sc.labels.size() != m)
    fail("need one label per transition (" + std::to_string(m) + ")");
}

inline StateSpace scenario_state_space(const TrialScenario& sc) {
  if (!sc.labels.empty()) return StateSpace::make(sc.labels);
  std::vector<std::string> labels;
  for (int k = 1; k <= sc.k_severity_states; ++k) labels.push_back("state_" + std::to_string(k));
  labels.push_back("death");
  return StateSpace::make(std::move(labels));
}

inline double normal_draw(std::mt19937_64& eng) {
  double u1 = uniform01(eng), u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Marsaglia-Tsang squeeze; the small-shape case boosts a shape+1 draw down
inline double gamma_draw(std::mt19937_64& eng, double shape) {
  if (shape < 1.0) {
    double u = uniform01(eng);
    return gamma_draw(eng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = normal_draw(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// one subject's underlying continuous process and censoring time; draw order
// is frailty, gap times, dropout
struct LatentSubject {
  std::vector<double> t;  // true transition times, non-decreasing
  double censor = 0.0;
};

inline LatentSubject draw_subject(std::mt19937_64& eng, const TrialScenario& sc,
                                  const std::vector<double>& rates, bool with_censoring) {
  LatentSubject s;
  double frailty = 1.0;
  if (sc.frailty_variance > 0.0) {
    double shape = 1.0 / sc.frailty_variance;
    frailty = gamma_draw(eng, shape) * sc.frailty_variance;  // mean 1, variance v
  }
  s.t.reserve(rates.size());
  double t = 0.0;
  for (double rate : rates) {
    t += -std::log(uniform01(eng)) / (rate * frailty);
    s.t.push_back(t);
  }
  s.censor = sc.admin_censor_time;
  if (with_censoring && sc.dropout_rate > 0.0) {
    double dropout = -std::log(uniform01(eng)) / sc.dropout_rate;
    s.censor = std::min(s.censor, dropout);
  }
  return s;
}

// observation times: non-fatal transitions surface at the next assessment
// visit, capped at death, which is ascertained exactly and reveals anything
// still pending; continuous observation reports the true times
inline std::vector<double> observed_times(const std::vector<double>& t, double interval) {
  std::vector<double> o(t);
  if (interval > 0.0) {
    const double death = t.back();
    for (std::size_t k = 0; k + 1 < o.size(); ++k)
      o[k] = std::min(std::ceil(t[k] / interval) * interval, death);
  }
  return o;
}

}  // namespace detail

struct TrialTallies {
  FirstEventSummary treated_first_events;
  FirstEventSummary control_first_events;
  WorstStateSummary treated_worst_states;
  WorstStateSummary control_worst_states;
};

struct SimulatedTrial {
  ArmDataset treated;
  ArmDataset control;
  TrialTallies tallies;
};

// Tallies count the underlying process against the censoring time, so they
// coincide with the observed-data summaries exactly when observation is
// continuous; assessment coarsening shifts what the records can see.
inline SimulatedTrial simulate_trial(const TrialScenario& sc) {
  detail::check_scenario(sc);
  const StateSpace space = detail::scenario_state_space(sc);
  const std::size_t m = static_cast<std::size_t>(space.transition_count());

  SimulatedTrial trial;
  trial.tallies.treated_first_events.counts.assign(m, 0);
  trial.tallies.control_first_events.counts.assign(m, 0);
  trial.tallies.treated_worst_states.counts.assign(m, 0);
  trial.tallies.control_worst_states.counts.assign(m, 0);

  for (int arm : {1, 0}) {
    const bool is_treated = arm == 1;
    const std::size_t n = is_treated ? sc.n_treated : sc.n_control;
    const auto& rates = is_treated ? sc.treated_rates : sc.control_rates;
    std::vector<SubjectRecord> subjects(n);
    std::vector<detail::LatentSubject> latents(n);

    detail::parallel_for(n, [&](std::size_t i) {
      std::mt19937_64 eng = detail::make_engine(sc.seed, static_cast<std::uint64_t>(arm), i);
      detail::LatentSubject latent = detail::draw_subject(eng, sc, rates, true);
      std::vector<double> obs = detail::observed_times(latent.t, sc.assessment_interval);

      SubjectRecord& r = subjects[i];
      r.subject_id = (is_treated ? "T" : "C") + std::to_string(i + 1);
      r.arm = arm;
      r.x.resize(m);
      r.delta.resize(m);
      for (std::size_t k = 0; k < m; ++k) {
        r.x[k] = std::min(obs[k], latent.censor);
        r.delta[k] = obs[k] <= latent.censor ? 1 : 0;
      }
      latents[i] = std::move(latent);
    });

    FirstEventSummary& first =
        is_treated ? trial.tallies.treated_first_events : trial.tallies.control_first_events;
    WorstStateSummary& worst =
        is_treated ? trial.tallies.treated_worst_states : trial.tallies.control_worst_states;
    for (const auto& latent : latents) {
      if (latent.t.front() <= latent.censor) {
        std::size_t most_severe = 0;
        for (std::size_t k = 0; k < m; ++k)
          if (latent.t[k] == latent.t.front()) most_severe = k;
        ++first.counts[most_severe];
        ++first.total_events;
      }
      int worst_state = -1;
      for (std::size_t k = 0; k < m; ++k)
        if (latent.t[k] <= latent.censor) worst_state = static_cast<int>(k);
      if (worst_state < 0)
        ++worst.censored;
      else
        ++worst.counts[static_cast<std::size_t>(worst_state)];
    }

    (is_treated ? trial.treated : trial.control) =
        ArmDataset::make(arm, space, std::move(subjects));
  }
  return trial;
}

struct TrueEstimands {
  double tau = 0.0;
  std::size_t n_mc = 0;
  double auc_treated = 0.0;
  double auc_treated_se = 0.0;
  double auc_control = 0.0;
  double auc_control_se = 0.0;
  double auc_ratio = 1.0;
  double auc_ratio_se = 0.0;
  double auc_difference = 0.0;
  double auc_difference_se = 0.0;
  std::vector<double> rmtif_stages;
  std::vector<double> rmtif_stage_ses;
  double rmtif_overall = 0.0;
  double rmtif_overall_se = 0.0;
  double composite_hazard_ratio = 0.0;  // first-transition rate ratio
  bool composite_hr_exact = false;      // exact only without frailty
};

// Monte-Carlo ground truth on uncensored, continuously observed processes:
// per-arm AUC from subject-level burden areas, time in favor from independent
// treated/control pairs with win intervals credited to the loser's state.
// Draw streams are disjoint from simulate_trial's.
inline TrueEstimands true_estimands(const TrialScenario& sc, std::size_t n_mc, double tau) {
  detail::check_scenario(sc);
  if (!(tau > 0.0)) throw Error(errc::non_positive_horizon, "tau must be positive");
  if (n_mc < 100000) throw Error(errc::invalid_config, "Monte-Carlo truth needs n_mc >= 1e5");

  const std::size_t m = static_cast<std::size_t>(sc.k_severity_states) + 1;
  std::vector<double> area1(n_mc), area0(n_mc), net(n_mc);
  std::vector<std::vector<double>> stage(m, std::vector<double>(n_mc));

  detail::parallel_for(n_mc, [&](std::size_t i) {
    std::mt19937_64 e1 = detail::make_engine(sc.seed, 0x74727531ULL, i);  // "tru1"
    std::mt19937_64 e0 = detail::make_engine(sc.seed, 0x74727530ULL, i);  // "tru0"
    detail::LatentSubject s1 = detail::draw_subject(e1, sc, sc.treated_rates, false);
    detail::LatentSubject s0 = detail::draw_subject(e0, sc, sc.control_rates, false);

    auto burden_area = [&](const std::vector<double>& t) {
      long double a = 0.0L;
      for (double tk : t) a += tau - std::min(tk, tau);
      return static_cast<double>(a);
    };
    area1[i] = burden_area(s1.t);
    area0[i] = burden_area(s0.t);

    // win-time integral over the pair's merged transition grid
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (double t : s1.t)
      if (t < tau) cuts.push_back(t);
    for (double t : s0.t)
      if (t < tau) cuts.push_back(t);
    cuts.push_back(tau);
    std::sort(cuts.begin(), cuts.end());
    std::size_t a = 0, b = 0;
    long double pair_net = 0.0L;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      double start = cuts[s];
      while (a < m && s1.t[a] <= start) ++a;
      while (b < m && s0.t[b] <= start) ++b;
      double len = cuts[s + 1] - start;
      if (len <= 0.0) continue;
      if (a < b) {
        stage[b - 1][i] += len;
        pair_net += len;
      } else if (b < a) {
        stage[a - 1][i] -= len;
        pair_net -= len;
      }
    }
    net[i] = static_cast<double>(pair_net);
  });

  TrueEstimands truth;
  truth.tau = tau;
  truth.n_mc = n_mc;
  const double root_n = std::sqrt(static_cast<double>(n_mc));
  truth.auc_treated = mean(area1);
  truth.auc_treated_se = sample_sd(area1) / root_n;
  truth.auc_control = mean(area0);
  truth.auc_control_se = sample_sd(area0) / root_n;
  truth.auc_difference = truth.auc_treated - truth.auc_control;
  truth.auc_difference_se = std::hypot(truth.auc_treated_se, truth.auc_control_se);
  if (truth.auc_control > 0.0) {
    truth.auc_ratio = truth.auc_treated / truth.auc_control;
    truth.auc_ratio_se =
        truth.auc_ratio * std::hypot(truth.auc_treated_se / truth.auc_treated,
                                     truth.auc_control_se / truth.auc_control);
  }
  truth.rmtif_stages.reserve(m);
  truth.rmtif_stage_ses.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    truth.rmtif_stages.push_back(mean(stage[k]));
    truth.rmtif_stage_ses.push_back(sample_sd(stage[k]) / root_n);
  }
  truth.rmtif_overall = mean(net);
  truth.rmtif_overall_se = sample_sd(net) / root_n;
  truth.composite_hazard_ratio = sc.treated_rates.front() / sc.control_rates.front();
  truth.composite_hr_exact = sc.frailty_variance == 0.0;
  return truth;
}

}  // namespace msburden
