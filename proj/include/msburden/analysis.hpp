#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "msburden/auc.hpp"
#include "msburden/cox.hpp"
#include "msburden/csv.hpp"
#include "msburden/detail/rng.hpp"
#include "msburden/errors.hpp"
#include "msburden/rmtif.hpp"
#include "msburden/simulate.hpp"
#include "msburden/types.hpp"
#include "msburden/utility.hpp"
#include "msburden/version.hpp"

// Batch orchestration behind the CLI: config files, full analysis runs over
// endpoint-subset sensitivity sweeps, simulation runs, and report emission.
// Every number written out comes straight from a library call; files are
// plain CSV plus one machine-readable JSON summary, and fixed seeds make the
// whole bundle byte-reproducible.

namespace msburden {

struct AnalysisConfig {
  std::string input_path;
  std::string output_dir = ".";
  double tau = 0.0;
  double alpha = 0.05;
  std::vector<std::string> endpoints;             // empty: take from the data header
  std::vector<double> scores;                     // empty: consecutive integers
  std::size_t bootstrap_replicates = 1000;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> subsets;  // empty: full endpoint set only
};

struct SimulationConfig {
  TrialScenario scenario;
  std::string output_dir = ".";
  std::string dataset_filename = "trial.csv";
  std::size_t truth_n_mc = 0;  // 0: skip the Monte-Carlo truth pass
  double truth_tau = 0.0;
};

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(errc::invalid_config, "config is missing '" + key + "'");
  return *it;
}

inline void reject_unknown_keys(const nlohmann::json& j,
                                std::initializer_list<const char*> known) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw Error(errc::invalid_config, "unknown config key '" + item.key() + "'");
  }
}

template <typename T>
T config_number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number())
    throw Error(errc::invalid_config, "config field '" + key + "' must be a number");
  return j.get<T>();
}

inline std::vector<std::string> config_string_list(const nlohmann::json& j,
                                                   const std::string& key) {
  if (!j.is_array()) throw Error(errc::invalid_config, "config field '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string())
      throw Error(errc::invalid_config, "config field '" + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string sanitize_component(const std::string& name) {
  std::string out;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '+' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(errc::parse_error, "cannot open: " + path);
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded()) throw Error(errc::parse_error, "not valid JSON: " + path);
  if (!j.is_object()) throw Error(errc::parse_error, "config root must be a JSON object");
  return j;
}

}  // namespace detail

inline AnalysisConfig analysis_config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j, {"input", "output_dir", "tau", "alpha", "endpoints", "scores",
                                  "bootstrap_replicates", "seed", "subsets"});
  AnalysisConfig cfg;
  cfg.input_path = detail::require_key(j, "input").get<std::string>();
  cfg.tau = detail::config_number<double>(detail::require_key(j, "tau"), "tau");
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("alpha")) cfg.alpha = detail::config_number<double>(j.at("alpha"), "alpha");
  if (j.contains("endpoints")) cfg.endpoints = detail::config_string_list(j.at("endpoints"), "endpoints");
  if (j.contains("scores")) {
    if (!j.at("scores").is_array())
      throw Error(errc::invalid_config, "config field 'scores' must be a list");
    for (const auto& e : j.at("scores"))
      cfg.scores.push_back(detail::config_number<double>(e, "scores"));
  }
  if (j.contains("bootstrap_replicates"))
    cfg.bootstrap_replicates =
        detail::config_number<std::size_t>(j.at("bootstrap_replicates"), "bootstrap_replicates");
  if (j.contains("seed")) cfg.seed = detail::config_number<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("subsets")) {
    if (!j.at("subsets").is_array())
      throw Error(errc::invalid_config, "config field 'subsets' must be a list of label lists");
    for (const auto& s : j.at("subsets")) cfg.subsets.push_back(detail::config_string_list(s, "subsets"));
  }

  if (!(cfg.tau > 0.0)) throw Error(errc::invalid_config, "tau must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw Error(errc::invalid_config, "alpha must lie in (0, 1)");
  return cfg;
}

inline AnalysisConfig load_analysis_config(const std::string& path) {
  return analysis_config_from_json(detail::parse_json_file(path));
}

inline SimulationConfig simulation_config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j, {"scenario", "output_dir", "dataset", "truth"});
  const nlohmann::json& s = detail::require_key(j, "scenario");
  if (!s.is_object()) throw Error(errc::invalid_config, "'scenario' must be a JSON object");
  detail::reject_unknown_keys(
      s, {"n_treated", "n_control", "k_severity_states", "treated_rates", "control_rates",
          "frailty_variance", "admin_censor_time", "dropout_rate", "assessment_interval", "seed",
          "labels"});

  SimulationConfig cfg;
  TrialScenario& sc = cfg.scenario;
  sc.n_treated = detail::config_number<std::size_t>(detail::require_key(s, "n_treated"), "n_treated");
  sc.n_control = detail::config_number<std::size_t>(detail::require_key(s, "n_control"), "n_control");
  sc.k_severity_states =
      detail::config_number<int>(detail::require_key(s, "k_severity_states"), "k_severity_states");
  auto rates = [&](const char* key) {
    std::vector<double> out;
    const nlohmann::json& arr = detail::require_key(s, key);
    if (!arr.is_array()) throw Error(errc::invalid_config, std::string(key) + " must be a list");
    for (const auto& e : arr) out.push_back(detail::config_number<double>(e, key));
    return out;
  };
  sc.treated_rates = rates("treated_rates");
  sc.control_rates = rates("control_rates");
  sc.admin_censor_time = detail::config_number<double>(
      detail::require_key(s, "admin_censor_time"), "admin_censor_time");
  if (s.contains("frailty_variance"))
    sc.frailty_variance = detail::config_number<double>(s.at("frailty_variance"), "frailty_variance");
  if (s.contains("dropout_rate"))
    sc.dropout_rate = detail::config_number<double>(s.at("dropout_rate"), "dropout_rate");
  if (s.contains("assessment_interval"))
    sc.assessment_interval =
        detail::config_number<double>(s.at("assessment_interval"), "assessment_interval");
  if (s.contains("seed")) sc.seed = detail::config_number<std::uint64_t>(s.at("seed"), "seed");
  if (s.contains("labels")) sc.labels = detail::config_string_list(s.at("labels"), "labels");

  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("dataset")) cfg.dataset_filename = j.at("dataset").get<std::string>();
  if (j.contains("truth")) {
    const nlohmann::json& t = j.at("truth");
    if (!t.is_object()) throw Error(errc::invalid_config, "'truth' must be a JSON object");
    detail::reject_unknown_keys(t, {"n_mc", "tau"});
    cfg.truth_n_mc = detail::config_number<std::size_t>(detail::require_key(t, "n_mc"), "n_mc");
    cfg.truth_tau = detail::config_number<double>(detail::require_key(t, "tau"), "tau");
  }
  return cfg;
}

inline SimulationConfig load_simulation_config(const std::string& path) {
  return simulation_config_from_json(detail::parse_json_file(path));
}

struct SubsetOutcome {
  std::string name;
  std::vector<std::string> labels;
  std::vector<int> keep;  // 1-based transition indices into the full list
  bool ok = false;
  std::string error;

  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  FirstEventSummary first_treated, first_control;
  WorstStateSummary worst_treated, worst_control;
  CoxFit cox;
  ScoreTest cox_score;
  AucContrast auc;
  RmtifReport rmtif;
  UtilityContrast utility;
  HazardCurves hazards;
  StepCurve mean_score_treated, mean_score_control;
  RunningAucRatio running_ratio;
};

struct AnalysisRun {
  AnalysisConfig config;
  std::vector<std::string> endpoints;
  std::size_t n_treated = 0;
  std::size_t n_control = 0;
  std::vector<SubsetOutcome> subsets;
  std::vector<std::string> files;
  std::string summary_path;

  bool all_ok() const {
    for (const auto& s : subsets)
      if (!s.ok) return false;
    return true;
  }
};

namespace detail {

inline nlohmann::ordered_json json_inference(const QuantityInference& q) {
  return {{"estimate", q.estimate}, {"se", q.se}, {"lower", q.lower},
          {"upper", q.upper},       {"p", q.p}};
}

inline nlohmann::ordered_json json_counts(const std::vector<std::string>& labels,
                                          const FirstEventSummary& treated,
                                          const FirstEventSummary& control) {
  return {{"labels", labels},
          {"treated", treated.counts},
          {"control", control.counts},
          {"treated_total", treated.total_events},
          {"control_total", control.total_events}};
}

inline nlohmann::ordered_json json_worst(const std::vector<std::string>& labels,
                                         const WorstStateSummary& treated,
                                         const WorstStateSummary& control) {
  return {{"labels", labels},
          {"treated", treated.counts},
          {"control", control.counts},
          {"treated_event_free", treated.censored},
          {"control_event_free", control.censored}};
}

inline nlohmann::ordered_json json_subset(const SubsetOutcome& s,
                                          const std::vector<double>& subset_scores) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["endpoints"] = s.labels;
  if (!s.ok) {
    j["error"] = s.error;
    return j;
  }
  j["n_treated"] = s.n_treated;
  j["n_control"] = s.n_control;
  j["first_events"] = json_counts(s.labels, s.first_treated, s.first_control);
  j["worst_states"] = json_worst(s.labels, s.worst_treated, s.worst_control);

  nlohmann::ordered_json cox;
  cox["hazard_ratio"] = s.cox.hazard_ratio;
  cox["lower"] = s.cox.lower;
  cox["upper"] = s.cox.upper;
  cox["p"] = s.cox.p;
  cox["beta"] = s.cox.beta;
  cox["se"] = s.cox.se;
  cox["log_likelihood"] = s.cox.log_likelihood;
  cox["ties"] = s.cox.ties == TieMethod::efron ? "efron" : "breslow";
  cox["iterations"] = s.cox.iterations;
  cox["score_test"] = {{"score", s.cox_score.score},
                       {"information", s.cox_score.information},
                       {"z", s.cox_score.z},
                       {"p", s.cox_score.p}};
  j["cox"] = std::move(cox);

  nlohmann::ordered_json auc;
  auc["treated"] = {{"auc", s.auc.treated.auc},
                    {"se", s.auc.treated.se},
                    {"rmst_components", s.auc.treated.rmst_components}};
  auc["control"] = {{"auc", s.auc.control.auc},
                    {"se", s.auc.control.se},
                    {"rmst_components", s.auc.control.rmst_components}};
  auc["difference"] = json_inference(s.auc.difference);
  if (s.auc.ratio) {
    auc["ratio"] = {{"estimate", s.auc.ratio->ratio},
                    {"log_se", s.auc.ratio->log_se},
                    {"lower", s.auc.ratio->lower},
                    {"upper", s.auc.ratio->upper},
                    {"p", s.auc.ratio->p}};
  } else {
    auc["ratio_error"] = s.auc.ratio_error;
  }
  auc["rmst_differences"] = s.auc.rmst_differences;
  if (!s.auc.warnings.empty()) auc["warnings"] = s.auc.warnings;
  j["auc"] = std::move(auc);

  nlohmann::ordered_json rmtif;
  rmtif["overall"] = json_inference(s.rmtif.overall);
  rmtif["overall_percentile"] = {{"lower", s.rmtif.overall_percentile.lower},
                                 {"upper", s.rmtif.overall_percentile.upper}};
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < s.rmtif.stages.size(); ++k) {
    nlohmann::ordered_json stage = json_inference(s.rmtif.stages[k]);
    stage["endpoint"] = s.labels[k];
    stage["percentile"] = {{"lower", s.rmtif.stage_percentiles[k].lower},
                           {"upper", s.rmtif.stage_percentiles[k].upper}};
    stages.push_back(std::move(stage));
  }
  rmtif["stages"] = std::move(stages);
  rmtif["replicates"] = s.rmtif.replicates;
  rmtif["seed"] = s.rmtif.seed;
  j["rmtif"] = std::move(rmtif);

  j["utility"] = {{"scores", subset_scores},
                  {"treated_expected", s.utility.treated_expected},
                  {"control_expected", s.utility.control_expected},
                  {"reduction", s.utility.reduction}};
  return j;
}

inline void write_count_tables(const std::filesystem::path& dir, const SubsetOutcome& s,
                               std::vector<std::string>& files) {
  {
    std::ofstream os = open_out(dir / "first_events.csv");
    os << "endpoint,treated,control\n";
    for (std::size_t k = 0; k < s.labels.size(); ++k)
      os << s.labels[k] << ',' << s.first_treated.counts[k] << ',' << s.first_control.counts[k]
         << "\n";
    os << "total," << s.first_treated.total_events << ',' << s.first_control.total_events << "\n";
    files.push_back((dir / "first_events.csv").string());
  }
  {
    std::ofstream os = open_out(dir / "worst_states.csv");
    os << "endpoint,treated,control\n";
    os << "event_free," << s.worst_treated.censored << ',' << s.worst_control.censored << "\n";
    for (std::size_t k = 0; k < s.labels.size(); ++k)
      os << s.labels[k] << ',' << s.worst_treated.counts[k] << ',' << s.worst_control.counts[k]
         << "\n";
    files.push_back((dir / "worst_states.csv").string());
  }
}

inline void write_effect_tables(const std::filesystem::path& dir, const SubsetOutcome& s,
                                std::vector<std::string>& files) {
  {
    std::ofstream os = open_out(dir / "cox.csv");
    os << "hazard_ratio,lower,upper,p,beta,se,log_likelihood,score_z,score_p,ties,iterations\n";
    os << format_number(s.cox.hazard_ratio) << ',' << format_number(s.cox.lower) << ','
       << format_number(s.cox.upper) << ',' << format_number(s.cox.p) << ','
       << format_number(s.cox.beta) << ',' << format_number(s.cox.se) << ','
       << format_number(s.cox.log_likelihood) << ',' << format_number(s.cox_score.z) << ','
       << format_number(s.cox_score.p) << ','
       << (s.cox.ties == TieMethod::efron ? "efron" : "breslow") << ',' << s.cox.iterations
       << "\n";
    files.push_back((dir / "cox.csv").string());
  }
  {
    std::ofstream os = open_out(dir / "auc.csv");
    os << "quantity,estimate,se,lower,upper,p,note\n";
    os << "treated_auc," << format_number(s.auc.treated.auc) << ','
       << format_number(s.auc.treated.se) << ",,,,\n";
    os << "control_auc," << format_number(s.auc.control.auc) << ','
       << format_number(s.auc.control.se) << ",,,,\n";
    const QuantityInference& d = s.auc.difference;
    os << "difference," << format_number(d.estimate) << ',' << format_number(d.se) << ','
       << format_number(d.lower) << ',' << format_number(d.upper) << ',' << format_number(d.p)
       << ",\n";
    if (s.auc.ratio) {
      const AucRatio& r = *s.auc.ratio;
      os << "ratio," << format_number(r.ratio) << ',' << format_number(r.log_se) << ','
         << format_number(r.lower) << ',' << format_number(r.upper) << ',' << format_number(r.p)
         << ",log-scale se\n";
    } else {
      os << "ratio,,,,,," << s.auc.ratio_error << "\n";
    }
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      os << "rmst_treated_" << s.labels[k] << ','
         << format_number(s.auc.treated.rmst_components[k]) << ",,,,,\n";
      os << "rmst_control_" << s.labels[k] << ','
         << format_number(s.auc.control.rmst_components[k]) << ",,,,,\n";
      os << "rmst_difference_" << s.labels[k] << ',' << format_number(s.auc.rmst_differences[k])
         << ",,,,,\n";
    }
    files.push_back((dir / "auc.csv").string());
  }
  {
    std::ofstream os = open_out(dir / "rmtif.csv");
    os << "quantity,estimate,se,lower,upper,p,pct_lower,pct_upper\n";
    for (std::size_t k = 0; k < s.rmtif.stages.size(); ++k) {
      const QuantityInference& q = s.rmtif.stages[k];
      os << "stage_" << s.labels[k] << ',' << format_number(q.estimate) << ','
         << format_number(q.se) << ',' << format_number(q.lower) << ',' << format_number(q.upper)
         << ',' << format_number(q.p) << ',' << format_number(s.rmtif.stage_percentiles[k].lower)
         << ',' << format_number(s.rmtif.stage_percentiles[k].upper) << "\n";
    }
    const QuantityInference& q = s.rmtif.overall;
    os << "overall," << format_number(q.estimate) << ',' << format_number(q.se) << ','
       << format_number(q.lower) << ',' << format_number(q.upper) << ',' << format_number(q.p)
       << ',' << format_number(s.rmtif.overall_percentile.lower) << ','
       << format_number(s.rmtif.overall_percentile.upper) << "\n";
    files.push_back((dir / "rmtif.csv").string());
  }
  {
    std::ofstream os = open_out(dir / "utility.csv");
    os << "quantity,value\n";
    os << "treated_expected," << format_number(s.utility.treated_expected) << "\n";
    os << "control_expected," << format_number(s.utility.control_expected) << "\n";
    os << "reduction," << format_number(s.utility.reduction) << "\n";
    files.push_back((dir / "utility.csv").string());
  }
}

inline void write_curve_tables(const std::filesystem::path& dir, const SubsetOutcome& s,
                               std::vector<std::string>& files) {
  {
    std::ofstream os = open_out(dir / "cumulative_hazard.csv");
    os << "arm,time,cumulative_hazard\n";
    auto emit = [&](const char* arm, const StepCurve& c) {
      os << arm << ",0," << format_number(c.initial_value) << "\n";
      for (std::size_t i = 0; i < c.jump_times.size(); ++i)
        os << arm << ',' << format_number(c.jump_times[i]) << ',' << format_number(c.values[i])
           << "\n";
    };
    emit("treated", s.hazards.treated);
    emit("control", s.hazards.control);
    files.push_back((dir / "cumulative_hazard.csv").string());
  }
  {
    std::ofstream os = open_out(dir / "mean_score.csv");
    os << "time,treated_mean_score,control_mean_score,auc_ratio\n";
    os << "0,0,0,nan\n";
    StepWalker w1(s.mean_score_treated), w0(s.mean_score_control);
    for (std::size_t i = 0; i < s.running_ratio.times.size(); ++i) {
      double t = s.running_ratio.times[i];
      os << format_number(t) << ',' << format_number(w1.advance(t)) << ','
         << format_number(w0.advance(t)) << ',' << format_number(s.running_ratio.ratios[i])
         << "\n";
    }
    files.push_back((dir / "mean_score.csv").string());
  }
}

}  // namespace detail

inline AnalysisRun run_analysis(const AnalysisConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw Error(errc::invalid_config, "tau must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw Error(errc::invalid_config, "alpha must lie in (0, 1)");

  IngestResult data = ingest_csv(cfg.input_path);
  const std::vector<std::string>& data_labels = data.treated.state_space.labels;

  AnalysisRun run;
  run.config = cfg;
  run.n_treated = data.treated.size();
  run.n_control = data.control.size();
  if (!cfg.endpoints.empty() && cfg.endpoints != data_labels)
    throw Error(errc::state_space_mismatch,
                "config endpoints disagree with the data header (expected " +
                    detail::join(data_labels, ", ") + ")");
  run.endpoints = data_labels;
  const std::size_t m = run.endpoints.size();

  std::vector<double> scores = cfg.scores;
  const bool scores_defaulted = scores.empty();
  if (scores.empty())
    for (std::size_t k = 1; k <= m; ++k) scores.push_back(static_cast<double>(k));
  if (scores.size() != m)
    throw Error(errc::invalid_config, "need one score per endpoint (" + std::to_string(m) + ")");

  // Defaulted scores renumber within each subset so that analyzing a subset
  // here matches analyzing the projected dataset on its own.
  auto scores_for = [&](const std::vector<int>& keep) {
    std::vector<double> s;
    for (std::size_t k = 0; k < keep.size(); ++k)
      s.push_back(scores_defaulted ? static_cast<double>(k + 1)
                                   : scores[static_cast<std::size_t>(keep[k] - 1)]);
    return s;
  };

  std::vector<std::vector<std::string>> subset_labels = cfg.subsets;
  if (subset_labels.empty()) subset_labels.push_back(run.endpoints);

  // resolve label lists to 1-based transition indices, in severity order
  std::vector<std::vector<int>> subset_keep;
  for (const auto& labels : subset_labels) {
    std::vector<int> keep;
    for (const auto& l : labels) {
      auto it = std::find(run.endpoints.begin(), run.endpoints.end(), l);
      if (it == run.endpoints.end())
        throw Error(errc::invalid_config, "subset names unknown endpoint '" + l + "'");
      int idx = static_cast<int>(it - run.endpoints.begin()) + 1;
      if (!keep.empty() && idx <= keep.back())
        throw Error(errc::invalid_config,
                    "subset endpoints must be listed in severity order without repeats");
      keep.push_back(idx);
    }
    if (keep.empty() || keep.back() != static_cast<int>(m))
      throw Error(errc::death_excluded,
                  "every subset must end with the death endpoint '" + run.endpoints.back() + "'");
    subset_keep.push_back(std::move(keep));
  }

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);

  for (std::size_t s = 0; s < subset_labels.size(); ++s) {
    SubsetOutcome outcome;
    outcome.labels = subset_labels[s];
    outcome.keep = subset_keep[s];
    outcome.name = detail::join(outcome.labels, "+");
    try {
      const bool full = outcome.keep.size() == m;
      ArmDataset treated_local, control_local;
      if (!full) {
        treated_local = project_endpoints(data.treated, outcome.keep);
        control_local = project_endpoints(data.control, outcome.keep);
      }
      const ArmDataset* tp = full ? &data.treated : &treated_local;
      const ArmDataset* cp = full ? &data.control : &control_local;

      std::vector<double> subset_scores = scores_for(outcome.keep);

      outcome.n_treated = tp->size();
      outcome.n_control = cp->size();
      outcome.first_treated = summarize_first_events(*tp);
      outcome.first_control = summarize_first_events(*cp);
      outcome.worst_treated = summarize_worst_state(*tp);
      outcome.worst_control = summarize_worst_state(*cp);

      CompositeSample composite = to_composite(*tp, *cp);
      outcome.cox = fit_cox_hr(composite, cfg.alpha);
      outcome.cox_score = cox_score_test(composite);
      outcome.hazards = cumulative_hazard_curves(composite);

      outcome.auc = auc_contrast(*tp, *cp, cfg.tau, cfg.alpha);
      const std::uint64_t subset_seed =
          detail::mix_seed(cfg.seed, detail::fnv1a64(detail::join(outcome.labels, "\x1f")));
      outcome.rmtif =
          rmtif_infer(*tp, *cp, cfg.tau, cfg.bootstrap_replicates, subset_seed, cfg.alpha);
      outcome.utility =
          expected_utility_contrast(*tp, *cp, UtilitySpec::fixed(subset_scores), cfg.tau);

      outcome.mean_score_treated = mean_score_curve(*tp, cfg.tau);
      outcome.mean_score_control = mean_score_curve(*cp, cfg.tau);
      outcome.running_ratio = running_auc_ratio(*tp, *cp, cfg.tau);
      outcome.ok = true;

      const std::filesystem::path dir = out_dir / "subsets" / detail::sanitize_component(outcome.name);
      std::filesystem::create_directories(dir);
      detail::write_count_tables(dir, outcome, run.files);
      detail::write_effect_tables(dir, outcome, run.files);
      detail::write_curve_tables(dir, outcome, run.files);
    } catch (const Error& e) {
      outcome.ok = false;
      outcome.error = e.what();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.error = e.what();
    }
    run.subsets.push_back(std::move(outcome));
  }

  {
    std::ofstream os = detail::open_out(out_dir / "sensitivity.csv");
    os << "subset,n_treated,n_control,hazard_ratio,hr_lower,hr_upper,hr_p,"
          "auc_ratio,auc_ratio_lower,auc_ratio_upper,auc_ratio_p,"
          "auc_difference,auc_difference_se,auc_difference_lower,auc_difference_upper,"
          "auc_difference_p,rmtif_overall,rmtif_se,rmtif_lower,rmtif_upper,rmtif_p,"
          "utility_reduction,error\n";
    for (const auto& s : run.subsets) {
      os << s.name << ',';
      if (!s.ok) {
        os << ",,,,,,,,,,,,,,,,,,,,,\"" << s.error << "\"\n";
        continue;
      }
      os << s.n_treated << ',' << s.n_control << ',';
      os << format_number(s.cox.hazard_ratio) << ',' << format_number(s.cox.lower) << ','
         << format_number(s.cox.upper) << ',' << format_number(s.cox.p) << ',';
      if (s.auc.ratio) {
        os << format_number(s.auc.ratio->ratio) << ',' << format_number(s.auc.ratio->lower) << ','
           << format_number(s.auc.ratio->upper) << ',' << format_number(s.auc.ratio->p) << ',';
      } else {
        os << ",,,,";
      }
      const QuantityInference& d = s.auc.difference;
      os << format_number(d.estimate) << ',' << format_number(d.se) << ','
         << format_number(d.lower) << ',' << format_number(d.upper) << ',' << format_number(d.p)
         << ',';
      const QuantityInference& r = s.rmtif.overall;
      os << format_number(r.estimate) << ',' << format_number(r.se) << ','
         << format_number(r.lower) << ',' << format_number(r.upper) << ',' << format_number(r.p)
         << ',';
      os << format_number(s.utility.reduction) << ",\n";
    }
    run.files.push_back((out_dir / "sensitivity.csv").string());
  }

  {
    nlohmann::ordered_json summary;
    summary["tool"] = {{"name", library_name}, {"version", library_version}};
    nlohmann::ordered_json cfg_json;
    cfg_json["input"] = cfg.input_path;
    cfg_json["output_dir"] = cfg.output_dir;
    cfg_json["tau"] = cfg.tau;
    cfg_json["alpha"] = cfg.alpha;
    cfg_json["endpoints"] = run.endpoints;
    cfg_json["scores"] = scores;
    cfg_json["bootstrap_replicates"] = cfg.bootstrap_replicates;
    cfg_json["seed"] = cfg.seed;
    nlohmann::ordered_json subsets_json = nlohmann::ordered_json::array();
    for (const auto& labels : subset_labels) subsets_json.push_back(labels);
    cfg_json["subsets"] = std::move(subsets_json);
    summary["config"] = cfg_json;
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(cfg_json.dump())));
    summary["config_hash"] = hash;
    summary["input"] = {{"path", cfg.input_path},
                        {"n_treated", run.n_treated},
                        {"n_control", run.n_control},
                        {"endpoints", run.endpoints}};
    nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < run.subsets.size(); ++s)
      outcomes.push_back(detail::json_subset(run.subsets[s], scores_for(run.subsets[s].keep)));
    summary["subsets"] = std::move(outcomes);

    const std::filesystem::path path = out_dir / "summary.json";
    std::ofstream os = detail::open_out(path);
    os << summary.dump(2) << "\n";
    run.summary_path = path.string();
    run.files.push_back(run.summary_path);
  }

  return run;
}

struct SimulationOutputs {
  std::string dataset_path;
  std::string metadata_path;
  SimulatedTrial trial;
  std::optional<TrueEstimands> truth;
};

inline SimulationOutputs run_simulation(const SimulationConfig& cfg) {
  SimulationOutputs out;
  out.trial = simulate_trial(cfg.scenario);
  if (cfg.truth_n_mc > 0) out.truth = true_estimands(cfg.scenario, cfg.truth_n_mc, cfg.truth_tau);

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dataset = out_dir / cfg.dataset_filename;
  write_dataset_csv(dataset.string(), out.trial.treated, out.trial.control);
  out.dataset_path = dataset.string();

  nlohmann::ordered_json meta;
  meta["tool"] = {{"name", library_name}, {"version", library_version}};
  const TrialScenario& sc = cfg.scenario;
  meta["scenario"] = {{"n_treated", sc.n_treated},
                      {"n_control", sc.n_control},
                      {"k_severity_states", sc.k_severity_states},
                      {"treated_rates", sc.treated_rates},
                      {"control_rates", sc.control_rates},
                      {"frailty_variance", sc.frailty_variance},
                      {"admin_censor_time", sc.admin_censor_time},
                      {"dropout_rate", sc.dropout_rate},
                      {"assessment_interval", sc.assessment_interval},
                      {"seed", sc.seed},
                      {"labels", out.trial.treated.state_space.labels}};
  meta["dataset"] = cfg.dataset_filename;
  auto tally = [](const auto& t) {
    return nlohmann::ordered_json{{"counts", t.counts}};
  };
  meta["tallies"] = {
      {"first_events",
       {{"treated", tally(out.trial.tallies.treated_first_events)},
        {"control", tally(out.trial.tallies.control_first_events)},
        {"treated_total", out.trial.tallies.treated_first_events.total_events},
        {"control_total", out.trial.tallies.control_first_events.total_events}}},
      {"worst_states",
       {{"treated", tally(out.trial.tallies.treated_worst_states)},
        {"control", tally(out.trial.tallies.control_worst_states)},
        {"treated_event_free", out.trial.tallies.treated_worst_states.censored},
        {"control_event_free", out.trial.tallies.control_worst_states.censored}}}};
  if (out.truth) {
    const TrueEstimands& t = *out.truth;
    meta["truth"] = {{"tau", t.tau},
                     {"n_mc", t.n_mc},
                     {"auc_treated", t.auc_treated},
                     {"auc_treated_se", t.auc_treated_se},
                     {"auc_control", t.auc_control},
                     {"auc_control_se", t.auc_control_se},
                     {"auc_ratio", t.auc_ratio},
                     {"auc_ratio_se", t.auc_ratio_se},
                     {"auc_difference", t.auc_difference},
                     {"auc_difference_se", t.auc_difference_se},
                     {"rmtif_stages", t.rmtif_stages},
                     {"rmtif_stage_ses", t.rmtif_stage_ses},
                     {"rmtif_overall", t.rmtif_overall},
                     {"rmtif_overall_se", t.rmtif_overall_se},
                     {"composite_hazard_ratio", t.composite_hazard_ratio},
                     {"composite_hr_exact", t.composite_hr_exact}};
  }

  const std::filesystem::path meta_path = out_dir / "simulation.json";
  std::ofstream os = detail::open_out(meta_path);
  os << meta.dump(2) << "\n";
  out.metadata_path = meta_path.string();
  return out;
}

}  // namespace msburden
