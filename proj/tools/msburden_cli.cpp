#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "msburden/msburden.hpp"

// Command line front end. Three verbs:
//   analyze <config.json>   run the full analysis bundle described by a config
//   simulate <config.json>  draw a synthetic trial (optionally with its truth table)
//   validate <data.csv>     parse and validate a dataset, reporting what it holds
// Flags override the matching config fields; MSBURDEN_OUT sets the output
// directory when --out is absent.

namespace {

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("MSBURDEN_OUT");
  if (env != nullptr && *env != '\0') return env;
  return config_value;
}

void print_interval(const char* name, double est, double lo, double hi, double p) {
  std::cout << "  " << name << ": " << msburden::format_number(est) << " ("
            << msburden::format_number(lo) << ", " << msburden::format_number(hi)
            << "), p=" << msburden::format_number(p) << "\n";
}

int run_analyze(const std::string& config_path, double tau, double alpha, long boot, long long seed,
                const std::string& out_dir, bool tau_set, bool alpha_set, bool boot_set,
                bool seed_set) {
  msburden::AnalysisConfig cfg = msburden::load_analysis_config(config_path);
  if (tau_set) cfg.tau = tau;
  if (alpha_set) cfg.alpha = alpha;
  if (boot_set) cfg.bootstrap_replicates = static_cast<std::size_t>(boot);
  if (seed_set) cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.output_dir = resolve_out_dir(out_dir, cfg.output_dir);

  msburden::AnalysisRun run = msburden::run_analysis(cfg);
  std::cout << "analyzed " << cfg.input_path << " (" << run.n_treated << " treated, "
            << run.n_control << " control; tau=" << msburden::format_number(cfg.tau) << ")\n";
  for (const auto& s : run.subsets) {
    std::cout << "subset " << s.name << ":\n";
    if (!s.ok) {
      std::cout << "  failed: " << s.error << "\n";
      continue;
    }
    print_interval("hazard ratio", s.cox.hazard_ratio, s.cox.lower, s.cox.upper, s.cox.p);
    if (s.auc.ratio) {
      print_interval("burden auc ratio", s.auc.ratio->ratio, s.auc.ratio->lower,
                     s.auc.ratio->upper, s.auc.ratio->p);
    } else {
      std::cout << "  burden auc ratio: unavailable (" << s.auc.ratio_error << ")\n";
    }
    print_interval("burden auc difference", s.auc.difference.estimate, s.auc.difference.lower,
                   s.auc.difference.upper, s.auc.difference.p);
    print_interval("net time in favor", s.rmtif.overall.estimate, s.rmtif.overall.lower,
                   s.rmtif.overall.upper, s.rmtif.overall.p);
    std::cout << "  utility reduction: " << msburden::format_number(s.utility.reduction) << "\n";
  }
  std::cout << "wrote " << run.files.size() << " files under " << cfg.output_dir << "\n";
  return run.all_ok() ? 0 : 1;
}

int run_simulate(const std::string& config_path, double tau, long long seed,
                 const std::string& out_dir, bool tau_set, bool seed_set) {
  msburden::SimulationConfig cfg = msburden::load_simulation_config(config_path);
  if (seed_set) cfg.scenario.seed = static_cast<std::uint64_t>(seed);
  if (tau_set) cfg.truth_tau = tau;
  cfg.output_dir = resolve_out_dir(out_dir, cfg.output_dir);

  msburden::SimulationOutputs out = msburden::run_simulation(cfg);
  std::cout << "simulated " << out.trial.treated.size() << " treated and "
            << out.trial.control.size() << " control subjects (seed " << cfg.scenario.seed
            << ")\n";
  std::cout << "dataset: " << out.dataset_path << "\n";
  if (out.truth) {
    std::cout << "truth (n_mc=" << out.truth->n_mc
              << "): auc ratio " << msburden::format_number(out.truth->auc_ratio)
              << ", net time in favor " << msburden::format_number(out.truth->rmtif_overall)
              << ", composite hr " << msburden::format_number(out.truth->composite_hazard_ratio)
              << (out.truth->composite_hr_exact ? " (exact)" : " (rate ratio)") << "\n";
  }
  std::cout << "metadata: " << out.metadata_path << "\n";
  return 0;
}

int run_validate(const std::string& csv_path) {
  msburden::IngestResult data = msburden::ingest_csv(csv_path);
  std::cout << csv_path << ": valid\n";
  std::cout << "  treated: " << data.treated.size() << " subjects\n";
  std::cout << "  control: " << data.control.size() << " subjects\n";
  std::cout << "  endpoints:";
  for (const auto& l : data.treated.state_space.labels) std::cout << ' ' << l;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cumulative disease burden analysis for progressive multistate outcomes"};
  app.require_subcommand(1);

  std::string config_path, csv_path, out_dir;
  double tau = 0.0, alpha = 0.05;
  long boot = 1000;
  long long seed = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "run the analysis described by a JSON config");
  analyze->add_option("config", config_path, "analysis config (JSON)")->required();
  CLI::Option* a_tau = analyze->add_option("--tau", tau, "override the time horizon");
  CLI::Option* a_alpha = analyze->add_option("--alpha", alpha, "override the significance level");
  CLI::Option* a_boot = analyze->add_option("--boot", boot, "override the bootstrap replicate count");
  CLI::Option* a_seed = analyze->add_option("--seed", seed, "override the bootstrap seed");
  analyze->add_option("--out", out_dir, "output directory (overrides config and MSBURDEN_OUT)");

  CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic trial from a JSON config");
  simulate->add_option("config", config_path, "simulation config (JSON)")->required();
  CLI::Option* s_tau = simulate->add_option("--tau", tau, "override the truth-table horizon");
  CLI::Option* s_seed = simulate->add_option("--seed", seed, "override the scenario seed");
  simulate->add_option("--out", out_dir, "output directory (overrides config and MSBURDEN_OUT)");

  CLI::App* validate = app.add_subcommand("validate", "check a dataset CSV");
  validate->add_option("csv", csv_path, "dataset CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(config_path, tau, alpha, boot, seed, out_dir, a_tau->count() > 0,
                         a_alpha->count() > 0, a_boot->count() > 0, a_seed->count() > 0);
    if (app.got_subcommand(simulate))
      return run_simulate(config_path, tau, seed, out_dir, s_tau->count() > 0,
                          s_seed->count() > 0);
    return run_validate(csv_path);
  } catch (const msburden::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
