// Copyright 2026 The dpbandits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpbandits/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dpbandits/errors.hpp"
#include "dpbandits/harness.hpp"
#include "dpbandits/io.hpp"
#include "dpbandits/kernels.hpp"

namespace dpbandits::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", xs[i]);
    out += buf;
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i > 0 ? "," : "") + xs[i];
  return out;
}

// Two decimals at least, more only when needed: 0.70, 0.625.
std::string format_mean(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s = buf;
  if (s.back() == '0') s.pop_back();
  return s;
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

std::vector<std::int64_t> parse_checkpoints(const std::string& spec,
                                            std::int64_t horizon) {
  if (spec == "pow2") return pow2_checkpoints(horizon);
  if (spec == "all") return all_checkpoints(horizon);
  std::vector<std::int64_t> out;
  for (const std::string& item : split(spec, ',')) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("--checkpoints: expected pow2, all or a list of rounds, got '" +
                        spec + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string noise_name(NoiseMode mode) {
  return mode == NoiseMode::kLive ? "live" : "zeroed";
}

Manifest base_manifest(const std::string& command, const ExperimentConfig& config,
                       const std::string& checkpoints, int workers) {
  Manifest m;
  m["command"] = command;
  std::vector<double> means(config.environment.means().begin(),
                            config.environment.means().end());
  m["means"] = join_reals(means);
  m["algorithms"] = join(config.algorithms);
  m["epsilons"] = join_reals(config.epsilons);
  m["horizon"] = config.horizon();
  m["horizon_known"] = !config.anytime_only;
  m["repetitions"] = static_cast<std::int64_t>(config.repetitions);
  m["seed"] = std::to_string(config.master_seed);
  m["checkpoints"] = checkpoints;
  m["noise"] = noise_name(config.noise);
  m["workers"] = static_cast<std::int64_t>(workers);
  m["dpse_hoeffding_coef"] = config.dpse.hoeffding_coef;
  m["dpse_hoeffding_log_mult"] = config.dpse.hoeffding_log_mult;
  m["dpse_privacy_coef"] = config.dpse.privacy_coef;
  m["dpse_privacy_log_mult"] = config.dpse.privacy_log_mult;
  m["dpse_elimination_fraction"] = config.dpse.elimination_fraction;
  m["dpse_beta"] = config.dpse.beta ? format_real(*config.dpse.beta)
                                    : std::string("1/T");
  m["isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  return m;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

struct DpseFlags {
  std::optional<double> beta;
  double hoeffding_coef = DpseConstants{}.hoeffding_coef;
  double privacy_coef = DpseConstants{}.privacy_coef;
  double elimination_fraction = DpseConstants{}.elimination_fraction;

  DpseConstants constants() const {
    DpseConstants c;
    c.beta = beta;
    c.hoeffding_coef = hoeffding_coef;
    c.privacy_coef = privacy_coef;
    c.elimination_fraction = elimination_fraction;
    return c;
  }
};

void add_dpse_flags(CLI::App* cmd, DpseFlags& f) {
  cmd->add_option("--dpse-beta", f.beta, "DP-SE confidence parameter (default 1/T)");
  cmd->add_option("--dpse-hoeffding-coef", f.hoeffding_coef,
                  "DP-SE sampling-term coefficient");
  cmd->add_option("--dpse-privacy-coef", f.privacy_coef,
                  "DP-SE privacy-term coefficient");
  cmd->add_option("--dpse-elimination-fraction", f.elimination_fraction,
                  "DP-SE elimination margin as a fraction of the epoch gap");
}

struct RunFlags {
  std::string means;
  std::optional<int> setting;
  std::string algos = "anytime-lazy-ucb,hybrid-ucb,dp-se";
  std::string eps = join_reals(kDefaultEpsilons);
  std::optional<std::int64_t> horizon;
  int reps = kDefaultRepetitions;
  std::uint64_t seed = 0;
  std::string out = "out";
  int workers = 1;
  std::string checkpoints = "pow2";
  std::string noise = "live";
  DpseFlags dpse;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
  std::vector<double> means;
  std::string setting_label = "custom";
  if (!f.means.empty()) {
    means = parse_real_list(f.means);
  } else {
    const int id = f.setting.value_or(1);
    means = builtin_setting(id).means;
    setting_label = "setting " + std::to_string(id);
  }

  std::vector<std::string> algorithms;
  for (const std::string& a : split(f.algos, ',')) {
    algorithms.push_back(canonical_policy_name(a));
  }
  const bool horizon_given = f.horizon.has_value();
  for (const std::string& a : algorithms) {
    if (policy_needs_horizon(a) && !horizon_given) {
      throw ConfigError(a + " is not an anytime algorithm and needs --horizon T");
    }
  }
  const std::int64_t horizon = f.horizon.value_or(kDefaultHorizon);
  if (horizon < 1) throw ConfigError("--horizon must be positive");

  ExperimentConfig config;
  config.environment = EnvironmentSpec(means, horizon);
  config.algorithms = algorithms;
  config.epsilons = parse_real_list(f.eps);
  config.repetitions = f.reps;
  config.master_seed = f.seed;
  config.checkpoints = parse_checkpoints(f.checkpoints, horizon);
  config.dpse = f.dpse.constants();
  config.anytime_only = !horizon_given;
  if (f.noise == "live") {
    config.noise = NoiseMode::kLive;
  } else if (f.noise == "zeroed") {
    config.noise = NoiseMode::kZeroed;
  } else {
    throw ConfigError("--noise must be live or zeroed");
  }
  config.validate();

  const std::filesystem::path dir(f.out);
  ensure_dir(dir);
  const MatrixResult result = run_matrix(config, f.workers);
  write_traces(result.traces, dir / "traces.csv");
  write_summary(result.summary, dir / "summary.csv");
  Manifest manifest = base_manifest("run", config, f.checkpoints, f.workers);
  manifest["setting"] = setting_label;
  write_manifest(manifest, dir / "config.json");
  for (double eps : config.epsilons) {
    plot_regret_curves(result.summary, eps, dir / ("regret_eps" + eps_tag(eps) + ".svg"),
                       setting_label + ": regret with epsilon = " + eps_tag(eps));
  }
  plot_final_regret(result.summary, dir / "final_regret.svg",
                    setting_label + ": final regret");
  out << "wrote " << result.traces.size() << " traces to " << dir.string() << '\n';
  return kExitOk;
}

struct FigurePlan {
  std::string file;
  int setting;
  bool final;
  double epsilon;
};

std::vector<FigurePlan> figure_plans(const std::string& id) {
  const std::vector<FigurePlan> main = {
      {"figure1.svg", 1, false, 0.5},  {"figure2.svg", 1, false, 1.0},
      {"figure3.svg", 1, false, 8.0},  {"figure4.svg", 1, false, 64.0},
      {"figure5.svg", 1, true, 0.0},   {"figure6.svg", 2, false, 0.5},
      {"figure7.svg", 2, false, 8.0},  {"figure8.svg", 2, false, 64.0},
      {"figure9_eps0.1.svg", 1, false, 0.1},
      {"figure9_eps0.25.svg", 1, false, 0.25},
      {"figure9_eps128.svg", 1, false, 128.0},
  };
  if (id == "all") {
    std::vector<FigurePlan> plans = main;
    plans.push_back({"appendix_setting2_final.svg", 2, true, 0.0});
    for (double eps : {0.1, 0.25, 1.0, 128.0}) {
      plans.push_back({"appendix_setting2_eps" + eps_tag(eps) + ".svg", 2, false, eps});
    }
    plans.push_back({"appendix_setting3_final.svg", 3, true, 0.0});
    for (double eps : kDefaultEpsilons) {
      plans.push_back({"appendix_setting3_eps" + eps_tag(eps) + ".svg", 3, false, eps});
    }
    return plans;
  }
  int n = 0;
  const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), n);
  if (ec != std::errc() || ptr != id.data() + id.size() || n < 1 || n > 9) {
    throw ConfigError("--figure must be 1..9 or all, got '" + id + "'");
  }
  const std::string prefix = "figure" + std::to_string(n);
  std::vector<FigurePlan> plans;
  for (const FigurePlan& p : main) {
    if (p.file.rfind(prefix + ".", 0) == 0 || p.file.rfind(prefix + "_", 0) == 0) {
      plans.push_back(p);
    }
  }
  return plans;
}

struct ReproduceFlags {
  std::string figure;
  double scale = 1.0;
  int reps = kDefaultRepetitions;
  std::uint64_t seed = 0;
  std::string out = "out";
  int workers = 1;
  DpseFlags dpse;
};

int cmd_reproduce(const ReproduceFlags& f, std::ostream& out) {
  const std::vector<FigurePlan> plans = figure_plans(f.figure);
  if (!(f.scale >= 1.0)) throw ConfigError("--scale must be >= 1");
  const auto horizon = static_cast<std::int64_t>(
      std::floor(static_cast<double>(kDefaultHorizon) / f.scale));

  std::vector<int> settings;
  for (const FigurePlan& p : plans) {
    if (std::find(settings.begin(), settings.end(), p.setting) == settings.end()) {
      settings.push_back(p.setting);
    }
  }

  const std::filesystem::path dir(f.out);
  ensure_dir(dir);
  for (int setting : settings) {
    std::vector<double> eps;
    for (const FigurePlan& p : plans) {
      if (p.setting != setting) continue;
      if (p.final) {
        eps = kDefaultEpsilons;
        break;
      }
      if (std::find(eps.begin(), eps.end(), p.epsilon) == eps.end()) {
        eps.push_back(p.epsilon);
      }
    }
    std::sort(eps.begin(), eps.end());

    ExperimentConfig config;
    config.environment = EnvironmentSpec(builtin_setting(setting).means, horizon);
    config.algorithms = kReproducedAlgorithms;
    config.epsilons = eps;
    config.repetitions = f.reps;
    config.master_seed = f.seed;
    config.dpse = f.dpse.constants();
    config.validate();

    const MatrixResult result = run_matrix(config, f.workers);
    const std::filesystem::path sub = dir / ("setting" + std::to_string(setting));
    ensure_dir(sub);
    write_traces(result.traces, sub / "traces.csv");
    write_summary(result.summary, sub / "summary.csv");
    Manifest manifest = base_manifest("reproduce", config, "pow2", f.workers);
    manifest["setting"] = "setting " + std::to_string(setting);
    manifest["figure"] = f.figure;
    manifest["scale"] = f.scale;
    write_manifest(manifest, sub / "config.json");

    const std::string label = "Mean reward setting " + std::to_string(setting);
    for (const FigurePlan& p : plans) {
      if (p.setting != setting) continue;
      if (p.final) {
        plot_final_regret(result.summary, dir / p.file,
                          label + ": final regret, T = " + std::to_string(horizon));
      } else {
        plot_regret_curves(result.summary, p.epsilon, dir / p.file,
                           label + ": regret with epsilon = " + eps_tag(p.epsilon));
      }
      out << "wrote " << (dir / p.file).string() << '\n';
    }
  }
  return kExitOk;
}

int cmd_list_settings(std::ostream& out) {
  for (const MeanSetting& s : builtin_settings()) {
    out << "setting " << s.id << ": ";
    for (std::size_t i = 0; i < s.means.size(); ++i) {
      out << (i > 0 ? ", " : "") << format_mean(s.means[i]);
    }
    out << "  (" << s.description << ")\n";
  }
  out << "defaults: horizon " << kDefaultHorizon << ", repetitions "
      << kDefaultRepetitions << ", epsilons " << join_reals(kDefaultEpsilons)
      << ", dp-se beta 1/T\n";
  out << "algorithms: " << join(policy_names()) << '\n';
  return kExitOk;
}

void print_usage(const CLI::App& app, std::ostream& err) {
  const auto subs = app.get_subcommands();
  err << (subs.empty() ? app.help() : subs.front()->help());
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("expected a comma-separated list of numbers, got '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private stochastic bandit experiments", "dpbandits"};
  app.require_subcommand(1);

  const int default_workers =
      static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));

  RunFlags rf;
  rf.workers = default_workers;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment matrix");
  auto* means_opt = run_cmd->add_option("--means", rf.means, "comma-separated arm means");
  run_cmd->add_option("--setting", rf.setting, "built-in mean setting")
      ->check(CLI::Range(1, 3))
      ->excludes(means_opt);
  run_cmd->add_option("--algos", rf.algos, "comma-separated algorithm names");
  run_cmd->add_option("--eps", rf.eps, "comma-separated privacy budgets");
  run_cmd->add_option("--horizon", rf.horizon, "number of rounds T");
  run_cmd->add_option("--reps", rf.reps, "repetitions per cell")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", rf.seed, "master seed")->envname("DPBANDITS_SEED");
  run_cmd->add_option("--out", rf.out, "output directory");
  run_cmd->add_option("--workers", rf.workers, "worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--checkpoints", rf.checkpoints, "pow2, all, or a list of rounds");
  run_cmd->add_option("--noise", rf.noise, "live or zeroed");
  add_dpse_flags(run_cmd, rf.dpse);

  ReproduceFlags pf;
  pf.workers = default_workers;
  CLI::App* repro_cmd =
      app.add_subcommand("reproduce", "rerun the published experiment configurations");
  repro_cmd->add_option("--figure", pf.figure, "figure id 1..9 or all")->required();
  repro_cmd->add_option("--scale", pf.scale, "horizon divisor for quick runs");
  repro_cmd->add_option("--reps", pf.reps, "repetitions per cell")->check(CLI::PositiveNumber);
  repro_cmd->add_option("--seed", pf.seed, "master seed")->envname("DPBANDITS_SEED");
  repro_cmd->add_option("--out", pf.out, "output directory");
  repro_cmd->add_option("--workers", pf.workers, "worker threads")->check(CLI::PositiveNumber);
  add_dpse_flags(repro_cmd, pf.dpse);

  CLI::App* list_cmd =
      app.add_subcommand("list-settings", "print the built-in mean settings");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("dpbandits");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help()
                                          : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    print_usage(app, err);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(rf, out);
    if (*repro_cmd) return cmd_reproduce(pf, out);
    if (*list_cmd) return cmd_list_settings(out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace dpbandits::cli
