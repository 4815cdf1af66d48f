// trendboot command-line interface: simulate, band, run, selftest.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trendboot/baselines.hpp"
#include "trendboot/config.hpp"
#include "trendboot/dgp.hpp"
#include "trendboot/engine.hpp"
#include "trendboot/harness.hpp"
#include "trendboot/selftest.hpp"
#include "trendboot/series_io.hpp"

namespace tb = trendboot;

namespace {

// Opens `path` for writing, or returns std::cout for "" / "-".
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw tb::ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::pair<std::string, std::string> split_setting(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw tb::ConfigError("setting '" + text + "' must have the form section.key=value");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

struct SimulateOptions {
  std::string preset = "stationary";
  double phi = 0.3;
  std::size_t n = 3500;
  std::uint64_t seed = 1;
  std::vector<std::string> settings;
  std::string output;
};

int run_simulate(const SimulateOptions& opt) {
  std::vector<tb::Setting> settings{{"dgp.phi", std::to_string(opt.phi)},
                                    {"dgp.preset", opt.preset}};
  for (const auto& s : opt.settings) {
    auto kv = split_setting(s);
    if (kv.first.rfind("dgp.", 0) != 0) {
      throw tb::ConfigError("simulate accepts dgp.* settings only, got '" + kv.first + "'");
    }
    settings.push_back(std::move(kv));
  }
  const auto cfg = tb::build_experiment_config(settings);
  const auto sim = tb::simulate(cfg.dgp, opt.n, opt.seed);
  OutputTarget out(opt.output);
  tb::write_series_csv(out.stream(), sim);
  return 0;
}

struct BandOptions {
  std::string input = "-";
  std::string output;
  std::string method = "ours";
  std::string smoother = "ewma";
  double nu = 0.0;
  double eta = 0.0;
  double alpha = 0.1;
  std::uint64_t t0 = 500;
  std::uint64_t t1 = 900;
  std::uint64_t t2 = 3500;
  std::uint32_t b1 = 40;
  std::uint32_t b2 = 160;
  double chi = tb::kDefaultChi;
  std::uint64_t seed = 1;
  std::string transform = "student_standard";
  double dof = 0.0;
  double ws_rho_mix = 0.0;
  std::string state_out;
};

int run_band(const BandOptions& opt) {
  tb::validate_method(opt.method);
  tb::EngineConfig cfg;
  cfg.smoother.kind = tb::parse_smoother_kind(opt.smoother);
  if (cfg.smoother.kind == tb::SmootherKind::kHoltWintersAdditive) {
    throw tb::ConfigError("band supports ewma and brown smoothing");
  }
  if ((opt.nu > 0.0) == (opt.eta > 0.0)) throw tb::ConfigError("give exactly one of --nu or --eta");
  cfg.smoother.eta = {opt.eta > 0.0 ? opt.eta : tb::eta_for_ess(cfg.smoother.kind, opt.nu), 0.0,
                      0.0};
  cfg.alpha = opt.alpha;
  cfg.t0 = opt.t0;
  cfg.t1 = opt.t1;
  cfg.t2 = opt.t2;
  cfg.b1 = opt.b1;
  cfg.b2 = opt.b2;
  cfg.chi = opt.chi;
  cfg.seed = opt.seed;
  cfg.transform = tb::parse_transform_kind(opt.transform);
  cfg.dof = opt.dof;
  if (opt.method == tb::kMethodIid) cfg = tb::iid_engine_config(cfg);
  cfg.validate();
  if (tb::chi_outside_theory(cfg.chi) && opt.method == tb::kMethodOurs) {
    std::cerr << "warning: chi = " << cfg.chi << " lies outside (0, 1/2)\n";
  }

  std::ifstream file;
  std::istream* in = &std::cin;
  if (opt.input != "-") {
    file.open(opt.input);
    if (!file) throw tb::ConfigError("cannot open input file '" + opt.input + "'");
    in = &file;
  }
  tb::SeriesReader reader(*in);
  OutputTarget out(opt.output);
  std::ostream& os = out.stream();
  os << "t,level,lo,hi\n";
  char buf[128];
  auto emit = [&](std::uint64_t t, double level, std::optional<double> hw) {
    if (hw) {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(t),
                    level, level - *hw, level + *hw);
    } else {
      std::snprintf(buf, sizeof buf, "%llu,%.17g,,\n", static_cast<unsigned long long>(t), level);
    }
    os << buf;
  };

  if (opt.method == tb::kMethodWs) {
    tb::AsympCsConfig ws;
    ws.alpha = cfg.alpha;
    ws.nu = tb::effective_sample_size(cfg.smoother);
    ws.rho_mix = opt.ws_rho_mix;
    ws.variance_eta = cfg.smoother.eta[0];
    tb::Smoother smoother(cfg.smoother);
    tb::AsympCs cs(ws);
    std::uint64_t t = 0;
    while (auto rec = reader.next()) {
      ++t;
      const double prev = smoother.level();
      const double level = smoother.update(rec->x);
      std::optional<double> hw;
      if (t >= 2) hw = cs.step(rec->x, prev);
      emit(t, level, hw);
    }
    return 0;
  }

  std::vector<double> warmup;
  warmup.reserve(cfg.t0);
  std::optional<tb::Engine> engine;
  if (cfg.t0 == 0) engine.emplace(cfg, warmup);
  while (auto rec = reader.next()) {
    if (!engine) {
      warmup.push_back(rec->x);
      if (warmup.size() == cfg.t0) engine.emplace(cfg, warmup);
      continue;
    }
    const auto step = engine->step(rec->x);
    emit(step.t, step.level, step.halfwidth);
  }
  if (!engine) {
    throw tb::DataError("input ended after " + std::to_string(warmup.size()) +
                        " observations, before the burn-in of t0 = " + std::to_string(cfg.t0));
  }
  if (!opt.state_out.empty()) {
    std::ofstream state(opt.state_out);
    if (!state) throw tb::ConfigError("cannot open state file '" + opt.state_out + "'");
    state << engine->snapshot();
  }
  return 0;
}

struct RunOptions {
  std::string config;
  std::vector<std::string> settings;
  std::string output;
  std::string power_output;
};

int run_run(const RunOptions& opt) {
  std::vector<tb::Setting> settings;
  if (!opt.config.empty()) settings = tb::read_settings_file(opt.config);
  for (const auto& s : opt.settings) settings.push_back(split_setting(s));
  auto cfg = tb::build_experiment_config(settings);
  if (!opt.output.empty()) cfg.output = opt.output;
  if (!opt.power_output.empty()) cfg.power_output = opt.power_output;
  if (tb::chi_outside_theory(cfg.chi)) {
    std::cerr << "warning: chi = " << cfg.chi << " lies outside (0, 1/2)\n";
  }
  const auto result = tb::run_experiment(cfg);
  OutputTarget out(cfg.output);
  tb::write_metrics_csv(out.stream(), result);
  if (!cfg.power_output.empty()) {
    OutputTarget power(cfg.power_output);
    tb::write_power_csv(power.stream(), result);
  }
  return 0;
}

int run_selftest(std::uint64_t seed) {
  int failures = 0;
  for (const auto& r : tb::run_selftest(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    if (!r.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online bootstrap confidence bands for exponential smoothers"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Emit a simulated series as t,x,m records");
  simulate->add_option("--preset", sim.preset, "stationary | trend_seasonal | trend_shocks")
      ->capture_default_str();
  simulate->add_option("--phi", sim.phi, "AR(1) coefficient")->capture_default_str();
  simulate->add_option("-n,--length", sim.n, "Number of observations")->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--set", sim.settings, "Override a dgp.* setting (key=value)");
  simulate->add_option("-o,--output", sim.output, "Output file (default stdout)");

  BandOptions band;
  auto* band_cmd = app.add_subcommand("band", "Stream a series through one method");
  band_cmd->add_option("-i,--input", band.input, "Input file, '-' for stdin")->capture_default_str();
  band_cmd->add_option("-o,--output", band.output, "Output file (default stdout)");
  band_cmd->add_option("--method", band.method, "ours | iid | ws")->capture_default_str();
  band_cmd->add_option("--smoother", band.smoother, "ewma | brown")->capture_default_str();
  band_cmd->add_option("--nu", band.nu, "Effective sample size");
  band_cmd->add_option("--eta", band.eta, "Smoothing parameter");
  band_cmd->add_option("--alpha", band.alpha)->capture_default_str();
  band_cmd->add_option("--t0", band.t0, "Burn-in length")->capture_default_str();
  band_cmd->add_option("--t1", band.t1, "End of the first calibration period")->capture_default_str();
  band_cmd->add_option("--t2", band.t2, "Last monitored time")->capture_default_str();
  band_cmd->add_option("--b1", band.b1, "Scale replicates")->capture_default_str();
  band_cmd->add_option("--b2", band.b2, "Calibration replicates")->capture_default_str();
  band_cmd->add_option("--chi", band.chi, "Multiplier persistence exponent")->capture_default_str();
  band_cmd->add_option("--seed", band.seed)->capture_default_str();
  band_cmd->add_option("--transform", band.transform, "student_standard | student | identity")->capture_default_str();
  band_cmd->add_option("--dof", band.dof, "Override the transform degrees of freedom");
  band_cmd->add_option("--ws-rho-mix", band.ws_rho_mix, "AsympCS mixture parameter");
  band_cmd->add_option("--state-out", band.state_out, "Write the final engine state here");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
  run_cmd->add_option("-c,--config", run.config, "Experiment config file");
  run_cmd->add_option("--set", run.settings, "Override a setting (section.key=value)");
  run_cmd->add_option("-o,--output", run.output, "Metrics CSV (default stdout)");
  run_cmd->add_option("--power-output", run.power_output, "Power curve CSV");

  std::uint64_t selftest_seed = 2024;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");
  selftest->add_option("--seed", selftest_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*band_cmd) return run_band(band);
    if (*run_cmd) return run_run(run);
    if (*selftest) return run_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
