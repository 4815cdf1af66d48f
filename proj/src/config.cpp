#include "trendboot/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace trendboot {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("setting '" + std::string(key) + "': expected a real number, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("setting '" + std::string(key) + "': expected a nonnegative integer, got '" +
                      s + "'");
  }
  return v;
}

std::vector<std::string> parse_word_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"dgp.preset",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.dgp_id = trim(v);
         c.dgp = DgpParams::preset(c.dgp_id, c.dgp.phi);
       }},
      {"dgp.phi", [](auto& c, auto k, auto v) { c.dgp.phi = parse_real(k, v); }},
      {"dgp.mu", [](auto& c, auto k, auto v) { c.dgp.mu = parse_real(k, v); }},
      {"dgp.a", [](auto& c, auto k, auto v) { c.dgp.a = parse_real(k, v); }},
      {"dgp.amplitude", [](auto& c, auto k, auto v) { c.dgp.amplitude = parse_real(k, v); }},
      {"dgp.period", [](auto& c, auto k, auto v) { c.dgp.period = parse_real(k, v); }},
      {"dgp.phase", [](auto& c, auto k, auto v) { c.dgp.phase = parse_real(k, v); }},
      {"dgp.shock_rate", [](auto& c, auto k, auto v) { c.dgp.shock_rate = parse_real(k, v); }},
      {"dgp.shock_scale", [](auto& c, auto k, auto v) { c.dgp.shock_scale = parse_real(k, v); }},
      {"dgp.sigma", [](auto& c, auto k, auto v) { c.dgp.sigma = parse_real(k, v); }},
      {"dgp.innovation",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         const auto s = trim(v);
         if (s == "gaussian") {
           c.dgp.innovation = InnovationKind::kGaussian;
         } else if (s == "t") {
           c.dgp.innovation = InnovationKind::kStandardizedT;
         } else {
           throw ConfigError("dgp.innovation must be 'gaussian' or 't', got '" + s + "'");
         }
       }},
      {"dgp.innovation_df", [](auto& c, auto k, auto v) { c.dgp.innovation_df = parse_real(k, v); }},
      {"engine.smoother",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.smoother = parse_smoother_kind(trim(v));
       }},
      {"engine.nu", [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.nu_grid = parse_real_list(v);
       }},
      {"engine.eta",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         // eta grid given directly; stored as the equivalent nu grid
         c.nu_grid.clear();
         for (double eta : parse_real_list(v)) {
           SmootherParams p;
           p.kind = c.smoother;
           p.eta = {eta, 0.0, 0.0};
           c.nu_grid.push_back(effective_sample_size(p));
         }
       }},
      {"engine.alpha", [](auto& c, auto k, auto v) { c.alpha = parse_real(k, v); }},
      {"engine.t0", [](auto& c, auto k, auto v) { c.t0 = parse_count(k, v); }},
      {"engine.t1", [](auto& c, auto k, auto v) { c.t1 = parse_count(k, v); }},
      {"engine.t2", [](auto& c, auto k, auto v) { c.t2 = parse_count(k, v); }},
      {"engine.b1",
       [](auto& c, auto k, auto v) { c.b1 = static_cast<std::uint32_t>(parse_count(k, v)); }},
      {"engine.b2",
       [](auto& c, auto k, auto v) { c.b2 = static_cast<std::uint32_t>(parse_count(k, v)); }},
      {"engine.chi", [](auto& c, auto k, auto v) { c.chi = parse_real(k, v); }},
      {"engine.transform",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.transform = parse_transform_kind(trim(v));
       }},
      {"engine.dof", [](auto& c, auto k, auto v) { c.dof = parse_real(k, v); }},
      {"baselines.ws_rho_mix", [](auto& c, auto k, auto v) { c.ws_rho_mix = parse_real(k, v); }},
      {"baselines.ws_variance_eta",
       [](auto& c, auto k, auto v) { c.ws_variance_eta = parse_real(k, v); }},
      {"experiment.methods",
       [](ExperimentConfig& c, std::string_view, std::string_view v) {
         c.methods = parse_word_list(v);
         for (const auto& m : c.methods) validate_method(m);
       }},
      {"experiment.replications",
       [](auto& c, auto k, auto v) { c.replications = parse_count(k, v); }},
      {"experiment.seed", [](auto& c, auto k, auto v) { c.seed = parse_count(k, v); }},
      {"experiment.threads",
       [](auto& c, auto k, auto v) { c.threads = static_cast<unsigned>(parse_count(k, v)); }},
      {"experiment.power_start", [](auto& c, auto k, auto v) { c.power_start = parse_count(k, v); }},
      {"experiment.output",
       [](ExperimentConfig& c, std::string_view, std::string_view v) { c.output = trim(v); }},
      {"experiment.power_output",
       [](ExperimentConfig& c, std::string_view, std::string_view v) { c.power_output = trim(v); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
    out.push_back(parse_real("list", piece));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::vector<Setting> read_settings(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::vector<Setting> out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError("config: key '" + section + "' must appear inside a [section]");
    }
    for (const auto& [key, value] : body) {
      out.emplace_back(section + "." + key, value.get_value<std::string>());
    }
  }
  return out;
}

std::vector<Setting> read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return read_settings(in);
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

ExperimentConfig build_experiment_config(const std::vector<Setting>& settings) {
  ExperimentConfig cfg;
  // preset (with its phi) first, then everything else in order
  for (const auto& [k, v] : settings) {
    if (k == "dgp.phi") apply_setting(cfg, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (k == "dgp.preset") apply_setting(cfg, k, v);
  }
  // the smoother kind must be known before an eta grid is converted
  for (const auto& [k, v] : settings) {
    if (k == "engine.smoother") apply_setting(cfg, k, v);
  }
  for (const auto& [k, v] : settings) {
    if (k != "dgp.preset" && k != "engine.smoother") apply_setting(cfg, k, v);
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> known_setting_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

}  // namespace trendboot
