#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "fracplate/hidden_regularity.hpp"
#include "fracplate/spectral_domain.hpp"

namespace fracplate::cli {

namespace {

enum class KeyType { Real, Int, Str, RealList, IntList, TolMap };

const std::map<std::string, KeyType>& key_types() {
  static const std::map<std::string, KeyType> t = {
      {"operation", KeyType::Str}, {"domain", KeyType::Str},     {"alpha", KeyType::Real},
      {"beta", KeyType::Real},     {"horizon", KeyType::Real},   {"gamma", KeyType::Real},
      {"grading", KeyType::Real},  {"tau", KeyType::Real},       {"count", KeyType::Int},
      {"z", KeyType::RealList},    {"times", KeyType::RealList}, {"modes", KeyType::IntList},
      {"nodes", KeyType::IntList}, {"data", KeyType::Str},       {"family", KeyType::Str},
      {"seed", KeyType::Int},      {"output", KeyType::Str},     {"tolerances", KeyType::TolMap},
  };
  return t;
}

const std::vector<std::string> kCommands = {"ml", "modes", "fracops", "solve", "identities", "probe", "report"};

double parse_real(const std::string& s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("--" + key + ": malformed number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("--" + key + ": expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::stringstream ss(r);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
  }
  return out;
}

// Flag strings to a JSON value of the key's type.
nlohmann::json flag_value(const std::string& key, const std::vector<std::string>& raw) {
  switch (key_types().at(key)) {
    case KeyType::Real:
      return parse_real(raw.back(), key);
    case KeyType::Int:
      return parse_uint(raw.back(), key);
    case KeyType::Str:
      return raw.back();
    case KeyType::RealList: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& s : split(raw)) a.push_back(parse_real(s, key));
      return a;
    }
    case KeyType::IntList: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& s : split(raw)) a.push_back(parse_uint(s, key));
      return a;
    }
    case KeyType::TolMap: {
      nlohmann::json o = nlohmann::json::object();
      for (const auto& s : raw) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects KEY=VALUE, got '" + s + "'");
        o[s.substr(0, eq)] = parse_real(s.substr(eq + 1), "tol");
      }
      return o;
    }
  }
  return nullptr;
}

double get_real(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError("config key '" + key + "' must be finite");
  return x;
}

std::uint64_t get_uint(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw UsageError("config key '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_str(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

template <class T, class F>
std::vector<T> get_list(const nlohmann::json& v, const std::string& key, F&& item) {
  if (!v.is_array()) throw UsageError("config key '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& x : v) out.push_back(static_cast<T>(item(x, key)));
  return out;
}

RunConfig defaults(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "ml") {
    c.operation = "eval";
    c.alpha = 1.5;
    c.beta = 1.0;
    c.z = {0.0};
  } else if (command == "fracops") {
    c.operation = "power-rule";
    c.beta = 0.5;
    c.nodes = {2048};
    c.grading = 2.0;
  } else if (command == "solve") {
    c.modes = {8};
    c.nodes = {2048};
    c.family = "decay:2";
  } else if (command == "identities") {
    c.modes = {8};
    c.nodes = {512, 1024, 2048};
  } else if (command == "probe") {
    c.family = "decay:1.5";
    c.modes = {16, 32, 64, 128, 256};
    c.nodes = {2048};
  }
  c.tolerances = default_tolerances(command);
  return c;
}

void validate(const RunConfig& c) {
  const auto need_alpha12 = [&]() {
    if (!(c.alpha > 1.0 && c.alpha < 2.0)) throw UsageError("alpha must lie in (1, 2)");
  };
  const auto need_domain = [&]() {
    try {
      (void)Domain::parse(c.domain);
    } catch (const std::exception& e) {
      throw UsageError(std::string("domain: ") + e.what());
    }
  };
  const auto need_horizon = [&]() {
    if (!(c.horizon > 0.0)) throw UsageError("horizon must be positive");
  };
  const auto need_list = [&](const std::vector<std::size_t>& v, const char* key, std::size_t min) {
    if (v.empty()) throw UsageError(std::string(key) + " must not be empty");
    for (std::size_t x : v) {
      if (x < min) throw UsageError(std::string(key) + " entries must be at least " + std::to_string(min));
    }
  };
  const auto need_family = [&](bool allow_single) {
    if (c.family.empty()) return;
    try {
      const auto f = FamilySpec::parse(c.family, c.seed);
      if (!allow_single && (f.kind == FamilySpec::Kind::SingleU0 || f.kind == FamilySpec::Kind::SingleU1)) {
        throw UsageError("family '" + c.family + "' is a sweep; use decay:P or worst:K:P here");
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  };
  const auto need_data = [&]() {
    if (!c.data.empty() && !std::filesystem::is_regular_file(c.data)) {
      throw UsageError("data file '" + c.data + "' not found");
    }
  };
  for (const auto& [k, v] : c.tolerances) {
    if (!default_tolerances(c.command).contains(k)) throw UsageError("unknown tolerance '" + k + "' for " + c.command);
    if (!std::isfinite(v)) throw UsageError("tolerance '" + k + "' must be finite");
  }

  if (c.command == "ml") {
    if (c.operation != "eval") throw UsageError("unknown ml operation '" + c.operation + "'");
    if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw UsageError("alpha must lie in (0, 2]");
    if (!(c.beta > 0.0)) throw UsageError("beta must be positive");
    if (c.z.empty()) throw UsageError("z must not be empty");
  } else if (c.command == "modes") {
    need_domain();
    if (c.count == 0) throw UsageError("count must be positive");
  } else if (c.command == "fracops") {
    if (c.operation != "power-rule") throw UsageError("unknown fracops operation '" + c.operation + "'");
    if (!(c.beta > 0.0 && c.beta <= 1.0)) throw UsageError("beta must lie in (0, 1]");
    if (!(c.gamma >= 0.0)) throw UsageError("gamma must be non-negative");
    if (!(c.grading >= 1.0)) throw UsageError("grading must be at least 1");
    need_horizon();
    need_list(c.nodes, "nodes", 1);
  } else if (c.command == "solve") {
    need_alpha12();
    need_domain();
    need_horizon();
    need_list(c.modes, "modes", 1);
    need_list(c.nodes, "nodes", 8);
    need_family(false);
    need_data();
    for (double t : c.times) {
      if (!(t >= 0.0 && t <= c.horizon)) throw UsageError("times must lie in [0, horizon]");
    }
  } else if (c.command == "identities") {
    need_alpha12();
    need_domain();
    need_horizon();
    if (!(c.beta > 0.0 && c.beta < 1.0)) throw UsageError("beta must lie in (0, 1)");
    need_list(c.modes, "modes", 1);
    need_list(c.nodes, "nodes", 8);
    need_family(false);
    need_data();
    if (!(c.tau >= 0.0 && c.tau <= c.horizon)) throw UsageError("tau must lie in [0, horizon]");
  } else if (c.command == "probe") {
    need_alpha12();
    need_domain();
    need_horizon();
    need_list(c.modes, "modes", 1);
    if (!std::is_sorted(c.modes.begin(), c.modes.end())) throw UsageError("modes schedule must increase");
    need_list(c.nodes, "nodes", 8);
    if (c.family.empty()) throw UsageError("probe needs a family");
    need_family(true);
  }
}

}  // namespace

const std::vector<std::string>& RunConfig::keys(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> k = {
      {"ml", {"operation", "alpha", "beta", "z", "output"}},
      {"modes", {"domain", "count", "output"}},
      {"fracops", {"operation", "beta", "gamma", "horizon", "nodes", "grading", "output", "tolerances"}},
      {"solve",
       {"domain", "alpha", "modes", "horizon", "data", "family", "seed", "nodes", "times", "output", "tolerances"}},
      {"identities",
       {"domain", "alpha", "beta", "modes", "horizon", "nodes", "data", "family", "seed", "tau", "output",
        "tolerances"}},
      {"probe", {"domain", "alpha", "horizon", "family", "modes", "seed", "nodes", "output", "tolerances"}},
      {"report", {"seed", "output"}},
  };
  const auto it = k.find(command);
  if (it == k.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

const std::map<std::string, double>& default_tolerances(const std::string& command) {
  static const std::map<std::string, std::map<std::string, double>> t = {
      {"ml", {}},
      {"modes", {}},
      {"fracops", {{"rel_error", 1e-6}}},
      {"solve", {{"mode_residual_max", 5e-3}}},
      {"identities", {{"relative", 1e-3}, {"relative2", 1e-3}}},
      {"probe", {{"growth_max", 1.25}}},
      {"report", {}},
  };
  const auto it = t.find(command);
  if (it == t.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  j["command"] = command;
  for (const auto& key : keys(command)) {
    if (key == "operation") j[key] = operation;
    if (key == "domain") j[key] = domain;
    if (key == "alpha") j[key] = alpha;
    if (key == "beta") j[key] = beta;
    if (key == "horizon") j[key] = horizon;
    if (key == "gamma") j[key] = gamma;
    if (key == "grading") j[key] = grading;
    if (key == "tau") j[key] = tau;
    if (key == "count") j[key] = count;
    if (key == "z") j[key] = z;
    if (key == "times") j[key] = times;
    if (key == "modes") j[key] = modes;
    if (key == "nodes") j[key] = nodes;
    if (key == "data") j[key] = data;
    if (key == "family") j[key] = family;
    if (key == "seed") j[key] = seed;
    if (key == "output") j[key] = output;
    if (key == "tolerances") j[key] = tolerances;
  }
  return j;
}

RunConfig RunConfig::from_json(const std::string& command, const nlohmann::json& j) {
  RunConfig c = defaults(command);
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  const auto& allowed = keys(command);
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      if (get_str(v, key) != command) throw UsageError("config is for '" + v.get<std::string>() + "', not " + command);
      continue;
    }
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("unknown config key '" + key + "' for " + command);
    }
    if (key == "operation") c.operation = get_str(v, key);
    if (key == "domain") c.domain = get_str(v, key);
    if (key == "alpha") c.alpha = get_real(v, key);
    if (key == "beta") c.beta = get_real(v, key);
    if (key == "horizon") c.horizon = get_real(v, key);
    if (key == "gamma") c.gamma = get_real(v, key);
    if (key == "grading") c.grading = get_real(v, key);
    if (key == "tau") c.tau = get_real(v, key);
    if (key == "count") c.count = static_cast<std::size_t>(get_uint(v, key));
    if (key == "z") c.z = get_list<double>(v, key, get_real);
    if (key == "times") c.times = get_list<double>(v, key, get_real);
    if (key == "modes") c.modes = get_list<std::size_t>(v, key, get_uint);
    if (key == "nodes") c.nodes = get_list<std::size_t>(v, key, get_uint);
    if (key == "data") c.data = get_str(v, key);
    if (key == "family") c.family = get_str(v, key);
    if (key == "seed") c.seed = get_uint(v, key);
    if (key == "output") c.output = get_str(v, key);
    if (key == "tolerances") {
      if (!v.is_object()) throw UsageError("config key 'tolerances' must be an object");
      for (const auto& [tk, tv] : v.items()) c.tolerances[tk] = get_real(tv, "tolerances." + tk);
    }
  }
  validate(c);
  return c;
}

RunConfig parse_config(int argc, const char* const* argv, std::string& help_text, bool& print_config) {
  CLI::App app{"Mittag-Leffler series solutions of the fractional hinged plate, with verification probes", "fracplate"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::vector<std::string>>> raw;
  std::map<std::string, std::string> config_path;
  print_config = false;

  const std::map<std::string, std::string> descriptions = {
      {"ml", "eval: E_{alpha,beta}(z); CSV z,value,est_abs_error,method"},
      {"modes", "list eigenpairs; CSV index,mu,lambda"},
      {"fracops", "fractional-operator checks (power-rule); CSV"},
      {"solve", "series solution, residuals and data classes; JSON"},
      {"identities", "filtered multiplier identities under refinement; CSV"},
      {"probe", "direct inequality probe; JSON"},
      {"report", "every acceptance suite in one JSON document"},
  };
  const std::map<std::string, std::string> flag_help = {
      {"operation", "operation name"},
      {"domain", "interval:L or rectangle:a,b (lengths may use pi)"},
      {"alpha", "fractional order"},
      {"beta", "second Mittag-Leffler parameter or R-L order"},
      {"horizon", "final time T"},
      {"gamma", "exponent of t in the power rule"},
      {"grading", "time-grid grading exponent"},
      {"tau", "second time for the differenced identity"},
      {"count", "number of modes"},
      {"z", "arguments, comma separated"},
      {"times", "output times, comma separated"},
      {"modes", "mode counts, comma separated"},
      {"nodes", "grid intervals, comma separated"},
      {"data", "JSON file with u0, u1 and optional class"},
      {"family", "single:u0, single:u1, decay:P or worst:K:P"},
      {"seed", "random seed"},
      {"output", "output file (default stdout)"},
      {"tolerances", "override a tolerance, KEY=VALUE"},
  };

  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd, descriptions.at(cmd));
    sub->add_option("--config", config_path[cmd], "JSON config file; flags override its values");
    sub->add_flag("--print-config", print_config, "print the resolved config and exit");
    for (const auto& key : RunConfig::keys(cmd)) {
      auto& slot = raw[cmd][key];
      if (key == "operation") {
        sub->add_option("operation", slot, flag_help.at(key))->expected(0, 1);
        continue;
      }
      const std::string flag = key == "tolerances" ? "--tol" : "--" + key;
      sub->add_option(flag, slot, flag_help.at(key))->take_all();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help_text = app.help();
    return {};
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (msg.empty()) msg = app.help();
    throw UsageError(msg);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  nlohmann::json merged = nlohmann::json::object();
  if (!config_path[cmd].empty()) {
    std::ifstream in(config_path[cmd]);
    if (!in) throw UsageError("cannot open config file '" + config_path[cmd] + "'");
    try {
      merged = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file '" + config_path[cmd] + "': " + e.what());
    }
    if (!merged.is_object()) throw UsageError("config must be a JSON object");
  }
  for (const auto& [key, values] : raw[cmd]) {
    if (values.empty()) continue;
    nlohmann::json v = flag_value(key, values);
    if (key == "tolerances" && merged.contains(key) && merged[key].is_object()) {
      for (const auto& [tk, tv] : v.items()) merged[key][tk] = tv;
    } else {
      merged[key] = std::move(v);
    }
  }
  return RunConfig::from_json(cmd, merged);
}

}  // namespace fracplate::cli
