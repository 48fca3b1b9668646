#include "mfc/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mfc::harness {

namespace {

std::string trimmed(std::string_view s) { return boost::algorithm::trim_copy(std::string(s)); }

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("invalid value for " + key + ": '" + value + "'");
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trimmed(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) bad_value(key, raw);
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& raw) {
  const std::string s = trimmed(raw);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) bad_value(key, raw);
  return v;
}

std::size_t to_size(const std::string& key, const std::string& raw) {
  return static_cast<std::size_t>(to_u64(key, raw));
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = boost::algorithm::to_lower_copy(trimmed(raw));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad_value(key, raw);
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(","));
  for (auto& p : parts) p = trimmed(p);
  if (parts.size() == 1 && parts.front().empty()) parts.clear();
  return parts;
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& raw, F convert) {
  std::vector<T> out;
  for (const auto& part : split_list(raw)) out.push_back(convert(key, part));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;
using SectionTable = std::map<std::string, Setter>;

std::map<std::string, SectionTable> build_tables() {
  std::map<std::string, SectionTable> t;

  auto& env = t["env"];
  env["name"] = [](auto& c, const auto&, const auto& v) { c.env.name = trimmed(v); };
  env["mu0"] = [](auto& c, const auto& k, const auto& v) { c.env.mu0 = to_list<double>(k, v, to_double); };
  env["q"] = [](auto& c, const auto& k, const auto& v) { c.env.firms.q = to_size(k, v); };
  env["alpha_r"] = [](auto& c, const auto& k, const auto& v) { c.env.firms.alpha_r = to_double(k, v); };
  env["beta_r"] = [](auto& c, const auto& k, const auto& v) { c.env.firms.beta_r = to_double(k, v); };
  env["lambda_r"] = [](auto& c, const auto& k, const auto& v) { c.env.firms.lambda_r = to_double(k, v); };
  env["lambda_c"] = [](auto& c, const auto& k, const auto& v) { c.env.firms.lambda_c = to_double(k, v); };
  env["sites"] = [](auto& c, const auto& k, const auto& v) { c.env.congestion.sites = to_size(k, v); };
  env["move_prob"] = [](auto& c, const auto& k, const auto& v) { c.env.congestion.move_prob = to_double(k, v); };
  env["crowding"] = [](auto& c, const auto& k, const auto& v) { c.env.congestion.crowding = to_double(k, v); };
  env["crowd_penalty"] = [](auto& c, const auto& k, const auto& v) {
    c.env.congestion.crowd_penalty = to_double(k, v);
  };
  env["move_cost"] = [](auto& c, const auto& k, const auto& v) { c.env.congestion.move_cost = to_double(k, v); };

  auto& solver = t["solver"];
  solver["eta1"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.eta1 = to_double(k, v); };
  solver["eta2"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.eta2 = to_double(k, v); };
  solver["alpha"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.alpha = to_double(k, v); };
  solver["J"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.outer_iters = to_size(k, v); };
  solver["L"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.inner_iters = to_size(k, v); };
  solver["gamma"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.gamma = to_double(k, v); };
  solver["zeta"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.zeta = to_double(k, v); };
  solver["lambda0"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.lambda0 = to_double(k, v); };
  solver["inner_batch"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.inner_batch = to_size(k, v); };
  solver["dual_batch"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.dual_batch = to_size(k, v); };
  solver["norm_bound"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.norm_bound = to_double(k, v); };
  solver["value_tol"] = [](auto& c, const auto& k, const auto& v) { c.solver.solver.value_tol = to_double(k, v); };
  solver["evaluate_iterates"] = [](auto& c, const auto& k, const auto& v) {
    c.solver.solver.evaluate_iterates = to_bool(k, v);
  };
  solver["tighten_with_bounds"] = [](auto& c, const auto& k, const auto& v) {
    c.solver.tighten_with_bounds = to_bool(k, v);
  };

  auto& eval = t["eval"];
  eval["n_grid"] = [](auto& c, const auto& k, const auto& v) { c.eval.n_grid = to_list<std::size_t>(k, v, to_size); };
  eval["episodes"] = [](auto& c, const auto& k, const auto& v) { c.eval.episodes = to_size(k, v); };
  eval["tol"] = [](auto& c, const auto& k, const auto& v) { c.eval.tol = to_double(k, v); };
  eval["seeds"] = [](auto& c, const auto&, const auto& v) { c.eval.seeds = parse_seed_list(v); };
  eval["fast_seeds"] = [](auto& c, const auto& k, const auto& v) { c.eval.fast_seeds = to_size(k, v); };

  auto& bounds = t["bounds"];
  bounds["n_agents"] = [](auto& c, const auto& k, const auto& v) { c.bounds.n_agents = to_size(k, v); };
  bounds["zeta0"] = [](auto& c, const auto& k, const auto& v) { c.bounds.zeta0 = to_double(k, v); };
  bounds["zeta1"] = [](auto& c, const auto& k, const auto& v) { c.bounds.zeta1 = to_double(k, v); };
  bounds["m_r"] = [](auto& c, const auto& k, const auto& v) { c.bounds.m_r = to_double(k, v); };
  bounds["m_c"] = [](auto& c, const auto& k, const auto& v) { c.bounds.m_c = to_double(k, v); };
  bounds["l_r"] = [](auto& c, const auto& k, const auto& v) { c.bounds.l_r = to_double(k, v); };
  bounds["l_c"] = [](auto& c, const auto& k, const auto& v) { c.bounds.l_c = to_double(k, v); };
  bounds["l_p"] = [](auto& c, const auto& k, const auto& v) { c.bounds.l_p = to_double(k, v); };
  bounds["l_q"] = [](auto& c, const auto& k, const auto& v) { c.bounds.l_q = to_double(k, v); };

  auto& inv = t["invariants"];
  inv["triples"] = [](auto& c, const auto& k, const auto& v) { c.invariants.triples = to_size(k, v); };
  inv["steps"] = [](auto& c, const auto& k, const auto& v) { c.invariants.steps = to_size(k, v); };
  inv["env_trials"] = [](auto& c, const auto& k, const auto& v) { c.invariants.env_trials = to_size(k, v); };
  inv["n_agents"] = [](auto& c, const auto& k, const auto& v) {
    c.invariants.n_agents = to_list<std::size_t>(k, v, to_size);
  };

  auto& out = t["output"];
  out["dir"] = [](auto& c, const auto&, const auto& v) { c.output.dir = trimmed(v); };
  out["checkpoint_stride"] = [](auto& c, const auto& k, const auto& v) { c.output.checkpoint_stride = to_size(k, v); };
  out["record_timing"] = [](auto& c, const auto& k, const auto& v) { c.output.record_timing = to_bool(k, v); };

  auto& run = t["run"];
  run["seed"] = [](auto& c, const auto& k, const auto& v) { c.master_seed = to_u64(k, v); };
  run["jobs"] = [](auto& c, const auto& k, const auto& v) { c.jobs = to_size(k, v); };
  return t;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  for (std::uint64_t s = 0; s < 25; ++s) eval.seeds.push_back(s);
}

void ExperimentConfig::validate() const {
  if (env.name != "firms" && env.name != "congestion") throw std::invalid_argument("unknown env: " + env.name);
  solver.solver.validate();
  if (eval.n_grid.empty()) throw std::invalid_argument("eval.n_grid must be nonempty");
  for (std::size_t i = 0; i < eval.n_grid.size(); ++i) {
    if (eval.n_grid[i] == 0) throw std::invalid_argument("eval.n_grid entries must be >= 1");
    if (i > 0 && eval.n_grid[i] <= eval.n_grid[i - 1]) throw std::invalid_argument("eval.n_grid must be ascending");
  }
  if (eval.seeds.empty()) throw std::invalid_argument("eval.seeds must be nonempty");
  if (eval.episodes == 0) throw std::invalid_argument("eval.episodes must be >= 1");
  if (!(eval.tol > 0.0)) throw std::invalid_argument("eval.tol must be positive");
  if (eval.fast_seeds == 0) throw std::invalid_argument("eval.fast_seeds must be >= 1");
  if (!(bounds.zeta0 < 0.0)) throw std::invalid_argument("bounds.zeta0 must be negative");
  if (bounds.n_agents == 0) throw std::invalid_argument("bounds.n_agents must be >= 1");
  if (jobs == 0) throw std::invalid_argument("jobs must be >= 1");
}

ExperimentConfig parse_config(std::string_view ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(ini_text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }

  static const auto tables = build_tables();
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto table = tables.find(section);
    if (table == tables.end()) throw std::invalid_argument("unknown config section: " + section);
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto setter = table->second.find(key);
      if (setter == table->second.end()) throw std::invalid_argument("unknown config key: " + full);
      setter->second(cfg, full, value.data());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split_list(std::string(text))) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(to_u64("eval.seeds", part));
      continue;
    }
    const auto lo = to_u64("eval.seeds", part.substr(0, dash));
    const auto hi = to_u64("eval.seeds", part.substr(dash + 1));
    if (hi < lo) bad_value("eval.seeds", part);
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw std::invalid_argument("eval.seeds must be nonempty");
  return seeds;
}

void apply_fast_mode(ExperimentConfig& cfg) {
  if (cfg.eval.seeds.size() > cfg.eval.fast_seeds) cfg.eval.seeds.resize(cfg.eval.fast_seeds);
}

EnvironmentSpec make_env(const ExperimentConfig& cfg) {
  if (cfg.env.name == "firms") return firms_env(cfg.env.firms);
  if (cfg.env.name == "congestion") return congestion_env(cfg.env.congestion);
  throw std::invalid_argument("unknown env: " + cfg.env.name);
}

StateDistribution initial_distribution(const ExperimentConfig& cfg) {
  const EnvironmentSpec env = make_env(cfg);
  if (cfg.env.mu0.empty()) return StateDistribution::uniform(env.n_states);
  if (cfg.env.mu0.size() != env.n_states) throw std::invalid_argument("env.mu0 has wrong length");
  return StateDistribution(cfg.env.mu0);
}

double policy_class_lipschitz(double norm_bound) { return norm_bound; }

BoundInputs bound_inputs(const ExperimentConfig& cfg, const EnvironmentSpec& env) {
  const auto& b = cfg.bounds;
  const auto& k = env.constants;
  BoundInputs in;
  in.m_r = b.m_r.value_or(k.m_r);
  in.m_c = b.m_c.value_or(k.m_c);
  in.l_r = b.l_r.value_or(k.l_r);
  in.l_c = b.l_c.value_or(k.l_c);
  in.l_p = b.l_p.value_or(k.l_p);
  in.l_q = b.l_q.value_or(policy_class_lipschitz(cfg.solver.solver.norm_bound));
  in.gamma = cfg.solver.solver.gamma;
  in.n_agents = b.n_agents;
  in.n_states = env.n_states;
  in.n_actions = env.n_actions;
  in.zeta0 = b.zeta0;
  in.zeta1 = b.zeta1;
  return in;
}

double effective_zeta(const ExperimentConfig& cfg, const EnvironmentSpec& env) {
  const double raw = cfg.solver.solver.zeta;
  if (!cfg.solver.tighten_with_bounds) return raw;
  return tightened_zeta(bound_inputs(cfg, env), TighteningMode::theorem3_solver, raw);
}

}  // namespace mfc::harness
