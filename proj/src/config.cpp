#include "haarlib/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "haarlib/trees.hpp"

namespace haarlib {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  return v;
}

double parse_positive(std::string_view key, std::string_view text) {
  const double v = parse_number<double>(key, text);
  if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  return v;
}

int parse_int_at_least(std::string_view key, std::string_view text, int lo) {
  const int v = parse_number<int>(key, text);
  if (v < lo) throw ConfigError(std::string(key) + " must be >= " + std::to_string(lo));
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s{
      {"seed", [](RunConfig& c, const std::string& v) { c.suite.seed = parse_seed(v); }},
      {"workers", [](RunConfig& c, const std::string& v) { c.suite.workers = parse_int_at_least("workers", v, 1); }},
      {"translates",
       [](RunConfig& c, const std::string& v) { c.suite.translates = parse_int_at_least("translates", v, 1); }},
      {"group", [](RunConfig& c, const std::string& v) { c.group = v; }},
      {"instance", [](RunConfig& c, const std::string& v) { c.instance = v; }},
      {"output", [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"d", [](RunConfig& c, const std::string& v) { c.d = parse_number<int>("d", v); }},
      {"R", [](RunConfig& c, const std::string& v) { c.radius = parse_number<int>("R", v); }},
      {"quadrature.base_points",
       [](RunConfig& c, const std::string& v) { c.suite.quadrature.base_points = parse_int_at_least("base_points", v, 4); }},
      {"quadrature.max_refinements",
       [](RunConfig& c, const std::string& v) {
         c.suite.quadrature.max_refinements = parse_int_at_least("max_refinements", v, 0);
       }},
      {"quadrature.rel_tol",
       [](RunConfig& c, const std::string& v) { c.suite.quadrature.rel_tol = parse_positive("rel_tol", v); }},
      {"quadrature.mc_samples",
       [](RunConfig& c, const std::string& v) { c.suite.quadrature.mc_samples = parse_int_at_least("mc_samples", v, 2); }},
      {"tolerances.invariance",
       [](RunConfig& c, const std::string& v) { c.suite.invariance_tol = parse_positive("invariance", v); }},
      {"tolerances.modular",
       [](RunConfig& c, const std::string& v) { c.suite.modular_tol = parse_positive("modular", v); }},
      {"tolerances.weil", [](RunConfig& c, const std::string& v) { c.suite.weil_tol = parse_positive("weil", v); }},
  };
  return s;
}

// Bare keys resolve to the sectioned name when unambiguous.
const Setter& find_setter(const std::string& key) {
  const auto& s = setters();
  if (auto it = s.find(key); it != s.end()) return it->second;
  for (const char* section : {"quadrature.", "tolerances."}) {
    if (auto it = s.find(section + key); it != s.end()) return it->second;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

std::uint64_t parse_seed(std::string_view text) { return parse_number<std::uint64_t>("seed", trim(text)); }

RunConfig default_config(const char* env_seed) {
  RunConfig cfg;
  if (env_seed != nullptr && *env_seed != '\0') cfg.suite.seed = parse_seed(env_seed);
  return cfg;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = " on config line " + std::to_string(line_no);
    std::string_view line = trim(raw);
    bool quoted = false;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    line = trim(line.substr(0, cut));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError("bad section header" + where);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value" + where);
    const std::string key = std::string(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key" + where);
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') throw ConfigError("unterminated string" + where);
      value = value.substr(1, value.size() - 2);
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) throw ConfigError("duplicate key '" + full + "'" + where);
    out.emplace(full, std::string(value));
  }
  return out;
}

void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) find_setter(k)(cfg, v);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  apply_key_values(cfg, parse_key_values(text.str()));
}

void validate(const RunConfig& cfg) {
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  if (cfg.group) parse_group_id(*cfg.group);
  if (cfg.instance) check_quotient_instance(*cfg.instance);
  if (cfg.d && (*cfg.d < 3 || *cfg.d > kMaxTreeDegree)) throw ConfigError("tree degree d must lie in [3, 36]");
  if (cfg.radius && *cfg.radius < 1) throw ConfigError("tree radius R must be >= 1");
  if (cfg.d && cfg.radius && TreeBall::expected_size(*cfg.d, *cfg.radius) > 2'000'000)
    throw ConfigError("tree ball too large for this d and R");
  cfg.suite.quadrature.apply(QuadratureSpec{});
}

}  // namespace haarlib
