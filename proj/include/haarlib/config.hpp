#pragma once

// Run configuration: built-in defaults, the HAARLIB_SEED environment
// variable, a key = value file and command line flags, in that order.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "haarlib/suites.hpp"

namespace haarlib {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"catalog", "invariance", "modular", "weil", "lattice", "tree", "all"};
  return c;
}

struct RunConfig {
  std::string command;
  std::optional<std::string> group;
  std::optional<std::string> instance;
  std::optional<std::string> output;
  std::optional<int> d;
  std::optional<int> radius;
  SuiteOptions suite;
};

/// Defaults plus HAARLIB_SEED when set. Throws ConfigError on a bad value.
RunConfig default_config(const char* env_seed);

/// Parses "key = value" lines. "# ..." starts a comment, "[name]" prefixes
/// the following keys with "name.", values may be double-quoted.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies parsed keys; unknown keys and malformed values throw ConfigError.
void apply_key_values(RunConfig& cfg, const std::map<std::string, std::string>& kv);

/// Reads and applies a config file.
void apply_config_file(RunConfig& cfg, const std::string& path);

std::uint64_t parse_seed(std::string_view text);

/// Rejects unknown commands, group ids, instances and tree sizes.
void validate(const RunConfig& cfg);

}  // namespace haarlib
