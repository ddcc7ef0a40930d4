#include "haarlib/runner.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>

#include "haarlib/report.hpp"
#include "haarlib/trees.hpp"

namespace haarlib {

namespace {

std::vector<std::string> groups_for(const RunConfig& cfg) {
  return cfg.group ? std::vector<std::string>{*cfg.group} : catalog_ids();
}

}  // namespace

std::vector<SuiteTask> plan(const RunConfig& cfg) {
  validate(cfg);
  const SuiteOptions opt = cfg.suite;
  const bool all = cfg.command == "all";
  std::vector<SuiteTask> tasks;

  using Suite = std::vector<CheckReport> (*)(std::string_view, const SuiteOptions&);
  const std::pair<const char*, Suite> group_suites[] = {
      {"catalog", catalog_suite}, {"invariance", invariance_suite}, {"modular", modular_suite}};
  for (const auto& [name, fn] : group_suites) {
    if (!all && cfg.command != name) continue;
    for (const auto& id : groups_for(cfg)) {
      tasks.push_back({std::string(name) + ":" + id, [fn = fn, id, opt] { return fn(id, opt); }});
    }
  }
  if (all || cfg.command == "weil") {
    const auto ids = cfg.instance ? std::vector<std::string>{*cfg.instance} : quotient_instances();
    for (const auto& id : ids) tasks.push_back({"weil:" + id, [id, opt] { return weil_suite(id, opt); }});
  }
  if (all || cfg.command == "lattice") tasks.push_back({"lattice", [opt] { return lattice_suite(opt); }});
  if (all || cfg.command == "tree") {
    std::vector<int> ds, rs;
    if (cfg.d) ds = {*cfg.d};
    else ds = {3, 4, 5, 6, 7, 8};
    if (cfg.radius) rs = {*cfg.radius};
    else rs = {1, 2, 3};
    for (int d : ds) {
      for (int r : rs) {
        if (TreeBall::expected_size(d, r) > 2'000'000) throw ConfigError("tree ball too large for this d and R");
        tasks.push_back({"tree:" + std::to_string(d) + "," + std::to_string(r),
                         [d, r, opt] { return tree_suite(d, r, opt); }});
      }
    }
  }
  return tasks;
}

std::vector<CheckReport> execute(const std::vector<SuiteTask>& tasks, int workers, std::uint64_t seed) {
  auto guarded = [](const SuiteTask& t, std::uint64_t seed) {
    try {
      return t.run();
    } catch (const std::exception& e) {
      CheckReport r;
      r.name = t.label + ".error";
      r.group = t.label;
      r.anchor = "suite-error";
      r.seed = seed;
      r.max_rel_deviation = std::numeric_limits<double>::infinity();
      r.fields = {{"error", e.what()}};
      r.decide();
      return std::vector<CheckReport>{r};
    }
  };
  std::vector<std::vector<CheckReport>> results(tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = guarded(tasks[i], seed);
  } else {
    // At most `workers` suites in flight; output order stays plan order.
    for (std::size_t start = 0; start < tasks.size(); start += static_cast<std::size_t>(workers)) {
      const std::size_t end = std::min(tasks.size(), start + static_cast<std::size_t>(workers));
      std::vector<std::future<std::vector<CheckReport>>> futures;
      for (std::size_t i = start; i < end; ++i)
        futures.push_back(std::async(std::launch::async, guarded, std::cref(tasks[i]), seed));
      for (std::size_t i = start; i < end; ++i) results[i] = futures[i - start].get();
    }
  }
  std::vector<CheckReport> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

int exit_status(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; }) ? 0 : 1;
}

int run(const RunConfig& cfg, std::ostream& out) {
  const auto tasks = plan(cfg);
  std::ofstream file;
  std::ostream* sink = &out;
  if (cfg.output) {
    file.open(*cfg.output);
    if (!file) throw ConfigError("cannot open output file '" + *cfg.output + "'");
    sink = &file;
  }
  const auto reports = execute(tasks, cfg.suite.workers, cfg.suite.seed);
  write_reports(*sink, reports);
  return exit_status(reports);
}

}  // namespace haarlib
