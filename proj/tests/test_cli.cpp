#include <doctest.h>

#include <json.hpp>
#include <limits>
#include <sstream>

#include "haarlib/config.hpp"
#include "haarlib/report.hpp"
#include "haarlib/runner.hpp"

using namespace haarlib;

namespace {

std::string run_to_string(const RunConfig& cfg, int* status = nullptr) {
  std::ostringstream out;
  const int s = run(cfg, out);
  if (status) *status = s;
  return out.str();
}

std::vector<nlohmann::json> lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("key value parsing") {
    const auto kv = parse_key_values(
        "# run settings\n"
        "seed = 42\n"
        "group = \"p\"   # trailing comment\n"
        "\n"
        "[quadrature]\n"
        "rel_tol = 1e-9\n"
        "[tolerances]\n"
        "weil = 2e-4\n");
    CHECK(kv.at("seed") == "42");
    CHECK(kv.at("group") == "p");
    CHECK(kv.at("quadrature.rel_tol") == "1e-9");
    CHECK(kv.at("tolerances.weil") == "2e-4");
    CHECK(parse_key_values("output = \"a#b\"\n").at("output") == "a#b");
    CHECK_THROWS_AS(parse_key_values("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("[quadrature\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("x = \"open\n"), ConfigError);
  }

  TEST_CASE("applying keys and precedence of defaults") {
    RunConfig cfg = default_config("7");
    CHECK(cfg.suite.seed == 7);
    CHECK(default_config(nullptr).suite.seed == 0);
    CHECK_THROWS_AS(default_config("seven"), ConfigError);

    apply_key_values(cfg, parse_key_values("seed = 9\nrel_tol = 1e-7\n[quadrature]\nbase_points = 12\n"));
    CHECK(cfg.suite.seed == 9);
    REQUIRE(cfg.suite.quadrature.rel_tol.has_value());
    CHECK(*cfg.suite.quadrature.rel_tol == 1e-7);
    CHECK(*cfg.suite.quadrature.base_points == 12);

    CHECK_THROWS_AS(apply_key_values(cfg, {{"colour", "blue"}}), ConfigError);
    CHECK_THROWS_AS(apply_key_values(cfg, {{"workers", "0"}}), ConfigError);
    CHECK_THROWS_AS(apply_key_values(cfg, {{"quadrature.rel_tol", "-1"}}), ConfigError);
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/haarlib.toml"), ConfigError);
  }

  TEST_CASE("seeds") {
    CHECK(parse_seed("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
    CHECK_THROWS_AS(parse_seed("-1"), ConfigError);
    CHECK_THROWS_AS(parse_seed("12x"), ConfigError);
    CHECK_THROWS_AS(parse_seed(""), ConfigError);
  }

  TEST_CASE("unknown identifiers are rejected before any computation") {
    RunConfig cfg;
    cfg.command = "invariance";
    cfg.group = "sl3";
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK_THROWS_AS(plan(cfg), ConfigError);
    std::ostringstream out;
    CHECK_THROWS_AS(run(cfg, out), ConfigError);
    CHECK(out.str().empty());

    cfg.group = "p";
    CHECK_NOTHROW(validate(cfg));
    cfg.command = "dance";
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    RunConfig w;
    w.command = "weil";
    w.instance = "sl3_so3";
    CHECK_THROWS_AS(validate(w), ConfigError);

    RunConfig t;
    t.command = "tree";
    t.d = 2;
    CHECK_THROWS_AS(validate(t), ConfigError);
    t.d = 3;
    t.radius = 0;
    CHECK_THROWS_AS(validate(t), ConfigError);
  }

  TEST_CASE("report lines") {
    CheckReport r;
    r.name = "left-invariance";
    r.group = "P";
    r.estimate = 1.5;
    r.reference = 1.5;
    r.max_rel_deviation = 0.0;
    r.tolerance = 1e-6;
    r.seed = 3;
    r.samples = 10;
    r.anchor = "left-invariance";
    r.decide();
    const std::string line = report_line(r);
    CHECK(line.find('\n') == std::string::npos);
    const auto j = nlohmann::ordered_json::parse(line);
    const std::vector<std::string> keys{"name",   "group", "estimate",  "reference", "deviation", "tolerance",
                                        "passed", "seed",  "paper_ref", "samples",   "expect_failure"};
    std::vector<std::string> got;
    for (const auto& [k, v] : j.items()) got.push_back(k);
    CHECK(got == keys);
    CHECK(j["passed"] == true);

    r.exact_estimate = "1/2";
    r.exact_reference = "1/2";
    r.max_rel_deviation = std::numeric_limits<double>::infinity();
    r.fields = {{"delta_t", "1/2"}};
    const auto e = nlohmann::ordered_json::parse(report_line(r));
    CHECK(e["estimate"] == "1/2");
    CHECK(e["reference"] == "1/2");
    CHECK(e["deviation"].is_null());
    CHECK(e["delta_t"] == "1/2");
  }

  TEST_CASE("tree command reports the exact modular value") {
    RunConfig cfg;
    cfg.command = "tree";
    cfg.d = 3;
    cfg.radius = 2;
    int status = -1;
    const auto recs = lines(run_to_string(cfg, &status));
    CHECK(status == 0);
    bool found = false;
    for (const auto& r : recs) {
      CHECK(r["passed"] == true);
      CHECK(r["paper_ref"].get<std::string>().size() > 0);
      if (r["name"] == "horospherical-modular") {
        CHECK(r["estimate"] == "1/2");
        CHECK(r["delta_t"] == "1/2");
        CHECK(r["aut_order"] == "48");
        found = true;
      }
    }
    CHECK(found);
  }

  TEST_CASE("failing suites become failing records") {
    std::vector<SuiteTask> tasks{{"ok", [] { return std::vector<CheckReport>{}; }},
                                 {"broken", []() -> std::vector<CheckReport> { throw DomainError("boom"); }}};
    const auto recs = execute(tasks, 2, 5);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].passed);
    CHECK(recs[0].name == "broken.error");
    CHECK(exit_status(recs) == 1);
    CHECK(exit_status({}) == 0);
  }

  TEST_CASE("reports are identical across worker counts") {
    for (const char* command : {"tree", "lattice", "catalog"}) {
      CAPTURE(command);
      RunConfig a;
      a.command = command;
      a.suite.seed = 11;
      if (std::string(command) == "catalog") a.group = "p";
      RunConfig b = a;
      b.suite.workers = 3;
      const std::string one = run_to_string(a), three = run_to_string(b);
      CHECK(!one.empty());
      CHECK(one == three);
    }
  }
}
