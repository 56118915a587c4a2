#include <doctest.h>

#include <regex>

#include "xprod/runner.hpp"

using namespace xprod;

namespace {

const char* kZ2Config = R"({
  "group": {"kind": "cyclic", "n": 2},
  "algebra": {"kind": "diagonal", "dim": 2},
  "action": {"kind": "permutation", "maps": {"1": [1, 0]}},
  "field": {"kind": "constant"},
  "tasks": ["nuclearity-module"],
  "seed": 42,
  "epsilon": 1e-9
})";

std::string strip_elapsed(std::string text) {
  static const std::regex elapsed("\\s*\"elapsed_ms\": [-+0-9.eE]+,?");
  return std::regex_replace(text, elapsed, "");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("the reference config parses") {
  RunConfig config = parse_config(kZ2Config);
  CHECK(config.group.kind == "cyclic");
  CHECK(config.group.n == 2);
  CHECK(config.seed == 42);
  CHECK(config.epsilon == 1e-9);
  CHECK(config.tasks == std::vector<std::string>{"nuclearity-module"});
}

TEST_CASE("a missing seed is a config error at /seed") {
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 2},
    "algebra": {"kind": "diagonal", "dim": 2},
    "action": {"kind": "trivial"},
    "tasks": ["structure"]
  })";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.pointer == "/seed");
  }
}

TEST_CASE("a wrong-length permutation is a config error at /action/maps") {
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 2},
    "algebra": {"kind": "diagonal", "dim": 2},
    "action": {"kind": "permutation", "maps": {"1": [1, 0, 2]}},
    "tasks": ["structure"],
    "seed": 1
  })";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.pointer == "/action/maps");
  }
}

TEST_CASE("unknown tasks and malformed JSON are config errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 2},
    "algebra": {"kind": "diagonal", "dim": 2},
    "action": {"kind": "trivial"},
    "tasks": ["no-such-task"],
    "seed": 1
  })";
  CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("defect-sweep demands a cyclic group") {
  const char* text = R"({
    "group": {"kind": "symmetric", "n": 3},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "tasks": ["defect-sweep"],
    "seed": 1
  })";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.pointer == "/group");
  }
}

TEST_CASE("the reference run passes with a tiny max error") {
  RunConfig config = parse_config(kZ2Config);
  RunReport report = run(config);
  CHECK(report.all_pass());
  bool found = false;
  for (const auto& r : report.records)
    if (r.task + "/" + r.check.name == "nuclearity-module/max-error") {
      found = true;
      CHECK(r.check.witness <= 1e-12);
    }
  CHECK(found);
}

TEST_CASE("a truncated field with epsilon 0.4 fails with max error 0.5") {
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 3},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "field": {"kind": "truncated", "support": ["0", "1"]},
    "tasks": ["nuclearity-module"],
    "seed": 7,
    "epsilon": 0.4
  })";
  RunReport report = run(parse_config(text));
  CHECK_FALSE(report.all_pass());
  for (const auto& r : report.records)
    if (r.check.name == "max-error") {
      CHECK_FALSE(r.check.pass);
      CHECK(r.check.witness == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("reports are byte-identical for a fixed config and seed") {
  RunConfig config = parse_config(kZ2Config);
  std::string first = strip_elapsed(run(config).to_json_text());
  std::string second = strip_elapsed(run(config).to_json_text());
  CHECK(first == second);
  CHECK(first.find("\"elapsed_ms\"") == std::string::npos);
}

TEST_CASE("parallel runs produce the same report") {
  RunConfig config = parse_config(kZ2Config);
  config.tasks = {"structure", "expectation", "trace-property"};
  config.state = RunConfig::StateSpec{"trace", {}};
  std::string serial = strip_elapsed(run(config).to_json_text());
  config.parallel = true;
  std::string parallel = strip_elapsed(run(config).to_json_text());
  CHECK(serial == parallel);
}

TEST_CASE("the defect sweep reproduces the hand values") {
  const char* text3 = R"({
    "group": {"kind": "cyclic", "n": 3},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "tasks": ["defect-sweep"],
    "seed": 2
  })";
  std::vector<SweepRow> rows = defect_sweep(parse_config(text3));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].k == 2);
  CHECK(rows[1].max_defect == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[1].max_error == doctest::Approx(0.5).epsilon(1e-10));

  const char* text4 = R"({
    "group": {"kind": "cyclic", "n": 4},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "tasks": ["defect-sweep"],
    "seed": 2
  })";
  std::vector<SweepRow> rows4 = defect_sweep(parse_config(text4));
  REQUIRE(rows4.size() == 4);
  CHECK(rows4[3].max_defect <= 1e-12);
  CHECK(rows4[3].max_error <= 1e-12);
  for (std::size_t k = 1; k < rows4.size(); ++k)
    CHECK(rows4[k].max_error <= rows4[k - 1].max_error + 1e-10);
}

TEST_CASE("the sweep renders as CSV") {
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 2},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "tasks": ["defect-sweep"],
    "seed": 2
  })";
  RunReport report = run(parse_config(text));
  std::string csv = report.sweep_to_csv();
  CHECK(csv.rfind("k,max_defect,max_error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("normalization task reports both numbers and the note") {
  const char* text = R"({
    "group": {"kind": "cyclic", "n": 3},
    "algebra": {"kind": "diagonal", "dim": 1},
    "action": {"kind": "trivial"},
    "field": {"kind": "constant"},
    "tasks": ["normalization"],
    "seed": 9
  })";
  RunReport report = run(parse_config(text));
  CHECK(report.all_pass());
  bool saw_note = false;
  for (const auto& note : report.notes)
    if (note.find("pre-factor") != std::string::npos) saw_note = true;
  CHECK(saw_note);
  std::string json = report.to_json_text();
  CHECK(json.find("error-with-pre-factor-at-unit") != std::string::npos);
  CHECK(json.find("error-without-pre-factor") != std::string::npos);
}

}  // TEST_SUITE
