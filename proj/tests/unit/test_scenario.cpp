#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "pipeflow/output.hpp"
#include "pipeflow/run.hpp"
#include "pipeflow/scenario.hpp"

using namespace pipeflow;

namespace {

bool has_issue(const std::vector<Issue>& issues, std::string_view key) {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const Issue& i) { return i.key == key; });
}

bool scenarios_equal(const Scenario& a, const Scenario& b) {
  auto series_equal = [](const TimeSeries& x, const TimeSeries& y) {
    return x.points() == y.points();
  };
  if (a.n_cells != b.n_cells || a.cfl != b.cfl || a.t_end != b.t_end ||
      a.gauge_interval != b.gauge_interval || a.friction != b.friction ||
      a.out_dir != b.out_dir || a.name != b.name) {
    return false;
  }
  if (a.constants.gravity != b.constants.gravity ||
      a.constants.sonic_speed != b.constants.sonic_speed ||
      a.constants.strickler != b.constants.strickler) {
    return false;
  }
  if (a.profile.size() != b.profile.size()) return false;
  for (std::size_t i = 0; i < a.profile.size(); ++i) {
    if (a.profile[i].x != b.profile[i].x || a.profile[i].z != b.profile[i].z ||
        a.profile[i].r != b.profile[i].r) {
      return false;
    }
  }
  if (a.still_water_head.has_value() != b.still_water_head.has_value()) return false;
  if (a.still_water_head && *a.still_water_head != *b.still_water_head) return false;
  if (a.initial_cells.size() != b.initial_cells.size()) return false;
  for (std::size_t i = 0; i < a.initial_cells.size(); ++i) {
    if (a.initial_cells[i].area != b.initial_cells[i].area ||
        a.initial_cells[i].discharge != b.initial_cells[i].discharge ||
        a.initial_cells[i].regime != b.initial_cells[i].regime) {
      return false;
    }
  }
  return a.upstream.kind == b.upstream.kind && a.downstream.kind == b.downstream.kind &&
         series_equal(a.upstream.series, b.upstream.series) &&
         series_equal(a.downstream.series, b.downstream.series) && a.gauges == b.gauges &&
         a.snapshot_times == b.snapshot_times;
}

}  // namespace

TEST_CASE("empty document lists every required key") {
  const auto parsed = parse_scenario("");
  CHECK(!parsed.ok());
  for (const char* key :
       {"run.cells", "run.cfl", "run.t_end", "physics.gravity", "physics.sonic_speed",
        "physics.strickler", "physics.friction", "geometry.sample",
        "initial.still_water_head", "boundary_upstream.kind", "boundary_downstream.kind"}) {
    CHECK_MESSAGE(has_issue(parsed.issues, key), "missing issue for ", key);
  }
}

TEST_CASE("parse errors carry line and key context") {
  const std::string text = R"([run]
cells = twelve
cfl = 0.8
[bogus_section]
foo = 1
)";
  const auto parsed = parse_scenario(text);
  CHECK(!parsed.ok());
  bool found_line2 = false, found_section = false;
  for (const auto& issue : parsed.issues) {
    if (issue.key == "run.cells" && issue.line == 2) found_line2 = true;
    if (issue.key == "bogus_section" && issue.line == 4) found_section = true;
  }
  CHECK(found_line2);
  CHECK(found_section);
  CHECK(format_issue(parsed.issues.front()).find("line") != std::string::npos);
}

TEST_CASE("invariant violations are reported") {
  auto parsed = parse_scenario(builtin_scenario_text("expanding_pipe"));
  REQUIRE(parsed.ok());
  Scenario sc = *parsed.scenario;

  Scenario bad = sc;
  bad.cfl = 1.2;
  CHECK(has_issue(validate_scenario(bad), "run.cfl"));
  bad = sc;
  bad.n_cells = 1;
  CHECK(has_issue(validate_scenario(bad), "run.cells"));
  bad = sc;
  bad.t_end = 0.0;
  CHECK(has_issue(validate_scenario(bad), "run.t_end"));
  bad = sc;
  bad.profile[1].x = -1.0;
  CHECK(has_issue(validate_scenario(bad), "geometry.sample"));
  bad = sc;
  bad.gauges.push_back(99.0);
  CHECK(has_issue(validate_scenario(bad), "output.gauge"));
  bad = sc;
  bad.upstream.series = TimeSeries(std::vector<std::pair<double, double>>{});
  CHECK(has_issue(validate_scenario(bad), "boundary_upstream.point"));
}

TEST_CASE("bundled expanding-pipe scenario") {
  const auto parsed = parse_scenario(builtin_scenario_text("expanding_pipe"));
  REQUIRE(parsed.ok());
  const Scenario& sc = *parsed.scenario;
  CHECK(sc.name == "expanding_pipe");
  CHECK(sc.n_cells == 100);
  CHECK(sc.cfl == 0.8);
  CHECK(sc.constants.sonic_speed == 20.0);
  CHECK(sc.friction == FrictionMode::Off);
  REQUIRE(sc.profile.size() == 2);
  CHECK(sc.profile[0].r == 1.0);
  CHECK(sc.profile[1].r == 1.1);
  CHECK(sc.profile[1].x == 5.0);
  CHECK(sc.still_water_head == 1.0);
  CHECK(sc.upstream.kind == BoundaryKind::Head);
  CHECK(sc.upstream.series(0.0) == 1.0);
  CHECK(sc.upstream.series(2.5) == doctest::Approx(2.1));
  CHECK(sc.upstream.series(60.0) == 3.2);  // clamped after the ramp
  CHECK(sc.downstream.kind == BoundaryKind::Discharge);
  CHECK(sc.downstream.series(30.0) == 0.0);
  CHECK(std::find(sc.gauges.begin(), sc.gauges.end(), 0.5) != sc.gauges.end());
}

TEST_CASE("bundled double-surge scenarios") {
  for (const auto& [name, ks] :
       {std::pair<const char*, double>{"double_dam_break_ks100", 100.0},
        std::pair<const char*, double>{"double_dam_break_ks10", 10.0}}) {
    const auto parsed = parse_scenario(builtin_scenario_text(name));
    REQUIRE(parsed.ok());
    const Scenario& sc = *parsed.scenario;
    CHECK(sc.constants.strickler == ks);
    CHECK(sc.friction == FrictionMode::Upwinded);
    CHECK(sc.n_cells == 100);
    CHECK(sc.profile.back().x == 100.0);
    CHECK(sc.profile.back().r == 1.0);
    CHECK(sc.upstream.kind == BoundaryKind::Head);
    CHECK(sc.downstream.kind == BoundaryKind::Head);
    CHECK(sc.upstream.series(10.0) == 2.1);
    CHECK(sc.downstream.series(10.0) == 2.1);
  }
  CHECK_THROWS_AS(builtin_scenario_text("nope"), std::invalid_argument);
}

TEST_CASE("scenario round-trip through serialization") {
  for (const auto& name : builtin_scenario_names()) {
    const auto first = parse_scenario(builtin_scenario_text(name));
    REQUIRE(first.ok());
    const auto second = parse_scenario(serialize_scenario(*first.scenario));
    REQUIRE(second.ok());
    CHECK(scenarios_equal(*first.scenario, *second.scenario));
  }

  // Synthetic scenario exercising the remaining fields: explicit cell table,
  // wall boundary, gauge interval.
  Scenario sc;
  sc.name = "synthetic";
  sc.n_cells = 3;
  sc.cfl = 0.55;
  sc.t_end = 2.25;
  sc.gauge_interval = 0.125;
  sc.constants.sonic_speed = 17.5;
  sc.constants.strickler = 33.0;
  sc.friction = FrictionMode::CellCentered;
  sc.profile = {{0.0, 0.25, 0.5}, {2.0, 0.125, 0.625}};
  sc.initial_cells = {{0.25, 0.0, Regime::FreeSurface},
                      {0.5, -0.125, Regime::FreeSurface},
                      {1.0, 0.0625, Regime::Pressurized}};
  sc.upstream.kind = BoundaryKind::Wall;
  sc.downstream.kind = BoundaryKind::Discharge;
  sc.downstream.series = TimeSeries({{0.0, 0.0}, {1.0, 0.375}});
  sc.gauges = {0.5, 1.5};
  sc.snapshot_times = {1.0};
  sc.out_dir = "out/synthetic";
  const auto parsed = parse_scenario(serialize_scenario(sc));
  REQUIRE(parsed.ok());
  CHECK(scenarios_equal(sc, *parsed.scenario));
}

TEST_CASE("overrides") {
  auto parsed = parse_scenario(builtin_scenario_text("expanding_pipe"));
  REQUIRE(parsed.ok());
  Scenario sc = *parsed.scenario;

  ScenarioOverrides o;
  o.n_cells = 50;
  o.cfl = 0.5;
  o.friction = FrictionMode::CellCentered;
  o.record_symmetry = true;
  CHECK(apply_overrides(sc, o).empty());
  CHECK(sc.n_cells == 50);
  CHECK(sc.cfl == 0.5);
  CHECK(sc.friction == FrictionMode::CellCentered);
  CHECK(sc.record_symmetry);

  ScenarioOverrides bad;
  bad.cfl = 2.0;
  CHECK(has_issue(apply_overrides(sc, bad), "run.cfl"));

  Scenario pinned = *parsed.scenario;
  pinned.still_water_head.reset();
  pinned.initial_cells.assign(pinned.n_cells, CellState{1.0, 0.0, Regime::FreeSurface});
  ScenarioOverrides resize;
  resize.n_cells = 10;
  CHECK(has_issue(apply_overrides(pinned, resize), "run.cells"));
}

TEST_CASE("still-water initialization matches the head inversion") {
  auto parsed = parse_scenario(builtin_scenario_text("expanding_pipe"));
  REQUIRE(parsed.ok());
  const auto st = initial_state(*parsed.scenario);
  REQUIRE(st.n_cells() == 100);
  for (std::size_t i = 0; i < st.n_cells(); ++i) {
    const auto geo = st.geometry.cell(i);
    // Head 1 m on a 1 m axis: half-full everywhere.
    CHECK(st.area[i] == doctest::Approx(geo.s / 2.0).epsilon(1e-12));
    CHECK(st.discharge[i] == 0.0);
    CHECK(st.regime[i] == Regime::FreeSurface);
  }

  Scenario pressurized = *parsed.scenario;
  pressurized.still_water_head = 4.0;  // 3 m above the axis > Z + 2R
  const auto stp = initial_state(pressurized);
  for (std::size_t i = 0; i < stp.n_cells(); ++i) {
    CHECK(stp.regime[i] == Regime::Pressurized);
    CHECK(stp.area[i] > stp.geometry.cell(i).s);
  }
}

TEST_CASE("csv outputs are deterministic") {
  auto parsed = parse_scenario(builtin_scenario_text("expanding_pipe"));
  REQUIRE(parsed.ok());
  Scenario sc = *parsed.scenario;
  sc.t_end = 0.2;
  sc.snapshot_times = {0.1};
  sc.record_symmetry = true;

  const auto res1 = run(sc);
  const auto res2 = run(sc);

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "pipeflow_test_out";
  fs::remove_all(base);
  write_outputs(base / "a", sc, res1);
  write_outputs(base / "b", sc, res2);

  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  for (const char* rel : {"gauges/0.5.csv", "gauges/2.5.csv", "snapshots/0.1.csv",
                          "snapshots/0.2.csv", "symmetry.csv"}) {
    const std::string a = slurp(base / "a" / rel);
    CHECK_MESSAGE(a == slurp(base / "b" / rel), "mismatch in ", rel);
    CHECK(!a.empty());
  }
  const std::string gauge = slurp(base / "a" / "gauges/0.5.csv");
  CHECK(gauge.rfind("t,piezo,Q,A,E\n", 0) == 0);
  const std::string snap = slurp(base / "a" / "snapshots/0.1.csv");
  CHECK(snap.rfind("x,A,Q,E,piezo,level\n", 0) == 0);
  fs::remove_all(base);
}
