#include "pipeflow/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pipeflow {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view tok) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

const char* boundary_section(bool upstream) {
  return upstream ? "boundary_upstream" : "boundary_downstream";
}

std::optional<BoundaryKind> parse_boundary_kind(std::string_view v) {
  if (v == "head") return BoundaryKind::Head;
  if (v == "discharge") return BoundaryKind::Discharge;
  if (v == "wall") return BoundaryKind::Wall;
  return std::nullopt;
}

const char* boundary_kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Head: return "head";
    case BoundaryKind::Discharge: return "discharge";
    case BoundaryKind::Wall: return "wall";
  }
  return "wall";
}

}  // namespace

const char* friction_mode_name(FrictionMode mode) {
  switch (mode) {
    case FrictionMode::Upwinded: return "upwinded";
    case FrictionMode::CellCentered: return "centered";
    case FrictionMode::Off: return "off";
  }
  return "off";
}

std::optional<FrictionMode> parse_friction_mode(std::string_view text) {
  if (text == "upwinded") return FrictionMode::Upwinded;
  if (text == "centered") return FrictionMode::CellCentered;
  if (text == "off") return FrictionMode::Off;
  return std::nullopt;
}

std::string format_issue(const Issue& issue) {
  std::string out;
  if (issue.line > 0) out += "line " + std::to_string(issue.line) + ": ";
  out += issue.key;
  out += ": ";
  out += issue.message;
  return out;
}

ParseResult parse_scenario(std::string_view text) {
  ParseResult result;
  Scenario sc;
  std::vector<Issue>& issues = result.issues;
  std::set<std::string> seen;
  std::vector<std::pair<double, double>> up_points, down_points;

  auto add = [&](std::size_t line, std::string key, std::string msg) {
    issues.push_back({line, std::move(key), std::move(msg)});
  };

  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        add(line_no, std::string(line), "malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known{
          "run", "physics", "geometry", "initial",
          "boundary_upstream", "boundary_downstream", "output"};
      if (!known.count(section)) {
        add(line_no, section, "unknown section");
        section.clear();
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      add(line_no, std::string(line), "expected `key = value`");
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) {
      add(line_no, key, "key outside of any section");
      continue;
    }
    const std::string full_key = section + "." + key;
    seen.insert(full_key);

    auto number = [&](double& dst) {
      if (auto v = to_double(value)) {
        dst = *v;
        return true;
      }
      add(line_no, full_key, "expected a number, got `" + std::string(value) + "`");
      return false;
    };
    auto numbers = [&](std::size_t count, std::array<double, 3>& dst) {
      const auto toks = split_ws(value);
      if (toks.size() != count) {
        add(line_no, full_key,
            "expected " + std::to_string(count) + " numbers, got " + std::to_string(toks.size()));
        return false;
      }
      for (std::size_t i = 0; i < count; ++i) {
        if (auto v = to_double(toks[i])) {
          dst[i] = *v;
        } else {
          add(line_no, full_key, "expected a number, got `" + std::string(toks[i]) + "`");
          return false;
        }
      }
      return true;
    };

    std::array<double, 3> vals{};
    if (section == "run") {
      if (key == "name") {
        sc.name = std::string(value);
      } else if (key == "cells") {
        double v = 0;
        if (number(v)) {
          if (v < 1 || v != std::floor(v)) {
            add(line_no, full_key, "cell count must be a positive integer");
          } else {
            sc.n_cells = static_cast<std::size_t>(v);
          }
        }
      } else if (key == "cfl") {
        number(sc.cfl);
      } else if (key == "t_end") {
        number(sc.t_end);
      } else if (key == "gauge_interval") {
        number(sc.gauge_interval);
      } else {
        add(line_no, full_key, "unknown key");
      }
    } else if (section == "physics") {
      if (key == "gravity") {
        number(sc.constants.gravity);
      } else if (key == "sonic_speed") {
        number(sc.constants.sonic_speed);
      } else if (key == "strickler") {
        number(sc.constants.strickler);
      } else if (key == "rho0") {
        number(sc.constants.rho0);
      } else if (key == "friction") {
        if (auto m = parse_friction_mode(value)) {
          sc.friction = *m;
        } else {
          add(line_no, full_key, "expected upwinded | centered | off");
        }
      } else {
        add(line_no, full_key, "unknown key");
      }
    } else if (section == "geometry") {
      if (key == "sample") {
        if (numbers(3, vals)) sc.profile.push_back({vals[0], vals[1], vals[2]});
      } else {
        add(line_no, full_key, "unknown key");
      }
    } else if (section == "initial") {
      if (key == "still_water_head") {
        double v = 0;
        if (number(v)) sc.still_water_head = v;
      } else if (key == "cell") {
        if (numbers(3, vals)) {
          if (vals[2] != 0.0 && vals[2] != 1.0) {
            add(line_no, full_key, "regime flag must be 0 or 1");
          } else {
            sc.initial_cells.push_back(
                {vals[0], vals[1], vals[2] == 1.0 ? Regime::Pressurized : Regime::FreeSurface});
          }
        }
      } else {
        add(line_no, full_key, "unknown key");
      }
    } else if (section == "boundary_upstream" || section == "boundary_downstream") {
      const bool up = section == "boundary_upstream";
      BoundaryCondition& bc = up ? sc.upstream : sc.downstream;
      if (key == "kind") {
        if (auto k = parse_boundary_kind(value)) {
          bc.kind = *k;
        } else {
          add(line_no, full_key, "expected head | discharge | wall");
        }
      } else if (key == "point") {
        if (numbers(2, vals)) (up ? up_points : down_points).push_back({vals[0], vals[1]});
      } else {
        add(line_no, full_key, "unknown key");
      }
    } else if (section == "output") {
      if (key == "gauge") {
        double v = 0;
        if (number(v)) sc.gauges.push_back(v);
      } else if (key == "snapshot") {
        double v = 0;
        if (number(v)) sc.snapshot_times.push_back(v);
      } else if (key == "directory") {
        sc.out_dir = std::string(value);
      } else {
        add(line_no, full_key, "unknown key");
      }
    }
  }

  sc.upstream.series = TimeSeries(std::move(up_points));
  sc.downstream.series = TimeSeries(std::move(down_points));

  const std::array<const char*, 9> required{
      "run.cells",       "run.cfl",          "run.t_end",
      "physics.gravity", "physics.sonic_speed", "physics.strickler",
      "physics.friction", "boundary_upstream.kind", "boundary_downstream.kind"};
  for (const char* key : required) {
    if (!seen.count(key)) add(0, key, "required key missing");
  }
  if (!seen.count("geometry.sample")) add(0, "geometry.sample", "required key missing");
  if (!seen.count("initial.still_water_head") && !seen.count("initial.cell")) {
    add(0, "initial.still_water_head", "required key missing (or an initial.cell table)");
  }

  if (issues.empty()) {
    auto invariant_issues = validate_scenario(sc);
    issues.insert(issues.end(), invariant_issues.begin(), invariant_issues.end());
  }
  if (issues.empty()) result.scenario = std::move(sc);
  return result;
}

std::vector<Issue> validate_scenario(const Scenario& s) {
  std::vector<Issue> issues;
  auto add = [&](std::string key, std::string msg) {
    issues.push_back({0, std::move(key), std::move(msg)});
  };

  if (s.n_cells < 2) add("run.cells", "need at least 2 cells");
  if (!(s.cfl > 0.0 && s.cfl < 1.0)) add("run.cfl", "cfl must lie strictly in (0, 1)");
  if (!(s.t_end > 0.0)) add("run.t_end", "t_end must be positive");
  if (s.gauge_interval < 0.0) add("run.gauge_interval", "gauge interval cannot be negative");
  if (!(s.constants.gravity > 0.0)) add("physics.gravity", "must be positive");
  if (!(s.constants.sonic_speed > 0.0)) add("physics.sonic_speed", "must be positive");
  if (!(s.constants.strickler > 0.0)) add("physics.strickler", "must be positive");

  if (s.profile.size() < 2) {
    add("geometry.sample", "need at least 2 profile samples");
  } else {
    for (std::size_t i = 0; i + 1 < s.profile.size(); ++i) {
      if (!(s.profile[i + 1].x > s.profile[i].x)) {
        add("geometry.sample", "profile x positions must be strictly increasing");
        break;
      }
    }
    for (const auto& p : s.profile) {
      if (!(p.r > 0.0)) {
        add("geometry.sample", "profile radii must be positive");
        break;
      }
    }
  }

  if (s.still_water_head && !s.initial_cells.empty()) {
    add("initial", "give either still_water_head or a cell table, not both");
  }
  if (!s.still_water_head && s.initial_cells.empty()) {
    add("initial", "missing initial condition");
  }
  if (!s.initial_cells.empty() && s.n_cells >= 2 && s.initial_cells.size() != s.n_cells) {
    add("initial.cell", "cell table has " + std::to_string(s.initial_cells.size()) +
                            " rows but run.cells = " + std::to_string(s.n_cells));
  }
  for (const auto& c : s.initial_cells) {
    if (c.area < 0.0) {
      add("initial.cell", "areas must be nonnegative");
      break;
    }
  }

  auto check_bc = [&](const BoundaryCondition& bc, bool upstream) {
    const std::string key = std::string(boundary_section(upstream)) + ".point";
    if (bc.kind == BoundaryKind::Wall) return;
    if (bc.series.empty()) {
      add(key, "head/discharge boundaries need at least one time point");
      return;
    }
    const auto& pts = bc.series.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!(pts[i + 1].first > pts[i].first)) {
        add(key, "time points must be strictly increasing");
        return;
      }
    }
  };
  check_bc(s.upstream, true);
  check_bc(s.downstream, false);

  if (s.profile.size() >= 2) {
    const double x0 = s.profile.front().x;
    const double x1 = s.profile.back().x;
    for (double g : s.gauges) {
      if (g < x0 || g > x1) {
        add("output.gauge", "gauge at x = " + fmt(g) + " lies outside the pipe");
      }
    }
  }
  for (double t : s.snapshot_times) {
    if (t < 0.0) add("output.snapshot", "snapshot times cannot be negative");
  }
  if (s.out_dir.empty()) add("output.directory", "output directory cannot be empty");
  return issues;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[run]\n";
  out << "name = " << s.name << "\n";
  out << "cells = " << s.n_cells << "\n";
  out << "cfl = " << fmt(s.cfl) << "\n";
  out << "t_end = " << fmt(s.t_end) << "\n";
  if (s.gauge_interval > 0.0) out << "gauge_interval = " << fmt(s.gauge_interval) << "\n";
  out << "\n[physics]\n";
  out << "gravity = " << fmt(s.constants.gravity) << "\n";
  out << "sonic_speed = " << fmt(s.constants.sonic_speed) << "\n";
  out << "strickler = " << fmt(s.constants.strickler) << "\n";
  out << "friction = " << friction_mode_name(s.friction) << "\n";
  out << "\n[geometry]\n";
  for (const auto& p : s.profile) {
    out << "sample = " << fmt(p.x) << " " << fmt(p.z) << " " << fmt(p.r) << "\n";
  }
  out << "\n[initial]\n";
  if (s.still_water_head) {
    out << "still_water_head = " << fmt(*s.still_water_head) << "\n";
  }
  for (const auto& c : s.initial_cells) {
    out << "cell = " << fmt(c.area) << " " << fmt(c.discharge) << " "
        << (c.regime == Regime::Pressurized ? 1 : 0) << "\n";
  }
  auto emit_bc = [&](const BoundaryCondition& bc, bool upstream) {
    out << "\n[" << boundary_section(upstream) << "]\n";
    out << "kind = " << boundary_kind_name(bc.kind) << "\n";
    if (bc.kind != BoundaryKind::Wall) {
      for (const auto& [t, v] : bc.series.points()) {
        out << "point = " << fmt(t) << " " << fmt(v) << "\n";
      }
    }
  };
  emit_bc(s.upstream, true);
  emit_bc(s.downstream, false);
  out << "\n[output]\n";
  for (double g : s.gauges) out << "gauge = " << fmt(g) << "\n";
  for (double t : s.snapshot_times) out << "snapshot = " << fmt(t) << "\n";
  out << "directory = " << s.out_dir << "\n";
  return out.str();
}

PipeGeometry make_geometry(const Scenario& s) {
  return PipeGeometry::build(s.profile, s.n_cells);
}

SimulationState initial_state(const Scenario& s) {
  SimulationState st;
  st.geometry = make_geometry(s);
  const std::size_t n = s.n_cells;
  st.area.resize(n);
  st.discharge.resize(n);
  st.regime.resize(n);
  if (s.still_water_head) {
    for (std::size_t i = 0; i < n; ++i) {
      const CellState c = state_from_head(st.geometry.cell(i), *s.still_water_head, s.constants);
      st.area[i] = c.area;
      st.discharge[i] = 0.0;
      st.regime[i] = c.regime;
    }
  } else {
    if (s.initial_cells.size() != n) {
      throw std::invalid_argument("initial cell table does not match the cell count");
    }
    for (std::size_t i = 0; i < n; ++i) {
      st.area[i] = s.initial_cells[i].area;
      st.discharge[i] = s.initial_cells[i].discharge;
      st.regime[i] = s.initial_cells[i].regime;
    }
  }
  return st;
}

std::vector<Issue> apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  std::vector<Issue> issues;
  if (o.n_cells) {
    if (!s.initial_cells.empty() && *o.n_cells != s.n_cells) {
      issues.push_back({0, "run.cells",
                        "cannot override the cell count: the scenario pins an explicit "
                        "per-cell initial table"});
    } else {
      s.n_cells = *o.n_cells;
    }
  }
  if (o.cfl) s.cfl = *o.cfl;
  if (o.friction) s.friction = *o.friction;
  if (o.out_dir) s.out_dir = *o.out_dir;
  s.record_symmetry = s.record_symmetry || o.record_symmetry;
  auto invariant_issues = validate_scenario(s);
  issues.insert(issues.end(), invariant_issues.begin(), invariant_issues.end());
  return issues;
}

namespace {

constexpr const char* kExpandingPipe = R"(# Transient pressurization of an expanding circular pipe.
# A 5 m pipe (diameters 2 m -> 2.2 m, level axis at 1 m) starts half full and
# at rest. The upstream piezometric head ramps from 1 m to 3.2 m over 5 s
# while the downstream discharge is held at zero, so a pressurization front
# sweeps through and the pipe settles at a 3.2 m head with no flow.
[run]
name = expanding_pipe
cells = 100
cfl = 0.8
t_end = 100.0
gauge_interval = 0.05

[physics]
gravity = 9.81
sonic_speed = 20.0
strickler = 100.0
friction = off

[geometry]
sample = 0.0 1.0 1.0
sample = 5.0 1.0 1.1

[initial]
still_water_head = 1.0

[boundary_upstream]
kind = head
point = 0.0 1.0
point = 5.0 3.2

[boundary_downstream]
kind = discharge
point = 0.0 0.0

[output]
gauge = 0.5
gauge = 2.5
gauge = 4.5
snapshot = 5.0
snapshot = 100.0
directory = out/expanding_pipe
)";

std::string dam_break_text(double strickler, const char* name) {
  std::string out = R"(# Symmetric double surge in a uniform 100 m pipe (diameter 2 m, level axis
# at 1 m), starting half full and at rest. Both boundary heads ramp from 1 m
# to 2.1 m over 5 s, launching two mirror-image bores that meet in the middle;
# with upwinded friction the flow stays symmetric to machine precision.
[run]
name = )";
  out += name;
  out += R"(
cells = 100
cfl = 0.8
t_end = 60.0
gauge_interval = 0.1

[physics]
gravity = 9.81
sonic_speed = 20.0
strickler = )";
  out += fmt(strickler);
  out += R"(
friction = upwinded

[geometry]
sample = 0.0 1.0 1.0
sample = 100.0 1.0 1.0

[initial]
still_water_head = 1.0

[boundary_upstream]
kind = head
point = 0.0 1.0
point = 5.0 2.1

[boundary_downstream]
kind = head
point = 0.0 1.0
point = 5.0 2.1

[output]
gauge = 10.0
gauge = 50.0
gauge = 90.0
snapshot = 1.095
snapshot = 56.21
snapshot = 60.0
directory = out/)";
  out += name;
  out += "\n";
  return out;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"expanding_pipe", "double_dam_break_ks100", "double_dam_break_ks10"};
}

std::string builtin_scenario_text(std::string_view name) {
  if (name == "expanding_pipe") return kExpandingPipe;
  if (name == "double_dam_break_ks100") return dam_break_text(100.0, "double_dam_break_ks100");
  if (name == "double_dam_break_ks10") return dam_break_text(10.0, "double_dam_break_ks10");
  throw std::invalid_argument("unknown builtin scenario: " + std::string(name));
}

}  // namespace pipeflow
