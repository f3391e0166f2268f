#include "functorad/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "functorad/errors.hpp"
#include "functorad/expression.hpp"
#include "functorad/newton.hpp"

namespace functorad::scenario {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& numeric_keys() {
  static const std::set<std::string> keys{"G",    "m1",       "m2",  "dt",  "t_end",
                                          "seed", "min_radius", "grid", "max_iter", "tol",
                                          "clock_half_width"};
  return keys;
}

bool is_gravity(Preset p) { return p == Preset::GravityCircular || p == Preset::GravityElliptic; }

std::size_t state_dim(Preset p) {
  switch (p) {
    case Preset::GravityCircular:
    case Preset::GravityElliptic: return 6;
    case Preset::TwoBody: return 12;
    case Preset::LinearField:
    case Preset::Clock: return 1;
    case Preset::Custom: return 0;
  }
  return 0;
}

double parse_number(const std::string& text, const std::string& field, std::size_t line) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError(field, line, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) throw ParseError(field, line, "value must be finite");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& field,
                               std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, field, line));
  if (out.empty()) throw ParseError(field, line, "empty list");
  return out;
}

// Period of a bound Kepler orbit, or nullopt if the orbit is not bound.
std::optional<double> kepler_period(double mu, const std::vector<double>& s) {
  const double r = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  const double v2 = s[3] * s[3] + s[4] * s[4] + s[5] * s[5];
  const double inv_a = 2.0 / r - v2 / mu;
  if (!(inv_a > 0.0)) return std::nullopt;
  const double a = 1.0 / inv_a;
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / mu);
}

struct Raw {
  std::map<std::string, std::pair<std::string, std::size_t>> entries;  // "section.key" -> (value, line)
};

void set_default(std::map<std::string, double>& params, const std::string& key, double value) {
  params.emplace(key, value);
}

}  // namespace

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::GravityCircular: return "gravity-circular";
    case Preset::GravityElliptic: return "gravity-elliptic";
    case Preset::TwoBody: return "two-body";
    case Preset::LinearField: return "linear-field";
    case Preset::Clock: return "clock";
    case Preset::Custom: return "custom";
  }
  return "?";
}

Preset preset_from_name(std::string_view name) {
  for (const auto& info : presets())
    if (name == preset_name(info.preset)) return info.preset;
  throw ParseError("scenario.preset", 0, "unknown preset '" + std::string(name) + "'");
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> all{
      {Preset::GravityCircular, "test mass on a circular orbit around a fixed unit source (6-dim)"},
      {Preset::GravityElliptic, "test mass on an eccentric bound orbit, one period by default (6-dim)"},
      {Preset::TwoBody, "two bodies under mutual gravity, state (r1,v1,r2,v2) (12-dim)"},
      {Preset::LinearField, "x' = x from x(0) = 1 (1-dim)"},
      {Preset::Clock, "unit-rate clock t' = 1 (1-dim)"},
      {Preset::Custom, "user field from [field] expr on R^n, n = length of [initial] state"},
  };
  return all;
}

double ScenarioConfig::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ContractError("scenario parameter '" + key + "' not set");
  return it->second;
}

ScenarioConfig parse_config(std::string_view text) {
  Raw raw;
  std::string section;
  std::size_t line_no = 0;
  std::stringstream in{std::string(text)};
  std::string line;
  static const std::set<std::string> sections{"scenario", "params", "field", "initial"};
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("", line_no, "malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!sections.count(section)) throw ParseError(section, line_no, "unknown section");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("", line_no, "expected key = value");
    if (section.empty()) throw ParseError("", line_no, "key outside any section");
    const std::string key = trim(body.substr(0, eq));
    const std::string field = section + "." + key;
    const std::string value = trim(body.substr(eq + 1));
    if (!raw.entries.emplace(field, std::make_pair(value, line_no)).second)
      throw ParseError(field, line_no, "duplicate key");
  }

  ScenarioConfig cfg;
  auto take = [&](const std::string& field) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = raw.entries.find(field);
    if (it == raw.entries.end()) return std::nullopt;
    auto v = it->second;
    raw.entries.erase(it);
    return v;
  };

  const auto preset = take("scenario.preset");
  if (!preset) throw ParseError("scenario.preset", 0, "missing");
  try {
    cfg.preset = preset_from_name(preset->first);
  } catch (const ParseError&) {
    throw ParseError("scenario.preset", preset->second, "unknown preset '" + preset->first + "'");
  }
  const auto name = take("scenario.name");
  cfg.name = name ? name->first : preset_name(cfg.preset);

  std::map<std::string, std::size_t> lines;
  if (const auto method = take("params.method")) {
    if (method->first == "rk4") cfg.method = Method::Rk4;
    else if (method->first == "picard") cfg.method = Method::Picard;
    else throw ParseError("params.method", method->second, "expected rk4 or picard");
  }
  for (const auto& key : numeric_keys()) {
    if (const auto v = take("params." + key)) {
      cfg.params[key] = parse_number(v->first, "params." + key, v->second);
      lines[key] = v->second;
    }
  }
  if (const auto expr = take("field.expr")) cfg.custom_field = expr->first;
  std::size_t state_line = 0;
  if (const auto st = take("initial.state")) {
    cfg.initial_state = parse_list(st->first, "initial.state", st->second);
    state_line = st->second;
  }
  if (!raw.entries.empty()) {
    const auto& [field, val] = *raw.entries.begin();
    throw ParseError(field, val.second, "unknown key");
  }

  // Defaults.
  auto& p = cfg.params;
  set_default(p, "dt", 1e-3);
  set_default(p, "seed", 0.0);
  if (cfg.method == Method::Picard) {
    set_default(p, "grid", 256.0);
    set_default(p, "max_iter", 200.0);
    set_default(p, "tol", 1e-12);
  }
  switch (cfg.preset) {
    case Preset::GravityCircular:
    case Preset::GravityElliptic:
    case Preset::TwoBody:
      set_default(p, "G", 1.0);
      set_default(p, "m1", 1.0);
      set_default(p, "m2", 1.0);
      set_default(p, "min_radius", 1e-9);
      break;
    case Preset::Clock:
      set_default(p, "clock_half_width", 10.0);
      break;
    default:
      break;
  }
  if (cfg.initial_state.empty()) {
    switch (cfg.preset) {
      case Preset::GravityCircular: cfg.initial_state = {1, 0, 0, 0, 1, 0}; break;
      case Preset::GravityElliptic: cfg.initial_state = {1, 0, 0, 0, 1.2, 0}; break;
      case Preset::TwoBody: {
        const double v = std::sqrt(0.5);
        cfg.initial_state = {-0.5, 0, 0, 0, -v, 0, 0.5, 0, 0, 0, v, 0};
        break;
      }
      case Preset::LinearField: cfg.initial_state = {1.0}; break;
      case Preset::Clock: cfg.initial_state = {0.0}; break;
      case Preset::Custom: throw ParseError("initial.state", 0, "required for the custom preset");
    }
  }
  if (!p.count("t_end")) {
    switch (cfg.preset) {
      case Preset::GravityCircular: p["t_end"] = 2.0 * std::numbers::pi; break;
      case Preset::GravityElliptic: {
        const auto period = kepler_period(p["G"] * p["m1"], cfg.initial_state.size() == 6
                                                                ? cfg.initial_state
                                                                : std::vector<double>(6, 0.0));
        if (!period) throw ParseError("params.t_end", 0, "required: orbit is not bound");
        p["t_end"] = *period;
        break;
      }
      case Preset::TwoBody:
      case Preset::LinearField: p["t_end"] = 1.0; break;
      case Preset::Clock: p["t_end"] = 2.0; break;
      case Preset::Custom: p["t_end"] = 1.0; break;
    }
  }

  // Validation.
  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = lines.find(key);
    throw ParseError("params." + key, it == lines.end() ? 0 : it->second, msg);
  };
  if (!(p["dt"] > 0.0)) fail("dt", "must be positive");
  if (!(p["t_end"] >= p["dt"])) fail("t_end", "must be at least dt");
  for (const char* key : {"m1", "m2", "min_radius", "tol", "clock_half_width"})
    if (p.count(key) && !(p[key] > 0.0)) fail(key, "must be positive");
  if (p.count("G") && !(p["G"] >= 0.0)) fail("G", "must be non-negative");
  for (const char* key : {"seed", "grid", "max_iter"}) {
    if (!p.count(key)) continue;
    const double v = p[key];
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) fail(key, "must be a non-negative integer");
  }
  if (p.count("grid") && p["grid"] < 2.0) fail("grid", "must be at least 2");
  if (p.count("max_iter") && p["max_iter"] < 1.0) fail("max_iter", "must be at least 1");

  const std::size_t want = state_dim(cfg.preset);
  if (want != 0 && cfg.initial_state.size() != want)
    throw ParseError("initial.state", state_line,
                     "expected " + std::to_string(want) + " values for preset " +
                         preset_name(cfg.preset));

  if (cfg.preset == Preset::Custom) {
    if (!cfg.custom_field) throw ParseError("field.expr", 0, "required for the custom preset");
    const auto n = static_cast<Eigen::Index>(cfg.initial_state.size());
    SmoothMap f = [&] {
      try {
        return parse_expression(*cfg.custom_field, n);
      } catch (const ParseError& e) {
        throw ParseError("field.expr", 0, e.what());
      }
    }();
    if (f.codomain_dim() != n)
      throw ParseError("field.expr", 0,
                       "field has dimension " + std::to_string(f.codomain_dim()) +
                           ", state has " + std::to_string(n));
  } else if (cfg.custom_field) {
    throw ParseError("field.expr", 0, "only the custom preset takes a field expression");
  }
  if (cfg.preset == Preset::Clock && std::abs(cfg.initial_state[0]) >= p["clock_half_width"])
    throw ParseError("initial.state", state_line, "clock must start inside its interval");
  return cfg;
}

std::string print_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[scenario]\n";
  os << "name = " << cfg.name << "\n";
  os << "preset = " << preset_name(cfg.preset) << "\n\n";
  os << "[params]\n";
  os << "method = " << method_name(cfg.method) << "\n";
  for (const auto& [k, v] : cfg.params) os << k << " = " << num(v) << "\n";
  if (cfg.custom_field) os << "\n[field]\nexpr = " << *cfg.custom_field << "\n";
  os << "\n[initial]\nstate = ";
  for (std::size_t i = 0; i < cfg.initial_state.size(); ++i)
    os << (i ? ", " : "") << num(cfg.initial_state[i]);
  os << "\n";
  return os.str();
}

// ---- running --------------------------------------------------------------------

namespace {

VectorField build_field(const ScenarioConfig& cfg) {
  switch (cfg.preset) {
    case Preset::GravityCircular:
    case Preset::GravityElliptic:
      return newton::lagrangian_field(
          {cfg.param("G"), cfg.param("m1"), cfg.param("m2"), cfg.param("min_radius")});
    case Preset::TwoBody:
      return newton::two_body_field(cfg.param("G"), cfg.param("m1"), cfg.param("m2"),
                                    cfg.param("min_radius"));
    case Preset::LinearField:
      return VectorField(BasicManifold::euclidean(1), SmoothMap::identity(1));
    case Preset::Clock:
      return clock_field(Clock{cfg.param("clock_half_width")});
    case Preset::Custom: {
      const auto n = static_cast<Eigen::Index>(cfg.initial_state.size());
      return VectorField(BasicManifold::euclidean(n), parse_expression(*cfg.custom_field, n));
    }
  }
  throw ContractError("unknown preset");
}

}  // namespace

RunArtifact run_scenario(const ScenarioConfig& cfg) {
  const VectorField field = build_field(cfg);
  const Vector q0 = Eigen::Map<const Vector>(cfg.initial_state.data(),
                                             static_cast<Eigen::Index>(cfg.initial_state.size()));
  RunArtifact ra;
  ra.config = cfg;
  if (cfg.method == Method::Rk4) {
    ra.trajectory = integrate_rk4(field, q0, cfg.param("t_end"), cfg.param("dt"));
  } else {
    ra.trajectory = integrate_picard(field, q0, cfg.param("t_end"),
                                     static_cast<std::size_t>(cfg.param("grid")),
                                     static_cast<std::size_t>(cfg.param("max_iter")),
                                     cfg.param("tol"));
  }
  const auto& states = ra.trajectory.states;
  const std::size_t n = states.size();
  ra.residual = check_trajectory(field, ra.trajectory).per_point;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ra.energy.assign(n, nan);
  ra.lz.assign(n, nan);

  Summary& s = ra.summary;
  s.steps = n - 1;
  s.final_time = ra.trajectory.times.back();
  s.final_state = ra.trajectory.final_state();
  s.picard_iterations = ra.trajectory.iterations;
  for (std::size_t k = 1; k + 1 < n; ++k) s.max_residual = std::max(s.max_residual, ra.residual[k]);

  auto drift_tracker = [](const std::vector<Vector>& series) {
    double worst = 0.0;
    for (const auto& v : series) worst = std::max(worst, (v - series.front()).norm());
    return worst;
  };
  auto relative_drift = [](const std::vector<double>& e) {
    const double scale = std::abs(e.front()) > 0.0 ? std::abs(e.front()) : 1.0;
    double worst = 0.0;
    for (double x : e) worst = std::max(worst, std::abs(x - e.front()) / scale);
    return worst;
  };

  if (is_gravity(cfg.preset)) {
    const newton::GravityParams gp{cfg.param("G"), cfg.param("m1"), cfg.param("m2"),
                                   cfg.param("min_radius")};
    std::vector<Vector> ls;
    for (std::size_t k = 0; k < n; ++k) {
      const newton::ConfigState cs{states[k].head(3), states[k].tail(3)};
      ra.energy[k] = newton::total_energy(gp, cs);
      ls.push_back(newton::angular_momentum(cs, gp.m2));
      ra.lz[k] = ls.back()[2];
    }
    s.energy_drift = relative_drift(ra.energy);
    s.angular_momentum_drift = drift_tracker(ls);
    s.return_distance = (states.back().head(3) - states.front().head(3)).norm();

    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.param("seed")));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Vector> samples;
    for (int i = 0; i < 16; ++i) samples.push_back(states[pick(rng)]);
    s.legendre_relatedness = check_f_related(newton::legendre_map(gp.m2), field,
                                             newton::hamiltonian_field(gp), samples);
  } else if (cfg.preset == Preset::TwoBody) {
    const double G = cfg.param("G"), m1 = cfg.param("m1"), m2 = cfg.param("m2");
    std::vector<Vector> ls, ps;
    for (std::size_t k = 0; k < n; ++k) {
      ra.energy[k] = newton::two_body_energy(states[k], G, m1, m2);
      ls.push_back(newton::two_body_angular_momentum(states[k], m1, m2));
      ps.push_back(newton::total_momentum(states[k], m1, m2));
      ra.lz[k] = ls.back()[2];
    }
    s.energy_drift = relative_drift(ra.energy);
    s.angular_momentum_drift = drift_tracker(ls);
    s.momentum_drift = drift_tracker(ps);
  }
  return ra;
}

std::string csv_text(const RunArtifact& ra) {
  const auto& tr = ra.trajectory;
  std::string out = "t";
  const auto dim = tr.states.empty() ? 0 : tr.states.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) out += ",state_" + std::to_string(i);
  out += ",energy,Lz,residual\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    out += num(tr.times[k]);
    for (double x : tr.states[k]) out += "," + num(x);
    out += "," + num(ra.energy[k]) + "," + num(ra.lz[k]) + "," + num(ra.residual[k]) + "\n";
  }
  return out;
}

void emit_csv(const RunArtifact& ra, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::string text = csv_text(ra);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string summary_text(const RunArtifact& ra) {
  const Summary& s = ra.summary;
  std::ostringstream os;
  os << "scenario: " << ra.config.name << "\n";
  os << "preset: " << preset_name(ra.config.preset) << "\n";
  os << "method: " << method_name(ra.config.method) << "\n";
  os << "steps: " << s.steps << "\n";
  os << "final_time: " << num(s.final_time) << "\n";
  os << "final_state:";
  for (double x : s.final_state) os << " " << num(x);
  os << "\n";
  os << "max_residual: " << num(s.max_residual) << "\n";
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << ": " << num(*v) << "\n";
  };
  opt("energy_drift", s.energy_drift);
  opt("angular_momentum_drift", s.angular_momentum_drift);
  opt("momentum_drift", s.momentum_drift);
  opt("return_distance", s.return_distance);
  opt("legendre_relatedness", s.legendre_relatedness);
  if (ra.config.method == Method::Picard) os << "picard_iterations: " << s.picard_iterations << "\n";
  return os.str();
}

}  // namespace functorad::scenario
