#include "upo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#include "upo/errors.hpp"

namespace upo {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Thrown by value parsers; rewrapped with source and line by the caller.
struct BadValue {
  std::string message;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw BadValue{"expected a number, got '" + s + "'"};
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw BadValue{"expected an integer, got '" + s + "'"};
  return v;
}

std::uint64_t to_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw BadValue{"expected a nonnegative integer, got '" + s + "'"};
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw BadValue{"expected true or false, got '" + s + "'"};
}

std::string fmt(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define UPO_REAL(key, member) \
  {key, {[](ExperimentConfig& c, const std::string& v) { c.member = to_double(v); }, [](const ExperimentConfig& c) { return fmt(c.member); }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"objective.kind",
       {[](ExperimentConfig& c, const std::string& v) {
          if (v != "pv-day" && v != "parabola" && v != "drifting-parabola" && v != "oscillating-parabola") {
            throw BadValue{"unknown objective kind '" + v + "'"};
          }
          c.objective.kind = v;
        },
        [](const ExperimentConfig& c) { return c.objective.kind; }}},
      UPO_REAL("objective.curvature", objective.curvature),
      UPO_REAL("objective.center", objective.center),
      UPO_REAL("objective.rate", objective.rate),
      UPO_REAL("objective.offset_rate", objective.offset_rate),
      UPO_REAL("objective.amplitude", objective.amplitude),
      UPO_REAL("objective.period", objective.period),
      UPO_REAL("pv.T_r", objective.pv.T_r),
      UPO_REAL("pv.I_s", objective.pv.I_s),
      UPO_REAL("pv.I_0", objective.pv.I_0),
      UPO_REAL("pv.k_i", objective.pv.k_i),
      UPO_REAL("pv.N", objective.pv.N),
      UPO_REAL("pv.E_g", objective.pv.E_g),
      UPO_REAL("pv.k_B", objective.pv.k_B),
      UPO_REAL("pv.q_e", objective.pv.q_e),
      UPO_REAL("pv.n_s", objective.pv.n_s),
      UPO_REAL("pv.R_s", objective.pv.R_s),
      UPO_REAL("pv.R_p", objective.pv.R_p),
      UPO_REAL("pv.C_c", objective.pv.C_c),
      UPO_REAL("pv.L_c", objective.pv.L_c),
      UPO_REAL("pv.R_c", objective.pv.R_c),
      {"profile.horizon",
       {[](ExperimentConfig& c, const std::string& v) { c.objective.profile.horizon = to_int(v); },
        [](const ExperimentConfig& c) { return fmt(c.objective.profile.horizon); }}},
      UPO_REAL("profile.S_peak", objective.profile.S_peak),
      UPO_REAL("profile.T_base", objective.profile.T_base),
      UPO_REAL("profile.T_rise", objective.profile.T_rise),
      UPO_REAL("profile.S_exponent", objective.profile.S_exponent),
      UPO_REAL("profile.T_exponent", objective.profile.T_exponent),
      {"noise.kind",
       {[](ExperimentConfig& c, const std::string& v) {
          if (v == "gaussian") {
            c.noise_kind = NoiseKind::gaussian;
          } else if (v == "bounded") {
            c.noise_kind = NoiseKind::bounded;
          } else {
            throw BadValue{"noise kind must be gaussian or bounded, got '" + v + "'"};
          }
        },
        [](const ExperimentConfig& c) {
          return std::string(c.noise_kind == NoiseKind::gaussian ? "gaussian" : "bounded");
        }}},
      UPO_REAL("noise.rho", rho),
      UPO_REAL("grid.spacing", grid_spacing),
      {"grid.bounded",
       {[](ExperimentConfig& c, const std::string& v) {
          if (!to_bool(v)) {
            c.grid_bounds.reset();
          } else if (!c.grid_bounds) {
            c.grid_bounds = IndexInterval{1, 19};
          }
        },
        [](const ExperimentConfig& c) { return std::string(c.grid_bounds ? "true" : "false"); }}},
      {"grid.lo",
       {[](ExperimentConfig& c, const std::string& v) {
          if (!c.grid_bounds) c.grid_bounds = IndexInterval{1, 19};
          c.grid_bounds->lo = to_int(v);
        },
        [](const ExperimentConfig& c) { return c.grid_bounds ? fmt(c.grid_bounds->lo) : std::string(); }}},
      {"grid.hi",
       {[](ExperimentConfig& c, const std::string& v) {
          if (!c.grid_bounds) c.grid_bounds = IndexInterval{1, 19};
          c.grid_bounds->hi = to_int(v);
        },
        [](const ExperimentConfig& c) { return c.grid_bounds ? fmt(c.grid_bounds->hi) : std::string(); }}},
      {"oracle.lo",
       {[](ExperimentConfig& c, const std::string& v) {
          if (!c.oracle_interval) c.oracle_interval = c.grid_bounds.value_or(IndexInterval{});
          c.oracle_interval->lo = to_int(v);
        },
        [](const ExperimentConfig& c) { return c.oracle_interval ? fmt(c.oracle_interval->lo) : std::string(); }}},
      {"oracle.hi",
       {[](ExperimentConfig& c, const std::string& v) {
          if (!c.oracle_interval) c.oracle_interval = c.grid_bounds.value_or(IndexInterval{});
          c.oracle_interval->hi = to_int(v);
        },
        [](const ExperimentConfig& c) { return c.oracle_interval ? fmt(c.oracle_interval->hi) : std::string(); }}},
      {"run.horizon",
       {[](ExperimentConfig& c, const std::string& v) { c.horizon = to_int(v); },
        [](const ExperimentConfig& c) { return fmt(c.horizon); }}},
      {"run.u0",
       {[](ExperimentConfig& c, const std::string& v) { c.u0 = to_int(v); },
        [](const ExperimentConfig& c) { return c.u0 ? fmt(*c.u0) : std::string(); }}},
      {"run.u1_direction",
       {[](ExperimentConfig& c, const std::string& v) { c.u1_direction = static_cast<int>(to_int(v)); },
        [](const ExperimentConfig& c) { return fmt(static_cast<std::int64_t>(c.u1_direction)); }}},
      {"run.seed",
       {[](ExperimentConfig& c, const std::string& v) { c.seed = to_uint(v); },
        [](const ExperimentConfig& c) { return fmt(c.seed); }}},
      {"run.output",
       {[](ExperimentConfig& c, const std::string& v) { c.output = v; },
        [](const ExperimentConfig& c) { return c.output; }}},
  };
  return table;
}

#undef UPO_REAL

const char* const kSelectorFields[] = {"tau", "nu", "alpha", "lambda", "order", "rho", "variance_floor_phi"};

void set_selector_field(SelectorConfig& s, const std::string& field, const std::string& v) {
  if (field == "tau") {
    s.tau = to_double(v);
  } else if (field == "nu") {
    s.nu = to_double(v);
  } else if (field == "alpha") {
    s.alpha = to_double(v);
  } else if (field == "lambda") {
    s.lambda = to_double(v);
  } else if (field == "order") {
    s.order = static_cast<int>(to_int(v));
  } else if (field == "rho") {
    s.rho = to_double(v);
  } else if (field == "variance_floor_phi") {
    s.variance_floor_phi = to_double(v);
  } else {
    throw BadValue{"unknown selector setting '" + field + "'"};
  }
}

std::string get_selector_field(const SelectorConfig& s, const std::string& field) {
  if (field == "tau") return fmt(s.tau);
  if (field == "nu") return fmt(s.nu);
  if (field == "alpha") return fmt(s.alpha);
  if (field == "lambda") return fmt(s.lambda);
  if (field == "order") return fmt(static_cast<std::int64_t>(s.order));
  if (field == "rho") return fmt(s.rho);
  return fmt(s.variance_floor_phi);
}

std::vector<SelectorKind> parse_selector_list(const std::string& v) {
  std::vector<SelectorKind> kinds;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      kinds.push_back(parse_selector_kind(item));
    } catch (const ParameterError& e) {
      throw BadValue{e.what()};
    }
  }
  if (kinds.empty()) throw BadValue{"selector list is empty"};
  return kinds;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.selectors = {SelectorConfig::defaults(SelectorKind::upo), SelectorConfig::defaults(SelectorKind::standard_po)};
  return c;
}

InputGrid ExperimentConfig::grid() const { return InputGrid(grid_spacing, grid_bounds); }

GridIndex ExperimentConfig::start_index() const { return u0 ? *u0 : grid().midpoint(); }

IndexInterval ExperimentConfig::scan_interval() const {
  if (oracle_interval) return *oracle_interval;
  if (grid_bounds) return *grid_bounds;
  throw ConfigError("<config>", 0, "an unbounded grid needs oracle.lo and oracle.hi");
}

void ExperimentConfig::validate(const std::string& source) const {
  auto fail = [&](const std::string& message) { throw ConfigError(source, 0, message); };
  if (!(grid_spacing > 0.0)) fail("grid.spacing must be positive");
  if (grid_bounds && grid_bounds->lo >= grid_bounds->hi) fail("grid.lo must be below grid.hi");
  if (!grid_bounds && !oracle_interval) fail("an unbounded grid needs oracle.lo and oracle.hi");
  if (oracle_interval) {
    if (oracle_interval->lo > oracle_interval->hi) fail("oracle.lo must not exceed oracle.hi");
    if (grid_bounds && (!grid_bounds->contains(oracle_interval->lo) || !grid_bounds->contains(oracle_interval->hi))) {
      fail("oracle interval must lie inside the grid bounds");
    }
  }
  if (!(rho >= 0.0)) fail("noise.rho must be nonnegative");
  if (horizon <= 0) fail("run.horizon must be positive");
  if (u1_direction != 1 && u1_direction != -1) fail("run.u1_direction must be 1 or -1");
  if (grid_bounds && !grid_bounds->contains(start_index())) fail("run.u0 lies outside the grid bounds");
  if (selectors.empty()) fail("no selectors configured");
  for (const auto& s : selectors) {
    try {
      s.validate();
    } catch (const ParameterError& e) {
      fail(e.what());
    }
  }
  if (objective.kind == "pv-day") {
    if (!grid_bounds) fail("pv-day needs a bounded grid");
    if (grid_bounds->lo * grid_spacing < 0.0 || grid_bounds->hi * grid_spacing > 1.0 + 1e-12) {
      fail("pv-day duty cycles must lie in [0, 1]");
    }
    try {
      objective.pv.validate();
      objective.profile.validate();
    } catch (const ParameterError& e) {
      fail(e.what());
    }
  } else {
    if (!(objective.curvature > 0.0)) fail("objective.curvature must be positive");
    if (objective.kind == "oscillating-parabola" && !(objective.period > 0.0)) {
      fail("objective.period must be positive");
    }
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig config = ExperimentConfig::defaults();
  std::vector<SelectorKind> kinds = {SelectorKind::upo, SelectorKind::standard_po};
  std::map<SelectorKind, std::vector<std::tuple<std::string, std::string, int>>> overrides;
  std::set<std::string> seen;

  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, number, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(source, number, "missing key");
    if (!seen.insert(key).second) throw ConfigError(source, number, "duplicate key '" + key + "'");
    try {
      if (key == "run.selectors") {
        kinds = parse_selector_list(value);
        continue;
      }
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
      if (it != table.end()) {
        it->second.set(config, value);
        continue;
      }
      const auto dot = key.find('.');
      if (dot != std::string::npos) {
        SelectorKind kind;
        try {
          kind = parse_selector_kind(key.substr(0, dot));
        } catch (const ParameterError&) {
          throw BadValue{"unknown key '" + key + "'"};
        }
        const std::string field = key.substr(dot + 1);
        SelectorConfig probe;
        set_selector_field(probe, field, value);  // validates field name and value syntax
        overrides[kind].emplace_back(field, value, number);
        continue;
      }
      throw BadValue{"unknown key '" + key + "'"};
    } catch (const BadValue& e) {
      throw ConfigError(source, number, e.message);
    }
  }

  config.selectors.clear();
  for (const SelectorKind kind : kinds) {
    SelectorConfig s = SelectorConfig::defaults(kind);
    s.rho = config.rho > 0.0 ? config.rho : s.rho;
    for (const auto& [field, value, at] : overrides[kind]) set_selector_field(s, field, value);
    config.selectors.push_back(s);
  }
  for (const auto& [kind, list] : overrides) {
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
      throw ConfigError(source, std::get<2>(list.front()),
                        std::string("settings for selector '") + to_string(kind) + "' which is not in run.selectors");
    }
  }
  config.validate(source);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  return parse_config(in, path);
}

void write_config(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& [key, field] : fields()) {
    const std::string value = field.get(config);
    if (!value.empty()) out << key << " = " << value << '\n';
  }
  out << "run.selectors = ";
  for (std::size_t i = 0; i < config.selectors.size(); ++i) {
    out << (i ? "," : "") << to_string(config.selectors[i].kind);
  }
  out << '\n';
  for (const auto& s : config.selectors) {
    if (s.kind == SelectorKind::standard_po) continue;
    for (const char* field : kSelectorFields) {
      out << to_string(s.kind) << '.' << field << " = " << get_selector_field(s, field) << '\n';
    }
  }
}

Objective build_objective(const ExperimentConfig& config) {
  const InputGrid grid = config.grid();
  const NoiseModel noise{config.rho, config.noise_kind, config.seed};
  const auto& o = config.objective;
  if (o.kind == "pv-day") return pv::day_objective(o.pv, o.profile, grid, noise);
  if (o.kind == "parabola") return make_parabola(grid, o.curvature, o.center, noise);
  if (o.kind == "drifting-parabola") {
    return make_drifting_parabola(grid, o.curvature, o.center, o.rate, noise, o.offset_rate);
  }
  if (o.kind == "oscillating-parabola") {
    return make_oscillating_parabola(grid, o.curvature, o.center, o.amplitude, o.period, noise);
  }
  throw ConfigError("<config>", 0, "unknown objective kind '" + o.kind + "'");
}

}  // namespace upo
