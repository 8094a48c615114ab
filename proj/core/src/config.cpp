#include "evwg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "evwg/error.hpp"
#include "evwg/io.hpp"

namespace evwg {

namespace {

constexpr std::pair<Mode, const char*> mode_names[] = {
    {Mode::convert_units, "convert-units"}, {Mode::freqmap, "freqmap"},     {Mode::portrait, "portrait"},
    {Mode::fixedpoints, "fixedpoints"},     {Mode::ensemble, "ensemble"},   {Mode::detect, "detect"},
    {Mode::quantum, "quantum"},             {Mode::revival, "revival"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Closest known name: a known name that prefixes the unknown one (epsilon_mod
// -> eps) wins, otherwise the smallest edit distance up to half the length.
std::string suggest(std::string_view unknown, const std::vector<std::string>& known) {
  std::string best;
  std::size_t best_len = 0;
  for (const auto& k : known) {
    if (k.size() >= 2 && unknown.substr(0, k.size()) == k && k.size() > best_len) {
      best = k;
      best_len = k.size();
    }
  }
  if (!best.empty()) return best;
  std::size_t best_d = unknown.size() / 2 + 1;
  for (const auto& k : known) {
    const auto d = edit_distance(unknown, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

struct Value {
  std::string text;
  std::size_t line;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " + what, line, key);
  }

  double real() const {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) fail("expected a finite number, got '" + text + "'");
    return v;
  }
  long long integer() const {
    long long v = 0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail("expected an integer, got '" + text + "'");
    return v;
  }
  int small_int() const {
    const long long v = integer();
    if (v < -(1LL << 31) || v >= (1LL << 31)) fail("integer out of range");
    return static_cast<int>(v);
  }
  int positive_int() const {
    const int v = small_int();
    if (v < 1) fail("must be >= 1");
    return v;
  }
  std::uint64_t u64() const {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail("expected an unsigned 64-bit integer, got '" + text + "'");
    return v;
  }
  bool boolean() const {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    fail("expected true/false, got '" + text + "'");
  }
  std::vector<int> int_list() const {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const std::string item = trim(std::string_view(text).substr(pos, comma - pos));
      Value v{item, line, key};
      out.push_back(v.small_int());
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }
};

struct ParseState {
  RunConfig cfg;
  PhysicalParams physical{};
  double physical_omega = 2.0;
  double physical_eps = 0.0;
  bool has_physical = false;
  bool has_dimensionless = false;
  std::size_t physical_line = 0;
  std::size_t dimensionless_line = 0;
};

using Setter = std::function<void(ParseState&, const Value&)>;
using KeyTable = std::vector<std::pair<std::string, Setter>>;

template <typename Section, typename Field>
Setter real_field(std::optional<Section> RunConfig::*sec, Field Section::*field) {
  return [sec, field](ParseState& st, const Value& v) { ((*(st.cfg.*sec)).*field) = v.real(); };
}

const std::map<std::string, KeyTable>& key_tables() {
  static const std::map<std::string, KeyTable> tables = [] {
    std::map<std::string, KeyTable> t;
    t[""] = {
        {"mode", [](ParseState& st, const Value& v) {
           try {
             st.cfg.mode = parse_mode(v.text);
           } catch (const ConfigError& e) {
             v.fail(e.what());
           }
         }},
        {"name", [](ParseState& st, const Value& v) {
           if (v.text.empty() || v.text.find_first_of("/\\") != std::string::npos) v.fail("invalid output name");
           st.cfg.name = v.text;
         }},
        {"seed", [](ParseState& st, const Value& v) { st.cfg.seed = v.u64(); }},
        {"threads", [](ParseState& st, const Value& v) { st.cfg.threads = v.positive_int(); }},
    };
    t["dimensionless"] = {
        {"xi", [](ParseState& st, const Value& v) { st.cfg.params.xi = v.real(); }},
        {"r1", [](ParseState& st, const Value& v) { st.cfg.params.r1 = v.real(); }},
        {"omega", [](ParseState& st, const Value& v) { st.cfg.params.omega_mod = v.real(); }},
        {"eps", [](ParseState& st, const Value& v) { st.cfg.params.eps = v.real(); }},
        {"kbar", [](ParseState& st, const Value& v) { st.cfg.params.kbar = v.real(); }},
    };
    auto phys = [](double PhysicalParams::*f) {
      return [f](ParseState& st, const Value& v) { st.physical.*f = v.real(); };
    };
    t["physical"] = {
        {"preset", [](ParseState& st, const Value& v) {
           if (v.text != "helium") v.fail("unknown preset '" + v.text + "' (known: helium)");
           st.physical = helium_defaults();
         }},
        {"gamma", phys(&PhysicalParams::gamma)},
        {"lambda", phys(&PhysicalParams::lambda)},
        {"mass", phys(&PhysicalParams::mass)},
        {"i_sat", phys(&PhysicalParams::i_sat)},
        {"i0", phys(&PhysicalParams::i0)},
        {"detuning", phys(&PhysicalParams::detuning)},
        {"n_index", phys(&PhysicalParams::n_index)},
        {"theta_deg", [](ParseState& st, const Value& v) { st.physical.theta = v.real() * constants::pi / 180.0; }},
        {"r1_phys", phys(&PhysicalParams::r1_phys)},
        {"omega_ref", phys(&PhysicalParams::omega_ref)},
        {"temperature_x", phys(&PhysicalParams::temperature_x)},
        {"temperature_y", phys(&PhysicalParams::temperature_y)},
        {"omega", [](ParseState& st, const Value& v) { st.physical_omega = v.real(); }},
        {"eps", [](ParseState& st, const Value& v) { st.physical_eps = v.real(); }},
    };
    t["integrator"] = {
        {"steps_per_period", [](ParseState& st, const Value& v) { st.cfg.integrator.steps_per_period = v.positive_int(); }},
        {"scheme", [](ParseState& st, const Value& v) {
           if (v.text == "leapfrog2") st.cfg.integrator.scheme = Scheme::leapfrog2;
           else if (v.text == "forest_ruth4") st.cfg.integrator.scheme = Scheme::forest_ruth4;
           else v.fail("expected leapfrog2 or forest_ruth4, got '" + v.text + "'");
         }},
    };
    t["freqmap"] = {
        {"h_min", real_field(&RunConfig::freqmap, &FreqmapSettings::h_min)},
        {"h_max", real_field(&RunConfig::freqmap, &FreqmapSettings::h_max)},
        {"points", [](ParseState& st, const Value& v) { st.cfg.freqmap->points = v.positive_int(); }},
        {"spacing", [](ParseState& st, const Value& v) {
           if (v.text == "log") st.cfg.freqmap->log_spacing = true;
           else if (v.text == "linear") st.cfg.freqmap->log_spacing = false;
           else v.fail("expected log or linear");
         }},
        {"quad_points", [](ParseState& st, const Value& v) { st.cfg.freqmap->quad_points = v.positive_int(); }},
        {"j_max", [](ParseState& st, const Value& v) { st.cfg.freqmap->j_max = v.positive_int(); }},
    };
    t["portrait"] = {
        {"x_min", real_field(&RunConfig::portrait, &PortraitSettings::x_min)},
        {"x_max", real_field(&RunConfig::portrait, &PortraitSettings::x_max)},
        {"n_x", [](ParseState& st, const Value& v) { st.cfg.portrait->n_x = v.positive_int(); }},
        {"px_min", real_field(&RunConfig::portrait, &PortraitSettings::px_min)},
        {"px_max", real_field(&RunConfig::portrait, &PortraitSettings::px_max)},
        {"n_px", [](ParseState& st, const Value& v) { st.cfg.portrait->n_px = v.positive_int(); }},
        {"strobes", [](ParseState& st, const Value& v) { st.cfg.portrait->strobes = v.positive_int(); }},
    };
    auto box = [](double SearchBox::*f) {
      return [f](ParseState& st, const Value& v) {
        st.cfg.fixedpoints->box.*f = v.real();
        st.cfg.fixedpoints->box_set = true;
      };
    };
    t["fixedpoints"] = {
        {"periods", [](ParseState& st, const Value& v) {
           auto p = v.int_list();
           for (int x : p) {
             if (x < 1) v.fail("periods must be >= 1");
           }
           st.cfg.fixedpoints->periods = p;
         }},
        {"x_min", box(&SearchBox::x_min)},
        {"x_max", box(&SearchBox::x_max)},
        {"px_min", box(&SearchBox::px_min)},
        {"px_max", box(&SearchBox::px_max)},
        {"seeds_x", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.seeds_x = v.positive_int(); }},
        {"seeds_px", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.seeds_px = v.positive_int(); }},
        {"max_iterations", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.max_iterations = v.positive_int(); }},
        {"tolerance", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.tolerance = v.real(); }},
        {"dedup_distance", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.dedup_distance = v.real(); }},
        {"fd_step", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->search.fd_step = v.real(); }},
        {"j_max", [](ParseState& st, const Value& v) { st.cfg.fixedpoints->j_max = v.positive_int(); }},
    };
    t["ensemble"] = {
        {"n_atoms", [](ParseState& st, const Value& v) { st.cfg.ensemble->spec.n_atoms = static_cast<std::size_t>(v.positive_int()); }},
        {"disk_radius", [](ParseState& st, const Value& v) {
           st.cfg.ensemble->spec.disk_radius = v.real();
           st.cfg.ensemble->disk_radius_set = true;
         }},
        {"sigma_p", [](ParseState& st, const Value& v) { st.cfg.ensemble->spec.sigma_p = v.real(); }},
        {"p0x", [](ParseState& st, const Value& v) { st.cfg.ensemble->spec.p0x = v.real(); }},
        {"p0y", [](ParseState& st, const Value& v) { st.cfg.ensemble->spec.p0y = v.real(); }},
        {"snapshot_strobes", [](ParseState& st, const Value& v) {
           auto s = v.int_list();
           for (int x : s) {
             if (x < 0) v.fail("strobes must be >= 0");
           }
           st.cfg.ensemble->snapshot_strobes = s;
         }},
        {"hist_nx", [](ParseState& st, const Value& v) { st.cfg.ensemble->hist_nx = v.positive_int(); }},
        {"hist_ny", [](ParseState& st, const Value& v) { st.cfg.ensemble->hist_ny = v.positive_int(); }},
        {"radial_bins", [](ParseState& st, const Value& v) { st.cfg.ensemble->radial_bins = v.positive_int(); }},
        {"radial_max", [](ParseState& st, const Value& v) { st.cfg.ensemble->radial_max = v.real(); }},
        {"write_atoms", [](ParseState& st, const Value& v) { st.cfg.ensemble->write_atoms = v.boolean(); }},
    };
    t["detect"] = {
        {"s_start", [](ParseState& st, const Value& v) { st.cfg.detect->s_start = v.small_int(); }},
        {"s_end", [](ParseState& st, const Value& v) { st.cfg.detect->s_end = v.small_int(); }},
        {"n_per_strobe", [](ParseState& st, const Value& v) { st.cfg.detect->n_per_strobe = static_cast<std::size_t>(v.positive_int()); }},
        {"fresh_cohorts", [](ParseState& st, const Value& v) { st.cfg.detect->fresh_cohorts = v.boolean(); }},
    };
    t["quantum"] = {
        {"n", [](ParseState& st, const Value& v) { st.cfg.quantum->n = v.positive_int(); }},
        {"half_width", real_field(&RunConfig::quantum, &QuantumSettings::half_width)},
        {"steps_per_strobe", [](ParseState& st, const Value& v) { st.cfg.quantum->steps_per_strobe = v.positive_int(); }},
        {"mask_at_r1", [](ParseState& st, const Value& v) { st.cfg.quantum->mask_at_r1 = v.boolean(); }},
        {"x0", real_field(&RunConfig::quantum, &QuantumSettings::x0)},
        {"y0", real_field(&RunConfig::quantum, &QuantumSettings::y0)},
        {"p0x", real_field(&RunConfig::quantum, &QuantumSettings::p0x)},
        {"p0y", real_field(&RunConfig::quantum, &QuantumSettings::p0y)},
        {"sigma", real_field(&RunConfig::quantum, &QuantumSettings::sigma)},
        {"strobes", [](ParseState& st, const Value& v) { st.cfg.quantum->strobes = v.positive_int(); }},
        {"record_every_step", [](ParseState& st, const Value& v) { st.cfg.quantum->record_every_step = v.boolean(); }},
        {"asymmetry", [](ParseState& st, const Value& v) { st.cfg.quantum->asymmetry = v.boolean(); }},
        {"n_r", [](ParseState& st, const Value& v) { st.cfg.quantum->n_r = v.positive_int(); }},
        {"n_theta", [](ParseState& st, const Value& v) { st.cfg.quantum->n_theta = v.positive_int(); }},
        {"slice_y", real_field(&RunConfig::quantum, &QuantumSettings::slice_y)},
    };
    t["revival"] = {
        {"x0", real_field(&RunConfig::revival, &RevivalSettings::x0)},
        {"y0", real_field(&RunConfig::revival, &RevivalSettings::y0)},
        {"p0x", real_field(&RunConfig::revival, &RevivalSettings::p0x)},
        {"p0y", real_field(&RunConfig::revival, &RevivalSettings::p0y)},
        {"sigma", real_field(&RunConfig::revival, &RevivalSettings::sigma)},
        {"mean_energy", [](ParseState& st, const Value& v) {
           if (v.text == "packet_expectation") st.cfg.revival->model = MeanEnergyModel::packet_expectation;
           else if (v.text == "center_plus_zero_point") st.cfg.revival->model = MeanEnergyModel::center_plus_zero_point;
           else v.fail("expected packet_expectation or center_plus_zero_point");
         }},
    };
    return t;
  }();
  return tables;
}

void open_section(ParseState& st, const std::string& name, std::size_t line) {
  if (name == "physical") {
    st.has_physical = true;
    st.physical_line = line;
  } else if (name == "dimensionless") {
    st.has_dimensionless = true;
    st.dimensionless_line = line;
  } else if (name == "freqmap") {
    st.cfg.freqmap.emplace();
  } else if (name == "portrait") {
    st.cfg.portrait.emplace();
  } else if (name == "fixedpoints") {
    st.cfg.fixedpoints.emplace();
  } else if (name == "ensemble") {
    st.cfg.ensemble.emplace();
  } else if (name == "detect") {
    st.cfg.detect.emplace();
  } else if (name == "quantum") {
    st.cfg.quantum.emplace();
  } else if (name == "revival") {
    st.cfg.revival.emplace();
  }
}

}  // namespace

const char* to_string(Mode m) {
  for (const auto& [mode, name] : mode_names) {
    if (mode == m) return name;
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  std::vector<std::string> known;
  for (const auto& [mode, n] : mode_names) {
    if (name == n) return mode;
    known.emplace_back(n);
  }
  std::string msg = "unknown mode '" + std::string(name) + "'";
  const auto hint = suggest(name, known);
  if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
  throw ConfigError(msg, 0, "mode");
}

RunConfig parse_config(std::string_view text) {
  const auto& tables = key_tables();
  ParseState st;
  std::string section;
  std::set<std::string> seen_sections{""};
  std::set<std::pair<std::string, std::string>> seen_keys;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(raw.substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header", line_no);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!tables.count(section) || section.empty()) {
        std::vector<std::string> known;
        for (const auto& [name, keys] : tables) {
          if (!name.empty()) known.push_back(name);
        }
        std::string msg = "line " + std::to_string(line_no) + ": unknown section [" + section + "]";
        const auto hint = suggest(section, known);
        if (!hint.empty()) msg += " (did you mean [" + hint + "]?)";
        throw ConfigError(msg, line_no, section);
      }
      if (!seen_sections.insert(section).second) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + section + "]", line_no, section);
      }
      open_section(st, section, line_no);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key", line_no);

    const auto& table = tables.at(section);
    auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    const std::string where = section.empty() ? "top level" : "[" + section + "]";
    if (it == table.end()) {
      std::vector<std::string> known;
      for (const auto& e : table) known.push_back(e.first);
      std::string msg = "line " + std::to_string(line_no) + ": unknown key '" + key + "' in " + where;
      const auto hint = suggest(key, known);
      if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
      throw ConfigError(msg, line_no, key);
    }
    if (!seen_keys.insert({section, key}).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' in " + where, line_no, key);
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' has no value", line_no, key);
    }
    it->second(st, Value{value, line_no, key});
  }

  if (st.has_physical && st.has_dimensionless) {
    throw ConfigError("config has both [physical] (line " + std::to_string(st.physical_line) +
                          ") and [dimensionless] (line " + std::to_string(st.dimensionless_line) +
                          "); exactly one is allowed",
                      st.dimensionless_line, "dimensionless");
  }
  if (!st.has_physical && !st.has_dimensionless) {
    throw ConfigError("config needs exactly one of [physical] or [dimensionless]");
  }

  RunConfig cfg = std::move(st.cfg);
  try {
    if (st.has_physical) {
      validate(st.physical);
      cfg.physical = st.physical;
      cfg.params = scale_to_dimensionless(st.physical, st.physical_omega, st.physical_eps);
    }
    validate(cfg.params);
    cfg.integrator.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  if (cfg.ensemble && !cfg.ensemble->disk_radius_set) cfg.ensemble->spec.disk_radius = cfg.params.r1;
  if (cfg.detect && cfg.detect->s_end < cfg.detect->s_start) {
    throw ConfigError("[detect] s_end must be >= s_start", 0, "s_end");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

void require_mode_sections(const RunConfig& cfg, Mode mode) {
  auto need = [&](bool present, const char* section) {
    if (!present) {
      throw ConfigError(std::string("mode ") + to_string(mode) + " requires a [" + section + "] section", 0, section);
    }
  };
  switch (mode) {
    case Mode::convert_units: need(cfg.physical.has_value(), "physical"); break;
    case Mode::freqmap: need(cfg.freqmap.has_value(), "freqmap"); break;
    case Mode::portrait: need(cfg.portrait.has_value(), "portrait"); break;
    case Mode::fixedpoints: need(cfg.fixedpoints.has_value(), "fixedpoints"); break;
    case Mode::ensemble: need(cfg.ensemble.has_value(), "ensemble"); break;
    case Mode::detect:
      need(cfg.ensemble.has_value(), "ensemble");
      need(cfg.detect.has_value(), "detect");
      break;
    case Mode::quantum: need(cfg.quantum.has_value(), "quantum"); break;
    case Mode::revival: need(cfg.revival.has_value(), "revival"); break;
  }
}

}  // namespace evwg
