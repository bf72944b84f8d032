#include "optocool/config.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <set>
#include <utility>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

using units::Dimension;

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::fixed_points, "fixed-points"},
    {Command::spectrum, "spectrum"},
    {Command::damping, "damping"},
    {Command::phonons, "phonons"},
    {Command::sweep, "sweep"},
    {Command::optimize, "optimize"},
    {Command::design, "design"},
    {Command::figure, "figure"},
}};

// Accepted keys; anything else is reported with its line.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"command"}},
      {"cavity", {"gamma", "energy_scale"}},
      {"model", {"kind", "delta", "ej", "drive", "kerr", "phi0"}},
      {"mechanics", {"omega_m", "gamma_m", "g0", "nbar_T"}},
      {"sweep", {"axis1", "axis2", "policy", "outputs"}},
      {"spectrum", {"omega_min", "omega_max", "omega_count", "method", "policy"}},
      {"optimize", {"delta_min", "delta_max", "policy", "scan_points", "margin"}},
      {"design",
       {"margin", "reference", "explicit_drive", "optimize_detuning", "delta_min", "delta_max",
        "policy", "scan_points", "tolerance"}},
      {"figure",
       {"id", "phi0", "series", "delta", "x_min", "x_max", "x_count", "x_log", "delta_min",
        "delta_max", "scan_points", "threshold_points"}},
      {"output", {"path", "format"}},
  };
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  for (auto w : split(s, ' ')) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Typed access to one document with line-numbered errors.
class Reader {
 public:
  Reader(const ConfigDocument& doc, units::UnitSystem system) : doc_(doc), system_(system) {}

  void set_units(units::UnitSystem s) { system_ = s; }

  bool has(const std::string& sec, const std::string& key) const { return doc_.find(sec, key); }

  std::optional<std::string> text(const std::string& sec, const std::string& key) const {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<double> quantity(const std::string& sec, const std::string& key,
                                 Dimension dim) const {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    return guarded(e, [&] { return units::parse_quantity(e->value, dim, system_, sec + "." + key); });
  }

  double quantity_or(const std::string& sec, const std::string& key, Dimension dim, double def) const {
    return quantity(sec, key, dim).value_or(def);
  }

  std::optional<int> integer(const std::string& sec, const std::string& key) const {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    return guarded(e, [&] { return parse_int(e->value, sec + "." + key); });
  }

  std::optional<bool> boolean(const std::string& sec, const std::string& key) const {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    const std::string& v = e->value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("'" + sec + "." + key + "': expected true or false", e->line);
  }

  std::optional<std::vector<double>> list(const std::string& sec, const std::string& key) const {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    return guarded(e, [&] {
      std::vector<double> out;
      if (trim(e->value).empty()) return out;
      for (auto item : split(e->value, ',')) {
        out.push_back(units::parse_quantity(item, Dimension::dimensionless, system_, sec + "." + key));
      }
      return out;
    });
  }

  // Applies a string conversion that may throw ConfigError, adding the line.
  template <class F>
  auto convert(const std::string& sec, const std::string& key, F&& f) const
      -> std::optional<decltype(f(std::string()))> {
    const auto* e = doc_.find(sec, key);
    if (!e) return std::nullopt;
    return guarded(e, [&] { return f(e->value); });
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& msg) const {
    const auto* e = doc_.find(sec, key);
    throw ConfigError("'" + sec + "." + key + "': " + msg, e ? e->line : 0);
  }

  static int parse_int(std::string_view text, const std::string& key) {
    text = trim(text);
    int v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw ConfigError("'" + key + "': expected an integer, got '" + std::string(text) + "'");
    }
    return v;
  }

 private:
  template <class F>
  auto guarded(const ConfigDocument::Entry* e, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const ConfigError& err) {
      if (err.line() > 0 || e->line == 0) throw;
      throw ConfigError(err.what(), e->line);
    }
  }

  const ConfigDocument& doc_;
  units::UnitSystem system_;
};

Axis parse_axis(std::string_view text, const std::string& key) {
  const auto w = words(text);
  if (w.size() != 4 && w.size() != 5) {
    throw ConfigError("'" + key + "': expected 'name min max count [linear|log]'");
  }
  Axis a;
  a.name = axis_name_from_string(w[0]);
  a.min = units::parse_quantity(w[1], Dimension::dimensionless, {}, key);
  a.max = units::parse_quantity(w[2], Dimension::dimensionless, {}, key);
  a.count = Reader::parse_int(w[3], key);
  if (w.size() == 5) a.scale = axis_scale_from_string(w[4]);
  return a;
}

std::string axis_text(const Axis& a) {
  return std::string(to_string(a.name)) + " " + fmt(a.min) + " " + fmt(a.max) + " " +
         std::to_string(a.count) + " " + std::string(to_string(a.scale));
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

bool needs_mechanics(Command c) {
  return c == Command::damping || c == Command::phonons || c == Command::optimize ||
         c == Command::design;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [k, n] : kCommands) {
    if (k == c) return n;
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (const auto& [k, n] : kCommands) {
    if (n == name) return k;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("key outside of any [section]", line_no);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (doc.find(section, key)) {
      throw ConfigError("duplicate key '" + section + "." + key + "'", line_no);
    }
    doc.set(section, key, std::string(trim(line.substr(eq + 1))), line_no);
  }
  return doc;
}

void ConfigDocument::set(const std::string& section, const std::string& key, std::string value,
                         int line) {
  const auto it = schema().find(section);
  if (it == schema().end()) throw ConfigError("unknown section [" + section + "]", line);
  if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'", line);
  sections_[section][key] = Entry{std::move(value), line};
}

void ConfigDocument::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value, got '" +
                      std::string(assignment) + "'");
  }
  set(std::string(trim(assignment.substr(0, dot))),
      std::string(trim(assignment.substr(dot + 1, eq - dot - 1))),
      std::string(trim(assignment.substr(eq + 1))));
}

const ConfigDocument::Entry* ConfigDocument::find(const std::string& section,
                                                  const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigDocument::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

RunSpec parse_config(const ConfigDocument& doc, std::optional<Command> command,
                     std::optional<FigureId> figure) {
  RunSpec spec;
  Reader r(doc, {});

  if (command) {
    spec.command = *command;
  } else if (auto c = r.convert("run", "command", [](const std::string& v) { return command_from_string(v); })) {
    spec.command = *c;
  }

  // cavity first: it fixes the scale for every SI value
  if (auto g = r.text("cavity", "gamma")) {
    units::UnitSystem hz;
    hz.gamma_hz = 1.0;
    const double v = *r.convert("cavity", "gamma", [&](const std::string& t) {
      const auto w = words(t);
      if (w.size() == 1) return units::parse_quantity(t, Dimension::dimensionless, hz, "cavity.gamma");
      // parse with gamma = 1 Hz so the result is in Hz
      return units::parse_quantity(t, Dimension::frequency, hz, "cavity.gamma");
    });
    if (!(v > 0.0)) r.fail("cavity", "gamma", "must be positive");
    spec.units.gamma_hz = v;
  }
  if (auto s = r.convert("cavity", "energy_scale", [](const std::string& v) { return units::energy_scale_from_string(v); })) {
    spec.units.energy_scale = *s;
  }
  r.set_units(spec.units);

  // model
  ModelDescriptor& m = spec.model;
  m.kind = r.convert("model", "kind", [](const std::string& v) { return model_kind_from_string(v); })
               .value_or(ModelKind::josephson);
  m.delta = r.quantity_or("model", "delta", Dimension::frequency, 0.0);
  m.phi0 = r.quantity_or("model", "phi0", Dimension::dimensionless, 0.0);
  m.kerr = r.quantity_or("model", "kerr", Dimension::frequency, 0.0);
  if (m.kind == ModelKind::josephson) {
    if (r.has("model", "drive")) r.fail("model", "drive", "josephson drive is given as 'ej'");
    m.drive = r.quantity_or("model", "ej", Dimension::energy, 0.0);
    if (!r.has("model", "phi0") && spec.command != Command::figure) {
      throw ConfigError("missing key 'model.phi0' (required for the josephson model)");
    }
  } else {
    if (r.has("model", "ej")) r.fail("model", "ej", "only the josephson model takes 'ej'");
    m.drive = r.quantity_or("model", "drive", Dimension::frequency, 0.0);
    if (m.kind == ModelKind::kerr && !r.has("model", "kerr")) {
      throw ConfigError("missing key 'model.kerr' (required for the kerr model)");
    }
  }
  if (spec.command != Command::figure) {
    try {
      m.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
  }

  // mechanics
  if (doc.has_section("mechanics")) {
    MechanicalMode mech;
    for (const char* key : {"omega_m", "g0"}) {
      if (!r.has("mechanics", key)) {
        throw ConfigError(std::string("missing key 'mechanics.") + key + "'");
      }
    }
    mech.omega_m = *r.quantity("mechanics", "omega_m", Dimension::frequency);
    mech.g0 = *r.quantity("mechanics", "g0", Dimension::frequency);
    mech.gamma_m = r.quantity_or("mechanics", "gamma_m", Dimension::frequency, mech.gamma_m);
    mech.nbar_T = r.quantity_or("mechanics", "nbar_T", Dimension::dimensionless, mech.nbar_T);
    try {
      mech.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("mechanics: ") + e.what());
    }
    spec.mech = mech;
  } else if (needs_mechanics(spec.command)) {
    throw ConfigError("command '" + std::string(to_string(spec.command)) +
                      "' needs a [mechanics] section");
  }

  // sweep
  spec.grid.model = spec.model;
  spec.grid.mech = spec.mech.value_or(MechanicalMode{});
  for (const char* key : {"axis1", "axis2"}) {
    if (auto a = r.convert("sweep", key, [&](const std::string& v) { return parse_axis(v, std::string("sweep.") + key); })) {
      spec.grid.axes.push_back(*a);
    }
  }
  if (auto p = r.convert("sweep", "policy", [](const std::string& v) { return branch_policy_from_string(v); })) {
    spec.grid.policy = *p;
  }
  if (auto o = r.convert("sweep", "outputs", [](const std::string& v) {
        std::vector<Quantity> out;
        for (auto item : split(v, ',')) out.push_back(quantity_from_string(item));
        return out;
      })) {
    spec.outputs = *o;
  } else {
    spec.outputs = all_quantities();
  }
  if (spec.command == Command::sweep) {
    if (spec.grid.axes.empty()) throw ConfigError("missing key 'sweep.axis1'");
    try {
      spec.grid.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("sweep: ") + e.what());
    }
  }

  // spectrum / damping frequency grid
  spec.spectrum.omega.min = r.quantity_or("spectrum", "omega_min", Dimension::frequency, spec.spectrum.omega.min);
  spec.spectrum.omega.max = r.quantity_or("spectrum", "omega_max", Dimension::frequency, spec.spectrum.omega.max);
  spec.spectrum.omega.count = r.integer("spectrum", "omega_count").value_or(spec.spectrum.omega.count);
  if (auto method = r.text("spectrum", "method")) {
    if (*method == "transform") {
      spec.spectrum.transform = true;
    } else if (*method != "closed") {
      r.fail("spectrum", "method", "expected closed or transform");
    }
  }
  if (auto p = r.convert("spectrum", "policy", [](const std::string& v) { return branch_policy_from_string(v); })) {
    spec.spectrum.policy = *p;
  }
  if (spec.spectrum.omega.count < 1 || !(spec.spectrum.omega.min <= spec.spectrum.omega.max)) {
    throw ConfigError("spectrum: need omega_min <= omega_max and omega_count >= 1");
  }

  // optimize
  spec.optimize.delta_range.lo = r.quantity_or("optimize", "delta_min", Dimension::frequency, spec.optimize.delta_range.lo);
  spec.optimize.delta_range.hi = r.quantity_or("optimize", "delta_max", Dimension::frequency, spec.optimize.delta_range.hi);
  if (auto p = r.convert("optimize", "policy", [](const std::string& v) { return branch_policy_from_string(v); })) {
    spec.optimize.policy = *p;
  }
  spec.optimize.scan_points = r.integer("optimize", "scan_points").value_or(spec.optimize.scan_points);
  spec.optimize.margin = r.quantity("optimize", "margin", Dimension::dimensionless);

  // design
  DesignOptions& d = spec.design;
  d.margin = r.quantity_or("design", "margin", Dimension::dimensionless, d.margin);
  if (auto ref = r.text("design", "reference")) {
    if (*ref == "resonance") {
      d.reference = ThresholdReference::resonance;
    } else if (*ref == "at_detuning") {
      d.reference = ThresholdReference::at_detuning;
    } else {
      r.fail("design", "reference", "expected at_detuning or resonance");
    }
  }
  d.explicit_drive = r.boolean("design", "explicit_drive").value_or(d.explicit_drive);
  d.optimize_detuning = r.boolean("design", "optimize_detuning").value_or(d.optimize_detuning);
  d.delta_range.lo = r.quantity_or("design", "delta_min", Dimension::frequency, d.delta_range.lo);
  d.delta_range.hi = r.quantity_or("design", "delta_max", Dimension::frequency, d.delta_range.hi);
  if (auto p = r.convert("design", "policy", [](const std::string& v) { return branch_policy_from_string(v); })) {
    d.policy = *p;
  }
  d.search.scan_points = r.integer("design", "scan_points").value_or(d.search.scan_points);
  d.search.tolerance = r.quantity_or("design", "tolerance", Dimension::frequency, d.search.tolerance);
  if (spec.command == Command::design) {
    if (m.kind != ModelKind::josephson) throw ConfigError("design needs the josephson model");
    if (d.explicit_drive && !r.has("model", "ej")) {
      throw ConfigError("missing key 'model.ej' (design.explicit_drive is set)");
    }
  }

  // figure
  if (figure) {
    spec.figure = *figure;
  } else if (auto id = r.convert("figure", "id", [](const std::string& v) { return figure_id_from_string(v); })) {
    spec.figure = *id;
  }
  FigureParams& f = spec.figure_params;
  f = figure_defaults(spec.figure);
  if (spec.mech) f.mech = *spec.mech;
  f.phi0 = r.quantity_or("figure", "phi0", Dimension::dimensionless, f.phi0);
  if (auto s = r.list("figure", "series")) f.series = *s;
  f.delta = r.quantity_or("figure", "delta", Dimension::frequency, f.delta);
  f.x.min = r.quantity_or("figure", "x_min", Dimension::dimensionless, f.x.min);
  f.x.max = r.quantity_or("figure", "x_max", Dimension::dimensionless, f.x.max);
  f.x.count = r.integer("figure", "x_count").value_or(f.x.count);
  f.x.log = r.boolean("figure", "x_log").value_or(f.x.log);
  f.delta_range.lo = r.quantity_or("figure", "delta_min", Dimension::frequency, f.delta_range.lo);
  f.delta_range.hi = r.quantity_or("figure", "delta_max", Dimension::frequency, f.delta_range.hi);
  f.scan_points = r.integer("figure", "scan_points").value_or(f.scan_points);
  f.threshold_points = r.integer("figure", "threshold_points").value_or(f.threshold_points);

  // output
  if (auto p = r.text("output", "path")) spec.output.path = *p;
  if (auto fmt_ = r.convert("output", "format", [](const std::string& v) { return output_format_from_string(v); })) {
    spec.output.format = *fmt_;
  }
  return spec;
}

RunSpec parse_config(std::string_view text) { return parse_config(ConfigDocument::parse(text)); }

std::string to_config(const RunSpec& s) {
  std::string out;
  auto section = [&](const char* name) { out += std::string(out.empty() ? "" : "\n") + "[" + name + "]\n"; };
  auto kv = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
  auto kb = [&](const char* key, bool v) { kv(key, v ? "true" : "false"); };

  section("run");
  kv("command", std::string(to_string(s.command)));

  section("cavity");
  if (s.units.has_scale()) kv("gamma", fmt(s.units.gamma_hz) + " Hz");
  kv("energy_scale", std::string(units::to_string(s.units.energy_scale)));

  section("model");
  kv("kind", std::string(to_string(s.model.kind)));
  kv("delta", fmt(s.model.delta));
  kv(s.model.kind == ModelKind::josephson ? "ej" : "drive", fmt(s.model.drive));
  kv("kerr", fmt(s.model.kerr));
  kv("phi0", fmt(s.model.phi0));

  if (s.mech) {
    section("mechanics");
    kv("omega_m", fmt(s.mech->omega_m));
    kv("gamma_m", fmt(s.mech->gamma_m));
    kv("g0", fmt(s.mech->g0));
    kv("nbar_T", fmt(s.mech->nbar_T));
  }

  section("sweep");
  for (std::size_t i = 0; i < s.grid.axes.size(); ++i) {
    kv(i == 0 ? "axis1" : "axis2", axis_text(s.grid.axes[i]));
  }
  kv("policy", std::string(to_string(s.grid.policy)));
  std::string outs;
  for (std::size_t i = 0; i < s.outputs.size(); ++i) {
    outs += (i ? ", " : "") + std::string(to_string(s.outputs[i]));
  }
  kv("outputs", outs);

  section("spectrum");
  kv("omega_min", fmt(s.spectrum.omega.min));
  kv("omega_max", fmt(s.spectrum.omega.max));
  kv("omega_count", std::to_string(s.spectrum.omega.count));
  kv("method", s.spectrum.transform ? "transform" : "closed");
  kv("policy", std::string(to_string(s.spectrum.policy)));

  section("optimize");
  kv("delta_min", fmt(s.optimize.delta_range.lo));
  kv("delta_max", fmt(s.optimize.delta_range.hi));
  kv("policy", std::string(to_string(s.optimize.policy)));
  kv("scan_points", std::to_string(s.optimize.scan_points));
  if (s.optimize.margin) kv("margin", fmt(*s.optimize.margin));

  section("design");
  kv("margin", fmt(s.design.margin));
  kv("reference", s.design.reference == ThresholdReference::resonance ? "resonance" : "at_detuning");
  kb("explicit_drive", s.design.explicit_drive);
  kb("optimize_detuning", s.design.optimize_detuning);
  kv("delta_min", fmt(s.design.delta_range.lo));
  kv("delta_max", fmt(s.design.delta_range.hi));
  kv("policy", std::string(to_string(s.design.policy)));
  kv("scan_points", std::to_string(s.design.search.scan_points));
  kv("tolerance", fmt(s.design.search.tolerance));

  section("figure");
  const FigureParams& f = s.figure_params;
  kv("id", std::string(to_string(s.figure)));
  kv("phi0", fmt(f.phi0));
  kv("series", join(f.series));
  kv("delta", fmt(f.delta));
  kv("x_min", fmt(f.x.min));
  kv("x_max", fmt(f.x.max));
  kv("x_count", std::to_string(f.x.count));
  kb("x_log", f.x.log);
  kv("delta_min", fmt(f.delta_range.lo));
  kv("delta_max", fmt(f.delta_range.hi));
  kv("scan_points", std::to_string(f.scan_points));
  kv("threshold_points", std::to_string(f.threshold_points));

  section("output");
  if (!s.output.path.empty()) kv("path", s.output.path);
  kv("format", s.output.format == OutputFormat::csv ? "csv" : "json");
  return out;
}

nlohmann::ordered_json run_meta(const RunSpec& spec) {
  nlohmann::ordered_json meta;
  meta["tool"] = "optocool";
  meta["version"] = std::string(kToolVersion);
  meta["command"] = std::string(to_string(spec.command));
  const std::string text = to_config(spec);
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  const ConfigDocument doc = ConfigDocument::parse(text);
  for (const auto& [section, keys] : doc.sections()) {
    for (const auto& [key, entry] : keys) echo[section][key] = entry.value;
  }
  meta["spec"] = echo;
  meta["config"] = text;
  return meta;
}

}  // namespace optocool
