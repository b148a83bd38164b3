#include "bbmsf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bbmsf {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "configuration error";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Reads fields of one JSON object, recording every problem instead of
// stopping at the first. Keys never touched are reported as unknown.
class Fields {
 public:
  Fields(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      fail(path_.empty() ? "document" : path_, "must be a JSON object");
      valid_ = false;
    }
  }

  ~Fields() {
    if (!valid_) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) fail(qualified(key), "unknown field");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return valid_ && obj_.contains(key);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback && valid_) fail(qualified(key), "missing required number");
      return fallback.value_or(0.0);
    }
    const auto& v = obj_.at(key);
    if (!v.is_number()) {
      fail(qualified(key), "must be a number");
      return 0.0;
    }
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) {
      fail(qualified(key), "must be an integer");
      return fallback;
    }
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) {
      fail(qualified(key), "must be a boolean");
      return fallback;
    }
    return v.get<bool>();
  }

  std::optional<std::string> text(const std::string& key, bool required = false) {
    if (!has(key)) {
      if (required && valid_) fail(qualified(key), "missing required string");
      return std::nullopt;
    }
    const auto& v = obj_.at(key);
    if (!v.is_string()) {
      fail(qualified(key), "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  Range range(const std::string& key) {
    if (!has(key)) {
      if (valid_) fail(qualified(key), "missing required [min, max] array");
      return {};
    }
    const auto& v = obj_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(qualified(key), "must be a [min, max] array of two numbers");
      return {};
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  const json* child(const std::string& key, bool required) {
    if (!has(key)) {
      if (required && valid_) fail(qualified(key), "missing required object");
      return nullptr;
    }
    return &obj_.at(key);
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void fail(const std::string& where, const std::string& what) {
    errors_.push_back(where + ": " + what);
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("invalid JSON: ") + e.what()});
  }
}

void append_violations(std::vector<std::string>& errors, const std::string& prefix,
                       const ValidationResult& v) {
  for (const auto& x : v.violations) {
    errors.push_back((prefix.empty() ? x.field : prefix + "." + x.field) + ": " + x.message);
  }
}

template <typename E>
E parse_enum(Fields& f, const std::string& key, E fallback, E (*from)(std::string_view),
             std::vector<std::string>& errors) {
  const auto name = f.text(key);
  if (!name) return fallback;
  try {
    return from(*name);
  } catch (const DomainError& e) {
    errors.push_back(f.qualified(key) + ": " + e.what());
    return fallback;
  }
}

Parasitics read_parasitics(const json& j, std::vector<std::string>& errors) {
  Fields f(j, "parasitics", errors);
  Parasitics x;
  x.rds_on = f.number("rds_on", 0.0);
  x.vf_d1 = f.number("vf_d1", 0.0);
  x.vf_d2 = f.number("vf_d2", 0.0);
  x.vf_dd = f.number("vf_dd", 0.0);
  x.dcr_l = f.number("dcr_l", 0.0);
  x.dcr_pri = f.number("dcr_pri", 0.0);
  x.dcr_sec = f.number("dcr_sec", 0.0);
  x.dcr_ter = f.number("dcr_ter", 0.0);
  return x;
}

// Converter fields; vi and d are optional when the caller supplies them per
// operating point.
ConverterParams read_converter(const json& j, bool with_operating_point,
                               std::vector<std::string>& errors) {
  Fields f(j, "converter", errors);
  ConverterParams p;
  if (with_operating_point) {
    p.vi = f.number("vi");
    p.d = f.number("d");
  }
  p.n = f.number("n");
  p.nd = f.number("nd");
  p.l = f.number("l");
  p.lm = f.number("lm");
  p.co = f.number("co");
  p.fsw = f.number("fsw");
  return p;
}

void throw_if(std::vector<std::string>& errors) {
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  RunConfig cfg;
  {
    Fields root(doc, "", errors);
    if (const auto* c = root.child("converter", true)) {
      cfg.converter = read_converter(*c, true, errors);
    }
    if (const auto* l = root.child("load", true)) {
      Fields f(*l, "load", errors);
      const auto type = f.text("type", true).value_or("");
      if (type == "resistive") {
        cfg.load = ResistiveLoad{f.number("rl")};
        if (f.has("io")) f.fail("load.io", "not valid for a resistive load");
      } else if (type == "current_sink") {
        cfg.load = CurrentSinkLoad{f.number("io")};
        if (f.has("rl")) f.fail("load.rl", "not valid for a current-sink load");
      } else {
        if (!type.empty()) f.fail("load.type", "must be \"resistive\" or \"current_sink\"");
        f.has("rl");
        f.has("io");
      }
    }
    if (const auto* s = root.child("sim", false)) {
      Fields f(*s, "sim", errors);
      const SimConfig defaults;
      cfg.sim.steps_per_period = f.integer("steps_per_period", defaults.steps_per_period);
      cfg.sim.max_periods = f.integer("max_periods", defaults.max_periods);
      cfg.sim.periodicity_tol = f.number("periodicity_tol", defaults.periodicity_tol);
      cfg.sim.event_tol = f.number("event_tol", defaults.event_tol);
      cfg.sim.reset_voltage_model =
          parse_enum(f, "reset_voltage_model", defaults.reset_voltage_model,
                     &reset_voltage_model_from_string, errors);
    }
    if (const auto* x = root.child("parasitics", false)) cfg.parasitics = read_parasitics(*x, errors);
    cfg.reset_duty_model = parse_enum(root, "reset_duty_model", ResetDutyModel::Stacked,
                                      &reset_duty_model_from_string, errors);
    if (const auto* o = root.child("outputs", false)) {
      Fields f(*o, "outputs", errors);
      cfg.outputs.report = f.text("report").value_or("");
      cfg.outputs.waveform = f.text("waveform").value_or("");
      cfg.outputs.bode = f.text("bode").value_or("");
    }
  }
  throw_if(errors);

  // Type-level parsing succeeded; now the value invariants.
  const auto p_load = validate_params(cfg.converter, cfg.load);
  for (const auto& x : p_load.violations) {
    const bool is_load = x.field == "rl" || x.field == "io";
    errors.push_back((is_load ? "load." : "converter.") + x.field + ": " + x.message);
  }
  append_violations(errors, "sim", validate_sim_config(cfg.sim));
  if (cfg.parasitics) append_violations(errors, "parasitics", validate_parasitics(*cfg.parasitics));
  throw_if(errors);
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

DesignRequest parse_design_request(const std::string& json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  DesignRequest req;
  {
    Fields root(doc, "", errors);
    if (const auto* s = root.child("spec", true)) {
      Fields f(*s, "spec", errors);
      req.spec.vi_range = f.range("vi_range");
      req.spec.vo_range = f.range("vo_range");
      req.spec.d_range = f.range("d_range");
      req.spec.po_range = f.range("po_range");
      req.spec.vo_tolerance = f.number("vo_tolerance", 0.0);
      req.spec.voltage_safety_margin = f.number("voltage_safety_margin", 0.20);
    }
    if (const auto* c = root.child("converter", true)) req.base = read_converter(*c, false, errors);
    if (const auto* pts = root.child("operating_points", true)) {
      if (!pts->is_array() || pts->empty()) {
        errors.push_back("operating_points: must be a non-empty array");
      } else {
        for (size_t i = 0; i < pts->size(); ++i) {
          Fields f((*pts)[i], "operating_points[" + std::to_string(i) + "]", errors);
          OperatingPointRequest op;
          op.label = f.text("label").value_or("P" + std::to_string(i));
          op.vi = f.number("vi");
          op.vo = f.number("vo");
          op.po = f.number("po");
          req.points.push_back(op);
        }
      }
    }
    if (const auto* x = root.child("parasitics", false)) req.parasitics = read_parasitics(*x, errors);
    req.reset_duty_model = parse_enum(root, "reset_duty_model", ResetDutyModel::Stacked,
                                      &reset_duty_model_from_string, errors);
    if (root.has("output_ripple")) req.output_ripple = root.number("output_ripple");
  }
  throw_if(errors);

  append_violations(errors, "spec", validate_design_spec(req.spec));
  ConverterParams probe = req.base;
  probe.vi = 1.0;
  probe.d = 0.5;
  for (const auto& x : validate_params(probe, ResistiveLoad{1.0}).violations) {
    errors.push_back("converter." + x.field + ": " + x.message);
  }
  if (req.parasitics) append_violations(errors, "parasitics", validate_parasitics(*req.parasitics));
  if (req.output_ripple && !(*req.output_ripple > 0.0)) {
    errors.push_back("output_ripple: must be positive");
  }
  throw_if(errors);
  return req;
}

DesignRequest load_design_request(const std::string& path) {
  return parse_design_request(read_text_file(path));
}

ScenarioConfig parse_scenario_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  {
    Fields root(doc, "", errors);
    cfg.scenario.v_string = root.number("v_string");
    cfg.scenario.integer_counts = root.boolean("integer_counts", false);
    cfg.n = root.number("n");
    cfg.nd = root.number("nd");
    cfg.d_max = root.number("d_max");
    if (const auto* e = root.child("entries", true)) {
      if (!e->is_array()) {
        errors.push_back("entries: must be an array");
      } else {
        for (size_t i = 0; i < e->size(); ++i) {
          Fields f((*e)[i], "entries[" + std::to_string(i) + "]", errors);
          StringEntry entry;
          entry.panel.p_mpp = f.number("p_mpp");
          entry.panel.v_mpp = f.number("v_mpp");
          entry.count = f.number("count");
          entry.panel.label = f.text("label").value_or("entry" + std::to_string(i));
          entry.efficiency = f.number("efficiency", 1.0);
          cfg.scenario.entries.push_back(entry);
        }
      }
    }
  }
  throw_if(errors);
  append_violations(errors, "", validate_scenario(cfg.scenario));
  if (!(cfg.n > 0.0)) errors.push_back("n: must be positive");
  if (!(cfg.nd > 0.0)) errors.push_back("nd: must be positive");
  if (!(cfg.d_max > 0.0 && cfg.d_max < 1.0)) errors.push_back("d_max: must satisfy 0 < d_max < 1");
  throw_if(errors);
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  return parse_scenario_config(read_text_file(path));
}

}  // namespace bbmsf
