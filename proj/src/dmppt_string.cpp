#include "bbmsf/dmppt_string.hpp"

#include <cmath>
#include <cstdio>

namespace bbmsf {

ValidationResult validate_scenario(const StringScenario& sc) {
  ValidationResult r;
  auto& v = r.violations;
  if (!(sc.v_string > 0.0)) v.push_back({"v_string", "v_string must be positive"});
  if (sc.entries.empty()) v.push_back({"entries", "at least one entry is required"});
  double total = 0.0;
  for (size_t i = 0; i < sc.entries.size(); ++i) {
    const auto& e = sc.entries[i];
    const std::string prefix = "entries[" + std::to_string(i) + "].";
    if (!(e.panel.p_mpp > 0.0)) v.push_back({prefix + "p_mpp", "p_mpp must be positive"});
    if (!(e.panel.v_mpp > 0.0)) v.push_back({prefix + "v_mpp", "v_mpp must be positive"});
    if (!(e.count >= 0.0)) v.push_back({prefix + "count", "count must be non-negative"});
    if (sc.integer_counts && e.count != std::floor(e.count)) {
      v.push_back({prefix + "count", "count must be an integer in integer-count mode"});
    }
    if (!(e.efficiency > 0.0 && e.efficiency <= 1.0)) {
      v.push_back({prefix + "efficiency", "efficiency must satisfy 0 < efficiency <= 1"});
    }
    total += e.count;
  }
  if (!sc.entries.empty() && !(total > 0.0)) {
    v.push_back({"entries", "total panel count must be positive"});
  }
  return r;
}

bool ScenarioResult::all_feasible() const {
  for (const auto& e : entries) {
    if (!e.duty_feasible || !e.reset_feasible) return false;
  }
  return true;
}

double string_current(double p_string, double v_string) {
  if (!(v_string > 0.0)) throw DomainError("string_current: v_string must be positive");
  return p_string / v_string;
}

double converter_output_voltage(double p_pv, double p_string, double v_string) {
  if (!(p_string > 0.0)) throw DomainError("converter_output_voltage: p_string must be positive");
  return p_pv / p_string * v_string;
}

ScenarioResult evaluate_scenario(const StringScenario& sc, double n, double nd, double d_max) {
  const auto validation = validate_scenario(sc);
  if (!validation.ok()) throw DomainError("invalid scenario:\n" + validation.summary());

  ScenarioResult out;
  out.v_string = sc.v_string;
  for (const auto& e : sc.entries) out.p_string += e.count * e.efficiency * e.panel.p_mpp;
  out.i_string = string_current(out.p_string, sc.v_string);

  for (const auto& e : sc.entries) {
    EntryResult r;
    r.label = e.panel.label;
    r.p_pv = e.panel.p_mpp;
    r.v_pv = e.panel.v_mpp;
    r.count = e.count;
    r.vo = converter_output_voltage(e.efficiency * e.panel.p_mpp, out.p_string, sc.v_string);
    r.i_string = out.i_string;
    r.duty = r.vo / ((1.0 + n) * r.v_pv);
    if (r.duty >= 1.0) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "entry '%s' requires d = %.6g >= 1 to reach %.6g V",
                    r.label.c_str(), r.duty, r.vo);
      throw DomainError(buf);
    }
    r.steps_up = r.vo > r.v_pv;
    r.duty_feasible = r.duty <= d_max;
    r.reset_feasible = reset_feasible(nd, r.duty);
    out.entries.push_back(std::move(r));
  }
  return out;
}

}  // namespace bbmsf
