#include "bbmsf/design_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace bbmsf {

namespace {

void check_range(std::vector<Violation>& v, const char* name, const Range& r, bool positive) {
  if (!(r.min <= r.max)) {
    v.push_back({name, std::string(name) + " must satisfy min <= max"});
  }
  if (positive && !(r.min > 0.0)) {
    v.push_back({name, std::string(name) + " must be positive"});
  }
}

bool within(double x, const Range& r, double rel_tol = 1e-9) {
  const double slack = rel_tol * std::max(std::abs(r.min), std::abs(r.max));
  return x >= r.min - slack && x <= r.max + slack;
}

struct Quantity {
  const char* name;
  const char* unit;
  std::function<double(const SteadyStateReport&)> get;
  bool voltage;
};

const std::vector<Quantity>& quantity_table() {
  static const std::vector<Quantity> table{
      {"v_s_off1", "V", [](const auto& r) { return r.v_s_off1; }, true},
      {"v_s_off2", "V", [](const auto& r) { return r.v_s_off2; }, true},
      {"v_d1", "V", [](const auto& r) { return r.v_d1; }, true},
      {"v_d2", "V", [](const auto& r) { return r.v_d2; }, true},
      {"v_dd_on", "V", [](const auto& r) { return r.v_dd_on; }, true},
      {"v_dd_off2", "V", [](const auto& r) { return r.v_dd_off2; }, true},
      {"v_l_on", "V", [](const auto& r) { return r.v_l_on; }, true},
      {"v_l_off", "V", [](const auto& r) { return std::abs(r.v_l_off); }, true},
      {"v_lm_on", "V", [](const auto& r) { return r.v_lm_on; }, true},
      {"v_lm_off1", "V", [](const auto& r) { return r.v_lm_off1; }, true},
      {"i_s_avg", "A", [](const auto& r) { return r.s.avg; }, false},
      {"i_s_avg_printed", "A", [](const auto& r) { return r.i_s_avg_printed; }, false},
      {"i_s_peak", "A", [](const auto& r) { return r.s.peak; }, false},
      {"i_s_rms", "A", [](const auto& r) { return r.s.rms; }, false},
      {"i_d1_avg", "A", [](const auto& r) { return r.d1.avg; }, false},
      {"i_d1_peak", "A", [](const auto& r) { return r.d1.peak; }, false},
      {"i_d1_rms", "A", [](const auto& r) { return r.d1.rms; }, false},
      {"i_d2_avg", "A", [](const auto& r) { return r.d2_diode.avg; }, false},
      {"i_d2_peak", "A", [](const auto& r) { return r.d2_diode.peak; }, false},
      {"i_d2_rms", "A", [](const auto& r) { return r.d2_diode.rms; }, false},
      {"i_dd_avg", "A", [](const auto& r) { return r.dd.avg; }, false},
      {"i_dd_avg_printed", "A", [](const auto& r) { return r.i_dd_avg_printed; }, false},
      {"i_dd_peak", "A", [](const auto& r) { return r.dd.peak; }, false},
      {"i_dd_rms", "A", [](const auto& r) { return r.dd.rms; }, false},
      {"il_avg", "A", [](const auto& r) { return r.il_avg; }, false},
      {"dil", "A", [](const auto& r) { return r.dil; }, false},
      {"il_peak", "A", [](const auto& r) { return r.il_peak; }, false},
      {"il_rms", "A", [](const auto& r) { return r.il_rms; }, false},
      {"dilm", "A", [](const auto& r) { return r.dilm; }, false},
      {"ilm_avg", "A", [](const auto& r) { return r.ilm_avg; }, false},
      {"ilm_rms", "A", [](const auto& r) { return r.ilm_rms; }, false},
      {"i_pri_rms", "A", [](const auto& r) { return r.i_pri_rms; }, false},
      {"i_sec_rms", "A", [](const auto& r) { return r.i_sec_rms; }, false},
      {"i_ter_rms", "A", [](const auto& r) { return r.i_ter_rms; }, false},
      {"i_co_rms", "A", [](const auto& r) { return r.i_co_rms; }, false},
      {"i_ci_rms", "A", [](const auto& r) { return r.i_ci_rms; }, false},
      {"d2", "1", [](const auto& r) { return r.d2; }, false},
  };
  return table;
}

}  // namespace

ValidationResult validate_design_spec(const DesignSpec& spec) {
  ValidationResult r;
  auto& v = r.violations;
  check_range(v, "vi_range", spec.vi_range, true);
  check_range(v, "vo_range", spec.vo_range, true);
  check_range(v, "d_range", spec.d_range, false);
  check_range(v, "po_range", spec.po_range, true);
  if (spec.d_range.min < 0.0 || spec.d_range.max >= 1.0) {
    v.push_back({"d_range", "d_range must lie within [0, 1)"});
  }
  if (!(spec.vo_tolerance >= 0.0)) v.push_back({"vo_tolerance", "vo_tolerance must be >= 0"});
  if (!(spec.voltage_safety_margin >= 0.0)) {
    v.push_back({"voltage_safety_margin", "voltage_safety_margin must be >= 0"});
  }
  return r;
}

OperatingPoint solve_operating_point(const DesignSpec& spec, const OperatingPointRequest& req,
                                     double n, double nd) {
  char buf[256];
  if (!(req.vi > 0.0) || !(req.vo > 0.0) || !(req.po > 0.0)) {
    throw DesignError(DesignError::Kind::OutOfRange, "operating point '" + req.label +
                                                         "': vi, vo and po must be positive");
  }
  const double d = req.vo / ((1.0 + n) * req.vi);
  if (d >= 1.0 || d > spec.d_range.max) {
    std::snprintf(buf, sizeof buf, "operating point '%s': required d = %.6g exceeds d_max = %.6g",
                  req.label.c_str(), d, spec.d_range.max);
    throw DesignError(DesignError::Kind::InfeasibleDuty, buf);
  }
  if (!reset_feasible(nd, d)) {
    std::snprintf(buf, sizeof buf,
                  "operating point '%s': transformer reset fails at d = %.6g (nd = %.6g > "
                  "(1 - d) / d = %.6g)",
                  req.label.c_str(), d, nd, (1.0 - d) / d);
    throw DesignError(DesignError::Kind::ResetInfeasible, buf);
  }
  const Range vo_widened{spec.vo_range.min * (1.0 - spec.vo_tolerance),
                         spec.vo_range.max * (1.0 + spec.vo_tolerance)};
  if (!within(req.vi, spec.vi_range) || !within(req.vo, vo_widened) ||
      !within(req.po, spec.po_range) || d < spec.d_range.min) {
    std::snprintf(buf, sizeof buf,
                  "operating point '%s' (vi = %.6g V, vo = %.6g V, po = %.6g W) is outside the "
                  "design specification",
                  req.label.c_str(), req.vi, req.vo, req.po);
    throw DesignError(DesignError::Kind::OutOfRange, buf);
  }
  const double i = req.po / req.vo;
  return {req.label, req.vi, req.vo, req.po, d, i, i};
}

const std::vector<std::string>& envelope_quantities() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& q : quantity_table()) out.emplace_back(q.name);
    return out;
  }();
  return names;
}

double envelope_quantity(const SteadyStateReport& r, const std::string& name) {
  for (const auto& q : quantity_table()) {
    if (name == q.name) return q.get(r);
  }
  throw DomainError("unknown envelope quantity '" + name + "'");
}

const EnvelopeEntry& StressEnvelope::get(const std::string& name) const {
  if (name == "v_ci_rated") return v_ci_rated;
  if (name == "v_co_rated") return v_co_rated;
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw DomainError("unknown envelope quantity '" + name + "'");
}

StressEnvelope stress_envelope(const DesignSpec& spec,
                               const std::vector<OperatingPointRequest>& points,
                               const ConverterParams& base, ResetDutyModel model) {
  const auto validation = validate_design_spec(spec);
  if (!validation.ok()) throw DomainError("invalid design spec:\n" + validation.summary());
  if (points.empty()) throw DomainError("stress_envelope: no operating points");

  StressEnvelope env;
  env.voltage_safety_margin = spec.voltage_safety_margin;
  for (const auto& req : points) {
    const auto op = solve_operating_point(spec, req, base.n, base.nd);
    ConverterParams p = base;
    p.vi = op.vi;
    p.d = op.d;
    env.points.push_back(op);
    env.reports.push_back(device_stresses(p, op.po, model));
  }

  const double k = 1.0 + spec.voltage_safety_margin;
  for (const auto& q : quantity_table()) {
    EnvelopeEntry e{q.name, q.unit, -INFINITY, "", 0.0};
    for (size_t i = 0; i < env.reports.size(); ++i) {
      const double v = q.get(env.reports[i]);
      if (v > e.value) {
        e.value = v;
        e.at = env.points[i].label;
      }
    }
    e.derated = q.voltage ? e.value * k : e.value;
    env.entries.push_back(std::move(e));
  }

  const auto vi_max = std::max_element(env.points.begin(), env.points.end(),
                                       [](const auto& a, const auto& b) { return a.vi < b.vi; });
  const auto vo_max = std::max_element(env.points.begin(), env.points.end(),
                                       [](const auto& a, const auto& b) { return a.vo < b.vo; });
  env.v_ci_rated = {"v_ci_rated", "V", vi_max->vi * k, vi_max->label, vi_max->vi * k};
  env.v_co_rated = {"v_co_rated", "V", vo_max->vo * k, vo_max->label, vo_max->vo * k};
  return env;
}

const ComponentLoss& LossReport::largest() const {
  return *std::max_element(components.begin(), components.end(),
                           [](const auto& a, const auto& b) { return a.watts < b.watts; });
}

LossReport conduction_losses(const ConverterParams& p, double po, const Parasitics& x,
                             ResetDutyModel model) {
  const auto v = validate_parasitics(x);
  if (!v.ok()) throw DomainError("invalid parasitics:\n" + v.summary());
  const auto r = device_stresses(p, po, model);
  LossReport out;
  out.po = po;
  out.components = {
      {"S", x.rds_on * r.s.rms * r.s.rms},
      {"D1", x.vf_d1 * r.d1.avg},
      {"D2", x.vf_d2 * r.d2_diode.avg},
      {"Dd", x.vf_dd * r.dd.avg},
      {"L", x.dcr_l * r.il_rms * r.il_rms},
      {"primary", x.dcr_pri * r.i_pri_rms * r.i_pri_rms},
      {"secondary", x.dcr_sec * r.i_sec_rms * r.i_sec_rms},
      {"tertiary", x.dcr_ter * r.i_ter_rms * r.i_ter_rms},
  };
  for (const auto& c : out.components) out.total += c.watts;
  out.efficiency = po / (po + out.total);
  return out;
}

double output_capacitor_minimum(const ConverterParams& p, double dvo_max) {
  if (!(dvo_max > 0.0)) throw DomainError("output_capacitor_minimum: dvo_max must be positive");
  return inductor_ripple(p) / (8.0 * p.fsw * dvo_max);
}

}  // namespace bbmsf
