#include "bbmsf/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace bbmsf {

double round_sig9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace {

ordered_json q(double value, const char* unit) {
  return ordered_json{{"value", round_sig9(value)}, {"unit", unit}};
}

ordered_json q(double value, const std::string& unit, const std::string& at) {
  return ordered_json{{"value", round_sig9(value)}, {"unit", unit}, {"at", at}};
}

ordered_json device_json(const DeviceStress& d) {
  return ordered_json{{"avg", q(d.avg, "A")}, {"peak", q(d.peak, "A")}, {"rms", q(d.rms, "A")}};
}

std::string fmt(const char* spec, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

ordered_json steady_state_json(const ConverterParams& p, const LoadModel& load,
                               const SteadyStateReport& r) {
  ordered_json load_j;
  if (const auto* res = std::get_if<ResistiveLoad>(&load)) {
    load_j = {{"type", "resistive"}, {"rl", q(res->rl, "ohm")}};
  } else {
    load_j = {{"type", "current_sink"}, {"io", q(std::get<CurrentSinkLoad>(load).io, "A")}};
  }
  ordered_json j;
  j["reset_duty_model"] = std::string(to_string(r.model));
  j["converter"] = {{"vi", q(p.vi, "V")},  {"n", q(p.n, "1")},     {"nd", q(p.nd, "1")},
                    {"l", q(p.l, "H")},    {"lm", q(p.lm, "H")},   {"co", q(p.co, "F")},
                    {"fsw", q(p.fsw, "Hz")}, {"d", q(p.d, "1")}};
  j["load"] = load_j;
  j["regime"] = {{"ccm", r.ccm}, {"reset_completes", r.reset_completes}};
  j["operating_point"] = {{"vo", q(r.vo, "V")}, {"po", q(r.po, "W")}, {"d2", q(r.d2, "1")}};
  j["output_inductor"] = {{"il_avg", q(r.il_avg, "A")}, {"dil", q(r.dil, "A")},
                          {"il_peak", q(r.il_peak, "A")}, {"il_min", q(r.il_min, "A")},
                          {"il_rms", q(r.il_rms, "A")},   {"v_l_on", q(r.v_l_on, "V")},
                          {"v_l_off", q(r.v_l_off, "V")}};
  j["magnetizing"] = {{"dilm", q(r.dilm, "A")},       {"ilm_avg", q(r.ilm_avg, "A")},
                      {"ilm_peak", q(r.ilm_peak, "A")}, {"ilm_rms", q(r.ilm_rms, "A")},
                      {"v_lm_on", q(r.v_lm_on, "V")}, {"v_lm_off1", q(r.v_lm_off1, "V")}};
  auto s = device_json(r.s);
  s["avg_printed_formula"] = q(r.i_s_avg_printed, "A");
  s["v_off1"] = q(r.v_s_off1, "V");
  s["v_off2"] = q(r.v_s_off2, "V");
  auto d1 = device_json(r.d1);
  d1["v_block"] = q(r.v_d1, "V");
  auto d2 = device_json(r.d2_diode);
  d2["v_block"] = q(r.v_d2, "V");
  auto dd = device_json(r.dd);
  dd["avg_without_half"] = q(r.i_dd_avg_printed, "A");
  dd["v_on"] = q(r.v_dd_on, "V");
  dd["v_off2"] = q(r.v_dd_off2, "V");
  j["devices"] = {{"S", s}, {"D1", d1}, {"D2", d2}, {"Dd", dd}};
  j["windings"] = {{"i_pri_rms", q(r.i_pri_rms, "A")},
                   {"i_sec_rms", q(r.i_sec_rms, "A")},
                   {"i_ter_rms", q(r.i_ter_rms, "A")}};
  j["capacitors"] = {{"i_co_rms", q(r.i_co_rms, "A")}, {"i_ci_rms", q(r.i_ci_rms, "A")}};
  j["power_split"] = {{"p_notmag_fraction", q(r.p_notmag_fraction, "1")},
                      {"p_mag_fraction", q(r.p_mag_fraction, "1")}};
  return j;
}

ordered_json loss_json(const LossReport& losses, const std::string& at) {
  ordered_json comps = ordered_json::object();
  for (const auto& c : losses.components) comps[c.component] = q(c.watts, "W", at);
  return ordered_json{{"at", at},
                      {"components", comps},
                      {"total", q(losses.total, "W", at)},
                      {"efficiency", q(losses.efficiency, "1", at)},
                      {"largest", losses.largest().component}};
}

ordered_json design_report_json(const DesignRequest& req) {
  ordered_json j;
  j["reset_duty_model"] = std::string(to_string(req.reset_duty_model));

  ordered_json ops = ordered_json::array();
  ordered_json feas = ordered_json::array();
  std::vector<OperatingPointRequest> feasible;
  for (const auto& pt : req.points) {
    ordered_json f{{"at", pt.label}};
    try {
      const auto op = solve_operating_point(req.spec, pt, req.base.n, req.base.nd);
      ConverterParams p = req.base;
      p.vi = op.vi;
      p.d = op.d;
      const auto r = device_stresses(p, op.po, req.reset_duty_model);
      ops.push_back({{"label", op.label},
                     {"vi", q(op.vi, "V", op.label)},
                     {"vo", q(op.vo, "V", op.label)},
                     {"po", q(op.po, "W", op.label)},
                     {"d", q(op.d, "1", op.label)},
                     {"i_string", q(op.i_string, "A", op.label)}});
      f["feasible"] = r.ccm && r.reset_completes;
      f["duty"] = q(op.d, "1", op.label);
      f["reset_feasible"] = reset_feasible(req.base.nd, op.d);
      f["reset_completes"] = r.reset_completes;
      f["ccm"] = r.ccm;
      feasible.push_back(pt);
    } catch (const DesignError& e) {
      f["feasible"] = false;
      f["reason"] = e.what();
    }
    feas.push_back(f);
  }
  j["operating_points"] = ops;

  if (!feasible.empty()) {
    const auto env = stress_envelope(req.spec, feasible, req.base, req.reset_duty_model);
    ordered_json qs = ordered_json::object();
    for (const auto& e : env.entries) {
      auto v = q(e.value, e.unit, e.at);
      if (e.unit == "V") v["derated"] = round_sig9(e.derated);
      qs[e.name] = v;
    }
    j["stress_envelope"] = {{"voltage_safety_margin", q(env.voltage_safety_margin, "1")},
                            {"quantities", qs},
                            {"v_ci_rated", q(env.v_ci_rated.value, "V", env.v_ci_rated.at)},
                            {"v_co_rated", q(env.v_co_rated.value, "V", env.v_co_rated.at)}};

    ordered_json losses = ordered_json::array();
    if (req.parasitics) {
      for (const auto& op : env.points) {
        ConverterParams p = req.base;
        p.vi = op.vi;
        p.d = op.d;
        losses.push_back(
            loss_json(conduction_losses(p, op.po, *req.parasitics, req.reset_duty_model), op.label));
      }
    }
    j["losses"] = losses;
  } else {
    j["stress_envelope"] = nullptr;
    j["losses"] = ordered_json::array();
  }

  ordered_json fs{{"points", feas}};
  if (req.output_ripple && !feasible.empty()) {
    // Size against the largest inductor ripple among the feasible points.
    double co_min = 0.0;
    std::string at;
    for (const auto& pt : feasible) {
      ConverterParams p = req.base;
      p.vi = pt.vi;
      p.d = pt.vo / ((1.0 + p.n) * pt.vi);
      const double c = output_capacitor_minimum(p, *req.output_ripple);
      if (c > co_min) {
        co_min = c;
        at = pt.label;
      }
    }
    fs["output_capacitor_minimum"] = q(co_min, "F", at);
    fs["output_capacitor_ok"] = req.base.co >= co_min;
  }
  fs["input_capacitor_minimum_reference"] = q(kReferenceInputCapacitorMinimum, "F", "reference design");
  j["feasibility"] = fs;
  return j;
}

ordered_json scenario_json(const ScenarioResult& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& e : r.entries) {
    rows.push_back({{"label", e.label},
                    {"count", round_sig9(e.count)},
                    {"power", q(e.p_pv, "W")},
                    {"v_pv", q(e.v_pv, "V")},
                    {"v_o", q(e.vo, "V")},
                    {"i_string", q(e.i_string, "A")},
                    {"duty", q(e.duty, "1")},
                    {"mode", e.steps_up ? "step-up" : "step-down"},
                    {"duty_feasible", e.duty_feasible},
                    {"reset_feasible", e.reset_feasible}});
  }
  return ordered_json{{"v_string", q(r.v_string, "V")},
                      {"p_string", q(r.p_string, "W")},
                      {"i_string", q(r.i_string, "A")},
                      {"entries", rows}};
}

std::string scenario_csv(const ScenarioResult& r) {
  std::ostringstream os;
  os << "label,count,power_w,v_pv_v,v_o_v,i_string_a,duty,mode,feasible\n";
  for (const auto& e : r.entries) {
    os << e.label << ',' << fmt("%.9g", e.count) << ',' << fmt("%.9g", e.p_pv) << ','
       << fmt("%.9g", e.v_pv) << ',' << fmt("%.9g", e.vo) << ',' << fmt("%.9g", e.i_string) << ','
       << fmt("%.9g", e.duty) << ',' << (e.steps_up ? "step-up" : "step-down") << ','
       << ((e.duty_feasible && e.reset_feasible) ? "yes" : "no") << '\n';
  }
  return os.str();
}

std::string waveform_csv(const PeriodicWaveform& w) {
  const auto& cols = PeriodicWaveform::csv_columns();
  std::vector<std::vector<double>> signals;
  signals.reserve(cols.size());
  for (const auto& c : cols) signals.push_back(w.signal(c));

  std::string out = "t,interval";
  for (const auto& c : cols) out += "," + c;
  out += '\n';
  for (size_t i = 0; i < w.samples.size(); ++i) {
    out += fmt("%.17g", w.samples[i].t);
    out += ',';
    out += to_string(w.samples[i].interval);
    for (const auto& s : signals) {
      out += ',';
      out += fmt("%.17g", s[i]);
    }
    out += '\n';
  }
  return out;
}

std::string bode_csv(const std::vector<FrequencyResponse>& responses) {
  std::string out = "f_hz,mag_db,phase_deg,kind,method\n";
  for (const auto& r : responses) {
    const auto phase = unwrapped_phase_deg(r.points);
    for (size_t i = 0; i < r.points.size(); ++i) {
      out += fmt("%.9g", r.points[i].f) + ',' + fmt("%.9g", magnitude_db(r.points[i].gain)) + ',' +
             fmt("%.9g", phase[i]) + ',' + std::string(to_string(r.kind)) + ',' +
             std::string(to_string(r.method)) + '\n';
    }
  }
  return out;
}

}  // namespace bbmsf
