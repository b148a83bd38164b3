#include "bbmsf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "bbmsf/case_study.hpp"
#include "bbmsf/small_signal.hpp"

namespace bbmsf {

bool VerifyReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return !r.gated || r.pass; });
}

namespace {

class Rows {
 public:
  explicit Rows(std::vector<CheckRow>& out) : out_(out) {}

  void rel(const std::string& id, const std::string& name, double measured, double expected,
           double tol, const std::string& note = "") {
    const double err = std::abs(measured - expected) / std::abs(expected);
    out_.push_back({id, name, measured, expected, tol, "rel", err <= tol, true, note});
  }

  void abs(const std::string& id, const std::string& name, double measured, double expected,
           double tol, const std::string& note = "") {
    out_.push_back(
        {id, name, measured, expected, tol, "abs", std::abs(measured - expected) <= tol, true, note});
  }

  // Passes when measured < bound.
  void below(const std::string& id, const std::string& name, double measured, double bound,
             const std::string& note = "") {
    out_.push_back({id, name, measured, bound, bound, "max", measured < bound, true, note});
  }

  void above(const std::string& id, const std::string& name, double measured, double bound,
             const std::string& note = "") {
    out_.push_back({id, name, measured, bound, bound, "min", measured > bound, true, note});
  }

  void flag(const std::string& id, const std::string& name, bool ok, const std::string& note = "") {
    out_.push_back({id, name, ok ? 1.0 : 0.0, 1.0, 0.0, "bool", ok, true, note});
  }

  void info(const std::string& id, const std::string& name, double measured, double expected,
            const std::string& note = "") {
    out_.push_back({id, name, measured, expected, 0.0, "info", true, false, note});
  }

  void error(const std::string& id, const std::string& name, const std::string& what) {
    out_.push_back({id, name, NAN, NAN, 0.0, "bool", false, true, what});
  }

 private:
  std::vector<CheckRow>& out_;
};

std::string fmt(const char* spec, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, spec, a);
  return buf;
}

LoadModel resistive_for(double vo, double po) { return ResistiveLoad{vo * vo / po}; }

// Random converter in CCM with a completed reset, for the physics checks.
struct Draw {
  ConverterParams p;
  LoadModel load;
};

std::vector<Draw> random_ccm_draws(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::vector<Draw> out;
  while (static_cast<int>(out.size()) < count) {
    ConverterParams p;
    p.vi = uni(12.0, 48.0);
    p.n = uni(0.3, 2.0);
    p.nd = uni(0.2, 1.0);
    p.d = uni(0.15, std::min(0.85, 0.9 / (1.0 + p.nd)));
    p.l = uni(30e-6, 200e-6);
    p.lm = uni(100e-6, 1000e-6);
    p.co = uni(20e-6, 300e-6);
    p.fsw = uni(20e3, 100e3);
    const double vo = voltage_transfer(p.vi, p.n, p.d);
    const double dil = inductor_ripple(p);
    // il_avg = vo / rl between 0.75 and 4 ripples keeps a CCM margin.
    const double rl = vo / (dil * uni(0.75, 4.0));
    out.push_back({p, ResistiveLoad{rl}});
  }
  return out;
}

double mean_signal(const PeriodicWaveform& w, const char* name) {
  return period_average(w.samples, w.signal(name));
}

}  // namespace

VerifyReport run_verification(const RunConfig& cfg, unsigned max_threads) {
  VerifyReport report;
  Rows rows(report.rows);
  const ConverterParams& p = cfg.converter;
  const SimConfig& sim = cfg.sim;
  const auto* resistive = std::get_if<ResistiveLoad>(&cfg.load);

  // 1. Output voltage of the switched model against the transfer function.
  std::optional<PeriodicWaveform> base;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    base = find_periodic_steady_state(p, cfg.load, sim);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double vo_sim = waveform_metrics(*base, "vo").avg;
    rows.rel("1", "mean vo (sim) vs (1+n) d vi", vo_sim, voltage_transfer(p.vi, p.n, p.d), 0.005);
    rows.rel("1", "mean vo (sim) vs 40.404 V", vo_sim, 40.404, 0.005);
    rows.below("1", "steady-state runtime [s]", secs, 2.0);
  } catch (const std::exception& e) {
    rows.error("1", "periodic steady state at configured point", e.what());
  }

  // 2-3. Ripple and rms at E0.
  const auto points = case_study::scenario_points();
  const auto& e0 = points[0];
  const ConverterParams p_e0 = case_study::params_at(e0);
  const auto ss_e0 = device_stresses(p_e0, e0.po, ResetDutyModel::Stacked);
  try {
    const auto w = find_periodic_steady_state(p_e0, resistive_for(e0.vo, e0.po), SimConfig{});
    rows.rel("2", "E0 il ripple (sim) vs 4.227 A", waveform_metrics(w, "il").peak_to_peak, 4.227,
             0.01);
    rows.abs("2", "E0 il ripple (formula) vs 4.227 A", ss_e0.dil, 4.227, 5e-4,
             "printed to 3 decimals");
    const double via_vo = ss_e0.vo * (1.0 - p_e0.d) / (p_e0.l * p_e0.fsw);
    rows.rel("2", "ripple formula vs vo (1-d) / (L fsw)", ss_e0.dil, via_vo, 1e-12);
    rows.rel("3", "E0 il rms (formula) vs 6.859 A", ss_e0.il_rms, 6.859, 0.01);
    rows.rel("3", "E0 il rms (sim) vs 6.859 A", waveform_metrics(w, "il").rms, 6.859, 0.01);
    rows.rel("3", "E0 i_s rms (formula) vs 10.895 A", ss_e0.s.rms, 10.895, 0.02);
    rows.rel("3", "E0 i_s rms (sim) vs 10.895 A", waveform_metrics(w, "i_s").rms, 10.895, 0.02);
    const auto in = waveform_metrics(w, "i_in");
    rows.info("-", "E0 input capacitor rms (sim, ac part of input current) vs 7.604 A",
              std::sqrt(in.rms * in.rms - in.avg * in.avg), 7.604, "within 15 % expected");
  } catch (const std::exception& e) {
    rows.error("2", "E0 periodic steady state", e.what());
  }

  // 4. Power split.
  if (base) {
    const auto split = measure_power_split(*base, p);
    rows.abs("4", "magnetically processed fraction (sim)", split.mag, p.n / (1.0 + p.n), 0.02);
  }
  const double split_n[] = {0.1, 0.5, 1.0, 1.5, 2.0};
  const double split_notmag[] = {0.909, 0.667, 0.500, 0.400, 0.333};
  const double split_mag[] = {0.091, 0.333, 0.500, 0.600, 0.667};
  for (int i = 0; i < 5; ++i) {
    const auto s = power_split(split_n[i]);
    rows.abs("4", "power split n = " + fmt("%g", split_n[i]) + " not magnetic", s.notmag,
             split_notmag[i], 5e-4);
    rows.abs("4", "power split n = " + fmt("%g", split_n[i]) + " magnetic", s.mag, split_mag[i],
             5e-4);
  }

  // 5. Small-signal.
  if (resistive) {
    const double rl = resistive->rl;
    const double f0 = resonant_frequency(p);
    rows.rel("5", "Gvd DC gain [dB]", magnitude_db(gvd(p, rl, 1e-3)),
             20.0 * std::log10((1.0 + p.n) * p.vi), 1e-6, "35.36 dB at the reference point");
    rows.abs("5", "Gvd phase at f0 [deg]", std::arg(gvd(p, rl, f0)) * 180.0 / M_PI, -90.0, 1e-6,
             "f0 = " + fmt("%.6g Hz", f0));
    rows.rel("5", "Zo at f0 (formula) vs rl", std::abs(zo(p, rl, f0)), rl, 1e-9);
    try {
      NumericResponseOptions opts;
      opts.max_threads = max_threads;
      auto grid = log_grid(50.0, 12.5e3, 10);
      grid.push_back(20e3);
      const auto num = numeric_frequency_response(p, cfg.load, sim, ResponseKind::Gvd, grid, opts);
      double max_db = 0.0, max_deg = 0.0, db_20k = 0.0;
      for (size_t i = 0; i < num.points.size(); ++i) {
        const auto& pt = num.points[i];
        const Complex ref = gvd(p, rl, pt.f);
        const double db = std::abs(magnitude_db(pt.gain) - magnitude_db(ref));
        double deg = std::abs(std::arg(pt.gain / ref)) * 180.0 / M_PI;
        if (i + 1 < num.points.size()) {
          max_db = std::max(max_db, db);
          max_deg = std::max(max_deg, deg);
        } else {
          db_20k = db;
        }
      }
      rows.abs("5", "numeric Gvd max |dB error| 50 Hz-12.5 kHz", max_db, 0.0, 1.0);
      rows.abs("5", "numeric Gvd max |phase error| 50 Hz-12.5 kHz [deg]", max_deg, 0.0, 5.0);
      rows.abs("5", "numeric Gvd |dB error| at 20 kHz", db_20k, 0.0, 3.0);
      const auto z = numeric_frequency_response(p, cfg.load, sim, ResponseKind::Zo, {f0}, opts);
      rows.rel("5", "Zo at f0 (sim) vs rl", std::abs(z.points[0].gain), rl, 0.01);
    } catch (const std::exception& e) {
      rows.error("5", "numeric frequency response", e.what());
    }
  } else {
    rows.info("5", "small-signal checks skipped (need a resistive load)", NAN, NAN);
  }

  // 6. Reset duty arbitration.
  for (auto model : {ResetVoltageModel::Tertiary, ResetVoltageModel::Stacked}) {
    SimConfig c = sim;
    c.reset_voltage_model = model;
    const double expect =
        model == ResetVoltageModel::Tertiary ? p.nd * p.d : p.nd * p.d / (1.0 + p.nd);
    const double other =
        model == ResetVoltageModel::Tertiary ? p.nd * p.d / (1.0 + p.nd) : p.nd * p.d;
    try {
      const auto w = find_periodic_steady_state(p, cfg.load, c);
      rows.rel("6", "measured D2 (" + std::string(to_string(model)) + ")", measured_reset_duty(w),
               expect, 0.01,
               "nd d = " + fmt("%.6g", p.nd * p.d) + ", nd d/(1+nd) = " +
                   fmt("%.6g", p.nd * p.d / (1.0 + p.nd)));
      const double d2 = measured_reset_duty(w);
      rows.flag("6", "measured D2 (" + std::string(to_string(model)) + ") excludes the other model",
                std::abs(d2 - other) / other > 0.01);
    } catch (const std::exception& e) {
      rows.error("6", "reset measurement", e.what());
    }
  }
  rows.info("6", "D2 closed form nd D/(1+nd) at D = 0.72 vs reference 0.18",
            reset_duty({p.vi, p.n, p.nd, p.l, p.lm, p.co, p.fsw, 0.72}, ResetDutyModel::Stacked).d2,
            0.18);
  {
    ConverterParams q = p;
    q.d = 0.72;
    bool completes = false;
    try {
      const auto w = find_periodic_steady_state(q, cfg.load, sim);
      completes = w.reset_time.has_value();
    } catch (const std::exception&) {
    }
    rows.flag("6", "reset completes at D = 0.72", completes);
    q.d = 0.80;
    bool flagged = false;
    try {
      find_periodic_steady_state(q, cfg.load, sim);
    } catch (const SimulationError& e) {
      flagged = e.kind() == SimulationError::Kind::NonReset;
    } catch (const std::exception&) {
    }
    rows.flag("6", "non-reset flagged at D = 0.80", flagged,
              reset_feasible(p.nd, 0.80) ? "note: reset condition holds for this nd" : "");
  }

  // 7. Case-study table.
  try {
    const auto r0 = evaluate_scenario(case_study::scenario_e0(), 1.0, 1.0 / 3.0, case_study::kDutyMax);
    const auto r1 = evaluate_scenario(case_study::scenario_e1(), 1.0, 1.0 / 3.0, case_study::kDutyMax);
    rows.rel("7", "E0 non-shaded vo vs 33.3 V", r0.entries[0].vo, 33.3, 0.002);
    rows.rel("7", "E0 i_string vs 6.75 A", r0.i_string, 6.75, 0.002);
    rows.rel("7", "E1 non-shaded vo vs 40.404 V", r1.entries[0].vo, 40.404, 0.002);
    rows.rel("7", "E1 shaded vo vs 12.121 V", r1.entries[1].vo, 12.121, 0.002);
    rows.rel("7", "E1 i_string vs 5.569 A", r1.i_string, 5.569, 0.002);
    rows.rel("7", "E1 non-shaded power vs 225 W", r1.entries[0].p_pv, 225.0, 0.002);
    rows.rel("7", "E1 shaded power vs 67.5 W", r1.entries[1].p_pv, 67.5, 0.002);
    rows.rel("7", "E1 non-shaded v_pv vs 29.3 V", r1.entries[0].v_pv, 29.3, 0.002);
    rows.rel("7", "E1 shaded v_pv vs 15 V", r1.entries[1].v_pv, 15.0, 0.002);
  } catch (const std::exception& e) {
    rows.error("7", "scenario evaluation", e.what());
  }

  // 8. Stress envelope.
  try {
    const auto env = stress_envelope(case_study::reference_spec(), points, case_study::reference_params(),
                                     ResetDutyModel::Stacked);
    rows.rel("8", "envelope I_D1 vs 3.84 A", env.get("i_d1_avg").value, 3.84, 0.01,
             "at " + env.get("i_d1_avg").at);
    rows.rel("8", "envelope I_D2 vs 3.319 A", env.get("i_d2_avg").value, 3.319, 0.01,
             "at " + env.get("i_d2_avg").at);
    rows.rel("8", "envelope I_D1 peak vs 8.864 A", env.get("i_d1_peak").value, 8.864, 0.01,
             "at " + env.get("i_d1_peak").at);
    rows.rel("8", "envelope V_D2 vs 58.6 V", env.get("v_d2").value, 58.6, 0.01);
    rows.rel("8", "envelope V_D1 vs 175.98 V", env.get("v_d1").value, 175.98, 0.005);
    rows.rel("8", "envelope V_S_OFF1 vs 117.288 V", env.get("v_s_off1").value, 117.288, 0.005);
    rows.rel("8", "envelope V_Dd_ON vs 39.057 V", env.get("v_dd_on").value, 39.057, 0.005);
    rows.abs("8", "input capacitor rating vs 35.16 V", env.v_ci_rated.value, 35.16, 0.005);
    rows.abs("8", "output capacitor rating vs 48.48 V", env.v_co_rated.value, 48.48, 0.005);
    rows.info("-", "envelope I_Dd (triangle) vs 0.389 A", env.get("i_dd_avg").value, 0.389,
              "printed reading without 1/2: " + fmt("%.4g A", env.get("i_dd_avg_printed").value));
  } catch (const std::exception& e) {
    rows.error("8", "stress envelope", e.what());
  }

  // 9. Loss ranking.
  {
    const auto losses = conduction_losses(p_e0, e0.po, case_study::reference_parasitics(),
                                          ResetDutyModel::Stacked);
    rows.flag("9", "largest conduction loss is D1", losses.largest().component == "D1",
              "D1 = " + fmt("%.4g W", losses.components[1].watts));
    rows.above("9", "efficiency estimate > 0.936", losses.efficiency, 0.936);
    rows.below("9", "efficiency estimate < 1", losses.efficiency, 1.0);
  }

  // 10. Physics invariants over random draws.
  {
    double vs_l = 0.0, vs_lm = 0.0, charge = 0.0, energy = 0.0;
    int failures = 0;
    for (const auto& draw : random_ccm_draws(20, 20181019u)) {
      try {
        const auto w = find_periodic_steady_state(draw.p, draw.load, SimConfig{});
        vs_l = std::max(vs_l, std::abs(mean_signal(w, "v_l")) / draw.p.vi);
        vs_lm = std::max(vs_lm, std::abs(mean_signal(w, "v_lm")) / draw.p.vi);
        charge = std::max(charge, std::abs(mean_signal(w, "i_co")) / mean_signal(w, "i_load"));
        const double pout = mean_signal(w, "p_out");
        energy = std::max(energy, std::abs(mean_signal(w, "p_in") - pout) / pout);
      } catch (const std::exception&) {
        ++failures;
      }
    }
    rows.flag("10", "all 20 random draws converge in CCM", failures == 0);
    rows.below("10", "max |mean v_L| / vi", vs_l, 0.005);
    rows.below("10", "max |mean v_Lm| / vi", vs_lm, 0.005);
    rows.below("10", "max charge imbalance", charge, 0.005);
    rows.below("10", "max energy imbalance", energy, 0.005);
    if (base) {
      try {
        SimConfig fine = sim;
        fine.steps_per_period *= 2;
        const auto w2 = find_periodic_steady_state(p, cfg.load, fine);
        const double a = waveform_metrics(*base, "vo").avg;
        const double b = waveform_metrics(w2, "vo").avg;
        rows.below("10", "grid refinement change in mean vo", std::abs(b - a) / std::abs(a), 5e-4);
      } catch (const std::exception& e) {
        rows.error("10", "grid refinement", e.what());
      }
    }
  }
  return report;
}

std::string format_verify_table(const VerifyReport& report) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s %-6s %-54s %14s %14s %12s  %s\n", "id", "result", "check",
                "measured", "expected", "tolerance", "note");
  os << line;
  for (const auto& r : report.rows) {
    const char* verdict = !r.gated ? "info" : (r.pass ? "PASS" : "FAIL");
    std::string tol;
    if (r.tolerance_kind == "rel") {
      tol = fmt("%.3g rel", r.tolerance);
    } else if (r.tolerance_kind == "abs") {
      tol = fmt("%.3g abs", r.tolerance);
    } else if (r.tolerance_kind == "max") {
      tol = "< bound";
    } else if (r.tolerance_kind == "min") {
      tol = "> bound";
    } else {
      tol = r.tolerance_kind;
    }
    std::snprintf(line, sizeof line, "%-4s %-6s %-54s %14.9g %14.9g %12s  %s\n", r.id.c_str(),
                  verdict, r.name.c_str(), r.measured, r.expected, tol.c_str(), r.note.c_str());
    os << line;
  }
  os << (report.all_pass() ? "ALL CHECKS PASSED\n" : "SOME CHECKS FAILED\n");
  return os.str();
}

}  // namespace bbmsf
