// Acceptance suite: one PASS/FAIL line per criterion. Expected values are
// either reference numbers or closed forms evaluated here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bbmsf/case_study.hpp"
#include "bbmsf/design_engine.hpp"
#include "bbmsf/dmppt_string.hpp"
#include "bbmsf/small_signal.hpp"
#include "bbmsf/steady_state.hpp"
#include "bbmsf/switched_sim.hpp"
#include "bbmsf/verify.hpp"

using namespace bbmsf;

namespace {

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void rel(const char* what, double got, double want, double tol) {
    const double e = std::abs(got - want) / std::abs(want);
    add(e <= tol, what, got, want, e, "rel");
  }
  void abs(const char* what, double got, double want, double tol) {
    const double e = std::abs(got - want);
    add(e <= tol, what, got, want, e, "abs");
  }
  void truth(const char* what, bool ok) { add(ok, what, ok, 1, ok ? 0 : 1, "bool"); }

  void guard(const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      ok_ = false;
      detail_ += std::string(" | exception: ") + e.what();
    }
  }

  bool print() const {
    std::printf("%s  %s (%d checks)%s\n", ok_ ? "PASS" : "FAIL", title_.c_str(), count_,
                detail_.c_str());
    return ok_;
  }

 private:
  void add(bool ok, const char* what, double got, double want, double err, const char* kind) {
    ++count_;
    if (ok) return;
    ok_ = false;
    char buf[256];
    std::snprintf(buf, sizeof buf, " | %s: got %.9g want %.9g (%s err %.3g)", what, got, want, kind, err);
    detail_ += buf;
  }

  std::string title_;
  std::string detail_;
  bool ok_ = true;
  int count_ = 0;
};

const ConverterParams kRef{29.3, 1.0, 1.0 / 3.0, 68e-6, 250e-6, 112e-6, 50e3, 0.689};
constexpr double kRl = 7.255;

ConverterParams at(double vi, double vo) {
  ConverterParams p = kRef;
  p.vi = vi;
  p.d = vo / (2.0 * vi);
  return p;
}

double mean(const PeriodicWaveform& w, const char* s) { return period_average(w.samples, w.signal(s)); }

}  // namespace

int main() {
  bool all = true;
  const double vo_e0 = 600.0 / 18.0;
  const ConverterParams p_e0 = at(29.3, vo_e0);
  const LoadModel load_e0 = ResistiveLoad{vo_e0 * vo_e0 / 225.0};

  {
    Criterion c("1 transfer function: mean vo = 40.404 V +-0.5 %, runtime < 2 s");
    c.guard([&] {
      const auto t0 = std::chrono::steady_clock::now();
      const auto w = find_periodic_steady_state(kRef, ResistiveLoad{kRl}, SimConfig{});
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      c.rel("mean vo", waveform_metrics(w, "vo").avg, 40.404, 0.005);
      c.truth("runtime < 2 s", s < 2.0);
    });
    all &= c.print();
  }

  {
    Criterion c("2 ripple at E0: sim 4.227 A +-1 %, closed form exact");
    c.guard([&] {
      const auto w = find_periodic_steady_state(p_e0, load_e0, SimConfig{});
      c.rel("sim ripple", waveform_metrics(w, "il").peak_to_peak, 4.227, 0.01);
      // ((1+n) vi - vo) d / (L fsw), evaluated independently.
      const double oracle = (2.0 * 29.3 - vo_e0) * p_e0.d / (p_e0.l * p_e0.fsw);
      c.rel("closed form", inductor_ripple(p_e0), oracle, 1e-12);
      c.abs("closed form vs printed", inductor_ripple(p_e0), 4.227, 5e-4);
    });
    all &= c.print();
  }

  {
    Criterion c("3 rms at E0: il 6.859 A +-1 %, i_s 10.895 A +-2 %");
    c.guard([&] {
      const auto r = device_stresses(p_e0, 225.0, ResetDutyModel::Stacked);
      const auto w = find_periodic_steady_state(p_e0, load_e0, SimConfig{});
      c.rel("il rms analytic", r.il_rms, 6.859, 0.01);
      c.rel("il rms sim", waveform_metrics(w, "il").rms, 6.859, 0.01);
      c.rel("i_s rms analytic", r.s.rms, 10.895, 0.02);
      c.rel("i_s rms sim", waveform_metrics(w, "i_s").rms, 10.895, 0.02);
    });
    all &= c.print();
  }

  {
    Criterion c("4 power split: sim 0.50 +-0.02 at n = 1, five tabulated columns");
    c.guard([&] {
      const auto w = find_periodic_steady_state(kRef, ResistiveLoad{kRl}, SimConfig{});
      c.abs("sim magnetic fraction", measure_power_split(w, kRef).mag, 0.50, 0.02);
      const double n[] = {0.1, 0.5, 1.0, 1.5, 2.0};
      const double pm[] = {0.091, 0.333, 0.500, 0.600, 0.667};
      const double pn[] = {0.909, 0.667, 0.500, 0.400, 0.333};
      for (int i = 0; i < 5; ++i) {
        c.abs("P_mag", power_split(n[i]).mag, pm[i], 5e-4);
        c.abs("P_notmag", power_split(n[i]).notmag, pn[i], 5e-4);
      }
    });
    all &= c.print();
  }

  {
    Criterion c("5 small signal: 35.36 dB, 1824 Hz, numeric within 1 dB/5 deg, 3 dB at 20 kHz, Zo(f0) = RL +-1 %");
    c.guard([&] {
      c.abs("DC gain [dB]", magnitude_db(gvd(kRef, kRl, 1e-3)), 35.36, 0.005);
      const double f0 = 1.0 / (2.0 * M_PI * std::sqrt(kRef.l * kRef.co));
      c.abs("resonance [Hz]", resonant_frequency(kRef), 1824.0, 0.5);
      c.rel("resonance vs 1/(2 pi sqrt(L C))", resonant_frequency(kRef), f0, 1e-12);
      auto grid = [] {
        std::vector<double> g;
        for (int k = 0; k < 10; ++k) g.push_back(50.0 * std::pow(12.5e3 / 50.0, k / 9.0));
        g.push_back(20e3);
        return g;
      }();
      const auto num = numeric_frequency_response(kRef, ResistiveLoad{kRl}, SimConfig{}, ResponseKind::Gvd, grid);
      for (size_t i = 0; i < num.points.size(); ++i) {
        const double f = num.points[i].f;
        const Complex s(0.0, 2.0 * M_PI * f);
        const Complex ref = 2.0 * 29.3 / (1.0 + s * kRef.l / kRl + s * s * kRef.l * kRef.co);
        const double db = 20.0 * std::log10(std::abs(num.points[i].gain) / std::abs(ref));
        const double deg = std::arg(num.points[i].gain / ref) * 180.0 / M_PI;
        if (i + 1 < num.points.size()) {
          c.abs("numeric dB error", db, 0.0, 1.0);
          c.abs("numeric phase error", deg, 0.0, 5.0);
        } else {
          c.abs("numeric dB error at 20 kHz", db, 0.0, 3.0);
        }
      }
      const auto z = numeric_frequency_response(kRef, ResistiveLoad{kRl}, SimConfig{}, ResponseKind::Zo, {f0});
      c.rel("numeric Zo(f0)", std::abs(z.points[0].gain), kRl, 0.01);
    });
    all &= c.print();
  }

  {
    Criterion c("6 reset: measured D2 matches the configured model +-1 %, completes at 0.72, flagged at 0.80");
    c.guard([&] {
      const double a = kRef.nd * kRef.d;
      const double b = kRef.nd * kRef.d / (1.0 + kRef.nd);
      SimConfig cfg;
      cfg.reset_voltage_model = ResetVoltageModel::Tertiary;
      const double d12 = measured_reset_duty(find_periodic_steady_state(kRef, ResistiveLoad{kRl}, cfg));
      cfg.reset_voltage_model = ResetVoltageModel::Stacked;
      const double d10 = measured_reset_duty(find_periodic_steady_state(kRef, ResistiveLoad{kRl}, cfg));
      c.rel("D2 reset at vi/nd", d12, a, 0.01);
      c.rel("D2 reset at vi(1+nd)/nd", d10, b, 0.01);
      c.truth("the two models are distinguishable", std::abs(a - b) / b > 0.02);

      ConverterParams q = kRef;
      q.d = 0.72;
      c.truth("completes at D = 0.72",
              find_periodic_steady_state(q, ResistiveLoad{kRl}, SimConfig{}).reset_time.has_value());
      q.d = 0.80;
      bool flagged = false;
      try {
        find_periodic_steady_state(q, ResistiveLoad{kRl}, SimConfig{});
      } catch (const SimulationError& e) {
        flagged = e.kind() == SimulationError::Kind::NonReset;
      }
      c.truth("flagged at D = 0.80", flagged);
      c.abs("closed-form D2 at D = 0.72 vs 0.18",
            reset_duty(ConverterParams{29.3, 1, 1.0 / 3.0, 68e-6, 250e-6, 112e-6, 50e3, 0.72},
                       ResetDutyModel::Stacked).d2,
            0.18, 1e-12);
    });
    all &= c.print();
  }

  {
    Criterion c("7 case-study table: every cell within 0.2 %");
    c.guard([&] {
      const auto r0 = evaluate_scenario(case_study::scenario_e0(), 1.0, 1.0 / 3.0, 0.72);
      const auto r1 = evaluate_scenario(case_study::scenario_e1(), 1.0, 1.0 / 3.0, 0.72);
      c.rel("E0 power", r0.entries[0].p_pv, 225, 0.002);
      c.rel("E0 v_pv", r0.entries[0].v_pv, 29.3, 0.002);
      c.rel("E0 vo", r0.entries[0].vo, 33.3, 0.002);
      c.rel("E0 i_string", r0.i_string, 6.75, 0.002);
      c.rel("E1 power", r1.entries[0].p_pv, 225, 0.002);
      c.rel("E1 v_pv", r1.entries[0].v_pv, 29.3, 0.002);
      c.rel("E1 vo", r1.entries[0].vo, 40.404, 0.002);
      c.rel("E1 i_string", r1.entries[0].i_string, 5.569, 0.002);
      c.rel("E1 shaded power", r1.entries[1].p_pv, 67.5, 0.002);
      c.rel("E1 shaded v_pv", r1.entries[1].v_pv, 15, 0.002);
      c.rel("E1 shaded vo", r1.entries[1].vo, 12.121, 0.002);
      c.rel("E1 shaded i_string", r1.entries[1].i_string, 5.569, 0.002);
    });
    all &= c.print();
  }

  {
    Criterion c("8 stress envelope: currents and V_D2 +-1 %, V_D1/V_S_OFF1/V_Dd_ON +-0.5 %, ratings 35.16/48.48 V");
    c.guard([&] {
      const auto env = stress_envelope(case_study::reference_spec(), case_study::scenario_points(), kRef,
                                       ResetDutyModel::Stacked);
      c.rel("I_D1", env.get("i_d1_avg").value, 3.84, 0.01);
      c.rel("I_D2", env.get("i_d2_avg").value, 3.319, 0.01);
      c.rel("I_D1_peak", env.get("i_d1_peak").value, 8.864, 0.01);
      c.rel("V_D2", env.get("v_d2").value, 58.6, 0.01);
      c.rel("V_D1", env.get("v_d1").value, 175.98, 0.005);
      c.rel("V_S_OFF1", env.get("v_s_off1").value, 117.288, 0.005);
      c.rel("V_Dd_ON", env.get("v_dd_on").value, 39.057, 0.005);
      c.abs("V_Ci rating", env.v_ci_rated.value, 35.16, 0.005);
      c.abs("V_Co rating", env.v_co_rated.value, 48.48, 0.005);
    });
    all &= c.print();
  }

  {
    Criterion c("9 loss ranking at E0: D1 largest (about 4.6 W), efficiency in (0.936, 1)");
    c.guard([&] {
      const auto l = conduction_losses(p_e0, 225.0, case_study::reference_parasitics(), ResetDutyModel::Stacked);
      c.truth("D1 largest", l.largest().component == "D1");
      // D1 carries il during the on-time: vf * il * d.
      c.rel("D1 loss", l.largest().watts, 1.2 * 6.75 * p_e0.d, 0.01);
      c.truth("efficiency > 0.936", l.efficiency > 0.936);
      c.truth("efficiency < 1", l.efficiency < 1.0);
    });
    all &= c.print();
  }

  {
    Criterion c("10 physics invariants over 20 random CCM draws < 0.5 %, grid refinement < 0.05 %");
    c.guard([&] {
      std::mt19937_64 rng(7);
      auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
      int done = 0;
      while (done < 20) {
        ConverterParams p{u(10, 50), u(0.25, 2.5), u(0.2, 1.2), u(40e-6, 200e-6), u(150e-6, 800e-6),
                          u(30e-6, 250e-6), u(20e3, 100e3), 0.0};
        p.d = u(0.15, 0.85 / (1.0 + p.nd));
        const double vo = (1 + p.n) * p.d * p.vi;
        const double dil = ((1 + p.n) * p.vi - vo) * p.d / (p.l * p.fsw);
        const double rl = vo / (u(0.8, 3.0) * dil);
        const auto w = find_periodic_steady_state(p, ResistiveLoad{rl}, SimConfig{});
        c.abs("inductor volt-second", mean(w, "v_l") / p.vi, 0.0, 0.005);
        c.abs("magnetizing volt-second", mean(w, "v_lm") / p.vi, 0.0, 0.005);
        c.abs("capacitor charge", mean(w, "i_co") / mean(w, "i_load"), 0.0, 0.005);
        c.rel("energy", mean(w, "p_in"), mean(w, "p_out"), 0.005);
        ++done;
      }
      SimConfig fine;
      fine.steps_per_period = 4000;
      const double a = waveform_metrics(find_periodic_steady_state(kRef, ResistiveLoad{kRl}, SimConfig{}), "vo").avg;
      const double b = waveform_metrics(find_periodic_steady_state(kRef, ResistiveLoad{kRl}, fine), "vo").avg;
      c.rel("grid refinement", b, a, 5e-4);
    });
    all &= c.print();
  }

  {
    Criterion c("verify command agrees with this suite");
    c.guard([&] {
      RunConfig cfg;
      cfg.converter = kRef;
      cfg.load = ResistiveLoad{kRl};
      c.truth("verify all pass", run_verification(cfg).all_pass() == all);
    });
    all &= c.print();
  }

  std::printf("%s\n", all ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES PRESENT");
  return all ? 0 : 1;
}
