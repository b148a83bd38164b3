#include "bbmsf/switched_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "bbmsf/steady_state.hpp"

namespace bbmsf {

std::string_view to_string(Interval interval) {
  switch (interval) {
    case Interval::TON: return "TON";
    case Interval::TOFF1: return "TOFF1";
    case Interval::TOFF2: return "TOFF2";
  }
  return "?";
}

std::string_view to_string(ResetVoltageModel model) {
  return model == ResetVoltageModel::Tertiary ? "tertiary" : "stacked";
}

ResetVoltageModel reset_voltage_model_from_string(std::string_view name) {
  if (name == "tertiary") return ResetVoltageModel::Tertiary;
  if (name == "stacked") return ResetVoltageModel::Stacked;
  throw DomainError("unknown reset voltage model '" + std::string(name) +
                    "' (expected tertiary|stacked)");
}

ValidationResult validate_sim_config(const SimConfig& cfg) {
  ValidationResult r;
  if (cfg.steps_per_period < 100) {
    r.violations.push_back({"steps_per_period", "steps_per_period must be >= 100"});
  }
  if (cfg.max_periods < 0) {
    r.violations.push_back({"max_periods", "max_periods must be >= 0 (0 = automatic)"});
  }
  if (!(cfg.periodicity_tol > 0.0)) {
    r.violations.push_back({"periodicity_tol", "periodicity_tol must be positive"});
  }
  if (!(cfg.event_tol > 0.0)) {
    r.violations.push_back({"event_tol", "event_tol must be positive"});
  }
  return r;
}

double reset_voltage(double vi, double nd, ResetVoltageModel model) {
  return model == ResetVoltageModel::Tertiary ? vi / nd : vi * (1.0 + nd) / nd;
}

namespace {

struct Stepper {
  const ConverterParams& p;
  const LoadModel& load;
  const SimConfig& cfg;
  const PeriodDrive& drive;
  double t0;

  double vi_at(double t) const { return drive.vi ? drive.vi(t0 + t) : p.vi; }
  double inject_at(double t) const { return drive.i_inject ? drive.i_inject(t0 + t) : 0.0; }

  Derivatives eval(double il, double /*ilm*/, double vo, double t, Interval iv) const {
    const double vi = vi_at(t);
    Derivatives d;
    switch (iv) {
      case Interval::TON:
        d.dil = ((1.0 + p.n) * vi - vo) / p.l;
        d.dilm = vi / p.lm;
        break;
      case Interval::TOFF1:
        d.dil = -vo / p.l;
        d.dilm = -reset_voltage(vi, p.nd, cfg.reset_voltage_model) / p.lm;
        break;
      case Interval::TOFF2:
        d.dil = -vo / p.l;
        d.dilm = 0.0;
        break;
    }
    d.dvo = (il - load_current(load, vo) + inject_at(t)) / p.co;
    return d;
  }

  // Classical RK4 step of length h within one interval.
  SimState rk4(const SimState& s, double h) const {
    const auto k1 = eval(s.il, s.ilm, s.vo, s.t, s.interval);
    const auto k2 = eval(s.il + h / 2 * k1.dil, s.ilm + h / 2 * k1.dilm, s.vo + h / 2 * k1.dvo,
                         s.t + h / 2, s.interval);
    const auto k3 = eval(s.il + h / 2 * k2.dil, s.ilm + h / 2 * k2.dilm, s.vo + h / 2 * k2.dvo,
                         s.t + h / 2, s.interval);
    const auto k4 = eval(s.il + h * k3.dil, s.ilm + h * k3.dilm, s.vo + h * k3.dvo, s.t + h,
                         s.interval);
    SimState out = s;
    out.il += h / 6 * (k1.dil + 2 * k2.dil + 2 * k3.dil + k4.dil);
    out.ilm += h / 6 * (k1.dilm + 2 * k2.dilm + 2 * k3.dilm + k4.dilm);
    out.vo += h / 6 * (k1.dvo + 2 * k2.dvo + 2 * k3.dvo + k4.dvo);
    out.t += h;
    return out;
  }
};

class PeriodIntegrator {
 public:
  PeriodIntegrator(const Stepper& stepper, bool record) : st_(stepper), record_(record) {}

  void push(const SimState& s) {
    if (!record_) return;
    if (!out_.trajectory.empty()) {
      auto& last = out_.trajectory.back();
      if (last.t == s.t && last.interval == s.interval) {
        last = {s.t, s.il, s.ilm, s.vo, s.interval};
        return;
      }
    }
    out_.trajectory.push_back({s.t, s.il, s.ilm, s.vo, s.interval});
  }

  void check_ccm(const SimState& s) const {
    if (s.il < 0.0) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "DCM: inductor current crossed zero at t = %.6g s within the period", s.t);
      throw SimulationError(SimulationError::Kind::Dcm, buf);
    }
  }

  void mark_reset(SimState& s) {
    s.ilm = 0.0;
    push(s);
    s.interval = Interval::TOFF2;
    push(s);
    out_.reset_time = s.t;
  }

  // Integrates s from its current time to b, localizing the reset event.
  void integrate_to(SimState& s, double b) {
    const double h = b - s.t;
    if (h <= 0.0) return;
    if (s.interval != Interval::TOFF1) {
      s = st_.rk4(s, h);
      check_ccm(s);
      return;
    }
    SimState trial = st_.rk4(s, h);
    if (trial.ilm > st_.cfg.event_tol) {
      s = trial;
      check_ccm(s);
      return;
    }
    if (trial.ilm >= 0.0) {
      s = trial;
      check_ccm(s);
      mark_reset(s);
      return;
    }
    // Zero crossing inside the step: bisect on the step length.
    double lo = 0.0;
    double hi = h;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      trial = st_.rk4(s, mid);
      if (std::abs(trial.ilm) < st_.cfg.event_tol) break;
      if (trial.ilm > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    s = trial;
    check_ccm(s);
    mark_reset(s);
    s = st_.rk4(s, b - s.t);
    s.t = b;
    check_ccm(s);
  }

  PeriodResult run(const SimState& s0, double duty) {
    const double period = st_.p.period();
    const int steps = st_.cfg.steps_per_period;
    const double h = period / steps;
    const double t_on = std::clamp(duty, 0.0, 1.0) * period;
    const double edge_tol = 1e-9 * h;
    const double event_tol = st_.cfg.event_tol;

    SimState s = s0;
    s.t = 0.0;
    bool gate_done = t_on <= edge_tol;
    if (gate_done) {
      s.interval = s.ilm > event_tol ? Interval::TOFF1 : Interval::TOFF2;
      if (s.interval == Interval::TOFF2) s.ilm = 0.0;
    } else {
      s.interval = Interval::TON;
    }
    if (record_) out_.trajectory.reserve(static_cast<size_t>(steps) + 8);
    push(s);
    double t_prev = 0.0;
    double vo_prev = s.vo;

    for (int k = 0; k < steps; ++k) {
      const double a = k * h;
      const double b = (k == steps - 1) ? period : (k + 1) * h;
      if (!gate_done && t_on < b - edge_tol) {
        if (t_on > a + edge_tol) integrate_to(s, t_on);
        s.t = std::max(s.t, t_on);
        push(s);
        if (s.ilm > event_tol) {
          s.interval = Interval::TOFF1;
        } else {
          s.ilm = 0.0;
          s.interval = Interval::TOFF2;
        }
        push(s);
        gate_done = true;
      }
      integrate_to(s, b);
      s.t = b;
      push(s);
      out_.vo_integral += (b - t_prev) * 0.5 * (vo_prev + s.vo);
      t_prev = b;
      vo_prev = s.vo;
    }

    if (s.interval == Interval::TOFF1 && s.ilm > event_tol) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "non-reset: magnetizing current %.6g A has not returned to zero by the end "
                    "of the period (check nd <= (1 - d) / d)",
                    s.ilm);
      throw SimulationError(SimulationError::Kind::NonReset, buf);
    }
    if (s.interval == Interval::TOFF1) {
      // Reached zero within tolerance exactly at the period end.
      s.ilm = 0.0;
      out_.reset_time = period;
    }
    out_.end = s;
    out_.end.t = 0.0;
    out_.end.interval = Interval::TON;
    return std::move(out_);
  }

 private:
  const Stepper& st_;
  bool record_;
  PeriodResult out_;
};

double relative_change(const SimState& a, const SimState& b) {
  auto rel = [](double x0, double x1) {
    const double scale = std::max({std::abs(x0), std::abs(x1), 1e-3});
    return std::abs(x1 - x0) / scale;
  };
  return std::max({rel(a.il, b.il), rel(a.ilm, b.ilm), rel(a.vo, b.vo)});
}

void throw_if_invalid(const ValidationResult& v, const char* what) {
  if (!v.ok()) throw DomainError(std::string(what) + ":\n" + v.summary());
}

}  // namespace

Derivatives interval_derivatives(const SimState& s, const ConverterParams& p,
                                 const LoadModel& load, const SimConfig& cfg) {
  const PeriodDrive drive{p.d, {}, {}};
  const Stepper st{p, load, cfg, drive, 0.0};
  return st.eval(s.il, s.ilm, s.vo, s.t, s.interval);
}

PeriodResult advance_period(const SimState& s0, const ConverterParams& p, const LoadModel& load,
                            const SimConfig& cfg, bool record) {
  return advance_period(s0, 0.0, p, load, cfg, PeriodDrive{p.d, {}, {}}, record);
}

PeriodResult advance_period(const SimState& s0, double t0, const ConverterParams& p,
                            const LoadModel& load, const SimConfig& cfg, const PeriodDrive& drive,
                            bool record) {
  const Stepper st{p, load, cfg, drive, t0};
  PeriodIntegrator integrator(st, record);
  return integrator.run(s0, drive.duty);
}

PeriodicWaveform find_periodic_steady_state(const ConverterParams& p, const LoadModel& load,
                                            const SimConfig& cfg) {
  throw_if_invalid(validate_params(p, load), "invalid converter parameters");
  throw_if_invalid(validate_sim_config(cfg), "invalid simulation configuration");

  // Warm start from the analytic CCM solution.
  const double vo0 = voltage_transfer(p.vi, p.n, p.d);
  const double io0 = load_current(load, vo0);
  SimState x;
  x.vo = vo0;
  x.il = std::max(0.0, io0 - inductor_ripple(p) / 2.0);

  auto end_of = [&](const SimState& s) { return advance_period(s, p, load, cfg, false).end; };

  // Shooting on (il, vo): the period map is affine for a fixed event
  // structure, so Newton with a finite-difference Jacobian lands in one or
  // two iterations.
  int periods = 0;
  SimState last_good = x;
  try {
    for (int it = 0; it < 6; ++it) {
      const SimState y = end_of(x);
      ++periods;
      const std::array<double, 2> f{y.il - x.il, y.vo - x.vo};
      if (relative_change(x, y) < 1e-3 * cfg.periodicity_tol) break;
      std::array<std::array<double, 2>, 2> jac{};
      for (int j = 0; j < 2; ++j) {
        SimState xp = x;
        double& comp = (j == 0) ? xp.il : xp.vo;
        const double delta = 1e-6 * std::max(std::abs(comp), 1.0);
        comp += delta;
        const SimState yp = end_of(xp);
        ++periods;
        jac[0][j] = (yp.il - y.il) / delta;
        jac[1][j] = (yp.vo - y.vo) / delta;
      }
      // Solve (J - I) dx = -f.
      const double a = jac[0][0] - 1.0, b = jac[0][1], c = jac[1][0], d = jac[1][1] - 1.0;
      const double det = a * d - b * c;
      if (std::abs(det) < 1e-300) break;
      last_good = x;
      x.il += (-f[0] * d + f[1] * b) / det;
      x.vo += (-a * f[1] + c * f[0]) / det;
      x.ilm = y.ilm;
    }
  } catch (const SimulationError& e) {
    if (e.kind() == SimulationError::Kind::NonReset) throw;
    // A Newton iterate strayed into DCM; cycle iteration below decides.
    x = last_good;
  }

  int max_periods = cfg.max_periods;
  if (max_periods == 0) {
    if (const auto* r = std::get_if<ResistiveLoad>(&load)) {
      max_periods = 20 * static_cast<int>(std::ceil(r->rl * p.co * p.fsw));
    } else {
      max_periods = 2000;
    }
    max_periods = std::max(max_periods, 20);
  }

  bool converged = false;
  for (int k = 0; k < max_periods; ++k) {
    const SimState y = end_of(x);
    ++periods;
    const double change = relative_change(x, y);
    x = y;
    if (change < cfg.periodicity_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "periodic steady state not reached within %d periods",
                  max_periods);
    throw SimulationError(SimulationError::Kind::NonConvergence, buf);
  }

  PeriodResult last = advance_period(x, p, load, cfg, true);
  ++periods;
  PeriodicWaveform w{p, load, cfg, std::move(last.trajectory), last.reset_time,
                     relative_change(x, last.end), periods};
  return w;
}

const std::vector<std::string>& PeriodicWaveform::csv_columns() {
  static const std::vector<std::string> cols{"il",   "ilm",  "vo",   "i_s",  "i_d1", "i_d2",
                                             "i_dd", "v_s",  "v_d1", "v_d2", "v_dd"};
  return cols;
}

const std::vector<std::string>& PeriodicWaveform::signal_names() {
  static const std::vector<std::string> names{
      "il",  "ilm",  "vo",   "i_s",  "i_d1",   "i_d2", "i_dd", "v_s",   "v_d1",
      "v_d2", "v_dd", "v_l", "v_lm", "i_load", "i_co", "i_in", "p_in", "p_out"};
  return names;
}

std::vector<double> PeriodicWaveform::signal(std::string_view name) const {
  const auto& p = params;
  const double k = 1.0 + p.n;
  const double v_reset = reset_voltage(p.vi, p.nd, cfg.reset_voltage_model);

  auto pick = [&](auto fn) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(fn(s));
    return out;
  };
  auto by_interval = [](const Sample& s, double on, double off1, double off2) {
    switch (s.interval) {
      case Interval::TON: return on;
      case Interval::TOFF1: return off1;
      case Interval::TOFF2: return off2;
    }
    return 0.0;
  };
  auto i_s = [&](const Sample& s) { return by_interval(s, k * s.il + s.ilm, 0.0, 0.0); };
  auto i_dd = [&](const Sample& s) { return by_interval(s, 0.0, s.ilm / p.nd, 0.0); };
  auto i_load = [&](const Sample& s) { return load_current(load, s.vo); };

  if (name == "il") return pick([](const Sample& s) { return s.il; });
  if (name == "ilm") return pick([](const Sample& s) { return s.ilm; });
  if (name == "vo") return pick([](const Sample& s) { return s.vo; });
  if (name == "i_s") return pick(i_s);
  if (name == "i_d1") return pick([&](const Sample& s) { return by_interval(s, s.il, 0.0, 0.0); });
  if (name == "i_d2") return pick([&](const Sample& s) { return by_interval(s, 0.0, s.il, s.il); });
  if (name == "i_dd") return pick(i_dd);
  if (name == "v_s") {
    return pick([&](const Sample& s) {
      return by_interval(s, 0.0, p.vi * (1.0 + p.nd) / p.nd, p.vi);
    });
  }
  if (name == "v_d1") {
    return pick([&](const Sample& s) { return by_interval(s, 0.0, p.vi * k / p.nd, s.vo); });
  }
  if (name == "v_d2") return pick([&](const Sample& s) { return by_interval(s, p.vi * k, 0.0, 0.0); });
  if (name == "v_dd") {
    return pick([&](const Sample& s) { return by_interval(s, p.vi * (1.0 + p.nd), 0.0, p.vi); });
  }
  if (name == "v_l") {
    return pick([&](const Sample& s) { return by_interval(s, k * p.vi - s.vo, -s.vo, -s.vo); });
  }
  if (name == "v_lm") {
    return pick([&](const Sample& s) { return by_interval(s, p.vi, -v_reset, 0.0); });
  }
  if (name == "i_load") return pick(i_load);
  if (name == "i_co") return pick([&](const Sample& s) { return s.il - i_load(s); });
  if (name == "i_in") return pick([&](const Sample& s) { return i_s(s) - i_dd(s); });
  if (name == "p_in") return pick([&](const Sample& s) { return p.vi * (i_s(s) - i_dd(s)); });
  if (name == "p_out") return pick([&](const Sample& s) { return s.vo * i_load(s); });
  throw DomainError("unknown signal '" + std::string(name) + "'");
}

double period_average(const std::vector<Sample>& samples, const std::vector<double>& y) {
  if (samples.size() < 2) return y.empty() ? 0.0 : y.front();
  double acc = 0.0;
  for (size_t i = 1; i < samples.size(); ++i) {
    acc += (samples[i].t - samples[i - 1].t) * (y[i] + y[i - 1]) * 0.5;
  }
  return acc / (samples.back().t - samples.front().t);
}

Metrics waveform_metrics(const PeriodicWaveform& w, std::string_view name) {
  const auto y = w.signal(name);
  std::vector<double> sq(y.size());
  std::transform(y.begin(), y.end(), sq.begin(), [](double v) { return v * v; });
  Metrics m;
  m.avg = period_average(w.samples, y);
  m.rms = std::sqrt(period_average(w.samples, sq));
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  m.peak = *hi;
  m.peak_to_peak = *hi - *lo;
  return m;
}

double measured_reset_duty(const PeriodicWaveform& w) {
  const double t_on = w.params.d * w.params.period();
  if (!w.reset_time) {
    const auto ilm = w.signal("ilm");
    if (*std::max_element(ilm.begin(), ilm.end()) <= w.cfg.event_tol) return 0.0;
    throw SimulationError(SimulationError::Kind::NonReset, "waveform has no reset event");
  }
  return (*w.reset_time - t_on) * w.params.fsw;
}

MeasuredPowerSplit measure_power_split(const PeriodicWaveform& w, const ConverterParams& p) {
  std::vector<double> il_on;
  il_on.reserve(w.samples.size());
  for (const auto& s : w.samples) il_on.push_back(s.interval == Interval::TON ? s.il : 0.0);
  const double p_notmag = p.vi * period_average(w.samples, il_on);
  const double p_out = period_average(w.samples, w.signal("p_out"));
  MeasuredPowerSplit split;
  split.notmag = p_notmag / p_out;
  split.mag = 1.0 - split.notmag;
  return split;
}

}  // namespace bbmsf
