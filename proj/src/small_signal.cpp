#include "bbmsf/small_signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <string>
#include <thread>

namespace bbmsf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Complex kJ{0.0, 1.0};

void require_positive_frequency(double f) {
  if (!(f > 0.0)) throw DomainError("frequency must be positive");
}

// Shared second-order denominator s^2 + s / (rl co) + w0^2.
Complex denominator(const ConverterParams& p, double rl, Complex s) {
  return s * s + s / (rl * p.co) + 1.0 / (p.l * p.co);
}

}  // namespace

std::string_view to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::Gvd: return "gvd";
    case ResponseKind::Gvv: return "gvv";
    case ResponseKind::Zo: return "zo";
  }
  return "?";
}

std::string_view to_string(ResponseMethod method) {
  return method == ResponseMethod::Analytic ? "analytic" : "numeric";
}

ResponseKind response_kind_from_string(std::string_view name) {
  if (name == "gvd") return ResponseKind::Gvd;
  if (name == "gvv") return ResponseKind::Gvv;
  if (name == "zo") return ResponseKind::Zo;
  throw DomainError("unknown response kind '" + std::string(name) + "' (expected gvd|gvv|zo)");
}

SmallSignalBlocks blocks_at(const ConverterParams& p, double rl, double f) {
  require_positive_frequency(f);
  const Complex s = kJ * (kTwoPi * f);
  const Complex zl = s * p.l;
  const double k = 1.0 + p.n;
  return {k * p.vi / zl, 1.0 / zl, k * p.d / zl, rl / (1.0 + s * p.co * rl)};
}

Complex gvd(const ConverterParams& p, double rl, double f) {
  require_positive_frequency(f);
  const double w0sq = 1.0 / (p.l * p.co);
  return (1.0 + p.n) * p.vi * w0sq / denominator(p, rl, kJ * (kTwoPi * f));
}

Complex gvv(const ConverterParams& p, double rl, double f) {
  require_positive_frequency(f);
  const double w0sq = 1.0 / (p.l * p.co);
  return (1.0 + p.n) * p.d * w0sq / denominator(p, rl, kJ * (kTwoPi * f));
}

Complex zo(const ConverterParams& p, double rl, double f) {
  require_positive_frequency(f);
  const Complex s = kJ * (kTwoPi * f);
  return s / p.co / denominator(p, rl, s);
}

double resonant_frequency(const ConverterParams& p) {
  return 1.0 / (kTwoPi * std::sqrt(p.l * p.co));
}

FrequencyResponse analytic_frequency_response(const ConverterParams& p, double rl,
                                              ResponseKind kind, const std::vector<double>& f_list) {
  FrequencyResponse out{kind, ResponseMethod::Analytic, {}};
  out.points.reserve(f_list.size());
  for (double f : f_list) {
    Complex g;
    switch (kind) {
      case ResponseKind::Gvd: g = gvd(p, rl, f); break;
      case ResponseKind::Gvv: g = gvv(p, rl, f); break;
      case ResponseKind::Zo: g = zo(p, rl, f); break;
    }
    out.points.push_back({f, g});
  }
  return out;
}

double snap_frequency(double f, double fsw, int perturbation_periods, long* switching_periods) {
  require_positive_frequency(f);
  const long n = std::max(1L, std::lround(perturbation_periods * fsw / f));
  if (switching_periods) *switching_periods = n;
  return perturbation_periods * fsw / static_cast<double>(n);
}

std::vector<double> log_grid(double fmin, double fmax, int points) {
  if (!(fmin > 0.0) || !(fmax >= fmin) || points < 1) {
    throw DomainError("log_grid: requires 0 < fmin <= fmax and points >= 1");
  }
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(fmin);
    return out;
  }
  const double ratio = std::log(fmax / fmin);
  for (int i = 0; i < points; ++i) {
    out.push_back(fmin * std::exp(ratio * i / (points - 1)));
  }
  out.back() = fmax;
  return out;
}

double magnitude_db(Complex g) { return 20.0 * std::log10(std::abs(g)); }

std::vector<double> unwrapped_phase_deg(const std::vector<ResponsePoint>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  double prev = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    double ph = std::arg(points[i].gain) * 180.0 / std::numbers::pi;
    if (i > 0) {
      while (ph - prev > 180.0) ph -= 360.0;
      while (ph - prev <= -180.0) ph += 360.0;
    }
    out.push_back(ph);
    prev = ph;
  }
  return out;
}

namespace {

struct InjectionRun {
  const ConverterParams& p;
  const LoadModel& load;
  const SimConfig& cfg;
  const NumericResponseOptions& opts;
  ResponseKind kind;
  SimState start;
  double io;  // operating-point load current

  ResponsePoint measure(double f_requested) const {
    const double period = p.period();
    long window = 0;
    const double f = snap_frequency(f_requested, p.fsw, opts.window_perturbation_periods, &window);
    const double w = kTwoPi * f;
    const double a = opts.amplitude_fraction;

    auto drive_for = [&](double t0) {
      PeriodDrive drive{p.d, {}, {}};
      switch (kind) {
        case ResponseKind::Gvd:
          drive.duty = p.d * (1.0 + a * std::sin(w * t0));
          break;
        case ResponseKind::Gvv: {
          const double vi = p.vi;
          drive.vi = [vi, a, w](double t) { return vi * (1.0 + a * std::sin(w * t)); };
          break;
        }
        case ResponseKind::Zo: {
          const double amp = a * io;
          drive.i_inject = [amp, w](double t) { return amp * std::sin(w * t); };
          break;
        }
      }
      return drive;
    };

    SimState s = start;
    long k = 0;
    auto step = [&](bool record) {
      const double t0 = static_cast<double>(k) * period;
      auto r = advance_period(s, t0, p, load, cfg, drive_for(t0), record);
      s = r.end;
      ++k;
      return r;
    };

    try {
      // Settle: whole perturbation-period chunks until the chunk-averaged
      // output voltage stops drifting.
      const long chunk = std::max(1L, static_cast<long>(std::ceil(p.fsw / f)));
      long min_settle = 2 * chunk;
      if (const auto* r = std::get_if<ResistiveLoad>(&load)) {
        const double tau = 2.0 * r->rl * p.co;
        min_settle = std::max(min_settle, static_cast<long>(std::ceil(10.0 * tau * p.fsw)));
      }
      const long max_settle = std::max({50 * chunk, 4 * min_settle, 2000L});
      double prev_mean = 0.0;
      bool have_prev = false;
      bool settled = false;
      while (k < max_settle) {
        double integral = 0.0;
        for (long i = 0; i < chunk; ++i) integral += step(false).vo_integral;
        const double mean = integral / (chunk * period);
        if (have_prev && k >= min_settle &&
            std::abs(mean - prev_mean) <= opts.settle_tol * std::abs(mean)) {
          settled = true;
          break;
        }
        prev_mean = mean;
        have_prev = true;
      }
      if (!settled) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "injection at %.6g Hz did not settle within %ld periods",
                      f, max_settle);
        throw SimulationError(SimulationError::Kind::Settling, buf);
      }

      Complex vo_acc{0.0, 0.0};
      Complex q_acc{0.0, 0.0};
      for (long i = 0; i < window; ++i) {
        const double t0 = static_cast<double>(k) * period;
        const double duty = drive_for(t0).duty;
        const auto r = step(true);
        const auto& tr = r.trajectory;
        for (size_t j = 1; j < tr.size(); ++j) {
          const double ta = t0 + tr[j - 1].t;
          const double tb = t0 + tr[j].t;
          vo_acc += 0.5 * (tb - ta) *
                    (tr[j - 1].vo * std::polar(1.0, -w * ta) + tr[j].vo * std::polar(1.0, -w * tb));
        }
        // Fundamental of the realized gate pulse [t0, t0 + duty T].
        q_acc += (std::polar(1.0, -w * t0) - std::polar(1.0, -w * (t0 + duty * period))) / (kJ * w);
      }
      const double tw = static_cast<double>(window) * period;
      const Complex vo_hat = 2.0 / tw * vo_acc;
      Complex in_hat;
      switch (kind) {
        case ResponseKind::Gvd: in_hat = 2.0 / tw * q_acc; break;
        case ResponseKind::Gvv: in_hat = -kJ * a * p.vi; break;
        case ResponseKind::Zo: in_hat = -kJ * a * io; break;
      }
      return {f, vo_hat / in_hat};
    } catch (const SimulationError& e) {
      if (e.kind() == SimulationError::Kind::Dcm) {
        throw SimulationError(SimulationError::Kind::Dcm,
                              std::string(e.what()) +
                                  "; the injection drove the converter into DCM, reduce "
                                  "amplitude_fraction");
      }
      throw;
    }
  }
};

}  // namespace

FrequencyResponse numeric_frequency_response(const ConverterParams& p, const LoadModel& load,
                                             const SimConfig& cfg, ResponseKind kind,
                                             const std::vector<double>& f_list,
                                             const NumericResponseOptions& opts) {
  for (double f : f_list) {
    require_positive_frequency(f);
    if (f >= p.fsw / 2.0) throw DomainError("numeric response requires f < fsw / 2");
  }
  if (!(opts.amplitude_fraction > 0.0) || opts.window_perturbation_periods < 1) {
    throw DomainError("numeric response: amplitude_fraction > 0 and window >= 1 required");
  }

  const auto ss = find_periodic_steady_state(p, load, cfg);
  const auto& last = ss.samples.back();
  SimState start{last.il, last.ilm, last.vo, 0.0, Interval::TON};
  const double io = load_current(load, period_average(ss.samples, ss.signal("vo")));

  const InjectionRun run{p, load, cfg, opts, kind, start, io};

  FrequencyResponse out{kind, ResponseMethod::Numeric, std::vector<ResponsePoint>(f_list.size())};
  unsigned threads = opts.max_threads ? opts.max_threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);

  // Strided work split; each worker owns its own simulation state.
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < std::min<size_t>(threads, f_list.size()); ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (size_t i = w; i < f_list.size(); i += threads) out.points[i] = run.measure(f_list[i]);
    }));
  }
  for (auto& fut : workers) fut.get();
  return out;
}

}  // namespace bbmsf
