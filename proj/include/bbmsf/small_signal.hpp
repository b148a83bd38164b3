#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "bbmsf/model.hpp"
#include "bbmsf/switched_sim.hpp"

namespace bbmsf {

using Complex = std::complex<double>;

enum class ResponseKind { Gvd, Gvv, Zo };
enum class ResponseMethod { Analytic, Numeric };

std::string_view to_string(ResponseKind kind);
std::string_view to_string(ResponseMethod method);
ResponseKind response_kind_from_string(std::string_view name);

// Averaged-model blocks at one frequency: the inductor current responds to
// duty (a), output voltage (b) and input voltage (c); zp is the output
// capacitor in parallel with the load resistor.
struct SmallSignalBlocks {
  Complex a;
  Complex b;
  Complex c;
  Complex zp;
};

SmallSignalBlocks blocks_at(const ConverterParams& p, double rl, double f);

Complex gvd(const ConverterParams& p, double rl, double f);
Complex gvv(const ConverterParams& p, double rl, double f);
Complex zo(const ConverterParams& p, double rl, double f);

/// Undamped natural frequency 1 / (2 pi sqrt(L Co)) [Hz].
double resonant_frequency(const ConverterParams& p);

struct ResponsePoint {
  double f = 0.0;
  Complex gain;
};

struct FrequencyResponse {
  ResponseKind kind = ResponseKind::Gvd;
  ResponseMethod method = ResponseMethod::Analytic;
  std::vector<ResponsePoint> points;
};

FrequencyResponse analytic_frequency_response(const ConverterParams& p, double rl,
                                              ResponseKind kind, const std::vector<double>& f_list);

struct NumericResponseOptions {
  double amplitude_fraction = 0.01;
  int window_perturbation_periods = 20;
  double settle_tol = 1e-4;
  unsigned max_threads = 0;  // 0 = hardware concurrency
};

/// Sinusoidal injection into the switched model followed by single-bin
/// correlation over a window holding whole numbers of both switching and
/// perturbation periods. Requested frequencies are snapped to such a grid;
/// the returned points carry the snapped frequencies.
FrequencyResponse numeric_frequency_response(const ConverterParams& p, const LoadModel& load,
                                             const SimConfig& cfg, ResponseKind kind,
                                             const std::vector<double>& f_list,
                                             const NumericResponseOptions& opts = {});

/// Frequency whose window of `perturbation_periods` cycles spans an integer
/// number of switching periods (returned through switching_periods).
double snap_frequency(double f, double fsw, int perturbation_periods, long* switching_periods);

std::vector<double> log_grid(double fmin, double fmax, int points);

double magnitude_db(Complex g);

/// Phase in degrees, unwrapped continuously along the sequence, starting from
/// the principal value of the first point.
std::vector<double> unwrapped_phase_deg(const std::vector<ResponsePoint>& points);

}  // namespace bbmsf
