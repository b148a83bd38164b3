#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bbmsf/model.hpp"

namespace bbmsf {

// Switching intervals of one period: switch on; switch off while the
// magnetizing current resets through the reset diode; switch off after reset.
enum class Interval { TON, TOFF1, TOFF2 };

std::string_view to_string(Interval interval);

// Voltage across the magnetizing inductance during reset. Tertiary applies
// vi / nd (D2 = nd D); Stacked applies vi (1 + nd) / nd (D2 = nd D / (1 + nd)).
enum class ResetVoltageModel { Tertiary, Stacked };

std::string_view to_string(ResetVoltageModel model);
ResetVoltageModel reset_voltage_model_from_string(std::string_view name);

struct SimConfig {
  int steps_per_period = 2000;
  int max_periods = 0;  // 0 selects 20 * ceil(rl * co * fsw) for resistive loads
  double periodicity_tol = 1e-6;
  double event_tol = 1e-6;
  ResetVoltageModel reset_voltage_model = ResetVoltageModel::Tertiary;
};

ValidationResult validate_sim_config(const SimConfig& cfg);

struct SimState {
  double il = 0.0;
  double ilm = 0.0;
  double vo = 0.0;
  double t = 0.0;  // time within the period [s]
  Interval interval = Interval::TON;
};

struct Derivatives {
  double dil = 0.0;
  double dilm = 0.0;
  double dvo = 0.0;
};

class SimulationError : public std::runtime_error {
 public:
  enum class Kind { Dcm, NonReset, NonConvergence, Settling };

  SimulationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

double reset_voltage(double vi, double nd, ResetVoltageModel model);

Derivatives interval_derivatives(const SimState& s, const ConverterParams& p,
                                 const LoadModel& load, const SimConfig& cfg);

struct Sample {
  double t = 0.0;
  double il = 0.0;
  double ilm = 0.0;
  double vo = 0.0;
  Interval interval = Interval::TON;
};

// Per-period excitation. Empty functions mean a constant p.vi and no
// injection. Both functions receive absolute time.
struct PeriodDrive {
  double duty = 0.0;
  std::function<double(double)> vi;
  std::function<double(double)> i_inject;
};

struct PeriodResult {
  SimState end;
  std::vector<Sample> trajectory;  // empty unless requested
  std::optional<double> reset_time;  // within the period [s]
  double vo_integral = 0.0;          // integral of vo over the period [V s]
};

/// Integrates one switching period starting at the turn-on edge. Throws
/// SimulationError::Dcm if il goes negative and SimulationError::NonReset if
/// the magnetizing current has not returned to zero by the end of the period.
PeriodResult advance_period(const SimState& s0, const ConverterParams& p, const LoadModel& load,
                            const SimConfig& cfg, bool record = true);

/// Same as above with an explicit excitation; t0 is the absolute start time.
PeriodResult advance_period(const SimState& s0, double t0, const ConverterParams& p,
                            const LoadModel& load, const SimConfig& cfg, const PeriodDrive& drive,
                            bool record);

// One converged switching period. Samples lie on the uniform grid
// k * T / steps_per_period plus a left/right pair at every switching event
// (gate edge and reset), so signals with jumps integrate exactly.
struct PeriodicWaveform {
  ConverterParams params;
  LoadModel load;
  SimConfig cfg;
  std::vector<Sample> samples;
  std::optional<double> reset_time;
  double residual = 0.0;
  int periods = 0;

  std::vector<double> signal(std::string_view name) const;
  static const std::vector<std::string>& signal_names();
  static const std::vector<std::string>& csv_columns();
};

PeriodicWaveform find_periodic_steady_state(const ConverterParams& p, const LoadModel& load,
                                            const SimConfig& cfg);

struct Metrics {
  double avg = 0.0;
  double rms = 0.0;
  double peak = 0.0;
  double peak_to_peak = 0.0;
};

Metrics waveform_metrics(const PeriodicWaveform& w, std::string_view signal);

double measured_reset_duty(const PeriodicWaveform& w);

struct MeasuredPowerSplit {
  double notmag = 0.0;
  double mag = 0.0;
};

MeasuredPowerSplit measure_power_split(const PeriodicWaveform& w, const ConverterParams& p);

/// Time average of y over the samples (trapezoid rule, one full period).
double period_average(const std::vector<Sample>& samples, const std::vector<double>& y);

}  // namespace bbmsf
