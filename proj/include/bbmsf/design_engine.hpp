#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bbmsf/model.hpp"
#include "bbmsf/steady_state.hpp"

namespace bbmsf {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

struct DesignSpec {
  Range vi_range;
  Range vo_range;
  double vo_tolerance = 0.0;  // fraction, widens vo_range on both sides
  Range d_range;
  Range po_range;
  double voltage_safety_margin = 0.20;
};

ValidationResult validate_design_spec(const DesignSpec& spec);

class DesignError : public std::runtime_error {
 public:
  enum class Kind { InfeasibleDuty, ResetInfeasible, OutOfRange };

  DesignError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct OperatingPointRequest {
  std::string label;
  double vi = 0.0;
  double vo = 0.0;
  double po = 0.0;
};

struct OperatingPoint {
  std::string label;
  double vi = 0.0;
  double vo = 0.0;
  double po = 0.0;
  double d = 0.0;
  double i_string = 0.0;
  double il = 0.0;
};

/// Duty and currents for one (vi, vo, po). Duty feasibility (d < 1,
/// d <= d_range.max, transformer reset) is checked before the spec ranges.
OperatingPoint solve_operating_point(const DesignSpec& spec, const OperatingPointRequest& req,
                                     double n, double nd);

struct EnvelopeEntry {
  std::string name;
  std::string unit;
  double value = 0.0;
  std::string at;        // label of the operating point where the maximum occurs
  double derated = 0.0;  // value * (1 + margin), informational for semiconductors
};

struct StressEnvelope {
  double voltage_safety_margin = 0.0;
  std::vector<OperatingPoint> points;
  std::vector<SteadyStateReport> reports;
  std::vector<EnvelopeEntry> entries;
  EnvelopeEntry v_ci_rated;  // max vi with margin
  EnvelopeEntry v_co_rated;  // max vo with margin

  const EnvelopeEntry& get(const std::string& name) const;
};

/// Names of every quantity that enters the envelope, in report order.
const std::vector<std::string>& envelope_quantities();

/// Value of a named envelope quantity in one steady-state report.
double envelope_quantity(const SteadyStateReport& r, const std::string& name);

StressEnvelope stress_envelope(const DesignSpec& spec,
                               const std::vector<OperatingPointRequest>& points,
                               const ConverterParams& base, ResetDutyModel model);

struct ComponentLoss {
  std::string component;
  double watts = 0.0;
};

struct LossReport {
  std::vector<ComponentLoss> components;
  double total = 0.0;
  double po = 0.0;
  double efficiency = 1.0;

  const ComponentLoss& largest() const;
};

LossReport conduction_losses(const ConverterParams& p, double po, const Parasitics& parasitics,
                             ResetDutyModel model);

/// Minimum output capacitance for a peak-to-peak output ripple dvo_max with
/// an LC output filter: dIL / (8 fsw dvo_max).
double output_capacitor_minimum(const ConverterParams& p, double dvo_max);

// Input capacitor minimum of the reference design. No input ripple target is
// available to derive it, so it is carried as a documented constant.
inline constexpr double kReferenceInputCapacitorMinimum = 183.7e-6;

}  // namespace bbmsf
