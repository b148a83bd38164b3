#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmsf/design_engine.hpp"
#include "bbmsf/dmppt_string.hpp"
#include "bbmsf/model.hpp"
#include "bbmsf/steady_state.hpp"
#include "bbmsf/switched_sim.hpp"

namespace bbmsf {

// Raised when a configuration document cannot be turned into valid module
// inputs. Every problem found is listed, each naming the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct OutputPaths {
  std::string report;
  std::string waveform;
  std::string bode;
};

// Converter run configuration:
//   converter: vi [V], n, nd, l [H], lm [H], co [F], fsw [Hz], d
//   load:      {type: "resistive", rl [ohm]} | {type: "current_sink", io [A]}
//   sim:       steps_per_period, max_periods, periodicity_tol, event_tol,
//              reset_voltage_model ("tertiary" | "stacked")  (optional)
//   parasitics: rds_on [ohm], vf_d1, vf_d2, vf_dd [V], dcr_l, dcr_pri,
//               dcr_sec, dcr_ter [ohm]  (optional)
//   reset_duty_model: "stacked" | "tertiary"  (optional)
//   outputs: report, waveform, bode  (optional paths)
struct RunConfig {
  ConverterParams converter;
  LoadModel load = ResistiveLoad{};
  SimConfig sim;
  std::optional<Parasitics> parasitics;
  ResetDutyModel reset_duty_model = ResetDutyModel::Stacked;
  OutputPaths outputs;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Design request:
//   spec: vi_range, vo_range, d_range, po_range ([min, max] arrays),
//         vo_tolerance, voltage_safety_margin
//   converter: n, nd, l, lm, co, fsw
//   operating_points: [{label, vi, vo, po}]
//   parasitics (optional), reset_duty_model (optional),
//   output_ripple [V] (optional, sizes the output capacitor)
struct DesignRequest {
  DesignSpec spec;
  ConverterParams base;
  std::vector<OperatingPointRequest> points;
  std::optional<Parasitics> parasitics;
  ResetDutyModel reset_duty_model = ResetDutyModel::Stacked;
  std::optional<double> output_ripple;
};

DesignRequest parse_design_request(const std::string& json_text);
DesignRequest load_design_request(const std::string& path);

// String scenario: v_string, entries [{p_mpp, v_mpp, count, label,
// efficiency?}], n, nd, d_max, integer_counts (optional).
struct ScenarioConfig {
  StringScenario scenario;
  double n = 1.0;
  double nd = 1.0 / 3.0;
  double d_max = 0.72;
};

ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace bbmsf
