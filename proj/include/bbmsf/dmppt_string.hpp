#pragma once

#include <string>
#include <vector>

#include "bbmsf/model.hpp"

namespace bbmsf {

struct PanelSpec {
  double p_mpp = 0.0;  // [W]
  double v_mpp = 0.0;  // [V]
  std::string label;
};

// One group of identical panels. Counts are real-valued weights so that a
// fraction of a string (e.g. 25 % of 18 panels) can be represented.
struct StringEntry {
  PanelSpec panel;
  double count = 0.0;
  double efficiency = 1.0;  // converter efficiency, P_out = efficiency * P_in
};

struct StringScenario {
  double v_string = 0.0;  // [V]
  std::vector<StringEntry> entries;
  bool integer_counts = false;  // require whole panels
};

ValidationResult validate_scenario(const StringScenario& sc);

struct EntryResult {
  std::string label;
  double p_pv = 0.0;
  double v_pv = 0.0;
  double count = 0.0;
  double vo = 0.0;
  double duty = 0.0;
  double i_string = 0.0;
  bool steps_up = false;
  bool duty_feasible = false;   // duty <= d_max
  bool reset_feasible = false;  // nd <= (1 - d) / d
};

struct ScenarioResult {
  double p_string = 0.0;
  double v_string = 0.0;
  double i_string = 0.0;
  std::vector<EntryResult> entries;

  bool all_feasible() const;
};

double string_current(double p_string, double v_string);
double converter_output_voltage(double p_pv, double p_string, double v_string);

/// Operating point of every converter in a series DMPPT string. Throws
/// DomainError when the scenario is invalid or an entry needs d >= 1.
ScenarioResult evaluate_scenario(const StringScenario& sc, double n, double nd, double d_max);

}  // namespace bbmsf
