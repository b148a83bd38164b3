#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bbmsf {

// Electrical parameters of one converter. SI base units throughout; duty is
// a ratio, never a percentage.
struct ConverterParams {
  double vi = 0.0;   // input voltage [V]
  double n = 0.0;    // secondary-to-primary turns ratio
  double nd = 0.0;   // reset-winding turns ratio
  double l = 0.0;    // output filter inductance [H]
  double lm = 0.0;   // magnetizing inductance referred to primary [H]
  double co = 0.0;   // output capacitance [F]
  double fsw = 0.0;  // switching frequency [Hz]
  double d = 0.0;    // duty cycle

  double period() const { return 1.0 / fsw; }
};

struct ResistiveLoad {
  double rl = 0.0;  // [ohm]
};

struct CurrentSinkLoad {
  double io = 0.0;  // [A]
};

using LoadModel = std::variant<ResistiveLoad, CurrentSinkLoad>;

/// Current drawn by the load at output voltage vo.
double load_current(const LoadModel& load, double vo);

// Conduction parasitics. Only the loss estimator reads these; the switched
// simulator is ideal.
struct Parasitics {
  double rds_on = 0.0;
  double vf_d1 = 0.0;
  double vf_d2 = 0.0;
  double vf_dd = 0.0;
  double dcr_l = 0.0;
  double dcr_pri = 0.0;
  double dcr_sec = 0.0;
  double dcr_ter = 0.0;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationResult validate_params(const ConverterParams& p, const LoadModel& load);
ValidationResult validate_parasitics(const Parasitics& parasitics);

// Thrown on arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ideal CCM output voltage (1 + n) * d * vi.
double voltage_transfer(double vi, double n, double d);

/// Duty cycle that produces vo from vi. Throws DomainError when the required
/// duty reaches or exceeds 1.
double duty_for_output(double vi, double vo, double n);

/// Transformer reset condition nd <= (1 - d) / d.
bool reset_feasible(double nd, double d);

}  // namespace bbmsf
