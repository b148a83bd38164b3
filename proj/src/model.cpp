#include "bbmsf/model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bbmsf {

double load_current(const LoadModel& load, double vo) {
  if (const auto* r = std::get_if<ResistiveLoad>(&load)) return vo / r->rl;
  return std::get<CurrentSinkLoad>(load).io;
}

std::string ValidationResult::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.field << ": " << v.message << '\n';
  return os.str();
}

namespace {

void require_positive(std::vector<Violation>& out, const char* name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    out.push_back({name, std::string(name) + " must be positive"});
  }
}

void require_nonnegative(std::vector<Violation>& out, const char* name, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    out.push_back({name, std::string(name) + " must be non-negative"});
  }
}

}  // namespace

ValidationResult validate_params(const ConverterParams& p, const LoadModel& load) {
  ValidationResult result;
  auto& v = result.violations;
  require_positive(v, "vi", p.vi);
  require_positive(v, "n", p.n);
  require_positive(v, "nd", p.nd);
  require_positive(v, "l", p.l);
  require_positive(v, "lm", p.lm);
  require_positive(v, "co", p.co);
  require_positive(v, "fsw", p.fsw);
  if (!(p.d > 0.0 && p.d < 1.0)) {
    v.push_back({"d", "d must satisfy 0 < d < 1"});
  }
  if (const auto* r = std::get_if<ResistiveLoad>(&load)) {
    require_positive(v, "rl", r->rl);
  } else {
    require_positive(v, "io", std::get<CurrentSinkLoad>(load).io);
  }
  return result;
}

ValidationResult validate_parasitics(const Parasitics& x) {
  ValidationResult result;
  auto& v = result.violations;
  require_nonnegative(v, "rds_on", x.rds_on);
  require_nonnegative(v, "vf_d1", x.vf_d1);
  require_nonnegative(v, "vf_d2", x.vf_d2);
  require_nonnegative(v, "vf_dd", x.vf_dd);
  require_nonnegative(v, "dcr_l", x.dcr_l);
  require_nonnegative(v, "dcr_pri", x.dcr_pri);
  require_nonnegative(v, "dcr_sec", x.dcr_sec);
  require_nonnegative(v, "dcr_ter", x.dcr_ter);
  return result;
}

double voltage_transfer(double vi, double n, double d) {
  if (vi < 0.0 || n < 0.0 || d < 0.0) {
    throw DomainError("voltage_transfer: negative argument");
  }
  return (1.0 + n) * d * vi;
}

double duty_for_output(double vi, double vo, double n) {
  if (!(vi > 0.0) || vo < 0.0 || n < 0.0) {
    throw DomainError("duty_for_output: requires vi > 0, vo >= 0, n >= 0");
  }
  const double d = vo / ((1.0 + n) * vi);
  if (d >= 1.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "unreachable output voltage: required d = %.6g >= 1", d);
    throw DomainError(buf);
  }
  return d;
}

bool reset_feasible(double nd, double d) {
  if (d <= 0.0) return true;
  return nd <= (1.0 - d) / d;
}

}  // namespace bbmsf
