#pragma once

// Reference design: a 225 W module-integrated converter for a 600 V, 18-panel
// DMPPT string, with 25 % of the panels shaded in scenario E1.

#include <vector>

#include "bbmsf/design_engine.hpp"
#include "bbmsf/dmppt_string.hpp"
#include "bbmsf/model.hpp"

namespace bbmsf::case_study {

inline constexpr double kStringVoltage = 600.0;
inline constexpr double kPanelsPerString = 18.0;
inline constexpr double kShadedFraction = 0.25;
inline constexpr double kPanelPower = 225.0;
inline constexpr double kPanelVoltage = 29.3;
inline constexpr double kShadedPanelPower = 67.5;
inline constexpr double kShadedPanelVoltage = 15.0;
inline constexpr double kDutyMax = 0.72;
inline constexpr double kReferenceLoadResistance = 7.255;

/// Non-shaded converter in scenario E1 (duty 0.689, 7.255 ohm load).
inline ConverterParams reference_params() {
  return {29.3, 1.0, 1.0 / 3.0, 68e-6, 250e-6, 112e-6, 50e3, 0.689};
}

inline Parasitics reference_parasitics() {
  Parasitics x;
  x.rds_on = 9.6e-3;
  x.vf_d1 = 1.2;
  x.vf_d2 = 0.33;
  x.vf_dd = 1.2;
  x.dcr_l = 27.3e-3;
  x.dcr_pri = 15e-3;
  x.dcr_sec = 17.2e-3;
  x.dcr_ter = 8.5e-3;
  return x;
}

inline DesignSpec reference_spec() {
  DesignSpec s;
  s.vi_range = {15.0, 29.3};
  s.vo_range = {12.0, 42.2};
  s.vo_tolerance = 0.02;
  s.d_range = {0.0, kDutyMax};
  s.po_range = {60.0, 225.0};
  s.voltage_safety_margin = 0.20;
  return s;
}

inline StringScenario scenario_e0() {
  return {kStringVoltage, {{{kPanelPower, kPanelVoltage, "non-shaded"}, kPanelsPerString, 1.0}},
          false};
}

inline StringScenario scenario_e1() {
  const double shaded = kShadedFraction * kPanelsPerString;
  return {kStringVoltage,
          {{{kPanelPower, kPanelVoltage, "non-shaded"}, kPanelsPerString - shaded, 1.0},
           {{kShadedPanelPower, kShadedPanelVoltage, "shaded"}, shaded, 1.0}},
          false};
}

/// E0, E1 non-shaded and E1 shaded converter operating points.
inline std::vector<OperatingPointRequest> scenario_points() {
  const double p_e0 = kPanelsPerString * kPanelPower;
  const double shaded = kShadedFraction * kPanelsPerString;
  const double p_e1 = (kPanelsPerString - shaded) * kPanelPower + shaded * kShadedPanelPower;
  return {
      {"E0", kPanelVoltage, kPanelPower / p_e0 * kStringVoltage, kPanelPower},
      {"E1 non-shaded", kPanelVoltage, kPanelPower / p_e1 * kStringVoltage, kPanelPower},
      {"E1 shaded", kShadedPanelVoltage, kShadedPanelPower / p_e1 * kStringVoltage,
       kShadedPanelPower},
  };
}

/// Converter parameters at an operating point, sharing the reference design's
/// components.
inline ConverterParams params_at(const OperatingPointRequest& op) {
  ConverterParams p = reference_params();
  p.vi = op.vi;
  p.d = op.vo / ((1.0 + p.n) * op.vi);
  return p;
}

}  // namespace bbmsf::case_study
