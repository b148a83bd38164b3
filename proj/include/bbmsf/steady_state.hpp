#pragma once

#include <string_view>

#include "bbmsf/model.hpp"

namespace bbmsf {

// Transformer reset duty from volt-second balance on the magnetizing
// inductance. Stacked: reset voltage vi (1 + nd) / nd, D2 = nd D / (1 + nd).
// Tertiary: reset voltage vi / nd, D2 = nd D.
enum class ResetDutyModel { Stacked, Tertiary };

std::string_view to_string(ResetDutyModel model);
ResetDutyModel reset_duty_model_from_string(std::string_view name);

struct ResetDuty {
  double d2 = 0.0;
  bool completes = true;  // d + d2 <= 1
};

struct DeviceStress {
  double avg = 0.0;
  double peak = 0.0;
  double rms = 0.0;
};

struct PowerSplit {
  double notmag = 0.0;
  double mag = 0.0;
};

// Every analytic CCM quantity at one operating point. Voltages are signed
// where a sign is meaningful (v_l_off is negative).
struct SteadyStateReport {
  ResetDutyModel model = ResetDutyModel::Stacked;
  double vo = 0.0;
  double d = 0.0;
  double d2 = 0.0;
  bool reset_completes = true;
  bool ccm = true;

  double po = 0.0;
  double il_avg = 0.0;
  double dil = 0.0;
  double il_peak = 0.0;
  double il_min = 0.0;
  double il_rms = 0.0;

  double dilm = 0.0;
  double ilm_avg = 0.0;
  double ilm_peak = 0.0;
  double ilm_rms = 0.0;

  DeviceStress s;
  DeviceStress d1;
  DeviceStress d2_diode;
  DeviceStress dd;

  // The switch average as printed, I_L (1 + n) D + I_Lm. It counts the whole
  // magnetizing average, including the reset interval where the switch is off.
  double i_s_avg_printed = 0.0;
  // Reset diode average without the triangle factor 1/2.
  double i_dd_avg_printed = 0.0;

  double v_l_on = 0.0;
  double v_l_off = 0.0;
  double v_lm_on = 0.0;
  double v_lm_off1 = 0.0;
  double v_s_off1 = 0.0;
  double v_s_off2 = 0.0;
  double v_d1 = 0.0;
  double v_d2 = 0.0;
  double v_dd_on = 0.0;
  double v_dd_off2 = 0.0;

  double i_pri_rms = 0.0;
  double i_sec_rms = 0.0;
  double i_ter_rms = 0.0;
  double i_co_rms = 0.0;
  double i_ci_rms = 0.0;

  double p_notmag_fraction = 0.0;
  double p_mag_fraction = 0.0;
};

/// RMS of a linear ramp with mean `mean` and peak-to-peak `ripple` that is
/// active for the fraction `theta` of the period and zero elsewhere.
double trapezoid_rms(double mean, double ripple, double theta);

double inductor_ripple(const ConverterParams& p);
double average_inductor_current(const ConverterParams& p, double po);
double magnetizing_ripple(const ConverterParams& p);
ResetDuty reset_duty(const ConverterParams& p, ResetDutyModel model);
double magnetizing_average(const ConverterParams& p, ResetDutyModel model);

/// Full stress report at output power po. CCM loss is reported through
/// `ccm == false`; the CCM formulas are still evaluated.
SteadyStateReport device_stresses(const ConverterParams& p, double po, ResetDutyModel model);

PowerSplit power_split(double n);

}  // namespace bbmsf
