#include "bbmsf/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bbmsf {

std::string_view to_string(ResetDutyModel model) {
  return model == ResetDutyModel::Stacked ? "stacked" : "tertiary";
}

ResetDutyModel reset_duty_model_from_string(std::string_view name) {
  if (name == "stacked") return ResetDutyModel::Stacked;
  if (name == "tertiary") return ResetDutyModel::Tertiary;
  throw DomainError("unknown reset duty model '" + std::string(name) +
                    "' (expected stacked|tertiary)");
}

double trapezoid_rms(double mean, double ripple, double theta) {
  return std::sqrt(theta * (mean * mean + ripple * ripple / 12.0));
}

double inductor_ripple(const ConverterParams& p) {
  return p.vi * (1.0 + p.n) * (1.0 - p.d) * p.d / (p.l * p.fsw);
}

double average_inductor_current(const ConverterParams& p, double po) {
  return po / (p.vi * (1.0 + p.n) * p.d);
}

double magnetizing_ripple(const ConverterParams& p) { return p.vi * p.d / (p.lm * p.fsw); }

ResetDuty reset_duty(const ConverterParams& p, ResetDutyModel model) {
  const double d2 =
      model == ResetDutyModel::Stacked ? p.nd / (1.0 + p.nd) * p.d : p.nd * p.d;
  return {d2, p.d + d2 <= 1.0};
}

double magnetizing_average(const ConverterParams& p, ResetDutyModel model) {
  return magnetizing_ripple(p) / 2.0 * (p.d + reset_duty(p, model).d2);
}

SteadyStateReport device_stresses(const ConverterParams& p, double po, ResetDutyModel model) {
  SteadyStateReport r;
  const double k = 1.0 + p.n;
  const double d = p.d;
  const auto reset = reset_duty(p, model);

  r.model = model;
  r.d = d;
  r.d2 = reset.d2;
  r.reset_completes = reset.completes;
  r.vo = voltage_transfer(p.vi, p.n, d);
  r.po = po;

  r.il_avg = average_inductor_current(p, po);
  r.dil = inductor_ripple(p);
  r.il_peak = r.il_avg + r.dil / 2.0;
  r.il_min = r.il_avg - r.dil / 2.0;
  r.il_rms = trapezoid_rms(r.il_avg, r.dil, 1.0);
  r.ccm = r.il_avg > r.dil / 2.0;

  // Magnetizing current ramps 0 -> dilm over d and back to 0 over d2.
  r.dilm = magnetizing_ripple(p);
  r.ilm_peak = r.dilm;
  r.ilm_avg = r.dilm / 2.0 * (d + r.d2);
  r.ilm_rms = r.dilm * std::sqrt((d + r.d2) / 3.0);

  r.d1 = {r.il_avg * d, r.il_peak, trapezoid_rms(r.il_avg, r.dil, d)};
  r.d2_diode = {r.il_avg * (1.0 - d), r.il_peak, trapezoid_rms(r.il_avg, r.dil, 1.0 - d)};

  const double idd_peak = r.dilm / p.nd;
  r.dd = {idd_peak * r.d2 / 2.0, idd_peak, idd_peak * std::sqrt(r.d2 / 3.0)};
  r.i_dd_avg_printed = idd_peak * r.d2;

  // Switch: reflected output ramp plus the magnetizing ramp, on for d.
  const double is_mean = k * r.il_avg + r.dilm / 2.0;
  const double is_ripple = k * r.dil + r.dilm;
  r.s = {is_mean * d, k * r.il_peak + r.dilm, trapezoid_rms(is_mean, is_ripple, d)};
  r.i_s_avg_printed = k * r.il_avg * d + r.ilm_avg;

  r.v_l_on = k * p.vi - r.vo;
  r.v_l_off = -r.vo;
  r.v_lm_on = p.vi;
  r.v_lm_off1 = p.vi / p.nd;
  r.v_s_off1 = p.vi * (1.0 + p.nd) / p.nd;
  r.v_s_off2 = p.vi;
  r.v_d1 = p.vi * k / p.nd;
  r.v_d2 = p.vi * k;
  r.v_dd_on = p.vi * (1.0 + p.nd);
  r.v_dd_off2 = p.vi;

  // Primary carries n * il + ilm during the on interval (ampere-turn balance);
  // the secondary carries il through D1; the tertiary carries the reset current.
  r.i_pri_rms = trapezoid_rms(p.n * r.il_avg + r.dilm / 2.0, p.n * r.dil + r.dilm, d);
  r.i_sec_rms = r.d1.rms;
  r.i_ter_rms = r.dd.rms;
  r.i_co_rms = r.dil / std::sqrt(12.0);

  // Net current drawn from the input node: switch current minus reset return.
  const double iin_mean = r.s.avg - r.dd.avg;
  const double iin_ms = r.s.rms * r.s.rms + r.dd.rms * r.dd.rms;
  r.i_ci_rms = std::sqrt(std::max(0.0, iin_ms - iin_mean * iin_mean));

  const auto split = power_split(p.n);
  r.p_notmag_fraction = split.notmag;
  r.p_mag_fraction = split.mag;
  return r;
}

PowerSplit power_split(double n) {
  if (n < 0.0) throw DomainError("power_split: n must be non-negative");
  const double notmag = 1.0 / (1.0 + n);
  return {notmag, 1.0 - notmag};
}

}  // namespace bbmsf
