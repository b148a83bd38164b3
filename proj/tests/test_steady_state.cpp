#include "bbmsf/steady_state.hpp"

#include <cmath>

#include "bbmsf/case_study.hpp"
#include "doctest.h"

using namespace bbmsf;

namespace {

// Direct piecewise evaluation, kept apart from the library formulas.
struct Oracle {
  double vi, n, nd, l, lm, fsw, d, po;

  double vo() const { return (1 + n) * d * vi; }
  double il() const { return po / vo(); }
  double dil() const { return ((1 + n) * vi - vo()) * d / (fsw * l); }
  double dilm() const { return vi * d / (fsw * lm); }
  // rms of a ramp from a to b lasting a fraction theta of the period
  static double ramp_ms(double a, double b, double theta) { return theta * (a * a + a * b + b * b) / 3; }
};

Oracle e0() {
  return {29.3, 1.0, 1.0 / 3.0, 68e-6, 250e-6, 50e3, (600.0 / 18.0) / (2 * 29.3), 225.0};
}

Oracle table4() { return {29.3, 1.0, 1.0 / 3.0, 68e-6, 250e-6, 50e3, 0.689, 40.3754 * 40.3754 / 7.255}; }

ConverterParams params(const Oracle& o) { return {o.vi, o.n, o.nd, o.l, o.lm, 112e-6, o.fsw, o.d}; }

}  // namespace

TEST_CASE("inductor ripple at E0 and at the reference point") {
  const auto o = e0();
  CHECK(inductor_ripple(params(o)) == doctest::Approx(o.dil()).epsilon(1e-12));
  CHECK(inductor_ripple(params(o)) == doctest::Approx(4.227174).epsilon(1e-6));
  CHECK(inductor_ripple(case_study::reference_params()) == doctest::Approx(3.69316).epsilon(1e-5));
}

TEST_CASE("magnetizing ripple and reset duty models") {
  const auto p = case_study::reference_params();
  CHECK(magnetizing_ripple(p) == doctest::Approx(1.615016).epsilon(1e-6));
  const auto pub = reset_duty(p, ResetDutyModel::Stacked);
  const auto vs = reset_duty(p, ResetDutyModel::Tertiary);
  CHECK(pub.d2 == doctest::Approx(0.17225).epsilon(1e-9));
  CHECK(vs.d2 == doctest::Approx(0.229667).epsilon(1e-6));
  CHECK(pub.completes);
  CHECK(vs.completes);
  CHECK(magnetizing_average(p, ResetDutyModel::Stacked) == doctest::Approx(0.695466).epsilon(1e-6));
  CHECK(magnetizing_average(p, ResetDutyModel::Tertiary) == doctest::Approx(0.741831).epsilon(1e-6));

  ConverterParams late = p;
  late.d = 0.8;
  CHECK_FALSE(reset_duty(late, ResetDutyModel::Tertiary).completes);
}

TEST_CASE("trapezoid rms matches a ramp integral") {
  for (double m : {0.5, 3.0, 6.75}) {
    for (double r : {0.0, 1.0, 4.2}) {
      for (double th : {0.2, 0.5, 1.0}) {
        const double ms = Oracle::ramp_ms(m - r / 2, m + r / 2, th);
        CHECK(trapezoid_rms(m, r, th) == doctest::Approx(std::sqrt(ms)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("E0 device stresses") {
  const auto o = e0();
  const auto r = device_stresses(params(o), o.po, ResetDutyModel::Stacked);
  CHECK(r.vo == doctest::Approx(600.0 / 18.0));
  CHECK(r.il_avg == doctest::Approx(6.75));
  CHECK(r.il_peak == doctest::Approx(8.863587).epsilon(1e-6));
  CHECK(r.il_rms == doctest::Approx(std::sqrt(Oracle::ramp_ms(o.il() - o.dil() / 2, o.il() + o.dil() / 2, 1))));
  CHECK(r.il_rms == doctest::Approx(6.859416).epsilon(1e-6));
  CHECK(r.s.rms == doctest::Approx(10.895033).epsilon(1e-6));
  CHECK(r.s.peak == doctest::Approx(19.0605).epsilon(1e-5));
  CHECK(r.d1.peak == doctest::Approx(r.il_peak));
  CHECK(r.ccm);
  CHECK(r.reset_completes);
  // Blocking voltages scale with vi.
  CHECK(r.v_d2 == doctest::Approx(2 * o.vi));
  CHECK(r.v_lm_on == doctest::Approx(o.vi));
  CHECK(r.v_l_on + r.vo == doctest::Approx((1 + o.n) * o.vi));
}

TEST_CASE("magnetizing rms at the reference point") {
  const auto o = table4();
  const auto r = device_stresses(params(o), o.po, ResetDutyModel::Stacked);
  CHECK(r.ilm_rms == doctest::Approx(1.615016 * std::sqrt((0.689 + 0.17225) / 3)).epsilon(1e-6));
  CHECK(r.ilm_rms == doctest::Approx(0.866).epsilon(2e-3));
}

TEST_CASE("switch average equals input power over vi plus reset return") {
  // Average input current is po / vi; the reset winding returns dd.avg.
  const auto o = table4();
  const auto r = device_stresses(params(o), o.po, ResetDutyModel::Tertiary);
  CHECK(r.s.avg - r.dd.avg == doctest::Approx(o.po / o.vi).epsilon(1e-9));
}

TEST_CASE("power split") {
  const double n[] = {0.1, 0.5, 1.0, 1.5, 2.0};
  const double mag[] = {0.091, 0.333, 0.5, 0.6, 0.667};
  for (int i = 0; i < 5; ++i) {
    const auto s = power_split(n[i]);
    CHECK(s.mag == doctest::Approx(mag[i]).epsilon(1e-3));
    CHECK(s.mag + s.notmag == doctest::Approx(1.0));
  }
  CHECK_THROWS(power_split(-0.5));
}

TEST_CASE("reset duty model names round-trip") {
  for (auto m : {ResetDutyModel::Stacked, ResetDutyModel::Tertiary}) {
    CHECK(reset_duty_model_from_string(to_string(m)) == m);
  }
  CHECK_THROWS(reset_duty_model_from_string("nope"));
}
