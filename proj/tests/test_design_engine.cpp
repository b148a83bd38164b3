#include "bbmsf/design_engine.hpp"

#include "bbmsf/case_study.hpp"
#include "doctest.h"

using namespace bbmsf;

namespace {

StressEnvelope reference_envelope() {
  return stress_envelope(case_study::reference_spec(), case_study::scenario_points(),
                         case_study::reference_params(), ResetDutyModel::Stacked);
}

}  // namespace

TEST_CASE("operating point solution") {
  const auto spec = case_study::reference_spec();
  const auto op = solve_operating_point(spec, {"E0", 29.3, 600.0 / 18.0, 225.0}, 1.0, 1.0 / 3.0);
  CHECK(op.d == doctest::Approx(0.568828214).epsilon(1e-8));
  CHECK(op.i_string == doctest::Approx(6.75));
  CHECK(op.il == doctest::Approx(6.75));
}

TEST_CASE("infeasibility is classified") {
  const auto spec = case_study::reference_spec();
  auto kind_of = [&](OperatingPointRequest r, double nd) {
    try {
      solve_operating_point(spec, r, 1.0, nd);
    } catch (const DesignError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  // d = 0.75 exceeds d_max before the range check on vo.
  CHECK(kind_of({"hi", 29.3, 43.95, 225.0}, 1.0 / 3.0) == static_cast<int>(DesignError::Kind::InfeasibleDuty));
  CHECK(kind_of({"unreachable", 10.0, 25.0, 100.0}, 1.0 / 3.0) ==
        static_cast<int>(DesignError::Kind::InfeasibleDuty));
  CHECK(kind_of({"reset", 29.3, 35.0, 225.0}, 1.0) == static_cast<int>(DesignError::Kind::ResetInfeasible));
  CHECK(kind_of({"range", 29.3, 35.0, 20.0}, 1.0 / 3.0) == static_cast<int>(DesignError::Kind::OutOfRange));
}

TEST_CASE("stress envelope over the scenario points") {
  const auto env = reference_envelope();
  CHECK(env.points.size() == 3);
  CHECK(env.get("i_d1_avg").value == doctest::Approx(3.84).epsilon(0.01));
  CHECK(env.get("i_d1_avg").at == "E1 non-shaded");
  CHECK(env.get("i_d2_avg").value == doctest::Approx(3.319).epsilon(0.01));
  CHECK(env.get("i_d2_avg").at == "E1 shaded");
  CHECK(env.get("i_d1_peak").value == doctest::Approx(8.863587).epsilon(1e-6));
  CHECK(env.get("v_d2").value == doctest::Approx(58.6));
  CHECK(env.get("v_d1").value == doctest::Approx(6 * 29.3));
  CHECK(env.v_ci_rated.value == doctest::Approx(35.16));
  CHECK(env.v_co_rated.value == doctest::Approx(48.4848485).epsilon(1e-8));
  CHECK(env.get("v_d1").derated == doctest::Approx(1.2 * env.get("v_d1").value));
  CHECK_THROWS(env.get("nonexistent"));
  for (const auto& name : envelope_quantities()) CHECK_NOTHROW(env.get(name));
}

TEST_CASE("envelope is the componentwise maximum") {
  const auto env = reference_envelope();
  for (const auto& name : envelope_quantities()) {
    double m = 0.0;
    for (const auto& r : env.reports) m = std::max(m, envelope_quantity(r, name));
    CHECK(env.get(name).value == doctest::Approx(m));
  }
}

TEST_CASE("conduction losses at E0") {
  const auto e0 = case_study::scenario_points()[0];
  const auto losses = conduction_losses(case_study::params_at(e0), e0.po, case_study::reference_parasitics(),
                                        ResetDutyModel::Stacked);
  CHECK(losses.largest().component == "D1");
  CHECK(losses.largest().watts == doctest::Approx(4.61).epsilon(0.01));
  CHECK(losses.efficiency > 0.936);
  CHECK(losses.efficiency < 1.0);
  double sum = 0.0;
  for (const auto& c : losses.components) sum += c.watts;
  CHECK(losses.total == doctest::Approx(sum));
  CHECK(losses.efficiency == doctest::Approx(e0.po / (e0.po + losses.total)));

  const auto none = conduction_losses(case_study::params_at(e0), e0.po, Parasitics{}, ResetDutyModel::Stacked);
  CHECK(none.total == doctest::Approx(0.0));
  CHECK(none.efficiency == doctest::Approx(1.0));
}

TEST_CASE("output capacitor sizing") {
  const auto p = case_study::params_at(case_study::scenario_points()[0]);
  CHECK(output_capacitor_minimum(p, 0.666) == doctest::Approx(15.868e-6).epsilon(1e-4));
  CHECK(output_capacitor_minimum(p, 0.48233) == doctest::Approx(21.91e-6).epsilon(1e-4));
}

TEST_CASE("spec validation") {
  CHECK(validate_design_spec(case_study::reference_spec()).ok());
  DesignSpec bad = case_study::reference_spec();
  bad.vi_range = {30.0, 10.0};
  bad.voltage_safety_margin = -0.1;
  CHECK(validate_design_spec(bad).violations.size() >= 2);
}
