#include "bbmsf/dmppt_string.hpp"

#include "bbmsf/case_study.hpp"
#include "doctest.h"

using namespace bbmsf;

TEST_CASE("uniform irradiance") {
  const auto r = evaluate_scenario(case_study::scenario_e0(), 1.0, 1.0 / 3.0, 0.72);
  CHECK(r.p_string == doctest::Approx(4050.0));
  CHECK(r.i_string == doctest::Approx(6.75));
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].vo == doctest::Approx(600.0 / 18.0));
  CHECK(r.entries[0].steps_up);
  CHECK(r.all_feasible());
}

TEST_CASE("partial shading") {
  const auto r = evaluate_scenario(case_study::scenario_e1(), 1.0, 1.0 / 3.0, 0.72);
  CHECK(r.p_string == doctest::Approx(3341.25));
  CHECK(r.i_string == doctest::Approx(5.56875));
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].vo == doctest::Approx(40.404).epsilon(1e-4));
  CHECK(r.entries[1].vo == doctest::Approx(12.121).epsilon(1e-4));
  CHECK(r.entries[0].steps_up);
  CHECK_FALSE(r.entries[1].steps_up);
  CHECK(r.entries[0].duty == doctest::Approx(0.689488744).epsilon(1e-8));
  // Output voltages of all converters add up to the string voltage.
  double v = 0.0;
  for (const auto& e : r.entries) v += e.count * e.vo;
  CHECK(v == doctest::Approx(600.0));
}

TEST_CASE("converter efficiency lowers delivered power") {
  auto sc = case_study::scenario_e0();
  sc.entries[0].efficiency = 0.95;
  const auto r = evaluate_scenario(sc, 1.0, 1.0 / 3.0, 0.72);
  CHECK(r.p_string == doctest::Approx(0.95 * 4050.0));
  CHECK(r.entries[0].vo == doctest::Approx(600.0 / 18.0));
}

TEST_CASE("duty limit and reachability") {
  StringScenario sc{600.0, {{{225.0, 29.3, "a"}, 12.0, 1.0}}, false};
  const auto r = evaluate_scenario(sc, 1.0, 1.0 / 3.0, 0.72);
  CHECK(r.entries[0].duty > 0.72);
  CHECK_FALSE(r.entries[0].duty_feasible);
  CHECK_FALSE(r.all_feasible());

  StringScenario unreachable{600.0, {{{225.0, 29.3, "a"}, 9.0, 1.0}}, false};
  CHECK_THROWS_AS(evaluate_scenario(unreachable, 1.0, 1.0 / 3.0, 0.72), DomainError);
}

TEST_CASE("scenario validation") {
  StringScenario sc{600.0, {{{225.0, 29.3, "a"}, 4.5, 1.0}}, true};
  CHECK_FALSE(validate_scenario(sc).ok());
  sc.integer_counts = false;
  CHECK(validate_scenario(sc).ok());
  sc.v_string = 0.0;
  CHECK_FALSE(validate_scenario(sc).ok());
  CHECK(string_current(3341.25, 600.0) == doctest::Approx(5.56875));
  CHECK(converter_output_voltage(67.5, 3341.25, 600.0) == doctest::Approx(12.1212121).epsilon(1e-8));
}
