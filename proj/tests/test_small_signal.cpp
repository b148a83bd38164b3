#include "bbmsf/small_signal.hpp"

#include <cmath>

#include "bbmsf/case_study.hpp"
#include "doctest.h"

using namespace bbmsf;

namespace {

const ConverterParams kRef = case_study::reference_params();
constexpr double kRl = case_study::kReferenceLoadResistance;

// Second-order LC with a resistive load, written out directly.
Complex oracle_gvd(double f) {
  const Complex s(0.0, 2 * M_PI * f);
  const double k = (1 + kRef.n) * kRef.vi;
  return k / (1.0 + s * kRef.l / kRl + s * s * kRef.l * kRef.co);
}

}  // namespace

TEST_CASE("analytic gvd against the LC oracle") {
  for (double f : {1.0, 100.0, 1823.7, 5e3, 20e3}) {
    const Complex g = gvd(kRef, kRl, f);
    const Complex o = oracle_gvd(f);
    CHECK(std::abs(g - o) < 1e-9 * std::abs(o));
  }
  CHECK(magnitude_db(gvd(kRef, kRl, 1e-3)) == doctest::Approx(35.35795).epsilon(1e-6));
  CHECK(resonant_frequency(kRef) == doctest::Approx(1823.7137).epsilon(1e-7));
  CHECK(std::abs(gvd(kRef, kRl, resonant_frequency(kRef))) == doctest::Approx(545.619).epsilon(1e-5));
}

TEST_CASE("gvv and zo") {
  CHECK(magnitude_db(gvv(kRef, kRl, 1e-3)) == doctest::Approx(2.78498).epsilon(1e-5));
  CHECK(std::abs(zo(kRef, kRl, 1e-3)) < 1e-3);
  CHECK(std::abs(zo(kRef, kRl, resonant_frequency(kRef))) == doctest::Approx(kRl).epsilon(1e-9));
}

TEST_CASE("log grid and snapping") {
  const auto g = log_grid(50.0, 12.5e3, 10);
  REQUIRE(g.size() == 10);
  CHECK(g.front() == doctest::Approx(50.0));
  CHECK(g.back() == doctest::Approx(12.5e3));
  CHECK(g[1] / g[0] == doctest::Approx(g[9] / g[8]));

  long n = 0;
  const double f = snap_frequency(1000.0, 50e3, 20, &n);
  CHECK(n == 1000);
  CHECK(f == doctest::Approx(1000.0));
  const double f2 = snap_frequency(1234.5, 50e3, 20, &n);
  CHECK(20.0 / f2 * 50e3 == doctest::Approx(static_cast<double>(n)));
}

TEST_CASE("phase unwrap is continuous") {
  std::vector<ResponsePoint> pts;
  for (double f : log_grid(10.0, 2e4, 60)) pts.push_back({f, gvd(kRef, kRl, f)});
  const auto ph = unwrapped_phase_deg(pts);
  for (size_t i = 1; i < ph.size(); ++i) CHECK(std::abs(ph[i] - ph[i - 1]) < 180.0);
  CHECK(ph.back() < -150.0);
}

TEST_CASE("numeric gvd matches the analytic response") {
  NumericResponseOptions opts;
  const std::vector<double> f = {200.0, 1000.0, 8000.0};
  const auto r = numeric_frequency_response(kRef, ResistiveLoad{kRl}, SimConfig{}, ResponseKind::Gvd, f, opts);
  REQUIRE(r.points.size() == 3);
  for (const auto& pt : r.points) {
    const Complex o = oracle_gvd(pt.f);
    CHECK(std::abs(magnitude_db(pt.gain) - magnitude_db(o)) < 0.5);
    CHECK(std::abs(std::arg(pt.gain / o)) * 180 / M_PI < 3.0);
  }
}

TEST_CASE("large injection at resonance reports DCM") {
  NumericResponseOptions opts;
  opts.amplitude_fraction = 0.05;
  try {
    numeric_frequency_response(kRef, ResistiveLoad{kRl}, SimConfig{}, ResponseKind::Gvd,
                               {resonant_frequency(kRef)}, opts);
    FAIL("expected DCM");
  } catch (const SimulationError& e) {
    CHECK(e.kind() == SimulationError::Kind::Dcm);
    CHECK(std::string(e.what()).find("amplitude_fraction") != std::string::npos);
  }
}

TEST_CASE("numeric response rejects frequencies above Nyquist") {
  CHECK_THROWS_AS(numeric_frequency_response(kRef, ResistiveLoad{kRl}, SimConfig{}, ResponseKind::Gvd,
                                             {30e3}),
                  DomainError);
}
