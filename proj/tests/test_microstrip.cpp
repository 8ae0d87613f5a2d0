#include "dmnkit/microstrip.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "dmnkit/scenarios.hpp"
#include "doctest.h"

using namespace dmnkit;

namespace {
const substrate board{};  // 6.15, 1.52 mm, 35 um
constexpr double f_r = 3e9;

void check_dims(double z0, double theta, const std::array<double, 2>& want) {
  const microstrip_line m = microstrip_dimensions(z0, theta, board, f_r);
  CHECK(std::abs(m.width - want[0]) / want[0] < 0.05);
  CHECK(std::abs(m.physical_length - want[1]) / want[1] < 0.05);
}
}  // namespace

TEST_CASE("reference line dimensions within five percent") {
  namespace rv = reference_values;
  check_dims(rv::rh_z0, 90.0, rv::dim_ring);
  check_dims(rv::rh_z01, rv::rh_theta1_deg, rv::dim_t1);
  check_dims(50.0, rv::rh_theta21_deg, rv::dim_t21);
  check_dims(rv::rh_z22, 90.0, rv::dim_t22);
  check_dims(rv::rh_zs1, 45.0, rv::dim_s1);
  check_dims(rv::rh_zs2, 90.0, rv::dim_s2);
}

TEST_CASE("width decreases monotonically with impedance") {
  // this board supports roughly 10-160 ohms; higher impedances need a width
  // below the etch correction and are rejected
  double prev = 1.0;
  for (int k = 0; k < 50; ++k) {
    const double z0 = 10.0 + 140.0 * k / 49.0;
    const microstrip_line m = microstrip_dimensions(z0, 90.0, board, f_r);
    CHECK(m.width > 0.0);
    CHECK(m.width < prev);
    prev = m.width;
  }
  CHECK_THROWS_AS(microstrip_dimensions(190.0, 90.0, board, f_r), std::invalid_argument);
}

TEST_CASE("effective permittivity and length identity") {
  for (double z0 : {15.0, 30.0, 50.0, 80.0, 120.0, 150.0}) {
    const microstrip_line m = microstrip_dimensions(z0, 60.0, board, f_r);
    CHECK(m.effective_eps > 1.0);
    CHECK(m.effective_eps < board.eps_r);
    const double lambda0 = 299792458.0 / f_r;
    CHECK(m.physical_length ==
          doctest::Approx(60.0 / 360.0 * lambda0 / std::sqrt(m.effective_eps))
              .epsilon(1e-12));
    CHECK(m.target_impedance == doctest::Approx(z0));
    CHECK(m.electrical_length_deg == doctest::Approx(60.0));
  }
  // length scales inversely with frequency
  const microstrip_line lo = microstrip_dimensions(50.0, 90.0, board, 1e9);
  const microstrip_line hi = microstrip_dimensions(50.0, 90.0, board, 2e9);
  CHECK(lo.physical_length == doctest::Approx(2.0 * hi.physical_length).epsilon(1e-12));
  CHECK(lo.width == doctest::Approx(hi.width).epsilon(1e-12));
}

TEST_CASE("conductor thickness narrows the etched strip") {
  substrate thin = board;
  thin.thickness = 0.0;
  const double w0 = microstrip_dimensions(50.0, 90.0, thin, f_r).width;
  const double wt = microstrip_dimensions(50.0, 90.0, board, f_r).width;
  CHECK(w0 > wt);
  CHECK((w0 - wt) / w0 < 0.05);  // a mild correction, not a rewrite
}

TEST_CASE("synthesis range and argument validation") {
  CHECK_THROWS_AS(microstrip_dimensions(5.0, 90.0, board, f_r), std::invalid_argument);
  CHECK_THROWS_AS(microstrip_dimensions(250.0, 90.0, board, f_r), std::invalid_argument);
  CHECK_THROWS_AS(microstrip_dimensions(50.0, 90.0, board, 0.0), std::invalid_argument);
  substrate bad = board;
  bad.eps_r = 0.5;
  CHECK_THROWS_AS(microstrip_dimensions(50.0, 90.0, bad, f_r), std::invalid_argument);
  bad = board;
  bad.height = 0.0;
  CHECK_THROWS_AS(microstrip_dimensions(50.0, 90.0, bad, f_r), std::invalid_argument);
}
