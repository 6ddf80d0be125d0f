#include "lora/phy.hpp"
#include "lora/units.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace lora;

// Airtime and symbol counts for the default radio (125 kHz, 10-byte payload,
// CR 4/5, 12.25 preamble symbols), checked against values computed with
// arbitrary-precision arithmetic.
TEST_CASE("time on air matches the reference table") {
  const PhyParams phy;
  const double expected[6] = {0.045568, 0.080896, 0.161792,
                              0.323584, 0.647168, 1.130496};
  const int symbols[6] = {28, 23, 23, 23, 23, 18};
  for (const auto sf : SpreadingFactor::all()) {
    CAPTURE(sf.value());
    CHECK(payload_symbols(sf, phy) == symbols[sf.idx()]);  // integral, exact
    CHECK(time_on_air(sf, phy) == doctest::Approx(expected[sf.idx()]).epsilon(1e-12));
  }
}

TEST_CASE("airtime grows with SF and the per-step ratio stays below 0.5725") {
  // The step bound is what makes cross-SF windows separable: each SF's
  // airtime is less than 0.5725 of the next one's.
  const PhyParams phy;
  double prev = time_on_air(SpreadingFactor(7), phy);
  for (int sf = 8; sf <= 12; ++sf) {
    const double cur = time_on_air(SpreadingFactor(sf), phy);
    CHECK(cur > prev);
    CHECK(prev / cur <= 0.5725);
    prev = cur;
  }
}

TEST_CASE("low data rate optimization switches on at SF11") {
  for (const auto sf : SpreadingFactor::all())
    CHECK(low_data_rate_optimization(sf) == (sf.value() >= 11));
}

TEST_CASE("off time is the duty-cycle silence window") {
  const PhyParams phy;  // d = 0.01 -> off = 99 * T_a
  CHECK(time_off(time_on_air(SpreadingFactor(7), phy), phy) ==
        doctest::Approx(4.511232).epsilon(1e-12));
  CHECK(time_off(time_on_air(SpreadingFactor(12), phy), phy) ==
        doctest::Approx(111.919104).epsilon(1e-12));
}

TEST_CASE("noise power for NF 6 dB over 125 kHz") {
  const PhyParams phy;
  CHECK(noise_power(phy) == doctest::Approx(1.981116490576392e-15).epsilon(1e-12));
  CHECK(watts_to_dbm(noise_power(phy)) ==
        doctest::Approx(-117.03089986991944).epsilon(1e-12));
}

TEST_CASE("sensitivity table") {
  const PhyParams phy;
  const double dbm[6] = {-123.0, -126.0, -129.0, -132.0, -134.5, -137.0};
  for (const auto sf : SpreadingFactor::all())
    CHECK(sensitivity(sf, phy) == dbm[sf.idx()]);
  CHECK(sensitivity_min_dbm(phy) == -137.0);
  CHECK(dbm_to_watts(sensitivity(SpreadingFactor(12), phy)) ==
        doctest::Approx(1.9952623149688797e-17).epsilon(1e-12));
}

TEST_CASE("spreading factor range is enforced") {
  CHECK_THROWS_AS(SpreadingFactor(6), std::invalid_argument);
  CHECK_THROWS_AS(SpreadingFactor(13), std::invalid_argument);
  CHECK(SpreadingFactor(7).idx() == 0);
  CHECK(SpreadingFactor(12).idx() == 5);
}

TEST_CASE("phy parameter validation") {
  PhyParams phy;
  CHECK_NOTHROW(phy.validate());

  phy = PhyParams();
  phy.duty_cycle = 0.0;
  CHECK_THROWS_AS(phy.validate(), std::invalid_argument);
  phy.duty_cycle = 1.5;
  CHECK_THROWS_AS(phy.validate(), std::invalid_argument);

  phy = PhyParams();
  phy.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(phy.validate(), std::invalid_argument);

  phy = PhyParams();
  phy.coding_rate = 5;
  CHECK_THROWS_AS(phy.validate(), std::invalid_argument);

  phy = PhyParams();
  phy.payload_bytes = 0;
  CHECK_THROWS_AS(phy.validate(), std::invalid_argument);
}

TEST_CASE("unit conversions") {
  CHECK(dbm_to_watts(17.0) == doctest::Approx(0.05011872336272723).epsilon(1e-15));
  CHECK(dbm_to_watts(-35.0) == doctest::Approx(3.1622776601683794e-07).epsilon(1e-15));
  CHECK(watts_to_dbm(5e-9) == doctest::Approx(-53.01029995663981).epsilon(1e-15));
  CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0));
  CHECK(db_to_linear(linear_to_db(42.0)) == doctest::Approx(42.0).epsilon(1e-14));
  CHECK(dbm_to_watts(watts_to_dbm(0.05)) == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(nats_to_bits(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-15));
}
