#include <stdexcept>

#include "doctest.h"
#include "uavnet/energy.hpp"

using namespace uavnet;

TEST_CASE("hover power anchors the power unit") {
  PhysicalConstants c;
  // sqrt(W / (2 rho A)) with the default airframe
  CHECK(level_power(0.0, c) == doctest::Approx(9.4281).epsilon(1e-4));
  CHECK(hover_power(c) == level_power(0.0, c));
}

TEST_CASE("cruise power undercuts hover") {
  PhysicalConstants c;
  CHECK(level_power(40.0 / 3.6, c) == doctest::Approx(6.8185).epsilon(3e-4));
  double prev = level_power(0.0, c);
  for (double v = 2.0; v <= 14.0; v += 2.0) {
    const double p = level_power(v, c);
    CHECK(p < prev);  // forward flight keeps getting cheaper
    prev = p;
  }
  CHECK_THROWS_AS(level_power(-1.0, c), std::domain_error);
}

TEST_CASE("slot energy") {
  PhysicalConstants c;
  CHECK(slot_energy(0.0, c) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(slot_energy(100.0, c) == doctest::Approx(7.509).epsilon(2e-3));
  // strictly decreasing in move distance
  double prev = slot_energy(0.0, c);
  for (double d = 25.0; d <= 100.0; d += 25.0) {
    const double e = slot_energy(d, c);
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(slot_energy(101.0, c), std::domain_error);
  CHECK_THROWS_AS(slot_energy(-1.0, c), std::domain_error);
}

TEST_CASE("operational and transmit overheads are additive") {
  PhysicalConstants c;
  c.tx_energy_units = 0.5;
  c.op_power_units = 0.1;
  CHECK(slot_energy(0.0, c) == doctest::Approx(10.0 + 0.5 + 1.0).epsilon(1e-12));
}

TEST_CASE("battery ledger drains and quits") {
  BatteryLedger ledger({160.0, 155.0, 160.0}, 150.0);

  CHECK_FALSE(apply_drain(ledger, 0, 7.51));
  CHECK(ledger.energy[0] == doctest::Approx(152.49));
  CHECK_FALSE(ledger.quit[0]);

  // crossing the threshold quits
  CHECK(apply_drain(ledger, 1, 10.0));
  CHECK(ledger.energy[1] == doctest::Approx(145.0));
  CHECK(ledger.quit[1]);

  // landing exactly on the threshold also quits
  CHECK(apply_drain(ledger, 2, 10.0));
  CHECK(ledger.quit[2]);

  CHECK_THROWS_AS(apply_drain(ledger, 1, 1.0), std::logic_error);
  CHECK_THROWS_AS(apply_drain(ledger, 9, 1.0), std::out_of_range);
}

TEST_CASE("energy conservation over a drain sequence") {
  PhysicalConstants c;
  BatteryLedger ledger({500.0}, 150.0);
  double spent = 0.0;
  for (double d : {0.0, 40.0, 100.0, 60.0}) {
    const double e = slot_energy(d, c);
    spent += e;
    apply_drain(ledger, 0, e);
  }
  CHECK(500.0 - ledger.energy[0] == doctest::Approx(spent).epsilon(1e-12));
}
