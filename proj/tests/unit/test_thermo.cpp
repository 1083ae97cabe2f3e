// Expected values below are evaluated from the defining expressions in the
// test itself (independent arithmetic), not copied from the implementation.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "qbath/errors.hpp"
#include "qbath/thermo.hpp"

using namespace qbath;

namespace {
const Spectrum kTwo = Spectrum::parse("0,1");
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("log_partition") {
  const auto dirac = dirac_law(kTwo);
  const auto haar = haar_law(kTwo);
  CHECK(log_partition(dirac, 0.0) == 0.0);
  CHECK(log_partition(haar, 0.0) == 0.0);
  CHECK(log_partition(dirac, 1.0) ==
        doctest::Approx(std::log(0.5 * (1.0 + std::exp(-1.0))))
            .epsilon(1e-14));
  CHECK(log_partition(haar, 1.0) ==
        doctest::Approx(std::log(1.0 - std::exp(-1.0))).epsilon(1e-11));
  CHECK_THROWS_AS(log_partition(dirac, -0.5), DomainError);
  CHECK_THROWS_AS(log_partition(dirac, kInf), DomainError);
}

TEST_CASE("specific_energy") {
  const auto dirac = dirac_law(kTwo);
  const auto haar = haar_law(kTwo);
  CHECK(specific_energy(dirac, 0.0) == dirac.mean());
  CHECK(specific_energy(haar, 0.0) == haar.mean());
  CHECK(specific_energy(dirac, 1.0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));
  const double e1 = std::exp(-1.0);
  CHECK(specific_energy(haar, 1.0) ==
        doctest::Approx(1.0 - e1 / (1.0 - e1)).epsilon(1e-11));
}

TEST_CASE("energy_variance and heat_capacity") {
  const auto dirac = dirac_law(kTwo);
  const auto haar = haar_law(kTwo);
  const auto point = dirac_law(Spectrum::parse("5"));
  CHECK(energy_variance(dirac, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(energy_variance(haar, 0.0) ==
        doctest::Approx(1.0 / 12).epsilon(1e-12));
  for (const double b : {0.0, 1.0, 10.0}) {
    CHECK(energy_variance(point, b) == 0.0);
  }
  CHECK(heat_capacity(dirac, 0.0) == 0.0);
  const double sech_half = 1.0 / std::cosh(0.5);
  CHECK(heat_capacity(dirac, 1.0) ==
        doctest::Approx(0.25 * sech_half * sech_half).epsilon(1e-13));
  // the quantum of heat capacity at low temperature (beta*omega = 20)
  CHECK(std::abs(heat_capacity(haar, 40.0) - 1.0) < 1e-14);
}

TEST_CASE("entropy_from_beta") {
  const auto dirac = dirac_law(kTwo);
  const auto point = dirac_law(Spectrum::parse("5"));
  CHECK(entropy_from_beta(dirac, 0.0) == 0.0);
  // S = beta E + log Z evaluated independently
  const double e = 1.0 / (1.0 + std::exp(1.0));
  const double lz = std::log(0.5 * (1.0 + std::exp(-1.0)));
  CHECK(entropy_from_beta(dirac, 1.0) == doctest::Approx(e + lz).epsilon(1e-13));
  for (const double b : {0.0, 0.7, 13.0}) {
    CHECK(entropy_from_beta(point, b) == doctest::Approx(0.0));
  }
  // k_B scaling
  CHECK(entropy_from_beta(dirac, 1.0, 2.0) ==
        doctest::Approx(2.0 * entropy_from_beta(dirac, 1.0)).epsilon(1e-15));
}

TEST_CASE("entropy is nonpositive and energy decreasing") {
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    double prev_e = kInf;
    for (const double b : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
      CHECK(entropy_from_beta(law, b) <= 1e-15);
      const double e = specific_energy(law, b);
      CHECK(e < prev_e + 1e-15);
      prev_e = e;
    }
  }
}

TEST_CASE("invert_beta examples") {
  const auto dirac = dirac_law(kTwo);
  CHECK(invert_beta(dirac, dirac.mean()) == 0.0);
  CHECK(invert_beta(dirac, 0.3) ==
        doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-12));
  CHECK(invert_beta(dirac, 0.268941421) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("invert_beta round trip to 1e-8 over beta in [0.01, 50]") {
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    for (const double b : {0.01, 0.1, 1.0, 5.0, 20.0, 50.0}) {
      const double e = specific_energy(law, b);
      CHECK(std::abs(invert_beta(law, e) - b) < 1e-8);
    }
  }
}

TEST_CASE("invert_beta domain errors") {
  const auto dirac = dirac_law(kTwo);
  CHECK_THROWS_AS(invert_beta(dirac, 0.0), DomainError);    // at ground
  CHECK_THROWS_AS(invert_beta(dirac, -0.2), DomainError);   // below ground
  CHECK_THROWS_AS(invert_beta(dirac, 0.7), DomainError);    // above mean
  const auto point = dirac_law(Spectrum::parse("5"));
  CHECK(invert_beta(point, 5.0) == 0.0);
  CHECK_THROWS_AS(invert_beta(point, 4.0), DomainError);
}

TEST_CASE("entropy_of_energy") {
  const auto dirac = dirac_law(kTwo);
  CHECK(entropy_of_energy(dirac, dirac.mean()) == doctest::Approx(0.0));
  const double p = 0.3;
  const double shannon =
      std::log(0.5) - p * std::log(p) - (1 - p) * std::log(1 - p);
  CHECK(entropy_of_energy(dirac, 0.3) == doctest::Approx(shannon).epsilon(1e-10));
  // agrees with the beta route
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    for (const double e : {0.05, 0.2, 0.35, 0.49}) {
      const double b = invert_beta(law, e);
      CHECK(std::abs(entropy_of_energy(law, e) - entropy_from_beta(law, b)) <
            1e-9);
    }
  }
}

TEST_CASE("esscher_tilt") {
  const auto dirac = dirac_law(kTwo);
  // beta = ln 3 sends the weights to 3/4, 1/4
  const auto tilted = esscher_tilt(dirac, std::log(3.0));
  REQUIRE(tilted.atoms().size() == 2);
  CHECK(tilted.atoms()[0].weight == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(tilted.atoms()[1].weight == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(tilted.mean() == doctest::Approx(0.25).epsilon(1e-14));

  // identity at beta = 0
  const auto same = esscher_tilt(dirac, 0.0);
  CHECK(same.atoms()[0].weight == dirac.atoms()[0].weight);

  // tilted mean equals the canonical specific energy
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    for (const double b : {0.3, 1.0, 4.0}) {
      CHECK(std::abs(esscher_tilt(law, b).mean() - specific_energy(law, b)) <
            1e-10);
    }
  }

  // composition: tilt(tilt(law, a), b) == tilt(law, a+b)
  Xoshiro256pp rng(21);
  for (int i = 0; i < 8; ++i) {
    const double a = 5.0 * rng.u01(), b = 5.0 * rng.u01();
    const auto two_step = esscher_tilt(esscher_tilt(dirac, a), b);
    const auto one_step = esscher_tilt(dirac, a + b);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(two_step.atoms()[j].weight ==
            doctest::Approx(one_step.atoms()[j].weight).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(esscher_tilt(dirac, -1.0), DomainError);
}

TEST_CASE("chernoff_rate") {
  const auto dirac = dirac_law(kTwo);
  const auto haar = haar_law(kTwo);
  CHECK(chernoff_rate(dirac, 0.5) == 0.0);
  CHECK(chernoff_rate(dirac, 0.9) == 0.0);  // above the mean
  const double p = 0.3;
  const double shannon =
      std::log(0.5) - p * std::log(p) - (1 - p) * std::log(1 - p);
  CHECK(chernoff_rate(dirac, 0.3) == doctest::Approx(shannon).epsilon(1e-10));
  // the Haar rate at E(1) is E(1) + log Z(1)
  const double e1 = specific_energy(haar, 1.0);
  CHECK(chernoff_rate(haar, e1) ==
        doctest::Approx(e1 + std::log(1.0 - std::exp(-1.0))).epsilon(1e-9));
  CHECK(chernoff_rate(dirac, 0.0) == -kInf);
  for (const double e : {0.05, 0.2, 0.4, 0.5, 0.8}) {
    CHECK(chernoff_rate(dirac, e) <= 0.0);
  }
}

TEST_CASE("log-partition derivative is minus the energy") {
  const double h = 1e-5;
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    for (const double b : {0.01, 0.1, 1.0, 5.0, 10.0, 20.0}) {
      const double fd =
          (log_partition(law, b + h) - log_partition(law, b - h)) / (2 * h);
      CHECK(std::abs(fd + specific_energy(law, b)) < 1e-6);
    }
  }
}

TEST_CASE("heat capacity matches the finite difference of the energy") {
  const double h = 1e-5;
  for (const auto& law : {dirac_law(kTwo), haar_law(kTwo)}) {
    for (const double b : {0.5, 1.0, 5.0, 20.0}) {
      const double fd =
          (specific_energy(law, b + h) - specific_energy(law, b - h)) /
          (2 * h);
      const double c = heat_capacity(law, b);
      CHECK(std::abs(c - (-b * b * fd)) < 1e-5 * std::max(1e-12, c));
    }
  }
}

TEST_CASE("eos_scan") {
  const auto dirac = dirac_law(kTwo);
  const double single[] = {0.0};
  const auto eos0 = eos_scan(dirac, single, GridKind::beta);
  REQUIRE(eos0.entries.size() == 1);
  const ThermoPoint& p0 = *eos0.entries[0].point;
  CHECK(p0.beta == 0.0);
  CHECK(p0.log_z == 0.0);
  CHECK(p0.energy == 0.5);
  CHECK(p0.entropy == 0.0);
  CHECK(p0.heat_capacity == 0.0);
  CHECK(p0.temperature == kInf);

  const double grid[] = {0.0, 1.0};
  const auto eos = eos_scan(dirac, grid, GridKind::beta);
  const ThermoPoint& p1 = *eos.entries[1].point;
  CHECK(p1.log_z == doctest::Approx(-0.37988549304172248).epsilon(1e-12));
  CHECK(p1.energy == doctest::Approx(0.26894142136999512).epsilon(1e-12));
  CHECK(p1.entropy == doctest::Approx(-0.11094407167172735).epsilon(1e-10));
  CHECK(p1.heat_capacity ==
        doctest::Approx(0.19661193324148185).epsilon(1e-12));
  CHECK(p1.temperature == 1.0);
  // the stored identity holds exactly
  CHECK(p1.entropy == p1.beta * p1.energy + p1.log_z);

  const double egrid[] = {0.3};
  const auto eose = eos_scan(dirac, egrid, GridKind::energy);
  CHECK(eose.entries[0].point->beta ==
        doctest::Approx(0.84729786038720361).epsilon(1e-10));

  // out-of-domain entries produce error records, the scan continues
  const double mixed[] = {0.3, 0.9, 0.4};
  const auto eosm = eos_scan(dirac, mixed, GridKind::energy);
  CHECK(eosm.entries[0].point.has_value());
  CHECK(!eosm.entries[1].point.has_value());
  CHECK(!eosm.entries[1].error.empty());
  CHECK(eosm.entries[2].point.has_value());

  // monotonicity across a beta grid
  std::vector<double> betas;
  for (int i = 0; i <= 40; ++i) betas.push_back(0.25 * i);
  const auto scan = eos_scan(haar_law(kTwo), betas, GridKind::beta);
  for (std::size_t i = 1; i < scan.entries.size(); ++i) {
    CHECK(scan.entries[i].point->energy < scan.entries[i - 1].point->energy);
    CHECK(scan.entries[i].point->entropy <=
          scan.entries[i - 1].point->entropy + 1e-12);
    CHECK(scan.entries[i].point->heat_capacity >= 0.0);
  }
}
