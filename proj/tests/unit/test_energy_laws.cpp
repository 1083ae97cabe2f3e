#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qbath/energy_law.hpp"
#include "qbath/errors.hpp"
#include "qbath/thermo.hpp"

using namespace qbath;

namespace {

/// Kolmogorov-Smirnov statistic of a sample against a CDF.
double ks_statistic(std::vector<double> xs,
                    const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

struct SampleStats {
  double mean, var, se_mean, se_var;
};

SampleStats sample_stats(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (const double x : xs) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {mean, m2, std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

}  // namespace

TEST_CASE("dirac law atoms and moments") {
  const auto law = dirac_law(Spectrum::parse("0,1"));
  REQUIRE(law.is_discrete());
  REQUIRE(law.atoms().size() == 2);
  CHECK(law.atoms()[0].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.atoms()[1].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.mean() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.variance() == doctest::Approx(0.25).epsilon(1e-15));

  // degenerate level carries its multiplicity: weights 1/3, 2/3
  const auto deg = dirac_law(Spectrum::parse("0,1:2"));
  CHECK(deg.atoms()[0].weight == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(deg.atoms()[1].weight == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(deg.mean() == doctest::Approx(2.0 / 3).epsilon(1e-14));

  const auto point = dirac_law(Spectrum::parse("5"));
  CHECK(point.atoms().size() == 1);
  CHECK(point.mean() == 5.0);
  CHECK(point.variance() == 0.0);
}

TEST_CASE("haar law: r=2 uniform density and moments") {
  const auto law = haar_law(Spectrum::parse("0,1"));
  REQUIRE(!law.is_discrete());
  CHECK(law.density(0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.density(0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.cdf(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(law.cdf(-1.0) == 0.0);
  CHECK(law.cdf(1.0) == 1.0);
  CHECK(law.mean() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.variance() == doctest::Approx(1.0 / 12).epsilon(1e-14));
  // integrated moments agree with the stored analytic ones
  const auto [m, v] = law_moments(law);
  CHECK(m == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v == doctest::Approx(1.0 / 12).epsilon(1e-10));
}

TEST_CASE("haar law: r=3 equally spaced") {
  const auto law = haar_law(Spectrum::parse("0,1,2"));
  // triangle density peaking at 1
  CHECK(law.density(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(law.density(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.density(1.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(law.mean() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.variance() == doctest::Approx(1.0 / 6).epsilon(1e-14));
  const auto [m, v] = law_moments(law);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v == doctest::Approx(1.0 / 6).epsilon(1e-10));
}

TEST_CASE("haar law: repeated knots from a degenerate level") {
  // weight of the doubled level is Dirichlet-aggregated: X ~ Beta(2,1)
  const auto law = haar_law(Spectrum::parse("0,1:2"));
  CHECK(law.density(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.density(0.9) == doctest::Approx(1.8).epsilon(1e-12));
  const double mean = 2.0 / 3.0;
  const double var = (2.0 / 3.0 - mean * mean) / 4.0;  // = 1/18
  CHECK(law.mean() == doctest::Approx(mean).epsilon(1e-14));
  CHECK(law.variance() == doctest::Approx(var).epsilon(1e-13));
  const auto [m, v] = law_moments(law);
  CHECK(m == doctest::Approx(mean).epsilon(1e-12));
  CHECK(v == doctest::Approx(var).epsilon(1e-10));
}

TEST_CASE("haar law: single level degenerates to a point mass") {
  const auto law = haar_law(Spectrum::parse("5"));
  CHECK(law.is_discrete());
  CHECK(law.mean() == 5.0);
  CHECK(law.variance() == 0.0);
}

TEST_CASE("haar variance is dirac variance over r+1") {
  for (const char* text : {"0,1", "0,1,2", "0,1:2", "-1.5,0.25,2.5,3",
                           "0,0.5:3,2:2"}) {
    const Spectrum s = Spectrum::parse(text);
    const auto d = dirac_law(s);
    const auto h = haar_law(s);
    CHECK(h.mean() == doctest::Approx(d.mean()).epsilon(1e-13));
    CHECK(h.variance() ==
          doctest::Approx(d.variance() / (s.dimension() + 1)).epsilon(1e-12));
  }
}

TEST_CASE("merging equal-energy atoms leaves the law unchanged") {
  const auto split = EnergyLaw::discrete({{0.0, 0.25}, {0.0, 0.25}, {1.0, 0.5}});
  const auto merged = EnergyLaw::discrete({{0.0, 0.5}, {1.0, 0.5}});
  REQUIRE(split.atoms().size() == 2);
  CHECK(split.atoms()[0].weight ==
        doctest::Approx(merged.atoms()[0].weight).epsilon(1e-15));
  CHECK(split.mean() == doctest::Approx(merged.mean()).epsilon(1e-15));
  CHECK(split.cdf(0.5) == doctest::Approx(merged.cdf(0.5)).epsilon(1e-15));
}

TEST_CASE("law validation") {
  CHECK_THROWS_AS(EnergyLaw::discrete({{0.0, 0.4}, {1.0, 0.4}}), DomainError);
  CHECK_THROWS_AS(EnergyLaw::discrete({{0.0, -0.5}, {1.0, 1.5}}), DomainError);
  EnergyLaw::ContinuousSpec bad;
  bad.knots = {0.0, 1.0};
  bad.density = [](double x) { return 2.0 * x - 0.5; };  // negative near 0
  CHECK_THROWS_AS(EnergyLaw::continuous(std::move(bad)), DomainError);
  EnergyLaw::ContinuousSpec off;
  off.knots = {0.0, 1.0};
  off.density = [](double) { return 0.9; };  // integrates to 0.9
  CHECK_THROWS_AS(EnergyLaw::continuous(std::move(off)), DomainError);
}

TEST_CASE("law_cdf is a CDF") {
  for (const auto& law : {dirac_law(Spectrum::parse("0,1,2")),
                          haar_law(Spectrum::parse("0,1,2"))}) {
    double prev = 0.0;
    for (double e = -0.5; e <= 2.6; e += 0.1) {
      const double c = law.cdf(e);
      CHECK(c >= prev - 1e-15);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      prev = c;
    }
    CHECK(law.cdf(law.ceiling()) == 1.0);
    CHECK(law.cdf(law.ground() - 1e-12) == 0.0);
  }
  // atoms are included at their own energy (right continuity)
  const auto d = dirac_law(Spectrum::parse("0,1"));
  CHECK(d.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.cdf(-1e-12) == 0.0);
  CHECK(d.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sample_haar_energy: r=2 is uniform (KS), fixed seed") {
  const Spectrum s = Spectrum::parse("0,1");
  const auto xs = sample_haar_energy(s, {2024, 0}, 20000);
  REQUIRE(xs.size() == 20000);
  const double d = ks_statistic(xs, [](double x) {
    return std::min(1.0, std::max(0.0, x));
  });
  CHECK(d < 1.63 / std::sqrt(20000.0));  // 1% critical value
}

TEST_CASE("sample_haar_energy: moments match the law, fixed seed") {
  const Spectrum s = Spectrum::parse("0,1,2");
  const auto xs = sample_haar_energy(s, {11, 0}, 100000);
  const auto st = sample_stats(xs);
  CHECK(std::abs(st.mean - 1.0) < 4.0 * st.se_mean);
  CHECK(std::abs(st.var - 1.0 / 6) < 4.0 * st.se_var);
}

TEST_CASE("sample_haar_energy: edge cases") {
  const Spectrum s = Spectrum::parse("5");
  const auto xs = sample_haar_energy(s, {1, 0}, 100);
  for (const double x : xs) CHECK(x == 5.0);
  CHECK(sample_haar_energy(s, {1, 0}, 0).empty());

  // identical stream, identical draws; disjoint streams differ
  const Spectrum two = Spectrum::parse("0,1");
  const auto a = sample_haar_energy(two, {3, 1}, 50);
  const auto b = sample_haar_energy(two, {3, 1}, 50);
  const auto c = sample_haar_energy(two, {3, 2}, 50);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("completeness witnesses") {
  const Spectrum s = Spectrum::parse("0,1");
  const auto dirac = dirac_law(s);
  const double eps1[] = {1e-6};
  const auto r1 = completeness_check(s, dirac, eps1);
  CHECK(r1.complete);
  // the requested epsilon is among the witnesses with P = 1/2
  bool found = false;
  for (const auto& w : r1.witnesses) {
    if (w.epsilon == 1e-6) {
      found = true;
      CHECK(w.prob_below == doctest::Approx(0.5).epsilon(1e-15));
    }
    CHECK(w.prob_below > 0.0);
  }
  CHECK(found);

  const auto haar = haar_law(s);
  const double eps2[] = {1e-3};
  const auto r2 = completeness_check(s, haar, eps2);
  CHECK(r2.complete);
  for (const auto& w : r2.witnesses) {
    if (w.epsilon == 1e-3) {
      CHECK(w.prob_below == doctest::Approx(1e-3).epsilon(1e-10));
    }
  }

  // measure with no mass near the ground level is incomplete
  const auto stuck = EnergyLaw::discrete({{1.0, 1.0}});
  const auto r3 = completeness_check(s, stuck, {});
  CHECK(!r3.complete);
  for (const auto& w : r3.witnesses) CHECK(w.prob_below == 0.0);

  const double bad[] = {0.0};  // not above the ground energy
  CHECK_THROWS_AS(completeness_check(s, dirac, bad), DomainError);
}

TEST_CASE("continuous law without sampler falls back to rejection") {
  EnergyLaw::ContinuousSpec spec;
  spec.knots = {0.0, 1.0};
  spec.density = [](double x) { return 2.0 * x; };
  auto law = EnergyLaw::continuous(std::move(spec));
  Xoshiro256pp rng(5);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = law.sample(rng);
  const double d = ks_statistic(xs, [](double x) {
    return std::min(1.0, std::max(0.0, x * x));
  });
  CHECK(d < 1.63 / std::sqrt(20000.0));
}
