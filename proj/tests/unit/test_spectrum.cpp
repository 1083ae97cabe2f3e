#include <doctest.h>

#include "qbath/errors.hpp"
#include "qbath/spectrum.hpp"

using namespace qbath;

TEST_CASE("spectrum parsing") {
  const Spectrum s = Spectrum::parse("0,1");
  CHECK(s.dimension() == 2);
  CHECK(s.ground() == 0.0);
  CHECK(s.top() == 1.0);
  CHECK(s.levels()[0].multiplicity == 1);

  const Spectrum d = Spectrum::parse("0:1,1:2");
  CHECK(d.dimension() == 3);
  CHECK(d.levels()[1].multiplicity == 2);
  CHECK(d.trace() == doctest::Approx(2.0));
  CHECK(d.trace_sq() == doctest::Approx(2.0));
  CHECK(d.to_text() == "0,1:2");

  const Spectrum neg = Spectrum::parse("-1.5,2.5");
  CHECK(neg.ground() == -1.5);
  CHECK(neg.width() == 4.0);

  const Spectrum single = Spectrum::parse("5");
  CHECK(single.dimension() == 1);
  CHECK(single.width() == 0.0);
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(Spectrum::parse(""), ParseError);
  CHECK_THROWS_AS(Spectrum::parse("0,,1"), ParseError);
  CHECK_THROWS_AS(Spectrum::parse("a,b"), ParseError);
  CHECK_THROWS_AS(Spectrum::parse("0:x"), ParseError);
  CHECK_THROWS_AS(Spectrum::parse("1,0"), DomainError);    // decreasing
  CHECK_THROWS_AS(Spectrum::parse("0,0"), DomainError);    // equal energies
  CHECK_THROWS_AS(Spectrum::parse("0:0,1"), DomainError);  // multiplicity 0
}
