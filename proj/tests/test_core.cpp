#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "llwork/core.hpp"
#include "llwork/errors.hpp"
#include "llwork/parallel.hpp"

using namespace llwork;

TEST_CASE("alpha and coupling are inverse maps") {
  const ModelSpec m = ModelSpec::box(2, 1.5, 4.0, 0.5);
  // alpha = lambda C / (2 hbar^2)
  CHECK(alpha_of(m).alpha == doctest::Approx(1.5 * 4.0 / (2.0 * 0.25)));
  CHECK(coupling_for_alpha(alpha_of(m).alpha, 1.5, 0.5) == doctest::Approx(4.0));
  CHECK(coupling_for_alpha(1e4, 1.0) == doctest::Approx(2e4));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ModelSpec::ring(0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ModelSpec::ring(2, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ModelSpec::box(2, 1.0, -1.0), ConfigError);
  CHECK_THROWS_AS(ModelSpec::box(2, 1.0, 1.0, 0.0), ConfigError);
  CHECK_NOTHROW(ModelSpec::box(2, 1.0, kInfiniteCoupling));
  CHECK(ModelSpec::box(2, 1.0, kInfiniteCoupling).tonks_girardeau());

  const ModelSpec m = ModelSpec::ring(3, 2.0, 1.0);
  CHECK(m.is_ring());
  CHECK(m.with_length(5.0).length() == 5.0);
  CHECK(m.with_length(5.0).is_ring());
  CHECK(m.with_coupling(7.0).coupling() == 7.0);
}

TEST_CASE("protocol validation") {
  CHECK_THROWS_AS(Protocol(Adiabatic{0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(Protocol(SuddenCoupling{-1.0, 1.0}), ConfigError);
  // ramp ending at non-positive width
  CHECK_THROWS_AS(Protocol(LinearRamp{1.0, -2.0, 1.0}), ConfigError);
  CHECK(LinearRamp{1.0, 0.5, 2.0}.final_length() == doctest::Approx(2.0));
  CHECK_FALSE(Protocol(SuddenWall{1.0, 2.0}).describe().empty());
}

TEST_CASE("duality sign") {
  const std::array<double, 2> ordered{0.1, 0.4}, reversed{0.4, 0.1};
  CHECK(duality_sign(ordered) == 1);
  CHECK(duality_sign(reversed) == -1);
  // three particles: one transposition flips the sign
  const std::array<double, 3> a{0.1, 0.2, 0.3}, b{0.2, 0.1, 0.3}, c{0.3, 0.2, 0.1};
  CHECK(duality_sign(a) == 1);
  CHECK(duality_sign(b) == -1);
  CHECK(duality_sign(c) == -1);
  const std::array<double, 2> contact{0.3, 0.3};
  CHECK_THROWS_AS(duality_sign(contact), ContactError);
}

TEST_CASE("parallel_for visits every index once") {
  for (int threads : {1, 3}) {
    set_thread_count(threads);
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  set_thread_count(1);
}
