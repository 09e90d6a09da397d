#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "llwork/errors.hpp"
#include "llwork/ndp.hpp"

using namespace llwork;
using ndp::GeometryKind;
using ndp::Statistics;

namespace {

// <E> of one box particle, levels (n pi / L)^2, by direct summation.
double box_mean_energy(double length, double beta) {
  double z = 0.0, e = 0.0;
  for (int n = 1; n < 2000; ++n) {
    const double en = std::pow(n * kPi / length, 2);
    z += std::exp(-beta * en);
    e += en * std::exp(-beta * en);
  }
  return e / z;
}

}  // namespace

TEST_CASE("one particle, adiabatic: W = (Li^2 / Lf^2 - 1) E") {
  const double beta = 0.05;
  const auto d = ndp::ndp_reference(Protocol{Adiabatic{1.0, 2.0}}, GeometryKind::Box, beta, 1, Statistics::Distinguishable);
  CHECK(work::moments(d, 1) == doctest::Approx(-0.75 * box_mean_energy(1.0, beta)).epsilon(1e-9));
  CHECK(d.jarzynski_relative_residual() < 1e-10);
  CHECK(d.total_probability() == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("distinguishable pairs are the self-convolution") {
  const double beta = 0.1;
  const Protocol p{Adiabatic{1.0, 1.5}};
  const auto one = ndp::ndp_reference(p, GeometryKind::Ring, beta, 1, Statistics::Distinguishable);
  const auto two = ndp::ndp_reference(p, GeometryKind::Ring, beta, 2, Statistics::Distinguishable);
  const auto conv = ndp::convolve(one, one);
  CHECK(work::moments(two, 1) == doctest::Approx(2.0 * work::moments(one, 1)).epsilon(1e-9));
  CHECK(work::moments(conv, 2) == doctest::Approx(work::moments(two, 2)).epsilon(1e-9));
  CHECK(work::kolmogorov_distance(conv, two) < 1e-9);
}

TEST_CASE("convolution adds means and variances") {
  const auto a = work::make_distribution({{-1.0, 0.5}, {1.0, 0.5}}, 1.0, Protocol{Adiabatic{1.0, 1.0}});
  const auto b = work::make_distribution({{0.0, 0.25}, {4.0, 0.75}}, 1.0, Protocol{Adiabatic{1.0, 1.0}});
  const auto c = ndp::convolve(a, b);
  CHECK(c.atoms.size() == 4);
  CHECK(work::moments(c, 1) == doctest::Approx(3.0));
  const double var_a = 1.0, var_b = 0.75 * 16.0 - 9.0;
  CHECK(work::moments(c, 2) - 9.0 == doctest::Approx(var_a + var_b));
}

TEST_CASE("free fermions on the box, adiabatic") {
  const double beta = 0.02;
  const auto d = ndp::ndp_reference(Protocol{Adiabatic{1.0, 2.0}}, GeometryKind::Box, beta, 2, Statistics::Fermion);
  for (const auto& a : d.atoms) CHECK(a.work < 0.0);
  CHECK(d.jarzynski_relative_residual() < 1e-10);
}

TEST_CASE("single particle sudden wall: mean work vanishes") {
  ndp::NdpOptions o;
  o.final_mode_factor = 8;
  const auto d = ndp::ndp_reference(Protocol{SuddenWall{1.0, 2.0}}, GeometryKind::Box, 0.5, 1, Statistics::Distinguishable, o);
  // the truncated final basis misses a slowly decaying tail of <W>
  CHECK(std::abs(work::moments(d, 1)) < 0.05 * box_mean_energy(1.0, 0.5));
  CHECK(d.total_probability() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("unsupported requests") {
  CHECK_THROWS_AS(ndp::ndp_reference(Protocol{SuddenWall{1.0, 2.0}}, GeometryKind::Ring, 1.0, 1, Statistics::Distinguishable),
                  UnsupportedError);
  CHECK_THROWS_AS(ndp::ndp_reference(Protocol{Adiabatic{1.0, 2.0}}, GeometryKind::Box, 1.0, 3, Statistics::Boson),
                  UnsupportedError);
  CHECK(ndp::statistics_from_string("fermion") == Statistics::Fermion);
  CHECK_THROWS(ndp::statistics_from_string("anyon"));
}
