#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "llwork/errors.hpp"
#include "llwork/ring.hpp"

using namespace llwork;
using ring::QuantumNumbers;

namespace {

// Symmetric two-body ground state, I = (-1/2, 1/2), k = (-q, q):
//   q L = pi - 2 arctan(4 hbar^2 q / C), solved by bisection on (0, pi/L).
double two_body_q(double length, double c, double hbar = 1.0) {
  auto f = [&](double q) { return q * length - kPi + 2.0 * std::atan(4.0 * hbar * hbar * q / c); };
  double lo = 0.0, hi = kPi / length;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quantum numbers") {
  CHECK_THROWS_AS(QuantumNumbers({1, -1}), ConfigError);      // not increasing
  CHECK_THROWS_AS(QuantumNumbers({-2, 2}), ConfigError);      // even N needs half-integers
  CHECK_THROWS_AS(QuantumNumbers({-1, 1, 3}), ConfigError);   // odd N needs integers
  const auto qn = QuantumNumbers::from_values({-0.5, 1.5});
  CHECK(qn[0] == -0.5);
  CHECK(qn[1] == 1.5);
}

TEST_CASE("two-body ground state against bisection") {
  for (double c : {0.01, 0.3, 1.0, 10.0, 1e3}) {
    const auto s = ring::solve_bethe(QuantumNumbers({-1, 1}), 1.0, c);
    const double q = two_body_q(1.0, c);
    CHECK(s.rapidities[1] == doctest::Approx(q).epsilon(1e-10));
    CHECK(s.rapidities[0] == doctest::Approx(-q).epsilon(1e-10));
    CHECK(s.energy == doctest::Approx(2.0 * q * q).epsilon(1e-10));
    CHECK(s.residual < 1e-10);
  }
}

TEST_CASE("weak coupling: q ~ sqrt(C / (2 L))") {
  for (double c : {1e-4, 1e-5}) {
    const auto s = ring::solve_bethe(QuantumNumbers({-1, 1}), 1.0, c);
    CHECK(s.rapidities[1] == doctest::Approx(std::sqrt(c / 2.0)).epsilon(1e-3));
  }
}

TEST_CASE("hbar enters through hbar^2 k") {
  const double h = 0.3;
  const auto s = ring::solve_bethe(QuantumNumbers({-1, 1}), 1.0, 2.0, h);
  CHECK(s.rapidities[1] == doctest::Approx(two_body_q(1.0, 2.0, h)).epsilon(1e-10));
  CHECK(s.energy == doctest::Approx(2.0 * h * h * s.rapidities[1] * s.rapidities[1]).epsilon(1e-12));
}

TEST_CASE("infinite coupling gives free-fermion momenta") {
  const auto qn3 = QuantumNumbers({-4, 0, 6});
  const auto s = ring::solve_bethe(qn3, 2.0, kInfiniteCoupling);
  for (std::size_t l = 0; l < 3; ++l) CHECK(s.rapidities[l] == doctest::Approx(2.0 * kPi * qn3[l] / 2.0));
  CHECK(s.energy == doctest::Approx(ring::free_fermion_energy(qn3, 2.0)));
}

TEST_CASE("single particle is free") {
  const auto s = ring::solve_bethe(QuantumNumbers({4}), 1.0, 5.0);
  CHECK(s.rapidities[0] == doctest::Approx(4.0 * kPi));
}

TEST_CASE("residual vector vanishes at the solution") {
  const auto qn = QuantumNumbers({-4, 2, 6});
  const auto s = ring::solve_bethe(qn, 1.0, 0.7);
  for (double r : ring::bethe_residual(s.rapidities, qn, 1.0, 0.7, 1.0)) CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("state counts") {
  // half-integers |I| <= 2.5: six values, pairs C(6,2) = 15
  CHECK(ring::count_states(2, 2.5) == 15);
  // integers |I| <= 2: five values
  CHECK(ring::count_states(1, 2.0) == 5);
  CHECK(ring::count_states(3, 2.0) == 10);
  const auto table = ring::enumerate_states(ModelSpec::ring(2, 1.0, 1.0), 2.5, 1.0);
  CHECK(table.states.size() == 15);
  for (std::size_t i = 1; i < table.states.size(); ++i)
    CHECK(table.states[i - 1].energy <= table.states[i].energy);
}

TEST_CASE("partition function of one particle") {
  // Z = sum_n e^{-beta (2 pi n / L)^2}, n integer
  const double beta = 0.05, length = 1.0;
  const auto table = ring::enumerate_states(ModelSpec::ring(1, length, 1.0), 30.0, beta);
  double z = 0.0;
  for (int n = -30; n <= 30; ++n) z += std::exp(-beta * std::pow(2.0 * kPi * n / length, 2));
  CHECK(ring::partition_function(table, beta) == doctest::Approx(z).epsilon(1e-13));
}

TEST_CASE("tail bound and automatic cutoff") {
  const ModelSpec m = ModelSpec::ring(2, 1.0, 1.0);
  const double beta = 0.1;
  const double i_max = ring::choose_i_max(m, beta, 1e-10);
  const auto table = ring::enumerate_states(m, i_max, beta);
  const double z = ring::partition_function(table, beta);
  CHECK(ring::tail_weight_bound(2, 1.0, 1.0, beta, i_max) / z < 1e-10);
  // the bound shrinks as the cutoff grows
  CHECK(ring::tail_weight_bound(2, 1.0, 1.0, beta, i_max + 2) < ring::tail_weight_bound(2, 1.0, 1.0, beta, i_max));
}
