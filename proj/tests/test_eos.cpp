#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "llwork/core.hpp"
#include "llwork/eos.hpp"
#include "llwork/errors.hpp"

using namespace llwork;

TEST_CASE("infinite coupling returns the bare dispersion") {
  const auto sol = eos::solve_yang_yang(1.0, 0.5, kInfiniteCoupling);
  for (std::size_t i = 0; i < sol.k.size(); ++i) CHECK(sol.epsilon[i] == -0.5 + sol.k[i] * sol.k[i]);
}

TEST_CASE("solution is even and satisfies the equation") {
  const auto sol = eos::solve_yang_yang(1.0, 0.0, 1.0);
  const std::size_t n = sol.k.size();
  for (std::size_t i = 0; i < n; ++i) CHECK(sol.epsilon[i] == doctest::Approx(sol.epsilon[n - 1 - i]).epsilon(1e-13));
  CHECK(sol.residual < 1e-11);
  // interaction lowers the dispersion below the bare one
  for (std::size_t i = 0; i < n; ++i) CHECK(sol.epsilon[i] <= sol.k[i] * sol.k[i] + 1e-12);
}

TEST_CASE("epsilon(0) at beta=1, mu=0, C=1 is resolution independent") {
  const auto coarse = eos::auto_grid(1.0, 0.0, 1.0, 1.0, 1);
  const auto fine = eos::auto_grid(1.0, 0.0, 1.0, 1.0, 4);
  const auto a = eos::solve_yang_yang(1.0, 0.0, 1.0, 1.0, coarse);
  const auto b = eos::solve_yang_yang(1.0, 0.0, 1.0, 1.0, fine);
  CHECK(a.epsilon[a.k.size() / 2] == doctest::Approx(b.epsilon[b.k.size() / 2]).epsilon(1e-6));
}

TEST_CASE("Tonks-Girardeau limit matches free fermions") {
  for (double mu : {-1.0, 0.5, 3.0}) {
    const double p = eos::pressure(eos::solve_yang_yang(1.0, mu, 1e6));
    CHECK(p == doctest::Approx(eos::free_fermion_pressure(1.0, mu)).epsilon(1e-4));
    CHECK(eos::density(1.0, mu, 1e6).density == doctest::Approx(eos::free_fermion_density(1.0, mu)).epsilon(1e-4));
  }
}

TEST_CASE("pressure grows with mu, density stable under step halving") {
  const double p1 = eos::pressure(eos::solve_yang_yang(1.0, -1.0, 1.0));
  const double p2 = eos::pressure(eos::solve_yang_yang(1.0, -0.5, 1.0));
  CHECK(p1 < p2);
  const auto d = eos::density(1.0, 0.0, 1.0, 1.0, 1e-3);
  const auto h = eos::density(1.0, 0.0, 1.0, 1.0, 5e-4);
  CHECK(d.density > 0.0);
  CHECK(d.density == doctest::Approx(h.density).epsilon(1e-6));
}

TEST_CASE("dilute limit: D -> b1 z / (2 pi)") {
  const double beta = 1.0, mu = -12.0;
  const double z = std::exp(beta * mu);
  const auto vc = eos::fugacity_coefficients(beta, 1.0, 1.0, eos::A2Reading::ExponentInQ);
  CHECK(eos::density(beta, mu, 1.0).density == doctest::Approx(vc.b1 * z / (2.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("fugacity coefficients") {
  const double beta = 0.7, hbar = 0.5;
  const auto q = eos::fugacity_coefficients(beta, 2.0, hbar, eos::A2Reading::ExponentInQ);
  CHECK(q.b1 == doctest::Approx(eos::b1_gaussian(beta, hbar)).epsilon(1e-12));
  CHECK(eos::b1_printed(beta, hbar) == doctest::Approx(2.0 * kPi / (std::sqrt(beta) * hbar)));
  for (std::size_t i = 0; i < q.k.size(); ++i) CHECK(q.a1[i] == std::exp(-beta * hbar * hbar * q.k[i] * q.k[i]));
  const auto k = eos::fugacity_coefficients(beta, 2.0, hbar, eos::A2Reading::ExponentInK);
  for (std::size_t i = 0; i < k.k.size(); ++i) CHECK(k.a2[i] == doctest::Approx(-2.0 * hbar * k.a1[i]));
  // TG limit: no a2, b2 = -(1/2) int a1^2 = -sqrt(pi / (2 beta)) / (2 hbar)
  const auto tg = eos::fugacity_coefficients(beta, kInfiniteCoupling, hbar, eos::A2Reading::ExponentInQ);
  CHECK(tg.b2 == doctest::Approx(-0.5 * std::sqrt(kPi / (2.0 * beta)) / hbar).epsilon(1e-10));
}

TEST_CASE("virial ratio") {
  const auto v = eos::virial_ratio(1.0, 1.0, 0.1, 0.1);
  CHECK(v.density == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(v.in_regime);
  CHECK(std::abs(v.full - v.expansion) < 1e-3);
  const auto hot = eos::virial_ratio(1.0, 1.0, 1.0, 0.1);
  CHECK_FALSE(hot.in_regime);
  CHECK_FALSE(hot.warning.empty());
  CHECK_THROWS_AS(eos::virial_ratio(1.0, 1.0, 1.0, -1.0), ConfigError);
}

TEST_CASE("printed kernel has no solution at dense filling") {
  // the kernel integrates to 2 hbar; past mu ~ 0.12 (beta = C = 1) the
  // fixed point disappears and the solver reports it
  CHECK_THROWS_AS(eos::solve_yang_yang(1.0, 1.0, 1.0), SolverError);
}
