#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "llwork/box.hpp"
#include "llwork/errors.hpp"
#include "llwork/sudden.hpp"
#include "llwork/work.hpp"

using namespace llwork;

namespace {

work::WorkDistribution two_atoms(double w1, double p1, double w2, double p2) {
  return work::make_distribution({{w1, p1}, {w2, p2}}, 1.0, Protocol{Adiabatic{1.0, 1.0}});
}

}  // namespace

TEST_CASE("merging keeps mass and mean") {
  const auto d = work::make_distribution({{1.0, 0.2}, {1.0 + 1e-12, 0.3}, {-2.0, 0.5}}, 1.0,
                                         Protocol{Adiabatic{1.0, 2.0}});
  REQUIRE(d.atoms.size() == 2);
  CHECK(d.atoms[0].work == -2.0);
  CHECK(d.atoms[1].probability == doctest::Approx(0.5));
  CHECK(work::moments(d, 1) == doctest::Approx(0.2 * 1.0 + 0.3 * (1.0 + 1e-12) - 1.0));
  CHECK(d.tail_mass == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("thermal weights") {
  const auto w = work::thermal_weights(std::vector<double>{0.0, 1.0, 2.0}, 0.5);
  const double z = 1.0 + std::exp(-0.5) + std::exp(-1.0);
  CHECK(w.probabilities[1] == doctest::Approx(std::exp(-0.5) / z));
  CHECK(w.log_z == doctest::Approx(std::log(z)));
  // shifted energies: same weights, log Z shifts by -beta * shift
  const auto s = work::thermal_weights(std::vector<double>{1000.0, 1001.0, 1002.0}, 0.5);
  CHECK(s.probabilities[2] == doctest::Approx(w.probabilities[2]));
  CHECK(s.log_z == doctest::Approx(std::log(z) - 500.0));
}

TEST_CASE("characteristic function derivatives give the moments") {
  const auto d = two_atoms(-1.5, 0.25, 2.0, 0.75);
  const double h = 1e-4;
  const auto g = work::characteristic_function(d, {-h, 0.0, h});
  CHECK(std::abs(g[1] - 1.0) < 1e-15);
  // G'(0) = i <W>, G''(0) = -<W^2>
  const auto first = (g[2] - g[0]) / (2.0 * h);
  const auto second = (g[2] - 2.0 * g[1] + g[0]) / (h * h);
  CHECK(first.imag() == doctest::Approx(work::moments(d, 1)).epsilon(1e-7));
  CHECK(-second.real() == doctest::Approx(work::moments(d, 2)).epsilon(1e-6));
  CHECK(work::absolute_moment(d, 1) == doctest::Approx(0.25 * 1.5 + 0.75 * 2.0));
}

TEST_CASE("Kolmogorov distance") {
  const auto a = two_atoms(0.0, 0.5, 1.0, 0.5);
  const auto b = two_atoms(0.0, 0.2, 1.0, 0.8);
  CHECK(work::kolmogorov_distance(a, a) == 0.0);
  CHECK(work::kolmogorov_distance(a, b) == doctest::Approx(0.3));
  CHECK(work::kolmogorov_distance(b, a) == doctest::Approx(0.3));
  // a shifted copy is at distance zero once the resolution covers the shift
  const auto s = two_atoms(0.01, 0.5, 1.01, 0.5);
  CHECK(work::kolmogorov_distance(a, s) == doctest::Approx(0.5));
  CHECK(work::kolmogorov_distance(a, s, 0.02) == doctest::Approx(0.0));
}

TEST_CASE("ring adiabatic: Jarzynski to rounding") {
  for (double beta : {1.0, 0.1}) {
    const auto d = work::tpm_distribution(Protocol{Adiabatic{1.0, 2.0}}, ModelSpec::ring(2, 1.0, 3.0), beta);
    CHECK(d.jarzynski_relative_residual() < 1e-12);
    CHECK(d.initial_tail_bound < 1e-10);
    CHECK(d.total_probability() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ring adiabatic at infinite coupling: free-fermion scaling") {
  // every level scales as (L_i / L_f)^2, so W = -3/4 E_i
  const double beta = 0.2;
  const auto d = work::tpm_distribution(Protocol{Adiabatic{1.0, 2.0}}, ModelSpec::ring(2, 1.0, kInfiniteCoupling), beta);
  for (const auto& a : d.atoms) CHECK(a.work <= 0.0);
  const auto table = ring::enumerate_auto(ModelSpec::ring(2, 1.0, kInfiniteCoupling), beta, 1e-10);
  const auto w = work::thermal_weights([&] {
    std::vector<double> e;
    for (const auto& s : table.states) e.push_back(s.energy);
    return e;
  }(), beta);
  double mean_e = 0.0;
  for (std::size_t i = 0; i < table.states.size(); ++i) mean_e += w.probabilities[i] * table.states[i].energy;
  CHECK(work::moments(d, 1) == doctest::Approx(-0.75 * mean_e).epsilon(1e-9));
}

TEST_CASE("ring rejects driven protocols") {
  CHECK_THROWS_AS(work::tpm_distribution(Protocol{SuddenWall{1.0, 2.0}}, ModelSpec::ring(2, 1.0, 1.0), 1.0),
                  UnsupportedError);
}

TEST_CASE("box protocols in the full model space") {
  const ModelSpec m = ModelSpec::box(2, 1.0, 10.0);
  work::WorkCutoffs cut;
  cut.box_cutoff = 10;
  cut.weight_cut = 0.0;
  for (const Protocol& p : {Protocol{Adiabatic{1.0, 1.5}}, Protocol{SuddenCoupling{10.0, 2.0}}}) {
    const auto d = work::tpm_distribution(p, m, 0.1, cut);
    CHECK(d.jarzynski_relative_residual() < 1e-10);
    CHECK(d.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sudden wall: energy is conserved on average") {
  const auto si = box::solve_box(ModelSpec::box(2, 1.0, 10.0), 12);
  const std::vector<std::size_t> states = {0, 1, 2, 5, 9};
  for (int mf : {12, 24}) {
    const auto q = sudden::sudden_wall(si, states, mf, 2.0);
    for (std::size_t r = 0; r < states.size(); ++r) {
      double sum = 0.0, mean = 0.0;
      for (Eigen::Index f = 0; f < q.transition.cols(); ++f) {
        sum += q.transition(static_cast<Eigen::Index>(r), f);
        mean += q.transition(static_cast<Eigen::Index>(r), f) * (q.final_energies[f] - si.energies[states[r]]);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(mean) < 1e-8 * si.energies[states[r]]);
    }
  }
  CHECK_THROWS_AS(sudden::sudden_wall(si, states, 12, 0.5), UnsupportedError);
}

TEST_CASE("sudden wall: single-mode overlaps against the closed form") {
  // <v_a | u_c> for u on [0, 1] embedded in [0, 2]: v_2 restricted equals u_1 / sqrt(2)
  const auto o = sudden::mode_overlap(4, 3, 1.0, 2.0);
  CHECK(o(1, 0) == doctest::Approx(M_SQRT1_2));
  CHECK(o(3, 1) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(o(1, 1)) < 1e-15);
}
