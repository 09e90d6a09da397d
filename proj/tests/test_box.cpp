#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "llwork/box.hpp"
#include "llwork/errors.hpp"

using namespace llwork;

namespace {

double mode(int n, double width, double x) { return std::sqrt(2.0 / width) * std::sin(n * kPi * x / width); }

double quad(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
}

}  // namespace

TEST_CASE("pair basis layout") {
  const box::PairBasis b(6);
  CHECK(b.size() == 21);  // p <= q <= 6
  CHECK(b[b.index(2, 5)] == std::make_pair(2, 5));
  CHECK(b.norm(b.index(3, 3)) == doctest::Approx(0.5));
  CHECK(b.norm(b.index(1, 3)) == doctest::Approx(M_SQRT1_2));
}

TEST_CASE("four-mode integral against quadrature") {
  const double w = 1.7;
  for (auto [a, b, c, d] : {std::array{1, 1, 1, 1}, std::array{1, 2, 3, 4}, std::array{2, 2, 3, 5}, std::array{1, 3, 5, 7},
                            std::array{4, 4, 1, 2}}) {
    const double ref = quad([&](double x) { return mode(a, w, x) * mode(b, w, x) * mode(c, w, x) * mode(d, w, x); }, 0, w);
    CHECK(box::four_mode_integral(a, b, c, d, w) == doctest::Approx(ref).epsilon(1e-11));
  }
  // sin^4 integrates to 3 lambda / 8, so the count is 3
  CHECK(box::four_sine_count(1, 1, 1, 1) == 3);
}

TEST_CASE("kinetic and contact elements") {
  const box::PairBasis b(3);
  const auto t = box::unit_kinetic(b);
  CHECK(t[static_cast<Eigen::Index>(b.index(1, 2))] == doctest::Approx(5.0 * kPi * kPi));
  // <S_11|delta|S_11> = int u_1^4 = 3 / (2 lambda)
  CHECK(box::contact_element(1, 1, 1, 1, 2.0) == doctest::Approx(3.0 / 4.0));
  const auto v = box::unit_contact(b);
  CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("non-interacting box reduces to kinetic energies") {
  const auto s = box::solve_box(ModelSpec::box(2, 1.0, 0.0), 8);
  CHECK(s.energies[0] == doctest::Approx(2.0 * kPi * kPi));  // (1,1)
  CHECK(s.energies[1] == doctest::Approx(5.0 * kPi * kPi));  // (1,2)
  CHECK(s.residual < 1e-12);
}

TEST_CASE("first-order perturbation in the coupling") {
  // E_0 = 2 pi^2 + C int u_1^4 + O(C^2)
  const double c = 1e-4;
  const auto s = box::solve_box(ModelSpec::box(2, 1.0, c), 10);
  CHECK((s.energies[0] - 2.0 * kPi * kPi) / c == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("strong coupling approaches free fermions") {
  const auto ff = box::free_fermion_box_spectrum(1.0, 1.0, 30);
  CHECK(ff[0].energy == doctest::Approx(5.0 * kPi * kPi));
  CHECK(ff[0].p == 1);
  CHECK(ff[0].q == 2);
  CHECK(ff[1].energy == doctest::Approx(10.0 * kPi * kPi));
  const auto s = box::solve_box(ModelSpec::box(2, 1.0, coupling_for_alpha(1e3, 1.0)), 30);
  for (int i = 0; i < 5; ++i)
    CHECK(s.energies[i] == doctest::Approx(ff[static_cast<std::size_t>(i)].energy).epsilon(0.02));
}

TEST_CASE("Galerkin energies are variational in the cutoff") {
  const ModelSpec m = ModelSpec::box(2, 1.0, 50.0);
  const auto a = box::solve_box(m, 10), b = box::solve_box(m, 20);
  for (int i = 0; i < 5; ++i) CHECK(b.energies[i] <= a.energies[i]);
}

TEST_CASE("energies scale as 1 / lambda^2 at fixed alpha") {
  const double alpha = 3.0;
  const auto a = box::solve_box(ModelSpec::box(2, 1.0, coupling_for_alpha(alpha, 1.0)), 12);
  const auto b = box::solve_box(ModelSpec::box(2, 2.0, coupling_for_alpha(alpha, 2.0)), 12);
  for (int i = 0; i < 5; ++i) CHECK(b.energies[i] == doctest::Approx(a.energies[i] / 4.0).epsilon(1e-12));
}

TEST_CASE("fermionization") {
  CHECK(box::fermionize(0.7, 0.1, 0.4) == 0.7);
  CHECK(box::fermionize(0.7, 0.4, 0.1) == -0.7);
  CHECK_THROWS_AS(box::fermionize(0.7, 0.3, 0.3), ContactError);
}

TEST_CASE("densities") {
  const auto s = box::solve_box(ModelSpec::box(2, 1.0, 10.0), 16);
  const linalg::Vector v = s.vectors.col(0);
  const auto rho = box::spatial_density(s.basis, v, 1.0, 129);
  CHECK(rho.mass == doctest::Approx(1.0).epsilon(1e-6));
  // exchange symmetry and reflection x -> 1 - x
  CHECK((rho.values - rho.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rho.values - rho.values.reverse()).cwiseAbs().maxCoeff() < 1e-10);
  const auto fer = box::spatial_density(s.basis, v, 1.0, 129, true);
  CHECK((fer.values.array() == rho.values.array()).all());

  // momentum densities conserve the norm once the window holds the tails
  const auto mb = box::momentum_density(s.basis, v, 1.0, 80.0, 161);
  CHECK(mb.mass == doctest::Approx(1.0).epsilon(5e-3));
  const auto mf = box::momentum_density(s.basis, v, 1.0, 80.0, 161, true);
  CHECK(box::l1_distance(mb, mf) > 0.1);
}

TEST_CASE("single-mode transform against quadrature") {
  const double w = 1.3, k = 4.2;
  const double re = quad([&](double x) { return mode(3, w, x) * std::cos(k * x); }, 0, w);
  const double im = -quad([&](double x) { return mode(3, w, x) * std::sin(k * x); }, 0, w);
  // (1/sqrt(2 pi)) int u_3 e^{-ikx} dx
  const auto t = box::mode_transform(3, w, k) * std::sqrt(2.0 * kPi);
  CHECK(t.real() == doctest::Approx(re).epsilon(1e-10));
  CHECK(t.imag() == doctest::Approx(im).epsilon(1e-10));
}

TEST_CASE("cusp: contact amplitude shrinks with coupling") {
  const auto weak = box::solve_box(ModelSpec::box(2, 1.0, coupling_for_alpha(1.0, 1.0)), 30);
  const auto strong = box::solve_box(ModelSpec::box(2, 1.0, coupling_for_alpha(100.0, 1.0)), 30);
  const auto cw = box::cusp_check(weak, 0);
  const auto cs = box::cusp_check(strong, 0);
  CHECK(cs.max_contact / cs.max_abs_phi < cw.max_contact / cw.max_abs_phi);
  // the derivative jump tracks (C / 2 hbar^2) phi better at finer cutoff
  const auto coarse = box::cusp_check(box::solve_box(ModelSpec::box(2, 1.0, 10.0), 12), 0);
  const auto fine = box::cusp_check(box::solve_box(ModelSpec::box(2, 1.0, 10.0), 40), 0);
  CHECK(fine.max_residual < coarse.max_residual);
}
