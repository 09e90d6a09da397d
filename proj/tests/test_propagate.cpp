#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "llwork/box.hpp"
#include "llwork/propagate.hpp"
#include "llwork/sudden.hpp"

using namespace llwork;

TEST_CASE("dilation generator is antisymmetric") {
  const auto a = propagate::single_mode_dilation(8);
  CHECK((a + a.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  // int_0^1 u_1 (y u_2' + u_2 / 2) dy = -4/3 by hand
  CHECK(a(0, 1) == doctest::Approx(-4.0 / 3.0));
  const auto p = propagate::pair_dilation(box::PairBasis(5));
  CHECK((p + p.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("zero speed leaves eigenstates alone") {
  const ModelSpec m = ModelSpec::box(2, 1.0, 5.0);
  const auto r = propagate::propagate_ramp(m, LinearRamp{1.0, 0.0, 0.3}, 6);
  CHECK((r.transition - linalg::Matrix::Identity(r.transition.rows(), r.transition.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("slow ramp follows the ground state, fast ramp is sudden") {
  const ModelSpec m = ModelSpec::box(2, 1.0, 5.0);
  propagate::PropagateOptions o;
  o.tracked_states = 1;
  const auto slow = propagate::propagate_ramp(m, LinearRamp{1.0, 0.5, 1.0}, 6, o);
  const auto slower = propagate::propagate_ramp(m, LinearRamp{1.0, 0.1, 5.0}, 6, o);
  CHECK(slow.transition(0, 0) < slower.transition(0, 0));
  CHECK(slower.transition(0, 0) > 0.999);
  CHECK(slow.max_norm_drift < 1e-8);
  // transition matrices are doubly stochastic
  CHECK((slow.transition.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
  CHECK((slow.transition.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);

  const auto fast = propagate::propagate_ramp(m, LinearRamp{1.0, 1000.0, 1e-3}, 10, o);
  const auto si = box::solve_box(m, 10);
  const auto q = sudden::sudden_wall_plain(si, {0}, 10, 2.0);
  double gap = 0.0;
  for (Eigen::Index f = 0; f < q.transition.cols(); ++f) gap = std::max(gap, std::abs(fast.transition(0, f) - q.transition(0, f)));
  CHECK(gap < 0.05);
}

TEST_CASE("single trajectory keeps its norm") {
  const ModelSpec m = ModelSpec::box(2, 1.0, 2.0);
  const auto t = propagate::propagate(LinearRamp{1.0, 2.0, 0.5}, 1, m, 6, {}, 5);
  CHECK(t.times.size() == 5);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(0.5));
  CHECK(t.coefficients.front().norm() == doctest::Approx(1.0));
  CHECK(t.coefficients.back().norm() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(t.max_norm_drift < 1e-8);
}
