// SPDX-License-Identifier: Apache-2.0
#include "llwork/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace llwork::propagate {

using cplx = std::complex<double>;

Matrix single_mode_dilation(int cutoff) {
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int m = 1; m <= cutoff; ++m)
    for (int n = 1; n <= cutoff; ++n)
      if (m != n) {
        const double sign = ((m + n + 1) % 2 == 0) ? 1.0 : -1.0;
        a(m - 1, n - 1) = sign * 2.0 * m * n / static_cast<double>(m * m - n * n);
      }
  return a;
}

Matrix pair_dilation(const box::PairBasis& basis) {
  const Matrix a = single_mode_dilation(basis.cutoff());
  // <a b| A x 1 + 1 x A |c d> on unsymmetrized products
  auto unsym = [&](int p, int q, int r, int s) {
    return (q == s ? a(p - 1, r - 1) : 0.0) + (p == r ? a(q - 1, s - 1) : 0.0);
  };
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix y(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [p, q] = basis[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto [r, s] = basis[j];
      y(i, j) = basis.norm(i) * basis.norm(j) *
                (unsym(p, q, r, s) + unsym(p, q, s, r) + unsym(q, p, r, s) + unsym(q, p, s, r));
    }
  }
  return y;
}

namespace {

class MagnusStepper {
 public:
  MagnusStepper(const ModelSpec& model, const LinearRamp& ramp, const box::PairBasis& basis,
                const PropagateOptions& options)
      : ramp_(ramp),
        hbar_(model.hbar()),
        coupling_(model.coupling()),
        kinetic_(box::unit_kinetic(basis, model.hbar())),
        contact_(box::unit_contact(basis)),
        dilation_(pair_dilation(basis)),
        options_(options) {
    h_ = options.initial_step > 0 ? options.initial_step : ramp.duration / 64.0;
  }

  // Advances the columns of u from t0 to t1.
  void advance(CMatrix& u, double t0, double t1) {
    double t = t0;
    while (t < t1) {
      const bool last = h_ >= t1 - t;
      const double h = last ? t1 - t : h_;
      const CMatrix full = step(t, h);
      const CMatrix half = step(t + 0.5 * h, 0.5 * h) * step(t, 0.5 * h);
      const Eigen::Index cols = (options_.tracked_states > 0)
                                    ? std::min<Eigen::Index>(static_cast<Eigen::Index>(options_.tracked_states), u.cols())
                                    : u.cols();
      const double err = ((half - full) * u.leftCols(cols)).cwiseAbs().maxCoeff() / 15.0;
      const double factor = err > 0 ? std::clamp(0.9 * std::pow(options_.step_tolerance / err, 0.2), 0.2, 2.0) : 2.0;
      if (err <= options_.step_tolerance || h < 1e-14 * ramp_.duration) {
        u = half * u;
        t = last ? t1 : t + h;
        ++steps_;
        if (steps_ > options_.max_steps) throw NumericError("propagate: step budget exhausted");
        if (!last || factor < 1.0) h_ = h * factor;
      } else {
        ++rejected_;
        h_ = h * factor;
      }
    }
  }

  long steps() const { return steps_; }
  long rejected() const { return rejected_; }

 private:
  double width(double t) const { return ramp_.initial_length + ramp_.speed * t; }

  CMatrix generator(double t) const {
    const double lam = width(t);
    CMatrix g = (coupling_ / lam) * contact_.cast<cplx>();
    g.diagonal().array() += (kinetic_ / (lam * lam)).cast<cplx>().array();
    g += cplx(0.0, hbar_ * ramp_.speed / lam) * dilation_.cast<cplx>();
    return g;
  }

  CMatrix step(double t, double h) const {
    const double c = std::sqrt(3.0) / 6.0;
    const CMatrix g1 = generator(t + (0.5 - c) * h);
    const CMatrix g2 = generator(t + (0.5 + c) * h);
    CMatrix x = (0.5 * h) * (g1 + g2) - cplx(0.0, std::sqrt(3.0) * h * h / (12.0 * hbar_)) * (g2 * g1 - g1 * g2);
    x = 0.5 * (x + x.adjoint()).eval();
    return linalg::expm_hermitian(x, 1.0 / hbar_);
  }

  LinearRamp ramp_;
  double hbar_;
  double coupling_;
  Vector kinetic_;
  Matrix contact_;
  Matrix dilation_;
  PropagateOptions options_;
  double h_;
  long steps_ = 0;
  long rejected_ = 0;
};

void require_ramp_model(const ModelSpec& model, const LinearRamp& ramp) {
  if (!model.is_box() || model.n_particles() != 2) throw ConfigError("propagate: box with N = 2 required");
  if (model.tonks_girardeau()) throw ConfigError("propagate: finite coupling required");
  Protocol check{ramp};  // validates widths
  (void)check;
}

Matrix eigenbasis(const ModelSpec& model, double width, const box::PairBasis& basis, Vector& energies) {
  box::BoxSpectrum s = box::solve_box(model.with_length(width), basis.cutoff());
  energies = s.energies;
  return s.vectors;
}

double norm_drift(const CMatrix& u) {
  double d = 0.0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) d = std::max(d, std::abs(u.col(j).squaredNorm() - 1.0));
  return d;
}

void check_drift(double drift, const PropagateOptions& options, long steps, long rejected) {
  if (drift > options.norm_tolerance) {
    std::ostringstream os;
    os << "propagate: norm drift " << drift << " exceeds " << options.norm_tolerance << " after " << steps
       << " steps (" << rejected << " rejected)";
    throw NumericError(os.str());
  }
}

}  // namespace

RampResult propagate_ramp(const ModelSpec& model, const LinearRamp& ramp, int cutoff, const PropagateOptions& options) {
  require_ramp_model(model, ramp);
  const box::PairBasis basis(cutoff);
  RampResult out;
  const Matrix wi = eigenbasis(model, ramp.initial_length, basis, out.initial_energies);
  const Matrix wf = eigenbasis(model, ramp.final_length(), basis, out.final_energies);

  MagnusStepper stepper(model, ramp, basis, options);
  CMatrix u = wi.cast<cplx>();
  stepper.advance(u, 0.0, ramp.duration);

  out.max_norm_drift = norm_drift(u);
  out.steps = stepper.steps();
  out.rejected = stepper.rejected();
  out.step_tolerance = options.step_tolerance;
  out.norm_tolerance = options.norm_tolerance;
  check_drift(out.max_norm_drift, options, out.steps, out.rejected);
  const CMatrix amp = wf.transpose().cast<cplx>() * u;  // (final, initial)
  out.transition = amp.cwiseAbs2().transpose();
  return out;
}

CoefficientTrajectory propagate(const LinearRamp& ramp, std::size_t initial_state, const ModelSpec& model, int cutoff,
                                const PropagateOptions& options, std::size_t samples) {
  require_ramp_model(model, ramp);
  if (samples < 2) samples = 2;
  const box::PairBasis basis(cutoff);
  Vector energies;
  const Matrix wi = eigenbasis(model, ramp.initial_length, basis, energies);
  if (initial_state >= basis.size()) throw ConfigError("propagate: initial state index out of range");

  MagnusStepper stepper(model, ramp, basis, options);
  CMatrix psi = wi.col(static_cast<Eigen::Index>(initial_state)).cast<cplx>();
  CoefficientTrajectory traj;
  traj.max_norm_drift = 0.0;
  double t_prev = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = ramp.duration * static_cast<double>(s) / static_cast<double>(samples - 1);
    stepper.advance(psi, t_prev, t);
    t_prev = t;
    Vector e;
    const Matrix w = eigenbasis(model, ramp.initial_length + ramp.speed * t, basis, e);
    traj.times.push_back(t);
    traj.coefficients.push_back(w.transpose().cast<cplx>() * psi.col(0));
    const double drift = norm_drift(psi);
    traj.norm_drift.push_back(drift);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
  }
  traj.steps = stepper.steps();
  traj.rejected = stepper.rejected();
  check_drift(traj.max_norm_drift, options, traj.steps, traj.rejected);
  return traj;
}

}  // namespace llwork::propagate
