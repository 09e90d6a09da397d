// SPDX-License-Identifier: Apache-2.0
#include "llwork/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace llwork::analysis {

using work::WorkDistribution;

MomentGaps moment_gaps(const WorkDistribution& a, const WorkDistribution& reference) {
  return {std::abs(work::moments(a, 1) - work::moments(reference, 1)) / work::absolute_moment(reference, 1),
          std::abs(work::moments(a, 2) - work::moments(reference, 2)) / work::absolute_moment(reference, 2)};
}

work::Matrix grid_transition_block(const box::BoxSpectrum& initial, const box::BoxSpectrum& final_spectrum, int block,
                                   std::size_t grid_points, bool fermionized) {
  const double li = initial.model.length();
  const double lf = final_spectrum.model.length();
  const std::vector<double> x = box::uniform_grid(0.0, lf, grid_points);
  const double h = x[1] - x[0];

  auto amplitudes = [&](const box::BoxSpectrum& s, int state, bool initial_side) {
    work::Matrix phi = box::wavefunction_on_grid(s.basis, s.vectors.col(state), s.model.length(), x);
    if (initial_side)
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
          if (x[i] > li || x[j] > li) phi(i, j) = 0.0;
    if (fermionized) phi = box::fermionize_grid(phi, x);
    // A(x) is undefined on the contact line, a null set: leave it out of both.
    phi.diagonal().setZero();
    return phi;
  };

  work::Matrix out(block, block);
  std::vector<work::Matrix> fin;
  for (int f = 0; f < block; ++f) fin.push_back(amplitudes(final_spectrum, f, false));
  for (int i = 0; i < block; ++i) {
    const work::Matrix a = amplitudes(initial, i, true);
    for (int f = 0; f < block; ++f) {
      const double ov = box::trapezoid_2d(a.cwiseProduct(fin[f]), h);
      out(i, f) = ov * ov;
    }
  }
  return out;
}

DualityReport duality_work_check(double alpha, const Protocol& protocol, double beta, double hbar,
                                 const DualityOptions& options) {
  double li = 0.0;
  double lf = 0.0;
  if (const auto* p = std::get_if<Adiabatic>(&protocol.kind())) {
    li = p->initial_length;
    lf = p->final_length;
  } else if (const auto* p = std::get_if<SuddenWall>(&protocol.kind())) {
    li = p->initial_length;
    lf = p->final_length;
  } else {
    throw UnsupportedError("duality_work_check: adiabatic or sudden-wall protocol required");
  }
  const double coupling = coupling_for_alpha(alpha, li, hbar);
  const ModelSpec model = ModelSpec::box(2, li, coupling, hbar);

  DualityReport rep{};
  rep.alpha = alpha;
  rep.coupling = coupling;
  rep.beta = beta;
  rep.protocol = protocol.describe();
  rep.boson = work::tpm_distribution(protocol, model, beta, options.cutoffs);
  ndp::NdpOptions ref = options.reference;
  ref.hbar = hbar;
  rep.fermion = ndp::ndp_reference(protocol, ndp::GeometryKind::Box, beta, 2, ndp::Statistics::Fermion, ref);

  rep.resolution = options.resolution_fraction * work::absolute_moment(rep.fermion, 1);
  rep.kolmogorov_raw = work::kolmogorov_distance(rep.boson, rep.fermion, 0.0);
  rep.kolmogorov = work::kolmogorov_distance(rep.boson, rep.fermion, rep.resolution);
  rep.gaps = moment_gaps(rep.boson, rep.fermion);
  rep.boson_mean = work::moments(rep.boson, 1);
  rep.boson_second = work::moments(rep.boson, 2);
  rep.fermion_mean = work::moments(rep.fermion, 1);
  rep.fermion_second = work::moments(rep.fermion, 2);
  rep.boson_tail_mass = rep.boson.tail_mass;
  rep.fermion_tail_mass = rep.fermion.tail_mass;

  // Literal check of the duality mechanism on a small block: multiplying
  // bra and ket by A(x) leaves every |overlap|^2 unchanged.
  const int small_cutoff = std::min(options.cutoffs.box_cutoff, 16);
  const box::BoxSpectrum si = box::solve_box(model, small_cutoff);
  const box::BoxSpectrum sf = box::solve_box(model.with_length(lf), small_cutoff);
  const work::Matrix pb = grid_transition_block(si, sf, options.fermionized_block, options.fermionized_grid, false);
  const work::Matrix pf = grid_transition_block(si, sf, options.fermionized_block, options.fermionized_grid, true);
  rep.fermionized_identical = (pb.array() == pf.array()).all();
  return rep;
}

namespace {

double rel_gap(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0 ? std::abs(a - b) / s : 0.0;
}

}  // namespace

ConvergenceReport classical_convergence_report(const std::vector<double>& couplings, const std::vector<double>& betas,
                                               const Adiabatic& protocol, int n_particles, double hbar,
                                               double tail_tolerance, bool include_tonks_girardeau) {
  ConvergenceReport rep{n_particles, protocol.initial_length, protocol.final_length, {}, true, true};
  const Protocol proto{protocol};
  work::WorkCutoffs cut;
  cut.tail_tolerance = tail_tolerance;
  const double ratio = protocol.initial_length * protocol.initial_length / (protocol.final_length * protocol.final_length);
  for (double beta : betas) {
    ConvergenceRow row{};
    row.beta = beta;
    row.couplings = couplings;
    std::vector<WorkDistribution> dists;
    for (double c : couplings) {
      const ModelSpec model = ModelSpec::ring(n_particles, protocol.initial_length, c, hbar);
      dists.push_back(work::tpm_distribution(proto, model, beta, cut));
      row.mean.push_back(work::moments(dists.back(), 1));
      row.second.push_back(work::moments(dists.back(), 2));
      row.jarzynski_residual.push_back(dists.back().jarzynski_relative_residual());
    }
    for (std::size_t a = 0; a < dists.size(); ++a)
      for (std::size_t b = a + 1; b < dists.size(); ++b) {
        row.max_pairwise_kolmogorov = std::max(row.max_pairwise_kolmogorov, work::kolmogorov_distance(dists[a], dists[b]));
        row.max_mean_gap = std::max(row.max_mean_gap, rel_gap(row.mean[a], row.mean[b]));
        row.max_second_gap = std::max(row.max_second_gap, rel_gap(row.second[a], row.second[b]));
      }
    ndp::NdpOptions nopt;
    nopt.hbar = hbar;
    const WorkDistribution ref =
        ndp::ndp_reference(proto, ndp::GeometryKind::Ring, beta, n_particles, ndp::Statistics::Distinguishable, nopt);
    row.ndp_mean = work::moments(ref, 1);
    row.ndp_second = work::moments(ref, 2);
    for (std::size_t a = 0; a < dists.size(); ++a) {
      row.max_ndp_mean_gap = std::max(row.max_ndp_mean_gap, std::abs(row.mean[a] - row.ndp_mean) / std::abs(row.ndp_mean));
      row.max_ndp_second_gap =
          std::max(row.max_ndp_second_gap, std::abs(row.second[a] - row.ndp_second) / std::abs(row.ndp_second));
      row.max_ndp_kolmogorov = std::max(row.max_ndp_kolmogorov, work::kolmogorov_distance(dists[a], ref));
    }
    if (include_tonks_girardeau && n_particles <= 2) {
      const ModelSpec tg = ModelSpec::ring(n_particles, protocol.initial_length, kInfiniteCoupling, hbar);
      const WorkDistribution tg_dist = work::tpm_distribution(proto, tg, beta, cut);
      const WorkDistribution ff =
          ndp::ndp_reference(proto, ndp::GeometryKind::Ring, beta, n_particles, ndp::Statistics::Fermion, nopt);
      row.tg_fermion_kolmogorov = work::kolmogorov_distance(tg_dist, ff);
    }
    row.equipartition_mean = (ratio - 1.0) * n_particles / (2.0 * beta);
    if (!rep.rows.empty()) {
      const auto& prev = rep.rows.back();
      if (!(row.max_pairwise_kolmogorov < prev.max_pairwise_kolmogorov)) rep.kolmogorov_decreasing = false;
      if (!(row.max_mean_gap < prev.max_mean_gap && row.max_second_gap < prev.max_second_gap))
        rep.moment_gaps_decreasing = false;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

double free_momentum_work(const ring::QuantumNumbers& qn, double initial_length, double final_length, double hbar) {
  double s = 0.0;
  for (std::size_t l = 0; l < qn.size(); ++l) s += qn[l] * qn[l];
  return 4.0 * hbar * hbar * kPi * kPi * s *
         (1.0 / (final_length * final_length) - 1.0 / (initial_length * initial_length));
}

FreeMomentumCheck free_momentum_check(const ring::QuantumNumbers& qn, double initial_length, double final_length,
                                     double coupling, double hbar) {
  const double ei = ring::solve_bethe(qn, initial_length, coupling, hbar).energy;
  const double ef = ring::solve_bethe(qn, final_length, coupling, hbar).energy;
  const double exact = ef - ei;
  const double approx = free_momentum_work(qn, initial_length, final_length, hbar);
  return {exact, approx, std::abs(approx - exact) / std::abs(exact)};
}

}  // namespace llwork::analysis
