// SPDX-License-Identifier: Apache-2.0
#include "llwork/ndp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llwork/sudden.hpp"

namespace llwork::ndp {

using linalg::Matrix;
using work::WorkAtom;
using work::WorkDistribution;

const char* to_string(Statistics s) {
  switch (s) {
    case Statistics::Distinguishable: return "distinguishable";
    case Statistics::Boson: return "boson";
    case Statistics::Fermion: return "fermion";
  }
  return "?";
}

Statistics statistics_from_string(const std::string& s) {
  if (s == "distinguishable" || s == "ndp") return Statistics::Distinguishable;
  if (s == "boson") return Statistics::Boson;
  if (s == "fermion") return Statistics::Fermion;
  throw ConfigError("unknown statistics '" + s + "'");
}

namespace {

struct Level {
  double energy_initial;
  double energy_final;
};

double unit_energy(GeometryKind g, double label, double width, double hbar) {
  const double k = (g == GeometryKind::Ring) ? 2.0 * kPi * label / width : kPi * label / width;
  return hbar * hbar * k * k;
}

// Labels in ascending |label| order, truncated by a relative tail criterion.
std::vector<double> labels_for(GeometryKind g, bool half_integer, double width, double hbar, double beta, double tol) {
  std::vector<double> out;
  double total = 0.0;
  auto weight = [&](double l) { return std::exp(-beta * unit_energy(g, l, width, hbar)); };
  // first pass: total weight (converges fast)
  for (int j = 0; j < 1000000; ++j) {
    double w = 0.0;
    if (g == GeometryKind::Box) {
      w = weight(j + 1);
    } else {
      const double l = half_integer ? j + 0.5 : j;
      w = (l == 0.0 ? 1.0 : 2.0) * weight(l);
    }
    total += w;
    if (w < 1e-30 * total) break;
  }
  double kept = 0.0;
  for (int j = 0; j < 1000000; ++j) {
    if (g == GeometryKind::Box) {
      out.push_back(j + 1);
      kept += weight(j + 1);
    } else {
      const double l = half_integer ? j + 0.5 : j;
      out.push_back(l);
      if (l != 0.0) out.push_back(-l);
      kept += (l == 0.0 ? 1.0 : 2.0) * weight(l);
    }
    if ((total - kept) / total < tol && out.size() >= 4) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

WorkDistribution finish(std::vector<WorkAtom> atoms, double beta, const Protocol& protocol, double log_zi,
                        double log_zf, double merge, const std::string& stats) {
  WorkDistribution d = work::make_distribution(std::move(atoms), beta, protocol, merge);
  d.log_z_initial = log_zi;
  d.log_z_final = log_zf;
  d.metadata["statistics"] = stats;
  return d;
}

double log_sum_exp(const std::vector<double>& energies, double beta) {
  return work::thermal_weights(energies, beta).log_z;
}

}  // namespace

WorkDistribution convolve(const WorkDistribution& a, const WorkDistribution& b, double merge_tolerance) {
  std::vector<WorkAtom> atoms;
  atoms.reserve(a.atoms.size() * b.atoms.size());
  for (const auto& x : a.atoms)
    for (const auto& y : b.atoms) atoms.push_back({x.work + y.work, x.probability * y.probability});
  WorkDistribution d = work::make_distribution(std::move(atoms), a.beta, a.protocol, merge_tolerance);
  d.log_z_initial = a.log_z_initial + b.log_z_initial;
  d.log_z_final = a.log_z_final + b.log_z_final;
  d.metadata = a.metadata;
  return d;
}

WorkDistribution ndp_reference(const Protocol& protocol, GeometryKind geometry, double beta, int n_particles,
                               Statistics statistics, const NdpOptions& options) {
  if (n_particles < 1) throw ConfigError("ndp_reference: N >= 1 required");
  if (!(beta > 0.0)) throw ConfigError("ndp_reference: beta > 0 required");
  if (n_particles == 1) statistics = Statistics::Distinguishable;
  if (statistics != Statistics::Distinguishable && n_particles > 2)
    throw UnsupportedError("ndp_reference: symmetrized statistics implemented for N <= 2");
  const double hbar = options.hbar;
  const std::string stats = to_string(statistics);
  const bool half = geometry == GeometryKind::Ring && statistics == Statistics::Fermion && n_particles % 2 == 0;
  const double tol = options.tail_tolerance / (10.0 * n_particles);

  if (const auto* p = std::get_if<Adiabatic>(&protocol.kind())) {
    const double li = p->initial_length, lf = p->final_length;
    const std::vector<double> labels = labels_for(geometry, half, li, hbar, beta, tol);
    std::vector<Level> levels;
    for (double l : labels) levels.push_back({unit_energy(geometry, l, li, hbar), unit_energy(geometry, l, lf, hbar)});

    if (statistics == Statistics::Distinguishable) {
      std::vector<double> ei, ef;
      for (const auto& lv : levels) {
        ei.push_back(lv.energy_initial);
        ef.push_back(lv.energy_final);
      }
      const auto w = work::thermal_weights(ei, beta);
      std::vector<WorkAtom> atoms;
      for (std::size_t j = 0; j < levels.size(); ++j)
        atoms.push_back({levels[j].energy_final - levels[j].energy_initial, w.probabilities[j]});
      WorkDistribution one = finish(atoms, beta, protocol, w.log_z, log_sum_exp(ef, beta), options.merge_tolerance, stats);
      WorkDistribution all = one;
      for (int n = 1; n < n_particles; ++n) all = convolve(all, one, options.merge_tolerance);
      all.metadata["statistics"] = stats;
      all.metadata["single_particle_levels"] = std::to_string(levels.size());
      return all;
    }
    std::vector<double> ei, ef;
    for (std::size_t a = 0; a < levels.size(); ++a)
      for (std::size_t b = (statistics == Statistics::Boson ? a : a + 1); b < levels.size(); ++b) {
        ei.push_back(levels[a].energy_initial + levels[b].energy_initial);
        ef.push_back(levels[a].energy_final + levels[b].energy_final);
      }
    const auto w = work::thermal_weights(ei, beta);
    std::vector<WorkAtom> atoms;
    for (std::size_t j = 0; j < ei.size(); ++j) atoms.push_back({ef[j] - ei[j], w.probabilities[j]});
    WorkDistribution d = finish(atoms, beta, protocol, w.log_z, log_sum_exp(ef, beta), options.merge_tolerance, stats);
    d.metadata["single_particle_levels"] = std::to_string(levels.size());
    return d;
  }

  if (const auto* p = std::get_if<SuddenWall>(&protocol.kind())) {
    if (geometry != GeometryKind::Box) throw UnsupportedError("ndp_reference: sudden wall requires box geometry");
    const double li = p->initial_length, lf = p->final_length;
    if (lf < li) throw UnsupportedError("sudden wall compression: initial state is not in the final domain");
    const std::vector<double> labels = labels_for(geometry, false, li, hbar, beta, tol);
    const int mi = static_cast<int>(labels.size());
    const int mf = options.final_mode_factor * static_cast<int>(std::ceil(mi * lf / li));
    const Matrix o = sudden::mode_overlap(mf, mi, li, lf);
    std::vector<double> ei1(mi), ef1(mf);
    for (int c = 0; c < mi; ++c) ei1[c] = unit_energy(geometry, c + 1, li, hbar);
    for (int a = 0; a < mf; ++a) ef1[a] = unit_energy(geometry, a + 1, lf, hbar);

    if (statistics == Statistics::Distinguishable) {
      const auto w = work::thermal_weights(ei1, beta);
      std::vector<WorkAtom> atoms;
      for (int c = 0; c < mi; ++c)
        for (int a = 0; a < mf; ++a) atoms.push_back({ef1[a] - ei1[c], w.probabilities[c] * o(a, c) * o(a, c)});
      WorkDistribution one = finish(atoms, beta, protocol, w.log_z, log_sum_exp(ef1, beta), options.merge_tolerance, stats);
      WorkDistribution all = one;
      for (int n = 1; n < n_particles; ++n) all = convolve(all, one, options.merge_tolerance);
      all.metadata["statistics"] = stats;
      all.metadata["final_modes"] = std::to_string(mf);
      return all;
    }
    const bool bos = statistics == Statistics::Boson;
    std::vector<std::pair<int, int>> ip, fp;
    for (int c = 0; c < mi; ++c)
      for (int d = bos ? c : c + 1; d < mi; ++d) ip.emplace_back(c, d);
    for (int a = 0; a < mf; ++a)
      for (int b = bos ? a : a + 1; b < mf; ++b) fp.emplace_back(a, b);
    std::vector<double> ei, ef;
    for (auto [c, d] : ip) ei.push_back(ei1[c] + ei1[d]);
    for (auto [a, b] : fp) ef.push_back(ef1[a] + ef1[b]);
    const auto w = work::thermal_weights(ei, beta);
    std::vector<WorkAtom> atoms;
    for (std::size_t r = 0; r < ip.size(); ++r) {
      if (w.probabilities[r] < 1e-18) continue;
      const auto [c, d] = ip[r];
      const double ncd = (c == d) ? 0.5 : M_SQRT1_2;
      for (std::size_t f = 0; f < fp.size(); ++f) {
        const auto [a, b] = fp[f];
        double amp;
        if (bos) {
          const double nab = (a == b) ? 0.5 : M_SQRT1_2;
          amp = 2.0 * nab * ncd * (o(a, c) * o(b, d) + o(a, d) * o(b, c));
        } else {
          amp = o(a, c) * o(b, d) - o(a, d) * o(b, c);
        }
        atoms.push_back({ef[f] - ei[r], w.probabilities[r] * amp * amp});
      }
    }
    WorkDistribution d = finish(atoms, beta, protocol, w.log_z, log_sum_exp(ef, beta), options.merge_tolerance, stats);
    d.metadata["initial_modes"] = std::to_string(mi);
    d.metadata["final_modes"] = std::to_string(mf);
    return d;
  }
  throw UnsupportedError("ndp_reference: protocol '" + protocol.name() + "' not available for free particles");
}

}  // namespace llwork::ndp
