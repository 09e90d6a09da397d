// SPDX-License-Identifier: Apache-2.0
#include "llwork/work.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "llwork/parallel.hpp"
#include "llwork/sudden.hpp"

namespace llwork::work {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double WorkDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.probability;
  return s;
}

double WorkDistribution::jarzynski_sum() const {
  if (!std::isnan(transition_jarzynski_sum)) return transition_jarzynski_sum;
  double s = 0.0;
  // log form: p can underflow while e^{-beta W} overflows
  for (const auto& a : atoms)
    if (a.probability > 0.0) s += std::exp(std::log(a.probability) - beta * a.work);
  return s;
}

double WorkDistribution::partition_ratio() const { return std::exp(log_z_final - log_z_initial); }

double WorkDistribution::jarzynski_relative_residual() const {
  return std::abs(jarzynski_sum() / partition_ratio() - 1.0);
}

double WorkDistribution::jarzynski_absolute_residual() const {
  return std::abs(jarzynski_sum() - partition_ratio());
}

WorkDistribution make_distribution(std::vector<WorkAtom> raw, double beta, const Protocol& protocol,
                                   double merge_tolerance) {
  std::stable_sort(raw.begin(), raw.end(), [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
  WorkDistribution d;
  d.beta = beta;
  d.protocol = protocol;
  std::size_t i = 0;
  while (i < raw.size()) {
    const double anchor = raw[i].work;
    double p = 0.0, pw = 0.0;
    std::size_t j = i;
    for (; j < raw.size() && raw[j].work - anchor <= merge_tolerance; ++j) {
      p += raw[j].probability;
      pw += raw[j].probability * raw[j].work;
    }
    d.atoms.push_back({p > 0.0 ? pw / p : anchor, p});
    i = j;
  }
  d.tail_mass = 1.0 - d.total_probability();
  return d;
}

ThermalWeights thermal_weights(const std::vector<double>& energies, double beta) {
  if (energies.empty()) throw ConfigError("thermal_weights: empty spectrum");
  const double e0 = *std::min_element(energies.begin(), energies.end());
  ThermalWeights w;
  w.probabilities.resize(energies.size());
  double s = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    w.probabilities[i] = std::exp(-beta * (energies[i] - e0));
    s += w.probabilities[i];
  }
  for (double& p : w.probabilities) p /= s;
  w.log_z = -beta * e0 + std::log(s);
  return w;
}

ThermalWeights thermal_weights(const Vector& energies, double beta) {
  return thermal_weights(std::vector<double>(energies.data(), energies.data() + energies.size()), beta);
}

WorkDistribution adiabatic_distribution(const ring::SpectrumTable& initial, const ring::SpectrumTable& final_table,
                                        double beta, double merge_tolerance) {
  if (initial.states.size() != final_table.states.size())
    throw PairingError("adiabatic_distribution: state counts differ");
  std::map<std::vector<int>, double> final_energy;
  for (const auto& s : final_table.states) final_energy[s.quantum_numbers.twice()] = s.energy;

  std::vector<double> ei;
  for (const auto& s : initial.states) ei.push_back(s.energy);
  const ThermalWeights wi = thermal_weights(ei, beta);
  std::vector<double> ef;
  std::vector<WorkAtom> atoms;
  for (std::size_t n = 0; n < initial.states.size(); ++n) {
    auto it = final_energy.find(initial.states[n].quantum_numbers.twice());
    if (it == final_energy.end())
      throw PairingError("adiabatic_distribution: label set (" + initial.states[n].quantum_numbers.str() +
                         ") missing from final spectrum");
    atoms.push_back({it->second - initial.states[n].energy, wi.probabilities[n]});
  }
  for (const auto& s : final_table.states) ef.push_back(s.energy);

  WorkDistribution d =
      make_distribution(std::move(atoms), beta, Protocol{Adiabatic{initial.length, final_table.length}}, merge_tolerance);
  d.log_z_initial = wi.log_z;
  d.log_z_final = thermal_weights(ef, beta).log_z;
  d.initial_tail_bound = initial.tail_bound;
  d.metadata["geometry"] = "ring";
  d.metadata["n_particles"] = std::to_string(initial.n_particles);
  d.metadata["coupling"] = fmt(initial.coupling);
  d.metadata["i_max"] = fmt(initial.i_max);
  d.metadata["states"] = std::to_string(initial.states.size());
  d.metadata["tail_bound_initial"] = fmt(initial.tail_bound);
  d.metadata["tail_bound_final"] = fmt(final_table.tail_bound);
  return d;
}

std::vector<std::size_t> track_adiabatic(const ModelSpec& model, int cutoff, double initial_width,
                                         double final_width, const std::vector<std::size_t>& initial_states) {
  const box::PairBasis basis(cutoff);
  // The eigenvectors depend on the width only through C * lambda, so the
  // unit-interval matrices are reused.
  const Vector t = box::unit_kinetic(basis, model.hbar());
  const Matrix v = box::unit_contact(basis);
  auto vectors_at = [&](double width) {
    Matrix h = (model.coupling() * width) * v;
    h.diagonal() += t;
    return linalg::eigh(h).vectors;
  };

  std::vector<std::size_t> current = initial_states;
  Matrix va = vectors_at(initial_width);
  double wa = initial_width;
  const double ratio = final_width / initial_width;
  const int max_depth = 14;

  // Walk the path in pieces; each piece is halved (geometrically) until the
  // assignment is unambiguous.
  double done = 0.0;  // fraction of log(ratio) covered
  double piece = 1.0;
  while (done < 1.0) {
    piece = std::min(piece, 1.0 - done);
    const double wb = initial_width * std::pow(ratio, done + piece);
    const Matrix vb = vectors_at(wb);
    Matrix ov(static_cast<Eigen::Index>(current.size()), vb.cols());
    for (std::size_t r = 0; r < current.size(); ++r)
      ov.row(static_cast<Eigen::Index>(r)) = va.col(static_cast<Eigen::Index>(current[r])).transpose() * vb;
    bool ok = true;
    std::vector<std::size_t> next(current.size());
    for (std::size_t r = 0; r < current.size() && ok; ++r) {
      Eigen::Index best;
      const double m = ov.row(static_cast<Eigen::Index>(r)).cwiseAbs2().maxCoeff(&best);
      next[r] = static_cast<std::size_t>(best);
      if (m <= 0.5) ok = false;
    }
    if (!ok && piece > std::ldexp(1.0, -max_depth)) {
      piece *= 0.5;
      continue;
    }
    if (!ok) throw NumericError("track_adiabatic: ambiguous level assignment at width " + fmt(wb));
    current = std::move(next);
    va = vb;
    wa = wb;
    done += piece;
    piece *= 2.0;
  }
  (void)wa;
  return current;
}

namespace {

std::vector<std::size_t> select_initial(const ThermalWeights& w, double weight_cut, double& skipped) {
  std::vector<std::size_t> sel;
  skipped = 0.0;
  for (std::size_t i = 0; i < w.probabilities.size(); ++i) {
    if (w.probabilities[i] >= weight_cut)
      sel.push_back(i);
    else
      skipped += w.probabilities[i];
  }
  return sel;
}

// Weight of free pair states outside the Galerkin space relative to Z.  The
// contact term is nonnegative, so free energies bound the omitted ones from
// below.
double box_tail_bound(int cutoff, double width, double hbar, double beta, double log_z) {
  if (!(beta > 0.0)) return std::numeric_limits<double>::infinity();
  const double unit = hbar * hbar * kPi * kPi / (width * width);
  double s = 0.0;
  for (int q = cutoff + 1;; ++q) {
    double row = 0.0;
    for (int p = 1; p <= q; ++p) row += std::exp(-beta * unit * (p * p + q * q) - log_z);
    s += row;
    if (row == 0.0 || row < 1e-30 * s || q > cutoff + 100000) break;
  }
  return s;
}

void check_box_model(const ModelSpec& model) {
  if (!model.is_box() || model.n_particles() != 2) throw ConfigError("box protocols need a box with N = 2");
  if (model.tonks_girardeau()) throw ConfigError("box protocols need finite coupling");
}

}  // namespace

TransitionMatrix box_transitions(const Protocol& protocol, const ModelSpec& model_in, double beta,
                                 const WorkCutoffs& cutoffs) {
  check_box_model(model_in);
  TransitionMatrix tm;
  const int m = cutoffs.box_cutoff;
  tm.metadata["box_cutoff"] = std::to_string(m);

  auto finish_rows = [&](const ThermalWeights& wi) {
    tm.max_row_defect = 0.0;
    for (Eigen::Index r = 0; r < tm.probabilities.rows(); ++r)
      tm.max_row_defect = std::max(tm.max_row_defect, std::abs(1.0 - tm.probabilities.row(r).sum()));
    (void)wi;
  };

  if (const auto* p = std::get_if<Adiabatic>(&protocol.kind())) {
    const ModelSpec mi = model_in.with_length(p->initial_length);
    const box::BoxSpectrum si = box::solve_box(mi, m);
    const box::BoxSpectrum sf = box::solve_box(model_in.with_length(p->final_length), m);
    const ThermalWeights wi = thermal_weights(si.energies, beta);
    double skipped;
    tm.initial_states = select_initial(wi, cutoffs.weight_cut, skipped);
    tm.initial_energies = si.energies;
    tm.final_energies = sf.energies;
    const auto target = track_adiabatic(model_in, m, p->initial_length, p->final_length, tm.initial_states);
    tm.probabilities = Matrix::Zero(static_cast<Eigen::Index>(tm.initial_states.size()), sf.energies.size());
    for (std::size_t r = 0; r < target.size(); ++r) tm.probabilities(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(target[r])) = 1.0;
    finish_rows(wi);
    return tm;
  }
  if (const auto* p = std::get_if<SuddenWall>(&protocol.kind())) {
    const box::BoxSpectrum si = box::solve_box(model_in.with_length(p->initial_length), m);
    const ThermalWeights wi = thermal_weights(si.energies, beta);
    double skipped;
    tm.initial_states = select_initial(wi, cutoffs.weight_cut, skipped);
    int mf = cutoffs.final_cutoff;
    if (mf <= 0) mf = static_cast<int>(std::ceil(m * p->final_length / p->initial_length));
    tm.metadata["final_cutoff"] = std::to_string(mf);
    tm.metadata["enriched"] = cutoffs.enrich_sudden_wall ? "true" : "false";
    const sudden::QuenchSpectrum q = cutoffs.enrich_sudden_wall
                                         ? sudden::sudden_wall(si, tm.initial_states, mf, p->final_length)
                                         : sudden::sudden_wall_plain(si, tm.initial_states, mf, p->final_length);
    tm.initial_energies = si.energies;
    tm.final_energies = q.final_energies;
    tm.probabilities = q.transition;
    finish_rows(wi);
    return tm;
  }
  if (const auto* p = std::get_if<SuddenCoupling>(&protocol.kind())) {
    const box::BoxSpectrum si = box::solve_box(model_in.with_coupling(p->initial_coupling), m);
    const box::BoxSpectrum sf = box::solve_box(model_in.with_coupling(p->final_coupling), m);
    const ThermalWeights wi = thermal_weights(si.energies, beta);
    double skipped;
    tm.initial_states = select_initial(wi, cutoffs.weight_cut, skipped);
    const sudden::QuenchSpectrum q = sudden::sudden_coupling(si, sf, tm.initial_states);
    tm.initial_energies = si.energies;
    tm.final_energies = sf.energies;
    tm.probabilities = q.transition;
    finish_rows(wi);
    return tm;
  }
  const auto& ramp = std::get<LinearRamp>(protocol.kind());
  const propagate::RampResult rr =
      propagate::propagate_ramp(model_in.with_length(ramp.initial_length), ramp, m, cutoffs.propagation);
  const ThermalWeights wi = thermal_weights(rr.initial_energies, beta);
  double skipped;
  tm.initial_states = select_initial(wi, cutoffs.weight_cut, skipped);
  tm.initial_energies = rr.initial_energies;
  tm.final_energies = rr.final_energies;
  tm.probabilities.resize(static_cast<Eigen::Index>(tm.initial_states.size()), rr.transition.cols());
  for (std::size_t r = 0; r < tm.initial_states.size(); ++r)
    tm.probabilities.row(static_cast<Eigen::Index>(r)) = rr.transition.row(static_cast<Eigen::Index>(tm.initial_states[r]));
  tm.metadata["steps"] = std::to_string(rr.steps);
  tm.metadata["rejected_steps"] = std::to_string(rr.rejected);
  tm.metadata["norm_drift"] = fmt(rr.max_norm_drift);
  tm.metadata["step_tolerance"] = fmt(rr.step_tolerance);
  tm.metadata["norm_tolerance"] = fmt(rr.norm_tolerance);
  finish_rows(wi);
  return tm;
}

WorkDistribution distribution_from_transitions(const TransitionMatrix& tm, double beta, const Protocol& protocol,
                                               double merge_tolerance) {
  const ThermalWeights wi = thermal_weights(tm.initial_energies, beta);
  std::vector<WorkAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(tm.probabilities.rows() * tm.probabilities.cols()));
  // p_i e^{-beta W} = e^{-beta E_f} / Z_i: finite even where p_i underflows
  double jarzynski = 0.0;
  for (std::size_t r = 0; r < tm.initial_states.size(); ++r) {
    const std::size_t i = tm.initial_states[r];
    const double pi = wi.probabilities[i];
    for (Eigen::Index f = 0; f < tm.probabilities.cols(); ++f) {
      const double p = tm.probabilities(static_cast<Eigen::Index>(r), f);
      if (p == 0.0) continue;
      jarzynski += std::exp(std::log(p) - beta * tm.final_energies[f] - wi.log_z);
      atoms.push_back({tm.final_energies[f] - tm.initial_energies[static_cast<Eigen::Index>(i)], pi * p});
    }
  }
  WorkDistribution d = make_distribution(std::move(atoms), beta, protocol, merge_tolerance);
  d.transition_jarzynski_sum = jarzynski;
  d.log_z_initial = wi.log_z;
  d.log_z_final = thermal_weights(tm.final_energies, beta).log_z;
  d.metadata = tm.metadata;
  d.metadata["max_row_defect"] = fmt(tm.max_row_defect);
  d.metadata["initial_states_used"] = std::to_string(tm.initial_states.size());
  return d;
}

WorkDistribution tpm_distribution(const Protocol& protocol, const ModelSpec& model, double beta,
                                  const WorkCutoffs& cutoffs) {
  if (model.is_ring()) {
    const auto* p = std::get_if<Adiabatic>(&protocol.kind());
    if (!p)
      throw UnsupportedError("ring geometry supports the adiabatic protocol only (driven dynamics use the box)");
    const ModelSpec mi = model.with_length(p->initial_length);
    const ModelSpec mf = model.with_length(p->final_length);
    double i_max = cutoffs.i_max;
    if (i_max <= 0.0)
      i_max = std::max(ring::choose_i_max(mi, beta, cutoffs.tail_tolerance),
                       ring::choose_i_max(mf, beta, cutoffs.tail_tolerance));
    const ring::SpectrumTable ti = ring::enumerate_states(mi, i_max, beta);
    const ring::SpectrumTable tf = ring::enumerate_states(mf, i_max, beta);
    return adiabatic_distribution(ti, tf, beta, cutoffs.merge_tolerance);
  }
  check_box_model(model);
  const TransitionMatrix tm = box_transitions(protocol, model, beta, cutoffs);
  WorkDistribution d = distribution_from_transitions(tm, beta, protocol, cutoffs.merge_tolerance);
  double initial_width = model.length();
  std::visit([&](const auto& k) {
    using K = std::decay_t<decltype(k)>;
    if constexpr (!std::is_same_v<K, SuddenCoupling>) initial_width = k.initial_length;
  }, protocol.kind());
  d.initial_tail_bound = box_tail_bound(cutoffs.box_cutoff, initial_width, model.hbar(), beta, d.log_z_initial);
  d.metadata["geometry"] = "box";
  d.metadata["n_particles"] = "2";
  d.metadata["tail_bound_initial"] = fmt(d.initial_tail_bound);
  return d;
}

std::vector<std::complex<double>> characteristic_function(const WorkDistribution& dist, const std::vector<double>& nu) {
  std::vector<std::complex<double>> g(nu.size());
  for (std::size_t j = 0; j < nu.size(); ++j) {
    std::complex<double> s = 0.0;
    for (const auto& a : dist.atoms) s += a.probability * std::polar(1.0, nu[j] * a.work);
    g[j] = s;
  }
  return g;
}

double moments(const WorkDistribution& dist, int n) {
  if (n < 0 || n > 6) throw ConfigError("moments: order must be in [0, 6]");
  double s = 0.0;
  for (const auto& a : dist.atoms) s += a.probability * std::pow(a.work, n);
  return s;
}

double absolute_moment(const WorkDistribution& dist, int n) {
  double s = 0.0;
  for (const auto& a : dist.atoms) s += a.probability * std::pow(std::abs(a.work), n);
  return s;
}

namespace {

struct Cdf {
  std::vector<double> x;
  std::vector<double> cum;
  explicit Cdf(const WorkDistribution& d) {
    double c = 0.0;
    for (const auto& a : d.atoms) {
      c += a.probability;
      x.push_back(a.work);
      cum.push_back(c);
    }
  }
  // right-continuous F(w)
  double operator()(double w) const {
    const auto it = std::upper_bound(x.begin(), x.end(), w);
    if (it == x.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - x.begin()) - 1];
  }
};

}  // namespace

double kolmogorov_distance(const WorkDistribution& a, const WorkDistribution& b, double delta) {
  const Cdf fa(a), fb(b);
  double eps = 0.0;
  // sup F_a(w - delta) - F_b(w): pieces start at atoms of b or at a + delta
  for (double w : fb.x) eps = std::max(eps, fa(w - delta) - fb(w));
  for (double w : fa.x) eps = std::max(eps, fa(w) - fb(w + delta));
  // sup F_b(w) - F_a(w + delta)
  for (double w : fb.x) eps = std::max(eps, fb(w) - fa(w + delta));
  for (double w : fa.x) eps = std::max(eps, fb(w - delta) - fa(w));
  return eps;
}

}  // namespace llwork::work
