// SPDX-License-Identifier: Apache-2.0
#include "llwork/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "llwork/parallel.hpp"

namespace llwork::ring {

QuantumNumbers::QuantumNumbers(std::vector<int> twice) : twice_(std::move(twice)) {
  if (twice_.empty()) throw ConfigError("quantum numbers: empty set");
  const int parity = (twice_.size() % 2 == 1) ? 0 : 1;  // odd N: integers (even twice)
  for (std::size_t l = 0; l < twice_.size(); ++l) {
    if (std::abs(twice_[l]) % 2 != parity)
      throw ConfigError("quantum numbers: " + std::string(parity ? "half-integers" : "integers") +
                        " required for N=" + std::to_string(twice_.size()));
    if (l > 0 && twice_[l] <= twice_[l - 1])
      throw ConfigError("quantum numbers must be strictly increasing");
  }
}

QuantumNumbers QuantumNumbers::from_values(const std::vector<double>& values) {
  std::vector<int> twice;
  twice.reserve(values.size());
  for (double v : values) {
    const double t = 2.0 * v;
    if (std::abs(t - std::round(t)) > 1e-9) throw ConfigError("quantum number is not a half-integer");
    twice.push_back(static_cast<int>(std::lround(t)));
  }
  return QuantumNumbers(std::move(twice));
}

std::string QuantumNumbers::str() const {
  std::ostringstream os;
  for (std::size_t l = 0; l < twice_.size(); ++l) {
    if (l) os << ' ';
    if (twice_[l] % 2 == 0)
      os << twice_[l] / 2;
    else
      os << twice_[l] << "/2";
  }
  return os.str();
}

double theta(double k, double coupling, double hbar) {
  if (is_tonks_girardeau(coupling)) return 0.0;
  if (coupling == 0.0) return k == 0.0 ? 0.0 : std::copysign(kPi / 2, k);
  return std::atan(2.0 * hbar * hbar * k / coupling);
}

double theta_prime(double k, double coupling, double hbar) {
  if (is_tonks_girardeau(coupling)) return 0.0;
  const double a = 2.0 * hbar * hbar / coupling;
  const double ak = a * k;
  return a / (1.0 + ak * ak);
}

namespace {

// Antiderivative of 2 theta, the pair term of the Yang-Yang action.
double pair_action(double x, double a) {
  const double ax = a * x;
  return 2.0 * (x * std::atan(ax) - std::log1p(ax * ax) / (2.0 * a));
}

double yang_yang_action(const Eigen::VectorXd& k, const QuantumNumbers& qn, double length, double a) {
  double s = 0.0;
  const auto n = k.size();
  for (Eigen::Index l = 0; l < n; ++l) s += 0.5 * length * k[l] * k[l] - 2.0 * kPi * qn[l] * k[l];
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index j = l + 1; j < n; ++j) s += pair_action(k[l] - k[j], a);
  return s;
}

Eigen::VectorXd residual_vec(const Eigen::VectorXd& k, const QuantumNumbers& qn, double length,
                             double coupling, double hbar) {
  const auto n = k.size();
  Eigen::VectorXd f(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    double s = k[l] * length - 2.0 * kPi * qn[l];
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != l) s += 2.0 * theta(k[l] - k[j], coupling, hbar);
    f[l] = s;
  }
  return f;
}

double energy_of(const std::vector<double>& k, double hbar) {
  double e = 0.0;
  for (double v : k) e += hbar * hbar * v * v;
  return e;
}

}  // namespace

std::vector<double> bethe_residual(const std::vector<double>& k, const QuantumNumbers& qn, double length,
                                   double coupling, double hbar) {
  Eigen::VectorXd kv = Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size()));
  Eigen::VectorXd f = residual_vec(kv, qn, length, coupling, hbar);
  return {f.data(), f.data() + f.size()};
}

BetheState solve_bethe(const QuantumNumbers& qn, double length, double coupling, double hbar,
                       const BetheOptions& options) {
  if (!(length > 0.0)) throw ConfigError("solve_bethe: length must be positive");
  if (!(coupling > 0.0)) throw ConfigError("solve_bethe: coupling must be > 0 (or +inf)");
  const auto n = static_cast<Eigen::Index>(qn.size());
  Eigen::VectorXd k(n);
  for (Eigen::Index l = 0; l < n; ++l) k[l] = 2.0 * kPi * qn[l] / length;

  auto finish = [&](const Eigen::VectorXd& kv, double res, int iters) {
    std::vector<double> ks(kv.data(), kv.data() + kv.size());
    return BetheState{qn, ks, length, coupling, hbar, energy_of(ks, hbar), res, iters};
  };

  if (is_tonks_girardeau(coupling) || n == 1) return finish(k, residual_vec(k, qn, length, coupling, hbar).cwiseAbs().maxCoeff(), 0);

  const double a = 2.0 * hbar * hbar / coupling;
  Eigen::VectorXd f = residual_vec(k, qn, length, coupling, hbar);
  double res = f.cwiseAbs().maxCoeff();
  double action = yang_yang_action(k, qn, length, a);
  Eigen::VectorXd best = k;
  double best_res = res;

  for (int it = 1; it <= options.max_iterations; ++it) {
    if (res <= options.tol) return finish(k, res, it - 1);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
      jac(l, l) = length;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == l) continue;
        const double tp = 2.0 * theta_prime(k[l] - k[j], coupling, hbar);
        jac(l, l) += tp;
        jac(l, j) = -tp;
      }
    }
    // The Jacobian is the (positive definite) Hessian of the action.
    Eigen::VectorXd step = -jac.ldlt().solve(f);
    const double slope = f.dot(step);
    double t = 1.0;
    Eigen::VectorXd trial;
    double trial_action = 0.0;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      trial = k + t * step;
      trial_action = yang_yang_action(trial, qn, length, a);
      if (trial_action <= action + 1e-4 * t * slope) break;
      // Near the minimum the action change is below rounding; accept if the
      // residual itself improves.
      if (residual_vec(trial, qn, length, coupling, hbar).norm() < f.norm()) break;
    }
    k = trial;
    action = trial_action;
    f = residual_vec(k, qn, length, coupling, hbar);
    res = f.cwiseAbs().maxCoeff();
    if (res < best_res) {
      best_res = res;
      best = k;
    }
  }
  if (best_res <= options.tol) return finish(best, best_res, options.max_iterations);
  throw SolverError("solve_bethe: no convergence for I=(" + qn.str() + ")",
                    std::vector<double>(best.data(), best.data() + best.size()), best_res);
}

double free_fermion_energy(const QuantumNumbers& qn, double length, double hbar) {
  double e = 0.0;
  for (std::size_t l = 0; l < qn.size(); ++l) {
    const double k = 2.0 * kPi * qn[l] / length;
    e += hbar * hbar * k * k;
  }
  return e;
}

namespace {

// Doubled labels allowed for N particles with |I| <= i_max, ascending.
std::vector<int> lattice(int n_particles, double i_max) {
  const int parity = (n_particles % 2 == 1) ? 0 : 1;
  const int top = static_cast<int>(std::floor(2.0 * i_max + 1e-9));
  std::vector<int> out;
  for (int t = -top; t <= top; ++t)
    if (std::abs(t) % 2 == parity) out.push_back(t);
  return out;
}

// Boltzmann weight bound for a single label.
double label_weight(int twice, int n_particles, double length, double hbar, double beta) {
  const double g = std::max(0.0, kPi * std::abs(twice) - (n_particles - 1) * kPi) / length;
  return std::exp(-beta * hbar * hbar * g * g);
}

}  // namespace

double tail_weight_bound(int n_particles, double length, double hbar, double beta, double i_max) {
  if (beta <= 0.0) return std::numeric_limits<double>::infinity();
  const int parity = (n_particles % 2 == 1) ? 0 : 1;
  double s_all = 0.0, s_out = 0.0;
  const int top = static_cast<int>(std::floor(2.0 * i_max + 1e-9));
  for (int t = parity;; t += 2) {
    const double w = label_weight(t, n_particles, length, hbar, beta);
    const double mult = (t == 0) ? 1.0 : 2.0;
    s_all += mult * w;
    if (t > top) s_out += mult * w;
    if (t > top && w < 1e-300) break;
    if (t > top && w * mult < 1e-20 * s_out) break;
  }
  return s_out * std::pow(s_all, n_particles - 1);
}

std::size_t count_states(int n_particles, double i_max) {
  const std::size_t m = lattice(n_particles, i_max).size();
  if (m < static_cast<std::size_t>(n_particles)) return 0;
  // binomial(m, N)
  double c = 1.0;
  for (int j = 0; j < n_particles; ++j) c = c * static_cast<double>(m - j) / (j + 1);
  return static_cast<std::size_t>(std::llround(c));
}

SpectrumTable enumerate_states(const ModelSpec& model, double i_max, double beta,
                               std::optional<double> tail_tolerance, const BetheOptions& options) {
  if (!model.is_ring()) throw ConfigError("enumerate_states requires ring geometry");
  const int n = model.n_particles();
  const std::vector<int> labels = lattice(n, i_max);
  if (labels.size() < static_cast<std::size_t>(n)) throw ConfigError("i_max too small for N particles");

  // Lexicographic combinations of label indices.
  std::vector<QuantumNumbers> sets;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t m = labels.size();
  while (true) {
    std::vector<int> tw(n);
    for (int l = 0; l < n; ++l) tw[l] = labels[idx[l]];
    sets.emplace_back(std::move(tw));
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == m - n + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int l = pos + 1; l < n; ++l) idx[l] = idx[l - 1] + 1;
  }

  std::vector<std::optional<BetheState>> solved(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    solved[i] = solve_bethe(sets[i], model.length(), model.coupling(), model.hbar(), options);
  });

  SpectrumTable table{{}, n, model.length(), model.coupling(), model.hbar(), beta, i_max, 0.0};
  table.states.reserve(sets.size());
  for (auto& s : solved) table.states.push_back(std::move(*s));
  std::stable_sort(table.states.begin(), table.states.end(), [](const BetheState& x, const BetheState& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.quantum_numbers < y.quantum_numbers;
  });

  const double z = partition_function(table, beta);
  const double tail = tail_weight_bound(n, model.length(), model.hbar(), beta, i_max);
  table.tail_bound = tail / z;
  if (tail_tolerance && !(table.tail_bound < *tail_tolerance)) {
    std::ostringstream os;
    os << "enumerate_states: tail bound " << table.tail_bound << " exceeds " << *tail_tolerance
       << " at I_max=" << i_max << "; increase I_max";
    throw CutoffError(os.str(), table.tail_bound);
  }
  return table;
}

double choose_i_max(const ModelSpec& model, double beta, double tail_tolerance) {
  if (!(beta > 0.0)) throw ConfigError("choose_i_max requires beta > 0");
  const int n = model.n_particles();
  // Ground state: labels packed symmetrically around zero.
  std::vector<int> tw(n);
  for (int l = 0; l < n; ++l) tw[l] = 2 * l - (n - 1);
  const double e0 = solve_bethe(QuantumNumbers(tw), model.length(), model.coupling(), model.hbar()).energy;
  const double log_z_lower = -beta * e0;
  double i_max = 0.5 * (n - 1);  // smallest cutoff holding N labels
  for (int guard = 0; guard < 100000; ++guard, i_max += 1.0) {
    if (count_states(n, i_max) == 0) continue;
    const double tail = tail_weight_bound(n, model.length(), model.hbar(), beta, i_max);
    if (tail > 0.0 && std::log(tail) - log_z_lower < std::log(tail_tolerance)) return i_max;
    if (tail == 0.0) return i_max;
  }
  throw CutoffError("choose_i_max: no cutoff found", std::numeric_limits<double>::infinity());
}

SpectrumTable enumerate_auto(const ModelSpec& model, double beta, double tail_tolerance,
                             const BetheOptions& options) {
  return enumerate_states(model, choose_i_max(model, beta, tail_tolerance), beta, tail_tolerance, options);
}

double partition_function(const SpectrumTable& table, double beta) {
  double z = 0.0;
  for (const auto& s : table.states) z += std::exp(-beta * s.energy);
  return z;
}

}  // namespace llwork::ring
