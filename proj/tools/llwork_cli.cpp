// SPDX-License-Identifier: Apache-2.0
//
// llwork: spectra, work distributions and equation of state from the
// command line.  Exit codes: 0 success, 2 configuration error, 3 numeric
// failure.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "llwork/analysis.hpp"
#include "llwork/box.hpp"
#include "llwork/eos.hpp"
#include "llwork/io.hpp"
#include "llwork/ndp.hpp"
#include "llwork/parallel.hpp"
#include "llwork/propagate.hpp"
#include "llwork/ring.hpp"
#include "llwork/work.hpp"

namespace fs = std::filesystem;
using namespace llwork;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"ring-spectrum", "box-spectrum", "fig1",        "work",
                                            "fig2",          "duality-check", "convergence", "eos"};

// ---------------------------------------------------------------------------
// argument helpers

double parse_number(const std::string& text, const std::string& what) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "inf" || t == "+inf" || t == "infinity") return kInfiniteCoupling;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw ConfigError(what + ": empty entry in list '" + text + "'");
    out.push_back(parse_number(item, what));
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

// Reads `key = value` lines ('#' comments) into "--key value" tokens.
std::vector<std::string> config_tokens(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected 'key = value'");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (key.empty() || key == "config") throw ConfigError(path.string() + ":" + std::to_string(number) + ": bad key");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

// Splices config-file tokens in right after the subcommand name, so that
// flags on the command line (parsed later, TakeLast) override the file.
std::vector<std::string> expand_arguments(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<fs::path> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (!config) return args;
  const auto tokens = config_tokens(*config);
  auto cmd = std::find_if(args.begin(), args.end(),
                          [](const std::string& a) { return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end(); });
  if (cmd == args.end()) throw ConfigError("--config given without a command");
  args.insert(cmd + 1, tokens.begin(), tokens.end());
  return args;
}

// ---------------------------------------------------------------------------
// output context

struct Context {
  fs::path out_dir;
  double hbar;
  io::Metadata config;  // resolved options of the command, in definition order
  std::string command;

  json config_json() const {
    json j = json::object();
    for (const auto& [k, v] : config) j[k] = v;
    return j;
  }
  io::Metadata header(const io::Metadata& extra) const {
    io::Metadata h = {{"command", command}};
    for (const auto& [k, v] : config) h.emplace_back("config." + k, v);
    h.insert(h.end(), extra.begin(), extra.end());
    return h;
  }
  fs::path path(const std::string& name) const { return out_dir / name; }
};

std::string num(double x) { return io::format_number(x); }

std::string slug(double x) {
  std::string s = num(x);
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '-', 'm');
  std::replace(s.begin(), s.end(), '+', 'P');
  return s;
}

io::Metadata distribution_metadata(const work::WorkDistribution& d) {
  io::Metadata m = {{"protocol", d.protocol.describe()},
                    {"beta", num(d.beta)},
                    {"atoms", std::to_string(d.atoms.size())},
                    {"total_probability", num(d.total_probability())},
                    {"tail_mass", num(d.tail_mass)},
                    {"initial_tail_bound", num(d.initial_tail_bound)},
                    {"log_z_initial", num(d.log_z_initial)},
                    {"log_z_final", num(d.log_z_final)},
                    {"jarzynski_sum", num(d.jarzynski_sum())},
                    {"partition_ratio", num(d.partition_ratio())},
                    {"jarzynski_relative_residual", num(d.jarzynski_relative_residual())},
                    {"jarzynski_absolute_residual", num(d.jarzynski_absolute_residual())},
                    {"mean_work", num(work::moments(d, 1))},
                    {"second_moment", num(work::moments(d, 2))}};
  for (const auto& [k, v] : d.metadata) m.emplace_back("meta." + k, v);
  return m;
}

void write_distribution(const Context& ctx, const std::string& name, const work::WorkDistribution& d) {
  std::vector<std::vector<double>> rows;
  rows.reserve(d.atoms.size());
  for (const auto& a : d.atoms) rows.push_back({a.work, a.probability});
  io::write_csv(ctx.path(name), ctx.header(distribution_metadata(d)), {"work", "probability"}, rows);
}

json distribution_summary(const work::WorkDistribution& d) {
  return {{"atoms", d.atoms.size()},
          {"mean", work::moments(d, 1)},
          {"second_moment", work::moments(d, 2)},
          {"tail_mass", d.tail_mass},
          {"initial_tail_bound", d.initial_tail_bound},
          {"jarzynski_relative_residual", d.jarzynski_relative_residual()},
          {"jarzynski_absolute_residual", d.jarzynski_absolute_residual()}};
}

// ---------------------------------------------------------------------------
// commands

struct RingSpectrumArgs {
  int n = 2;
  double length = 1.0;
  std::string coupling = "1";
  double i_max = 10.0;
  double beta = 1.0;
};

void run_ring_spectrum(const Context& ctx, const RingSpectrumArgs& a) {
  const ModelSpec model = ModelSpec::ring(a.n, a.length, parse_number(a.coupling, "--c"), ctx.hbar);
  const ring::SpectrumTable t = ring::enumerate_states(model, a.i_max, a.beta);
  std::vector<std::string> cols = {"index", "energy", "residual", "iterations"};
  for (int l = 0; l < a.n; ++l) cols.push_back("I" + std::to_string(l + 1));
  for (int l = 0; l < a.n; ++l) cols.push_back("k" + std::to_string(l + 1));
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  for (std::size_t s = 0; s < t.states.size(); ++s) {
    const auto& st = t.states[s];
    std::vector<double> row = {static_cast<double>(s), st.energy, st.residual, static_cast<double>(st.iterations)};
    for (std::size_t l = 0; l < st.quantum_numbers.size(); ++l) row.push_back(st.quantum_numbers[l]);
    for (double k : st.rapidities) row.push_back(k);
    rows.push_back(std::move(row));
    worst = std::max(worst, st.residual);
  }
  io::write_csv(ctx.path("ring_spectrum.csv"),
                ctx.header({{"model", model.describe()},
                            {"states", std::to_string(t.states.size())},
                            {"max_residual", num(worst)},
                            {"tail_bound", num(t.tail_bound)}}),
                cols, rows);
  std::cout << "ring-spectrum: " << t.states.size() << " states, max residual " << num(worst) << "\n";
}

struct BoxSpectrumArgs {
  double length = 1.0;
  double alpha = 5.0;
  std::string coupling;  // overrides alpha when given
  int cutoff = 60;
  int states = 20;
};

double box_coupling(const std::string& coupling, double alpha, double length, double hbar) {
  if (!coupling.empty()) return parse_number(coupling, "--c");
  return coupling_for_alpha(alpha, length, hbar);
}

void run_box_spectrum(const Context& ctx, const BoxSpectrumArgs& a) {
  if (a.states < 1) throw ConfigError("--states must be >= 1");
  const double c = box_coupling(a.coupling, a.alpha, a.length, ctx.hbar);
  const ModelSpec model = ModelSpec::box(2, a.length, c, ctx.hbar);
  const box::BoxSpectrum s = box::solve_box(model, a.cutoff);
  const auto ff = box::free_fermion_box_spectrum(a.length, ctx.hbar, a.cutoff);
  const int shown = std::min<int>(a.states, static_cast<int>(s.energies.size()));
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < shown; ++i) {
    const double e = s.energies[i];
    const auto& f = ff[static_cast<std::size_t>(i)];
    const box::CuspReport cusp = box::cusp_check(s, static_cast<std::size_t>(i));
    rows.push_back({static_cast<double>(i), e, f.energy, static_cast<double>(f.p), static_cast<double>(f.q),
                    (e - f.energy) / f.energy, cusp.max_residual, cusp.max_contact / cusp.max_abs_phi});
  }
  io::write_csv(ctx.path("box_spectrum.csv"),
                ctx.header({{"model", model.describe()},
                            {"alpha", num(alpha_of(model).alpha)},
                            {"basis_size", std::to_string(s.basis.size())},
                            {"eigen_residual", num(s.residual)}}),
                {"index", "energy", "free_fermion_energy", "fermion_p", "fermion_q", "relative_gap", "cusp_residual",
                 "contact_ratio"},
                rows);
  std::cout << "box-spectrum: " << shown << " states written (basis " << s.basis.size() << ")\n";
}

struct Fig1Args {
  double alpha = 5.0;
  double length = 1.0;
  int cutoff = 60;
  int points = 128;
  double k_max = 30.0;
  int k_points = 96;
};

void write_grid(const Context& ctx, const std::string& stem, const box::DensityGrid& g, const io::Metadata& extra) {
  std::vector<std::vector<double>> rows;
  rows.reserve(g.axis.size() * g.axis.size());
  for (std::size_t i = 0; i < g.axis.size(); ++i)
    for (std::size_t j = 0; j < g.axis.size(); ++j)
      rows.push_back({g.axis[i], g.axis[j], g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  io::Metadata m = extra;
  m.emplace_back("grid_mass", num(g.mass));
  io::write_csv(ctx.path(stem + ".csv"), ctx.header(m), {"coord1", "coord2", "density"}, rows);
  io::write_svg_heatmap(ctx.path(stem + ".svg"), g.values, stem);
}

void run_fig1(const Context& ctx, const Fig1Args& a) {
  if (a.points < 2 || a.k_points < 2) throw ConfigError("grids need at least 2 points");
  if (!(a.k_max > 0)) throw ConfigError("--k-max must be positive");
  const double c = coupling_for_alpha(a.alpha, a.length, ctx.hbar);
  const ModelSpec model = ModelSpec::box(2, a.length, c, ctx.hbar);
  const box::BoxSpectrum s = box::solve_box(model, a.cutoff);
  const char* names[] = {"ground", "excited"};
  json summary = {{"command", "fig1"}, {"config", ctx.config_json()}, {"model", model.describe()}, {"states", json::array()}};
  for (int st = 0; st < 2; ++st) {
    const linalg::Vector coeffs = s.vectors.col(st);
    // Headers carry no statistics tag, so spatial files can be compared byte for byte.
    const io::Metadata spatial_meta = {{"state", names[st]}, {"energy", num(s.energies[st])}, {"quantity", "spatial"}};
    const io::Metadata momentum_meta = {{"state", names[st]}, {"energy", num(s.energies[st])}, {"quantity", "momentum"}};
    box::DensityGrid grids[4];
    const std::string kinds[4] = {"spatial_boson", "spatial_fermion", "momentum_boson", "momentum_fermion"};
    parallel_for(4, [&](std::size_t g) {
      const bool fermionized = g % 2 == 1;
      grids[g] = g < 2 ? box::spatial_density(s.basis, coeffs, a.length, static_cast<std::size_t>(a.points), fermionized)
                       : box::momentum_density(s.basis, coeffs, a.length, a.k_max, static_cast<std::size_t>(a.k_points),
                                               fermionized);
    });
    for (int g = 0; g < 4; ++g)
      write_grid(ctx, std::string("fig1_") + names[st] + "_" + kinds[g], grids[g], g < 2 ? spatial_meta : momentum_meta);
    const bool identical = (grids[0].values.array() == grids[1].values.array()).all();
    summary["states"].push_back({{"state", names[st]},
                                 {"energy", s.energies[st]},
                                 {"spatial_identical", identical},
                                 {"momentum_l1_distance", box::l1_distance(grids[2], grids[3])},
                                 {"momentum_mass_boson", grids[2].mass},
                                 {"momentum_mass_fermion", grids[3].mass}});
  }
  io::write_json(ctx.path("fig1_summary.json"), summary);
  std::cout << "fig1: 8 grids written to " << ctx.out_dir.string() << "\n";
}

struct WorkArgs {
  std::string geometry = "box";
  std::string protocol = "adiabatic";
  int n = 2;
  std::string coupling = "10";
  std::string final_coupling = "1";
  double initial_length = 1.0;
  double final_length = 2.0;
  double speed = 5.0;
  double duration = 1.0;
  double beta = 1.0;
  int cutoff = 20;
  int final_cutoff = 0;
  double i_max = 0.0;
  double tail_tolerance = 1e-10;
  double weight_cut = 0.0;
  int tracked = 0;
  double step_tolerance = 1e-9;
};

Protocol make_protocol(const std::string& name, double li, double lf, double c0, double c1, double v, double tau) {
  if (name == "adiabatic") return Protocol{Adiabatic{li, lf}};
  if (name == "sudden-wall") return Protocol{SuddenWall{li, lf}};
  if (name == "sudden-coupling") return Protocol{SuddenCoupling{c0, c1}};
  if (name == "ramp") return Protocol{LinearRamp{li, v, tau}};
  throw ConfigError("unknown protocol '" + name + "'");
}

void run_work(const Context& ctx, const WorkArgs& a) {
  const double c = parse_number(a.coupling, "--c");
  const Protocol protocol = make_protocol(a.protocol, a.initial_length, a.final_length, c,
                                          parse_number(a.final_coupling, "--c-final"), a.speed, a.duration);
  ModelSpec model = (a.geometry == "ring") ? ModelSpec::ring(a.n, a.initial_length, c, ctx.hbar)
                    : (a.geometry == "box") ? ModelSpec::box(a.n, a.initial_length, c, ctx.hbar)
                                            : throw ConfigError("--geometry must be ring or box");
  work::WorkCutoffs cut;
  cut.i_max = a.i_max;
  cut.tail_tolerance = a.tail_tolerance;
  cut.box_cutoff = a.cutoff;
  cut.final_cutoff = a.final_cutoff;
  cut.weight_cut = a.weight_cut;
  cut.propagation.tracked_states = static_cast<std::size_t>(std::max(a.tracked, 0));
  cut.propagation.step_tolerance = a.step_tolerance;
  const work::WorkDistribution d = work::tpm_distribution(protocol, model, a.beta, cut);
  write_distribution(ctx, "work_" + a.protocol + ".csv", d);
  std::cout << "work: " << d.atoms.size() << " atoms, <W> = " << num(work::moments(d, 1))
            << ", Jarzynski relative residual " << num(d.jarzynski_relative_residual()) << "\n";
}

struct Fig2Args {
  std::string couplings = "0.1,1,10";
  std::string betas = "1,0.1,0.01";
  std::string protocol = "ramp";
  double length = 1.0;
  double speed = 5.0;
  double duration = 1.0;
  int cutoff = 16;
  double weight_cut = 0.0;
  double track_weight = 1e-14;
  double step_tolerance = 1e-8;
};

void run_fig2(const Context& ctx, const Fig2Args& a) {
  const std::vector<double> cs = parse_list(a.couplings, "--c-list");
  const std::vector<double> betas = parse_list(a.betas, "--beta-list");
  for (double b : betas)
    if (!(b > 0)) throw ConfigError("--beta-list entries must be positive");
  if (a.protocol != "ramp" && a.protocol != "adiabatic") throw ConfigError("fig2 --protocol must be ramp or adiabatic");
  const LinearRamp ramp{a.length, a.speed, a.duration};
  const Protocol protocol =
      a.protocol == "ramp" ? Protocol{ramp} : Protocol{Adiabatic{a.length, ramp.final_length()}};
  const double beta_min = *std::min_element(betas.begin(), betas.end());

  // One transition matrix per coupling serves every beta.
  std::vector<work::TransitionMatrix> tms(cs.size());
  parallel_for(cs.size(), [&](std::size_t j) {
    const ModelSpec model = ModelSpec::box(2, a.length, cs[j], ctx.hbar);
    work::WorkCutoffs cut;
    cut.box_cutoff = a.cutoff;
    cut.weight_cut = a.weight_cut;
    cut.propagation.step_tolerance = a.step_tolerance;
    // accuracy is controlled on the states that carry weight at the smallest beta
    const box::BoxSpectrum si = box::solve_box(model, a.cutoff);
    const work::ThermalWeights w = work::thermal_weights(si.energies, beta_min);
    std::size_t tracked = 0;
    while (tracked < w.probabilities.size() && w.probabilities[tracked] >= a.track_weight) ++tracked;
    cut.propagation.tracked_states = std::max<std::size_t>(tracked, 1);
    tms[j] = work::box_transitions(protocol, model, beta_min, cut);
  });

  json report = {{"command", "fig2"}, {"config", ctx.config_json()}, {"protocol", protocol.describe()},
                 {"rows", json::array()}};
  for (double beta : betas) {
    std::vector<work::WorkDistribution> dists;
    json row = {{"beta", beta}, {"couplings", json::array()}};
    for (std::size_t j = 0; j < cs.size(); ++j) {
      work::WorkDistribution d = work::distribution_from_transitions(tms[j], beta, protocol);
      d.metadata["coupling"] = num(cs[j]);
      write_distribution(ctx, "fig2_" + a.protocol + "_c" + slug(cs[j]) + "_beta" + slug(beta) + ".csv", d);
      json entry = distribution_summary(d);
      entry["coupling"] = cs[j];
      row["couplings"].push_back(entry);
      dists.push_back(std::move(d));
    }
    double ks = 0.0;
    json pairs = json::array();
    for (std::size_t x = 0; x < dists.size(); ++x)
      for (std::size_t y = x + 1; y < dists.size(); ++y) {
        const double k = work::kolmogorov_distance(dists[x], dists[y]);
        ks = std::max(ks, k);
        pairs.push_back({{"c_a", cs[x]}, {"c_b", cs[y]}, {"kolmogorov", k}});
      }
    row["pairwise"] = pairs;
    row["max_pairwise_kolmogorov"] = ks;
    report["rows"].push_back(row);
  }
  bool decreasing = true;
  for (std::size_t r = 1; r < report["rows"].size(); ++r)
    if (!(report["rows"][r]["max_pairwise_kolmogorov"].get<double>() <
          report["rows"][r - 1]["max_pairwise_kolmogorov"].get<double>()))
      decreasing = false;
  report["kolmogorov_decreasing_along_beta_list"] = decreasing;
  io::write_json(ctx.path("fig2_" + a.protocol + "_convergence.json"), report);
  std::cout << "fig2: " << cs.size() * betas.size() << " distributions, distances decreasing: "
            << (decreasing ? "yes" : "no") << "\n";
}

struct DualityArgs {
  double alpha = 1e4;
  double beta = 0.01;
  std::string protocol = "adiabatic";
  double initial_length = 1.0;
  double final_length = 2.0;
  int cutoff = 60;
  int final_cutoff = 60;
  double resolution = 1e-2;
  int reference_factor = 4;
};

void run_duality(const Context& ctx, const DualityArgs& a) {
  if (a.protocol != "adiabatic" && a.protocol != "sudden-wall")
    throw ConfigError("duality-check --protocol must be adiabatic or sudden-wall");
  const Protocol protocol = make_protocol(a.protocol, a.initial_length, a.final_length, 0, 0, 0, 1);
  analysis::DualityOptions o;
  o.cutoffs.box_cutoff = a.cutoff;
  o.cutoffs.final_cutoff = a.final_cutoff;
  o.resolution_fraction = a.resolution;
  o.reference.final_mode_factor = a.reference_factor;
  const analysis::DualityReport r = analysis::duality_work_check(a.alpha, protocol, a.beta, ctx.hbar, o);
  write_distribution(ctx, "duality_" + a.protocol + "_boson.csv", r.boson);
  write_distribution(ctx, "duality_" + a.protocol + "_fermion.csv", r.fermion);
  const json doc = {{"command", "duality-check"},
                    {"config", ctx.config_json()},
                    {"alpha", r.alpha},
                    {"coupling", r.coupling},
                    {"beta", r.beta},
                    {"protocol", r.protocol},
                    {"kolmogorov_raw", r.kolmogorov_raw},
                    {"kolmogorov_with_resolution", r.kolmogorov},
                    {"resolution", r.resolution},
                    {"mean_gap", r.gaps.first},
                    {"second_moment_gap", r.gaps.second},
                    {"boson", distribution_summary(r.boson)},
                    {"fermion", distribution_summary(r.fermion)},
                    {"fermionized_block_identical", r.fermionized_identical}};
  io::write_json(ctx.path("duality_" + a.protocol + ".json"), doc);
  std::cout << "duality-check: Kolmogorov " << num(r.kolmogorov) << " (raw " << num(r.kolmogorov_raw)
            << "), moment gaps " << num(r.gaps.first) << ", " << num(r.gaps.second) << "\n";
}

struct ConvergenceArgs {
  int n = 2;
  double initial_length = 1.0;
  double final_length = 2.0;
  std::string couplings = "0.1,1,10,100";
  std::string betas = "1,0.1,0.01";
  double tail_tolerance = 1e-10;
};

void run_convergence(const Context& ctx, const ConvergenceArgs& a) {
  const auto cs = parse_list(a.couplings, "--c-list");
  const auto betas = parse_list(a.betas, "--beta-list");
  const analysis::ConvergenceReport rep = analysis::classical_convergence_report(
      cs, betas, Adiabatic{a.initial_length, a.final_length}, a.n, ctx.hbar, a.tail_tolerance);
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row = {{"beta", r.beta},
                {"couplings", r.couplings},
                {"mean", r.mean},
                {"second_moment", r.second},
                {"jarzynski_relative_residual", r.jarzynski_residual},
                {"max_pairwise_kolmogorov", r.max_pairwise_kolmogorov},
                {"max_mean_gap", r.max_mean_gap},
                {"max_second_moment_gap", r.max_second_gap},
                {"ndp_mean", r.ndp_mean},
                {"ndp_second_moment", r.ndp_second},
                {"max_ndp_mean_gap", r.max_ndp_mean_gap},
                {"max_ndp_second_moment_gap", r.max_ndp_second_gap},
                {"max_ndp_kolmogorov", r.max_ndp_kolmogorov},
                {"equipartition_mean", r.equipartition_mean}};
    if (r.tg_fermion_kolmogorov) row["tonks_girardeau_vs_free_fermion_kolmogorov"] = *r.tg_fermion_kolmogorov;
    rows.push_back(row);
  }
  const json doc = {{"command", "convergence"},
                    {"config", ctx.config_json()},
                    {"rows", rows},
                    {"kolmogorov_decreasing", rep.kolmogorov_decreasing},
                    {"moment_gaps_decreasing", rep.moment_gaps_decreasing}};
  io::write_json(ctx.path("convergence.json"), doc);
  std::cout << "convergence: " << rep.rows.size() << " temperatures, distances decreasing: "
            << (rep.kolmogorov_decreasing ? "yes" : "no") << "\n";
}

struct EosArgs {
  double beta = 1.0;
  std::string coupling = "1";
  double mu_min = -5.0;
  double mu_max = 0.0;
  int mu_points = 11;
  std::string reading = "q";
  std::string hbar_sweep;
  double density = 0.1;
};

void run_eos(const Context& ctx, const EosArgs& a) {
  const double c = parse_number(a.coupling, "--c");
  if (!(a.mu_max > a.mu_min) || a.mu_points < 2 || !std::isfinite(a.mu_min) || !std::isfinite(a.mu_max))
    throw ConfigError("mu grid needs mu-min < mu-max (finite) and mu-points >= 2");
  if (a.reading != "q" && a.reading != "k") throw ConfigError("--reading must be q or k");
  const eos::A2Reading reading = a.reading == "q" ? eos::A2Reading::ExponentInQ : eos::A2Reading::ExponentInK;
  const double hbar = ctx.hbar;

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.mu_points));
  parallel_for(rows.size(), [&](std::size_t i) {
    const double mu = a.mu_min + (a.mu_max - a.mu_min) * static_cast<double>(i) / (a.mu_points - 1);
    const eos::EosSolution sol = eos::solve_yang_yang(a.beta, mu, c, hbar);
    const double p = eos::pressure(sol);
    const eos::DensityResult d = eos::density(a.beta, mu, c, hbar);
    rows[i] = {mu, p, d.density, p * a.beta / d.density, sol.residual, d.richardson_gap};
  });
  io::write_csv(ctx.path("eos_isotherm.csv"), ctx.header({{"beta", num(a.beta)}, {"coupling", num(c)}}),
                {"mu", "pressure", "density", "virial_ratio", "fixed_point_residual", "richardson_gap"}, rows);

  json coeffs = json::object();
  for (eos::A2Reading r : {eos::A2Reading::ExponentInQ, eos::A2Reading::ExponentInK}) {
    const eos::VirialCoefficients vc = eos::fugacity_coefficients(a.beta, c, hbar, r);
    coeffs[eos::to_string(r)] = {{"b1_quadrature", vc.b1}, {"b2", vc.b2}, {"grid_points", vc.k.size()}};
  }
  json doc = {{"command", "eos"},
              {"config", ctx.config_json()},
              {"reading", eos::to_string(reading)},
              {"b1_closed_form_as_printed", eos::b1_printed(a.beta, hbar)},
              {"b1_gaussian_integral", eos::b1_gaussian(a.beta, hbar)},
              {"coefficients", coeffs}};
  if (!a.hbar_sweep.empty()) {
    const auto hs = parse_list(a.hbar_sweep, "--hbar-sweep");
    json sweep = json::array();
    for (double h : hs) {
      const eos::VirialRatio vr = eos::virial_ratio(a.beta, c, h, a.density, reading);
      sweep.push_back({{"hbar", h},
                       {"mu", vr.mu},
                       {"fugacity", vr.fugacity},
                       {"density", vr.density},
                       {"full", vr.full},
                       {"correction", std::abs(vr.full - 1.0)},
                       {"expansion", vr.expansion},
                       {"printed_expansion", vr.printed},
                       {"in_regime", vr.in_regime},
                       {"warning", vr.warning}});
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < sweep.size(); ++i)
      if (!(sweep[i]["correction"].get<double>() < sweep[i - 1]["correction"].get<double>())) shrinking = false;
    doc["hbar_sweep"] = sweep;
    doc["correction_decreasing"] = shrinking;
  }
  io::write_json(ctx.path("eos_coefficients.json"), doc);
  std::cout << "eos: " << rows.size() << " isotherm points\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Work statistics and thermodynamics of 1-D contact-interacting gases"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_dir = "out";
  int threads = 1;
  double hbar = 1.0;
  app.add_option("--config", "Flat key = value file; command-line flags override it");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--hbar", hbar, "Reduced Planck constant")->check(CLI::PositiveNumber);

  RingSpectrumArgs ra;
  auto* ring_cmd = app.add_subcommand("ring-spectrum", "Bethe-ansatz spectrum on a ring");
  ring_cmd->add_option("--n", ra.n, "Particle number")->check(CLI::Range(1, 64));
  ring_cmd->add_option("--lambda", ra.length, "Circumference")->check(CLI::PositiveNumber);
  ring_cmd->add_option("--c", ra.coupling, "Coupling (number or inf)");
  ring_cmd->add_option("--imax", ra.i_max, "Largest |I| enumerated")->check(CLI::NonNegativeNumber);
  ring_cmd->add_option("--beta", ra.beta, "Inverse temperature for the tail bound")->check(CLI::PositiveNumber);

  BoxSpectrumArgs ba;
  auto* box_cmd = app.add_subcommand("box-spectrum", "Galerkin spectrum of two particles in a box");
  box_cmd->add_option("--lambda", ba.length, "Box width")->check(CLI::PositiveNumber);
  box_cmd->add_option("--alpha", ba.alpha, "Dimensionless coupling lambda C / (2 hbar^2)");
  box_cmd->add_option("--c", ba.coupling, "Coupling (overrides --alpha)");
  box_cmd->add_option("--m", ba.cutoff, "Single-mode cutoff")->check(CLI::Range(2, 200));
  box_cmd->add_option("--states", ba.states, "Rows written");

  Fig1Args fa;
  auto* fig1_cmd = app.add_subcommand("fig1", "Spatial and momentum densities, bosons and fermionized");
  fig1_cmd->add_option("--alpha", fa.alpha, "Dimensionless coupling");
  fig1_cmd->add_option("--lambda", fa.length, "Box width")->check(CLI::PositiveNumber);
  fig1_cmd->add_option("--m", fa.cutoff, "Single-mode cutoff")->check(CLI::Range(2, 200));
  fig1_cmd->add_option("--points", fa.points, "Spatial grid points per axis");
  fig1_cmd->add_option("--k-max", fa.k_max, "Momentum window half-width");
  fig1_cmd->add_option("--k-points", fa.k_points, "Momentum grid points per axis");

  WorkArgs wa;
  auto* work_cmd = app.add_subcommand("work", "Two-point-measurement work distribution");
  work_cmd->add_option("--geometry", wa.geometry, "ring or box");
  work_cmd->add_option("--protocol", wa.protocol, "adiabatic, sudden-wall, sudden-coupling or ramp");
  work_cmd->add_option("--n", wa.n, "Particle number")->check(CLI::Range(1, 64));
  work_cmd->add_option("--c", wa.coupling, "Coupling (initial coupling for sudden-coupling)");
  work_cmd->add_option("--c-final", wa.final_coupling, "Final coupling for sudden-coupling");
  work_cmd->add_option("--lambda-i", wa.initial_length, "Initial length")->check(CLI::PositiveNumber);
  work_cmd->add_option("--lambda-f", wa.final_length, "Final length")->check(CLI::PositiveNumber);
  work_cmd->add_option("--speed", wa.speed, "Wall speed for ramp");
  work_cmd->add_option("--duration", wa.duration, "Ramp duration")->check(CLI::PositiveNumber);
  work_cmd->add_option("--beta", wa.beta, "Inverse temperature")->check(CLI::PositiveNumber);
  work_cmd->add_option("--m", wa.cutoff, "Box single-mode cutoff")->check(CLI::Range(2, 200));
  work_cmd->add_option("--final-m", wa.final_cutoff, "Final cutoff for sudden-wall (0: scaled)");
  work_cmd->add_option("--imax", wa.i_max, "Ring label cutoff (0: automatic)");
  work_cmd->add_option("--tail-tol", wa.tail_tolerance, "Relative Boltzmann tail tolerance")->check(CLI::PositiveNumber);
  work_cmd->add_option("--weight-cut", wa.weight_cut, "Skip initial states with smaller weight");
  work_cmd->add_option("--tracked", wa.tracked, "Ramp: states under step-error control (0: all)");
  work_cmd->add_option("--step-tol", wa.step_tolerance, "Ramp: local step tolerance")->check(CLI::PositiveNumber);

  Fig2Args ga;
  auto* fig2_cmd = app.add_subcommand("fig2", "Work distributions across couplings and temperatures");
  fig2_cmd->add_option("--c-list", ga.couplings, "Comma-separated couplings");
  fig2_cmd->add_option("--beta-list", ga.betas, "Comma-separated inverse temperatures");
  fig2_cmd->add_option("--protocol", ga.protocol, "ramp or adiabatic");
  fig2_cmd->add_option("--lambda", ga.length, "Initial width")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--speed", ga.speed, "Wall speed");
  fig2_cmd->add_option("--duration", ga.duration, "Ramp duration")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--m", ga.cutoff, "Single-mode cutoff")->check(CLI::Range(2, 200));
  fig2_cmd->add_option("--weight-cut", ga.weight_cut, "Skip initial states with smaller weight (breaks Jarzynski)");
  fig2_cmd->add_option("--track-weight", ga.track_weight, "Step error is controlled on states above this weight");
  fig2_cmd->add_option("--step-tol", ga.step_tolerance, "Local step tolerance")->check(CLI::PositiveNumber);

  DualityArgs da;
  auto* dual_cmd = app.add_subcommand("duality-check", "Bosons at large alpha against free fermions");
  dual_cmd->add_option("--alpha", da.alpha, "Dimensionless coupling")->check(CLI::PositiveNumber);
  dual_cmd->add_option("--beta", da.beta, "Inverse temperature")->check(CLI::PositiveNumber);
  dual_cmd->add_option("--protocol", da.protocol, "adiabatic or sudden-wall");
  dual_cmd->add_option("--lambda-i", da.initial_length, "Initial width")->check(CLI::PositiveNumber);
  dual_cmd->add_option("--lambda-f", da.final_length, "Final width")->check(CLI::PositiveNumber);
  dual_cmd->add_option("--m", da.cutoff, "Single-mode cutoff")->check(CLI::Range(2, 200));
  dual_cmd->add_option("--final-m", da.final_cutoff, "Final cutoff for sudden-wall");
  dual_cmd->add_option("--resolution", da.resolution, "Work resolution as a fraction of <|W|>");
  dual_cmd->add_option("--reference-factor", da.reference_factor, "Free-fermion final mode factor");

  ConvergenceArgs ca;
  auto* conv_cmd = app.add_subcommand("convergence", "Ring adiabatic work across couplings and temperatures");
  conv_cmd->add_option("--n", ca.n, "Particle number")->check(CLI::Range(1, 8));
  conv_cmd->add_option("--lambda-i", ca.initial_length, "Initial circumference")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--lambda-f", ca.final_length, "Final circumference")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--c-list", ca.couplings, "Comma-separated couplings");
  conv_cmd->add_option("--beta-list", ca.betas, "Comma-separated inverse temperatures");
  conv_cmd->add_option("--tail-tol", ca.tail_tolerance, "Relative Boltzmann tail tolerance")->check(CLI::PositiveNumber);

  EosArgs ea;
  auto* eos_cmd = app.add_subcommand("eos", "Yang-Yang isotherm and virial coefficients");
  eos_cmd->add_option("--beta", ea.beta, "Inverse temperature")->check(CLI::PositiveNumber);
  eos_cmd->add_option("--c", ea.coupling, "Coupling (number or inf)");
  eos_cmd->add_option("--mu-min", ea.mu_min, "Lowest chemical potential");
  eos_cmd->add_option("--mu-max", ea.mu_max, "Highest chemical potential");
  eos_cmd->add_option("--mu-points", ea.mu_points, "Number of mu values");
  eos_cmd->add_option("--reading", ea.reading, "Second coefficient reading: q or k");
  eos_cmd->add_option("--hbar-sweep", ea.hbar_sweep, "Comma-separated hbar values for the virial ratio");
  eos_cmd->add_option("--density", ea.density, "Density for the hbar sweep")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args = expand_arguments(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes vectors from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Context ctx{out_dir, hbar, {}, cmd->get_name()};
  ctx.config.emplace_back("hbar", num(hbar));
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string name = opt->get_name();
    name.erase(0, name.find_first_not_of('-'));
    ctx.config.emplace_back(name, opt->count() > 0 ? opt->results().back() : opt->get_default_str());
  }

  try {
    set_thread_count(threads);
    io::ensure_directory(ctx.out_dir);
    const std::string& name = ctx.command;
    if (name == "ring-spectrum") run_ring_spectrum(ctx, ra);
    else if (name == "box-spectrum") run_box_spectrum(ctx, ba);
    else if (name == "fig1") run_fig1(ctx, fa);
    else if (name == "work") run_work(ctx, wa);
    else if (name == "fig2") run_fig2(ctx, ga);
    else if (name == "duality-check") run_duality(ctx, da);
    else if (name == "convergence") run_convergence(ctx, ca);
    else if (name == "eos") run_eos(ctx, ea);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const PairingError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
