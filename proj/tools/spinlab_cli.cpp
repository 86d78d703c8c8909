// Copyright 2026 The spinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spinlab command-line front end.
//
//   spinlab_cli scaling  --n-sites 6 --alpha 1 --t 1 --deltas 50,100,200,400 --pattern abab
//   spinlab_cli gate     --alpha 0 --synthesize-cnot-uses 2
//   spinlab_cli smooth   --profile cos2
//   spinlab_cli geometry --lattice hex --commensurate-k 3
//
// Exit codes: 0 ok, 2 slope outside [0.85, 1.15], 3 CNOT synthesis did not converge,
// 4 no revival window, 64 usage error, 65 malformed graph input, 1 anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "spinlab/spinlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinlab;

namespace {

constexpr int kExitSlope = 2;
constexpr int kExitSynthesis = 3;
constexpr int kExitNoWindow = 4;
constexpr int kExitUsage = 64;
constexpr int kExitBadGraph = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json makhlin_json(const MakhlinInvariants& m) {
  return {{"g1", {m.g1.real(), m.g1.imag()}}, {"g2", m.g2}};
}

// ---------------------------------------------------------------- scaling

struct ScalingArgs {
  int n_sites = 6;
  double alpha = 1.0;
  double t = 1.0;
  std::vector<double> deltas{50, 100, 200, 400};
  std::string pattern = "abab";
  std::string topology = "ring";
  std::string norm = "frobenius";
  std::string out_dir = "out/scaling";
};

int run_scaling(const ScalingArgs& a) {
  if (a.deltas.size() < 3) throw UsageError("--deltas needs at least 3 values");
  const PatternKind pattern = a.pattern == "abab" ? PatternKind::abab : PatternKind::abcabc;
  SweepOptions opt;
  opt.topology = topology_from_string(a.topology);
  opt.norm = a.norm == "spectral" ? ResidualNorm::spectral : ResidualNorm::frobenius;

  io::RunManifest manifest("scaling", {{"n_sites", a.n_sites}, {"alpha", a.alpha}, {"t", a.t}, {"deltas", a.deltas},
                                       {"pattern", a.pattern}, {"topology", a.topology}, {"norm", a.norm}});
  ResidualReport rep;
  try {
    rep = scaling_sweep(pattern, a.deltas, a.t, a.n_sites, a.alpha, opt);
  } catch (const PrecisionFloorError& e) {
    std::cerr << e.what() << "\n";
    manifest.set_result({{"error", e.what()}});
    manifest.write(a.out_dir);
    return kExitSlope;
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }

  io::CsvTable csv({"delta", "big_delta", "residual_norm"});
  for (std::size_t k = 0; k < rep.deltas.size(); ++k) csv.add_row({rep.deltas[k], a.deltas[k], rep.norms[k]});
  const fs::path out = fs::path(a.out_dir) / "scaling.csv";
  csv.write(out);
  manifest.add_output(out);

  const bool ok = rep.fitted_slope >= 0.85 && rep.fitted_slope <= 1.15;
  manifest.set_result({{"fitted_slope", rep.fitted_slope}, {"slope_in_range", ok}});
  manifest.write(a.out_dir);
  std::printf("fitted slope %s (%s)\n", io::format_double(rep.fitted_slope).c_str(), ok ? "within [0.85, 1.15]" : "out of range");
  return ok ? 0 : kExitSlope;
}

// ---------------------------------------------------------------- gate

struct GateArgs {
  double alpha = 0.0;
  double j_xy = 1.0;
  std::string frame = "passive";
  int uses = 0;
  std::uint64_t seed = SynthesisOptions{}.seed;
  int restarts = SynthesisOptions{}.restarts;
  std::string out_dir = "out/gate";
};

int run_gate(const GateArgs& a) {
  if (a.uses < 0 || a.uses > 4) throw UsageError("--synthesize-cnot-uses must be in 0..4");
  if (a.alpha < 0.0 || !(a.j_xy > 0.0)) throw UsageError("--alpha must be >= 0 and --j-xy > 0");
  const Frame frame = frame_from_string(a.frame);
  const double j_z = a.alpha * a.j_xy;

  io::RunManifest manifest("gate", {{"alpha", a.alpha}, {"j_xy", a.j_xy}, {"frame", a.frame},
                                    {"synthesize_cnot_uses", a.uses}, {"restarts", a.restarts}});
  manifest.set_seed(a.seed);

  const auto sim = primitive_gate_numeric(a.j_xy, j_z);
  const TwoQubitGate& gate = frame == Frame::raw ? sim.raw : sim.passive;
  json g = gate_to_json(gate);
  g["metadata"] = {{"alpha", a.alpha},
                   {"j_xy", a.j_xy},
                   {"j_z", j_z},
                   {"t_R", sim.revival_time},
                   {"phi", primitive_phase(a.j_xy, j_z)},
                   {"barrier_up_probability", sim.barrier_up_probability},
                   {"makhlin", makhlin_json(makhlin(gate))},
                   {"entangling", is_entangling(gate)}};
  g["analytic"] = gate_to_json(primitive_gate_analytic(a.j_xy, j_z));
  const fs::path gate_path = fs::path(a.out_dir) / "gate.json";
  io::write_json(gate_path, g);
  manifest.add_output(gate_path);
  std::printf("t_R = %s\n", io::format_double(sim.revival_time).c_str());

  int code = 0;
  if (a.uses > 0) {
    SynthesisOptions opt;
    opt.seed = a.seed;
    opt.restarts = a.restarts;
    const auto res = synthesize_cnot(gate, a.uses, opt);
    json c = circuit_to_json(res.circuit);
    c["target"] = "CNOT";
    c["primitive_frame"] = to_string(gate.frame());
    c["uses"] = a.uses;
    c["distance"] = res.distance;
    c["converged"] = res.converged;
    c["tolerance"] = opt.tolerance;
    c["best_restart"] = res.best_restart;
    c["seed"] = a.seed;
    const fs::path circuit_path = fs::path(a.out_dir) / "circuit.json";
    io::write_json(circuit_path, c);
    manifest.add_output(circuit_path);
    std::printf("CNOT with %d uses: distance %s (%s)\n", a.uses, io::format_double(res.distance).c_str(),
                res.converged ? "converged" : "not converged");
    manifest.set_result({{"distance", res.distance}, {"converged", res.converged}});
    if (!res.converged) code = kExitSynthesis;
  }
  manifest.write(a.out_dir);
  return code;
}

// ---------------------------------------------------------------- smooth

struct SmoothArgs {
  std::string profile = "cos2";
  double t_delta = 1.25;
  double alpha = 0.7;
  double passive_detuning = 100.0;
  double dt = 1e-3;
  std::string out_dir = "out/smooth";
};

int run_smooth(const SmoothArgs& a) {
  const ProfileKind kind = profile_kind_from_string(a.profile);
  if (!(a.t_delta > 0.0) || !(a.passive_detuning > 0.0) || !(a.dt > 0.0) || a.alpha < 0.0) {
    throw UsageError("--t-delta, --passive-detuning and --dt must be positive, --alpha >= 0");
  }
  io::RunManifest manifest("smooth", {{"profile", a.profile}, {"t_delta", a.t_delta}, {"alpha", a.alpha},
                                      {"passive_detuning", a.passive_detuning}, {"dt", a.dt}});
  const SwitchSystem sys{1.0, a.alpha, a.alpha};
  SearchOptions opt;
  opt.t_delta = a.t_delta;
  opt.passive_detuning = a.passive_detuning;
  opt.integrator.dt = a.dt;

  RevivalSearchResult res;
  try {
    res = search_flat_duration(sys, kind, opt);
  } catch (const NoRevivalWindowError& e) {
    std::cerr << e.what() << "\n";
    manifest.set_result({{"error", e.what()}});
    manifest.write(a.out_dir);
    return kExitNoWindow;
  }

  const fs::path dir(a.out_dir);
  io::CsvTable trace({"flat_duration", "revival_error"});
  for (const auto& [d, e] : res.trace) trace.add_row({d, e});
  trace.write(dir / "smooth_trace.csv");
  manifest.add_output(dir / "smooth_trace.csv");

  json r{{"profile", a.profile},
         {"optimal_flat_duration", res.optimal_flat_duration},
         {"revival_error", res.revival_error},
         {"closure_defect", res.closure_defect},
         {"entangling", is_entangling(res.resulting_gate)},
         {"dt_used", res.dt_used},
         {"t_R", revival_time(1.0, a.alpha)},
         {"gate", gate_to_json(res.resulting_gate)},
         {"makhlin", makhlin_json(makhlin(res.resulting_gate))}};
  io::write_json(dir / "smooth_result.json", r);
  manifest.add_output(dir / "smooth_result.json");

  // Plot: barrier Zeeman profile and <sigma^Z> of the barrier for each input.
  SwitchProfile prof{kind, 0.0, a.t_delta, res.optimal_flat_duration, a.passive_detuning, sys.resonant_value()};
  IntegratorConfig cfg;
  cfg.dt = res.dt_used;
  io::SvgPanel energy{"barrier Zeeman energy", {}};
  io::SvgPanel sz{"barrier <sigma^Z>", {}};
  const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  const char* labels[] = {"|00>", "|01>", "|10>", "|11>"};
  for (int input = 0; input < 4; ++input) {
    const auto traj = barrier_trajectory(sys, prof, input, cfg);
    io::Series s{labels[input], colours[input], {}};
    const std::size_t stride = std::max<std::size_t>(1, traj.size() / 800);
    for (std::size_t k = 0; k < traj.size(); k += stride) s.points.emplace_back(traj[k].t, traj[k].barrier_sz);
    if (input == 0) {
      io::Series e{"epsilon(t)", "#333333", {}};
      for (std::size_t k = 0; k < traj.size(); k += stride) e.points.emplace_back(traj[k].t, traj[k].barrier_zeeman);
      energy.series.push_back(std::move(e));
    }
    sz.series.push_back(std::move(s));
  }
  io::write_text(dir / "smooth.svg", io::svg_plot(a.profile + " switching, flat " +
                                                     io::format_double(res.optimal_flat_duration).substr(0, 8),
                                                 "t (units of hbar/J_XY)", {energy, sz}));
  manifest.add_output(dir / "smooth.svg");
  manifest.set_result({{"revival_error", res.revival_error}, {"optimal_flat_duration", res.optimal_flat_duration}});
  manifest.write(dir);
  std::printf("flat duration %s, revival error %s\n", io::format_double(res.optimal_flat_duration).c_str(),
              io::format_double(res.revival_error).c_str());
  return 0;
}

// ---------------------------------------------------------------- geometry

struct GeometryArgs {
  std::string lattice = "chain";
  std::string graph_file;
  int size = 3;
  int commensurate_k = 0;
  double alpha = 1.0;
  std::vector<double> detuning_range{-10.0, 10.0};
  double step = 0.01;
  double tolerance = 1e-6;
  std::string out_dir = "out/geometry";
};

SpinGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read graph file '" + path + "'");
  const json j = json::parse(in);  // parse errors surface as malformed input
  return graph_from_json(j);
}

int run_geometry(const GeometryArgs& a) {
  if (a.detuning_range.size() != 2 || !(a.detuning_range[1] >= a.detuning_range[0]) || !(a.step > 0.0)) {
    throw UsageError("--detuning-range needs lo,hi with lo <= hi and --step > 0");
  }
  if (a.commensurate_k != 0 && (a.commensurate_k < 2 || a.commensurate_k > 4)) {
    throw UsageError("--commensurate-k must be 2, 3 or 4");
  }
  io::RunManifest manifest("geometry", {{"lattice", a.lattice}, {"graph", a.graph_file}, {"size", a.size},
                                        {"commensurate_k", a.commensurate_k}, {"alpha", a.alpha},
                                        {"detuning_range", a.detuning_range}, {"step", a.step},
                                        {"tolerance", a.tolerance}});
  SpinGraph g;
  if (a.lattice == "chain") {
    g = lattices::chain(static_cast<std::size_t>(std::max(3, 2 * a.size)));
  } else if (a.lattice == "hex") {
    g = lattices::hex(static_cast<std::size_t>(a.size));
  } else if (a.lattice == "hex-complement") {
    g = lattices::hex_complement(static_cast<std::size_t>(a.size));
  } else {
    if (a.graph_file.empty()) throw UsageError("--lattice custom-json needs --graph FILE");
    try {
      g = load_graph(a.graph_file);
    } catch (const json::exception& e) {
      std::cerr << "malformed graph: " << e.what() << "\n";
      return kExitBadGraph;
    } catch (const ContractError& e) {
      std::cerr << "malformed graph: " << e.what() << "\n";
      return kExitBadGraph;
    }
    if (g.empty()) {
      std::cerr << "malformed graph: no nodes\n";
      return kExitBadGraph;
    }
  }

  const fs::path dir(a.out_dir);
  io::write_json(dir / "graph.json", graph_to_json(g));
  manifest.add_output(dir / "graph.json");
  const Fraction ratio = r_q(g);
  io::write_json(dir / "r_q.json", {{"lattice", a.lattice},
                                    {"r_q", ratio.str()},
                                    {"value", ratio.value()},
                                    {"qubits", g.count(Role::qubit)},
                                    {"spins", g.size()},
                                    {"qubit_qubit_edges", g.has_qubit_qubit_edge()}});
  manifest.add_output(dir / "r_q.json");
  std::printf("R_Q = %s\n", ratio.str().c_str());
  json result{{"r_q", ratio.str()}};

  if (a.commensurate_k > 0) {
    std::vector<double> grid;
    const long n = std::lround((a.detuning_range[1] - a.detuning_range[0]) / a.step);
    for (long i = 0; i <= n; ++i) grid.push_back(a.detuning_range[0] + static_cast<double>(i) * a.step);
    CommensurateOptions opt;
    opt.tolerance = a.tolerance;
    const auto cands = commensurate_search(a.commensurate_k, 1.0, a.alpha, grid, opt);
    io::CsvTable csv({"detuning", "common_time", "max_error"});
    for (const auto& c : cands) csv.add_row({c.detuning, c.common_time, c.max_error});
    csv.write(dir / "candidates.csv");
    manifest.add_output(dir / "candidates.csv");
    std::printf("%zu commensurate candidate(s)\n", cands.size());
    result["candidates"] = cands.size();
  }
  manifest.set_result(result);
  manifest.write(dir);
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad number '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinlab: always-on anisotropic exchange simulator"};
  app.require_subcommand(1);

  ScalingArgs sa;
  std::string deltas = "50,100,200,400";
  auto* scaling = app.add_subcommand("scaling", "Residual-vs-delta sweep of a far-detuned chain");
  scaling->add_option("--n-sites", sa.n_sites)->check(CLI::Range(2, kDefaultSiteCap));
  scaling->add_option("--alpha", sa.alpha);
  scaling->add_option("--t", sa.t);
  scaling->add_option("--deltas", deltas, "comma-separated base detunings Delta");
  scaling->add_option("--pattern", sa.pattern)->check(CLI::IsMember({"abab", "abcabc"}));
  scaling->add_option("--topology", sa.topology)->check(CLI::IsMember({"ring", "open"}));
  scaling->add_option("--norm", sa.norm)->check(CLI::IsMember({"frobenius", "spectral"}));
  scaling->add_option("--out-dir", sa.out_dir);

  GateArgs ga;
  auto* gate = app.add_subcommand("gate", "Primitive triplet gate and optional CNOT synthesis");
  gate->add_option("--alpha", ga.alpha);
  gate->add_option("--j-xy", ga.j_xy);
  gate->add_option("--frame", ga.frame)->check(CLI::IsMember({"raw", "passive"}));
  gate->add_option("--synthesize-cnot-uses", ga.uses);
  gate->add_option("--seed", ga.seed);
  gate->add_option("--restarts", ga.restarts)->check(CLI::PositiveNumber);
  gate->add_option("--out-dir", ga.out_dir);

  SmoothArgs sm;
  auto* smooth = app.add_subcommand("smooth", "Flat-duration search for smooth barrier switching");
  smooth->add_option("--profile", sm.profile)->check(CLI::IsMember({"abrupt", "cos2", "sin4"}));
  smooth->add_option("--t-delta", sm.t_delta);
  smooth->add_option("--alpha", sm.alpha);
  smooth->add_option("--passive-detuning", sm.passive_detuning);
  smooth->add_option("--dt", sm.dt);
  smooth->add_option("--out-dir", sm.out_dir);

  GeometryArgs ge;
  std::string range = "-10,10";
  auto* geometry = app.add_subcommand("geometry", "Array layouts, R_Q and commensurate-revival search");
  geometry->add_option("--lattice", ge.lattice)->check(CLI::IsMember({"chain", "hex", "hex-complement", "custom-json"}));
  geometry->add_option("--graph", ge.graph_file, "graph JSON for --lattice custom-json");
  geometry->add_option("--size", ge.size)->check(CLI::Range(3, 20));
  geometry->add_option("--commensurate-k", ge.commensurate_k);
  geometry->add_option("--alpha", ge.alpha);
  geometry->add_option("--detuning-range", range, "lo,hi in units of J_XY");
  geometry->add_option("--step", ge.step);
  geometry->add_option("--tolerance", ge.tolerance);
  geometry->add_option("--out-dir", ge.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*scaling) {
      sa.deltas = parse_list(deltas);
      return run_scaling(sa);
    }
    if (*gate) return run_gate(ga);
    if (*smooth) return run_smooth(sm);
    if (*geometry) {
      ge.detuning_range = parse_list(range);
      return run_geometry(ge);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
