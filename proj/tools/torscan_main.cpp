// torscan: homology over R and finite fields, torsion verdicts, pipeline
// emulation and norm-bound sweeps for simplicial complexes, with seeded,
// byte-reproducible JSON output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torscan/report_json.hpp"
#include "torscan/torscan.hpp"

namespace {

using torscan::Json;

struct CommonOpts {
  std::string input_path;
  std::string space;
  std::string output_path;
  int order = -1;  // -1: all valid orders
  std::vector<std::int64_t> primes;
  std::string method = "exact";
  int s = 0;
  int t = 0;
  double delta = 0.05;
  double epsilon = 0.45;
  std::string noise = "none";
  std::uint64_t seed = 0;
  bool json = false;
  bool with_oracle = false;
};

void add_input_flags(CLI::App* cmd, CommonOpts& o) {
  auto* input = cmd->add_option("-i,--input", o.input_path,
                                "facet file (see README for the format)");
  auto* space = cmd->add_option("--space", o.space,
                                "built-in space: sphere2|sphere3|torus|rp2|klein");
  input->excludes(space);
  space->excludes(input);
}

torscan::SimplicialComplex load_complex(const CommonOpts& o) {
  if (!o.space.empty()) return torscan::make_space(o.space);
  if (o.input_path.empty())
    throw torscan::UsageError("exactly one of --input or --space is required");
  std::ifstream in(o.input_path);
  if (!in) throw torscan::UsageError("cannot open input: " + o.input_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return torscan::parse_complex(buf.str());
}

std::string input_label(const CommonOpts& o) {
  return o.space.empty() ? o.input_path : o.space;
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output_path, std::ios::binary);
  if (!out) throw torscan::UsageError("cannot open output: " + o.output_path);
  out << text;
}

void emit_json(const CommonOpts& o, const Json& j) {
  emit(o, j.dump(2) + "\n");
}

std::vector<std::int64_t> checked_primes(const std::vector<std::int64_t>& ps) {
  if (ps.empty()) throw torscan::UsageError("--primes must list at least one prime");
  for (std::int64_t p : ps)
    if (!torscan::is_prime(p))
      throw torscan::UsageError("--primes: " + std::to_string(p) + " is not prime");
  return ps;
}

std::vector<int> orders_to_run(const torscan::SimplicialComplex& k, int order,
                               int lowest) {
  std::vector<int> out;
  if (order >= 0) {
    out.push_back(order);
  } else {
    for (int r = lowest; r <= k.dim(); ++r) out.push_back(r);
  }
  return out;
}

torscan::NoiseModel parse_noise(const std::string& name) {
  if (name == "none") return torscan::NoiseModel::none;
  if (name == "uniform") return torscan::NoiseModel::uniform;
  if (name == "gaussian") return torscan::NoiseModel::gaussian_clipped;
  throw torscan::UsageError("--noise must be none|uniform|gaussian");
}

std::string torsion_to_string(const std::vector<std::int64_t>& factors) {
  std::string s = "[";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(factors[i]);
  }
  return s + "]";
}

// --- subcommands -----------------------------------------------------------

int run_gen(const CommonOpts& o) {
  if (o.space.empty())
    throw torscan::UsageError("gen requires --space");
  emit(o, torscan::serialize(torscan::make_space(o.space)));
  return 0;
}

int run_homology(const CommonOpts& o) {
  const auto k = load_complex(o);
  const auto orders = orders_to_run(k, o.order, 0);
  if (o.json) {
    Json out{{"command", "homology"}, {"input", input_label(o)}};
    Json rows = Json::array();
    for (int r : orders) {
      Json row = torscan::to_json(torscan::homology_over_Z(k, r));
      row["order"] = r;
      rows.push_back(row);
    }
    out["orders"] = rows;
    emit_json(o, out);
    return 0;
  }
  std::ostringstream text;
  for (int r : orders) {
    const auto h = torscan::homology_over_Z(k, r);
    if (o.order < 0) text << "r=" << r << " ";
    text << "betti=" << h.betti << " torsion=" << torsion_to_string(h.torsion_factors)
         << "\n";
  }
  emit(o, text.str());
  return 0;
}

Json rank_result_json(const torscan::RankEstimate& est, std::uint64_t seed) {
  const bool integral =
      est.method != torscan::RankMethod::stochastic_chebyshev;
  Json j = integral
               ? torscan::tagged_number(est.as_rank(),
                                        torscan::rank_method_name(est.method),
                                        seed)
               : torscan::tagged_number(est.value,
                                        torscan::rank_method_name(est.method),
                                        seed);
  if (est.method == torscan::RankMethod::sketch_ff ||
      est.method == torscan::RankMethod::emulated_pipeline) {
    j["s"] = est.sketch.s;
    j["t"] = est.sketch.t;
  }
  if (est.method == torscan::RankMethod::stochastic_chebyshev) {
    j["s"] = est.cheb.s;
    j["m"] = est.cheb.m;
    j["theta"] = est.cheb.theta;
  }
  return j;
}

int run_rank(const CommonOpts& o, const std::string& op_name, int cheb_m,
             double theta) {
  const auto k = load_complex(o);
  if (o.order < 0) throw torscan::UsageError("rank requires --order");
  const int r = o.order;

  auto operand = [&]() -> torscan::IntMatrix {
    if (op_name == "boundary") return torscan::boundary_matrix(k, r);
    if (op_name == "laplacian") return torscan::laplacian(k, r);
    throw torscan::UsageError("--operator must be boundary|laplacian");
  };
  const torscan::IntMatrix a = operand();

  Json results = Json::array();
  std::ostringstream text;

  if (o.method == "exact" || o.method == "sketch") {
    if (o.method == "sketch" && o.primes.empty())
      throw torscan::UsageError("rank --method sketch needs --primes");
    if (o.primes.empty()) {
      const std::int64_t rank = torscan::rank_exact_rational(a);
      results.push_back(Json{{"field", "R"},
                             {"rank", torscan::tagged_number(
                                          rank, "exact_rational", o.seed)}});
      text << "field=R rank=" << rank << " method=exact_rational\n";
    }
    for (std::int64_t p :
         o.primes.empty() ? std::vector<std::int64_t>{} : checked_primes(o.primes)) {
      const torscan::FpMatrix am = torscan::mod_reduce(a, p);
      torscan::RankEstimate est;
      if (o.method == "exact") {
        est.value = static_cast<double>(torscan::rank_ff(am));
        est.method = torscan::RankMethod::exact_ff;
        est.prime = p;
      } else if (o.s >= 1 && o.t >= 1) {
        torscan::SketchParams params;
        params.s = o.s;
        params.t = o.t;
        params.delta = o.delta;
        params.seed = o.seed;
        est = torscan::sketch_rank_ff(am, params);
      } else {
        est = torscan::sketch_rank_ff_adaptive(am, o.delta, o.seed);
      }
      Json row{{"field", "F_" + std::to_string(p)}, {"p", p}};
      row["rank"] = rank_result_json(est, o.seed);
      results.push_back(row);
      text << "field=F_" << p << " rank=" << est.as_rank()
           << " method=" << torscan::rank_method_name(est.method) << "\n";
    }
  } else if (o.method == "stochastic") {
    if (!o.primes.empty())
      throw torscan::UsageError("stochastic rank estimation works over R only");
    if (!a.is_symmetric())
      throw torscan::UsageError(
          "stochastic rank needs a symmetric operator; use --operator laplacian");
    const double kappa = torscan::condition_number(a);
    Eigen::MatrixXd scaled = a.to_real();
    double sigma_max = 0.0;
    if (!a.is_zero()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scaled);
      sigma_max = std::max(std::abs(solver.eigenvalues().minCoeff()),
                           std::abs(solver.eigenvalues().maxCoeff()));
    }
    if (sigma_max > 0.0) scaled /= sigma_max;
    torscan::ChebParams params;
    params.s = o.s >= 1 ? o.s : 400;
    params.m = cheb_m;
    params.theta = theta > 0.0 ? theta : 1.0 / (2.0 * kappa);
    params.seed = o.seed;
    const torscan::RankEstimate est = torscan::stochastic_rank_real(scaled, params);
    Json row{{"field", "R"},
             {"rank", rank_result_json(est, o.seed)},
             {"normalized", est.value / static_cast<double>(a.rows() ? a.rows() : 1)},
             {"sigma_max", sigma_max},
             {"kappa", kappa}};
    results.push_back(row);
    text << "field=R rank~=" << est.value
         << " method=stochastic_chebyshev theta=" << params.theta << "\n";
  } else {
    throw torscan::UsageError("rank --method must be exact|sketch|stochastic");
  }

  if (o.json) {
    emit_json(o, Json{{"command", "rank"},
                      {"input", input_label(o)},
                      {"order", r},
                      {"operator", op_name},
                      {"method", o.method},
                      {"seed", o.seed},
                      {"results", results}});
  } else {
    emit(o, text.str());
  }
  return 0;
}

int run_detect(const CommonOpts& o) {
  const auto k = load_complex(o);
  const auto primes = checked_primes(
      o.primes.empty() ? std::vector<std::int64_t>{2, 3, 5, 7} : o.primes);

  torscan::DetectMethod method;
  if (o.method == "exact") method = torscan::DetectMethod::exact;
  else if (o.method == "sketch") method = torscan::DetectMethod::sketch;
  else if (o.method == "emulate") method = torscan::DetectMethod::emulate;
  else throw torscan::UsageError("detect --method must be exact|sketch|emulate");

  torscan::SketchParams params;
  params.s = o.s;
  params.t = o.t;
  params.delta = o.delta;
  params.seed = o.seed;
  torscan::EmulatorConfig cfg;
  cfg.epsilon_prime = o.epsilon;
  cfg.noise_model = parse_noise(o.noise);
  cfg.seed = o.seed;

  // the emulated pipeline is defined for r >= 1 only
  const int lowest = method == torscan::DetectMethod::emulate ? 1 : 0;
  const auto orders = orders_to_run(k, o.order, lowest);
  if (orders.empty())
    throw torscan::UsageError(
        "no valid homology orders for this method on the given complex");

  std::vector<torscan::TorsionReport> reports;
  for (int r : orders)
    reports.push_back(torscan::detect_torsion(k, r, primes, method, params, cfg,
                                              o.with_oracle));

  if (o.json) {
    Json rows = Json::array();
    for (const auto& rep : reports) rows.push_back(torscan::to_json(rep));
    emit_json(o, Json{{"command", "detect"},
                      {"input", input_label(o)},
                      {"method", o.method},
                      {"seed", o.seed},
                      {"primes", primes},
                      {"reports", rows}});
  } else {
    std::ostringstream text;
    for (const auto& rep : reports) text << torscan::format_report(rep);
    emit(o, text.str());
  }
  return 0;
}

int run_emulate(const CommonOpts& o, bool oracle_norm) {
  const auto k = load_complex(o);
  const auto primes = checked_primes(o.primes);
  if (o.order < 0) throw torscan::UsageError("emulate requires --order");

  torscan::SketchParams params;
  params.s = o.s;
  params.t = o.t;
  params.delta = o.delta;
  params.seed = o.seed;
  torscan::EmulatorConfig cfg;
  cfg.epsilon_prime = o.epsilon;
  cfg.noise_model = parse_noise(o.noise);
  cfg.normalization_mode = oracle_norm ? torscan::NormalizationMode::oracle
                                       : torscan::NormalizationMode::non_oracle;
  cfg.seed = o.seed;

  Json traces = Json::array();
  std::ostringstream text;
  for (std::int64_t p : primes) {
    const auto [est, trace] = torscan::emulate_detection(k, o.order, p, params, cfg);
    traces.push_back(torscan::to_json(trace));
    text << "p=" << p << " rank=" << trace.rank << " kappa=" << trace.kappa
         << " factor=" << trace.normalization_factor << " C=" << trace.C
         << " s=" << trace.s << " t=" << trace.t << " seed=" << trace.seed
         << "\n";
  }

  if (o.json) {
    emit_json(o, Json{{"command", "emulate"},
                      {"input", input_label(o)},
                      {"order", o.order},
                      {"seed", o.seed},
                      {"traces", traces}});
  } else {
    emit(o, text.str());
  }
  return 0;
}

int run_bounds(const CommonOpts& o, std::vector<std::int64_t> ns, int quantiles,
               std::int64_t trials) {
  const auto primes = checked_primes(o.primes);
  for (std::int64_t p : primes)
    if (p == 2)
      throw torscan::UsageError("bounds needs odd primes (balanced moments)");
  const auto rows = torscan::bound_sweep(ns, primes, quantiles, trials, o.seed);
  if (o.json) {
    Json arr = Json::array();
    for (const auto& row : rows) arr.push_back(torscan::to_json(row));
    emit_json(o, Json{{"command", "bounds"}, {"seed", o.seed}, {"rows", arr}});
  } else {
    emit(o, torscan::bound_sweep_csv(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsion detection for simplicial complexes over R and F_p"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string op_name = "laplacian";
  int cheb_m = 64;
  double theta = 0.0;  // 0: derive from the condition number
  bool oracle_norm = false;
  std::vector<std::int64_t> bound_ns{8, 32, 128};
  int quantiles = 9;
  std::int64_t trials = 100'000;

  auto* gen = app.add_subcommand("gen", "emit a built-in triangulation as a facet file");
  gen->add_option("--space", o.space, "sphere2|sphere3|torus|rp2|klein")->required();
  gen->add_option("-o,--output", o.output_path, "output path (default stdout)");

  auto* homology = app.add_subcommand("homology", "integral homology via Smith normal form");
  add_input_flags(homology, o);
  homology->add_option("-r,--order", o.order, "homology order (default: all)");
  homology->add_option("-o,--output", o.output_path, "output path");
  homology->add_flag("--json", o.json, "machine-readable output");

  auto* rank = app.add_subcommand("rank", "rank of a boundary operator or Laplacian");
  add_input_flags(rank, o);
  rank->add_option("-r,--order", o.order, "operator order")->required();
  rank->add_option("--operator", op_name, "boundary|laplacian (default laplacian)");
  rank->add_option("--method", o.method, "exact|sketch|stochastic");
  rank->add_option("--primes", o.primes, "comma-separated primes for F_p ranks")
      ->delimiter(',');
  rank->add_option("--s", o.s, "sketch/probe count");
  rank->add_option("--t", o.t, "right sketch size");
  rank->add_option("--delta", o.delta, "sketch failure probability target");
  rank->add_option("--m", cheb_m, "polynomial degree (stochastic)");
  rank->add_option("--theta", theta, "step threshold (stochastic)");
  rank->add_option("--seed", o.seed, "rng seed");
  rank->add_option("-o,--output", o.output_path, "output path");
  rank->add_flag("--json", o.json, "machine-readable output");

  auto* detect = app.add_subcommand("detect", "field sweep and torsion verdict");
  add_input_flags(detect, o);
  detect->add_option("-r,--order", o.order, "homology order (default: scan all)");
  detect->add_option("--primes", o.primes,
                     "comma-separated primes (default 2,3,5,7)")
      ->delimiter(',');
  detect->add_option("--method", o.method, "exact|sketch|emulate");
  detect->add_option("--s", o.s, "sketch size (0: adaptive)");
  detect->add_option("--t", o.t, "sketch size (0: adaptive)");
  detect->add_option("--delta", o.delta, "failure probability target");
  detect->add_option("--epsilon", o.epsilon, "recovered-entry precision budget");
  detect->add_option("--noise", o.noise, "none|uniform|gaussian");
  detect->add_option("--seed", o.seed, "rng seed");
  detect->add_flag("--oracle", o.with_oracle, "attach integral homology");
  detect->add_option("-o,--output", o.output_path, "output path");
  detect->add_flag("--json", o.json, "machine-readable output");

  auto* emulate = app.add_subcommand("emulate", "run the emulated detection pipeline, dump the trace");
  add_input_flags(emulate, o);
  emulate->add_option("-r,--order", o.order, "homology order")->required();
  emulate->add_option("--primes", o.primes, "comma-separated primes")
      ->delimiter(',')->required();
  emulate->add_option("--s", o.s, "sketch size (0: adaptive)");
  emulate->add_option("--t", o.t, "sketch size (0: adaptive)");
  emulate->add_option("--delta", o.delta, "failure probability target");
  emulate->add_option("--epsilon", o.epsilon, "recovered-entry precision budget");
  emulate->add_option("--noise", o.noise, "none|uniform|gaussian");
  emulate->add_flag("--oracle-model", oracle_norm,
                    "use the oracle-input normalization 2N(r+1)(r+2)");
  emulate->add_option("--seed", o.seed, "rng seed");
  emulate->add_option("-o,--output", o.output_path, "output path");
  emulate->add_flag("--json", o.json, "machine-readable output");

  auto* bounds = app.add_subcommand("bounds", "norm-bound sweep: closed forms vs Monte Carlo");
  bounds->add_option("--n", bound_ns, "vector dimensions")->delimiter(',');
  bounds->add_option("--primes", o.primes, "odd primes")->delimiter(',');
  bounds->add_option("--quantiles", quantiles, "S grid size per (N,p)");
  bounds->add_option("--trials", trials, "Monte Carlo samples per (N,p)");
  bounds->add_option("--seed", o.seed, "rng seed");
  bounds->add_option("-o,--output", o.output_path, "output path");
  bounds->add_flag("--json", o.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(o);
    if (homology->parsed()) return run_homology(o);
    if (rank->parsed()) return run_rank(o, op_name, cheb_m, theta);
    if (detect->parsed()) return run_detect(o);
    if (emulate->parsed()) return run_emulate(o, oracle_norm);
    if (bounds->parsed()) {
      if (o.primes.empty()) o.primes = {3, 5, 7};
      return run_bounds(o, bound_ns, quantiles, trials);
    }
    return 2;
  } catch (const torscan::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const torscan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
