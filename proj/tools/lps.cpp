// Command-line front end.
//
//   lps solve      --family F --p P --matrix A.txt --rhs y.txt [...]
//   lps experiment --kind genericity|recovery|perturbation --config c.json --out r.csv
//   lps gen        --m M --n N --seed S [--sparsity s] --out-matrix A.txt --out-rhs y.txt
//   lps rip        --matrix A.txt --order k
//
// Exit codes: 0 success, 1 usage or validation error, 2 numerical
// non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lps/analysis.hpp"
#include "lps/ensembles.hpp"
#include "lps/io.hpp"
#include "lps/solvers.hpp"

namespace {

using nlohmann::json;
using namespace lps;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNotConverged = 2;

struct SolveArgs {
  std::string family;
  std::optional<double> p;
  std::string matrix;
  std::string rhs;
  std::optional<double> lambda, lambda1, lambda2, r, eps, eta, tol;
  std::optional<int> max_iter;
  std::string algorithm = "auto";
  double support_tol = 1e-6;
  std::string out;
};

struct ExperimentArgs {
  std::string kind;
  std::string config;
  std::string out;
  std::optional<int> workers;
  bool omit_timing = false;
};

struct GenArgs {
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  std::optional<Index> sparsity;
  std::string out_matrix;
  std::string out_rhs;
  std::string out_signal;
  std::string out_support;
};

struct RipArgs {
  std::string matrix;
  Index order = 0;
  std::optional<int> workers;
};

void write_manifest(const std::string& path, io::RunManifest m) {
  m.finished = io::utc_timestamp();
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write manifest '" + path + "'");
  out << to_json(m).dump(2) << '\n';
}

int default_workers(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LPS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw Error(ErrorKind::invalid_input, "LPS_WORKERS must be a positive integer");
  }
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  const io::RunManifest base{"solve", "", 0, io::kToolVersion, io::utc_timestamp(), ""};
  solvers::ProblemInstance inst;
  inst.family = solvers::parse_family(a.family);
  if (inst.family == solvers::Family::bp_l1) {
    inst.p = a.p.value_or(1.0);
  } else if (a.p) {
    inst.p = *a.p;
  } else {
    throw Error(ErrorKind::invalid_input, "--p is required for family " + a.family);
  }
  inst.a = io::read_matrix_file(a.matrix);
  inst.y = io::read_vector_file(a.rhs);
  if (a.lambda) inst.params.lambda = *a.lambda;
  if (a.lambda1) inst.params.lambda1 = *a.lambda1;
  if (a.lambda2) inst.params.lambda2 = *a.lambda2;
  if (a.r) inst.params.r = *a.r;
  if (a.eps) inst.params.eps = *a.eps;
  if (a.eta) inst.params.eta = *a.eta;

  solvers::SolverConfig cfg;
  if (a.tol) cfg.kkt_tol = *a.tol;
  if (a.max_iter) cfg.max_iter = *a.max_iter;
  cfg.algorithm = a.algorithm == "auto" ? solvers::Algorithm::automatic
                                        : solvers::parse_algorithm(a.algorithm);
  cfg.validate();

  const solvers::SolveResult res = solvers::solve(inst, cfg);
  const json doc = io::result_document(inst, res, a.support_tol);
  if (a.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream out(a.out);
    if (!out) throw Error(ErrorKind::invalid_input, "cannot write '" + a.out + "'");
    out << doc.dump(2) << '\n';
    io::RunManifest m = base;
    m.config_digest = io::config_digest(json{{"family", a.family},
                                             {"p", inst.p},
                                             {"matrix", a.matrix},
                                             {"rhs", a.rhs},
                                             {"params",
                                              {inst.params.lambda, inst.params.lambda1,
                                               inst.params.lambda2, inst.params.r,
                                               inst.params.eps, inst.params.eta}},
                                             {"kkt_tol", cfg.kkt_tol},
                                             {"max_iter", cfg.max_iter}});
    write_manifest(a.out + ".manifest.json", m);
  }
  if (!res.converged()) {
    std::cerr << "lps: solver did not converge (status " << solvers::to_string(res.status)
              << ", kkt_residual " << io::format_double(res.kkt_residual) << ")\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_experiment(const ExperimentArgs& a) {
  io::RunManifest manifest{"experiment " + a.kind, "", 0, io::kToolVersion, io::utc_timestamp(),
                           ""};
  std::ifstream in(a.config);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open config '" + a.config + "'");
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_input, "config '" + a.config + "' is not valid JSON: " + e.what());
  }
  const int workers = default_workers(a.workers);
  std::ostringstream csv;
  if (a.kind == "genericity" || a.kind == "recovery") {
    const analysis::ExperimentConfig cfg = io::parse_experiment_config(raw);
    manifest.master_seed = cfg.master_seed;
    const analysis::ExperimentStats stats = a.kind == "genericity"
                                                ? analysis::run_genericity_experiment(cfg, workers)
                                                : analysis::run_recovery_comparison(cfg, workers);
    io::write_trials_csv(csv, stats, a.omit_timing);
  } else if (a.kind == "perturbation") {
    const io::PerturbationConfig cfg = io::parse_perturbation_config(raw);
    manifest.master_seed = cfg.master_seed;
    const auto inst = ensembles::gen_gaussian_instance(
        {cfg.m, cfg.n, cfg.master_seed, std::nullopt, ensembles::SignalMagnitudes::signs});
    const auto rows = analysis::perturbation_robustness(inst.a, cfg.sparsity, cfg.trials,
                                                        cfg.deltas, cfg.master_seed, cfg.solver,
                                                        workers);
    io::write_perturbation_csv(csv, rows);
  } else {
    throw Error(ErrorKind::invalid_input,
                "--kind must be genericity, recovery or perturbation, got '" + a.kind + "'");
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write '" + a.out + "'");
  out << csv.str();
  manifest.config_digest = io::config_digest(json{{"kind", a.kind}, {"config", raw}});
  write_manifest(a.out + ".manifest.json", manifest);
  return kOk;
}

int cmd_gen(const GenArgs& a) {
  io::RunManifest manifest{"gen", "", a.seed, io::kToolVersion, io::utc_timestamp(), ""};
  const ensembles::EnsembleSpec spec{a.m, a.n, a.seed, a.sparsity,
                                     ensembles::SignalMagnitudes::signs};
  spec.validate();
  if (a.sparsity) {
    if (a.out_signal.empty()) {
      throw Error(ErrorKind::invalid_input, "--out-signal is required with --sparsity");
    }
    const auto inst = ensembles::gen_sparse_measured(spec);
    io::write_matrix_file(a.out_matrix, inst.a);
    io::write_vector_file(a.out_rhs, inst.y);
    io::write_vector_file(a.out_signal, inst.x0);
    Vector idx(static_cast<Index>(inst.support.size()));
    for (std::size_t k = 0; k < inst.support.size(); ++k) {
      idx[static_cast<Index>(k)] = static_cast<double>(inst.support[k]);
    }
    io::write_vector_file(a.out_support.empty() ? a.out_signal + ".support" : a.out_support, idx);
  } else {
    const auto inst = ensembles::gen_gaussian_instance(spec);
    io::write_matrix_file(a.out_matrix, inst.a);
    io::write_vector_file(a.out_rhs, inst.y);
  }
  manifest.config_digest = io::config_digest(
      json{{"m", a.m}, {"N", a.n}, {"seed", a.seed}, {"sparsity", a.sparsity.value_or(0)}});
  write_manifest(a.out_matrix + ".manifest.json", manifest);
  return kOk;
}

int cmd_rip(const RipArgs& a) {
  const DenseMatrix m = io::read_matrix_file(a.matrix);
  const double delta = ensembles::rip_constant(m, a.order, default_workers(a.workers));
  std::printf("%.12g\n", delta);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-norm solvers and least-sparsity experiments"};
  app.set_version_flag("--version", std::string(lps::io::kToolVersion));
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one problem instance");
  s->add_option("--family", solve.family, "bp|bpdn-eps|bpdn-eta|rr|en|bp-l1|rr-irls")->required();
  s->add_option("--p", solve.p, "Exponent p");
  s->add_option("--matrix", solve.matrix, "Matrix file A")->required();
  s->add_option("--rhs", solve.rhs, "Vector file y")->required();
  s->add_option("--lambda", solve.lambda, "RR / IRLS weight");
  s->add_option("--lambda1", solve.lambda1, "EN weight on ||x||_p^r");
  s->add_option("--lambda2", solve.lambda2, "EN weight on ||x||_2^2");
  s->add_option("--r", solve.r, "EN exponent r >= 1");
  s->add_option("--eps", solve.eps, "BPDN residual bound");
  s->add_option("--eta", solve.eta, "BPDN p-norm bound");
  s->add_option("--tol", solve.tol, "KKT tolerance");
  s->add_option("--max-iter", solve.max_iter, "Newton iteration cap");
  s->add_option("--algorithm", solve.algorithm,
                "auto|dual_newton|primal_dual_newton|projected_gradient|fixed_point");
  s->add_option("--support-tol", solve.support_tol, "Relative support threshold");
  s->add_option("--out", solve.out, "Result file (default: standard output)");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "Run a Monte-Carlo experiment");
  e->add_option("--kind", exp.kind, "genericity|recovery|perturbation")->required();
  e->add_option("--config", exp.config, "JSON config")->required();
  e->add_option("--out", exp.out, "CSV output")->required();
  e->add_option("--workers", exp.workers, "Worker threads (default: LPS_WORKERS or all cores)");
  e->add_flag("--omit-timing", exp.omit_timing, "Write wall_time_ms as 0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a Gaussian instance");
  g->add_option("--m", gen.m, "Rows")->required();
  g->add_option("--n", gen.n, "Columns")->required();
  g->add_option("--seed", gen.seed, "Seed")->required();
  g->add_option("--sparsity", gen.sparsity, "Plant an s-sparse signal and set y = A x0");
  g->add_option("--out-matrix", gen.out_matrix, "Matrix file")->required();
  g->add_option("--out-rhs", gen.out_rhs, "Right-hand side file")->required();
  g->add_option("--out-signal", gen.out_signal, "Signal file (with --sparsity)");
  g->add_option("--out-support", gen.out_support,
                "Support index file, zero-based (default: <out-signal>.support)");

  RipArgs rip;
  auto* r = app.add_subcommand("rip", "Restricted isometry constant by enumeration");
  r->add_option("--matrix", rip.matrix, "Matrix file")->required();
  r->add_option("--order", rip.order, "Order k")->required();
  r->add_option("--workers", rip.workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInvalid;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*e) return cmd_experiment(exp);
    if (*g) return cmd_gen(gen);
    if (*r) return cmd_rip(rip);
  } catch (const std::exception& ex) {
    std::cerr << "lps: error: " << ex.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
