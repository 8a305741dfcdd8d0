#include "lps/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "lps/pnorm.hpp"

namespace lps::io {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::invalid_input, msg); }

double parse_double(const std::string& tok, const std::string& what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    invalid(what + ": malformed number '" + tok + "'");
  }
  return v;
}

Index parse_dim(const std::string& tok, const std::string& what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 1) {
    invalid(what + ": header must be two positive integers \"rows cols\", got '" + tok + "'");
  }
  return static_cast<Index>(v);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) invalid("cannot open '" + path + "' for writing");
  return out;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

// Field readers that collect problems instead of throwing on the first one.
class FieldReader {
 public:
  explicit FieldReader(const json& j) : j_(j) {
    if (!j.is_object()) problems_.push_back("config must be a JSON object");
  }

  template <class T>
  std::optional<T> get(const std::string& key, bool required) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) {
      if (required) problems_.push_back("missing field '" + key + "'");
      return std::nullopt;
    }
    try {
      return j_.at(key).get<T>();
    } catch (const std::exception&) {
      problems_.push_back("field '" + key + "' has the wrong type");
      return std::nullopt;
    }
  }

  void add(const std::string& problem) { problems_.push_back(problem); }

  void finish() {
    if (j_.is_object()) {
      for (const auto& [key, value] : j_.items()) {
        if (!seen_.count(key)) problems_.push_back("unknown field '" + key + "'");
      }
    }
    if (problems_.empty()) return;
    std::string msg = "invalid config:";
    for (const auto& p : problems_) msg += " [" + p + "]";
    invalid(msg);
  }

 private:
  const json& j_;
  std::set<std::string> seen_;
  std::vector<std::string> problems_;
};

solvers::SolverConfig read_solver(FieldReader& r) {
  solvers::SolverConfig s;
  if (auto v = r.get<double>("kkt_tol", false)) s.kkt_tol = *v;
  if (auto v = r.get<int>("max_iter", false)) s.max_iter = *v;
  return s;
}

std::string csv_double(double v) { return format_double(v); }

}  // namespace

DenseMatrix read_matrix(std::istream& in, const std::string& what) {
  std::string r_tok;
  std::string c_tok;
  if (!(in >> r_tok >> c_tok)) invalid(what + ": missing \"rows cols\" header");
  const Index rows = parse_dim(r_tok, what);
  const Index cols = parse_dim(c_tok, what);
  DenseMatrix a(rows, cols);
  std::string tok;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> tok)) {
        invalid(what + ": expected " + std::to_string(rows * cols) + " entries, found " +
                std::to_string(i * cols + j));
      }
      a(i, j) = parse_double(tok, what);
    }
  }
  if (in >> tok) invalid(what + ": trailing data after " + std::to_string(rows * cols) + " entries");
  return a;
}

DenseMatrix read_matrix_file(const std::string& path) {
  auto in = open_in(path);
  return read_matrix(in, path);
}

Vector read_vector_file(const std::string& path) {
  const DenseMatrix a = read_matrix_file(path);
  if (a.cols() == 1) return a.col(0);
  if (a.rows() == 1) return a.row(0).transpose();
  invalid(path + ": expected a vector (m x 1 or 1 x m), got " + std::to_string(a.rows()) + " x " +
          std::to_string(a.cols()));
}

std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_matrix(std::ostream& out, const DenseMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? " " : "") << format_double(a(i, j));
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const DenseMatrix& a) {
  auto out = open_out(path);
  write_matrix(out, a);
  if (!out) invalid("failed writing '" + path + "'");
}

void write_vector_file(const std::string& path, const Vector& v) {
  write_matrix_file(path, DenseMatrix(v));
}

json result_document(const solvers::ProblemInstance& inst, const solvers::SolveResult& res,
                     double support_tol) {
  const analysis::SupportReport sup = analysis::support(res.x, support_tol);
  json doc;
  doc["family"] = std::string(solvers::to_string(inst.family));
  doc["p"] = inst.p;
  doc["m"] = inst.a.rows();
  doc["N"] = inst.a.cols();
  doc["status"] = std::string(solvers::to_string(res.status));
  doc["algorithm"] = std::string(solvers::to_string(res.algorithm));
  doc["objective"] = res.objective;
  doc["kkt_residual"] = res.kkt_residual;
  doc["kkt_scale"] = res.kkt_scale;
  doc["iterations"] = res.iterations;
  doc["solution"] = vector_json(res.x);
  doc["multiplier"] = res.nu ? vector_json(*res.nu) : res.mu ? json(*res.mu) : json(nullptr);
  if (inst.family == solvers::Family::bpdn_eta) doc["reduced_to_bp"] = res.reduced;
  if (res.smoothing) doc["smoothing"] = *res.smoothing;
  doc["support"] = {{"indices", sup.indices},
                    {"size", sup.size},
                    {"min_rel_magnitude", sup.min_rel_magnitude},
                    {"tol_used", sup.tol_used}};
  return doc;
}

analysis::ExperimentConfig parse_experiment_config(const json& j) {
  FieldReader r(j);
  analysis::ExperimentConfig cfg;
  if (auto f = r.get<std::string>("family", true)) {
    try {
      cfg.family = solvers::parse_family(*f);
    } catch (const Error& e) {
      r.add(e.what());
    }
  }
  if (auto v = r.get<Index>("m", true)) cfg.m = *v;
  if (auto v = r.get<Index>("N", true)) cfg.n = *v;
  if (auto v = r.get<int>("trials", true)) cfg.trials = *v;
  if (auto v = r.get<std::uint64_t>("seed", true)) cfg.master_seed = *v;
  if (auto v = r.get<std::vector<double>>("p_grid", false)) cfg.p_grid = *v;
  if (auto v = r.get<double>("support_tol", false)) cfg.support_tol = *v;
  if (auto v = r.get<Index>("sparsity", false)) cfg.sparsity = *v;
  if (auto v = r.get<std::string>("magnitudes", false)) {
    if (*v == "signs") {
      cfg.magnitudes = ensembles::SignalMagnitudes::signs;
    } else if (*v == "gaussian") {
      cfg.magnitudes = ensembles::SignalMagnitudes::gaussian;
    } else {
      r.add("magnitudes must be 'signs' or 'gaussian'");
    }
  }
  if (auto v = r.get<double>("epsilon_fraction", false)) cfg.epsilon_fraction = *v;
  if (auto v = r.get<double>("eta_fraction", false)) cfg.eta_fraction = *v;
  if (auto v = r.get<double>("lambda", false)) cfg.params.lambda = *v;
  if (auto v = r.get<double>("lambda1", false)) cfg.params.lambda1 = *v;
  if (auto v = r.get<double>("lambda2", false)) cfg.params.lambda2 = *v;
  if (auto v = r.get<double>("r", false)) cfg.params.r = *v;
  if (auto v = r.get<std::uint64_t>("set_s_max_subsets", false)) cfg.set_s_max_subsets = *v;
  cfg.solver = read_solver(r);
  r.finish();
  cfg.validate();
  cfg.solver.validate();
  return cfg;
}

PerturbationConfig parse_perturbation_config(const json& j) {
  FieldReader r(j);
  PerturbationConfig cfg;
  if (auto v = r.get<Index>("m", true)) cfg.m = *v;
  if (auto v = r.get<Index>("N", true)) cfg.n = *v;
  if (auto v = r.get<Index>("sparsity", true)) cfg.sparsity = *v;
  if (auto v = r.get<int>("trials", true)) cfg.trials = *v;
  if (auto v = r.get<std::uint64_t>("seed", true)) cfg.master_seed = *v;
  if (auto v = r.get<std::vector<double>>("deltas", false)) cfg.deltas = *v;
  if (auto f = r.get<std::string>("family", false); f && *f != "bp-l1") {
    r.add("perturbation experiments use family 'bp-l1'");
  }
  cfg.solver = read_solver(r);
  if (cfg.m < 1 || cfg.n < cfg.m) r.add("1 <= m <= N");
  if (cfg.sparsity < 1 || cfg.sparsity > cfg.n) r.add("1 <= sparsity <= N");
  if (cfg.trials < 1) r.add("trials >= 1");
  for (double d : cfg.deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) r.add("deltas must be finite and >= 0");
  }
  r.finish();
  cfg.solver.validate();
  return cfg;
}

void write_trials_csv(std::ostream& out, const analysis::ExperimentStats& stats, bool omit_timing) {
  out << "# schema: " << kCsvSchema << '\n';
  out << "trial,seed,m,N,p,family,support_size,min_rel_magnitude,kkt_residual,iterations,status,"
         "wall_time_ms\n";
  for (const auto& t : stats.trials) {
    out << t.trial << ',' << t.seed << ',' << t.m << ',' << t.n << ',' << csv_double(t.p) << ','
        << solvers::to_string(t.family) << ',' << t.support_size << ','
        << csv_double(t.min_rel_magnitude) << ',' << csv_double(t.kkt_residual) << ','
        << t.iterations << ',' << t.status << ','
        << (omit_timing ? std::string("0") : csv_double(t.wall_time_ms)) << '\n';
  }
  out << "# summary\n";
  out << "p,family,trials_run,failures,full_support_count,full_support_fraction,min_support_seen,"
         "max_support_seen,mean_min_rel_magnitude,kkt_residual_max,lower_bound_violations,"
         "recovered_count,recovery_fraction,support_le_m_fraction\n";
  for (const auto& r : stats.rows) {
    out << csv_double(r.p) << ',' << solvers::to_string(r.family) << ',' << r.trials_run << ','
        << r.failures << ',' << r.full_support_count << ',' << csv_double(r.full_support_fraction())
        << ',' << r.min_support_seen << ',' << r.max_support_seen << ','
        << csv_double(r.mean_min_rel_magnitude) << ',' << csv_double(r.kkt_residual_max) << ','
        << r.lower_bound_violations << ',' << r.recovered_count << ','
        << csv_double(r.recovery_fraction()) << ',' << csv_double(r.support_le_m_fraction())
        << '\n';
  }
}

void write_perturbation_csv(std::ostream& out, const std::vector<analysis::PerturbationRow>& rows) {
  out << "# schema: lps-perturbation/1\n";
  out << "delta,trials,recovered,failures,recovery_fraction\n";
  for (const auto& r : rows) {
    out << csv_double(r.delta) << ',' << r.trials << ',' << r.recovered << ',' << r.failures << ','
        << csv_double(r.fraction) << '\n';
  }
}

std::string config_digest(const json& config) {
  const std::string canon = config.dump();  // object keys are kept sorted
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config_digest", m.config_digest},
          {"master_seed", m.master_seed},
          {"tool_version", m.tool_version},
          {"started", m.started},
          {"finished", m.finished}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace lps::io
