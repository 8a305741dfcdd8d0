#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "lps/ensembles.hpp"
#include "lps/io.hpp"

using namespace lps;
using lps::test::mat;
using lps::test::vec;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lps::Error");
  return ErrorKind::invalid_input;
}

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("matrix text roundtrip is exact") {
  const auto inst = ensembles::gen_gaussian_instance({3, 5, 8, std::nullopt, {}});
  std::stringstream ss;
  io::write_matrix(ss, inst.a);
  const DenseMatrix back = io::read_matrix(ss);
  CHECK(back == inst.a);
}

TEST_CASE("matrix reader diagnostics") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_matrix(in);
  };
  CHECK(parse("2 2\n1 2\n3 4\n") == mat({{1, 2}, {3, 4}}));
  CHECK(kind_of([&] { parse(""); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { parse("2 2\n1 2\n3\n"); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { parse("1 2\n1 x\n"); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { parse("0 2\n"); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { parse("1 1\nnan\n"); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { parse("1 1\n1 2\n"); }) == ErrorKind::invalid_input);
}

TEST_CASE("vector files accept a row or a column") {
  const auto dir = std::filesystem::temp_directory_path() / "lps_test_io";
  std::filesystem::create_directories(dir);
  const auto col = (dir / "col.txt").string();
  io::write_vector_file(col, vec({1.5, -2, 3}));
  CHECK(io::read_vector_file(col) == vec({1.5, -2, 3}));
  const auto row = (dir / "row.txt").string();
  io::write_matrix_file(row, mat({{4, 5}}));
  CHECK(io::read_vector_file(row) == vec({4, 5}));
  const auto full = (dir / "full.txt").string();
  io::write_matrix_file(full, mat({{1, 2}, {3, 4}}));
  CHECK(kind_of([&] { io::read_vector_file(full); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { io::read_matrix_file((dir / "missing.txt").string()); }) ==
        ErrorKind::invalid_input);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_double is shortest roundtrip") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
  const double third = 1.0 / 3.0;
  CHECK(std::strtod(io::format_double(third).c_str(), nullptr) == third);
}

TEST_CASE("experiment config parsing") {
  const json ok = {{"family", "bp"}, {"m", 8}, {"N", 20}, {"trials", 5}, {"seed", 7},
                   {"p_grid", {3.0}}};
  const auto cfg = io::parse_experiment_config(ok);
  CHECK(cfg.family == solvers::Family::bp);
  CHECK(cfg.n == 20);
  CHECK(cfg.p_grid == std::vector<double>{3.0});
  CHECK(cfg.master_seed == 7);

  const json bad = {{"family", "bp"}, {"N", "twenty"}, {"trials", 5}, {"colour", 1}};
  const std::string what = error_text([&] { io::parse_experiment_config(bad); });
  CHECK(what.find("m") != std::string::npos);
  CHECK(what.find("N") != std::string::npos);
  CHECK(what.find("seed") != std::string::npos);
  CHECK(what.find("colour") != std::string::npos);

  const json wrong_family = {{"family", "lasso"}, {"m", 2}, {"N", 4}, {"trials", 1}, {"seed", 1}};
  CHECK(kind_of([&] { io::parse_experiment_config(wrong_family); }) == ErrorKind::invalid_input);
}

TEST_CASE("perturbation config parsing") {
  const json ok = {{"m", 12}, {"N", 24}, {"sparsity", 2}, {"trials", 10}, {"seed", 3},
                   {"deltas", {0.0, 1e-6, 10.0}}};
  const auto cfg = io::parse_perturbation_config(ok);
  CHECK(cfg.deltas.size() == 3);
  const json neg = {{"m", 12}, {"N", 24}, {"sparsity", 2}, {"trials", 10}, {"seed", 3},
                    {"deltas", {-1.0}}};
  CHECK(kind_of([&] { io::parse_perturbation_config(neg); }) == ErrorKind::invalid_input);
}

TEST_CASE("trials csv layout") {
  analysis::ExperimentConfig cfg;
  cfg.family = solvers::Family::bp;
  cfg.m = 3;
  cfg.n = 6;
  cfg.p_grid = {3.0};
  cfg.trials = 2;
  cfg.master_seed = 4;
  const auto stats = analysis::run_genericity_experiment(cfg);
  std::ostringstream a, b;
  io::write_trials_csv(a, stats, true);
  io::write_trials_csv(b, analysis::run_genericity_experiment(cfg, 1), true);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema: lps-trials/1");
  std::getline(in, line);
  CHECK(line ==
        "trial,seed,m,N,p,family,support_size,min_rel_magnitude,kkt_residual,iterations,status,"
        "wall_time_ms");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);
  CHECK(line.substr(line.size() - 2) == ",0");
  CHECK(a.str().find("# summary\n") != std::string::npos);
}

TEST_CASE("config digest is canonical") {
  const json a = json::parse(R"({"m": 2, "N": 3})");
  const json b = json::parse(R"({"N": 3, "m": 2})");
  CHECK(io::config_digest(a) == io::config_digest(b));
  CHECK(io::config_digest(a).size() == 16);
  CHECK(io::config_digest(a) != io::config_digest(json::parse(R"({"m": 2, "N": 4})")));
}

TEST_CASE("result document fields") {
  const DenseMatrix a = mat({{1, 1}});
  const Vector y = vec({2});
  solvers::ProblemInstance inst{a, y, solvers::Family::bp, 2.0, {}};
  const auto res = solvers::solve_bp(a, y, Exponent(2));
  const json doc = io::result_document(inst, res, 1e-6);
  for (const char* key : {"family", "p", "m", "N", "status", "algorithm", "objective",
                          "kkt_residual", "iterations", "solution", "multiplier", "support"}) {
    CHECK_MESSAGE(doc.contains(key), key);
  }
  CHECK(doc["status"] == "converged");
  CHECK(doc["support"]["size"] == 2);
  CHECK(doc["solution"][0].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("manifest json") {
  io::RunManifest m;
  m.command = "experiment";
  m.config_digest = "00";
  m.master_seed = 9;
  m.started = m.finished = io::utc_timestamp();
  const json j = io::to_json(m);
  CHECK(j["tool_version"] == io::kToolVersion);
  CHECK(j["master_seed"] == 9);
  CHECK(m.started.size() == 20);
  CHECK(m.started.back() == 'Z');
}
