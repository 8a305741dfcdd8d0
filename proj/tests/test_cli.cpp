// Drives the lps executable end to end. LPS_CLI is its path.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "helpers.hpp"
#include "lps/io.hpp"

using namespace lps;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr combined
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LPS_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("solve bp prints the least-norm solution") {
  TempDir d("lps_cli_solve");
  write_file(d / "A.txt", "1 2\n1 1\n");
  write_file(d / "y.txt", "1 1\n2\n");
  const Run r = run("solve --family bp --p 2 --matrix " + (d / "A.txt") + " --rhs " + (d / "y.txt"));
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["status"] == "converged");
  CHECK(doc["solution"][0].get<double>() == doctest::Approx(1.0));
  CHECK(doc["solution"][1].get<double>() == doctest::Approx(1.0));

  const Run to_file = run("solve --family bp --p 2 --matrix " + (d / "A.txt") + " --rhs " +
                          (d / "y.txt") + " --out " + (d / "res.json"));
  CHECK(to_file.code == 0);
  CHECK(json::parse(slurp(d / "res.json"))["N"] == 2);
  CHECK(fs::exists(d / "res.json.manifest.json"));
}

TEST_CASE("solve bpdn-eps with eps above ||y|| returns zero") {
  TempDir d("lps_cli_bpdn");
  write_file(d / "A.txt", "2 3\n1 0 1\n0 1 1\n");
  write_file(d / "y.txt", "2 1\n3\n4\n");
  const Run r = run("solve --family bpdn-eps --p 1.5 --eps 5 --matrix " + (d / "A.txt") +
                    " --rhs " + (d / "y.txt"));
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  for (const auto& v : doc["solution"]) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("solve validation errors exit 1 with a diagnostic") {
  TempDir d("lps_cli_bad");
  write_file(d / "A.txt", "1 2\n1 1\n");
  write_file(d / "y.txt", "1 1\n2\n");
  write_file(d / "y2.txt", "2 1\n2\n3\n");
  const Run neg = run("solve --family rr --p 1.5 --lambda -1 --matrix " + (d / "A.txt") +
                      " --rhs " + (d / "y.txt"));
  CHECK(neg.code == 1);
  CHECK(neg.out.find("lambda > 0") != std::string::npos);
  const Run dims = run("solve --family bp --p 2 --matrix " + (d / "A.txt") + " --rhs " + (d / "y2.txt"));
  CHECK(dims.code == 1);
  const Run missing = run("solve --family bp --p 2 --matrix " + (d / "nope.txt") + " --rhs " + (d / "y.txt"));
  CHECK(missing.code == 1);
}

TEST_CASE("solve reports non-convergence with exit 2") {
  TempDir d("lps_cli_nc");
  write_file(d / "A.txt", "2 4\n1 2 0.5 -1\n0.3 -1 2 1\n");
  write_file(d / "y.txt", "2 1\n1\n-2\n");
  const Run r = run("solve --family bp --p 1.5 --algorithm projected_gradient --max-iter 1 --tol 1e-15 "
                    "--matrix " + (d / "A.txt") + " --rhs " + (d / "y.txt"));
  CHECK(r.code == 2);
}

TEST_CASE("experiment output is deterministic across runs and workers") {
  TempDir d("lps_cli_exp");
  write_file(d / "g.json", R"({"family": "bp", "N": 20, "m": 8, "p_grid": [3], "trials": 5, "seed": 7})");
  const std::string base = "experiment --kind genericity --omit-timing --config " + (d / "g.json");
  REQUIRE(run(base + " --out " + (d / "a.csv")).code == 0);
  REQUIRE(run(base + " --out " + (d / "b.csv")).code == 0);
  REQUIRE(run(base + " --workers 1 --out " + (d / "c.csv")).code == 0);
  REQUIRE(run(base + " --workers 8 --out " + (d / "e.csv")).code == 0);
  const std::string a = slurp(d / "a.csv");
  CHECK(a == slurp(d / "b.csv"));
  CHECK(a == slurp(d / "c.csv"));
  CHECK(a == slurp(d / "e.csv"));
  CHECK(a.rfind("# schema: lps-trials/1\n", 0) == 0);

  const json m1 = json::parse(slurp(d / "a.csv.manifest.json"));
  const json m2 = json::parse(slurp(d / "b.csv.manifest.json"));
  CHECK(m1["config_digest"] == m2["config_digest"]);
  CHECK(m1["master_seed"] == 7);
}

TEST_CASE("recovery and perturbation experiments") {
  TempDir d("lps_cli_rec");
  write_file(d / "r.json",
             R"({"family": "bp-l1", "N": 24, "m": 12, "sparsity": 2, "p_grid": [1], "trials": 20, "seed": 3})");
  REQUIRE(run("experiment --kind recovery --config " + (d / "r.json") + " --out " + (d / "r.csv")).code == 0);
  const std::string csv = slurp(d / "r.csv");
  CHECK(csv.find("recovery_fraction") != std::string::npos);

  write_file(d / "p.json",
             R"({"N": 24, "m": 12, "sparsity": 2, "trials": 10, "seed": 3, "deltas": [0, 1e-6]})");
  REQUIRE(run("experiment --kind perturbation --config " + (d / "p.json") + " --out " + (d / "p.csv")).code == 0);
  CHECK(slurp(d / "p.csv").rfind("# schema: lps-perturbation/1\n", 0) == 0);
}

TEST_CASE("experiment config errors list the fields") {
  TempDir d("lps_cli_cfg");
  write_file(d / "bad.json", R"({"family": "bp", "N": 20, "trials": "many"})");
  const Run r = run("experiment --kind genericity --config " + (d / "bad.json") + " --out " + (d / "x.csv"));
  CHECK(r.code == 1);
  CHECK(r.out.find("m") != std::string::npos);
  CHECK(r.out.find("seed") != std::string::npos);
  CHECK(r.out.find("trials") != std::string::npos);
  write_file(d / "broken.json", "{");
  CHECK(run("experiment --kind genericity --config " + (d / "broken.json") + " --out " + (d / "x.csv")).code == 1);
}

TEST_CASE("gen roundtrips and plants sparse signals") {
  TempDir d("lps_cli_gen");
  REQUIRE(run("gen --m 2 --n 3 --seed 42 --out-matrix " + (d / "A.txt") + " --out-rhs " + (d / "y.txt")).code == 0);
  const auto inst = ensembles::gen_gaussian_instance({2, 3, 42, std::nullopt, {}});
  CHECK(io::read_matrix_file(d / "A.txt") == inst.a);
  CHECK(io::read_vector_file(d / "y.txt") == inst.y);
  CHECK(fs::exists(d / "A.txt.manifest.json"));

  REQUIRE(run("gen --m 4 --n 10 --seed 5 --sparsity 2 --out-matrix " + (d / "B.txt") + " --out-rhs " +
              (d / "z.txt") + " --out-signal " + (d / "x0.txt")).code == 0);
  const DenseMatrix b = io::read_matrix_file(d / "B.txt");
  const Vector x0 = io::read_vector_file(d / "x0.txt");
  CHECK((x0.array() != 0.0).count() == 2);
  CHECK(io::read_vector_file(d / "z.txt") == b * x0);
  CHECK(fs::exists(d / "x0.txt.support"));

  CHECK(run("gen --m 2 --n 3 --seed 1 --out-matrix /nonexistent/dir/A.txt --out-rhs " + (d / "q.txt")).code == 1);
}

TEST_CASE("rip command") {
  TempDir d("lps_cli_rip");
  io::write_matrix_file(d / "I.txt", DenseMatrix::Identity(4, 4));
  const Run eye = run("rip --matrix " + (d / "I.txt") + " --order 2");
  CHECK(eye.code == 0);
  CHECK(std::stod(eye.out) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  io::write_matrix_file(d / "D.txt", test::mat({{1, 0}, {0, 2}}));
  const Run diag = run("rip --matrix " + (d / "D.txt") + " --order 1");
  CHECK(diag.code == 0);
  CHECK(diag.out == "3\n");
  io::write_matrix_file(d / "W.txt", ensembles::gen_gaussian_instance({4, 40, 1, std::nullopt, {}}).a);
  const Run cap = run("rip --matrix " + (d / "W.txt") + " --order 5");
  CHECK(cap.code == 1);
  CHECK(cap.out.find("200000") != std::string::npos);
}
