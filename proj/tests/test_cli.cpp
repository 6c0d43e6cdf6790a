// End-to-end checks of the command-line tool: each case shells out to the
// built binary (path injected by the build as DIRPART_CLI_PATH) and inspects
// exit codes and output files.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "dirpart/io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const fs::path out = test_util::temp_path("cli_stdout.txt");
  const std::string cmd =
      std::string(DIRPART_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult res;
  res.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(out);
  std::ostringstream ss;
  ss << f.rdbuf();
  res.stdout_text = ss.str();
  return res;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const char* tag) {
  const fs::path d = test_util::temp_path(tag);
  fs::create_directories(d);
  return d;
}

} // namespace

TEST_CASE("partition on a small path writes the full report set") {
  const auto out = fresh_dir("cli_partition");
  const auto res = run_cli("partition --lattice path:10 --k 2 --restarts 6 "
                           "--seed 1 --out " + out.string());
  CHECK(res.code == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "labels.csv"));
  CHECK(fs::exists(out / "confidences.csv"));

  const auto labels = dirpart::read_labels_csv((out / "labels.csv").string(), 10);
  for (int v = 0; v < 5; ++v) CHECK(labels[v] == labels[0]);
  for (int v = 5; v < 10; ++v) CHECK(labels[v] == labels[9]);
  CHECK(labels[0] != labels[9]);

  const auto j = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(j["converged"] == true);
  CHECK(j["k"] == 2);
  CHECK(j["labels"].size() == 10);
}

TEST_CASE("missing input file fails cleanly without partial outputs") {
  const auto out = fresh_dir("cli_missing");
  const auto res = run_cli("partition --points /nonexistent/points.csv --out " +
                           out.string());
  CHECK(res.code == 1);
  CHECK_FALSE(fs::exists(out / "report.json"));
  CHECK_FALSE(fs::exists(out / "labels.csv"));
}

TEST_CASE("oracle refuses graphs past the enumeration budget") {
  const auto out = fresh_dir("cli_oracle_budget");
  const auto res = run_cli("oracle --lattice path:13 --k 2 --out " + out.string());
  CHECK(res.code == 1);
  CHECK_FALSE(fs::exists(out / "oracle.json"));

  const auto ok = run_cli("oracle --lattice path:10 --k 2 --out " + out.string());
  CHECK(ok.code == 0);
  CHECK(fs::exists(out / "oracle.json"));
  CHECK(fs::exists(out / "oracle_labels.csv"));
}

TEST_CASE("eval of a perfect prediction reports purity 1") {
  const auto out = fresh_dir("cli_eval");
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  dirpart::write_labels_csv((out / "truth.csv").string(), labels);

  const auto res = run_cli("eval --lattice path:6 --pred " +
                           (out / "truth.csv").string() + " --truth " +
                           (out / "truth.csv").string() + " --out " + out.string());
  CHECK(res.code == 0);
  const auto j = nlohmann::json::parse(read_file(out / "metrics.json"));
  CHECK(j["purity"] == 1.0);
  CHECK(j["found_objective"] == j["truth_objective"]);
  CHECK(fs::exists(out / "confusion.csv"));
}

TEST_CASE("fixed-label sweep produces increasing relaxed energies") {
  const auto out = fresh_dir("cli_sweep");
  const std::vector<int> labels{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  dirpart::write_labels_csv((out / "labels.csv").string(), labels);

  const auto res = run_cli("sweep --lattice path:10 --alpha-grid 0.1,1,10,100 "
                           "--eval-labels " + (out / "labels.csv").string() +
                           " --out " + out.string());
  CHECK(res.code == 0);

  std::ifstream f(out / "sweep.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "alpha,lambda_alpha,warning");
  double prev = -1.0;
  int rows = 0;
  for (std::string line; std::getline(f, line);) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const double lam = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(lam >= prev);
    CHECK(line.substr(c2 + 1) == "energies not comparable across alpha");
    prev = lam;
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("sweep validates its alpha grid") {
  const auto out = fresh_dir("cli_sweep_bad");
  CHECK(run_cli("sweep --lattice path:6 --alpha-grid , --out " + out.string())
            .code == 1);
  CHECK(run_cli("sweep --lattice path:6 --alpha-grid 1,-2 --out " + out.string())
            .code == 1);
  CHECK(run_cli("sweep --lattice path:6 --alpha-grid 1,zebra --out " + out.string())
            .code == 1);
}

TEST_CASE("gen writes points, labels, and a spec sidecar") {
  const auto out = fresh_dir("cli_gen");
  const auto res = run_cli("gen --kind moons --n 80 --k 2 --noise 0.05 --seed 4 "
                           "--out " + out.string());
  CHECK(res.code == 0);
  CHECK(fs::exists(out / "points.csv"));
  CHECK(fs::exists(out / "labels.csv"));
  CHECK(fs::exists(out / "spec.json"));
  const auto j = nlohmann::json::parse(read_file(out / "spec.json"));
  CHECK(j["kind"] == "moons");
  CHECK(j["has_ground_truth"] == true);

  // sphere datasets carry no ground truth
  const auto sout = fresh_dir("cli_gen_sphere");
  CHECK(run_cli("gen --kind sphere --n 50 --out " + sout.string()).code == 0);
  CHECK(fs::exists(sout / "points.csv"));
  CHECK_FALSE(fs::exists(sout / "labels.csv"));
}

TEST_CASE("the same seed reproduces the run byte for byte") {
  const auto out1 = fresh_dir("cli_rep1");
  const auto out2 = fresh_dir("cli_rep2");
  const std::string args = "partition --lattice grid:6x5 --k 3 --restarts 4 "
                           "--seed 9 --out ";
  CHECK(run_cli(args + out1.string()).code == 0);
  CHECK(run_cli(args + out2.string()).code == 0);

  CHECK(read_file(out1 / "labels.csv") == read_file(out2 / "labels.csv"));
  CHECK(read_file(out1 / "confidences.csv") == read_file(out2 / "confidences.csv"));

  auto j1 = nlohmann::json::parse(read_file(out1 / "report.json"));
  auto j2 = nlohmann::json::parse(read_file(out2 / "report.json"));
  j1.erase("wall_time_s");
  j2.erase("wall_time_s");
  CHECK(j1 == j2);
}

TEST_CASE("thread count does not change the selected answer") {
  const auto out1 = fresh_dir("cli_thr1");
  const auto out2 = fresh_dir("cli_thr2");
  const std::string args = "partition --lattice grid:6x5 --k 3 --restarts 4 "
                           "--seed 9 --out ";
  CHECK(run_cli(args + out1.string() + " --threads 1").code == 0);
  CHECK(run_cli(args + out2.string() + " --threads 4").code == 0);
  CHECK(read_file(out1 / "labels.csv") == read_file(out2 / "labels.csv"));
}

TEST_CASE("an unreachable iteration limit exits with code 2") {
  const auto out = fresh_dir("cli_maxiter");
  const auto res = run_cli("partition --lattice grid:8x5 --k 4 --max-iter 1 "
                           "--seed 2 --out " + out.string());
  CHECK(res.code == 2);
  const auto j = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(j["converged"] == false);
}

TEST_CASE("usage errors and --help behave conventionally") {
  CHECK(run_cli("partition --lattice path:6 --k 0").code == 1); // invalid flag value
  CHECK(run_cli("partition --lattice path:6 --points x.csv").code == 1); // exclusive
  CHECK(run_cli("nonsense").code == 1);
  CHECK(run_cli("").code == 1); // a subcommand is required
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("partition --help").code == 0);
}
