#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kacring/fitting.hpp"
#include "kacring/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = KACRING_TEST_TMP;

int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
  fs::create_directories(kTmp);
  const std::string cmd = std::string(KACRING_CLI) + " " + args + " > " + stdout_file + " 2> " +
                          (kTmp / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out(const std::string& name) { return (kTmp / name).string(); }

}  // namespace

TEST_CASE("simulate WBW recurs at t=2") {
  REQUIRE(run("simulate --mode classical --sites 3 --initial WBW -o " + out("sim.csv")) == 0);
  CHECK(slurp(out("sim.csv")) == "t,entropy,delta\n0,0,-1\n1,3,1\n2,0,-1\n");
}

TEST_CASE("simulate without --sites takes the length from the config") {
  REQUIRE(run("simulate --initial B", out("sim_stdout.csv")) == 0);
  CHECK(slurp(out("sim_stdout.csv")) == "t,entropy,delta\n0,0,1\n1,1,-1\n2,0,1\n");
}

TEST_CASE("oracle classical N=4") {
  REQUIRE(run("oracle --sites 4 --mode classical -o " + out("oracle.csv")) == 0);
  const auto t = kacring::io::read_csv_file(out("oracle.csv"));
  CHECK(t.header == std::vector<std::string>{"config", "recurrence_time"});
  REQUIRE(t.rows.size() == 16);
  for (double v : t.numeric_column("recurrence_time")) CHECK(v == 8.0);
}

TEST_CASE("oracle quantum N=3") {
  REQUIRE(run("oracle --sites 3 --mode quantum -o " + out("oracle_q.csv")) == 0);
  const auto t = kacring::io::read_csv_file(out("oracle_q.csv"));
  CHECK(t.header == std::vector<std::string>{"config", "expected_recurrence"});
  REQUIRE(t.rows.size() == 8);
  for (double v : t.numeric_column("expected_recurrence")) CHECK(v == doctest::Approx(8.0));
  CHECK(run("oracle --sites 9 --mode quantum") != 0);
}

TEST_CASE("sweep then fit the power-of-two subsequence") {
  REQUIRE(run("sweep --mode classical --sites 3..64 --runs 1000 --seed 7 -o " + out("sweep.csv")) == 0);
  const auto t = kacring::io::read_csv_file(out("sweep.csv"));
  CHECK(t.header == std::vector<std::string>{"n", "runs", "mean_recurrence", "stderr", "overflow"});
  CHECK(t.rows.size() == 62);
  REQUIRE(run("fit --kind linear --pow2-only -i " + out("sweep.csv") + " -o " + out("fit.csv") +
              " --curve " + out("curve.csv") + " --plot " + out("fit.svg")) == 0);
  const auto fit = kacring::io::read_csv_file(out("fit.csv"));
  CHECK(fit.header == std::vector<std::string>{"param", "value"});
  CHECK(fit.rows[0][0] == "slope");
  CHECK(fit.rows[0][1] == "2");
  CHECK(slurp(out("curve.csv")).rfind("x,y_fit\n", 0) == 0);
  CHECK(slurp(out("fit.svg")).rfind("<svg", 0) == 0);
}

TEST_CASE("every data command is byte-reproducible across thread counts") {
  const char* commands[] = {
      "hist --mode quantum --sites 5 --runs 500 --seed 3",
      "entropy-dist --mode quantum --sites 6 --runs 300 --seed 4",
      "trajectories --mode quantum --sites 4 --runs 5 --seed 5",
      "sweep --mode quantum --sites 2..6 --runs 200 --seed 6",
  };
  int k = 0;
  for (const char* c : commands) {
    const std::string a = out("rep_a" + std::to_string(k) + ".csv");
    const std::string b = out("rep_b" + std::to_string(k) + ".csv");
    REQUIRE(run(std::string(c) + " --threads 1 -o " + a + " --plot " + a + ".svg") == 0);
    REQUIRE(run(std::string(c) + " --threads 7 -o " + b + " --plot " + b + ".svg") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a + ".svg") == slurp(b + ".svg"));
    CHECK(!slurp(a).empty());
    ++k;
  }
}

TEST_CASE("simulate is reproducible for a fixed seed") {
  const std::string args = "simulate --mode quantum --sites 6 --initial random --seed 8 -o ";
  REQUIRE(run(args + out("simq_a.csv")) == 0);
  REQUIRE(run(args + out("simq_b.csv")) == 0);
  CHECK(slurp(out("simq_a.csv")) == slurp(out("simq_b.csv")));
  CHECK(run("simulate --sites 3 --threads 2") != 0);
}

TEST_CASE("output directory from the environment") {
  fs::create_directories(kTmp / "envdir");
  const std::string env = "KACRING_OUTPUT_DIR=" + out("envdir") + " ";
  const int status = std::system((env + KACRING_CLI + " hist --sites 4 --runs 10 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(kTmp / "envdir" / "hist.csv") == "recurrence_time,count\n8,10\n");
}

TEST_CASE("TOML config file with flag precedence") {
  {
    std::ofstream cfg(out("run.toml"));
    cfg << "[hist]\nsites = 4\nruns = 12\nmode = \"classical\"\n";
  }
  REQUIRE(run("--config " + out("run.toml") + " hist -o " + out("toml.csv")) == 0);
  CHECK(slurp(out("toml.csv")) == "recurrence_time,count\n8,12\n");
  REQUIRE(run("--config " + out("run.toml") + " hist --runs 3 -o " + out("toml2.csv")) == 0);
  CHECK(slurp(out("toml2.csv")) == "recurrence_time,count\n8,3\n");
}

TEST_CASE("errors have distinct messages and nonzero exit codes") {
  CHECK(run("simulate --initial BXW") == 3);
  CHECK(slurp(kTmp / "stderr.txt").find("invalid config string") != std::string::npos);

  CHECK(run("simulate --sites 4 --initial BWB") == 4);
  CHECK(slurp(kTmp / "stderr.txt").find("sites/length mismatch") != std::string::npos);

  CHECK(run("fit -i /nonexistent.csv") == 5);
  CHECK(slurp(kTmp / "stderr.txt").find("cannot read input CSV") != std::string::npos);

  CHECK(run("hist --sites 4 --bogus") != 0);
  CHECK(run("") != 0);
  CHECK(run("sweep --mode quantum --sites 2..21 --runs 1") != 0);
  CHECK(slurp(kTmp / "stderr.txt").find("--force") != std::string::npos);
}

TEST_CASE("help lists every subcommand") {
  REQUIRE(run("--help", out("help.txt")) == 0);
  const auto help = slurp(out("help.txt"));
  for (const char* sub : {"simulate", "sweep", "hist", "entropy-dist", "trajectories", "fit", "oracle"}) {
    CHECK(help.find(sub) != std::string::npos);
  }
  REQUIRE(run("sweep --help", out("help_sweep.txt")) == 0);
  const auto sweep_help = slurp(out("help_sweep.txt"));
  for (const char* flag : {"--mode", "--sites", "--runs", "--seed", "--cap", "--initial", "--output", "--plot", "--threads", "--force"}) {
    CHECK(sweep_help.find(flag) != std::string::npos);
  }
}
