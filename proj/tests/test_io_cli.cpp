#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "hawkes/io.hpp"
#include "hawkes/reparam.hpp"
#include "hawkes/simulation.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::path("cli_io_tmp");

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(HAWKES_CLI_PATH) + " " + args + " > " + (kTmp / "out.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string small_config(const std::string& extra_io = "") {
  return R"({
  "version": 1,
  "model": {
    "dims": 1,
    "mu": [0.5],
    "kstar": [[0.4]],
    "beta_diag": 1.0,
    "beta_off": 1.0
  },
  "sim": {"t_max": 120.0, "seed": 42},
  "fit": {"prior": "normal", "chains": 2, "warmup": 60, "draws": 10, "thin": 1, "seed": 3},
  "io": {"events": "cli_io_tmp/events.csv", "draws": "cli_io_tmp/draws.csv")" +
         extra_io + R"(}
})";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config loading and validation") {
  fs::create_directories(kTmp);
  const auto path = kTmp / "cfg.json";
  write_file(path, small_config());
  const auto cfg = hawkes::load_run_config(path.string());
  CHECK(cfg.model.dims == 1);
  CHECK(cfg.model.k_star(0, 0) == 0.4);
  CHECK(cfg.sim.t_max == 120.0);
  CHECK(cfg.fit.chains == 2);

  write_file(path, R"({"version": 2, "model": {}})");
  CHECK_THROWS(hawkes::load_run_config(path.string()));

  // k and kstar together are rejected; k alone is canonicalized to K*.
  write_file(path, R"({"version": 1, "model": {"dims": 1, "mu": [0.5],
    "k": [[0.5]], "kstar": [[1.0]], "beta_diag": 1, "beta_off": 1}})");
  CHECK_THROWS(hawkes::load_run_config(path.string()));

  write_file(path, R"({"version": 1, "model": {"dims": 1, "mu": [0.5],
    "k": [[0.5]], "beta_diag": 1, "beta_off": 1}})");
  const auto canon = hawkes::load_run_config(path.string());
  CHECK(canon.model.k_star(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("event CSV round trip is exact") {
  fs::create_directories(kTmp);
  hawkes::SimConfig cfg;
  cfg.params.mu = {0.4, 0.3};
  cfg.params.k = hawkes::Matrix(2);
  cfg.params.k(0, 1) = 0.3;
  cfg.params.k(1, 1) = 0.25;
  cfg.params.beta_diag = 0.9;
  cfg.params.beta_off = 1.1;
  cfg.t_max = 150.0;
  cfg.seed = 8;
  const auto data = hawkes::simulate(cfg).events;
  REQUIRE(data.total_count() > 10);

  const auto path = (kTmp / "roundtrip.csv").string();
  hawkes::write_events_csv(path, data);
  const auto back = hawkes::read_events_csv(path, 2, 150.0);
  REQUIRE(back.dims() == data.dims());
  CHECK(back.times == data.times);  // bit-exact
  CHECK(back.t_max == data.t_max);

  const std::string header = read_file(path).substr(0, 15);
  CHECK(header == "dimension,time\n");
}

TEST_CASE("event CSV rejects malformed input") {
  fs::create_directories(kTmp);
  const auto path = kTmp / "bad.csv";
  write_file(path, "time,dimension\n1,2\n");
  CHECK_THROWS(hawkes::read_events_csv(path.string(), 2, 10.0));
  write_file(path, "dimension,time\n3,1.0\n");
  CHECK_THROWS(hawkes::read_events_csv(path.string(), 2, 10.0));
  write_file(path, "dimension,time\n1,999\n");
  CHECK_THROWS(hawkes::read_events_csv(path.string(), 2, 10.0));
}

TEST_CASE("branching CSV uses 1-based ids and 0 for immigrants") {
  fs::create_directories(kTmp);
  hawkes::BranchingRecord rec;
  rec.times = {1.0, 2.0};
  rec.dims = {0, 1};
  rec.parent = {hawkes::BranchingRecord::kImmigrant, 0};
  const auto path = kTmp / "branching.csv";
  hawkes::write_branching_csv(path.string(), rec);
  const auto text = read_file(path);
  CHECK(text == "event_id,dimension,time,parent_id\n1,1,1,0\n2,2,2,1\n");
}

TEST_CASE("matrix CSV parsing") {
  fs::create_directories(kTmp);
  const auto path = kTmp / "matrix.csv";
  write_file(path, "0.5,1\n-2,0.5\n");
  const auto k = hawkes::read_matrix_csv(path.string());
  CHECK(k.size() == 2);
  CHECK(k(1, 0) == -2.0);
  write_file(path, "1,2,3\n4,5\n");
  CHECK_THROWS(hawkes::read_matrix_csv(path.string()));
}

TEST_CASE("stability subcommand exit codes") {
  fs::create_directories(kTmp);
  const auto ok = kTmp / "stable.csv";
  write_file(ok, "0.5,1\n-2,0.5\n");
  CHECK(run_cli("stability " + ok.string()) == 0);
  const auto out = read_file(kTmp / "out.txt");
  CHECK(out.find("C1 (rho(abs K) < 1):        no") != std::string::npos);
  CHECK(out.find("C3 (rho(K+) < 1):           yes") != std::string::npos);

  const auto bad = kTmp / "unstable.csv";
  write_file(bad, "0.4,0.4,0.4\n0.4,0.4,0.4\n0.4,0.4,0.4\n");
  CHECK(run_cli("stability " + bad.string()) == 2);

  const auto malformed = kTmp / "malformed.csv";
  write_file(malformed, "1,2\n3\n");
  CHECK(run_cli("stability " + malformed.string()) == 1);

  CHECK(run_cli("stability cli_io_tmp/does_not_exist.csv") == 1);
}

TEST_CASE("simulate then fit end to end") {
  fs::create_directories(kTmp);
  const auto cfg_path = kTmp / "run.json";
  write_file(cfg_path, small_config(", \"branching\": \"cli_io_tmp/branching_out.csv\""));

  CHECK(run_cli("simulate " + cfg_path.string()) == 0);
  const auto manifest = read_file(kTmp / "out.txt");
  CHECK(manifest.find("seed=42") != std::string::npos);
  CHECK(manifest.find("counts") != std::string::npos);
  REQUIRE(fs::exists(kTmp / "events.csv"));
  REQUIRE(fs::exists(kTmp / "branching_out.csv"));

  // Re-running with the same seed gives identical files.
  const auto first = read_file(kTmp / "events.csv");
  CHECK(run_cli("simulate " + cfg_path.string()) == 0);
  CHECK(read_file(kTmp / "events.csv") == first);

  // A different --seed changes the data.
  CHECK(run_cli("--seed 7 simulate " + cfg_path.string()) == 0);
  CHECK(read_file(kTmp / "events.csv") != first);
  CHECK(run_cli("simulate " + cfg_path.string()) == 0);

  CHECK(run_cli("fit " + cfg_path.string() + " cli_io_tmp/events.csv") == 0);
  const auto table = read_file(kTmp / "out.txt");
  CHECK(table.find("mu_1") != std::string::npos);
  CHECK(table.find("kstar_1_1") != std::string::npos);
  CHECK(table.find("beta_off") != std::string::npos);

  const auto draws = hawkes::read_draws_csv((kTmp / "draws.csv").string());
  REQUIRE(draws.chains.size() == 2);
  CHECK(draws.chains[0].size() + draws.chains[1].size() == 2 * 10);
  CHECK(draws.names.front() == "mu_1");
  CHECK(draws.names.back() == "lp");

  // Summarize the draws with coverage against the generating config.
  CHECK(run_cli("summarize cli_io_tmp/draws.csv --truth " + cfg_path.string() +
                " --hist cli_io_tmp/hist.csv") == 0);
  const auto summary = read_file(kTmp / "out.txt");
  CHECK(summary.find("covered") != std::string::npos);
  REQUIRE(fs::exists(kTmp / "hist.csv"));
  const auto hist = read_file(kTmp / "hist.csv");
  CHECK(hist.substr(0, 30) == "parameter,bin_lo,bin_hi,count\n");
}

TEST_CASE("simulate refuses unstable configurations") {
  fs::create_directories(kTmp);
  const auto cfg_path = kTmp / "unstable.json";
  write_file(cfg_path, R"({
    "version": 1,
    "model": {"dims": 3, "mu": [0.1, 0.1, 0.1],
              "k": [[0.4,0.4,0.4],[0.4,0.4,0.4],[0.4,0.4,0.4]],
              "beta_diag": 1.0, "beta_off": 1.0},
    "sim": {"t_max": 10.0}
  })");
  CHECK(run_cli("simulate " + cfg_path.string()) == 2);
  const auto out = read_file(kTmp / "out.txt");
  CHECK(out.find("refusing") != std::string::npos);
  CHECK(out.find("C3") != std::string::npos);
}

TEST_CASE("full-scale simulate then fit round trip") {
  fs::create_directories(kTmp);
  const auto cfg_path = kTmp / "full.json";
  write_file(cfg_path, R"({
    "version": 1,
    "model": {"dims": 3, "mu": [0.15, 0.15, 0.15],
              "kstar": [[0.3, -0.3, 0.0], [0.0, 0.3, 0.3], [0.0, -0.3, 0.0]],
              "beta_diag": 0.5, "beta_off": 0.5},
    "sim": {"t_max": 1500.0, "seed": 99},
    "fit": {"prior": "normal", "chains": 2, "warmup": 300, "draws": 50,
            "thin": 2, "seed": 17},
    "io": {"events": "cli_io_tmp/full_events.csv", "draws": "cli_io_tmp/full_draws.csv"}
  })");
  CHECK(run_cli("simulate " + cfg_path.string()) == 0);
  CHECK(run_cli("fit " + cfg_path.string() + " cli_io_tmp/full_events.csv") == 0);
  const auto table = read_file(kTmp / "out.txt");
  // 14-parameter summary: per-dimension rates, the 3x3 offspring matrix,
  // and the two decay rates.
  for (const char* name : {"mu_1", "mu_2", "mu_3", "kstar_1_1", "kstar_3_3",
                           "beta_diag", "beta_off"}) {
    CHECK(table.find(name) != std::string::npos);
  }
  const auto draws = hawkes::read_draws_csv((kTmp / "full_draws.csv").string());
  std::size_t rows = 0;
  for (const auto& c : draws.chains) rows += c.size();
  CHECK(rows == 2 * 50);
}

TEST_CASE("fit and summarize input errors") {
  fs::create_directories(kTmp);
  const auto cfg_path = kTmp / "run2.json";
  write_file(cfg_path, small_config());

  const auto empty_events = kTmp / "empty.csv";
  write_file(empty_events, "dimension,time\n");
  CHECK(run_cli("fit " + cfg_path.string() + " " + empty_events.string()) == 1);

  const auto single = kTmp / "single.csv";
  write_file(single, "chain,draw,mu_1,lp\n1,1,0.5,-3.0\n");
  CHECK(run_cli("summarize " + single.string()) == 1);
}

}  // TEST_SUITE
