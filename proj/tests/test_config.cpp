#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ymlab/config.hpp"
#include "ymlab/error.hpp"
#include "ymlab/runner.hpp"

using namespace ymlab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.cfg");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Configuration);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parses every key") {
  const ExperimentConfig c = parse_config(R"(# comment
schema_version = 1
scenario = recover
group = U1
grid.n = 32
grid.L = 3.5     # trailing comment
time.T = 0.5
time.nodes = 12
time.gamma = 3
time.cfl_safety = 0.25
exponent.a = 0.6
exponent.b = 0.9
recover.tau = 0.4, 0.2
recover.direct = false
seed = 18446744073709551615
output.snapshot_every = 4
init.kind = spectral
init.roughness = 1.5
init.rms = 0.3
init.kmax = 4
init.coulomb = true
variation.kind = modes
variation.modes = 0 0 1 0 0 0.5 0.1; 2 0 0 1 1 0.25 0
variational.balance_tolerance = 1e-5
checks.gfs_calibration = calibrate
checks.gfs_gamma = 0.5
checks.calibration_samples = 10
checks.hardy_samples = 5
checks.gfs_samples = 6
checks.identities = false
)");
  CHECK(c.scenario == Scenario::Recover);
  CHECK(c.group == GroupName::U1);
  CHECK(c.n == 32);
  CHECK(c.L == 3.5);
  CHECK(c.T == 0.5);
  CHECK(c.nodes == 12);
  CHECK(c.gamma == 3.0);
  CHECK(c.cfl_safety == 0.25);
  CHECK(c.a == 0.6);
  CHECK(c.b == 0.9);
  CHECK(c.tau == std::vector<double>{0.4, 0.2});
  CHECK_FALSE(c.recover_direct);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.snapshot_every == 4);
  CHECK(c.connection.kind == InitialData::Kind::Spectral);
  CHECK(c.connection.spectral.roughness == 1.5);
  CHECK(c.connection.spectral.kmax == 4);
  CHECK(c.connection.spectral.coulomb);
  REQUIRE(c.variation.modes.size() == 2);
  CHECK(c.variation.modes[1].component == 2);
  CHECK(c.variation.modes[1].k == std::array<int, 3>{0, 1, 1});
  CHECK(c.variation.modes[1].amplitude == 0.25);
  CHECK(c.balance_tolerance == 1e-5);
  CHECK(c.gfs_calibration == "calibrate");
  CHECK(c.gfs_gamma.value() == 0.5);
  CHECK(c.calibration_samples == 10);
  CHECK_FALSE(c.identities);
}

TEST_CASE("errors name the line") {
  CHECK(contains(error_of("schema_version = 1\n\ngrid.nn = 8\n"), "t.cfg:3: unknown key 'grid.nn'"));
  CHECK(contains(error_of("grid.n = 8\n"), "t.cfg:1: first entry must be schema_version"));
  CHECK(contains(error_of("schema_version = 2\n"), "unsupported schema_version"));
  CHECK(contains(error_of("schema_version = 1\nseed = 1\nseed = 2\n"), "t.cfg:3: duplicate key"));
  CHECK(contains(error_of("schema_version = 1\ngrid.n 8\n"), "t.cfg:2: expected 'key = value'"));
  CHECK(contains(error_of("schema_version = 1\ntime.T = fast\n"), "t.cfg:2: time.T: expected a real"));
  CHECK(contains(error_of("schema_version = 1\nseed = -1\n"), "t.cfg:2: seed"));
  CHECK(contains(error_of("schema_version = 1\ninit.modes = 0 0 1 0\n"), "t.cfg:2: init.modes"));
  CHECK(contains(error_of("schema_version = 1\nrecover.direct = maybe\n"), "true or false"));
  CHECK(contains(error_of("schema_version = 1\nscenario = plot\n"), "unknown scenario"));
  CHECK(contains(error_of(""), "missing schema_version"));
}

TEST_CASE("range validation") {
  CHECK(contains(error_of("schema_version = 1\nexponent.a = 0.4\n"), "exponent.a"));
  CHECK(contains(error_of("schema_version = 1\nexponent.b = 1\n"), "exponent.b"));
  CHECK(contains(error_of("schema_version = 1\ngrid.n = 12\n"), "power of two"));
  CHECK(contains(error_of("schema_version = 1\ntime.T = 0.1\nrecover.tau = 0.2\n"), "recover.tau"));
  CHECK(contains(error_of("schema_version = 1\ntime.gamma = 0.5\n"), "time.gamma"));
  CHECK(contains(error_of("schema_version = 1\ngroup = U1\ninit.modes = 0 1 1 0 0 1 0\n"),
                 "out of range"));
}

TEST_CASE("canonical form round-trips and drives the hash") {
  ExperimentConfig c;
  set_config_value(c, "variation.modes", "1 2 0 1 0 0.5 0.25");
  set_config_value(c, "checks.gfs_gamma", "0.125");
  const ExperimentConfig d = parse_config(c.canonical());
  CHECK(d.canonical() == c.canonical());
  CHECK(d.hash() == c.hash());
  CHECK(c.hash().size() == 16);
  ExperimentConfig e = c;
  set_config_value(e, "seed", "2");
  CHECK(e.hash() != c.hash());
  CHECK_THROWS_AS(set_config_value(e, "bogus", "1"), Error);
}

TEST_CASE("scenario names") {
  for (auto s : {Scenario::HeatFlow, Scenario::Variational, Scenario::Recover, Scenario::Checks,
                 Scenario::Oracle})
    CHECK(parse_scenario(to_string(s)) == s);
  CHECK_FALSE(parse_scenario("HEATFLOW").has_value());
}

TEST_CASE("runner writes hashed artifacts and is repeatable") {
  namespace fs = std::filesystem;
  ExperimentConfig c = parse_config("schema_version = 1\ngrid.n = 8\ntime.T = 0.05\ntime.nodes = 6\n");
  RunOptions o;
  o.scenario = Scenario::HeatFlow;
  o.snapshot_every = 3;
  o.out_dir = "runner_a";
  const RunOutcome a = run_experiment(c, o);
  o.out_dir = "runner_b";
  const RunOutcome b = run_experiment(c, o);
  CHECK(a.pass());
  CHECK(a.files == b.files);
  for (const auto& f : a.files) CHECK(slurp(fs::path("runner_a") / f) == slurp(fs::path("runner_b") / f));
  const std::string csv = slurp("runner_a/heatflow.csv");
  ExperimentConfig eff = c;
  eff.scenario = Scenario::HeatFlow;
  eff.snapshot_every = 3;
  CHECK(csv.rfind("# ymlab heatflow config_hash=" + eff.hash() + " schema=1\n", 0) == 0);
  CHECK(fs::exists("runner_a/snapshots/A_00003.ymf"));
  CHECK(fs::exists("runner_a/snapshots/A_00006.ymf"));
  CHECK(contains(slurp("runner_a/summary.json"), "\"config_hash\": \"" + eff.hash() + "\""));
  fs::remove_all("runner_a");
  fs::remove_all("runner_b");
  o.scenario = std::nullopt;
  CHECK_THROWS_AS(run_experiment(c, o), Error);
}
