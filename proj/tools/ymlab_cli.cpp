// Command-line front end. Talks to the library only through ymlab.h.
#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "ymlab/ymlab.h"

namespace {

int exit_code(ymlab_status s) {
  switch (s) {
    case YMLAB_OK: return 0;
    case YMLAB_CHECK_FAILED: return 1;
    case YMLAB_CONFIG_ERROR:
    case YMLAB_INVALID_ARGUMENT:
    case YMLAB_IO_ERROR: return 2;
    case YMLAB_DIVERGENCE:
    case YMLAB_NUMERIC_ERROR: return 3;
    case YMLAB_INTERNAL: return 4;
  }
  return 4;
}

int report(ymlab_status s) {
  if (s == YMLAB_OK) return 0;
  const char* msg = ymlab_last_error();
  std::fprintf(stderr, "ymlab: %s\n", *msg ? msg : ymlab_status_string(s));
  if (s == YMLAB_DIVERGENCE && ymlab_last_error_node() >= 0)
    std::fprintf(stderr, "ymlab: diverged at time node %ld\n", ymlab_last_error_node());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yang-Mills heat flow experiments on a periodic lattice"};
  app.set_version_flag("--version", std::string(ymlab_version()));
  app.require_subcommand(1);

  std::string config, out = "out";
  uint64_t seed = 0;
  int threads = 0, snapshot_every = -1;
  std::vector<std::string> overrides;

  const char* names[][2] = {{"heatflow", "integrate the flow and record norms along it"},
                            {"variational", "solve the augmented linearised equation"},
                            {"recover", "recover variational solutions over a tau sweep"},
                            {"checks", "inequality sweeps and the identity suite"},
                            {"oracle", "abelian comparisons against closed forms"}};
  for (const auto& nm : names) {
    CLI::App* sub = app.add_subcommand(nm[0], nm[1]);
    sub->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
    sub->add_option("--snapshot-every", snapshot_every, "write a field snapshot every K nodes")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--set", overrides, "extra key=value override (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  ymlab_config* cfg = nullptr;
  if (int rc = report(ymlab_config_load(config.c_str(), &cfg))) return rc;
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "ymlab: --set expects key=value, got '%s'\n", kv.c_str());
      ymlab_config_free(cfg);
      return 2;
    }
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (int rc = report(ymlab_config_set(cfg, key.c_str(), value.c_str()))) {
      ymlab_config_free(cfg);
      return rc;
    }
  }

  const std::string scenario = sub->get_name();
  ymlab_run_options opt{};
  opt.out_dir = out.c_str();
  opt.scenario = scenario.c_str();
  opt.has_seed = sub->count("--seed") > 0;
  opt.seed = seed;
  opt.threads = threads;
  opt.snapshot_every = snapshot_every;
  const ymlab_status s = ymlab_run(cfg, &opt);
  ymlab_config_free(cfg);
  if (s == YMLAB_OK) std::printf("%s: all checks passed (%s)\n", scenario.c_str(), out.c_str());
  return report(s);
}
