#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "ymlab/ymlab.h"

TEST_CASE("config handles and error reporting") {
  ymlab_config* cfg = nullptr;
  CHECK(ymlab_config_parse("schema_version = 1\ngrid.n = 8\n", "inline", &cfg) == YMLAB_OK);
  REQUIRE(cfg != nullptr);
  char hash[17];
  CHECK(ymlab_config_hash(cfg, hash, sizeof hash) == YMLAB_OK);
  CHECK(std::strlen(hash) == 16);
  CHECK(ymlab_config_set(cfg, "exponent.a", "2") == YMLAB_CONFIG_ERROR);
  CHECK(std::string(ymlab_last_error()).find("exponent.a") != std::string::npos);
  char again[17];
  ymlab_config_hash(cfg, again, sizeof again);
  CHECK(std::string(hash) == again);  // failed set leaves the config untouched
  CHECK(ymlab_config_set(cfg, "seed", "9") == YMLAB_OK);
  ymlab_config_hash(cfg, again, sizeof again);
  CHECK(std::string(hash) != again);
  CHECK(ymlab_config_hash(cfg, hash, 8) == YMLAB_INVALID_ARGUMENT);
  ymlab_config_free(cfg);

  ymlab_config* bad = nullptr;
  CHECK(ymlab_config_parse("schema_version = 1\nfoo = 1\n", "x.cfg", &bad) == YMLAB_CONFIG_ERROR);
  CHECK(bad == nullptr);
  CHECK(std::string(ymlab_last_error()).find("x.cfg:2") != std::string::npos);
  CHECK(ymlab_config_load("/nonexistent/file.cfg", &bad) == YMLAB_CONFIG_ERROR);
  CHECK(ymlab_config_parse(nullptr, nullptr, &bad) == YMLAB_INVALID_ARGUMENT);
  CHECK(std::string(ymlab_version()).size() > 0);
}

TEST_CASE("run maps outcomes to status codes") {
  ymlab_config* cfg = nullptr;
  REQUIRE(ymlab_config_parse("schema_version = 1\ngrid.n = 8\ntime.T = 0.02\ntime.nodes = 4\n",
                             "inline", &cfg) == YMLAB_OK);
  ymlab_run_options opt{};
  opt.out_dir = "capi_run";
  opt.scenario = "heatflow";
  opt.snapshot_every = -1;
  CHECK(ymlab_run(cfg, &opt) == YMLAB_OK);
  opt.scenario = "nope";
  CHECK(ymlab_run(cfg, &opt) == YMLAB_CONFIG_ERROR);
  opt.scenario = "oracle";
  CHECK(ymlab_run(cfg, &opt) == YMLAB_CONFIG_ERROR);
  opt.scenario = "checks";
  CHECK(ymlab_run(cfg, &opt) == YMLAB_CONFIG_ERROR);
  ymlab_config_set(cfg, "init.modes", "0 0 0 1 0 400 0; 1 1 0 0 1 400 0; 2 2 1 0 0 400 0");
  ymlab_config_set(cfg, "time.T", "1");
  opt.scenario = "heatflow";
  CHECK(ymlab_run(cfg, &opt) == YMLAB_DIVERGENCE);
  CHECK(ymlab_last_error_node() >= 0);
  ymlab_config_free(cfg);
}

TEST_CASE("field handles") {
  ymlab_field* A = nullptr;
  REQUIRE(ymlab_field_create(8, 2.0, YMLAB_SU2, 1, &A) == YMLAB_OK);
  double* data = nullptr;
  size_t size = 0;
  REQUIRE(ymlab_field_data(A, &data, &size) == YMLAB_OK);
  CHECK(size == 8u * 8u * 8u * 3u * 3u);
  for (size_t i = 0; i < size; ++i) data[i] = 0.5;
  double nrm = 0.0;
  CHECK(ymlab_field_lp_norm(A, 2.0, &nrm) == YMLAB_OK);
  CHECK(nrm == doctest::Approx(std::sqrt(9 * 0.25) * std::pow(2.0, 1.5)));
  // A_x = e1, A_y = e2 (channel = component * 3 + basis), so [A ^ A] != 0
  const size_t sites = 8 * 8 * 8;
  for (size_t i = 0; i < size; ++i) data[i] = (i / sites == 0 || i / sites == 4) ? 1.0 : 0.0;
  CHECK(ymlab_field_lp_norm(A, 0.5, &nrm) == YMLAB_INVALID_ARGUMENT);
  ymlab_field* B = nullptr;
  CHECK(ymlab_field_curvature(A, &B) == YMLAB_OK);
  CHECK(ymlab_field_save(B, "capi_field.ymf") == YMLAB_OK);
  ymlab_field* C = nullptr;
  CHECK(ymlab_field_load("capi_field.ymf", &C) == YMLAB_OK);
  double nb = 0.0, nc = 0.0;
  ymlab_field_lp_norm(B, 2.0, &nb);
  ymlab_field_lp_norm(C, 2.0, &nc);
  CHECK(nb == nc);
  CHECK(nb > 0.0);
  std::remove("capi_field.ymf");
  CHECK(ymlab_field_load("capi_field.ymf", &C) == YMLAB_IO_ERROR);
  ymlab_field* D = nullptr;
  CHECK(ymlab_field_create(8, 2.0, YMLAB_SU2, 5, &D) == YMLAB_INVALID_ARGUMENT);
  ymlab_field_free(A);
  ymlab_field_free(B);
  ymlab_field_free(C);
}
