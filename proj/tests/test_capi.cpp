// Exercises the shared library through the C header only.

#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "ltbm/ltbm.h"

namespace {

const char* kWeighted = "[spacetime]\ncatalog = weighted_minkowski2\nN = 3\n[task]\nK = 0\nepsilon = 0.4\n";

}  // namespace

TEST_CASE("handle lifecycle and status reporting") {
  CHECK(std::string(ltbm_version()) == "1.0.0");
  ltbm_run* run = nullptr;
  CHECK(ltbm_run_parse("[spacetime]\ncatalog = nowhere\n", &run) == LTBM_ERR_CONFIG);
  CHECK(run == nullptr);
  CHECK(std::string(ltbm_last_error()).find("spacetime.catalog") == 0);
  CHECK(std::string(ltbm_status_name(LTBM_ERR_CONFIG)) == "ConfigError");
  CHECK(std::string(ltbm_status_name(LTBM_ERR_TOO_MANY_ATOMS)) == "TooManyAtoms");

  CHECK(ltbm_run_parse(nullptr, &run) == LTBM_ERR_INVALID_ARGUMENT);
  CHECK(ltbm_run_load("/nonexistent.ini", &run) == LTBM_ERR_CONFIG);

  REQUIRE(ltbm_run_parse(kWeighted, &run) == LTBM_OK);
  CHECK(std::string(ltbm_last_error()).empty());
  CHECK(ltbm_run_dim(run) == 2);
  CHECK(ltbm_run_set_threads(run, 0) == LTBM_ERR_INVALID_ARGUMENT);
  CHECK(ltbm_run_set_seed(run, 3) == LTBM_OK);
  ltbm_run_free(run);
  ltbm_run_free(nullptr);
}

TEST_CASE("commands through the C interface") {
  ltbm_run* run = nullptr;
  REQUIRE(ltbm_run_parse(kWeighted, &run) == LTBM_OK);
  int exit_status = -1;
  CHECK(ltbm_run_command(run, "counterexample", &exit_status) == LTBM_OK);
  CHECK(exit_status == 0);
  CHECK(std::string(ltbm_run_records(run)).find("record=counterexample state=certified") != std::string::npos);
  CHECK(std::string(ltbm_run_summary(run)).find("certified") != std::string::npos);

  CHECK(ltbm_run_command(run, "teleport", &exit_status) == LTBM_ERR_UNKNOWN_COMMAND);
  CHECK(exit_status == 64);
  CHECK(std::string(ltbm_run_records(run)).find("record=error") == 0);
  ltbm_run_free(run);

  REQUIRE(ltbm_run_parse("[spacetime]\ncatalog = minkowski2\n[task]\nx0 = 0, 0\nv0 = 3, 0\n", &run) == LTBM_OK);
  CHECK(ltbm_run_command(run, "check-ode", &exit_status) == LTBM_ERR_INVALID_ARGUMENT);
  CHECK(exit_status == 3);
  CHECK(ltbm_run_command(run, "counterexample", &exit_status) == LTBM_OK);
  CHECK(exit_status == 1);
  ltbm_run_free(run);
}

TEST_CASE("direct evaluations") {
  ltbm_run* run = nullptr;
  REQUIRE(ltbm_run_parse(kWeighted, &run) == LTBM_OK);
  const double x[] = {0.0, 0.0}, v[] = {1.0, 0.0};
  double be = 0.0;
  CHECK(ltbm_bakry_emery_ricci(run, x, v, &be) == LTBM_OK);
  CHECK(std::abs(be + 1.0) < 1e-6);

  const double y[] = {2.0, 1.0}, z[] = {0.0, 1.0};
  double ell = 0.0;
  int minus_inf = -1;
  CHECK(ltbm_time_separation(run, x, y, &ell, &minus_inf) == LTBM_OK);
  CHECK(minus_inf == 0);
  CHECK(std::abs(ell - std::sqrt(3.0)) < 1e-8);
  CHECK(ltbm_time_separation(run, x, z, &ell, &minus_inf) == LTBM_OK);
  CHECK(minus_inf == 1);
  const double far[] = {9.0, 0.0};
  CHECK(ltbm_time_separation(run, x, far, &ell, &minus_inf) != LTBM_OK);
  CHECK(!std::string(ltbm_last_error()).empty());
  CHECK(ltbm_bakry_emery_ricci(run, nullptr, v, &be) == LTBM_ERR_INVALID_ARGUMENT);
  ltbm_run_free(run);
}
