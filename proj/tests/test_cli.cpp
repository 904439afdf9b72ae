#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  RunResult r;
  std::string cmd = std::string(NOVSYM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.stdout_text.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args, int expect_code) {
  RunResult r = run("--json " + args);
  CHECK(r.exit_code == expect_code);
  return nlohmann::json::parse(r.stdout_text);
}

}  // namespace

TEST_CASE("exit codes: pass, verification failure, usage error") {
  CHECK(run("verify-symmetries").exit_code == 0);
  CHECK(run("verify-symmetries --extra 0,0,u").exit_code == 1);
  CHECK(run("adjoint --equation \"u +\"").exit_code == 2);
  CHECK(run("reduce bogus").exit_code == 2);
  CHECK(run("no-such-command").exit_code != 0);
}

TEST_CASE("empty generator list is informational") {
  RunResult r = run("--json verify-symmetries --generators \"\"");
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j["status"] == "info");
}

TEST_CASE("report envelope") {
  auto j = run_json("adjoint", 0);
  CHECK(j.contains("command"));
  CHECK(j.contains("inputs"));
  CHECK(j.contains("results"));
  CHECK(j["status"] == "pass");
  CHECK(j.contains("artifact_version"));
}

TEST_CASE("conservation vector payload for the dilation symmetry") {
  auto j = run_json("conslaw --generator X5", 0);
  auto& res = j["results"];
  CHECK(res["C0"] == "u^2 + u_x^2");
  CHECK(res["C1"] == "-2*u*u_tx + 2*u^4 - 2*u^3*u_xx");
  CHECK(res["multiplier"] == "2*u");
  CHECK(res["trivial"] == false);
  CHECK(res["generator"] == "X5");
}

TEST_CASE("translations give the null vector") {
  for (const char* gen : {"X1", "X2", "X3", "X4"}) {
    auto j = run_json(std::string("conslaw --generator ") + gen, 0);
    CAPTURE(gen);
    CHECK(j["results"]["C0"] == "0");
    CHECK(j["results"]["C1"] == "0");
    CHECK(j["results"]["trivial"] == true);
  }
}

TEST_CASE("conslaw rejects a non-symmetry with its residual") {
  RunResult r = run("--json conslaw --generator 0,0,u");
  CHECK(r.exit_code == 1);
  auto j = nlohmann::json::parse(r.stdout_text);
  CHECK(j["status"] == "fail");
  CHECK(j["results"].contains("on_shell_residual"));
}

TEST_CASE("adjoint rejects a bad substitution") {
  RunResult r = run("--json adjoint --subst u^2");
  CHECK(r.exit_code == 1);
  auto j = nlohmann::json::parse(r.stdout_text);
  bool found = false;
  for (const auto& s : j["results"]["substitutions"]) {
    if (s["phi"] == "u^2") {
      found = true;
      CHECK(s["vanishes_on_solutions"] == false);
    }
  }
  CHECK(found);
}

TEST_CASE("simulate summary carries the contract keys") {
  auto j = run_json("simulate --u0 \"2+sin(x)\" --n 64 --dt 1e-2 --t-end 0.1", 0);
  auto& res = j["results"];
  for (const char* key : {"n", "dt", "t_end", "scheme", "h1_initial", "h1_final",
                          "h1_max_drift_rel"}) {
    CAPTURE(key);
    CHECK(res.contains(key));
  }
  CHECK(res["n"] == 64);
  CHECK(res["scheme"] == "spectral");
  CHECK(res["h1_max_drift_rel"].get<double>() < 1e-6);
}

TEST_CASE("exp-profile reduction reports the identically zero residual") {
  auto j = run_json("reduce exp-profile", 0);
  CHECK(j["results"]["identically_zero"] == true);
  CHECK(j["results"]["substituted_residual"] == "0");
}

TEST_CASE("separable reduction ties the two equations with the shared constant") {
  auto j = run_json("reduce separable", 0);
  CHECK(j["results"]["time_residual"] == "phi'(t) - k*phi(t)^3");
  std::string ode = j["results"]["ode_residual"];
  CHECK(ode.find("k*u") != std::string::npos);
}

TEST_CASE("finite difference scheme through the command line") {
  auto j = run_json("simulate --u0 \"2+sin(x)\" --n 64 --dt 1e-3 --t-end 0.05 --scheme fd", 0);
  CHECK(j["results"]["scheme"] == "finite-difference");
  CHECK(j["results"]["h1_max_drift_rel"].get<double>() < 1e-4);
}

TEST_CASE("usage errors map to exit code 2, help to 0") {
  CHECK(run("--bogus-flag verify-symmetries").exit_code == 2);
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
  CHECK(run("").exit_code == 2);  // a subcommand is required
}
