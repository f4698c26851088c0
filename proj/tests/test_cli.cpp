#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result mcfsim(const std::string& args) {
  const std::string cmd = std::string(MCFSIM_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

std::string scratch(const char* name) {
  const fs::path dir = fs::path(SCRATCH_DIR) / name;
  fs::remove_all(dir);
  return dir.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("sphere scenario passes and reports the radius error") {
  const auto dir = scratch("sphere");
  const auto r = mcfsim("run " + fixture("sphere.json") + " --output-dir " + dir);
  INFO(r.out);
  CHECK(r.code == 0);
  CHECK(fs::exists(fs::path(dir) / "trajectory.csv"));
  const auto report = slurp(fs::path(dir) / "report.json");
  CHECK(report.find("\"relative_error\"") != std::string::npos);
  CHECK(r.out.find("status: pass") != std::string::npos);
}

TEST_CASE("corrupted sign fails with exit 2") {
  const auto r = mcfsim("run " + fixture("corrupt_sign.json") + " --quiet --output-dir " + scratch("corrupt"));
  INFO(r.out);
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("errors exit 1") {
  CHECK(mcfsim("run /nonexistent.json").code == 1);
  const auto bad = mcfsim("run " + fixture("malformed.json") + " --output-dir " + scratch("bad"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("line 5") != std::string::npos);
  CHECK(mcfsim("convergence " + fixture("sphere.json") + " --levels 2").code == 1);
  CHECK(mcfsim("").code == 1);
  CHECK(mcfsim("oracle --n 2 --kappa0 1.5 --t 0").code == 1);
  CHECK(mcfsim("oracle --n 2 --kappa0 0.5 --t 0.4").code == 1);
}

TEST_CASE("oracle prints closed forms") {
  const auto r = mcfsim("oracle --n 2 --kappa0 0.5 --t 0 --t -1");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "t,r,H,A_sq,harnack_min,H_bound");
  CHECK(row0.rfind("0,1.0471975511965", 0) == 0);
  CHECK(row1.find("0.1356") != std::string::npos);
}

TEST_CASE("sphere convergence reports exact identities") {
  const auto dir = scratch("conv");
  const auto r = mcfsim("convergence " + fixture("sphere.json") + " --levels 3 --quiet --output-dir " + dir);
  INFO(r.out);
  CHECK(r.code == 0);
  const auto csv = slurp(fs::path(dir) / "convergence.csv");
  CHECK(csv.rfind("id,nested,residual_N64,residual_N128,residual_N256,order,pass\n", 0) == 0);
  CHECK(csv.find(",exact,pass") != std::string::npos);
}

TEST_CASE("repeated runs write identical CSV") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  CHECK(mcfsim("run " + fixture("profile.json") + " --quiet --output-dir " + a).code == 0);
  CHECK(mcfsim("run " + fixture("profile.json") + " --quiet --output-dir " + b).code == 0);
  const auto ca = slurp(fs::path(a) / "trajectory.csv");
  CHECK(ca.size() > 1000);
  CHECK(ca == slurp(fs::path(b) / "trajectory.csv"));
}
