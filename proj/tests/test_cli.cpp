#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "mimetic/harness.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(MIMETIC_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mimetic-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("solve writes one CSV record") {
  const auto out = scratch("solve.csv");
  fs::remove(out);
  CHECK(run("solve --method dual --order 2 --elements 2x2 --c 0.1 --domain unit --out " + out.string()) == 0);
  std::ifstream in(out);
  REQUIRE(in);
  const auto records = mimetic::parse_csv(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].method == mimetic::Method::dual);
  CHECK(records[0].N == 2);
  CHECK(records[0].Mx == 2);
  CHECK(records[0].c == 0.1);
  CHECK(records[0].linf_conservation < 1e-11);

  CHECK(run("solve --method single --order 1 --elements 3 --c 0 --out " + out.string() +
            " --quad-order 6") == 0);
}

TEST_CASE("invalid configurations exit with status 2") {
  const auto out = scratch("bad.csv").string();
  CHECK(run("solve --method single --order 0 --elements 2x2 --c 0 --out " + out) == 2);
  CHECK(run("solve --method single --order 2 --elements 2x2 --c 0.4 --out " + out) == 2);
  CHECK(run("solve --method triple --order 2 --elements 2x2 --c 0 --out " + out) == 2);
  CHECK(run("solve --method dual --order 2 --elements 2by2 --c 0 --out " + out) == 2);
  CHECK(run("solve --method dual --order 2 --elements 2x2 --c 0 --domain torus --out " + out) == 2);
  CHECK(run("solve --method dual --order 2 --elements 2x2 --c 0 --quad-order 3 --out " + out) == 2);
  CHECK(run("solve --method dual --order 2 --elements 2x2 --c 0") == 2);
  CHECK(run("explode") == 2);
  CHECK(run("") == 2);
  CHECK(run("convergence --sweep q --method both --orders 1 --mesh-levels 2 --c-list 0 --out " + out) == 2);
}

TEST_CASE("help exits cleanly") { CHECK(run("--help") == 0); }

TEST_CASE("small convergence sweep") {
  const auto out = scratch("sweep.csv");
  CHECK(run("convergence --sweep h --method both --orders 1,2 --mesh-levels 2,4,8 --c-list 0,0.1 --out " +
            out.string()) == 0);
  std::ifstream in(out);
  const auto records = mimetic::parse_csv(in);
  CHECK(records.size() == 24);
  // a slope needs three levels
  CHECK(run("convergence --sweep h --method dual --orders 1 --mesh-levels 2,4 --c-list 0 --out " + out.string()) == 2);

  CHECK(run("convergence --sweep p --method single --orders 1,2,3 --mesh-levels 2 --c-list 0 --out " +
            out.string()) == 0);
  std::ifstream again(out);
  CHECK(mimetic::parse_csv(again).size() == 3);
}
