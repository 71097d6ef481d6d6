#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "dts/io.hpp"

using namespace dts;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run dts_run(std::vector<std::string> args) {
  args.insert(args.begin(), "dts");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dts_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate trivial and example data") {
  const auto triv = scratch("triv");
  REQUIRE(dts_run({"generate", "--builtin", "trivial", "--N", "8", "--K", "8", "-o", triv}).code == 0);
  const auto pot = io::potential_from_json(io::read_json(triv + ".potential.json"));
  CHECK(pot.size() == 8);
  for (Index k = 0; k < 8; ++k) CHECK((pot[k] - identity(2)).norm() < 1e-15);
  const auto m = io::moments_from_json(io::read_json(triv + ".moments.json"));
  CHECK(m.count() == 9);
  CHECK(std::abs(m.s[0](0, 0) - 2.0) < 1e-15);

  const auto ex = scratch("ex");
  REQUIRE(dts_run({"generate", "--builtin", "example", "-o", ex}).code == 0);
  const auto em = io::moments_from_json(io::read_json(ex + ".moments.json"));
  CHECK(std::abs(em.s[1](0, 0) + 4.3094010767585031) < 1e-13);
}

TEST_CASE("verify, inverse and exit codes") {
  const auto ex = scratch("ex2");
  REQUIRE(dts_run({"generate", "--builtin", "example", "--K", "32", "-o", ex}).code == 0);
  const Run v = dts_run({"verify", "-i", ex + ".moments.json", "--N", "32"});
  CHECK(v.code == 0);

  const auto rec = scratch("rec.json");
  const Run inv = dts_run({"inverse", "-i", ex + ".moments.json", "--N", "8", "-o", rec});
  CHECK(inv.code == 0);
  CHECK(io::potential_from_json(io::read_json(rec)).size() == 8);

  const auto bad = scratch("bad.json");
  std::ofstream(bad) << R"({"p": 1, "nu": [[0]], "s": [[[2]], [[3]]]})";
  CHECK(dts_run({"verify", "-i", bad, "--N", "2"}).code == 1);
  CHECK(dts_run({"inverse", "-i", bad, "--N", "2", "-o", scratch("x.json")}).code == 1);

  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{\"p\": ";
  const Run b = dts_run({"verify", "-i", broken});
  CHECK(b.code == 3);
  CHECK(b.err.find("byte") != std::string::npos);

  CHECK(dts_run({"verify", "-i", ex + ".moments.json", "--tol", "nosuch=1"}).code == 1);
  CHECK(dts_run({"nosuchcommand"}).code == 1);
}

TEST_CASE("cd-check and kernel-sweep") {
  const auto ex = scratch("ex3");
  REQUIRE(dts_run({"generate", "--builtin", "example", "--N", "21", "-o", ex}).code == 0);
  CHECK(dts_run({"cd-check", "-i", ex + ".potential.json", "--trials", "20"}).code == 0);

  const auto triv = scratch("triv3");
  REQUIRE(dts_run({"generate", "--builtin", "trivial", "--K", "4", "-o", triv}).code == 0);
  const Run k = dts_run({"kernel-sweep", "-i", triv + ".moments.json", "--kmax", "2", "--zeta", "0,1",
                         "--xi", "0,1", "--threads", "2"});
  CHECK(k.code == 0);
  CHECK(k.out.find("0.444444444") != std::string::npos);
  CHECK(k.out.find("0.49382716") != std::string::npos);

  const Run near = dts_run({"kernel-sweep", "-i", triv + ".moments.json", "--kmax", "2", "--zeta",
                            "0.05,2", "--xi", "0,1"});
  CHECK(near.err.find("2i") != std::string::npos);
}

TEST_CASE("deterministic output under threads") {
  const auto ex = scratch("ex4");
  REQUIRE(dts_run({"generate", "--builtin", "example", "--K", "12", "-o", ex}).code == 0);
  const std::vector<std::string> base{"kernel-sweep", "-i", ex + ".moments.json", "--kmax", "10",
                                      "--zeta", "0,1", "--zeta", "1,1", "--xi", "1,1"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  CHECK(dts_run(one).out == dts_run(four).out);
}

TEST_CASE("factorize and bench") {
  const auto ex = scratch("ex5");
  REQUIRE(dts_run({"generate", "--builtin", "example", "-o", ex}).code == 0);
  const Run f = dts_run({"factorize", "-i", ex + ".triple.json", "-o", scratch("g.json")});
  CHECK(f.code == 0);
  CHECK(f.out.find("-1.83863995") != std::string::npos);

  const auto csv = scratch("bench.csv");
  const Run b = dts_run({"bench", "--N", "64,256", "--reps", "2", "-o", csv});
  CHECK(b.code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("dense_seconds") != std::string::npos);
}

}  // TEST_SUITE
