#include "doctest.h"

#include "cli.hpp"

#include "bddqsp/diagram_io.hpp"

#include "support/fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace bddqsp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string without_times(const std::string &text) {
  return std::regex_replace(text, std::regex(R"([0-9]+\.[0-9]{3}\n)"), "T\n");
}

std::filesystem::path scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "bddqsp_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("validate accepts a valid diagram from standard input") {
  const auto r = run({"validate", "-"}, serialize_diagram(fixtures::four_var_fbdd()));
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "valid\n");
}

TEST_CASE("validate reports reducedness violations") {
  const std::string text = serialize_diagram(fixtures::unreduced_three_var());
  const auto strict = run({"validate", "-"}, text);
  CHECK(strict.code == cli::kExitFailure);
  CHECK(strict.out == "invalid\n");
  CHECK(strict.err.find("redundant") != std::string::npos);
  CHECK(run({"validate", "-", "--allow-unreduced"}, text).code == cli::kExitOk);
}

TEST_CASE("malformed input names the offending line") {
  const auto r = run({"validate", "-"}, "wfbdd v1\nnvars 2\nnode x\n");
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"eval", "-"}).code == cli::kExitUsage);
  CHECK(run({"family", "nope", "--n", "2"}).code == cli::kExitUsage);
  CHECK(run({"ratio", "--n", "3"}).code == cli::kExitUsage);
}

TEST_CASE("missing file is a runtime failure") {
  const auto r = run({"count", "/nonexistent/diagram.txt"});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("cannot read") != std::string::npos);
}

TEST_CASE("eval and count") {
  const std::string text = serialize_diagram(fixtures::four_var_fbdd());
  CHECK(run({"eval", "-", "--x", "1011"}, text).out == "1\n");
  CHECK(run({"eval", "-", "--x", "1000"}, text).out == "0\n");
  CHECK(run({"eval", "-", "--x", "10"}, text).code == cli::kExitFailure);
  CHECK(run({"count", "-"}, text).out == "7\n");
}

TEST_CASE("reduce logs both contraction steps") {
  const auto r = run({"reduce", "-", "--log"},
                     serialize_diagram(fixtures::unreduced_three_var()));
  CHECK(r.code == cli::kExitOk);
  CHECK(r.err == "delete node 6 -> 0\nshare node 7 -> 5\n");
  CHECK(parse_diagram(r.out).internal_count() == 5);
}

TEST_CASE("uniform writes to --out and the result evaluates uniformly") {
  const auto path = scratch("uniform.wfbdd");
  const auto r = run({"uniform", "-", "--out", path.string()},
                     serialize_diagram(fixtures::or2()));
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const Diagram d = read_diagram(in);
  CHECK(d.weighted());
  const auto e = run({"eval", path.string(), "--x", "11"});
  CHECK(e.out.find("amplitude 0.57735026918962") != std::string::npos);
}

TEST_CASE("family, synth and sim compose into a passing oracle check") {
  const auto fam = run({"family", "binomial", "--n", "4", "--delta", "0.5"});
  REQUIRE(fam.code == cli::kExitOk);
  const auto synth = run({"synth", "-"}, fam.out);
  REQUIRE(synth.code == cli::kExitOk);
  const auto sim = run({"sim", "-", "--compare-oracle", "--dense-check"}, synth.out);
  CHECK(sim.code == cli::kExitOk);
  CHECK(sim.out.find("dense_check max_difference") != std::string::npos);
  CHECK(sim.out.find("\nPASS\n") != std::string::npos);
}

TEST_CASE("phase oracle check through the command line") {
  const std::string text = serialize_diagram(fixtures::four_var_fbdd());
  const auto synth = run({"synth-phase", "-", "--theta", "0.5"}, text);
  REQUIRE(synth.code == cli::kExitOk);
  const auto sim = run({"sim", "-", "--compare-oracle"}, synth.out);
  CHECK(sim.code == cli::kExitOk);
  CHECK(sim.out.find("ancillas_clean yes") != std::string::npos);
}

TEST_CASE("sim with --input seeds the variable register") {
  const std::string text = serialize_diagram(fixtures::single_var());
  const auto synth = run({"synth-phase", "-", "--theta", "3.141592653589793"}, text);
  const auto sim = run({"sim", "-", "--input", "1"}, synth.out);
  CHECK(sim.code == cli::kExitOk);
  CHECK(sim.out.rfind("100 -1 ", 0) == 0);
}

TEST_CASE("ratio csv output") {
  const auto r = run({"ratio", "--n", "1", "--delta", "0", "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.rfind("n,delta,", 0) == 0);
  CHECK(r.out.find("1.4142135623730951") != std::string::npos);
}

TEST_CASE("blockenc prints the projector block") {
  const auto u = run({"uniform", "-"}, serialize_diagram(fixtures::single_var()));
  const auto r = run({"blockenc", "projector", "-"}, u.out);
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("1 1 1") != std::string::npos);
}

TEST_CASE("bench is deterministic for a fixed seed and honours the environment") {
  const auto a = run({"bench", "--csv", "--seed", "9"});
  const auto b = run({"bench", "--csv", "--seed", "9"});
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out.rfind("name,n,V,E,1q,2q,toffolis,ancillas,fidelity,wall_time_ms\n", 0) == 0);
  CHECK(without_times(a.out) == without_times(b.out));

  setenv("BDDQSP_SEED", "9", 1);
  const auto c = run({"bench", "--csv"});
  unsetenv("BDDQSP_SEED");
  CHECK(without_times(c.out) == without_times(a.out));
  CHECK(without_times(run({"bench", "--csv", "--seed", "10"}).out) !=
        without_times(a.out));
}

TEST_CASE("bench families suite passes") {
  const auto r = run({"bench", "--suite", "families"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("binomial-8") != std::string::npos);
}
