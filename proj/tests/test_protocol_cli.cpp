#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "symcol/cli.hpp"
#include "symcol/json_io.hpp"
#include "symcol/protocol.hpp"
#include "symcol/theory.hpp"

using namespace symcol;

namespace {

const char* kIntro = R"(role A
role B
init ok, bad, e
msg B -> A : ok . ?x
msg A -> B : h(h(ok . ?x) . ka)
goal forge ?sig = h(h(bad . ?w) . ka)
)";

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("protocol parsing") {
  ProtocolSpec p = parse_protocol(kIntro);
  CHECK(p.roles == std::vector<std::string>{"A", "B"});
  CHECK(p.init_knowledge.size() == 3);
  CHECK(p.messages.size() == 2);
  CHECK(p.goal_kind == ProtocolSpec::GoalKind::Forge);

  CHECK_THROWS_AS(parse_protocol("nonsense\n"), ParseError);
  CHECK_THROWS_AS(parse_protocol("role A\nmsg A -> C : a\ngoal secret a\n"), ParseError);
  CHECK_THROWS_AS(parse_protocol("role A\nrole B\nmsg A -> B : f(a,a,a,a)\ngoal secret a\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_protocol("role A\n"), ParseError);  // no goal
  CHECK_THROWS_AS(parse_protocol("role A\ngoal secret a\ngoal secret b\n"), ParseError);
}

TEST_CASE("bounded session expansion") {
  // one-message protocol: the sent message reaches the knowledge and the
  // goal becomes the final constraint
  ProtocolSpec p = parse_protocol("role A\nrole B\ninit b\nmsg A -> B : a\ngoal secret a\n");
  ConstraintSystem c = protocol_to_constraints(p, 1);
  CHECK(check_deterministic(c).ok);
  REQUIRE(c.steps.size() == 2);  // message receipt + goal
  bool a_known = false;
  for (const auto& t : c.steps.back().knowledge) a_known |= t == parse_term("a");
  CHECK(a_known);

  // empty narration with an eps goal is trivially satisfiable
  ProtocolSpec e = parse_protocol("role A\ngoal secret eps\n");
  ConstraintSystem ce = protocol_to_constraints(e, 1);
  CHECK(check_deterministic(ce).ok);
  auto r = solve_h(ce, ReductionLimits{}, 8);
  CHECK(r.verdict.is_sat());

  // receive variables become earlier targets
  ProtocolSpec rv = parse_protocol(kIntro);
  ConstraintSystem crv = protocol_to_constraints(rv, 1);
  CHECK(check_deterministic(crv).ok);
  CHECK(crv.steps.front().target == "?x");

  // sessions rename local variables apart
  ConstraintSystem two = protocol_to_constraints(rv, 2);
  CHECK(check_deterministic(two).ok);
  bool renamed = false;
  for (const auto& s : two.steps) renamed |= s.target == "?x_s2";
  CHECK(renamed);
}

TEST_CASE("intro attack differential") {
  std::string path = write_temp("symcol_intro.sy", kIntro);

  auto with_col = cli({"analyze", path, "--format", "json"});
  CHECK(with_col.exit_code == 1);
  json j = json::parse(with_col.out);
  CHECK(j["verdict"] == "sat");
  CHECK(j["attack"] == true);
  bool hc_step = false;
  for (const auto& d : j["trace"])
    for (const auto& s : d["steps"]) hc_step |= s["rule"] == "hc";
  CHECK(hc_step);

  auto without = cli({"analyze", path, "--format", "json", "--no-collisions"});
  CHECK(without.exit_code == 0);
  json j2 = json::parse(without.out);
  CHECK(j2["verdict"] == "unsat");
  CHECK(j2["exhausted"] == true);
}

TEST_CASE("analyze output is byte-identical across runs") {
  std::string path = write_temp("symcol_intro2.sy", kIntro);
  auto a = cli({"analyze", path, "--format", "json", "--seed", "7"});
  auto b = cli({"analyze", path, "--format", "json", "--seed", "7"});
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("derive subcommand") {
  std::string path = write_temp("symcol_derive.txt",
                                "knows: a . b\n"
                                "goal: b\n");
  auto r = cli({"derive", path, "--system", "au", "--format", "json"});
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j["derivable"] == true);
  CHECK(j["derivation"]["goal"] == "b");
  CHECK(!j["derivation"]["steps"].empty());

  std::string path2 = write_temp("symcol_derive2.txt",
                                 "knows: a . b\n"
                                 "goal: c\n");
  CHECK(cli({"derive", path2, "--system", "au"}).exit_code == 0);
}

TEST_CASE("solve subcommand") {
  std::string path = write_temp("symcol_solve.txt",
                                "knows: a . b\n"
                                "deduce: ?v\n"
                                "eq: ?v = b . a\n");
  auto r = cli({"solve", path, "--theory", "au", "--format", "json"});
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j["verdict"] == "sat");
  CHECK(j["witness"]["?v"] == "b . a");

  std::string path2 = write_temp("symcol_solve2.txt",
                                 "knows: a\n"
                                 "deduce: ?v\n"
                                 "eq: ?v = c\n");
  CHECK(cli({"solve", path2, "--theory", "au"}).exit_code == 0);

  std::string path3 = write_temp("symcol_solve3.txt",
                                 "knows: a\n"
                                 "deduce: ?v\n"
                                 "eq: ?v = h(a)\n");
  CHECK(cli({"solve", path3, "--theory", "h"}).exit_code == 1);

  std::string path4 = write_temp("symcol_solve4b.txt",
                                 "knows: a . b\n"
                                 "deduce: ?v\n"
                                 "eq: ?v = b . a\n"
                                 "order: ?v < a\n");
  CHECK(cli({"solve", path4, "--theory", "au"}).exit_code == 0);

  std::string path5 = write_temp("symcol_solve5.txt",
                                 "knows: a, b\n"
                                 "deduce: ?v\n"
                                 "eq: ?v = a . f(a,a,b,b)\n");
  CHECK(cli({"solve", path5, "--theory", "free"}).exit_code == 1);
}

TEST_CASE("unify subcommand") {
  std::string path = write_temp("symcol_unify.txt", "a = b\n");
  auto r = cli({"unify", path, "--format", "json"});
  CHECK(r.exit_code == 0);
  CHECK(json::parse(r.out)["verdict"] == "unsat");

  std::string path2 = write_temp("symcol_unify2.txt",
                                 "?x . ?y = a . b\n"
                                 "restrict ?x < b\n");
  auto r2 = cli({"unify", path2, "--format", "json"});
  CHECK(r2.exit_code == 1);
}

TEST_CASE("reduce subcommand dumps branches") {
  std::string path = write_temp("symcol_reduce.txt",
                                "knows: a\n"
                                "deduce: ?v\n"
                                "eq: ?v = h(a)\n");
  auto r = cli({"reduce", path, "--format", "json"});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["count"].get<int>() > 0);
  for (const auto& b : j["branches"]) {
    for (const auto& eq : b["system"]["equations"]) {
      CHECK(eq["lhs"].get<std::string>().find("h(") == std::string::npos);
      CHECK(eq["rhs"].get<std::string>().find("h(") == std::string::npos);
    }
  }
}

TEST_CASE("regression narrations") {
  // secret sent in clear: reachable even without collisions
  std::string replay = write_temp("symcol_replay.sy",
                                  "role A\nrole B\ninit a\n"
                                  "msg A -> B : k . a\n"
                                  "goal secret k\n");
  CHECK(cli({"analyze", replay}).exit_code == 1);
  CHECK(cli({"analyze", replay, "--no-collisions"}).exit_code == 1);

  // only the hash escapes: unreachable either way
  std::string hidden = write_temp("symcol_hidden.sy",
                                  "role A\nrole B\ninit a, b\n"
                                  "msg A -> B : h(k . a)\n"
                                  "goal secret k\n");
  CHECK(cli({"analyze", hidden}).exit_code == 0);
  CHECK(cli({"analyze", hidden, "--no-collisions"}).exit_code == 0);
}

TEST_CASE("input errors exit with 3") {
  std::string garbage = write_temp("symcol_garbage.sy", "this is not a protocol\n");
  CHECK(cli({"analyze", garbage}).exit_code == 3);
  CHECK(cli({"analyze", "/nonexistent/file.sy"}).exit_code == 3);
  CHECK(cli({"nonsense"}).exit_code == 3);
  std::string badterm = write_temp("symcol_badterm.txt", "knows: f(a)\ndeduce: ?v\n");
  CHECK(cli({"solve", badterm, "--theory", "au"}).exit_code == 3);

  std::string ok = write_temp("symcol_min.sy", "role A\ngoal secret eps\n");
  CHECK(cli({"analyze", ok, "--sessions", "0"}).exit_code == 3);
}

TEST_CASE("config file provides defaults and flags win") {
  std::string conf = write_temp("symcol_conf.txt", "format=json\nmax_word_len=4\n");
  std::string path = write_temp("symcol_solve4.txt",
                                "knows: a\n"
                                "deduce: ?v\n"
                                "eq: ?v = a . a . a . a . a . a\n");
  auto via_conf = cli({"solve", path, "--theory", "au", "--config", conf});
  CHECK(via_conf.exit_code == 2);  // budget 4 is too small
  CHECK(json::parse(via_conf.out)["verdict"] == "unknown");

  auto overridden = cli({"solve", path, "--theory", "au", "--config", conf,
                         "--max-word-len", "8"});
  CHECK(overridden.exit_code == 1);
}
