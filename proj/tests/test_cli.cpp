#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_helpers.hpp"

#include "dlrkit/cli.hpp"

using namespace dlrtest;

TEST_SUITE_BEGIN("cli");

namespace {

struct TempFile {
  std::filesystem::path path;
  TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("solve prints a machine-parseable verdict") {
  TempFile f("cli_solve.dlr",
             "(1*x - 1 <= 0) & (1 - 1*x <= 0) & (1*x - 1 != 0 | 1*y <= 0) & (-1*y <= 0)");
  RunResult res = run({"solve", f.str()});
  CHECK(res.code == 0);
  CHECK(res.out == "SAT x=1/1 y=0/1\n");

  TempFile g("cli_solve_unsat.dlr", "(x <= 0) & (-1*x <= 0) & (x != 0)");
  RunResult res2 = run({"solve", g.str()});
  CHECK(res2.code == 0);
  CHECK(res2.out == "UNSAT\n");
}

TEST_CASE("solve is deterministic byte for byte") {
  TempFile f("cli_det.dlr", "(x + y <= 0) & (x != 0 | y <= 0) & (-1*y - 3 <= 0)");
  RunResult a = run({"solve", f.str()});
  RunResult b = run({"solve", f.str()});
  CHECK(a.out == b.out);
  CHECK(a.code == 0);
}

TEST_CASE("optimize reports the supremum example") {
  TempFile f("cli_opt.dlr", "(1*x - 3 <= 0) & (1*x - 3 != 0)");
  RunResult res = run({"optimize", "--obj", "1*x", f.str()});
  CHECK(res.code == 0);
  CHECK(res.out.substr(0, 13) == "SUPREMUM 3/1\n");

  TempFile g("cli_opt2.dlr", "(1*x - 3 <= 0)");
  RunResult res2 = run({"optimize", "--obj", "1*x", g.str()});
  CHECK(res2.out.substr(0, 12) == "OPTIMUM 3/1\n");

  RunResult res3 = run({"optimize", "--obj", "1*x", "--threshold", "3", f.str()});
  CHECK(res3.out.find("DECISION false") != std::string::npos);
  RunResult res4 = run({"optimize", "--obj", "1*x", "--threshold", "2", f.str()});
  CHECK(res4.out.find("DECISION true") != std::string::npos);
}

TEST_CASE("non-horn input to solve is an input error") {
  TempFile f("cli_nothorn.dlr", "(x <= 0 | y <= 0)");
  RunResult res = run({"solve", f.str()});
  CHECK(res.code == 2);
  CHECK(res.err.find("Horn") != std::string::npos);
}

TEST_CASE("syntax errors exit with code 2") {
  TempFile f("cli_syntax.dlr", "(x <=");
  RunResult res = run({"solve", f.str()});
  CHECK(res.code == 2);
}

TEST_CASE("size limit exits with code 3") {
  // Mutually exclusive pins: every selection is infeasible, so the
  // enumeration must walk into the budget.
  std::string text;
  for (int i = 0; i < 14; ++i) {
    if (i) text += " & ";
    text += "(x - " + std::to_string(i) + " = 0 | x - " + std::to_string(i) + " = 0)";
  }
  TempFile f("cli_budget.dlr", text);
  RunResult res = run({"oracle-sat", f.str(), "--budget", "100"});
  CHECK(res.code == 3);
}

TEST_CASE("standardize and recognize cooperate") {
  TempFile f("cli_std.dlr", "(x - y < 0)");
  RunResult std_res = run({"standardize", f.str()});
  CHECK(std_res.code == 0);
  CHECK(std_res.out == "(x - y <= 0) & (x - y != 0)\n");

  TempFile horn("cli_horn.dlr", std_res.out.substr(0, std_res.out.size() - 1));
  CHECK(run({"recognize", horn.str()}).out == "HORN-DLR\n");
  TempFile nothorn("cli_nothorn2.dlr", "(x <= 0 | y <= 0)");
  RunResult rej = run({"recognize", nothorn.str()});
  CHECK(rej.code == 0);
  CHECK(rej.out.substr(0, 12) == "NOT-HORN-DLR");
}

TEST_CASE("qe eliminates the requested variables") {
  TempFile f("cli_qe.dlr", "(y - x <= 0) & (x - z <= 0)");
  RunResult res = run({"qe", "--exists", "x", f.str()});
  CHECK(res.code == 0);
  CHECK(res.out == "(y - z <= 0)\n");
}

TEST_CASE("closure, convexity and decomposition verbs") {
  TempFile f("cli_closure.dlr", "(x - 1 < 0)");
  CHECK(run({"closure", f.str()}).out == "(x - 1 <= 0)\n");

  TempFile conv("cli_conv.dlr", "(-1*x <= 0 | 1 - x <= 0) & (x - 2 <= 0 | 1 - x <= 0)");
  RunResult c = run({"check-convex", conv.str()});
  CHECK(c.code == 0);

  TempFile gap("cli_gap.dlr", "(x + 1 <= 0 | 1 - x <= 0)");
  RunResult g = run({"check-essconvex", gap.str()});
  CHECK(g.code == 0);
  CHECK(g.out.substr(0, 23) == "NOT-ESSENTIALLY-CONVEX ");

  TempFile horn("cli_ec.dlr", "(x <= 0)");
  CHECK(run({"check-essconvex", horn.str()}).out.substr(0, 18) == "ESSENTIALLY-CONVEX");

  TempFile unary("cli_dec.dlr", "(x != 0)");
  RunResult d = run({"decompose", unary.str()});
  CHECK(d.out == "PIECES (-inf,0/1) (0/1,+inf)\n");
}

TEST_CASE("segment profile in plain and csv form") {
  TempFile f("cli_prof.dlr", "(x + 1 <= 0 | 1 - x <= 0)");
  RunResult plain = run({"segment-profile", f.str(), "--p", "x=-2", "--q", "x=2"});
  CHECK(plain.code == 0);
  CHECK(plain.out ==
        "INSIDE [0/1,1/4] [3/4,1/1]\nOUTSIDE (1/4,3/4)\n");
  RunResult csv = run({"segment-profile", f.str(), "--p", "x=-2", "--q", "x=2", "--format", "csv"});
  CHECK(csv.out.find("inside,0/1,1,1/4,1") != std::string::npos);
}

TEST_CASE("compile-eq and lp2csp emit instance text") {
  RunResult res = run({"compile-eq", "2*x - 1*y = 0"});
  CHECK(res.code == 0);
  CHECK(res.out.substr(0, 8) == "free x y");
  CHECK(res.out.find("plus x x") != std::string::npos);

  TempFile rows("cli_rows.txt", "1*x <= 5\n");
  RunResult csp = run({"lp2csp", rows.str()});
  CHECK(csp.code == 0);
  CHECK(csp.out.find("leq") != std::string::npos);
}

TEST_CASE("reduction pipeline round-trips through files") {
  TempFile phi("cli_phi.txt", "a b c\n");
  TempFile u("cli_u.dlr", "(y = 0 | y - 1 = 0)");
  RunResult reduced = run({"reduce-1in3", phi.str(), u.str()});
  REQUIRE(reduced.code == 0);
  TempFile instance("cli_inst.csp", reduced.out);
  RunResult sat = run({"oracle-sat", instance.str()});
  CHECK(sat.code == 0);
  CHECK(sat.out == "SAT\n");
  RunResult direct = run({"oracle-1in3", phi.str()});
  CHECK(direct.out.substr(0, 3) == "SAT");

  TempFile phi2("cli_phi2.txt", "a a a\n");
  RunResult reduced2 = run({"reduce-1in3", phi2.str(), u.str()});
  REQUIRE(reduced2.code == 0);
  TempFile instance2("cli_inst2.csp", reduced2.out);
  CHECK(run({"oracle-sat", instance2.str()}).out == "UNSAT\n");
  CHECK(run({"oracle-1in3", phi2.str()}).out == "UNSAT\n");
}

TEST_CASE("witness verdicts feed back through segment-profile") {
  TempFile gap("cli_feedback.dlr", "(x + 1 <= 0 | 1 - x <= 0)");
  RunResult verdict = run({"check-essconvex", gap.str()});
  REQUIRE(verdict.code == 0);
  // NOT-ESSENTIALLY-CONVEX p=(x=a/b) q=(x=c/d) t∈(lo,hi)
  auto extract = [&](const std::string& key) {
    std::size_t at = verdict.out.find(key + "=(");
    REQUIRE(at != std::string::npos);
    std::size_t start = at + key.size() + 2;
    return verdict.out.substr(start, verdict.out.find(')', start) - start);
  };
  RunResult profile =
      run({"segment-profile", gap.str(), "--p", extract("p"), "--q", extract("q")});
  CHECK(profile.code == 0);
  std::size_t interval = verdict.out.find("t∈");
  std::string stated = verdict.out.substr(interval + 4);  // the UTF-8 glyph is 3 bytes
  stated = stated.substr(0, stated.find('\n'));
  CHECK(profile.out.find("OUTSIDE") != std::string::npos);
  CHECK(profile.out.find(stated) != std::string::npos);
}

TEST_CASE("plot-data emits csv pieces and cell vertices") {
  TempFile f("cli_plot.dlr", "(x + 1 <= 0 | 1 - x <= 0)");
  RunResult prof = run({"plot-data", "profile", f.str(), "--p", "x=-2", "--q", "x=2"});
  CHECK(prof.code == 0);
  CHECK(prof.out.substr(0, 31) == "kind,lo,lo_closed,hi,hi_closed\n");

  TempFile box("cli_box.dlr", "(-1*x <= 0) & (x - 1 <= 0) & (-1*y <= 0) & (y - 1 <= 0)");
  RunResult cells = run({"plot-data", "cells", box.str()});
  CHECK(cells.code == 0);
  CHECK(cells.out.find("0,0/1,0/1") != std::string::npos);
  CHECK(cells.out.find("0,1/1,1/1") != std::string::npos);
}

TEST_SUITE_END();
