#include <doctest.h>

#include "test_helpers.hpp"

using namespace dlrtest;

TEST_SUITE_BEGIN("glp");

namespace {

HornDlrFormula horn(std::vector<Clause> clauses) { return HornDlrFormula{CnfFormula{clauses}}; }

}  // namespace

TEST_CASE("preprocessing removes doomed disequalities") {
  VarPool pool;
  VarId x = pool.var("x"), y = pool.var("y");
  {
    // x forced to 0, so x != 0 can never fire.
    HornDlrFormula f = horn({Clause{{leq_zero(term({{x, 1}}))}},
                             Clause{{leq_zero(term({{x, -1}}))}},
                             Clause{{neq_zero(term({{x, 1}})),
                                     leq_zero(term({{y, 1}}, Rational(-5)))}}});
    auto out = star_preprocess(f);
    REQUIRE(out);
    REQUIRE(out->cnf.clauses.size() == 3);
    CHECK(out->cnf.clauses[2].literals ==
          std::vector<Literal>{leq_zero(term({{y, 1}}, Rational(-5)))});
  }
  {
    // Already satisfies the property: unchanged.
    HornDlrFormula f = horn({Clause{{neq_zero(term({{x, 1}}))}}});
    auto out = star_preprocess(f);
    REQUIRE(out);
    CHECK(out->cnf.clauses == f.cnf.clauses);
  }
  {
    HornDlrFormula f = horn({Clause{{leq_zero(term({{x, 1}}))}},
                             Clause{{leq_zero(term({{x, -1}}))}},
                             Clause{{neq_zero(term({{x, 1}}))}}});
    CHECK(!star_preprocess(f));
  }
}

TEST_CASE("preprocessing preserves the solution set") {
  VarPool pool;
  std::vector<VarId> vars{pool.var("a"), pool.var("b")};
  Rng rng(51);
  for (int i = 0; i < 60; ++i) {
    HornDlrFormula f = rng.random_horn(vars, 4, 3);
    auto out = star_preprocess(f);
    if (!out) {
      CHECK(!horn_dlr_sat(f));
      continue;
    }
    for (int j = 0; j < 15; ++j) {
      Point p = rng.random_point(vars);
      CHECK(eval_formula(f.cnf, p) == eval_formula(out->cnf, p));
    }
  }
}

TEST_CASE("the three documented outcomes") {
  VarPool pool;
  VarId x = pool.var("x");
  LinearTerm obj = term({{x, 1}});
  {
    GlpResult res = glp_solve(
        {horn({Clause{{leq_zero(term({{x, 1}}, Rational(-3)))}}}), obj, std::nullopt});
    REQUIRE(std::holds_alternative<GlpOptimum>(res));
    const GlpOptimum& opt = std::get<GlpOptimum>(res);
    CHECK(opt.value == Rational(3));
    CHECK(opt.witness.at(x) == Rational(3));
  }
  {
    GlpResult res = glp_solve({horn({Clause{{leq_zero(term({{x, 1}}, Rational(-3)))}},
                                     Clause{{neq_zero(term({{x, 1}}, Rational(-3)))}}}),
                               obj, std::nullopt});
    REQUIRE(std::holds_alternative<GlpSupremum>(res));
    const GlpSupremum& sup = std::get<GlpSupremum>(res);
    CHECK(sup.value == Rational(3));
    CHECK(eval_term(obj, sup.probe) >= Rational(3) - sup.probe_gap);
    CHECK(eval_term(obj, sup.probe) < Rational(3));
  }
  {
    GlpResult res =
        glp_solve({horn({Clause{{leq_zero(term({{x, -1}}))}}}), obj, std::nullopt});
    CHECK(std::holds_alternative<GlpUnbounded>(res));
  }
  {
    GlpResult res = glp_solve({horn({Clause{{leq_zero(term({{x, 1}}))}},
                                     Clause{{leq_zero(term({{x, -1}}, Rational(1)))}}}),
                               obj, std::nullopt});
    CHECK(std::holds_alternative<GlpInfeasible>(res));
  }
}

TEST_CASE("decision form compares against the threshold") {
  VarPool pool;
  VarId x = pool.var("x");
  LinearTerm obj = term({{x, 1}});
  HornDlrFormula attained = horn({Clause{{leq_zero(term({{x, 1}}, Rational(-3)))}}});
  CHECK(glp_decide({attained, obj, Rational(3)}));
  CHECK(glp_decide({attained, obj, Rational(2)}));
  CHECK(!glp_decide({attained, obj, Rational(4)}));

  HornDlrFormula open = horn({Clause{{leq_zero(term({{x, 1}}, Rational(-3)))}},
                              Clause{{neq_zero(term({{x, 1}}, Rational(-3)))}}});
  CHECK(!glp_decide({open, obj, Rational(3)}));
  CHECK(glp_decide({open, obj, Rational(2)}));
  CHECK_THROWS_AS(glp_decide({attained, obj, std::nullopt}), InvalidParamsError);
}

TEST_CASE("decision agrees with the satisfiability oracle on random problems") {
  VarPool pool;
  std::vector<VarId> vars{pool.var("a"), pool.var("b")};
  Rng rng(52);
  for (int i = 0; i < 200; ++i) {
    HornDlrFormula f = rng.random_horn(vars, 4, 2);
    LinearTerm obj = rng.random_term(vars);
    Rational m = rng.small_rational(4);
    bool claimed = glp_decide({f, obj, m});
    CnfFormula with_bound = f.cnf;
    with_bound.clauses.push_back(Clause{{leq_zero(LinearTerm(m) - obj)}});
    bool actual = exhaustive_sat(with_bound).has_value();
    CHECK(claimed == actual);
  }
}

TEST_CASE("trichotomy certificates at several scales") {
  VarPool pool;
  std::vector<VarId> vars{pool.var("a"), pool.var("b")};
  Rng rng(53);
  int optimums = 0, suprema = 0, unbounded = 0;
  for (int i = 0; i < 120; ++i) {
    HornDlrFormula f = rng.random_horn(vars, 4, 2);
    LinearTerm obj = rng.random_term(vars);
    GlpResult res = glp_solve({f, obj, std::nullopt});
    auto sat_with_bound = [&](const Rational& bound) {
      CnfFormula g = f.cnf;
      g.clauses.push_back(Clause{{leq_zero(LinearTerm(bound) - obj)}});
      return exhaustive_sat(g).has_value();
    };
    auto sat_at_exact = [&](const Rational& value) {
      CnfFormula g = f.cnf;
      g.clauses.push_back(Clause{{leq_zero(obj - LinearTerm(value))}});
      g.clauses.push_back(Clause{{leq_zero(LinearTerm(value) - obj)}});
      return exhaustive_sat(g).has_value();
    };
    if (const auto* opt = std::get_if<GlpOptimum>(&res)) {
      ++optimums;
      CHECK(eval_formula(f.cnf, opt->witness));
      CHECK(eval_term(obj, opt->witness) == opt->value);
      CHECK(sat_at_exact(opt->value));
      CHECK(!sat_with_bound(opt->value + Rational(1, 1000)));
    } else if (const auto* sup = std::get_if<GlpSupremum>(&res)) {
      ++suprema;
      CHECK(!sat_at_exact(sup->value));
      for (Rational delta : {Rational(1), Rational(1, 10), Rational(1, 100)})
        CHECK(sat_with_bound(sup->value - delta));
    } else if (std::holds_alternative<GlpUnbounded>(res)) {
      ++unbounded;
      for (Rational m : {Rational(10), Rational(1000), Rational(1000000)})
        CHECK(sat_with_bound(m));
    } else {
      CHECK(!horn_dlr_sat(f));
    }
  }
  CHECK(optimums > 0);
  CHECK(unbounded > 0);
}

TEST_SUITE_END();
