import pytest

import dlrkit


def test_solve_propagation_example():
    witness = dlrkit.solve(
        "(1*x - 1 <= 0) & (1 - 1*x <= 0) & (1*x - 1 != 0 | 1*y <= 0) & (-1*y <= 0)"
    )
    assert witness == {"x": "1/1", "y": "0/1"}


def test_solve_unsat():
    assert dlrkit.solve("(x <= 0) & (-1*x <= 0) & (x != 0)") is None


def test_exhaustive_agrees_on_non_horn():
    assert dlrkit.exhaustive_solve("(x <= 0 | -1*x + 1 <= 0)") is not None
    assert dlrkit.exhaustive_solve("(x <= 0) & (-1*x + 1 <= 0)") is None


def test_optimize_trichotomy():
    assert dlrkit.optimize("(x - 3 <= 0)", "1*x")["value"] == "3/1"
    sup = dlrkit.optimize("(x - 3 <= 0) & (x - 3 != 0)", "1*x")
    assert sup["kind"] == "supremum"
    assert sup["value"] == "3/1"
    assert dlrkit.optimize("(-1*x <= 0)", "1*x")["kind"] == "unbounded"
    decided = dlrkit.optimize("(x - 3 <= 0) & (x - 3 != 0)", "1*x", threshold="3")
    assert decided["decision"] is False


def test_standardize_and_recognize():
    assert dlrkit.standardize("(x - y < 0)") == "(x - y <= 0) & (x - y != 0)"
    assert dlrkit.recognize_horn("(x != 0 | y <= 0)") is None
    rejected = dlrkit.recognize_horn("(x <= 0 | y <= 0)")
    assert rejected[0] == 0


def test_eliminate():
    assert dlrkit.eliminate("(y - x <= 0) & (x - z <= 0)", ["x"]) == "(y - z <= 0)"


def test_equivalence_counterexample():
    assert dlrkit.equivalent("(x <= 0)", "(x < 0 | x = 0)") is None
    counterexample = dlrkit.equivalent("(x <= 0)", "(x < 0)")
    assert counterexample == {"x": "0/1"}


def test_decompose_and_profile():
    pieces = dlrkit.decompose("(x != 0)")
    assert pieces == [(None, False, "0/1", False), ("0/1", False, None, False)]
    profile = dlrkit.segment_profile(
        "(x + 1 <= 0 | 1 - x <= 0)", {"x": "-2"}, {"x": "2"}
    )
    assert profile["inside"] == [
        ("0/1", True, "1/4", True),
        ("3/4", True, "1/1", True),
    ]
    assert profile["outside"] == [("1/4", False, "3/4", False)]


def test_convexity_checks():
    assert dlrkit.check_convex_union("(x - 1 <= 0 | 1 - x <= 0)") is None
    gap = dlrkit.check_convex_union("(x <= 0 | 2 - x <= 0)")
    assert gap is not None

    verdict = dlrkit.check_essentially_convex("(x != 0 | y <= 0)")
    assert verdict["kind"] == "essentially-convex"
    witnessed = dlrkit.check_essentially_convex("(x + 1 <= 0 | 1 - x <= 0)")
    assert witnessed["kind"] == "not-essentially-convex"


def test_compile_equation_text():
    text = dlrkit.compile_equation("2*x - 1*y = 0")
    assert text.startswith("free x y")
    assert "plus" in text


def test_reduction_pipeline():
    instance = dlrkit.reduce_one_in_three("a b c\n", "(y = 0 | y - 1 = 0)")
    assert dlrkit.csp_satisfiable(instance) is True
    assert dlrkit.oracle_one_in_three("a b c\n") is not None

    contradiction = dlrkit.reduce_one_in_three("a a a\n", "(y = 0 | y - 1 = 0)")
    assert dlrkit.csp_satisfiable(contradiction) is False
    assert dlrkit.oracle_one_in_three("a a a\n") is None


def test_syntax_error_is_typed():
    with pytest.raises(dlrkit.FormulaSyntaxError):
        dlrkit.solve("(x <=")
