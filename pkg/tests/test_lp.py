import numpy as np
import pytest

from deacs import lp
from oracles import vertex_minimize


def test_single_bound():
    prog = lp.LinearProgram(objective=[1.0], constraints=[([1.0], lp.GE, 3.0)])
    sol = lp.solve(prog)
    assert sol.is_optimal
    assert sol.objective == pytest.approx(3.0, abs=1e-9)
    assert sol.x[0] == pytest.approx(3.0, abs=1e-9)


def test_infeasible_negative_upper_bound():
    prog = lp.LinearProgram(objective=[1.0], constraints=[([1.0], lp.LE, -1.0)])
    assert lp.solve(prog).status == lp.INFEASIBLE


def test_two_variable_covering():
    constraints = [([2.0, 1.0], lp.GE, 1.0), ([1.0, 2.0], lp.GE, 1.0)]
    prog = lp.LinearProgram(objective=[1.0, 1.0], constraints=constraints)
    sol = lp.solve(prog)
    expected, x = vertex_minimize([1.0, 1.0], constraints)
    assert expected == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert np.allclose(x, [1.0 / 3.0, 1.0 / 3.0], atol=1e-9)
    assert sol.is_optimal
    assert sol.objective == pytest.approx(expected, abs=1e-9)
    assert np.allclose(sol.x, x, atol=1e-7)


def test_unbounded():
    prog = lp.LinearProgram(
        objective=[-1.0, 0.0], constraints=[([0.0, 1.0], lp.LE, 5.0)]
    )
    assert lp.solve(prog).status == lp.UNBOUNDED


def test_equality_constraints():
    constraints = [([1.0, 1.0], lp.EQ, 4.0), ([1.0, -1.0], lp.LE, 2.0)]
    prog = lp.LinearProgram(objective=[1.0, 2.0], constraints=constraints)
    sol = lp.solve(prog)
    expected, x = vertex_minimize([1.0, 2.0], constraints)
    assert expected == pytest.approx(5.0, abs=1e-12)  # x = (3, 1)
    assert sol.is_optimal
    assert sol.objective == pytest.approx(expected, abs=1e-9)
    assert np.allclose(sol.x, x, atol=1e-7)


def test_dimension_mismatch_rejected_at_construction():
    with pytest.raises(lp.LpError):
        lp.LinearProgram(objective=[1.0, 1.0], constraints=[([1.0], lp.GE, 0.0)])


def test_unknown_relation_rejected():
    with pytest.raises(lp.LpError):
        lp.LinearProgram(objective=[1.0], constraints=[([1.0], "<", 0.0)])


def _random_program(rng, n_vars, n_cons):
    constraints = []
    for _ in range(n_cons):
        coeffs = rng.uniform(-1.0, 2.0, n_vars)
        rel = (lp.LE, lp.GE)[int(rng.integers(0, 2))]
        constraints.append((coeffs, rel, float(rng.uniform(-1.0, 3.0))))
    # keep the feasible region bounded so vertex enumeration is exact
    constraints.append((np.ones(n_vars), lp.LE, float(rng.uniform(2.0, 6.0))))
    return lp.LinearProgram(
        objective=rng.uniform(-1.0, 1.0, n_vars), constraints=constraints
    )


def test_matches_vertex_enumeration_on_random_bounded_programs():
    rng = np.random.default_rng(20240517)
    solved = 0
    for _ in range(300):
        prog = _random_program(rng, int(rng.integers(2, 4)), int(rng.integers(1, 4)))
        sol = lp.solve(prog)
        oracle = vertex_minimize(prog.objective, prog.constraints)
        if oracle is None:
            assert sol.status == lp.INFEASIBLE
            continue
        assert sol.is_optimal
        assert sol.objective == pytest.approx(oracle[0], abs=1e-7)
        solved += 1
    assert solved > 100  # the generator must actually exercise the solver


def test_returned_point_is_feasible():
    rng = np.random.default_rng(7)
    for _ in range(200):
        prog = _random_program(rng, 3, 3)
        sol = lp.solve(prog)
        if not sol.is_optimal:
            continue
        for coeffs, rel, rhs in prog.constraints:
            lhs = float(np.dot(coeffs, sol.x))
            if rel == lp.LE:
                assert lhs <= rhs + 1e-7
            elif rel == lp.GE:
                assert lhs >= rhs - 1e-7
            else:
                assert lhs == pytest.approx(rhs, abs=1e-7)
        assert np.all(sol.x >= -1e-12)
        assert sol.objective == pytest.approx(
            float(prog.objective @ sol.x), abs=1e-9
        )


def test_reduced_costs_certify_optimality():
    rng = np.random.default_rng(99)
    for _ in range(200):
        sol = lp.solve(_random_program(rng, 3, 2))
        if sol.is_optimal:
            assert np.all(sol.reduced_costs >= -1e-9)


def test_deterministic_resolves():
    rng = np.random.default_rng(3)
    prog = _random_program(rng, 3, 3)
    a = lp.solve(prog)
    b = lp.solve(prog)
    assert a.status == b.status
    if a.is_optimal:
        assert a.objective == b.objective  # bit-for-bit
        assert np.array_equal(a.x, b.x)


def test_objective_scaling():
    constraints = [([2.0, 1.0], lp.GE, 1.0), ([1.0, 2.0], lp.GE, 1.0)]
    base = lp.solve(lp.LinearProgram(objective=[1.0, 1.0], constraints=constraints))
    for k in (0.5, 3.0, 100.0):
        scaled = lp.solve(
            lp.LinearProgram(objective=[k, k], constraints=constraints)
        )
        assert scaled.objective == pytest.approx(k * base.objective, rel=1e-9)
        assert np.allclose(scaled.x, base.x, atol=1e-9)


def test_degenerate_duplicate_rows_terminate():
    # many identical constraints is the degenerate shape Bland's rule guards
    constraints = [([1.0, 1.0], lp.GE, 1.0)] * 6 + [([1.0, 0.0], lp.LE, 2.0)]
    sol = lp.solve(lp.LinearProgram(objective=[1.0, 2.0], constraints=constraints))
    assert sol.is_optimal
    assert sol.objective == pytest.approx(1.0, abs=1e-9)


def test_format_lp_round_trips_the_shape():
    prog = lp.LinearProgram(
        objective=[1.0, 0.0], constraints=[([1.0, 1.0], lp.GE, 1.0)]
    )
    text = lp.format_lp(prog)
    assert text.startswith("min ")
    assert ">= 1.0" in text
    assert "vars 2 >= 0" in text
