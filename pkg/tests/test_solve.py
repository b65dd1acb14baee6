import itertools
import sys
import textwrap

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revpebble.encode import CnfInstance, VarMap, build_cnf
from revpebble.solve import (
    ModelIntegrityError,
    SolverOutputError,
    SolverSpawnError,
    Status,
    parse_competition_output,
    solve_clauses,
    solve_embedded,
    solve_external,
    verify_model,
)


def instance(num_vars, clauses):
    return CnfInstance(num_vars, clauses, VarMap([], 0))


def brute_force_sat(num_vars, clauses):
    for bits in itertools.product([False, True], repeat=num_vars):
        model = dict(zip(range(1, num_vars + 1), bits))
        if verify_model(clauses, model) is None:
            return True
    return False


def test_contradiction():
    assert solve_embedded(instance(1, [[1], [-1]])).status is Status.UNSAT


def test_simple_sat():
    result = solve_embedded(instance(2, [[1, 2], [-1, 2]]))
    assert result.status is Status.SAT
    assert result.model[2] is True


def test_empty_formula():
    result = solve_embedded(instance(3, []))
    assert result.sat and set(result.model) == {1, 2, 3}


def test_pigeonhole_unsat():
    # 5 pigeons, 4 holes
    var = lambda p, h: p * 4 + h + 1
    clauses = [[var(p, h) for h in range(4)] for p in range(5)]
    clauses += [[-var(p, h), -var(q, h)] for h in range(4) for p in range(5) for q in range(p + 1, 5)]
    result = solve_embedded(instance(20, clauses))
    assert result.status is Status.UNSAT
    assert result.stats.conflicts > 0


clause_lists = st.integers(1, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=4),
            max_size=40,
        ),
    )
)


@settings(max_examples=300)
@given(clause_lists)
def test_agrees_with_brute_force(case):
    n, clauses = case
    result = solve_clauses(n, clauses)
    assert result.sat == brute_force_sat(n, clauses)
    if result.sat:
        assert verify_model(clauses, result.model) is None
        assert set(result.model) == set(range(1, n + 1))


def test_deterministic(fig2):
    cnf = build_cnf(fig2, 4, 12)
    a, b = solve_embedded(cnf), solve_embedded(cnf)
    assert a.model == b.model
    assert a.stats.decisions == b.stats.decisions


def test_timeout_status():
    var = lambda p, h: p * 8 + h + 1
    clauses = [[var(p, h) for h in range(8)] for p in range(9)]
    clauses += [[-var(p, h), -var(q, h)] for h in range(8) for p in range(9) for q in range(p + 1, 9)]
    result = solve_clauses(72, clauses, timeout_ms=1)
    assert result.status is Status.TIMEOUT
    assert result.model is None


def test_fig2_thresholds(fig2):
    assert solve_embedded(build_cnf(fig2, 6, 10)).sat
    assert solve_embedded(build_cnf(fig2, 6, 9)).status is Status.UNSAT
    # fewest steps with four pebbles is 12 (the BFS oracle agrees, see test_strategy)
    assert solve_embedded(build_cnf(fig2, 4, 12)).sat
    assert solve_embedded(build_cnf(fig2, 4, 11)).status is Status.UNSAT
    assert solve_embedded(build_cnf(fig2, 4, 14)).sat


def test_parse_competition_output():
    status, model = parse_competition_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 4)
    assert status is Status.SAT
    assert model == {1: True, 2: False, 3: True, 4: False}
    assert parse_competition_output("s UNSATISFIABLE\n", 3)[0] is Status.UNSAT
    assert parse_competition_output("", 3, returncode=20)[0] is Status.UNSAT
    with pytest.raises(SolverOutputError):
        parse_competition_output("nonsense\n", 3)
    with pytest.raises(SolverOutputError):
        parse_competition_output("s SATISFIABLE\n", 3)
    with pytest.raises(SolverOutputError):
        parse_competition_output("s UNSATISFIABLE\n", 3, returncode=10)


def fake_solver(tmp_path, body):
    script = tmp_path / "fake_solver.py"
    script.write_text(textwrap.dedent(body))
    return f"{sys.executable} {script}"


def test_external_spawn_error():
    with pytest.raises(SolverSpawnError):
        solve_external(instance(1, [[1]]), "/nonexistent/solver-binary")


def test_external_unparsable(tmp_path):
    cmd = fake_solver(tmp_path, "print('who knows')\n")
    with pytest.raises(SolverOutputError):
        solve_external(instance(1, [[1]]), cmd)


def test_external_bad_model_rejected(tmp_path):
    cmd = fake_solver(
        tmp_path,
        """
        import sys
        print("s SATISFIABLE")
        print("v -1 0")
        sys.exit(10)
        """,
    )
    with pytest.raises(ModelIntegrityError):
        solve_external(instance(1, [[1]]), cmd)


def test_external_reads_file_argument(tmp_path):
    cmd = fake_solver(
        tmp_path,
        """
        import sys
        text = open(sys.argv[1]).read()
        assert text.startswith("p cnf 2 2")
        print("s SATISFIABLE\\nv 1 2 0")
        sys.exit(10)
        """,
    )
    result = solve_external(instance(2, [[1], [1, 2]]), cmd)
    assert result.sat and result.model == {1: True, 2: True}


def test_external_timeout(tmp_path):
    cmd = fake_solver(tmp_path, "import time\ntime.sleep(10)\n")
    assert solve_external(instance(1, [[1]]), cmd, timeout_ms=300).status is Status.TIMEOUT


def test_external_trivial_sat(solver_cmd):
    result = solve_external(instance(1, [[1]]), solver_cmd)
    assert result.sat and result.model == {1: True}


def test_external_agrees_on_fig2(fig2, solver_cmd):
    for p, k in [(6, 10), (6, 9), (4, 12), (4, 11), (3, 20)]:
        cnf = build_cnf(fig2, p, k)
        assert solve_external(cnf, solver_cmd).status is solve_embedded(cnf).status
