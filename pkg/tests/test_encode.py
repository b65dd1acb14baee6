import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revpebble.encode import Mode, VarMap, build_cnf, emit_cardinality, move_clauses, parse_dimacs, to_dimacs
from revpebble.graph import Dag, Node
from revpebble.solve import solve_embedded
from revpebble.strategy import oracle_min_steps

from .conftest import random_dags


def satisfied(clauses, assignment):
    return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in clauses)


def projection(num_inputs, bound):
    """Input assignments that extend to a model of the counter, by brute force over auxiliaries."""
    vm = VarMap(["x"], num_inputs - 1)  # pebble prefix doubles as the input literals
    lits = list(range(1, num_inputs + 1))
    clauses = []
    emit_cardinality(lits, bound, vm, clauses)
    aux = list(range(num_inputs + 1, vm.next_aux))
    survivors = set()
    for bits in itertools.product([False, True], repeat=num_inputs):
        base = dict(zip(lits, bits))
        for abits in itertools.product([False, True], repeat=len(aux)):
            if satisfied(clauses, {**base, **dict(zip(aux, abits))}):
                survivors.add(bits)
                break
    return survivors, clauses, len(aux)


def test_cardinality_vacuous_bound():
    vm = VarMap(["a", "b", "c"], 0)
    clauses = []
    emit_cardinality([1, 2, 3], 3, vm, clauses)
    assert clauses == []


def test_cardinality_zero_bound():
    vm = VarMap(["a", "b", "c"], 0)
    clauses = []
    emit_cardinality([1, 2, 3], 0, vm, clauses)
    assert clauses == [[-1], [-2], [-3]]


def test_cardinality_four_choose_at_most_two():
    survivors, _, _ = projection(4, 2)
    assert len(survivors) == 11
    assert survivors == {b for b in itertools.product([False, True], repeat=4) if sum(b) <= 2}


@pytest.mark.parametrize("n, k", [(n, k) for n in range(1, 6) for k in range(0, n + 1)])
def test_cardinality_projection_exact(n, k):
    survivors, clauses, num_aux = projection(n, k)
    assert survivors == {b for b in itertools.product([False, True], repeat=n) if sum(b) <= k}
    if 0 < k < n:
        assert num_aux == (n - 1) * k
        assert len(clauses) == k + (n - 2) * (2 * k + 1) + 1


def test_move_clauses_truth_table():
    clauses = move_clauses(1, 2, 3, 4)
    assert len(clauses) == 4 and all(len(c) == 3 for c in clauses)
    for a, b, wa, wb in itertools.product([False, True], repeat=4):
        expected = not (a != b) or (wa and wb)
        assert satisfied(clauses, {1: a, 2: b, 3: wa, 4: wb}) == expected


def test_single_edge_one_transition():
    g = Dag((Node("w"), Node("v", None, ("w",))), {"v"})
    cnf = build_cnf(g, 2, 1, Mode.PARALLEL)
    assert cnf.families["move"] == 4


def test_fig2_sizes(fig2):
    cnf = build_cnf(fig2, 6, 10)
    assert cnf.varmap.num_pebble_vars == 66
    assert cnf.families["init"] + cnf.families["final"] == 12
    # pebble indices are the contiguous prefix
    indices = sorted(cnf.varmap.pebble(v, i) for v in fig2.names for i in range(11))
    assert indices == list(range(1, 67))
    assert cnf.varmap.decode(cnf.varmap.pebble("E", 3)) == ("E", 3)
    assert cnf.varmap.decode(67) is None


def test_unit_clause_polarity(fig2):
    cnf = build_cnf(fig2, 6, 10)
    vm = cnf.varmap
    units = {c[0] for c in cnf.clauses[:12]}
    assert all(-vm.pebble(v, 0) in units for v in fig2.names)
    assert vm.pebble("E", 10) in units and vm.pebble("F", 10) in units
    assert -vm.pebble("A", 10) in units


def predicted_sizes(g, p, k, mode):
    n, e = len(g), len(g.edges)
    card_vars = (n - 1) * p if p < n else 0
    card_clauses = (p + (n - 2) * (2 * p + 1) + 1) if 0 < p < n else 0
    num_vars = n * (k + 1) + (k + 1) * card_vars
    num_clauses = 2 * n + 4 * e * k + (k + 1) * card_clauses
    if mode is Mode.SEQUENTIAL and k:
        amo_vars = n - 1 if n > 1 else 0
        amo_clauses = (1 + (n - 2) * 3 + 1) if n > 1 else 0
        num_vars += k * (n + amo_vars)
        num_clauses += k * (4 * n + amo_clauses)
    return num_vars, num_clauses


@given(random_dags(min_nodes=2, max_nodes=10), st.integers(1, 10), st.integers(0, 12), st.sampled_from(list(Mode)))
def test_sizes_match_closed_form(g, p, k, mode):
    cnf = build_cnf(g, p, k, mode)
    cnf.check()
    assert (cnf.num_vars, len(cnf.clauses)) == predicted_sizes(g, p, k, mode)
    assert cnf.families["move"] == 4 * len(g.edges) * k


def test_to_dimacs_format():
    from revpebble.encode import CnfInstance

    assert to_dimacs(CnfInstance(1, [], VarMap(["a"], 0))) == "p cnf 1 0\n"
    assert to_dimacs(CnfInstance(2, [[1, -2]], VarMap(["a", "b"], 0))) == "p cnf 2 1\n1 -2 0\n"


def test_dimacs_round_trip(fig2):
    cnf = build_cnf(fig2, 6, 10)
    num_vars, clauses = parse_dimacs(to_dimacs(cnf))
    assert num_vars == cnf.num_vars
    assert Counter(map(tuple, clauses)) == Counter(map(tuple, cnf.clauses))


@settings(max_examples=25, deadline=None)
@given(random_dags(min_nodes=2, max_nodes=6), st.sampled_from(list(Mode)))
def test_monotone_in_pebbles(g, mode):
    for p in range(1, len(g)):
        k = oracle_min_steps(g, p, mode)
        if k is None:
            continue
        assert solve_embedded(build_cnf(g, p, k, mode)).sat
        assert solve_embedded(build_cnf(g, p + 1, k, mode)).sat


def test_mode_parse():
    assert Mode.parse("seq") is Mode.SEQUENTIAL
    assert Mode.parse("parallel") is Mode.PARALLEL
    with pytest.raises(ValueError):
        Mode.parse("diagonal")
