import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grover_perceptron.cli import simulate
from grover_perceptron.errors import ResourceError
from grover_perceptron.perceptron import Condition, PerceptronSpec, Topology, satisfies
from grover_perceptron.verify import brute_force, cross_check, encode_assignment


def test_example1_solutions(example_specs):
    s = brute_force(example_specs[1])
    assert s.solutions == {(2, 0, 1), (0, 3, 1), (1, 0, 2), (0, 1, 3)}
    assert (s.solution_count, s.search_space_size) == (4, 64)
    assert (2, 0, 1) in s and (1, 1, 1) not in s


def test_example2_solution_count(example_specs):
    s = brute_force(example_specs[2])
    assert (s.solution_count, s.search_space_size) == (29, 256)


def test_example3_solutions(example_specs):
    s = brute_force(example_specs[3])
    assert s.solutions == {(3, 2, 2, 1), (2, 2, 3, 1), (3, 1, 2, 2), (2, 1, 3, 2)}


def test_expected_tables_match_brute_force(example_specs, expected_tables):
    from grover_perceptron.perceptron import build_param_network
    for n in (1, 2, 3):
        plan = build_param_network(example_specs[n])[1]
        got = {encode_assignment(w, plan) for w in brute_force(example_specs[n]).solutions}
        assert got == set(expected_tables[n])


def test_max_intermediates(example_specs):
    s = brute_force(example_specs[1])
    assert s.max_products == [9, 6, 3 * 15]
    assert s.max_hidden == [15] and s.max_outputs == [45]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cross_check_passes(example_specs, n):
    _, plan, probs = simulate(example_specs[n])
    rep = cross_check(example_specs[n], probs, 1e-9, 1, plan)
    assert rep.passed, rep.to_text()
    assert rep.to_dict()["status"] == "PASS"


def test_cross_check_wrong_threshold_fails(example_specs):
    good = example_specs[1]
    _, plan, probs = simulate(good)
    bad = PerceptronSpec(good.topology, good.input_values, good.input_width, good.weight_width,
                         good.threshold + 1, good.threshold_width, good.condition)
    rep = cross_check(bad, probs, 1e-9, 1, plan)
    assert not rep.passed
    # threshold 7 has the single solution (1, 2, 1); the top string is one of the old four
    assert rep.missing == ["011001"]
    assert set(rep.unexpected) <= {"010010", "110100", "011100", "100001"}
    assert "FAIL" in rep.to_text()


def test_guard_raises():
    topo = Topology([(1, 1), (2, 1), (3, 1)], [(1, 1)])
    spec = PerceptronSpec(topo, [1, 1, 1], 1, 7, 1)
    with pytest.raises(ResourceError):
        brute_force(spec)
    assert brute_force(spec, guard_bits=28).search_space_size == 1 << 28


def _spec_from(i2h, h2o, inputs, threshold, cond):
    n_in = max(s for s, _ in i2h)
    return PerceptronSpec(Topology(i2h, h2o), inputs[:n_in], 2, 2, threshold, condition=cond)


topologies = st.sampled_from([
    ([(1, 1), (2, 1)], [(1, 1)]),
    ([(1, 1), (1, 2)], [(1, 1), (2, 1)]),
    ([(1, 1), (2, 2)], [(1, 1), (2, 1)]),
    ([(1, 1), (2, 1), (2, 2)], [(1, 1), (2, 1), (2, 2)]),
])


@settings(max_examples=30, deadline=None)
@given(topologies, st.lists(st.integers(0, 3), min_size=2, max_size=2), st.integers(0, 40),
       st.sampled_from(list(Condition)), st.randoms(use_true_random=False))
def test_brute_force_invariant_under_connection_order(topo, inputs, threshold, cond, rnd):
    i2h, h2o = topo
    spec = _spec_from(i2h, h2o, inputs, threshold, cond)
    base = brute_force(spec)
    # independent enumeration with the scalar reference
    ref = {w for w in itertools.product(range(4), repeat=spec.n_weights) if satisfies(spec, w)}
    assert base.solutions == ref
    p1, p2 = list(range(len(i2h))), list(range(len(h2o)))
    rnd.shuffle(p1)
    rnd.shuffle(p2)
    shuffled = _spec_from([i2h[i] for i in p1], [h2o[i] for i in p2], inputs, threshold, cond)
    perm = p1 + [len(i2h) + i for i in p2]
    mapped = {tuple(w[i] for i in perm) for w in base.solutions}
    assert brute_force(shuffled).solutions == mapped


def test_equal_solutions_subset_of_geq(example_specs):
    eq = example_specs[3]
    geq = PerceptronSpec(eq.topology, eq.input_values, eq.input_width, eq.weight_width,
                         eq.threshold, eq.threshold_width, Condition.GREATER_OR_EQUAL)
    assert brute_force(eq).solutions <= brute_force(geq).solutions
