import itertools
import random

import pytest

from bufsim.automata import BuchiAutomaton, BufferMap, lasso_membership, sample_accepting_lassos
from bufsim.generators import gen_hierarchy_family, random_automaton, random_sigma
from bufsim.paritygame import zielonka_solve
from bufsim.simulation import (
    Capacities, UnboundedCapacityError, build_direct_arena, build_fair_sim_game,
    fair_simulates, max_consumes_in_a_turn, reduce_buffer1, reduce_buffer2,
    single_buffer_simulates, two_buffer_simulates, two_buffer_simulates_direct,
    two_buffer_simulates_reduced,
)
from corpus import multi_consume_pair, waiting_pair


def random_pair(seed, n=3, letters=("a", "b")):
    rng = random.Random(seed)
    a = random_automaton(rng.randrange(10**9), 1 + rng.randrange(n), letters,
                         0.2 + 0.6 * rng.random(), 0.5)
    b = random_automaton(rng.randrange(10**9), 1 + rng.randrange(n), letters,
                         0.2 + 0.6 * rng.random(), 0.5)
    sigma = random_sigma(rng.randrange(10**9), letters)
    return a, b, sigma


# --- capacities ---------------------------------------------------------------


def test_capacities_reject_unbounded():
    with pytest.raises(UnboundedCapacityError):
        Capacities(float("inf"), 0)
    with pytest.raises(UnboundedCapacityError):
        Capacities(-1, 0)


# --- fair simulation ----------------------------------------------------------


def test_fair_sim_reflexive():
    for seed in range(15):
        a, _, _ = random_pair(seed)
        assert fair_simulates(a, a)


def test_fair_sim_waiting_pair_spoiler_wins():
    a, b, _ = waiting_pair()
    assert not fair_simulates(a, b)
    assert fair_simulates(b, b)


def test_fair_sim_vacuous_when_left_never_accepts():
    a, b, _ = waiting_pair()
    mute = BuchiAutomaton("mute", a.alphabet, a.n_states, a.initial,
                          frozenset(), a.transitions)
    # as long as Duplicator can keep mimicking, the winning condition is
    # vacuous; a complete right side never gets stuck
    complete = BuchiAutomaton(
        "total", a.alphabet, 1, 0, frozenset(),
        frozenset({(0, x, 0) for x in a.alphabet}))
    assert fair_simulates(mute, complete)
    for seed in range(10):
        rb = random_automaton(seed, 3, a.alphabet, 1.0, 0.4)
        assert fair_simulates(mute, rb)
    # but running out of answers still loses, whatever the acceptance sets
    assert not fair_simulates(mute, b)


def test_fair_sim_alphabet_mismatch():
    a, _, _ = waiting_pair()
    other = BuchiAutomaton("o", ("a",), 1, 0, frozenset({0}), frozenset({(0, "a", 0)}))
    with pytest.raises(ValueError, match="alphabet mismatch"):
        fair_simulates(a, other)


def test_fair_sim_agrees_with_both_solvers():
    from bufsim.paritygame import progress_measure_solve
    for seed in range(30):
        a, b, _ = random_pair(seed)
        built = build_fair_sim_game(a, b)
        za = zielonka_solve(built.game)
        pm = progress_measure_solve(built.game)
        assert za.even_wins == pm.even_wins


# --- buffer elimination -------------------------------------------------------


def test_reduce_rejects_capacity_zero():
    _, b, sigma = waiting_pair()
    with pytest.raises(ValueError, match="identity case"):
        reduce_buffer2(b, sigma, 0)


def test_reduce_empty_class_is_isomorphic_copy():
    aut = BuchiAutomaton("solo", ("a",), 2, 0, frozenset({1}),
                         frozenset({(0, "a", 1), (1, "a", 0)}))
    sigma = BufferMap({"a": 1})
    for k2 in (1, 2, 3):
        folded = reduce_buffer2(aut, sigma, k2)
        assert folded.n_states == aut.n_states
        assert {(s, x, t) for (s, x, t) in folded.transitions} == aut.transitions
        assert folded.accepting == aut.accepting
        assert all(label.endswith("|-|0") for label in folded.state_labels)


def test_reduce_waiting_right_shape():
    _, b, sigma = waiting_pair()
    folded = reduce_buffer2(b, sigma, 1)
    # the initial state can defer the b: some reachable state holds it
    held = [lab for lab in folded.state_labels if lab.split("|")[1] == "b"]
    assert held
    assert folded.n_states <= 2 * b.n_states * (len(b.alphabet) ** 2 - 1)


def test_reduce_size_bound_fuzz():
    for seed in range(200):
        rng = random.Random(seed)
        letters = ("a", "b", "c")[: 2 + seed % 2]
        b = random_automaton(seed, 1 + rng.randrange(4), letters,
                             0.2 + 0.6 * rng.random(), 0.5)
        sigma = random_sigma(seed + 1, letters)
        k = 1 + seed % 2
        for fold, which in ((reduce_buffer2, 2), (reduce_buffer1, 1)):
            out = fold(b, sigma, k)
            assert out.n_states <= 2 * b.n_states * (len(letters) ** (k + 1) - 1)


# --- the two pipelines --------------------------------------------------------


def test_zero_caps_equal_fair_simulation():
    for seed in range(120):
        a, b, sigma = random_pair(seed)
        expect = fair_simulates(a, b)
        assert two_buffer_simulates_reduced(a, b, sigma, Capacities(0, 0)) == expect
        assert two_buffer_simulates_direct(a, b, sigma, Capacities(0, 0)) == expect


def test_pipelines_agree_fuzz():
    rng = random.Random(424242)
    for trial in range(150):
        a, b, sigma = random_pair(rng.randrange(10**9), n=3,
                                  letters=("a", "b", "c")[: 2 + trial % 2])
        caps = Capacities(rng.randrange(3), rng.randrange(3))
        red = two_buffer_simulates_reduced(a, b, sigma, caps)
        direct = two_buffer_simulates_direct(a, b, sigma, caps)
        assert red == direct, (a, b, sigma, caps)


def test_hierarchy_strictness_small():
    a, b, sigma = gen_hierarchy_family(0)
    assert not two_buffer_simulates_reduced(a, b, sigma, Capacities(0, 0))
    assert two_buffer_simulates_reduced(a, b, sigma, Capacities(1, 0))
    assert two_buffer_simulates_direct(a, b, sigma, Capacities(1, 0))


def test_hierarchy_family_k1_one():
    a, b, sigma = gen_hierarchy_family(1)
    assert not two_buffer_simulates_direct(a, b, sigma, Capacities(1, 0))
    assert two_buffer_simulates_direct(a, b, sigma, Capacities(2, 0))
    assert not two_buffer_simulates_reduced(a, b, sigma, Capacities(1, 0))
    assert two_buffer_simulates_reduced(a, b, sigma, Capacities(2, 0))


def test_waiting_pair_loses_bounded():
    a, b, sigma = waiting_pair()
    assert not two_buffer_simulates_reduced(a, b, sigma, Capacities(2, 1))
    assert not two_buffer_simulates_direct(a, b, sigma, Capacities(2, 1))


def test_multi_consume_pair_wins_and_needs_two_consumes():
    a, b, sigma = multi_consume_pair()
    built = build_direct_arena(a, b, sigma, Capacities(2, 1))
    regions = zielonka_solve(built.game)
    assert built.initial in regions.even_wins
    assert max_consumes_in_a_turn(built, regions) >= 2
    assert two_buffer_simulates_reduced(a, b, sigma, Capacities(2, 1))


def test_monotonicity_on_fuzz():
    rng = random.Random(77)
    grid = list(itertools.product(range(3), repeat=2))
    for _ in range(40):
        a, b, sigma = random_pair(rng.randrange(10**9))
        wins = {caps: two_buffer_simulates_reduced(a, b, sigma, Capacities(*caps))
                for caps in grid}
        for (k1, k2), (l1, l2) in itertools.product(grid, grid):
            if k1 <= l1 and k2 <= l2 and wins[(k1, k2)]:
                assert wins[(l1, l2)], (a.name, b.name, (k1, k2), (l1, l2))


# --- single buffer ------------------------------------------------------------


def test_single_buffer_zero_is_fair_sim():
    for seed in range(40):
        a, b, _ = random_pair(seed)
        assert single_buffer_simulates(a, b, 0) == fair_simulates(a, b)


def test_single_buffer_strictness():
    from bufsim.generators import gen_lookahead_family
    for k in (0, 1):
        a, b = gen_lookahead_family(k)
        assert not single_buffer_simulates(a, b, k)
        assert single_buffer_simulates(a, b, k + 1)
        assert single_buffer_simulates(a, a, k)


def test_two_buffer_family_fails_on_a_single_buffer():
    # routing both letter classes through one buffer restores the total
    # letter order, so the reversed cycle is out of reach at any capacity
    a, b, _ = gen_hierarchy_family(0)
    for k in (1, 2, 3):
        assert not single_buffer_simulates(a, b, k)


def test_single_buffer_single_consume_suffices():
    rng = random.Random(99)
    for _ in range(40):
        a, b, _ = random_pair(rng.randrange(10**9))
        sigma = BufferMap({x: 1 for x in a.alphabet})
        caps = Capacities(rng.randrange(3), 0)
        free = build_direct_arena(a, b, sigma, caps)
        lean = build_direct_arena(a, b, sigma, caps, single_consume=True)
        won_free = free.initial in zielonka_solve(free.game).even_wins
        won_lean = lean.initial in zielonka_solve(lean.game).even_wins
        assert won_free == won_lean


# --- soundness against language inclusion ------------------------------------


def test_fair_sim_implies_sampled_inclusion():
    for seed in range(80):
        a, b, _ = random_pair(seed)
        if fair_simulates(a, b):
            for w in sample_accepting_lassos(a, 3):
                assert lasso_membership(b, w)


def test_method_dispatch():
    a, b, sigma = gen_hierarchy_family(0)
    assert two_buffer_simulates(a, b, sigma, Capacities(1, 0), method="both")
    with pytest.raises(ValueError, match="unknown method"):
        two_buffer_simulates(a, b, sigma, Capacities(1, 0), method="quick")
