import random

import pytest

from bufsim.automata import (
    BuchiAutomaton, Lasso, ParseError, buchi_emptiness, buchi_intersection,
    lasso_automaton, lasso_membership, parse_ba, sample_accepting_lassos,
    same_automaton, serialize_ba,
)
from corpus import waiting_pair

WAIT_LEFT_BA = """\
ba wait_left
# the c/d branching example, left side
alphabet a b c d
sigma a=1 b=2 c=2 d=2
states 3
initial 0
accepting 2
trans 0 a 0
trans 0 b 1
trans 1 c 2
trans 1 d 2
trans 2 a 2
"""


def test_parse_waiting_left():
    aut = parse_ba(WAIT_LEFT_BA)
    assert aut.n_states == 3
    assert len(aut.accepting) == 1
    assert len(aut.transitions) == 5
    assert aut.sigma["b"] == 2 and aut.sigma["a"] == 1
    ref, _, _ = waiting_pair()
    assert same_automaton(aut, ref)


def test_parse_single_state_empty_language():
    aut = parse_ba("ba empty\nalphabet a\nstates 1\ninitial 0\naccepting\n")
    assert aut.n_states == 1 and not aut.accepting and not aut.transitions
    assert buchi_emptiness(aut) is None


def test_parse_undeclared_letter():
    text = "ba t\nalphabet a\nstates 2\ninitial 0\naccepting 1\ntrans 0 z 1\n"
    with pytest.raises(ParseError, match="undeclared letter z"):
        parse_ba(text)


def test_parse_missing_initial():
    with pytest.raises(ParseError, match="initial"):
        parse_ba("ba t\nalphabet a\nstates 1\naccepting 0\n")


def test_parse_state_out_of_range():
    with pytest.raises(ParseError, match="out of range"):
        parse_ba("ba t\nalphabet a\nstates 2\ninitial 0\naccepting 1\ntrans 0 a 5\n")


def test_parse_reports_line_numbers():
    text = "ba t\nalphabet a\nstates 2\ninitial 0\naccepting 1\ntrans 0 a 1\ntrans 0 a oops\n"
    with pytest.raises(ParseError, match="line 7"):
        parse_ba(text)


def test_roundtrip_fixed():
    aut = parse_ba(WAIT_LEFT_BA)
    again = parse_ba(serialize_ba(aut))
    assert same_automaton(aut, again)
    assert again.sigma is not None and again.sigma["d"] == 2


def test_roundtrip_random():
    from bufsim.generators import random_automaton
    for seed in range(40):
        aut = random_automaton(seed, n_states=1 + seed % 5,
                               alphabet=("a", "b", "c")[: 1 + seed % 3],
                               density=0.4, accept_prob=0.5)
        assert same_automaton(aut, parse_ba(serialize_ba(aut)))


# --- emptiness ---------------------------------------------------------------


def one_loop():
    return BuchiAutomaton("one", ("a",), 1, 0, frozenset({0}),
                          frozenset({(0, "a", 0)}))


def test_emptiness_smallest():
    w = buchi_emptiness(one_loop())
    assert w == Lasso((), ("a",))


def test_emptiness_unreachable_accepting():
    aut = BuchiAutomaton("unreach", ("a",), 2, 0, frozenset({1}),
                         frozenset({(0, "a", 0), (1, "a", 1)}))
    assert buchi_emptiness(aut) is None


def test_emptiness_witness_roundtrip():
    a, b, _ = waiting_pair()
    for aut in (a, b):
        w = buchi_emptiness(aut)
        assert w is not None
        assert lasso_membership(aut, w)


# --- membership --------------------------------------------------------------


def test_membership_wrong_letter_language():
    aut = BuchiAutomaton("bs", ("a", "b"), 1, 0, frozenset({0}),
                         frozenset({(0, "b", 0)}))
    assert not lasso_membership(aut, Lasso((), ("a",)))


def test_membership_foreign_letter():
    with pytest.raises(ValueError, match="foreign letter"):
        lasso_membership(one_loop(), Lasso((), ("z",)))


def test_membership_waiting_left():
    a, _, _ = waiting_pair()
    assert lasso_membership(a, Lasso(("b", "c"), ("a",)))
    assert lasso_membership(a, Lasso(("a", "a", "b", "d"), ("a",)))
    assert not lasso_membership(a, Lasso(("b",), ("b",)))


# --- intersection ------------------------------------------------------------


def test_intersection_with_self():
    a, _, _ = waiting_pair()
    prod = buchi_intersection(a, a)
    assert prod.n_states <= 2 * a.n_states * a.n_states
    for w in sample_accepting_lassos(a, 3):
        assert lasso_membership(prod, w)


def test_intersection_with_empty():
    a, _, _ = waiting_pair()
    empty = BuchiAutomaton("none", a.alphabet, 1, 0, frozenset(),
                           frozenset({(0, "a", 0)}))
    assert buchi_emptiness(buchi_intersection(a, empty)) is None


def test_intersection_shifted_loops_empty():
    alpha = ("a", "b")
    u = lasso_automaton(Lasso((), ("a", "b")), alpha, "ab")
    v = lasso_automaton(Lasso((), ("b", "a")), alpha, "ba")
    assert buchi_emptiness(buchi_intersection(u, v)) is None


def test_intersection_alphabet_mismatch():
    u = lasso_automaton(Lasso((), ("a",)), ("a",))
    v = lasso_automaton(Lasso((), ("a",)), ("a", "b"))
    with pytest.raises(ValueError, match="alphabet mismatch"):
        buchi_intersection(u, v)


def test_intersection_agrees_with_membership_on_samples():
    from bufsim.generators import random_automaton
    rng = random.Random(7)
    for _ in range(25):
        a = random_automaton(rng.randrange(10**6), 3, ("a", "b"), 0.5, 0.5)
        b = random_automaton(rng.randrange(10**6), 3, ("a", "b"), 0.5, 0.5)
        prod = buchi_intersection(a, b)
        for w in sample_accepting_lassos(a, 2) + sample_accepting_lassos(b, 2):
            assert lasso_membership(prod, w) == (
                lasso_membership(a, w) and lasso_membership(b, w))


# --- lasso sampling ----------------------------------------------------------


def test_sample_self_loop():
    assert sample_accepting_lassos(one_loop(), 1) == [Lasso((), ("a",))]
    # larger budgets do not manufacture new omega-words
    assert sample_accepting_lassos(one_loop(), 5) == [Lasso((), ("a",))]


def test_sample_empty_language():
    aut = BuchiAutomaton("none", ("a",), 1, 0, frozenset(), frozenset({(0, "a", 0)}))
    assert sample_accepting_lassos(aut, 3) == []


def test_sample_waiting_left():
    a, _, _ = waiting_pair()
    ws = sample_accepting_lassos(a, 2)
    assert len(ws) == 2
    for w in ws:
        assert w.loop == ("a",)
        assert lasso_membership(a, w)
    assert ws[0] != ws[1]


def test_sample_deterministic_and_members():
    from bufsim.generators import random_automaton
    for seed in range(20):
        aut = random_automaton(seed, 4, ("a", "b", "c"), 0.4, 0.4)
        ws = sample_accepting_lassos(aut, 4)
        assert ws == sample_accepting_lassos(aut, 4)
        for w in ws:
            assert lasso_membership(aut, w)


def test_lasso_canonical():
    assert Lasso(("a",), ("a",)).canonical() == Lasso((), ("a",))
    assert Lasso((), ("a", "b", "a", "b")).canonical() == Lasso((), ("a", "b"))
    assert Lasso(("b", "a"), ("b", "a")).canonical() == Lasso((), ("b", "a"))
    assert Lasso(("c",), ("a", "b")).canonical() == Lasso(("c",), ("a", "b"))
