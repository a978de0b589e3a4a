"""Witness families, hard instances, random fuzzing inputs, and the
projection-matching oracle that backs the whole pipeline's regression
checks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .automata import (BuchiAutomaton, BufferMap, Lasso, buchi_emptiness,
                       buchi_intersection, degeneralize, lasso_automaton,
                       sample_accepting_lassos)
from .simulation import Capacities, two_buffer_simulates


def gen_hierarchy_family(k1: int) -> tuple[BuchiAutomaton, BuchiAutomaton, BufferMap]:
    """Capacity-strictness witnesses: simulation needs buffer 1 of size k1+1.

    The left automaton cycles through k1+1 `a`-steps and one `b` back to
    its accepting start; the right one runs the same cycle with the `b`
    first.  Duplicator must hold all k1+1 a's before the b arrives, so she
    wins at (k1+1, k2) and loses at (k1, k2).
    """
    if k1 < 0:
        raise ValueError("k1 must be non-negative")
    n = k1 + 2
    a_trans = {(i, "a", i + 1) for i in range(k1 + 1)} | {(k1 + 1, "b", 0)}
    b_trans = {(0, "b", 1)} | {(1 + i, "a", 2 + i) for i in range(k1)} | {(k1 + 1, "a", 0)}
    a = BuchiAutomaton(f"hier{k1}_left", ("a", "b"), n, 0, frozenset({0}),
                       frozenset(a_trans))
    b = BuchiAutomaton(f"hier{k1}_right", ("a", "b"), n, 0, frozenset({0}),
                       frozenset(b_trans))
    return a, b, BufferMap({"a": 1, "b": 2})


def gen_lookahead_family(k: int) -> tuple[BuchiAutomaton, BuchiAutomaton]:
    """Single-buffer strictness witnesses: capacity k+1 needed, k too small.

    The left automaton reads k+1 a's and only then reveals c or d; the
    right one must commit to the c-chain or the d-chain on its very first
    a.  With buffer capacity k+1 Duplicator defers all a's and commits
    informed; with k she is forced to consume one a before the reveal.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    alphabet = ("a", "c", "d")
    n_a = k + 1
    # left: a-chain, branch, two accepting a-loops
    a_trans = {(i, "a", i + 1) for i in range(n_a)}
    c_loop, d_loop = n_a + 1, n_a + 2
    a_trans |= {(n_a, "c", c_loop), (n_a, "d", d_loop),
                (c_loop, "a", c_loop), (d_loop, "a", d_loop)}
    left = BuchiAutomaton(f"look{k}_left", alphabet, n_a + 3, 0,
                          frozenset({c_loop, d_loop}), frozenset(a_trans))
    # right: two parallel a-chains committed up front
    b_trans = set()
    c_head, d_head = 1, n_a + 2
    b_trans |= {(0, "a", c_head), (0, "a", d_head)}
    for i in range(n_a - 1):
        b_trans.add((c_head + i, "a", c_head + i + 1))
        b_trans.add((d_head + i, "a", d_head + i + 1))
    c_end, d_end = 2 * n_a + 1, 2 * n_a + 2
    b_trans |= {(c_head + n_a - 1, "c", c_end), (d_head + n_a - 1, "d", d_end),
                (c_end, "a", c_end), (d_end, "a", d_end)}
    right = BuchiAutomaton(f"look{k}_right", alphabet, 2 * n_a + 3, 0,
                           frozenset({c_end, d_end}), frozenset(b_trans))
    return left, right


@dataclass(frozen=True)
class PcpInstance:
    """A correspondence problem input: pairs of non-empty words over {0,1}."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("need at least one pair")
        for (u, v) in self.pairs:
            if not u or not v or set(u + v) - {"0", "1"}:
                raise ValueError(f"pair ({u!r},{v!r}) must be non-empty words over 0/1")

    @classmethod
    def from_text(cls, text: str) -> "PcpInstance":
        """Parse `u:v,u:v,...`."""
        pairs = []
        for chunk in text.split(","):
            u, sep, v = chunk.strip().partition(":")
            if not sep:
                raise ValueError(f"bad pair {chunk!r}, expected u:v")
            pairs.append((u, v))
        return cls(tuple(pairs))


PCP_ALPHABET = ("0", "1", "$", "0~", "1~", "$~")


def _bar(word: str) -> list[str]:
    return [c + "~" for c in word]


def gen_pcp_automata(inst: PcpInstance) -> tuple[BuchiAutomaton, BuchiAutomaton, BufferMap]:
    """Encode a correspondence instance as a hard game pair.

    The left automaton spells candidate solutions: blocks u_i followed by
    the barred v_i, any indices, at least one block, then the ($ $~) loop
    forever.  Multi-letter blocks become chains of fresh states; only the
    loop state accepts.

    The right automaton accepts every word that starts with balanced
    pairs x x~ and then contains one unbalanced pair x y~ with x != y,
    after which anything goes.  Plain letters ride buffer 1, barred ones
    buffer 2, so Duplicator wins exactly by exposing a mismatch.
    """
    sigma = BufferMap({x: 1 if not x.endswith("~") else 2 for x in PCP_ALPHABET})

    # left: one block chain per pair, entered from the initial state or from
    # the return hub, converging per pair before the barred half; the flag
    # loop is reachable only after at least one complete block
    a_trans = set()
    counter = [2]
    start, hub = 0, 1

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    def chain(src, letters, dst):
        cur = src
        for x in letters[:-1]:
            nxt = fresh()
            a_trans.add((cur, x, nxt))
            cur = nxt
        a_trans.add((cur, letters[-1], dst))

    for (u, v) in inst.pairs:
        joint = fresh()
        chain(start, list(u), joint)
        chain(hub, list(u), joint)
        chain(joint, _bar(v), hub)
    loop = fresh()
    mid = fresh()
    chain(hub, ["$", "$~"], loop)
    a_trans.add((loop, "$", mid))
    a_trans.add((mid, "$~", loop))
    a_l = BuchiAutomaton("pcp_left", PCP_ALPHABET, counter[0], 0,
                         frozenset({loop}), frozenset(a_trans))

    # right: balance checker with mismatch detectors
    # 0 hub, 1/2 balance returns for 0/1, 3/4/5 mismatch probes, 6 sink
    b_trans = {
        (0, "0", 1), (1, "0~", 0),
        (0, "1", 2), (2, "1~", 0),
        (0, "0", 3), (3, "1~", 6), (3, "$~", 6),
        (0, "1", 4), (4, "0~", 6), (4, "$~", 6),
        (0, "$", 5), (5, "0~", 6), (5, "1~", 6),
    }
    b_trans |= {(6, x, 6) for x in PCP_ALPHABET}
    b_l = BuchiAutomaton("pcp_right", PCP_ALPHABET, 7, 0, frozenset({6}),
                         frozenset(b_trans))
    return a_l, b_l, sigma


# ---------------------------------------------------------------------------
# projection-matching oracle


def _projection(w: Lasso, letters: set[str]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Project a lasso onto a letter class; returns (prefix, loop), loop
    possibly empty when the projection is a finite word."""
    pre = tuple(x for x in w.prefix if x in letters)
    loop = tuple(x for x in w.loop if x in letters)
    return pre, loop


def projection_match_automaton(w: Lasso, alphabet: tuple[str, ...],
                               sigma: BufferMap) -> BuchiAutomaton:
    """Automaton for all words sharing both buffer projections with w.

    One tracker per buffer class runs over its projection of w (a finite
    chain when the projection is finite, the lasso otherwise); letters of
    the other class interleave freely.  The two progress conditions are
    combined round-robin.
    """
    sigma.check_total(alphabet)
    for x in w.letters():
        if x not in alphabet:
            raise ValueError(f"foreign letter {x} not in alphabet")
    classes = [set(sigma.letters_for(1)), set(sigma.letters_for(2))]

    # each tracker: (initial, consume step map, move on the other class,
    # progress states).  A finite projection parks at its end state, which
    # is absorbing, so a state condition suffices; an infinite one carries
    # a freshness bit so that only genuine consumes of the wrap position
    # count as progress (sitting still must not).
    trackers = []
    for letters in classes:
        pre, loop = _projection(w, letters)
        if not loop:
            word = pre
            step = {(i, word[i]): i + 1 for i in range(len(word))}
            trackers.append((0, step, lambda s: s, {len(word)}))
        else:
            word = pre + loop
            mark = len(pre)
            step = {}
            for i, x in enumerate(word):
                nxt = i + 1 if i + 1 < len(word) else mark
                for f in (0, 1):
                    step[(2 * i + f, x)] = 2 * nxt + 1
            trackers.append((0, step, lambda s: s - s % 2, {2 * mark + 1}))

    index: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []

    def intern(t1, t2):
        if (t1, t2) not in index:
            index[(t1, t2)] = len(order)
            order.append((t1, t2))
        return index[(t1, t2)]

    start_key = (trackers[0][0], trackers[1][0])
    start = intern(*start_key)
    todo = [start_key]
    trans = set()
    while todo:
        t1, t2 = todo.pop()
        src = index[(t1, t2)]
        for x in alphabet:
            if x in classes[0]:
                nxt = trackers[0][1].get((t1, x))
                key = (nxt, trackers[1][2](t2)) if nxt is not None else None
            else:
                nxt = trackers[1][1].get((t2, x))
                key = (trackers[0][2](t1), nxt) if nxt is not None else None
            if key is None:
                continue
            fresh = key not in index
            trans.add((src, x, intern(*key)))
            if fresh:
                todo.append(key)

    cond1 = {i for (t1, t2), i in index.items() if t1 in trackers[0][3]}
    cond2 = {i for (t1, t2), i in index.items() if t2 in trackers[1][3]}
    return degeneralize(f"match({w})", alphabet, len(order), start, trans,
                        [cond1, cond2])


@dataclass
class LemmaSample:
    lasso: Lasso
    matched: bool
    witness: Lasso | None


@dataclass
class LemmaReport:
    """Outcome of checking the projection consequence of a simulation win."""

    applicable: bool
    samples: list[LemmaSample]

    @property
    def violations(self) -> int:
        return sum(1 for s in self.samples if not s.matched)

    def lines(self) -> list[str]:
        if not self.applicable:
            return ["not applicable: simulation does not hold"]
        out = []
        for s in self.samples:
            if s.matched:
                out.append(f"matched  {s.lasso}  by  {s.witness}")
            else:
                out.append(f"VIOLATION  {s.lasso}  has no projection partner")
        if not self.samples:
            out.append("no accepting lassos to sample")
        return out


def check_projection_lemma(a: BuchiAutomaton, b: BuchiAutomaton, sigma: BufferMap,
                           caps: Capacities, samples: int,
                           method: str = "reduced") -> LemmaReport:
    """If the buffered game is won, every sampled word of the left language
    must have a projection-equivalent partner in the right language.

    Any violation indicates a solver defect, never a property of the
    inputs.
    """
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    if not two_buffer_simulates(a, b, sigma, caps, method=method):
        return LemmaReport(applicable=False, samples=[])
    report = LemmaReport(applicable=True, samples=[])
    for w in sample_accepting_lassos(a, samples):
        matcher = projection_match_automaton(w, a.alphabet, sigma)
        witness = buchi_emptiness(buchi_intersection(b, matcher))
        report.samples.append(LemmaSample(w, witness is not None, witness))
    return report


# ---------------------------------------------------------------------------
# random instances


def random_automaton(seed: int, n_states: int, alphabet: tuple[str, ...],
                     density: float, accept_prob: float) -> BuchiAutomaton:
    """Seed-deterministic random automaton with no dead-end states."""
    if n_states < 1:
        raise ValueError("n_states must be positive")
    if not 0 < density <= 1:
        raise ValueError("density must be in (0,1]")
    rng = random.Random(seed)
    trans = set()
    for src in range(n_states):
        for x in alphabet:
            for dst in range(n_states):
                if rng.random() < density:
                    trans.add((src, x, dst))
    accepting = {q for q in range(n_states) if rng.random() < accept_prob}
    for src in range(n_states):
        if not any(t[0] == src for t in trans):
            trans.add((src, alphabet[0], src))
    return BuchiAutomaton(f"rand{seed}", tuple(alphabet), n_states, 0,
                          frozenset(accepting), frozenset(trans))


def random_sigma(seed: int, alphabet: tuple[str, ...]) -> BufferMap:
    rng = random.Random(seed)
    return BufferMap({x: rng.choice((1, 2)) for x in alphabet})
