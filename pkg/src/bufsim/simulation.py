"""Fair simulation and bounded two-buffer simulation games.

Two independent decision pipelines are provided and cross-checked:

* `two_buffer_simulates_reduced` folds each bounded buffer into the right
  automaton's state space and then decides ordinary fair simulation;
* `two_buffer_simulates_direct` builds the game arena explicitly, with
  Duplicator turns materialized as micro-move chains.

Buffers are FIFO: the newest letter sits at index 0, Duplicator consumes
from the right.  Buffer capacity is only checked when Duplicator ends her
turn, so a buffer may transiently hold capacity+1 letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import BuchiAutomaton, BufferMap
from .paritygame import EVEN, ODD, ParityGame, WinningRegions, zielonka_solve


class UnboundedCapacityError(ValueError):
    """Unbounded buffers are rejected: those games have no decision procedure."""


@dataclass(frozen=True)
class Capacities:
    k1: int
    k2: int

    def __post_init__(self):
        for k in (self.k1, self.k2):
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise UnboundedCapacityError(
                    f"capacities must be finite non-negative integers, got {k!r}")

    def __str__(self):
        return f"({self.k1},{self.k2})"


@dataclass
class BuiltGame:
    """A parity game plus the legend mapping node index to its meaning."""

    game: ParityGame
    initial: int
    legend: list[tuple]

    def phase(self, idx: int) -> str:
        return self.legend[idx][0]


class _Builder:
    def __init__(self):
        self.index: dict[tuple, int] = {}
        self.owner: list[int] = []
        self.priority: list[int] = []
        self.edges: list[list[int]] = []
        self.legend: list[tuple] = []

    def node(self, key, owner, priority):
        if key in self.index:
            return self.index[key]
        idx = len(self.legend)
        self.index[key] = idx
        self.owner.append(owner)
        self.priority.append(priority)
        self.edges.append([])
        self.legend.append(key)
        return idx

    def sink(self, winner):
        # self-looping sink: priority 1 lets Odd win, priority 2 lets Even win
        key = ("SINK", winner)
        prio = 2 if winner == "even" else 1
        idx = self.node(key, EVEN, prio)
        if not self.edges[idx]:
            self.edges[idx].append(idx)
        return idx

    def finish(self, initial_key) -> BuiltGame:
        game = ParityGame(tuple(self.owner), tuple(self.priority),
                          tuple(tuple(e) for e in self.edges))
        return BuiltGame(game, self.index[initial_key], self.legend)


def _letter_successors(aut: BuchiAutomaton) -> dict[tuple[int, str], list[int]]:
    table: dict[tuple[int, str], list[int]] = {}
    for (src, x, dst) in aut.transitions:
        table.setdefault((src, x), []).append(dst)
    for lst in table.values():
        lst.sort()
    return table


# ---------------------------------------------------------------------------
# fair simulation (no buffers)


def build_fair_sim_game(a: BuchiAutomaton, b: BuchiAutomaton) -> BuiltGame:
    """Letter-for-letter simulation game as an index-3 min-parity game.

    Node priority is 0 where Duplicator's current state is accepting,
    else 1 where Spoiler's most recent state is accepting, else 2.
    """
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    adj_a = a.adjacency()
    b_succ = _letter_successors(b)
    bld = _Builder()

    def prio(q, p):
        if p in b.accepting:
            return 0
        if q in a.accepting:
            return 1
        return 2

    def s_node(q, p):
        return bld.node(("S", q, p), ODD, prio(q, p))

    start = s_node(a.initial, b.initial)
    todo = [(a.initial, b.initial)]
    done = {(a.initial, b.initial)}
    while todo:
        q, p = todo.pop()
        src = bld.index[("S", q, p)]
        if not adj_a[q]:
            bld.edges[src].append(bld.sink("even"))
            continue
        for (x, q2) in adj_a[q]:
            d = bld.node(("D", q2, x, p), EVEN, prio(q2, p))
            bld.edges[src].append(d)
            if bld.edges[d]:
                continue
            answers = b_succ.get((p, x), ())
            if not answers:
                bld.edges[d].append(bld.sink("odd"))
            for p2 in answers:
                t = s_node(q2, p2)
                bld.edges[d].append(t)
                if (q2, p2) not in done:
                    done.add((q2, p2))
                    todo.append((q2, p2))
    return bld.finish(("S", a.initial, b.initial))


def fair_simulates(a: BuchiAutomaton, b: BuchiAutomaton, solver=zielonka_solve) -> bool:
    built = build_fair_sim_game(a, b)
    return built.initial in solver(built.game).even_wins


# ---------------------------------------------------------------------------
# buffer elimination


def _fold_buffer(b: BuchiAutomaton, buffered: tuple[str, ...], k: int,
                 name: str) -> BuchiAutomaton:
    """Push a FIFO buffer for the `buffered` letters into the state space.

    States are (state, buffer content, credit flag).  A transition may
    drain any number of oldest buffered letters through the underlying
    automaton before (or while) handling the arriving letter, so one step
    here can stand for a whole Duplicator turn on this buffer.

    The flag implements the liveness half of the winning condition: it is
    0 while a drain (or an empty buffer) has been seen since the last
    accepting visit, and acceptance requires flag 0.  Without it, content
    parked forever in the folded buffer would go unnoticed.
    """
    delta = set(buffered)
    succ = _letter_successors(b)
    index: dict[tuple, int] = {}
    labels: list[tuple] = []

    def intern(q, w, d):
        key = (q, w, d)
        if key not in index:
            index[key] = len(labels)
            labels.append(key)
        return index[key]

    def flag(q, d, drained, new_w):
        if drained or not new_w:
            return 0
        return 1 if (q in b.accepting and d == 0) else d

    start = intern(b.initial, (), 0)
    trans = set()
    todo = [(b.initial, (), 0)]
    seen = {(b.initial, (), 0)}

    def emit(q, d, letter, j, contents):
        """All targets that drain the j oldest letters, then step on `letter`
        if it is not itself buffered (j counts it otherwise)."""
        results = []
        states = {q}
        for i in range(1, j + 1):
            oldest = contents[-i]
            states = {t for s in states for t in succ.get((s, oldest), ())}
            if not states:
                return results
        new_w = contents[: len(contents) - j]
        if letter is None:
            mids = states
        else:
            mids = {t for s in states for t in succ.get((s, letter), ())}
        d2 = flag(q, d, j > 0, new_w)
        for t in sorted(mids):
            results.append((t, new_w, d2))
        return results

    while todo:
        q, w, d = todo.pop()
        src = intern(q, w, d)
        for a in b.alphabet:
            targets = []
            if a in delta:
                contents = (a,) + w
                if len(w) < k:
                    targets.append((q, contents, flag(q, d, False, contents)))
                for j in range(1, len(contents) + 1):
                    targets.extend(emit(q, d, None, j, contents))
            else:
                for j in range(0, len(w) + 1):
                    targets.extend(emit(q, d, a, j, w))
            for key in targets:
                fresh = key not in seen
                trans.add((src, a, intern(*key)))
                if fresh:
                    seen.add(key)
                    todo.append(key)

    accepting = frozenset(i for (q, w, d), i in index.items()
                          if q in b.accepting and d == 0)
    out = BuchiAutomaton(
        name=name, alphabet=b.alphabet, n_states=len(labels),
        initial=start, accepting=accepting, transitions=frozenset(trans),
        state_labels=tuple(f"{q}|{'.'.join(w) or '-'}|{d}" for (q, w, d) in labels),
    )
    if len(b.alphabet) >= 2:
        bound = 2 * b.n_states * (len(b.alphabet) ** (k + 1) - 1)
        assert out.n_states <= bound, f"folded automaton exceeds {bound} states"
    return out


def reduce_buffer2(b: BuchiAutomaton, sigma: BufferMap, k2: int) -> BuchiAutomaton:
    """Eliminate buffer 2 (capacity k2 >= 1) into the state space of b."""
    if not isinstance(k2, int) or k2 < 1:
        raise ValueError("reduction undefined for capacity 0; it is the identity case")
    sigma.check_total(b.alphabet)
    buffered = tuple(a for a in b.alphabet if sigma[a] == 2)
    return _fold_buffer(b, buffered, k2, f"{b.name}+buf2:{k2}")


def reduce_buffer1(b: BuchiAutomaton, sigma: BufferMap, k1: int) -> BuchiAutomaton:
    """Mirror of reduce_buffer2 for buffer 1."""
    if not isinstance(k1, int) or k1 < 1:
        raise ValueError("reduction undefined for capacity 0; it is the identity case")
    sigma.check_total(b.alphabet)
    buffered = tuple(a for a in b.alphabet if sigma[a] == 1)
    return _fold_buffer(b, buffered, k1, f"{b.name}+buf1:{k1}")


def two_buffer_simulates_reduced(a: BuchiAutomaton, b: BuchiAutomaton,
                                 sigma: BufferMap, caps: Capacities,
                                 solver=zielonka_solve) -> bool:
    """Decide the buffered game by buffer elimination plus fair simulation."""
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    sigma.check_total(a.alphabet)
    b2 = reduce_buffer2(b, sigma, caps.k2) if caps.k2 >= 1 else b
    b12 = reduce_buffer1(b2, sigma, caps.k1) if caps.k1 >= 1 else b2
    return fair_simulates(a, b12, solver=solver)


# ---------------------------------------------------------------------------
# direct arena


def build_direct_arena(a: BuchiAutomaton, b: BuchiAutomaton, sigma: BufferMap,
                       caps: Capacities, single_consume: bool = False) -> BuiltGame:
    """Explicit arena of the two-buffer game.

    Round structure: Spoiler picks a transition of `a` and its letter is
    prepended to the buffer it maps to; Duplicator then consumes any
    number of oldest letters (micro-moves) and ends her turn.  Ending a
    turn over capacity loses immediately.

    Acceptance is tracked by a round-robin pointer over three awaited
    events, evaluated at the end of each turn: Duplicator in an accepting
    state, buffer 1 consumed-from or empty, buffer 2 consumed-from or
    empty.  A full wrap of the pointer gives the round priority 0;
    otherwise priority is 1 when Spoiler's latest state was accepting and
    2 when not.  `single_consume` restricts Duplicator to at most one
    consume per turn (used for a single-buffer sanity property).
    """
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    sigma.check_total(a.alphabet)
    k1, k2 = caps.k1, caps.k2
    adj_a = a.adjacency()
    b_succ = _letter_successors(b)
    bld = _Builder()

    initial_key = ("S", a.initial, (), (), b.initial, 0, 2)
    start = bld.node(initial_key, ODD, 2)
    todo = [initial_key]
    while todo:
        key = todo.pop()
        src = bld.index[key]
        if bld.edges[src]:
            continue
        if key[0] == "S":
            _, q, b1, b2, p, r, _ = key
            if not adj_a[q]:
                bld.edges[src].append(bld.sink("even"))
                continue
            for (x, q2) in adj_a[q]:
                nb1, nb2 = ((x,) + b1, b2) if sigma[x] == 1 else (b1, (x,) + b2)
                dkey = ("D", q2, nb1, nb2, p, r, q2 in a.accepting, False, False)
                fresh = dkey not in bld.index
                bld.edges[src].append(bld.node(dkey, EVEN, 2))
                if fresh:
                    todo.append(dkey)
        else:
            _, q, b1, b2, p, r, sp, c1, c2 = key
            succs = []
            if not (single_consume and (c1 or c2)):
                for which, buf in ((1, b1), (2, b2)):
                    if not buf:
                        continue
                    oldest = buf[-1]
                    shrunk = buf[:-1]
                    for p2 in b_succ.get((p, oldest), ()):
                        if which == 1:
                            nkey = ("D", q, shrunk, b2, p2, r, sp, True, c2)
                        else:
                            nkey = ("D", q, b1, shrunk, p2, r, sp, c1, True)
                        fresh = nkey not in bld.index
                        succs.append(bld.node(nkey, EVEN, 2))
                        if fresh:
                            todo.append(nkey)
            # ending the turn: capacity check, then event bookkeeping
            if len(b1) > k1 or len(b2) > k2:
                succs.append(bld.sink("odd"))
            else:
                events = (p in b.accepting, c1 or not b1, c2 or not b2)
                r2, wrapped = r, False
                for _ in range(3):
                    if not events[r2]:
                        break
                    r2 = (r2 + 1) % 3
                    if r2 == 0:
                        wrapped = True
                prio = 0 if wrapped else (1 if sp else 2)
                skey = ("S", q, b1, b2, p, r2, prio)
                fresh = skey not in bld.index
                succs.append(bld.node(skey, ODD, prio))
                if fresh:
                    todo.append(skey)
            bld.edges[src].extend(succs)

    built = bld.finish(initial_key)
    s1 = sum(1 for x in a.alphabet if sigma[x] == 1)
    s2 = len(a.alphabet) - s1
    if s1 >= 2 and s2 >= 2:
        bound = (2 * a.n_states * b.n_states * s1 ** (k1 + 2) * s2 ** (k2 + 2)
                 * 3 * 4 * 2)
        assert built.game.n_nodes <= bound, "arena exceeds its coarse size bound"
    return built


def two_buffer_simulates_direct(a: BuchiAutomaton, b: BuchiAutomaton,
                                sigma: BufferMap, caps: Capacities,
                                solver=zielonka_solve) -> bool:
    built = build_direct_arena(a, b, sigma, caps)
    return built.initial in solver(built.game).even_wins


def two_buffer_simulates(a: BuchiAutomaton, b: BuchiAutomaton, sigma: BufferMap,
                         caps: Capacities, method: str = "reduced") -> bool:
    """Dispatch to a pipeline; `both` cross-checks and raises on mismatch."""
    if method == "reduced":
        return two_buffer_simulates_reduced(a, b, sigma, caps)
    if method == "direct":
        return two_buffer_simulates_direct(a, b, sigma, caps)
    if method == "both":
        red = two_buffer_simulates_reduced(a, b, sigma, caps)
        direct = two_buffer_simulates_direct(a, b, sigma, caps)
        if red != direct:
            raise AssertionError(
                f"pipeline disagreement at {caps}: reduced={red} direct={direct}")
        return red
    raise ValueError(f"unknown method {method!r}")


def single_buffer_simulates(a: BuchiAutomaton, b: BuchiAutomaton, k: int,
                            method: str = "reduced") -> bool:
    """Single-buffer game: route every letter through buffer 1."""
    sigma = BufferMap({x: 1 for x in a.alphabet})
    return two_buffer_simulates(a, b, sigma, Capacities(k, 0), method=method)


# ---------------------------------------------------------------------------
# strategy inspection


def reachable_under_strategy(built: BuiltGame, regions: WinningRegions,
                             side: str) -> tuple[set[int], dict[int, list[int]]]:
    """Part of the arena reachable when `side` follows its strategy.

    The winner moves by strategy, the opponent arbitrarily.  Returns the
    node set and the restricted successor lists.
    """
    g = built.game
    if side == "even":
        region, strat, owner = regions.even_wins, regions.even_strategy, EVEN
    else:
        region, strat, owner = regions.odd_wins, regions.odd_strategy, ODD
    if built.initial not in region:
        return set(), {}
    succ: dict[int, list[int]] = {}
    todo = [built.initial]
    seen = {built.initial}
    while todo:
        v = todo.pop()
        nxt = [strat[v]] if g.owner[v] == owner else list(g.edges[v])
        succ[v] = nxt
        for w in nxt:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen, succ


def max_consumes_in_a_turn(built: BuiltGame, regions: WinningRegions) -> int:
    """Longest consume chain in any Duplicator turn she can be made to play
    under her winning strategy; 0 when Spoiler wins the initial node."""
    seen, succ = reachable_under_strategy(built, regions, "even")
    best = 0
    for v in seen:
        if built.phase(v) != "S":
            continue
        for d in succ.get(v, ()):
            if built.phase(d) != "D":
                continue
            count = 0
            node = d
            while built.phase(node) == "D":
                nxt = succ[node][0]
                if built.phase(nxt) == "D":
                    count += 1
                    node = nxt
                else:
                    break
            best = max(best, count)
    return best
