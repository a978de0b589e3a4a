"""Explicit min-parity games of index 3 and two independent solvers.

Convention: Even wins a play iff the minimal priority occurring infinitely
often is even.  Every node must have at least one successor; arena builders
replace dead ends by loser sinks before the solvers run.

The two solvers (recursive attractor decomposition and progress-measure
lifting) exist to cross-check each other; they must always return the same
region partition.
"""

from __future__ import annotations

from dataclasses import dataclass

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class ParityGame:
    owner: tuple[int, ...]        # EVEN or ODD per node
    priority: tuple[int, ...]     # 0, 1 or 2
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.owner)
        if not (len(self.priority) == len(self.edges) == n):
            raise ValueError("owner/priority/edges length mismatch")
        for v in range(n):
            if self.owner[v] not in (EVEN, ODD):
                raise ValueError(f"bad owner at node {v}")
            if not (0 <= self.priority[v] <= 2):
                raise ValueError(f"priority at node {v} outside 0..2")
            if not self.edges[v]:
                raise ValueError(f"node {v} has no successors (dead end)")
            for w in self.edges[v]:
                if not (0 <= w < n):
                    raise ValueError(f"edge {v}->{w} out of range")

    @property
    def n_nodes(self):
        return len(self.owner)

    def predecessors(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for v, succ in enumerate(self.edges):
            for w in succ:
                preds[w].append(v)
        return preds


@dataclass(frozen=True)
class WinningRegions:
    even_wins: frozenset[int]
    odd_wins: frozenset[int]
    even_strategy: dict[int, int]
    odd_strategy: dict[int, int]


def dump_pg(g: ParityGame) -> str:
    """One line per node: `node <idx> <owner E|O> <prio> -> <succs>`."""
    lines = []
    for v in range(g.n_nodes):
        who = "E" if g.owner[v] == EVEN else "O"
        succ = ",".join(str(w) for w in g.edges[v])
        lines.append(f"node {v} {who} {g.priority[v]} -> {succ}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# attractors


def attractor(g: ParityGame, target, player: int) -> frozenset[int]:
    """Least set from which `player` can force reaching `target`."""
    result, _ = _attract(g, g.predecessors(), bytearray([1]) * g.n_nodes,
                         set(target), player)
    return frozenset(result)


def _attract(g, preds, alive, target, player):
    """Attractor inside the `alive` subgame, with forcing edges.

    Returns (set, strategy) where strategy maps newly attracted
    player-owned nodes to the lowest-index successor that pulls them in.
    """
    inside = set(q for q in target if alive[q])
    strategy: dict[int, int] = {}
    # remaining successors outside the attractor, for opponent nodes
    count = {}
    queue = sorted(inside)
    head = 0
    while head < len(queue):
        w = queue[head]
        head += 1
        for v in preds[w]:
            if not alive[v] or v in inside:
                continue
            if g.owner[v] == player:
                # deterministic forcing edge: lowest successor already inside
                # (chosen before v joins, so a self-loop can never be picked)
                strategy[v] = min(u for u in g.edges[v] if u in inside)
                inside.add(v)
                queue.append(v)
            else:
                if v not in count:
                    count[v] = sum(1 for u in g.edges[v] if alive[u])
                count[v] -= 1
                if count[v] == 0:
                    inside.add(v)
                    queue.append(v)
    return inside, strategy


# ---------------------------------------------------------------------------
# recursive solver (attractor decomposition)


def zielonka_solve(g: ParityGame) -> WinningRegions:
    """Solve by recursive attractor decomposition on the minimal priority."""
    preds = g.predecessors()
    even_strategy: dict[int, int] = {}
    odd_strategy: dict[int, int] = {}
    strategy = (even_strategy, odd_strategy)

    def solve(alive, nodes):
        if not nodes:
            return set(), set()
        m = min(g.priority[v] for v in nodes)
        player = m % 2
        other = 1 - player
        target = {v for v in nodes if g.priority[v] == m}
        attr, attr_strat = _attract(g, preds, alive, target, player)
        sub_alive = bytearray(alive)
        for v in attr:
            sub_alive[v] = 0
        rest = nodes - attr
        win = solve(sub_alive, rest)
        if not win[other]:
            # player wins everywhere: attractor strategy plus any live move
            # on the minimal-priority nodes themselves
            strategy[player].update(attr_strat)
            for v in target:
                if g.owner[v] == player:
                    strategy[player][v] = min(u for u in g.edges[v] if alive[u])
            out = [set(), set()]
            out[player] = set(nodes)
            return out[0], out[1]
        trap, trap_strat = _attract(g, preds, alive, win[other], other)
        strategy[other].update(trap_strat)
        sub_alive = bytearray(alive)
        for v in trap:
            sub_alive[v] = 0
        win2 = solve(sub_alive, nodes - trap)
        out = [set(), set()]
        out[player] = win2[player]
        out[other] = win2[other] | trap
        return out[0], out[1]

    all_nodes = set(range(g.n_nodes))
    even_wins, odd_wins = solve(bytearray([1]) * g.n_nodes, all_nodes)
    # recursion may have left stale entries for nodes later re-assigned
    even_strategy = {v: u for v, u in even_strategy.items()
                     if v in even_wins and g.owner[v] == EVEN}
    odd_strategy = {v: u for v, u in odd_strategy.items()
                    if v in odd_wins and g.owner[v] == ODD}
    regions = WinningRegions(frozenset(even_wins), frozenset(odd_wins),
                             even_strategy, odd_strategy)
    _check_regions(g, regions)
    return regions


# ---------------------------------------------------------------------------
# progress-measure solver


def progress_measure_solve(g: ParityGame) -> WinningRegions:
    """Independent solver: small progress measures, run once per player.

    The Odd side is solved by shifting every priority up by one and
    swapping owners, which turns Odd's objective into an Even one.
    """
    even_wins, even_strategy = _lift_side(g, flip=False)
    odd_wins, odd_strategy = _lift_side(g, flip=True)
    regions = WinningRegions(frozenset(even_wins), frozenset(odd_wins),
                             even_strategy, odd_strategy)
    if even_wins & odd_wins or len(even_wins) + len(odd_wins) != g.n_nodes:
        raise AssertionError("progress-measure runs do not partition the nodes")
    _check_regions(g, regions)
    return regions


def _lift_side(g, flip):
    n = g.n_nodes
    if flip:
        prios = [p + 1 for p in g.priority]
        owner = [1 - o for o in g.owner]
    else:
        prios = list(g.priority)
        owner = list(g.owner)
    odd_prios = sorted({p for p in prios if p % 2 == 1})
    limits = {p: sum(1 for q in prios if q == p) for p in odd_prios}
    comp = {p: i for i, p in enumerate(odd_prios)}
    k = len(odd_prios)
    top = None
    zero = (0,) * k
    rho: list[tuple | None] = [zero] * n

    def prog(v, w):
        m = rho[w]
        if m is top:
            return top
        p = prios[v]
        # keep components for odd priorities <= p, zero the rest
        vals = [m[comp[q]] if q <= p else 0 for q in odd_prios]
        if p % 2 == 0:
            return tuple(vals)
        # strictly increase within components <= p (lexicographic, most
        # significant first)
        for i in range(k - 1, -1, -1):
            q = odd_prios[i]
            if q > p:
                continue
            if vals[i] < limits[q]:
                vals[i] += 1
                for j in range(i + 1, k):
                    vals[j] = 0
                return tuple(vals)
            vals[i] = 0
        return top

    def value(v):
        best = None
        if owner[v] == EVEN:
            for w in g.edges[v]:
                cand = prog(v, w)
                if cand is not top and (best is None or best is top or cand < best):
                    best = cand
            return best if best is not None else top
        for w in g.edges[v]:
            cand = prog(v, w)
            if cand is top:
                return top
            if best is None or cand > best:
                best = cand
        return best

    preds = g.predecessors()
    pending = list(range(n))
    queued = bytearray([1]) * n
    head = 0
    while head < len(pending):
        v = pending[head]
        head += 1
        queued[v] = 0
        new = value(v)
        cur = rho[v]
        if new is top:
            bigger = cur is not top
        else:
            bigger = cur is not top and new > cur
        if bigger:
            rho[v] = new
            for u in preds[v]:
                if not queued[u] and rho[u] is not top:
                    queued[u] = 1
                    pending.append(u)

    wins = {v for v in range(n) if rho[v] is not top}
    strategy = {}
    for v in wins:
        if owner[v] != EVEN:
            continue
        best, best_w = None, None
        for w in g.edges[v]:
            cand = prog(v, w)
            if cand is top:
                continue
            if best is None or cand < best:
                best, best_w = cand, w
        strategy[v] = best_w
    return wins, strategy


# ---------------------------------------------------------------------------
# shared sanity checks


def _check_regions(g, regions):
    if regions.even_wins | regions.odd_wins != set(range(g.n_nodes)) or \
            regions.even_wins & regions.odd_wins:
        raise AssertionError("winning regions do not partition the node set")
    for player, strat, region in ((EVEN, regions.even_strategy, regions.even_wins),
                                  (ODD, regions.odd_strategy, regions.odd_wins)):
        for v in region:
            if g.owner[v] != player:
                continue
            if v not in strat:
                raise AssertionError(f"no strategy for node {v}")
            w = strat[v]
            if w not in g.edges[v]:
                raise AssertionError(f"strategy edge {v}->{w} not in game")
            if w not in region:
                raise AssertionError(f"strategy edge {v}->{w} leaves winning region")


def strategy_cycles_consistent(g: ParityGame, regions: WinningRegions) -> bool:
    """Check both strategies by cycle analysis of the restricted subgraphs.

    Within even_wins, fixing Even's strategy, every cycle must have even
    minimal priority; dually for Odd.
    """
    ok = _no_bad_cycles(g, regions.even_wins, regions.even_strategy, EVEN,
                        bad_parities=(1,))
    ok &= _no_bad_cycles(g, regions.odd_wins, regions.odd_strategy, ODD,
                         bad_parities=(0, 2))
    return ok


def _no_bad_cycles(g, region, strategy, player, bad_parities):
    succ = {}
    for v in region:
        if g.owner[v] == player:
            succ[v] = [strategy[v]]
        else:
            succ[v] = list(g.edges[v])
            if any(w not in region for w in succ[v]):
                return False
    for m in bad_parities:
        # a cycle with minimal priority exactly m lives in the subgraph of
        # priorities >= m and must contain a node of priority m
        nodes = [v for v in region if g.priority[v] >= m]
        for scc in _sccs(nodes, lambda v: (w for w in succ[v] if g.priority[w] >= m)):
            cyclic = len(scc) > 1 or any(v in succ[v] for v in scc)
            if cyclic and any(g.priority[v] == m for v in scc):
                return False
    return True


def _sccs(nodes, succ_fn):
    """Iterative Tarjan over the given node set."""
    node_set = set(nodes)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = [0]
    out = []
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter([w for w in succ_fn(root) if w in node_set]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([u for u in succ_fn(w) if u in node_set])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(comp)
    return out
