"""Büchi automata: data model, text format, and omega-language primitives.

States are dense 0-based indices.  Letters are plain interned strings.
All values are immutable after construction; every operation here is a
pure function of its inputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


class ParseError(ValueError):
    """Raised on malformed `.ba` / `.bt` input, with a line number."""


@dataclass(frozen=True)
class BufferMap:
    """Total assignment of letters to buffer 1 or buffer 2."""

    assignment: dict[str, int]

    def __post_init__(self):
        for a, i in self.assignment.items():
            if i not in (1, 2):
                raise ValueError(f"buffer index for letter {a!r} must be 1 or 2, got {i}")

    def __getitem__(self, letter: str) -> int:
        return self.assignment[letter]

    def letters_for(self, index: int) -> tuple[str, ...]:
        return tuple(a for a, i in self.assignment.items() if i == index)

    def check_total(self, alphabet):
        missing = [a for a in alphabet if a not in self.assignment]
        if missing:
            raise ValueError(f"buffer map not total: no buffer for {missing}")

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items())))


def _check_letter_id(a: str):
    if not a or any(c.isspace() or not c.isprintable() for c in a):
        raise ValueError(f"bad letter id {a!r}: need non-empty visible ASCII, no whitespace")
    if "#" in a or '"' in a:
        raise ValueError(f"bad letter id {a!r}: # and \" are reserved by the file formats")


@dataclass(frozen=True)
class BuchiAutomaton:
    name: str
    alphabet: tuple[str, ...]
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, str, int]]
    sigma: BufferMap | None = field(default=None, compare=False)
    state_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("automaton needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        for a in self.alphabet:
            _check_letter_id(a)
        if not (0 <= self.initial < self.n_states):
            raise ValueError(f"initial state {self.initial} out of range")
        for q in self.accepting:
            if not (0 <= q < self.n_states):
                raise ValueError(f"accepting state {q} out of range")
        letters = set(self.alphabet)
        for (src, a, dst) in self.transitions:
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError(f"transition ({src},{a},{dst}) endpoint out of range")
            if a not in letters:
                raise ValueError(f"undeclared letter {a} in transition ({src},{a},{dst})")
        if self.sigma is not None:
            self.sigma.check_total(self.alphabet)

    def successors(self, state: int, letter: str) -> list[int]:
        return sorted(dst for (src, a, dst) in self.transitions
                      if src == state and a == letter)

    def adjacency(self) -> list[list[tuple[str, int]]]:
        """Per-state outgoing edges sorted by (letter position, target)."""
        pos = {a: i for i, a in enumerate(self.alphabet)}
        adj: list[list[tuple[str, int]]] = [[] for _ in range(self.n_states)]
        for (src, a, dst) in self.transitions:
            adj[src].append((a, dst))
        for lst in adj:
            lst.sort(key=lambda e: (pos[e[0]], e[1]))
        return adj


def same_automaton(a: BuchiAutomaton, b: BuchiAutomaton) -> bool:
    """Structural equality up to transition order (names included)."""
    return (a.name == b.name and a.alphabet == b.alphabet
            and a.n_states == b.n_states and a.initial == b.initial
            and a.accepting == b.accepting and a.transitions == b.transitions)


@dataclass(frozen=True)
class Lasso:
    """Finite representation prefix . loop^omega of an ultimately periodic word."""

    prefix: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def letters(self) -> set[str]:
        return set(self.prefix) | set(self.loop)

    def canonical(self) -> "Lasso":
        """Unique minimal representation of the denoted omega-word."""
        loop = self.loop
        for d in range(1, len(loop)):
            if len(loop) % d == 0 and loop == loop[:d] * (len(loop) // d):
                loop = loop[:d]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == loop[-1]:
            loop = (loop[-1],) + loop[:-1]
            prefix = prefix[:-1]
        return Lasso(prefix, loop)

    def __str__(self):
        u = "".join(self.prefix) if all(len(a) == 1 for a in self.prefix) else " ".join(self.prefix)
        v = "".join(self.loop) if all(len(a) == 1 for a in self.loop) else " ".join(self.loop)
        return f"{u}({v})^w"


# ---------------------------------------------------------------------------
# .ba text format


def parse_ba(text: str) -> BuchiAutomaton:
    """Parse the line-oriented `.ba` format.

    Sections must appear in the canonical order (ba, alphabet, sigma?,
    states, initial, accepting, trans*).  `#` starts a comment.
    """
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((no, stripped))
    if not lines:
        raise ParseError("line 1: empty input, expected 'ba <name>'")

    it = iter(lines)

    def fail(no, msg):
        raise ParseError(f"line {no}: {msg}")

    no, line = next(it)
    if not line.startswith("ba ") and line != "ba":
        fail(no, "expected 'ba <name>'")
    name = line[3:].strip()
    if not name:
        fail(no, "automaton name missing")

    def expect(keyword):
        try:
            no, line = next(it)
        except StopIteration:
            raise ParseError(f"line {lines[-1][0]}: missing '{keyword}' line") from None
        parts = line.split()
        if parts[0] != keyword:
            fail(no, f"expected '{keyword}' line, got {parts[0]!r}")
        return no, parts[1:]

    no, letters = expect("alphabet")
    if not letters:
        fail(no, "alphabet must not be empty")
    alphabet = tuple(letters)
    if len(set(alphabet)) != len(alphabet):
        fail(no, "duplicate letter in alphabet")

    # optional sigma line
    sigma = None
    no, line = next(it, (None, None))
    if line is None:
        raise ParseError("unexpected end of input, missing 'states' line")
    parts = line.split()
    if parts[0] == "sigma":
        assignment = {}
        for item in parts[1:]:
            if "=" not in item:
                fail(no, f"bad sigma entry {item!r}, expected letter=1|2")
            a, _, idx = item.partition("=")
            if a not in alphabet:
                fail(no, f"undeclared letter {a}")
            if idx not in ("1", "2"):
                fail(no, f"buffer index for {a} must be 1 or 2")
            if a in assignment:
                fail(no, f"duplicate sigma entry for {a}")
            assignment[a] = int(idx)
        missing = [a for a in alphabet if a not in assignment]
        if missing:
            fail(no, f"sigma not total, missing {missing}")
        sigma = BufferMap(assignment)
        no, parts = expect("states")
    else:
        if parts[0] != "states":
            fail(no, f"expected 'states' line, got {parts[0]!r}")
        parts = parts[1:]

    if len(parts) != 1 or not parts[0].isdigit():
        fail(no, "expected 'states <n>'")
    n = int(parts[0])
    if n < 1:
        fail(no, "need at least one state")

    no, parts = expect("initial")
    if len(parts) != 1 or not parts[0].isdigit():
        fail(no, "expected 'initial <index>'")
    initial = int(parts[0])
    if initial >= n:
        fail(no, f"state index {initial} out of range (states {n})")

    no, parts = expect("accepting")
    accepting = set()
    for tok in parts:
        if not tok.isdigit():
            fail(no, f"bad state index {tok!r}")
        q = int(tok)
        if q >= n:
            fail(no, f"state index {q} out of range (states {n})")
        accepting.add(q)

    transitions = set()
    for no, line in it:
        parts = line.split()
        if parts[0] != "trans":
            fail(no, f"expected 'trans' line, got {parts[0]!r}")
        if len(parts) != 4:
            fail(no, "expected 'trans <src> <letter> <dst>'")
        _, src_s, a, dst_s = parts
        if not src_s.isdigit() or not dst_s.isdigit():
            fail(no, "state indices must be numeric")
        src, dst = int(src_s), int(dst_s)
        if src >= n or dst >= n:
            fail(no, f"state index {max(src, dst)} out of range (states {n})")
        if a not in alphabet:
            fail(no, f"undeclared letter {a}")
        transitions.add((src, a, dst))

    return BuchiAutomaton(name=name, alphabet=alphabet, n_states=n, initial=initial,
                          accepting=frozenset(accepting), transitions=frozenset(transitions),
                          sigma=sigma)


def serialize_ba(aut: BuchiAutomaton) -> str:
    """Emit the canonical `.ba` text (transitions sorted by src, letter, dst)."""
    pos = {a: i for i, a in enumerate(aut.alphabet)}
    out = [f"ba {aut.name}", "alphabet " + " ".join(aut.alphabet)]
    if aut.sigma is not None:
        out.append("sigma " + " ".join(f"{a}={aut.sigma[a]}" for a in aut.alphabet))
    out.append(f"states {aut.n_states}")
    out.append(f"initial {aut.initial}")
    out.append("accepting " + " ".join(str(q) for q in sorted(aut.accepting)))
    for (src, a, dst) in sorted(aut.transitions, key=lambda t: (t[0], pos[t[1]], t[2])):
        out.append(f"trans {src} {a} {dst}")
    return "\n".join(out).rstrip() + "\n"


# ---------------------------------------------------------------------------
# omega-language primitives


def lasso_automaton(w: Lasso, alphabet: tuple[str, ...], name: str = "lasso") -> BuchiAutomaton:
    """Deterministic |prefix|+|loop| state automaton with L = {prefix.loop^w}.

    Exactly one loop state (the loop entry) is accepting.
    """
    for a in w.letters():
        if a not in alphabet:
            raise ValueError(f"foreign letter {a} not in alphabet")
    lp, ll = len(w.prefix), len(w.loop)
    trans = set()
    for i, a in enumerate(w.prefix):
        trans.add((i, a, i + 1))
    for j, a in enumerate(w.loop):
        trans.add((lp + j, a, lp + (j + 1) % ll))
    return BuchiAutomaton(name=name, alphabet=alphabet, n_states=lp + ll,
                          initial=0, accepting=frozenset({lp}),
                          transitions=frozenset(trans))


def degeneralize(name, alphabet, n_states, initial, transitions, condition_sets,
                 state_labels=None) -> BuchiAutomaton:
    """Round-robin degeneralization of a generalized Büchi acceptance.

    `condition_sets` is a list of state sets, each to be visited infinitely
    often.  A counter waits for the current set and advances past it; the
    accepting states are the wrap points.  Only reachable states are kept.
    """
    k = len(condition_sets)
    if k == 0:
        return BuchiAutomaton(name=name, alphabet=alphabet, n_states=n_states,
                              initial=initial, accepting=frozenset(range(n_states)),
                              transitions=frozenset(transitions), state_labels=state_labels)
    adj: list[list[tuple[str, int]]] = [[] for _ in range(n_states)]
    for (src, a, dst) in transitions:
        adj[src].append((a, dst))
    index: dict[tuple[int, int], int] = {}
    labels = []

    def intern(s, r):
        key = (s, r)
        if key not in index:
            index[key] = len(index)
            labels.append(f"{state_labels[s] if state_labels else s}|{r}")
        return index[key]

    start = intern(initial, 0)
    queue = deque([(initial, 0)])
    out = set()
    seen = {(initial, 0)}
    while queue:
        s, r = queue.popleft()
        r2 = (r + 1) % k if s in condition_sets[r] else r
        for (a, dst) in adj[s]:
            key = (dst, r2)
            out.add((intern(s, r), a, intern(dst, r2)))
            if key not in seen:
                seen.add(key)
                queue.append(key)
    accepting = frozenset(i for (s, r), i in index.items()
                          if r == 0 and s in condition_sets[0])
    return BuchiAutomaton(name=name, alphabet=alphabet, n_states=len(index),
                          initial=start, accepting=accepting,
                          transitions=frozenset(out), state_labels=tuple(labels))


def buchi_intersection(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    """Product automaton with L = L(a) n L(b); at most 2*|Qa|*|Qb| states."""
    if a.alphabet != b.alphabet:
        raise ValueError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    adj_a, adj_b = a.adjacency(), b.adjacency()
    # reachable product states first, then a round-robin flag over both
    # acceptance sets
    pairs = {}
    order = []

    def intern(p, q):
        if (p, q) not in pairs:
            pairs[(p, q)] = len(pairs)
            order.append((p, q))
        return pairs[(p, q)]

    start = intern(a.initial, b.initial)
    queue = deque([(a.initial, b.initial)])
    trans = set()
    while queue:
        p, q = queue.popleft()
        src = pairs[(p, q)]
        by_letter: dict[str, list[int]] = {}
        for (x, q2) in adj_b[q]:
            by_letter.setdefault(x, []).append(q2)
        for (x, p2) in adj_a[p]:
            for q2 in by_letter.get(x, ()):
                fresh = (p2, q2) not in pairs
                trans.add((src, x, intern(p2, q2)))
                if fresh:
                    queue.append((p2, q2))
    cond_a = {i for (p, q), i in pairs.items() if p in a.accepting}
    cond_b = {i for (p, q), i in pairs.items() if q in b.accepting}
    labels = tuple(f"{p},{q}" for (p, q) in order)
    return degeneralize(f"({a.name}&{b.name})", a.alphabet, len(pairs), start,
                        trans, [cond_a, cond_b], state_labels=labels)


def buchi_emptiness(a: BuchiAutomaton) -> Lasso | None:
    """Witness lasso in L(a), or None iff the language is empty.

    Picks a reachable accepting state on a cycle, minimizing prefix plus
    cycle length (ties broken by state index).
    """
    adj = a.adjacency()

    def bfs(start):
        dist = {start: ((), None)}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            path = dist[s][0]
            for (x, t) in adj[s]:
                if t not in dist:
                    dist[t] = (path + (x,), s)
                    queue.append(t)
        return dist

    from_init = bfs(a.initial)
    best = None
    for f in sorted(a.accepting):
        if f not in from_init:
            continue
        # shortest cycle through f: one step out, then back
        back = _bfs_to(adj, f)
        cyc = None
        for (x, t) in adj[f]:
            if t in back:
                cand = (x,) + back[t]
                if cyc is None or len(cand) < len(cyc):
                    cyc = cand
        if cyc is None:
            continue
        total = len(from_init[f][0]) + len(cyc)
        if best is None or total < best[0]:
            best = (total, from_init[f][0], cyc)
    if best is None:
        return None
    return Lasso(best[1], best[2])


def _bfs_to(adj, goal):
    """Shortest letter paths into `goal` (reverse BFS); goal maps to ()."""
    preds: dict[int, list[tuple[str, int]]] = {}
    for s, edges in enumerate(adj):
        for (x, t) in edges:
            preds.setdefault(t, []).append((x, s))
    dist = {goal: ()}
    queue = deque([goal])
    while queue:
        t = queue.popleft()
        for (x, s) in sorted(preds.get(t, ()), key=lambda e: (e[1], e[0])):
            if s not in dist:
                dist[s] = (x,) + dist[t]
                queue.append(s)
    return dist


def lasso_membership(a: BuchiAutomaton, w: Lasso) -> bool:
    """True iff the omega-word of w is in L(a)."""
    for x in w.letters():
        if x not in a.alphabet:
            raise ValueError(f"foreign letter {x} not in alphabet of {a.name}")
    prod = buchi_intersection(a, lasso_automaton(w, a.alphabet))
    return buchi_emptiness(prod) is not None


def sample_accepting_lassos(a: BuchiAutomaton, max_count: int) -> list[Lasso]:
    """Up to max_count accepting lassos, distinct as omega-words.

    Deterministic: prefixes are enumerated breadth-first (shortest first,
    alphabet then target order), each closed with the shortest accepting
    loop from its endpoint.  Gives up after exploring 10*max_count
    prefixes.
    """
    if max_count < 1:
        raise ValueError("max_count must be positive")
    adj = a.adjacency()
    loop_cache: dict[int, tuple[str, ...] | None] = {}

    def shortest_accepting_loop(s):
        # BFS over (state, visited accepting yet) to close a cycle at s
        if s in loop_cache:
            return loop_cache[s]
        start = (s, s in a.accepting)
        dist = {start: ()}
        queue = deque([start])
        found = None
        while queue and found is None:
            (t, flag) = queue.popleft()
            for (x, u) in adj[t]:
                nxt = (u, flag or u in a.accepting)
                if u == s and nxt[1]:
                    found = dist[(t, flag)] + (x,)
                    break
                if nxt not in dist:
                    dist[nxt] = dist[(t, flag)] + (x,)
                    queue.append(nxt)
        loop_cache[s] = found
        return found

    results: list[Lasso] = []
    seen_words = set()
    queue = deque([(a.initial, ())])
    explored = 0
    while queue and explored < 10 * max_count and len(results) < max_count:
        s, prefix = queue.popleft()
        explored += 1
        loop = shortest_accepting_loop(s)
        if loop is not None:
            w = Lasso(prefix, loop)
            key = w.canonical()
            if key not in seen_words:
                seen_words.add(key)
                results.append(w)
                if len(results) >= max_count:
                    break
        for (x, t) in adj[s]:
            queue.append((t, prefix + (x,)))
    return results
