"""Two-tape Büchi transducers and a sound, incomplete inclusion check for
the relations they recognise over infinite words."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .automata import BuchiAutomaton, BufferMap, ParseError, _check_letter_id
from .simulation import Capacities, two_buffer_simulates


@dataclass(frozen=True)
class Transducer:
    """Transitions read a finite input word and a finite output word.

    Input and output alphabets must be disjoint; a transition consuming
    nothing on both tapes is rejected outright rather than eliminated.
    """

    name: str
    in_alphabet: tuple[str, ...]
    out_alphabet: tuple[str, ...]
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, tuple[str, ...], tuple[str, ...], int]]

    def __post_init__(self):
        for x in self.in_alphabet + self.out_alphabet:
            _check_letter_id(x)
        overlap = set(self.in_alphabet) & set(self.out_alphabet)
        if overlap:
            raise ValueError(f"overlapping alphabets: {sorted(overlap)}")
        if not (0 <= self.initial < self.n_states):
            raise ValueError("initial state out of range")
        for q in self.accepting:
            if not (0 <= q < self.n_states):
                raise ValueError(f"accepting state {q} out of range")
        ins, outs = set(self.in_alphabet), set(self.out_alphabet)
        for (src, u, v, dst) in self.transitions:
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError("transition endpoint out of range")
            if not u and not v:
                raise ValueError("epsilon/epsilon transitions unsupported")
            for x in u:
                if x not in ins:
                    raise ValueError(f"undeclared input letter {x}")
            for x in v:
                if x not in outs:
                    raise ValueError(f"undeclared output letter {x}")

    def is_normalised(self) -> bool:
        return all(len(u) + len(v) == 1 for (_, u, v, _) in self.transitions)


def parse_bt(text: str) -> Transducer:
    """Parse the `.bt` format: like `.ba` but with in/out alphabets and
    word-pair transitions (`:` is the empty word, quoted words are
    space-separated letter lists)."""
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((no, stripped))
    if not lines:
        raise ParseError("line 1: empty input, expected 'bt <name>'")
    it = iter(lines)

    def fail(no, msg):
        raise ParseError(f"line {no}: {msg}")

    no, line = next(it)
    if not line.startswith("bt "):
        fail(no, "expected 'bt <name>'")
    name = line[3:].strip()

    def expect(keyword):
        try:
            no, line = next(it)
        except StopIteration:
            raise ParseError(f"line {lines[-1][0]}: missing '{keyword}' line") from None
        parts = line.split()
        if parts[0] != keyword:
            fail(no, f"expected '{keyword}' line, got {parts[0]!r}")
        return no, parts[1:]

    no, ins = expect("in")
    no, outs = expect("out")
    if not ins or not outs:
        fail(no, "in/out alphabets must not be empty")
    no, parts = expect("states")
    if len(parts) != 1 or not parts[0].isdigit():
        fail(no, "expected 'states <n>'")
    n = int(parts[0])
    no, parts = expect("initial")
    if len(parts) != 1 or not parts[0].isdigit():
        fail(no, "expected 'initial <index>'")
    initial = int(parts[0])
    no, parts = expect("accepting")
    accepting = set()
    for tok in parts:
        if not tok.isdigit():
            fail(no, f"bad state index {tok!r}")
        accepting.add(int(tok))

    declared = set(ins) | set(outs)

    def split_word(no, tok, letters):
        if tok == ":":
            return ()
        if tok.startswith('"'):
            if not tok.endswith('"') or len(tok) < 2:
                fail(no, f"unterminated quote in {tok}")
            parts = tok[1:-1].split()
            for x in parts:
                if x not in letters:
                    fail(no, f"undeclared letter {x}")
            return tuple(parts)
        for c in tok:
            if c not in letters:
                fail(no, f"undeclared letter {c}")
        return tuple(tok)

    transitions = set()
    for no, line in it:
        # re-split keeping quoted words intact
        toks = _tokenize(no, line)
        if toks[0] != "trans" or len(toks) != 5:
            fail(no, "expected 'trans <src> <u|:> <v|:> <dst>'")
        _, src_s, u_tok, v_tok, dst_s = toks
        if not src_s.isdigit() or not dst_s.isdigit():
            fail(no, "state indices must be numeric")
        src, dst = int(src_s), int(dst_s)
        if src >= n or dst >= n:
            fail(no, f"state index {max(src, dst)} out of range (states {n})")
        u = split_word(no, u_tok, set(ins))
        v = split_word(no, v_tok, set(outs))
        if not u and not v:
            fail(no, "epsilon/epsilon transitions unsupported")
        transitions.add((src, u, v, dst))

    try:
        return Transducer(name, tuple(ins), tuple(outs), n, initial,
                          frozenset(accepting), frozenset(transitions))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _tokenize(no, line):
    toks, cur, quoting = [], [], False
    for c in line:
        if quoting:
            cur.append(c)
            if c == '"':
                quoting = False
        elif c == '"':
            cur.append(c)
            quoting = True
        elif c.isspace():
            if cur:
                toks.append("".join(cur))
                cur = []
        else:
            cur.append(c)
    if quoting:
        raise ParseError(f"line {no}: unterminated quote")
    if cur:
        toks.append("".join(cur))
    return toks


def serialize_bt(t: Transducer) -> str:
    def word(w):
        if not w:
            return ":"
        if all(len(x) == 1 for x in w):
            return "".join(w)
        return '"' + " ".join(w) + '"'

    out = [f"bt {t.name}",
           "in " + " ".join(t.in_alphabet),
           "out " + " ".join(t.out_alphabet),
           f"states {t.n_states}",
           f"initial {t.initial}",
           "accepting " + " ".join(str(q) for q in sorted(t.accepting))]
    for (src, u, v, dst) in sorted(t.transitions):
        out.append(f"trans {src} {word(u)} {word(v)} {dst}")
    return "\n".join(out) + "\n"


def normalize(t: Transducer) -> Transducer:
    """Split every transition into single-letter, single-tape steps.

    Fresh intermediate states are non-accepting and appended after the
    existing ones; the input word is consumed before the output word.
    An already-normalised transducer comes back unchanged.
    """
    if t.is_normalised():
        return t
    transitions = set()
    next_state = [t.n_states]

    def fresh():
        next_state[0] += 1
        return next_state[0] - 1

    for (src, u, v, dst) in sorted(t.transitions):
        steps = [(x, None) for x in u] + [(None, x) for x in v]
        cur = src
        for i, (xi, xo) in enumerate(steps):
            tgt = dst if i == len(steps) - 1 else fresh()
            if xi is not None:
                transitions.add((cur, (xi,), (), tgt))
            else:
                transitions.add((cur, (), (xo,), tgt))
            cur = tgt
    return Transducer(t.name, t.in_alphabet, t.out_alphabet, next_state[0],
                      t.initial, t.accepting, frozenset(transitions))


def to_automaton(t: Transducer) -> tuple[BuchiAutomaton, BufferMap]:
    """Read a normalised transducer as a Büchi automaton over the union
    alphabet, with input letters on buffer 1 and output letters on 2."""
    if not t.is_normalised():
        raise ValueError(f"transducer {t.name} is not normalised")
    alphabet = t.in_alphabet + t.out_alphabet
    trans = set()
    for (src, u, v, dst) in t.transitions:
        trans.add((src, (u + v)[0], dst))
    sigma = BufferMap({x: 1 for x in t.in_alphabet} | {x: 2 for x in t.out_alphabet})
    aut = BuchiAutomaton(t.name, alphabet, t.n_states, t.initial, t.accepting,
                         frozenset(trans), sigma=sigma)
    return aut, sigma


class Inclusion(enum.Enum):
    INCLUDED = "INCLUDED"
    UNKNOWN = "UNKNOWN"


def relation_inclusion_approx(t: Transducer, t2: Transducer,
                              caps: Capacities, method: str = "reduced") -> Inclusion:
    """Sound approximation of relation inclusion R(t) <= R(t2).

    INCLUDED is trustworthy; UNKNOWN says nothing (bounded lookahead may
    simply be too weak for the pair).
    """
    if set(t.in_alphabet) != set(t2.in_alphabet) or \
            set(t.out_alphabet) != set(t2.out_alphabet):
        raise ValueError("alphabet mismatch between transducers")
    a, sigma = to_automaton(normalize(t))
    b, _ = to_automaton(normalize(t2))
    if a.alphabet != b.alphabet:
        b = BuchiAutomaton(b.name, a.alphabet, b.n_states, b.initial,
                           b.accepting, b.transitions, sigma=sigma)
    won = two_buffer_simulates(a, b, sigma, caps, method=method)
    return Inclusion.INCLUDED if won else Inclusion.UNKNOWN
