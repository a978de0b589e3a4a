"""Command-line frontend.

Exit codes are the machine contract:
  0  DuplicatorWins / INCLUDED / report clean
  1  SpoilerWins / UNKNOWN / report violation
  2  usage or input errors
  3  the two pipelines disagreed under --method both (a solver bug)
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .automata import ParseError, parse_ba, serialize_ba
from .generators import (PcpInstance, check_projection_lemma,
                         gen_hierarchy_family, gen_pcp_automata,
                         random_automaton, random_sigma)
from .paritygame import dump_pg, zielonka_solve
from .simulation import (Capacities, build_direct_arena, fair_simulates,
                         reachable_under_strategy, two_buffer_simulates_direct,
                         two_buffer_simulates_reduced)
from .transducers import Inclusion, parse_bt, relation_inclusion_approx


@dataclass
class Verdict:
    outcome: str            # DUPLICATOR | SPOILER | INCLUDED | UNKNOWN
    method: str
    caps: Capacities
    nodes: int = 0
    millis: float = 0.0
    witness: str | None = None


def _load_ba(path):
    try:
        return parse_ba(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_bt(path):
    try:
        return parse_bt(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _sim_inputs(args):
    a, b = _load_ba(args.left), _load_ba(args.right)
    if a.alphabet != b.alphabet:
        raise ParseError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    if a.sigma is None or b.sigma is None:
        raise ParseError("both inputs need a sigma line for buffered games")
    if a.sigma.assignment != b.sigma.assignment:
        raise ParseError("sigma lines disagree between the two inputs")
    return a, b, a.sigma


def _parse_sweep(text):
    lo, sep, hi = text.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
        raise ParseError(f"bad sweep range {text!r}, expected LO..HI")
    return int(lo), int(hi)


def _decide(a, b, sigma, caps, method):
    """Run the chosen pipeline(s); returns (won, nodes) or raises Disagreement."""
    if method == "reduced":
        return two_buffer_simulates_reduced(a, b, sigma, caps)
    if method == "direct":
        return two_buffer_simulates_direct(a, b, sigma, caps)
    red = two_buffer_simulates_reduced(a, b, sigma, caps)
    direct = two_buffer_simulates_direct(a, b, sigma, caps)
    if red != direct:
        raise _Disagreement(caps, red, direct)
    return red


class _Disagreement(Exception):
    def __init__(self, caps, red, direct):
        super().__init__(f"pipeline disagreement at {caps}")
        self.caps, self.red, self.direct = caps, red, direct


def _write_witness(path, a, b, sigma, caps):
    built = build_direct_arena(a, b, sigma, caps)
    regions = zielonka_solve(built.game)
    side = "even" if built.initial in regions.even_wins else "odd"
    strat = regions.even_strategy if side == "even" else regions.odd_strategy
    seen, _ = reachable_under_strategy(built, regions, side)
    winner = "DUPLICATOR" if side == "even" else "SPOILER"
    lines = [f"# winner {winner} caps {caps}",
             "# strategy edges (node -> successor), reachable part only"]
    for v in sorted(seen):
        if v in strat:
            lines.append(f"{v}\t{strat[v]}\t{_fmt_node(built.legend[v])}\t"
                         f"{_fmt_node(built.legend[strat[v]])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    legend_path = str(path) + ".legend.tsv"
    _write_legend(legend_path, built)
    return path


def _fmt_buf(buf):
    return ".".join(buf) if buf else "-"


def _fmt_node(key):
    if key[0] == "S":
        _, q, b1, b2, p, r, prio = key
        return f"S q={q} b1={_fmt_buf(b1)} b2={_fmt_buf(b2)} p={p} r={r} prio={prio}"
    if key[0] == "D":
        _, q, b1, b2, p, r, sp, c1, c2 = key
        flags = f"{int(sp)}{int(c1)}{int(c2)}"
        return f"D q={q} b1={_fmt_buf(b1)} b2={_fmt_buf(b2)} p={p} r={r} flags={flags}"
    return f"SINK {key[1]}"


def _write_legend(path, built):
    rows = ["idx\tphase\tq\tbeta1\tbeta2\tp\tr\tflags"]
    for i, key in enumerate(built.legend):
        if key[0] == "S":
            _, q, b1, b2, p, r, prio = key
            rows.append(f"{i}\tS\t{q}\t{_fmt_buf(b1)}\t{_fmt_buf(b2)}\t{p}\t{r}\tprio{prio}")
        elif key[0] == "D":
            _, q, b1, b2, p, r, sp, c1, c2 = key
            rows.append(f"{i}\tD\t{q}\t{_fmt_buf(b1)}\t{_fmt_buf(b2)}\t{p}\t{r}\t"
                        f"sp={int(sp)},c1={int(c1)},c2={int(c2)}")
        else:
            rows.append(f"{i}\tSINK\t-\t-\t-\t-\t-\t{key[1]}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_sim(args) -> int:
    a, b, sigma = _sim_inputs(args)
    if args.sweep:
        lo, hi = _parse_sweep(args.sweep)
        for k1 in range(lo, hi + 1):
            for k2 in range(lo, hi + 1):
                won = _decide(a, b, sigma, Capacities(k1, k2), args.method)
                print(f"{'DUPLICATOR' if won else 'SPOILER'} k1={k1} k2={k2}")
        return 0
    caps = Capacities(args.k1, args.k2)
    t0 = time.perf_counter()
    won = _decide(a, b, sigma, caps, args.method)
    millis = 1000 * (time.perf_counter() - t0)
    print(f"{'DUPLICATOR' if won else 'SPOILER'} k1={caps.k1} k2={caps.k2}")
    print(f"# method={args.method} time_ms={millis:.1f}", file=sys.stderr)
    if args.witness_out:
        _write_witness(args.witness_out, a, b, sigma, caps)
        print(f"# witness written to {args.witness_out}", file=sys.stderr)
    return 0 if won else 1


def cmd_fairsim(args) -> int:
    a, b = _load_ba(args.left), _load_ba(args.right)
    if a.alphabet != b.alphabet:
        raise ParseError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    won = fair_simulates(a, b)
    print("DUPLICATOR" if won else "SPOILER")
    return 0 if won else 1


def cmd_include_rel(args) -> int:
    t, t2 = _load_bt(args.left), _load_bt(args.right)
    if args.sweep:
        lo, hi = _parse_sweep(args.sweep)
        for k1 in range(lo, hi + 1):
            for k2 in range(lo, hi + 1):
                verdict = relation_inclusion_approx(t, t2, Capacities(k1, k2))
                print(f"{verdict.value} k1={k1} k2={k2}")
        return 0
    verdict = relation_inclusion_approx(t, t2, Capacities(args.k1, args.k2))
    print(verdict.value)
    return 0 if verdict is Inclusion.INCLUDED else 1


def cmd_gen(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.family == "hierarchy":
        a, b, sigma = gen_hierarchy_family(args.k1)
        note = [f"# capacity-strictness family, chain length {args.k1 + 1}"]
        manifest = {"family": "hierarchy", "k1": args.k1}
    elif args.family == "pcp":
        inst = PcpInstance.from_text(args.pairs)
        a, b, sigma = gen_pcp_automata(inst)
        note = [
            "# mismatch checker transcription:",
            "#   state 0 hub; 1/2 close balanced 0/1 pairs back to the hub;",
            "#   3 saw 0 and accepts 1~/$~ next; 4 saw 1 and accepts 0~/$~;",
            "#   5 saw # and accepts 0~/1~; 6 accepting sink on every letter",
        ]
        manifest = {"family": "pcp", "pairs": list(map(list, inst.pairs))}
    else:
        a = random_automaton(args.seed, args.states, tuple(args.letters),
                             args.density, args.accept_prob)
        b = random_automaton(args.seed + 1, args.states, tuple(args.letters),
                             args.density, args.accept_prob)
        sigma = random_sigma(args.seed, tuple(args.letters))
        note = [f"# random pair, seed {args.seed}"]
        manifest = {"family": "random", "seed": args.seed, "states": args.states,
                    "letters": args.letters, "density": args.density,
                    "accept_prob": args.accept_prob}

    a = a.__class__(a.name, a.alphabet, a.n_states, a.initial, a.accepting,
                    a.transitions, sigma=sigma)
    b = b.__class__(b.name, b.alphabet, b.n_states, b.initial, b.accepting,
                    b.transitions, sigma=sigma)
    left = out / f"{a.name}.ba"
    right = out / f"{b.name}.ba"
    left.write_text(serialize_ba(a), encoding="utf-8")
    right.write_text("\n".join(note) + "\n" + serialize_ba(b), encoding="utf-8")
    manifest["files"] = [left.name, right.name]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                       encoding="utf-8")
    print(f"wrote {left} {right} manifest.json")
    return 0


def cmd_check_lemma(args) -> int:
    a, b, sigma = _sim_inputs(args)
    report = check_projection_lemma(a, b, sigma, Capacities(args.k1, args.k2),
                                    samples=args.samples)
    for line in report.lines():
        print(line)
    if args.report_out:
        Path(args.report_out).write_text("\n".join(report.lines()) + "\n",
                                         encoding="utf-8")
    return 0 if (not report.applicable or report.violations == 0) else 1


def cmd_dump_arena(args) -> int:
    a, b, sigma = _sim_inputs(args)
    built = build_direct_arena(a, b, sigma, Capacities(args.k1, args.k2))
    pg_path = Path(args.out + ".pg")
    pg_path.write_text(dump_pg(built.game), encoding="utf-8")
    _write_legend(args.out + ".legend.tsv", built)
    print(f"wrote {pg_path} and {args.out}.legend.tsv "
          f"({built.game.n_nodes} nodes, initial {built.initial})")
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="bufsim",
                                description="two-buffer simulation games on Büchi automata")
    sub = p.add_subparsers(dest="command", required=True)

    def caps_flags(sp):
        sp.add_argument("--k1", type=int, default=0, help="buffer 1 capacity")
        sp.add_argument("--k2", type=int, default=0, help="buffer 2 capacity")
        sp.add_argument("--sweep", metavar="LO..HI",
                        help="tabulate all capacity pairs in the range")

    sim = sub.add_parser("sim", help="decide the buffered simulation game")
    sim.add_argument("left")
    sim.add_argument("right")
    caps_flags(sim)
    sim.add_argument("--method", choices=("reduced", "direct", "both"),
                     default="reduced")
    sim.add_argument("--witness-out", metavar="PATH",
                     help="dump the winner's strategy over the direct arena")
    sim.set_defaults(func=cmd_sim)

    fair = sub.add_parser("fairsim", help="decide plain fair simulation")
    fair.add_argument("left")
    fair.add_argument("right")
    fair.set_defaults(func=cmd_fairsim)

    inc = sub.add_parser("include-rel",
                         help="sound relation-inclusion check between transducers")
    inc.add_argument("left")
    inc.add_argument("right")
    caps_flags(inc)
    inc.set_defaults(func=cmd_include_rel)

    gen = sub.add_parser("gen", help="emit generated instances as .ba files")
    gensub = gen.add_subparsers(dest="family", required=True)
    gh = gensub.add_parser("hierarchy")
    gh.add_argument("--k1", type=int, required=True)
    gh.add_argument("--out-dir", default=".")
    gh.set_defaults(func=cmd_gen)
    gp = gensub.add_parser("pcp")
    gp.add_argument("--pairs", required=True, metavar="u:v,u:v,...")
    gp.add_argument("--out-dir", default=".")
    gp.set_defaults(func=cmd_gen)
    gr = gensub.add_parser("random")
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("--states", type=int, default=4)
    gr.add_argument("--letters", nargs="+", default=["a", "b"])
    gr.add_argument("--density", type=float, default=0.4)
    gr.add_argument("--accept-prob", type=float, default=0.5)
    gr.add_argument("--out-dir", default=".")
    gr.set_defaults(func=cmd_gen)

    chk = sub.add_parser("check-lemma",
                         help="verify the projection consequence of a win")
    chk.add_argument("left")
    chk.add_argument("right")
    chk.add_argument("--k1", type=int, default=0)
    chk.add_argument("--k2", type=int, default=0)
    chk.add_argument("--samples", type=int, default=5)
    chk.add_argument("--report-out", metavar="PATH")
    chk.set_defaults(func=cmd_check_lemma)

    dmp = sub.add_parser("dump-arena", help="write the direct arena and legend")
    dmp.add_argument("left")
    dmp.add_argument("right")
    dmp.add_argument("--k1", type=int, default=0)
    dmp.add_argument("--k2", type=int, default=0)
    dmp.add_argument("--out", required=True, metavar="PREFIX")
    dmp.set_defaults(func=cmd_dump_arena)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else 0
    try:
        return args.func(args)
    except _Disagreement as exc:
        print(f"error: {exc}: reduced says "
              f"{'DUPLICATOR' if exc.red else 'SPOILER'}, direct says "
              f"{'DUPLICATOR' if exc.direct else 'SPOILER'}", file=sys.stderr)
        return 3
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
