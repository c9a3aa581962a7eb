"""``dmgsep`` command line.

Vertex lists are comma-separated labels; an empty string is the empty set.
Graph arguments take a JSON file path or ``fixture:NAME`` for a bundled
example.  ``sep`` and ``equiv`` exit 0 for yes and 1 for no; every command
exits 2 on bad input, including cap overruns.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import equivalence as eqv
from . import oracle
from .fixtures import fixture_text
from .graph import GraphError, induced_subgraph, relabel_to
from .io import export_dot, parse_graph, serialize_dmeg, serialize_graph
from .marginalize import projection_fixpoint_trace
from .separation import (find_mu_connecting_route, mu_separated,
                         mu_separated_via_augmentation)
from .timeseries import check_rolling_correspondence, proof_horizon, rolling_sweep, unroll


class UsageError(Exception):
    pass


def _read(spec: str):
    if spec.startswith("fixture:"):
        text = fixture_text(spec[len("fixture:"):])
    else:
        try:
            text = Path(spec).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {spec}: {exc.strerror}") from None
    return parse_graph(text)


def _list(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [x.strip() for x in raw.split(",") if x.strip()]


def _emit_graph(g, fmt: str, out) -> None:
    out.write(export_dot(g) if fmt == "dot" else serialize_graph(g))


def cmd_sep(args, out) -> int:
    g = _read(args.graph)
    a, b, c = _list(args.source), _list(args.target), _list(args.given)
    if args.method == "walk":
        sep = mu_separated(g, a, b, c)
    elif args.method == "augmented":
        sep = mu_separated_via_augmentation(g, a, b, c)
    else:
        sep = oracle.mu_separated_bruteforce(g, a, b, c)
    out.write("separated\n" if sep else "connected\n")
    if args.witness and not sep:
        route = find_mu_connecting_route(g, a, b, c)
        out.write(f"witness: {route.format(g.labels)}\n")
    return 0 if sep else 1


def cmd_marg(args, out) -> int:
    g = _read(args.graph)
    keep = g.vset(_list(args.keep))
    saturated, trace = projection_fixpoint_trace(g, keep)
    if args.trace:
        lab = g.labels
        for t, e in trace:
            arrow = "->" if e.is_directed else "<->"
            sys.stderr.write(f"{lab[t.left]} ~ {lab[t.mid]} ~ {lab[t.right]}: "
                             f"add {lab[e.u]} {arrow} {lab[e.v]}\n")
    _emit_graph(induced_subgraph(saturated, keep), args.format, out)
    return 0


def cmd_maximal(args, out) -> int:
    _emit_graph(eqv.maximal_dmg(_read(args.graph), args.cap), args.format, out)
    return 0


def cmd_dmeg(args, out) -> int:
    g = _read(args.graph)
    if args.maximalize:
        g = eqv.maximal_dmg(g, args.cap)
    m = eqv.dmeg(g, args.cap)
    out.write(export_dot(m) if args.format == "dot" else serialize_dmeg(m))
    return 0


def cmd_equiv(args, out) -> int:
    g1, g2 = _read(args.first), _read(args.second)
    if set(g1.labels) != set(g2.labels):
        raise UsageError("the two graphs have different vertex sets")
    m1 = eqv.independence_model(g1, args.cap)
    m2 = eqv.independence_model(relabel_to(g2, g1.labels), args.cap)
    same = m1 == m2
    out.write("equivalent\n" if same else "not equivalent\n")
    if args.diff:
        for a, b, c, in1, _ in oracle.model_diff(m1, m2):
            where = "first" if in1 else "second"
            out.write(f"<{a}, {b} | {{{', '.join(c)}}}> holds only in the {where}\n")
    return 0 if same else 1


def cmd_class(args, out) -> int:
    n = _read(args.graph)
    members = eqv.equivalence_class(n, args.cap, args.edge_cap)
    ordered = sorted(members, key=lambda h: (len(h.edges()), h.edges()), reverse=True)
    if args.enumerate:
        docs = [json.loads(serialize_graph(h)) for h in ordered]
        out.write(json.dumps(docs, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(f"{len(members)}\n")
    return 0


def _horizon(raw: str):
    if raw == "auto":
        return "auto"
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"--T takes a non-negative integer or 'auto', got {raw!r}") from None


def cmd_unroll(args, out) -> int:
    u = unroll(_read(args.graph), _horizon(args.T))
    _emit_graph(u.graph, args.format, out)
    return 0


def cmd_roll_check(args, out) -> int:
    d = _read(args.graph)
    t = _horizon(args.T)
    horizon = proof_horizon(d) if t == "auto" else t
    if args.source is not None or args.target is not None:
        res = check_rolling_correspondence(d, _list(args.source), _list(args.target),
                                           _list(args.given), t)
        out.write(f"T={horizon} rolled={'separated' if res.rolled else 'connected'} "
                  f"unrolled={'separated' if res.unrolled else 'connected'}\n")
        return 0 if (not res.rolled or res.unrolled) else 1
    forward = equal = total = 0
    for row in rolling_sweep(d, t):
        total += 1
        forward += (not row.rolled) or row.unrolled
        equal += row.rolled == row.unrolled
    out.write(f"T={horizon} triples={total} implication_holds={forward} agree={equal}\n")
    ok = forward == total and (horizon < proof_horizon(d) or equal == total)
    return 0 if ok else 1


def cmd_selfcheck(args, out) -> int:
    rep = oracle.selfcheck(args.seed, args.density, args.count, args.max_vertices)
    out.write(f"graphs={rep.graphs} queries={rep.queries} failures={len(rep.failures)}\n")
    for f in rep.failures:
        out.write(f"FAIL {f}\n")
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmgsep",
                                description="Separation, marginalization and equivalence "
                                            "for directed mixed graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_text, *, fmt=False, cap=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--graph", required=True, help="JSON file or fixture:NAME")
        if fmt:
            sp.add_argument("--format", choices=("json", "dot"), default="json")
        if cap:
            sp.add_argument("--cap", type=int, default=None,
                            help="vertex cap for model tables (default 12 or $DMGSEP_CAP)")
        sp.set_defaults(func=fn)
        return sp

    sp = graph_cmd("sep", cmd_sep, "is TO separated from FROM given GIVEN?")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--given", default="")
    sp.add_argument("--witness", action="store_true", help="print a connecting route")
    sp.add_argument("--method", choices=("walk", "augmented", "brute"), default="walk")

    sp = graph_cmd("marg", cmd_marg, "latent projection onto KEEP", fmt=True)
    sp.add_argument("--keep", required=True)
    sp.add_argument("--trace", action="store_true", help="log added edges to stderr")

    graph_cmd("maximal", cmd_maximal, "maximal Markov equivalent DMG", fmt=True, cap=True)

    sp = graph_cmd("dmeg", cmd_dmeg, "DMEG of a maximal DMG", fmt=True, cap=True)
    sp.add_argument("--maximalize", action="store_true",
                    help="replace the input by its maximal DMG first")

    sp = sub.add_parser("equiv", help="Markov equivalence of two graphs")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--diff", action="store_true", help="list distinguishing triples")
    sp.add_argument("--cap", type=int, default=None)
    sp.set_defaults(func=cmd_equiv)

    sp = graph_cmd("class", cmd_class, "Markov equivalence class of a maximal DMG", cap=True)
    sp.add_argument("--enumerate", action="store_true", help="print every member")
    sp.add_argument("--edge-cap", type=int, default=eqv.DEFAULT_EDGE_CAP)

    sp = graph_cmd("unroll", cmd_unroll, "unroll a DG over time slices", fmt=True)
    sp.add_argument("--T", required=True, help="horizon or 'auto'")

    sp = graph_cmd("roll-check", cmd_roll_check, "rolled versus unrolled separation")
    sp.add_argument("--T", default="auto", help="horizon or 'auto'")
    sp.add_argument("--from", dest="source", default=None)
    sp.add_argument("--to", dest="target", default=None)
    sp.add_argument("--given", default="")

    sp = sub.add_parser("selfcheck", help="cross-check fast code against the oracles")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--density", type=float, default=0.3)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--max-vertices", type=int, default=5)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except eqv.CapExceededError as exc:
        sys.stderr.write(f"dmgsep: {exc}\n")
        return 2
    except (UsageError, GraphError, FileNotFoundError) as exc:
        sys.stderr.write(f"dmgsep: {exc}\n")
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
