"""``cbnlab`` command line.

Exit codes: 0 success, 1 a verification check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import __version__
from .dynamics import BitState, find_orbit
from .graph import (
    DEFAULT_MAX_CYCLES,
    Digraph,
    class_partition,
    enumerate_cycles,
    scc_decompose,
    weakly_connected_components,
)
from .io import FORMATS, GraphParseError, dumps, emit_graph, parse_graph, parse_state, parse_tables
from .necklaces import (
    DEFAULT_MAX_LENGTH,
    enumerate_necklaces,
    necklace_count,
    necklace_from_orbit,
    orbit_from_necklace,
    order,
)
from .omega import positive_levels, transition_bound
from .pipeline import prepare
from .sweep import DEFAULT_MAX_N
from .universality import ClosureCapExceeded, build_monomial_dbn, dbn_to_cbn, dnf_from_truth_table
from .verify import verify_exhaustive, verify_sampled

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_graph(args) -> Digraph:
    return parse_graph(_read(args.graph), args.format)


def _state(args, n: int) -> BitState:
    return parse_state(args.state, n)


def _components(g: Digraph) -> dict:
    scd = scc_decompose(g)
    cp = class_partition(g, scd)
    return {
        "components": [
            {
                "vertices": sorted(comp),
                "loop_number": cp.loop_numbers[i],
                "level": scd.level[i],
                "classes": [sorted(c) for c in cp.classes[i]],
            }
            for i, comp in enumerate(scd.components)
        ],
        "condensation": sorted([a, b] for a, b in scd.condensation),
        "depth": scd.L,
    }


def _orbit_doc(prep, orbit, entry=None) -> dict:
    doc = {
        "period": orbit.period,
        "orbit": [str(s) for s in orbit.states],
        "necklaces": prep.necklaces(orbit.states[0]),
    }
    if entry is not None:
        doc["entry"] = str(entry)
    return doc


# commands


def cmd_analyze(args) -> tuple[dict, int]:
    g = _load_graph(args)
    prep = prepare(g)
    doc = {"n": g.n, "m": g.m, "weak_components": len(weakly_connected_components(g))}
    doc.update(_components(g))
    doc["trimmed"] = sorted(prep.trimmed.removed)
    if args.cycles:
        listing = enumerate_cycles(g, cap=args.max_cycles)
        doc["cycles"] = {"truncated": listing.truncated, "count": len(listing.cycles),
                         "cycles": [list(c) for c in listing.cycles]}
    return doc, EXIT_OK


def cmd_reduce(args) -> tuple[dict, int]:
    g = _load_graph(args)
    prep = prepare(g)
    doc = {"trimmed": sorted(prep.trimmed.removed), "kept": list(prep.kept)}
    if prep.rs is None:
        doc["h"] = None
        return doc, EXIT_OK
    rs = prep.rs
    h = rs.describe()
    # class members in the original vertex ids
    h["class_of"] = [sorted(prep.kept[v] for v in c) for c in rs.class_of]
    h["lcm"] = rs.n_g
    h["positive_levels"] = {str(k): v for k, v in sorted(positive_levels(rs).items())}
    h["transition_bound"] = transition_bound(rs)
    doc["h"] = h
    doc["h_edge_list"] = emit_graph(rs.h, "edge-list")
    return doc, EXIT_OK


def cmd_orbit(args) -> tuple[dict, int]:
    g = _load_graph(args)
    x0 = _state(args, g.n)
    hit = find_orbit(g, x0)
    prep = prepare(g)
    doc = {"state": str(x0), "transient": hit.transient}
    doc.update(_orbit_doc(prep, hit.orbit, hit.entry))
    return doc, EXIT_OK


def cmd_predict(args) -> tuple[dict, int]:
    g = _load_graph(args)
    x0 = _state(args, g.n)
    prep = prepare(g)
    orbit, entry = prep.predict(x0)
    doc = {"state": str(x0), "transient_bound": prep.transition_bound()}
    doc.update(_orbit_doc(prep, orbit, entry))
    return doc, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    g = _load_graph(args)
    prep = prepare(g)
    if args.exhaustive:
        if g.n > args.max_n:
            raise UsageError(f"exhaustive sweep over 2^{g.n} states exceeds --max-n {args.max_n}")
        rep = verify_exhaustive(prep, args.max_n)
    else:
        rep = verify_sampled(prep, args.samples, args.seed, args.workers)
    doc = rep.as_dict()
    doc["n"] = g.n
    return doc, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_necklaces(args) -> tuple[dict, int]:
    cap = args.max_length
    if args.length is not None:
        if args.graph is not None:
            raise UsageError("give either --length or a graph, not both")
        p = args.length
        if p < 1:
            raise UsageError("--length must be positive")
        if p > cap:
            raise UsageError(f"length {p} exceeds --max-length {cap}")
        items = enumerate_necklaces(p, cap)
        return {"length": p, "count": len(items), "necklaces": [s.word for s in items],
                "orders": [order(s) for s in items]}, EXIT_OK
    if args.graph is None:
        raise UsageError("give --length or a strongly connected graph")
    g = _load_graph(args)
    scd = scc_decompose(g)
    if scd.q != 1:
        raise UsageError(f"graph has {scd.q} strong components; necklace listing needs one")
    cp = class_partition(g, scd)
    p = cp.loop_numbers[0]
    if p == 0:
        raise UsageError("loop number is 0; there are no necklaces")
    if p > cap:
        raise UsageError(f"loop number {p} exceeds --max-length {cap}")
    rows = []
    for s in enumerate_necklaces(p, cap):
        o = orbit_from_necklace(g, cp, s)
        assert necklace_from_orbit(g, cp, o) == s
        rows.append({"necklace": s.word, "period": o.period, "orbit": [str(x) for x in o.states]})
    return {"loop_number": p, "count": len(rows), "expected": necklace_count(p), "orbits": rows}, EXIT_OK


def cmd_convert(args) -> tuple[dict, int]:
    tables = parse_tables(_read(args.tables))
    net = dnf_from_truth_table(tables)
    dbn = build_monomial_dbn(net, cap=args.max_closure)
    dual = dbn_to_cbn(dbn)
    doc = {
        "n": net.n,
        "functions": [sorted((str(z) for z in f)) for f in net.functions],
        "monomials": [str(z) for z in dbn.states],
        "seeds": [sorted(dbn.index[z] for z in f) for f in dbn.provenance],
        "graph": {"n": dual.graph.n, "edges": sorted([u, v] for u, v in dual.graph.edges)},
    }
    return doc, EXIT_OK


def _text(doc, cmd: str) -> str:
    if cmd == "convert":
        lines = [f"# vertex {k}: {z}" for k, z in enumerate(doc["monomials"])]
        g = doc["graph"]
        return "\n".join(lines) + "\n" + emit_graph(Digraph(g["n"], map(tuple, g["edges"])))
    if cmd == "reduce" and doc.get("h") is not None:
        head = [f"# H vertex {u}: class {c}" for u, c in enumerate(doc["h"]["class_of"])]
        return "\n".join(head) + "\n" + doc["h_edge_list"]
    out = []
    for k in sorted(doc):
        v = doc[k]
        out.append(f"{k}: {v}")
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="edge-list", help="graph file format")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--max-cycles", type=int, default=DEFAULT_MAX_CYCLES, help="cap for cycle listing")
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help="refuse exhaustive sweeps over more than 2^N states")

    ap = argparse.ArgumentParser(prog="cbnlab", description="Conjunctive Boolean network analysis")
    ap.add_argument("--version", action="version", version=f"cbnlab {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", parents=[common], help="strong components, loop numbers, levels, classes")
    p.add_argument("graph")
    p.add_argument("--cycles", action="store_true", help="also list elementary cycles")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reduce", parents=[common], help="emit the reduced system and class map")
    p.add_argument("graph")
    p.set_defaults(func=cmd_reduce)

    for name, func, what in (("orbit", cmd_orbit, "simulate to the periodic orbit"),
                             ("predict", cmd_predict, "predict the periodic orbit without simulating G")):
        p = sub.add_parser(name, parents=[common], help=what)
        p.add_argument("graph")
        p.add_argument("--state", required=True, help="binary string, ones, zeros or random:SEED")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="check predictions against simulation")
    p.add_argument("graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="worker processes (capped by CBN_LAB_THREADS)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("necklaces", parents=[common], help="list necklaces or the orbit bijection")
    p.add_argument("graph", nargs="?")
    p.add_argument("--length", type=int)
    p.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
    p.set_defaults(func=cmd_necklaces)

    p = sub.add_parser("convert", parents=[common], help="truth tables to an equivalent CBN")
    p.add_argument("--tables", required=True, help='JSON {"n": int, "tables": [...]}')
    p.add_argument("--max-closure", type=int, default=10_000)
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            doc, code = args.func(args)
        except (UsageError, GraphParseError, ClosureCapExceeded, ValueError) as e:
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    sys.stdout.write(dumps(doc) if args.json else _text(doc, args.cmd))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
