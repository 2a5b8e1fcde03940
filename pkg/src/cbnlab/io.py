"""Graph and state parsing, deterministic report serialisation."""

from __future__ import annotations

import json
import random
import warnings
from typing import Any

from .dynamics import BitState
from .graph import Digraph

__all__ = [
    "FORMATS",
    "GraphParseError",
    "parse_graph",
    "emit_graph",
    "parse_state",
    "parse_tables",
    "dumps",
]

FORMATS = ("edge-list", "graph-json")


class GraphParseError(ValueError):
    pass


def _parse_edge_list(text: str) -> Digraph:
    n_decl = None
    edges = []
    where = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit() or n_decl is not None:
                raise GraphParseError(f"line {lineno}: bad vertex-count line {raw.strip()!r}")
            n_decl = int(parts[1])
            continue
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"line {lineno}: vertex ids must be integers, got {raw.strip()!r}") from None
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: negative vertex id")
        edges.append((u, v))
        where.setdefault((u, v), lineno)
    if n_decl is None:
        if not edges:
            raise GraphParseError("empty graph: no edges and no 'n' line")
        n = 1 + max(max(u, v) for u, v in edges)
    else:
        n = n_decl
        for (u, v), lineno in where.items():
            if u >= n or v >= n:
                raise GraphParseError(f"line {lineno}: vertex id out of range 0..{n - 1}")
    if n == 0:
        raise GraphParseError("empty graph")
    return _build(n, edges)


def _parse_graph_json(text: str) -> Digraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(f"line {e.lineno}: invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphParseError('graph-json needs an object with "n" and "edges"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphParseError('"n" must be a non-negative integer')
    if n == 0:
        raise GraphParseError("empty graph")
    edges = []
    for k, e in enumerate(doc["edges"]):
        if (
            not isinstance(e, (list, tuple))
            or len(e) != 2
            or not all(isinstance(a, int) and not isinstance(a, bool) for a in e)
        ):
            raise GraphParseError(f"edge {k}: expected [u, v], got {e!r}")
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"edge {k}: vertex id out of range 0..{n - 1}")
        edges.append((u, v))
    return _build(n, edges)


def _build(n: int, edges: list[tuple[int, int]]) -> Digraph:
    dupes = len(edges) - len(set(edges))
    if dupes:
        warnings.warn(f"{dupes} duplicate edge(s) ignored", stacklevel=3)
    return Digraph(n, edges)


def parse_graph(text: str, fmt: str = "edge-list") -> Digraph:
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "graph-json":
        return _parse_graph_json(text)
    raise GraphParseError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def emit_graph(g: Digraph, fmt: str = "edge-list") -> str:
    edges = sorted(g.edges)
    if fmt == "edge-list":
        return "".join([f"n {g.n}\n"] + [f"{u} {v}\n" for u, v in edges])
    if fmt == "graph-json":
        return dumps({"n": g.n, "edges": [list(e) for e in edges]})
    raise GraphParseError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def parse_state(s: str, n: int) -> BitState:
    """A binary string (vertex 0 leftmost), ``ones``, ``zeros`` or ``random:SEED``."""
    s = s.strip()
    if s == "ones":
        return BitState.ones(n)
    if s == "zeros":
        return BitState.zeros(n)
    if s.startswith("random:"):
        seed = s[len("random:"):]
        try:
            seed_val = int(seed)
        except ValueError:
            raise ValueError(f"random seed must be an integer, got {seed!r}") from None
        return BitState(n, random.Random(seed_val).getrandbits(n) if n else 0)
    if len(s) != n:
        raise ValueError(f"state {s!r} has length {len(s)}, expected {n}")
    bad = set(s) - {"0", "1"}
    if bad:
        raise ValueError(f"state contains characters other than 0/1: {''.join(sorted(bad))!r}")
    return BitState.from_string(s)


def parse_tables(text: str) -> list:
    """``{"n": int, "tables": [...]}``; each table a 0/1 string or list."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"line {e.lineno}: invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict) or "tables" not in doc:
        raise ValueError('tables file needs an object with "tables"')
    tables = doc["tables"]
    n = doc.get("n", len(tables))
    if n != len(tables):
        raise ValueError(f'"n" is {n} but {len(tables)} tables were given')
    return tables


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
