"""Batch verification: predicted orbits, reduced-system agreement, period
divisibility and the transient bound, per initial state."""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import BitState, find_orbit
from .omega import transition_bound
from .pipeline import Prepared, prepare
from .reduction import verify_theorem1
from .sweep import DEFAULT_MAX_N, sweep, table_power, agreement_all, transition_table

__all__ = ["CLAUSES", "VerifyReport", "check_state", "verify_sampled", "verify_exhaustive", "worker_count"]

CLAUSES = ("predict", "reduced_agreement", "period_divides_lcm", "transition_bound")
MAX_LISTED = 50


@dataclass
class VerifyReport:
    mode: str
    checked: int
    counts: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CLAUSES})
    failures: list[dict] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not any(self.counts.values())

    def add(self, state: str, clause: str, detail: str = "") -> None:
        self.counts[clause] += 1
        if len(self.failures) < MAX_LISTED:
            self.failures.append({"state": state, "clause": clause, "detail": detail})

    def as_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "checked": self.checked,
            "failure_counts": dict(self.counts),
            "failures": list(self.failures),
            "passed": self.passed,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def check_state(prep: Prepared, x0: BitState) -> list[tuple[str, str]]:
    """Failed (clause, detail) pairs for one initial state."""
    out = []
    hit = find_orbit(prep.g, x0)
    orbit, _ = prep.predict(x0)
    if orbit != hit.orbit:
        out.append(("predict", f"predicted period {orbit.period}, simulated {hit.period}"))
    if prep.rs is None:
        if hit.period != 1:
            out.append(("period_divides_lcm", f"period {hit.period} on a fully trimmed graph"))
        return out
    rep = verify_theorem1(prep.core, prep.to_core(x0), prep.rs)
    if not rep.passed:
        out.append(("reduced_agreement", "; ".join(rep.failures)))
    if prep.rs.n_g % hit.period:
        out.append(("period_divides_lcm", f"period {hit.period} does not divide {prep.rs.n_g}"))
    bound = transition_bound(prep.rs)
    if rep.transient_h > bound:
        out.append(("transition_bound", f"H transient {rep.transient_h} exceeds {bound}"))
    return out


def worker_count(requested: int | None = None) -> int:
    n = requested if requested else 1
    cap = os.environ.get("CBN_LAB_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def _check_chunk(args) -> list[list[tuple[str, str]]]:
    prep, n, values = args
    return [check_state(prep, BitState(n, v)) for v in values]


def verify_sampled(prep: Prepared, samples: int, seed: int, workers: int | None = None) -> VerifyReport:
    rng = random.Random(seed)
    n = prep.g.n
    values = [rng.getrandbits(n) if n else 0 for _ in range(samples)]
    rep = VerifyReport("sampled", samples, seed=seed)
    w = worker_count(workers)
    if w == 1 or samples < 2 * w:
        results = _check_chunk((prep, n, values))
    else:
        size = -(-samples // w)
        chunks = [(prep, n, values[i : i + size]) for i in range(0, samples, size)]
        results = []
        with ProcessPoolExecutor(max_workers=w) as pool:
            for part in pool.map(_check_chunk, chunks):
                results.extend(part)
    for v, fails in zip(values, results):
        for clause, detail in fails:
            rep.add(str(BitState(n, v)), clause, detail)
    return rep


def verify_exhaustive(prep: Prepared, max_n: int = DEFAULT_MAX_N) -> VerifyReport:
    """All 2^n initial states at once, on transition tables."""
    g = prep.g
    n = g.n
    sg = sweep(transition_table(g, max_n))
    rep = VerifyReport("exhaustive", 2**n)
    xs = np.arange(2**n, dtype=sg.succ.dtype)

    def fmt(v) -> str:
        return format(int(v), f"0{n}b")

    if prep.rs is None:
        for v in xs[sg.period != 1][:MAX_LISTED]:
            rep.add(fmt(v), "period_divides_lcm", "period above 1 on a fully trimmed graph")
        return rep
    rs = prep.rs
    # predicted phase-0 entry must sit on the simulated orbit of x0
    xd = table_power(sg.succ, prep.depth)
    xc = prep.restrict_array(xd).astype(np.uint64)
    entries = prep.expand_array(prep.predictor.predict_entries(xc)).astype(sg.succ.dtype)
    bad = ~(sg.on_cycle[entries] & (sg.orbit_id[entries] == sg.orbit_id))
    for v in np.flatnonzero(bad):
        rep.add(fmt(v), "predict", f"predicted entry {fmt(entries[v])} is not on the simulated orbit")
    agree = agreement_all(rs, max_n)
    nc = rs.g.n
    for v in np.flatnonzero(~agree.passed):
        clauses = []
        if not agree.class_constancy[v]:
            clauses.append("class constancy")
        if not agree.rotation[v]:
            clauses.append("rotation")
        if not agree.same_period[v]:
            clauses.append("period")
        rep.add("core:" + format(int(v), f"0{nc}b"), "reduced_agreement", ", ".join(clauses))
    for v in np.flatnonzero(rs.n_g % sg.period):
        rep.add(fmt(v), "period_divides_lcm", f"period {int(sg.period[v])} does not divide {rs.n_g}")
    bound = transition_bound(rs)
    nh = rs.h.n
    for y in np.flatnonzero(agree.sweep_h.transient > bound):
        rep.add("h:" + format(int(y), f"0{nh}b"), "transition_bound",
                f"H transient {int(agree.sweep_h.transient[y])} exceeds {bound}")
    return rep


def prepare_and_verify(g, exhaustive: bool, samples: int = 256, seed: int = 0, max_n: int = DEFAULT_MAX_N,
                       workers: int | None = None) -> VerifyReport:
    prep = prepare(g)
    if exhaustive:
        return verify_exhaustive(prep, max_n)
    return verify_sampled(prep, samples, seed, workers)
