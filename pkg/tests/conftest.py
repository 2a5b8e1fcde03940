import random

import pytest
from hypothesis import HealthCheck, settings

from cbnlab.graph import Digraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def three_component_graph() -> Digraph:
    """Components with loop numbers 2, 3 and 6; the first two feed the third.

    G1 = {0,1,2}: 0<->1, 1<->2.  G2 = {3,4,5,6}: 3->4->5->3 and 3->6->5.
    G3 = {7..13}: cycle 7..12 plus the detour 12->13->8.
    """
    edges = [(0, 1), (1, 0), (1, 2), (2, 1)]
    edges += [(3, 4), (4, 5), (5, 3), (3, 6), (6, 5)]
    edges += [(7 + k, 7 + (k + 1) % 6) for k in range(6)] + [(12, 13), (13, 8)]
    edges += [(2, 7), (5, 10)]
    return Digraph(14, edges)


def four_cycle_reduced() -> Digraph:
    """Reduced graph: H1 (len 2), H2 (len 3) at the top, H3 (len 4) fed by H1
    and H2, H4 (len 3) fed by H1 and H3."""
    h1, h2, h3, h4 = [0, 1], [2, 3, 4], [5, 6, 7, 8], [9, 10, 11]
    edges = []
    for c in (h1, h2, h3, h4):
        edges += [(c[k], c[(k + 1) % len(c)]) for k in range(len(c))]
    edges += [(1, 5), (4, 7), (0, 10), (8, 9)]
    return Digraph(12, edges)


@pytest.fixture
def three_comp():
    return three_component_graph()


@pytest.fixture
def four_cycles():
    return four_cycle_reduced()


@pytest.fixture
def rng():
    return random.Random(20261014)


# acceptance verdicts, echoed in the terminal summary

_VERDICTS: list[str] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    seen = []

    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        seen.append(line)
        _VERDICTS.append(line)
        print(line)
        return ok

    yield record
    if not seen:
        _VERDICTS.append(f"FAIL {request.node.name}: raised before reaching a verdict")


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
