"""Conjunctive Boolean networks: reduction to cycles and exact orbit prediction."""

__version__ = "0.1.0"

from .dynamics import BitState, OrbitHit, PeriodicOrbit, find_orbit, simulate, step, trim
from .graph import Digraph, class_partition, enumerate_cycles, loop_number, scc_decompose
from .necklaces import Necklace, canonicalize, enumerate_necklaces, necklace_count
from .omega import Predictor, omega_global, predict_orbit, transition_bound
from .reduction import build_reduced, induce_state, lift_state, verify_theorem1

__all__ = [
    "BitState",
    "Digraph",
    "Necklace",
    "OrbitHit",
    "PeriodicOrbit",
    "Predictor",
    "build_reduced",
    "canonicalize",
    "class_partition",
    "enumerate_cycles",
    "enumerate_necklaces",
    "find_orbit",
    "induce_state",
    "lift_state",
    "loop_number",
    "necklace_count",
    "omega_global",
    "predict_orbit",
    "scc_decompose",
    "simulate",
    "step",
    "transition_bound",
    "trim",
    "verify_theorem1",
]
