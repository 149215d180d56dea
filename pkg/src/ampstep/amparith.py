"""Amplitude arithmetic: addition, subtraction, and Toffoli composition of
function values stored as amplitudes.

A function value g in [0, 1] is loaded with CRy(2 arcsin sqrt(g)), putting
exactly sqrt(g) on the |1> component of the target. The subtraction circuit
reads out R1 = (g + (1 - h)) / 2 on a plain marginal (no post-selection),
and g - h = 2 R1 - 1. Composition with a third amplitude z yields
R2 = z (g - h) / 4 + 1/2 on the final readout qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ampstep.circuits import Circuit
from ampstep.sim import StateVector, marginal_probability


@dataclass(frozen=True)
class AmplitudeLoader:
    """Single-target CRy-style loader for a function value in [0, 1]."""
    value: float
    name: str = "f"

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"amplitude value must be in [0, 1], got {self.value}")

    @property
    def angle(self) -> float:
        # arcsin branch on [0, pi/2]; |1> amplitude is exactly sqrt(value)
        return 2.0 * math.asin(math.sqrt(self.value))


def _as_loader(x, name: str) -> AmplitudeLoader:
    if isinstance(x, AmplitudeLoader):
        return x
    return AmplitudeLoader(float(x), name)


@dataclass(frozen=True)
class SubtractionReadout:
    r1: float
    difference: float


@dataclass(frozen=True)
class CompositionReadout:
    b: float
    r2: float
    product: float


# Subtraction qubits: a = 0 (branch ancilla), m = 1 (complement qubit),
# t = 2 (readout target).
SUB_A, SUB_M, SUB_T = 0, 1, 2


def build_subtraction(g_prep, h_prep) -> Circuit:
    """Three-qubit difference circuit: P(t=1) = (g + (1 - h)) / 2."""
    g = _as_loader(g_prep, "g")
    h = _as_loader(h_prep, "h")
    circ = Circuit(3, registers={"a": (SUB_A,), "m": (SUB_M,), "t": (SUB_T,)},
                   measured={SUB_T})
    circ.add("H", SUB_A)
    circ.add("CRy", SUB_A, SUB_T, angle=g.angle)
    circ.add("CX", SUB_A, SUB_M)
    circ.add("X", SUB_A)
    circ.add("CRy", SUB_A, SUB_M, angle=h.angle)
    circ.add("X", SUB_M)
    circ.add("CX", SUB_M, SUB_T)
    circ.metadata["readout_qubit"] = SUB_T
    return circ


def read_subtraction(state: StateVector, readout_qubit: int = SUB_T) -> SubtractionReadout:
    """Marginal readout of the subtraction target (no post-selection)."""
    r1 = marginal_probability(state, readout_qubit)
    return SubtractionReadout(r1=r1, difference=2.0 * r1 - 1.0)


def build_addition(g_prep, h_prep) -> Circuit:
    """Two-qubit sum circuit: P(t=1) = (g + h) / 2.

    Both loaders target the same qubit on orthogonal branches of the
    Hadamard ancilla; the subtraction's complement trick (the X pair on m)
    is not needed, and without it the m qubit itself becomes redundant.
    """
    g = _as_loader(g_prep, "g")
    h = _as_loader(h_prep, "h")
    circ = Circuit(2, registers={"a": (0,), "t": (1,)}, measured={1})
    circ.add("H", 0)
    circ.add("CRy", 0, 1, angle=g.angle)
    circ.add("X", 0)
    circ.add("CRy", 0, 1, angle=h.angle)
    circ.metadata["readout_qubit"] = 1
    return circ


def read_addition(state: StateVector, readout_qubit: int = 1) -> float:
    """Recover g + h from the sum circuit's readout marginal."""
    return 2.0 * marginal_probability(state, readout_qubit)


# Composition qubits: subtraction on (0, 1, 2), then
# zq = 3 (z loader), q = 4 (product qubit), and a second subtraction stage
# on a2 = 5, m2 = 6, t2 = 7 that removes the z/2 offset.
COMP_ZQ, COMP_Q, COMP_A2, COMP_M2, COMP_T2 = 3, 4, 5, 6, 7


def build_composition(g_prep, h_prep, z_prep) -> Circuit:
    """Multiply the subtraction by a third amplitude z.

    A Toffoli writes the joint event (t=1 and z=1) onto q, so
    P(q=1) = z (g - h + 1) / 2 =: b. The extra z/2 subtraction stage reuses
    the subtraction layout with two changes: the "function" b lives on a
    qubit rather than in a classical loader, so its controlled preparation
    is Toffoli(a2, q; t2), and the subtrahend z/2 is loaded classically.
    Final readout: P(t2=1) = (b + 1 - z/2) / 2 = z (g - h) / 4 + 1/2 = R2.
    """
    z = _as_loader(z_prep, "z")
    sub = build_subtraction(g_prep, h_prep)
    circ = Circuit(8, registers={"a": (0,), "m": (1,), "t": (2,),
                                 "z": (COMP_ZQ,), "q": (COMP_Q,),
                                 "a2": (COMP_A2,), "m2": (COMP_M2,),
                                 "t2": (COMP_T2,)},
                   measured={COMP_T2})
    circ.extend(sub.gates)
    circ.add("Ry", COMP_ZQ, angle=z.angle)
    circ.add("Toffoli", SUB_T, COMP_ZQ, COMP_Q)
    circ.add("H", COMP_A2)
    circ.add("Toffoli", COMP_A2, COMP_Q, COMP_T2)
    circ.add("CX", COMP_A2, COMP_M2)
    circ.add("X", COMP_A2)
    half_z = AmplitudeLoader(z.value / 2.0, "z/2")
    circ.add("CRy", COMP_A2, COMP_M2, angle=half_z.angle)
    circ.add("X", COMP_M2)
    circ.add("CX", COMP_M2, COMP_T2)
    circ.metadata["readout_qubit"] = COMP_T2
    circ.metadata["product_qubit"] = COMP_Q
    circ.metadata["magnitude_only"] = True
    return circ


def read_composition(state: StateVector) -> CompositionReadout:
    """Recover z (g - h) = 4 (R2 - 1/2) from the composition readout."""
    b = marginal_probability(state, COMP_Q)
    r2 = marginal_probability(state, COMP_T2)
    return CompositionReadout(b=b, r2=r2, product=4.0 * (r2 - 0.5))
