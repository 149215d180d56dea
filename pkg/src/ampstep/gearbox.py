"""d-step gearbox circuits and their closed-form analytics.

A depth-d gearbox maps an input rotation angle theta to the conditional
probability S(theta) = sin^(2^(d+1)) / (sin^(2^(d+1)) + cos^(2^(d+1)))
of the target reading 1 given that all 2^d - 1 controls read 0. As d grows
the curve sharpens toward the unit step at theta = pi/4 (value 1/2 at the
step itself).

Register layout: qubits 0 .. 2^d - 2 are the controls c1..c_(2^d - 1), the
target t is the highest qubit. The first 2^(d-1) controls carry the forward
Ry(-2 theta) / inverse Ry(2 theta) rotation pair; the remaining controls
collect parities so that the all-zero control outcome keeps exactly the
amplitudes cos^(2^d)(theta) and sin^(2^d)(theta) on t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ampstep.circuits import Circuit
from ampstep.sim import PostSelectionResult, post_select, post_select_shots, run_circuit

MAX_DEPTH = 4


class DepthError(ValueError):
    """Gearbox depth outside the supported 1..4 range."""


@dataclass(frozen=True)
class GearboxSpec:
    depth_d: int
    theta: float

    def __post_init__(self):
        if self.depth_d < 1:
            raise DepthError(f"depth must be >= 1, got {self.depth_d}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        # clamp into the gearbox domain
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi / 2))

    @property
    def control_count(self) -> int:
        return (1 << self.depth_d) - 1

    @property
    def n_qubits(self) -> int:
        return 1 << self.depth_d


@dataclass(frozen=True)
class GearboxAnalytics:
    s_composed: float
    success: float
    amp0: float
    amp1: float


def analytics(spec: GearboxSpec) -> GearboxAnalytics:
    """Closed-form gearbox values from the power form.

    amp0 = cos^(2^d) theta, amp1 = sin^(2^d) theta; the power form stays
    finite at theta = pi/2 where tan diverges.
    """
    p = 1 << spec.depth_d
    amp0 = math.cos(spec.theta) ** p
    amp1 = math.sin(spec.theta) ** p
    success = amp0 * amp0 + amp1 * amp1
    return GearboxAnalytics(s_composed=amp1 * amp1 / success, success=success,
                            amp0=amp0, amp1=amp1)


def s_scalar(theta: float) -> float:
    """One application of the gearbox scalar map sin^2(arctan(tan^2))."""
    t = math.tan(theta) ** 2
    return t * t / (1.0 + t * t) if math.isfinite(t) else 1.0


def build_gearbox(spec: GearboxSpec) -> Circuit:
    """Gearbox circuit on 2^d qubits (depth guarded to 1..4).

    d = 1 is the pinned three-gate form whose full 4x4 unitary matches the
    single-step matrix. d = 2 follows the CX(c1,c3) CX(c3,t) CX(c2,c3)
    combination; deeper circuits use the same pattern with star-shaped
    parity collection, bound by the amplitude contract rather than a fixed
    gate list.
    """
    d = spec.depth_d
    if not 1 <= d <= MAX_DEPTH:
        raise DepthError(f"buildable depth is 1..{MAX_DEPTH}, got {d}")
    theta = spec.theta
    n = spec.n_qubits
    t = n - 1
    controls = tuple(range(n - 1))
    circ = Circuit(n, registers={"c": controls, "t": (t,)},
                   measured=set(range(n)))
    circ.metadata["kept_qubits"] = controls
    circ.metadata["target_qubit"] = t
    if d == 1:
        circ.add("Ry", 0, angle=-2.0 * theta)
        circ.add("CX", 0, 1)
        circ.add("Ry", 0, angle=2.0 * theta)
        return circ
    leaves = tuple(range(n // 2))
    ancillas = tuple(range(n // 2, n - 1))
    for q in leaves:
        circ.add("Ry", q, angle=-2.0 * theta)
    if d == 2:
        circ.add("CX", 0, 2)
        circ.add("CX", 2, 3)
        circ.add("CX", 1, 2)
    else:
        circ.add("CX", 0, t)
        for i, a in enumerate(ancillas):
            circ.add("CX", 0, a)
            circ.add("CX", leaves[i + 1], a)
    for q in leaves:
        circ.add("Ry", q, angle=2.0 * theta)
    return circ


def evaluate_gearbox(spec: GearboxSpec, shots: int | None = None,
                     seed: int = 0) -> PostSelectionResult:
    """Simulate the gearbox and post-select the all-zero control outcome."""
    circ = build_gearbox(spec)
    state = run_circuit(circ)
    kept = circ.metadata["kept_qubits"]
    target = circ.metadata["target_qubit"]
    zeros = (0,) * len(kept)
    if shots is None:
        return post_select(state, kept, zeros, target)
    return post_select_shots(state, kept, zeros, target, shots, seed)


def unit_step(x: float) -> float:
    """Unit step with the u(0) = 1/2 convention used at theta = pi/4."""
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return 0.0
    return 0.5


def step_approximation_error(depth_d: int, theta_grid) -> float:
    """Max deviation of the composed gearbox map from the unit step.

    The caller supplies a grid excluding a band around pi/4; points inside
    the transition region would dominate trivially.
    """
    grid = np.asarray(theta_grid, dtype=float)
    worst = 0.0
    for theta in grid:
        s = analytics(GearboxSpec(depth_d, float(theta))).s_composed
        worst = max(worst, abs(s - unit_step(float(theta) - math.pi / 4)))
    return worst


def build_rescaled_plateau(theta: float, kappa: float) -> Circuit:
    """Double-step gearbox with an output qubit coupled at angle kappa.

    The output qubit o receives CRy(kappa) from the target with X gates
    around it, so the post-selected output law is
        P(o=1 | controls 0) = sin^2(kappa/2) * (1 - S(theta)),
    a step curve whose first plateau is rescaled to sin^2(kappa/2). kappa=0
    decouples o entirely. The law is frozen as a regression table in tests;
    it is a property of this construction, not an externally given formula.
    """
    if not 0.0 <= kappa <= math.pi / 2:
        raise ValueError("kappa must lie in [0, pi/2]")
    gb = build_gearbox(GearboxSpec(2, theta))
    o = gb.n_qubits
    circ = Circuit(o + 1,
                   registers={"c": (0, 1, 2), "t": (3,), "o": (o,)},
                   measured={0, 1, 2, o})
    circ.extend(gb.gates)
    circ.add("X", 3)
    circ.add("CRy", 3, o, angle=kappa)
    circ.add("X", 3)
    circ.metadata["kept_qubits"] = (0, 1, 2)
    circ.metadata["target_qubit"] = o
    return circ


def build_relu(x: float, gearbox_depth: int = 2) -> Circuit:
    """ReLU-style composite: value qubit times the double-step gearbox.

    A value qubit q1 is rotated by Ry(x) (so P(q1=1) = sin^2(x/2) =: z(x)),
    the gearbox is driven by the same x, and a Toffoli combines target and
    value onto the output, giving exactly
        P(o=1 | controls 0) = z(x) * S(x).
    Below the step threshold the gearbox factor kills the product; above it
    the curve rises with z(x). Only outcome magnitudes matter here, so the
    circuit is flagged magnitude-only.
    """
    if gearbox_depth != 2:
        raise DepthError("ReLU composite is specified for the double-step gearbox")
    if not 0.0 <= x <= math.pi / 2:
        raise ValueError("x must lie in [0, pi/2]")
    gb = build_gearbox(GearboxSpec(2, x))
    q1 = gb.n_qubits       # value qubit
    o = gb.n_qubits + 1    # output qubit
    circ = Circuit(o + 1,
                   registers={"c": (0, 1, 2), "t": (3,), "q1": (q1,), "o": (o,)},
                   measured={0, 1, 2, o})
    circ.extend(gb.gates)
    circ.add("Ry", q1, angle=x)
    circ.add("Toffoli", 3, q1, o)
    circ.metadata["kept_qubits"] = (0, 1, 2)
    circ.metadata["target_qubit"] = o
    circ.metadata["magnitude_only"] = True
    return circ


def evaluate_output(circ: Circuit, shots: int | None = None,
                    seed: int = 0) -> PostSelectionResult:
    """Post-select a composite builder's output on all-zero controls."""
    state = run_circuit(circ)
    kept = circ.metadata["kept_qubits"]
    target = circ.metadata["target_qubit"]
    zeros = (0,) * len(kept)
    if shots is None:
        return post_select(state, kept, zeros, target)
    return post_select_shots(state, kept, zeros, target, shots, seed)
