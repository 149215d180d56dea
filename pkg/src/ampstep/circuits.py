"""Gate and circuit representation plus the decomposition library.

Conventions:
    * qubit 0 is the least-significant bit of the basis index (little-endian)
    * Ry(phi) = [[cos(phi/2), -sin(phi/2)], [sin(phi/2), cos(phi/2)]]
    * Rz(phi) = diag(exp(-i phi/2), exp(i phi/2))
    * multi-qubit gates list controls before the target
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InvalidGateError(ValueError):
    """Malformed gate: unknown kind, wrong arity, or bad qubit indices."""


class UnsupportedGateError(ValueError):
    """Gate not handled by the requested operation."""


# kind -> (arity, takes_angle)
GATE_KINDS = {
    "X": (1, False),
    "H": (1, False),
    "SqrtX": (1, False),
    "Ry": (1, True),
    "Rz": (1, True),
    "CX": (2, False),
    "CRy": (2, True),
    "Toffoli": (3, False),
    "Measure": (1, False),
}


@dataclass(frozen=True)
class GateInstance:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InvalidGateError(f"unknown gate kind {self.kind!r}")
        arity, takes_angle = GATE_KINDS[self.kind]
        if len(self.qubits) != arity:
            raise InvalidGateError(
                f"{self.kind} expects {arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidGateError(f"duplicate qubit in {self.kind}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidGateError(f"negative qubit index in {self.kind}{self.qubits}")
        if takes_angle:
            if self.angle is None or not math.isfinite(self.angle):
                raise InvalidGateError(f"{self.kind} needs a finite angle")
        elif self.angle is not None:
            raise InvalidGateError(f"{self.kind} takes no angle")


@dataclass
class Circuit:
    n_qubits: int
    registers: dict[str, tuple[int, ...]] = field(default_factory=dict)
    gates: list[GateInstance] = field(default_factory=list)
    measured: set[int] = field(default_factory=set)
    # free-form builder metadata, e.g. readout qubit and affine readback
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.registers:
            self.registers = {"q": tuple(range(self.n_qubits))}
        seen = set()
        for name, qs in self.registers.items():
            for q in qs:
                if q in seen:
                    raise InvalidGateError(f"qubit {q} in two registers")
                seen.add(q)
        if seen and (min(seen) < 0 or max(seen) >= self.n_qubits):
            raise InvalidGateError("register qubit out of range")

    def add(self, kind: str, *qubits: int, angle: float | None = None):
        gate = GateInstance(kind, tuple(qubits), angle)
        if max(qubits) >= self.n_qubits:
            raise InvalidGateError(
                f"qubit {max(qubits)} out of range for {self.n_qubits}-qubit circuit")
        self.gates.append(gate)
        return self

    def extend(self, gates):
        for g in gates:
            self.add(g.kind, *g.qubits, angle=g.angle)
        return self

    def gate_census(self) -> dict[str, int]:
        census: dict[str, int] = {}
        for g in self.gates:
            census[g.kind] = census.get(g.kind, 0) + 1
        return census


_SQRT2_INV = 1.0 / math.sqrt(2.0)


def ry_matrix(phi: float) -> np.ndarray:
    c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * phi), 0], [0, np.exp(0.5j * phi)]],
                    dtype=complex)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV
_SQRTX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def gate_matrix(gate: GateInstance) -> np.ndarray:
    """Unitary of the gate over its own qubits.

    Sub-index convention: gate.qubits[j] is bit j of the sub-index, so a
    controlled gate with controls first is block-diagonal in the controls.
    """
    kind = gate.kind
    if kind == "X":
        return _X.copy()
    if kind == "H":
        return _H.copy()
    if kind == "SqrtX":
        return _SQRTX.copy()
    if kind == "Ry":
        return ry_matrix(gate.angle)
    if kind == "Rz":
        return rz_matrix(gate.angle)
    if kind == "CX":
        m = np.eye(4, dtype=complex)
        # control is bit 0, target bit 1: swap |c=1,t=0> (idx 1) <-> |c=1,t=1> (idx 3)
        m[[1, 3]] = m[[3, 1]]
        return m
    if kind == "CRy":
        m = np.eye(4, dtype=complex)
        r = ry_matrix(gate.angle)
        # target bit flips between sub-indices 1 and 3 (control bit set)
        m[np.ix_([1, 3], [1, 3])] = r
        return m
    if kind == "Toffoli":
        m = np.eye(8, dtype=complex)
        # controls bits 0,1; target bit 2: swap idx 3 <-> 7
        m[[3, 7]] = m[[7, 3]]
        return m
    raise UnsupportedGateError(f"{kind} has no unitary matrix")


def controlled_form(gate: GateInstance) -> tuple[int, int, np.ndarray]:
    """Reduce a gate to (control bit-mask, target qubit, 2x2 unitary)."""
    kind = gate.kind
    if kind in ("X", "H", "SqrtX", "Ry", "Rz"):
        return 0, gate.qubits[0], gate_matrix(gate)
    if kind == "CX":
        c, t = gate.qubits
        return 1 << c, t, _X
    if kind == "CRy":
        c, t = gate.qubits
        return 1 << c, t, ry_matrix(gate.angle)
    if kind == "Toffoli":
        c1, c2, t = gate.qubits
        return (1 << c1) | (1 << c2), t, _X
    raise UnsupportedGateError(f"{kind} is not a unitary gate")


# ---------------------------------------------------------------------------
# Toffoli decompositions
# ---------------------------------------------------------------------------

def toffoli_exact_decomposition() -> Circuit:
    """Toffoli on qubits (0, 1, 2) from 6 CX plus single-qubit gates.

    T gates are written as Rz(pi/4), so the result equals the Toffoli
    permutation up to one global phase.
    """
    t = math.pi / 4.0
    circ = Circuit(3, registers={"c": (0, 1), "t": (2,)})
    circ.add("H", 2)
    circ.add("CX", 1, 2)
    circ.add("Rz", 2, angle=-t)
    circ.add("CX", 0, 2)
    circ.add("Rz", 2, angle=t)
    circ.add("CX", 1, 2)
    circ.add("Rz", 2, angle=-t)
    circ.add("CX", 0, 2)
    circ.add("Rz", 1, angle=t)
    circ.add("Rz", 2, angle=t)
    circ.add("CX", 0, 1)
    circ.add("H", 2)
    circ.add("Rz", 0, angle=t)
    circ.add("Rz", 1, angle=-t)
    circ.add("CX", 0, 1)
    return circ


def toffoli_phase_equivalent_decomposition() -> Circuit:
    """Margolus-style relative-phase Toffoli on (0, 1, 2): 3 CX, 4 Ry.

    Equals the Toffoli up to diagonal phase factors, so it may replace a
    Toffoli wherever only squared magnitudes of computational outcomes
    matter (builders mark this with metadata["magnitude_only"]).
    """
    q = math.pi / 4.0
    circ = Circuit(3, registers={"c": (0, 1), "t": (2,)})
    circ.add("Ry", 2, angle=q)
    circ.add("CX", 1, 2)
    circ.add("Ry", 2, angle=q)
    circ.add("CX", 0, 2)
    circ.add("Ry", 2, angle=-q)
    circ.add("CX", 1, 2)
    circ.add("Ry", 2, angle=-q)
    return circ


def substitute_toffoli(circuit: Circuit, variant: str = "phase") -> Circuit:
    """Replace every Toffoli gate with a decomposition.

    variant "exact" is always allowed; variant "phase" requires the circuit
    to be flagged magnitude-only, since it only preserves outcome magnitudes.
    """
    if variant == "exact":
        repl = toffoli_exact_decomposition()
    elif variant == "phase":
        if not circuit.metadata.get("magnitude_only", False):
            raise UnsupportedGateError(
                "phase-equivalent Toffoli only allowed in magnitude-only circuits")
        repl = toffoli_phase_equivalent_decomposition()
    else:
        raise ValueError(f"unknown Toffoli variant {variant!r}")
    out = Circuit(circuit.n_qubits, registers=dict(circuit.registers),
                  measured=set(circuit.measured), metadata=dict(circuit.metadata))
    for g in circuit.gates:
        if g.kind != "Toffoli":
            out.add(g.kind, *g.qubits, angle=g.angle)
            continue
        remap = {0: g.qubits[0], 1: g.qubits[1], 2: g.qubits[2]}
        for h in repl.gates:
            out.add(h.kind, *(remap[q] for q in h.qubits), angle=h.angle)
    return out


# ---------------------------------------------------------------------------
# Uniformly-controlled Ry (multiplexed rotation)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UCRySpec:
    control_labels: tuple[int, ...]
    target_label: int
    angles: tuple[float, ...]

    def __post_init__(self):
        if len(self.angles) != 1 << len(self.control_labels):
            raise InvalidGateError(
                f"need {1 << len(self.control_labels)} angles, "
                f"got {len(self.angles)}")


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def uc_ry(spec: UCRySpec) -> Circuit:
    """Gray-code CX/Ry ladder applying Ry(angles[k]) for control pattern k.

    Pattern k is little-endian over control_labels: bit j of k is the state
    of control_labels[j].
    """
    m = len(spec.control_labels)
    n = max((spec.target_label, *spec.control_labels), default=spec.target_label) + 1
    circ = Circuit(n, registers={"q": tuple(range(n))})
    if m == 0:
        circ.add("Ry", spec.target_label, angle=spec.angles[0])
        return circ
    size = 1 << m
    # Walsh-type recoding: pattern k sees the rotation sum
    # sum_i (-1)^popcount(k & gray(i)) hat[i], so hat = M^{-1} angles
    mat = np.array([[(-1) ** bin(k & _gray(i)).count("1") for i in range(size)]
                    for k in range(size)], dtype=float)
    hat = mat.T @ np.asarray(spec.angles, dtype=float) / size
    for i in range(size):
        circ.add("Ry", spec.target_label, angle=float(hat[i]))
        if i == size - 1:
            ctrl = spec.control_labels[m - 1]
        else:
            changed = _gray(i) ^ _gray(i + 1)
            ctrl = spec.control_labels[changed.bit_length() - 1]
        circ.add("CX", ctrl, spec.target_label)
    return circ


# ---------------------------------------------------------------------------
# Single-qubit rewriting into the Rz / sqrt(X) hardware basis
# ---------------------------------------------------------------------------

def _norm_angle(a: float) -> float:
    """Map an angle into (-pi, pi], ties toward the non-negative branch."""
    a = math.remainder(a, 2.0 * math.pi)
    if a <= -math.pi + 1e-15:
        a = math.pi
    return a


def _zyz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Euler angles (phi, theta, lam) with u ~ Rz(phi) Ry(theta) Rz(lam)."""
    det = np.linalg.det(u)
    su = u * det ** -0.5
    theta = 2.0 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[0, 0]) < 1e-12:
        # antidiagonal: only phi - lam is fixed
        phi = 2.0 * np.angle(su[1, 0])
        lam = 0.0
    elif abs(su[1, 0]) < 1e-12:
        phi = 2.0 * np.angle(su[1, 1])
        lam = 0.0
    else:
        plus = 2.0 * np.angle(su[1, 1])
        minus = 2.0 * np.angle(su[1, 0])
        phi = (plus + minus) / 2.0
        lam = (plus - minus) / 2.0
    return phi, theta, lam


def rewrite_1q_to_zsx(gate: GateInstance) -> Circuit:
    """Rewrite a single-qubit gate as Rz / sqrt(X) / Rz / sqrt(X) / Rz.

    The result equals the input up to global phase. Diagonal inputs come
    back as a single Rz; Rz(0) factors are dropped. The middle Euler branch
    is normalized into (-pi, pi].
    """
    if len(gate.qubits) != 1 or gate.kind == "Measure":
        raise UnsupportedGateError("ZSX rewrite handles unitary 1-qubit gates only")
    u = gate_matrix(gate)
    q = gate.qubits[0]
    circ = Circuit(q + 1)
    if abs(u[0, 1]) < 1e-14 and abs(u[1, 0]) < 1e-14:
        alpha = _norm_angle(float(np.angle(u[1, 1] / u[0, 0])))
        if abs(alpha) > 1e-14:
            circ.add("Rz", q, angle=alpha)
        return circ
    phi, theta, lam = _zyz_angles(u)
    # Rz(phi) Ry(theta) Rz(lam) ~ Rz(phi+pi) . sqrtX . Rz(theta+pi) . sqrtX . Rz(lam)
    # (matrix order; gates below are emitted in program order, Rz(lam) first)
    lam_n = _norm_angle(lam)
    if abs(lam_n) > 1e-14:
        circ.add("Rz", q, angle=lam_n)
    circ.add("SqrtX", q)
    circ.add("Rz", q, angle=_norm_angle(theta + math.pi))
    circ.add("SqrtX", q)
    phi_n = _norm_angle(phi + math.pi)
    if abs(phi_n) > 1e-14:
        circ.add("Rz", q, angle=phi_n)
    return circ


# ---------------------------------------------------------------------------
# OpenQASM 2.0 export
# ---------------------------------------------------------------------------

_QASM_NAMES = {
    "X": "x",
    "H": "h",
    "SqrtX": "sx",
    "Ry": "ry",
    "Rz": "rz",
    "CX": "cx",
    "CRy": "cry",
    "Toffoli": "ccx",
}


def export_qasm(circuit: Circuit) -> str:
    """Serialize to OpenQASM 2.0 (UTF-8, LF endings, qelib1 gate names)."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";',
             f"qreg q[{circuit.n_qubits}];"]
    measured = sorted(circuit.measured)
    if measured:
        lines.append(f"creg c[{len(measured)}];")
    for g in circuit.gates:
        if g.kind == "Measure":
            continue
        name = _QASM_NAMES[g.kind]
        args = ", ".join(f"q[{q}]" for q in g.qubits)
        if g.angle is not None:
            lines.append(f"{name}({g.angle!r}) {args};")
        else:
            lines.append(f"{name} {args};")
    for i, q in enumerate(measured):
        lines.append(f"measure q[{q}] -> c[{i}];")
    return "\n".join(lines) + "\n"
