"""Exact dense state-vector simulation, dense-matrix oracle, post-selection
and shot sampling.

Bit ordering is little-endian throughout: qubit 0 is the least-significant
bit of the basis index. Shot sampling uses numpy's default PCG64 generator
seeded explicitly, so identical (circuit, seed) gives identical records.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ampstep.backend import active_backend
from ampstep.circuits import Circuit, GateInstance, InvalidGateError, controlled_form, gate_matrix

ORACLE_MAX_QUBITS = 10


class DimensionError(ValueError):
    """Circuit and state widths disagree."""


class OracleWidthError(ValueError):
    """Circuit too wide for the dense-matrix oracle."""


class PostSelectionImpossibleError(ValueError):
    """The kept measurement pattern has zero probability mass."""


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"state over {self.n_qubits} qubits needs {1 << self.n_qubits} "
                f"amplitudes, got {self.amplitudes.shape}")

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class PostSelectionResult:
    omega: float
    kept_mass: float
    success_probability: float
    shots_kept: int | None = None


@dataclass(frozen=True)
class ShotRecord:
    bitstring: str
    count: int


def zero_state(n_qubits: int) -> StateVector:
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def apply_gate(state: StateVector, gate: GateInstance) -> StateVector:
    """Apply one gate, returning a new StateVector (input untouched)."""
    if gate.kind == "Measure":
        raise InvalidGateError("Measure is not a unitary gate")
    if max(gate.qubits) >= state.n_qubits:
        raise InvalidGateError(
            f"qubit {max(gate.qubits)} out of range for {state.n_qubits} qubits")
    ctrl_mask, target, u = controlled_form(gate)
    amps = state.amplitudes.copy()
    active_backend().apply_ctrl_1q(
        amps, target, ctrl_mask,
        complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]))
    return StateVector(state.n_qubits, amps)


def run_circuit(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Apply the circuit's gates in program order (Measure gates skipped)."""
    if initial is None:
        initial = zero_state(circuit.n_qubits)
    if initial.n_qubits != circuit.n_qubits:
        raise DimensionError(
            f"circuit is {circuit.n_qubits} qubits, state is {initial.n_qubits}")
    amps = initial.amplitudes.copy()
    backend = active_backend()
    for gate in circuit.gates:
        if gate.kind == "Measure":
            continue
        ctrl_mask, target, u = controlled_form(gate)
        backend.apply_ctrl_1q(
            amps, target, ctrl_mask,
            complex(u[0, 0]), complex(u[0, 1]), complex(u[1, 0]), complex(u[1, 1]))
    return StateVector(circuit.n_qubits, amps)


def _embed(gate: GateInstance, n_qubits: int) -> np.ndarray:
    """Lift a gate's unitary to the full 2^n space by identity padding.

    Index arithmetic only; deliberately independent of the strided kernels
    so the oracle is a separate verification path.
    """
    g = gate_matrix(gate)
    k = len(gate.qubits)
    dim = 1 << n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    idx = np.arange(dim)
    sub = np.zeros(dim, dtype=np.int64)
    mask = 0
    for j, q in enumerate(gate.qubits):
        sub |= ((idx >> q) & 1) << j
        mask |= 1 << q
    for cs in range(1 << k):
        cols = idx[sub == cs]
        base = cols & ~mask
        for rs in range(1 << k):
            if g[rs, cs] == 0:
                continue
            rbits = 0
            for j, q in enumerate(gate.qubits):
                if (rs >> j) & 1:
                    rbits |= 1 << q
            out[base | rbits, cols] = g[rs, cs]
    return out


def dense_oracle(circuit: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary of the circuit via Kronecker-style lifting."""
    if circuit.n_qubits > ORACLE_MAX_QUBITS:
        raise OracleWidthError(
            f"dense oracle limited to {ORACLE_MAX_QUBITS} qubits, "
            f"got {circuit.n_qubits}")
    full = np.eye(1 << circuit.n_qubits, dtype=complex)
    for gate in circuit.gates:
        if gate.kind == "Measure":
            continue
        full = _embed(gate, circuit.n_qubits) @ full
    return full


def _pattern_mask(qubits, values) -> tuple[int, int]:
    qubits = tuple(qubits)
    values = tuple(values)
    if len(qubits) != len(values):
        raise ValueError("kept_qubits and kept_values length mismatch")
    mask = want = 0
    for q, v in zip(qubits, values):
        mask |= 1 << q
        if v:
            want |= 1 << q
    return mask, want


def post_select(state: StateVector, kept_qubits, kept_values,
                target_qubit: int) -> PostSelectionResult:
    """Conditional probability of target=1 given the kept pattern.

    omega = P(target=1 and pattern) / P(pattern). A zero-mass pattern is an
    error, not omega=0: the conditional is undefined there.
    """
    mask, want = _pattern_mask(kept_qubits, kept_values)
    if mask & (1 << target_qubit):
        raise ValueError("target qubit may not be post-selected on")
    probs = state.probabilities()
    idx = np.arange(probs.shape[0])
    kept = (idx & mask) == want
    kept_mass = float(probs[kept].sum())
    if kept_mass <= 0.0:
        raise PostSelectionImpossibleError("kept pattern has zero probability")
    hit = kept & (((idx >> target_qubit) & 1) == 1)
    omega = float(probs[hit].sum()) / kept_mass
    return PostSelectionResult(omega=omega, kept_mass=kept_mass,
                               success_probability=kept_mass)


def _marginal_probs(state: StateVector, measured: tuple[int, ...]) -> np.ndarray:
    probs = state.probabilities()
    idx = np.arange(probs.shape[0])
    keys = np.zeros(probs.shape[0], dtype=np.int64)
    for j, q in enumerate(measured):
        keys |= ((idx >> q) & 1) << j
    return np.bincount(keys, weights=probs, minlength=1 << len(measured))


def sample_shots(state: StateVector, measured_qubits, shots: int,
                 seed: int) -> list[ShotRecord]:
    """Multinomial sampling of the marginal over measured_qubits.

    Bitstrings list the measured qubits in descending order (highest qubit
    leftmost). Deterministic for a fixed seed (PCG64).
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    measured = tuple(sorted(measured_qubits))
    if measured and measured[-1] >= state.n_qubits:
        raise ValueError(f"measured qubit {measured[-1]} out of range")
    probs = _marginal_probs(state, measured)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    m = len(measured)
    records = []
    for key in np.nonzero(counts)[0]:
        bits = "".join(str((int(key) >> j) & 1) for j in reversed(range(m)))
        records.append(ShotRecord(bitstring=bits, count=int(counts[key])))
    return records


def post_select_shots(state: StateVector, kept_qubits, kept_values,
                      target_qubit: int, shots: int, seed: int) -> PostSelectionResult:
    """Shot-based estimate of post_select using sampled counts."""
    kept_qubits = tuple(kept_qubits)
    kept_values = tuple(kept_values)
    measured = tuple(sorted((*kept_qubits, target_qubit)))
    records = sample_shots(state, measured, shots, seed)
    want = dict(zip(kept_qubits, kept_values))
    kept_total = 0
    hits = 0
    for rec in records:
        # bitstring is highest-qubit first
        bit = {q: int(rec.bitstring[len(measured) - 1 - j])
               for j, q in enumerate(measured)}
        if all(bit[q] == v for q, v in want.items()):
            kept_total += rec.count
            if bit[target_qubit] == 1:
                hits += rec.count
    if kept_total == 0:
        raise PostSelectionImpossibleError("no shots matched the kept pattern")
    return PostSelectionResult(
        omega=hits / kept_total,
        kept_mass=kept_total / shots,
        success_probability=kept_total / shots,
        shots_kept=kept_total,
    )


def marginal_probability(state: StateVector, qubit: int) -> float:
    """P(qubit = 1), the plain readout used by the amplitude-arithmetic
    circuits (no post-selection)."""
    probs = state.probabilities()
    idx = np.arange(probs.shape[0])
    return float(probs[((idx >> qubit) & 1) == 1].sum())
