"""Fourier-series approximation of functions and compilation to amplitude
circuits.

The target of interest is the reciprocal gearbox success probability
D_d(theta) = 1 / (sin^(2^(d+1)) + cos^(2^(d+1))), which is pi/2-periodic
and even, rescaled by the normalization constant 2^(-2^d + 1) so its values
fit in [0, 1]. A standard cosine/sine series is rewritten into cos^2-only
form via the double-angle identity; each cos^2 term is then loadable with a
single Ry rotation, and terms are chained with amplitude additions and
subtractions. The chain's readout probability recovers the series value
through an affine map tracked in the circuit metadata.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ampstep.amparith import AmplitudeLoader
from ampstep.circuits import Circuit
from ampstep.sim import marginal_probability, run_circuit

QUADRATURE_NODES = 1 << 16  # >= 2^14 per period
MAX_COMPILED_TERMS = 8


class NormalizationError(ValueError):
    """Series or loader values escape [0, 1]; rescale before compiling."""


@dataclass(frozen=True)
class FourierSeries:
    period: float
    a0: float
    a: tuple[float, ...]
    b: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.a)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.a0 / 2.0)
        w = 2.0 * math.pi / self.period
        for n in range(1, self.order + 1):
            out = out + self.a[n - 1] * np.cos(w * n * x) \
                      + self.b[n - 1] * np.sin(w * n * x)
        return out if out.shape else float(out)


@dataclass(frozen=True)
class CosSquaredSeries:
    a0_prime: float
    a_prime: tuple[float, ...]
    b_prime: tuple[float, ...]
    period: float

    @property
    def order(self) -> int:
        return len(self.a_prime)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.a0_prime)
        w = math.pi / self.period
        for n in range(1, self.order + 1):
            out = out + self.a_prime[n - 1] * np.cos(w * n * x) ** 2 \
                      + self.b_prime[n - 1] * np.cos(w * n * x - math.pi / 4.0) ** 2
        return out if out.shape else float(out)

    def terms(self, x: float) -> list[tuple[float, float]]:
        """(coefficient, cos^2 factor) pairs at the point x, constant first."""
        w = math.pi / self.period
        out = [(self.a0_prime, 1.0)]
        for n in range(1, self.order + 1):
            out.append((self.a_prime[n - 1], math.cos(w * n * x) ** 2))
            out.append((self.b_prime[n - 1],
                        math.cos(w * n * x - math.pi / 4.0) ** 2))
        return out


@dataclass(frozen=True)
class SplitSeries:
    positive: CosSquaredSeries
    negative: CosSquaredSeries


def fourier_coefficients(f, period: float, order: int,
                         nodes: int = QUADRATURE_NODES) -> FourierSeries:
    """Coefficients by composite midpoint quadrature over one period.

    The midpoint rule is spectrally accurate for periodic integrands, so
    2^16 nodes leave the coefficients converged well past 1e-9.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if period <= 0:
        raise ValueError("period must be positive")
    x = (np.arange(nodes) + 0.5) * (period / nodes)
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ValueError("function returned non-finite samples")
    w = 2.0 * math.pi / period
    a0 = 2.0 * float(fx.mean())
    a = []
    b = []
    for n in range(1, order + 1):
        a.append(2.0 * float((fx * np.cos(w * n * x)).mean()))
        b.append(2.0 * float((fx * np.sin(w * n * x)).mean()))
    return FourierSeries(period=period, a0=a0, a=tuple(a), b=tuple(b))


def to_cos_squared(series: FourierSeries) -> CosSquaredSeries:
    """Rewrite with cos(2y) = 2 cos^2(y) - 1 and sin(2y) = 2 cos^2(y - pi/4) - 1."""
    a0p = series.a0 / 2.0 - sum(series.a) - sum(series.b)
    return CosSquaredSeries(
        a0_prime=a0p,
        a_prime=tuple(2.0 * an for an in series.a),
        b_prime=tuple(2.0 * bn for bn in series.b),
        period=series.period,
    )


def normalization_constant(depth_d: int) -> float:
    """Rescaling factor 2^(-2^d + 1) that keeps D_d / N inside [0, 1]."""
    if depth_d < 1:
        raise ValueError("depth must be >= 1")
    return 2.0 ** (-(1 << depth_d) + 1)


def inverse_success_probability(depth_d: int):
    """The reciprocal success-probability target D_d, vectorized over theta."""
    p = 1 << (depth_d + 1)
    def d_target(theta):
        theta = np.asarray(theta, dtype=float)
        return 1.0 / (np.sin(theta) ** p + np.cos(theta) ** p)
    return d_target


def gearbox_series(depth_d: int, order: int,
                   nodes: int = QUADRATURE_NODES) -> CosSquaredSeries:
    """cos^2 series of the normalized target D_d * 2^(-2^d + 1), period pi/2."""
    d_target = inverse_success_probability(depth_d)
    norm = normalization_constant(depth_d)
    series = fourier_coefficients(lambda t: norm * d_target(t),
                                  period=math.pi / 2.0, order=order, nodes=nodes)
    return to_cos_squared(series)


# ---------------------------------------------------------------------------
# Compilation to amplitude circuits
# ---------------------------------------------------------------------------

def _addition_fold(circ: Circuit, cur: int, nxt: int, h: AmplitudeLoader) -> int:
    """Append one addition stage: P(t=1) = (P(cur=1) + h) / 2.

    The running value lives on a qubit, so its controlled preparation is a
    Toffoli copy instead of a CRy loader.
    """
    a, t = nxt, nxt + 1
    circ.add("H", a)
    circ.add("Toffoli", a, cur, t)
    circ.add("X", a)
    circ.add("CRy", a, t, angle=h.angle)
    return t


def _subtraction_fold(circ: Circuit, cur: int, nxt: int, h: AmplitudeLoader) -> int:
    """Append one subtraction stage: P(t=1) = (P(cur=1) + 1 - h) / 2."""
    a, m, t = nxt, nxt + 1, nxt + 2
    circ.add("H", a)
    circ.add("Toffoli", a, cur, t)
    circ.add("CX", a, m)
    circ.add("X", a)
    circ.add("CRy", a, m, angle=h.angle)
    circ.add("X", m)
    circ.add("CX", m, t)
    return t


def compile_series(series: CosSquaredSeries, x: float,
                   max_terms: int = MAX_COMPILED_TERMS) -> Circuit:
    """Circuit whose readout probability affinely encodes series(x).

    Terms with nonzero coefficient are loaded as |coef| * cos^2(...) values
    and folded left-to-right: additions for positive terms, subtractions for
    negative ones. Each fold halves the running probability, so the affine
    readback (slope, offset) is tracked alongside and stored in metadata:
        series(x) = slope * P(readout = 1) + offset.
    """
    terms = [(c, f) for c, f in series.terms(x) if abs(c) > 1e-15]
    if not terms:
        terms = [(0.0, 1.0)]
    if len(terms) > max_terms:
        raise NormalizationError(
            f"series has {len(terms)} active terms, cap is {max_terms}")
    for c, f in terms:
        if abs(c) * f > 1.0 + 1e-12:
            raise NormalizationError(
                f"term value {abs(c) * f} escapes [0, 1]; apply the "
                "normalization constant first")
    # qubits: 1 loader + 2 per addition + 3 per subtraction
    n = 1 + sum(2 if c >= 0 else 3 for c, _ in terms[1:])
    circ = Circuit(n)
    c0, f0 = terms[0]
    v0 = min(abs(c0) * f0, 1.0)
    circ.add("Ry", 0, angle=AmplitudeLoader(v0, "t0").angle)
    cur = 0
    nxt = 1
    slope = math.copysign(1.0, c0) if c0 != 0.0 else 1.0
    offset = 0.0
    for c, f in terms[1:]:
        v = min(abs(c) * f, 1.0)
        h = AmplitudeLoader(v, "term")
        signed = c * f
        if c >= 0.0:
            cur = _addition_fold(circ, cur, nxt, h)
            nxt += 2
            # p_new = (p + v)/2  =>  p = 2 p_new - v
            offset = offset + signed - slope * v
        else:
            cur = _subtraction_fold(circ, cur, nxt, h)
            nxt += 3
            # p_new = (p + 1 - v)/2  =>  p = 2 p_new - 1 + v
            offset = offset + signed + slope * (v - 1.0)
        slope *= 2.0
    circ.measured = {cur}
    circ.metadata["readout_qubit"] = cur
    circ.metadata["slope"] = slope
    circ.metadata["offset"] = offset
    circ.metadata["magnitude_only"] = True
    return circ


def read_compiled(circ: Circuit, state=None) -> float:
    """Run (or reuse) the compiled circuit and apply the affine readback."""
    if state is None:
        state = run_circuit(circ)
    p = marginal_probability(state, circ.metadata["readout_qubit"])
    return circ.metadata["slope"] * p + circ.metadata["offset"]


def split_series(series: CosSquaredSeries) -> SplitSeries:
    """Sign split into nonnegative parts with D = D+ - D- pointwise.

    The split is not unique; partitioning by coefficient sign is the
    documented default here.
    """
    def part(keep_positive: bool) -> CosSquaredSeries:
        sel = (lambda c: max(c, 0.0)) if keep_positive else (lambda c: max(-c, 0.0))
        return CosSquaredSeries(
            a0_prime=sel(series.a0_prime),
            a_prime=tuple(sel(c) for c in series.a_prime),
            b_prime=tuple(sel(c) for c in series.b_prime),
            period=series.period,
        )
    return SplitSeries(positive=part(True), negative=part(False))


def weighted_part_value(part: CosSquaredSeries, z_prep, x: float) -> float:
    """Simulated value of z * part(x) for one sign-split circuit.

    The part circuit's readout qubit is combined with a z loader through a
    Toffoli onto a fresh output qubit; z multiplies the readout probability,
    so z * part(x) = slope * P(out=1) + offset * z. Weighting is a per-point
    product: the weight and the series are evaluated at the same single
    input point, matching the per-point loader model used throughout.
    """
    z = z_prep if isinstance(z_prep, AmplitudeLoader) else AmplitudeLoader(float(z_prep), "z")
    base = compile_series(part, x)
    zq = base.n_qubits
    out = base.n_qubits + 1
    circ = Circuit(out + 1, metadata=dict(base.metadata))
    circ.extend(base.gates)
    circ.add("Ry", zq, angle=z.angle)
    circ.add("Toffoli", base.metadata["readout_qubit"], zq, out)
    state = run_circuit(circ)
    p = marginal_probability(state, out)
    return base.metadata["slope"] * p + base.metadata["offset"] * z.value


def weighted_difference(split: SplitSeries, z_prep, x: float) -> float:
    """Circuit-1 minus circuit-2: recovers z * (D+ - D-)(x)."""
    return (weighted_part_value(split.positive, z_prep, x)
            - weighted_part_value(split.negative, z_prep, x))


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def series_to_json(series: FourierSeries, cos2: CosSquaredSeries,
                   normalization: float | None = None,
                   normalization_note: str = "") -> str:
    payload = {
        "fourier": {
            "period": series.period,
            "a0": series.a0,
            "a": list(series.a),
            "b": list(series.b),
        },
        "cos_squared": {
            "period": cos2.period,
            "a0_prime": cos2.a0_prime,
            "a_prime": list(cos2.a_prime),
            "b_prime": list(cos2.b_prime),
        },
        "normalization": {
            "constant": normalization,
            "note": normalization_note,
        },
    }
    return json.dumps(payload, indent=2)


def series_from_json(text: str) -> tuple[FourierSeries, CosSquaredSeries]:
    payload = json.loads(text)
    f = payload["fourier"]
    c = payload["cos_squared"]
    return (
        FourierSeries(period=f["period"], a0=f["a0"],
                      a=tuple(f["a"]), b=tuple(f["b"])),
        CosSquaredSeries(a0_prime=c["a0_prime"], a_prime=tuple(c["a_prime"]),
                         b_prime=tuple(c["b_prime"]), period=c["period"]),
    )
