"""Self-contained oracle suite behind the `validate` CLI command.

Each check returns (name, passed, detail). The suite re-derives every
module invariant from an independent path (dense oracle, closed forms,
grid identities) rather than trusting the implementation under test.
"""

from __future__ import annotations

import math

import numpy as np

from ampstep import amparith, circuits, fourier, gearbox, sim


def _phase_aligned_dev(u: np.ndarray, target: np.ndarray) -> float:
    i = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    phase = u[i] / target[i]
    return float(np.max(np.abs(u / phase - target)))


def _toffoli_matrix() -> np.ndarray:
    m = np.eye(8, dtype=complex)
    m[[3, 7]] = m[[7, 3]]
    return m


def _single_step_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [c * c, s * c, s * s, -s * c],
        [s * c, s * s, -s * c, c * c],
        [s * s, -s * c, c * c, s * c],
        [-s * c, c * c, s * c, s * s],
    ], dtype=complex)


def check_single_step_matrix(angle_scale: float = 1.0):
    """All 16 entries of the pinned d=1 builder for 20 random thetas.

    angle_scale deliberately perturbs the builder's rotation angles; any
    value other than 1.0 must make this check fail (mutation guard).
    """
    rng = np.random.default_rng(11)
    worst = 0.0
    for theta in rng.uniform(0.0, math.pi / 2, 20):
        circ = circuits.Circuit(2)
        circ.add("Ry", 0, angle=-2.0 * theta * angle_scale)
        circ.add("CX", 0, 1)
        circ.add("Ry", 0, angle=2.0 * theta * angle_scale)
        dev = np.max(np.abs(sim.dense_oracle(circ) - _single_step_matrix(theta)))
        worst = max(worst, float(dev))
    return worst < 1e-12, f"max entry deviation {worst:.3e}"


def check_step_law(depth_d: int, points: int = 1000):
    p = 1 << (depth_d + 1)
    worst_omega = worst_succ = 0.0
    for theta in np.linspace(0.0, math.pi / 2, points):
        res = gearbox.evaluate_gearbox(gearbox.GearboxSpec(depth_d, float(theta)))
        s, c = math.sin(theta) ** p, math.cos(theta) ** p
        worst_omega = max(worst_omega, abs(res.omega - s / (s + c)))
        worst_succ = max(worst_succ, abs(res.success_probability - (s + c)))
    ok = worst_omega < 1e-10 and worst_succ < 1e-10
    return ok, f"omega dev {worst_omega:.3e}, success dev {worst_succ:.3e}"


def check_step_approximation():
    grid = [t for t in np.linspace(0.0, math.pi / 2, 1000)
            if abs(t - math.pi / 4) >= 0.1]
    err = gearbox.step_approximation_error(3, grid)
    return err < 0.05, f"max step error {err:.4f} (bound 0.05)"


def check_step_error_monotone():
    thetas = [0.55, 0.95, 1.2]
    ok = True
    for theta in thetas:
        errs = [abs(gearbox.analytics(gearbox.GearboxSpec(d, theta)).s_composed
                    - gearbox.unit_step(theta - math.pi / 4)) for d in (1, 2, 3, 4)]
        ok = ok and all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    return ok, "error strictly decreasing in depth off the threshold"


def check_symmetry():
    worst = 0.0
    for d in (1, 2, 3):
        for theta in np.linspace(0.0, math.pi / 2, 101):
            a = gearbox.analytics(gearbox.GearboxSpec(d, float(theta))).s_composed
            b = gearbox.analytics(gearbox.GearboxSpec(d, math.pi / 2 - float(theta))).s_composed
            worst = max(worst, abs(a + b - 1.0))
    return worst < 1e-12, f"max symmetry defect {worst:.3e}"


def check_nesting_law():
    worst = 0.0
    for d in (1, 2, 3):
        for theta in np.linspace(0.05, math.pi / 2 - 0.05, 101):
            # compose the scalar angle map d times, then square the sine
            ang = float(theta)
            for _ in range(d):
                ang = math.atan(math.tan(ang) ** 2)
            composed = math.sin(ang) ** 2
            power = gearbox.analytics(gearbox.GearboxSpec(d, float(theta))).s_composed
            worst = max(worst, abs(composed - power))
    return worst < 1e-10, f"max nesting defect {worst:.3e}"


def _builder_corpus():
    yield "gearbox_d1", gearbox.build_gearbox(gearbox.GearboxSpec(1, 0.73))
    yield "gearbox_d2", gearbox.build_gearbox(gearbox.GearboxSpec(2, 0.51))
    yield "gearbox_d3", gearbox.build_gearbox(gearbox.GearboxSpec(3, 1.02))
    yield "rescaled_plateau", gearbox.build_rescaled_plateau(0.6, math.pi / 4)
    yield "relu", gearbox.build_relu(0.9)
    yield "subtraction", amparith.build_subtraction(0.3, 0.8)
    yield "addition", amparith.build_addition(0.25, 0.5)
    yield "composition", amparith.build_composition(0.7, 0.2, 0.6)
    yield "toffoli_exact", circuits.toffoli_exact_decomposition()
    yield "toffoli_phase", circuits.toffoli_phase_equivalent_decomposition()
    yield "uc_ry", circuits.uc_ry(circuits.UCRySpec((0, 1), 2, (0.3, 0.7, 1.1, 1.9)))
    small = fourier.CosSquaredSeries(a0_prime=0.4, a_prime=(-0.3,),
                                     b_prime=(0.1,), period=math.pi / 2)
    yield "compiled_series", fourier.compile_series(small, 0.4)


def check_oracle_equivalence():
    worst = 0.0
    for name, circ in _builder_corpus():
        if circ.n_qubits > sim.ORACLE_MAX_QUBITS:
            continue
        full = sim.dense_oracle(circ)
        ref = full[:, 0]
        got = sim.run_circuit(circ).amplitudes
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return worst < 1e-12, f"max run/oracle deviation {worst:.3e}"


def check_norm_preservation():
    worst = 0.0
    for _, circ in _builder_corpus():
        state = sim.zero_state(circ.n_qubits)
        for gate in circ.gates:
            if gate.kind == "Measure":
                continue
            state = sim.apply_gate(state, gate)
            worst = max(worst, abs(state.norm_sq() - 1.0))
    return worst < 1e-12, f"max norm defect {worst:.3e}"


def check_subtraction_identity():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(64):
        g, h = rng.uniform(0.0, 1.0, 2)
        state = sim.run_circuit(amparith.build_subtraction(g, h))
        worst = max(worst, abs(amparith.read_subtraction(state).difference - (g - h)))
    return worst < 1e-12, f"max |diff - (g-h)| {worst:.3e}"


def check_subtraction_final_state():
    g, h = 0.37, 0.81
    got = sim.run_circuit(amparith.build_subtraction(g, h)).amplitudes
    want = np.zeros(8, dtype=complex)
    r = 1.0 / math.sqrt(2.0)
    want[0] = r * math.sqrt(1.0 - g)
    want[4] = r * math.sqrt(g)
    want[1] = r * math.sqrt(h)
    want[7] = r * math.sqrt(1.0 - h)
    dev = float(np.max(np.abs(got - want)))
    return dev < 1e-12, f"final-state deviation {dev:.3e}"


def check_subtraction_census():
    census = amparith.build_subtraction(0.5, 0.5).gate_census()
    want = {"H": 1, "CRy": 2, "CX": 2, "X": 2}
    return census == want, f"gate census {census}"


def check_subtraction_linearity():
    # affine regression of the readout over a g-grid at fixed h
    h = 0.4
    gs = np.linspace(0.0, 1.0, 9)
    r1 = np.array([amparith.read_subtraction(
        sim.run_circuit(amparith.build_subtraction(float(g), h))).r1 for g in gs])
    coeffs = np.polyfit(gs, r1, 1)
    resid = float(np.max(np.abs(np.polyval(coeffs, gs) - r1)))
    return resid < 1e-12, f"affine residual {resid:.3e}"


def check_addition_identity():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(32):
        g, h = rng.uniform(0.0, 1.0, 2)
        got = amparith.read_addition(sim.run_circuit(amparith.build_addition(g, h)))
        worst = max(worst, abs(got - (g + h)))
    return worst < 1e-12, f"max |2P - (g+h)| {worst:.3e}"


def check_composition_identity():
    rng = np.random.default_rng(14)
    worst = 0.0
    for _ in range(64):
        z, g, h = rng.uniform(0.0, 1.0, 3)
        out = amparith.read_composition(
            sim.run_circuit(amparith.build_composition(g, h, z)))
        worst = max(worst, abs(out.product - z * (g - h)))
        worst = max(worst, abs(out.b - z * (g - h + 1.0) / 2.0))
    return worst < 1e-12, f"max composition defect {worst:.3e}"


def check_toffoli_exact():
    u = sim.dense_oracle(circuits.toffoli_exact_decomposition())
    dev = _phase_aligned_dev(u, _toffoli_matrix())
    census = circuits.toffoli_exact_decomposition().gate_census()
    ok = dev < 1e-12 and census.get("CX", 0) <= 6
    return ok, f"phase-aligned deviation {dev:.3e}, CX count {census.get('CX', 0)}"


def check_toffoli_phase_magnitudes():
    u = sim.dense_oracle(circuits.toffoli_phase_equivalent_decomposition())
    dev = float(np.max(np.abs(np.abs(u) - np.abs(_toffoli_matrix()))))
    return dev < 1e-12, f"magnitude deviation {dev:.3e}"


def check_toffoli_phase_invariance():
    circ = amparith.build_composition(0.9, 0.4, 0.5)
    r_exact = amparith.read_composition(sim.run_circuit(circ)).r2
    swapped = circuits.substitute_toffoli(circ, "phase")
    r_phase = amparith.read_composition(sim.run_circuit(swapped)).r2
    dev = abs(r_exact - r_phase)
    return dev < 1e-10, f"readout shift {dev:.3e}"


def check_ucry_oracle():
    angles = (0.3, 0.7, 1.1, 1.9)
    u = sim.dense_oracle(circuits.uc_ry(circuits.UCRySpec((0, 1), 2, angles)))
    want = np.zeros((8, 8), dtype=complex)
    for k, ang in enumerate(angles):
        r = circuits.ry_matrix(ang)
        for a in range(2):
            for b in range(2):
                want[k + 4 * a, k + 4 * b] = r[a, b]
    dev = float(np.max(np.abs(u - want)))
    return dev < 1e-12, f"block-diagonal deviation {dev:.3e}"


def check_ucry_basis_states():
    rng = np.random.default_rng(15)
    angles = tuple(rng.uniform(0.0, math.pi, 8))
    circ = circuits.uc_ry(circuits.UCRySpec((0, 1, 2), 3, angles))
    worst = 0.0
    for k, ang in enumerate(angles):
        init = sim.zero_state(4)
        init.amplitudes[0] = 0.0
        init.amplitudes[k] = 1.0
        out = sim.run_circuit(circ, init).amplitudes
        worst = max(worst, abs(out[k] - math.cos(ang / 2.0)),
                    abs(out[k + 8] - math.sin(ang / 2.0)))
    return worst < 1e-12, f"max basis-state deviation {worst:.3e}"


def check_zsx_rewrites():
    rng = np.random.default_rng(16)
    gates = [circuits.GateInstance("H", (0,)), circuits.GateInstance("X", (0,)),
             circuits.GateInstance("SqrtX", (0,))]
    gates += [circuits.GateInstance("Ry", (0,), float(a))
              for a in rng.uniform(-math.pi, math.pi, 4)]
    gates += [circuits.GateInstance("Rz", (0,), float(a))
              for a in rng.uniform(-math.pi, math.pi, 4)]
    worst = 0.0
    for gate in gates:
        u = sim.dense_oracle(circuits.rewrite_1q_to_zsx(gate))
        worst = max(worst, _phase_aligned_dev(u, circuits.gate_matrix(gate)))
    return worst < 1e-10, f"max phase-aligned deviation {worst:.3e}"


def check_fourier_reference_values():
    cs = fourier.gearbox_series(2, 4)
    want = (0.598, -0.7, 0.314, -0.14, 0.062)
    got = (cs.a0_prime, *cs.a_prime)
    dev = max(abs(a - b) for a, b in zip(got, want))
    ok = dev < 0.005
    ok = ok and abs(cs.evaluate(math.pi / 4) - 0.974) < 0.005
    ok = ok and abs(cs.evaluate(0.0) - 0.134) < 0.005
    return ok, f"max coefficient deviation {dev:.4f}"


def check_normalization_constants():
    ok = (fourier.normalization_constant(1) == 0.5
          and fourier.normalization_constant(2) == 0.125
          and fourier.normalization_constant(3) == 2.0 ** -7)
    return ok, "2^(-2^d + 1) for d in 1..3"


def check_cos2_rewrite_identity():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(5):
        series = fourier.FourierSeries(
            period=float(rng.uniform(0.5, 3.0)), a0=float(rng.uniform(-1, 1)),
            a=tuple(rng.uniform(-1, 1, 3)), b=tuple(rng.uniform(-1, 1, 3)))
        grid = np.linspace(0.0, series.period, 1000)
        dev = np.max(np.abs(fourier.to_cos_squared(series).evaluate(grid)
                            - series.evaluate(grid)))
        worst = max(worst, float(dev))
    return worst < 1e-12, f"max pointwise defect {worst:.3e}"


def check_quadrature_convergence():
    base = fourier.gearbox_series(2, 4, nodes=1 << 14)
    fine = fourier.gearbox_series(2, 4, nodes=1 << 15)
    dev = max(abs(a - b) for a, b in
              zip((base.a0_prime, *base.a_prime), (fine.a0_prime, *fine.a_prime)))
    return dev < 1e-9, f"doubling nodes moves coefficients by {dev:.3e}"


def check_compile_readback():
    rng = np.random.default_rng(18)
    worst = 0.0
    for _ in range(6):
        series = fourier.CosSquaredSeries(
            a0_prime=float(rng.uniform(0.0, 0.6)),
            a_prime=tuple(rng.uniform(-0.5, 0.5, 2)),
            b_prime=tuple(rng.uniform(-0.3, 0.3, 2)),
            period=float(rng.uniform(0.5, 2.0)))
        x = float(rng.uniform(0.0, series.period))
        got = fourier.read_compiled(fourier.compile_series(series, x))
        worst = max(worst, abs(got - series.evaluate(x)))
    return worst < 1e-10, f"max readback deviation {worst:.3e}"


def check_split_recombination():
    cs = fourier.gearbox_series(2, 4)
    split = fourier.split_series(cs)
    grid = np.linspace(0.0, math.pi / 2, 1000)
    dev = float(np.max(np.abs(split.positive.evaluate(grid)
                              - split.negative.evaluate(grid) - cs.evaluate(grid))))
    return dev < 1e-12, f"max recombination defect {dev:.3e}"


def check_split_weighted_difference():
    cs = fourier.gearbox_series(2, 4)
    split = fourier.split_series(cs)
    rng = np.random.default_rng(19)
    worst = 0.0
    for _ in range(4):
        z = float(rng.uniform(0.0, 1.0))
        x = float(rng.uniform(0.0, math.pi / 2))
        got = fourier.weighted_difference(split, z, x)
        worst = max(worst, abs(got - z * cs.evaluate(x)))
    return worst < 1e-10, f"max weighted-difference defect {worst:.3e}"


def check_sampling_determinism():
    circ = gearbox.build_gearbox(gearbox.GearboxSpec(1, 0.8))
    state = sim.run_circuit(circ)
    a = sim.sample_shots(state, (0, 1), 5000, seed=42)
    b = sim.sample_shots(state, (0, 1), 5000, seed=42)
    return a == b, "identical records for identical seed"


def check_shot_concentration():
    spec = gearbox.GearboxSpec(1, math.pi / 3)
    res = gearbox.evaluate_gearbox(spec, shots=100_000, seed=7)
    p = gearbox.analytics(spec).s_composed
    bound = 5.0 * math.sqrt(p * (1.0 - p) / res.shots_kept)
    dev = abs(res.omega - p)
    return dev <= bound, f"|est - p| = {dev:.4f} vs 5-sigma bound {bound:.4f}"


def check_qasm_export():
    text = circuits.export_qasm(amparith.build_subtraction(0.6, 0.3))
    lines = [ln for ln in text.splitlines()]
    ok = lines[0] == "OPENQASM 2.0;" and lines[1] == 'include "qelib1.inc";'
    kinds = [ln.split("(")[0].split()[0] for ln in lines[3:] if ln and not ln.startswith(("creg", "measure"))]
    want = ["h", "cry", "cx", "x", "cry", "x", "cx"]
    ok = ok and kinds == want
    return ok, f"gate lines {kinds}"


CHECKS = [
    ("single_step_matrix", check_single_step_matrix),
    ("step_law_d1", lambda: check_step_law(1)),
    ("step_law_d2", lambda: check_step_law(2)),
    ("step_law_d3", lambda: check_step_law(3)),
    ("step_approximation_d3", check_step_approximation),
    ("step_error_monotone", check_step_error_monotone),
    ("gearbox_symmetry", check_symmetry),
    ("gearbox_nesting_law", check_nesting_law),
    ("oracle_equivalence", check_oracle_equivalence),
    ("norm_preservation", check_norm_preservation),
    ("subtraction_identity", check_subtraction_identity),
    ("subtraction_final_state", check_subtraction_final_state),
    ("subtraction_gate_census", check_subtraction_census),
    ("subtraction_linearity", check_subtraction_linearity),
    ("addition_identity", check_addition_identity),
    ("composition_identity", check_composition_identity),
    ("toffoli_exact_matrix", check_toffoli_exact),
    ("toffoli_phase_magnitudes", check_toffoli_phase_magnitudes),
    ("toffoli_phase_invariance", check_toffoli_phase_invariance),
    ("ucry_block_diagonal", check_ucry_oracle),
    ("ucry_basis_states", check_ucry_basis_states),
    ("zsx_rewrites", check_zsx_rewrites),
    ("fourier_reference_values", check_fourier_reference_values),
    ("normalization_constants", check_normalization_constants),
    ("cos2_rewrite_identity", check_cos2_rewrite_identity),
    ("quadrature_convergence", check_quadrature_convergence),
    ("compile_readback", check_compile_readback),
    ("split_recombination", check_split_recombination),
    ("split_weighted_difference", check_split_weighted_difference),
    ("sampling_determinism", check_sampling_determinism),
    ("shot_concentration", check_shot_concentration),
    ("qasm_export", check_qasm_export),
]


def run_all():
    """Run every check, yielding (name, passed, detail)."""
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
