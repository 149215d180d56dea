"""Acceptance gate: one test per release criterion, each printing a single
PASS/FAIL line with its measured runtime. Backend JIT warmup happens in the
session fixture, so the timed bodies exclude compilation."""

import math
import time

import numpy as np

from ampstep import amparith, circuits, fourier, gearbox, sim, validation


def _report(n: int, label: str, ok: bool, elapsed: float, limit: float):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"criterion {n:2d} {status} {label} "
          f"({elapsed:.2f}s, limit {limit:.0f}s)")
    assert ok, f"criterion {n} failed: {label}"
    assert elapsed < limit, f"criterion {n} overran: {elapsed:.2f}s >= {limit}s"


def test_criterion_01_single_step_matrix():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for theta in rng.uniform(0.0, math.pi / 2, 20):
        c, s = math.cos(theta), math.sin(theta)
        want = np.array([
            [c * c, s * c, s * s, -s * c],
            [s * c, s * s, -s * c, c * c],
            [s * s, -s * c, c * c, s * c],
            [-s * c, c * c, s * c, s * s],
        ])
        u = sim.dense_oracle(gearbox.build_gearbox(gearbox.GearboxSpec(1, float(theta))))
        worst = max(worst, float(np.max(np.abs(u - want))))
    _report(1, f"single-step matrix, 16 entries x 20 thetas, dev {worst:.2e}",
            worst < 1e-12, time.perf_counter() - start, 1.0)


def test_criterion_02_step_law():
    start = time.perf_counter()
    worst = 0.0
    for d in (1, 2, 3):
        p = 1 << (d + 1)
        for theta in np.linspace(0.0, math.pi / 2, 1000):
            res = gearbox.evaluate_gearbox(gearbox.GearboxSpec(d, float(theta)))
            s, c = math.sin(theta) ** p, math.cos(theta) ** p
            worst = max(worst, abs(res.omega - s / (s + c)),
                        abs(res.success_probability - (s + c)))
    _report(2, f"step law d in 1..3, 1000-point grid, dev {worst:.2e}",
            worst < 1e-10, time.perf_counter() - start, 30.0)


def test_criterion_03_step_approximation():
    start = time.perf_counter()
    grid = [t for t in np.linspace(0.0, math.pi / 2, 1000)
            if abs(t - math.pi / 4) >= 0.1]
    err = gearbox.step_approximation_error(3, grid)
    _report(3, f"d=3 step approximation, max error {err:.4f}",
            err < 0.05, time.perf_counter() - start, 1.0)


def test_criterion_04_amplitude_subtraction():
    start = time.perf_counter()
    rng = np.random.default_rng(104)
    worst = 0.0
    r = 1.0 / math.sqrt(2.0)
    for _ in range(64):
        g, h = rng.uniform(0.0, 1.0, 2)
        state = sim.run_circuit(amparith.build_subtraction(g, h))
        worst = max(worst, abs(amparith.read_subtraction(state).difference - (g - h)))
        want = np.zeros(8)
        want[0] = r * math.sqrt(1.0 - g)
        want[4] = r * math.sqrt(g)
        want[1] = r * math.sqrt(h)
        want[7] = r * math.sqrt(1.0 - h)
        worst = max(worst, float(np.max(np.abs(state.amplitudes - want))))
    _report(4, f"subtraction, 64 random (g,h), dev {worst:.2e}",
            worst < 1e-12, time.perf_counter() - start, 5.0)


def test_criterion_05_composition():
    start = time.perf_counter()
    rng = np.random.default_rng(105)
    worst = 0.0
    for _ in range(64):
        z, g, h = rng.uniform(0.0, 1.0, 3)
        out = amparith.read_composition(
            sim.run_circuit(amparith.build_composition(g, h, z)))
        worst = max(worst, abs(out.product - z * (g - h)))
    _report(5, f"composition, 64 random (z,g,h), dev {worst:.2e}",
            worst < 1e-12, time.perf_counter() - start, 10.0)


def test_criterion_06_fourier_coefficients():
    start = time.perf_counter()
    cs = fourier.gearbox_series(2, 4)
    want = (0.598, -0.7, 0.314, -0.14, 0.062)
    dev = max(abs(g - w) for g, w in zip((cs.a0_prime, *cs.a_prime), want))
    ok = dev < 0.005
    ok = ok and abs(cs.evaluate(math.pi / 4) - 0.974) < 0.005
    ok = ok and abs(cs.evaluate(0.0) - 0.134) < 0.005
    _report(6, f"five leading coefficients + sanity values, dev {dev:.4f}",
            ok, time.perf_counter() - start, 5.0)


def test_criterion_07_normalization():
    start = time.perf_counter()
    ok = all(fourier.normalization_constant(d) == 2.0 ** (-(1 << d) + 1)
             for d in (1, 2, 3))
    _report(7, "normalization constant 2^(-2^d + 1), d in 1..3",
            ok, time.perf_counter() - start, 1.0)


def test_criterion_08_splitting():
    start = time.perf_counter()
    cs = fourier.gearbox_series(2, 4)
    split = fourier.split_series(cs)
    rng = np.random.default_rng(108)
    worst = 0.0
    for _ in range(16):
        z = float(rng.uniform(0.0, 1.0))
        x = float(rng.uniform(0.0, math.pi / 2))
        got = fourier.weighted_difference(split, z, x)
        worst = max(worst, abs(got - z * cs.evaluate(x)))
    _report(8, f"split recombination, 16 random weights, dev {worst:.2e}",
            worst < 1e-10, time.perf_counter() - start, 10.0)


def test_criterion_09_toffoli_variants():
    start = time.perf_counter()
    perm = np.eye(8, dtype=complex)
    perm[[3, 7]] = perm[[7, 3]]
    u = sim.dense_oracle(circuits.toffoli_exact_decomposition())
    phase = u[0, 0] / perm[0, 0]
    dev_a = float(np.max(np.abs(u / phase - perm)))
    v = sim.dense_oracle(circuits.toffoli_phase_equivalent_decomposition())
    dev_b = float(np.max(np.abs(np.abs(v) - np.abs(perm))))
    circ = amparith.build_composition(0.8, 0.3, 0.6)
    r_ref = amparith.read_composition(sim.run_circuit(circ)).r2
    r_sub = amparith.read_composition(
        sim.run_circuit(circuits.substitute_toffoli(circ, "phase"))).r2
    dev_c = abs(r_ref - r_sub)
    ok = dev_a < 1e-12 and dev_b < 1e-12 and dev_c < 1e-10
    _report(9, f"toffoli variants, devs {dev_a:.1e}/{dev_b:.1e}/{dev_c:.1e}",
            ok, time.perf_counter() - start, 1.0)


def test_criterion_10_shot_statistics():
    start = time.perf_counter()
    ok = True
    for d in (1, 2):
        for i, theta in enumerate(np.linspace(0.15, math.pi / 2 - 0.15, 10)):
            spec = gearbox.GearboxSpec(d, float(theta))
            res = gearbox.evaluate_gearbox(spec, shots=100_000,
                                           seed=1000 * d + i)
            p = gearbox.analytics(spec).s_composed
            bound = 5.0 * math.sqrt(p * (1.0 - p) / res.shots_kept)
            ok = ok and abs(res.omega - p) <= bound
    _report(10, "100000-shot estimates, 10 thetas x d in {1,2}, 5-sigma bound",
            ok, time.perf_counter() - start, 60.0)


def test_criterion_11_oracle_equivalence_suite():
    start = time.perf_counter()
    ok, detail = validation.check_oracle_equivalence()
    results = validation.run_all()
    failed = [name for name, passed, _ in results if not passed]
    ok = ok and not failed
    _report(11, f"oracle-equivalence + full suite ({len(results)} checks), "
                f"{detail}; failures {failed}",
            ok, time.perf_counter() - start, 120.0)
