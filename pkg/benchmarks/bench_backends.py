"""Benchmark the numba kernel against the pure-numpy fallback.

Runs the builder corpus plus wide random circuits under both backends and
prints per-circuit timings and the speedup ratio. Usage:

    python3 benchmarks/bench_backends.py [--qubits 16] [--gates 200] [--reps 5]
"""

import argparse
import math
import time

import numpy as np

from ampstep import backend, gearbox, sim
from ampstep.amparith import build_composition, build_subtraction
from ampstep.circuits import Circuit


def random_circuit(n_qubits: int, n_gates: int, seed: int) -> Circuit:
    rng = np.random.default_rng(seed)
    circ = Circuit(n_qubits)
    kinds = ("H", "Ry", "Rz", "CX", "CRy", "Toffoli")
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        arity = {"H": 1, "Ry": 1, "Rz": 1, "CX": 2, "CRy": 2, "Toffoli": 3}[kind]
        qubits = rng.choice(n_qubits, size=arity, replace=False)
        angle = float(rng.uniform(-math.pi, math.pi)) if kind in ("Ry", "CRy", "Rz") else None
        circ.add(kind, *(int(q) for q in qubits), angle=angle)
    return circ


def workloads(args):
    yield "gearbox_d4", gearbox.build_gearbox(gearbox.GearboxSpec(4, 0.8))
    yield "subtraction", build_subtraction(0.3, 0.7)
    yield "composition", build_composition(0.6, 0.2, 0.9)
    yield f"random_{args.qubits}q", random_circuit(args.qubits, args.gates, seed=0)


def time_backend(name: str, circ, reps: int) -> float:
    backend.set_backend(name)
    sim.run_circuit(circ)  # warm the JIT / cache before timing
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        sim.run_circuit(circ)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=16)
    parser.add_argument("--gates", type=int, default=200)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    print(f"{'circuit':<16} {'qubits':>6} {'gates':>6} "
          f"{'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for name, circ in workloads(args):
        t_np = time_backend("numpy", circ, args.reps)
        t_nb = time_backend("numba", circ, args.reps)
        print(f"{name:<16} {circ.n_qubits:>6} {len(circ.gates):>6} "
              f"{1e3 * t_np:>11.3f} {1e3 * t_nb:>11.3f} {t_np / t_nb:>8.2f}x")


if __name__ == "__main__":
    main()
