"""Command-line front end: theta sweeps, Fourier coefficient export,
the validation suite, and OpenQASM export.

Exit statuses: 0 success, 1 validation failure, 2 usage or IO error.
CSV schema is fixed: header "theta,omega,analytic,success,ci_halfwidth",
RFC-4180 quoting, LF line endings; identical (config, seed) pairs produce
byte-identical files. Angles are radians unless --degrees is given. In
shots mode the half-width column is z * sqrt(p (1 - p) / kept) with z = 5.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from ampstep import amparith, circuits, fourier, gearbox, sim, validation

BUILDERS = ("gearbox", "rescaled-plateau", "relu", "subtraction",
            "composition", "fourier")
CSV_HEADER = "theta,omega,analytic,success,ci_halfwidth"
CONFIDENCE_Z = 5.0


class UsageError(ValueError):
    """Bad flag combination or value; maps to exit status 2."""


@dataclass(frozen=True)
class SweepConfig:
    builder: str
    depth_d: int = 2
    theta_min: float = 0.0
    theta_max: float = math.pi / 2.0
    points: int = 50
    mode: str = "exact"
    shots: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.builder not in BUILDERS:
            raise UsageError(f"unknown builder {self.builder!r}")
        if self.points < 2:
            raise UsageError("points must be >= 2")
        if not self.theta_min < self.theta_max:
            raise UsageError("theta-min must be strictly below theta-max")
        if self.mode not in ("exact", "shots"):
            raise UsageError(f"mode must be exact or shots, got {self.mode!r}")
        if self.mode == "shots" and self.shots < 1:
            raise UsageError("shots must be >= 1 in shots mode")


@dataclass(frozen=True)
class SweepRow:
    theta: float
    omega: float
    analytic: float
    success: float
    ci_halfwidth: float | None = None


def _fmt(x: float) -> str:
    return repr(float(x))


def _row_text(row: SweepRow) -> str:
    ci = "" if row.ci_halfwidth is None else _fmt(row.ci_halfwidth)
    return ",".join((_fmt(row.theta), _fmt(row.omega), _fmt(row.analytic),
                     _fmt(row.success), ci))


def _halfwidth(p_hat: float, kept: int) -> float:
    return CONFIDENCE_Z * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / kept)


def _marginal_estimate(circ, qubit: int, shots: int, seed: int) -> tuple[float, int]:
    """Shot estimate of P(qubit = 1) for an unpost-selected readout."""
    state = sim.run_circuit(circ)
    records = sim.sample_shots(state, (qubit,), shots, seed)
    hits = sum(r.count for r in records if r.bitstring == "1")
    return hits / shots, shots


def _gearbox_row(config: SweepConfig, theta: float, seed: int) -> SweepRow:
    spec = gearbox.GearboxSpec(config.depth_d, theta)
    ana = gearbox.analytics(spec)
    if config.mode == "exact":
        res = gearbox.evaluate_gearbox(spec)
        return SweepRow(theta, res.omega, ana.s_composed, res.success_probability)
    res = gearbox.evaluate_gearbox(spec, shots=config.shots, seed=seed)
    return SweepRow(theta, res.omega, ana.s_composed, res.success_probability,
                    _halfwidth(res.omega, res.shots_kept))


def _plateau_row(config: SweepConfig, theta: float, seed: int) -> SweepRow:
    kappa = math.pi / 4.0
    circ = gearbox.build_rescaled_plateau(theta, kappa)
    s = gearbox.analytics(gearbox.GearboxSpec(2, theta))
    analytic = math.sin(kappa / 2.0) ** 2 * (1.0 - s.s_composed)
    if config.mode == "exact":
        res = gearbox.evaluate_output(circ)
        return SweepRow(theta, res.omega, analytic, res.success_probability)
    res = gearbox.evaluate_output(circ, shots=config.shots, seed=seed)
    return SweepRow(theta, res.omega, analytic, res.success_probability,
                    _halfwidth(res.omega, res.shots_kept))


def _relu_row(config: SweepConfig, theta: float, seed: int) -> SweepRow:
    circ = gearbox.build_relu(theta)
    s = gearbox.analytics(gearbox.GearboxSpec(2, theta))
    analytic = math.sin(theta / 2.0) ** 2 * s.s_composed
    if config.mode == "exact":
        res = gearbox.evaluate_output(circ)
        return SweepRow(theta, res.omega, analytic, res.success_probability)
    res = gearbox.evaluate_output(circ, shots=config.shots, seed=seed)
    return SweepRow(theta, res.omega, analytic, res.success_probability,
                    _halfwidth(res.omega, res.shots_kept))


def _subtraction_row(config: SweepConfig, theta: float, seed: int) -> SweepRow:
    # g swept as sin^2(theta), h fixed at 1/2; omega is the raw readout R1
    g, h = math.sin(theta) ** 2, 0.5
    circ = amparith.build_subtraction(g, h)
    analytic = (g + 1.0 - h) / 2.0
    if config.mode == "exact":
        r1 = amparith.read_subtraction(sim.run_circuit(circ)).r1
        return SweepRow(theta, r1, analytic, 1.0)
    p_hat, kept = _marginal_estimate(circ, amparith.SUB_T, config.shots, seed)
    return SweepRow(theta, p_hat, analytic, 1.0, _halfwidth(p_hat, kept))


def _composition_row(config: SweepConfig, theta: float, seed: int) -> SweepRow:
    # z (g - h) with g = sin^2(theta), h = 1/2, z = 1/2; omega is R2
    g, h, z = math.sin(theta) ** 2, 0.5, 0.5
    circ = amparith.build_composition(g, h, z)
    analytic = z * (g - h) / 4.0 + 0.5
    if config.mode == "exact":
        r2 = amparith.read_composition(sim.run_circuit(circ)).r2
        return SweepRow(theta, r2, analytic, 1.0)
    p_hat, kept = _marginal_estimate(circ, amparith.COMP_T2, config.shots, seed)
    return SweepRow(theta, p_hat, analytic, 1.0, _halfwidth(p_hat, kept))


def _fourier_row(config: SweepConfig, theta: float, seed: int,
                 series: fourier.CosSquaredSeries) -> SweepRow:
    circ = fourier.compile_series(series, theta)
    analytic = series.evaluate(theta)
    if config.mode == "exact":
        return SweepRow(theta, fourier.read_compiled(circ), analytic, 1.0)
    q = circ.metadata["readout_qubit"]
    p_hat, kept = _marginal_estimate(circ, q, config.shots, seed)
    omega = circ.metadata["slope"] * p_hat + circ.metadata["offset"]
    ci = abs(circ.metadata["slope"]) * _halfwidth(p_hat, kept)
    return SweepRow(theta, omega, analytic, 1.0, ci)


def sweep_rows(config: SweepConfig) -> list[SweepRow]:
    """Evaluate the configured builder on the theta grid, ordered by theta.

    Each grid point draws from its own seed (config.seed + index), so rows
    are reproducible independent of evaluation order.
    """
    grid = np.linspace(config.theta_min, config.theta_max, config.points)
    series = None
    if config.builder == "fourier":
        series = fourier.gearbox_series(config.depth_d, order=4)
    rows = []
    for i, theta in enumerate(grid):
        theta = float(theta)
        seed = config.seed + i
        if config.builder == "gearbox":
            rows.append(_gearbox_row(config, theta, seed))
        elif config.builder == "rescaled-plateau":
            rows.append(_plateau_row(config, theta, seed))
        elif config.builder == "relu":
            rows.append(_relu_row(config, theta, seed))
        elif config.builder == "subtraction":
            rows.append(_subtraction_row(config, theta, seed))
        elif config.builder == "composition":
            rows.append(_composition_row(config, theta, seed))
        else:
            rows.append(_fourier_row(config, theta, seed, series))
    return rows


def cmd_sweep(config: SweepConfig, out) -> int:
    lines = [CSV_HEADER]
    lines += [_row_text(row) for row in sweep_rows(config)]
    out.write("\n".join(lines) + "\n")
    return 0


def cmd_fourier(depth_d: int, order: int, out_path: str | None) -> int:
    """Compute series coefficients and emit them as JSON.

    The full payload is rendered before any file is opened, so an
    unwritable path leaves no partial output behind.
    """
    if depth_d < 1:
        raise UsageError("depth must be >= 1")
    if order < 0:
        raise UsageError("order must be >= 0")
    norm = fourier.normalization_constant(depth_d)
    raw = fourier.fourier_coefficients(
        lambda t: norm * fourier.inverse_success_probability(depth_d)(t),
        period=math.pi / 2.0, order=order)
    text = fourier.series_to_json(
        raw, fourier.to_cos_squared(raw), normalization=norm,
        normalization_note=f"target is 2^(-2^d + 1) / success_probability, d={depth_d}")
    if out_path is None:
        sys.stdout.write(text + "\n")
        return 0
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_validate(out=None) -> int:
    out = out or sys.stdout
    results = validation.run_all()
    failures = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        out.write(f"{status} {name}: {detail}\n")
    out.write(f"{len(results) - failures}/{len(results)} checks passed\n")
    return 0 if failures == 0 else 1


def _export_circuit(builder: str, depth_d: int, theta: float):
    if builder == "gearbox":
        return gearbox.build_gearbox(gearbox.GearboxSpec(depth_d, theta))
    if builder == "rescaled-plateau":
        return gearbox.build_rescaled_plateau(theta, math.pi / 4.0)
    if builder == "relu":
        return gearbox.build_relu(theta)
    if builder == "subtraction":
        return amparith.build_subtraction(math.sin(theta) ** 2, 0.5)
    if builder == "composition":
        return amparith.build_composition(math.sin(theta) ** 2, 0.5, 0.5)
    if builder == "fourier":
        series = fourier.gearbox_series(depth_d, order=4)
        return fourier.compile_series(series, theta)
    raise UsageError(f"unknown builder {builder!r}")


def cmd_export(builder: str | None, depth_d: int, theta: float | None,
               out_path: str | None) -> int:
    if builder is None or theta is None:
        raise UsageError("export needs --builder and --theta")
    text = circuits.export_qasm(_export_circuit(builder, depth_d, theta))
    if out_path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ampstep",
        description="Gearbox step-function circuits: sweeps, Fourier "
                    "coefficients, validation, and QASM export.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="evaluate a builder over a theta grid")
    sweep.add_argument("--builder", choices=BUILDERS, required=True)
    sweep.add_argument("--depth", type=int, default=2)
    sweep.add_argument("--theta-min", type=float, default=0.0)
    sweep.add_argument("--theta-max", type=float, default=math.pi / 2.0)
    sweep.add_argument("--points", type=int, default=50)
    sweep.add_argument("--mode", choices=("exact", "shots"), default="exact")
    sweep.add_argument("--shots", type=int, default=100_000)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--degrees", action="store_true",
                       help="interpret the theta flags as degrees")

    fser = sub.add_parser("fourier", help="series coefficients as JSON")
    fser.add_argument("--depth", type=int, default=2)
    fser.add_argument("--order", type=int, default=4)
    fser.add_argument("--out", default=None)

    sub.add_parser("validate", help="run the full oracle suite")

    exp = sub.add_parser("export", help="emit a builder circuit as OpenQASM 2.0")
    exp.add_argument("--builder", choices=BUILDERS, default=None)
    exp.add_argument("--depth", type=int, default=2)
    exp.add_argument("--theta", type=float, default=None)
    exp.add_argument("--out", default=None)
    exp.add_argument("--degrees", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            scale = math.pi / 180.0 if args.degrees else 1.0
            config = SweepConfig(
                builder=args.builder, depth_d=args.depth,
                theta_min=args.theta_min * scale,
                theta_max=args.theta_max * scale,
                points=args.points, mode=args.mode,
                shots=args.shots, seed=args.seed)
            if args.out is None:
                return cmd_sweep(config, sys.stdout)
            try:
                with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                    return cmd_sweep(config, fh)
            except OSError as exc:
                print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
                return 2
        if args.command == "fourier":
            return cmd_fourier(args.depth, args.order, args.out)
        if args.command == "validate":
            return cmd_validate()
        if args.command == "export":
            theta = args.theta
            if theta is not None and args.degrees:
                theta *= math.pi / 180.0
            return cmd_export(args.builder, args.depth, theta, args.out)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
