import io
import json
import math
import re

import numpy as np
import pytest

from ampstep import cli, circuits, gearbox, sim, validation
from ampstep.circuits import Circuit
from ampstep.cli import SweepConfig, UsageError

# Reverse map from qelib1 names; a deliberately tiny parser used only to
# check export round-trips (QASM import is not a package feature).
_KINDS = {"x": "X", "h": "H", "sx": "SqrtX", "ry": "Ry", "rz": "Rz",
          "cx": "CX", "cry": "CRy", "ccx": "Toffoli"}
_GATE_RE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.*);$")


def parse_qasm(text: str) -> Circuit:
    lines = text.splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert lines[1] == 'include "qelib1.inc";'
    n = int(re.fullmatch(r"qreg q\[(\d+)\];", lines[2]).group(1))
    circ = Circuit(n)
    for line in lines[3:]:
        if not line or line.startswith(("creg", "measure")):
            continue
        m = _GATE_RE.match(line)
        name, angle, args = m.group(1), m.group(2), m.group(3)
        qubits = [int(q) for q in re.findall(r"q\[(\d+)\]", args)]
        circ.add(_KINDS[name], *qubits,
                 angle=float(angle) if angle is not None else None)
    return circ


class TestSweepConfig:
    def test_defaults(self):
        config = SweepConfig(builder="gearbox")
        assert config.shots == 100_000
        assert config.mode == "exact"

    def test_validation(self):
        with pytest.raises(UsageError):
            SweepConfig(builder="nope")
        with pytest.raises(UsageError):
            SweepConfig(builder="gearbox", points=1)
        with pytest.raises(UsageError):
            SweepConfig(builder="gearbox", theta_min=1.0, theta_max=0.5)
        with pytest.raises(UsageError):
            SweepConfig(builder="gearbox", mode="shots", shots=0)


class TestSweep:
    def _run(self, config):
        buf = io.StringIO()
        assert cli.cmd_sweep(config, buf) == 0
        return buf.getvalue()

    def test_header_and_shape(self):
        text = self._run(SweepConfig(builder="gearbox", points=5))
        lines = text.splitlines()
        assert lines[0] == cli.CSV_HEADER
        assert len(lines) == 6
        assert text.endswith("\n")
        assert "\r" not in text

    def test_threshold_row(self):
        config = SweepConfig(builder="gearbox", depth_d=2,
                             theta_min=math.pi / 4, theta_max=math.pi / 4 + 1e-9,
                             points=2)
        first = self._run(config).splitlines()[1].split(",")
        assert float(first[1]) == pytest.approx(0.5, abs=1e-9)
        assert float(first[2]) == pytest.approx(0.5, abs=1e-9)

    def test_exact_omega_matches_analytic(self):
        for builder in cli.BUILDERS:
            text = self._run(SweepConfig(builder=builder, points=7,
                                         theta_max=math.pi / 2 - 0.01))
            for line in text.splitlines()[1:]:
                _, omega, analytic, _, ci = line.split(",")
                assert float(omega) == pytest.approx(float(analytic), abs=1e-10)
                assert ci == ""

    def test_byte_identical_for_fixed_seed(self):
        config = SweepConfig(builder="gearbox", depth_d=1, points=4,
                             mode="shots", shots=2000, seed=11)
        assert self._run(config) == self._run(config)

    def test_shots_within_halfwidth(self):
        config = SweepConfig(builder="gearbox", depth_d=1, points=6,
                             theta_min=0.2, theta_max=1.3,
                             mode="shots", shots=20_000, seed=4)
        for line in self._run(config).splitlines()[1:]:
            _, omega, analytic, _, ci = line.split(",")
            assert abs(float(omega) - float(analytic)) <= float(ci) + 1e-12

    def test_main_writes_file(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = cli.main(["sweep", "--builder", "gearbox", "--points", "3",
                       "--out", str(out)])
        assert rc == 0
        assert out.read_text().startswith(cli.CSV_HEADER)

    def test_degrees_flag(self, capsys):
        rc = cli.main(["sweep", "--builder", "gearbox", "--depth", "2",
                       "--points", "2", "--degrees",
                       "--theta-min", "45", "--theta-max", "45.0000001"])
        assert rc == 0
        first = capsys.readouterr().out.splitlines()[1].split(",")
        assert float(first[1]) == pytest.approx(0.5, abs=1e-6)

    def test_bad_range_exits_2(self, capsys):
        rc = cli.main(["sweep", "--builder", "gearbox",
                       "--theta-min", "1.0", "--theta-max", "0.1"])
        assert rc == 2


class TestFourierCommand:
    def test_json_payload(self, tmp_path):
        out = tmp_path / "series.json"
        assert cli.main(["fourier", "--depth", "2", "--order", "4",
                         "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        leading = [payload["cos_squared"]["a0_prime"],
                   *payload["cos_squared"]["a_prime"]]
        want = (0.598, -0.7, 0.314, -0.14, 0.062)
        for g, w in zip(leading, want):
            assert g == pytest.approx(w, abs=0.005)
        assert payload["normalization"]["constant"] == 0.125

    def test_unwritable_path_no_partial_file(self, tmp_path, capsys):
        target = tmp_path / "missing-dir" / "series.json"
        assert cli.main(["fourier", "--out", str(target)]) == 2
        assert not target.exists()

    def test_order_zero_constant_series(self, capsys):
        assert cli.main(["fourier", "--depth", "1", "--order", "0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        norm = 0.5
        x = (np.arange(1 << 16) + 0.5) * (math.pi / 2 / (1 << 16))
        p = 4
        mean = float(np.mean(norm / (np.sin(x) ** p + np.cos(x) ** p)))
        assert payload["fourier"]["a0"] / 2.0 == pytest.approx(mean, abs=1e-10)
        assert payload["fourier"]["a"] == []


class TestValidateCommand:
    def test_suite_size_floor(self):
        assert len(validation.CHECKS) >= 20

    def test_report_format(self, capsys):
        rc = cli.main(["validate"])
        out = capsys.readouterr().out
        assert rc == 0
        lines = out.splitlines()
        assert all(ln.startswith("PASS ") for ln in lines[:-1])
        assert lines[-1].endswith("checks passed")

    def test_mutated_angle_convention_detected(self):
        ok, _ = validation.check_single_step_matrix(angle_scale=2.0)
        assert not ok

    def test_failure_sets_exit_1(self, monkeypatch, capsys):
        monkeypatch.setattr(validation, "run_all",
                            lambda: [("stub", False, "forced failure")])
        assert cli.cmd_validate() == 1
        assert "FAIL stub" in capsys.readouterr().out


class TestExportCommand:
    def test_gearbox_d1_three_gates(self, capsys):
        assert cli.main(["export", "--builder", "gearbox", "--depth", "1",
                         "--theta", "0.7"]) == 0
        circ = parse_qasm(capsys.readouterr().out)
        assert circ.n_qubits == 2
        assert len(circ.gates) == 3

    def test_subtraction_multiset(self, capsys):
        assert cli.main(["export", "--builder", "subtraction",
                         "--theta", "0.9"]) == 0
        circ = parse_qasm(capsys.readouterr().out)
        assert circ.gate_census() == {"H": 1, "CRy": 2, "CX": 2, "X": 2}

    def test_round_trip_preserves_order_and_state(self, capsys):
        for args in (["--builder", "gearbox", "--depth", "2", "--theta", "0.8"],
                     ["--builder", "composition", "--theta", "0.6"],
                     ["--builder", "relu", "--theta", "1.0"]):
            assert cli.main(["export", *args]) == 0
            text = capsys.readouterr().out
            original = cli._export_circuit(
                args[1], int(args[3]) if args[2] == "--depth" else 2,
                float(args[-1]))
            parsed = parse_qasm(text)
            assert [g.kind for g in parsed.gates] == \
                   [g.kind for g in original.gates]
            dev = np.max(np.abs(sim.run_circuit(parsed).amplitudes
                                - sim.run_circuit(original).amplitudes))
            assert float(dev) < 1e-12

    def test_empty_params_usage_error(self, capsys):
        assert cli.main(["export"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_file_output(self, tmp_path):
        out = tmp_path / "circ.qasm"
        assert cli.main(["export", "--builder", "gearbox", "--depth", "1",
                         "--theta", "0.3", "--out", str(out)]) == 0
        assert out.read_text().startswith("OPENQASM 2.0;")
