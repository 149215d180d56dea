import math

import numpy as np
import pytest

from ampstep import fourier
from ampstep.fourier import CosSquaredSeries, FourierSeries, NormalizationError


class TestCoefficients:
    def test_pure_cosine_recovered(self):
        series = fourier.fourier_coefficients(
            lambda x: 0.3 + 0.5 * np.cos(2.0 * x), period=math.pi, order=2)
        assert series.a0 == pytest.approx(0.6, abs=1e-12)
        assert series.a[0] == pytest.approx(0.5, abs=1e-12)
        assert series.a[1] == pytest.approx(0.0, abs=1e-12)
        assert series.b[0] == pytest.approx(0.0, abs=1e-12)

    def test_pure_sine_recovered(self):
        series = fourier.fourier_coefficients(
            lambda x: np.sin(x), period=2.0 * math.pi, order=1)
        assert series.b[0] == pytest.approx(1.0, abs=1e-12)

    def test_order_zero_is_the_mean(self):
        norm = fourier.normalization_constant(1)
        target = fourier.inverse_success_probability(1)
        series = fourier.fourier_coefficients(
            lambda t: norm * target(t), period=math.pi / 2, order=0)
        x = (np.arange(1 << 16) + 0.5) * (math.pi / 2 / (1 << 16))
        assert series.a0 / 2.0 == pytest.approx(
            float(np.mean(norm * target(x))), abs=1e-12)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            fourier.fourier_coefficients(np.cos, period=-1.0, order=1)
        with pytest.raises(ValueError):
            fourier.fourier_coefficients(np.cos, period=1.0, order=-1)


class TestCosSquaredRewrite:
    def test_pointwise_identity(self):
        rng = np.random.default_rng(31)
        for _ in range(4):
            series = FourierSeries(
                period=float(rng.uniform(0.5, 3.0)),
                a0=float(rng.uniform(-1, 1)),
                a=tuple(rng.uniform(-1, 1, 3)),
                b=tuple(rng.uniform(-1, 1, 3)))
            grid = np.linspace(0.0, series.period, 500)
            cs = fourier.to_cos_squared(series)
            assert np.max(np.abs(cs.evaluate(grid) - series.evaluate(grid))) < 1e-12

    def test_coefficient_map(self):
        series = FourierSeries(period=1.0, a0=0.8, a=(0.2,), b=(-0.1,))
        cs = fourier.to_cos_squared(series)
        assert cs.a_prime == (0.4,)
        assert cs.b_prime == (-0.2,)
        assert cs.a0_prime == pytest.approx(0.8 / 2 - 0.2 + 0.1)


class TestGearboxSeries:
    def test_leading_terms_d2(self):
        cs = fourier.gearbox_series(2, 4)
        got = (cs.a0_prime, *cs.a_prime)
        want = (0.598, -0.7, 0.314, -0.14, 0.062)
        for g, w in zip(got, want):
            assert g == pytest.approx(w, abs=0.005)

    def test_even_target_has_no_sine_terms(self):
        cs = fourier.gearbox_series(2, 4)
        assert max(abs(b) for b in cs.b_prime) < 1e-12

    def test_sanity_values(self):
        cs = fourier.gearbox_series(2, 4)
        assert cs.evaluate(math.pi / 4) == pytest.approx(0.974, abs=0.005)
        assert cs.evaluate(0.0) == pytest.approx(0.134, abs=0.005)

    def test_normalization_constants(self):
        assert fourier.normalization_constant(1) == 0.5
        assert fourier.normalization_constant(2) == 0.125
        assert fourier.normalization_constant(3) == 2.0 ** -7
        with pytest.raises(ValueError):
            fourier.normalization_constant(0)

    def test_normalized_target_in_unit_interval(self):
        cs = fourier.gearbox_series(2, 4)
        grid = np.linspace(0.0, math.pi / 2, 400)
        vals = cs.evaluate(grid)
        assert float(np.min(vals)) > 0.0
        assert float(np.max(vals)) < 1.0


class TestCompile:
    def test_readback_matches_series(self):
        cs = fourier.gearbox_series(2, 4)
        for x in np.linspace(0.0, math.pi / 2, 11):
            got = fourier.read_compiled(fourier.compile_series(cs, float(x)))
            assert got == pytest.approx(cs.evaluate(float(x)), abs=1e-10)

    def test_term_cap_enforced(self):
        cs = CosSquaredSeries(a0_prime=0.1, a_prime=(0.1,) * 5,
                              b_prime=(0.1,) * 5, period=1.0)
        with pytest.raises(NormalizationError):
            fourier.compile_series(cs, 0.3, max_terms=4)

    def test_unnormalized_term_rejected(self):
        cs = CosSquaredSeries(a0_prime=1.8, a_prime=(), b_prime=(), period=1.0)
        with pytest.raises(NormalizationError):
            fourier.compile_series(cs, 0.0)

    def test_metadata_affine_map(self):
        cs = fourier.gearbox_series(2, 2)
        circ = fourier.compile_series(cs, 0.9)
        assert {"readout_qubit", "slope", "offset"} <= set(circ.metadata)


class TestSplit:
    def test_parts_nonnegative(self):
        split = fourier.split_series(fourier.gearbox_series(2, 4))
        for part in (split.positive, split.negative):
            assert part.a0_prime >= 0.0
            assert all(c >= 0.0 for c in part.a_prime)
            assert all(c >= 0.0 for c in part.b_prime)

    def test_recombination(self):
        cs = fourier.gearbox_series(2, 4)
        split = fourier.split_series(cs)
        grid = np.linspace(0.0, math.pi / 2, 200)
        dev = np.max(np.abs(split.positive.evaluate(grid)
                            - split.negative.evaluate(grid) - cs.evaluate(grid)))
        assert float(dev) < 1e-12

    def test_weighted_difference(self):
        cs = fourier.gearbox_series(2, 4)
        split = fourier.split_series(cs)
        rng = np.random.default_rng(32)
        for _ in range(4):
            z = float(rng.uniform(0.0, 1.0))
            x = float(rng.uniform(0.0, math.pi / 2))
            got = fourier.weighted_difference(split, z, x)
            assert got == pytest.approx(z * cs.evaluate(x), abs=1e-10)


class TestJson:
    def test_round_trip(self):
        raw = FourierSeries(period=math.pi / 2, a0=0.7, a=(0.1, -0.2), b=(0.0, 0.3))
        cs = fourier.to_cos_squared(raw)
        text = fourier.series_to_json(raw, cs, normalization=0.125,
                                      normalization_note="test")
        back_raw, back_cs = fourier.series_from_json(text)
        assert back_raw == raw
        assert back_cs == cs
