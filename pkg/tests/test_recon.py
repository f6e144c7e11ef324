import math
from fractions import Fraction

import pytest

from momentkit import (
    DimensionMismatch,
    MomentSequence,
    OscillationUnderresolved,
    gaussian_test_mass,
    levy_interval_mass,
    nonnegativity_check,
    reconstruct_density,
)
from helpers import cos_seq, delta_seq, gauss_seq, quartic_seq, uniform_seq


def grid(start, stop, step):
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


class TestReconstruct:
    def test_gaussian_profile(self):
        s = gauss_seq(80)
        xs = grid(-4.0, 4.0, 0.1)
        r = reconstruct_density(s, xs, R=3.0, tol=1e-4)
        target = [math.exp(-x * x / 4) / (2 * math.sqrt(math.pi)) for x in xs]
        worst = max(abs(a - b) for a, b in zip(r.values, target))
        assert worst <= 1e-3
        assert r.max_imag_residue <= 1e-10
        assert nonnegativity_check(r, 5e-3).nonnegative

    def test_windowed_indicator_with_fejer_damping(self):
        s = uniform_seq(140)
        r = reconstruct_density(s, [0.5, 2.0, -0.25, 0.25], R=40.0,
                                tol=1e-6, damping="fejer")
        for got, want in zip(r.values, (0.966800, 0.004182, 0.024343, 0.959069)):
            assert got == pytest.approx(want, abs=2e-3)
        assert r.damping == "fejer"

    def test_quartic_goes_negative(self):
        s = quartic_seq(1300)
        xs = grid(-6.0, 6.0, 0.2)
        r = reconstruct_density(s, xs, R=3.0, tol=1e-9)
        verdict = nonnegativity_check(r, 5e-3)
        assert not verdict.nonnegative
        assert abs(abs(verdict.argmin) - 4.6) <= 0.2
        assert verdict.min_value == pytest.approx(-0.0298053470, abs=2e-5)

    def test_single_point_grid(self):
        r = reconstruct_density(gauss_seq(80), [0.0], R=3.0, tol=1e-4)
        assert r.values[0] == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-3)

    def test_node_budget_guard(self):
        with pytest.raises(OscillationUnderresolved):
            reconstruct_density(gauss_seq(80), grid(-50.0, 50.0, 0.1), R=3.0,
                                tol=1e-4, node_budget=100)

    def test_result_dict_shape(self):
        r = reconstruct_density(gauss_seq(80), [0.0, 1.0], R=3.0, tol=1e-4)
        doc = r.as_dict()
        assert doc["R"] == 3.0 and len(doc["values"]) == 2
        assert doc["points_per_unit"] >= 8


class TestLevy:
    def test_point_mass_short_window(self):
        # Dirichlet-integral tail at T=10, frozen by an independent Si oracle
        m = levy_interval_mass(delta_seq(Fraction(1), 60), 0.5, 1.5, 10.0)
        assert m["mass"] == pytest.approx(0.9867168763450809, abs=1e-9)

    def test_empty_interval_short_window(self):
        m = levy_interval_mass(delta_seq(Fraction(1), 60), 2.0, 3.0, 10.0)
        assert abs(m["mass"]) < 0.1

    def test_interval_must_be_ordered(self):
        with pytest.raises(ValueError):
            levy_interval_mass(delta_seq(Fraction(1), 20), 2.0, 1.0, 10.0)

    def test_window_must_be_positive(self):
        with pytest.raises(ValueError):
            levy_interval_mass(delta_seq(Fraction(1), 20), 0.0, 1.0, -5.0)

    def test_one_dimensional_only(self):
        s = MomentSequence.from_values({(0, 0): 1.0}, dimension=2, max_degree=2)
        with pytest.raises(DimensionMismatch):
            levy_interval_mass(s, 0.0, 1.0, 10.0)

    def test_symmetric_pair_splits_mass(self):
        # cos z is the transform of (delta_1 + delta_-1)/2
        m = levy_interval_mass(cos_seq(60), 0.5, 1.5, 10.0)
        assert m["mass"] == pytest.approx(0.5, abs=0.03)


class TestGaussianMass:
    def test_center_value(self):
        m = gaussian_test_mass(delta_seq(Fraction(1), 60), 1.0, 0.5, 12.0)
        assert m["mass"] == pytest.approx(1 / (0.5 * math.sqrt(2 * math.pi)), abs=1e-6)

    def test_off_center_decay(self):
        m = gaussian_test_mass(delta_seq(Fraction(1), 60), 3.0, 0.5, 12.0)
        want = math.exp(-0.5 * 4 / 0.25) / (0.5 * math.sqrt(2 * math.pi))
        assert m["mass"] == pytest.approx(want, abs=1e-6)

    def test_mass_integrates_the_whole_line(self):
        # sigma large enough that the test function is ~flat over the support
        m = gaussian_test_mass(uniform_seq(60), 0.5, 8.0, 2.0)
        want = 1 / (8.0 * math.sqrt(2 * math.pi))
        assert m["mass"] == pytest.approx(want, rel=1e-2)

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            gaussian_test_mass(delta_seq(Fraction(1), 20), 0.0, -1.0, 4.0)
