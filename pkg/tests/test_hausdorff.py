from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentkit import (
    DensitySpec,
    MomentSequence,
    abs_cont_test,
    add_sequences,
    cr_test,
    derivative_seq,
    hausdorff_sum,
    moments_from_density,
    positivity_test,
    signed_hausdorff_test,
    verify_mirror_decomposition,
)
from helpers import delta_seq, uniform_seq

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)
seqs = st.lists(rationals, min_size=9, max_size=9).map(
    lambda vs: MomentSequence.from_values(vs))


class TestBinomialSums:
    def test_uniform_is_exactly_one(self):
        s = uniform_seq(40)
        for d in range(41):
            assert hausdorff_sum(s, (d,)) == Fraction(1)

    def test_point_mass_inside_the_interval(self):
        # |L(x^k (1-x)^(d-k))| summed against binomials telescopes to 1
        s = delta_seq(Fraction(1, 3), 30)
        assert hausdorff_sum(s, (17,)) == Fraction(1)

    def test_point_mass_outside_grows(self):
        s = delta_seq(Fraction(2), 30)
        assert hausdorff_sum(s, (10,)) == Fraction(3) ** 10

    @given(seqs, rationals)
    @settings(max_examples=40, deadline=None)
    def test_scaling_equivariance(self, s, c):
        assert hausdorff_sum(s.scaled(c), (8,)) == abs(c) * hausdorff_sum(s, (8,))

    @given(seqs, seqs)
    @settings(max_examples=40, deadline=None)
    def test_triangle_inequality(self, s, t):
        lhs = hausdorff_sum(add_sequences(s, t), (8,))
        assert lhs <= hausdorff_sum(s, (8,)) + hausdorff_sum(t, (8,))


class TestClassification:
    def test_uniform_bounded(self):
        rep = signed_hausdorff_test(uniform_seq(40), 40)
        assert rep.classification == "bounded"
        assert rep.sup == pytest.approx(1.0)

    def test_all_zero_sequence_is_bounded(self):
        z = MomentSequence.from_values([0.0] * 20)
        assert signed_hausdorff_test(z, 16).classification == "bounded"

    def test_geometric_blowup_is_growing(self):
        rep = signed_hausdorff_test(delta_seq(Fraction(2), 40), 32)
        assert rep.classification == "growing"

    def test_float_cancellation_is_inconclusive(self):
        # alternating signs make the binomial sums catastrophically ill
        s = MomentSequence.from_values([3.0 ** k for k in range(65)])
        rep = signed_hausdorff_test(s, 64)
        assert rep.condition > 1e8
        assert rep.classification == "inconclusive"

    def test_exact_path_reports_unit_condition(self):
        rep = signed_hausdorff_test(uniform_seq(20), 20)
        assert rep.condition == 1.0


class TestLadders:
    def test_uniform_density_exists(self):
        base, der = abs_cont_test(uniform_seq(41), 40)
        assert base.classification == "bounded"
        assert der.classification == "bounded"
        assert sorted(set(der.sums.values())) == [0, 2]

    def test_point_mass_has_no_density(self):
        base, der = abs_cont_test(delta_seq(Fraction(1, 2), 90), 64)
        assert base.classification == "bounded"
        assert der.classification == "growing"
        # frozen profile of the derivative ladder
        assert float(der.sums[16]) == pytest.approx(6.2841796875)
        assert float(der.sums[64]) == pytest.approx(12.716384479739762)
        assert 0.3 <= der.growth_fit[0] <= 0.7

    def test_smooth_bump_is_c1(self, bump_seq):
        verdict = cr_test(bump_seq, 1, 40)
        assert verdict.positive
        base, der = verdict
        assert base.classification == "bounded" and der.classification == "bounded"

    def test_indicator_is_not_c0(self):
        verdict = cr_test(uniform_seq(70), 0, 64)
        assert not verdict.positive

    def test_indicator_second_derivative_sums_exactly_4d(self):
        dd = derivative_seq(uniform_seq(70), (2,))
        for d in (4, 16, 64):
            assert hausdorff_sum(dd, (d,)) == 4 * d


class TestPositivity:
    def test_uniform_passes(self):
        ok, violation = positivity_test(uniform_seq(20), 8, 8)
        assert ok and violation is None

    def test_signed_functional_flags_first_violation(self):
        bad = MomentSequence.from_values([0.0, 1.0, 0.0])
        ok, violation = positivity_test(bad, 1, 1)
        assert not ok
        assert violation[0] == (0, 1)
        assert violation[1] == pytest.approx(-1.0)


@pytest.fixture(scope="module")
def hats():
    deg = 44
    return {name: moments_from_density(DensitySpec.named(name), deg, exact=True)
            for name in ("hat", "hat-right", "hat-left")}


class TestMirrorDecomposition:
    def test_continuous_split_verifies(self, hats):
        v = verify_mirror_decomposition(
            {(1,): hats["hat-right"], (-1,): hats["hat-left"]}, hats["hat"], 0, 40)
        assert v.positive and v.sum_defect == 0.0

    def test_discontinuous_split_fails(self, hats):
        ramp_p = moments_from_density(DensitySpec.piecewise_polynomial(
            [(0, Fraction(1, 2), (Fraction(1, 2), -1))]), 44, exact=True)
        ramp_m = moments_from_density(DensitySpec.piecewise_polynomial(
            [(Fraction(-1, 2), 0, (Fraction(1, 2), 1))]), 44, exact=True)
        v = verify_mirror_decomposition(
            {(1,): ramp_p, (-1,): ramp_m}, hats["hat"], 0, 40)
        assert not v.positive
        assert v.sum_defect == 0.0  # the sum matches; the pieces are just not C^0

    def test_wrong_sum_reports_defect(self, hats):
        v = verify_mirror_decomposition(
            {(1,): hats["hat-right"], (-1,): hats["hat-right"]}, hats["hat"], 0, 40)
        assert v.sum_defect > 1e-3 and not v.positive

    def test_one_sided_component(self, hats):
        zero = MomentSequence.from_function(lambda a: Fraction(0), 1, 44, exact=True)
        v = verify_mirror_decomposition(
            {(1,): zero, (-1,): hats["hat-left"]}, hats["hat-left"], 0, 40)
        assert v.positive
