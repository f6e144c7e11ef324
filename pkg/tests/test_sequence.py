from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentkit import (
    DegenerateScale,
    DegreeExceeded,
    DimensionMismatch,
    MomentSequence,
    Polynomial,
    add_sequences,
    affine_pushforward,
    derivative_seq,
    mirror_seq,
    riesz_eval,
)
from helpers import delta_seq, uniform_seq

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def rational_seqs(deg=6):
    return st.lists(rationals, min_size=deg + 1, max_size=deg + 1).map(
        lambda vs: MomentSequence.from_values(vs))


class TestConstruction:
    def test_list_is_indexed_by_degree(self):
        s = MomentSequence.from_values([1.0, 0.5, 0.25])
        assert s.max_degree == 2 and s[(1,)] == 0.5

    def test_list_requires_one_dimension(self):
        with pytest.raises(DimensionMismatch):
            MomentSequence.from_values([1.0], dimension=2)

    def test_missing_entries_default_to_zero(self):
        s = MomentSequence.from_values({(2,): Fraction(1)}, max_degree=4)
        assert s[(0,)] == 0 and s[(3,)] == 0 and s.exact

    def test_entry_beyond_degree_rejected(self):
        with pytest.raises(DegreeExceeded):
            MomentSequence.from_values({(3,): 1.0}, max_degree=2)

    def test_lookup_validates_degree_and_dimension(self):
        s = uniform_seq(4)
        with pytest.raises(DegreeExceeded):
            s[(5,)]
        with pytest.raises(DimensionMismatch):
            s[(1, 1)]

    def test_fingerprint_distinguishes_content(self):
        assert uniform_seq(6).fingerprint != delta_seq(Fraction(1, 2), 6).fingerprint
        assert uniform_seq(6).fingerprint == uniform_seq(6).fingerprint


class TestRiesz:
    def test_monomials_read_entries(self):
        s = uniform_seq(8)
        assert riesz_eval(s, Polynomial.monomial(3)) == Fraction(1, 4)

    def test_exact_path_stays_rational(self):
        s = uniform_seq(4)
        p = Polynomial.from_univariate([Fraction(1), Fraction(-2)])
        v = riesz_eval(s, p)
        assert isinstance(v, Fraction) and v == 0

    def test_degree_guard(self):
        with pytest.raises(DegreeExceeded):
            riesz_eval(uniform_seq(2), Polynomial.monomial(3))

    @given(rational_seqs(), rational_seqs(), rationals, rationals)
    @settings(max_examples=40, deadline=None)
    def test_linearity(self, s, t, a, b):
        p = Polynomial.from_univariate([1, 2, 3, 0, 1])
        combined = add_sequences(s.scaled(a), t.scaled(b))
        assert riesz_eval(combined, p) == a * riesz_eval(s, p) + b * riesz_eval(t, p)


class TestDerivative:
    def test_coordinatewise_formula(self):
        s = uniform_seq(6)
        d = derivative_seq(s, (1,))
        # (ds)_k = -k * s_{k-1}
        assert d[(0,)] == 0
        assert d[(3,)] == -3 * Fraction(1, 3)

    def test_multi_order_composes(self):
        s = uniform_seq(8)
        assert derivative_seq(derivative_seq(s, (1,)), (1,)).values == \
            derivative_seq(s, (2,)).values

    def test_zero_order_is_identity(self):
        s = uniform_seq(5)
        assert derivative_seq(s, (0,)).values == s.values

    def test_order_beyond_degree_rejected(self):
        with pytest.raises(DegreeExceeded):
            derivative_seq(uniform_seq(2), (3,))

    @given(rational_seqs())
    @settings(max_examples=30, deadline=None)
    def test_leibniz_on_point_mass_shifts(self, s):
        # derivative against x^k equals -k s_{k-1} for every k
        d = derivative_seq(s, (1,))
        for k in range(1, s.max_degree + 1):
            assert d[(k,)] == -k * s[(k - 1,)]


class TestPushforward:
    def test_point_mass_moves_to_image_point(self):
        s = delta_seq(Fraction(1, 3), 8)
        t = affine_pushforward(s, Fraction(1, 2), Fraction(2))
        # image point is 1/2 + 2/3 = 7/6
        want = delta_seq(Fraction(7, 6), 8)
        assert t.values == want.values

    def test_mass_is_preserved(self):
        s = uniform_seq(6)
        t = affine_pushforward(s, Fraction(-5), Fraction(3))
        assert t[(0,)] == s[(0,)]

    def test_zero_scale_rejected(self):
        with pytest.raises(DegenerateScale):
            affine_pushforward(uniform_seq(3), 0, 0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(DimensionMismatch):
            affine_pushforward(uniform_seq(3), (0, 0), (1, 1))

    @given(rational_seqs(), rationals, rationals.filter(lambda b: b != 0))
    @settings(max_examples=30, deadline=None)
    def test_inverse_map_roundtrips(self, s, a, b):
        t = affine_pushforward(s, a, b)
        back = affine_pushforward(t, -a / b, 1 / b)
        assert back.values == s.values


class TestMirror:
    def test_flips_odd_entries(self):
        s = uniform_seq(5)
        m = mirror_seq(s, (-1,))
        assert m[(2,)] == s[(2,)] and m[(3,)] == -s[(3,)]

    def test_identity_sign_vector(self):
        s = uniform_seq(5)
        assert mirror_seq(s, (1,)).values == s.values

    def test_bad_sign_rejected(self):
        with pytest.raises(ValueError):
            mirror_seq(uniform_seq(3), (2,))

    @given(rational_seqs())
    @settings(max_examples=30, deadline=None)
    def test_involution(self, s):
        assert mirror_seq(mirror_seq(s, (-1,)), (-1,)).values == s.values

    @given(rational_seqs())
    @settings(max_examples=30, deadline=None)
    def test_matches_negated_scale_pushforward(self, s):
        assert mirror_seq(s, (-1,)).values == affine_pushforward(s, 0, -1).values


class TestAlgebra:
    def test_add_requires_same_shape(self):
        with pytest.raises(DegreeExceeded):
            add_sequences(uniform_seq(3), uniform_seq(4))

    def test_scaled_float_drops_exactness(self):
        s = uniform_seq(3).scaled(0.5)
        assert not s.exact and s[(0,)] == 0.5

    def test_as_floating_projects_values(self):
        f = uniform_seq(3).as_floating()
        assert not f.exact and f[(2,)] == pytest.approx(1 / 3)

    def test_restricted_cannot_extend(self):
        s = uniform_seq(5)
        assert s.restricted(3).max_degree == 3
        with pytest.raises(DegreeExceeded):
            s.restricted(9)
