"""Shared fixture builders: closed-form moment sequences used across tests."""

from fractions import Fraction
from math import factorial

from momentkit import MomentSequence


def uniform_seq(deg: int) -> MomentSequence:
    """Uniform density on [0,1]: s_k = 1/(k+1)."""
    return MomentSequence.from_function(lambda a: Fraction(1, a[0] + 1), 1, deg, exact=True)


def delta_seq(point: Fraction, deg: int) -> MomentSequence:
    """Unit mass at a rational point: s_k = point^k."""
    return MomentSequence.from_function(lambda a: Fraction(point) ** a[0], 1, deg, exact=True)


def gauss_seq(deg: int) -> MomentSequence:
    """s_{2k} = (2k)!/k!, odd entries zero; characteristic series e^{-z^2}."""
    def fn(a):
        k = a[0]
        if k % 2:
            return Fraction(0)
        return Fraction(factorial(k), factorial(k // 2))
    return MomentSequence.from_function(fn, 1, deg, exact=True)


def quartic_seq(deg: int) -> MomentSequence:
    """s_{4k} = (-1)^k (4k)!/k!, else zero; characteristic series e^{-z^4}."""
    def fn(a):
        k, r = divmod(a[0], 4)
        if r:
            return Fraction(0)
        return Fraction((-1) ** k * factorial(4 * k), factorial(k))
    return MomentSequence.from_function(fn, 1, deg, exact=True)


def cos_seq(deg: int) -> MomentSequence:
    """s_k = 1 for even k, 0 for odd; characteristic series cos z."""
    return MomentSequence.from_function(
        lambda a: Fraction(1) if a[0] % 2 == 0 else Fraction(0), 1, deg, exact=True)
