"""Truncated moment sequences and the exact linear operations on them.

A :class:`MomentSequence` stores one value per multi-index of total degree at
most ``max_degree``.  Values are either all exact rationals (``exact=True``,
stored as :class:`fractions.Fraction`) or floating (possibly complex).  The
exact path exists because the downstream binomial sums cancel catastrophically
in floating point; every operation here preserves exactness when its inputs
are exact.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Mapping, Sequence

from .errors import DegenerateScale, DegreeExceeded, DimensionMismatch, NonRealSequence
from .multiindex import MultiIndex, as_multi_index, indices_up_to, sub_indices, total_degree
from .polynomial import Polynomial
from .summation import ComplexNeumaierSum

IMAG_TOLERANCE = 1e-12


def _coerce_exact(value):
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"exact sequences need rational values, got {value!r}")


@dataclass(frozen=True)
class MomentSequence:
    """All moments s_alpha, |alpha| <= max_degree, of an implicit functional."""

    dimension: int
    max_degree: int
    values: Mapping[MultiIndex, Fraction | float | complex]
    exact: bool

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch(f"dimension must be >= 1, got {self.dimension}")
        if self.max_degree < 0:
            raise DegreeExceeded(f"max_degree must be >= 0, got {self.max_degree}")
        vals = {}
        for alpha, v in self.values.items():
            idx = as_multi_index(alpha, self.dimension)
            if total_degree(idx) > self.max_degree:
                raise DegreeExceeded(f"entry {idx} exceeds max_degree {self.max_degree}")
            vals[idx] = _coerce_exact(v) if self.exact else v
        # every admissible index gets exactly one value; unspecified ones are 0
        zero = Fraction(0) if self.exact else 0.0
        for idx in indices_up_to(self.dimension, self.max_degree):
            vals.setdefault(idx, zero)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_values(cls, values, dimension: int = 1, max_degree: int | None = None,
                    exact: bool | None = None) -> "MomentSequence":
        """Build from a mapping alpha -> value, or (1-d) a list indexed by degree."""
        if not hasattr(values, "items"):
            if dimension != 1:
                raise DimensionMismatch("positional moment lists are one-dimensional")
            values = {(k,): v for k, v in enumerate(values)}
        vals = {as_multi_index(a, dimension): v for a, v in values.items()}
        if max_degree is None:
            max_degree = max((total_degree(a) for a in vals), default=0)
        if exact is None:
            exact = all(isinstance(v, Rational) for v in vals.values())
        return cls(dimension, max_degree, vals, exact)

    @classmethod
    def from_function(cls, fn: Callable[[MultiIndex], object], dimension: int,
                      max_degree: int, exact: bool | None = None) -> "MomentSequence":
        vals = {a: fn(a) for a in indices_up_to(dimension, max_degree)}
        if exact is None:
            exact = all(isinstance(v, Rational) for v in vals.values())
        return cls(dimension, max_degree, vals, exact)

    def __getitem__(self, alpha):
        idx = as_multi_index(alpha, self.dimension)
        if total_degree(idx) > self.max_degree:
            raise DegreeExceeded(f"index {idx} exceeds max_degree {self.max_degree}")
        return self.values[idx]

    @property
    def is_real(self) -> bool:
        if self.exact:
            return True
        return all(abs(complex(v).imag) <= IMAG_TOLERANCE for v in self.values.values())

    def require_real(self, consumer: str) -> None:
        if not self.is_real:
            raise NonRealSequence(f"{consumer} requires a real sequence")

    def as_floating(self) -> "MomentSequence":
        if not self.exact:
            return self
        vals = {a: float(v) for a, v in self.values.items()}
        return MomentSequence(self.dimension, self.max_degree, vals, exact=False)

    def scaled(self, factor) -> "MomentSequence":
        exact = self.exact and isinstance(factor, Rational)
        if exact:
            factor = Fraction(factor)
            vals = {a: factor * v for a, v in self.values.items()}
        else:
            vals = {a: complex(factor) * complex(v) for a, v in self.values.items()}
            if all(abs(v.imag) == 0 for v in vals.values()):
                vals = {a: v.real for a, v in vals.items()}
        return MomentSequence(self.dimension, self.max_degree, vals, exact)

    def restricted(self, max_degree: int) -> "MomentSequence":
        if max_degree > self.max_degree:
            raise DegreeExceeded("cannot extend a sequence by restriction")
        vals = {a: v for a, v in self.values.items() if total_degree(a) <= max_degree}
        return MomentSequence(self.dimension, max_degree, vals, self.exact)

    @property
    def fingerprint(self) -> str:
        """Stable content hash, used as a cache key for series evaluations."""
        cached = getattr(self, "_fingerprint", None)
        if cached is None:
            h = hashlib.sha256()
            h.update(f"{self.dimension}:{self.max_degree}:{self.exact}".encode())
            for a in sorted(self.values):
                h.update(repr(a).encode())
                h.update(repr(self.values[a]).encode())
            cached = h.hexdigest()
            object.__setattr__(self, "_fingerprint", cached)
        return cached


def _check_same_shape(a: MomentSequence, b: MomentSequence) -> None:
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions differ: {a.dimension} vs {b.dimension}")
    if a.max_degree != b.max_degree:
        raise DegreeExceeded(f"max degrees differ: {a.max_degree} vs {b.max_degree}")


def add_sequences(a: MomentSequence, b: MomentSequence) -> MomentSequence:
    _check_same_shape(a, b)
    exact = a.exact and b.exact
    vals = {alpha: a.values[alpha] + b.values[alpha] for alpha in a.values}
    return MomentSequence(a.dimension, a.max_degree, vals, exact)


def riesz_eval(s: MomentSequence, p: Polynomial):
    """Apply the moment functional to a polynomial: L_s(x^alpha) = s_alpha.

    Exact when both the sequence and the coefficients are rational; otherwise
    a compensated floating sum.
    """
    if p.dimension != s.dimension:
        raise DimensionMismatch(f"polynomial dimension {p.dimension} != sequence dimension {s.dimension}")
    if p.total_degree > s.max_degree:
        raise DegreeExceeded(f"polynomial degree {p.total_degree} exceeds max_degree {s.max_degree}")
    if s.exact and p.exact:
        return sum((Fraction(c) * s.values[alpha] for alpha, c in p.coefficients.items()), Fraction(0))
    acc = ComplexNeumaierSum()
    for alpha, c in p.coefficients.items():
        acc.add(complex(c) * complex(s.values[alpha]))
    value = acc.value
    return value.real if abs(value.imag) == 0 else value


def derivative_seq(s: MomentSequence, beta: Sequence[int] | int) -> MomentSequence:
    """Distributional derivative: (d^beta s)_alpha = (-1)^|beta| L_s(d^beta x^alpha).

    Only lower-degree entries are consumed, so the result keeps the same
    truncation degree with no loss.
    """
    b = as_multi_index(beta, s.dimension)
    if total_degree(b) > s.max_degree:
        raise DegreeExceeded(f"derivative order {b} exceeds max_degree {s.max_degree}")
    sign = (-1) ** total_degree(b)
    vals = {}
    for alpha in s.values:
        if all(aj >= bj for aj, bj in zip(alpha, b)):
            coeff = 1
            for aj, bj in zip(alpha, b):
                for i in range(bj):
                    coeff *= aj - i
            shifted = tuple(aj - bj for aj, bj in zip(alpha, b))
            vals[alpha] = sign * coeff * s.values[shifted]
        else:
            vals[alpha] = Fraction(0) if s.exact else 0.0
    return MomentSequence(s.dimension, s.max_degree, vals, s.exact)


def affine_pushforward(s: MomentSequence, shift, scale) -> MomentSequence:
    """Moments of the image measure under x -> shift + scale * x (componentwise)."""
    n = s.dimension
    a = tuple(shift) if isinstance(shift, (tuple, list)) else (shift,) * n
    b = tuple(scale) if isinstance(scale, (tuple, list)) else (scale,) * n
    if len(a) != n or len(b) != n:
        raise DimensionMismatch("shift/scale length must match the sequence dimension")
    if any(bj == 0 for bj in b):
        raise DegenerateScale("scale entries must be nonzero")
    exact = s.exact and all(isinstance(v, Rational) for v in a + b)
    if exact:
        a = tuple(Fraction(v) for v in a)
        b = tuple(Fraction(v) for v in b)
    vals = {}
    for alpha in s.values:
        if exact:
            acc = Fraction(0)
            for gamma in sub_indices(alpha):
                coeff = Fraction(1)
                for aj, gj, av, bv in zip(alpha, gamma, a, b):
                    coeff *= math.comb(aj, gj) * av ** (aj - gj) * bv ** gj
                acc += coeff * s.values[gamma]
            vals[alpha] = acc
        else:
            acc = ComplexNeumaierSum()
            for gamma in sub_indices(alpha):
                coeff = 1.0
                for aj, gj, av, bv in zip(alpha, gamma, a, b):
                    coeff *= math.comb(aj, gj) * av ** (aj - gj) * bv ** gj
                acc.add(coeff * complex(s.values[gamma]))
            v = acc.value
            vals[alpha] = v.real if abs(v.imag) == 0 else v
    return MomentSequence(n, s.max_degree, vals, exact)


def mirror_seq(s: MomentSequence, sigma: Sequence[int] | int) -> MomentSequence:
    """Reflect coordinates with sigma_j = -1: s_alpha -> (-1)^(alpha.(1-sigma)/2) s_alpha."""
    n = s.dimension
    sig = tuple(sigma) if isinstance(sigma, (tuple, list)) else (sigma,) * n
    if len(sig) != n:
        raise DimensionMismatch("sigma length must match the sequence dimension")
    if any(v not in (-1, 1) for v in sig):
        raise ValueError(f"sigma entries must be +-1, got {sig}")
    vals = {}
    for alpha, v in s.values.items():
        flips = sum(aj for aj, sj in zip(alpha, sig) if sj == -1)
        vals[alpha] = -v if flips % 2 else v
    return MomentSequence(n, s.max_degree, vals, s.exact)
