"""Sparse multivariate polynomials used as Riesz-functional arguments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

from .multiindex import MultiIndex, as_multi_index, total_degree

Scalar = Fraction | float | complex


def is_exact_scalar(value) -> bool:
    return isinstance(value, Rational)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial sum_alpha c_alpha x^alpha with sparse coefficients.

    Parameters
    ----------
    dimension : int
        Number of variables.
    coefficients : mapping
        Multi-index -> coefficient; zero coefficients may be omitted.
    """

    dimension: int
    coefficients: Mapping[MultiIndex, Scalar]

    def __post_init__(self):
        coeffs = {}
        for alpha, c in self.coefficients.items():
            idx = as_multi_index(alpha, self.dimension)
            if c != 0:
                coeffs[idx] = c
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def monomial(cls, alpha: Sequence[int] | int, coefficient: Scalar = 1, dimension: int | None = None) -> "Polynomial":
        if isinstance(alpha, int):
            alpha = (alpha,)
        dim = dimension if dimension is not None else len(alpha)
        return cls(dim, {tuple(alpha): coefficient})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Scalar]) -> "Polynomial":
        """Build a one-variable polynomial from ascending-power coefficients."""
        return cls(1, {(k,): c for k, c in enumerate(coeffs)})

    @property
    def total_degree(self) -> int:
        return max((total_degree(a) for a in self.coefficients), default=0)

    @property
    def exact(self) -> bool:
        return all(is_exact_scalar(c) for c in self.coefficients.values())

    def __call__(self, x):
        if self.dimension == 1 and not isinstance(x, (tuple, list)):
            x = (x,)
        acc = 0
        for alpha, c in self.coefficients.items():
            term = c
            for xj, aj in zip(x, alpha):
                term *= xj ** aj
            acc += term
        return acc
