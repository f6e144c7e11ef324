"""Reference densities and the moment oracle.

``moments_from_density`` is the independent source of truth used throughout
the test suite: piecewise-polynomial and indicator densities integrate on an
exact rational path, everything else through adaptive quadrature on the
declared support box (relative target 1e-13).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import DimensionMismatch, UnboundedSupport
from .multiindex import indices_up_to
from .quadrature import integrate_adaptive
from .sequence import MomentSequence

# 1-d piece: (lo, hi, ascending polynomial coefficients)
Piece = tuple[object, object, tuple]


@dataclass(frozen=True)
class DensitySpec:
    """Declarative density: evaluate pointwise, integrate for moments.

    Kinds
    -----
    ``indicator``            uniform mass on a box (exact moments)
    ``piecewise-polynomial`` 1-d polynomial pieces (exact moments)
    ``gaussian``             normal density truncated to the support box
    ``mixture``              weighted sum of component specs (weights may be signed)
    ``product``              product of independent 1-d specs
    """

    kind: str
    dimension: int
    support: tuple[tuple[float, float], ...]
    pieces: tuple[Piece, ...] = ()
    mean: tuple = ()
    variance: tuple = ()
    components: tuple = ()
    weights: tuple = ()

    # -- constructors -------------------------------------------------------

    @classmethod
    def indicator(cls, lo, hi) -> "DensitySpec":
        lo = lo if isinstance(lo, (tuple, list)) else (lo,)
        hi = hi if isinstance(hi, (tuple, list)) else (hi,)
        if len(lo) != len(hi):
            raise DimensionMismatch("box corners differ in length")
        return cls("indicator", len(lo), tuple((a, b) for a, b in zip(lo, hi)))

    @classmethod
    def piecewise_polynomial(cls, pieces: Sequence[Piece]) -> "DensitySpec":
        ps = tuple((lo, hi, tuple(cs)) for lo, hi, cs in pieces)
        lo = min(p[0] for p in ps)
        hi = max(p[1] for p in ps)
        return cls("piecewise-polynomial", 1, ((lo, hi),), pieces=ps)

    @classmethod
    def gaussian(cls, mean, variance, support_halfwidth: float = 40.0) -> "DensitySpec":
        mean = mean if isinstance(mean, (tuple, list)) else (mean,)
        variance = variance if isinstance(variance, (tuple, list)) else (variance,) * len(mean)
        if any(v <= 0 for v in variance):
            raise ValueError("variance entries must be positive")
        support = tuple((m - support_halfwidth, m + support_halfwidth) for m in mean)
        return cls("gaussian", len(mean), support, mean=tuple(mean), variance=tuple(variance))

    @classmethod
    def mixture(cls, weights: Sequence, components: Sequence["DensitySpec"]) -> "DensitySpec":
        comps = tuple(components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        dim = comps[0].dimension
        if any(c.dimension != dim for c in comps):
            raise DimensionMismatch("mixture components differ in dimension")
        support = tuple(
            (min(c.support[j][0] for c in comps), max(c.support[j][1] for c in comps))
            for j in range(dim)
        )
        return cls("mixture", dim, support, components=comps, weights=tuple(weights))

    @classmethod
    def product(cls, factors: Sequence["DensitySpec"]) -> "DensitySpec":
        fs = tuple(factors)
        if any(f.dimension != 1 for f in fs):
            raise DimensionMismatch("product factors must be one-dimensional")
        support = tuple(f.support[0] for f in fs)
        return cls("product", len(fs), support, components=fs)

    @classmethod
    def named(cls, name: str) -> "DensitySpec":
        try:
            return _NAMED[name]()
        except KeyError:
            raise ValueError(f"unknown density name {name!r}; known: {sorted(_NAMED)}") from None

    # -- pointwise evaluation ------------------------------------------------

    def __call__(self, x):
        if self.dimension == 1 and not isinstance(x, (tuple, list)):
            x = (x,)
        if len(x) != self.dimension:
            raise DimensionMismatch("point dimension mismatch")
        if self.kind == "indicator":
            return 1.0 if all(lo <= xi <= hi for xi, (lo, hi) in zip(x, self.support)) else 0.0
        if self.kind == "piecewise-polynomial":
            t = x[0]
            acc = 0.0
            # half-open pieces so junction points are counted once
            right = max(hi for _, hi, _ in self.pieces)
            for lo, hi, cs in self.pieces:
                if lo <= t < hi or (t == hi == right):
                    acc += sum(float(c) * float(t) ** k for k, c in enumerate(cs))
            return acc
        if self.kind == "gaussian":
            val = 1.0
            for xi, m, v, (lo, hi) in zip(x, self.mean, self.variance, self.support):
                if not lo <= xi <= hi:
                    return 0.0
                val *= math.exp(-((xi - m) ** 2) / (2 * v)) / math.sqrt(2 * math.pi * v)
            return val
        if self.kind == "mixture":
            return sum(float(w) * c(x) for w, c in zip(self.weights, self.components))
        if self.kind == "product":
            val = 1.0
            for xi, c in zip(x, self.components):
                val *= c(xi)
            return val
        raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def exact(self) -> bool:
        if self.kind == "indicator":
            return all(isinstance(v, Rational) for box in self.support for v in box)
        if self.kind == "piecewise-polynomial":
            return all(
                isinstance(lo, Rational) and isinstance(hi, Rational)
                and all(isinstance(c, Rational) for c in cs)
                for lo, hi, cs in self.pieces
            )
        if self.kind in ("mixture", "product"):
            ok = all(c.exact for c in self.components)
            if self.kind == "mixture":
                ok = ok and all(isinstance(w, Rational) for w in self.weights)
            return ok
        return False


def _exact_moment(spec: DensitySpec, alpha) -> Fraction:
    if spec.kind == "indicator":
        acc = Fraction(1)
        for aj, (lo, hi) in zip(alpha, spec.support):
            lo, hi = Fraction(lo), Fraction(hi)
            acc *= (hi ** (aj + 1) - lo ** (aj + 1)) / (aj + 1)
        return acc
    if spec.kind == "piecewise-polynomial":
        k = alpha[0]
        acc = Fraction(0)
        for lo, hi, cs in spec.pieces:
            lo, hi = Fraction(lo), Fraction(hi)
            for j, c in enumerate(cs):
                p = k + j + 1
                acc += Fraction(c) * (hi ** p - lo ** p) / p
        return acc
    if spec.kind == "mixture":
        return sum(
            (Fraction(w) * _exact_moment(c, alpha) for w, c in zip(spec.weights, spec.components)),
            Fraction(0),
        )
    if spec.kind == "product":
        acc = Fraction(1)
        for aj, c in zip(alpha, spec.components):
            acc *= _exact_moment(c, (aj,))
        return acc
    raise ValueError(f"no exact path for kind {spec.kind!r}")


def _float_moment(spec: DensitySpec, alpha, rel_tol: float) -> float:
    if spec.kind == "mixture":
        return sum(float(w) * _float_moment(c, alpha, rel_tol)
                   for w, c in zip(spec.weights, spec.components))
    if spec.kind == "product":
        acc = 1.0
        for aj, c in zip(alpha, spec.components):
            acc *= _float_moment(c, (aj,), rel_tol)
        return acc
    if spec.dimension != 1:
        raise DimensionMismatch("direct quadrature is one-dimensional; use product/mixture")
    lo, hi = spec.support[0]
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise UnboundedSupport("quadrature requires a bounded support box")
    k = alpha[0]
    return integrate_adaptive(lambda t: t ** k * spec((t,)), float(lo), float(hi), rel_tol=rel_tol)


def moments_from_density(spec: DensitySpec, max_degree: int, rel_tol: float = 1e-13,
                         exact: bool | None = None) -> MomentSequence:
    """Moment sequence of the density up to the truncation degree."""
    use_exact = spec.exact if exact is None else exact
    vals = {}
    for alpha in indices_up_to(spec.dimension, max_degree):
        vals[alpha] = _exact_moment(spec, alpha) if use_exact else _float_moment(spec, alpha, rel_tol)
    return MomentSequence(spec.dimension, max_degree, vals, exact=use_exact)


# Named reference densities; constraints the tests rely on are exact rationals.
_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)

_NAMED = {
    # uniform mass on [0, 1]
    "uniform01": lambda: DensitySpec.indicator(Fraction(0), Fraction(1)),
    # x^2 (1-x)^2 on [0, 1]
    "square-bump": lambda: DensitySpec.piecewise_polynomial(
        [(Fraction(0), Fraction(1), (Fraction(0), Fraction(0), Fraction(1), Fraction(-2), Fraction(1)))]
    ),
    # 1/2 - |x| on [-1/2, 1/2]
    "hat": lambda: DensitySpec.piecewise_polynomial(
        [(-_HALF, Fraction(0), (_HALF, Fraction(1))), (Fraction(0), _HALF, (_HALF, Fraction(-1)))]
    ),
    # continuous split of the hat at a ramp on [-1/4, 0]: right part
    "hat-right": lambda: DensitySpec.piecewise_polynomial(
        [(-_QUARTER, Fraction(0), (_HALF, Fraction(3), Fraction(4))),
         (Fraction(0), _HALF, (_HALF, Fraction(-1)))]
    ),
    # continuous split of the hat: left part (hat minus hat-right)
    "hat-left": lambda: DensitySpec.piecewise_polynomial(
        [(-_HALF, -_QUARTER, (_HALF, Fraction(1))),
         (-_QUARTER, Fraction(0), (Fraction(0), Fraction(-2), Fraction(-4)))]
    ),
}
