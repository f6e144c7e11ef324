"""Truncated characteristic-function series and positive-definiteness testing.

The series f(z) = sum_{|alpha| <= D} i^|alpha| s_alpha z^alpha / alpha! is an
alternating sum whose partial sums can exceed the result by many orders of
magnitude (evaluating a Gaussian tail at z = 3 already passes through terms
around 1e3 for a result around 1e-4).  Three backends share one degree-block
loop:

``float``  double precision with Neumaier compensation and a cancellation
           diagnostic; results with condition > 1e12 are flagged unreliable.
``exact``  rational arithmetic; floats are dyadic, so float arguments convert
           exactly and only the final rounding loses precision.
``mp``     arbitrary precision sized from a log-magnitude prescan of the
           largest term against the requested accuracy.

The ``auto`` policy runs the float backend first and escalates (to exact for
small exact sequences, else mp) when the predicted rounding error exceeds the
requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import mpmath as mp
import numpy as np

try:
    import gmpy2
except ImportError:  # pragma: no cover - mpmath path covers the same contract
    gmpy2 = None

from .errors import DegreeExceeded, DimensionMismatch, NegativeEvenMoment, NotConverged, NotNormalized
from .multiindex import total_degree
from .sequence import MomentSequence
from .summation import ComplexNeumaierSum

UNRELIABLE_CONDITION = 1e12
_FLOAT_EPS = 2.3e-16
# beyond this degree big-integer rational arithmetic loses badly to mpf
_EXACT_DEGREE_LIMIT = 100


@dataclass(frozen=True)
class CharSeries:
    """Degree-D truncation of the characteristic-function series of a sequence."""

    source: MomentSequence
    dimension: int
    degree: int

    @classmethod
    def from_sequence(cls, s: MomentSequence, degree: int | None = None) -> "CharSeries":
        deg = s.max_degree if degree is None else degree
        if deg > s.max_degree:
            raise DegreeExceeded(f"series degree {deg} exceeds max_degree {s.max_degree}")
        return cls(s, s.dimension, deg)

    @property
    def blocks(self):
        """Nonzero entries grouped by total degree: list of (d, [(alpha, value)])."""
        cached = getattr(self, "_blocks", None)
        if cached is None:
            grouped: dict[int, list] = {}
            for alpha, v in self.source.values.items():
                if v == 0:
                    continue
                grouped.setdefault(total_degree(alpha), []).append((alpha, v))
            cached = sorted((d, entries) for d, entries in grouped.items() if d <= self.degree)
            object.__setattr__(self, "_blocks", cached)
        return cached

    @property
    def has_complex_values(self) -> bool:
        cached = getattr(self, "_has_complex", None)
        if cached is None:
            cached = any(isinstance(v, complex) for _, entries in self.blocks for _, v in entries)
            object.__setattr__(self, "_has_complex", cached)
        return cached

    @property
    def zero_tail_terminates(self) -> bool:
        """True when every stored degree past the last nonzero block is zero and
        the nonzero degrees run contiguously from 0.

        Such a series sums exactly within its window, so exhausting the blocks
        counts as convergence.  With interleaved zero degrees (an even or
        mod-4-sparse sequence) a short zero tail proves nothing and this stays
        False.
        """
        degrees = [d for d, _ in self.blocks]
        if degrees and degrees != list(range(degrees[-1] + 1)):
            return False
        last = degrees[-1] if degrees else -1
        return self.degree - last >= 3


@dataclass(frozen=True)
class CharValue:
    """One series evaluation with its convergence and cancellation diagnostics."""

    value: complex
    even_part: complex
    odd_part: complex
    degree_used: int
    converged: bool
    cancellation: float
    backend: str
    dps: int = 0  # working precision of the mp backend, 0 otherwise

    @property
    def reliable(self) -> bool:
        if self.backend == "exact":
            return True
        if self.backend == "mp":
            # trustworthy when the working precision covers the cancellation
            return self.cancellation <= 10.0 ** max(self.dps - 5, 0)
        return self.cancellation <= UNRELIABLE_CONDITION


def _as_vector(z, dimension: int) -> tuple[float, ...]:
    if not isinstance(z, (tuple, list, np.ndarray)):
        z = (z,)
    if len(z) != dimension:
        raise DimensionMismatch(f"argument dimension {len(z)} != sequence dimension {dimension}")
    return tuple(float(t) for t in z)


_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)


def _log_abs(v) -> float:
    if v == 0:
        return -math.inf
    if isinstance(v, Rational):
        f = Fraction(v)
        return math.log(abs(f.numerator)) - math.log(f.denominator)
    return math.log(abs(complex(v)))


@lru_cache(maxsize=None)
def _log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def _fraction_to_float(fr: Fraction) -> float:
    try:
        return float(fr)
    except OverflowError:
        return math.inf if fr > 0 else -math.inf


def _block_log_bound(entries, logz: tuple[float, ...]) -> float:
    """log of sum_alpha |s_alpha z^alpha / alpha!| for one degree block."""
    best = -math.inf
    total = 0.0
    for alpha, v in entries:
        lt = _log_abs(v)
        for aj, lz in zip(alpha, logz):
            lt += aj * lz - _log_factorial(aj)
        if lt > best:
            # rescale the running total to the new maximum
            total = total * math.exp(best - lt) if best > -math.inf else 0.0
            best = lt
        if best > -math.inf:
            total += math.exp(lt - best)
    return best + math.log(total) if best > -math.inf else -math.inf


class _StopRule:
    """Three consecutive small blocks, skipping structural zeros.

    Degrees at which every coefficient vanishes (the odd degrees of an even
    sequence, or everything off the 4-grid of a quartic one) carry no
    convergence information and are not counted.
    """

    def __init__(self, tol: float):
        self.tol = tol
        self.count = 0

    def update(self, block_mag: float, partial_mag: float) -> bool:
        if block_mag <= self.tol * max(partial_mag, 1e-300):
            self.count += 1
        else:
            self.count = 0
        return self.count >= 3


class _PowerTable:
    """Per-coordinate tables of z_j^a / a!, extended incrementally.

    The recurrence tab[a] = tab[a-1] * z / a costs two operations per new
    degree instead of a fresh power and factorial per term, which is what
    makes degree-1000+ series evaluation at hundreds of quadrature nodes
    affordable.  Works for float, Fraction, and mpf entries alike.
    """

    def __init__(self, z, one):
        self.tabs = [[one] for _ in z]
        self.z = z

    def extend(self, degree: int) -> None:
        for t, zj in zip(self.tabs, self.z):
            while len(t) <= degree:
                a = len(t)
                t.append(t[a - 1] * zj / a)

    def monomial(self, alpha):
        tabs = self.tabs
        if len(alpha) == 1:
            return tabs[0][alpha[0]]
        prod = tabs[0][alpha[0]]
        for j in range(1, len(alpha)):
            prod = prod * tabs[j][alpha[j]]
        return prod


def _eval_float(series: CharSeries, z, tol: float, adaptive: bool):
    even = ComplexNeumaierSum()
    odd = ComplexNeumaierSum()
    term_abs = 0.0  # sum of |term| over every term, the cancellation numerator
    powers = _PowerTable(z, 1.0)
    rule = _StopRule(tol)
    degree_used = 0
    converged = not adaptive
    finite = True
    for d, entries in series.blocks:
        powers.extend(d)
        block = ComplexNeumaierSum()
        for alpha, v in entries:
            try:
                term = (complex(v) if isinstance(v, complex) else float(v)) * powers.monomial(alpha)
            except OverflowError:
                finite = False
                break
            block.add(_I_POWERS[d % 4] * term)
        if not finite:
            break
        (even if d % 2 == 0 else odd).add(block.value)
        term_abs += block.abs_sum
        degree_used = d
        partial = even.value + odd.value
        if not (math.isfinite(term_abs) and math.isfinite(abs(partial))):
            finite = False
            break
        if adaptive and rule.update(abs(block.value), abs(partial)):
            converged = True
            break
    if adaptive and not converged and finite and series.zero_tail_terminates:
        converged = True
    value = even.value + odd.value
    cancellation = term_abs / max(abs(value), 1e-300)
    return CharValue(value, even.value, odd.value, degree_used, converged, cancellation, "float"), finite


def _eval_exact(series: CharSeries, z, tol: float, adaptive: bool):
    zf = tuple(Fraction(t) for t in z)  # floats are dyadic: exact conversion
    powers = _PowerTable(zf, Fraction(1))
    sums = [Fraction(0), Fraction(0), Fraction(0), Fraction(0)]  # i^d residue classes
    abs_sum = Fraction(0)
    # rational tolerance keeps the stop-rule comparison exact even when the
    # partial sums pass through magnitudes beyond the float range
    rule = _StopRule(Fraction(tol))
    degree_used = 0
    converged = not adaptive
    for d, entries in series.blocks:
        powers.extend(d)
        block = Fraction(0)
        for alpha, v in entries:
            block += Fraction(v) * powers.monomial(alpha)
        sums[d % 4] += block
        abs_sum += abs(block)
        degree_used = d
        partial_mag = abs(sums[0] - sums[2]) + abs(sums[1] - sums[3])
        if adaptive and rule.update(abs(block), partial_mag):
            converged = True
            break
    if adaptive and not converged and series.zero_tail_terminates:
        converged = True
    re_f, im_f = _fraction_to_float(sums[0] - sums[2]), _fraction_to_float(sums[1] - sums[3])
    value = complex(re_f, im_f)
    even_v = complex(re_f, 0.0)
    odd_v = complex(0.0, im_f)
    # cancellation is cosmetic here (the arithmetic was exact); log-domain
    # ratio avoids overflow when the term sum exceeds the float range
    log_ratio = _log_abs(abs_sum) - math.log(max(abs(value), 1e-300))
    cancellation = math.exp(min(log_ratio, 700.0)) if abs_sum != 0 else 1.0
    return CharValue(value, even_v, odd_v, degree_used, converged, max(1.0, cancellation), "exact")


def _mp_value(v):
    if isinstance(v, Rational):
        f = Fraction(v)
        return mp.mpf(f.numerator) / mp.mpf(f.denominator)
    if isinstance(v, complex):
        return mp.mpc(v.real, v.imag)
    return mp.mpf(v)


def _gmpy_blocks(series: CharSeries, bits: int):
    """Series blocks with values converted to mpfr, cached at the widest
    precision requested so far (reuse at lower precision is exact-rounding
    safe since operations round to the active context)."""
    cached = getattr(series, "_gmpy_cache", None)
    if cached is not None and cached[0] >= bits:
        return cached[1]
    out = []
    with gmpy2.context(precision=bits + 30):
        for d, entries in series.blocks:
            conv = []
            for alpha, v in entries:
                if isinstance(v, Rational):
                    f = Fraction(v)
                    mv = gmpy2.mpfr(f.numerator) / gmpy2.mpfr(f.denominator)
                else:
                    mv = gmpy2.mpfr(v)
                conv.append((alpha[0], mv))
            out.append((d, conv))
    object.__setattr__(series, "_gmpy_cache", (bits, out))
    return out


def _eval_mp_gmpy(series: CharSeries, z, tol: float, adaptive: bool, dps: int):
    """1-d real fast path: mpfr arithmetic with i^d bucketed into four real
    accumulators, an order of magnitude less interpreter overhead than the
    mpmath path."""
    bits = int(dps * 3.33) + 20
    blocks = _gmpy_blocks(series, bits)
    with gmpy2.context(precision=bits):
        zm = gmpy2.mpfr(z[0])
        tab = [gmpy2.mpfr(1)]
        sums = [gmpy2.mpfr(0) for _ in range(4)]
        abs_sum = gmpy2.mpfr(0)
        rule = _StopRule(tol)
        degree_used = 0
        converged = not adaptive
        for d, entries in blocks:
            while len(tab) <= d:
                a = len(tab)
                tab.append(tab[a - 1] * zm / a)
            block = gmpy2.mpfr(0)
            for a, mv in entries:
                block += mv * tab[a]
            sums[d % 4] += block
            abs_sum += abs(block)
            degree_used = d
            if adaptive and rule.update(
                abs(block), abs(sums[0] - sums[2]) + abs(sums[1] - sums[3])
            ):
                converged = True
                break
        if adaptive and not converged and series.zero_tail_terminates:
            converged = True
        re = sums[0] - sums[2]
        im = sums[1] - sums[3]
        mag = max(abs(re) + abs(im), gmpy2.mpfr(10) ** (-dps * 2))
        cancellation = float(abs_sum / mag)
        value = complex(float(re), float(im))
        return CharValue(value, complex(float(re), 0.0), complex(0.0, float(im)),
                         degree_used, converged, cancellation, "mp", dps)


def _eval_mp_once(series: CharSeries, z, tol: float, adaptive: bool, dps: int):
    if gmpy2 is not None and series.dimension == 1 and not series.has_complex_values:
        return _eval_mp_gmpy(series, z, tol, adaptive, dps)
    with mp.workdps(dps):
        zf = tuple(mp.mpf(t) for t in z)
        powers = _PowerTable(zf, mp.mpf(1))
        even = mp.mpc(0)
        odd = mp.mpc(0)
        abs_sum = mp.mpf(0)
        rule = _StopRule(tol)
        degree_used = 0
        converged = not adaptive
        for d, entries in series.blocks:
            powers.extend(d)
            block = mp.mpc(0)
            for alpha, v in entries:
                block += _mp_value(v) * powers.monomial(alpha)
            iblk = block * _I_POWERS[d % 4]
            if d % 2 == 0:
                even += iblk
            else:
                odd += iblk
            abs_sum += abs(block)
            degree_used = d
            if adaptive and rule.update(abs(block), abs(even) + abs(odd)):
                converged = True
                break
        if adaptive and not converged and series.zero_tail_terminates:
            converged = True
        value = even + odd
        cancellation = float(abs_sum / max(abs(value), mp.mpf(10) ** (-dps * 2)))
        return CharValue(complex(value), complex(even), complex(odd),
                         degree_used, converged, cancellation, "mp", dps)


def _peak_log10(series: CharSeries, z) -> float:
    logz = tuple(math.log(abs(t)) if t != 0 else -math.inf for t in z)
    peak = max((_block_log_bound(entries, logz) for _, entries in series.blocks), default=0.0)
    return peak / math.log(10) if math.isfinite(peak) else 0.0


def _eval_mp(series: CharSeries, z, tol: float, adaptive: bool):
    """mp evaluation with the precision re-sized until the rounding floor of
    the largest term sits below tol relative to the computed value.

    One pass sized from the term-magnitude prescan usually suffices; a near-
    total cancellation (result many orders below the peak term) needs the
    value itself to size the precision, hence the retry loop.
    """
    peak10 = _peak_log10(series, z)
    tol10 = abs(math.log10(max(tol, 1e-300)))
    dps = max(30, int(math.ceil(peak10 + tol10 + 15)))
    result = None
    for _ in range(4):
        result = _eval_mp_once(series, z, tol, adaptive, dps)
        mag = abs(result.value)
        if mag == 0.0:
            break
        floor10 = peak10 - (dps - 5)  # log10 of the summation rounding floor
        if floor10 <= math.log10(mag) - tol10:
            break
        dps = max(dps + 10, int(math.ceil(peak10 - math.log10(mag) + tol10 + 10)))
    return result


def char_eval(c: CharSeries | MomentSequence, z, tol: float = 1e-12,
              backend: str = "auto", adaptive: bool = False) -> CharValue:
    """Evaluate the truncated series at z.

    With ``adaptive=True`` the degree escalates until three consecutive
    structurally-nonzero degree blocks fall below tol relative to the partial
    sum; :class:`NotConverged` is raised if the truncation degree is reached
    first.  The value is always even-part + odd-part of the same run, so the
    parity split recombines exactly.
    """
    series = c if isinstance(c, CharSeries) else CharSeries.from_sequence(c)
    zv = _as_vector(z, series.dimension)

    if all(t == 0 for t in zv):
        s0 = series.source.values[(0,) * series.dimension]
        v = complex(float(s0), 0.0) if not isinstance(s0, complex) else s0
        return CharValue(v, v, 0j, 0, True, 1.0, "float")

    if backend == "float":
        result, finite = _eval_float(series, zv, tol, adaptive)
        if not finite:
            raise OverflowError("series terms exceed double-precision range; use mp or auto")
    elif backend == "exact":
        if not series.source.exact:
            raise ValueError("exact backend requires an exact sequence")
        result = _eval_exact(series, zv, tol, adaptive)
    elif backend == "mp":
        result = _eval_mp(series, zv, tol, adaptive)
    elif backend == "auto":
        result, finite = _eval_float(series, zv, tol, adaptive)
        predicted_error = result.cancellation * _FLOAT_EPS
        if finite and math.isfinite(predicted_error) and predicted_error <= 0.1 * tol:
            pass
        elif series.source.exact and series.degree <= _EXACT_DEGREE_LIMIT:
            result = _eval_exact(series, zv, tol, adaptive)
        else:
            result = _eval_mp(series, zv, tol, adaptive)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    if adaptive and not result.converged:
        raise NotConverged(
            f"stopping rule did not fire by degree {series.degree} at z={z!r} (tol={tol:g})"
        )
    return result


def char_eval_adaptive(c: CharSeries | MomentSequence, z, tol: float = 1e-10,
                       backend: str = "auto") -> CharValue:
    """Degree-adaptive evaluation; raises NotConverged when truncation is hit."""
    return char_eval(c, z, tol=tol, backend=backend, adaptive=True)


def odd_even_split(c: CharSeries | MomentSequence, z, tol: float = 1e-12,
                   backend: str = "auto") -> tuple[complex, complex]:
    """(odd-degree part, even-degree part); their sum is char_eval exactly."""
    r = char_eval(c, z, tol=tol, backend=backend)
    return r.odd_part, r.even_part


@dataclass(frozen=True)
class RadiusEstimate:
    """Support-radius diagnostics from even-moment growth.

    The raw root sequences are reported rather than an asserted limit: a
    finite stretch of moments only ever yields an extrapolated trend.
    """

    per_coordinate: tuple[tuple[float, ...], ...]
    k_values: tuple[int, ...]
    estimate: float
    trend: str  # "converging" | "diverging"

    def as_dict(self) -> dict:
        return {"per_coordinate": [list(seq) for seq in self.per_coordinate],
                "k_values": list(self.k_values), "estimate": self.estimate,
                "trend": self.trend}


def radius_estimate(s: MomentSequence, k_range: Sequence[int]) -> RadiusEstimate:
    ks = sorted(set(int(k) for k in k_range))
    if not ks or ks[0] < 1:
        raise ValueError("k_range must contain positive integers")
    if 2 * ks[-1] > s.max_degree:
        raise DegreeExceeded(f"need moment of degree {2 * ks[-1]}, have {s.max_degree}")
    per = []
    for j in range(s.dimension):
        seq = []
        for k in ks:
            alpha = tuple(2 * k if i == j else 0 for i in range(s.dimension))
            v = s.values[alpha]
            if isinstance(v, complex) or v < 0:
                raise NegativeEvenMoment(f"moment at {alpha} is not a nonnegative real")
            # log-domain root: values like (2k)!/k! overflow double precision
            seq.append(math.exp(_log_abs(v) / (2 * k)) if v != 0 else 0.0)
        per.append(tuple(seq))
    estimate = max(seq[-1] for seq in per)
    trend = "converging"
    for seq in per:
        half = seq[len(seq) // 2:]
        if len(half) >= 2 and half[0] > 0 and (half[-1] - half[0]) / half[0] > 0.10:
            trend = "diverging"
    return RadiusEstimate(tuple(per), tuple(ks), estimate, trend)


@dataclass(frozen=True)
class BochnerReport:
    """Positive-semidefiniteness evidence on one point set.

    ``matrices`` holds the full kernel matrix (f(z_j - z_k)), the even-part
    matrix, and even-minus-odd.  Hermitian defect is measured before
    symmetrization; eigenvalues come from the doubled real-symmetric
    embedding [[A, -B], [B, A]] of the Hermitian A + iB.
    """

    points: tuple
    min_eigenvalues: dict
    psd: dict
    all_psd: bool
    tolerance: float
    effective_tolerance: float
    hermitian_defect: float
    max_cancellation: float
    matrices: dict

    def as_dict(self) -> dict:
        # matrices stay out: they are working data, not part of the report schema
        return {"points": [list(p) for p in self.points],
                "min_eigenvalues": dict(self.min_eigenvalues),
                "psd": dict(self.psd), "all_psd": self.all_psd,
                "tolerance": self.tolerance,
                "effective_tolerance": self.effective_tolerance,
                "hermitian_defect": self.hermitian_defect,
                "max_cancellation": self.max_cancellation}


def _hermitian_min_eig(m: np.ndarray) -> float:
    h = 0.5 * (m + m.conj().T)
    a, b = h.real, h.imag
    doubled = np.block([[a, -b], [b, a]])
    return float(np.linalg.eigvalsh(doubled)[0])


def bochner_test(s: MomentSequence, points, tol: float = 1e-8,
                 series_tol: float = 1e-10, rescale: bool = False,
                 backend: str = "auto") -> BochnerReport:
    """Evaluate the three kernel matrices on a point set and eigen-test them."""
    s0 = s.values[(0,) * s.dimension]
    # float-path masses carry quadrature roundoff; only exact data is held to s0 == 1
    normalized = s0 == 1 if s.exact else abs(complex(s0) - 1.0) <= 1e-12
    if not normalized:
        if not rescale or s0 == 0:
            raise NotNormalized(f"s_0 = {s0}; pass rescale=True to normalize a nonzero mass")
        s = s.scaled(Fraction(1, 1) / Fraction(s0) if s.exact else 1.0 / complex(s0))
    pts = [_as_vector(p, s.dimension) for p in points]
    m = len(pts)
    series = CharSeries.from_sequence(s)
    full = np.zeros((m, m), dtype=complex)
    even = np.zeros((m, m), dtype=complex)
    odd = np.zeros((m, m), dtype=complex)
    cache: dict[tuple, CharValue] = {}
    worst_cancellation = 1.0
    for j in range(m):
        for k in range(m):
            diff = tuple(a - b for a, b in zip(pts[j], pts[k]))
            r = cache.get(diff)
            if r is None:
                r = char_eval_adaptive(series, diff, tol=series_tol, backend=backend)
                cache[diff] = r
            full[j, k] = r.value
            even[j, k] = r.even_part
            odd[j, k] = r.odd_part
            worst_cancellation = max(worst_cancellation, r.cancellation)
    defect = max(
        float(np.abs(mat - mat.conj().T).max()) for mat in (full, even, even - odd)
    )
    mats = {"full": full, "even": even, "even_minus_odd": even - odd}
    eff_tol = tol * max(1, m)
    min_eigs = {name: _hermitian_min_eig(mat) for name, mat in mats.items()}
    psd = {name: eig >= -eff_tol for name, eig in min_eigs.items()}
    return BochnerReport(
        points=tuple(pts),
        min_eigenvalues=min_eigs,
        psd=psd,
        all_psd=all(psd.values()),
        tolerance=tol,
        effective_tolerance=eff_tol,
        hermitian_defect=defect,
        max_cancellation=worst_cancellation,
        matrices=mats,
    )
