"""Atomic decomposition of truncated functionals and Dirac-family smoothing.

A truncated functional is a finite list of basis functions on an interval
together with target values.  ``atomic_decompose`` represents it by at most
m positive point masses (grid NNLS plus local position refinement), and
``smooth_representation`` replaces the points with members of a shrinking
probability-density family, re-solving the weights.

The sharp corner in this module is the exceptional-point semantics: a basis
function may carry finitely many pointwise overrides (value at x differs
from the formula).  Overrides are visible to atomic evaluation, because a
point mass sees the pointwise value, but deliberately invisible to every
integral, because the overrides live on a Lebesgue-null set.  This is what
lets a functional decompose atomically yet fail smoothing for every family
and every bandwidth, and that failure is a result, not a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import Infeasible, SmoothingFailed

WEIGHT_FLOOR = 1e-10
RIDGE = 1e-12


@dataclass(frozen=True)
class BasisFunction:
    """One basis element: a callable, optional polynomial coefficients
    (ascending, enabling closed-form smoothing moments), and pointwise
    overrides applied only at exactly-matching arguments."""

    fn: Callable[[float], float]
    coeffs: tuple | None = None
    overrides: tuple[tuple[float, float], ...] = ()
    name: str = ""

    @classmethod
    def from_poly(cls, coeffs: Sequence, overrides: Sequence = (), name: str = "") -> "BasisFunction":
        cs = tuple(float(c) for c in coeffs)

        def fn(x: float, _cs=cs) -> float:
            acc = 0.0
            for c in reversed(_cs):
                acc = acc * x + c
            return acc

        return cls(fn, cs, tuple((float(a), float(b)) for a, b in overrides), name)

    def evaluate(self, x: float) -> float:
        for px, pv in self.overrides:
            if x == px:
                return pv
        return float(self.fn(x))


@dataclass(frozen=True)
class TruncatedFunctional:
    basis: tuple[BasisFunction, ...]
    values: tuple[float, ...]
    domain: tuple[float, float]

    def __post_init__(self):
        if len(self.basis) < 1:
            raise ValueError("need at least one basis function")
        if len(self.values) != len(self.basis):
            raise ValueError("values length differs from basis length")
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError("domain must be a nondegenerate interval")

    @property
    def size(self) -> int:
        return len(self.basis)

    def evaluate_basis(self, x: float) -> np.ndarray:
        return np.array([b.evaluate(x) for b in self.basis])


def basis_from_spec(spec: Sequence) -> tuple[BasisFunction, ...]:
    """Build basis functions from JSON-style dicts.

    Each entry is {"poly": [c0, c1, ...]} with optional "overrides":
    [[x, value], ...] and "name".  Coefficients may be numbers or "p/q"
    strings.
    """
    out = []
    for i, entry in enumerate(spec):
        if not isinstance(entry, Mapping) or "poly" not in entry:
            raise ValueError(f"basis entry {i}: expected an object with a 'poly' list")
        coeffs = [float(Fraction(str(c))) if isinstance(c, str) else float(c)
                  for c in entry["poly"]]
        overrides = entry.get("overrides", ())
        name = entry.get("name", f"f{i + 1}")
        out.append(BasisFunction.from_poly(coeffs, overrides, name))
    return tuple(out)


@dataclass(frozen=True)
class AtomicRepresentation:
    """Point masses (x_i, c_i > 0) with the max-abs residual over the basis."""

    atoms: tuple[tuple[float, float], ...]
    residual: float
    diagnostics: Mapping = field(default_factory=dict)

    @property
    def points(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.atoms)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(c for _, c in self.atoms)

    def apply(self, f: Callable[[float], float]) -> float:
        return sum(c * float(f(x)) for x, c in self.atoms)

    def as_dict(self) -> dict:
        return {"atoms": [[x, c] for x, c in self.atoms], "residual": self.residual,
                "diagnostics": dict(self.diagnostics)}


def _residual_inf(L: TruncatedFunctional, points, weights) -> float:
    worst = 0.0
    for j, b in enumerate(L.basis):
        acc = sum(c * b.evaluate(x) for x, c in zip(points, weights))
        worst = max(worst, abs(L.values[j] - acc))
    return worst


def _solve_weights(L: TruncatedFunctional, points) -> tuple[np.ndarray, float]:
    A = np.column_stack([L.evaluate_basis(x) for x in points])
    w, rnorm = nnls(A, np.array(L.values, dtype=float))
    return w, rnorm


def atomic_decompose(L: TruncatedFunctional, candidate_grid=None, tol: float = 1e-10,
                     grid_points: int = 401, refine_rounds: int = 80) -> AtomicRepresentation:
    """NNLS over a candidate grid, pruned to a basic support, then coordinate
    descent on the atom positions until the max-abs residual is <= tol.

    The default grid is uniform over the domain and always includes every
    override point, so discontinuous basis values are reachable by atoms.
    """
    lo, hi = L.domain
    if candidate_grid is None:
        grid = list(np.linspace(lo, hi, max(grid_points, 2 * L.size + 1)))
    else:
        grid = [float(x) for x in candidate_grid]
    for b in L.basis:
        for px, _ in b.overrides:
            if lo <= px <= hi and px not in grid:
                grid.append(px)
    grid = sorted(set(grid))
    if len(grid) < L.size:
        raise ValueError(f"candidate grid needs at least {L.size} points")

    w, _ = _solve_weights(L, grid)
    support = [i for i, c in enumerate(w) if c > WEIGHT_FLOOR]
    points = [grid[i] for i in support]
    weights = [w[i] for i in support]

    # greedy support reduction: drop atoms whose removal keeps the fit
    improved = True
    while improved and len(points) > 1:
        improved = False
        order = sorted(range(len(points)), key=lambda i: weights[i])
        for i in order:
            trial = points[:i] + points[i + 1:]
            tw, _ = _solve_weights(L, trial)
            if _residual_inf(L, trial, tw) <= max(tol, _residual_inf(L, points, weights)):
                points, weights = trial, list(tw)
                improved = True
                break

    # coordinate descent on positions; every move re-solves the weights
    if _residual_inf(L, points, weights) > tol and points:
        step = (hi - lo) / max(len(grid) - 1, 1)
        for _ in range(refine_rounds):
            moved = False
            for i in range(len(points)):
                best = _residual_inf(L, points, weights)
                best_x = points[i]
                for cand in (points[i] - step, points[i] + step):
                    cand = min(max(cand, lo), hi)
                    trial = points[:i] + [cand] + points[i + 1:]
                    tw, _ = _solve_weights(L, trial)
                    r = _residual_inf(L, trial, tw)
                    if r < best - 1e-18:
                        best, best_x = r, cand
                if best_x != points[i]:
                    points[i] = best_x
                    weights = list(_solve_weights(L, points)[0])
                    moved = True
            if _residual_inf(L, points, weights) <= tol:
                break
            if not moved:
                step *= 0.5
                if step < 1e-14 * max(abs(lo), abs(hi), 1.0):
                    break

    keep = [(x, c) for x, c in zip(points, weights) if c > WEIGHT_FLOOR]
    keep.sort()
    res = _residual_inf(L, [x for x, _ in keep], [c for _, c in keep])
    if res > tol:
        raise Infeasible(
            f"no nonnegative combination reached residual {tol:g} (best {res:.3e}); "
            "the functional appears to lie outside or on the boundary of the moment cone")
    A = np.column_stack([L.evaluate_basis(x) for x, _ in keep]) if keep else np.zeros((L.size, 0))
    cond = float(np.linalg.cond(A)) if keep else float("inf")
    diag = {"condition": cond,
            "min_weight": min((c for _, c in keep), default=0.0),
            "grid_size": len(grid)}
    return AtomicRepresentation(tuple(keep), res, diag)


# -- Dirac-approximating families -------------------------------------------

_FAMILY_KINDS = ("gaussian", "mollifier", "box")

# bump normalizer: 1 / integral of exp(-1/(1-u^2)) over (-1, 1)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _bump_norm() -> float:
    u = _GL_NODES
    vals = np.exp(-1.0 / (1.0 - u * u))
    return float(1.0 / np.sum(_GL_WEIGHTS * vals))


_BUMP_C = _bump_norm()


@dataclass(frozen=True)
class DiracFamily:
    """Shrinking family of probability densities centered anywhere.

    gaussian   N(x0, sigma^2)
    mollifier  C/sigma * exp(-1/(1 - ((t-x0)/sigma)^2)) on |t-x0| < sigma
    box        uniform on [x0 - sigma, x0 + sigma]
    """

    kind: str
    sigmas: tuple[float, ...]

    def __post_init__(self):
        kind = {"box-indicator": "box"}.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in _FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; known: {_FAMILY_KINDS}")
        sig = tuple(sorted((float(s) for s in self.sigmas), reverse=True))
        if not sig or any(s <= 0 for s in sig):
            raise ValueError("sigma grid must be non-empty and positive")
        object.__setattr__(self, "sigmas", sig)

    def density(self, sigma: float, x0: float, x: float) -> float:
        u = (x - x0) / sigma
        if self.kind == "gaussian":
            return math.exp(-0.5 * u * u) / (sigma * math.sqrt(2.0 * math.pi))
        if self.kind == "box":
            return 1.0 / (2.0 * sigma) if abs(u) <= 1.0 else 0.0
        if abs(u) >= 1.0:
            return 0.0
        return _BUMP_C / sigma * math.exp(-1.0 / (1.0 - u * u))

    def poly_moment(self, sigma: float, x0: float, coeffs: Sequence[float]) -> float:
        """Closed-form integral of a polynomial against the (sigma, x0) member."""
        deg = len(coeffs) - 1
        if self.kind == "gaussian":
            m = [1.0, x0]
            for k in range(2, deg + 1):
                m.append(x0 * m[k - 1] + (k - 1) * sigma * sigma * m[k - 2])
            return sum(c * m[k] for k, c in enumerate(coeffs[:deg + 1]))
        if self.kind == "box":
            a, b = x0 - sigma, x0 + sigma
            return sum(c * (b ** (k + 1) - a ** (k + 1)) / (2.0 * sigma * (k + 1))
                       for k, c in enumerate(coeffs))
        return self.integrate(sigma, x0, BasisFunction.from_poly(coeffs).fn)

    def integrate(self, sigma: float, x0: float, fn: Callable[[float], float]) -> float:
        """Quadrature of fn against the (sigma, x0) member; overrides never
        enter here, integration sees only the underlying function."""
        if self.kind == "gaussian":
            lo, hi = x0 - 12.0 * sigma, x0 + 12.0 * sigma
        else:
            lo, hi = x0 - sigma, x0 + sigma
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xs = mid + half * _GL_NODES
        dens = np.array([self.density(sigma, x0, x) for x in xs])
        vals = np.array([float(fn(x)) for x in xs])
        return float(half * np.sum(_GL_WEIGHTS * dens * vals))


@dataclass(frozen=True)
class SmoothedRepresentation:
    """(x_i, sigma_i, c_i > 0) members of a family with the fit residual."""

    atoms: tuple[tuple[float, float, float], ...]
    family: str
    residual: float
    diagnostics: Mapping = field(default_factory=dict)

    def density_at(self, x: float) -> float:
        fam = DiracFamily(self.family, tuple(s for _, s, _ in self.atoms))
        return sum(c * fam.density(s, x0, x) for x0, s, c in self.atoms)

    def as_dict(self) -> dict:
        return {"atoms": [[x, s, c] for x, s, c in self.atoms], "family": self.family,
                "residual": self.residual, "diagnostics": dict(self.diagnostics)}


def _pad_centers(points: Sequence[float], m: int, domain) -> list[float]:
    """Add midpoints of the widest gaps (domain edges included) up to m centers.

    A k-atom fit has k degrees of freedom against m constraints; smoothing
    perturbs every constraint by O(sigma^2), so k < m generically leaves an
    O(sigma^2) residual no sigma can fix.  Extra centers restore solvability
    while keeping the original atoms dominant as sigma -> 0.
    """
    lo, hi = domain
    centers = sorted(points)
    while len(centers) < m:
        knots = [lo] + centers + [hi]
        gaps = [(knots[i + 1] - knots[i], i) for i in range(len(knots) - 1)]
        width, i = max(gaps)
        if width <= 1e-12 * (hi - lo):
            break
        centers.append(0.5 * (knots[i] + knots[i + 1]))
        centers.sort()
    return centers


def smooth_representation(atomic: AtomicRepresentation, L: TruncatedFunctional,
                          family: DiracFamily, tol: float = 1e-8,
                          weight_floor: float = WEIGHT_FLOOR) -> SmoothedRepresentation:
    """Replace atoms by family members, re-solving weights for descending sigma.

    Accepts the first (largest) sigma whose least-squares weights are all
    >= weight_floor with max-abs residual <= tol.  Raises SmoothingFailed when
    the whole grid is exhausted; for functionals that depend on exceptional
    pointwise values this is the mathematically forced outcome, since every
    family member integrates the underlying function only.
    """
    if atomic.residual > tol:
        raise ValueError("atomic residual already exceeds the smoothing tolerance")
    centers = _pad_centers(atomic.points, L.size, L.domain)
    values = np.array(L.values, dtype=float)
    attempts = []
    for sigma in family.sigmas:
        M = np.empty((L.size, len(centers)))
        for j, b in enumerate(L.basis):
            for i, x0 in enumerate(centers):
                if b.coeffs is not None and family.kind in ("gaussian", "box"):
                    M[j, i] = family.poly_moment(sigma, x0, b.coeffs)
                else:
                    M[j, i] = family.integrate(sigma, x0, b.fn)
        gram = M.T @ M
        ridge_applied = False
        try:
            c = np.linalg.solve(gram, M.T @ values)
        except np.linalg.LinAlgError:
            ridge_applied = True
            c = np.linalg.solve(gram + RIDGE * np.eye(len(centers)), M.T @ values)
        if not np.all(np.isfinite(c)) or np.linalg.cond(gram) > 1e14:
            ridge_applied = True
            c = np.linalg.solve(gram + RIDGE * np.eye(len(centers)), M.T @ values)
        residual = float(np.max(np.abs(M @ c - values)))
        attempts.append((sigma, residual, float(np.min(c))))
        if residual <= tol and np.all(c >= weight_floor):
            atoms = tuple((x0, sigma, float(ci)) for x0, ci in zip(centers, c))
            diag = {"sigma": sigma, "ridge_applied": ridge_applied,
                    "condition": float(np.linalg.cond(M)),
                    "padded_centers": len(centers) - len(atomic.points),
                    "attempts": attempts}
            return SmoothedRepresentation(atoms, family.kind, residual, diag)
    detail = ", ".join(f"sigma={s:g}: residual={r:.3e}, min weight={w:.3e}"
                       for s, r, w in attempts)
    raise SmoothingFailed(
        f"no sigma in the {family.kind} grid admits a nonnegative fit ({detail})")


def emit_density(r: SmoothedRepresentation, grid) -> list[float]:
    """Pointwise values of the smoothed density sum on a grid."""
    return [r.density_at(float(x)) for x in grid]
