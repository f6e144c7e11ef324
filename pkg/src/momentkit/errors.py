"""Exception hierarchy.

Two broad categories drive the service/CLI error mapping: input-contract
violations (bad dimensions, missing degrees, degenerate parameters) and
numerical failures (series that do not converge, smoothing sweeps that never
succeed).  Everything derives from :class:`MomentError`.
"""

from __future__ import annotations


class MomentError(Exception):
    """Base class for all toolkit errors."""

    category = "input"


class SchemaError(MomentError):
    """A JSON document or CLI argument does not match its documented schema."""


class DimensionMismatch(MomentError):
    """Operands disagree on the ambient dimension."""


class DegreeExceeded(MomentError):
    """An operation needs moments beyond the truncation degree."""


class DegenerateScale(MomentError):
    """Affine pushforward with a zero scale entry is not invertible."""


class NonRealSequence(MomentError):
    """A real-only consumer received a sequence with imaginary parts."""


class NotNormalized(MomentError):
    """Positive-definiteness testing requires a unit mass entry."""


class NegativeEvenMoment(MomentError):
    """Support-radius estimation needs nonnegative even moments."""


class UnboundedSupport(MomentError):
    """A density was declared on an unbounded box where a bounded one is required."""


class NotConverged(MomentError):
    """Series evaluation hit the truncation degree before the stopping rule fired."""

    category = "numerical"


class OscillationUnderresolved(MomentError):
    """The oscillation-resolving quadrature rule would exceed the point budget."""

    category = "numerical"


class Infeasible(MomentError):
    """No nonnegative atomic combination reproduces the target values."""

    category = "numerical"


class SmoothingFailed(MomentError):
    """No member of the sigma sweep yields positive weights within tolerance."""

    category = "numerical"
