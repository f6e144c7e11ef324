"""Compensated accumulators with cancellation tracking.

Alternating binomial and power-series sums in this package are the main
floating-point hazard: partial sums pass through terms many orders of
magnitude larger than the result.  Every floating accumulation therefore goes
through a Neumaier-compensated accumulator that also tracks the sum of
absolute terms, so callers can report the cancellation condition
``sum |t_k| / |sum t_k|`` alongside the value.
"""

from __future__ import annotations

_TINY = 1e-300


class NeumaierSum:
    """Neumaier variant of Kahan summation for real terms."""

    __slots__ = ("_sum", "_comp", "abs_sum")

    def __init__(self) -> None:
        self._sum = 0.0
        self._comp = 0.0
        self.abs_sum = 0.0

    def add(self, term: float) -> None:
        t = self._sum + term
        if abs(self._sum) >= abs(term):
            self._comp += (self._sum - t) + term
        else:
            self._comp += (term - t) + self._sum
        self._sum = t
        self.abs_sum += abs(term)

    @property
    def value(self) -> float:
        return self._sum + self._comp

    @property
    def condition(self) -> float:
        return self.abs_sum / max(abs(self.value), _TINY)


class ComplexNeumaierSum:
    """Component-wise compensated accumulator for complex terms."""

    __slots__ = ("_re", "_im", "abs_sum")

    def __init__(self) -> None:
        self._re = NeumaierSum()
        self._im = NeumaierSum()
        self.abs_sum = 0.0

    def add(self, term: complex) -> None:
        self._re.add(term.real)
        self._im.add(term.imag)
        self.abs_sum += abs(term)

    @property
    def value(self) -> complex:
        return complex(self._re.value, self._im.value)

    @property
    def condition(self) -> float:
        return self.abs_sum / max(abs(self.value), _TINY)
