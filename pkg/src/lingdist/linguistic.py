"""Linguistic term sets and the 2-tuple representation.

A 2-tuple ``(s_k, alpha)`` stores a continuous value ``kappa = k + alpha`` on
the index axis of a term set with odd granularity ``g``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

# Absorbs floating-point overshoot of aggregated index values at the ends of
# the scale (e.g. an expectation of 4.000000000000001 on a 5-term scale).
DOMAIN_SLACK = 1e-9


class ScaleMismatchError(ValueError):
    """Raised when two values on different term sets are combined."""


@dataclass(frozen=True)
class LinguisticScale:
    """An ordered term set ``S = {s_0, ..., s_{g-1}}`` with odd granularity."""

    granularity: int
    labels: Optional[tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        g = self.granularity
        if isinstance(g, bool) or not isinstance(g, int):
            raise TypeError(f"granularity must be an int, got {type(g).__name__}")
        if g < 3 or g % 2 == 0:
            raise ValueError(f"granularity must be odd and >= 3, got {g}")
        if self.labels is not None:
            labels = tuple(str(lab) for lab in self.labels)
            if len(labels) != g:
                raise ValueError(
                    f"expected {g} labels for granularity {g}, got {len(labels)}"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def max_index(self) -> int:
        return self.granularity - 1

    def label(self, k: int) -> str:
        if not 0 <= k < self.granularity:
            raise IndexError(f"term index {k} outside 0..{self.granularity - 1}")
        if self.labels is not None:
            return self.labels[k]
        return f"s_{k}"

    def __str__(self) -> str:
        return f"S^{self.granularity}"


@dataclass(frozen=True)
class TwoTuple:
    """A linguistic 2-tuple ``(s_index, translation)``.

    ``translation`` lies in ``[-0.5, 0.5)``; the value ``-0.5`` only arises
    from :func:`delta` at half points (round-half-up).
    """

    scale: LinguisticScale
    index: int
    translation: float = 0.0

    def __post_init__(self):
        g = self.scale.granularity
        if not 0 <= self.index <= g - 1:
            raise ValueError(f"index {self.index} outside 0..{g - 1}")
        a = float(self.translation)
        if not -0.5 <= a < 0.5:
            raise ValueError(f"translation {a} outside [-0.5, 0.5)")
        kappa = self.index + a
        if kappa < 0 or kappa > g - 1:
            raise ValueError(f"2-tuple ({self.index}, {a}) leaves [0, {g - 1}]")
        object.__setattr__(self, "translation", a)

    @property
    def value(self) -> float:
        return delta_inv(self)

    def __str__(self) -> str:
        return f"({self.scale.label(self.index)}, {self.translation:+.4f})"


def _check_kappa(scale: LinguisticScale, kappa: float) -> float:
    kappa = float(kappa)
    top = scale.granularity - 1
    if math.isnan(kappa) or kappa < -DOMAIN_SLACK or kappa > top + DOMAIN_SLACK:
        raise ValueError(f"value {kappa} outside [0, {top}] for {scale}")
    return min(max(kappa, 0.0), float(top))


def delta(scale: LinguisticScale, kappa: float) -> TwoTuple:
    """Map an index-space value to its 2-tuple (round half up)."""
    kappa = _check_kappa(scale, kappa)
    k = int(math.floor(kappa + 0.5))
    # k - 0.5 <= kappa < k + 0.5 keeps the subtraction exact (Sterbenz)
    return TwoTuple(scale, k, kappa - k)


def delta_inv(t: TwoTuple) -> float:
    return t.index + t.translation


def negate(t: TwoTuple) -> TwoTuple:
    return delta(t.scale, (t.scale.granularity - 1) - delta_inv(t))


def _same_scale(a: LinguisticScale, b: LinguisticScale) -> None:
    if a.granularity != b.granularity:
        raise ScaleMismatchError(f"cannot combine values on {a} and {b}")


def compare(a: TwoTuple, b: TwoTuple) -> int:
    """Return -1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    _same_scale(a.scale, b.scale)
    x, y = delta_inv(a), delta_inv(b)
    return (x > y) - (x < y)


def tuple_max(a: TwoTuple, b: TwoTuple) -> TwoTuple:
    return a if compare(a, b) >= 0 else b


def tuple_min(a: TwoTuple, b: TwoTuple) -> TwoTuple:
    return a if compare(a, b) <= 0 else b


def term(scale: LinguisticScale, k: int) -> TwoTuple:
    """The plain term ``s_k`` as ``(s_k, 0)``."""
    return TwoTuple(scale, k, 0.0)

