"""Extended linguistic hierarchies and cross-granularity transformations.

Every participating scale embeds losslessly into the scale whose granularity
is ``lcm(g_1 - 1, ..., g_n - 1) + 1``. Moving to a participating scale goes
up to that level first (exact relocation of mass) and then down (each fine
term is split between the two adjacent coarse terms, then averaged).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .distribution import DistributionAssessment, dawa
from .linguistic import LinguisticScale, TwoTuple, delta, delta_inv


class ScaleNotInContextError(ValueError):
    pass


def tf(t: TwoTuple, target: LinguisticScale) -> TwoTuple:
    """Rescale a 2-tuple onto another term set by index proportion."""
    g, h = t.scale.granularity, target.granularity
    return delta(target, delta_inv(t) * (h - 1) / (g - 1))


def tuple_to_distribution(t: TwoTuple) -> DistributionAssessment:
    """The two-term distribution whose expectation is exactly ``t``."""
    k, a = t.index, t.translation
    mass = {}
    if a >= 0:
        mass[k] = 1.0 - a
        if a > 0:
            mass[k + 1] = a
    else:
        mass[k - 1] = -a
        mass[k] = 1.0 + a
    return DistributionAssessment.from_mapping(t.scale, mass)


def lcm_granularity(granularities: Iterable[int]) -> int:
    return math.lcm(*(g - 1 for g in granularities)) + 1


def _split_table(g_star: int, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Lower target index and upper share for each term of the LCM scale.

    Integer arithmetic keeps both exact: ``k (g - 1) / (g* - 1)`` has floor
    ``lower`` and fractional part ``theta``.
    """
    ks = np.arange(g_star, dtype=np.int64)
    num = ks * (g - 1)
    lower = num // (g_star - 1)
    theta = (num % (g_star - 1)) / (g_star - 1)
    return lower, theta


@dataclass(frozen=True, eq=False)
class HierarchyContext:
    """Participating scales plus the LCM level that embeds all of them.

    Scales of equal granularity are collapsed (first one wins). Split tables
    for the downward transformation are built eagerly.
    """

    scales: tuple[LinguisticScale, ...]
    lcm_scale: LinguisticScale = field(init=False)
    _splits: dict = field(init=False, repr=False)

    def __post_init__(self):
        seen: dict[int, LinguisticScale] = {}
        for s in self.scales:
            if not isinstance(s, LinguisticScale):
                raise TypeError(f"expected LinguisticScale, got {type(s).__name__}")
            seen.setdefault(s.granularity, s)
        if not seen:
            raise ValueError("a hierarchy needs at least one scale")
        scales = tuple(seen.values())
        g_star = lcm_granularity(seen)
        lcm_scale = seen.get(g_star, LinguisticScale(g_star))
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "lcm_scale", lcm_scale)
        splits = {g: _split_table(g_star, g) for g in seen}
        object.__setattr__(self, "_splits", splits)

    @property
    def granularities(self) -> tuple[int, ...]:
        return tuple(s.granularity for s in self.scales)

    def stride(self, scale: LinguisticScale) -> int:
        """Spacing on the LCM scale between images of adjacent terms."""
        self._require(scale, allow_lcm=True)
        return (self.lcm_scale.granularity - 1) // (scale.granularity - 1)

    def scale_for(self, granularity: int) -> LinguisticScale:
        for s in self.scales:
            if s.granularity == granularity:
                return s
        if granularity == self.lcm_scale.granularity:
            return self.lcm_scale
        raise ScaleNotInContextError(f"S^{granularity} is not part of this hierarchy")

    def split_table(self, target: LinguisticScale) -> tuple[np.ndarray, np.ndarray]:
        self._require(target)
        return self._splits[target.granularity]

    def _require(self, scale: LinguisticScale, allow_lcm: bool = False) -> None:
        g = scale.granularity
        if g in self._splits:
            return
        if allow_lcm and g == self.lcm_scale.granularity:
            return
        raise ScaleNotInContextError(
            f"{scale} is not one of {[str(s) for s in self.scales]}"
        )


def build_context(scales: Sequence[LinguisticScale]) -> HierarchyContext:
    return HierarchyContext(tuple(scales))


def upcast(m: DistributionAssessment, ctx: HierarchyContext) -> DistributionAssessment:
    """Relocate mass from ``m``'s scale onto the LCM scale (lossless)."""
    g_star = ctx.lcm_scale.granularity
    if m.scale.granularity == g_star:
        return m
    r = ctx.stride(m.scale)
    gamma = np.zeros(g_star)
    gamma[::r] = m.proportions
    return DistributionAssessment(ctx.lcm_scale, gamma)


def upcast_rows(rows: np.ndarray, g: int, ctx: HierarchyContext) -> np.ndarray:
    """Array form of :func:`upcast` over the last axis."""
    g_star = ctx.lcm_scale.granularity
    if g == g_star:
        return np.array(rows, dtype=np.float64)
    r = (g_star - 1) // (g - 1)
    out = np.zeros(rows.shape[:-1] + (g_star,))
    out[..., ::r] = rows
    return out


def decompose_level(
    ctx: HierarchyContext, target: LinguisticScale
) -> list[DistributionAssessment]:
    """Each LCM term ``s_k`` rescaled onto ``target`` and spread over two terms."""
    ctx.split_table(target)
    lcm = ctx.lcm_scale
    return [
        tuple_to_distribution(tf(TwoTuple(lcm, k, 0.0), target))
        for k in range(lcm.granularity)
    ]


def downcast(
    m: DistributionAssessment, ctx: HierarchyContext, target: LinguisticScale
) -> DistributionAssessment:
    """Average the per-term decompositions with ``m``'s proportions as weights."""
    if m.scale.granularity != ctx.lcm_scale.granularity:
        raise ScaleNotInContextError(f"downcast expects {ctx.lcm_scale}, got {m.scale}")
    if target.granularity == ctx.lcm_scale.granularity:
        return DistributionAssessment(target, m.proportions)
    beta = downcast_rows(m.proportions[None, :], ctx, target)[0]
    return DistributionAssessment(target, beta)


def downcast_rows(
    rows: np.ndarray, ctx: HierarchyContext, target: LinguisticScale
) -> np.ndarray:
    """Array form of :func:`downcast` for a stack of LCM-level rows."""
    lower, theta = ctx.split_table(target)
    return kernels.rebin(rows, lower, theta, target.granularity)


def downcast_via_dawa(
    m: DistributionAssessment, ctx: HierarchyContext, target: LinguisticScale
) -> DistributionAssessment:
    """Reference route: literal DAWA over :func:`decompose_level` entries."""
    return dawa(decompose_level(ctx, target), m.proportions)


def transform(
    m: DistributionAssessment, ctx: HierarchyContext, target: LinguisticScale
) -> DistributionAssessment:
    """Move ``m`` onto ``target``, always through the LCM scale."""
    if m.scale.granularity == target.granularity:
        return m
    ctx.stride(m.scale)
    return downcast(upcast(m, ctx), ctx, target)
