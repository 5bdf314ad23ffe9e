"""Linguistic distribution assessments and their algebra."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linguistic import LinguisticScale, ScaleMismatchError, TwoTuple, delta

SUM_TOL = 1e-9
# Sums closer to 1 than this are left untouched so that renormalisation is
# idempotent (serialised values read back bit-for-bit).
RENORM_TOL = 1e-12
# Expectation / inaccuracy differences below this count as ties in ranking.
TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DistributionAssessment:
    """Proportions ``beta_k`` over the terms of ``scale``.

    Stored dense and read-only. Sums within ``SUM_TOL`` of 1 are renormalised
    on construction (unless already within ``RENORM_TOL``); anything further
    off is rejected.
    """

    scale: LinguisticScale
    proportions: np.ndarray

    def __post_init__(self):
        beta = np.array(self.proportions, dtype=np.float64).reshape(-1)
        g = self.scale.granularity
        if beta.shape != (g,):
            raise ValueError(f"expected {g} proportions for {self.scale}, got {beta.size}")
        if not np.all(np.isfinite(beta)):
            raise ValueError("proportions must be finite")
        if np.any(beta < 0):
            raise ValueError(f"negative proportion in {beta.tolist()}")
        total = beta.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"proportions sum to {total!r}, not 1")
        if abs(total - 1.0) > RENORM_TOL:
            beta = beta / total
        beta.flags.writeable = False
        object.__setattr__(self, "proportions", beta)

    @classmethod
    def from_mapping(cls, scale: LinguisticScale, mass: Mapping[int, float]):
        """Build from a sparse ``{term index: proportion}`` mapping."""
        beta = np.zeros(scale.granularity)
        for k, p in mass.items():
            if not 0 <= k < scale.granularity:
                raise IndexError(f"term index {k} outside 0..{scale.granularity - 1}")
            beta[k] += p
        return cls(scale, beta)

    def support(self) -> dict[int, float]:
        return {k: float(b) for k, b in enumerate(self.proportions) if b != 0.0}

    @property
    def expectation_index(self) -> float:
        return float(np.dot(np.arange(self.scale.granularity), self.proportions))

    def __eq__(self, other):
        if not isinstance(other, DistributionAssessment):
            return NotImplemented
        return self.scale == other.scale and np.array_equal(
            self.proportions, other.proportions
        )

    def __hash__(self):
        return hash((self.scale, self.proportions.tobytes()))

    def __repr__(self):
        return f"DistributionAssessment({self.scale}, {self.support()})"

    def format(self, digits: int = 4) -> str:
        parts = [
            f"<{self.scale.label(k)}, {b:.{digits}f}>" for k, b in self.support().items()
        ]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class RankingKey:
    expectation: float
    inaccuracy: float


def _check_same_scale(ms: Sequence[DistributionAssessment]) -> LinguisticScale:
    if not ms:
        raise ValueError("need at least one distribution assessment")
    g = ms[0].scale.granularity
    for m in ms[1:]:
        if m.scale.granularity != g:
            raise ScaleMismatchError(f"cannot combine {ms[0].scale} with {m.scale}")
    return ms[0].scale


def from_term(scale: LinguisticScale, k: int) -> DistributionAssessment:
    if not 0 <= k < scale.granularity:
        raise IndexError(f"term index {k} outside 0..{scale.granularity - 1}")
    beta = np.zeros(scale.granularity)
    beta[k] = 1.0
    return DistributionAssessment(scale, beta)


def expectation(m: DistributionAssessment) -> TwoTuple:
    return delta(m.scale, m.expectation_index)


def check_weights(w, n: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got {w.size}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError(f"weights must be finite and nonnegative: {w.tolist()}")
    if abs(w.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"weights sum to {w.sum()!r}, not 1")
    return w


def dawa(ms: Sequence[DistributionAssessment], w) -> DistributionAssessment:
    """Weighted average of assessments, component-wise over proportions."""
    scale = _check_same_scale(ms)
    w = check_weights(w, len(ms))
    stacked = np.stack([m.proportions for m in ms])
    return DistributionAssessment(scale, w @ stacked)


def distance_legacy(m1: DistributionAssessment, m2: DistributionAssessment) -> float:
    """Half the L1 gap between proportion vectors; blind to term order."""
    _check_same_scale([m1, m2])
    return 0.5 * float(np.abs(m1.proportions - m2.proportions).sum())


def distance(m1: DistributionAssessment, m2: DistributionAssessment) -> float:
    """Gap between expectations, normalised to ``[0, 1]`` by ``g - 1``."""
    _check_same_scale([m1, m2])
    g = m1.scale.granularity
    ks = np.arange(g)
    return abs(float(np.dot(m1.proportions - m2.proportions, ks))) / (g - 1)


def inaccuracy(m: DistributionAssessment) -> float:
    """Shannon entropy of the proportions in bits (``0 log 0 = 0``)."""
    beta = m.proportions[m.proportions > 0]
    return float(-(beta * np.log2(beta)).sum()) + 0.0


def ranking_key(m: DistributionAssessment) -> RankingKey:
    return RankingKey(m.expectation_index, inaccuracy(m))


def compare_keys(a: RankingKey, b: RankingKey) -> int:
    if abs(a.expectation - b.expectation) >= TIE_TOL:
        return 1 if a.expectation > b.expectation else -1
    if abs(a.inaccuracy - b.inaccuracy) >= TIE_TOL:
        return 1 if a.inaccuracy < b.inaccuracy else -1
    return 0


def compare(m1: DistributionAssessment, m2: DistributionAssessment) -> int:
    """1 if ``m1`` is preferred, -1 if ``m2`` is, 0 if they are equal.

    Higher expectation wins; on an expectation tie the lower inaccuracy wins.
    """
    _check_same_scale([m1, m2])
    return compare_keys(ranking_key(m1), ranking_key(m2))


def rank_keys(keys: Sequence[RankingKey]) -> list[list[int]]:
    """Group positions best-first; each inner list is one tie group."""
    order = sorted(
        range(len(keys)),
        key=functools.cmp_to_key(lambda i, j: -compare_keys(keys[i], keys[j])),
    )
    groups: list[list[int]] = []
    for idx in order:
        if groups and compare_keys(keys[groups[-1][0]], keys[idx]) == 0:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def rank(ms: Sequence[DistributionAssessment]) -> list[list[int]]:
    """Rank assessments best-first, as tie groups of input positions."""
    _check_same_scale(ms)
    return rank_keys([ranking_key(m) for m in ms])


def flatten_ranking(groups: Iterable[Sequence[int]]) -> list[int]:
    return [i for group in groups for i in group]
