"""Large-scale multi-attribute group decision making with multi-granular
linguistic distribution assessments.

The pipeline (:func:`solve`) runs six steps:

1. fuse each scale group's term assessments into distribution matrices;
2. lift every matrix onto the LCM scale;
3. average the lifted matrices with group weights;
4. pick attribute weights (given, maximum deviation, or an LP under
   partial weight knowledge);
5. aggregate attributes per alternative and rank;
6. express each collective assessment on every original scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import kernels
from .distribution import (
    SUM_TOL,
    DistributionAssessment,
    RankingKey,
    check_weights,
    inaccuracy,
    rank_keys,
)
from .linguistic import LinguisticScale, TwoTuple, delta
from .multigranular import HierarchyContext, downcast_rows, upcast_rows
from .simplex import InfeasibleError, LinearConstraint, lexicographic_optimum

Matrix = tuple[tuple[DistributionAssessment, ...], ...]


class ProblemError(ValueError):
    """The decision problem violates its own invariants."""


class SolveError(RuntimeError):
    """A pipeline step failed; ``stage`` names the step."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class DegenerateDeviationError(ValueError):
    """All alternatives look identical under every attribute."""


@dataclass(frozen=True)
class DecisionMaker:
    id: str
    scale: int
    importance: Optional[float] = None


@dataclass(frozen=True)
class KnownWeights:
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


@dataclass(frozen=True)
class UnknownWeights:
    pass


@dataclass(frozen=True)
class PartialWeights:
    constraints: tuple[LinearConstraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))


WeightMode = Union[KnownWeights, UnknownWeights, PartialWeights]


@dataclass(frozen=True)
class DecisionProblem:
    """Alternatives x attributes assessed by decision makers on several scales.

    Exactly one of ``assessments`` (``(dm, alternative, attribute) -> term
    index``) or ``group_matrices`` (scale position -> n x m matrix of fused
    distributions) is given. In the fused form the decision-maker list still
    fixes the group weights.
    """

    alternatives: tuple[str, ...]
    attributes: tuple[str, ...]
    scales: tuple[LinguisticScale, ...]
    decision_makers: tuple[DecisionMaker, ...]
    assessments: Optional[Mapping[tuple[str, str, str], int]] = None
    group_matrices: Optional[Mapping[int, Matrix]] = None
    weight_mode: WeightMode = field(default_factory=UnknownWeights)

    def __post_init__(self):
        for name in ("alternatives", "attributes", "scales", "decision_makers"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.group_matrices is not None:
            frozen = {
                int(h): tuple(tuple(row) for row in mat)
                for h, mat in self.group_matrices.items()
            }
            object.__setattr__(self, "group_matrices", frozen)

    @property
    def uses_importance(self) -> bool:
        return any(d.importance is not None for d in self.decision_makers)

    def members(self, h: int) -> list[DecisionMaker]:
        return [d for d in self.decision_makers if d.scale == h]

    def active_scales(self) -> list[int]:
        return [h for h in range(len(self.scales)) if self.members(h)]


def validate_problem(problem: DecisionProblem) -> list[str]:
    """Every invariant violation, each naming its location."""
    issues: list[str] = []
    n, m = len(problem.alternatives), len(problem.attributes)
    if n == 0:
        issues.append("alternatives: at least one alternative is required")
    if m == 0:
        issues.append("attributes: at least one attribute is required")
    for label, ids in (("alternatives", problem.alternatives), ("attributes", problem.attributes)):
        if len(set(ids)) != len(ids):
            issues.append(f"{label}: duplicate identifiers")
    if not problem.scales:
        issues.append("scales: at least one scale is required")
    if not problem.decision_makers:
        issues.append("decision_makers: at least one decision maker is required")
    dm_ids = [d.id for d in problem.decision_makers]
    if len(set(dm_ids)) != len(dm_ids):
        issues.append("decision_makers: duplicate identifiers")
    for d in problem.decision_makers:
        if not 0 <= d.scale < len(problem.scales):
            issues.append(f"decision maker {d.id!r}: unknown scale {d.scale}")
    for h in range(len(problem.scales)):
        if not problem.members(h):
            issues.append(f"scale {problem.scales[h]}: no decision maker uses it")

    given = [d.importance is not None for d in problem.decision_makers]
    if any(given):
        if not all(given):
            missing = [d.id for d in problem.decision_makers if d.importance is None]
            issues.append(f"decision makers {missing}: importance missing (all or none)")
        else:
            lam = np.array([d.importance for d in problem.decision_makers])
            if np.any(lam < 0):
                bad = [d.id for d in problem.decision_makers if d.importance < 0]
                issues.append(f"decision makers {bad}: negative importance")
            if abs(lam.sum() - 1.0) > SUM_TOL:
                issues.append(f"decision_makers: importances sum to {lam.sum():.12g}, not 1")
            for h in problem.active_scales():
                if sum(d.importance for d in problem.members(h)) <= 0:
                    issues.append(f"scale {problem.scales[h]}: group has zero total importance")

    has_raw = problem.assessments is not None
    has_fused = problem.group_matrices is not None
    if has_raw == has_fused:
        issues.append("assessments: give either per-decision-maker terms or fused matrices")
    elif has_raw:
        issues.extend(_validate_raw(problem))
    else:
        issues.extend(_validate_fused(problem))

    mode = problem.weight_mode
    if isinstance(mode, KnownWeights):
        try:
            check_weights(mode.weights, m)
        except ValueError as exc:
            issues.append(f"attribute_weights: {exc}")
    elif isinstance(mode, PartialWeights):
        for c, con in enumerate(mode.constraints):
            if len(con.coefficients) != m:
                issues.append(
                    f"attribute_weights constraint {c}: {len(con.coefficients)} "
                    f"coefficients, expected {m}"
                )
    elif not isinstance(mode, UnknownWeights):
        issues.append(f"attribute_weights: unknown mode {mode!r}")
    return issues


def _validate_raw(problem: DecisionProblem) -> list[str]:
    issues = []
    dms = {d.id: d for d in problem.decision_makers}
    alts, attrs = set(problem.alternatives), set(problem.attributes)
    for (dm, alt, attr), k in problem.assessments.items():
        where = f"assessment ({dm}, {alt}, {attr})"
        if dm not in dms:
            issues.append(f"{where}: unknown decision maker")
            continue
        if alt not in alts:
            issues.append(f"{where}: unknown alternative")
        if attr not in attrs:
            issues.append(f"{where}: unknown attribute")
        h = dms[dm].scale
        if 0 <= h < len(problem.scales):
            g = problem.scales[h].granularity
            if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k < g:
                issues.append(f"{where}: term {k!r} is not an index of S^{g}")
    for d in problem.decision_makers:
        for alt in problem.alternatives:
            for attr in problem.attributes:
                if (d.id, alt, attr) not in problem.assessments:
                    issues.append(f"assessment ({d.id}, {alt}, {attr}): missing")
    return issues


def _validate_fused(problem: DecisionProblem) -> list[str]:
    issues = []
    n, m = len(problem.alternatives), len(problem.attributes)
    for h, mat in problem.group_matrices.items():
        if not 0 <= h < len(problem.scales):
            issues.append(f"fused matrix for unknown scale position {h}")
            continue
        scale = problem.scales[h]
        if len(mat) != n or any(len(row) != m for row in mat):
            issues.append(f"fused matrix for {scale}: expected {n} x {m} cells")
            continue
        for i, row in enumerate(mat):
            for j, cell in enumerate(row):
                if cell.scale.granularity != scale.granularity:
                    issues.append(
                        f"fused matrix for {scale}, cell ({problem.alternatives[i]}, "
                        f"{problem.attributes[j]}): on {cell.scale}"
                    )
    for h in problem.active_scales():
        if h not in problem.group_matrices:
            issues.append(f"fused matrix for {problem.scales[h]}: missing")
    return issues


def _require_valid(problem: DecisionProblem) -> None:
    issues = validate_problem(problem)
    if issues:
        raise ProblemError("; ".join(issues))


# -- Step 1 -----------------------------------------------------------------


def group_weights(problem: DecisionProblem) -> np.ndarray:
    """Share of decision-maker count (or importance) held by each scale group."""
    r = len(problem.scales)
    omega = np.zeros(r)
    for d in problem.decision_makers:
        omega[d.scale] += d.importance if problem.uses_importance else 1.0
    return omega / omega.sum()


def _fuse_array(problem: DecisionProblem, h: int) -> np.ndarray:
    members = problem.members(h)
    if not members:
        raise ProblemError(f"no decision maker uses {problem.scales[h]}")
    g = problem.scales[h].granularity
    if problem.group_matrices is not None:
        mat = problem.group_matrices[h]
        return np.array([[cell.proportions for cell in row] for row in mat])
    choices = np.empty(
        (len(members), len(problem.alternatives), len(problem.attributes)), dtype=np.int64
    )
    for l, d in enumerate(members):
        for i, alt in enumerate(problem.alternatives):
            for j, attr in enumerate(problem.attributes):
                try:
                    choices[l, i, j] = problem.assessments[(d.id, alt, attr)]
                except KeyError:
                    raise ProblemError(f"assessment ({d.id}, {alt}, {attr}) missing") from None
    if problem.uses_importance:
        weights = np.array([d.importance for d in members], dtype=np.float64)
    else:
        weights = np.ones(len(members))
    return kernels.fuse_counts(choices, weights, g)


def _to_matrix(arr: np.ndarray, scale: LinguisticScale) -> Matrix:
    return tuple(tuple(DistributionAssessment(scale, cell) for cell in row) for row in arr)


def _to_array(mat: Matrix) -> np.ndarray:
    return np.array([[cell.proportions for cell in row] for row in mat])


def fuse_group(problem: DecisionProblem, h: int) -> tuple[Matrix, float]:
    """Distribution matrix of scale group ``h`` and that group's weight."""
    arr = _fuse_array(problem, h)
    return _to_matrix(arr, problem.scales[h]), float(group_weights(problem)[h])


# -- Steps 2-3 --------------------------------------------------------------


def unify(matrices: Sequence[Matrix], ctx: HierarchyContext) -> list[Matrix]:
    """Lift every cell of every matrix onto the LCM scale."""
    out = []
    for mat in matrices:
        g = mat[0][0].scale.granularity
        ctx.stride(mat[0][0].scale)
        out.append(_to_matrix(upcast_rows(_to_array(mat), g, ctx), ctx.lcm_scale))
    return out


def aggregate_groups(unified: Sequence[Matrix], omega) -> Matrix:
    """Cell-wise weighted average of the lifted group matrices."""
    omega = check_weights(omega, len(unified))
    stacked = np.stack([_to_array(mat) for mat in unified])
    scale = unified[0][0][0].scale
    return _to_matrix(np.tensordot(omega, stacked, axes=1), scale)


# -- Step 4 -----------------------------------------------------------------


def _expectation_matrix(Z: Matrix) -> np.ndarray:
    arr = _to_array(Z)
    return arr @ np.arange(arr.shape[-1])


def deviation_coefficients(Z: Matrix) -> np.ndarray:
    """Coefficient of each ``w_j`` in the total deviation ``V(w)``."""
    g = Z[0][0].scale.granularity
    return kernels.deviation_sums(_expectation_matrix(Z)) / (g - 1)


def deviation_coefficient(Z: Matrix, j: int) -> float:
    return float(deviation_coefficients(Z)[j])


def weights_m1(Z: Matrix) -> np.ndarray:
    """Maximum-deviation weights with nothing known: normalised coefficients."""
    c = deviation_coefficients(Z)
    total = c.sum()
    if total <= 0:
        raise DegenerateDeviationError(
            "every attribute has zero deviation across alternatives; "
            "supply attribute weights explicitly"
        )
    return c / total


def m2_solution(Z: Matrix, constraints: Sequence[LinearConstraint]) -> tuple[np.ndarray, bool]:
    """Weights maximising deviation under ``constraints``; flag for tied optima."""
    c = deviation_coefficients(Z)
    return lexicographic_optimum(c, constraints)


def weights_m2(Z: Matrix, constraints: Sequence[LinearConstraint] = ()) -> np.ndarray:
    return m2_solution(Z, constraints)[0]


# -- Step 5 -----------------------------------------------------------------


def aggregate_attributes(Z: Matrix, w) -> list[DistributionAssessment]:
    """Weighted average across attributes, one collective per alternative."""
    arr = _to_array(Z)
    w = check_weights(w, arr.shape[1])
    scale = Z[0][0].scale
    return [DistributionAssessment(scale, row) for row in np.einsum("j,ijk->ik", w, arr)]


def rank_alternatives(zs: Sequence[DistributionAssessment]) -> list[list[int]]:
    if not zs:
        raise ValueError("nothing to rank")
    return rank_keys([RankingKey(z.expectation_index, inaccuracy(z)) for z in zs])


# -- Step 6 -----------------------------------------------------------------


def represent_per_scale(
    zs: Sequence[DistributionAssessment], ctx: HierarchyContext
) -> dict[int, list[DistributionAssessment]]:
    """Each collective assessment expressed on every participating scale."""
    rows = np.stack([z.proportions for z in zs])
    views = {}
    for scale in ctx.scales:
        if scale.granularity == ctx.lcm_scale.granularity:
            arr = rows
        else:
            arr = downcast_rows(rows, ctx, scale)
        views[scale.granularity] = [DistributionAssessment(scale, r) for r in arr]
    return views


# -- Driver -----------------------------------------------------------------


@dataclass(frozen=True)
class DecisionOutcome:
    alternatives: tuple[str, ...]
    attributes: tuple[str, ...]
    scales: tuple[LinguisticScale, ...]
    lcm_scale: LinguisticScale
    group_weights: tuple[float, ...]
    group_matrices: tuple[Matrix, ...]
    unified: tuple[Matrix, ...]
    collective_matrix: Matrix
    deviation: tuple[float, ...]
    attribute_weights: tuple[float, ...]
    weight_provenance: str
    collective: tuple[DistributionAssessment, ...]
    expectations: tuple[TwoTuple, ...]
    inaccuracies: tuple[float, ...]
    ranking: tuple[tuple[str, ...], ...]
    per_scale_views: tuple[tuple[DistributionAssessment, ...], ...]

    def ranking_text(self) -> str:
        return " > ".join(" = ".join(group) for group in self.ranking)

    def view(self, granularity: int) -> tuple[DistributionAssessment, ...]:
        for scale, row in zip(self.scales, self.per_scale_views):
            if scale.granularity == granularity:
                return row
        raise KeyError(granularity)


def _stage(name: str):
    def wrap(fn, *args):
        try:
            return fn(*args)
        except SolveError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise SolveError(name, str(exc)) from exc

    return wrap


def _choose_weights(problem: DecisionProblem, Z: Matrix) -> tuple[np.ndarray, str]:
    mode = problem.weight_mode
    if isinstance(mode, KnownWeights):
        return check_weights(mode.weights, len(problem.attributes)), "given"
    if isinstance(mode, UnknownWeights):
        return weights_m1(Z), "M-1"
    w, tied = m2_solution(Z, mode.constraints)
    return w, "M-2 (tied optima; lexicographically smallest vertex)" if tied else "M-2"


def solve(problem: DecisionProblem) -> DecisionOutcome:
    """Run all six steps; failures raise :class:`SolveError` naming the step."""
    issues = validate_problem(problem)
    if issues:
        raise SolveError("validate", "; ".join(issues))
    r = len(problem.scales)
    ctx = HierarchyContext(problem.scales)

    fused = [_stage("fuse")(_fuse_array, problem, h) for h in range(r)]
    omega = _stage("fuse")(group_weights, problem)
    group_mats = tuple(_to_matrix(a, s) for a, s in zip(fused, problem.scales))

    unified = tuple(_stage("unify")(unify, group_mats, ctx))
    Z = _stage("aggregate_groups")(aggregate_groups, unified, omega)
    deviation = _stage("weights")(deviation_coefficients, Z)
    w, provenance = _stage("weights")(_choose_weights, problem, Z)
    zs = _stage("aggregate_attributes")(aggregate_attributes, Z, w)
    groups = _stage("rank")(rank_alternatives, zs)
    views = _stage("represent")(represent_per_scale, zs, ctx)

    alts = problem.alternatives
    return DecisionOutcome(
        alternatives=alts,
        attributes=problem.attributes,
        scales=problem.scales,
        lcm_scale=ctx.lcm_scale,
        group_weights=tuple(float(x) for x in omega),
        group_matrices=group_mats,
        unified=unified,
        collective_matrix=Z,
        deviation=tuple(float(x) for x in deviation),
        attribute_weights=tuple(float(x) for x in w),
        weight_provenance=provenance,
        collective=tuple(zs),
        expectations=tuple(delta(z.scale, z.expectation_index) for z in zs),
        inaccuracies=tuple(inaccuracy(z) for z in zs),
        ranking=tuple(tuple(alts[i] for i in group) for group in groups),
        per_scale_views=tuple(tuple(views[s.granularity]) for s in problem.scales),
    )
