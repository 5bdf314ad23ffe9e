"""Dense two-phase simplex for small LPs over the weight simplex.

Problems have the form ``max c.w  s.t.  sum(w) = 1, w >= 0, A w (<=|>=|=) b``.
Bland's rule prevents cycling, so results are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

PIVOT_TOL = 1e-9


class InfeasibleError(ValueError):
    """The constraint set admits no weight vector."""


SENSES = ("<=", ">=", "=")


@dataclass(frozen=True)
class LinearConstraint:
    """``coefficients . w  <sense>  bound``."""

    coefficients: tuple[float, ...]
    bound: float
    sense: str

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"sense must be one of {SENSES}, got {self.sense!r}")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        object.__setattr__(self, "bound", float(self.bound))

    def check_length(self, m: int) -> None:
        if len(self.coefficients) != m:
            raise ValueError(
                f"constraint has {len(self.coefficients)} coefficients, expected {m}"
            )

    def satisfied_by(self, w, tol: float = 1e-9) -> bool:
        lhs = float(np.dot(self.coefficients, w))
        if self.sense == "<=":
            return lhs <= self.bound + tol
        if self.sense == ">=":
            return lhs >= self.bound - tol
        return abs(lhs - self.bound) <= tol


def _standard_form(m: int, constraints: Sequence[LinearConstraint]):
    """Rows ``A x = b`` with ``b >= 0`` over weights then slack/surplus columns."""
    rows = [np.ones(m)]
    rhs = [1.0]
    kinds = ["="]
    for con in constraints:
        con.check_length(m)
        rows.append(np.array(con.coefficients))
        rhs.append(con.bound)
        kinds.append(con.sense)
    n_slack = sum(k != "=" for k in kinds)
    A = np.zeros((len(rows), m + n_slack))
    b = np.array(rhs, dtype=np.float64)
    col = m
    for i, (row, kind) in enumerate(zip(rows, kinds)):
        A[i, :m] = row
        if kind == "<=":
            A[i, col] = 1.0
            col += 1
        elif kind == ">=":
            A[i, col] = -1.0
            col += 1
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
    return A, b


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0.0:
            T[i] -= T[i, c] * T[r]


def _run(T: np.ndarray, basis: list[int], allowed: int) -> None:
    """Maximise the objective held in the last row of ``T`` (stored negated).

    Only the first ``allowed`` columns may enter the basis.
    """
    while True:
        obj = T[-1, :allowed]
        entering = next((j for j in range(allowed) if obj[j] < -PIVOT_TOL), None)
        if entering is None:
            return
        col = T[:-1, entering]
        best = None
        for i in np.flatnonzero(col > PIVOT_TOL):
            ratio = T[i, -1] / col[i]
            key = (ratio, basis[i])
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            raise RuntimeError("LP unbounded; impossible over the weight simplex")
        r = best[1]
        _pivot(T, r, entering)
        basis[r] = entering


def _solve(c: np.ndarray, A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Optimal basic solution and the final reduced costs (all >= 0)."""
    n_rows, n_cols = A.shape
    # Phase 1: artificial basis, minimise the sum of artificials.
    T = np.zeros((n_rows + 1, n_cols + n_rows + 1))
    T[:n_rows, :n_cols] = A
    T[:n_rows, n_cols:n_cols + n_rows] = np.eye(n_rows)
    T[:n_rows, -1] = b
    basis = list(range(n_cols, n_cols + n_rows))
    T[-1, n_cols:n_cols + n_rows] = 1.0
    for i in range(n_rows):
        T[-1] -= T[i]
    _run(T, basis, n_cols + n_rows)
    if -T[-1, -1] > 1e-7:
        raise InfeasibleError("weight constraints are infeasible")

    # Drive any artificial still basic (at zero) out of the basis.
    for i, var in enumerate(basis):
        if var >= n_cols:
            row = T[i, :n_cols]
            j = next((j for j in range(n_cols) if abs(row[j]) > PIVOT_TOL), None)
            if j is not None:
                _pivot(T, i, j)
                basis[i] = j
    keep = [i for i, var in enumerate(basis) if var < n_cols]
    T = np.vstack([T[keep][:, list(range(n_cols)) + [-1]], np.zeros(n_cols + 1)])
    basis = [basis[i] for i in keep]

    # Phase 2 objective row: -c, then price out the basis.
    T[-1, :n_cols] = -c
    for i, var in enumerate(basis):
        if T[-1, var] != 0.0:
            T[-1] -= T[-1, var] * T[i]
    _run(T, basis, n_cols)

    x = np.zeros(n_cols)
    for i, var in enumerate(basis):
        x[var] = T[i, -1]
    return x, T[-1, :n_cols].copy()


def maximize_over_weights(c, constraints: Sequence[LinearConstraint] = ()) -> np.ndarray:
    """One optimal vertex of ``max c.w`` over the constrained weight simplex."""
    c = np.asarray(c, dtype=np.float64)
    m = c.size
    A, b = _standard_form(m, constraints)
    full_c = np.zeros(A.shape[1])
    full_c[:m] = c
    return _clip(_solve(full_c, A, b)[0][:m])


def _clip(w: np.ndarray) -> np.ndarray:
    w = np.where(np.abs(w) < 1e-12, 0.0, w)
    return np.maximum(w, 0.0)


def optimal_face(c, constraints: Sequence[LinearConstraint] = ()) -> list[LinearConstraint]:
    """Constraints cutting the feasible region down to its set of maximisers.

    A column whose final reduced cost is strictly positive is zero at every
    optimum: a weight column pins ``w_j = 0``, a slack column turns its
    inequality into an equality. No tolerance on the objective is needed.
    """
    c = np.asarray(c, dtype=np.float64)
    m = c.size
    A, b = _standard_form(m, constraints)
    full_c = np.zeros(A.shape[1])
    full_c[:m] = c
    _, reduced = _solve(full_c, A, b)
    tol = PIVOT_TOL * max(1.0, float(np.abs(c).max()))
    face = []
    col = m
    for con in constraints:
        if con.sense == "=":
            face.append(con)
            continue
        face.append(LinearConstraint(con.coefficients, con.bound, "=") if reduced[col] > tol else con)
        col += 1
    for j in range(m):
        if reduced[j] > tol:
            face.append(LinearConstraint(tuple(np.eye(m)[j]), 0.0, "="))
    return face


def lexicographic_optimum(c, constraints: Sequence[LinearConstraint] = ()) -> tuple[np.ndarray, bool]:
    """Lexicographically smallest optimal vertex, and whether optima are non-unique.

    Restricted to the optimal face, ``w_1``, ``w_2``, ... are minimised in
    turn. Uniqueness is decided by also computing the lexicographically
    largest optimum.
    """
    c = np.asarray(c, dtype=np.float64)
    m = c.size
    face = optimal_face(c, constraints)

    def walk(sign: float) -> np.ndarray:
        pinned = list(face)
        for j in range(m):
            e = np.zeros(m)
            e[j] = sign
            w = maximize_over_weights(-e, pinned)
            pinned.append(LinearConstraint(tuple(np.eye(m)[j]), float(w[j]), "="))
        return w

    low = walk(1.0)
    high = walk(-1.0)
    return low, not np.allclose(low, high, atol=1e-9)
