"""Pure numpy implementations of the hot loops.

Signatures mirror the compiled ``_ckernels`` module exactly.
"""
import numpy as np


def fuse_counts(choices, weights, g):
    """Weighted term histogram per cell.

    choices: int array (q, n, m) of term indices, one slab per decision maker.
    weights: float array (q,); each cell is normalised by ``weights.sum()``.
    Returns a float array (n, m, g).
    """
    choices = np.asarray(choices, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    q, n, m = choices.shape
    out = np.zeros((n, m, g))
    ii, jj = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    for l in range(q):
        np.add.at(out, (ii, jj, choices[l]), weights[l])
    return out / weights.sum()


def deviation_sums(expect):
    """Column-wise sums of ``|E[i, j] - E[l, j]|`` over all ordered pairs."""
    expect = np.asarray(expect, dtype=np.float64)
    diff = np.abs(expect[:, None, :] - expect[None, :, :])
    return diff.sum(axis=(0, 1))


def rebin(rows, lower, theta, g):
    """Split each source bin ``k`` between ``lower[k]`` and ``lower[k] + 1``.

    rows: float array (N, G) of proportions on the fine scale.
    lower, theta: per-source-bin target index and upper share.
    Returns a float array (N, g).
    """
    rows = np.asarray(rows, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.int64)
    theta = np.asarray(theta, dtype=np.float64)
    out = np.zeros((rows.shape[0], g))
    np.add.at(out, (slice(None), lower), rows * (1.0 - theta))
    upper = np.minimum(lower + 1, g - 1)
    np.add.at(out, (slice(None), upper), rows * theta)
    return out
