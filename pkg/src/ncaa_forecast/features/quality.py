"""Team quality from a no-intercept least-squares fit of point differentials.

Each row contributes ``point_diff ~ q[t1] - q[t2]``. The normal equations
reduce to a weighted graph Laplacian over the teams, solved by conjugate
gradients. Qualities are only identified up to a constant, so every
(gender, season) fit is centered to mean zero.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, Tuple

import numpy as np

from ..prep import MatchRow


class ConvergenceError(RuntimeError):
    pass


def conjugate_gradient(matvec, b, x0=None, tol=1e-12, maxiter=None):
    """Solve ``A x = b`` for symmetric positive semi-definite ``A``.

    Stops when ``||r|| <= tol * ||b||``. Raises ConvergenceError with the
    final residual norm if ``maxiter`` is exhausted.
    """
    b = np.asarray(b, dtype=np.float64)
    n = b.shape[0]
    if maxiter is None:
        maxiter = max(10 * n, 100)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return np.zeros(n)
    r = b - matvec(x)
    p = r.copy()
    rs = r @ r
    for _ in range(maxiter):
        if np.sqrt(rs) <= tol * b_norm:
            return x
        Ap = matvec(p)
        denom = p @ Ap
        if denom <= 0.0:
            break
        alpha = rs / denom
        x += alpha * p
        r -= alpha * Ap
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    res = np.linalg.norm(b - matvec(x))
    if res <= tol * b_norm:
        return x
    raise ConvergenceError(f"conjugate gradient did not converge: residual norm {res:.3e}")


def normal_equations(t1_idx, t2_idx, target, n_teams, ridge=0.0):
    """Return ``(A^T A + ridge I, A^T y)`` for the signed team-incidence design."""
    lap = np.zeros((n_teams, n_teams))
    np.add.at(lap, (t1_idx, t1_idx), 1.0)
    np.add.at(lap, (t2_idx, t2_idx), 1.0)
    np.add.at(lap, (t1_idx, t2_idx), -1.0)
    np.add.at(lap, (t2_idx, t1_idx), -1.0)
    lap[np.diag_indices(n_teams)] += ridge
    rhs = np.zeros(n_teams)
    np.add.at(rhs, t1_idx, target)
    np.add.at(rhs, t2_idx, -target)
    return lap, rhs


def fit_season_quality(t1, t2, point_diff, ridge=0.0, tol=1e-12, maxiter=None) -> Dict[int, float]:
    """Fit one (gender, season) block; returns mean-zero qualities by team id."""
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    if t1.size == 0:
        return {}
    teams, inv = np.unique(np.concatenate([t1, t2]), return_inverse=True)
    i1, i2 = inv[: t1.size], inv[t1.size:]
    lap, rhs = normal_equations(i1, i2, np.asarray(point_diff, dtype=np.float64), teams.size, ridge)
    q = conjugate_gradient(lambda v: lap @ v, rhs, tol=tol, maxiter=maxiter)
    q -= q.mean()
    return {int(t): float(v) for t, v in zip(teams, q)}


def fit_glm_quality(rows: Iterable[MatchRow], ridge=0.0, tol=1e-12, maxiter=None) -> Dict[Tuple[str, int, int], float]:
    """Fit qualities separately for every (gender, season) present in ``rows``."""
    blocks = defaultdict(lambda: ([], [], []))
    for r in rows:
        b = blocks[(r.gender, r.season)]
        b[0].append(r.t1)
        b[1].append(r.t2)
        b[2].append(r.point_diff)
    table = {}
    for (gender, season), (t1, t2, pd) in sorted(blocks.items()):
        for team, q in fit_season_quality(t1, t2, pd, ridge, tol, maxiter).items():
            table[(gender, season, team)] = q
    return table
