"""Dense tableau simplex: Dantzig pricing with a permanent fallback to Bland's rule.

Problems here are tiny (a handful of rows, a few hundred columns), so a dense
tableau is simpler and faster than anything sparse. Determinism matters more
than speed: the pivot sequence depends only on the input arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure

_RC_TOL = 1e-11
_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" or "unbounded"
    x: np.ndarray
    objective: float
    iterations: int
    infeasibility: float = 0.0


def simplex_from_basis(
    M: np.ndarray,
    b: np.ndarray,
    cost: np.ndarray,
    basis: list[int],
    max_iter: int,
    rule: str = "dantzig",
) -> LPResult:
    """Minimise ``cost @ z`` subject to ``M z = b, z >= 0``.

    ``basis`` must index identity columns of ``M`` and ``b`` must be
    non-negative, so the starting basic solution is feasible.

    ``rule="bland"`` prices with Bland's smallest-index rule throughout.
    ``rule="dantzig"`` picks the most negative reduced cost but switches to
    Bland's rule for good after ``m + 1`` consecutive degenerate pivots, which
    keeps the anti-cycling guarantee at a fraction of the pivot count.
    """
    if rule not in ("dantzig", "bland"):
        raise ValueError(f"unknown pricing rule {rule!r}")
    m, n = M.shape
    T = np.zeros((m + 1, n + 1))
    T[:m, :n] = M
    T[:m, n] = b
    cb = cost[basis]
    T[m, :n] = cost - cb @ M
    T[m, n] = -cb @ b
    basis = list(basis)
    iters = 0
    bland = rule == "bland"
    degenerate_run = 0
    while True:
        rc = T[m, :n]
        neg = np.flatnonzero(rc < -_RC_TOL)
        if neg.size == 0:
            break
        if iters >= max_iter:
            raise NumericalFailure(f"simplex did not converge in {max_iter} iterations")
        j = int(neg[0]) if bland else int(neg[np.argmin(rc[neg])])
        col = T[:m, j]
        rows = np.flatnonzero(col > _PIVOT_TOL)
        if rows.size == 0:
            x = np.zeros(n)
            x[basis] = T[:m, n]
            return LPResult("unbounded", x, -np.inf, iters)
        ratios = T[rows, n] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-14 * max(1.0, abs(best))]
        r = int(min(tied, key=lambda i: basis[i]))
        if best <= 1e-14:
            degenerate_run += 1
            if degenerate_run > m:
                bland = True
        else:
            degenerate_run = 0
        T[r] /= T[r, j]
        others = T[:, j].copy()
        others[r] = 0.0
        T -= np.outer(others, T[r])
        basis[r] = j
        iters += 1
    x = np.zeros(n)
    x[basis] = np.maximum(T[:m, n], 0.0)
    return LPResult("optimal", x, float(cost @ x), iters)


def solve_standard_lp(
    A,
    b,
    c,
    phase_one_only: bool = False,
    max_iter: int | None = None,
) -> LPResult:
    """Two-phase simplex for ``min c@x  s.t.  A x = b, x >= 0``.

    With ``phase_one_only`` the phase-1 point is returned; ``infeasibility``
    is the phase-1 optimum (zero iff the system is feasible).
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    if max_iter is None:
        max_iter = 50 * (n + m)
    M = np.hstack([A, np.eye(m)])
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    phase1 = simplex_from_basis(M, b, cost1, list(range(n, n + m)), max_iter)
    infeas = float(phase1.x[n:].sum())
    x = phase1.x[:n]
    if phase_one_only or infeas > 1e-9 * (1 + np.abs(b).sum()):
        return LPResult(phase1.status, x, float(c @ x), phase1.iterations, infeas)
    # phase 2: restart from the phase-1 basis with artificials priced out
    # by a large cost so they cannot re-enter
    big = 1e6 * (1 + np.abs(c).max(initial=0.0))
    cost2 = np.concatenate([c, np.full(m, big)])
    basis = _basis_from_solution(M, phase1.x)
    if basis is None:
        phase2 = simplex_from_basis(M, b, cost2, list(range(n, n + m)), max_iter)
    else:
        Binv = np.linalg.inv(M[:, basis])
        phase2 = simplex_from_basis(Binv @ M, Binv @ b, cost2, basis, max_iter)
    x = phase2.x[:n]
    return LPResult(phase2.status, x, float(c @ x), phase1.iterations + phase2.iterations, infeas)


def _basis_from_solution(M: np.ndarray, z: np.ndarray) -> list[int] | None:
    m = M.shape[0]
    support = [int(j) for j in np.flatnonzero(z > 0)]
    basis: list[int] = []
    for j in support + list(range(M.shape[1])):
        if j in basis:
            continue
        trial = basis + [j]
        if np.linalg.matrix_rank(M[:, trial]) == len(trial):
            basis = trial
        if len(basis) == m:
            return basis
    return None
