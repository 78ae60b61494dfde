"""Vectorized numpy simplex kernels.

Fallback implementation of the hot inner operations, used when the
compiled extension (orir.solver._kernels) is unavailable. The two backends
are element-by-element equivalent: same arithmetic, same first-minimum /
first-maximum tie-breaking, so pivot sequences are bit-identical.
"""

from __future__ import annotations

import numpy as np

NB_LOWER = 0
NB_UPPER = 1
BASIC = 2
NB_FIXED = 3

_INF = np.inf


def pivot_update(binv: np.ndarray, w: np.ndarray, r: int) -> None:
    """Eta update of the dense basis inverse for a pivot in row r with
    FTRAN column w (w[r] is the pivot element)."""
    binv[r, :] /= w[r]
    wcol = w.copy()
    wcol[r] = 0.0
    binv -= np.outer(wcol, binv[r, :])


def ftran(binv: np.ndarray, idx: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """w = B^-1 a for a sparse column a, accumulated entry by entry so the
    addition order matches the compiled kernel."""
    w = np.zeros(binv.shape[0])
    for j in range(idx.shape[0]):
        w += binv[:, idx[j]] * vals[j]
    return w


def primal_ratio(dirw: np.ndarray, beta: np.ndarray, lb_b: np.ndarray,
                 ub_b: np.ndarray, piv_tol: float) -> tuple[int, float, int]:
    """Bounded ratio test over the basic variables.

    dirw = direction * (B^-1 a_q). Returns (row, step, hit) with hit 0 when
    the blocking basic variable lands on its lower bound and 1 for its
    upper bound; row -1 means no blocker. Ties break to the lowest row."""
    t = np.full(beta.shape[0], _INF)
    pos = dirw > piv_tol
    if pos.any():
        t[pos] = (beta[pos] - lb_b[pos]) / dirw[pos]
    neg = (dirw < -piv_tol) & (ub_b != _INF)
    if neg.any():
        t[neg] = (ub_b[neg] - beta[neg]) / (-dirw[neg])
    np.maximum(t, 0.0, out=t)
    r = int(np.argmin(t))
    if t[r] == _INF:
        return -1, _INF, 0
    return r, float(t[r]), 0 if dirw[r] > 0 else 1


def dual_ratio(alpha_row: np.ndarray, d: np.ndarray, status: np.ndarray,
               leave_dir: int, piv_tol: float) -> int:
    """Entering-column selection for the dual simplex.

    leave_dir is +1 when the leaving basic variable must increase (it
    violates its lower bound) and -1 otherwise. Returns -1 when no column
    is eligible (the node is primal infeasible)."""
    a = leave_dir * alpha_row
    eligible = ((status == NB_LOWER) & (a < -piv_tol)) | \
               ((status == NB_UPPER) & (a > piv_tol))
    if not eligible.any():
        return -1
    ratio = np.full(alpha_row.shape[0], _INF)
    ratio[eligible] = np.abs(d[eligible]) / np.abs(alpha_row[eligible])
    return int(np.argmin(ratio))


def price(d: np.ndarray, status: np.ndarray, dtol: float, bland: bool) -> int:
    """Entering-variable selection for the primal simplex: Dantzig rule
    (most favorable reduced cost, first index on ties), or Bland's rule
    (lowest eligible index) once degeneracy protection is on."""
    mag = np.where(status == NB_LOWER, -d,
                   np.where(status == NB_UPPER, d, -_INF))
    if bland:
        eligible = mag > dtol
        if not eligible.any():
            return -1
        return int(np.argmax(eligible))
    j = int(np.argmax(mag))
    if mag[j] <= dtol:
        return -1
    return j
