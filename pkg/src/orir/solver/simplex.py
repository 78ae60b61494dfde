"""Two-phase primal simplex on the bounded-variable standard form, with a
dual-simplex restore path used by branch and bound for warm starts.

The working representation is a dense basis inverse plus the constraint
matrix in CSC form; every pivot is an eta update of the inverse and an
incremental update of the reduced costs. Pivoting is deterministic:
Dantzig pricing with first-index ties, Bland's rule after 10*(rows+cols)
degenerate pivots, ratio-test ties to the lowest row index.
"""

from __future__ import annotations

import math
import time

import numpy as np
import scipy.sparse as sp

from ..build.compile import CanonicalModel
from ..errors import NumericalBreakdown
from . import kernels as K

PIV_TOL = 1e-9
DTOL = 1e-9
REFACTOR_EVERY = 1200

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FEASIBLE = "feasible"
ERROR = "error"


class TimeLimit(Exception):
    pass


def build_standard_form(cm: CanonicalModel):
    """Columns are the structural variables followed by one slack per row:
    coefficient +1 for <= and = rows, -1 for >= rows, so every slack has a
    finite lower bound of 0. The solver always minimizes; a maximize model
    negates its costs."""
    n_struct = len(cm.variables)
    m = len(cm.rows)
    lb = np.zeros(n_struct + m)
    ub = np.full(n_struct + m, np.inf)
    c = np.zeros(n_struct + m)
    for v in cm.variables:
        lb[v.id] = v.lb
        ub[v.id] = v.ub
    sign = -1.0 if cm.sense == "maximize" else 1.0
    for var_id, coef in cm.objective.terms.items():
        c[var_id] = sign * coef
    b = np.zeros(m)
    data, rows_idx, cols_idx = [], [], []
    for i, row in enumerate(cm.rows):
        b[i] = row.rhs
        for var_id, coef in row.terms.items():
            data.append(coef)
            rows_idx.append(i)
            cols_idx.append(var_id)
        slack = n_struct + i
        data.append(1.0 if row.sense in ("<=", "=") else -1.0)
        rows_idx.append(i)
        cols_idx.append(slack)
        if row.sense == "=":
            ub[slack] = 0.0
    A = sp.csc_matrix((data, (rows_idx, cols_idx)),
                      shape=(m, n_struct + m), dtype=np.float64)
    A.sort_indices()
    return A, b, c, lb, ub, n_struct


class SimplexEngine:
    """One working LP. Bounds may be edited between solves (branch and
    bound fixes binaries); dual_restore() then repairs primal feasibility
    from the current basis."""

    def __init__(self, A: sp.csc_matrix, b: np.ndarray, c: np.ndarray,
                 lb: np.ndarray, ub: np.ndarray,
                 feasibility_tol: float = 1e-6,
                 deadline: float | None = None):
        self.m, n = A.shape
        self.b = b
        self.c = c.copy()
        self.lb = lb.copy()
        self.ub = ub.copy()
        self.feas_tol = feasibility_tol
        self.deadline = deadline
        self.iterations = 0
        self.phase = 0
        self._bland = False
        self._degenerate = 0
        self.n_art = 0
        self._setup(A)

    # -- construction ----------------------------------------------------

    def _setup(self, A: sp.csc_matrix):
        m, n = A.shape
        status = np.full(n, K.NB_LOWER, dtype=np.int8)
        status[self.lb == self.ub] = K.NB_FIXED
        # Residual with every structural/slack column nonbasic at its
        # lower bound decides which rows need artificials.
        resid = self.b - A @ self.lb[:n]
        slack_first = n - m
        basis = np.empty(m, dtype=np.int64)
        beta = np.zeros(m)
        art_cols = []
        art_rows = []
        for i in range(m):
            slack = slack_first + i
            sigma = A.data[A.indptr[slack]]  # the slack's only entry
            s_val = resid[i] / sigma
            if self.lb[slack] - self.feas_tol <= s_val <= self.ub[slack] + self.feas_tol:
                basis[i] = slack
                beta[i] = s_val
                status[slack] = K.BASIC
            else:
                tau = 1.0 if resid[i] >= 0 else -1.0
                art_rows.append(i)
                art_cols.append(tau)
                basis[i] = n + len(art_cols) - 1
                beta[i] = abs(resid[i])
        self.n_art = len(art_cols)
        if self.n_art:
            art = sp.csc_matrix(
                (np.array(art_cols), (np.array(art_rows),
                                      np.arange(self.n_art))),
                shape=(m, self.n_art), dtype=np.float64)
            A = sp.hstack([A, art], format="csc")
            A.sort_indices()
            self.c = np.concatenate([self.c, np.zeros(self.n_art)])
            self.lb = np.concatenate([self.lb, np.zeros(self.n_art)])
            self.ub = np.concatenate([self.ub, np.full(self.n_art, np.inf)])
            status = np.concatenate(
                [status, np.full(self.n_art, K.NB_LOWER, dtype=np.int8)])
            for i, row in enumerate(art_rows):
                status[basis[row]] = K.BASIC
        self.A = A
        self.n = A.shape[1]
        self.indptr = A.indptr.astype(np.int64)
        self.indices = A.indices.astype(np.int64)
        self.data = A.data
        # Row-major transpose for the tableau pivot-row product; scipy's
        # CSR matvec sums each column sequentially, so both kernel
        # backends see identical floats here.
        self.A_rowmajor = A.T.tocsr()
        self.A_rowmajor.sort_indices()
        self.status = status
        self.basis = basis
        self.beta = beta
        self.binv = None
        self.d = np.zeros(self.n)
        self._pivots_since_refactor = 0
        self.refactor(self._phase1_costs() if self.n_art else self.c)

    def _phase1_costs(self) -> np.ndarray:
        c1 = np.zeros(self.n)
        c1[self.n - self.n_art:] = 1.0
        return c1

    # -- linear algebra ---------------------------------------------------

    def _column(self, j: int):
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def refactor(self, costs: np.ndarray | None = None):
        """Rebuild the dense basis inverse and recompute beta and the
        reduced costs from scratch (also kills accumulated drift)."""
        if costs is not None:
            self._costs = costs
        B = self.A[:, self.basis].toarray()
        try:
            self.binv = np.linalg.inv(B) if self.m else np.zeros((0, 0))
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown(f"singular basis: {exc}") from exc
        self.binv = np.ascontiguousarray(self.binv)
        xn = self._nonbasic_values()
        resid = self.b - self.A @ xn
        self.beta = self.binv @ resid if self.m else np.zeros(0)
        y = self._costs[self.basis] @ self.binv if self.m else np.zeros(0)
        self.d = self._costs - (y @ self.A if self.m else 0.0)
        self.d[self.basis] = 0.0
        self._pivots_since_refactor = 0

    def _nonbasic_values(self) -> np.ndarray:
        x = np.where(self.status == K.NB_UPPER, self.ub, self.lb)
        x[self.status == K.BASIC] = 0.0
        return x

    def solution_vector(self) -> np.ndarray:
        x = self._nonbasic_values()
        x[self.basis] = self.beta
        return x

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimit()

    def _apply_pivot(self, r: int, j: int, w: np.ndarray,
                     alpha_row: np.ndarray, new_value: float,
                     leave_status: int):
        leaving = self.basis[r]
        if self.lb[leaving] == self.ub[leaving]:
            leave_status = K.NB_FIXED
        factor = self.d[j] / alpha_row[j]
        self.d -= factor * alpha_row
        self.d[j] = 0.0
        K.pivot_update(self.binv, w, r)
        self.status[leaving] = leave_status
        self.status[j] = K.BASIC
        self.basis[r] = j
        self.beta[r] = new_value
        self._pivots_since_refactor += 1
        self.iterations += 1
        if self._pivots_since_refactor >= REFACTOR_EVERY:
            self.refactor()

    # -- primal simplex ---------------------------------------------------

    def primal(self) -> str:
        """Iterate to optimality for the current cost vector."""
        m, n = self.m, self.n
        bland_threshold = 10 * (m + n)
        budget = 200_000 + 50 * (m + n)
        start_iterations = self.iterations
        while True:
            if self.iterations % 64 == 0:
                self._check_deadline()
            if self.iterations - start_iterations > budget:
                raise NumericalBreakdown(
                    "primal simplex iteration budget exhausted")
            j = K.price(self.d, self.status, DTOL, self._bland)
            if j < 0:
                return OPTIMAL
            direction = 1.0 if self.status[j] == K.NB_LOWER else -1.0
            idx, vals = self._column(j)
            w = K.ftran(self.binv, idx, vals)
            dirw = direction * w
            lb_b = self.lb[self.basis]
            ub_b = self.ub[self.basis]
            r, t, hit = K.primal_ratio(dirw, self.beta, lb_b, ub_b, PIV_TOL)
            own_gap = self.ub[j] - self.lb[j]
            if r < 0 and not math.isfinite(own_gap):
                if self.phase == 1:
                    raise NumericalBreakdown(
                        "phase-1 objective unbounded; basis is corrupt")
                return UNBOUNDED
            if r < 0 or own_gap < t:
                # Bound flip: the entering variable runs to its other bound.
                self.beta -= own_gap * dirw
                self.status[j] = (K.NB_UPPER if self.status[j] == K.NB_LOWER
                                  else K.NB_LOWER)
                self.iterations += 1
                continue
            if t <= 1e-12:
                self._degenerate += 1
                if self._degenerate > bland_threshold:
                    self._bland = True
            new_value = (self.lb[j] if direction > 0 else self.ub[j]) \
                + direction * t
            self.beta -= t * dirw
            alpha_row = self.A_rowmajor @ self.binv[r, :]
            leave_status = K.NB_LOWER if hit == 0 else K.NB_UPPER
            self._apply_pivot(r, j, w, alpha_row, new_value, leave_status)

    def two_phase(self) -> str:
        """Phase 1 drives artificials to zero; phase 2 optimizes the real
        costs. Raises TimeLimit if the deadline passes (phase recorded)."""
        if self.n_art:
            self.phase = 1
            self.refactor(self._phase1_costs())
            self.primal()
            infeas = float(self._costs @ self.solution_vector())
            if infeas > self.feas_tol:
                return INFEASIBLE
            # Freeze artificials at zero for phase 2.
            art_start = self.n - self.n_art
            self.ub[art_start:] = 0.0
            for j in range(art_start, self.n):
                if self.status[j] != K.BASIC:
                    self.status[j] = K.NB_FIXED
        self.phase = 2
        self.refactor(self.c)
        return self.primal()

    # -- dual simplex -----------------------------------------------------

    def dual_restore(self, max_iter: int | None = None) -> str:
        """Repair primal feasibility after bound edits, keeping the current
        (dual-feasible) reduced costs. Returns OPTIMAL or INFEASIBLE."""
        self.phase = 2
        count = 0
        while True:
            if count % 64 == 0:
                self._check_deadline()
            count += 1
            if max_iter is not None and count > max_iter:
                raise NumericalBreakdown("dual simplex iteration limit")
            lb_b = self.lb[self.basis]
            ub_b = self.ub[self.basis]
            low_viol = lb_b - self.beta
            up_viol = self.beta - ub_b
            viol = np.maximum(low_viol, up_viol)
            r = int(np.argmax(viol))
            if viol[r] <= self.feas_tol:
                return OPTIMAL
            leave_dir = 1 if low_viol[r] >= up_viol[r] else -1
            alpha_row = self.A_rowmajor @ self.binv[r, :]
            q = K.dual_ratio(alpha_row, self.d, self.status, leave_dir,
                             PIV_TOL)
            if q < 0:
                return INFEASIBLE
            idx, vals = self._column(q)
            w = K.ftran(self.binv, idx, vals)
            if abs(w[r]) < PIV_TOL:
                raise NumericalBreakdown("dual pivot element vanished")
            leaving = self.basis[r]
            target = self.lb[leaving] if leave_dir == 1 else self.ub[leaving]
            delta = (self.beta[r] - target) / w[r]
            x_old = self.lb[q] if self.status[q] != K.NB_UPPER else self.ub[q]
            self.beta -= delta * w
            leave_status = K.NB_LOWER if leave_dir == 1 else K.NB_UPPER
            self._apply_pivot(r, q, w, alpha_row, x_old + delta,
                              leave_status)

    # -- bound edits for branch and bound ---------------------------------

    def set_bounds(self, j: int, new_lb: float, new_ub: float):
        if self.status[j] == K.BASIC:
            self.lb[j] = new_lb
            self.ub[j] = new_ub
            return
        x_old = self.ub[j] if self.status[j] == K.NB_UPPER else self.lb[j]
        self.lb[j] = new_lb
        self.ub[j] = new_ub
        if new_lb == new_ub:
            self.status[j] = K.NB_FIXED
            x_new = new_lb
        elif self.status[j] == K.NB_UPPER and math.isfinite(new_ub):
            x_new = new_ub
        else:
            self.status[j] = K.NB_LOWER
            x_new = new_lb
        delta = x_new - x_old
        if delta != 0.0:
            idx, vals = self._column(j)
            w = K.ftran(self.binv, idx, vals)
            self.beta -= delta * w
