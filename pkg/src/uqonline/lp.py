"""Dense two-phase tableau simplex for small linear programs.

Minimizes ``c @ x`` subject to rows ``(coeffs, sense, rhs)`` with sense one of
``"<="``, ``"="``, ``">="`` and per-variable bounds ``lower <= x <= upper``.
Problem sizes here stay within a few hundred variables, so everything is a
dense numpy tableau; no sparse machinery, no warm starts.

Determinism: Dantzig pricing with lowest-index tie breaking, switching to
Bland's rule whenever the objective stalls over degenerate pivots, so the
pivot sequence is reproducible and cycling cannot occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "LpError",
    "LpStatus",
    "SolverOptions",
    "LinearProgram",
    "LpSolution",
    "solve",
    "ParametricRhsLp",
]

LEQ = "<="
EQ = "="
GEQ = ">="
_SENSES = frozenset((LEQ, EQ, GEQ))


class LpError(Exception):
    """Structurally invalid problem, or an internal solver failure."""


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SolverOptions:
    """Numeric tolerances; the defaults are the documented contract."""

    feas_tol: float = 1e-9       # relative feasibility tolerance per row
    opt_tol: float = 1e-9        # reduced-cost threshold for entering columns
    pivot_tol: float = 1e-10     # minimum admissible pivot magnitude
    max_iters: int = 100_000
    stall_iters: int = 64        # degenerate pivots tolerated before Bland mode


class LinearProgram:
    """Standard-form container.  Rows are (coefficients, sense, rhs)."""

    def __init__(
        self,
        objective: Sequence[float],
        rows: Iterable[tuple[Sequence[float], str, float]] = (),
        lower: Optional[Sequence[float]] = None,
        upper: Optional[Sequence[float]] = None,
    ) -> None:
        c = np.asarray(objective, dtype=float)
        if c.ndim != 1 or c.size < 1:
            raise LpError("objective must be a nonempty 1-D vector")
        n = c.size

        coeffs: list[np.ndarray] = []
        senses: list[str] = []
        rhs: list[float] = []
        for i, (a, sense, b) in enumerate(rows):
            a = np.asarray(a, dtype=float)
            if a.shape != (n,):
                raise LpError(f"row {i} has width {a.shape}, expected ({n},)")
            if sense not in _SENSES:
                raise LpError(f"row {i} has invalid sense {sense!r}")
            coeffs.append(a)
            senses.append(sense)
            rhs.append(float(b))

        self.objective = c
        self.row_coeffs = (
            np.vstack(coeffs) if coeffs else np.empty((0, n), dtype=float)
        )
        self.senses = tuple(senses)
        self.rhs = np.asarray(rhs, dtype=float)
        self.lower = (
            np.zeros(n) if lower is None else np.asarray(lower, dtype=float)
        )
        self.upper = (
            np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
        )
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise LpError("bound vectors must match the objective width")
        if np.any(~np.isfinite(self.lower)):
            raise LpError("lower bounds must be finite (free variables unsupported)")
        if np.any(self.lower > self.upper):
            raise LpError("each lower bound must be <= the matching upper bound")

    @classmethod
    def from_arrays(
        cls,
        objective: np.ndarray,
        row_coeffs: np.ndarray,
        senses: tuple[str, ...],
        rhs: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
    ) -> "LinearProgram":
        """Assemble directly from arrays, skipping per-row copies; callers
        must keep the documented shape contracts."""
        self = cls.__new__(cls)
        self.objective = np.asarray(objective, dtype=float)
        self.row_coeffs = np.asarray(row_coeffs, dtype=float)
        self.senses = tuple(senses)
        self.rhs = np.asarray(rhs, dtype=float)
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        n = self.objective.size
        if self.row_coeffs.shape != (len(self.senses), n) or self.rhs.shape != (
            len(self.senses),
        ):
            raise LpError("array shapes are inconsistent")
        return self

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray]
    objective_value: float


def _pivot(T: np.ndarray, buf: np.ndarray, r: int, j: int) -> None:
    piv = T[r, j]
    T[r] /= piv
    col = T[:, j].copy()
    col[r] = 0.0
    np.multiply(col[:, None], T[r][None, :], out=buf)
    np.subtract(T, buf, out=T)
    T[:, j] = 0.0
    T[r, j] = 1.0


def _run_phase(
    T: np.ndarray,
    basis: np.ndarray,
    cost: np.ndarray,
    n_enterable: int,
    opt: SolverOptions,
) -> str:
    """Run primal simplex on tableau T (m rows + appended objective row).

    `cost` covers all columns except the rhs.  Columns >= n_enterable are
    barred from entering (used to keep artificials out once driven to zero).
    Returns "optimal" or "unbounded"; T and basis are updated in place.
    """
    m = T.shape[0] - 1
    obj = T[-1]
    obj[:-1] = cost
    obj[-1] = 0.0
    for i in range(m):
        cb = cost[basis[i]]
        if cb != 0.0:
            obj -= cb * T[i]

    buf = np.empty_like(T)
    bland = False
    stall = 0
    last_val = obj[-1]

    for _ in range(opt.max_iters):
        red = obj[:n_enterable]
        if bland:
            below = np.flatnonzero(red < -opt.opt_tol)
            if below.size == 0:
                return "optimal"
            j = int(below[0])
        else:
            j = int(np.argmin(red))
            if red[j] >= -opt.opt_tol:
                return "optimal"

        col = T[:m, j]
        pos = col > opt.pivot_tol
        if not np.any(pos):
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12)
        r = int(ties[np.argmin(basis[ties])])  # smallest basis label leaves

        _pivot(T, buf, r, j)
        basis[r] = j

        # the value cell holds minus the current objective, so progress on a
        # minimization shows up as an increase
        val = obj[-1]
        if val - last_val > 1e-13 * max(1.0, abs(last_val)):
            stall = 0
            bland = False
        else:
            stall += 1
            if stall >= opt.stall_iters:
                bland = True
        last_val = val
    raise LpError("simplex iteration limit exceeded")


def _verify_feasible(lp: LinearProgram, x: np.ndarray, tol: float) -> None:
    for i in range(lp.row_coeffs.shape[0]):
        row = lp.row_coeffs[i]
        lhs = float(row @ x)
        scale = max(1.0, float(np.abs(row).sum()), abs(lp.rhs[i]))
        resid = lhs - lp.rhs[i]
        sense = lp.senses[i]
        ok = (
            (sense == LEQ and resid <= tol * scale)
            or (sense == GEQ and resid >= -tol * scale)
            or (sense == EQ and abs(resid) <= tol * scale)
        )
        if not ok:
            raise LpError(f"optimal point violates row {i} by {resid:.3e}")
    if np.any(x < lp.lower - tol) or np.any(x > lp.upper + tol):
        raise LpError("optimal point violates variable bounds")


def solve(lp: LinearProgram, options: Optional[SolverOptions] = None) -> LpSolution:
    """Solve a LinearProgram; status is Optimal, Infeasible or Unbounded.

    Optimal solutions satisfy every row to the feasibility tolerance
    (relative to row magnitude); the pivot sequence is deterministic for a
    fixed input.
    """
    opt = options or SolverOptions()
    n = lp.n_vars

    # shift to z = x - lower >= 0 (copy: rows get reoriented in place below)
    A_rows = [lp.row_coeffs.copy()]
    senses = list(lp.senses)
    b = list(lp.rhs - lp.row_coeffs @ lp.lower)

    # finite upper bounds become explicit rows on z
    ub_rows = []
    for i in range(n):
        if np.isfinite(lp.upper[i]):
            e = np.zeros(n)
            e[i] = 1.0
            ub_rows.append(e)
            senses.append(LEQ)
            b.append(lp.upper[i] - lp.lower[i])
    if ub_rows:
        A_rows.append(np.vstack(ub_rows))
    A = np.vstack(A_rows) if len(A_rows) > 1 else A_rows[0]
    b_arr = np.asarray(b, dtype=float)
    m = A.shape[0]

    # orient all rows to have nonnegative rhs
    for i in range(m):
        if b_arr[i] < 0:
            A[i] = -A[i]
            b_arr[i] = -b_arr[i]
            if senses[i] == LEQ:
                senses[i] = GEQ
            elif senses[i] == GEQ:
                senses[i] = LEQ

    # slack / surplus columns, then artificials for rows lacking a basic slack
    slack_cols = []
    art_rows = []
    for i in range(m):
        if senses[i] == LEQ:
            slack_cols.append((i, 1.0))
        elif senses[i] == GEQ:
            slack_cols.append((i, -1.0))
            art_rows.append(i)
        else:
            art_rows.append(i)
    n_slack = len(slack_cols)
    n_art = len(art_rows)
    width = n + n_slack + n_art + 1

    T = np.zeros((m + 1, width))
    T[:m, :n] = A
    T[:m, -1] = b_arr
    for j, (i, sgn) in enumerate(slack_cols):
        T[i, n + j] = sgn
    basis = np.empty(m, dtype=int)
    slack_of_row = {i: n + j for j, (i, sgn) in enumerate(slack_cols) if sgn > 0}
    for i in range(m):
        basis[i] = slack_of_row.get(i, -1)
    for j, i in enumerate(art_rows):
        T[i, n + n_slack + j] = 1.0
        basis[i] = n + n_slack + j

    struct_width = n + n_slack  # columns allowed to enter

    if n_art > 0:
        cost1 = np.zeros(width - 1)
        cost1[struct_width:] = 1.0
        status = _run_phase(T, basis, cost1, struct_width, opt)
        if status != "optimal":
            raise LpError("phase 1 reported unbounded; input is malformed")
        phase1_val = -T[-1, -1]
        if phase1_val > opt.feas_tol * max(1.0, float(np.abs(b_arr).sum())):
            return LpSolution(LpStatus.INFEASIBLE, None, float("nan"))

        # drive any artificial still basic (at zero) out, or drop its row
        buf = np.empty_like(T)
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= struct_width:
                row = T[i, :struct_width]
                cand = np.flatnonzero(np.abs(row) > opt.pivot_tol)
                if cand.size:
                    _pivot(T, buf, i, int(cand[0]))
                    basis[i] = int(cand[0])
                else:
                    keep[i] = False
        if not np.all(keep):
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = basis[keep]
            m = int(keep.sum())
        T = np.delete(T, np.s_[struct_width:width - 1], axis=1)

    cost2 = np.zeros(struct_width)
    cost2[:n] = lp.objective
    status = _run_phase(T, basis, cost2, struct_width, opt)
    if status == "unbounded":
        return LpSolution(LpStatus.UNBOUNDED, None, float("nan"))

    z = np.zeros(struct_width)
    for i in range(m):
        z[basis[i]] = T[i, -1]
    x = lp.lower + z[:n]
    # snap residual float noise off the bounds
    np.maximum(x, lp.lower, out=x)
    np.minimum(x, lp.upper, out=x)
    _verify_feasible(lp, x, opt.feas_tol)
    return LpSolution(LpStatus.OPTIMAL, x, float(lp.objective @ x))


class ParametricRhsLp:
    """Simplex engine for a family of programs differing only in the rhs.

    The problem is given in equality form with a full identity slack block:
    minimize c @ [x, s] subject to [A | I] [x, s] = b, all variables >= 0
    (the caller encodes senses through slack signs folded into A beforehand;
    here every row simply carries its own +1 slack).  Because the slack block
    of the running tableau is exactly the basis inverse, changing b costs one
    matrix-vector product, and the previous optimal basis stays dual feasible
    (reduced costs do not involve b), so a short dual-simplex pass restores
    feasibility.  Used for parametric sweeps; the one-shot `solve` entry
    point above stays stateless.
    """

    def __init__(self, A_struct: np.ndarray, cost_struct: np.ndarray,
                 options: Optional[SolverOptions] = None,
                 refactor_every: int = 12) -> None:
        A_struct = np.asarray(A_struct, dtype=float)
        cost_struct = np.asarray(cost_struct, dtype=float)
        m, n = A_struct.shape
        if cost_struct.shape != (n,):
            raise LpError("cost width must match the structural columns")
        self.m, self.n = m, n
        self.opt = options or SolverOptions()
        width = n + m + 1
        self._A = A_struct.copy()
        self._cost = np.zeros(n + m)
        self._cost[:n] = cost_struct
        self._T = np.zeros((m + 1, width))
        self._T[:m, :n] = A_struct
        self._T[:m, n : n + m] = np.eye(m)
        self._basis = np.arange(n, n + m)
        # True once the basis is known optimal for some rhs; dual pivots and
        # completed primal phases both preserve reduced costs >= 0
        self._dual_feasible = False
        self._refactor_every = refactor_every
        self._solves_since_refactor = 0

    def refactorize(self) -> None:
        """Rebuild the tableau exactly from the current basis, clearing the
        float drift accumulated over many rank-one pivot updates."""
        m, n = self.m, self.n
        full = np.zeros((m, n + m))
        full[:, :n] = self._A
        full[:, n:] = np.eye(m)
        B = full[:, self._basis]
        try:
            self._T[:m, :-1] = np.linalg.solve(B, full)
        except np.linalg.LinAlgError as exc:
            raise LpError(f"basis refactorization failed: {exc}") from exc
        self._solves_since_refactor = 0

    def _dual_iterate(self) -> str:
        """Dual simplex to primal feasibility; assumes reduced costs >= 0."""
        T, basis, opt = self._T, self._basis, self.opt
        m = self.m
        obj = T[-1]
        buf = np.empty_like(T)
        for _ in range(opt.max_iters):
            rhs = T[:m, -1]
            r = int(np.argmin(rhs))
            if rhs[r] >= -opt.feas_tol:
                return "optimal"
            row = T[r, :-1]
            neg = row < -opt.pivot_tol
            if not np.any(neg):
                return "infeasible"
            ratios = np.full(row.size, np.inf)
            ratios[neg] = np.maximum(obj[:-1][neg], 0.0) / -row[neg]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + 1e-12)
            j = int(ties[0])
            _pivot(T, buf, r, j)
            basis[r] = j
        raise LpError("dual simplex iteration limit exceeded")

    def solve_rhs(self, b: np.ndarray) -> tuple[LpStatus, Optional[np.ndarray]]:
        """Re-solve with a new rhs; returns (status, structural solution)."""
        b = np.asarray(b, dtype=float)
        if b.shape != (self.m,):
            raise LpError(f"rhs must have shape ({self.m},)")
        self._solves_since_refactor += 1
        if self._solves_since_refactor >= self._refactor_every:
            self.refactorize()
        T, basis = self._T, self._basis
        n, m = self.n, self.m

        # slack block of the tableau is the basis inverse
        T[:m, -1] = T[:m, n : n + m] @ b

        if self._dual_feasible:
            T[-1, :-1] = self._cost
            T[-1, -1] = 0.0
            for i in range(m):
                cb = self._cost[basis[i]]
                if cb != 0.0:
                    T[-1] -= cb * T[i]
        else:
            # any basis is dual feasible for zero cost: restore primal
            # feasibility first, then optimize the true cost from scratch
            T[-1].fill(0.0)
        status = self._dual_iterate()
        if status == "infeasible":
            return LpStatus.INFEASIBLE, None
        phase = _run_phase(T, basis, self._cost, n + m, self.opt)
        if phase == "unbounded":
            self._dual_feasible = False
            return LpStatus.UNBOUNDED, None
        self._dual_feasible = True

        x = np.zeros(n + m)
        x[basis] = T[:m, -1]
        return LpStatus.OPTIMAL, x[:n].copy()
