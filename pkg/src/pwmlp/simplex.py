"""Two-phase revised simplex for standard-form LPs (min c'z, Qz = s, z >= 0).

The solver always terminates at a *basic feasible solution* (a vertex of the
feasible polyhedron); callers rely on this to bound the number of nonzero
entries of the returned point.  Interior-point methods would not provide
that structure, which is why one is implemented here.

Constraint columns are pulled on demand through a small column-source
interface (see :class:`DenseColumns`), so large structured instances never
have to materialize their constraint matrix densely.  A column source must
provide:

``n_rows``, ``n_cols``
    Dimensions of the equality system.
``column(j)``
    Dense column ``j`` as a length-``n_rows`` array.
``price(y)``
    ``y @ Q`` for a full-length row vector ``y`` (used to price every
    column in one vectorized call).
``matvec(z)``
    ``Q @ z`` (used for final residual verification).

Numerical policy
----------------
* Pivot rule: Dantzig (most negative reduced cost), switching permanently
  to Bland's smallest-index rule after ``5 * n_rows`` degenerate pivots so
  termination is guaranteed under heavy degeneracy.
* Basis maintenance: dense LU factorization with a product-form eta file,
  refactorized every ``refactor_every`` pivots and whenever the priced and
  recomputed reduced costs of the entering column drift apart by more than
  ``DRIFT_TOL``.
* Rank-deficient rows are detected at the end of phase one (artificial
  variables stuck basic at zero with no replacement column) and dropped
  from the working row set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .exceptions import IterationLimitExceeded, NumericalBreakdown, ValidationError

# Entering threshold on reduced costs; also the dual-feasibility guarantee scale.
DUAL_TOL = 1e-9
# Minimum admissible pivot magnitude in the ratio test.
PIVOT_TOL = 1e-9
# Relative disagreement between priced and recomputed reduced cost that
# triggers an early refactorization.
DRIFT_TOL = 1e-7
# A step below this is counted as a degenerate pivot.
DEGENERATE_STEP = 1e-12
# Phase-one objective above this (relative) threshold proves infeasibility.
PHASE1_TOL = 1e-7
# Optimality residual allowed on ||Qz - s||_inf relative to 1 + ||s||_inf.
FEAS_TOL = 1e-8


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class DenseColumns:
    """Column source backed by a dense 2-d array."""

    def __init__(self, matrix):
        q = np.asarray(matrix, dtype=float)
        if q.ndim != 2:
            raise ValidationError("constraint matrix must be 2-d")
        self._q = q

    @property
    def n_rows(self) -> int:
        return self._q.shape[0]

    @property
    def n_cols(self) -> int:
        return self._q.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self._q[:, j]

    def price(self, y: np.ndarray) -> np.ndarray:
        return y @ self._q

    def matvec(self, z: np.ndarray) -> np.ndarray:
        return self._q @ z


@dataclass(frozen=True)
class StandardLp:
    """A standard-form LP: minimize ``cost @ z`` over ``Qz = rhs``, ``z >= 0``.

    ``columns`` is either a 2-d array (wrapped in :class:`DenseColumns`) or
    any object implementing the column-source interface.  ``basis_hint``
    optionally names starting-basis columns plus the rows that still need
    artificial variables; a hint that fails validation is silently ignored
    in favour of the all-artificial start.
    """

    cost: np.ndarray
    columns: object
    rhs: np.ndarray
    basis_hint: Optional[tuple] = None

    def __post_init__(self):
        cols = self.columns
        if isinstance(cols, np.ndarray) or (not hasattr(cols, "price") and hasattr(cols, "__len__")):
            cols = DenseColumns(cols)
            object.__setattr__(self, "columns", cols)
        cost = np.ascontiguousarray(self.cost, dtype=float)
        rhs = np.ascontiguousarray(self.rhs, dtype=float)
        if cost.ndim != 1 or cost.size != cols.n_cols:
            raise ValidationError(f"cost length {cost.size} does not match {cols.n_cols} columns")
        if rhs.ndim != 1 or rhs.size != cols.n_rows:
            raise ValidationError(f"rhs length {rhs.size} does not match {cols.n_rows} rows")
        if cols.n_rows > cols.n_cols:
            raise ValidationError(f"need n_rows <= n_cols, got {cols.n_rows} rows, {cols.n_cols} columns")
        if not (np.all(np.isfinite(cost)) and np.all(np.isfinite(rhs))):
            raise ValidationError("cost and rhs must be finite")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "rhs", rhs)

    @property
    def n_rows(self) -> int:
        return self.columns.n_rows

    @property
    def n_cols(self) -> int:
        return self.columns.n_cols


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome.  ``z``/``objective``/``basis`` are meaningful only
    when ``status`` is OPTIMAL; ``basis`` lists the working-basis column
    indices (ascending), whose size equals the numerical rank actually used.
    """

    z: np.ndarray
    objective: float
    basis: np.ndarray
    status: SolveStatus
    iterations: int


@dataclass(frozen=True)
class PhaseOneResult:
    """Outcome of the feasibility phase."""

    feasible: bool
    basis: np.ndarray
    work_rows: np.ndarray
    infeasibility: float
    iterations: int


#: Iteration-log callback: (iteration, phase, objective, infeasibility).
LogCallback = Callable[[int, int, float, float], None]


class SimplexSolver:
    """One LP, one solver instance.

    Instances own mutable state and are single-threaded; distinct instances
    may run concurrently.  ``solve()`` (or ``phase_one()``) may be called
    repeatedly; each call restarts from scratch and, given identical input,
    reproduces the identical pivot sequence and basis.
    """

    def __init__(
        self,
        lp: StandardLp,
        *,
        refactor_every: int = 100,
        iteration_limit: Optional[int] = None,
        log: Optional[LogCallback] = None,
        log_every: int = 200,
    ):
        self.lp = lp
        self.refactor_every = int(refactor_every)
        n, m = lp.n_cols, lp.n_rows
        self.iteration_limit = int(iteration_limit) if iteration_limit else 50 * (n + m)
        self.degenerate_limit = 5 * m
        self.log = log
        self.log_every = int(log_every)

    # -- state ------------------------------------------------------------

    def _reset(self):
        lp = self.lp
        self.n_real = lp.n_cols
        self.n_rows = lp.n_rows
        self.work_rows = np.arange(self.n_rows)
        self.art_sign = np.where(lp.rhs >= 0.0, 1.0, -1.0)
        self.iterations = 0
        self.degenerate = 0
        self.bland = False
        self.phase = 1
        self._lu = None
        self._etas: list[tuple[int, np.ndarray]] = []
        self._pivots_since_refactor = 0
        self.basis = None
        self.x_basic = None
        self._is_basic_real = np.zeros(self.n_real, dtype=bool)
        if not self._try_hint():
            self.basis = self.n_real + np.arange(self.n_rows)
            self._refactor()

    def _try_hint(self) -> bool:
        hint = self.lp.basis_hint
        if hint is None:
            return False
        cols = np.asarray(hint[0], dtype=int)
        art_rows = np.asarray(hint[1], dtype=int)
        if cols.size + art_rows.size != self.n_rows:
            return False
        basis = np.concatenate([cols, self.n_real + art_rows])
        try:
            b = self._basis_matrix(basis)
            lu = lu_factor(b, check_finite=False)
            xb = lu_solve(lu, self.lp.rhs[self.work_rows], check_finite=False)
        except Exception:
            return False
        if not np.all(np.isfinite(xb)):
            return False
        n_hint = cols.size
        if xb[:n_hint].min(initial=0.0) < -PIVOT_TOL:
            return False
        # Flip artificial signs so their basic values come out nonnegative.
        flipped = []
        for p in range(n_hint, basis.size):
            if xb[p] < 0.0:
                row = basis[p] - self.n_real
                self.art_sign[row] = -self.art_sign[row]
                flipped.append(row)
                xb[p] = -xb[p]
        self.basis = basis
        self._is_basic_real[cols] = True
        try:
            self._refactor()
        except NumericalBreakdown:
            # Near-singular hint: undo and fall back to the artificial start.
            self.basis = None
            self._is_basic_real[:] = False
            self.art_sign[flipped] = -self.art_sign[flipped]
            return False
        return True

    # -- linear algebra on the working basis -------------------------------

    def _ext_column(self, j: int) -> np.ndarray:
        """Column j of the artificial-augmented system, on working rows."""
        if j < self.n_real:
            return np.asarray(self.lp.columns.column(j), dtype=float)[self.work_rows]
        row = j - self.n_real
        col = np.zeros(self.work_rows.size)
        pos = np.searchsorted(self.work_rows, row)
        col[pos] = self.art_sign[row]
        return col

    def _basis_matrix(self, basis: np.ndarray) -> np.ndarray:
        b = np.empty((self.work_rows.size, basis.size))
        for p, j in enumerate(basis):
            b[:, p] = self._ext_column(j)
        return b

    def _refactor(self):
        b = self._basis_matrix(self.basis)
        try:
            lu = lu_factor(b, check_finite=False)
        except Exception as exc:
            raise NumericalBreakdown(f"basis factorization failed: {exc}", self.iterations) from None
        u_diag = np.abs(np.diag(lu[0]))
        if not np.all(np.isfinite(lu[0])) or u_diag.min(initial=np.inf) < 1e-13 * max(1.0, u_diag.max(initial=0.0)):
            raise NumericalBreakdown("basis matrix is numerically singular", self.iterations)
        self._lu = lu
        self._etas = []
        self._pivots_since_refactor = 0
        self.x_basic = self._ftran(self.lp.rhs[self.work_rows])

    def _ftran(self, rhs_vec: np.ndarray) -> np.ndarray:
        x = lu_solve(self._lu, np.ascontiguousarray(rhs_vec), check_finite=False)
        for r, d in self._etas:
            t = x[r] / d[r]
            x -= d * t
            x[r] = t
        return x

    def _btran(self, cost_vec: np.ndarray) -> np.ndarray:
        y = np.array(cost_vec, dtype=float)
        for r, d in reversed(self._etas):
            y[r] = (y[r] - d @ y + d[r] * y[r]) / d[r]
        return lu_solve(self._lu, y, trans=1, check_finite=False)

    # -- pricing ------------------------------------------------------------

    def _phase_cost(self) -> np.ndarray:
        """Cost of the current basis entries under the active phase."""
        if self.phase == 1:
            return (self.basis >= self.n_real).astype(float)
        return self.lp.cost[self.basis]

    def _reduced_costs(self, y_work: np.ndarray) -> np.ndarray:
        y_full = np.zeros(self.n_rows)
        y_full[self.work_rows] = y_work
        priced = np.asarray(self.lp.columns.price(y_full), dtype=float)
        rc = (-priced) if self.phase == 1 else (self.lp.cost - priced)
        rc[self._is_basic_real] = np.inf
        return rc

    def _entering(self, rc: np.ndarray) -> Optional[int]:
        if self.bland:
            below = np.nonzero(rc < -DUAL_TOL)[0]
            return int(below[0]) if below.size else None
        j = int(np.argmin(rc))
        return j if rc[j] < -DUAL_TOL else None

    # -- main loop ----------------------------------------------------------

    def _emit_log(self):
        if self.log is None:
            return
        obj = float(self._phase_cost() @ self.x_basic)
        infeas = obj if self.phase == 1 else 0.0
        primal = float(self.lp.cost[self.basis[self.basis < self.n_real]]
                       @ self.x_basic[self.basis < self.n_real])
        self.log(self.iterations, self.phase, primal, infeas)

    def _iterate(self) -> str:
        """Run pivots for the current phase; returns 'optimal' or 'unbounded'."""
        repriced_clean = False
        while True:
            if self._pivots_since_refactor >= self.refactor_every:
                self._refactor()
            y = self._btran(self._phase_cost())
            rc = self._reduced_costs(y)
            j = self._entering(rc)
            if j is None:
                if self._etas and not repriced_clean:
                    # Confirm optimality on a fresh factorization before stopping.
                    self._refactor()
                    repriced_clean = True
                    continue
                return "optimal"
            repriced_clean = False
            d = self._ftran(self._ext_column(j))
            cost_j = 0.0 if self.phase == 1 else self.lp.cost[j]
            rc_direct = cost_j - float(self._phase_cost() @ d)
            if abs(rc_direct - rc[j]) > DRIFT_TOL * (1.0 + abs(cost_j)):
                if self._etas:
                    self._refactor()
                    continue
                # Disagreement on exact factors: trust the direct value.
                if rc_direct >= -DUAL_TOL:
                    return "optimal"
            r = self._ratio_test(d)
            if r is None:
                return "unbounded"
            self._pivot(j, r, d)

    def _ratio_test(self, d: np.ndarray) -> Optional[int]:
        positive = np.nonzero(d > PIVOT_TOL)[0]
        if positive.size == 0:
            return None
        xb = np.maximum(self.x_basic[positive], 0.0)
        ratios = xb / d[positive]
        theta = ratios.min()
        ties = positive[ratios <= theta + 1e-9 * (1.0 + theta)]
        # Smallest basis-variable index among ties (Bland-compatible, deterministic).
        return int(ties[np.argmin(self.basis[ties])])

    def _pivot(self, j: int, r: int, d: np.ndarray):
        self.iterations += 1
        if self.iterations > self.iteration_limit:
            raise IterationLimitExceeded(
                f"exceeded the pivot cap of {self.iteration_limit}", self.iterations
            )
        theta = max(self.x_basic[r], 0.0) / d[r]
        if theta <= DEGENERATE_STEP * (1.0 + abs(self.x_basic[r])):
            self.degenerate += 1
            if not self.bland and self.degenerate >= self.degenerate_limit:
                self.bland = True
        leaving = self.basis[r]
        if leaving < self.n_real:
            self._is_basic_real[leaving] = False
        self._is_basic_real[j] = True
        self.x_basic -= theta * d
        self.x_basic[r] = theta
        self.basis[r] = j
        self._etas.append((r, d))
        self._pivots_since_refactor += 1
        if self.log is not None and self.iterations % self.log_every == 0:
            self._emit_log()

    # -- phase one ----------------------------------------------------------

    def phase_one(self) -> PhaseOneResult:
        """Find a feasible basis or prove infeasibility.

        On success the returned basis contains real columns only; rows whose
        artificial variable could not be replaced (linearly dependent rows)
        are excluded from the working row set.
        """
        self._reset()
        self.phase = 1
        status = self._iterate()
        if status == "unbounded":
            raise NumericalBreakdown("phase one reported an unbounded direction", self.iterations)
        infeas = float(self._phase_cost() @ self.x_basic)
        scale = 1.0 + float(np.abs(self.lp.rhs).sum())
        if infeas > PHASE1_TOL * scale:
            return PhaseOneResult(False, self.basis.copy(), self.work_rows.copy(), infeas, self.iterations)
        self._purge_artificials()
        return PhaseOneResult(True, self.basis.copy(), self.work_rows.copy(), infeas, self.iterations)

    def _purge_artificials(self):
        """Pivot zero-valued artificials out of the basis; drop dependent rows."""
        redundant: list[int] = []
        for p in range(self.basis.size):
            if self.basis[p] < self.n_real:
                continue
            # Row p of the basis inverse prices the candidate replacements.
            e = np.zeros(self.basis.size)
            e[p] = 1.0
            w = self._btran(e)
            w_full = np.zeros(self.n_rows)
            w_full[self.work_rows] = w
            alpha = np.asarray(self.lp.columns.price(w_full), dtype=float)
            alpha[self._is_basic_real] = 0.0
            q = int(np.argmax(np.abs(alpha)))
            if abs(alpha[q]) <= DRIFT_TOL:
                redundant.append(p)
                continue
            d = self._ftran(self._ext_column(q))
            if abs(d[p]) <= PIVOT_TOL:
                redundant.append(p)
                continue
            self._is_basic_real[q] = True
            theta = max(self.x_basic[p], 0.0) / d[p]
            self.x_basic -= theta * d
            self.x_basic[p] = theta
            self.basis[p] = q
            self._etas.append((p, d))
            self.iterations += 1
        if redundant:
            keep = np.setdiff1d(np.arange(self.basis.size), np.array(redundant, dtype=int))
            self.work_rows = self.work_rows[keep]
            self.basis = self.basis[keep]
        self._refactor()

    # -- public entry ---------------------------------------------------------

    def solve(self) -> LpSolution:
        """Two-phase solve to a vertex.

        Raises
        ------
        NumericalBreakdown
            If the basis factorization degenerates beyond recovery.
        IterationLimitExceeded
            If the anti-cycling pivot cap ``50 * (n_cols + n_rows)`` is hit.
        """
        p1 = self.phase_one()
        if not p1.feasible:
            return LpSolution(
                z=np.zeros(self.n_real),
                objective=np.nan,
                basis=np.array([], dtype=int),
                status=SolveStatus.INFEASIBLE,
                iterations=self.iterations,
            )
        self.phase = 2
        status = self._iterate()
        if status == "unbounded":
            return LpSolution(
                z=np.zeros(self.n_real),
                objective=-np.inf,
                basis=np.sort(self.basis.copy()),
                status=SolveStatus.UNBOUNDED,
                iterations=self.iterations,
            )
        # Clean final factorization, then verify the optimality contract.
        self._refactor()
        z = np.zeros(self.n_real)
        real = self.basis < self.n_real
        z[self.basis[real]] = self.x_basic[real]
        if z.min(initial=0.0) < -1e-9:
            raise NumericalBreakdown(f"negative basic value {z.min():.3e} at optimality", self.iterations)
        residual = np.asarray(self.lp.columns.matvec(z), dtype=float) - self.lp.rhs
        if np.abs(residual).max(initial=0.0) > FEAS_TOL * (1.0 + np.abs(self.lp.rhs).max(initial=0.0)):
            raise NumericalBreakdown(
                f"optimal point violates equalities by {np.abs(residual).max():.3e}", self.iterations
            )
        if self.log is not None:
            self._emit_log()
        return LpSolution(
            z=z,
            objective=float(self.lp.cost @ z),
            basis=np.sort(self.basis.copy()),
            status=SolveStatus.OPTIMAL,
            iterations=self.iterations,
        )


def solve(lp: StandardLp, **kwargs) -> LpSolution:
    """Convenience wrapper: ``SimplexSolver(lp, **kwargs).solve()``."""
    return SimplexSolver(lp, **kwargs).solve()
