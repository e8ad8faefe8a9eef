"""Dense two-phase simplex solver for small linear programs.

All problems are minimizations over nonnegative variables with
constraints of the form a.x <= b, a.x >= b, or a.x == b. The DEA models
built on top of this never exceed a handful of constraints, so a dense
tableau with Bland's anti-cycling rule is both simple and fast enough.
"""

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, GE, EQ = "<=", ">=", "=="
_RELATIONS = (LE, GE, EQ)

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

_MAX_PIVOTS = 100_000  # Bland's rule terminates; this guards against defects


class LpError(ValueError):
    """Malformed problem (dimension mismatch, unknown relation, non-finite data)."""


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  subject to the given constraints and x >= 0."""

    objective: np.ndarray
    constraints: list  # of (coefficients, relation, rhs)

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=float)
        object.__setattr__(self, "objective", obj)
        if obj.ndim != 1:
            raise LpError("objective must be a vector")
        checked = []
        for i, (coeffs, rel, rhs) in enumerate(self.constraints):
            coeffs = np.asarray(coeffs, dtype=float)
            if coeffs.shape != obj.shape:
                raise LpError(
                    f"constraint {i}: {coeffs.shape[0] if coeffs.ndim == 1 else '?'} "
                    f"coefficients for {obj.shape[0]} variables"
                )
            if rel not in _RELATIONS:
                raise LpError(f"constraint {i}: unknown relation {rel!r}")
            rhs = float(rhs)
            if not np.isfinite(rhs) or not np.all(np.isfinite(coeffs)):
                raise LpError(f"constraint {i}: non-finite data")
            checked.append((coeffs, rel, rhs))
        object.__setattr__(self, "constraints", checked)

    @property
    def n_vars(self):
        return self.objective.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective: float | None = None
    x: np.ndarray | None = None
    # final phase-2 reduced costs (structural + slack columns); all >= -PIVOT_TOL
    # at optimality, which callers can use as an optimality certificate
    reduced_costs: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_optimal(self):
        return self.status == OPTIMAL


def _bland_entering(obj_row, allowed):
    for j in allowed:
        if obj_row[j] < -PIVOT_TOL:
            return j
    return -1


def _bland_leaving(tableau, basis, col):
    best_ratio = None
    best_row = -1
    for i in range(tableau.shape[0]):
        a = tableau[i, col]
        if a <= PIVOT_TOL:
            continue
        ratio = tableau[i, -1] / a
        if (
            best_row < 0
            or ratio < best_ratio - PIVOT_TOL
            or (abs(ratio - best_ratio) <= PIVOT_TOL and basis[i] < basis[best_row])
        ):
            best_ratio = ratio
            best_row = i
    return best_row


def _pivot(tableau, obj_row, basis, row, col):
    tableau[row, :] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row, :])
    obj_row -= obj_row[col] * tableau[row, :]
    basis[row] = col


def _run_simplex(tableau, obj_row, basis, allowed):
    pivots = 0
    while True:
        col = _bland_entering(obj_row, allowed)
        if col < 0:
            return OPTIMAL
        row = _bland_leaving(tableau, basis, col)
        if row < 0:
            return UNBOUNDED
        _pivot(tableau, obj_row, basis, row, col)
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise RuntimeError("simplex failed to terminate; solver defect")


def solve(lp: LinearProgram) -> LpSolution:
    """Two-phase simplex with Bland's rule.

    Phase 1 minimizes the sum of artificial variables; an optimum above
    FEAS_TOL means the program has no feasible point. Phase 2 then
    minimizes the real objective; a costless unbounded ray yields
    UNBOUNDED. Deterministic for identical inputs.
    """
    n = lp.n_vars
    m = len(lp.constraints)

    rows = []
    rels = []
    rhs = []
    for coeffs, rel, b in lp.constraints:
        if b < 0.0:  # normalize to b >= 0 so slacks/artificials start feasible
            coeffs = -coeffs
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append(coeffs)
        rels.append(rel)
        rhs.append(b)

    n_slack = sum(1 for r in rels if r != EQ)
    n_art = sum(1 for r in rels if r != LE)
    total = n + n_slack + n_art

    tableau = np.zeros((m, total + 1))
    basis = np.empty(m, dtype=int)
    slack_at = n
    art_at = n + n_slack
    for i in range(m):
        tableau[i, :n] = rows[i]
        tableau[i, -1] = rhs[i]
        if rels[i] == LE:
            tableau[i, slack_at] = 1.0
            basis[i] = slack_at
            slack_at += 1
        elif rels[i] == GE:
            tableau[i, slack_at] = -1.0
            slack_at += 1
            tableau[i, art_at] = 1.0
            basis[i] = art_at
            art_at += 1
        else:
            tableau[i, art_at] = 1.0
            basis[i] = art_at
            art_at += 1

    structural = range(n + n_slack)

    if n_art:
        phase1 = np.zeros(total + 1)
        phase1[n + n_slack : total] = 1.0
        for i in range(m):
            if basis[i] >= n + n_slack:
                phase1 -= tableau[i, :]
        # artificials may leave and re-enter during phase 1
        if _run_simplex(tableau, phase1, basis, range(total)) == UNBOUNDED:
            raise RuntimeError("phase-1 objective unbounded; solver defect")
        if -phase1[-1] > FEAS_TOL:
            return LpSolution(status=INFEASIBLE)
        # drive leftover artificials out of the basis; rows that cannot
        # pivot are redundant constraints and stay put at level zero
        for i in range(m):
            if basis[i] >= n + n_slack:
                for j in structural:
                    if abs(tableau[i, j]) > PIVOT_TOL:
                        _pivot(tableau, phase1, basis, i, j)
                        break

    obj_row = np.zeros(total + 1)
    obj_row[:n] = lp.objective
    for i in range(m):
        if basis[i] < n + n_slack and obj_row[basis[i]] != 0.0:
            obj_row -= obj_row[basis[i]] * tableau[i, :]

    if _run_simplex(tableau, obj_row, basis, structural) == UNBOUNDED:
        return LpSolution(status=UNBOUNDED)

    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i, -1]
    np.clip(x, 0.0, None, out=x)
    return LpSolution(
        status=OPTIMAL,
        objective=float(lp.objective @ x),
        x=x,
        reduced_costs=obj_row[: n + n_slack].copy(),
    )


def format_lp(lp: LinearProgram) -> str:
    """Plain-text dump (objective row, then one constraint per line) for bug reports."""
    lines = ["min " + " ".join(repr(c) for c in lp.objective)]
    for coeffs, rel, rhs in lp.constraints:
        lines.append(" ".join(repr(c) for c in coeffs) + f" {rel} {rhs!r}")
    lines.append(f"vars {lp.n_vars} >= 0")
    return "\n".join(lines) + "\n"
