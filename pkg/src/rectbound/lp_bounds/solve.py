"""Solvers for rectangle LPs.

Two paths with one result type:

* `solve_full_enumeration` instantiates every family member as a column and
  runs the exact rational simplex.  Only viable for tiny universes, and used
  as the ground truth.
* `solve_constraint_generation` keeps a small working set of columns, solves
  the float master with HiGHS, prices the rest of the family with the exact
  max-weight rectangle oracle, and stops once no column's dual weight exceeds
  its unit cost beyond the tolerance.

Duals follow one sign convention everywhere: `>=` rows nonnegative, `<=`
rows nonpositive, `==` rows free, and the dual objective (rhs times dual,
summed) equals the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy.optimize import linprog

from ..errors import CapExceededError, ConvergenceError, ParameterRangeError
from ..rectangles import Rectangle, WeightMatrix
from .exact import (
    STATUS_INFEASIBLE,
    STATUS_OPTIMAL,
    STATUS_UNBOUNDED,
    solve_exact_lp,
)
from .model import CLASS_COVER, LPInstance, PairConstraint, SENSE_EQ, SENSE_GE, SENSE_LE

_ENUMERATION_CELL_LIMIT = 2_000_000

SOLVER_EXACT = "exact-simplex"
SOLVER_CG = "highs-constraint-generation"

ARITH_EXACT = "exact-rational"
ARITH_FLOAT = "float-tol"


@dataclass(frozen=True)
class LPResult:
    status: str
    optimum: Fraction | float | None
    weights: Mapping[Rectangle, Fraction | float]
    duals: tuple
    residual: Fraction | float | None
    solver: str
    arithmetic: str
    iterations: int
    columns: int
    oracle_max: float | None = None

    def weight_total(self):
        return sum(self.weights.values())


def _coverage(weights: Mapping[Rectangle, object], c: PairConstraint):
    return sum(w for rect, w in weights.items() if c.pair.x in rect.rows and c.pair.y in rect.cols)


def _max_violation(lp: LPInstance, weights, zero):
    worst = zero
    for c in lp.constraints:
        cov = _coverage(weights, c)
        if c.sense == SENSE_GE:
            gap = c.rhs - cov
        elif c.sense == SENSE_LE:
            gap = cov - c.rhs
        else:
            gap = abs(cov - c.rhs)
        if gap > worst:
            worst = gap
    return worst


def solve_full_enumeration(lp: LPInstance, cap: int | None = None) -> LPResult:
    """Exact optimum over the explicitly enumerated rectangle family."""
    members = lp.family.members(lp.n, cap)
    if len(members) * max(1, len(lp.constraints)) > _ENUMERATION_CELL_LIMIT:
        raise CapExceededError(
            f"{len(members)} columns x {len(lp.constraints)} rows is past the "
            "full-enumeration limit; use constraint generation"
        )

    # Presolve: a <= or == row with rhs 0 pins every covering column at zero.
    banned_cols: set[int] = set()
    live_rows: list[int] = []
    for ridx, c in enumerate(lp.constraints):
        if c.rhs == 0 and c.sense in (SENSE_LE, SENSE_EQ):
            for j, rect in enumerate(members):
                if c.pair.x in rect.rows and c.pair.y in rect.cols:
                    banned_cols.add(j)
        else:
            live_rows.append(ridx)
    keep = [j for j in range(len(members)) if j not in banned_cols]

    rows = []
    for ridx in live_rows:
        c = lp.constraints[ridx]
        coeffs = [
            Fraction(1) if c.pair.x in members[j].rows and c.pair.y in members[j].cols else Fraction(0)
            for j in keep
        ]
        if not any(coeffs) and c.sense == SENSE_GE and c.rhs > 0:
            return LPResult(
                status=STATUS_INFEASIBLE,
                optimum=None,
                weights={},
                duals=(),
                residual=None,
                solver=SOLVER_EXACT,
                arithmetic=ARITH_EXACT,
                iterations=0,
                columns=len(keep),
            )
        rows.append((coeffs, c.sense, c.rhs))

    res = solve_exact_lp([Fraction(1)] * len(keep), rows)
    if res.status != STATUS_OPTIMAL:
        return LPResult(
            status=res.status,
            optimum=None,
            weights={},
            duals=(),
            residual=None,
            solver=SOLVER_EXACT,
            arithmetic=ARITH_EXACT,
            iterations=res.iterations,
            columns=len(keep),
        )
    weights = {members[j]: v for j, v in zip(keep, res.x) if v}
    duals = [Fraction(0)] * len(lp.constraints)
    for pos, ridx in enumerate(live_rows):
        duals[ridx] = res.duals[pos]
    return LPResult(
        status=STATUS_OPTIMAL,
        optimum=res.objective,
        weights=weights,
        duals=tuple(duals),
        residual=_max_violation(lp, weights, Fraction(0)),
        solver=SOLVER_EXACT,
        arithmetic=ARITH_EXACT,
        iterations=res.iterations,
        columns=len(keep),
    )


def _seed_columns(lp: LPInstance) -> list[Rectangle]:
    seeds: list[Rectangle] = []
    seen: set[tuple] = set()
    for c in lp.constraints:
        if c.klass == CLASS_COVER:
            rect = Rectangle(lp.n, frozenset({c.pair.x}), frozenset({c.pair.y}))
            if rect.key() not in seen:
                seen.add(rect.key())
                seeds.append(rect)
    if lp.family.kind == "witness":
        from itertools import combinations

        from ..rectangles import all_strings

        k = lp.family.k or 0
        for coords in combinations(range(1, lp.n + 1), k):
            mask = 0
            for coord in coords:
                mask |= 1 << (coord - 1)
            strings = frozenset(s for s in all_strings(lp.n) if s.mask & mask == mask)
            if not strings:
                continue
            rect = Rectangle(lp.n, strings, strings)
            if rect.key() not in seen:
                seen.add(rect.key())
                seeds.append(rect)
    return seeds


def _master_rows(lp: LPInstance, columns: list[Rectangle]):
    a_ub, b_ub, ub_rows = [], [], []
    a_eq, b_eq, eq_rows = [], [], []
    for ridx, c in enumerate(lp.constraints):
        line = [
            1.0 if c.pair.x in rect.rows and c.pair.y in rect.cols else 0.0 for rect in columns
        ]
        if c.sense == SENSE_GE:
            a_ub.append([-v for v in line])
            b_ub.append(-float(c.rhs))
            ub_rows.append(ridx)
        elif c.sense == SENSE_LE:
            a_ub.append(line)
            b_ub.append(float(c.rhs))
            ub_rows.append(ridx)
        else:
            a_eq.append(line)
            b_eq.append(float(c.rhs))
            eq_rows.append(ridx)
    return a_ub, b_ub, ub_rows, a_eq, b_eq, eq_rows


def solve_constraint_generation(
    lp: LPInstance,
    tol: float = 1e-9,
    max_iters: int = 1000,
    oracle_cap: int | None = None,
) -> LPResult:
    """Float optimum by column generation against the exact rectangle oracle."""
    if max_iters < 1:
        raise ParameterRangeError("max_iters must be positive")
    columns = _seed_columns(lp)
    if not columns:
        return LPResult(
            status=STATUS_OPTIMAL,
            optimum=0.0,
            weights={},
            duals=tuple(0.0 for _ in lp.constraints),
            residual=_max_violation(lp, {}, 0.0),
            solver=SOLVER_CG,
            arithmetic=ARITH_FLOAT,
            iterations=0,
            columns=0,
            oracle_max=None,
        )
    known = {rect.key() for rect in columns}

    res = None
    duals = [0.0] * len(lp.constraints)
    oracle_max = None
    for iteration in range(1, max_iters + 1):
        a_ub, b_ub, ub_rows, a_eq, b_eq, eq_rows = _master_rows(lp, columns)
        res = linprog(
            c=np.ones(len(columns)),
            A_ub=np.array(a_ub) if a_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(a_eq) if a_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=(0, None),
            method="highs",
        )
        if res.status == 2:
            raise ConvergenceError(
                "constraint-generation master is infeasible; the seed columns "
                "cannot satisfy the cover rows"
            )
        if res.status == 3:
            return LPResult(
                status=STATUS_UNBOUNDED,
                optimum=None,
                weights={},
                duals=(),
                residual=None,
                solver=SOLVER_CG,
                arithmetic=ARITH_FLOAT,
                iterations=iteration,
                columns=len(columns),
                oracle_max=None,
            )
        if res.status != 0:
            raise ConvergenceError(f"HiGHS returned status {res.status}: {res.message}")

        duals = [0.0] * len(lp.constraints)
        for pos, ridx in enumerate(ub_rows):
            lam = float(res.ineqlin.marginals[pos])
            duals[ridx] = -lam if lp.constraints[ridx].sense == SENSE_GE else lam
        for pos, ridx in enumerate(eq_rows):
            duals[ridx] = float(res.eqlin.marginals[pos])

        pair_weight: dict = {}
        for ridx, c in enumerate(lp.constraints):
            if duals[ridx]:
                pair_weight[c.pair] = pair_weight.get(c.pair, 0.0) + duals[ridx]
        w = WeightMatrix(lp.n, pair_weight)
        rect, value, _witness = lp.family.separation_oracle(w, cap=oracle_cap)
        oracle_max = float(value)
        if oracle_max <= 1.0 + tol:
            break
        if rect.key() in known:
            # Float noise: the priced column is already in the master.
            break
        known.add(rect.key())
        columns.append(rect)
    else:
        raise ConvergenceError(f"no convergence after {max_iters} iterations")

    weights = {
        rect: float(v) for rect, v in zip(columns, res.x) if v > 1e-12
    }
    return LPResult(
        status=STATUS_OPTIMAL,
        optimum=float(res.fun),
        weights=weights,
        duals=tuple(duals),
        residual=float(_max_violation(lp, weights, 0.0)),
        solver=SOLVER_CG,
        arithmetic=ARITH_FLOAT,
        iterations=iteration,
        columns=len(columns),
        oracle_max=oracle_max,
    )
