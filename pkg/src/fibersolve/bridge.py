"""Conversions between integer programs and lattice fiber problems.

An integer program here is min cx over {Ax = b, x >= 0 except on a set of
sign-free coordinates}; projecting out the sign-free coordinates turns its
feasible set into a lattice fiber and back.  Costs are rewritten to vanish
on the sign-free coordinates, which is possible exactly when the program
can have an optimum at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .core import FiberProblem, Lattice, dot
from .intlinalg import IntMatrix, hnf, kernel_lattice, particular_solution


class IntegerInfeasible(ValueError):
    """Ax = b has no integer solution at all (no fiber to speak of)."""


class NotRewritable(ValueError):
    """Cost varies along sign-free directions: the program has no optimum."""


@dataclass(frozen=True)
class IpInstance:
    """min cost.x over {x : a x = b, x >= 0 off `free`, x integer}."""

    a: IntMatrix
    b: tuple[int, ...]
    free: tuple[int, ...] = ()      # sign-free coordinates, 0-based
    cost: tuple[int, ...] | None = None

    def __post_init__(self):
        a = self.a if isinstance(self.a, IntMatrix) else IntMatrix(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        object.__setattr__(self, "free", tuple(sorted({int(i) for i in self.free})))
        if self.cost is not None:
            object.__setattr__(self, "cost", tuple(int(v) for v in self.cost))
        if len(self.b) != a.nrows:
            raise ValueError("right-hand side length does not match row count")
        if self.free and (self.free[0] < 0 or self.free[-1] >= a.ncols):
            raise ValueError("sign-free index out of range")
        if self.cost is not None and len(self.cost) != a.ncols:
            raise ValueError("cost length does not match column count")


def _rational_solve(rows, rhs):
    """One solution y of y . rows[j] = rhs[j] for all j, or None (free vars 0)."""
    m = len(rows[0]) if rows else 0
    eqs = [[Fraction(rows[j][i]) for i in range(m)] + [Fraction(rhs[j])]
           for j in range(len(rows))]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((k for k in range(r, len(eqs)) if eqs[k][c]), -1)
        if piv < 0:
            continue
        eqs[r], eqs[piv] = eqs[piv], eqs[r]
        for k in range(len(eqs)):
            if k != r and eqs[k][c]:
                f = eqs[k][c] / eqs[r][c]
                eqs[k] = [eqs[k][j] - f * eqs[r][j] for j in range(m + 1)]
        pivots.append((r, c))
        r += 1
    if any(eqs[k][m] for k in range(r, len(eqs))):
        return None
    y = [Fraction(0)] * m
    for pr, pc in reversed(pivots):
        y[pc] = (eqs[pr][m] - sum(eqs[pr][j] * y[j] for j in range(pc + 1, m))) / eqs[pr][pc]
    return y


def ip_to_fiber(inst: IpInstance) -> FiberProblem:
    """Rewrite an integer program as a fiber problem over the projected kernel.

    Raises IntegerInfeasible when Ax = b has no integer solution, and
    NotRewritable when the cost does not reduce to the sign-restricted
    coordinates (then the program has no optimal solution).
    """
    a = inst.a
    nu_full = particular_solution(a, inst.b)
    if nu_full is None:
        raise IntegerInfeasible("no integer solution of A x = b")
    kernel = kernel_lattice(a)
    keep = tuple(j for j in range(a.ncols) if j not in set(inst.free))
    lattice = Lattice(tuple(tuple(row[j] for j in keep) for row in kernel),
                      n=len(keep))
    nu = tuple(nu_full[j] for j in keep)
    if inst.cost is None:
        return FiberProblem(lattice, nu)
    if not inst.free:
        return FiberProblem(lattice, nu, cost=inst.cost)
    # find y with y A_free = c_free, then c - yA vanishes on the free part
    cols = [tuple(row[j] for row in a.rows) for j in inst.free]
    y = _rational_solve(cols, [inst.cost[j] for j in inst.free])
    if y is None:
        raise NotRewritable("cost varies along a sign-free kernel direction")
    ctil = [Fraction(inst.cost[j]) - sum(y[i] * a.rows[i][j] for i in range(a.nrows))
            for j in keep]
    constant = sum((yi * bi for yi, bi in zip(y, inst.b)), Fraction(0))
    scale = 1
    for f in ctil:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    cost = tuple(int(f * scale) for f in ctil)
    return FiberProblem(lattice, nu, cost=cost, cost_scale=scale, cost_constant=constant)


def fiber_to_ip(problem: FiberProblem) -> IpInstance:
    """Represent a fiber problem as {(I,-S)(x,y) = nu, x >= 0, y free}."""
    lattice = problem.lattice
    n = lattice.n
    span = lattice.basis            # columns of S are the basis vectors
    k = len(span)
    rows = []
    for i in range(n):
        row = [0] * (n + k)
        row[i] = 1
        for j in range(k):
            row[n + j] = -span[j][i]
        rows.append(tuple(row))
    cost = None
    if problem.cost is not None:
        cost = tuple(problem.cost) + (0,) * k
    return IpInstance(IntMatrix(rows), problem.nu, free=tuple(range(n, n + k)), cost=cost)


def extend_solution(inst: IpInstance, x_restricted: Sequence[int]) -> tuple[int, ...]:
    """Fill in the sign-free coordinates of a feasible restricted point."""
    a = inst.a
    keep = tuple(j for j in range(a.ncols) if j not in set(inst.free))
    if len(x_restricted) != len(keep):
        raise ValueError("restricted point has wrong dimension")
    x = [0] * a.ncols
    for pos, j in enumerate(keep):
        x[j] = int(x_restricted[pos])
    if not inst.free:
        residual_check = [dot(row, x) for row in a.rows]
        if tuple(residual_check) != inst.b:
            raise ValueError("point does not satisfy A x = b")
        return tuple(x)
    residual = [bi - dot(row, x) for bi, row in zip(inst.b, a.rows)]
    cols = IntMatrix(tuple(tuple(row[j] for j in inst.free) for row in a.rows),
                     ncols=len(inst.free))
    fill = particular_solution(cols, residual)
    if fill is None:
        raise ValueError("restricted point is not feasible for the instance")
    for pos, j in enumerate(inst.free):
        x[j] = fill[pos]
    assert [dot(row, x) for row in a.rows] == list(inst.b)
    return tuple(x)
