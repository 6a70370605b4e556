"""Exact rational linear programming over lattice spans and dual cones.

A dense two-phase simplex on Fraction tableaus with Bland's rule: slow but
exact and deterministic, which is what the truncation and boundedness checks
need.  Infeasibility always comes with a verified Farkas certificate.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import NamedTuple, Sequence

from .intlinalg import kernel_lattice


class SimplexResult(NamedTuple):
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: Fraction | None
    solution: tuple[Fraction, ...] | None
    basis: tuple[int, ...] | None
    dual: tuple[Fraction, ...] | None  # optimal duals, or Farkas y (yA <= 0, yb > 0)
    ray: tuple[Fraction, ...] | None   # improving ray when unbounded


def solve_lp(a_rows, b, c) -> SimplexResult:
    """Solve min c.x subject to A x = b, x >= 0 exactly.

    Args:
        a_rows: constraint matrix rows (ints or Fractions).
        b: right-hand side.
        c: objective coefficients.

    Returns:
        SimplexResult; `basis` holds the optimal basic variable indices
        (sorted), `dual` the simplex multipliers (or, when infeasible, a
        Farkas vector y with y A <= 0 and y b > 0).
    """
    a = [[Fraction(v) for v in row] for row in a_rows]
    rhs = [Fraction(v) for v in b]
    cost = [Fraction(v) for v in c]
    m = len(a)
    n = len(cost)
    if any(len(row) != n for row in a):
        raise ValueError("constraint matrix width does not match objective length")
    if len(rhs) != m:
        raise ValueError("rhs length does not match constraint count")

    flip = [False] * m
    for i in range(m):
        if rhs[i] < 0:
            flip[i] = True
            a[i] = [-v for v in a[i]]
            rhs[i] = -rhs[i]

    width = n + m  # structural + artificial columns
    tab = [a[i] + [Fraction(1) if k == i else Fraction(0) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = list(range(n, n + m))

    def pivot(row: int, col: int) -> None:
        pr = tab[row]
        p = pr[col]
        if p != 1:
            tab[row] = pr = [v / p for v in pr]
        for r in range(m):
            if r != row and tab[r][col]:
                f = tab[r][col]
                tr = tab[r]
                tab[r] = [tr[k] - f * pr[k] for k in range(width + 1)]
        basis[row] = col

    def run(costs: list[Fraction], allowed: int) -> tuple[str, list[Fraction]]:
        # Reduced-cost row rebuilt from scratch, then maintained by pivots.
        full = list(costs) + [Fraction(0)] * (width - len(costs))
        red = full + [Fraction(0)]
        for r in range(m):
            cb = full[basis[r]]
            if cb:
                tr = tab[r]
                for k in range(width + 1):
                    red[k] -= cb * tr[k]
        while True:
            enter = -1
            for j in range(allowed):
                if red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal", red
            leave = -1
            best = None
            for r in range(m):
                t = tab[r][enter]
                if t > 0:
                    ratio = tab[r][width] / t
                    if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                        best = ratio
                        leave = r
            if leave < 0:
                return ("unbounded:%d" % enter), red
            pivot(leave, enter)
            f = red[enter]
            if f:
                pr = tab[leave]
                for k in range(width + 1):
                    red[k] -= f * pr[k]

    m0 = m
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    status, red = run(phase1, width)
    obj1 = -red[width]
    if obj1 > 0:
        # y_i = 1 - redcost(artificial i); undo row sign flips.
        y = []
        for i in range(m):
            yi = Fraction(1) - red[n + i]
            y.append(-yi if flip[i] else yi)
        return SimplexResult("infeasible", None, None, None, tuple(y), None)

    # Drive basic artificials out; drop redundant rows.
    drop: list[int] = []
    for r in range(m):
        if basis[r] >= n:
            col = next((j for j in range(n) if tab[r][j]), -1)
            if col < 0:
                drop.append(r)
            else:
                pivot(r, col)
    if drop:
        for r in reversed(drop):
            del tab[r]
            del basis[r]
        m = len(tab)

    status, red = run(cost, n)
    if status.startswith("unbounded"):
        enter = int(status.split(":")[1])
        ray = [Fraction(0)] * n
        ray[enter] = Fraction(1)
        for r in range(m):
            if basis[r] < n:
                ray[basis[r]] = -tab[r][enter]
        return SimplexResult("unbounded", None, None, None, None, tuple(ray))
    x = [Fraction(0)] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tab[r][width]
    obj = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    # Duals from the artificial columns (they carry B^-1 for the original
    # rows); redundant rows dropped above contribute zero.
    y = [Fraction(0)] * m0
    for i in range(m0):
        yi = sum((cost[basis[r]] * tab[r][n + i] for r in range(m)), Fraction(0))
        y[i] = -yi if flip[i] else yi
    return SimplexResult("optimal", obj, tuple(x), tuple(sorted(basis)), tuple(y), None)


class SpanFeasibility(NamedTuple):
    feasible: bool
    point: tuple[Fraction, ...] | None
    certificate: tuple[Fraction, ...] | None


def span_feasible(basis_rows, w) -> SpanFeasibility:
    """Decide whether w + span(basis rows) meets the nonnegative orthant.

    This is nonemptiness of the rational relaxation of the fiber of w.  When
    infeasible, the certificate is a rational a >= 0 with a.basis_row = 0 for
    every row and a.w < 0 (verified before returning).

    Args:
        basis_rows: lattice basis rows spanning the subspace.
        w: the translation vector.

    Returns:
        SpanFeasibility(feasible, point, certificate): `point` is a
        nonnegative rational point of the affine subspace when feasible.
    """
    rows = [tuple(row) for row in basis_rows]
    w = tuple(w)
    n = len(w)
    k = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("basis row length does not match vector length")
    # x - B^T(p - q) = w, x >= 0, p, q >= 0
    a = []
    for i in range(n):
        row = [Fraction(0)] * (n + 2 * k)
        row[i] = Fraction(1)
        for j in range(k):
            row[n + j] = Fraction(-rows[j][i])
            row[n + k + j] = Fraction(rows[j][i])
        a.append(row)
    c = [Fraction(0)] * (n + 2 * k)
    res = solve_lp(a, w, c)
    if res.status == "optimal":
        return SpanFeasibility(True, res.solution[:n], None)
    assert res.status == "infeasible"
    cert = tuple(-y for y in res.dual)
    assert all(v >= 0 for v in cert)
    assert sum(ci * wi for ci, wi in zip(cert, w)) < 0
    for row in rows:
        assert sum(ci * ri for ci, ri in zip(cert, row)) == 0
    return SpanFeasibility(False, None, cert)


def _nonneg_span_lp(rows: list[tuple[int, ...]], n: int, cost: list[Fraction]) -> SimplexResult:
    """min cost.x over the cone span(rows) intersected with x >= 0."""
    k = len(rows)
    a = []
    for i in range(n):
        row = [Fraction(0)] * (n + 2 * k)
        row[i] = Fraction(1)
        for j in range(k):
            row[n + j] = Fraction(-rows[j][i])
            row[n + k + j] = Fraction(rows[j][i])
        a.append(row)
    return solve_lp(a, [Fraction(0)] * n, cost + [Fraction(0)] * (2 * k))


def is_bounded_coordinate(basis_rows, i: int) -> bool:
    """Whether x_i is bounded (identically 0) over span(basis) ∩ R+^n.

    Over the cone the supremum of a coordinate is either 0 or infinite, so
    bounded means no nonnegative vector of the span has x_i > 0.
    """
    rows = [tuple(row) for row in basis_rows]
    n = len(rows[0]) if rows else 0
    if not rows or i >= n:
        return True
    cost = [Fraction(0)] * n
    cost[i] = Fraction(-1)
    k = len(rows)
    # Add x_i <= 1 to keep the LP bounded: extra slack variable and row.
    a = []
    for r in range(n):
        row = [Fraction(0)] * (n + 2 * k + 1)
        row[r] = Fraction(1)
        for j in range(k):
            row[n + j] = Fraction(-rows[j][r])
            row[n + k + j] = Fraction(rows[j][r])
        a.append(row)
    cap = [Fraction(0)] * (n + 2 * k + 1)
    cap[i] = Fraction(1)
    cap[n + 2 * k] = Fraction(1)
    a.append(cap)
    rhs = [Fraction(0)] * n + [Fraction(1)]
    res = solve_lp(a, rhs, cost + [Fraction(0)] * (2 * k + 1))
    assert res.status == "optimal"
    return res.objective == 0


def saturating_vector(basis_rows, i: int) -> tuple[int, ...]:
    """An integer lattice vector u >= 0 with u_i > 0 (coordinate i unbounded).

    Raises ValueError if coordinate i is bounded on the span.
    """
    rows = [tuple(int(v) for v in row) for row in basis_rows]
    n = len(rows[0])
    k = len(rows)
    cost = [Fraction(0)] * n
    cost[i] = Fraction(-1)
    a = []
    for r in range(n):
        row = [Fraction(0)] * (n + 2 * k + 1)
        row[r] = Fraction(1)
        for j in range(k):
            row[n + j] = Fraction(-rows[j][r])
            row[n + k + j] = Fraction(rows[j][r])
        a.append(row)
    cap = [Fraction(0)] * (n + 2 * k + 1)
    cap[i] = Fraction(1)
    cap[n + 2 * k] = Fraction(1)
    a.append(cap)
    rhs = [Fraction(0)] * n + [Fraction(1)]
    res = solve_lp(a, rhs, cost + [Fraction(0)] * (2 * k + 1))
    assert res.status == "optimal"
    if res.objective == 0:
        raise ValueError(f"coordinate {i} is bounded on the span")
    lam = [res.solution[n + j] - res.solution[n + k + j] for j in range(k)]
    scale = 1
    for f in lam:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    coeffs = [int(f * scale) for f in lam]
    u = [0] * n
    for j in range(k):
        if coeffs[j]:
            for r in range(n):
                u[r] += coeffs[j] * rows[j][r]
    g = 0
    for v in u:
        g = gcd(g, v)
    # Keep u in the lattice: divide only if the scaled-down vector still is
    # an integer combination (dividing coefficients keeps that true).
    if g > 1 and all(cf % g == 0 for cf in coeffs):
        u = [v // g for v in u]
    assert all(v >= 0 for v in u) and u[i] > 0
    return tuple(u)


def dual_cone_witness(basis_rows, nu) -> tuple[tuple[Fraction, ...], Fraction] | None:
    """Best truncation witness from the dual cone of the lattice.

    Solves min a.nu over {a >= 0 : a.row = 0 for all basis rows, sum(a) = 1}.
    Returns (a, a.nu), or None when the dual cone is trivial.
    """
    rows = [tuple(row) for row in basis_rows]
    nu = tuple(nu)
    n = len(nu)
    a = [[Fraction(rows[j][r]) for r in range(n)] for j in range(len(rows))]
    a.append([Fraction(1)] * n)
    rhs = [Fraction(0)] * len(rows) + [Fraction(1)]
    res = solve_lp(a, rhs, [Fraction(v) for v in nu])
    if res.status == "infeasible":
        return None
    assert res.status == "optimal"
    return res.solution, res.objective


def cost_compatible(basis_rows, cost) -> bool:
    """Whether min{cost.x : x in span(basis) ∩ N^n} = 0.

    True makes the cost-refined order a term order on the lattice fibers.
    The check runs on the rational relaxation, which is equivalent because
    the cone is generated by integer lattice vectors.
    """
    rows = [tuple(int(v) for v in row) for row in basis_rows]
    if not rows:
        return True
    n = len(rows[0])
    res = _nonneg_span_lp(rows, n, [Fraction(v) for v in cost])
    if res.status == "unbounded":
        return False
    assert res.status == "optimal" and res.objective == 0
    return True


def _primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, v)
    return tuple(v // g for v in vec) if g > 1 else tuple(vec)


def extreme_rays(basis_rows) -> tuple[tuple[int, ...], ...]:
    """Extreme rays of {a >= 0 : a orthogonal to every basis row}.

    The cone lives in the orthogonal complement of the lattice span
    (dimension n - rank), so rays can be enumerated combinatorially: each is
    cut out by dim-1 independent active constraints a_i = 0.  Returned as
    primitive integer vectors, sorted, so truncation checks are integer dot
    products.
    """
    rows = [tuple(int(v) for v in row) for row in basis_rows]
    if not rows:
        return ()
    n = len(rows[0])
    comp = kernel_lattice(rows)  # basis of {a : B a = 0}, d rows
    d = len(comp)
    if d == 0:
        return ()
    # Constraint i in t-space is the column vector col_i = (comp[j][i])_j.
    cols = [tuple(comp[j][i] for j in range(d)) for i in range(n)]

    def rank_of(idx: Sequence[int]) -> int:
        mat = [[Fraction(v) for v in cols[i]] for i in idx]
        r = 0
        for c in range(d):
            piv = next((k for k in range(r, len(mat)) if mat[k][c]), -1)
            if piv < 0:
                continue
            mat[r], mat[piv] = mat[piv], mat[r]
            for k in range(len(mat)):
                if k != r and mat[k][c]:
                    f = mat[k][c] / mat[r][c]
                    mat[k] = [mat[k][j] - f * mat[r][j] for j in range(d)]
            r += 1
        return r

    found: set[tuple[int, ...]] = set()
    for subset in combinations(range(n), d - 1):
        # Null space of the chosen constraints in t-space.
        mat = [[Fraction(v) for v in cols[i]] for i in subset]
        pivots: list[tuple[int, int]] = []
        r = 0
        for c in range(d):
            piv = next((k for k in range(r, len(mat)) if mat[k][c]), -1)
            if piv < 0:
                continue
            mat[r], mat[piv] = mat[piv], mat[r]
            for k in range(len(mat)):
                if k != r and mat[k][c]:
                    f = mat[k][c] / mat[r][c]
                    mat[k] = [mat[k][j] - f * mat[r][j] for j in range(d)]
            pivots.append((r, c))
            r += 1
        if r != d - 1:
            continue
        free = [c for c in range(d) if c not in {c for _, c in pivots}]
        t = [Fraction(0)] * d
        t[free[0]] = Fraction(1)
        for pr, pc in reversed(pivots):
            t[pc] = -sum(mat[pr][j] * t[j] for j in range(d) if j != pc) / mat[pr][pc]
        scale = 1
        for f in t:
            scale = scale * f.denominator // gcd(scale, f.denominator)
        tv = [int(f * scale) for f in t]
        for sign in (1, -1):
            ray = tuple(sum(sign * tv[j] * comp[j][i] for j in range(d)) for i in range(n))
            if any(v < 0 for v in ray) or not any(ray):
                continue
            active = [i for i in range(n) if ray[i] == 0]
            if rank_of(active) == d - 1:
                found.add(_primitive(ray))
    return tuple(sorted(found))
