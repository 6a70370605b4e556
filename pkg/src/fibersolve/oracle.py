"""Brute-force ground truth for tests: fiber enumeration and checks.

Everything here is deliberately naive and independent of the solver
machinery — enumeration walks an explicit box, connectivity is a
union-find over explicit edges — so results can be trusted as oracles.
"""

from __future__ import annotations

import itertools
from math import ceil, floor

from .core import Lattice, TermOrder
from .ratlp import solve_lp

DEFAULT_CAP = 10 ** 5
_BOX_CAP = 4 * 10 ** 6


class TooLarge(ValueError):
    """Fiber refused: unbounded coordinate, or box/point cap exceeded."""


def _coordinate_max(lattice: Lattice, nu, i: int):
    """LP max of x_i over the real relaxation of the fiber.

    Returns a Fraction, None when the relaxation is empty, and raises
    TooLarge when the coordinate is unbounded.
    """
    basis = lattice.basis
    n = lattice.n
    k = len(basis)
    # x = nu + (p - q) B >= 0 with slack s: rows over variables (p, q, s)
    a_rows = []
    for j in range(n):
        row = [basis[r][j] for r in range(k)] + [-basis[r][j] for r in range(k)]
        row += [0] * n
        row[2 * k + j] = -1
        a_rows.append(row)
    b = [-int(v) for v in nu]
    cost = [-basis[r][i] for r in range(k)] + [basis[r][i] for r in range(k)] + [0] * n
    res = solve_lp(a_rows, b, cost)
    if res.status == "infeasible":
        return None
    if res.status == "unbounded":
        raise TooLarge(f"coordinate {i} is unbounded on the fiber")
    return int(nu[i]) - res.objective


def enumerate_fiber(lattice, nu, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """All points of the fiber of nu, sorted; raises TooLarge when refused.

    Scans the box given by exact per-coordinate LP maxima and keeps the
    points congruent to nu modulo the lattice.
    """
    lattice = lattice if isinstance(lattice, Lattice) else Lattice(lattice)
    nu = tuple(int(v) for v in nu)
    if len(nu) != lattice.n:
        raise ValueError("fiber right-hand side has wrong dimension")
    bounds = []
    for i in range(lattice.n):
        top = _coordinate_max(lattice, nu, i)
        if top is None:
            return []
        bounds.append(floor(top))
    if any(b < 0 for b in bounds):
        return []
    volume = 1
    for b in bounds:
        volume *= b + 1
        if volume > _BOX_CAP:
            raise TooLarge(f"search box exceeds {_BOX_CAP} cells")
    pts = []
    target = lattice.fiber_label(nu)
    for x in itertools.product(*(range(b + 1) for b in bounds)):
        if lattice.fiber_label(x) == target:
            pts.append(x)
            if len(pts) > cap:
                raise TooLarge(f"fiber exceeds {cap} points")
    return pts


def enumerate_fiber_alt(lattice, nu, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Second, independent enumeration: walk integer combinations of the basis.

    Depth-first over basis coefficients with interval pruning from the
    triangular structure is deliberately avoided; instead each coefficient
    gets an exact LP range and the whole grid is scanned.
    """
    lattice = lattice if isinstance(lattice, Lattice) else Lattice(lattice)
    nu = tuple(int(v) for v in nu)
    res = lattice.hnf
    rows = [res.h[i] for i in range(res.rank)]
    if not rows:
        return [nu] if all(v >= 0 for v in nu) else []
    k = len(rows)
    n = lattice.n
    ranges = []
    for r in range(k):
        lo = hi = None
        for sign in (1, -1):
            # optimize sign * t_r over {t : nu + t H >= 0}
            a_rows = []
            for j in range(n):
                row = [rows[i][j] for i in range(k)] + [-rows[i][j] for i in range(k)]
                row += [0] * n
                row[2 * k + j] = -1
                a_rows.append(row)
            cost = [0] * (2 * k + n)
            cost[r] = -sign
            cost[k + r] = sign
            out = solve_lp(a_rows, [-v for v in nu], cost)
            if out.status == "infeasible":
                return []
            if out.status == "unbounded":
                raise TooLarge(f"coefficient {r} is unbounded")
            val = -out.objective if sign == 1 else out.objective
            if sign == 1:
                hi = floor(val)
            else:
                lo = ceil(val)
        ranges.append(range(lo, hi + 1))
    volume = 1
    for rg in ranges:
        volume *= max(len(rg), 0)
        if volume > _BOX_CAP:
            raise TooLarge(f"coefficient grid exceeds {_BOX_CAP} cells")
    pts = []
    for combo in itertools.product(*ranges):
        x = list(nu)
        for t, row in zip(combo, rows):
            if t:
                for j in range(n):
                    x[j] += t * row[j]
        if all(v >= 0 for v in x):
            pts.append(tuple(x))
            if len(pts) > cap:
                raise TooLarge(f"fiber exceeds {cap} points")
    return sorted(pts)


def is_markov_basis(moves, lattice, nu, cap: int = DEFAULT_CAP) -> bool:
    """Connectivity of the fiber graph of nu under the given move set."""
    lattice = lattice if isinstance(lattice, Lattice) else Lattice(lattice)
    pts = enumerate_fiber(lattice, nu, cap)
    if len(pts) <= 1:
        return True
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    vecs = {tuple(int(v) for v in m) for m in moves}
    vecs |= {tuple(-v for v in m) for m in vecs.copy()}
    for p in pts:
        i = index[p]
        for m in vecs:
            q = tuple(a + b for a, b in zip(p, m))
            j = index.get(q)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    root = find(0)
    return all(find(i) == root for i in range(len(pts)))


def brute_min(lattice, nu, order: TermOrder, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Smallest fiber point in the term order, by exhaustive scan."""
    pts = enumerate_fiber(lattice, nu, cap)
    if not pts:
        raise ValueError("empty fiber has no minimum")
    return min(pts, key=order.key)


def in_B(lattice, nu, nuprime, cap: int = DEFAULT_CAP) -> bool:
    """Whether the fiber of nuprime is relevant when targeting nu.

    True iff both the fiber of nuprime and the fiber of nu - nuprime are
    nonempty (the two halves of a decomposition of a point of nu's fiber).
    """
    lattice = lattice if isinstance(lattice, Lattice) else Lattice(lattice)
    half = enumerate_fiber(lattice, nuprime, cap)
    if not half:
        return False
    rest = tuple(a - b for a, b in zip(nu, nuprime))
    return bool(enumerate_fiber(lattice, rest, cap))


def scope_fibers(lattice, nu, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Representatives of every fiber relevant to nu, one per fiber, sorted.

    A fiber is relevant exactly when some point of nu's fiber dominates one
    of its points, so the representatives are the componentwise-smaller
    vectors under the enumerated fiber points, deduplicated modulo the
    lattice.
    """
    lattice = lattice if isinstance(lattice, Lattice) else Lattice(lattice)
    pts = enumerate_fiber(lattice, nu, cap)
    seen = {}
    count = 0
    for x in pts:
        for z in itertools.product(*(range(v + 1) for v in x)):
            count += 1
            if count > _BOX_CAP:
                raise TooLarge("scope walk exceeds the box cap")
            label = lattice.fiber_label(z)
            prev = seen.get(label)
            if prev is None or z < prev:
                seen[label] = z
    return sorted(seen.values())
