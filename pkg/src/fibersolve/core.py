"""Lattices, fiber problems, term orders, and directed lattice vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .intlinalg import HnfResult, Rows, hnf, lattice_member
from . import ratlp


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


class LatticeVector:
    """Integer vector with cached positive/negative parts and support masks."""

    __slots__ = ("v", "plus", "minus", "mask_plus", "mask_minus", "norm_plus")

    def __init__(self, v: Sequence[int]):
        vec = tuple(int(x) for x in v)
        plus = tuple(x if x > 0 else 0 for x in vec)
        minus = tuple(-x if x < 0 else 0 for x in vec)
        mp = 0
        mm = 0
        for i, x in enumerate(vec):
            if x > 0:
                mp |= 1 << i
            elif x < 0:
                mm |= 1 << i
        self.v = vec
        self.plus = plus
        self.minus = minus
        self.mask_plus = mp
        self.mask_minus = mm
        self.norm_plus = sum(plus)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-x for x in self.v))

    def __eq__(self, other) -> bool:
        if isinstance(other, LatticeVector):
            return self.v == other.v
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.v)

    def __len__(self) -> int:
        return len(self.v)

    def __iter__(self):
        return iter(self.v)

    def __repr__(self) -> str:
        return f"LatticeVector({list(self.v)!r})"


class Lattice:
    """Integer lattice spanned by basis rows (order-preserving, immutable)."""

    __slots__ = ("basis", "n", "_hnf", "_rays")

    def __init__(self, basis: Iterable[Sequence[int]], n: int | None = None):
        rows = tuple(tuple(int(v) for v in row) for row in basis)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged lattice basis")
        else:
            if n is None:
                raise ValueError("empty basis needs an explicit dimension")
            width = n
        self.basis = rows
        self.n = width
        self._hnf: HnfResult | None = None
        self._rays: tuple[tuple[int, ...], ...] | None = None

    @property
    def hnf(self) -> HnfResult:
        if self._hnf is None:
            self._hnf = hnf(self.basis)
        return self._hnf

    @property
    def rank(self) -> int:
        return self.hnf.rank

    def member(self, v: Sequence[int]) -> bool:
        return lattice_member(self.basis, v, self.hnf)

    def dual_rays(self) -> tuple[tuple[int, ...], ...]:
        """Extreme rays of {a >= 0 : a orthogonal to the lattice}, cached."""
        if self._rays is None:
            self._rays = ratlp.extreme_rays(self.basis) if self.basis else ()
        return self._rays

    def fiber_label(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of x modulo the lattice."""
        res = self.hnf
        residual = list(int(v) for v in x)
        for i in range(res.rank):
            j = res.pivot_cols[i]
            p = res.h[i][j]
            q = residual[j] // p
            if q:
                hi = res.h[i]
                for k in range(j, len(residual)):
                    residual[k] -= q * hi[k]
        return tuple(residual)

    def project(self, drop: Iterable[int]) -> "Lattice":
        """Lattice of basis rows with the given coordinates deleted."""
        proj = Projection(self.n, drop)
        return Lattice(tuple(proj(row) for row in self.basis), n=len(proj.keep))

    def __eq__(self, other) -> bool:
        if isinstance(other, Lattice):
            return self.basis == other.basis and self.n == other.n
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.basis, self.n))

    def __repr__(self) -> str:
        return f"Lattice({list(map(list, self.basis))!r})"


class Projection:
    """Deletes a fixed set of coordinates; the complement keeps its order."""

    __slots__ = ("n", "drop", "keep")

    def __init__(self, n: int, drop: Iterable[int]):
        dropped = tuple(sorted(set(int(i) for i in drop)))
        if dropped and (dropped[0] < 0 or dropped[-1] >= n):
            raise ValueError("projection index out of range")
        self.n = n
        self.drop = dropped
        self.keep = tuple(i for i in range(n) if i not in set(dropped))

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(vec[i] for i in self.keep)

    def insert(self, vec: Sequence[int], dropped_values: Sequence[int]) -> tuple[int, ...]:
        """Rebuild a full vector from projected values plus values for drop."""
        out = [0] * self.n
        for pos, i in enumerate(self.keep):
            out[i] = vec[pos]
        for pos, i in enumerate(self.drop):
            out[i] = dropped_values[pos]
        return tuple(out)


def _scale_to_int(weights: Sequence) -> tuple[int, ...]:
    fracs = [Fraction(w) for w in weights]
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    return tuple(int(f * scale) for f in fracs)


class TermOrder:
    """Term order on N^n: lex or degrevlex, optionally refined by a weight row.

    With a weight (cost) row the order compares weight.x first and breaks
    ties with the base order; rational weights are scaled to integers.  Such
    an order is a genuine term order on the fibers of a lattice L exactly
    when min{weight.x : x in L ∩ N^n} = 0 (checkable by LP).
    """

    __slots__ = ("kind", "weight")

    def __init__(self, kind: str = "degrevlex", weight: Sequence | None = None):
        if kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self.weight = _scale_to_int(weight) if weight is not None else None

    def key(self, x: Sequence[int]):
        """Sort key: key(x) < key(y) iff x is smaller in the order."""
        if self.kind == "lex":
            base = tuple(x)
        else:
            base = (sum(x), tuple(-v for v in reversed(tuple(x))))
        if self.weight is None:
            return base
        return (dot(self.weight, x), base)

    def compare(self, x: Sequence[int], y: Sequence[int]) -> int:
        """1 if x is larger, -1 if smaller, 0 if equal."""
        kx, ky = self.key(x), self.key(y)
        return (kx > ky) - (kx < ky)

    def refine(self, weight: Sequence) -> "TermOrder":
        """Same tie-break, new leading weight row."""
        return TermOrder(self.kind, weight)

    def __repr__(self) -> str:
        if self.weight is None:
            return f"TermOrder({self.kind!r})"
        return f"TermOrder({self.kind!r}, weight={list(self.weight)!r})"


def direct(u: Sequence[int], order: TermOrder) -> LatticeVector:
    """Orient u so that its positive part is the larger side of the order."""
    lv = u if isinstance(u, LatticeVector) else LatticeVector(u)
    if not any(lv.v):
        raise ValueError("cannot direct the zero vector")
    if order.compare(lv.plus, lv.minus) < 0:
        return -lv
    return lv


def lifting_weight(basis: Rows, i: int) -> tuple[Fraction, ...]:
    """Weight row recovering coordinate i of lattice vectors after deleting it.

    Solves w . pi_i(u) = u_i for all basis rows u of the larger lattice;
    the projection deleting i must be injective on that lattice.  Free
    variables are set to zero; the result is verified on the basis.
    """
    rows = [tuple(int(v) for v in row) for row in basis]
    if not rows:
        return ()
    n = len(rows[0])
    cols = [j for j in range(n) if j != i]
    # Equations: sum_j w_j * row[cols[j]] = row[i], one per basis row.
    mat = [[Fraction(row[j]) for j in cols] + [Fraction(row[i])] for row in rows]
    d = len(cols)
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
                mat[k] = [mat[k][j] - f * mat[r][j] for j in range(d + 1)]
        pivots.append((r, c))
        r += 1
    if any(mat[k][d] for k in range(r, len(mat))):
        raise ValueError("no lifting weight: projection is not injective on the lattice")
    w = [Fraction(0)] * d
    for pr, pc in reversed(pivots):
        w[pc] = (mat[pr][d] - sum(mat[pr][j] * w[j] for j in range(pc + 1, d))) / mat[pr][pc]
    for row in rows:
        assert sum(w[j] * row[c] for j, c in enumerate(cols)) == row[i]
    return tuple(w)


@dataclass(frozen=True)
class FiberProblem:
    """An integer program over a lattice fiber: min cost.x, x in F_L(nu).

    `cost` is an integer row (scaled); reported objective values are
    cost.x / cost_scale + cost_constant in the original units.
    """

    lattice: Lattice
    nu: tuple[int, ...]
    cost: tuple[int, ...] | None = None
    cost_scale: int = 1
    cost_constant: Fraction = field(default_factory=lambda: Fraction(0))

    def objective(self, x: Sequence[int]) -> Fraction:
        if self.cost is None:
            raise ValueError("problem has no cost row")
        return Fraction(dot(self.cost, x), self.cost_scale) + self.cost_constant
