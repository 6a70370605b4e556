"""Exact integer linear algebra: Hermite forms, kernel lattices, solving.

Everything here works over arbitrary-precision Python ints.  Row operations
are unimodular throughout, so computed bases generate exactly the intended
lattices (no floating point, no modular shortcuts).
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

Row = tuple[int, ...]
Rows = tuple[Row, ...]


class IntMatrix:
    """Immutable rectangular matrix of Python ints."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int | None = None):
        frozen = tuple(tuple(int(v) for v in row) for row in rows)
        if frozen:
            width = len(frozen[0])
            if any(len(row) != width for row in frozen):
                raise ValueError("ragged rows in integer matrix")
        else:
            width = 0 if ncols is None else int(ncols)
        object.__setattr__(self, "rows", frozen)
        object.__setattr__(self, "nrows", len(frozen))
        object.__setattr__(self, "ncols", width)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return self.nrows

    def __getitem__(self, i: int) -> Row:
        return self.rows[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, IntMatrix):
            return self.rows == other.rows and self.ncols == other.ncols
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rows, self.ncols))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)) if self.rows else (), ncols=self.nrows)

    def __repr__(self) -> str:
        return f"IntMatrix({list(map(list, self.rows))!r})"


def _as_rows(matrix) -> Rows:
    if isinstance(matrix, IntMatrix):
        return matrix.rows
    return tuple(tuple(int(v) for v in row) for row in matrix)


def _ncols(matrix, rows: Rows) -> int:
    if isinstance(matrix, IntMatrix):
        return matrix.ncols
    return len(rows[0]) if rows else 0


class HnfResult(NamedTuple):
    h: Rows
    transform: Rows
    pivot_cols: tuple[int, ...]
    rank: int


def hnf(matrix, shape: str = "standard") -> HnfResult:
    """Row Hermite normal form with unimodular transform.

    Args:
        matrix: input rows (any integer matrix, not necessarily full rank).
        shape: "standard" normalises entries above each pivot into
            [0, pivot); "markov" normalises them into (-pivot, 0], which for
            a square nonsingular input gives an upper triangular matrix with
            positive diagonal and non-positive off-diagonal entries.

    Returns:
        HnfResult(h, transform, pivot_cols, rank) with transform * matrix = h,
        transform unimodular, the first `rank` rows of h nonzero with strictly
        increasing pivot columns, and remaining rows zero.
    """
    if shape not in ("standard", "markov"):
        raise ValueError(f"unknown hnf shape {shape!r}")
    rows = _as_rows(matrix)
    m = len(rows)
    n = _ncols(matrix, rows)
    work = [list(row) for row in rows]
    trans = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivot_cols: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        # Euclidean elimination below `row` in this column; smallest nonzero
        # magnitude (then lowest index) acts as the running pivot.
        while True:
            best = -1
            best_abs = 0
            for i in range(row, m):
                v = work[i][col]
                if v and (best < 0 or abs(v) < best_abs):
                    best = i
                    best_abs = abs(v)
            if best < 0:
                break
            if best != row:
                work[row], work[best] = work[best], work[row]
                trans[row], trans[best] = trans[best], trans[row]
            p = work[row][col]
            clean = True
            for i in range(row + 1, m):
                v = work[i][col]
                if v:
                    q = v // p
                    if q:
                        wi, wr = work[i], work[row]
                        for j in range(col, n):
                            wi[j] -= q * wr[j]
                        ti, tr = trans[i], trans[row]
                        for j in range(m):
                            ti[j] -= q * tr[j]
                    if work[i][col]:
                        clean = False
            if clean:
                break
        if work[row][col] == 0:
            continue
        if work[row][col] < 0:
            work[row] = [-v for v in work[row]]
            trans[row] = [-v for v in trans[row]]
        p = work[row][col]
        for i in range(row):
            v = work[i][col]
            q = v // p if shape == "standard" else -((-v) // p)
            if q:
                wi, wr = work[i], work[row]
                for j in range(col, n):
                    wi[j] -= q * wr[j]
                ti, tr = trans[i], trans[row]
                for j in range(m):
                    ti[j] -= q * tr[j]
        pivot_cols.append(col)
        row += 1
    h = tuple(tuple(r) for r in work)
    transform = tuple(tuple(r) for r in trans)
    return HnfResult(h, transform, tuple(pivot_cols), len(pivot_cols))


def kernel_lattice(matrix) -> Rows:
    """Basis of the integer kernel {u : matrix @ u = 0}, in standard HNF."""
    rows = _as_rows(matrix)
    n = _ncols(matrix, rows)
    if n == 0:
        return ()
    if not rows:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    transposed = tuple(zip(*rows))
    res = hnf(transposed)
    kernel = res.transform[res.rank:]
    if not kernel:
        return ()
    return hnf(kernel).h[: n - res.rank]


def particular_solution(matrix, rhs: Sequence[int]) -> Row | None:
    """One integer solution x of matrix @ x = rhs, or None if there is none.

    None covers both rational inconsistency and integer infeasibility
    (a rational solution exists but no integer one).
    """
    rows = _as_rows(matrix)
    b = tuple(int(v) for v in rhs)
    if len(b) != len(rows):
        raise ValueError("rhs length does not match row count")
    n = _ncols(matrix, rows)
    if not rows:
        return (0,) * n
    transposed = tuple(zip(*rows))  # n rows, m cols
    h, transform, pivot_cols, rank = hnf(transposed)
    residual = list(b)
    coeffs = [0] * len(h)
    for i in range(rank):
        j = pivot_cols[i]
        p = h[i][j]
        c = residual[j]
        if c % p:
            return None
        q = c // p
        coeffs[i] = q
        if q:
            hi = h[i]
            for k in range(j, len(residual)):
                residual[k] -= q * hi[k]
    if any(residual):
        return None
    x = [0] * n
    for i in range(rank):
        q = coeffs[i]
        if q:
            ti = transform[i]
            for k in range(n):
                x[k] += q * ti[k]
    return tuple(x)


def combination_solution(basis, target: Sequence[int]) -> Row | None:
    """Integer coefficients z with z @ basis = target, or None."""
    rows = _as_rows(basis)
    if not rows:
        return () if not any(target) else None
    return particular_solution(tuple(zip(*rows)), target)


def select_pivot_columns(matrix) -> tuple[int, ...]:
    """Greedy leftmost set of rank-many linearly independent columns."""
    rows = _as_rows(matrix)
    if not rows:
        return ()
    n = _ncols(matrix, rows)
    m = len(rows)
    picked: list[int] = []
    echelon: list[list[Fraction]] = []  # reduced column vectors, by leading row
    leads: list[int] = []
    for col in range(n):
        vec = [Fraction(rows[i][col]) for i in range(m)]
        for lead, basis_vec in zip(leads, echelon):
            if vec[lead]:
                f = vec[lead] / basis_vec[lead]
                for i in range(m):
                    vec[i] -= f * basis_vec[i]
        lead = next((i for i, v in enumerate(vec) if v), -1)
        if lead >= 0:
            picked.append(col)
            echelon.append(vec)
            leads.append(lead)
            if len(picked) == m:
                break
    return tuple(picked)


def lattice_member(basis, vector: Sequence[int], hnf_result: HnfResult | None = None) -> bool:
    """Whether vector lies in the lattice generated by the basis rows."""
    v = tuple(int(x) for x in vector)
    res = hnf_result if hnf_result is not None else hnf(basis)
    residual = list(v)
    for i in range(res.rank):
        j = res.pivot_cols[i]
        c = residual[j]
        if c == 0:
            continue
        p = res.h[i][j]
        if c % p:
            return False
        q = c // p
        hi = res.h[i]
        for k in range(j, len(residual)):
            residual[k] -= q * hi[k]
    return not any(residual)
