import random
from fractions import Fraction

from fibersolve.intlinalg import (
    HnfResult,
    IntMatrix,
    combination_solution,
    hnf,
    kernel_lattice,
    lattice_member,
    particular_solution,
    select_pivot_columns,
)


def det(rows):
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    m = [[Fraction(v) for v in row] for row in rows]
    n = len(m)
    sign = 1
    for j in range(n):
        piv = next((i for i in range(j, n) if m[i][j]), None)
        if piv is None:
            return Fraction(0)
        if piv != j:
            m[j], m[piv] = m[piv], m[j]
            sign = -sign
        for i in range(j + 1, n):
            f = m[i][j] / m[j][j]
            for k in range(j, n):
                m[i][k] -= f * m[j][k]
    out = Fraction(sign)
    for j in range(n):
        out *= m[j][j]
    return out


def matmul(a, b):
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in zip(*b))
                 for row in a)


def test_intmatrix_basics():
    m = IntMatrix([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3)
    assert m.transpose().rows == ((1, 4), (2, 5), (3, 6))
    assert m == IntMatrix(((1, 2, 3), (4, 5, 6)))
    assert hash(m) == hash(IntMatrix(m.rows))
    d = {m: "a"}
    assert d[IntMatrix([[1, 2, 3], [4, 5, 6]])] == "a"


def test_intmatrix_ragged_rejected():
    try:
        IntMatrix([[1, 2], [3]])
    except ValueError:
        pass
    else:
        assert False, "ragged rows should be rejected"


def test_hnf_reconstruction():
    """transform @ input == h, with transform unimodular."""
    mats = [
        ((2, 4, 4), (-6, 6, 12), (10, 4, 16)),
        ((1, -1, -1, -3, 1, 2), (1, 0, 2, -2, -1, 1)),
        ((0, 0), (0, 0)),
        ((5,),),
    ]
    for rows in mats:
        res = hnf(rows)
        assert matmul(res.transform, rows) == res.h
        assert abs(det(res.transform)) == 1
        for i in range(res.rank, len(rows)):
            assert not any(res.h[i])


def test_hnf_pivot_shape_standard():
    res = hnf(((2, 4, 4), (-6, 6, 12), (10, 4, 16)))
    assert res.rank == len(res.pivot_cols)
    assert list(res.pivot_cols) == sorted(res.pivot_cols)
    for i, j in enumerate(res.pivot_cols):
        p = res.h[i][j]
        assert p > 0
        # entries above the pivot reduced into [0, p)
        for k in range(i):
            assert 0 <= res.h[k][j] < p
        # entries left of the pivot are zero
        assert not any(res.h[i][:j])


def test_hnf_markov_shape():
    # square nonsingular input: upper triangular, positive diagonal,
    # off-diagonal entries in (-p, 0]
    rows = ((4, 7, 2), (3, 5, 1), (2, 2, 9))
    res = hnf(rows, shape="markov")
    assert res.rank == 3
    for i in range(3):
        assert res.h[i][i] > 0
        for k in range(i):
            assert -res.h[i][i] < res.h[k][i] <= 0
    assert matmul(res.transform, rows) == res.h


def test_kernel_lattice():
    a = ((1, 1, 1, 1), (1, 2, 3, 4))
    ker = kernel_lattice(a)
    assert len(ker) == 2
    for u in ker:
        assert all(sum(x * y for x, y in zip(row, u)) == 0 for row in a)
    # (1, -2, 1, 0) kills both rows, so it must be generated
    assert lattice_member(ker, (1, -2, 1, 0))
    assert lattice_member(ker, (0, 1, -2, 1))
    # kills the first row but not the second
    assert not lattice_member(ker, (1, 1, -2, 0))


def test_kernel_of_zero_and_full_rank():
    assert kernel_lattice(((0, 0, 0),)) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert kernel_lattice(((2, 1), (1, 1))) == ()
    assert kernel_lattice(IntMatrix([], ncols=2)) == ((1, 0), (0, 1))


def test_particular_solution_solves():
    a = ((3, 1, 2), (1, 0, 1))
    x = particular_solution(a, (7, 3))
    assert x is not None
    assert [sum(c * v for c, v in zip(row, x)) for row in a] == [7, 3]


def test_particular_solution_infeasible():
    # rationally inconsistent
    assert particular_solution(((1, 1), (2, 2)), (1, 3)) is None
    # rationally fine, integrally impossible: 2x + 4y = 3
    assert particular_solution(((2, 4),), (3,)) is None
    assert particular_solution(((2, 4),), (6,)) is not None


def test_combination_solution():
    basis = ((1, -1, 0), (0, 2, -1))
    z = combination_solution(basis, (2, 2, -2))
    assert z == (2, 2)
    assert combination_solution(basis, (1, 0, 0)) is None
    assert combination_solution((), (0, 0)) == ()
    assert combination_solution((), (1, 0)) is None


def test_select_pivot_columns():
    # first column is zero, third repeats the second
    rows = ((0, 1, 1, 2), (0, 3, 3, 4))
    assert select_pivot_columns(rows) == (1, 3)
    assert select_pivot_columns(((1, 0), (0, 1))) == (0, 1)
    assert select_pivot_columns(()) == ()


def test_lattice_member_with_cached_hnf():
    basis = ((2, 0, 1), (0, 3, 1))
    res = hnf(basis)
    assert lattice_member(basis, (2, 3, 2), res)
    assert lattice_member(basis, (0, 0, 0), res)
    assert not lattice_member(basis, (1, 0, 0), res)
    assert not lattice_member(basis, (0, 0, 1), res)


def test_random_consistency():
    """Random small matrices: hnf reconstructs, kernels annihilate,
    row combinations are members."""
    rng = random.Random(977)
    for _ in range(60):
        m = rng.randint(1, 4)
        n = rng.randint(1, 5)
        rows = tuple(tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(m))
        res = hnf(rows)
        assert matmul(res.transform, rows) == res.h
        assert abs(det(res.transform)) == 1
        ker = kernel_lattice(rows)
        assert len(ker) == n - res.rank
        for u in ker:
            assert all(sum(x * y for x, y in zip(row, u)) == 0 for row in rows)
        coeffs = [rng.randint(-3, 3) for _ in rows]
        combo = tuple(sum(c * row[j] for c, row in zip(coeffs, rows))
                      for j in range(n))
        assert lattice_member(rows, combo, res)
        z = combination_solution(rows, combo)
        assert z is not None
        assert tuple(sum(c * row[j] for c, row in zip(z, rows))
                     for j in range(n)) == combo
