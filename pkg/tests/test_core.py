import random
from fractions import Fraction

import pytest

from fibersolve.core import (
    FiberProblem,
    Lattice,
    LatticeVector,
    Projection,
    TermOrder,
    direct,
    dot,
    lifting_weight,
)

S1 = (1, -1, -1, -3, 1, 2)
S2 = (1, 0, 2, -2, -1, 1)


def test_lattice_vector_parts():
    z = LatticeVector((2, -1, 0, 3, -4, 0))
    assert z.plus == (2, 0, 0, 3, 0, 0)
    assert z.minus == (0, 1, 0, 0, 4, 0)
    assert tuple(p - m for p, m in zip(z.plus, z.minus)) == z.v
    assert z.mask_plus & z.mask_minus == 0
    assert z.mask_plus == 0b001001
    assert z.mask_minus == 0b010010
    assert z.norm_plus == 5
    assert (-z).v == (-2, 1, 0, -3, 4, 0)
    assert LatticeVector(z.v) == z
    assert len({z, LatticeVector(z.v), -z}) == 2


def test_lattice_basics():
    lat = Lattice((S1, S2))
    assert lat.n == 6
    assert lat.rank == 2
    assert lat.member(S1)
    assert lat.member(tuple(a - 2 * b for a, b in zip(S1, S2)))
    assert not lat.member((1, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        Lattice(())
    empty = Lattice((), n=3)
    assert empty.rank == 0 and empty.member((0, 0, 0)) and not empty.member((1, 0, 0))


def test_lattice_value_identity():
    """Equal basis rows mean equal (and interchangeable) lattices."""
    a = Lattice((S1, S2))
    b = Lattice([list(S1), list(S2)])
    assert a == b and hash(a) == hash(b)
    assert a != Lattice((S2, S1))  # order of rows is part of the value


def test_fiber_label():
    lat = Lattice((S1, S2))
    nu = (2, 2, 4, 2, 5, 1)
    for coeffs in ((1, 0), (0, 1), (2, -3), (-1, 4)):
        shifted = tuple(v + coeffs[0] * a + coeffs[1] * b
                        for v, a, b in zip(nu, S1, S2))
        assert lat.fiber_label(shifted) == lat.fiber_label(nu)
    other = (2, 2, 4, 2, 5, 2)
    assert lat.fiber_label(other) != lat.fiber_label(nu)
    # labels agree exactly when the difference is a lattice member
    assert lat.member(tuple(a - b for a, b in zip(
        (2, 2, 4, 2, 5, 1), lat.fiber_label(nu))))


def test_projection_roundtrip():
    p = Projection(6, (1, 3))
    assert p.keep == (0, 2, 4, 5)
    v = (9, 8, 7, 6, 5, 4)
    assert p(v) == (9, 7, 5, 4)
    assert p.insert(p(v), (v[1], v[3])) == v
    with pytest.raises(ValueError):
        Projection(4, (4,))


def test_lattice_project():
    lat = Lattice((S1, S2))
    sub = lat.project((0,))
    assert sub.n == 5
    assert sub.basis == ((-1, -1, -3, 1, 2), (0, 2, -2, -1, 1))


def test_term_order_total_on_distinct_points():
    """Any two distinct nonnegative vectors compare strictly."""
    rng = random.Random(7)
    orders = [TermOrder("lex"), TermOrder("degrevlex"),
              TermOrder("degrevlex", weight=(2, 1, 0, 0)),
              TermOrder("lex", weight=(1, 1, 1, 1))]
    pts = [tuple(rng.randint(0, 4) for _ in range(4)) for _ in range(40)]
    for o in orders:
        for x in pts:
            for y in pts:
                c = o.compare(x, y)
                assert c == -o.compare(y, x)
                assert (c == 0) == (x == y)


def test_term_order_translation_invariance():
    """compare(x, y) is unchanged by adding the same nonnegative shift."""
    rng = random.Random(8)
    o = TermOrder("degrevlex", weight=(3, 1, 4, 1, 5))
    for _ in range(100):
        x = tuple(rng.randint(0, 5) for _ in range(5))
        y = tuple(rng.randint(0, 5) for _ in range(5))
        t = tuple(rng.randint(0, 5) for _ in range(5))
        xs = tuple(a + b for a, b in zip(x, t))
        ys = tuple(a + b for a, b in zip(y, t))
        assert o.compare(x, y) == o.compare(xs, ys)


def test_term_order_examples():
    lex = TermOrder("lex")
    assert lex.compare((1, 0, 0), (0, 9, 9)) > 0
    drl = TermOrder("degrevlex")
    # same degree: smaller last entry wins (revlex on reversed signs)
    assert drl.compare((1, 0, 1), (0, 2, 0)) < 0
    assert drl.compare((2, 0, 0), (1, 1, 0)) > 0
    wo = TermOrder("degrevlex", weight=(2, 1, 0, 0, 0, 0))
    # weight decides first, ties fall through to degrevlex
    assert wo.compare((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)) > 0
    assert wo.compare((0, 2, 0, 0, 0, 0), (0, 0, 5, 0, 0, 0)) > 0
    assert wo.compare((0, 2, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0)) < 0  # weight tie


def test_term_order_fractional_weight_scaling():
    a = TermOrder("degrevlex", weight=(Fraction(1, 2), Fraction(1, 3)))
    assert a.weight == (3, 2)
    b = TermOrder("lex").refine((1, 2))
    assert b.kind == "lex" and b.weight == (1, 2)
    with pytest.raises(ValueError):
        TermOrder("grevlex")


def test_direct():
    o = TermOrder("degrevlex", weight=(2, 1, 0, 0, 0, 0))
    z = direct(S1, o)
    # the directed vector's positive side dominates its negative side
    assert o.compare(z.plus, z.minus) > 0
    assert direct(tuple(-v for v in z.v), o).v == z.v
    with pytest.raises(ValueError):
        direct((0, 0, 0, 0, 0, 0), o)


def test_lifting_weight():
    for i in range(6):
        tau = [row[:i] + row[i + 1:] for row in (S1, S2)]
        w = lifting_weight((S1, S2), i)
        for row, full in zip(tau, (S1, S2)):
            assert sum(wi * x for wi, x in zip(w, row)) == full[i]
    # non-injective projection: deleting the only nonzero coordinate
    with pytest.raises(ValueError):
        lifting_weight(((0, 1),), 1)


def test_fiber_problem_objective():
    fp = FiberProblem(Lattice((S1, S2)), (2, 2, 4, 2, 5, 1),
                      cost=(2, 1, 0, 0, 0, 0), cost_scale=2,
                      cost_constant=Fraction(1, 2))
    assert fp.objective((1, 2, 2, 4, 6, 0)) == Fraction(4, 2) + Fraction(1, 2)
    bare = FiberProblem(Lattice((S1, S2)), (2, 2, 4, 2, 5, 1))
    with pytest.raises(ValueError):
        bare.objective((0,) * 6)


def test_dual_rays_cached_and_orthogonal():
    lat = Lattice((S1, S2))
    rays = lat.dual_rays()
    assert rays is lat.dual_rays()  # cached object
    for r in rays:
        assert dot(r, S1) == 0 and dot(r, S2) == 0
        assert min(r) >= 0
