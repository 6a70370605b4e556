"""Exact rational LP layer: simplex, span feasibility, cone helpers."""

from fractions import Fraction

from fibersolve.ratlp import (
    cost_compatible,
    dual_cone_witness,
    extreme_rays,
    is_bounded_coordinate,
    saturating_vector,
    solve_lp,
    span_feasible,
)

S1 = (1, -1, -1, -3, 1, 2)
S2 = (1, 0, 2, -2, -1, 1)


def dot(a, b):
    return sum(Fraction(x) * Fraction(y) for x, y in zip(a, b))


def test_solve_lp_optimal():
    # min x0 + x1  s.t.  x0 + 2 x1 = 4, x0 - x1 = 1, x >= 0
    res = solve_lp([(1, 2), (1, -1)], (4, 1), (1, 1))
    assert res.status == "optimal"
    assert res.solution == (2, 1)
    assert res.objective == 3
    # duals price the constraints exactly: y A = c on the basis
    y = res.dual
    assert y[0] * 1 + y[1] * 1 == 1 and y[0] * 2 - y[1] == 1


def test_solve_lp_fractional_answer():
    res = solve_lp([(2, 1), (1, 3)], (1, 1), (0, -1))
    assert res.status == "optimal"
    assert res.solution == (Fraction(2, 5), Fraction(1, 5))
    assert res.objective == Fraction(-1, 5)


def test_solve_lp_infeasible_farkas():
    res = solve_lp([(1, 1), (1, 1)], (1, 3), (0, 0))
    assert res.status == "infeasible"
    y = res.dual
    assert y is not None
    a_rows = ((1, 1), (1, 1))
    for j in range(2):
        assert sum(y[i] * a_rows[i][j] for i in range(2)) <= 0
    assert y[0] * 1 + y[1] * 3 > 0


def test_solve_lp_unbounded_ray():
    # min -x0 with x0 - x1 = 0: push both coordinates forever
    res = solve_lp([(1, -1)], (0,), (-1, 0))
    assert res.status == "unbounded"
    r = res.ray
    assert r is not None
    assert all(v >= 0 for v in r)
    assert r[0] - r[1] == 0
    assert -r[0] < 0


def test_solve_lp_degenerate_terminates():
    # a classic cycling-prone instance; Bland's rule must terminate
    a = [(Fraction(1, 4), -8, -1, 9, 1, 0, 0),
         (Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0),
         (0, 0, 1, 0, 0, 0, 1)]
    c = (Fraction(-3, 4), 150, Fraction(-1, 50), 6, 0, 0, 0)
    res = solve_lp(a, (0, 0, 1), c)
    assert res.status == "optimal"
    # strong duality certifies optimality: y b = objective, c - y A >= 0
    y = res.dual
    assert y[2] == res.objective
    for j in range(7):
        assert c[j] - sum(y[i] * a[i][j] for i in range(3)) >= 0


def test_span_feasible_point():
    out = span_feasible((S1, S2), (2, 2, 4, 2, 5, 1))
    assert out.feasible
    p = out.point
    assert all(v >= 0 for v in p)
    # p - w must lie in the span: check against both kernel constraints of
    # the span, cheapest here via rank of the stacked system
    w = (2, 2, 4, 2, 5, 1)
    d = tuple(x - y for x, y in zip(p, w))
    from fibersolve.intlinalg import hnf
    assert hnf((S1, S2)).rank == hnf((S1, S2, d)).rank


def test_span_feasible_certificate():
    out = span_feasible(((1, -1),), (-3, -1))
    # w + t(1,-1) >= 0 needs t >= 3 and t <= -1 at once
    assert not out.feasible
    a = out.certificate
    assert a is not None
    assert all(v >= 0 for v in a)
    assert a[0] - a[1] == 0
    assert dot(a, (-3, -1)) < 0


def test_is_bounded_coordinate():
    # span((1,-1)): nonnegative vectors are multiples of 0 -> both bounded
    assert is_bounded_coordinate(((1, -1),), 0)
    assert is_bounded_coordinate(((1, -1),), 1)
    # span((1,1)): (t,t) >= 0 unbounded in both coordinates
    assert not is_bounded_coordinate(((1, 1),), 0)
    assert not is_bounded_coordinate(((1, 1),), 1)
    # 6-dim worked lattice: every coordinate bounded (finite fibers)
    for i in range(6):
        assert is_bounded_coordinate((S1, S2), i)


def test_saturating_vector():
    u = saturating_vector(((1, 1, 0), (0, 1, 1)), 0)
    assert all(v >= 0 for v in u)
    assert u[0] > 0
    # membership in the span: u = a(1,1,0) + b(0,1,1) forces u1 = u0 + u2
    assert u[1] == u[0] + u[2]
    try:
        saturating_vector(((1, -1),), 0)
    except ValueError:
        pass
    else:
        assert False, "bounded coordinate has no saturating vector"


def test_dual_cone_witness():
    out = dual_cone_witness((S1, S2), (2, 2, 4, 2, 5, 1))
    assert out is not None
    a, val = out
    assert sum(a) == 1
    assert all(v >= 0 for v in a)
    assert dot(a, S1) == 0 and dot(a, S2) == 0
    assert val == dot(a, (2, 2, 4, 2, 5, 1))
    # full-dimensional lattice leaves only the trivial dual cone
    assert dual_cone_witness(((1, 0), (0, 1)), (3, 3)) is None


def test_extreme_rays():
    rays = extreme_rays((S1, S2))
    assert rays == tuple(sorted(rays))
    assert len(rays) >= 4
    for r in rays:
        assert all(v >= 0 for v in r)
        assert any(v > 0 for v in r)
        assert dot(r, S1) == 0 and dot(r, S2) == 0
        from math import gcd
        g = 0
        for v in r:
            g = gcd(g, v)
        assert g == 1
    # the membership witness used throughout the worked example
    assert (0, 1, 1, 0, 2, 0) in rays or (0, 1, 0, 1, 0, 2) in rays


def test_cost_compatible():
    assert cost_compatible((S1, S2), (2, 1, 0, 0, 0, 0))
    assert cost_compatible((S1, S2), (1, 1, 1, 1, 1, 1))
    # a cost that pays to move along a nonnegative span direction
    assert not cost_compatible(((1, 1),), (-1, 0))
    assert cost_compatible((), (-5, 3))


def test_extreme_rays_empty_cases():
    assert extreme_rays(()) == ()
    # full-rank lattice: complement is {0}
    assert extreme_rays(((1, 0), (0, 1))) == ()
