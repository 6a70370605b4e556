"""Project-and-lift drivers: Markov bases, fiber feasibility, optimization.

All three levels share one plan: project the lattice onto coordinates where
the projection is injective, compute a small basis there, then restore the
remaining coordinates one at a time (completion step when the coordinate is
bounded on fibers, a saturating generator when it is not).  Untruncated
per-lattice work — stage term orders, stage Groebner bases, prebuilt
reducers — is cached on the lattice, so repeated fiber queries against the
same lattice only pay for normal forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from .core import Lattice, LatticeVector, TermOrder, direct, dot, lifting_weight
from .engine import TruncationOracle, _Completion, complete, minimal_markov, reduce_basis
from . import engine
from .intlinalg import combination_solution, hnf, kernel_lattice, select_pivot_columns
from .ratlp import cost_compatible, is_bounded_coordinate, saturating_vector, solve_lp

_MODES = ("none", "cone", "lp", "ip")


class _Stage(NamedTuple):
    coord: int                      # original coordinate restored here
    pos: int                        # its position among kept_after
    kept_before: tuple[int, ...]
    kept_after: tuple[int, ...]
    omega: tuple[Fraction, ...]     # recovers the coordinate: x[coord] = omega . projected
    bounded: bool
    sat: tuple[int, ...] | None     # kept_after-dim lattice vector >= 0 with sat[pos] > 0


class _Skeleton(NamedTuple):
    kept0: tuple[int, ...]
    init_rows: tuple[tuple[int, ...], ...]  # triangular Markov basis of the initial projection
    stages: tuple[_Stage, ...]


class _StageRun(NamedTuple):
    stage: _Stage
    order: TermOrder | None
    gb: tuple[tuple[int, ...], ...] | None
    reducer: _Completion | None
    size: int = 0                   # basis size after this stage


class _PlanTable(NamedTuple):
    skeleton: _Skeleton
    runs: tuple[_StageRun, ...]
    markov: tuple[tuple[int, ...], ...]     # final Markov basis, full dimension


def _project_rows(rows, cols) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row[c] for c in cols) for row in rows)


def _stage_order(omega) -> TermOrder:
    # the lifted coordinate equals omega . x, so minimizing -omega maximizes it
    return TermOrder("degrevlex", weight=tuple(-w for w in omega))


def _dropped_columns(lattice: Lattice, sigma) -> tuple[int, ...]:
    n = lattice.n
    if sigma is not None:
        sig = tuple(sorted({int(i) for i in sigma}))
        if sig and (sig[0] < 0 or sig[-1] >= n):
            raise ValueError("sigma index out of range")
        return sig
    kept0 = select_pivot_columns(lattice.basis)
    return tuple(i for i in range(n) if i not in set(kept0))


def _default_lift_order(lattice: Lattice, sig, nu=None) -> tuple[int, ...]:
    """Stage selection: coordinates with nu_i = 0 first (cheap fibers), then
    sparse basis columns, then index; deterministic."""
    basis = lattice.basis

    def nonzeros(i):
        return sum(1 for row in basis if row[i])

    if nu is None:
        return tuple(sorted(sig, key=lambda i: (nonzeros(i), i)))
    return tuple(sorted(sig, key=lambda i: (nu[i] != 0, nonzeros(i), i)))


@lru_cache(maxsize=256)
def _plan_skeleton(lattice: Lattice, sigma: tuple[int, ...] | None,
                   lift_order: tuple[int, ...] | None) -> _Skeleton:
    basis = lattice.basis
    n = lattice.n
    r = lattice.rank
    if sigma is not None:
        sig = _dropped_columns(lattice, sigma)
        kept0 = tuple(i for i in range(n) if i not in set(sig))
        if kept0 and hnf(_project_rows(basis, kept0)).rank != r:
            raise ValueError("projection away from sigma is not injective on the lattice")
        if not kept0 and r > 0:
            raise ValueError("projection away from sigma is not injective on the lattice")
    else:
        kept0 = select_pivot_columns(basis)
        sig = tuple(i for i in range(n) if i not in set(kept0))
    if lift_order is not None:
        seq = tuple(int(i) for i in lift_order)
        if sorted(seq) != list(sig):
            raise ValueError("lift_order must enumerate exactly the dropped coordinates")
    else:
        seq = _default_lift_order(lattice, sig)

    if kept0:
        res = hnf(_project_rows(basis, kept0), shape="markov")
        assert res.rank == len(kept0)
        init_rows = res.h[:res.rank]
    else:
        init_rows = ()

    stages = []
    kept = kept0
    for i in seq:
        kept2 = tuple(sorted(kept + (i,)))
        pos = kept2.index(i)
        tau = _project_rows(basis, kept2)
        omega = lifting_weight(tau, pos)
        bounded = is_bounded_coordinate(tau, pos)
        sat = None if bounded else saturating_vector(tau, pos)
        stages.append(_Stage(i, pos, kept, kept2, omega, bounded, sat))
        kept = kept2
    return _Skeleton(kept0, init_rows, tuple(stages))


def _lift_vec(v: Sequence[int], st: _Stage) -> tuple[int, ...]:
    val = sum((w * x for w, x in zip(st.omega, v)), Fraction(0))
    assert val.denominator == 1
    out = list(v)
    out.insert(st.pos, int(val))
    return tuple(out)


@lru_cache(maxsize=64)
def _plan_table(lattice: Lattice, sigma: tuple[int, ...] | None = None,
                lift_order: tuple[int, ...] | None = None) -> _PlanTable:
    """Full untruncated project-and-lift run, stage artifacts kept for reuse."""
    skel = _plan_skeleton(lattice, sigma, lift_order)
    markov: list[tuple[int, ...]] = list(skel.init_rows)
    runs = []
    for st in skel.stages:
        if st.bounded:
            order = _stage_order(st.omega)
            gb = complete(markov, order, batch_criterion=True)
            # interreduce before lifting: same normal forms, same head
            # coverage, far fewer vectors carried into the next stage
            gb = reduce_basis(gb, order)
            red = _Completion(len(st.kept_before), order, make_pairs=False)
            for g in gb:
                red.add_generator(direct(g, order))
            markov = [_lift_vec(g, st) for g in gb]
            runs.append(_StageRun(st, order, tuple(gb), red, len(markov)))
        else:
            markov = [_lift_vec(v, st) for v in markov]
            if st.sat not in markov:
                markov.append(st.sat)
            runs.append(_StageRun(st, None, None, None, len(markov)))
    return _PlanTable(skel, tuple(runs), tuple(markov))


def _triangular_fix(rows, x: list[int]) -> list[int]:
    """Make x nonnegative by adding row multiples; rows upper triangular, positive diagonal."""
    for j, row in enumerate(rows):
        if x[j] < 0:
            t = -(x[j] // row[j])
            for k in range(j, len(x)):
                x[k] += t * row[k]
    return x


def _lift_point(x: Sequence[int], st: _Stage, nu: Sequence[int]) -> tuple[int, ...]:
    # x - nu_kept is in the projected lattice; omega recovers the unique
    # preimage coordinate, shifted back to nu's fiber
    val = sum((w * (xv - nu[c]) for w, xv, c in zip(st.omega, x, st.kept_before)), Fraction(0))
    assert val.denominator == 1
    out = list(x)
    out.insert(st.pos, int(val) + int(nu[st.coord]))
    return tuple(out)


def _saturate(pt: tuple[int, ...], st: _Stage) -> tuple[int, ...]:
    v = pt[st.pos]
    if v >= 0:
        return pt
    lam = -(v // st.sat[st.pos])
    return tuple(a + lam * b for a, b in zip(pt, st.sat))


def _trace_entry(trace, st: _Stage, nf, lifted) -> None:
    if trace is not None:
        trace.append({"coordinate": st.coord, "bounded": st.bounded,
                      "normal_form": nf, "lifted": lifted})


def _walk_point(table: _PlanTable, nu: Sequence[int], trace=None) -> tuple[int, ...] | None:
    skel = table.skeleton
    x = tuple(_triangular_fix(skel.init_rows, [int(nu[c]) for c in skel.kept0]))
    for run in table.runs:
        st = run.stage
        if st.bounded:
            x = run.reducer.normal_form(x)
            lifted = _lift_point(x, st, nu)
            _trace_entry(trace, st, x, lifted)
            if lifted[st.pos] < 0:
                return None
            x = lifted
        else:
            lifted = _saturate(_lift_point(x, st, nu), st)
            _trace_entry(trace, st, x, lifted)
            x = lifted
    return x


def _stage_oracle(lattice: Lattice, nu, mode: str, kept, witness_count: int):
    if mode == "none":
        return None
    if len(kept) == lattice.n:
        sub = lattice
    else:
        sub = Lattice(_project_rows(lattice.basis, kept), n=len(kept))
    return TruncationOracle(sub, tuple(nu[c] for c in kept), mode,
                            witness_count=witness_count)


def _record_stage(stats, st: _Stage, gb_size, size) -> None:
    if stats is not None:
        stats.setdefault("stages", []).append(
            {"coordinate": st.coord, "bounded": st.bounded, "gb_size": gb_size, "size": size})


_RUN_CACHE: dict = {}
_RUN_CACHE_CAP = 64


def _truncated_run(lattice: Lattice, nu, mode: str, *, sigma=None, lift_order=None,
                   witness_count: int = 1, pair_criterion: bool = True,
                   want_point: bool = False, trace=None, stats=None):
    """Cached front for the truncated pass; identical targets recur often
    (a basis request and a feasibility walk for the same fiber, say)."""
    if trace is not None or stats is not None:
        return _truncated_run_impl(lattice, nu, mode, sigma=sigma, lift_order=lift_order,
                                   witness_count=witness_count,
                                   pair_criterion=pair_criterion,
                                   want_point=want_point, trace=trace, stats=stats)
    key = (lattice, tuple(int(v) for v in nu), mode, sigma, lift_order,
           witness_count, pair_criterion, want_point)
    hit = _RUN_CACHE.get(key)
    if hit is None:
        markov, point = _truncated_run_impl(
            lattice, nu, mode, sigma=sigma, lift_order=lift_order,
            witness_count=witness_count, pair_criterion=pair_criterion,
            want_point=want_point)
        hit = (tuple(markov), point)
        if len(_RUN_CACHE) < _RUN_CACHE_CAP:
            _RUN_CACHE[key] = hit
    return list(hit[0]), hit[1]


def _truncated_run_impl(lattice: Lattice, nu, mode: str, *, sigma=None, lift_order=None,
                        witness_count: int = 1, pair_criterion: bool = True,
                        want_point: bool = False, trace=None, stats=None):
    """One truncated project-and-lift pass; returns (markov, point).

    point is None unless want_point; a mid-walk infeasibility returns early
    with point None (the partial basis is not usable then).
    """
    nu = tuple(int(v) for v in nu)
    if lift_order is None:
        # with a target fiber in hand, restore nu_i = 0 coordinates first:
        # their stage fibers stay small and truncation bites earlier
        lift_order = _default_lift_order(lattice, _dropped_columns(lattice, sigma), nu)
    skel = _plan_skeleton(lattice, sigma, lift_order)
    markov: list[tuple[int, ...]] = list(skel.init_rows)
    point = tuple(_triangular_fix(skel.init_rows, [nu[c] for c in skel.kept0])) \
        if want_point else None
    oracle = _stage_oracle(lattice, nu, mode, skel.kept0, witness_count)
    if stats is not None:
        stats["initial_size"] = len(markov)
    for st in skel.stages:
        if st.bounded:
            order = _stage_order(st.omega)
            gb = complete(markov, order, oracle, pair_criterion, batch_criterion=True)
            gb = reduce_basis(gb, order)
            if point is not None:
                nf = engine.normal_form(point, gb, order)
                lifted = _lift_point(nf, st, nu)
                _trace_entry(trace, st, nf, lifted)
                if lifted[st.pos] < 0:
                    return markov, None
                point = lifted
            markov = [_lift_vec(g, st) for g in gb]
            gb_size = len(gb)
        else:
            markov = [_lift_vec(v, st) for v in markov]
            if st.sat not in markov:
                markov.append(st.sat)
            if point is not None:
                lifted = _saturate(_lift_point(point, st, nu), st)
                _trace_entry(trace, st, point, lifted)
                point = lifted
            gb_size = None
        oracle = _stage_oracle(lattice, nu, mode, st.kept_after, witness_count)
        markov = [v for v in markov if oracle.keep(LatticeVector(v).plus)]
        _record_stage(stats, st, gb_size, len(markov))
    return markov, point


def _as_lattice(lattice) -> Lattice:
    return lattice if isinstance(lattice, Lattice) else Lattice(lattice)


def _check_mode(truncate: str) -> None:
    if truncate not in _MODES:
        raise ValueError(f"unknown truncation mode {truncate!r}")


def _opt(seq) -> tuple[int, ...] | None:
    return tuple(int(i) for i in seq) if seq is not None else None


def markov_basis(lattice, nu=None, truncate: str = "none", *, minimal: bool = False,
                 sigma=None, lift_order=None, witness_count: int = 1,
                 pair_criterion: bool = True, stats: dict | None = None) -> list[tuple[int, ...]]:
    """Markov basis of the lattice, optionally truncated to the fiber of nu.

    Untruncated, the result connects every fiber; truncated, it connects
    every fiber whose right-hand side is relevant to nu (both the fiber and
    its complement toward nu are nonempty).  `minimal` extracts a minimal
    basis afterwards (needs fibers bounded, i.e. a strictly positive dual
    ray combination).  `stats`, when a dict, receives per-stage sizes.
    """
    lattice = _as_lattice(lattice)
    _check_mode(truncate)
    if truncate != "none" and nu is None:
        raise ValueError("truncated Markov basis needs a target fiber nu")
    sigma, lift_order = _opt(sigma), _opt(lift_order)
    if truncate == "none":
        table = _plan_table(lattice, sigma, lift_order)
        if stats is not None:
            stats["initial_size"] = len(table.skeleton.init_rows)
            for run in table.runs:
                _record_stage(stats, run.stage,
                              len(run.gb) if run.gb is not None else None, run.size)
        result = list(table.markov)
    else:
        result, _ = _truncated_run(lattice, nu, truncate, sigma=sigma, lift_order=lift_order,
                                   witness_count=witness_count, pair_criterion=pair_criterion,
                                   stats=stats)
    if minimal:
        oracle = None
        if truncate != "none":
            oracle = TruncationOracle(lattice, nu, truncate, witness_count=witness_count)
        result = minimal_markov(result, lattice, oracle=oracle)
        if stats is not None:
            stats["minimal_size"] = len(result)
    else:
        result = reduce_basis(result, TermOrder("degrevlex"))
    return [tuple(v) for v in result]


def feasible_point(lattice, nu, truncate: str = "none", *, sigma=None, lift_order=None,
                   witness_count: int = 1, trace: list | None = None) -> tuple[int, ...] | None:
    """A point of the fiber of nu, or None when the fiber is empty.

    With truncate="none" the per-lattice plan is cached, so batches of
    right-hand sides against one lattice cost one plan plus normal forms.
    """
    lattice = _as_lattice(lattice)
    _check_mode(truncate)
    nu = tuple(int(v) for v in nu)
    if len(nu) != lattice.n:
        raise ValueError("fiber right-hand side has wrong dimension")
    if truncate == "none":
        table = _plan_table(lattice, _opt(sigma), _opt(lift_order))
        return _walk_point(table, nu, trace)
    _, point = _truncated_run(lattice, nu, truncate, sigma=_opt(sigma),
                              lift_order=_opt(lift_order), witness_count=witness_count,
                              want_point=True, trace=trace)
    return point


def feasible_points(lattice, nus, truncate: str = "none", **kwargs) -> list[tuple[int, ...] | None]:
    """Feasibility for a batch of right-hand sides over one lattice.

    Distinct targets share the cached untruncated plan (a per-target
    truncated basis would rebuild every stage for every target, which
    defeats batching); a repeated single target keeps its truncation.
    """
    lattice = _as_lattice(lattice)
    nus = [tuple(int(v) for v in nu) for nu in nus]
    if truncate != "none" and len(set(nus)) > 1:
        truncate = "none"
    return [feasible_point(lattice, nu, truncate, **kwargs) for nu in nus]


@dataclass(frozen=True)
class MinimizeResult:
    status: str                     # "optimal" | "infeasible" | "unbounded"
    point: tuple[int, ...] | None
    objective: Fraction | None
    relaxations: tuple[tuple[int, ...], ...] = ()   # group strategy: sigma per round
    increments: int = 0             # increment scan: feasibility calls


@dataclass(frozen=True)
class BoundedReformulation:
    """Objective folded into a slack coordinate: y = k - cost . x >= 0.

    Feasible points of the extended fiber are exactly the original points
    with value at most k; minimizing the negated slack there finds the best
    one.  Infeasibility of the extended fiber certifies that no original
    point has value <= k.
    """
    lattice: Lattice
    nu: tuple[int, ...]
    cost: tuple[int, ...]
    k: int


def _unbounded_or_infeasible(lattice: Lattice, nu) -> MinimizeResult:
    pt = feasible_point(lattice, nu)
    if pt is None:
        return MinimizeResult("infeasible", None, None)
    return MinimizeResult("unbounded", None, None)


def _objective(cost, x) -> Fraction:
    return sum((Fraction(c) * v for c, v in zip(cost, x)), Fraction(0))


def eliminate_cost_components(lattice, cost, sigma, nu=None):
    """Rewrite the cost on the coordinates outside sigma.

    Returns (ctil, constant) with ctil indexed by the kept coordinates
    (sorted complement of sigma) such that cost . u = ctil . u_kept for every
    lattice element u; then cost . x = ctil . x_kept + constant on the fiber
    of nu.  Raises ValueError when no such rewrite exists, i.e. the cost does
    not vanish on the part of the lattice span killed by the projection.
    """
    lattice = _as_lattice(lattice)
    basis = lattice.basis
    sig = set(_dropped_columns(lattice, sigma))
    kept = tuple(j for j in range(lattice.n) if j not in sig)
    # solve (ctil . u_kept = cost . u) for each basis row u by elimination
    rows = [[Fraction(row[j]) for j in kept] + [_objective(cost, row)] for row in basis]
    m, w = len(rows), len(kept)
    piv_of_col: dict[int, int] = {}
    r = 0
    for col in range(w):
        piv = next((i for i in range(r, m) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_of_col[col] = r
        r += 1
    if any(rows[i][w] for i in range(r, m)):
        raise ValueError("cost cannot be eliminated: it does not vanish on "
                         "the lattice directions hidden by sigma")
    ctil = tuple(rows[piv_of_col[c_]][w] if c_ in piv_of_col else Fraction(0)
                 for c_ in range(w))
    const = Fraction(0)
    if nu is not None:
        const = _objective(cost, nu) - sum(
            (ct * nu[j] for ct, j in zip(ctil, kept)), Fraction(0))
    return ctil, const


def _group_relax(lattice: Lattice, nu, cost, mode: str, witness_count: int,
                 pair_criterion: bool, stats) -> MinimizeResult:
    basis = lattice.basis
    n = lattice.n
    a_rows = kernel_lattice(basis)
    c = [Fraction(v) for v in cost]
    res = solve_lp(a_rows, [dot(a, nu) for a in a_rows], c)
    if res.status == "infeasible":
        return MinimizeResult("infeasible", None, None)
    assert res.status == "optimal"
    sigma = set(res.basis)
    kept = tuple(j for j in range(n) if j not in sigma)
    # reduced costs at the optimum: zero on sigma, nonnegative elsewhere, and
    # they agree with the original cost on every lattice direction
    ctil_kept, _ = eliminate_cost_components(lattice, c, tuple(sorted(sigma)), nu)
    assert all(v >= 0 for v in ctil_kept)
    ctil = [Fraction(0)] * n
    for v, j in zip(ctil_kept, kept):
        ctil[j] = v
    proj = _project_rows(basis, kept)
    res_h = hnf(proj, shape="markov")
    assert res_h.rank == len(kept)
    markov: list[tuple[int, ...]] = list(res_h.h[:res_h.rank])
    point = tuple(_triangular_fix(markov, [int(nu[c_]) for c_ in kept]))
    history = [tuple(sorted(sigma))]
    while True:
        order = TermOrder("degrevlex", weight=[ctil[c_] for c_ in kept])
        oracle = _stage_oracle(lattice, nu, mode, kept, witness_count)
        gb = complete(markov, order, oracle, pair_criterion, batch_criterion=True)
        if stats is not None:
            stats.setdefault("relaxation_gb_sizes", []).append(len(gb))
        x = engine.normal_form(point, gb, order)
        point = x
        # lift the relaxation optimum to the full space through the lattice
        diff = [xv - nu[c_] for xv, c_ in zip(x, kept)]
        q = combination_solution(proj, diff)
        assert q is not None
        full = [int(nu[j]) + sum(q[k] * basis[k][j] for k in range(len(basis)))
                for j in range(n)]
        assert [full[c_] for c_ in kept] == list(x)
        if all(v >= 0 for v in full):
            return MinimizeResult("optimal", tuple(full), _objective(cost, full),
                                  tuple(history))
        i = min((j for j in sigma), key=lambda j: (full[j], j))
        assert full[i] < 0
        # restore coordinate i: one project-and-lift stage inside this family
        kept2 = tuple(sorted(kept + (i,)))
        pos = kept2.index(i)
        tau = _project_rows(basis, kept2)
        omega = lifting_weight(tau, pos)
        st = _Stage(i, pos, kept, kept2, omega, True, None)
        if is_bounded_coordinate(tau, pos):
            order_w = _stage_order(omega)
            gw = complete(markov, order_w, oracle, pair_criterion)
            nf = engine.normal_form(point, gw, order_w)
            lifted = _lift_point(nf, st, nu)
            if lifted[pos] < 0:
                return MinimizeResult("infeasible", None, None, tuple(history))
            point = lifted
            markov = [_lift_vec(g, st) for g in gw]
        else:
            sat = saturating_vector(tau, pos)
            st = st._replace(bounded=False, sat=sat)
            markov = [_lift_vec(v, st) for v in markov]
            markov.append(sat)
            point = _saturate(_lift_point(point, st, nu), st)
        sigma.discard(i)
        kept = kept2
        proj = tau
        if mode != "none":
            oracle2 = _stage_oracle(lattice, nu, mode, kept, witness_count)
            markov = [v for v in markov if oracle2.keep(LatticeVector(v).plus)]
        history.append(tuple(sorted(sigma)))


def _full_gb(lattice: Lattice, nu, cost, mode: str, witness_count: int,
             pair_criterion: bool, stats) -> MinimizeResult:
    if mode == "none":
        table = _plan_table(lattice, None, None)
        markov: Sequence = table.markov
        point = _walk_point(table, nu)
    else:
        markov, point = _truncated_run(lattice, nu, mode, witness_count=witness_count,
                                       pair_criterion=pair_criterion, want_point=True)
    if point is None:
        return MinimizeResult("infeasible", None, None)
    order = TermOrder("degrevlex", weight=cost)
    oracle = None
    if mode != "none":
        oracle = TruncationOracle(lattice, nu, mode, witness_count=witness_count)
    gb = complete(markov, order, oracle, pair_criterion, batch_criterion=True)
    if stats is not None:
        stats["gb_size"] = len(gb)
    x = engine.normal_form(point, gb, order)
    return MinimizeResult("optimal", x, _objective(cost, x))


def _integral_cost(cost):
    """Scale a rational cost row to primitive integers; returns (ci, t) with
    ci = t * cost elementwise (t = 1 for an all-zero row)."""
    c = [Fraction(v) for v in cost]
    scale = 1
    for f in c:
        scale = scale * f.denominator // math.gcd(scale, f.denominator)
    ci = [int(f * scale) for f in c]
    g = math.gcd(*ci) if any(ci) else 0
    if g == 0:
        return ci, Fraction(1)
    return [v // g for v in ci], Fraction(scale, g)


def bounded_reformulation(lattice, nu, cost, k) -> BoundedReformulation:
    """Fold an integral cost row into a slack coordinate capped at k.

    The extended fiber consists of (x, k - cost . x) for x in the original
    fiber with cost . x <= k, so feasibility there decides whether the value
    k is attainable at all, and minimizing (0, ..., 0, -1) finds the best x.
    """
    lattice = _as_lattice(lattice)
    nu = tuple(int(v) for v in nu)
    ci = [int(v) for v in cost]
    if len(nu) != lattice.n or len(ci) != lattice.n:
        raise ValueError("dimension mismatch between lattice, nu, and cost")
    ext = Lattice([(*row, -dot(ci, row)) for row in lattice.basis], n=lattice.n + 1)
    return BoundedReformulation(ext, (*nu, int(k) - dot(ci, nu)),
                                (*(0,) * lattice.n, -1), int(k))


def _bounded_reform(lattice: Lattice, nu, cost, mode: str, upper_bound,
                    witness_count: int, pair_criterion: bool, stats) -> MinimizeResult:
    n = lattice.n
    ci, t = _integral_cost(cost)
    x_feas = feasible_point(lattice, nu)
    if x_feas is None:
        return MinimizeResult("infeasible", None, None)
    if not any(ci):
        return MinimizeResult("optimal", x_feas, Fraction(0))
    if upper_bound is not None:
        k = math.floor(Fraction(upper_bound) * t)
    else:
        # one notch below the witness value: reformulation infeasibility
        # then certifies the witness itself is optimal
        k = dot(ci, x_feas) - 1
    ref = bounded_reformulation(lattice, nu, ci, k)
    if stats is not None:
        stats["reformulation_k"] = k
    sub = _full_gb(ref.lattice, ref.nu, ref.cost, mode, witness_count,
                   pair_criterion, stats)
    if sub.status == "infeasible":
        if upper_bound is not None:
            return MinimizeResult("infeasible", None, None)
        return MinimizeResult("optimal", x_feas, _objective(cost, x_feas))
    x = tuple(sub.point[:n])
    assert dot(ci, x) <= k
    return MinimizeResult("optimal", x, _objective(cost, x))


def minimize(lattice, nu, cost, strategy: str = "group-relax", truncate: str = "none", *,
             upper_bound=None, witness_count: int = 1, pair_criterion: bool = True,
             stats: dict | None = None) -> MinimizeResult:
    """Minimize cost . x over the fiber of nu.

    Strategies: "group-relax" solves a chain of group relaxations obtained
    by dropping the basic coordinates of the LP optimum, restoring the most
    violated coordinate until the relaxation optimum is feasible;
    "full-gb" reduces a feasible point by one Groebner basis of the whole
    lattice in a cost-compatible order; "bounded" reformulates with the
    objective folded into a slack capped one below a feasible point's value
    (or at `upper_bound`) and solves that single problem — infeasibility of
    the reformulation certifies the witness point optimal.  See
    minimize_by_increment for the stepwise scan over candidate values.
    """
    lattice = _as_lattice(lattice)
    _check_mode(truncate)
    nu = tuple(int(v) for v in nu)
    if len(nu) != lattice.n or len(cost) != lattice.n:
        raise ValueError("dimension mismatch between lattice, nu, and cost")
    if strategy not in ("group-relax", "full-gb", "bounded"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not cost_compatible(lattice.basis, cost):
        return _unbounded_or_infeasible(lattice, nu)
    if strategy == "group-relax":
        return _group_relax(lattice, nu, cost, truncate, witness_count, pair_criterion, stats)
    if strategy == "bounded":
        return _bounded_reform(lattice, nu, cost, truncate, upper_bound,
                               witness_count, pair_criterion, stats)
    return _full_gb(lattice, nu, cost, truncate, witness_count, pair_criterion, stats)


def minimize_by_increment(lattice, nu, cost, lower=None, upper=None,
                          truncate: str = "none", stats: dict | None = None) -> MinimizeResult:
    """Minimize by scanning objective values upward with feasibility tests.

    Appends a slack coordinate y = k - cost . x to the lattice and asks, for
    k from a lower bound (LP by default) to an upper bound (any feasible
    point's value by default), whether that extended fiber is nonempty; the
    first hit is the optimum.  With an explicit `upper` the scan is capped
    and "infeasible" means no solution with value <= upper.
    """
    lattice = _as_lattice(lattice)
    _check_mode(truncate)
    nu = tuple(int(v) for v in nu)
    basis = lattice.basis
    n = lattice.n
    if len(nu) != n or len(cost) != n:
        raise ValueError("dimension mismatch between lattice, nu, and cost")
    if not cost_compatible(basis, cost):
        return _unbounded_or_infeasible(lattice, nu)
    ci, t = _integral_cost(cost)
    if not any(ci):
        pt = feasible_point(lattice, nu)
        if pt is None:
            return MinimizeResult("infeasible", None, None)
        return MinimizeResult("optimal", pt, Fraction(0), increments=1)

    if lower is not None:
        k0 = math.ceil(Fraction(lower) * t)
    else:
        a_rows = kernel_lattice(basis)
        res = solve_lp(a_rows, [dot(a, nu) for a in a_rows], ci)
        if res.status == "infeasible":
            return MinimizeResult("infeasible", None, None)
        assert res.status == "optimal"
        k0 = math.ceil(res.objective)
    if upper is not None:
        k1 = math.floor(Fraction(upper) * t)
    else:
        pt = feasible_point(lattice, nu)
        if pt is None:
            return MinimizeResult("infeasible", None, None)
        k1 = dot(ci, pt)

    ext = Lattice([(*row, -dot(ci, row)) for row in basis], n=n + 1)
    shift = dot(ci, nu)
    count = 0
    for k in range(k0, k1 + 1):
        count += 1
        sol = feasible_point(ext, (*nu, k - shift), truncate=truncate)
        if sol is not None:
            x = sol[:n]
            assert dot(ci, x) == k
            if stats is not None:
                stats["increments"] = count
            return MinimizeResult("optimal", x, _objective(cost, x), increments=count)
    if stats is not None:
        stats["increments"] = count
    return MinimizeResult("infeasible", None, None, increments=count)
