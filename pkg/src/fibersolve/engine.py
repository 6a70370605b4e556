"""Truncated Buchberger-style completion for lattice fibers.

The completion works on directed lattice vectors u (u+ above u- in the term
order).  Critical pairs are processed smallest max(u+, v+) first (1-norm,
FIFO within ties); truncation filters pairs once, at creation time.  The
classical disjoint-positive-support criterion sits behind a flag (default
on).  An internal chain criterion skips pairs whose reduction is forced to
zero by an already-processed smaller pair; it never changes the computed
basis, only the work done (there is a test asserting exactly that).
"""

from __future__ import annotations

from array import array
from fractions import Fraction
from heapq import heapify, heappop, heappush
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _fastloop
from .core import Lattice, LatticeVector, TermOrder, direct, dot

_NP_SEARCH_MIN = 48  # below this many generators a plain scan wins
_INT64_GUARD = 1 << 62
_BATCH_SCAN_CAP = 4096  # dominating-join scan budget per created batch

# Fiber nonemptiness answers, shared by every oracle on the same lattice
# (the answer only depends on the fiber, and lattices hash by value).
_FEAS_MEMO: dict[Lattice, dict[tuple[int, ...], bool]] = {}
_FEAS_MEMO_CAP = 1_500_000


def _to_primitive_int_row(vec) -> tuple[int, ...]:
    fracs = [Fraction(v) for v in vec]
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    row = [int(f * scale) for f in fracs]
    g = 0
    for v in row:
        g = gcd(g, v)
    return tuple(v // g for v in row) if g > 1 else tuple(row)


class TruncationOracle:
    """Decides which fibers a truncated run may ignore.

    keep(z) answers membership of z in B(L, nu), the set of fibers that can
    still contribute: F(z) != {} and F(nu - z) != {}.  Every z the engine
    tests is nonnegative (so F(z) contains z); only F(nu - z) is checked.

    Modes:
      none: keep everything.
      cone: drop when a.z > a.nu for a witness a from the dual cone
            {a >= 0 : a orthogonal to L}; witnesses come from an LP
            (min a.nu, |a|_1 = 1) plus, if requested, further extreme rays.
      lp:   drop when the rational relaxation of F(nu - z) is empty,
            decided against every extreme ray of the dual cone (Farkas).
      ip:   drop when F(nu - z) itself is empty, decided by a recursive
            feasibility run with lp-truncation inside, memoised per fiber.

    Keeps nest: ip-keep implies lp-keep implies cone-keep (asserted when
    check_nesting is set).
    """

    def __init__(self, lattice: Lattice | None = None, nu: Sequence[int] | None = None,
                 mode: str = "none", witnesses: Iterable[Sequence] | None = None,
                 witness_count: int = 1, check_nesting: bool = False):
        if mode not in ("none", "cone", "lp", "ip"):
            raise ValueError(f"unknown truncation mode {mode!r}")
        if mode != "none" and (lattice is None or nu is None):
            raise ValueError(f"truncation mode {mode!r} needs a lattice and a target fiber")
        self.mode = mode
        self.lattice = lattice
        self.nu = tuple(int(v) for v in nu) if nu is not None else None
        self.check_nesting = check_nesting
        self._memo = _FEAS_MEMO.setdefault(lattice, {}) if mode == "ip" else {}
        self._witness_rows: tuple[tuple[int, ...], ...] | None = None
        self._witness_count = witness_count
        self._explicit_witnesses = None
        if witnesses is not None:
            self._explicit_witnesses = tuple(_to_primitive_int_row(w) for w in witnesses)
        if mode == "none":
            self.rows: tuple[tuple[int, ...], ...] = ()
        elif mode == "cone":
            self.rows = self._cone_witnesses()
        else:
            self.rows = lattice.dual_rays()
        self.bounds = tuple(dot(a, self.nu) for a in self.rows) if self.nu is not None else ()

    def _cone_witnesses(self) -> tuple[tuple[int, ...], ...]:
        if self._witness_rows is not None:
            return self._witness_rows
        rows: list[tuple[int, ...]] = []
        if self._explicit_witnesses is not None:
            rows.extend(self._explicit_witnesses)
        else:
            from .ratlp import dual_cone_witness

            best = dual_cone_witness(self.lattice.basis, self.nu)
            if best is not None:
                rows.append(_to_primitive_int_row(best[0]))
            if self._witness_count > 1:
                ranked = sorted(self.lattice.dual_rays(), key=lambda a: (dot(a, self.nu), a))
                for a in ranked:
                    if len(rows) >= self._witness_count:
                        break
                    if a not in rows:
                        rows.append(a)
        self._witness_rows = tuple(rows)
        return self._witness_rows

    def _linear_keep(self, z: Sequence[int]) -> bool:
        for a, b in zip(self.rows, self.bounds):
            if dot(a, z) > b:
                return False
        return True

    def exact_keep(self, z: Sequence[int]) -> bool:
        """Exact nonemptiness of F(nu - z), memoised per coset."""
        w = tuple(n - v for n, v in zip(self.nu, z))
        if all(v >= 0 for v in w):
            return True  # w itself lies in the fiber
        # emptiness only depends on w modulo the lattice
        key = self.lattice.fiber_label(w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        from .drivers import feasible_point

        res = feasible_point(self.lattice, w) is not None
        if len(self._memo) < _FEAS_MEMO_CAP:
            self._memo[key] = res
        return res

    def keep(self, z: Sequence[int]) -> bool:
        ok = self._linear_keep(z)
        if ok and self.mode == "ip":
            ok = self.exact_keep(z)
        if self.check_nesting and self.mode in ("lp", "ip"):
            cone_ok = all(dot(a, z) <= dot(a, self.nu) for a in self._cone_witnesses())
            lp_ok = self._linear_keep(z) if self.mode == "ip" else ok
            if self.mode == "ip":
                assert not ok or lp_ok, "ip-keep must imply lp-keep"
            assert not lp_ok or cone_ok, "lp-keep must imply cone-keep"
        return ok


class _PairQueue:
    """Degree-bucketed FIFO of critical pairs, smallest degree first."""

    __slots__ = ("buckets", "cursors", "heap", "size")

    def __init__(self):
        self.buckets: dict[int, array] = {}
        self.cursors: dict[int, int] = {}
        self.heap: list[int] = []
        self.size = 0

    def push_flat(self, deg: int, flat: Sequence[int]) -> None:
        """Append interleaved (i, j) index pairs at the given degree."""
        if not flat:
            return
        bucket = self.buckets.get(deg)
        if bucket is None:
            bucket = array("q")
            self.buckets[deg] = bucket
            self.cursors[deg] = 0
            heappush(self.heap, deg)
        bucket.extend(flat)
        self.size += len(flat) // 2

    def min_degree(self) -> int | None:
        while self.heap:
            deg = self.heap[0]
            bucket = self.buckets.get(deg)
            if bucket is not None and self.cursors[deg] < len(bucket):
                return deg
            heappop(self.heap)
            if bucket is not None:
                del self.buckets[deg]
                del self.cursors[deg]
        return None

    def pop(self) -> tuple[int, int, int]:
        deg = self.min_degree()
        bucket = self.buckets[deg]
        cur = self.cursors[deg]
        self.cursors[deg] = cur + 2
        self.size -= 1
        return deg, bucket[cur], bucket[cur + 1]

    def __bool__(self) -> bool:
        return self.min_degree() is not None


class _Completion:
    """Shared state for completion runs: generators, mirrors, pair queue."""

    def __init__(self, n: int, order: TermOrder, oracle: TruncationOracle | None = None,
                 pair_criterion: bool = True, chain_criterion: bool = True,
                 degree_weight: Sequence[int] | None = None, make_pairs: bool = True,
                 batch_criterion: bool = False):
        self.n = n
        self.order = order
        self.oracle = oracle if oracle is not None else TruncationOracle()
        self.pair_criterion = pair_criterion
        self.chain_criterion = chain_criterion
        self.batch_criterion = batch_criterion
        self.make_pairs = make_pairs
        self.degree_weight = tuple(degree_weight) if degree_weight is not None else None
        self.vecs: list[tuple[int, ...]] = []
        self.plus: list[tuple[int, ...]] = []
        self.masks: list[int] = []
        self.epochs: list[int] = []
        self.seen: set[tuple[int, ...]] = set()
        self.queue = _PairQueue()
        self.epoch = 0
        self.current_deg: int | None = None
        self.np_ok = 0 < n <= 63
        self._cap = 0
        self._np_masks = None
        self._np_plus = None
        self._max_abs = 1
        rows = self.oracle.rows
        self._ray_rows = rows
        self._ray_bounds = self.oracle.bounds
        self._ray_max = max((max(abs(v) for v in a) for a in rows), default=0)
        self._np_rays = np.array(rows, dtype=np.int64).T if rows and self.np_ok else None
        self._np_ray_bounds = np.array(self.oracle.bounds, dtype=np.int64) if rows and self.np_ok else None
        if self.degree_weight is not None:
            self._np_weight = np.array(self.degree_weight, dtype=np.int64) if self.np_ok else None
            self._weight_max = max(abs(v) for v in self.degree_weight) if self.degree_weight else 0
        else:
            self._np_weight = None
            self._weight_max = 0

    # -- storage ---------------------------------------------------------

    def _grow(self, need: int) -> None:
        if need <= self._cap:
            return
        cap = max(64, self._cap * 2, need)
        masks = np.zeros(cap, dtype=np.int64)
        plus = np.zeros((cap, self.n), dtype=np.int64)
        if self._np_masks is not None:
            masks[:self._cap] = self._np_masks
            plus[:self._cap] = self._np_plus
        self._np_masks = masks
        self._np_plus = plus
        self._cap = cap

    def _mask(self, x: Sequence[int]) -> int:
        m = 0
        for i, v in enumerate(x):
            if v > 0:
                m |= 1 << i
        return m

    def _degree(self, z: Sequence[int]) -> int:
        if self.degree_weight is None:
            return sum(z)
        return dot(self.degree_weight, z)

    # -- generators and pairs -------------------------------------------

    def add_generator(self, lv: LatticeVector) -> int | None:
        if lv.v in self.seen:
            return None
        self.seen.add(lv.v)
        t = len(self.vecs)
        self.vecs.append(lv.v)
        self.plus.append(lv.plus)
        self.masks.append(lv.mask_plus)
        self.epochs.append(self.epoch)
        if self.np_ok:
            big = max((abs(v) for v in lv.v), default=0)
            if big >= _INT64_GUARD:
                self.np_ok = False
            else:
                if big > self._max_abs:
                    self._max_abs = big
                self._grow(t + 1)
                self._np_masks[t] = lv.mask_plus
                self._np_plus[t] = lv.plus
        if t and self.make_pairs:
            self._make_pairs(t)
        return t

    def _batch_filter(self, entries: list[tuple[int, tuple[int, ...], int]]
                      ) -> list[tuple[int, tuple[int, ...], int]]:
        """Drop batch pairs another batch pair makes redundant.

        A pair with the same join as an earlier one (lower first index), or
        whose join strictly contains that of a kept smaller-degree one, can
        only reproduce work the kept pair already forces; kept joins are
        scanned in ascending degree, capped.  Changes the raw generator
        list, never the reduced basis.
        """
        seen_z: dict[tuple[int, ...], int] = {}
        uniq = []
        for e in entries:
            if e[1] not in seen_z:
                seen_z[e[1]] = e[0]
                uniq.append(e)
        kept: list[tuple[int, tuple[int, ...]]] = []
        dropped: set[int] = set()
        for e in sorted(uniq, key=lambda e: e[2]):
            hit = False
            for kd, kz in kept[:_BATCH_SCAN_CAP]:
                if kd >= e[2]:
                    break
                if all(a <= b for a, b in zip(kz, e[1])):
                    hit = True
                    break
            if hit:
                dropped.add(e[0])
            else:
                kept.append((e[2], e[1]))
        return [e for e in uniq if e[0] not in dropped]

    def _make_pairs(self, t: int) -> None:
        oracle = self.oracle
        exact = oracle.mode == "ip"
        if self.np_ok and t >= 16:
            new_plus = self._np_plus[t]
            z_rows = np.maximum(self._np_plus[:t], new_plus)
            if self.pair_criterion:
                alive = (self._np_masks[:t] & self.masks[t]) != 0
            else:
                alive = np.ones(t, dtype=bool)
            if self._ray_rows:
                if self._np_rays is not None and self._max_abs * self._ray_max * self.n < _INT64_GUARD:
                    dots = z_rows @ self._np_rays
                    alive &= (dots <= self._np_ray_bounds).all(axis=1)
                else:
                    idx = np.flatnonzero(alive)
                    for i in idx:
                        z = tuple(int(v) for v in z_rows[i])
                        if not oracle._linear_keep(z):
                            alive[i] = False
            if exact:
                idx = np.flatnonzero(alive)
                for i in idx:
                    z = tuple(int(v) for v in z_rows[i])
                    if not oracle.exact_keep(z):
                        alive[i] = False
            idx = np.flatnonzero(alive)
            if idx.size == 0:
                return
            if self.degree_weight is None:
                degs = z_rows[idx].sum(axis=1)
            elif self._np_weight is not None and self._max_abs * self._weight_max * self.n < _INT64_GUARD:
                degs = z_rows[idx] @ self._np_weight
            else:
                degs = np.array([self._degree(tuple(int(v) for v in z_rows[i])) for i in idx])
            if self.batch_criterion and idx.size > 1:
                entries = [(int(i), tuple(int(v) for v in z_rows[i]), int(d))
                           for i, d in zip(idx, degs)]
                entries = self._batch_filter(entries)
                if not entries:
                    return
                idx = np.array([e[0] for e in entries], dtype=np.int64)
                degs = np.array([e[2] for e in entries], dtype=np.int64)
            for d in np.unique(degs):
                sel = idx[degs == d]
                flat = np.empty(2 * sel.size, dtype=np.int64)
                flat[0::2] = sel
                flat[1::2] = t
                self.queue.push_flat(int(d), flat.tolist())
            return
        mask_t = self.masks[t]
        plus_t = self.plus[t]
        entries = []
        for i in range(t):
            if self.pair_criterion and not (self.masks[i] & mask_t):
                continue
            z = tuple(a if a >= b else b for a, b in zip(self.plus[i], plus_t))
            if self._ray_rows and not oracle._linear_keep(z):
                continue
            if exact and not oracle.exact_keep(z):
                continue
            entries.append((i, z, self._degree(z)))
        if self.batch_criterion and len(entries) > 1:
            entries = self._batch_filter(entries)
        by_deg: dict[int, list[int]] = {}
        for i, _z, d in entries:
            by_deg.setdefault(d, []).extend((i, t))
        for d, flat in by_deg.items():
            self.queue.push_flat(d, flat)

    # -- reduction -------------------------------------------------------

    def find_reducer(self, x: Sequence[int], xmask: int) -> int:
        k = len(self.vecs)
        if self.np_ok and k >= _NP_SEARCH_MIN and max(x, default=0) < _INT64_GUARD:
            cand = np.flatnonzero((self._np_masks[:k] & ~xmask) == 0)
            if cand.size:
                ok = (self._np_plus[cand] <= np.asarray(x, dtype=np.int64)).all(axis=1)
                hit = np.flatnonzero(ok)
                if hit.size:
                    return int(cand[hit[0]])
            return -1
        masks = self.masks
        plus = self.plus
        for i in range(k):
            if masks[i] & ~xmask:
                continue
            p = plus[i]
            if all(a <= b for a, b in zip(p, x)):
                return i
        return -1

    def normal_form(self, x: Sequence[int]) -> tuple[int, ...]:
        cur = tuple(x)
        mask = self._mask(cur)
        while True:
            idx = self.find_reducer(cur, mask)
            if idx < 0:
                return cur
            g = self.vecs[idx]
            # subtract the largest multiple that keeps the point nonnegative;
            # every intermediate step is a valid single reduction by g
            steps = min(c // p for c, p in zip(cur, self.plus[idx]) if p)
            cur = tuple(a - steps * b for a, b in zip(cur, g))
            mask = self._mask(cur)

    def _chain_skip(self, i: int, j: int, z: tuple[int, ...], zmask: int) -> bool:
        e = self.epoch
        if self.epochs[i] == e or self.epochs[j] == e:
            return False
        k = len(self.vecs)
        masks = self.masks
        plus = self.plus
        pi = self.plus[i]
        pj = self.plus[j]
        if self.np_ok and k >= _NP_SEARCH_MIN and max(z) < _INT64_GUARD:
            za = np.asarray(z, dtype=np.int64)
            cand = np.flatnonzero((self._np_masks[:k] & ~zmask) == 0)
            if cand.size:
                cand = cand[(self._np_plus[cand] <= za).all(axis=1)]
        else:
            cand = [c for c in range(k)
                    if not masks[c] & ~zmask and all(a <= b for a, b in zip(plus[c], z))]
        for c in cand:
            c = int(c)
            if c == i or c == j or self.epochs[c] >= e:
                continue
            pc = plus[c]
            if all(max(a, b) == zz for a, b, zz in zip(pi, pc, z)):
                continue
            if all(max(a, b) == zz for a, b, zz in zip(pc, pj, z)):
                continue
            return True
        return False

    def run(self) -> None:
        queue = self.queue
        order = self.order
        while queue:
            deg, i, j = queue.pop()
            if deg != self.current_deg:
                self.current_deg = deg
                self.epoch += 1
            pi = self.plus[i]
            pj = self.plus[j]
            z = tuple(a if a >= b else b for a, b in zip(pi, pj))
            if self.chain_criterion and self._chain_skip(i, j, z, self._mask(z)):
                continue
            x = tuple(a - b for a, b in zip(z, self.vecs[i]))
            y = tuple(a - b for a, b in zip(z, self.vecs[j]))
            nx = self.normal_form(x)
            ny = self.normal_form(y)
            if nx == ny:
                continue
            r = direct(tuple(a - b for a, b in zip(nx, ny)), order)
            self.add_generator(r)


def _directed_input(vectors, order: TermOrder) -> list[LatticeVector]:
    out = []
    for v in vectors:
        vec = v.v if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
        if not any(vec):
            continue
        out.append(direct(vec, order))
    return out


def _fast_complete(n: int, kept: list[LatticeVector], order: TermOrder,
                   oracle: TruncationOracle, pair_criterion: bool,
                   chain_criterion: bool, batch_criterion: bool):
    """Run the completion in the compiled loop; None when not applicable."""
    if not _fastloop.HAVE_NUMBA or not 0 < n <= 63:
        return None
    exact_fn = oracle.exact_keep if oracle.mode == "ip" else None
    st = _fastloop.FastState(n, order, oracle, pair_criterion, chain_criterion,
                             f_rule=batch_criterion, m_rule=batch_criterion,
                             m_cap=_BATCH_SCAN_CAP, exact_fn=exact_fn)
    if not st.ok:
        return None
    for lv in kept:
        if not st.add_generator(lv.v):
            return None
    if not st.run():
        return None
    return st.generators()


def complete(vectors, order: TermOrder, oracle: TruncationOracle | None = None,
             pair_criterion: bool = True, chain_criterion: bool = True,
             batch_criterion: bool = False) -> list[tuple[int, ...]]:
    """Truncated completion of a set of lattice vectors.

    Args:
        vectors: a nu-truncated Markov basis of the lattice (directed or
            not); the output is only a truncated Groebner basis if this
            precondition holds.
        order: term order used for directing and reduction.
        oracle: truncation oracle (default keeps everything).
        pair_criterion: skip critical pairs whose positive supports are
            disjoint (classical criterion).
        chain_criterion: internal work-saving criterion; identical output.
        batch_criterion: drop critical pairs made redundant by another pair
            from the same creation batch; can change which redundant
            generators appear, never the reduced basis.

    Returns:
        The computed truncated Groebner basis as directed vectors, in
        insertion order (inputs that survived the truncation filter first,
        then completions).
    """
    if oracle is None:
        oracle = TruncationOracle()
    directed = _directed_input(vectors, order)
    n = len(directed[0].v) if directed else 0
    kept = [lv for lv in directed
            if oracle.mode == "none" or oracle.keep(lv.plus)]
    fast = _fast_complete(n, kept, order, oracle, pair_criterion,
                          chain_criterion, batch_criterion)
    if fast is not None:
        return fast
    comp = _Completion(n, order, oracle, pair_criterion, chain_criterion,
                       batch_criterion=batch_criterion)
    for lv in kept:
        comp.add_generator(lv)
    comp.run()
    return list(comp.vecs)


def normal_form(x: Sequence[int], vectors, order: TermOrder) -> tuple[int, ...]:
    """Fully reduce a nonnegative point by directed vectors (Algorithm-style).

    Each step subtracts a vector whose positive part fits under the current
    point (first match in insertion order), strictly decreasing in the term
    order, so this terminates; on a Groebner basis the result is the unique
    fiber minimum reachable from x.
    """
    pt = tuple(int(v) for v in x)
    if any(v < 0 for v in pt):
        raise ValueError("normal form input must be nonnegative")
    comp = _Completion(len(pt), order, make_pairs=False)
    for lv in _directed_input(vectors, order):
        comp.add_generator(lv)
    return comp.normal_form(pt)


def reduce_basis(vectors, order: TermOrder) -> list[tuple[int, ...]]:
    """Interreduce a Groebner basis: minimal leads, fully reduced tails.

    For a Groebner basis input the result is the reduced basis (unique for
    the order); output is sorted by the order on positive parts.
    """
    directed = _directed_input(vectors, order)
    uniq: dict[tuple[int, ...], LatticeVector] = {}
    for lv in directed:
        uniq.setdefault(lv.v, lv)
    items = sorted(uniq.values(), key=lambda lv: (order.key(lv.plus), lv.v))
    kept: list[LatticeVector] = []
    for lv in items:
        reducible = False
        for h in kept:
            if not h.mask_plus & ~lv.mask_plus and all(a <= b for a, b in zip(h.plus, lv.plus)):
                reducible = True
                break
        if not reducible:
            kept.append(lv)
    comp = _Completion(len(kept[0].v) if kept else 0, order, make_pairs=False)
    for lv in kept:
        comp.add_generator(lv)
    out = []
    for lv in kept:
        tail = comp.normal_form(lv.minus)
        vec = tuple(p - m for p, m in zip(lv.plus, tail))
        out.append(vec)
    return sorted(out, key=lambda v: (order.key(LatticeVector(v).plus), v))


def minimal_markov(vectors, lattice: Lattice, order: TermOrder | None = None,
                   oracle: TruncationOracle | None = None) -> list[tuple[int, ...]]:
    """Extract a minimal (truncated) Markov basis from a Markov basis.

    Candidates are processed fiber by fiber in a degree order given by a
    strictly positive grading from the dual cone; a candidate is kept only
    if its endpoints are still disconnected under everything kept so far
    (normal-form test against a completion drained up to that degree).
    Degree-wise needed counts are canonical, so the output cardinality does
    not depend on the completion order.

    Raises ValueError when the dual cone has no strictly positive vector
    (fibers unbounded; minimality is not well defined then).
    """
    if order is None:
        order = TermOrder("degrevlex")
    rays = lattice.dual_rays()
    grading = tuple(sum(a[i] for a in rays) for i in range(lattice.n)) if rays else ()
    if not grading or any(g <= 0 for g in grading):
        raise ValueError("no strictly positive grading: minimal Markov basis not well defined")
    if oracle is None:
        oracle = TruncationOracle()
    directed = _directed_input(vectors, order)
    uniq: dict[tuple[int, ...], LatticeVector] = {}
    for lv in directed:
        uniq.setdefault(lv.v, lv)
    cands = [lv for lv in uniq.values() if oracle.mode == "none" or oracle.keep(lv.plus)]
    cands.sort(key=lambda lv: (dot(grading, lv.plus), order.key(lv.plus), lv.v))
    fast = _fast_minimal(lattice.n, cands, grading, order, oracle)
    if fast is not None:
        return fast
    # batch rules only thin the redundant side products; the drained state
    # stays confluent degree by degree, so the kept set is the same
    comp = _Completion(lattice.n, order, oracle, degree_weight=grading,
                       batch_criterion=True)
    out: list[tuple[int, ...]] = []
    queue = comp.queue
    for lv in cands:
        cand_deg = dot(grading, lv.plus)
        while True:
            d = queue.min_degree()
            if d is None or d > cand_deg:
                break
            deg, i, j = queue.pop()
            if deg != comp.current_deg:
                comp.current_deg = deg
                comp.epoch += 1
            pi, pj = comp.plus[i], comp.plus[j]
            z = tuple(a if a >= b else b for a, b in zip(pi, pj))
            if comp.chain_criterion and comp._chain_skip(i, j, z, comp._mask(z)):
                continue
            x = tuple(a - b for a, b in zip(z, comp.vecs[i]))
            y = tuple(a - b for a, b in zip(z, comp.vecs[j]))
            nx = comp.normal_form(x)
            ny = comp.normal_form(y)
            if nx != ny:
                comp.add_generator(direct(tuple(a - b for a, b in zip(nx, ny)), order))
        if comp.normal_form(lv.plus) != comp.normal_form(lv.minus):
            comp.add_generator(lv)
            out.append(lv.v)
    return out


def _fast_minimal(n: int, cands: list[LatticeVector], grading, order: TermOrder,
                  oracle: TruncationOracle):
    """Candidate loop of minimal_markov on the compiled state; None if not applicable."""
    if not _fastloop.HAVE_NUMBA or not 0 < n <= 63:
        return None
    exact_fn = oracle.exact_keep if oracle.mode == "ip" else None
    st = _fastloop.FastState(n, order, oracle, True, True,
                             f_rule=True, m_rule=True, m_cap=_BATCH_SCAN_CAP,
                             degree_weight=grading, exact_fn=exact_fn)
    if not st.ok:
        return None
    out: list[tuple[int, ...]] = []
    for lv in cands:
        if not st.drain(dot(grading, lv.plus)):
            return None
        a = st.normal_form(lv.plus)
        b = st.normal_form(lv.minus)
        if a is None or b is None:
            return None
        if a != b:
            if not st.add_generator(lv.v):
                return None
            out.append(lv.v)
    return out
