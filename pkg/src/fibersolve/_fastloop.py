"""Compiled inner loop for the completion procedure.

Mirrors the pure-Python engine exactly: same pair selection (smallest
degree first, FIFO within a degree), same creation-time filters, same
chain-criterion guards, same normal-form strategy (first matching reducer
in insertion order, largest valid multiple).  Everything lives in int64;
the kernel bails out (status flag) before any value could overflow, and
callers fall back to the Python loop, which computes with Python ints.

Exact truncation cannot run inside the kernel (deciding F(nu - z) != {}
needs the whole solver), so in that mode the kernel pauses whenever a new
generator's pair batch passes the linear filters, hands the candidate
joins back to the caller, and resumes with the survivors (status 2 /
MODE_FILTERED round trip).  Pairs are still created and filtered in the
same order as the Python engine.

The optional creation-time rules (`f_rule`, `m_rule`) drop critical pairs
that a kept pair makes redundant (equal or dominating positive-part join).
They can change the raw generator list, never the reduced basis, so the
drivers only switch them on for runs whose reported sizes are reduced.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


# Scalar block indices (state carried across kernel calls).
S_COUNT = 0     # generators stored
S_HSIZE = 1     # pairs in the heap
S_SEQ = 2       # global pair sequence number (FIFO tie-break)
S_EPOCH = 3     # current epoch (bumps when the popped degree changes)
S_HAVEDEG = 4   # 1 once a pair has been popped
S_CURDEG = 5    # degree of the last popped pair
S_STATUS = 6    # 0 ok, 1 overflow bail-out, 2 pair batch awaits the exact filter
S_MAXABS = 7    # largest |entry| over all generators
S_RESUME = 8    # after MODE_FILTERED: 0 return, 1 keep running, 2 keep draining
S_NSCALARS = 9

MODE_RUN = 0       # process pairs until the heap is empty
MODE_DRAIN = 1     # process pairs while top degree <= limit_deg
MODE_ADD = 2       # add the generator in xrow (directed already)
MODE_NF = 3        # xrow <- normal form of xrow
MODE_FILTERED = 4  # ingest the filtered batch in fcand, then resume

_FNV_OFFSET = np.int64(-3750763034362895579)
_FNV_PRIME = np.int64(1099511628211)
_GOLDEN = np.int64(-7046029254386353131)


@njit(cache=True)
def _row_hash(vecs, idx, n):
    h = _FNV_OFFSET
    for t in range(n):
        h = (h ^ (vecs[idx, t] + _GOLDEN)) * _FNV_PRIME
    return h


@njit(cache=True)
def _vec_hash(x, n):
    h = _FNV_OFFSET
    for t in range(n):
        h = (h ^ (x[t] + _GOLDEN)) * _FNV_PRIME
    return h


@njit(cache=True)
def _dir_sign(r, n, kind, has_w, w):
    """+1 when the positive part of r is the larger side, else -1.

    Comparing r+ against r- under the order reduces to sign tests on r
    because every component of the key is additive.
    """
    if has_w:
        s = np.int64(0)
        for t in range(n):
            s += w[t] * r[t]
        if s > 0:
            return 1
        if s < 0:
            return -1
    if kind == 1:  # degrevlex: total degree, then reversed coordinates negated
        s = np.int64(0)
        for t in range(n):
            s += r[t]
        if s > 0:
            return 1
        if s < 0:
            return -1
        for t in range(n - 1, -1, -1):
            if r[t] != 0:
                return 1 if r[t] < 0 else -1
    else:  # lex
        for t in range(n):
            if r[t] != 0:
                return 1 if r[t] > 0 else -1
    return 0


@njit(cache=True)
def _nf_inplace(vecs, plus, masks, count, cur, n, abs_limit, maxabs):
    """Reduce cur in place; returns 0, or 1 on potential overflow."""
    while True:
        xmask = np.int64(0)
        for t in range(n):
            if cur[t] > 0:
                xmask |= np.int64(1) << t
        found = -1
        for i in range(count):
            if masks[i] & ~xmask:
                continue
            ok = True
            for t in range(n):
                if plus[i, t] > cur[t]:
                    ok = False
                    break
            if ok:
                found = i
                break
        if found < 0:
            return 0
        steps = np.int64(1) << 62
        for t in range(n):
            p = plus[found, t]
            if p > 0:
                q = cur[t] // p
                if q < steps:
                    steps = q
        if steps > 0 and maxabs > 0 and steps > (np.int64(1) << 61) // maxabs:
            return 1
        big = np.int64(0)
        for t in range(n):
            cur[t] -= steps * vecs[found, t]
            if cur[t] > big:
                big = cur[t]
        if big >= abs_limit:
            return 1


@njit(cache=True)
def _chain_skip(vecs, plus, masks, epochs, count, i, j, z, zmask, n, epoch):
    if epochs[i] == epoch or epochs[j] == epoch:
        return False
    for c in range(count):
        if c == i or c == j or epochs[c] >= epoch:
            continue
        if masks[c] & ~zmask:
            continue
        ok = True
        for t in range(n):
            if plus[c, t] > z[t]:
                ok = False
                break
        if not ok:
            continue
        g1 = True
        for t in range(n):
            a = plus[i, t]
            b = plus[c, t]
            m = a if a > b else b
            if m != z[t]:
                g1 = False
                break
        if g1:
            continue
        g2 = True
        for t in range(n):
            a = plus[c, t]
            b = plus[j, t]
            m = a if a > b else b
            if m != z[t]:
                g2 = False
                break
        if g2:
            continue
        return True
    return False


@njit(cache=True)
def drive(vecs, plus, masks, epochs,
          hdeg, hseq, hi, hj, htab,
          sc,
          kind, has_w, w,
          rays, ray_bounds,
          has_dw, dw,
          pairc, chainc, frule, mrule, mcap,
          abs_limit,
          exactm, fcand,
          mode, limit_deg, xrow):
    """State-machine entry point; see MODE_* above.

    All arrays may be reallocated on growth, so the caller must rebind
    from the returned tuple after every call.  Scalars travel in sc.  The
    last two returned arrays are the pending pair batch (generator index,
    join row) when status is 2, empty otherwise.
    """
    n = vecs.shape[1]
    count = sc[S_COUNT]
    hsize = sc[S_HSIZE]
    seq = sc[S_SEQ]
    epoch = sc[S_EPOCH]
    tcap = htab.shape[0]

    e_cand = np.empty(0, dtype=np.int64)
    e_join = np.empty((0, n), dtype=np.int64)

    # Batch scratch for pair creation, grown on demand.
    scratch_cap = 0
    bz = np.empty((0, n), dtype=np.int64)
    bdeg = np.empty(0, dtype=np.int64)
    bi = np.empty(0, dtype=np.int64)
    kidx = np.empty(0, dtype=np.int64)
    fcap = 0
    ftab = np.empty(0, dtype=np.int64)

    pending = mode == MODE_ADD  # one generator to ingest before processing
    process = mode == MODE_RUN or mode == MODE_DRAIN
    if mode == MODE_NF:
        if _nf_inplace(vecs, plus, masks, count, xrow, n, abs_limit, sc[S_MAXABS]):
            sc[S_STATUS] = 1
        return vecs, plus, masks, epochs, hdeg, hseq, hi, hj, htab, e_cand, e_join

    newvec = np.empty(n, dtype=np.int64)
    if pending:
        for t in range(n):
            newvec[t] = xrow[t]

    t_new = 0
    k = 0
    finish = False
    if mode == MODE_FILTERED:
        # second half of an interrupted ingestion: the caller kept fcand
        sc[S_STATUS] = 0
        t_new = count - 1
        k = fcand.shape[0]
        if k + 1 > scratch_cap:
            scratch_cap = 64 if k * 2 < 64 else k * 2
            bz = np.empty((scratch_cap, n), dtype=np.int64)
            bdeg = np.empty(scratch_cap, dtype=np.int64)
            bi = np.empty(scratch_cap, dtype=np.int64)
            kidx = np.empty(scratch_cap, dtype=np.int64)
        for p in range(k):
            i = fcand[p]
            bi[p] = i
            deg = np.int64(0)
            for t in range(n):
                a = plus[i, t]
                b = plus[t_new, t]
                zt = a if a > b else b
                bz[p, t] = zt
                if has_dw:
                    deg += dw[t] * zt
                else:
                    deg += zt
            bdeg[p] = deg
        finish = True
        rsm = sc[S_RESUME]
        process = rsm != 0
        if rsm == 2:
            mode = MODE_DRAIN
        elif rsm == 1:
            mode = MODE_RUN

    while True:
        if finish:
            finish = False
            # ---- filter and push the prepared batch (bi/bz/bdeg, k pairs) ----
            if k > 0 and frule:
                # drop later batch pairs with an identical join
                need = 4 * k
                fc = fcap if fcap > 64 else 64
                while fc < need:
                    fc *= 2
                if fc != fcap:
                    fcap = fc
                    ftab = np.empty(fcap, dtype=np.int64)
                for s2 in range(fcap):
                    ftab[s2] = -1
                kk = 0
                for p in range(k):
                    h3 = _FNV_OFFSET
                    for t in range(n):
                        h3 = (h3 ^ (bz[p, t] + _GOLDEN)) * _FNV_PRIME
                    s3 = h3 & (fcap - 1)
                    dup2 = False
                    while ftab[s3] >= 0:
                        q = ftab[s3]
                        same2 = True
                        for t in range(n):
                            if bz[q, t] != bz[p, t]:
                                same2 = False
                                break
                        if same2:
                            dup2 = True
                            break
                        s3 = (s3 + 1) & (fcap - 1)
                    if dup2:
                        continue
                    if kk != p:
                        for t in range(n):
                            bz[kk, t] = bz[p, t]
                        bdeg[kk] = bdeg[p]
                        bi[kk] = bi[p]
                    ftab[s3] = kk
                    kk += 1
                k = kk
            if k > 1 and mrule:
                # drop pairs whose join strictly dominates a kept one;
                # kept joins are scanned in ascending degree, capped
                ordidx = np.argsort(bdeg[:k], kind="mergesort")
                nkept = 0
                for p in range(k):
                    cur = ordidx[p]
                    dropped = False
                    bound = nkept if nkept < mcap else mcap
                    for q in range(bound):
                        prev = kidx[q]
                        if bdeg[prev] >= bdeg[cur]:
                            break
                        dom = True
                        for t in range(n):
                            if bz[prev, t] > bz[cur, t]:
                                dom = False
                                break
                        if dom:
                            dropped = True
                            break
                    if dropped:
                        bi[cur] = -1
                    else:
                        kidx[nkept] = cur
                        nkept += 1
                kk = 0
                for p in range(k):
                    if bi[p] < 0:
                        continue
                    if kk != p:
                        for t in range(n):
                            bz[kk, t] = bz[p, t]
                        bdeg[kk] = bdeg[p]
                        bi[kk] = bi[p]
                    kk += 1
                k = kk
            # push surviving pairs, batch order = ascending i
            if hsize + k > hdeg.shape[0]:
                hcap = hdeg.shape[0]
                while hcap < hsize + k:
                    hcap *= 2
                nd = np.empty(hcap, dtype=np.int64)
                ns = np.empty(hcap, dtype=np.int64)
                ni = np.empty(hcap, dtype=np.int64)
                nj = np.empty(hcap, dtype=np.int64)
                nd[:hsize] = hdeg[:hsize]
                ns[:hsize] = hseq[:hsize]
                ni[:hsize] = hi[:hsize]
                nj[:hsize] = hj[:hsize]
                hdeg, hseq, hi, hj = nd, ns, ni, nj
            for p in range(k):
                pos = hsize
                hdeg[pos] = bdeg[p]
                hseq[pos] = seq
                hi[pos] = bi[p]
                hj[pos] = t_new
                seq += 1
                hsize += 1
                while pos > 0:
                    par = (pos - 1) >> 1
                    if hdeg[par] > hdeg[pos] or (hdeg[par] == hdeg[pos] and hseq[par] > hseq[pos]):
                        hdeg[par], hdeg[pos] = hdeg[pos], hdeg[par]
                        hseq[par], hseq[pos] = hseq[pos], hseq[par]
                        hi[par], hi[pos] = hi[pos], hi[par]
                        hj[par], hj[pos] = hj[pos], hj[par]
                        pos = par
                    else:
                        break
            if not process:
                break
            continue

        if pending:
            pending = False
            # seen-set membership via open addressing on the row hash
            h = _vec_hash(newvec, n)
            slot = h & (tcap - 1)
            dup = False
            while htab[slot] != 0:
                cand = htab[slot] - 1
                same = True
                for t in range(n):
                    if vecs[cand, t] != newvec[t]:
                        same = False
                        break
                if same:
                    dup = True
                    break
                slot = (slot + 1) & (tcap - 1)
            if dup:
                if process:
                    continue
                break
            # grow generator arrays
            if count == vecs.shape[0]:
                cap = vecs.shape[0] * 2
                nv = np.empty((cap, n), dtype=np.int64)
                npl = np.empty((cap, n), dtype=np.int64)
                nm = np.empty(cap, dtype=np.int64)
                ne = np.empty(cap, dtype=np.int64)
                nv[:count] = vecs[:count]
                npl[:count] = plus[:count]
                nm[:count] = masks[:count]
                ne[:count] = epochs[:count]
                vecs, plus, masks, epochs = nv, npl, nm, ne
            t_new = count
            m = np.int64(0)
            big = np.int64(0)
            for t in range(n):
                v = newvec[t]
                vecs[t_new, t] = v
                p = v if v > 0 else 0
                plus[t_new, t] = p
                if p > 0:
                    m |= np.int64(1) << t
                a = v if v >= 0 else -v
                if a > big:
                    big = a
            if big >= abs_limit:
                sc[S_STATUS] = 1
                break
            if big > sc[S_MAXABS]:
                sc[S_MAXABS] = big
            masks[t_new] = m
            epochs[t_new] = epoch
            count += 1
            htab[slot] = t_new + 1
            # rebuild the hash table at 50% load
            if 2 * count >= tcap:
                tcap2 = tcap * 2
                nt = np.zeros(tcap2, dtype=np.int64)
                for idx in range(count):
                    h2 = _row_hash(vecs, idx, n)
                    s2 = h2 & (tcap2 - 1)
                    while nt[s2] != 0:
                        s2 = (s2 + 1) & (tcap2 - 1)
                    nt[s2] = idx + 1
                htab = nt
                tcap = tcap2

            # ---- create pairs (i, t_new) ----
            k = 0
            if t_new > 0:
                if t_new + 1 > scratch_cap:
                    scratch_cap = 64 if t_new * 2 < 64 else t_new * 2
                    bz = np.empty((scratch_cap, n), dtype=np.int64)
                    bdeg = np.empty(scratch_cap, dtype=np.int64)
                    bi = np.empty(scratch_cap, dtype=np.int64)
                    kidx = np.empty(scratch_cap, dtype=np.int64)
                for i in range(t_new):
                    if pairc and (masks[i] & m) == 0:
                        continue
                    keep = True
                    deg = np.int64(0)
                    for t in range(n):
                        a = plus[i, t]
                        b = plus[t_new, t]
                        zt = a if a > b else b
                        bz[k, t] = zt
                        if has_dw:
                            deg += dw[t] * zt
                        else:
                            deg += zt
                    for rr in range(rays.shape[0]):
                        s = np.int64(0)
                        for t in range(n):
                            s += rays[rr, t] * bz[k, t]
                        if s > ray_bounds[rr]:
                            keep = False
                            break
                    if keep:
                        bdeg[k] = deg
                        bi[k] = i
                        k += 1
                if exactm and k > 0:
                    # hand the batch joins to the caller for the exact test
                    pcand = np.empty(k, dtype=np.int64)
                    pjoin = np.empty((k, n), dtype=np.int64)
                    for p in range(k):
                        pcand[p] = bi[p]
                        for t in range(n):
                            pjoin[p, t] = bz[p, t]
                    sc[S_STATUS] = 2
                    sc[S_RESUME] = 0 if not process else (1 if mode == MODE_RUN else 2)
                    sc[S_COUNT] = count
                    sc[S_HSIZE] = hsize
                    sc[S_SEQ] = seq
                    sc[S_EPOCH] = epoch
                    return vecs, plus, masks, epochs, hdeg, hseq, hi, hj, htab, pcand, pjoin
            finish = True
            continue

        # ---- pair processing ----
        if not process or hsize == 0:
            break
        if mode == MODE_DRAIN and hdeg[0] > limit_deg:
            break
        deg = hdeg[0]
        i = hi[0]
        j = hj[0]
        hsize -= 1
        if hsize > 0:
            hdeg[0] = hdeg[hsize]
            hseq[0] = hseq[hsize]
            hi[0] = hi[hsize]
            hj[0] = hj[hsize]
            pos = 0
            while True:
                l = 2 * pos + 1
                r = l + 1
                small = pos
                if l < hsize and (hdeg[l] < hdeg[small] or (hdeg[l] == hdeg[small] and hseq[l] < hseq[small])):
                    small = l
                if r < hsize and (hdeg[r] < hdeg[small] or (hdeg[r] == hdeg[small] and hseq[r] < hseq[small])):
                    small = r
                if small == pos:
                    break
                hdeg[small], hdeg[pos] = hdeg[pos], hdeg[small]
                hseq[small], hseq[pos] = hseq[pos], hseq[small]
                hi[small], hi[pos] = hi[pos], hi[small]
                hj[small], hj[pos] = hj[pos], hj[small]
                pos = small
        if sc[S_HAVEDEG] == 0 or deg != sc[S_CURDEG]:
            sc[S_HAVEDEG] = 1
            sc[S_CURDEG] = deg
            epoch += 1
        z = np.empty(n, dtype=np.int64)
        zmask = np.int64(0)
        for t in range(n):
            a = plus[i, t]
            b = plus[j, t]
            zt = a if a > b else b
            z[t] = zt
            if zt > 0:
                zmask |= np.int64(1) << t
        if chainc and _chain_skip(vecs, plus, masks, epochs, count, i, j, z, zmask, n, epoch):
            continue
        nx = np.empty(n, dtype=np.int64)
        ny = np.empty(n, dtype=np.int64)
        for t in range(n):
            nx[t] = z[t] - vecs[i, t]
            ny[t] = z[t] - vecs[j, t]
        if _nf_inplace(vecs, plus, masks, count, nx, n, abs_limit, sc[S_MAXABS]):
            sc[S_STATUS] = 1
            break
        if _nf_inplace(vecs, plus, masks, count, ny, n, abs_limit, sc[S_MAXABS]):
            sc[S_STATUS] = 1
            break
        same = True
        for t in range(n):
            if nx[t] != ny[t]:
                same = False
                break
        if same:
            continue
        for t in range(n):
            newvec[t] = nx[t] - ny[t]
        sgn = _dir_sign(newvec, n, kind, has_w, w)
        if sgn < 0:
            for t in range(n):
                newvec[t] = -newvec[t]
        pending = True

    sc[S_COUNT] = count
    sc[S_HSIZE] = hsize
    sc[S_SEQ] = seq
    sc[S_EPOCH] = epoch
    return vecs, plus, masks, epochs, hdeg, hseq, hi, hj, htab, e_cand, e_join


class FastState:
    """Python handle for the kernel state; rebinds arrays after each call."""

    def __init__(self, n, order, oracle, pair_criterion, chain_criterion,
                 f_rule=False, m_rule=False, m_cap=4096, degree_weight=None,
                 exact_fn=None):
        self.n = n
        self.ok = HAVE_NUMBA and 0 < n <= 63 and (oracle.mode != "ip" or exact_fn is not None)
        if not self.ok:
            return
        rows = oracle.rows
        self.rays = np.array(rows, dtype=np.int64).reshape(len(rows), n)
        self.ray_bounds = np.array(oracle.bounds, dtype=np.int64).reshape(len(rows))
        self.kind = 1 if order.kind == "degrevlex" else 0
        if order.weight is not None:
            self.has_w = True
            self.w = np.array(order.weight, dtype=np.int64)
        else:
            self.has_w = False
            self.w = np.zeros(n, dtype=np.int64)
        if degree_weight is not None:
            self.has_dw = True
            self.dw = np.array(degree_weight, dtype=np.int64)
        else:
            self.has_dw = False
            self.dw = np.zeros(n, dtype=np.int64)
        scale = max(
            int(np.abs(self.rays).max()) if self.rays.size else 0,
            int(np.abs(self.w).max()) if self.has_w else 0,
            int(np.abs(self.dw).max()) if self.has_dw else 0,
            1,
        )
        self.abs_limit = np.int64(min(1 << 40, (1 << 61) // (scale * max(n, 1))))
        cap = 64
        self.vecs = np.zeros((cap, n), dtype=np.int64)
        self.plus = np.zeros((cap, n), dtype=np.int64)
        self.masks = np.zeros(cap, dtype=np.int64)
        self.epochs = np.zeros(cap, dtype=np.int64)
        self.hdeg = np.zeros(256, dtype=np.int64)
        self.hseq = np.zeros(256, dtype=np.int64)
        self.hi = np.zeros(256, dtype=np.int64)
        self.hj = np.zeros(256, dtype=np.int64)
        self.htab = np.zeros(256, dtype=np.int64)
        self.sc = np.zeros(S_NSCALARS, dtype=np.int64)
        self.sc[S_MAXABS] = 1
        self.pairc = pair_criterion
        self.chainc = chain_criterion
        self.frule = f_rule
        self.mrule = m_rule
        self.mcap = m_cap
        self.exactm = oracle.mode == "ip" and exact_fn is not None
        self.exact_fn = exact_fn
        self._x = np.zeros(n, dtype=np.int64)
        self._ecand = np.zeros(0, dtype=np.int64)
        self._pcand = self._ecand
        self._pjoin = np.zeros((0, n), dtype=np.int64)

    @property
    def status(self):
        return int(self.sc[S_STATUS])

    @property
    def count(self):
        return int(self.sc[S_COUNT])

    def _call(self, mode, limit_deg=0, xrow=None, fcand=None):
        if xrow is None:
            xrow = self._x
        if fcand is None:
            fcand = self._ecand
        out = drive(self.vecs, self.plus, self.masks, self.epochs,
                    self.hdeg, self.hseq, self.hi, self.hj, self.htab,
                    self.sc,
                    self.kind, self.has_w, self.w,
                    self.rays, self.ray_bounds,
                    self.has_dw, self.dw,
                    self.pairc, self.chainc, self.frule, self.mrule, self.mcap,
                    self.abs_limit,
                    self.exactm, fcand,
                    mode, limit_deg, xrow)
        (self.vecs, self.plus, self.masks, self.epochs,
         self.hdeg, self.hseq, self.hi, self.hj, self.htab) = out[:9]
        self._pcand = out[9]
        self._pjoin = out[10]

    def _step(self, mode, limit_deg=0, xrow=None):
        """One kernel call, serving exact-filter requests until it settles."""
        self._call(mode, limit_deg, xrow)
        while int(self.sc[S_STATUS]) == 2:
            fn = self.exact_fn
            keep = [int(i) for i, z in zip(self._pcand, self._pjoin)
                    if fn(tuple(int(v) for v in z))]
            self._call(MODE_FILTERED, limit_deg,
                       fcand=np.array(keep, dtype=np.int64))

    def add_generator(self, vec) -> bool:
        if max(abs(v) for v in vec) >= int(self.abs_limit):
            self.sc[S_STATUS] = 1
            return False
        x = np.array(vec, dtype=np.int64)
        self._step(MODE_ADD, 0, x)
        return self.status == 0

    def run(self) -> bool:
        self._step(MODE_RUN)
        return self.status == 0

    def drain(self, limit_deg) -> bool:
        self._step(MODE_DRAIN, int(limit_deg))
        return self.status == 0

    def min_degree(self):
        if int(self.sc[S_HSIZE]) == 0:
            return None
        return int(self.hdeg[0])

    def normal_form(self, x):
        if max(x, default=0) >= int(self.abs_limit):
            self.sc[S_STATUS] = 1
            return None
        row = np.array(x, dtype=np.int64)
        self._call(MODE_NF, 0, row)
        if self.status:
            return None
        return tuple(int(v) for v in row)

    def generators(self):
        k = self.count
        return [tuple(int(v) for v in self.vecs[t]) for t in range(k)]
