"""Hot loops with two interchangeable lanes.

Structure constants are stored pair-major: for labels ``0..L-1`` the row
for the pair ``(i, j)`` is ``idx[ptr[i*L+j] : ptr[i*L+j+1]]`` (sorted
output indices ``k``) with matching entries in ``val``. Everything here
works on those raw arrays so the same code serves hand-built rings and
the bulk SU(3) builder.

Each public function has a compiled lane (numba, parallel) and a plain
numpy/scipy lane. The compiled lane is used when numba imports and the
environment variable ``ORBIFUSION_PURE_NUMPY`` is unset or ``0``; pass
``use_numba`` explicitly to pin a lane (the benchmark and the lane
equality tests do). The lanes return identical results, the numpy lane
is just slower on large rings.
"""

from __future__ import annotations

import os

import numpy as np

PURE_ENV = "ORBIFUSION_PURE_NUMPY"

try:
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install-time choice
    HAS_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def numba_enabled(use_numba: bool | None = None) -> bool:
    """Resolve the active lane: explicit flag > env switch > availability."""
    if use_numba is not None:
        return bool(use_numba) and HAS_NUMBA
    if os.environ.get(PURE_ENV, "0") not in ("", "0"):
        return False
    return HAS_NUMBA


# ---------------------------------------------------------------------------
# associativity
# ---------------------------------------------------------------------------
#
# Scanning every bracketing of every triple costs a constant times the
# number of elementary products, which grows out of hand around three
# hundred labels. The scan below is still exhaustive: the set of
# elements a with (a x) y = a (x y) for all x, y is a linear subspace
# closed under the product (the left nucleus), so once a set G of basis
# elements is found whose left-bracketed words span the whole ring, the
# triples with first slot in G decide every other triple. Spanning is
# certified by a rank computation modulo a prime; a modular rank drop
# can only make G larger than necessary, never accept a bad table.

_SPAN_PRIME = 104857601  # 25 * 2^22 + 1
_SPAN_BLOCK = 512  # keeps blocked dot products inside int64


class _SpanBasis:
    """Fully reduced row basis modulo _SPAN_PRIME."""

    def __init__(self, L: int):
        self.rows = np.zeros((0, L), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def residual(self, vec: np.ndarray) -> np.ndarray:
        out = vec % _SPAN_PRIME
        for lo in range(0, self.rank, _SPAN_BLOCK):
            hi = min(lo + _SPAN_BLOCK, self.rank)
            coeff = out[self.pivots[lo:hi]]
            if coeff.any():
                out = (out - coeff @ self.rows[lo:hi]) % _SPAN_PRIME
        return out

    def insert(self, vec: np.ndarray) -> bool:
        """Adjoin vec; False when it is already in the span."""
        res = self.residual(vec)
        nz = np.nonzero(res)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(res[piv]), _SPAN_PRIME - 2, _SPAN_PRIME)
        row = res * inv % _SPAN_PRIME
        if self.rank:
            coeff = self.rows[:, piv]
            hit = np.nonzero(coeff)[0]
            if hit.size:
                self.rows[hit] = (
                    self.rows[hit] - coeff[hit, None] * row[None, :]
                ) % _SPAN_PRIME
        self.rows = np.vstack([self.rows, row[None, :]])
        self.pivots = np.append(self.pivots, piv)
        return True


def _right_mult_arrays(ptr, idx, val, L, g):
    """Triples of the right-multiplication operator v -> v * x_g."""
    starts = ptr[np.arange(L, dtype=np.int64) * L + g]
    counts = ptr[np.arange(L, dtype=np.int64) * L + g + 1] - starts
    total = int(counts.sum())
    offs = np.concatenate(([0], np.cumsum(counts)[:-1]))
    take = np.repeat(starts - offs, counts) + np.arange(total)
    rows = np.repeat(np.arange(L, dtype=np.int64), counts)
    cols = idx[take].astype(np.int64)
    vals = val[take].astype(np.int64) % _SPAN_PRIME
    return rows, cols, vals


def generating_set(ptr: np.ndarray, idx: np.ndarray, val: np.ndarray, L: int):
    """Greedy list of basis indices whose left-bracketed words span the ring.

    Starting from nothing, adjoin the lowest-index basis element outside
    the current span, then close the span under right multiplication by
    every generator chosen so far. Deterministic, and independent of any
    axiom the table may fail, since only the raw constants are read.
    """
    basis = _SpanBasis(L)
    gens: list[int] = []
    ops = []
    words: list[np.ndarray] = []
    pos: list[int] = []
    while basis.rank < L:
        for b in range(L):
            probe = np.zeros(L, dtype=np.int64)
            probe[b] = 1
            if basis.residual(probe).any():
                gens.append(b)
                ops.append(_right_mult_arrays(ptr, idx, val, L, b))
                pos.append(0)
                basis.insert(probe)
                words.append(probe)
                break
        moved = True
        while moved:
            moved = False
            for gi in range(len(gens)):
                rows, cols, vals = ops[gi]
                while pos[gi] < len(words):
                    w = words[pos[gi]]
                    pos[gi] += 1
                    out = np.zeros(L, dtype=np.int64)
                    np.add.at(out, cols, w[rows] * vals % _SPAN_PRIME)
                    out %= _SPAN_PRIME
                    if basis.insert(out):
                        words.append(out)
                        moved = True
    return gens


@njit(cache=True, parallel=True)
def _assoc_gen_count_nb(ptr, idx, val, L, g):  # pragma: no cover - compiled
    bad = np.zeros(L, dtype=np.int64)
    for j in prange(L):
        acc1 = np.zeros(L, dtype=np.int64)
        acc2 = np.zeros(L, dtype=np.int64)
        touched1 = np.empty(L, dtype=np.int64)
        touched2 = np.empty(L, dtype=np.int64)
        nbad = 0
        pgj0 = ptr[g * L + j]
        pgj1 = ptr[g * L + j + 1]
        for k in range(L):
            n1 = 0
            for t in range(pgj0, pgj1):
                m = idx[t]
                v = val[t]
                r = m * L + k
                for u in range(ptr[r], ptr[r + 1]):
                    l = idx[u]
                    if acc1[l] == 0:
                        touched1[n1] = l
                        n1 += 1
                    acc1[l] += v * val[u]
            n2 = 0
            rjk = j * L + k
            for t in range(ptr[rjk], ptr[rjk + 1]):
                m = idx[t]
                v = val[t]
                r = g * L + m
                for u in range(ptr[r], ptr[r + 1]):
                    l = idx[u]
                    if acc2[l] == 0:
                        touched2[n2] = l
                        n2 += 1
                    acc2[l] += v * val[u]
            for t in range(n1):
                l = touched1[t]
                if acc1[l] != acc2[l]:
                    nbad += 1
            for t in range(n2):
                l = touched2[t]
                if acc1[l] == 0 and acc2[l] != 0:
                    nbad += 1
            for t in range(n1):
                acc1[touched1[t]] = 0
            for t in range(n2):
                acc2[touched2[t]] = 0
        bad[j] = nbad
    return bad.sum()


@njit(cache=True)
def _assoc_gen_witness_nb(ptr, idx, val, L, g, out):  # pragma: no cover
    cap = out.shape[0]
    filled = 0
    acc1 = np.zeros(L, dtype=np.int64)
    acc2 = np.zeros(L, dtype=np.int64)
    touched1 = np.empty(L, dtype=np.int64)
    touched2 = np.empty(L, dtype=np.int64)
    union = np.empty(2 * L, dtype=np.int64)
    for j in range(L):
        pgj0 = ptr[g * L + j]
        pgj1 = ptr[g * L + j + 1]
        for k in range(L):
            n1 = 0
            for t in range(pgj0, pgj1):
                m = idx[t]
                v = val[t]
                r = m * L + k
                for u in range(ptr[r], ptr[r + 1]):
                    l = idx[u]
                    if acc1[l] == 0:
                        touched1[n1] = l
                        n1 += 1
                    acc1[l] += v * val[u]
            n2 = 0
            rjk = j * L + k
            for t in range(ptr[rjk], ptr[rjk + 1]):
                m = idx[t]
                v = val[t]
                r = g * L + m
                for u in range(ptr[r], ptr[r + 1]):
                    l = idx[u]
                    if acc2[l] == 0:
                        touched2[n2] = l
                        n2 += 1
                    acc2[l] += v * val[u]
            # emit in ascending l so both lanes produce the same
            # sequence and a capped prefix is lane-independent
            nu = 0
            for t in range(n1):
                union[nu] = touched1[t]
                nu += 1
            for t in range(n2):
                l = touched2[t]
                if acc1[l] == 0:
                    union[nu] = l
                    nu += 1
            if nu > 0:
                for l in np.sort(union[:nu]):
                    if acc1[l] != acc2[l] and filled < cap:
                        out[filled, 0] = g
                        out[filled, 1] = j
                        out[filled, 2] = k
                        out[filled, 3] = l
                        out[filled, 4] = acc1[l]
                        out[filled, 5] = acc2[l]
                        filled += 1
            for t in range(n1):
                acc1[touched1[t]] = 0
            for t in range(n2):
                acc2[touched2[t]] = 0
            if filled == cap:
                return filled
    return filled


def _assoc_gen_np(ptr, idx, val, L, g, cap):
    # Both bracketings of (g, j, k) at once, as two sparse products over
    # the same middle index: rg[x, m] = N_{gx}^m serves as the left
    # factor of the first and, read as (m, l), the right factor of the
    # second. Keys linearize (j, k, l) so the two sides compare directly.
    import scipy.sparse as sp

    lo = ptr[g * L]
    hi = ptr[(g + 1) * L]
    rg = sp.csr_matrix(
        (
            val[lo:hi].astype(np.int64),
            idx[lo:hi].astype(np.int64),
            (ptr[g * L : (g + 1) * L + 1] - lo).astype(np.int64),
        ),
        shape=(L, L),
    )
    counts = np.diff(ptr)
    pairs = np.repeat(np.arange(L * L, dtype=np.int64), counts)
    flat = sp.csr_matrix(
        (
            val.astype(np.int64),
            ((pairs % L) * L + idx).astype(np.int64),
            ptr[::L].astype(np.int64),
        ),
        shape=(L, L * L),
    )
    full = sp.csr_matrix(
        (val.astype(np.int64), idx.astype(np.int64), ptr.astype(np.int64)),
        shape=(L * L, L),
    )
    lhs = (rg @ flat).tocoo()
    rhs = (full @ rg).tocoo()
    lkey = lhs.row.astype(np.int64) * (L * L) + lhs.col.astype(np.int64)
    rkey = rhs.row.astype(np.int64) * L + rhs.col.astype(np.int64)
    lorder = np.argsort(lkey, kind="stable")
    rorder = np.argsort(rkey, kind="stable")
    lkey, lval = lkey[lorder], lhs.data[lorder]
    rkey, rval = rkey[rorder], rhs.data[rorder]
    if len(lkey) == len(rkey) and np.array_equal(lkey, rkey) and np.array_equal(lval, rval):
        return True, np.zeros((0, 6), dtype=np.int64)
    allk = np.union1d(lkey, rkey)
    lfull = np.zeros(len(allk), dtype=np.int64)
    rfull = np.zeros(len(allk), dtype=np.int64)
    lfull[np.searchsorted(allk, lkey)] = lval
    rfull[np.searchsorted(allk, rkey)] = rval
    badpos = np.nonzero(lfull != rfull)[0][:cap]
    wit = np.zeros((len(badpos), 6), dtype=np.int64)
    keys = allk[badpos]
    wit[:, 0] = g
    wit[:, 1] = keys // (L * L)
    wit[:, 2] = (keys // L) % L
    wit[:, 3] = keys % L
    wit[:, 4] = lfull[badpos]
    wit[:, 5] = rfull[badpos]
    return False, wit


def associativity_violations(
    ptr: np.ndarray,
    idx: np.ndarray,
    val: np.ndarray,
    L: int,
    *,
    cap: int = 20,
    use_numba: bool | None = None,
):
    """Associativity scan, exhaustive through the generator reduction.

    Returns ``(ok, witnesses)`` where witnesses is an ``(n, 6)`` int64
    array of rows ``(i, j, k, l, lhs, rhs)`` with ``n <= cap``; lhs and
    rhs are the two bracketings of the product x_i x_j x_k at output
    x_l. Only triples whose first slot is in the certified generating
    set are scanned, which decides all the rest, so every witness row
    has a generator first. A clean scan means no quadruple anywhere
    violates associativity.
    """
    gens = generating_set(ptr, idx, val, L)
    nb = numba_enabled(use_numba)
    found: list[np.ndarray] = []
    room = cap
    for g in gens:
        if room <= 0:
            break
        if nb:
            total = _assoc_gen_count_nb(ptr, idx, val, np.int64(L), np.int64(g))
            if total:
                out = np.zeros((room, 6), dtype=np.int64)
                filled = _assoc_gen_witness_nb(
                    ptr, idx, val, np.int64(L), np.int64(g), out
                )
                found.append(out[: int(filled)])
                room -= int(filled)
        else:
            ok, wit = _assoc_gen_np(ptr, idx, val, L, g, room)
            if not ok:
                found.append(wit)
                room -= len(wit)
    if not found:
        return True, np.zeros((0, 6), dtype=np.int64)
    return False, np.vstack(found)


# ---------------------------------------------------------------------------
# bulk SU(3) table construction
# ---------------------------------------------------------------------------
#
# Candidates lam + w + delta are folded into the level alcove by the
# shifted affine reflections at height h = level + 3. In shifted
# coordinates (x, y) = (a+1, b+1) the walls are x = 0, y = 0 and
# x + y = h; each reflection flips the sign, a wall hit kills the term.

@njit(cache=True, parallel=True)
def _su3_cube_nb(L, h, la, lb, wflat, woff, pick):  # pragma: no cover
    cube = np.zeros((L, L, L), dtype=np.int32)
    for p in prange(L * L):
        i = p // L
        j = p % L
        if i > j:
            continue
        # expand over the smaller weight system of the two factors
        if pick[j] <= pick[i]:
            lam, mu = i, j
        else:
            lam, mu = j, i
        for t in range(woff[mu], woff[mu + 1]):
            x = la[lam] + wflat[t, 0] + 1
            y = lb[lam] + wflat[t, 1] + 1
            m = wflat[t, 2]
            s = 1
            while True:
                if x == 0 or y == 0 or x + y == h:
                    s = 0
                    break
                if x < 0:
                    x, y = -x, x + y
                    s = -s
                elif y < 0:
                    x, y = x + y, -y
                    s = -s
                elif x + y > h:
                    x, y = h - y, h - x
                    s = -s
                else:
                    break
            if s != 0:
                a = x - 1
                b = y - 1
                cube[i, j, (a + b) * (a + b + 1) // 2 + a] += s * m
    return cube


def _su3_cube_np(L, h, la, lb, wflat, woff, pick):
    cube = np.zeros((L, L, L), dtype=np.int32)
    wa = wflat[:, 0].astype(np.int64)
    wb = wflat[:, 1].astype(np.int64)
    wm = wflat[:, 2].astype(np.int64)
    counts = np.diff(woff)
    for i in range(L):
        js = np.arange(i, L)
        lam = np.where(pick[js] <= pick[i], js, i)
        mu = np.where(pick[js] <= pick[i], i, js)
        # one flat candidate batch for every pair (i, j >= i)
        reps = counts[mu]
        jj = np.repeat(js, reps)
        lamr = np.repeat(lam, reps)
        tsel = np.concatenate([np.arange(woff[m], woff[m + 1]) for m in mu])
        x = la[lamr] + wa[tsel] + 1
        y = lb[lamr] + wb[tsel] + 1
        sgn = np.ones(len(tsel), dtype=np.int64)
        while True:
            on_wall = (sgn != 0) & ((x == 0) | (y == 0) | (x + y == h))
            sgn[on_wall] = 0
            live = sgn != 0
            m1 = live & (x < 0)
            m2 = live & ~m1 & (y < 0)
            m3 = live & ~m1 & ~m2 & (x + y > h)
            if not (m1.any() or m2.any() or m3.any()):
                break
            x1 = x[m1]
            x[m1], y[m1] = -x1, x1 + y[m1]
            y2 = y[m2]
            x[m2], y[m2] = x[m2] + y2, -y2
            x3 = x[m3].copy()
            x[m3], y[m3] = h - y[m3], h - x3
            sgn[m1 | m2 | m3] *= -1
        live = sgn != 0
        a = x[live] - 1
        b = y[live] - 1
        nu = (a + b) * (a + b + 1) // 2 + a
        np.add.at(
            cube,
            (np.full(live.sum(), i), jj[live], nu),
            (sgn[live] * wm[tsel][live]).astype(np.int32),
        )
    return cube


def su3_cube(
    L: int,
    h: int,
    la: np.ndarray,
    lb: np.ndarray,
    wflat: np.ndarray,
    woff: np.ndarray,
    *,
    use_numba: bool | None = None,
) -> np.ndarray:
    """Dense cube of level-truncated SU(3) constants, all pairs at once.

    ``la``/``lb`` are the Dynkin labels of the alcove weights in label
    order, ``wflat``/``woff`` the flattened classical weight systems
    (rows ``(wa, wb, mult)``). The upper triangle ``i <= j`` is computed
    and mirrored, products here commute.
    """
    pick = np.diff(woff)
    if numba_enabled(use_numba):
        cube = _su3_cube_nb(
            np.int64(L),
            np.int64(h),
            la.astype(np.int64),
            lb.astype(np.int64),
            wflat.astype(np.int64),
            woff.astype(np.int64),
            pick.astype(np.int64),
        )
    else:
        cube = _su3_cube_np(
            L,
            h,
            la.astype(np.int64),
            lb.astype(np.int64),
            np.asarray(wflat),
            np.asarray(woff),
            pick,
        )
    upper = np.swapaxes(cube, 0, 1)
    ii, jj = np.tril_indices(L, k=-1)
    cube[ii, jj, :] = upper[ii, jj, :]
    return cube


def cube_to_csr(cube: np.ndarray):
    """Compact a dense (L, L, L) cube into the pair-major layout."""
    L = cube.shape[0]
    ii, jj, kk = np.nonzero(cube)
    vals = cube[ii, jj, kk].astype(np.int64)
    pair = ii.astype(np.int64) * L + jj.astype(np.int64)
    ptr = np.zeros(L * L + 1, dtype=np.int64)
    np.add.at(ptr, pair + 1, 1)
    np.cumsum(ptr, out=ptr)
    # nonzero already yields lexicographic (i, j, k) order
    return ptr, kk.astype(np.int32), vals
