"""Sparse Gaussian elimination on unit pivots.

Columns are swept in their natural order.  In each column the shortest row
holding a unit (``+-1`` over the integers, any nonzero residue modulo ``p``)
becomes the pivot; the column is cleared and the pivot row and column are
dropped.  On cube matrices this order fills in far less than greedy
minimum-degree choices.  Every
pivot contributes an invariant factor 1.  What is left (the residual) holds
no further unit pivot and is handed to a dense Smith form routine.

``_eliminate_numba`` is the compiled kernel; ``eliminate_python`` is the
dict-based fallback, also used when int64 coefficients would overflow.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

COEFF_LIMIT = 1 << 40


@njit
def _find(cols, start, length, c):
    lo = start
    hi = start + length - 1
    while lo <= hi:
        mid = (lo + hi) >> 1
        x = cols[mid]
        if x == c:
            return mid
        if x < c:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


@njit
def _eliminate_numba(nrows, ncols, indptr, indices, data, p, limit):
    nnz = indptr[nrows]
    # row pool
    rcap_total = 2 * nnz + 16
    rp_cols = np.empty(rcap_total, dtype=np.int64)
    rp_vals = np.empty(rcap_total, dtype=np.int64)
    rp_cols[:nnz] = indices
    rp_vals[:nnz] = data
    rp_end = nnz
    row_start = indptr[:nrows].copy()
    row_len = indptr[1:] - indptr[:-1]
    row_cap = row_len.copy()
    row_dead = np.zeros(nrows, dtype=np.bool_)

    # column lists of candidate rows (may hold stale entries)
    col_count = np.zeros(ncols, dtype=np.int64)
    for k in range(nnz):
        col_count[indices[k]] += 1
    ccap_total = 2 * nnz + 16
    cp = np.empty(ccap_total, dtype=np.int64)
    col_start = np.empty(ncols, dtype=np.int64)
    col_len = np.zeros(ncols, dtype=np.int64)
    col_cap = col_count.copy()
    acc = 0
    for c in range(ncols):
        col_start[c] = acc
        acc += col_count[c]
    cp_end = acc
    for r in range(nrows):
        for k in range(indptr[r], indptr[r + 1]):
            c = indices[k]
            cp[col_start[c] + col_len[c]] = r
            col_len[c] += 1
    col_dead = np.zeros(ncols, dtype=np.bool_)

    stamp = np.zeros(nrows, dtype=np.int64)
    tick = 1
    buf_c = np.empty(ncols, dtype=np.int64)
    buf_v = np.empty(ncols, dtype=np.int64)
    cand = np.empty(nrows, dtype=np.int64)

    npiv = 0
    overflow = False
    progress = True
    while progress:
        # sweep columns in their natural order; repeat while a sweep finds
        # new pivots (over the integers a non-unit entry may become a unit)
        progress = False
        for c in range(ncols):
            if col_dead[c] or col_count[c] == 0:
                continue
            # collect live rows holding column c; choose the shortest unit row
            tick += 1
            ncand = 0
            best = -1
            bestlen = 1 << 62
            bestval = 0
            s0 = col_start[c]
            for k in range(col_len[c]):
                r2 = cp[s0 + k]
                if row_dead[r2] or stamp[r2] == tick:
                    continue
                stamp[r2] = tick
                pos = _find(rp_cols, row_start[r2], row_len[r2], c)
                if pos < 0:
                    continue
                cand[ncand] = r2
                ncand += 1
                val = rp_vals[pos]
                unit = (val != 0) if p > 0 else (val == 1 or val == -1)
                if unit and row_len[r2] < bestlen:
                    best = r2
                    bestlen = row_len[r2]
                    bestval = val
            for k in range(ncand):
                cp[s0 + k] = cand[k]
            col_len[c] = ncand
            if best < 0:
                continue
            progress = True
            r = best
            if p > 0:
                inv = 1
                b = bestval % p
                e = p - 2
                while e > 0:
                    if e & 1:
                        inv = (inv * b) % p
                    b = (b * b) % p
                    e >>= 1
            else:
                inv = bestval
            ps = row_start[r]
            pl = row_len[r]
            for k in range(ncand):
                r2 = cand[k]
                if r2 == r:
                    continue
                pos = _find(rp_cols, row_start[r2], row_len[r2], c)
                a = rp_vals[pos]
                f = (a * inv) % p if p > 0 else a * inv
                # row r2 <- row r2 - f * row r
                i1 = row_start[r2]
                e1 = i1 + row_len[r2]
                i2 = ps
                e2 = ps + pl
                m = 0
                while i1 < e1 or i2 < e2:
                    if i2 >= e2 or (i1 < e1 and rp_cols[i1] < rp_cols[i2]):
                        buf_c[m] = rp_cols[i1]
                        buf_v[m] = rp_vals[i1]
                        m += 1
                        i1 += 1
                    elif i1 >= e1 or rp_cols[i2] < rp_cols[i1]:
                        cc = rp_cols[i2]
                        nv = -f * rp_vals[i2]
                        if p > 0:
                            nv %= p
                        elif nv > limit or nv < -limit:
                            overflow = True
                        if nv != 0:
                            buf_c[m] = cc
                            buf_v[m] = nv
                            m += 1
                            col_count[cc] += 1
                            if col_len[cc] == col_cap[cc]:
                                newcap = 2 * col_cap[cc] + 4
                                if cp_end + newcap > cp.shape[0]:
                                    grown = np.empty(2 * (cp_end + newcap), dtype=np.int64)
                                    grown[:cp_end] = cp[:cp_end]
                                    cp = grown
                                cp[cp_end:cp_end + col_len[cc]] = cp[col_start[cc]:col_start[cc] + col_len[cc]]
                                col_start[cc] = cp_end
                                col_cap[cc] = newcap
                                cp_end += newcap
                            cp[col_start[cc] + col_len[cc]] = r2
                            col_len[cc] += 1
                        i2 += 1
                    else:
                        cc = rp_cols[i1]
                        nv = rp_vals[i1] - f * rp_vals[i2]
                        if p > 0:
                            nv %= p
                        elif nv > limit or nv < -limit:
                            overflow = True
                        if nv != 0:
                            buf_c[m] = cc
                            buf_v[m] = nv
                            m += 1
                        else:
                            col_count[cc] -= 1
                        i1 += 1
                        i2 += 1
                if overflow:
                    return npiv, row_dead, col_dead, row_start, row_len, rp_cols, rp_vals, True
                if m > row_cap[r2]:
                    newcap = 2 * m
                    if rp_end + newcap > rp_cols.shape[0]:
                        size = 2 * (rp_end + newcap)
                        g1 = np.empty(size, dtype=np.int64)
                        g2 = np.empty(size, dtype=np.int64)
                        g1[:rp_end] = rp_cols[:rp_end]
                        g2[:rp_end] = rp_vals[:rp_end]
                        rp_cols = g1
                        rp_vals = g2
                        ps = row_start[r]
                    row_start[r2] = rp_end
                    row_cap[r2] = newcap
                    rp_end += newcap
                s2 = row_start[r2]
                rp_cols[s2:s2 + m] = buf_c[:m]
                rp_vals[s2:s2 + m] = buf_v[:m]
                row_len[r2] = m
            # retire pivot row and column
            for k in range(ps, ps + pl):
                cc = rp_cols[k]
                if cc != c:
                    col_count[cc] -= 1
            row_dead[r] = True
            col_dead[c] = True
            col_count[c] = 0
            npiv += 1
    return npiv, row_dead, col_dead, row_start, row_len, rp_cols, rp_vals, overflow


def eliminate_python(nrows, ncols, entries, p=0):
    """Dict-based version of the unit-pivot elimination, same pivot order.

    ``entries`` maps ``(row, col)`` to a nonzero int.  Returns the pivot count
    and the residual as a dict of rows ``{row: {col: value}}``.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in entries.items():
        if p:
            v %= p
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, set()).add(r)
    npiv = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols):
            rs = cols.get(c)
            if not rs:
                continue
            units = [r for r in rs if (rows[r][c] != 0 if p else abs(rows[r][c]) == 1)]
            if not units:
                continue
            best = min(units, key=lambda r: (len(rows[r]), r))
            prow = rows.pop(best)
            inv = pow(prow[c], p - 2, p) if p else prow[c]
            for cc in prow:
                cols[cc].discard(best)
            for r2 in list(cols[c]):
                row = rows[r2]
                f = row[c] * inv
                if p:
                    f %= p
                for cc, pv in prow.items():
                    nv = row.get(cc, 0) - f * pv
                    if p:
                        nv %= p
                    if nv:
                        if cc not in row:
                            cols.setdefault(cc, set()).add(r2)
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
                        cols[cc].discard(r2)
            del cols[c]
            npiv += 1
            progress = True
    return npiv, {r: row for r, row in rows.items() if row}


def to_csr(nrows, rr, cc, vv, p=0):
    """Sorted, duplicate-free CSR arrays from COO input (values as int64)."""
    rr = np.asarray(rr, dtype=np.int64)
    cc = np.asarray(cc, dtype=np.int64)
    vv = np.asarray(vv, dtype=np.int64)
    if p:
        vv = vv % p
    if rr.size:
        order = np.lexsort((cc, rr))
        rr, cc, vv = rr[order], cc[order], vv[order]
        key_change = np.ones(rr.size, dtype=bool)
        key_change[1:] = (rr[1:] != rr[:-1]) | (cc[1:] != cc[:-1])
        starts = np.flatnonzero(key_change)
        vv = np.add.reduceat(vv, starts)
        rr, cc = rr[starts], cc[starts]
        if p:
            vv = vv % p
        keep = vv != 0
        rr, cc, vv = rr[keep], cc[keep], vv[keep]
    indptr = np.zeros(nrows + 1, dtype=np.int64)
    np.add.at(indptr, rr + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, cc, vv


def eliminate_numba(nrows, ncols, rr, cc, vv, p=0):
    """Run the compiled kernel; returns ``(pivots, residual rows)`` or None on overflow."""
    indptr, indices, data = to_csr(nrows, rr, cc, vv, p)
    npiv, row_dead, col_dead, rstart, rlen, rcols, rvals, overflow = _eliminate_numba(
        nrows, ncols, indptr, indices, data, p, COEFF_LIMIT
    )
    if overflow:
        return None
    residual: dict[int, dict[int, int]] = {}
    for r in np.flatnonzero(~row_dead):
        s, ln = rstart[r], rlen[r]
        if ln:
            residual[int(r)] = {int(c): int(v) for c, v in zip(rcols[s:s + ln], rvals[s:s + ln])}
    return int(npiv), residual
