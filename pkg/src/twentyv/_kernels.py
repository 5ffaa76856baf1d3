"""Hot loops for exhaustive enumeration.

Each kernel is written once in plain Python over numpy arrays.  When numba
is importable and ``TWENTYV_DISABLE_NUMBA`` is unset (or "0"), the same
functions are compiled with ``@njit``; otherwise the interpreted versions
run unchanged.
"""

import os

import numpy as np

_flag = os.environ.get("TWENTYV_DISABLE_NUMBA", "0").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:  # pragma: no cover - depends on the environment
    if DISABLED:
        raise ImportError
    from numba import njit as _njit

    NUMBA = True
except ImportError:  # pragma: no cover
    NUMBA = False

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


def backend():
    return "numba" if NUMBA else "python"


def _popcount3(code):
    return (code & 1) + ((code >> 1) & 1) + ((code >> 2) & 1)


_popcount3_c = _njit(cache=True)(_popcount3)


def _dfs(w_src, nw_src, n_src, in_fix, out_fix, meas_idx, meas_rule, store, codes_out, hist):
    """Backtracking over out-codes of every vertex in raster order.

    in_fix[v, 0..2] / out_fix[v, 0..2] hold fixed external bits or -1.
    ``meas_idx`` lists the vertices scanned for the refined statistic in
    scan order; ``meas_rule`` 0 reads the W input as the channel, 1 reads
    the S output.  Returns the number of configurations.
    """
    nv = w_src.shape[0]
    codes = np.zeros(nv, dtype=np.int64)
    insum = np.zeros(nv, dtype=np.int64)
    win = np.zeros(nv, dtype=np.int64)
    nxt = np.zeros(nv, dtype=np.int64)
    count = 0
    pos = 0
    nxt[0] = 0
    while pos >= 0:
        if pos == nv:
            # a complete configuration
            k = 0
            ch = 0
            for j in range(meas_idx.shape[0]):
                v = meas_idx[j]
                if insum[v] > 0:
                    k = meas_idx.shape[0] - j
                    if meas_rule == 0:
                        ch = win[v]
                    else:
                        ch = codes[v] & 1
                    break
            hist[k, ch] += 1
            if store:
                for j in range(nv):
                    codes_out[count, j] = codes[j]
            count += 1
            pos -= 1
            continue
        v = pos
        if nxt[v] == 0:
            # entering this vertex fresh: compute inputs
            if w_src[v] >= 0:
                a = (codes[w_src[v]] >> 2) & 1
            else:
                a = in_fix[v, 0]
            if nw_src[v] >= 0:
                b = (codes[nw_src[v]] >> 1) & 1
            else:
                b = in_fix[v, 1]
            if n_src[v] >= 0:
                c = codes[n_src[v]] & 1
            else:
                c = in_fix[v, 2]
            win[v] = a
            insum[v] = a + b + c
        found = False
        cand = nxt[v]
        while cand < 8:
            code = cand
            cand += 1
            if _popcount3_c(code) != insum[v]:
                continue
            ok = True
            for t in range(3):
                f = out_fix[v, t]
                if f >= 0 and ((code >> (2 - t)) & 1) != f:
                    ok = False
            if ok:
                found = True
                codes[v] = code
                break
        if found:
            nxt[v] = cand
            pos += 1
            if pos < nv:
                nxt[pos] = 0
        else:
            nxt[v] = 0
            pos -= 1
    return count


dfs = _njit(cache=True)(_dfs)


def python_dfs():
    """The interpreted kernel, regardless of the numba flag (used by benchmarks)."""
    import types

    glb = dict(_dfs.__globals__)
    glb["_popcount3_c"] = _popcount3
    return types.FunctionType(_dfs.__code__, glb, "_dfs_py")
