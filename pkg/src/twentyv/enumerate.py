"""Exact counting, weighted partition functions, refined statistics and exact sampling."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .caps import cap
from .errors import DegenerateSpectral, IndexOutOfRange, SizeCapExceeded
from .lattice import (CLASS_BY_CODE, PathConfig, TriangleDomain, config_from_outcodes,
                      triangle_vertices)
from .polys import RefinedPoly
from .weights import SpectralParams, TwentyVWeights, spectral_a2, spectral_a3, spectral_omegas

HORIZONTAL, DIAGONAL = 1, 0


@dataclass(frozen=True)
class CountResult:
    m: int
    bc: str
    total: int
    refined: tuple
    split_h: tuple
    split_d: tuple

    def __post_init__(self):
        assert self.total == sum(self.refined)
        assert all(r == h + d for r, h, d in zip(self.refined, self.split_h, self.split_d))

    @property
    def poly(self) -> RefinedPoly:
        return RefinedPoly.from_coeffs(self.refined)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "bc": self.bc,
            "total": str(self.total),
            "refined": [str(v) for v in self.refined],
            "refinedSplit": {"H": [str(v) for v in self.split_h], "D": [str(v) for v in self.split_d]},
        }


def _check_cap(m, name):
    lim = cap(name)
    if m > lim:
        raise SizeCapExceeded(f"m={m} exceeds the {name} cap {lim}")


# kernel input arrays ---------------------------------------------------------

@lru_cache(maxsize=None)
def _kernel_inputs(domain: TriangleDomain):
    domain.require_standard()
    m = domain.m
    verts = triangle_vertices(m)
    index = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    w_src = np.full(nv, -1, np.int64)
    nw_src = np.full(nv, -1, np.int64)
    n_src = np.full(nv, -1, np.int64)
    in_fix = np.full((nv, 3), -1, np.int64)
    out_fix = np.full((nv, 3), -1, np.int64)
    for v, i in index.items():
        x, y = v
        for src_arr, slot, name, pred in (
            (w_src, 0, "W", (x - 1, y)),
            (nw_src, 1, "NW", (x - 1, y + 1)),
            (n_src, 2, "N", (x, y + 1)),
        ):
            if pred in index:
                src_arr[i] = index[pred]
            else:
                in_fix[i, slot] = domain.boundary_bit(v, name)
        for slot, name in enumerate(("E", "SE", "S")):
            b = domain.boundary_bit(v, name)
            if b is not None:
                out_fix[i, slot] = b
    if domain.bc == "DWBC1":
        meas = [index[(x, m - 1)] for x in range(0, -m, -1)]
        rule = 1
    else:
        meas = [index[(0, y)] for y in range(m - 1, -1, -1)]
        rule = 0
    return w_src, nw_src, n_src, in_fix, out_fix, np.asarray(meas, np.int64), rule


def _run_dfs(domain, store, dfs=None):
    args = _kernel_inputs(domain)
    m = domain.m
    hist = np.zeros((m + 1, 2), np.int64)
    codes = np.zeros((1, len(args[0])), np.int64)
    fn = dfs or _kernels.dfs
    if store:
        total = fn(*args[:6], args[6], False, codes, hist)
        codes = np.zeros((total, len(args[0])), np.int64)
        hist[:] = 0
    total = fn(*args[:6], args[6], store, codes, hist)
    return int(total), hist, codes


def count_brute(domain: TriangleDomain, dfs=None) -> CountResult:
    """Exhaustive depth-first enumeration with ice-rule pruning."""
    _check_cap(domain.m, "brute")
    total, hist, _ = _run_dfs(domain, False, dfs)
    m = domain.m
    h = tuple(int(hist[k, 1]) for k in range(1, m + 1))
    d = tuple(int(hist[k, 0]) for k in range(1, m + 1))
    return CountResult(m, domain.bc, total, tuple(a + b for a, b in zip(h, d)), h, d)


def enumerate_configs(domain: TriangleDomain) -> np.ndarray:
    """All configurations as rows of per-vertex out-codes (E<<2 | SE<<1 | S)."""
    _check_cap(domain.m, "brute")
    return _run_dfs(domain, True)[2]


def iter_configs(domain: TriangleDomain):
    for row in enumerate_configs(domain):
        yield config_from_outcodes(domain, row)


def class_matrix(domain: TriangleDomain, codes: np.ndarray) -> np.ndarray:
    """Vertex classes for each enumerated configuration, vectorised."""
    w_src, nw_src, n_src, in_fix, _, _, _ = _kernel_inputs(domain)
    n_cfg, nv = codes.shape
    env = np.zeros((n_cfg, nv), np.int64)
    for i in range(nv):
        w = (codes[:, w_src[i]] >> 2) & 1 if w_src[i] >= 0 else in_fix[i, 0]
        nw = (codes[:, nw_src[i]] >> 1) & 1 if nw_src[i] >= 0 else in_fix[i, 1]
        nn = codes[:, n_src[i]] & 1 if n_src[i] >= 0 else in_fix[i, 2]
        env[:, i] = (w << 5) | (nw << 4) | (nn << 3) | codes[:, i]
    cls = CLASS_BY_CODE[env]
    assert (cls >= 0).all()
    return cls


# weights adapters --------------------------------------------------------------

def _weight_table(domain: TriangleDomain, weights):
    """Per-vertex 7-vectors (rows in raster order) from any accepted weight argument."""
    verts = triangle_vertices(domain.m)
    if weights is None:
        return [(1,) * 7] * len(verts)
    if isinstance(weights, TwentyVWeights):
        return [tuple(weights.omega)] * len(verts)
    if callable(weights):
        return [tuple(weights(v)) for v in verts]
    if isinstance(weights, dict):
        return [tuple(weights[v]) for v in verts]
    seq = list(weights)
    if len(seq) == 7 and not hasattr(seq[0], "__len__"):
        return [tuple(seq)] * len(verts)
    if len(seq) != len(verts):
        raise ValueError("per-vertex table must have one 7-vector per vertex")
    return [tuple(r) for r in seq]


def partition_function_brute(domain: TriangleDomain, weights=None):
    """Direct sum over enumerated configurations."""
    table = _weight_table(domain, weights)
    codes = enumerate_configs(domain)
    cls = class_matrix(domain, codes)
    total = 0
    for row in cls:
        w = 1
        for i, c in enumerate(row):
            w = w * table[i][c]
        total += w
    return total


# column transfer matrix -------------------------------------------------------
#
# The state after each vertex packs H[0..m-1] (bits 0..m-1, horizontal edges
# waiting to enter row y), D[0..m-1] (bits m..2m-1, diagonals waiting to enter
# row y of the next column), the vertical carry (bit 2m) and the pending
# diagonal produced by the vertex above (bit 2m+1).

@lru_cache(maxsize=None)
def _steps(domain: TriangleDomain):
    """Per-vertex transition data in column order (left to right, top down)."""
    domain.require_standard()
    m = domain.m
    verts = triangle_vertices(domain.m)
    index = {v: i for i, v in enumerate(verts)}
    steps = []
    for x in range(1 - m, 1):
        for y in range(m - 1, -x - 1, -1):
            v = (x, y)
            fix_in = tuple(domain.boundary_bit(v, nm) for nm in ("W", "NW", "N"))
            fix_out = tuple(domain.boundary_bit(v, nm) for nm in ("E", "SE", "S"))
            moves = []
            for code in range(8):
                e, se, s = (code >> 2) & 1, (code >> 1) & 1, code & 1
                if any(f is not None and f != b for f, b in zip(fix_out, (e, se, s))):
                    continue
                moves.append((code, e, se, s))
            steps.append((v, index[v], y, x, fix_in, tuple(moves), y == -x))
    return tuple(steps)


def _advance(state, step, m):
    """Yield (new_state, out_code, in_code3, w_in) for each legal move at a vertex."""
    v, _, y, x, fix_in, moves, bottom = step
    hb, db, cb, pb = y, m + y, 2 * m, 2 * m + 1
    w = fix_in[0] if fix_in[0] is not None else (state >> hb) & 1
    nw = fix_in[1] if fix_in[1] is not None else (state >> db) & 1
    nn = fix_in[2] if fix_in[2] is not None else (state >> cb) & 1
    total_in = w + nw + nn
    pend = (state >> pb) & 1
    base = state & ~((1 << hb) | (1 << db) | (1 << cb) | (1 << pb))
    in3 = (w << 2) | (nw << 1) | nn
    for code, e, se, s in moves:
        if e + se + s != total_in:
            continue
        ns = base
        if x < 0 and e:
            ns |= 1 << hb
        if pend:
            ns |= 1 << db
        if bottom:
            # diagonal of the bottom vertex enters the next column's bottom row
            if se and x < 0:
                ns |= 1 << (m + y - 1)
        else:
            if se and x < 0:
                ns |= 1 << pb
            if s:
                ns |= 1 << cb
        yield ns, code, in3, w


def _class_of(in3, code):
    return int(CLASS_BY_CODE[(in3 << 3) | code])


def _measure_rule(domain):
    """(rule, predicate): which vertices can fix k and how k is read off."""
    m = domain.m
    if domain.bc == "DWBC1":
        return 1, lambda v: v[1] == m - 1, lambda v: v[0] + m
    return 0, lambda v: v[0] == 0, lambda v: v[1] + 1


def _transfer(domain: TriangleDomain, table, track: bool):
    """Forward DP. Keys are (state, k, channel); returns final dict."""
    m = domain.m
    rule, on_line, pos = _measure_rule(domain)
    layer = {(0, 0, 0): 1}
    for step in _steps(domain):
        v, vi = step[0], step[1]
        wv = table[vi]
        measuring = track and on_line(v)
        nxt = {}
        for (state, k, ch), val in layer.items():
            for ns, code, in3, w_in in _advance(state, step, m):
                c = _class_of(in3, code)
                f = wv[c]
                if f == 0:
                    continue
                nk, nch = k, ch
                # the column is scanned top down (first hit wins); the top
                # row left to right (last hit wins)
                if measuring and (in3 or code) and (k == 0 or rule == 1):
                    nk = pos(v)
                    nch = w_in if rule == 0 else code & 1
                key = (ns, nk, nch)
                nxt[key] = nxt.get(key, 0) + val * f
        layer = nxt
    return layer


def count_transfer(domain: TriangleDomain) -> CountResult:
    """Counts through the column transfer matrix."""
    _check_cap(domain.m, "transfer")
    m = domain.m
    layer = _transfer(domain, [(1,) * 7] * len(triangle_vertices(m)), True)
    h = [0] * m
    d = [0] * m
    for (_, k, ch), val in layer.items():
        (h if ch == HORIZONTAL else d)[k - 1] += val
    ref = tuple(a + b for a, b in zip(h, d))
    return CountResult(m, domain.bc, sum(ref), ref, tuple(h), tuple(d))


def partition_function(domain: TriangleDomain, weights=None, method: str = "transfer"):
    """Sum over configurations of the product of vertex weights.

    ``weights`` may be a TwentyVWeights, a 7-sequence, a per-vertex table
    (sequence in raster order, dict, or callable on vertices) or None for
    unit weights.  Exact inputs give exact outputs.
    """
    if method == "brute":
        _check_cap(domain.m, "brute")
        return partition_function_brute(domain, weights)
    _check_cap(domain.m, "transfer")
    layer = _transfer(domain, _weight_table(domain, weights), False)
    return sum(layer.values())


def refined_split(domain: TriangleDomain, weights=None):
    """Weighted refined sums per channel: (horizontal[k-1], diagonal[k-1])."""
    _check_cap(domain.m, "transfer")
    m = domain.m
    layer = _transfer(domain, _weight_table(domain, weights), True)
    h = [0] * m
    d = [0] * m
    for (_, k, ch), val in layer.items():
        (h if ch == HORIZONTAL else d)[k - 1] += val
    return h, d


def refined_poly(domain: TriangleDomain, weights=None, gamma=1) -> RefinedPoly:
    """Refined polynomial with the horizontal channel weighted by ``gamma``."""
    h, d = refined_split(domain, weights)
    return RefinedPoly.from_coeffs([dk + gamma * hk for hk, dk in zip(h, d)])


def one_point(domain: TriangleDomain, weights, k: int):
    """Normalised refined function ``(w0/w1)^(k-1) Z_{m,k} / Z_m``."""
    m = domain.m
    if not 1 <= k <= m:
        raise IndexOutOfRange(f"k={k} outside 1..{m}")
    omega = _homogeneous_omega(weights)
    h, d = refined_split(domain, weights)
    ref = [a + b for a, b in zip(h, d)]
    z = sum(ref)
    ratio = _div(omega[0], omega[1])
    return ratio ** (k - 1) * _div(ref[k - 1], z)


def _homogeneous_omega(weights):
    if weights is None:
        return (1,) * 7
    if isinstance(weights, TwentyVWeights):
        return tuple(weights.omega)
    seq = tuple(weights)
    if len(seq) != 7:
        raise ValueError("one_point needs homogeneous 7-vector weights")
    return seq


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


# exact sampling ----------------------------------------------------------------

class ExactSampler:
    """Draws configurations from the Boltzmann distribution of a domain.

    A forward pass records reachable states, a backward pass stores the
    weight of all completions from each, and draws walk forward choosing
    moves in proportion to ``weight * completions``.  Integer weights are
    sampled exactly with ``randrange``; other weights use floating point.
    """

    def __init__(self, domain: TriangleDomain, weights=None):
        _check_cap(domain.m, "transfer")
        self.domain = domain
        self.m = domain.m
        self.table = _weight_table(domain, weights)
        self.steps = _steps(domain)
        layers = [{0}]
        for step in self.steps:
            nxt = set()
            for s in layers[-1]:
                for ns, *_ in _advance(s, step, self.m):
                    nxt.add(ns)
            layers.append(nxt)
        suffix = [None] * len(layers)
        suffix[-1] = {s: 1 for s in layers[-1] if s == 0}
        for t in range(len(self.steps) - 1, -1, -1):
            step = self.steps[t]
            wv = self.table[step[1]]
            after = suffix[t + 1]
            cur = {}
            for s in layers[t]:
                acc = 0
                for ns, code, in3, _ in _advance(s, step, self.m):
                    rest = after.get(ns)
                    if rest:
                        acc += wv[_class_of(in3, code)] * rest
                if acc:
                    cur[s] = acc
            suffix[t] = cur
        self.suffix = suffix
        self.total = suffix[0].get(0, 0)
        self.integral = all(isinstance(v, int) for layer in suffix for v in layer.values())

    def draw_codes(self, rng: random.Random) -> list:
        verts = triangle_vertices(self.m)
        out = [0] * len(verts)
        state = 0
        for t, step in enumerate(self.steps):
            wv = self.table[step[1]]
            after = self.suffix[t + 1]
            options = []
            for ns, code, in3, _ in _advance(state, step, self.m):
                rest = after.get(ns)
                if rest:
                    options.append((wv[_class_of(in3, code)] * rest, ns, code))
            tot = sum(o[0] for o in options)
            r = rng.randrange(tot) if self.integral else rng.random() * tot
            for wgt, ns, code in options:
                if r < wgt:
                    break
                r -= wgt
            state = ns
            out[step[1]] = code
        return out

    def draw(self, rng: random.Random) -> PathConfig:
        return config_from_outcodes(self.domain, self.draw_codes(rng))

    def k_of_codes(self, codes) -> int:
        """Refined statistic read straight from out-codes."""
        w_src, nw_src, n_src, in_fix, _, meas, _ = _kernel_inputs(self.domain)
        for j, i in enumerate(meas):
            ins = 0
            for src, slot, bit in ((w_src, 0, 2), (nw_src, 1, 1), (n_src, 2, 0)):
                ins |= ((codes[src[i]] >> bit) & 1) if src[i] >= 0 else in_fix[i, slot]
            if ins or codes[i]:
                return len(meas) - j
        raise ValueError("no path reaches the measuring line")


def sample_exact(domain: TriangleDomain, weights=None, seed: int = 0) -> PathConfig:
    return ExactSampler(domain, weights).draw(random.Random(seed))


def sample_k_histogram(domain: TriangleDomain, draws: int, seed: int = 0, weights=None):
    sampler = ExactSampler(domain, weights)
    rng = random.Random(seed)
    hist = [0] * domain.m
    for _ in range(draws):
        hist[sampler.k_of_codes(sampler.draw_codes(rng)) - 1] += 1
    return hist


def first_column_marginal(domain: TriangleDomain, weights=None, method="dp"):
    """Distribution of the out-codes of the first column, as {codes: weight}."""
    m = domain.m
    steps = _steps(domain)
    first = [s for s in steps if s[3] == 1 - m]
    idx = [s[1] for s in first]
    if method == "enumerate":
        table = _weight_table(domain, weights)
        codes = enumerate_configs(domain)
        cls = class_matrix(domain, codes)
        out = {}
        for row, crow in zip(codes, cls):
            w = 1
            for i, c in enumerate(crow):
                w = w * table[i][c]
            key = tuple(int(row[i]) for i in idx)
            out[key] = out.get(key, 0) + w
        return out
    sampler = ExactSampler(domain, weights)
    out = {}

    def walk(t, state, acc, prefix):
        if t == len(first):
            rest = sampler.suffix[t].get(state)
            if rest:
                out[tuple(prefix)] = out.get(tuple(prefix), 0) + acc * rest
            return
        step = steps[t]
        wv = sampler.table[step[1]]
        for ns, code, in3, _ in _advance(state, step, m):
            walk(t + 1, ns, acc * wv[_class_of(in3, code)], prefix + [code])

    walk(0, 0, 1, [])
    return out


# inhomogeneous relation -------------------------------------------------------

def inhomogeneous_weights(m: int, spectral: SpectralParams, eta: float):
    """Per-vertex 20V weights on the triangle for the given spectral angles.

    Vertex (x, y) sits on horizontal line ``m - y`` (from the top), vertical
    line ``1 - x`` (from the right) and diagonal line ``m - x - y``.
    """
    out = {}
    for v in triangle_vertices(m):
        x, y = v
        i, k, j = m - y, 1 - x, m - (x + y)
        out[v] = spectral_omegas(spectral.theta_z[i - 1], spectral.theta_t[j - 1],
                                 spectral.theta_w[k - 1], eta)
    return out


def inhomogeneous_rhs(m: int, spectral: SpectralParams, eta: float):
    """Product of the a2, a3, b1 prefactors times the 6V-DWBC partition function."""
    from .exact6v import brute_6v_dwbc
    from .weights import spectral_six_v

    n = (m + 1) // 2
    tz, tt, tw = spectral.theta_z, spectral.theta_t, spectral.theta_w
    factors = []
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            factors.append(spectral_a2(tz[i - 1], tt[j - 1], eta))
    for j in range(1, m + 1):
        for k in range(1, j + 1):
            factors.append(spectral_a3(tt[j - 1], tw[k - 1], eta))
    upper = n if m % 2 == 0 else n - 1
    for i in range(1, m + 1):
        for jj in range(1, m + 1):
            r = m + 1 - jj
            if i <= r <= upper or n + 1 <= i <= r <= m:
                factors.append(spectral_six_v(tz[i - 1], tw[jj - 1], eta)[1])
    cell = lambda i, j: spectral_six_v(tz[i], tw[j], eta)
    six = brute_6v_dwbc(n, lambda i, j: cell(i, j)[0], lambda i, j: cell(i, j)[1],
                        lambda i, j: cell(i, j)[2])
    prod = 1
    for f in factors:
        prod *= f
    return prod * six, factors


def verify_inhom_relation(m: int, spectral: SpectralParams, eta: float, tol: float = 1e-12) -> float:
    """Relative difference of the two sides, each summed over all configurations."""
    lim = cap("inhom")
    if m > lim:
        raise SizeCapExceeded(f"m={m} exceeds the inhomogeneous-check cap {lim}")
    dom = _standard_dwbc3(m)
    per_vertex = inhomogeneous_weights(m, spectral, eta)
    for ws in per_vertex.values():
        if min(abs(w) for w in ws) < tol:
            raise DegenerateSpectral("a vertex weight vanishes at these spectral parameters")
    rhs, factors = inhomogeneous_rhs(m, spectral, eta)
    if any(abs(f) < tol for f in factors) or abs(rhs) < tol:
        raise DegenerateSpectral("a prefactor vanishes at these spectral parameters")
    lhs = partition_function_brute(dom, per_vertex)
    return abs(lhs - rhs) / abs(rhs)


def _standard_dwbc3(m):
    from .lattice import build_domain

    return build_domain(m, "DWBC3")


__all__ = [
    "CountResult", "count_brute", "count_transfer", "enumerate_configs", "iter_configs",
    "class_matrix", "partition_function", "partition_function_brute", "refined_split",
    "refined_poly", "one_point", "ExactSampler", "sample_exact", "sample_k_histogram",
    "first_column_marginal", "inhomogeneous_weights", "inhomogeneous_rhs",
    "verify_inhom_relation", "HORIZONTAL", "DIAGONAL",
]
