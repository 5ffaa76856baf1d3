"""Tangent-method arctic curve: tangent-line families, envelopes, saddle system, limits.

All coordinates are in the rescaled frame with the south-east corner at the
origin, where the domain is ``x + y >= 0, x <= 0, y <= 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy.optimize import root

from .errors import (InvalidRegion, NoConvergence, NonFiniteValue, NotALimitCase, PoleError)
from .weights import (POLE_TOL, WeightParams, bar_params, hat_params, path_alphas, star_params,
                      tau_xi, twenty_v_weights)

BRANCHES = ("NE", "SE", "NW")
DOMAIN_SLACK = 1e-9
TANGENCY_TOL = 1e-9


HP_DPS = 50  # working precision for envelopes and endpoints


def _nz(x, what, xi):
    tol = POLE_TOL if isinstance(x, float) else mpmath.mpf(10) ** (10 - mpmath.mp.dps)
    if abs(x) < tol:
        raise PoleError(f"{what} pole at xi={xi}")
    return x


def _slope_parts(M, eta, lam, mu, xi):
    """Numerator and denominator of the inverse slope, both pole-free."""
    lo, hi = (lam - eta + mu) / 2, (lam + 3 * eta + mu) / 2
    s1 = M.sin(xi + lam + eta) * M.sin(xi + lam - eta)
    s0 = M.sin(xi) * M.sin(xi + 2 * eta)
    s2 = M.sin(xi + lo) * M.sin(xi + hi)
    return s1 * (s0 + s2), s0 * (s1 + s2)


def _sin_ratio(M, u, a):
    """sin(u) / sin(a u), continued through u = 0."""
    if abs(u) < 1e-12 if M is math else abs(u) < M.mpf(10) ** (-M.mp.dps // 3):
        return (1 + (a * a - 1) * u * u / 6) / a
    return M.sin(u) / _nz(M.sin(a * u), "sin-ratio", u)


def _kappa_parts(M, eta, lam, mu, xi):
    """Numerator and denominator of kappa.

    The cot terms at xi + lam -/+ eta are multiplied through by the matching
    sine so the numerator stays finite where they vanish; the remaining
    poles sit at xi = 0 and xi = pi - 2 eta.
    """
    a = M.pi / (M.pi - 2 * eta)
    lo, hi = (lam - eta + mu) / 2, (lam + 3 * eta + mu) / 2
    um, up = xi + lam - eta, xi + lam + eta
    if M is math and abs(xi) < 1e-6:
        # -cot(xi) + a cot(a xi) is regular at 0: use its Taylor expansion
        reg = (1 - a * a) * xi / 3 + (1 - a ** 4) * xi ** 3 / 45
    else:
        reg = (-M.cos(xi) / _nz(M.sin(xi), "cot", xi)
               + a * M.cos(a * xi) / _nz(M.sin(a * xi), "cot", xi))
    s_m, s_p = M.sin(um), M.sin(up)
    f1_s1 = (2 * M.cos(um) * s_p - M.cos(up) * s_m + reg * s_m * s_p
             - a * M.cos(a * um) * s_p * _sin_ratio(M, um, a))
    s1 = s_p * s_m
    s2 = M.sin(xi + lo) * M.sin(xi + hi)
    return f1_s1 * s2 / M.sin(2 * eta), s1 + s2


def _slope(M, eta, lam, mu, xi):
    num, den = _slope_parts(M, eta, lam, mu, xi)
    return num / _nz(den, "slope", xi)


def _kappa(M, eta, lam, mu, xi):
    num, den = _kappa_parts(M, eta, lam, mu, xi)
    return num / _nz(den, "kappa", xi)


def _hp(p: WeightParams):
    """Parameters as mpf, with hat/bar images formed at high precision."""
    e, lam, mu = mpmath.mpf(p.eta), mpmath.mpf(p.lam), mpmath.mpf(p.mu)
    pi = mpmath.pi
    return {
        "base": (e, lam, mu),
        "hat": (e, pi - (lam + e + mu) / 2, pi - (3 * lam + e - mu) / 2),
        "bar": (e, pi - (lam + e - mu) / 2, pi - (3 * lam + e + mu) / 2),
        "star": (e, lam, -mu),
    }


def slope_A(p: WeightParams, xi: float) -> float:
    """Inverse slope of the tangent line leaving the east boundary."""
    return _slope(math, p.eta, p.lam, p.mu, xi)


def kappa_of_xi(p: WeightParams, xi: float) -> float:
    """Exit intercept on the east boundary."""
    return _kappa(math, p.eta, p.lam, p.mu, xi)


def slope_hat(p: WeightParams, xi: float) -> float:
    return slope_A(hat_params(p), -xi)


def slope_bar(p: WeightParams, xi: float) -> float:
    return slope_A(bar_params(p), -xi)


def kappa_star(p: WeightParams, xi: float) -> float:
    return kappa_of_xi(star_params(p), xi)


def _family(p: WeightParams, which: str):
    """High-precision (slope, kappa) callables of a branch's line family."""
    hp = _hp(p)
    M = mpmath
    if which == "NE":
        return (lambda u: _slope(M, *hp["base"], u)), (lambda u: _kappa(M, *hp["base"], u))
    if which == "SE":
        return (lambda u: _slope(M, *hp["hat"], -u)), (lambda u: _kappa(M, *hp["base"], u))
    if which == "NW":
        return (lambda u: _slope(M, *hp["bar"], -u)), (lambda u: _kappa(M, *hp["star"], u))
    raise ValueError(f"unknown branch {which!r}")


# numerical differentiation ------------------------------------------------------

def derivative(fn: Callable[[float], float], xi: float, h: float | None = None,
               levels: int = 6, with_error: bool = False):
    """Central differences refined by Richardson extrapolation (Neville tableau).

    The step starts at ``h`` (default ``1e-2 * max(1, |xi|)``) and halves at
    every level; the reported error is the last tableau correction.
    """
    if h is None:
        h = 1e-2 * max(1.0, abs(xi))
    probe = fn(xi)
    if isinstance(probe, tuple):
        cache = {}

        def comp(i):
            def f(u):
                if u not in cache:
                    cache[u] = fn(u)
                return cache[u][i]
            return f

        parts = [derivative(comp(i), xi, h, levels, True) for i in range(len(probe))]
        vals = tuple(v for v, _ in parts)
        return (vals, max(e for _, e in parts)) if with_error else vals
    table = []
    best, err = None, math.inf
    for i in range(levels):
        hi = h / 2 ** i
        row = [(fn(xi + hi) - fn(xi - hi)) / (2 * hi)]
        for j in range(1, i + 1):
            f = 4 ** j
            row.append((f * row[j - 1] - table[i - 1][j - 1]) / (f - 1))
        table.append(row)
        if i:
            e = abs(row[-1] - table[i - 1][-1])
            if e < err:
                best, err = row[-1], e
    if best is None:
        best, err = table[0][0], math.inf
    if not mpmath.isfinite(best):
        raise NonFiniteValue(f"derivative at {xi} is not finite")
    return (best, err) if with_error else best


# tangent lines and branches ------------------------------------------------------

@dataclass(frozen=True)
class TangentLine:
    """``normal . (x, y) = offset``, with the branch's slope and intercept data."""

    xi: float
    A: float
    kappa: float
    normal: tuple
    offset: float

    def residual(self, x: float, y: float) -> float:
        return self.normal[0] * x + self.normal[1] * y - self.offset

    @property
    def direction(self) -> tuple:
        nx, ny = self.normal
        r = math.hypot(nx, ny)
        return (ny / r, -nx / r)


def tangent_line(p: WeightParams, which: str, xi: float) -> TangentLine:
    """The branch's tangent line at xi, normalised so the normal has unit length."""
    with mpmath.workdps(HP_DPS):
        a, b, c = _line_coeffs(p, which)(mpmath.mpf(xi))
        r = mpmath.sqrt(a * a + b * b)
        slope, kap = _family(p, which)
        try:
            A, k = float(slope(mpmath.mpf(xi))), float(kap(mpmath.mpf(xi)))
        except PoleError:
            A, k = math.inf, math.inf
        return TangentLine(xi, A, k, (float(a / r), float(b / r)), float(c / r))


def branch_range(p: WeightParams, which: str) -> tuple:
    """Closed xi interval of a branch, sorted."""
    if which == "NE":
        lo, hi = 0.0, math.pi - p.eta - p.lam
    elif which == "SE":
        lo, hi = -(p.lam - p.eta + p.mu) / 2, 0.0
    elif which == "NW":
        lo, hi = -(p.lam - p.eta - p.mu) / 2, 0.0
    else:
        raise ValueError(f"unknown branch {which!r}")
    return (min(lo, hi), max(lo, hi))


def _line_coeffs(p: WeightParams, which: str):
    """u -> (a, b, c) with the branch's tangent line a X + b Y = c, denominators cleared."""
    hp = _hp(p)
    M = mpmath
    if which == "NE":
        def f(u):
            sn, sd = _slope_parts(M, *hp["base"], u)
            kn, kd = _kappa_parts(M, *hp["base"], u)
            return (sn * kd, sd * kd, kn * sd)
    elif which == "SE":
        def f(u):
            sn, sd = _slope_parts(M, *hp["hat"], -u)
            kn, kd = _kappa_parts(M, *hp["base"], u)
            return ((sd - sn) * kd, sd * kd, kn * sd)
    elif which == "NW":
        def f(u):
            sn, sd = _slope_parts(M, *hp["bar"], -u)
            kn, kd = _kappa_parts(M, *hp["star"], u)
            return (sd * kd, (sd - sn) * kd, kn * sd - 2 * sn * kd)
    else:
        raise ValueError(f"unknown branch {which!r}")
    return f


def _envelope_hp(p: WeightParams, which: str, xi, h):
    """Envelope point and unit line normal, all at high precision.

    Solves a X + b Y = c together with its xi-derivative.
    """
    f = _line_coeffs(p, which)
    a, b, c = f(xi)
    da, db, dc = derivative(f, xi, h)
    det = a * db - da * b
    if det == 0:
        raise NonFiniteValue(f"degenerate envelope at xi={xi}")
    x = (c * db - dc * b) / det
    y = (a * dc - da * c) / det
    r = mpmath.sqrt(a * a + b * b)
    return (x, y), (a / r, b / r)


def branch_formula_point(p: WeightParams, which: str, xi: float, h: float | None = None) -> tuple:
    """Envelope point from the closed-form branch parametrisation in slope and intercept."""
    with mpmath.workdps(HP_DPS):
        slope, kap = _family(p, which)
        x0 = mpmath.mpf(xi)
        h = mpmath.mpf(h if h is not None else 1e-3 * max(1.0, abs(xi)))
        ap, kp = derivative(slope, x0, h), derivative(kap, x0, h)
        a, k = slope(x0), kap(x0)
        if which == "NE":
            x = kp / ap
            return float(x), float(k - a * x)
        if which == "SE":
            return float(-kp / ap), float(k - (a - 1) * kp / ap)
        return float(k - 2 - (a - 1) * kp / ap), float(2 - kp / ap)


def envelope_point(p: WeightParams, which: str, xi: float, h: float | None = None) -> tuple:
    """(X, Y) of the envelope of the branch's line family at xi.

    Derivatives are Richardson-extrapolated central differences taken at
    high working precision, so nearby poles of the closed forms do not
    swamp the result.
    """
    with mpmath.workdps(HP_DPS):
        xi_hp = mpmath.mpf(xi)
        if h is None:
            # keep the stencil clear of the pole at xi = 0
            ax = abs(float(xi))
            h = min(1e-3 * max(1.0, ax), ax / 4) if ax else 1e-3
        pt, _ = _envelope_hp(p, which, xi_hp, mpmath.mpf(h))
        return float(pt[0]), float(pt[1])


def _step_for(xi, lo, hi):
    room = min(xi - lo, hi - xi)
    return min(1e-3 * max(1.0, abs(xi)), 0.25 * room)


END_OFFSET = 1e-15


def endpoint(p: WeightParams, which: str, side: str) -> dict:
    """Envelope point and unit line normal at a range end, as a one-sided limit.

    The closed forms are evaluated at a relative offset of 1e-15 inside the
    range with enough working precision to absorb the cancelling poles.
    """
    lo, hi = branch_range(p, which)
    if side not in ("lo", "hi"):
        raise ValueError("side must be 'lo' or 'hi'")
    with mpmath.workdps(HP_DPS):
        width = mpmath.mpf(hi) - mpmath.mpf(lo)
        base = mpmath.mpf(lo) if side == "lo" else mpmath.mpf(hi)
        d = END_OFFSET * width
        xi = base + d if side == "lo" else base - d
        pt, n = _envelope_hp(p, which, xi, d / 4)
        return {"xi": float(base), "X": float(pt[0]), "Y": float(pt[1]),
                "normal": (float(n[0]), float(n[1]))}


def adaptive_points(p: WeightParams, which: str, max_gap: float = 1e-2, seed_points: int = 64,
                    inner: float = 1e-12) -> list:
    """Envelope samples whose consecutive chords are at most ``max_gap`` long.

    Parameter intervals are bisected until the chord is short enough or the
    interval falls below ``inner`` times the branch width.  Near the range
    ends the parametrisation can move fast, so a uniform grid leaves gaps.
    """
    lo, hi = branch_range(p, which)
    width = hi - lo
    floor = inner * width

    def at(xi):
        return envelope_point(p, which, xi, 0.25 * min(xi - lo, hi - xi))

    ts = np.linspace(0.0, 1.0, seed_points)
    ts[0], ts[-1] = inner, 1.0 - inner
    pending = [(lo + t * width, at(lo + t * width)) for t in ts]
    done = [pending.pop(0)]
    # walk left to right; split the current chord until it is short enough
    while pending:
        (xa, pa), (xb, pb) = done[-1], pending[0]
        if math.dist(pa, pb) > max_gap and xb - xa > floor:
            xm = 0.5 * (xa + xb)
            pending.insert(0, (xm, at(xm)))
        else:
            done.append(pending.pop(0))
    return [pt for _, pt in done]


@dataclass
class CurveBranch:
    branch: str
    params: WeightParams
    xi_range: tuple
    points: list = field(default_factory=list)  # (xi, X, Y, A, kappa)

    @property
    def xy(self) -> np.ndarray:
        return np.array([(pt[1], pt[2]) for pt in self.points])

    def max_tangency_residual(self) -> float:
        worst = 0.0
        for xi, x, y, *_ in self.points:
            if xi in self.xi_range:
                continue
            worst = max(worst, abs(tangent_line(self.params, self.branch, xi).residual(x, y)))
        return worst

    def domain_violations(self, slack: float = DOMAIN_SLACK) -> list:
        return [pt for pt in self.points
                if pt[1] > slack or pt[2] > 2 + slack or pt[1] + pt[2] < -slack]


def branch(p: WeightParams, which: str, num_points: int = 101, check: bool = True,
           endpoints: bool = True) -> CurveBranch:
    """Sample a branch on a uniform xi grid; endpoints come from one-sided limits."""
    if num_points < 2:
        raise ValueError("num_points must be at least 2")
    p.require_curve_regime()
    lo, hi = branch_range(p, which)
    out = CurveBranch(which, p, (lo, hi))
    grid = np.linspace(lo, hi, num_points)
    for i, xi in enumerate(grid):
        xi = float(xi)
        if i in (0, num_points - 1):
            if not endpoints:
                continue
            ep = endpoint(p, which, "lo" if i == 0 else "hi")
            out.points.append((xi, ep["X"], ep["Y"], math.nan, math.nan))
            continue
        x, y = envelope_point(p, which, xi, _step_for(xi, lo, hi))
        ln = tangent_line(p, which, xi)
        if check and abs(ln.residual(x, y)) > TANGENCY_TOL:
            raise NonFiniteValue(f"tangency gate failed at xi={xi}")
        out.points.append((xi, x, y, ln.A, ln.kappa))
    return out


def junctions(p: WeightParams) -> list:
    """Position and line-direction mismatch at the three branch junctions.

    NE meets SE at xi = 0 on the east side, NE's far end meets NW's xi = 0
    end on the top side, and the outer SE and NW ends land on the diagonal.
    """
    def end(which, xi_target):
        lo, hi = branch_range(p, which)
        return endpoint(p, which, "lo" if abs(lo - xi_target) < abs(hi - xi_target) else "hi")

    ne_lo, ne_hi = endpoint(p, "NE", "lo"), endpoint(p, "NE", "hi")
    se0, nw0 = end("SE", 0.0), end("NW", 0.0)
    out = []
    for name, a, b in (("NE-SE", ne_lo, se0), ("NE-NW", ne_hi, nw0)):
        pos = math.hypot(a["X"] - b["X"], a["Y"] - b["Y"])
        cross = abs(a["normal"][0] * b["normal"][1] - a["normal"][1] * b["normal"][0])
        out.append({"junction": name, "position_gap": pos, "direction_gap": cross,
                    "point": (a["X"], a["Y"])})
    return out


def diagonal_ends(p: WeightParams) -> dict:
    """Outer ends of SE and NW; both should sit on the diagonal x + y = 0."""
    res = {}
    for which in ("SE", "NW"):
        lo, hi = branch_range(p, which)
        side = "lo" if abs(lo) > abs(hi) else "hi"
        ep = endpoint(p, which, side)
        res[which] = (ep["X"], ep["Y"])
    return res


# saddle system --------------------------------------------------------------------

@dataclass(frozen=True)
class SaddleState:
    q3: float
    q4: float
    q5: float
    q6: float
    s: float
    residual: float = 0.0

    @property
    def vector(self):
        return np.array([self.q3, self.q4, self.q5, self.q6, self.s])


def _brackets(q3, q4, q5, q6, s):
    b = q3 + 2 * q4 + q5 + 2 * q6 - 1
    c = q3 + q4 + 2 * q5 + 2 * q6 - s
    d = s + 1 - q3 - 2 * q4 - 2 * q5 - 3 * q6
    return b, c, d


def _saddle_terms(v, alphas, tau):
    q3, q4, q5, q6, s = v
    a1, a2, a3, a4, a5, a6 = alphas
    b, c, d = _brackets(q3, q4, q5, q6, s)
    return [
        (a1 * a2 * q3 * d, a3 * b * c),
        (a1 * a1 * a2 * q4 * d * d, -a4 * b * b * c),
        (a1 * a2 * a2 * q5 * d * d, -a5 * b * c * c),
        (a1 * a1 * a2 * a2 * q6 * d ** 3, a6 * b * b * c * c),
        (tau * b, -d),
    ]


def saddle_relative_residual(v, alphas, tau) -> float:
    """Largest |lhs - rhs| / (|lhs| + |rhs|) over the five equations."""
    worst = 0.0
    for lhs, rhs in _saddle_terms(v, alphas, tau):
        scale = abs(lhs) + abs(rhs)
        if scale:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def saddle_equations(v, alphas, tau):
    """Five saddle equations, cleared of denominators so vanishing alphas stay regular."""
    q3, q4, q5, q6, s = v
    a1, a2, a3, a4, a5, a6 = alphas
    b, c, d = _brackets(q3, q4, q5, q6, s)
    return np.array([
        a1 * a2 * q3 * d - a3 * b * c,
        a1 * a1 * a2 * q4 * d * d + a4 * b * b * c,
        a1 * a2 * a2 * q5 * d * d + a5 * b * c * c,
        a1 * a1 * a2 * a2 * q6 * d ** 3 - a6 * b * b * c * c,
        tau * b + d,
    ])


def saddle_seed(alphas, tau) -> np.ndarray:
    """Closed-form elimination of the saddle system at a given tau."""
    a1, a2, a3, a4, a5, a6 = alphas
    u = 1 / (a1 * tau)
    qa = a5 * u + a6 * u * u
    qb = a2 + a3 * u + a4 * u * u
    qc = -(1 - 1 / tau)
    if abs(qa) < 1e-14:
        v = -qc / qb
    else:
        disc = qb * qb - 4 * qa * qc
        if disc < 0:
            raise InvalidRegion("no real saddle point at this tau")
        v = (-qb + math.sqrt(disc)) / (2 * qa)
    t = 1 / (1 / tau + a3 * u * v + 2 * a4 * u * u * v + a5 * u * v * v + 2 * a6 * u * u * v * v)
    s = t * (a2 * v + a3 * u * v + a4 * u * u * v + 2 * a5 * u * v * v + 2 * a6 * u * u * v * v)
    return np.array([a3 * t * u * v, a4 * t * u * u * v, a5 * t * u * v * v,
                     a6 * t * u * u * v * v, s])


def saddle_solve(p: WeightParams, xi: float, guess=None, tol: float = 1e-9) -> SaddleState:
    """Newton-type solve of the saddle system; the seed defaults to the elimination."""
    alphas = tuple(path_alphas(twenty_v_weights(p)))
    tau = tau_xi(p, xi)
    x0 = saddle_seed(alphas, tau) if guess is None else np.asarray(guess, float)
    sol = root(saddle_equations, x0, args=(alphas, tau), method="hybr", tol=1e-14)
    res = saddle_relative_residual(sol.x, alphas, tau)
    if not np.all(np.isfinite(sol.x)) or res > tol:
        raise NoConvergence("saddle system did not converge", res)
    q3, q4, q5, q6, s = map(float, sol.x)
    b, c, d = _brackets(q3, q4, q5, q6, s)
    bad = []
    if not (b < 0 and c < 0 and d > 0):
        bad.append("bracket signs")
    for q, a, name in ((q3, alphas[2], "q3"), (q4, alphas[3], "q4"),
                       (q5, alphas[4], "q5"), (q6, alphas[5], "q6")):
        if abs(a) < 1e-14:
            if abs(q) > 1e-10:
                bad.append(f"{name} must vanish")
        elif q / a <= 0:
            bad.append(f"{name}/alpha")
    if bad:
        raise InvalidRegion("non-positive log argument: " + ", ".join(bad))
    return SaddleState(q3, q4, q5, q6, s, res)


# stationarity oracle ------------------------------------------------------------

def _free_energy(M, eta, lam, xi):
    a = M.pi / (M.pi - 2 * eta)
    num = M.sin(a * (lam - eta)) * M.sin(xi + lam - eta) * M.sin(a * xi)
    den = a * M.sin(lam - eta) * M.sin(a * (xi + lam - eta)) * M.sin(xi)
    return M.log(abs(num / den))


def _log_sigma_tau(M, eta, lam, mu, xi):
    lo, hi = (lam - eta + mu) / 2, (lam + 3 * eta + mu) / 2
    sig = M.sin(xi + lam - eta) * M.sin(lam + eta) / (M.sin(xi + lam + eta) * M.sin(lam - eta))
    gam = M.sin(xi + lo) * M.sin(hi) / (M.sin(xi + hi) * M.sin(lo))
    return M.log(abs(sig)), M.log(abs(sig * gam))


def path_free_energy(p: WeightParams, xi: float) -> float:
    """The f(sigma) term of the one-point asymptotics, as a function of xi."""
    return _free_energy(math, p.eta, p.lam, xi)


def stationarity_residual(p: WeightParams, xi: float) -> float:
    """d/dxi' [f + log sigma - kappa(xi) log tau] at xi' = xi.

    Logarithms are of absolute values; only logarithmic derivatives enter.
    Evaluated at high precision so the check is independent of the float
    closed forms.
    """
    with mpmath.workdps(HP_DPS):
        e, lam, mu = _hp(p)["base"]
        x = mpmath.mpf(xi)
        k = _kappa(mpmath, e, lam, mu, x)

        def action(u):
            ls, lt = _log_sigma_tau(mpmath, e, lam, mu, u)
            return _free_energy(mpmath, e, lam, u) + ls - k * lt

        h = mpmath.mpf(_step_for(xi, 0.0, math.pi - p.eta - p.lam))
        return float(derivative(action, x, h))


# uniform case --------------------------------------------------------------------

def uniform_polynomial(x: float, y: float) -> float:
    """Degree-10 curve through the uniform NE branch, in shifted coordinates."""
    r = x * x + y * y
    s3 = math.sqrt(3.0)
    return (2 ** 6 * 3 ** 11 * r ** 5 - 2 ** 4 * 3 ** 9 * 67 * r ** 4
            - 2 ** 2 * 3 ** 6 * r ** 2 * (13 * 83 * r + 2 ** 6 * 5 ** 3 * s3 * x * y)
            - 3 ** 2 * 17 * 9323 * r ** 2 - 2 ** 10 * 3 ** 2 * 5 ** 5 * x * x * y * y
            - 2 ** 6 * 3 ** 4 * 5 ** 2 * 11 * s3 * x * y * r - 2 ** 10 * 3 * 41 * r
            - 2 ** 7 * 3 * 23 * 241 * s3 * x * y - 2 ** 10 * 13 ** 2)


def degree10_residual(X: float, Y: float) -> float:
    """Polynomial value over gradient norm at the shifted point (a first-order distance)."""
    x, y = X + 1.5, Y - 0.5
    gx = derivative(lambda u: uniform_polynomial(u, y), x, 1e-3)
    gy = derivative(lambda u: uniform_polynomial(x, u), y, 1e-3)
    return abs(uniform_polynomial(x, y)) / math.hypot(gx, gy)


def ne_continuation(p: WeightParams, xi: float) -> tuple:
    """NE envelope formula evaluated outside its range (uniform-case images)."""
    return envelope_point(p, "NE", xi, min(1e-2, 0.4 * abs(xi)) if xi else None)


def shear(pt):
    return (pt[0], pt[1] - pt[0])


def diagonal_reflection(pt):
    """(x, y) -> (y - x - 2, x + 2)."""
    return (pt[1] - pt[0] - 2, pt[0] + 2)


# free-fermion limits ------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple

    def distance(self, pt) -> float:
        a, b, q = np.array(self.start), np.array(self.end), np.array(pt, float)
        t = np.clip(np.dot(q - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
        return float(np.linalg.norm(q - a - t * (b - a)))


def segment_lower(xi_scaled: float) -> tuple:
    r = 4 * xi_scaled * xi_scaled / (1 + 4 * xi_scaled * xi_scaled)
    return (-r, 2 - r)


def segment_upper(xi: float) -> tuple:
    c = math.cos(2 * xi)
    return ((2 * c - 3) / 4, (-2 * c + 5) / 4)


def ellipse_first(xi_scaled: float) -> tuple:
    d = 8 * xi_scaled * (1 - xi_scaled) - 3
    return (2 * xi_scaled ** 2 / d, -(6 * xi_scaled ** 2 - 4 * xi_scaled + 1) / d)


def ellipse_second(xi_scaled: float) -> tuple:
    d = 8 * xi_scaled * (1 + xi_scaled) + 3
    return (-(10 * xi_scaled ** 2 + 8 * xi_scaled + 3) / d, (14 * xi_scaled ** 2 + 12 * xi_scaled + 4) / d)


@dataclass
class LimitObject:
    case: str
    segments: list
    arcs: list  # lists of sampled (x, y)
    contact_normals: list = field(default_factory=list)


def free_fermion_limits(case: str, num_points: int = 200) -> LimitObject:
    """Closed-form limit shapes of the free-fermion NE branch as lambda leaves its range.

    ``case`` is 'lambda->-pi/4', 'lambda->+pi/4' (closed forms) or
    'mu->+pi/8', 'mu->-pi/8' (assembled by :func:`mu_limit`).
    """
    ts = np.linspace(0.0, 1.0, num_points)
    if case == "lambda->-pi/4":
        return LimitObject(case, [Segment((0.0, 2.0), (-1.0, 1.0))], [])
    if case == "lambda->+pi/4":
        # a map of [0, inf) to the unit interval keeps the arcs finite
        big = ts[:-1] / (1 - ts[:-1])
        arc1 = [ellipse_first(float(u)) for u in big] + [(-0.25, 0.75)]
        # the NE range runs one unit of the scaled variable past the pole, so the
        # second arc starts at u = -1, on the top edge
        arc2 = ([ellipse_second(float(u)) for u in np.linspace(-1.0, 0.0, num_points)[:-1]]
                + [ellipse_second(float(u)) for u in big] + [(-1.25, 1.75)])
        return LimitObject(case, [Segment(segment_upper(0.0), segment_upper(math.pi / 2))], [arc1, arc2])
    if case in ("mu->+pi/8", "mu->-pi/8"):
        return mu_limit(+1 if "+" in case else -1, num_points)
    raise NotALimitCase(f"no limit shape for case {case!r}")


MU_LIMIT_PROBE = 1e-12


def mu_limit(sign: int, num_points: int = 64, max_gap: float = 1e-2) -> LimitObject:
    """Limit shape of the eta = pi/4, lambda = pi/8 curve as mu -> sign * pi/8.

    No closed form is available, so the shape is assembled from the branch
    formulas.  At the limiting mu one side branch (SE for +, NW for -)
    shrinks to a corner of the triangle; NE and the other side branch,
    evaluated at the limiting mu, give the arcs.  Two straight pieces close
    the picture: corner to the adjacent NE end, and the diagonal end of the
    surviving side branch just inside the limit (the hub) to that branch's
    end on the arc.  Anchors are read off ``MU_LIMIT_PROBE`` from the limit.
    Each segment carries the arc's unit normal at its contact point in
    ``LimitObject.contact_normals``.  Arcs are sampled by
    :func:`adaptive_points`, so ``num_points`` is only the seed grid.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    eta, lam = math.pi / 4, math.pi / 8
    p = WeightParams(eta, lam, sign * (eta - lam))
    near = WeightParams(eta, lam, sign * (eta - lam - MU_LIMIT_PROBE))
    collapsing, side = ("SE", "NW") if sign > 0 else ("NW", "SE")
    arcs = []
    for which in ("NE", side):
        arcs.append(adaptive_points(p, which, max_gap, num_points, inner=1e-9))
    corner = endpoint(near, collapsing, "lo")
    ne_end = endpoint(p, "NE", "lo" if sign > 0 else "hi")
    lo, hi = branch_range(p, side)
    outer = "lo" if abs(lo) > abs(hi) else "hi"
    hub = endpoint(near, side, outer)
    side_end = endpoint(p, side, outer)
    segs = [Segment((corner["X"], corner["Y"]), (ne_end["X"], ne_end["Y"])),
            Segment((hub["X"], hub["Y"]), (side_end["X"], side_end["Y"]))]
    out = LimitObject(f"mu->{'+' if sign > 0 else '-'}pi/8", segs, arcs)
    out.contact_normals = [ne_end["normal"], side_end["normal"]]
    return out


def conic_fit(points) -> tuple:
    """Least-squares conic through ``points``.

    Returns (coefficients of x^2, xy, y^2, x, y, 1; largest first-order
    distance of a point from the fitted curve).
    """
    xy = np.asarray(points, float)
    x, y = xy[:, 0], xy[:, 1]
    design = np.stack([x * x, x * y, y * y, x, y, np.ones_like(x)], 1)
    coef = np.linalg.svd(design)[2][-1]
    grad = np.hypot(2 * coef[0] * x + coef[1] * y + coef[3], coef[1] * x + 2 * coef[2] * y + coef[4])
    return coef, float(np.max(np.abs(design @ coef) / grad))


def is_ellipse(coef) -> bool:
    a, b, c = coef[:3]
    return b * b - 4 * a * c < 0


def hausdorff(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


__all__ = [
    "BRANCHES", "slope_A", "kappa_of_xi", "slope_hat", "slope_bar", "kappa_star", "derivative",
    "TangentLine", "tangent_line", "branch_range", "branch_formula_point", "envelope_point", "endpoint", "CurveBranch",
    "adaptive_points", "branch", "junctions", "diagonal_ends", "SaddleState", "saddle_equations", "saddle_seed",
    "saddle_solve", "path_free_energy", "stationarity_residual", "uniform_polynomial",
    "degree10_residual", "ne_continuation", "shear", "diagonal_reflection", "Segment",
    "segment_lower", "segment_upper", "ellipse_first", "ellipse_second", "LimitObject",
    "free_fermion_limits", "mu_limit", "conic_fit", "is_ellipse", "hausdorff",
]
