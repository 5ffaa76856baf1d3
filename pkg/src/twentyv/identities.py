"""Machine-checkable identity suite behind ``twentyv verify``.

Every check returns an :class:`IdentityResult`.  Exact identities compare
integers or integer polynomials; numerical ones report the worst residual
against a tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np

from . import arctic
from .caps import cap
from .enumerate import count_brute, count_transfer, iter_configs, verify_inhom_relation
from .errors import DegenerateSpectral
from .exact6v import counts_from_6v, refined_from_6v
from .lattice import build_domain, first_hit_position, recognise_bc, reflect_shear, transform
from .polys import RefinedPoly
from .weights import (PI, PI_BAR, SpectralParams, WeightParams, bar_params, compose,
                      hat_params, sigma_xi, star_params, tau_xi, twenty_v_weights)

# DWBC3 totals for m = 1..10
REFERENCE_TOTALS = (1, 2, 6, 24, 184, 1472, 27712, 443392, 20177920, 645693440)


@dataclass
class IdentityResult:
    name: str
    passed: bool
    exact: bool
    max_residual: float | None = None
    tolerance: float | None = None
    checked: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def _exact(name, pairs) -> IdentityResult:
    """``pairs`` yields (label, left, right); all must be equal."""
    fails, n = [], 0
    for label, left, right in pairs:
        n += 1
        if left != right:
            fails.append({"case": label, "left": str(left), "right": str(right)})
    return IdentityResult(name, not fails, True, checked=n, failures=fails)


def _numeric(name, residuals, tol) -> IdentityResult:
    worst, fails, n = 0.0, [], 0
    for label, r in residuals:
        n += 1
        r = float(r)
        if not r <= tol:  # NaN fails too
            fails.append({"case": label, "residual": r})
        if r > worst or math.isnan(r):
            worst = r
    return IdentityResult(name, not fails, False, worst, tol, n, fails)


# exact counting identities -------------------------------------------------------

def check_counts(m_max: int = 10, brute_max: int | None = None) -> IdentityResult:
    """Brute force, transfer matrix and determinant totals agree with each other and the reference."""
    brute_max = min(cap("brute"), 6) if brute_max is None else brute_max

    def pairs():
        for m in range(1, m_max + 1):
            det = counts_from_6v(m)
            yield f"det m={m}", det, REFERENCE_TOTALS[m - 1]
            if m <= cap("transfer"):
                yield f"transfer m={m}", count_transfer(build_domain(m)).total, det
            if m <= brute_max:
                yield f"brute m={m}", count_brute(build_domain(m)).total, det

    return _exact("counts", pairs())


def check_refined(m_max: int = 8) -> IdentityResult:
    """Enumerated refined polynomials equal the determinant route; DWBC1 equals DWBC2."""
    def pairs():
        for m in range(1, m_max + 1):
            for bc in ("DWBC3", "DWBC2", "DWBC1"):
                got = count_transfer(build_domain(m, bc)).refined
                yield f"{bc} m={m}", got, refined_from_6v(m, bc).refined(m)
            yield (f"DWBC1=DWBC2 m={m}", count_transfer(build_domain(m, "DWBC1")).refined,
                   count_transfer(build_domain(m, "DWBC2")).refined)

    return _exact("refined", pairs())


def check_even_odd(n_max: int = 5) -> IdentityResult:
    """Z(2n) = 2^n Z(2n-1)."""
    return _exact("evenodd", ((f"n={n}", counts_from_6v(2 * n), 2 ** n * counts_from_6v(2 * n - 1))
                              for n in range(1, n_max + 1)))


def check_refined_even_odd(n_max: int = 4) -> IdentityResult:
    """Z(2n; tau) = 2^(n-1) (1 + tau) Z(2n-1; tau)."""
    def pairs():
        for n in range(1, n_max + 1):
            rhs = refined_from_6v(2 * n - 1) * RefinedPoly.from_coeffs([1, 1]) * 2 ** (n - 1)
            yield f"n={n}", refined_from_6v(2 * n).coeffs, rhs.exact().coeffs

    return _exact("refined-evenodd", pairs())


def check_top_coefficient(m_max: int = 8) -> IdentityResult:
    """Coefficient of tau^(m-1) equals the total at size m - 2."""
    def pairs():
        for m in range(3, m_max + 1):
            top = count_transfer(build_domain(m)).refined[m - 1]
            yield f"m={m}", top, counts_from_6v(m - 2)

    return _exact("top-coefficient", pairs())


def check_reversal(m_max: int = 8) -> IdentityResult:
    """DWBC2 refined polynomial is the DWBC3 one reversed."""
    def pairs():
        for m in range(1, m_max + 1):
            three = count_transfer(build_domain(m, "DWBC3")).poly
            yield f"m={m}", count_transfer(build_domain(m, "DWBC2")).refined, three.reversed(m).refined(m)

    return _exact("reversal", pairs())


def check_bijection(m_max: int = 6) -> IdentityResult:
    """Configuration-level maps: DWBC3 -> DWBC2 sends k to m+1-k; DWBC2 -> DWBC1 keeps k."""
    m_max = min(m_max, cap("brute"))

    def pairs():
        for m in range(1, m_max + 1):
            seen, bad_k, bad_bc = set(), 0, 0
            sources = list(iter_configs(build_domain(m, "DWBC3")))
            for cfg in sources:
                img = reflect_shear(cfg)
                if img.domain.bc != "DWBC2" or not img.is_valid():
                    bad_bc += 1
                    continue
                seen.add(img.occupied)
                if first_hit_position(img) != m + 1 - first_hit_position(cfg):
                    bad_k += 1
                star = transform(img, "Rstar")
                if recognise_bc(star.domain) != "DWBC1" or first_hit_position(star) != first_hit_position(img):
                    bad_k += 1
            yield f"m={m} image count", len(seen), len(sources)
            yield f"m={m} statistic", bad_k, 0
            yield f"m={m} boundary", bad_bc, 0

    return _exact("bijection", pairs())


# numerical identities ----------------------------------------------------------------

def check_inhomogeneous(ms=(2, 3, 4), draws: int = 20, seed: int = 0, eta: float = 0.3,
                        tol: float = 1e-10) -> IdentityResult:
    """Both sides of the spectral-parameter relation, brute-forced, at random draws."""
    rng = random.Random(seed)

    def residuals():
        for m in ms:
            got = 0
            while got < draws:
                sp = SpectralParams.random(m, rng)
                try:
                    r = verify_inhom_relation(m, sp, eta)
                except DegenerateSpectral:
                    continue
                got += 1
                yield f"m={m} draw={got}", r

    return _numeric("inhom", residuals(), tol)


def _rel(a, b):
    a, b = np.asarray(tuple(a), float), np.asarray(tuple(b), float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def check_weight_symmetry(samples: int = 10_000, seed: int = 0, tol: float = 1e-12) -> IdentityResult:
    """hat -> pi, bar -> pi_bar after pi, star -> pi_bar (the last bit for bit)."""
    rng = random.Random(seed)
    bar_perm = compose(PI_BAR, PI)

    def residuals():
        for i in range(samples):
            p = WeightParams.random_disorder(rng)
            w = twenty_v_weights(p)
            yield f"hat #{i}", _rel(twenty_v_weights(hat_params(p)), w.permuted(PI))
            yield f"bar #{i}", _rel(twenty_v_weights(bar_params(p)), w.permuted(bar_perm))
            star = twenty_v_weights(star_params(p))
            yield f"star #{i}", 0.0 if star.omega == w.permuted(PI_BAR).omega else math.inf

    return _numeric("weight-symmetry", residuals(), tol)


def check_combinatorial_tau(points: int = 201, tol: float = 1e-12) -> IdentityResult:
    """At the combinatorial point tau = tan(xi + pi/4) and sigma = (tau + 1)/2."""
    p = WeightParams.combinatorial()
    lo, hi = arctic.branch_range(p, "NE")

    def residuals():
        for xi in np.linspace(lo, hi, points)[:-1]:
            xi = float(xi)
            t = tau_xi(p, xi)
            closed = math.tan(xi + math.pi / 4)
            yield f"tau xi={xi}", abs(t - closed) / max(1.0, abs(closed))
            yield f"sigma xi={xi}", abs(sigma_xi(p, xi) - (t + 1) / 2) / max(1.0, abs(t))

    return _numeric("combinatorial-tau", residuals(), tol)


def _grid(p, points):
    lo, hi = arctic.branch_range(p, "NE")
    return [float(x) for x in np.linspace(lo, hi, points + 2)[1:-1]]


def check_saddle(triples: int = 20, points: int = 50, seed: int = 0, tol: float = 1e-8) -> IdentityResult:
    """Saddle-point slope against the closed-form inverse slope."""
    rng = random.Random(seed)

    def residuals():
        for i in range(triples):
            p = WeightParams.random_disorder(rng)
            for xi in _grid(p, points):
                st = arctic.saddle_solve(p, xi)
                yield f"#{i} xi={xi}", abs(st.s * arctic.slope_A(p, xi) - 1)

    return _numeric("saddle", residuals(), tol)


def check_stationarity(triples: int = 20, points: int = 50, seed: int = 0, tol: float = 1e-8) -> IdentityResult:
    rng = random.Random(seed)

    def residuals():
        for i in range(triples):
            p = WeightParams.random_disorder(rng)
            for xi in _grid(p, points):
                yield f"#{i} xi={xi}", abs(arctic.stationarity_residual(p, xi))

    return _numeric("stationarity", residuals(), tol)


def check_uniform_geometry(points: int = 101, tol_poly: float = 1e-6,
                           tol_image: float = 1e-8) -> list[IdentityResult]:
    """Degree-10 residual on NE, and SE / NW as images of the continued NE formula."""
    p = WeightParams.combinatorial()
    ne = arctic.branch(p, "NE", points)
    poly = _numeric("uniform-degree10",
                    ((f"xi={xi}", arctic.degree10_residual(x, y)) for xi, x, y, *_ in ne.points), tol_poly)

    def images():
        for which, f in (("SE", arctic.shear), ("NW", arctic.diagonal_reflection)):
            lo, hi = arctic.branch_range(p, which)
            for xi in np.linspace(lo, hi, points)[1:-1]:
                xi = float(xi)
                got = arctic.envelope_point(p, which, xi)
                want = f(arctic.ne_continuation(p, xi))
                yield f"{which} xi={xi}", math.hypot(got[0] - want[0], got[1] - want[1])

    return [poly, _numeric("uniform-images", images(), tol_image)]


def check_free_fermion_junctions(lams=(math.pi / 8, 0.0, -math.pi / 8),
                                 mus=(0.0, math.pi / 10, -math.pi / 10),
                                 tol: float = 1e-6) -> IdentityResult:
    """Branch ends meet with matching position and direction at eta = pi/4."""
    def residuals():
        for lam in lams:
            for mu in mus:
                p = WeightParams(math.pi / 4, lam, mu)
                if p.free_fermion_violations():
                    continue
                for j in arctic.junctions(p):
                    yield f"lam={lam} mu={mu} {j['junction']}", max(j["position_gap"], j["direction_gap"])
                for which, (x, y) in arctic.diagonal_ends(p).items():
                    yield f"lam={lam} mu={mu} {which} on diagonal", abs(x + y)

    return _numeric("free-fermion-junctions", residuals(), tol)


def check_lambda_limits(tol_closed: float = 1e-9, tol_hausdorff: float = 5e-2, offset: float = 1e-4,
                        gap: float = 5e-3) -> list[IdentityResult]:
    """Closed-form limit pieces near lambda = -pi/4 and lambda = +pi/4.

    The closed part compares envelope points 1e-10 from the limit with the
    limiting formulas.  The continuity part takes the Hausdorff distance
    between the NE branch at ``offset`` from each limit and the assembled
    limit shape, both sampled with chords at most ``gap`` long.
    """
    def closed():
        # the pieces meet each other and the triangle where they should
        lim = arctic.free_fermion_limits("lambda->+pi/4")
        seg = lim.segments[0]
        big = 1e9
        yield "segment start", math.dist(seg.start, (-0.25, 0.75))
        yield "segment end", math.dist(seg.end, (-1.25, 1.75))
        # both ellipses approach the segment ends like 1/(4u)
        yield "first ellipse meets segment", abs(math.dist(arctic.ellipse_first(big), seg.start) - 1 / (4 * big))
        yield "second ellipse meets segment", abs(math.dist(arctic.ellipse_second(big), seg.end) - 1 / (4 * big))
        yield "second ellipse reaches the top", math.dist(arctic.ellipse_second(-1.0), (-5 / 3, 2.0))
        yield "lower segment ends", math.dist(arctic.segment_lower(0.0), (0.0, 2.0))
        # near-limit envelope points against the closed forms, error linear in eps
        eta = math.pi / 4
        lam = eta - 1e-10
        p = WeightParams(eta, lam, 0.0)
        with mpmath.workdps(arctic.HP_DPS):
            # measured from the float parameters, so input rounding does not leak in
            eps = mpmath.mpf(eta) - mpmath.mpf(lam)
            pole = mpmath.pi - 2 * mpmath.mpf(eta)
        for u in (0.3, 1.0, 3.0):
            h = u * float(eps) * 1e-2
            with mpmath.workdps(arctic.HP_DPS):
                near = u * eps
            got = arctic.envelope_point(p, "NE", near, h)
            yield f"ellipse one u={u}", math.dist(got, arctic.ellipse_first(u))
            with mpmath.workdps(arctic.HP_DPS):
                far = pole - u * eps
            got = arctic.envelope_point(p, "NE", far, h)
            yield f"ellipse two u={u}", math.dist(got, arctic.ellipse_second(u))
        for u in (-0.9, -0.5):
            # past the pole, still inside the NE range
            with mpmath.workdps(arctic.HP_DPS):
                beyond = pole - u * eps
            got = arctic.envelope_point(p, "NE", beyond, abs(u) * float(eps) * 1e-2)
            yield f"ellipse two u={u}", math.dist(got, arctic.ellipse_second(u))
        for xi in (0.3, 0.8, 1.2):
            yield f"upper segment xi={xi}", math.dist(arctic.envelope_point(p, "NE", xi), arctic.segment_upper(xi))

    def continuity():
        for case, lam in (("lambda->-pi/4", -math.pi / 4 + offset), ("lambda->+pi/4", math.pi / 4 - offset)):
            p = WeightParams(math.pi / 4, lam, 0.0)
            pts = arctic.adaptive_points(p, "NE", gap)
            lim = arctic.free_fermion_limits(case, 2000)
            yield f"{case} offset={offset}", arctic.hausdorff(pts, _limit_reference(lim, gap))

    return [_numeric("lambda-limits-closed", closed(), tol_closed),
            _numeric("lambda-limit-continuity", continuity(), tol_hausdorff)]


def _limit_reference(lim, gap):
    pts = [q for arc in lim.arcs for q in arc]
    for seg in lim.segments:
        a, b = np.asarray(seg.start), np.asarray(seg.end)
        n = int(np.linalg.norm(b - a) / gap) + 2
        pts.extend(a + t * (b - a) for t in np.linspace(0, 1, n))
    return np.asarray(pts, float)


def check_mu_limits(offset: float = 1e-6, tol_shape: float = 1e-9,
                    tol_hausdorff: float = 5e-2, gap: float = 5e-3) -> list[IdentityResult]:
    """Shape of the mu -> +-pi/8 limits at eta = pi/4, lambda = pi/8.

    With no closed form to compare against, the check is structural: the
    arcs at the limiting mu lie on one ellipse, both straight pieces are
    tangent to it, and the curve at ``offset`` from the limit is within
    the Hausdorff tolerance of the assembled shape.  Both sides are sampled
    with chords at most ``gap`` long, which bounds the sampling error.
    """
    shape, continuity = [], []
    for sign in (1, -1):
        lim = arctic.mu_limit(sign, max_gap=gap)
        coef, dist = arctic.conic_fit([q for arc in lim.arcs for q in arc])
        shape.append((f"{lim.case} conic residual", dist))
        shape.append((f"{lim.case} is an ellipse", 0.0 if arctic.is_ellipse(coef) else math.inf))
        for i, (seg, n) in enumerate(zip(lim.segments, lim.contact_normals)):
            d = np.subtract(seg.end, seg.start)
            shape.append((f"{lim.case} segment {i} tangency",
                          abs(float(d @ np.asarray(n))) / np.linalg.norm(d)))
        p = WeightParams(math.pi / 4, math.pi / 8, sign * (math.pi / 8 - offset))
        pts = [q for which in arctic.BRANCHES for q in arctic.adaptive_points(p, which, gap)]
        continuity.append((f"{lim.case} offset={offset}",
                           arctic.hausdorff(pts, _limit_reference(lim, gap))))

    return [_numeric("mu-limits-shape", shape, tol_shape),
            _numeric("mu-limit-continuity", continuity, tol_hausdorff)]


REGISTRY = {
    "counts": check_counts,
    "refined": check_refined,
    "evenodd": check_even_odd,
    "refined-evenodd": check_refined_even_odd,
    "top-coefficient": check_top_coefficient,
    "reversal": check_reversal,
    "bijection": check_bijection,
    "inhom": check_inhomogeneous,
    "weight-symmetry": check_weight_symmetry,
    "combinatorial-tau": check_combinatorial_tau,
    "saddle": check_saddle,
    "stationarity": check_stationarity,
    "uniform-geometry": check_uniform_geometry,
    "free-fermion-junctions": check_free_fermion_junctions,
    "lambda-limits": check_lambda_limits,
    "mu-limits": check_mu_limits,
}


def run(names=None, **overrides) -> list[IdentityResult]:
    """Run the named checks (all by default); ``overrides`` go to checks that accept them."""
    import inspect

    out = []
    for name in names or REGISTRY:
        fn = REGISTRY[name]
        params = inspect.signature(fn).parameters
        kw = {k: v for k, v in overrides.items() if k in params and v is not None}
        res = fn(**kw)
        out.extend(res if isinstance(res, list) else [res])
    return out


__all__ = ["IdentityResult", "REFERENCE_TOTALS", "REGISTRY", "run"]
