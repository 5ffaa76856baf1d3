"""Integrable Boltzmann weights of the twenty-vertex model.

Angles are in radians.  The trigonometric parametrization uses the
quantum parameter ``q = exp(i*eta)`` and the spectral angles
``lam`` (horizontal/vertical crossing) and ``mu`` (diagonal line).
All seven vertex classes are indexed 0..6.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import PhaseViolation, PoleError, ZeroOmegaZero

POLE_TOL = 1e-13

# class relabelling under the reflect-shear bijection and the diagonal
# reflection; entry i is the image label of class i
PI = (1, 0, 4, 3, 2, 5, 6)
PI_BAR = (0, 6, 5, 3, 4, 2, 1)


def compose(outer, inner):
    """Permutation ``i -> outer[inner[i]]``."""
    return tuple(outer[inner[i]] for i in range(len(inner)))


@dataclass(frozen=True)
class WeightParams:
    eta: float
    lam: float
    mu: float = 0.0
    nu: float = 1.0

    @property
    def alpha_ff(self) -> float:
        return math.pi / (math.pi - 2.0 * self.eta)

    @classmethod
    def combinatorial(cls) -> "WeightParams":
        """The point where all seven weights equal one."""
        return cls(math.pi / 8, 5 * math.pi / 8, 0.0, math.sqrt(2.0))

    @classmethod
    def random_disorder(cls, rng, margin: float = 0.02) -> "WeightParams":
        """Uniform-ish draw from the disordered region, kept ``margin`` away from its walls."""
        e = rng.uniform(margin, math.pi / 2 - margin)
        lam = rng.uniform(e + margin, math.pi - e - margin)
        room = lam - e - margin
        return cls(e, lam, rng.uniform(-room, room))

    def with_(self, **changes) -> "WeightParams":
        return replace(self, **changes)

    def disorder_violations(self) -> list[str]:
        e, lam, mu = self.eta, self.lam, self.mu
        out = []
        if not 0 < e:
            out.append("0 < eta")
        if not e < lam:
            out.append("eta < lambda")
        if not e - lam < mu:
            out.append("eta - lambda < mu")
        if not mu < lam - e:
            out.append("mu < lambda - eta")
        if not lam + e < math.pi:
            out.append("lambda + eta < pi")
        if not e < math.pi / 2:
            out.append("eta < pi/2")
        return out

    @property
    def in_disorder_phase(self) -> bool:
        return not self.disorder_violations()

    def free_fermion_violations(self, tol=1e-12) -> list[str]:
        """Constraints of the real free-fermion family (eta = pi/4, |lambda| < pi/4)."""
        e, lam, mu = self.eta, self.lam, self.mu
        out = []
        if abs(e - math.pi / 4) > tol:
            out.append("eta = pi/4")
        if not -math.pi / 4 < lam < math.pi / 4:
            out.append("-pi/4 < lambda < pi/4")
        if not abs(mu) < e - lam:
            out.append("|mu| < eta - lambda")
        return out

    @property
    def on_free_fermion_line(self) -> bool:
        return not self.free_fermion_violations()

    def require_curve_regime(self) -> None:
        """Raise PhaseViolation unless the params are disordered or free-fermion."""
        bad = self.disorder_violations()
        if bad and abs(self.eta - math.pi / 4) <= 1e-12:
            ff = self.free_fermion_violations()
            if not ff:
                return
            bad = ff
        if bad:
            raise PhaseViolation(bad)


@dataclass(frozen=True)
class SixVWeights:
    a: float
    b: float
    c: float

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class TwentyVWeights:
    omega: tuple = field(default=(1, 1, 1, 1, 1, 1, 1))

    def __post_init__(self):
        if len(self.omega) != 7:
            raise ValueError("exactly seven weights are required")
        object.__setattr__(self, "omega", tuple(self.omega))

    def __getitem__(self, i):
        return self.omega[i]

    def __iter__(self):
        return iter(self.omega)

    def __len__(self):
        return 7

    def permuted(self, perm: Sequence[int]) -> "TwentyVWeights":
        """Weights whose class ``i`` entry is ``omega[perm[i]]``."""
        return TwentyVWeights(tuple(self.omega[perm[i]] for i in range(7)))

    def scaled(self, factor) -> "TwentyVWeights":
        return TwentyVWeights(tuple(factor * w for w in self.omega))

    @classmethod
    def uniform(cls, value=1) -> "TwentyVWeights":
        return cls((value,) * 7)


def _beta(nu):
    return nu ** (1.0 / 3.0)


def six_vertex_weights(params: WeightParams, sublattice: int) -> SixVWeights:
    """(a, b, c) of one of the three six-vertex sublattices."""
    e, lam, mu = params.eta, params.lam, params.mu
    beta = _beta(params.nu)
    c = beta * math.sin(2 * e)
    if sublattice == 1:
        return SixVWeights(beta * math.sin(lam + e), beta * math.sin(lam - e), c)
    if sublattice == 2:
        return SixVWeights(beta * math.sin((lam + 3 * e - mu) / 2),
                           beta * math.sin((lam - e - mu) / 2), c)
    if sublattice == 3:
        return SixVWeights(beta * math.sin((lam + 3 * e + mu) / 2),
                           beta * math.sin((lam - e + mu) / 2), c)
    raise ValueError("sublattice must be 1, 2 or 3")


def _omega_tuple(e, lam, mu, nu, sin=math.sin):
    s2 = sin(2 * e)
    s_pe = sin(lam + e)
    s_me = sin(lam - e)
    big_m = sin((lam + 3 * e - mu) / 2)
    big_p = sin((lam + 3 * e + mu) / 2)
    small_p = sin((lam - e + mu) / 2)
    small_m = sin((lam - e - mu) / 2)
    # symmetric pairs are multiplied first so that mu -> -mu permutes bit for bit
    return (
        nu * s_pe * (big_m * big_p),
        nu * s_me * big_m * small_p,
        nu * s2 * s_me * big_m,
        nu * s2 ** 3 + nu * s_pe * (small_p * small_m),
        nu * s2 * (big_p * big_m),
        nu * s2 * s_me * big_p,
        nu * s_me * big_p * small_m,
    )


def twenty_v_weights(params: WeightParams, xi: float = 0.0) -> TwentyVWeights:
    """The seven class weights; ``xi`` shifts the last vertical line."""
    return TwentyVWeights(_omega_tuple(params.eta, params.lam + xi, params.mu + xi, params.nu))


def hat_params(p: WeightParams) -> WeightParams:
    return p.with_(lam=math.pi - (p.lam + p.eta + p.mu) / 2,
                   mu=math.pi - (3 * p.lam + p.eta - p.mu) / 2)


def bar_params(p: WeightParams) -> WeightParams:
    return p.with_(lam=math.pi - (p.lam + p.eta - p.mu) / 2,
                   mu=math.pi - (3 * p.lam + p.eta + p.mu) / 2)


def star_params(p: WeightParams) -> WeightParams:
    return p.with_(mu=-p.mu)


def _checked_ratio(num_factors, den_factors):
    out = 1.0
    for f in den_factors:
        if abs(f) < POLE_TOL:
            raise PoleError("vanishing sine in denominator")
        out /= f
    for f in num_factors:
        out *= f
    return out


def tau_xi(p: WeightParams, xi: float) -> float:
    e, lam, mu = p.eta, p.lam, p.mu
    lo, hi = (lam - e + mu) / 2, (lam + 3 * e + mu) / 2
    s = math.sin
    return _checked_ratio(
        (s(xi + lam - e), s(lam + e), s(xi + lo), s(hi)),
        (s(xi + lam + e), s(lam - e), s(xi + hi), s(lo)),
    )


def sigma_xi(p: WeightParams, xi: float) -> float:
    e, lam = p.eta, p.lam
    s = math.sin
    return _checked_ratio((s(xi + lam - e), s(lam + e)), (s(xi + lam + e), s(lam - e)))


def gamma_xi(p: WeightParams, xi: float) -> float:
    e, lam, mu = p.eta, p.lam, p.mu
    hi = (lam + 3 * e + mu) / 2
    s = math.sin
    return _checked_ratio((s(lam - e), s(xi + hi)), (s(xi + lam - e), s(hi)))


@dataclass(frozen=True)
class PathAlphas:
    alpha: tuple

    def __getitem__(self, i):
        """One-based access, ``alphas[1]`` .. ``alphas[6]``."""
        return self.alpha[i - 1]

    def __iter__(self):
        return iter(self.alpha)


def path_alphas(w) -> PathAlphas:
    """Single-path transfer weights; exact when ``w`` holds Fractions."""
    w0, w1, w2, w3, w4, w5, w6 = tuple(w)
    if w0 == 0:
        raise ZeroOmegaZero("omega_0 vanishes")
    sq = w0 * w0
    return PathAlphas((
        w1 / w0,
        w6 / w0,
        (w0 * w3 + w4 * w4 - w1 * w6) / sq,
        (w2 * w2 - w1 * w3) / sq,
        (w5 * w5 - w6 * w3) / sq,
        (2 * w2 * w4 * w5 + w1 * w6 * w3 - w3 * w4 * w4 - w1 * w5 * w5 - w6 * w2 * w2) / (sq * w0),
    ))


# spectral (complex) form ---------------------------------------------------

@dataclass(frozen=True)
class SpectralParams:
    """Unit-modulus spectral parameters stored by their angles.

    ``theta_z`` runs over horizontal lines from the top, ``theta_t`` over
    diagonal lines from the top and ``theta_w`` over vertical lines from the
    right.
    """

    theta_z: tuple
    theta_t: tuple
    theta_w: tuple
    xi: float = 0.0

    def __post_init__(self):
        for name in ("theta_z", "theta_t", "theta_w"):
            object.__setattr__(self, name, tuple(float(a) for a in getattr(self, name)))

    @property
    def z(self):
        return tuple(cmath.exp(1j * a) for a in self.theta_z)

    @property
    def t(self):
        return tuple(cmath.exp(1j * a) for a in self.theta_t)

    @property
    def w(self):
        return tuple(cmath.exp(1j * a) for a in self.theta_w)

    @classmethod
    def homogeneous(cls, params: "WeightParams", m: int, xi: float = 0.0) -> "SpectralParams":
        """All lines at the trigonometric point; the first vertical line shifted by ``xi``."""
        tw = [-(params.eta + params.lam)] * m
        tw[0] -= 2 * xi
        return cls([params.eta + params.lam] * m, [params.mu] * m, tw, xi)

    @classmethod
    def random(cls, m: int, rng) -> "SpectralParams":
        draw = lambda: [rng.uniform(-math.pi, math.pi) for _ in range(m)]
        return cls(draw(), draw(), draw())


def _sqrt_pair(theta_a, theta_b):
    return cmath.exp(0.5j * (theta_a + theta_b))


def spectral_omegas(theta_z, theta_t, theta_w, eta, nu0=1.0):
    """Seven class weights at unit-modulus spectral parameters given by their angles.

    Square roots of products are taken as ``exp(i(theta_a+theta_b)/2)``.
    """
    q = cmath.exp(1j * eta)
    z, t, w = cmath.exp(1j * theta_z), cmath.exp(1j * theta_t), cmath.exp(1j * theta_w)
    qq = q * q - 1 / (q * q)
    zw = z - w
    b1 = z / (q * q) - q * q * w
    a2 = q * z - t / q
    b2 = z / q - q * t
    a3 = q * t - w / q
    b3 = t / q - q * w
    return (
        nu0 * zw * a2 * a3,
        nu0 * b1 * a2 * b3,
        nu0 * b1 * a2 * qq * _sqrt_pair(theta_t, theta_w),
        nu0 * z * t * w * qq ** 3 + nu0 * zw * b2 * b3,
        nu0 * qq * _sqrt_pair(theta_z, theta_w) * a2 * a3,
        nu0 * b1 * qq * _sqrt_pair(theta_z, theta_t) * a3,
        nu0 * b1 * b2 * a3,
    )


def spectral_six_v(theta_z, theta_w, eta):
    """Sublattice-one (a, b, c) at spectral angles, unit normalization."""
    q = cmath.exp(1j * eta)
    z, w = cmath.exp(1j * theta_z), cmath.exp(1j * theta_w)
    return (z - w, z / (q * q) - q * q * w, (q * q - 1 / (q * q)) * _sqrt_pair(theta_z, theta_w))


def spectral_a2(theta_z, theta_t, eta):
    q = cmath.exp(1j * eta)
    return q * cmath.exp(1j * theta_z) - cmath.exp(1j * theta_t) / q


def spectral_a3(theta_t, theta_w, eta):
    q = cmath.exp(1j * eta)
    return q * cmath.exp(1j * theta_t) - cmath.exp(1j * theta_w) / q


__all__ = [
    "PI", "PI_BAR", "compose", "WeightParams", "SixVWeights", "TwentyVWeights", "PathAlphas",
    "SpectralParams", "six_vertex_weights", "twenty_v_weights", "hat_params", "bar_params", "star_params",
    "tau_xi", "sigma_xi", "gamma_xi", "path_alphas", "spectral_omegas", "spectral_six_v",
    "spectral_a2", "spectral_a3", "PhaseViolation",
]
