"""Refined partition functions as exact polynomials in tau."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number


def _clean(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


@dataclass(frozen=True)
class RefinedPoly:
    """Coefficients of ``tau^(k-1)``, stored lowest degree first (index 0 is k=1)."""

    coeffs: tuple

    @classmethod
    def from_coeffs(cls, coeffs) -> "RefinedPoly":
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return cls(tuple(c) if c else (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def refined(self, m: int) -> tuple:
        """The coefficient vector padded to length ``m``."""
        if self.degree > m - 1:
            raise ValueError(f"degree {self.degree} exceeds m-1 = {m - 1}")
        return tuple(self.coeffs) + (0,) * (m - len(self.coeffs))

    def __call__(self, tau):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * tau + c
        return acc

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return RefinedPoly.from_coeffs(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, Number):
            return RefinedPoly.from_coeffs(c * other for c in self.coeffs)
        other = _lift(other)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RefinedPoly.from_coeffs(out)

    __rmul__ = __mul__

    def reversed(self, m: int) -> "RefinedPoly":
        """``tau^(m-1) P(1/tau)``."""
        return RefinedPoly.from_coeffs(self.refined(m)[::-1])

    def exact(self) -> "RefinedPoly":
        return RefinedPoly.from_coeffs(_clean(c) for c in self.coeffs)

    def to_json(self):
        return [str(c) if isinstance(c, (int, Fraction)) else repr(c) for c in self.coeffs]

    def __str__(self):
        terms = []
        for d, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if d == 0 else f"{c}*tau" if d == 1 else f"{c}*tau^{d}")
        return " + ".join(terms) or "0"


def _lift(p):
    if isinstance(p, RefinedPoly):
        return p
    return RefinedPoly.from_coeffs([p])


__all__ = ["RefinedPoly"]
