"""Six-vertex DWBC side: series kernels, exact determinants and the 20V/6V count relations."""

from __future__ import annotations

from fractions import Fraction

from .caps import cap
from .errors import InvalidSize, SizeCapExceeded
from .polys import RefinedPoly


class BigSeries2D:
    """Truncated bivariate power series with exact rational coefficients.

    Coefficients of ``x^i y^j`` are stored for ``0 <= i < nx`` and ``0 <= j < ny``.
    """

    __slots__ = ("nx", "ny", "c")

    def __init__(self, nx: int, ny: int, coeffs=None):
        self.nx, self.ny = nx, ny
        if coeffs is None:
            coeffs = [[Fraction(0)] * ny for _ in range(nx)]
        self.c = coeffs

    @classmethod
    def from_terms(cls, nx, ny, terms: dict) -> "BigSeries2D":
        s = cls(nx, ny)
        for (i, j), v in terms.items():
            if i < nx and j < ny:
                s.c[i][j] += Fraction(v)
        return s

    @classmethod
    def one(cls, nx, ny):
        return cls.from_terms(nx, ny, {(0, 0): 1})

    def __getitem__(self, ij):
        i, j = ij
        return self.c[i][j]

    def __add__(self, other):
        other = self._coerce(other)
        return BigSeries2D(self.nx, self.ny, [[a + b for a, b in zip(r, s)] for r, s in zip(self.c, other.c)])

    def __neg__(self):
        return BigSeries2D(self.nx, self.ny, [[-a for a in r] for r in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def _coerce(self, other):
        if isinstance(other, BigSeries2D):
            if (other.nx, other.ny) != (self.nx, self.ny):
                raise ValueError("series truncation orders differ")
            return other
        return BigSeries2D.from_terms(self.nx, self.ny, {(0, 0): other})

    def scale(self, k) -> "BigSeries2D":
        k = Fraction(k)
        return BigSeries2D(self.nx, self.ny, [[a * k for a in r] for r in self.c])

    def __mul__(self, other):
        if not isinstance(other, BigSeries2D):
            return self.scale(other)
        other = self._coerce(other)
        nx, ny = self.nx, self.ny
        out = [[Fraction(0)] * ny for _ in range(nx)]
        nz = [(i, j, a) for i, r in enumerate(self.c) for j, a in enumerate(r) if a]
        onz = [(i, j, b) for i, r in enumerate(other.c) for j, b in enumerate(r) if b]
        for i, j, a in nz:
            for k, l, b in onz:
                if i + k < nx and j + l < ny:
                    out[i + k][j + l] += a * b
        return BigSeries2D(nx, ny, out)

    __rmul__ = __mul__

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def reciprocal(self) -> "BigSeries2D":
        """Newton iteration g <- g(2 - f g); needs a unit constant term."""
        c0 = self.c[0][0]
        if c0 == 0:
            raise ZeroDivisionError("series has zero constant term")
        g = BigSeries2D.from_terms(self.nx, self.ny, {(0, 0): 1 / c0})
        # each step doubles the total degree that is correct
        correct = 1
        while correct < self.nx + self.ny:
            g = g * (2 - self * g)
            correct *= 2
        return g

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for r in self.c for a in r)

    def to_list(self):
        return [[a for a in r] for r in self.c]


def _poly_series(nx, ny, terms):
    return BigSeries2D.from_terms(nx, ny, terms)


def series_kernel(n: int, refined: bool = False, tau=1) -> BigSeries2D:
    """Coefficient kernel of the 6V-DWBC determinant, truncated to orders (n, n).

    The refined variant adds ``x y^(n-1) (tau-1)/(1-tau x) (1+x)^n/(1-x)^(n+1)``
    evaluated at the given exact ``tau``.
    """
    if n < 1:
        raise InvalidSize("n must be at least 1")
    N = n
    one_minus_xy = _poly_series(N, N, {(0, 0): 1, (1, 1): -1})
    one_minus_x = _poly_series(N, N, {(0, 0): 1, (1, 0): -1})
    quad = _poly_series(N, N, {(0, 0): 1, (1, 0): -1, (0, 1): -1, (1, 1): -1})
    two_x = _poly_series(N, N, {(1, 0): 2})
    k = one_minus_xy.reciprocal() + two_x * (one_minus_x * quad).reciprocal()
    if refined:
        tau = Fraction(tau)
        one_plus_x = _poly_series(N, N, {(0, 0): 1, (1, 0): 1})
        num = _poly_series(N, N, {(1, n - 1): tau - 1})
        pw = BigSeries2D.one(N, N)
        for _ in range(n):
            pw = pw * one_plus_x
        den = _poly_series(N, N, {(0, 0): 1, (1, 0): -tau})
        for _ in range(n + 1):
            den = den * one_minus_x
        k = k + num * pw * den.reciprocal()
    return k


def bareiss_det(matrix) -> int:
    """Fraction-free determinant of a square integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_cap(n):
    lim = cap("det")
    if n > lim:
        raise SizeCapExceeded(f"n={n} exceeds the determinant cap {lim}")


def kernel_matrix(n: int, refined: bool = False, tau=1):
    ser = series_kernel(n, refined, tau)
    if not ser.is_integral():
        raise ArithmeticError("kernel coefficients are not integers")
    return [[int(ser[i, j]) for j in range(n)] for i in range(n)]


def z6v_det(n: int) -> int:
    """Number of 6V-DWBC configurations at the combinatorial point, by determinant."""
    if n < 1:
        raise InvalidSize("n must be at least 1")
    _det_cap(n)
    return bareiss_det(kernel_matrix(n))


def _interpolate(xs, ys):
    """Exact Lagrange interpolation; returns coefficient list, lowest degree first."""
    coeffs = [Fraction(0)] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d, b in enumerate(basis):
            coeffs[d] += yi * b / denom
    return coeffs


def z6v_refined_det(n: int) -> RefinedPoly:
    """Refined 6V count, already in the variable tau = 2 sigma - 1.

    Only the last column depends on tau, with degree below ``n``, so
    ``n + 2`` evaluation points determine the determinant exactly.
    """
    if n < 1:
        raise InvalidSize("n must be at least 1")
    _det_cap(n)
    xs = list(range(n + 2))
    ys = [bareiss_det(kernel_matrix(n, True, t)) for t in xs]
    coeffs = _interpolate([Fraction(x) for x in xs], ys)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("refined determinant is not an integer polynomial")
    return RefinedPoly.from_coeffs([int(c) for c in coeffs])


def counts_from_6v(m: int) -> int:
    """20V DWBC3 count from the 6V determinant."""
    if m < 1:
        raise InvalidSize("m must be at least 1")
    n = (m + 1) // 2
    z = z6v_det(n)
    if m % 2 == 0:
        return 2 ** (n * (n + 1) // 2) * z
    return 2 ** (n * (n - 1) // 2) * z


def refined_from_6v(m: int, bc: str = "DWBC3") -> RefinedPoly:
    """20V refined polynomial from the refined determinant."""
    if m < 1:
        raise InvalidSize("m must be at least 1")
    n = (m + 1) // 2
    core = z6v_refined_det(n)
    if m % 2 == 0:
        pre = 2 ** (n * (n - 1) // 2)
        power = n
    else:
        pre = 2 ** ((n - 1) * (n - 2) // 2)
        power = n - 1
    one_plus_tau = RefinedPoly.from_coeffs([1, 1])
    out = core * pre
    for _ in range(power):
        out = out * one_plus_tau
    out = out.exact()
    if bc.upper() == "DWBC3":
        return out
    if bc.upper() in ("DWBC1", "DWBC2"):
        return out.reversed(m)
    raise InvalidSize(f"unknown boundary condition {bc!r}")


# brute force on the square --------------------------------------------------

def _as_cell_fn(w):
    if callable(w):
        return w
    return lambda i, j: w


def brute_6v_dwbc(n: int, a, b, c):
    """Exhaustive 6V-DWBC sum on the n x n square with per-cell weights.

    Paths enter from the west on every row and leave to the south on every
    column.  ``a``, ``b``, ``c`` are constants or callables ``(row, col)``
    with rows counted from the top and columns from the left.  A cell is
    type a when its west and north edges agree, type b when west and east
    agree, and type c otherwise.
    """
    if n < 1:
        raise InvalidSize("n must be at least 1")
    lim = cap("brute6v")
    if n > lim:
        raise SizeCapExceeded(f"n={n} exceeds the 6V brute-force cap {lim}")
    fa, fb, fc = _as_cell_fn(a), _as_cell_fn(b), _as_cell_fn(c)
    table = [[(fa(i, j), fb(i, j), fc(i, j)) for j in range(n)] for i in range(n)]
    total = 0
    # vertical occupancy entering the current row from above, as a tuple
    def rows(i, above, weight):
        nonlocal total
        if i == n:
            if all(above):
                total += weight
            return
        for below, wrow in _row_fills(n, above, table[i]):
            rows(i + 1, below, weight * wrow)

    rows(0, (0,) * n, 1)
    return total


def _row_fills(n, above, cells):
    """All ways to route one row given the vertical inputs; yields (outputs, weight)."""
    out = []

    def go(j, h, below, w):
        if j == n:
            if h == 0:
                out.append((tuple(below), w))
            return
        north = above[j]
        for south in (0, 1):
            east = h + north - south
            if east not in (0, 1):
                continue
            aw, bw, cw = cells[j]
            if h == north:
                f = aw
            elif h == east:
                f = bw
            else:
                f = cw
            go(j + 1, east, below + [south], w * f)

    go(0, 1, [], 1)
    return out


def combinatorial_six_v():
    """Sublattice-one weights at the combinatorial point, (1, sqrt 2, 1)."""
    return 1.0, 2.0 ** 0.5, 1.0


__all__ = [
    "BigSeries2D", "series_kernel", "bareiss_det", "kernel_matrix", "z6v_det",
    "z6v_refined_det", "counts_from_6v", "refined_from_6v", "brute_6v_dwbc",
    "combinatorial_six_v",
]
