"""Triangle domains, osculating-path configurations and their symmetries.

Coordinates put the origin at the bottom-right corner: the triangle of
size ``m`` has vertices ``(x, y)`` with ``1-m <= x <= 0``, ``0 <= y <= m-1``
and ``x + y >= 0``.  Path steps are H=(1,0), D=(1,-1), V=(0,-1).

A configuration is the set of occupied unit segments (interior edges and
the external half-edges hanging off the boundary).  Segments are stored as
sorted point pairs, so reflections and shears act on them directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainMismatch, IceRuleViolation, InvalidSize, OutOfDomain

STEPS = {"H": (1, 0), "D": (1, -1), "V": (0, -1)}
# incoming half-edges W, NW, N then outgoing E, SE, S
ENV_NAMES = ("W", "NW", "N", "E", "SE", "S")
_IN_STEPS = (STEPS["H"], STEPS["D"], STEPS["V"])
_OUT_STEPS = _IN_STEPS

BC_NAMES = ("DWBC1", "DWBC2", "DWBC3")

# environment bits (W, NW, N, E, SE, S) -> weight class
_CLASS_ROWS = """
000000 0
111111 0
001001 1
110110 1
001010 2
010001 2
101110 2
110101 2
010010 3
101101 3
001100 4
100001 4
011110 4
110011 4
010100 5
100010 5
011101 5
101011 5
100100 6
011011 6
"""
CLASS_TABLE = {
    tuple(int(ch) for ch in bits): int(cls)
    for bits, cls in (row.split() for row in _CLASS_ROWS.strip().splitlines())
}
# flat lookup by 6-bit code, bit 5 = W ... bit 0 = S; -1 marks non-ice environments
CLASS_BY_CODE = np.full(64, -1, dtype=np.int8)
for _env, _cls in CLASS_TABLE.items():
    CLASS_BY_CODE[int("".join(map(str, _env)), 2)] = _cls


def env_code(env) -> int:
    code = 0
    for bit in env:
        code = (code << 1) | int(bit)
    return code


def class_of_env(env) -> int:
    env = tuple(int(b) for b in env)
    if sum(env[:3]) != sum(env[3:]):
        raise IceRuleViolation(f"environment {env} has unbalanced in/out occupancy")
    return CLASS_TABLE[env]


def seg(p, q):
    return (p, q) if p <= q else (q, p)


def _add(p, d):
    return (p[0] + d[0], p[1] + d[1])


def _sub(p, d):
    return (p[0] - d[0], p[1] - d[1])


def line_family(segment) -> str:
    """'H', 'V', 'D' (down-right) or 'A' (up-right) by direction."""
    (x1, y1), (x2, y2) = segment
    dx, dy = x2 - x1, y2 - y1
    if dy == 0 and abs(dx) == 1:
        return "H"
    if dx == 0 and abs(dy) == 1:
        return "V"
    if abs(dx) == 1 and dy == -dx:
        return "D"
    if abs(dx) == 1 and dy == dx:
        return "A"
    raise DomainMismatch(f"segment {segment} is not a lattice step")


@lru_cache(maxsize=None)
def triangle_vertices(m: int) -> tuple:
    """Vertices in raster order: rows from the top, each row left to right."""
    return tuple((x, y) for y in range(m - 1, -1, -1) for x in range(-y, 1))


def _incident_segments(vertices: frozenset):
    internal, external = set(), set()
    for v in vertices:
        for d in _IN_STEPS:
            for other in (_sub(v, d), _add(v, d)):
                s = seg(v, other)
                (internal if other in vertices else external).add(s)
    return frozenset(internal), frozenset(external)


@dataclass(frozen=True)
class TriangleDomain:
    """A size-``m`` domain: vertex set, incident segments, fixed boundary."""

    m: int
    bc: str | None
    vertices: frozenset
    internal: frozenset
    external: frozenset
    boundary: frozenset  # occupied external segments

    @property
    def n(self) -> int:
        return (self.m + 1) // 2

    @property
    def segments(self) -> frozenset:
        return self.internal | self.external

    @property
    def is_standard(self) -> bool:
        if self.vertices != frozenset(triangle_vertices(self.m)):
            return False
        return all(line_family(s) != "A" for s in self.internal)

    def require_standard(self):
        if not self.is_standard:
            raise DomainMismatch("operation needs the upright triangle frame")

    def boundary_bit(self, vertex, name) -> int | None:
        """Fixed value of the named external half-edge at ``vertex``, else None."""
        s = _env_segment(vertex, name)
        if s not in self.external:
            return None
        return int(s in self.boundary)

    def with_boundary(self, boundary, bc) -> "TriangleDomain":
        return TriangleDomain(self.m, bc, self.vertices, self.internal, self.external,
                              frozenset(boundary))


def _env_segment(v, name):
    i = ENV_NAMES.index(name)
    if i < 3:
        return seg(_sub(v, _IN_STEPS[i]), v)
    return seg(v, _add(v, _OUT_STEPS[i - 3]))


def _dwbc3_boundary(m: int, external: frozenset) -> frozenset:
    n = (m + 1) // 2
    occupied = set()
    for v in triangle_vertices(m):
        x, y = v
        if x + y != 0:
            continue
        if m % 2 == 0:
            top = y >= n
            w_in, s_out = (1, 0) if top else (0, 1)
        else:
            if y > n - 1:
                w_in, s_out = 1, 0
            elif y == n - 1:
                w_in, s_out = 1, 1
            else:
                w_in, s_out = 0, 1
        if w_in:
            occupied.add(_env_segment(v, "W"))
        if s_out:
            occupied.add(_env_segment(v, "S"))
    assert occupied <= external
    return frozenset(occupied)


@lru_cache(maxsize=None)
def build_domain(m: int, bc: str = "DWBC3") -> TriangleDomain:
    """The triangle of size ``m`` with the requested domain-wall boundary.

    DWBC2 and DWBC1 boundaries are produced by pushing the DWBC3 boundary
    through the reflect-shear bijection and then the diagonal reflection.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidSize(f"size must be a positive integer, got {m!r}")
    m = int(m)
    bc = bc.upper()
    if bc not in BC_NAMES:
        raise ValueError(f"unknown boundary condition {bc!r}")
    verts = frozenset(triangle_vertices(m))
    internal, external = _incident_segments(verts)
    base = TriangleDomain(m, "DWBC3", verts, internal, external, _dwbc3_boundary(m, external))
    if bc == "DWBC3":
        return base
    cfg = PathConfig(base, base.boundary)
    two = apply_chain(cfg, ("VF", "R", "S"), check=False, label=False).domain
    two = two.with_boundary(two.boundary, "DWBC2")
    if bc == "DWBC2":
        return two
    one = transform(PathConfig(two, two.boundary), "Rstar", check=False, label=False).domain
    return one.with_boundary(one.boundary, "DWBC1")


def recognise_bc(domain: TriangleDomain) -> str | None:
    if not domain.is_standard:
        return None
    for name in BC_NAMES:
        if build_domain(domain.m, name).boundary == domain.boundary:
            return name
    return None


@dataclass(frozen=True)
class PathConfig:
    """Occupied segments of an osculating Schröder path configuration."""

    domain: TriangleDomain
    occupied: frozenset

    def __post_init__(self):
        object.__setattr__(self, "occupied", frozenset(self.occupied))

    @property
    def m(self) -> int:
        return self.domain.m

    def env(self, vertex) -> tuple:
        self.domain.require_standard()
        if vertex not in self.domain.vertices:
            raise OutOfDomain(f"{vertex} is not a vertex of the domain")
        return tuple(int(_env_segment(vertex, nm) in self.occupied) for nm in ENV_NAMES)

    def visited(self, vertex) -> bool:
        return any(self.env(vertex))

    def ice_ok(self) -> bool:
        for v in self.domain.vertices:
            e = self.env(v)
            if sum(e[:3]) != sum(e[3:]):
                return False
        return True

    def boundary_ok(self) -> bool:
        return self.occupied & self.domain.external == self.domain.boundary

    def is_valid(self) -> bool:
        return self.domain.is_standard and self.boundary_ok() and self.ice_ok()

    def classes(self) -> dict:
        return {v: class_of_env(self.env(v)) for v in triangle_vertices(self.m)}

    def class_counts(self) -> tuple:
        counts = [0] * 7
        for c in self.classes().values():
            counts[c] += 1
        return tuple(counts)

    def arrays(self) -> dict:
        """Dense 0/1 arrays per family, indexed ``[x + m, y]`` by the edge tail."""
        self.domain.require_standard()
        m = self.m
        out = {f: np.zeros((m + 1, m + 1), dtype=np.int8) for f in STEPS}
        for s in self.occupied:
            fam = line_family(s)
            p, q = s
            tail = p if _add(p, STEPS[fam]) == q else q
            out[fam][tail[0] + m, tail[1]] = 1
        return out

    def to_json(self) -> dict:
        arr = self.arrays()
        return {
            "schema": "twentyv.pathconfig/1",
            "m": self.m,
            "bc": self.domain.bc,
            **{fam: arr[fam].tolist() for fam in ("H", "D", "V")},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "PathConfig":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("schema") != "twentyv.pathconfig/1":
            raise ValueError("unsupported configuration schema")
        m = int(data["m"])
        dom = build_domain(m, data["bc"] or "DWBC3")
        occ = set()
        for fam, step in STEPS.items():
            a = np.asarray(data[fam])
            for i, y in zip(*np.nonzero(a)):
                tail = (int(i) - m, int(y))
                occ.add(seg(tail, _add(tail, step)))
        occ &= dom.segments
        dom = dom.with_boundary(occ & dom.external, None)
        dom = dom.with_boundary(dom.boundary, recognise_bc(dom))
        return cls(dom, occ)


# geometric maps -------------------------------------------------------------

def _point_maps(m):
    return {
        "R": lambda p: (p[0], m - 1 - p[1]),
        "S": lambda p: (p[0], p[1] - p[0]),
        "Rbar": lambda p: (-p[0], p[1]),
        "Sbar": lambda p: (p[0] - p[1], p[1]),
        "Rstar": lambda p: (p[1] - m + 1, p[0] + m - 1),
    }


_FLIPS = {"VF": ("V",), "HF": ("H",), "TotalFlip": ("H", "D", "V")}
TRANSFORMS = ("VF", "HF", "R", "Rbar", "S", "Sbar", "Rstar", "TotalFlip")


def _map_domain(domain: TriangleDomain, f) -> TriangleDomain:
    verts = frozenset(f(v) for v in domain.vertices)
    internal = frozenset(seg(f(p), f(q)) for p, q in domain.internal)
    external = frozenset(seg(f(p), f(q)) for p, q in domain.external)
    boundary = frozenset(seg(f(p), f(q)) for p, q in domain.boundary)
    return TriangleDomain(domain.m, None, verts, internal, external, boundary)


def transform(config: PathConfig, which: str, check: bool = True, label: bool = True) -> PathConfig:
    """Apply one flip, reflection or shear and return the image configuration.

    Flips complement every segment of the named families, boundary included.
    Point maps move the whole picture; the result is validated only when it
    lands back on the upright triangle.
    """
    dom = config.domain
    if which in _FLIPS:
        fams = _FLIPS[which]
        flipped = frozenset(s for s in dom.segments if line_family(s) in fams)
        occ = config.occupied ^ flipped
        new_dom = dom.with_boundary(occ & dom.external, None)
    elif which in ("R", "S", "Rbar", "Sbar", "Rstar"):
        f = _point_maps(dom.m)[which]
        new_dom = _map_domain(dom, f)
        occ = frozenset(seg(f(p), f(q)) for p, q in config.occupied)
        for s in new_dom.internal:
            line_family(s)
    else:
        raise ValueError(f"unknown transform {which!r}")
    if label:
        new_dom = new_dom.with_boundary(new_dom.boundary, recognise_bc(new_dom))
    out = PathConfig(new_dom, occ)
    if check and new_dom.is_standard and not out.ice_ok():
        raise IceRuleViolation(f"{which} produced an ice-rule violation")
    return out


def apply_chain(config: PathConfig, steps: Iterable[str], check: bool = True,
                label: bool = True) -> PathConfig:
    """Apply ``steps`` in the given order (first element acts first).

    Single flips need not respect the ice rule, so only the final image is
    checked.
    """
    steps = tuple(steps)
    for s in steps:
        config = transform(config, s, check=False, label=label)
    if check and config.domain.is_standard and not config.ice_ok():
        raise IceRuleViolation(f"chain {steps} produced an ice-rule violation")
    return config


def reflect_shear(config: PathConfig) -> PathConfig:
    """S after R after VF: the bijection DWBC3 -> DWBC2."""
    return apply_chain(config, ("VF", "R", "S"))


def reflect_shear_bar(config: PathConfig) -> PathConfig:
    """Sbar after Rbar after HF."""
    return apply_chain(config, ("HF", "Rbar", "Sbar"))


# statistics ------------------------------------------------------------------

def classify_vertex(config: PathConfig, vertex) -> int:
    return class_of_env(config.env(vertex))


def _column_hit(config: PathConfig):
    m = config.m
    for y in range(m - 1, -1, -1):
        e = config.env((0, y))
        if any(e):
            return y + 1, e
    return None, None


def _top_row_hit(config: PathConfig):
    m = config.m
    for x in range(0, -m, -1):
        e = config.env((x, m - 1))
        if any(e):
            return x + m, e
    return None, None


def first_hit_position(config: PathConfig) -> int:
    """Refined statistic ``k`` in ``1..m``.

    For DWBC3 and DWBC2 this is the height (from the bottom, starting at 1)
    of the topmost visited vertex of the last column.  For DWBC1 it is the
    position from the left of the rightmost visited vertex of the top row,
    the image of the former under the diagonal reflection.
    """
    if config.domain.bc == "DWBC1":
        k, _ = _top_row_hit(config)
    else:
        k, _ = _column_hit(config)
    if k is None:
        raise ValueError("no path reaches the measuring line")
    return k


def last_step_type(config: PathConfig) -> str:
    """'Horizontal' or 'Diagonal': how the path arrives at the hit vertex."""
    if config.domain.bc == "DWBC1":
        _, e = _top_row_hit(config)
        if e is None:
            raise ValueError("no path reaches the top row")
        return "Horizontal" if e[5] else "Diagonal"
    _, e = _column_hit(config)
    if e is None:
        raise ValueError("no path reaches the last column")
    return "Horizontal" if e[0] else "Diagonal"


PHASES = ("F0", "F1", "F2", "F3", "F4", "F5", "F6", "Liquid")
_PHASE_PATTERNS = {
    (0, 0, 0): "F0",
    (1, 0, 0): "F1",
    (0, 0, 1): "F2",
    (1, 1, 0): "F3",
    (0, 1, 1): "F4",
    (1, 1, 1): "F5",
    (0, 1, 0): "F6",
}


def phase_label(config: PathConfig, vertex, window: int) -> str:
    """Frozen-phase label of the square window with top-left corner ``vertex``.

    A frozen label requires every H, D and V edge inside the window to
    match the saturation pattern exactly; anything else is 'Liquid'.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    x0, y0 = vertex
    pts = {(x0 + i, y0 - j) for i in range(window + 1) for j in range(window + 1)}
    if not pts <= config.domain.vertices:
        raise OutOfDomain(f"window at {vertex} of side {window} leaves the domain")
    filled = {"H": set(), "D": set(), "V": set()}
    for p in pts:
        for fam, step in STEPS.items():
            q = _add(p, step)
            if q in pts:
                filled[fam].add(seg(p, q) in config.occupied)
    pattern = []
    for fam in ("H", "D", "V"):
        vals = filled[fam]
        if len(vals) != 1:
            return "Liquid"
        pattern.append(int(vals.pop()))
    return _PHASE_PATTERNS.get(tuple(pattern), "Liquid")


# conversion from kernel output ------------------------------------------------

def config_from_outcodes(domain: TriangleDomain, outcodes) -> PathConfig:
    """Rebuild a configuration from per-vertex out-bit codes (E<<2 | SE<<1 | S)."""
    occ = set(domain.boundary)
    for v, code in zip(triangle_vertices(domain.m), outcodes):
        code = int(code)
        for bit, step in zip((4, 2, 1), _OUT_STEPS):
            if code & bit:
                occ.add(seg(v, _add(v, step)))
    return PathConfig(domain, occ)


__all__ = [
    "STEPS", "ENV_NAMES", "CLASS_TABLE", "CLASS_BY_CODE", "class_of_env", "env_code",
    "TriangleDomain", "PathConfig", "build_domain", "triangle_vertices", "transform",
    "apply_chain", "reflect_shear", "reflect_shear_bar", "classify_vertex",
    "first_hit_position", "last_step_type", "phase_label", "config_from_outcodes",
    "recognise_bc", "TRANSFORMS", "PHASES", "line_family", "seg",
]
