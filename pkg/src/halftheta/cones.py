"""Cones, subcones, bisector projections and canonical triangles.

The six cones around a vertex are numbered by *sector* ``k`` (0..5), the
open wedge between the rays at ``60k`` and ``60(k+1)`` degrees.  Counter-
clockwise from the positive x-axis the sectors are the negative cone 1,
positive cone 0, negative 2, positive 1, negative 0 and positive 2.
:class:`ConeRef` gives the polarity/index view of a sector.

All direction tests reduce to signs in Q[sqrt(3)].  Unit vectors of the
rays and bisectors are stored doubled, as ``(xa, xb, ya, yb)`` meaning
``2*cos = xa + xb*sqrt(3)`` and ``2*sin = ya + yb*sqrt(3)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, cmp_to_key
from typing import NamedTuple, Optional

from .exact import ExtScalar, Point, orient, properly_intersect, scalar, sign_ext

RAYS = (
    (2, 0, 0, 0),
    (1, 0, 0, 1),
    (-1, 0, 0, 1),
    (-2, 0, 0, 0),
    (-1, 0, 0, -1),
    (1, 0, 0, -1),
)
BISECTORS = (
    (0, 1, 1, 0),
    (0, 0, 2, 0),
    (0, -1, 1, 0),
    (0, -1, -1, 0),
    (0, 0, -2, 0),
    (0, 1, -1, 0),
)


class DegenerateDirection(ValueError):
    """A direction lies on one of the cone rays."""


class NotInPositiveCone(ValueError):
    pass


class InvalidInstance(ValueError):
    def __init__(self, report):
        super().__init__(f"instance violates general position: {report.summary()}")
        self.report = report


class ConeRef(NamedTuple):
    positive: bool
    index: int

    @property
    def sector(self) -> int:
        if self.positive:
            return 1 + 2 * self.index
        return (4 + 2 * self.index) % 6

    @classmethod
    def from_sector(cls, k: int) -> "ConeRef":
        if k % 2:
            return cls(True, (k - 1) // 2)
        return cls(False, ((k - 4) // 2) % 3)

    @classmethod
    def pos(cls, i: int) -> "ConeRef":
        return cls(True, i % 3)

    @classmethod
    def neg(cls, i: int) -> "ConeRef":
        return cls(False, i % 3)

    def opposite(self) -> "ConeRef":
        return ConeRef(not self.positive, self.index)

    def __str__(self):
        return f"C{self.index}" if self.positive else f"Cbar{self.index}"


class SubconeRef(NamedTuple):
    apex: int
    cone: ConeRef
    j: int

    def __str__(self):
        return f"{self.cone}[{self.j}]@{self.apex}"


@dataclass(frozen=True)
class Subcone:
    """One sector of a cone between two bounding directions.

    ``cw`` / ``ccw`` hold the far endpoint of the constraint whose line
    bounds the subcone on that side, or None where the cone's own ray does.
    """

    ref: SubconeRef
    cw: Optional[int]
    ccw: Optional[int]

    @property
    def apex(self) -> int:
        return self.ref.apex

    @property
    def cone(self) -> ConeRef:
        return self.ref.cone


# --- direction arithmetic -------------------------------------------------

def vec_dot(vec, dx, dy):
    """Twice the dot product of a stored unit vector with (dx, dy), as (a, b)."""
    xa, xb, ya, yb = vec
    return xa * dx + ya * dy, xb * dx + yb * dy


def vec_cross(vec, dx, dy):
    """Twice cross(unit vector, (dx, dy)), as (a, b)."""
    xa, xb, ya, yb = vec
    return xa * dy - ya * dx, xb * dy - yb * dx


def sector_of(dx, dy) -> int:
    """Sector of direction (dx, dy); raises DegenerateDirection on a ray."""
    if dy == 0:
        raise DegenerateDirection(f"direction ({dx}, {dy}) is horizontal")
    if dy < 0:
        return 3 + sector_of(-dx, -dy)
    s1 = sign_ext(dy, -dx)  # against the 60 degree ray
    if s1 < 0:
        return 0
    s2 = sign_ext(-dy, -dx)  # against the 120 degree ray
    if s1 == 0 or s2 == 0:
        raise DegenerateDirection(f"direction ({dx}, {dy}) lies on a cone ray")
    return 1 if s2 < 0 else 2


def in_closed_sector(k: int, dx, dy) -> bool:
    return (sign_ext(*vec_cross(RAYS[k], dx, dy)) >= 0
            and sign_ext(*vec_cross(RAYS[(k + 1) % 6], dx, dy)) <= 0)


def cone_of(u, p) -> ConeRef:
    """The open cone of apex ``u`` containing ``p``."""
    return ConeRef.from_sector(sector_of(p[0] - u[0], p[1] - u[1]))


def bisector_projection(u, cone: ConeRef, p) -> ExtScalar:
    """Signed length of the projection of ``p - u`` onto the cone bisector."""
    a, b = vec_dot(BISECTORS[cone.sector], Fraction(p[0] - u[0]), Fraction(p[1] - u[1]))
    return ExtScalar(a / 2, b / 2)


def ccw_compare(apex):
    """Comparator ordering points of one cone counterclockwise about ``apex``."""
    def cmp(p, q):
        return -orient(apex, p, q)
    return cmp


# --- instances ------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """Point set plus non-crossing constraint segments (pairs of indices)."""

    points: tuple
    constraints: frozenset = frozenset()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def build(cls, coords, constraints=(), meta=None) -> "Instance":
        pts = tuple(p if isinstance(p, Point) else Point.of(*p) for p in coords)
        cons = frozenset(tuple(sorted((int(a), int(b)))) for a, b in constraints)
        return cls(pts, cons, dict(meta or {}))

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def scale(self) -> int:
        den = 1
        for p in self.points:
            den = math.lcm(den, p.x.denominator, p.y.denominator)
        return den

    @cached_property
    def ipts(self) -> tuple:
        """Coordinates multiplied by :attr:`scale`; exact integers.

        A uniform scaling preserves every orientation, cone and projection
        order, so all combinatorial decisions run on these.
        """
        s = self.scale
        return tuple((int(p.x * s), int(p.y * s)) for p in self.points)

    def to_internal(self, p):
        """Map an exact Point (or vertex id) into the scaled frame."""
        if isinstance(p, int):
            return self.ipts[p]
        s = self.scale
        x, y = scalar(p[0]) * s, scalar(p[1]) * s
        return (int(x) if x.denominator == 1 else x, int(y) if y.denominator == 1 else y)

    @cached_property
    def sectors(self) -> list:
        """``sectors[u][v]`` = sector of v around u, or -1 if undefined."""
        ip = self.ipts
        n = len(ip)
        table = [[-1] * n for _ in range(n)]
        for u in range(n):
            ux, uy = ip[u]
            row = table[u]
            for v in range(u + 1, n):
                try:
                    k = sector_of(ip[v][0] - ux, ip[v][1] - uy)
                except DegenerateDirection:
                    continue
                row[v] = k
                table[v][u] = (k + 3) % 6
        return table

    @cached_property
    def constrained_neighbors(self) -> tuple:
        nb = [[] for _ in range(self.n)]
        for a, b in sorted(self.constraints):
            if 0 <= a < self.n and 0 <= b < self.n:
                nb[a].append(b)
                nb[b].append(a)
        return tuple(tuple(x) for x in nb)

    def c(self, v: int) -> int:
        """Number of constraints incident to v."""
        return len(self.constrained_neighbors[v])

    def c_cone(self, v: int, cone: ConeRef) -> int:
        k = cone.sector
        return sum(1 for z in self.constrained_neighbors[v] if self.sectors[v][z] == k)

    @cached_property
    def validation(self) -> "ValidationReport":
        return validate_general_position(self)

    def require_valid(self) -> "Instance":
        if not self.validation.ok:
            raise InvalidInstance(self.validation)
        return self

    @cached_property
    def lengths(self) -> list:
        """Pairwise Euclidean lengths as correctly rounded doubles."""
        from .exact import exact_sqrt_rounded
        n = self.n
        ip = self.ipts
        s2 = Fraction(self.scale) ** 2
        out = [[0.0] * n for _ in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                dx = ip[v][0] - ip[u][0]
                dy = ip[v][1] - ip[u][1]
                out[u][v] = out[v][u] = exact_sqrt_rounded(Fraction(dx * dx + dy * dy) / s2)
        return out

    def length(self, u: int, v: int) -> float:
        return self.lengths[u][v]


@dataclass
class ValidationReport:
    coincident: list = field(default_factory=list)
    aligned: list = field(default_factory=list)
    collinear: list = field(default_factory=list)
    crossing: list = field(default_factory=list)
    bad_constraints: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.coincident or self.aligned or self.collinear
                    or self.crossing or self.bad_constraints)

    def summary(self) -> str:
        parts = []
        for name in ("coincident", "aligned", "collinear", "crossing", "bad_constraints"):
            items = getattr(self, name)
            if items:
                parts.append(f"{name}={items[:5]}" + ("..." if len(items) > 5 else ""))
        return "; ".join(parts) or "ok"

    def as_dict(self) -> dict:
        return {
            "coincident": [list(x) for x in self.coincident],
            "aligned": [list(x) for x in self.aligned],
            "collinear": [list(x) for x in self.collinear],
            "crossing": [[list(a), list(b)] for a, b in self.crossing],
            "bad_constraints": [[list(c), why] for c, why in self.bad_constraints],
        }


def validate_general_position(inst: Instance) -> ValidationReport:
    """List every pair, triple and constraint pair that breaks the input rules."""
    rep = ValidationReport()
    ip = inst.ipts
    n = inst.n
    for i, j in itertools.combinations(range(n), 2):
        if ip[i] == ip[j]:
            rep.coincident.append((i, j))
        elif inst.sectors[i][j] < 0:
            rep.aligned.append((i, j))
    for i, j, k in itertools.combinations(range(n), 3):
        if orient(ip[i], ip[j], ip[k]) == 0 and ip[i] != ip[j] != ip[k] != ip[i]:
            rep.collinear.append((i, j, k))
    good = []
    for a, b in sorted(inst.constraints):
        if not (0 <= a < n and 0 <= b < n):
            rep.bad_constraints.append(((a, b), "vertex id out of range"))
        elif a == b:
            rep.bad_constraints.append(((a, b), "self-loop"))
        else:
            good.append((a, b))
    for c1, c2 in itertools.combinations(good, 2):
        if properly_intersect((ip[c1[0]], ip[c1[1]]), (ip[c2[0]], ip[c2[1]])):
            rep.crossing.append((c1, c2))
    return rep


# --- subcones -------------------------------------------------------------

def subcones_of(inst: Instance, u: int, cone: ConeRef) -> list:
    """Subcones of ``cone`` at vertex ``u``, counterclockwise."""
    k = cone.sector
    row = inst.sectors[u]
    apex = inst.ipts[u]
    splitters = [z for z in inst.constrained_neighbors[u] if row[z] == k]
    splitters.sort(key=cmp_to_key(lambda a, b: -orient(apex, inst.ipts[a], inst.ipts[b])))
    bounds = [None] + splitters + [None]
    return [Subcone(SubconeRef(u, cone, j), bounds[j], bounds[j + 1])
            for j in range(len(splitters) + 1)]


def member(inst: Instance, sc: Subcone, v) -> bool:
    """Membership of vertex id (or exact point) ``v`` in subcone ``sc``.

    Cone rays are exclusive; constraint lines bounding the subcone are
    inclusive, so a splitting constraint's endpoint is in both neighbours.
    """
    u = sc.apex
    apex = inst.ipts[u]
    if isinstance(v, int):
        if v == u or inst.sectors[u][v] != sc.cone.sector:
            return False
        p = inst.ipts[v]
    else:
        p = inst.to_internal(v)
        if p == apex:
            return False
        try:
            if sector_of(p[0] - apex[0], p[1] - apex[1]) != sc.cone.sector:
                return False
        except DegenerateDirection:
            return False
    if sc.cw is not None and orient(apex, inst.ipts[sc.cw], p) < 0:
        return False
    if sc.ccw is not None and orient(apex, inst.ipts[sc.ccw], p) > 0:
        return False
    return True


def membership(inst: Instance, subcone, p) -> bool:
    """Wrapper over member(); ``subcone`` may be a Subcone or a SubconeRef."""
    if isinstance(subcone, SubconeRef):
        subcone = subcones_of(inst, subcone.apex, subcone.cone)[subcone.j]
    return member(inst, subcone, p)


def projection_key(inst: Instance, u: int, k: int, v: int) -> ExtScalar:
    """Doubled bisector projection of v in sector k of u, in the scaled frame.

    Only useful for comparisons between vertices sharing ``u`` and ``k``.
    """
    ux, uy = inst.ipts[u]
    vx, vy = inst.ipts[v]
    return ExtScalar(*vec_dot(BISECTORS[k], vx - ux, vy - uy))


# --- canonical triangles ----------------------------------------------------

@dataclass(frozen=True)
class CanonicalTriangle:
    """Triangle bounded by the two rays of u's positive cone and the line
    through w perpendicular to the bisector.

    Corners are pairs of ExtScalar coordinates; ``corner_a`` is on the
    counterclockwise ray (upper left for C0), ``corner_b`` on the clockwise one.
    """

    apex: int
    target: int
    sector: int
    apex_point: Point
    height: ExtScalar
    corner_a: tuple
    corner_b: tuple
    tan_alpha: ExtScalar
    alpha: float

    @property
    def cone(self) -> ConeRef:
        return ConeRef.from_sector(self.sector)


def _ray_point(u: Point, k: int, t: ExtScalar) -> tuple:
    xa, xb, ya, yb = RAYS[k]
    half = Fraction(1, 2)
    rx = ExtScalar(half * xa, half * xb)
    ry = ExtScalar(half * ya, half * yb)
    return (u.x + t * rx, u.y + t * ry)


def canonical_triangle(inst: Instance, u: int, w: int) -> CanonicalTriangle:
    k = inst.sectors[u][w]
    if k < 0 or k % 2 == 0:
        raise NotInPositiveCone(f"vertex {w} is not in a positive cone of {u}")
    pu, pw = inst.points[u], inst.points[w]
    dx, dy = pw.x - pu.x, pw.y - pu.y
    a, b = vec_dot(BISECTORS[k], dx, dy)
    height = ExtScalar(Fraction(a, 2), Fraction(b, 2))
    ca, cb = vec_cross(BISECTORS[k], dx, dy)
    offset = abs(ExtScalar(Fraction(ca, 2), Fraction(cb, 2)))
    # distance along a ray to reach the perpendicular line: 2*height/sqrt(3)
    t = ExtScalar(2 * height.b, Fraction(2, 3) * height.a)
    return CanonicalTriangle(
        apex=u, target=w, sector=k, apex_point=pu, height=height,
        corner_a=_ray_point(pu, (k + 1) % 6, t),
        corner_b=_ray_point(pu, k, t),
        tan_alpha=offset / height,
        alpha=math.atan2(float(offset), float(height)),
    )


def contains_point(tri: CanonicalTriangle, p) -> bool:
    """Closed-triangle membership for an exact point."""
    u = tri.apex_point
    dx, dy = scalar(p[0]) - u.x, scalar(p[1]) - u.y
    if not in_closed_sector(tri.sector, dx, dy):
        return False
    a, b = vec_dot(BISECTORS[tri.sector], dx, dy)
    return ExtScalar(Fraction(a, 2), Fraction(b, 2)) <= tri.height
