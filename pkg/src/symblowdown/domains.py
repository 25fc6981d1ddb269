"""Polygonal moment domains and their boundary-reduction data.

A domain is stored as its boundary chain, traversed with the interior on the
left.  Open chains start and end with unbounded rays; closed cycles are
finite polygons.  Every edge remembers whether it is part of the domain
(``closed``) or removed from it (open), and vertices may be excluded
individually, which is how ``{p2 > 0}`` style conditions are modelled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import (
    ORIGIN,
    Number,
    UnimodularMap,
    Vec,
    as_rational,
    chain_convergents,
    general_convergents,
    lens_from_corner,
)


class DomainError(ValueError):
    """Raised for malformed domains or violated construction preconditions."""


class InfeasibleBallError(DomainError):
    """Section areas do not satisfy ``alpha_plus > (n+1) alpha_minus > 0``."""


@dataclass(frozen=True)
class Edge:
    direction: Vec
    start: Optional[Vec]
    end: Optional[Vec]
    closed: bool = True
    label: str = ""

    @property
    def bounded(self) -> bool:
        return self.start is not None and self.end is not None

    @property
    def anchor(self) -> Vec:
        return self.start if self.start is not None else self.end

    def lattice_length(self) -> Fraction:
        if not self.bounded:
            raise DomainError(f"edge {self.label or '?'} is unbounded")
        d = self.end - self.start
        if self.direction.x != 0:
            return Fraction(d.x) / self.direction.x
        return Fraction(d.y) / self.direction.y

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "direction": [int(self.direction.x), int(self.direction.y)],
            "start": None if self.start is None else self.start.to_json(),
            "end": None if self.end is None else self.end.to_json(),
            "closed": self.closed,
        }


@dataclass(frozen=True)
class HalfPlane:
    """``normal . p >= offset`` (strict when ``strict``)."""

    normal: Vec
    offset: Fraction
    strict: bool

    def value(self, p: Vec) -> Fraction:
        return self.normal.dot(p) - self.offset


@dataclass(frozen=True)
class EdgeInvariant:
    label: str
    area: Fraction
    self_intersection: Optional[int]


@dataclass(frozen=True)
class PolyDomain:
    edges: tuple[Edge, ...]
    excluded: frozenset = field(default_factory=frozenset)
    lens_corners: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        object.__setattr__(self, "lens_corners", frozenset(self.lens_corners))
        self._validate()

    def _validate(self):
        edges = self.edges
        if len(edges) < 2:
            raise DomainError("a domain needs at least two edges")
        for k, e in enumerate(edges):
            if not e.direction.is_primitive():
                raise DomainError(f"edge {k} direction {tuple(e.direction)} is not primitive")
            if e.start is None and e.end is None:
                raise DomainError(f"edge {k} is unbounded at both ends")
            if e.start is None and k != 0 or e.end is None and k != len(edges) - 1:
                raise DomainError(f"only the first/last edge may be unbounded (edge {k})")
            if e.bounded:
                d = e.end - e.start
                if d.cross(e.direction) != 0 or d.dot(e.direction) <= 0:
                    raise DomainError(f"edge {k} endpoints do not follow its direction")
        if self.is_cycle:
            if edges[0].start is None or edges[-1].end is None:
                raise DomainError("mixed bounded/unbounded ends")
        elif edges[0].start is not None or edges[-1].end is not None:
            raise DomainError("an open boundary chain must start and end with rays")
        for prev, nxt in self.corners():
            if prev.end != nxt.start:
                raise DomainError(f"edges {prev.label!r} and {nxt.label!r} do not share a vertex")
            det = prev.direction.cross(nxt.direction)
            if det == 0:
                raise DomainError(f"edges {prev.label!r} and {nxt.label!r} are parallel")
            if abs(det) != 1 and prev.end not in self.lens_corners:
                raise DomainError(f"vertex {tuple(prev.end)} is neither Delzant nor a marked lens corner")

    @property
    def is_cycle(self) -> bool:
        return self.edges[0].start is not None

    def corners(self) -> list[tuple[Edge, Edge]]:
        """(incoming, outgoing) edge pairs at each finite vertex, in boundary order."""
        pairs = list(zip(self.edges, self.edges[1:]))
        if self.is_cycle:
            pairs.append((self.edges[-1], self.edges[0]))
        return pairs

    @property
    def vertices(self) -> list[Vec]:
        return [prev.end for prev, _ in self.corners()]

    def rays(self) -> list[Vec]:
        """Recession directions of an open chain (empty for a cycle)."""
        if self.is_cycle:
            return []
        return [-self.edges[0].direction, self.edges[-1].direction]

    def corner_type(self, vertex: Vec) -> tuple[int, int]:
        for prev, nxt in self.corners():
            if prev.end == vertex:
                return lens_from_corner(-prev.direction, nxt.direction)
        raise DomainError(f"{tuple(vertex)} is not a vertex")

    def is_delzant(self, vertex: Vec) -> bool:
        return self.corner_type(vertex) == (1, 0)

    def includes_vertex(self, vertex: Vec) -> bool:
        if vertex in self.excluded:
            return False
        for prev, nxt in self.corners():
            if prev.end == vertex:
                return prev.closed and nxt.closed
        raise DomainError(f"{tuple(vertex)} is not a vertex")

    def halfplanes(self) -> list[HalfPlane]:
        return [
            HalfPlane(e.direction.left_normal(), Fraction(e.direction.left_normal().dot(e.anchor)), not e.closed)
            for e in self.edges
        ]

    def is_convex(self) -> bool:
        if any(prev.direction.cross(nxt.direction) <= 0 for prev, nxt in self.corners()):
            return False
        if not self.is_cycle:
            return self.edges[-1].direction.cross(-self.edges[0].direction) > 0
        return True

    def with_closed(self, closed: bool) -> "PolyDomain":
        return replace(self, edges=tuple(replace(e, closed=closed) for e in self.edges))

    def edge(self, label: str) -> Edge:
        for e in self.edges:
            if e.label == label:
                return e
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "edges": [e.to_json() for e in self.edges],
            "excluded": sorted((v.to_json() for v in self.excluded)),
            "lens_corners": sorted((v.to_json() for v in self.lens_corners)),
        }


def _point(x, y) -> Vec:
    return Vec(as_rational(x), as_rational(y)).exact()


# --- constructors -------------------------------------------------------------


def make_wedge(n: int, m: int, corner: Vec = ORIGIN) -> PolyDomain:
    """The wedge ``{p1 >= 0} & {p2 >= (m/n) p1}`` whose reduction is ``V_{n,m}``.

    ``(n, m) = (1, 0)`` gives the closed quadrant.  For ``n > 1`` the corner is
    a lens point and is removed from the domain.
    """
    n, m = int(n), int(m)
    if (n, m) != (1, 0):
        if not n >= m >= 1:
            raise DomainError(f"need n >= m >= 1, got ({n}, {m})")
        if math.gcd(n, m) != 1:
            raise DomainError(f"({n}, {m}) not coprime")
    corner = corner.exact()
    edges = (
        Edge(Vec(0, -1), None, corner, True, "L0"),
        Edge(Vec(n, m), corner, None, True, "L1"),
    )
    lens = {corner} if n > 1 else set()
    return PolyDomain(edges, excluded=lens, lens_corners=lens)


def _plumbing_from_directions(directions: Sequence[Vec], areas: Sequence[Fraction], collar: bool) -> PolyDomain:
    """Rays along ``L0`` and ``L_{s+1}``, closed segments ``L1..Ls`` in between."""
    t = ORIGIN
    edges = [Edge(Vec(0, -1), None, t, True, "L0")]
    for i, (r, a) in enumerate(zip(directions, areas), start=1):
        nxt = (t + r * a).exact()
        edges.append(Edge(r, t, nxt, not collar, f"L{i}"))
        t = nxt
    s = len(areas)
    edges.append(Edge(directions[s], t, None, True, f"L{s + 1}"))
    return PolyDomain(tuple(edges))


def _check_areas(areas, expected: int) -> list[Fraction]:
    areas = [as_rational(a) for a in areas]
    if len(areas) != expected:
        raise DomainError(f"expected {expected} areas, got {len(areas)}")
    if any(a <= 0 for a in areas):
        raise DomainError("sphere areas must be positive")
    return areas


def make_chain_domain(n: int, areas: Sequence[Number], collar: bool = False) -> PolyDomain:
    """Domain of the ``C_n`` chain (spheres ``-(n+2), -2, ..., -2``).

    With ``collar=True`` the sphere edges are removed, giving ``U_{C_n^-}``.
    """
    if n < 2:
        raise DomainError("chain parameter n must be >= 2")
    areas = _check_areas(areas, n - 1)
    pairs, r = chain_convergents(n, n - 1)
    r.append(Vec(*pairs[-1]))
    return _plumbing_from_directions(r, areas, collar)


def make_general_plumbing_domain(terms: Sequence[int], areas: Sequence[Number], collar: bool = False) -> PolyDomain:
    """Domain of the linear plumbing with self-intersections ``-b1, ..., -bs``."""
    if not terms or any(int(b) != b or b < 2 for b in terms):
        raise DomainError(f"plumbing terms must be integers >= 2: {list(terms)}")
    areas = _check_areas(areas, len(terms))
    return _plumbing_from_directions(general_convergents(list(terms)), areas, collar)


def ball_corner_height(n: int, alpha_plus: Number, alpha_minus: Number) -> Fraction:
    """Depth ``((n-1) alpha_plus + alpha_minus) / n^2`` of ``L0 & L3`` below the origin."""
    return (Fraction(n - 1) * as_rational(alpha_plus) + as_rational(alpha_minus)) / n**2


def make_ball_collar_domain(n: int, alpha_plus: Number, alpha_minus: Number, filled: bool = False) -> PolyDomain:
    """Domain of the ``A'_n`` collar: sections of self-intersection ``n+1`` and
    ``-(n-1)`` with areas ``alpha_plus`` and ``alpha_minus``.

    The legs along ``L0`` and ``L3`` meet at the lens corner
    ``(0, -ball_corner_height)``, which is excluded.  ``filled=True`` keeps the
    two section edges, giving the closed region used for volumes.
    """
    if n < 3:
        raise DomainError("the ball collar needs n >= 3")
    ap, am = as_rational(alpha_plus), as_rational(alpha_minus)
    if not (am > 0 and ap > (n + 1) * am):
        raise InfeasibleBallError(f"need alpha_plus > (n+1) alpha_minus > 0, got ({ap}, {am}) for n={n}")
    r1, r2, r3 = Vec(1, 0), Vec(-n - 1, -1), Vec(-n * n, -n + 1)
    p1 = (r1 * ap).exact()
    p2 = (p1 + r2 * am).exact()
    corner = _point(0, -ball_corner_height(n, ap, am))
    edges = (
        Edge(-r3, corner, p2, True, "L3"),
        Edge(-r2, p2, p1, filled, "L2"),
        Edge(-r1, p1, ORIGIN, filled, "L1"),
        Edge(Vec(0, -1), ORIGIN, corner, True, "L0"),
    )
    return PolyDomain(edges, excluded={corner}, lens_corners={corner})


# --- invariants -----------------------------------------------------------------


def _self_intersection(prev: Edge, mid: Edge, nxt: Edge) -> int:
    s = prev.direction + nxt.direction
    if s.cross(mid.direction) != 0:
        raise DomainError(f"normal relation fails at edge {mid.label!r}")
    k = Fraction(s.dot(mid.direction), mid.direction.dot(mid.direction))
    if k.denominator != 1:
        raise DomainError(f"non-integral normal relation at edge {mid.label!r}")
    return -int(k)


def edge_invariant(d: PolyDomain, index: int) -> EdgeInvariant:
    """Area and self-intersection of the sphere over the bounded edge ``index``."""
    edges = d.edges
    e = edges[index]
    if not e.bounded:
        raise DomainError(f"edge {e.label!r} is unbounded")
    n = len(edges)
    prev = edges[(index - 1) % n]
    nxt = edges[(index + 1) % n]
    for v, a, b in ((e.start, prev, e), (e.end, e, nxt)):
        if abs(a.direction.cross(b.direction)) != 1:
            raise DomainError(f"vertex {tuple(v)} adjacent to {e.label!r} is not Delzant")
    return EdgeInvariant(e.label, e.lattice_length(), _self_intersection(prev, e, nxt))


def sphere_edge_indices(d: PolyDomain) -> list[int]:
    """Bounded edges away from lens corners, i.e. the edges that reduce to spheres."""
    return [
        k for k, e in enumerate(d.edges)
        if e.bounded and e.start not in d.lens_corners and e.end not in d.lens_corners
    ]


def edge_sphere_invariants(d: PolyDomain) -> list[EdgeInvariant]:
    return [edge_invariant(d, k) for k in sphere_edge_indices(d)]


def sphere_configuration_euler(d: PolyDomain) -> int:
    """Euler characteristic of the union of the closed sphere edges."""
    spheres = [k for k in sphere_edge_indices(d) if d.edges[k].closed]
    s = set(spheres)
    m = len(d.edges)
    joins = sum(1 for k in spheres if (k + 1) % m in s and (k + 1 < m or d.is_cycle))
    return 2 * len(spheres) - joins


# --- transport and containment -------------------------------------------------------


def apply_affine(d: PolyDomain, f: UnimodularMap) -> PolyDomain:
    """Image of ``d`` under ``p -> B p + r``.

    An orientation-reversing ``B`` flips the traversal so the interior stays
    on the left.
    """
    def move(p):
        return None if p is None else f(p)

    edges = [replace(e, direction=f.linear(e.direction), start=move(e.start), end=move(e.end)) for e in d.edges]
    if f.det < 0:
        edges = [replace(e, direction=-e.direction, start=e.end, end=e.start) for e in reversed(edges)]
    return PolyDomain(tuple(edges), {f(v) for v in d.excluded}, {f(v) for v in d.lens_corners})


def translate(d: PolyDomain, dx: Number, dy: Number) -> PolyDomain:
    return apply_affine(d, UnimodularMap.translation(dx, dy))


def contains_point(d: PolyDomain, p: Vec) -> bool:
    """Membership of ``p`` in a convex domain, honouring open edges and excluded vertices."""
    on = []
    for e, h in zip(d.edges, d.halfplanes()):
        v = h.value(p)
        if v < 0:
            return False
        if v == 0:
            on.append(e)
    if not on:
        return True
    if p in d.vertices:
        return d.includes_vertex(p)
    return all(e.closed for e in on)


def _on_line(e: Edge, h: HalfPlane) -> bool:
    if e.bounded:
        return h.value(e.start) == 0 and h.value(e.end) == 0
    return h.value(e.anchor) == 0 and h.normal.dot(e.direction) == 0


def domain_contains(outer: PolyDomain, inner: PolyDomain) -> bool:
    """Exact test of ``inner`` as a subset of ``outer``; both must be convex."""
    if not (outer.is_convex() and inner.is_convex()):
        raise DomainError("containment is only decided for convex domains")
    verts = inner.vertices
    rays = inner.rays()
    for h in outer.halfplanes():
        if any(h.value(v) < 0 for v in verts) or any(h.normal.dot(r) < 0 for r in rays):
            return False
        if h.strict:
            if any(e.closed and _on_line(e, h) for e in inner.edges):
                return False
            if any(h.value(v) == 0 and inner.includes_vertex(v) for v in verts):
                return False
    return not any(contains_point(inner, x) for x in outer.excluded)


def _projection(d: PolyDomain, normal: Vec) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """(min, max) of ``normal . p`` over the closure; ``None`` marks infinity."""
    vals = [Fraction(normal.dot(v)) for v in d.vertices]
    lo, hi = min(vals), max(vals)
    for r in d.rays():
        s = normal.dot(r)
        if s < 0:
            lo = None
        elif s > 0:
            hi = None
    return lo, hi


def closures_disjoint(a: PolyDomain, b: PolyDomain) -> bool:
    """True when the closures of two convex domains are disjoint (separating axis)."""
    if not (a.is_convex() and b.is_convex()):
        raise DomainError("separation is only decided for convex domains")
    for e in a.edges + b.edges:
        nrm = e.direction.left_normal()
        alo, ahi = _projection(a, nrm)
        blo, bhi = _projection(b, nrm)
        if ahi is not None and blo is not None and ahi < blo:
            return True
        if bhi is not None and alo is not None and bhi < alo:
            return True
    return False


# --- areas --------------------------------------------------------------------------


def _segments_cross(p1: Vec, p2: Vec, q1: Vec, q2: Vec) -> bool:
    def orient(a, b, c):
        v = (b - a).cross(c - a)
        return (v > 0) - (v < 0)

    def on_seg(a, b, c):
        return min(a.x, b.x) <= c.x <= max(a.x, b.x) and min(a.y, b.y) <= c.y <= max(a.y, b.y)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and on_seg(p1, p2, q1)) or (o2 == 0 and on_seg(p1, p2, q2))
        or (o3 == 0 and on_seg(q1, q2, p1)) or (o4 == 0 and on_seg(q1, q2, p2))
    )


def polygon_area(vertices: Sequence) -> Fraction:
    """Exact area of a simple polygon given as a closed vertex cycle."""
    pts = [v if isinstance(v, Vec) else _point(*v) for v in vertices]
    k = len(pts)
    if k < 3:
        raise DomainError("a polygon needs at least three vertices")
    if len(set(pts)) != k:
        raise DomainError("repeated vertex; polygon is not simple")
    for i in range(k):
        for j in range(i + 1, k):
            if j == i + 1 or (i == 0 and j == k - 1):
                continue
            if _segments_cross(pts[i], pts[(i + 1) % k], pts[j], pts[(j + 1) % k]):
                raise DomainError("self-intersecting polygon")
    twice = sum(Fraction(pts[i].cross(pts[(i + 1) % k])) for i in range(k))
    return abs(twice) / 2


def domain_area(d: PolyDomain) -> Fraction:
    if not d.is_cycle:
        raise DomainError("domains with unbounded edges have infinite area")
    return polygon_area(d.vertices)


# --- boundary reduction and convexity -------------------------------------------------


def reduction_point_map(p1: float, p2: float, q1: float, q2: float) -> tuple[float, float, float, float]:
    """Local model of boundary reduction near the corner of the quadrant.

    Each ``(p_i, q_i)`` block goes to polar-like coordinates with radius
    ``sqrt(p_i / pi)``, collapsing the circle over ``p_i = 0``.
    """
    if p1 < 0 or p2 < 0:
        raise ValueError("action coordinates must be non-negative")
    out = []
    for p, q in ((p1, q1), (p2, q2)):
        rad = math.sqrt(p / math.pi)
        out += [rad * math.cos(2 * math.pi * q), rad * math.sin(2 * math.pi * q)]
    return tuple(out)


def radial_transversality_check(polyline: Sequence, apex=(0, 0)) -> bool:
    """Whether a polyline is transverse to the radial field ``X = (p - apex)``."""
    pts = [v if isinstance(v, Vec) else _point(*v) for v in polyline]
    c = apex if isinstance(apex, Vec) else _point(*apex)
    if len(pts) < 2:
        raise DomainError("need at least one segment")
    for P, Q in zip(pts, pts[1:]):
        if P == Q:
            raise DomainError("zero-length segment")
        if (P - c).cross(Q - P) == 0:
            return False
    return True


def _line_meet(p: Vec, d: Vec, q: Vec, e: Vec) -> Vec:
    det = d.cross(e)
    if det == 0:
        raise DomainError("parallel lines do not meet")
    s = Fraction((q - p).cross(e)) / det
    return (p + d * s).exact()


def default_collar_epsilon(d: PolyDomain) -> Fraction:
    """A quarter of the smallest sphere area."""
    areas = [d.edges[k].lattice_length() for k in sphere_edge_indices(d)]
    if not areas:
        raise DomainError("domain has no sphere edges")
    return min(areas) / 4


def collar_inner_boundary(d: PolyDomain, epsilon: Optional[Number] = None) -> list[Vec]:
    """Inner boundary of the collar of lattice width ``epsilon`` around the sphere edges.

    Each sphere edge line ``normal . p = c`` is pushed to ``normal . p = c +
    epsilon``; the polyline runs from the edge before the spheres to the edge
    after them.
    """
    idx = sphere_edge_indices(d)
    if not idx:
        raise DomainError("domain has no sphere edges")
    if idx != list(range(idx[0], idx[-1] + 1)):
        raise DomainError("sphere edges must form one contiguous run")
    eps = default_collar_epsilon(d) if epsilon is None else as_rational(epsilon)
    if eps <= 0:
        raise DomainError("collar epsilon must be positive")
    m = len(d.edges)
    lines = [(d.edges[(idx[0] - 1) % m].anchor, d.edges[(idx[0] - 1) % m].direction)]
    for k in idx:
        e = d.edges[k]
        nrm = e.direction.left_normal()
        shift = nrm * (eps / nrm.dot(nrm))
        lines.append(((e.anchor + shift).exact(), e.direction))
    lines.append((d.edges[(idx[-1] + 1) % m].anchor, d.edges[(idx[-1] + 1) % m].direction))
    return [_line_meet(p, u, q, w) for (p, u), (q, w) in zip(lines, lines[1:])]
