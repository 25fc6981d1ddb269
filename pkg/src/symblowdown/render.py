"""Deterministic SVG pictures of moment domains and plumbing diagrams.

Geometry stays exact until the last moment; coordinates are printed with
six significant digits.  Closed edges are solid, open edges dashed,
excluded corners hollow, collars shaded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union
from xml.sax.saxutils import escape

from .domains import (
    DomainError,
    PolyDomain,
    collar_inner_boundary,
    default_collar_epsilon,
    edge_invariant,
    make_chain_domain,
    make_wedge,
    sphere_edge_indices,
)
from .lattice import Vec, as_rational, format_rational
from .surgery import BallSpec, ChainSpec, blowdown_region, chain_terms, placed_ball, placed_chain

PAD = 24
STROKE = "#1b1b1b"
COLLAR_FILL = "#9ecae1"
REGION_FILL = "#d9d9d9"


@dataclass(frozen=True)
class RenderOptions:
    scale: Fraction = Fraction(20)
    epsilon: Optional[Fraction] = None
    labels: bool = True
    horizon: Optional[Fraction] = None
    output: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "scale", as_rational(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", as_rational(self.epsilon))
            if self.epsilon <= 0:
                raise ValueError("collar epsilon must be positive")
        if self.horizon is not None:
            object.__setattr__(self, "horizon", as_rational(self.horizon))
            if self.horizon <= 0:
                raise ValueError("horizon must be positive")


@dataclass(frozen=True)
class Layer:
    domain: PolyDomain
    name: str
    collar: bool = True


@dataclass(frozen=True)
class Region:
    vertices: tuple
    name: str
    fill: str = REGION_FILL


Decoration = Union[Layer, Region]


def fmt(v) -> str:
    return f"{float(v):.6g}"


def _horizon(items: Sequence[Decoration]) -> Fraction:
    coords, floor = [Fraction(0)], Fraction(1)
    for it in items:
        pts = it.domain.vertices if isinstance(it, Layer) else it.vertices
        for p in pts:
            coords += [abs(Fraction(p.x)), abs(Fraction(p.y))]
        if isinstance(it, Layer):
            # a lone corner still shows its rays out to one direction vector
            for d in it.domain.rays():
                floor = max(floor, abs(d.x), abs(d.y))
    return max(Fraction(3, 2) * max(coords), floor)


def _truncate(anchor: Vec, direction: Vec, h: Fraction) -> Vec:
    """Point where the ray leaves the box ``|x|, |y| <= h``."""
    exits = []
    for a, d in ((anchor.x, direction.x), (anchor.y, direction.y)):
        if d > 0:
            exits.append((h - a) / Fraction(d))
        elif d < 0:
            exits.append((-h - a) / Fraction(d))
    s = max(min(exits), Fraction(0))
    return (anchor + direction * s).exact()


class _Canvas:
    def __init__(self, lo: Vec, hi: Vec, scale: Fraction):
        self.lo, self.hi, self.scale = lo, hi, scale
        self.width = (hi.x - lo.x) * scale + 2 * PAD
        self.height = (hi.y - lo.y) * scale + 2 * PAD
        self.body: list[str] = []

    def xy(self, p: Vec) -> tuple[str, str]:
        return fmt((p.x - self.lo.x) * self.scale + PAD), fmt((self.hi.y - p.y) * self.scale + PAD)

    def points(self, pts) -> str:
        return " ".join(",".join(self.xy(p)) for p in pts)

    def document(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(self.width)}" '
            f'height="{fmt(self.height)}" viewBox="0 0 {fmt(self.width)} {fmt(self.height)}">\n'
            f'<rect width="{fmt(self.width)}" height="{fmt(self.height)}" fill="white"/>\n'
        )
        return head + "".join(line + "\n" for line in self.body) + "</svg>\n"


def _bbox(items, h):
    pts = [Vec(0, 0)]
    for it in items:
        if isinstance(it, Region):
            pts += list(it.vertices)
            continue
        d = it.domain
        pts += d.vertices
        for e in d.edges:
            if not e.bounded:
                pts.append(_truncate(e.anchor, e.direction if e.start is not None else -e.direction, h))
    xs = [Fraction(p.x) for p in pts]
    ys = [Fraction(p.y) for p in pts]
    return Vec(min(xs), min(ys)), Vec(max(xs), max(ys))


def collar_polygon(d: PolyDomain, epsilon=None) -> list[Vec]:
    """Band between the sphere edges and the inner collar boundary."""
    idx = sphere_edge_indices(d)
    outer = [d.edges[idx[0]].start] + [d.edges[k].end for k in idx]
    inner = collar_inner_boundary(d, epsilon)
    return [inner[0]] + outer + [inner[-1]] + list(reversed(inner[1:-1]))


def _draw_layer(cv: _Canvas, layer: Layer, opts: RenderOptions, h: Fraction):
    d = layer.domain
    cv.body.append(f'<g id="{escape(layer.name)}">')
    if layer.collar and sphere_edge_indices(d):
        eps = opts.epsilon if opts.epsilon is not None else default_collar_epsilon(d)
        cv.body.append(
            f'<polygon class="collar" points="{cv.points(collar_polygon(d, eps))}" '
            f'fill="{COLLAR_FILL}" fill-opacity="0.6" stroke="none"/>'
        )
    for k, e in enumerate(d.edges):
        if e.bounded:
            a, b, kind = e.start, e.end, "segment"
        else:
            outward = e.direction if e.start is not None else -e.direction
            a, b, kind = e.anchor, _truncate(e.anchor, outward, h), "ray"
        (x1, y1), (x2, y2) = cv.xy(a), cv.xy(b)
        state = "closed" if e.closed else "open"
        dash = "" if e.closed else ' stroke-dasharray="6,4"'
        cv.body.append(
            f'<line class="edge {kind} {state}" data-label="{escape(e.label)}" x1="{x1}" y1="{y1}" '
            f'x2="{x2}" y2="{y2}" stroke="{STROKE}" stroke-width="2"{dash}/>'
        )
        if opts.labels and e.bounded:
            mid = (a + b) * Fraction(1, 2)
            mx, my = cv.xy(mid)
            text = e.label
            if k in sphere_edge_indices(d):
                inv = edge_invariant(d, k)
                text += f" ({format_rational(inv.area)}, {inv.self_intersection})"
            cv.body.append(f'<text class="label" x="{mx}" y="{my}" dy="-4" font-size="10" text-anchor="middle">{escape(text)}</text>')
    for v in d.vertices:
        x, y = cv.xy(v)
        if v in d.excluded:
            cv.body.append(f'<circle class="vertex excluded" cx="{x}" cy="{y}" r="4" fill="white" stroke="{STROKE}" stroke-width="1.5"/>')
        else:
            cv.body.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="2.5" fill="{STROKE}"/>')
    cv.body.append("</g>")


def render_domain_svg(d: Optional[PolyDomain], decorations: Sequence[Decoration] = (), opts: RenderOptions = RenderOptions()) -> str:
    """SVG of ``d`` (drawn as its own layer) plus any extra layers and shaded regions."""
    items = ([Layer(d, "domain")] if d is not None else []) + list(decorations)
    if not items:
        raise DomainError("nothing to render")
    h = opts.horizon if opts.horizon is not None else _horizon(items)
    lo, hi = _bbox(items, h)
    cv = _Canvas(lo, hi, opts.scale)
    for it in items:
        if isinstance(it, Region):
            cv.body.append(
                f'<polygon class="region" id="{escape(it.name)}" points="{cv.points(it.vertices)}" '
                f'fill="{it.fill}" stroke="none"/>'
            )
    for it in items:
        if isinstance(it, Layer):
            _draw_layer(cv, it, opts, h)
    return cv.document()


def render_chain_figure(c: ChainSpec, opts: RenderOptions = RenderOptions()) -> str:
    return render_domain_svg(make_chain_domain(c.n, c.areas), (), opts)


def render_fit_figure(c: ChainSpec, b: BallSpec, opts: RenderOptions = RenderOptions()) -> str:
    """Both collars placed in the ``V_{n^2, n-1}`` wedge, region below the chain shaded."""
    n = c.n
    wedge = Layer(make_wedge(n * n, n - 1), "wedge", collar=False)
    region = Region(tuple(blowdown_region(c)), "ball-region")
    return render_domain_svg(None, [region, wedge, Layer(placed_chain(c), "chain-collar"), Layer(placed_ball(c, b), "ball-collar")], opts)


def render_plumbing_svg(terms: Sequence[int], opts: RenderOptions = RenderOptions()) -> str:
    """Linear plumbing graph: one node per sphere, labelled by its self-intersection."""
    step, r = 60, 14
    width = PAD * 2 + step * (len(terms) - 1) + 2 * r
    height = PAD * 2 + 2 * r + 16
    cy = PAD + r
    body = []
    for k in range(len(terms) - 1):
        x1 = PAD + r + step * k
        body.append(f'<line class="bond" x1="{x1 + r}" y1="{cy}" x2="{x1 + step - r}" y2="{cy}" stroke="{STROKE}" stroke-width="2"/>')
    for k, b in enumerate(terms):
        cx = PAD + r + step * k
        body.append(f'<circle class="node" cx="{cx}" cy="{cy}" r="{r}" fill="white" stroke="{STROKE}" stroke-width="2"/>')
        if opts.labels:
            body.append(f'<text class="label" x="{cx}" y="{cy + r + 14}" font-size="12" text-anchor="middle">{-int(b)}</text>')
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        + "".join(line + "\n" for line in body) + "</svg>\n"
    )


def render_chain_plumbing(n: int, opts: RenderOptions = RenderOptions()) -> str:
    return render_plumbing_svg(chain_terms(n), opts)
