"""Maslov-2 broken tropical curves with boundary on two points of the plane.

Edge directions follow the balancing convention: the weighted direction of
an edge at a vertex points *toward* that vertex.  A ray records the
direction in which it actually extends, so its toward-vertex direction is
the negative of that.

Type-1 curves are single rays out of one anchor.  Type-2 curves have a
trivalent vertex joined to both anchors and one multiplicity-1 ray.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Sequence

from .novikov import as_fraction, format_fraction
from .potential import DiscClass, DomainError, ModelParams

Vec = tuple  # pair of Fractions or ints

AXES = ((1, 0), (-1, 0), (0, 1), (0, -1))

# (anchor, extension direction) -> coordinates over (b11, b12, b21, b22, d1, d2).
# Matched term by term with the smooth potential: the ray leaving p' to the
# left is the T^B x1 disc, the one leaving to the right wraps the divisor d1.
TYPE1_CLASSES = {
    ("p'", (-1, 0)): (1, 0, 0, 0, 0, 0),
    ("p'", (1, 0)): (0, 0, 1, 0, 1, 0),
    ("p''", (1, 0)): (0, 0, 1, 0, 0, 0),
    ("p''", (-1, 0)): (1, 0, 0, 0, 1, 0),
    ("p'", (0, -1)): (0, 1, 0, 0, 0, 0),
    ("p'", (0, 1)): (0, 0, 0, 1, 0, 1),
    ("p''", (0, 1)): (0, 0, 0, 1, 0, 0),
    ("p''", (0, -1)): (0, 1, 0, 0, 0, 1),
}


class GenericityError(DomainError):
    """The configuration is not generic for the requested weight bound."""


def _vec(v) -> tuple[Fraction, Fraction]:
    if len(v) != 2:
        raise ValueError(f"expected a 2-vector, got {v!r}")
    return (as_fraction(v[0]), as_fraction(v[1]))


@dataclass(frozen=True)
class TropicalConfig:
    p_prime: tuple
    p_dprime: tuple
    weight_bound: int = 10

    def __post_init__(self):
        object.__setattr__(self, "p_prime", _vec(self.p_prime))
        object.__setattr__(self, "p_dprime", _vec(self.p_dprime))
        if int(self.weight_bound) != self.weight_bound or self.weight_bound < 1:
            raise DomainError("weight_bound must be a positive integer")
        object.__setattr__(self, "weight_bound", int(self.weight_bound))
        if self.p_prime == self.p_dprime:
            raise DomainError("p' and p'' coincide")

    @property
    def offset(self) -> tuple[Fraction, Fraction]:
        return (self.p_dprime[0] - self.p_prime[0], self.p_dprime[1] - self.p_prime[1])

    def anchor(self, name: str):
        return {"p'": self.p_prime, "p''": self.p_dprime}[name]

    def translated(self, v) -> "TropicalConfig":
        v = _vec(v)
        return TropicalConfig((self.p_prime[0] + v[0], self.p_prime[1] + v[1]),
                              (self.p_dprime[0] + v[0], self.p_dprime[1] + v[1]),
                              self.weight_bound)

    def to_json(self) -> dict:
        return {"p_prime": [format_fraction(c) for c in self.p_prime],
                "p_dprime": [format_fraction(c) for c in self.p_dprime],
                "weight_bound": self.weight_bound}

    @classmethod
    def from_json(cls, doc: dict) -> "TropicalConfig":
        return cls(tuple(doc["p_prime"]), tuple(doc["p_dprime"]), doc.get("weight_bound", 10))


@dataclass(frozen=True)
class Edge:
    start: tuple
    direction: tuple  # primitive integer vector along which the edge runs
    weight: int
    end: tuple | None = None  # None marks an unbounded edge

    @property
    def bounded(self) -> bool:
        return self.end is not None

    @property
    def weighted(self) -> tuple[int, int]:
        return (self.weight * self.direction[0], self.weight * self.direction[1])

    def to_json(self) -> dict:
        doc = {"start": [format_fraction(c) for c in self.start],
               "direction": list(self.direction), "weight": self.weight}
        doc["end"] = None if self.end is None else [format_fraction(c) for c in self.end]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Edge":
        end = doc.get("end")
        return cls(_vec(doc["start"]), tuple(doc["direction"]), int(doc["weight"]),
                   None if end is None else _vec(end))


@dataclass(frozen=True)
class TropicalCurve:
    edges: tuple
    anchors_used: tuple
    genus: int = 0
    label: str = field(default="", compare=False)

    @property
    def rays(self) -> list[Edge]:
        return [e for e in self.edges if not e.bounded]

    @property
    def maslov_index(self) -> int:
        return 2 * sum(e.weight for e in self.rays)

    def vertices(self, anchors: Sequence = ()) -> list[tuple]:
        """Endpoints of edges that are not anchor points."""
        skip = set(anchors)
        found = []
        for e in self.edges:
            for pt in (e.start, e.end):
                if pt is not None and pt not in skip and pt not in found:
                    found.append(pt)
        return found

    def to_json(self) -> dict:
        return {"edges": [e.to_json() for e in self.edges], "anchors_used": list(self.anchors_used),
                "genus": self.genus, "label": self.label}

    @classmethod
    def from_json(cls, doc: dict) -> "TropicalCurve":
        return cls(tuple(Edge.from_json(e) for e in doc["edges"]), tuple(doc["anchors_used"]),
                   int(doc.get("genus", 0)), doc.get("label", ""))


def _primitive(v) -> tuple[tuple[int, int], int]:
    g = gcd(int(v[0]), int(v[1]))
    if g == 0:
        raise ValueError("zero direction")
    return (int(v[0]) // g, int(v[1]) // g), g


def excluded_slopes(bound: int) -> set[Fraction]:
    """Rationals q/p the enumeration compares the slope against."""
    n = bound + 1
    return {Fraction(q, p) for p in range(1, n + 1) for q in range(-n, n + 1)}


def genericity_check(cfg: TropicalConfig) -> Fraction:
    """Slope of the line p'p'', or :class:`GenericityError`.

    Stands in for irrationality of the slope: only the fractions with
    denominator up to ``weight_bound + 1`` are ever compared with it.
    """
    dx, dy = cfg.offset
    if dx == 0:
        raise GenericityError("line p'p'' is vertical")
    m = dy / dx
    if m in excluded_slopes(cfg.weight_bound):
        raise GenericityError(f"slope {m} is one of the excluded fractions q/p with p <= {cfg.weight_bound + 1}")
    return m


def standard_position(cfg: TropicalConfig) -> Fraction:
    """Genericity plus the quadrant convention, up to translation.

    Some translate puts p' in the open third quadrant and p'' in the open
    first quadrant exactly when p'' lies strictly up and to the right.
    """
    m = genericity_check(cfg)
    dx, dy = cfg.offset
    if not (dx > 0 and dy > 0):
        raise DomainError("p'' must lie strictly above and to the right of p'")
    return m


def _ray_curve(cfg: TropicalConfig, anchor: str, direction) -> TropicalCurve:
    start = cfg.anchor(anchor)
    return TropicalCurve((Edge(start, tuple(direction), 1, None),), (anchor,), 0,
                         f"type1 {anchor} {tuple(direction)}")


def enumerate_type1(cfg: TropicalConfig) -> list[TropicalCurve]:
    standard_position(cfg)
    return [_ray_curve(cfg, anchor, d) for anchor in ("p'", "p''") for d in AXES]


def solve_vertex(cfg: TropicalConfig, d0, d1) -> tuple[tuple, Fraction, Fraction] | None:
    """Meet point of the leg from p' along ``d0`` and the leg from p'' along ``d1``.

    Returns ``(V, t, s)`` with ``V = p' + t d0 = p'' + s d1`` when both
    parameters are positive, otherwise None.
    """
    dx, dy = cfg.offset
    # t d0 - s d1 = offset
    a, b, c, d = d0[0], -d1[0], d0[1], -d1[1]
    det = a * d - b * c
    if det == 0:
        return None
    t = Fraction(dx * d - b * dy, det)
    s = Fraction(a * dy - c * dx, det)
    if t <= 0 or s <= 0:
        return None
    x0, y0 = cfg.p_prime
    return (x0 + t * d0[0], y0 + t * d0[1]), t, s


# the four type-2 families: toward-vertex ray direction -> leg directions at p', p''
def family_legs(ray, p: int, q: int) -> tuple[tuple[int, int], tuple[int, int]]:
    ray = tuple(ray)
    if ray == (0, 1):
        return (p, q), (-p, -(q + 1))
    if ray == (0, -1):
        return (p, q + 1), (-p, -q)
    if ray == (1, 0):
        return (p, q), (-(p + 1), -q)
    if ray == (-1, 0):
        return (p + 1, q), (-p, -q)
    raise ValueError(f"not an axis direction: {ray}")


def _type2_curve(cfg: TropicalConfig, ray, p: int, q: int) -> TropicalCurve | None:
    d0, d1 = family_legs(ray, p, q)
    hit = solve_vertex(cfg, d0, d1)
    if hit is None:
        return None
    V = hit[0]
    (u0, w0), (u1, w1) = _primitive(d0), _primitive(d1)
    edges = (
        Edge(cfg.p_prime, u0, w0, V),
        Edge(cfg.p_dprime, u1, w1, V),
        Edge(V, (-ray[0], -ray[1]), 1, None),
    )
    return TropicalCurve(edges, ("p'", "p''"), 0, f"type2 ray{tuple(ray)} p={p} q={q}")


def _family_pairs(ray, m: Fraction, bound: int) -> list[tuple[int, int]]:
    pairs = []
    if ray[0] == 0:
        # q/p < m < (q+1)/p
        for p in range(1, bound + 1):
            q = floor(m * p)
            if abs(q) <= bound:
                pairs.append((p, q))
    else:
        # q/(p+1) < m < q/p, with q/0 read as +infinity for q > 0
        for p in range(0, bound + 1):
            lo, hi = m * p, m * (p + 1)
            for q in range(floor(lo) + 1, -(-hi // 1)):
                if abs(q) <= bound:
                    pairs.append((p, q))
    return pairs


def enumerate_type2(cfg: TropicalConfig) -> list[TropicalCurve]:
    """All genus-0 three-edge curves through both anchors, rays along every axis.

    Family data ``(p, q)`` is confined to ``|p|, |q| <= weight_bound``.
    """
    m = standard_position(cfg)
    out = []
    for ray in ((0, 1), (1, 0), (0, -1), (-1, 0)):
        for p, q in _family_pairs(ray, m, cfg.weight_bound):
            curve = _type2_curve(cfg, ray, p, q)
            if curve is None:
                raise AssertionError(f"inequalities admit {(p, q)} but the legs do not meet")
            out.append(curve)
    return out


def type2_pairs(curves: Sequence[TropicalCurve]) -> dict[tuple, list[tuple[int, int]]]:
    """Group type-2 curves by toward-vertex ray direction, recovering (p, q)."""
    grouped: dict[tuple, list] = {r: [] for r in ((0, 1), (1, 0), (0, -1), (-1, 0))}
    for c in curves:
        ray, (p, q) = _type2_data(c)
        grouped[ray].append((p, q))
    return {k: sorted(v) for k, v in grouped.items()}


def validate_balancing(curve: TropicalCurve, anchors: Sequence = None) -> bool:
    """True iff weighted directions sum to zero at every non-anchor vertex."""
    if anchors is None:
        anchors = _anchor_points(curve)
    for v in curve.vertices(anchors):
        sx = sy = 0
        for e in curve.edges:
            wx, wy = e.weighted
            if e.end == v:
                sx, sy = sx + wx, sy + wy
            if e.start == v:
                sx, sy = sx - wx, sy - wy
        if sx or sy:
            return False
    return True


def _anchor_points(curve: TropicalCurve) -> list[tuple]:
    # anchors are the starts of the legs named in anchors_used, in order
    starts = [e.start for e in curve.edges]
    return starts[:len(curve.anchors_used)]


def _type2_data(curve: TropicalCurve) -> tuple[tuple[int, int], tuple[int, int]]:
    if len(curve.edges) != 3 or curve.genus != 0:
        raise DomainError(f"unclassified curve shape: {curve.label or curve}")
    leg0, leg1, ray_edge = curve.edges
    if ray_edge.bounded or ray_edge.weight != 1 or not (leg0.bounded and leg1.bounded):
        raise DomainError("type-2 curves need two legs and one multiplicity-1 ray")
    ray = (-ray_edge.direction[0], -ray_edge.direction[1])
    d0, d1 = leg0.weighted, leg1.weighted
    if ray == (0, 1):
        p, q = d0
    elif ray == (0, -1):
        p, q = -d1[0], -d1[1]
    elif ray == (1, 0):
        p, q = d0
    elif ray == (-1, 0):
        p, q = -d1[0], -d1[1]
    else:
        raise DomainError(f"ray direction {ray} is not an axis")
    if family_legs(ray, p, q) != (d0, d1):
        raise DomainError(f"legs {d0}, {d1} do not match the {ray} family")
    return ray, (p, q)


def _type2_coords(ray, p: int, q: int) -> tuple[int, ...]:
    if ray == (0, 1):
        return (0, 1, 0, 0, p, q + 1)
    if ray == (0, -1):
        return (0, 0, 0, 1, p, q + 1)
    if ray == (1, 0):
        return (1, 0, 0, 0, p + 1, q)
    return (0, 0, 1, 0, p + 1, q)


def curve_class_and_area(curve: TropicalCurve, params: ModelParams) -> tuple[DiscClass, Fraction]:
    if len(curve.edges) == 1:
        e = curve.edges[0]
        key = (curve.anchors_used[0] if curve.anchors_used else None, tuple(e.direction))
        if e.bounded or e.weight != 1 or key not in TYPE1_CLASSES:
            raise DomainError(f"unclassified curve shape: {curve.label or curve}")
        cls = DiscClass.from_coords(TYPE1_CLASSES[key], params)
    else:
        ray, (p, q) = _type2_data(curve)
        cls = DiscClass.from_coords(_type2_coords(ray, p, q), params)
    return cls, cls.area


def yshape_example(cfg: TropicalConfig) -> TropicalCurve:
    """Legs of directions (1,-1) from p' and (-1,-1) from p'', joined by a
    multiplicity-2 ray pointing down."""
    hit = solve_vertex(cfg, (1, -1), (-1, -1))
    if hit is None:
        raise DomainError("the legs of the Y-shaped curve do not meet for these anchors")
    V = hit[0]
    edges = (
        Edge(cfg.p_prime, (1, -1), 1, V),
        Edge(cfg.p_dprime, (-1, -1), 1, V),
        Edge(V, (0, -1), 2, None),
    )
    return TropicalCurve(edges, ("p'", "p''"), 0, "Y-shape")
