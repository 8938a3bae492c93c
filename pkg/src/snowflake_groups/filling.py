"""Van Kampen filling machinery: approximate polygons, primitive fillings,
the snowflake loop subdivision, and central regions of corridor dual trees.

An approximate polygon is a cycle of a/x/y-line segments in the vertex
group whose consecutive endpoints are close (within D).  The primitive
fillings below snap such polygons to true ones, fill them by grids of
small cells, and hand back subdivisions of the un-subdivided sides, with
exact bookkeeping of cell count (area) and longest cell boundary (mesh).

Diagrams here are combinatorial: cells with closed boundary words plus
gluing records.  Every produced boundary word reduces to the identity;
planarity is by construction and is not re-verified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .params import GroupParams
from .paths import snowflake_loop, snowflake_path
from .vertex_group import (
    HPoint,
    _min_residue,
    dist_a_power,
    dist_h,
    geodesic_word_a_power,
    geodesic_word_h,
    xy_line_intersection,
)
from .words import PathWord, format_word, invert_chars, parse_word

_FLAVOR_ORDER = {"bigon": None, "triangle": ("x", "y", "a"), "diamond": ("x", "y", "x", "y")}


def _flavor_point(params: GroupParams, flavor: str, k: int) -> HPoint:
    if k == 0:
        return HPoint.identity()
    return HPoint.generator(params, flavor, k)


def _geo_chars(params: GroupParams, flavor: str, k: int) -> str:
    """A deterministic geodesic word for flavor^k over {a, s, t}."""
    if k == 0:
        return ""
    inner = geodesic_word_a_power(params, k).chars
    if flavor == "a":
        return inner
    if flavor == "x":
        return "s" + inner + "S"
    if flavor == "y":
        return "t" + inner + "T"
    raise ValueError(f"bad flavor {flavor!r}")


# ---------------------------------------------------------------------------
# polygons and diagrams


@dataclass(frozen=True)
class ApproxPolygon:
    """A D-approximate bigon, triangle or diamond.

    Side i runs from corners[i] to corners[i] * flavors[i]^exponents[i]; the
    gap from that endpoint to corners[i+1] is at most D.  Triangle sides
    cycle x, y, a; diamond sides alternate x, y, x, y; a bigon has one
    flavor for both sides.  corner_paths[i], when given, joins the end of
    side i to corners[i+1] and has length at most D.
    """

    kind: str
    corners: tuple[HPoint, ...]
    flavors: tuple[str, ...]
    exponents: tuple[int, ...]
    D: int
    corner_paths: Optional[tuple[PathWord, ...]] = None

    def __post_init__(self) -> None:
        sides = {"bigon": 2, "triangle": 3, "diamond": 4}.get(self.kind)
        if sides is None:
            raise ValueError(f"unknown polygon kind {self.kind!r}")
        if not (len(self.corners) == len(self.flavors) == len(self.exponents) == sides):
            raise ValueError(f"{self.kind} needs {sides} corners/flavors/exponents")
        expected = _FLAVOR_ORDER[self.kind]
        if expected is not None and tuple(self.flavors) != expected:
            raise ValueError(f"{self.kind} sides must have flavors {expected}")
        if self.kind == "bigon" and self.flavors[0] != self.flavors[1]:
            raise ValueError("bigon sides must share one flavor")
        if self.corner_paths is not None and len(self.corner_paths) != sides:
            raise ValueError("need one corner path per side")

    def side_end(self, params: GroupParams, i: int) -> HPoint:
        return self.corners[i] * _flavor_point(params, self.flavors[i], self.exponents[i])

    def gaps(self, params: GroupParams) -> list[int]:
        n = len(self.corners)
        return [
            dist_h(params, self.side_end(params, i).inverse() * self.corners[(i + 1) % n])
            for i in range(n)
        ]

    def is_true(self, params: GroupParams) -> bool:
        return all(g == 0 for g in self.gaps(params))


@dataclass(frozen=True)
class Cell:
    """A 2-cell: its closed boundary word (trivial in G_L)."""

    boundary: PathWord
    basepoint: Optional[HPoint] = None


@dataclass
class Diagram:
    """A combinatorial van Kampen diagram: cells plus shared-arc records."""

    params: GroupParams
    cells: list[Cell]
    gluings: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def area(self) -> int:
        return len(self.cells)

    @property
    def mesh(self) -> int:
        return max((c.boundary.length for c in self.cells), default=0)

    def boundaries_trivial(self) -> bool:
        return all(c.boundary.is_closed() for c in self.cells)

    def extend(self, other: "Diagram") -> None:
        offset = len(self.cells)
        self.cells.extend(other.cells)
        self.gluings.extend((i + offset, j + offset, w) for i, j, w in other.gluings)

    def to_json(self) -> dict:
        return {
            "area": self.area,
            "mesh": self.mesh,
            "cells": [{"boundary": str(c.boundary)} for c in self.cells],
            "gluings": [[i, j, format_word(w)] for i, j, w in self.gluings],
        }


@dataclass(frozen=True)
class Subdivision:
    """A side split into segments: start corner, flavor, signed exponents."""

    start: HPoint
    flavor: str
    exponents: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.exponents)

    def points(self, params: GroupParams) -> list[HPoint]:
        pts = [self.start]
        for e in self.exponents:
            pts.append(pts[-1] * _flavor_point(params, self.flavor, e))
        return pts

    def max_exponent(self) -> int:
        return max((abs(e) for e in self.exponents), default=0)


def _corner_paths(params: GroupParams, poly: ApproxPolygon) -> list[PathWord]:
    """The given corner paths, or deterministic geodesics; validated."""
    n = len(poly.corners)
    out: list[PathWord] = []
    for i in range(n):
        diff = poly.side_end(params, i).inverse() * poly.corners[(i + 1) % n]
        if poly.corner_paths is not None:
            cp = poly.corner_paths[i]
            end = cp.endpoint()
            if not end.in_vertex_group() or end.h_point() != diff:
                raise ValueError(f"corner path {i} does not join side {i} to corner {i + 1}")
        else:
            cp = geodesic_word_h(params, diff)
        if cp.length > poly.D:
            raise ValueError(f"corner path {i} has length {cp.length} > D = {poly.D}")
        out.append(cp)
    return out


# ---------------------------------------------------------------------------
# snapping approximate polygons to true ones


def snap_triangle(params: GroupParams, poly: ApproxPolygon) -> ApproxPolygon:
    """The true triangle within 2D + L of a D-approximate triangle.

    The output exponents satisfy m0' = m1' and m2' = -L * m0'.
    """
    if poly.kind != "triangle":
        raise ValueError("snap_triangle needs a triangle")
    L = params.L
    g0, g1, g2 = poly.corners
    _, pt = xy_line_intersection(params, g0.inverse() * g1)
    g1p = g0 * pt
    g0p = HPoint(g0.u, g2.v)
    yline = g1p.u + L * g1p.v
    g2p = HPoint(yline - L * g2.v, g2.v)
    m0p = g1p.v - g0p.v
    m1p = (g2p.u - g1p.u) // L
    m2p = g0p.u - g2p.u
    assert m1p == m0p and m2p == -L * m0p
    bound = 2 * poly.D + L
    for old, new in zip(poly.corners, (g0p, g1p, g2p)):
        moved = dist_h(params, old.inverse() * new)
        assert moved <= bound, f"snap moved a corner by {moved} > 2D + L = {bound}"
    return ApproxPolygon("triangle", (g0p, g1p, g2p), ("x", "y", "a"), (m0p, m1p, m2p), 0)


def snap_diamond(params: GroupParams, poly: ApproxPolygon) -> ApproxPolygon:
    """The true diamond within D + 3L/2 of a D-approximate diamond."""
    if poly.kind != "diamond":
        raise ValueError("snap_diamond needs a diamond")
    L = params.L
    g1, h1, g2, h2 = poly.corners
    _, pt = xy_line_intersection(params, g1.inverse() * h1)
    h1p = g1 * pt
    yline1 = h1p.u + L * h1p.v
    p3 = _min_residue(L, yline1 - g2.u)
    g2p = HPoint(g2.u + p3, (yline1 - (g2.u + p3)) // L)
    n1p = h1p.v - g2p.v
    p2 = _min_residue(L, g2p.u - h2.u)
    yline2 = h2.u + p2 + L * h2.v
    h2p = HPoint(g2p.u, (yline2 - g2p.u) // L)
    m2p = h2p.v - g2p.v
    g1p = HPoint(g1.u, (yline2 - g1.u) // L)
    n2p = (g1p.u - h2p.u) // L
    m1p = h1p.v - g1p.v
    assert m2p == -m1p and n2p == -n1p
    true = ApproxPolygon(
        "diamond", (g1p, h1p, g2p, h2p), ("x", "y", "x", "y"), (m1p, n1p, m2p, n2p), 0
    )
    assert true.is_true(params)
    for old, new in zip(poly.corners, true.corners):
        moved = 2 * dist_h(params, old.inverse() * new)
        assert moved <= 2 * poly.D + 3 * L, f"snap moved a corner by {moved}/2 > D + 3L/2"
    return true


# ---------------------------------------------------------------------------
# bigon core

SubdivisionExps = Sequence[int]


def _validate_subdivision(
    label: str,
    exps: SubdivisionExps,
    total: int,
    max_segments: Optional[int],
    max_exponent: Optional[int],
) -> None:
    if sum(exps) != total:
        raise ValueError(f"{label} subdivision sums to {sum(exps)}, expected {total}")
    if max_segments is not None and len(exps) > max_segments:
        raise ValueError(f"{label} subdivision has {len(exps)} > {max_segments} segments")
    if max_exponent is not None and any(abs(e) > max_exponent for e in exps):
        raise ValueError(f"{label} subdivision exceeds the exponent bound {max_exponent}")


def _bigon_cells(
    params: GroupParams,
    G0: HPoint,
    flavor: str,
    exps: SubdivisionExps,
    G1: HPoint,
    M1: int,
    cp_end: str,
    cp_start: str,
) -> tuple[list[Cell], list[tuple[int, int, str]], list[int]]:
    """Fill the bigon side0 = (G0, flavor, sum exps) against side1 = (G1, flavor, M1).

    cp_end joins G0 f^(sum exps) to G1; cp_start joins G1 f^M1 to G0.
    Returns cells, gluings and the induced subdivision of side1 (from G1).
    Area is exactly len(exps); the induced subdivision has <= len(exps) parts.
    """
    n = len(exps)
    if n == 0:
        raise ValueError("subdivision must have at least one segment")
    prefix = [0]
    for e in exps:
        prefix.append(prefix[-1] + e)
    m0 = prefix[-1]
    lo, hi = min(0, -M1), max(0, -M1)
    qualifying = [i for i, s in enumerate(prefix) if lo <= s <= hi]
    p = min(n - 1, max(qualifying, default=0))
    delta0 = invert_chars(cp_start)  # from G0 to G1 f^M1; translates along side0

    def fpoint(k: int) -> HPoint:
        return _flavor_point(params, flavor, k)

    def geo(k: int) -> str:
        return _geo_chars(params, flavor, k)

    cells: list[Cell] = []
    gluings: list[tuple[int, int, str]] = []
    for i in range(1, p + 1):
        word = geo(exps[i - 1]) + delta0 + geo(-exps[i - 1]) + invert_chars(delta0)
        cells.append(Cell(PathWord(params, word), G0 * fpoint(prefix[i - 1])))
        if i > 1:
            gluings.append((len(cells) - 2, len(cells) - 1, delta0))
    case_a = lo <= m0 <= hi
    if case_a:
        word = geo(m0 - prefix[p]) + cp_end + geo(M1 + prefix[p]) + invert_chars(delta0)
        cells.append(Cell(PathWord(params, word), G0 * fpoint(prefix[p])))
        if p >= 1:
            gluings.append((len(cells) - 2, len(cells) - 1, delta0))
    else:
        verticals: dict[int, str] = {}
        for i in range(p + 1, n):
            diff = (G0 * fpoint(prefix[i])).inverse() * G1
            verticals[i] = geodesic_word_h(params, diff).chars
        verticals[n] = cp_end
        word = geo(exps[p]) + verticals[p + 1] + geo(M1 + prefix[p]) + invert_chars(delta0)
        cells.append(Cell(PathWord(params, word), G0 * fpoint(prefix[p])))
        if p >= 1:
            gluings.append((len(cells) - 2, len(cells) - 1, delta0))
        for i in range(p + 1, n):
            word = geo(exps[i]) + verticals[i + 1] + invert_chars(verticals[i])
            cells.append(Cell(PathWord(params, word), G0 * fpoint(prefix[i])))
            gluings.append((len(cells) - 2, len(cells) - 1, verticals[i]))
    out = [M1 + prefix[p]] + [-exps[i - 1] for i in range(p, 0, -1)]
    return cells, gluings, out


def fill_bigon(
    params: GroupParams,
    poly: ApproxPolygon,
    subdivision: SubdivisionExps,
    max_segments: Optional[int] = None,
    max_exponent: Optional[int] = None,
) -> tuple[Diagram, Subdivision]:
    """Fill a D-approximate bigon whose side 0 is pre-subdivided.

    Returns the diagram (area <= number of segments, mesh <=
    2(2C+1) D + 2C E^(1/alpha)) and the induced subdivision of side 1,
    whose exponents are bounded by E + L D^alpha.
    """
    if poly.kind != "bigon":
        raise ValueError("fill_bigon needs a bigon")
    _validate_subdivision("side 0", subdivision, poly.exponents[0], max_segments, max_exponent)
    cps = _corner_paths(params, poly)
    cells, gluings, out = _bigon_cells(
        params,
        poly.corners[0],
        poly.flavors[0],
        subdivision,
        poly.corners[1],
        poly.exponents[1],
        cps[0].chars,
        cps[1].chars,
    )
    diagram = Diagram(params, cells, gluings)
    return diagram, Subdivision(poly.corners[1], poly.flavors[1], tuple(out))


# ---------------------------------------------------------------------------
# triangle and diamond fillings


def _round_to_multiples(L: int, prefix: list[int]) -> list[int]:
    """Move interior subdivision points to the nearest multiples of L.

    Each point moves by at most L/2; ties go to the multiple nearer zero.
    The endpoints are kept (they are already multiples of L for a true
    triangle's a-side).
    """
    out = [prefix[0]]
    for s in prefix[1:-1]:
        q, r = divmod(s, L)
        if 2 * r < L or (2 * r == L and s >= 0):
            out.append(q * L)
        else:
            out.append((q + 1) * L)
    out.append(prefix[-1])
    # weak monotonicity survives nearest-multiple rounding; assert, don't fix
    direction = 1 if prefix[-1] >= prefix[0] else -1
    assert all(direction * (b - a) >= 0 for a, b in zip(out, out[1:]))
    return out


def fill_triangle(
    params: GroupParams,
    poly: ApproxPolygon,
    a_subdivision: SubdivisionExps,
    max_segments: Optional[int] = None,
    max_exponent: Optional[int] = None,
) -> tuple[Diagram, Subdivision, Subdivision]:
    """Fill a D-approximate triangle whose a-side is pre-subdivided.

    Returns the diagram (area <= (n^2 + 9n + 6)/2 for n segments, mesh <=
    4C + (6C+2) D + 2C E^(1/alpha)) plus induced subdivisions of the x-side
    and y-side with exponents bounded by 1 + E/L + D^alpha.
    """
    if poly.kind != "triangle":
        raise ValueError("fill_triangle needs a triangle")
    L = params.L
    _validate_subdivision("a-side", a_subdivision, poly.exponents[2], max_segments, max_exponent)
    cps = _corner_paths(params, poly)
    true = snap_triangle(params, poly)
    g0, g1, g2 = poly.corners
    g0p, g1p, g2p = true.corners
    alphas = [geodesic_word_h(params, a.inverse() * b).chars for a, b in zip(poly.corners, true.corners)]
    gammas = [
        geodesic_word_h(params, poly.side_end(params, i).inverse() * true.corners[(i + 1) % 3]).chars
        for i in range(3)
    ]

    diagram = Diagram(params, [])

    # 1. bigon between the two a-sides; induces a subdivision of the true a-side
    cells, gl, out = _bigon_cells(
        params, g2, "a", a_subdivision, g0p, -true.exponents[2], gammas[2], invert_chars(alphas[2])
    )
    diagram.extend(Diagram(params, cells, gl))
    true_a = [-e for e in reversed(out)]  # forward from g2'

    # 2. strip moving the subdivision points to multiples of L
    prefix = [0]
    for e in true_a:
        prefix.append(prefix[-1] + e)
    rounded = _round_to_multiples(L, prefix)
    for j in range(1, len(prefix)):
        if rounded[j] == prefix[j] and rounded[j - 1] == prefix[j - 1]:
            continue  # nothing moved; no strip cell needed
        word = (
            _geo_chars(params, "a", prefix[j] - prefix[j - 1])
            + _geo_chars(params, "a", rounded[j] - prefix[j])
            + _geo_chars(params, "a", rounded[j - 1] - rounded[j])
            + _geo_chars(params, "a", prefix[j - 1] - rounded[j - 1])
        )
        diagram.cells.append(Cell(PathWord(params, word), g2p * HPoint(prefix[j - 1], 0)))

    # 3. interior grid on the true triangle
    heights = [-r // L for r in rounded]  # n_j, from 0 up to m0'
    N = true.exponents[0]
    assert heights[-1] == N
    d = [heights[j + 1] - heights[j] for j in range(len(heights) - 1)]
    for j in range(len(d)):
        if d[j] == 0:
            continue
        word = (
            _geo_chars(params, "a", -L * d[j])
            + _geo_chars(params, "x", d[j])
            + _geo_chars(params, "y", d[j])
        )
        diagram.cells.append(Cell(PathWord(params, word), g2p * HPoint(rounded[j], 0)))
        for i in range(j):
            if d[i] == 0:
                continue
            word = (
                _geo_chars(params, "x", d[i])
                + _geo_chars(params, "y", -d[j])
                + _geo_chars(params, "x", -d[i])
                + _geo_chars(params, "y", d[j])
            )
            base_pt = g2p * HPoint(rounded[j], heights[j] - heights[i])
            diagram.cells.append(Cell(PathWord(params, word), base_pt))

    grid = list(reversed(d))  # subdivision of both true outer sides

    # 4. bigons between true and approximate x- and y-sides
    cells, gl, out_x = _bigon_cells(
        params, g0p, "x", grid,
        g0 * _flavor_point(params, "x", poly.exponents[0]), -poly.exponents[0],
        invert_chars(gammas[0]), alphas[0],
    )
    diagram.extend(Diagram(params, cells, gl))
    cells, gl, out_y = _bigon_cells(
        params, g1p, "y", grid,
        g1 * _flavor_point(params, "y", poly.exponents[1]), -poly.exponents[1],
        invert_chars(gammas[1]), alphas[1],
    )
    diagram.extend(Diagram(params, cells, gl))

    # 5. corner cells
    for i in range(3):
        word = cps[i].chars + alphas[(i + 1) % 3] + invert_chars(gammas[i])
        if word:
            diagram.cells.append(Cell(PathWord(params, word), poly.side_end(params, i)))

    sub_x = Subdivision(g0, "x", tuple(-e for e in reversed(out_x)))
    sub_y = Subdivision(g1, "y", tuple(-e for e in reversed(out_y)))
    return diagram, sub_x, sub_y


def fill_diamond(
    params: GroupParams,
    poly: ApproxPolygon,
    x_subdivision: SubdivisionExps,
    y_subdivision: SubdivisionExps,
    max_segments: Optional[int] = None,
    max_exponent: Optional[int] = None,
) -> tuple[Diagram, Subdivision, Subdivision]:
    """Fill a D-approximate diamond with sides 0 (x) and 1 (y) pre-subdivided.

    Returns the diagram (area <= n^2 + 4n + 4, mesh <= 3L + (8C+2) D +
    4C E^(1/alpha)) plus induced subdivisions of the other two sides with
    exponents bounded by E + 2L D^alpha.
    """
    if poly.kind != "diamond":
        raise ValueError("fill_diamond needs a diamond")
    _validate_subdivision("x-side", x_subdivision, poly.exponents[0], max_segments, max_exponent)
    _validate_subdivision("y-side", y_subdivision, poly.exponents[1], max_segments, max_exponent)
    cps = _corner_paths(params, poly)
    true = snap_diamond(params, poly)
    g1, h1, g2, h2 = poly.corners
    g1p, h1p, g2p, h2p = true.corners
    alphas = [geodesic_word_h(params, a.inverse() * b).chars for a, b in zip(poly.corners, true.corners)]
    gammas = [
        geodesic_word_h(params, poly.side_end(params, i).inverse() * true.corners[(i + 1) % 4]).chars
        for i in range(4)
    ]
    diagram = Diagram(params, [])

    cells, gl, out0 = _bigon_cells(
        params, g1, "x", x_subdivision, h1p, -true.exponents[0], gammas[0], invert_chars(alphas[0])
    )
    diagram.extend(Diagram(params, cells, gl))
    dw = [-e for e in reversed(out0)]  # true x-side forward from g1'

    cells, gl, out1 = _bigon_cells(
        params, h1, "y", y_subdivision, g2p, -true.exponents[1], gammas[1], invert_chars(alphas[1])
    )
    diagram.extend(Diagram(params, cells, gl))
    dz = [-e for e in reversed(out1)]  # true y-side forward from h1'

    # interior grid of small diamonds
    wpref = [0]
    for e in dw:
        wpref.append(wpref[-1] + e)
    zpref = [0]
    for e in dz:
        zpref.append(zpref[-1] + e)
    for i in range(1, len(wpref)):
        if dw[i - 1] == 0:
            continue
        for j in range(1, len(zpref)):
            if dz[j - 1] == 0:
                continue
            word = (
                _geo_chars(params, "x", dw[i - 1])
                + _geo_chars(params, "y", dz[j - 1])
                + _geo_chars(params, "x", -dw[i - 1])
                + _geo_chars(params, "y", -dz[j - 1])
            )
            base_pt = (
                g1p
                * _flavor_point(params, "x", wpref[i - 1])
                * _flavor_point(params, "y", zpref[j - 1])
            )
            diagram.cells.append(Cell(PathWord(params, word), base_pt))

    # bigons handing the opposite sides back to the approximate diamond
    cells, gl, out2 = _bigon_cells(
        params, g2p, "x", [-e for e in reversed(dw)],
        g2 * _flavor_point(params, "x", poly.exponents[2]), -poly.exponents[2],
        invert_chars(gammas[2]), alphas[2],
    )
    diagram.extend(Diagram(params, cells, gl))
    cells, gl, out3 = _bigon_cells(
        params, h2p, "y", [-e for e in reversed(dz)],
        h2 * _flavor_point(params, "y", poly.exponents[3]), -poly.exponents[3],
        invert_chars(gammas[3]), alphas[3],
    )
    diagram.extend(Diagram(params, cells, gl))

    for i in range(4):
        word = cps[i].chars + alphas[(i + 1) % 4] + invert_chars(gammas[i])
        if word:
            diagram.cells.append(Cell(PathWord(params, word), poly.side_end(params, i)))

    sub2 = Subdivision(g2, "x", tuple(-e for e in reversed(out2)))
    sub3 = Subdivision(h2, "y", tuple(-e for e in reversed(out3)))
    return diagram, sub2, sub3


# ---------------------------------------------------------------------------
# snowflake subdivision (loop subdivision property at desk scale)


def cap_depth(params: GroupParams, depth: int, subdivision_constant: int) -> int:
    """Smallest branch depth at which a branch caps off with one short cell.

    A depth-m branch caps once |a^(L^(p-m))| + Lam * |a^(L^(p-m)/Lam)| is at
    most half the loop length; the result is clamped to depth - 1.
    """
    L, lam = params.L, subdivision_constant
    half = 5 * 2**depth - 4
    for m in range(1, depth):
        incoming = L ** (depth - m)
        if incoming % lam:
            continue
        if dist_a_power(params, incoming) + lam * dist_a_power(params, incoming // lam) <= half:
            return m
    return depth - 1


def subdivide_snowflake(
    params: GroupParams, depth: int, subdivision_constant: Optional[int] = None
) -> Diagram:
    """Subdivide the depth-p snowflake loop into boundedly many short cells.

    The central diamond becomes Lam^2 small diamonds; the subdivision is
    propagated into the branches, and every branch is capped by a single
    cell at the depth where the capping inequality first holds.  For p at
    least 2 every cell boundary is trivial and has length at most half the
    loop length; the cell count depends only on L and Lam once p exceeds
    the cap depth.  (For p = 1 the loop has the girth length, so no filling
    with cells shorter than the loop exists; the single-cell diagram is
    returned.)
    """
    L = params.L
    lam = subdivision_constant if subdivision_constant is not None else L
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if depth == 1:
        return Diagram(params, [Cell(snowflake_loop(params, 1), HPoint.identity())])
    if L ** (depth - 1) % lam:
        raise ValueError(f"subdivision constant {lam} must divide L^(p-1)")

    diagram = Diagram(params, [])
    m_star = cap_depth(params, depth, lam)

    # central diamond -> lam^2 small diamonds
    k1 = L ** (depth - 1) // lam
    word = (
        _geo_chars(params, "x", k1)
        + _geo_chars(params, "y", k1)
        + _geo_chars(params, "x", -k1)
        + _geo_chars(params, "y", -k1)
    )
    for i in range(lam):
        for j in range(lam):
            base_pt = _flavor_point(params, "x", i * k1) * _flavor_point(params, "y", j * k1)
            diagram.cells.append(Cell(PathWord(params, word), base_pt))
            if j:
                diagram.gluings.append(
                    (len(diagram.cells) - 2, len(diagram.cells) - 1, _geo_chars(params, "x", k1))
                )

    # branch levels
    for m in range(1, m_star):
        incoming = L ** (depth - m)
        piece = incoming // lam
        if piece % L:
            raise ValueError(
                f"subdivision constant {lam} leaves non-integral grid at depth {m}"
            )
        d = piece // L
        tri_word = (
            _geo_chars(params, "a", -L * d)
            + _geo_chars(params, "x", d)
            + _geo_chars(params, "y", d)
        )
        dia_word = (
            _geo_chars(params, "x", d)
            + _geo_chars(params, "y", -d)
            + _geo_chars(params, "x", -d)
            + _geo_chars(params, "y", d)
        )
        for _ in range(4 * 2 ** (m - 1)):
            diagram.cells.extend(Cell(PathWord(params, tri_word)) for _ in range(lam))
            diagram.cells.extend(
                Cell(PathWord(params, dia_word)) for _ in range((lam * lam - lam) // 2)
            )

    # caps
    incoming = L ** (depth - m_star)
    piece = incoming // lam
    piece_geo = invert_chars(_geo_chars(params, "a", piece))
    count = 4 * 2 ** (m_star - 1)
    for flavor, reps in (("s", count // 2), ("t", count // 2)):
        arc = snowflake_path(params, depth - m_star, flavor).chars
        cap_word = arc + piece_geo * lam
        for _ in range(reps):
            diagram.cells.append(Cell(PathWord(params, cap_word)))
    return diagram


# ---------------------------------------------------------------------------
# corridor dual trees and the central region


@dataclass
class HnnDualTree:
    """The tree dual to the corridor decomposition of an HNN diagram.

    Nodes are vertex regions carrying the lengths of the boundary arcs
    attached to them; edges are corridors, each crossed by two boundary
    arcs of the given length.  The boundary length is the sum of all node
    arcs plus twice the sum of edge lengths.
    """

    arcs: dict[str, tuple[int, ...]]
    edges: list[tuple[str, str, int]]
    kinds: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nodes = set(self.arcs)
        for a, b, length in self.edges:
            if a not in nodes or b not in nodes:
                raise ValueError(f"edge ({a}, {b}) mentions an unknown node")
            if length < 0:
                raise ValueError("edge lengths must be nonnegative")
        if len(self.edges) != len(nodes) - 1:
            raise ValueError("not a tree: wrong edge count")
        seen = {next(iter(nodes))} if nodes else set()
        frontier = list(seen)
        adj = self.adjacency()
        while frontier:
            v = frontier.pop()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if seen != nodes:
            raise ValueError("not a tree: disconnected")

    def adjacency(self) -> dict[str, list[tuple[str, int]]]:
        adj: dict[str, list[tuple[str, int]]] = {v: [] for v in self.arcs}
        for a, b, length in self.edges:
            adj[a].append((b, length))
            adj[b].append((a, length))
        return adj

    @property
    def boundary_length(self) -> int:
        return sum(sum(a) for a in self.arcs.values()) + 2 * sum(l for _, _, l in self.edges)

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": v, "arcs": list(a), "kind": self.kinds.get(v, "")}
                for v, a in sorted(self.arcs.items())
            ],
            "edges": [[a, b, l] for a, b, l in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HnnDualTree":
        arcs = {n["id"]: tuple(n.get("arcs", ())) for n in data["nodes"]}
        kinds = {n["id"]: n["kind"] for n in data["nodes"] if n.get("kind")}
        edges = [(a, b, int(l)) for a, b, l in data["edges"]]
        return cls(arcs, edges, kinds)

    def to_dot(self) -> str:
        lines = ["graph dual_tree {"]
        for v in sorted(self.arcs):
            label = f"{v}|{list(self.arcs[v])}"
            lines.append(f'  "{v}" [label="{label}"];')
        for a, b, l in self.edges:
            lines.append(f'  "{a}" -- "{b}" [label="{l}"];')
        lines.append("}")
        return "\n".join(lines)


def snowflake_hnn_tree(params: GroupParams, depth: int) -> HnnDualTree:
    """The corridor dual tree of the standard snowflake diagram.

    A central diamond node, binary-branching triangle nodes, and leaf nodes
    for the innermost a-edges (one boundary arc of length 1 each); every
    corridor has length 1.  Total arc length is the loop length 2(5 2^p - 4).
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    arcs: dict[str, tuple[int, ...]] = {"center": ()}
    kinds = {"center": "central-diamond"}
    edges: list[tuple[str, str, int]] = []

    def grow(node: str, level: int) -> None:
        for child_tag in ("0", "1"):
            child = f"{node}.{child_tag}"
            edges.append((node, child, 1))
            if level >= depth:
                arcs[child] = (1,)
                kinds[child] = "leaf"
            else:
                arcs[child] = ()
                kinds[child] = "triangle"
                grow(child, level + 1)

    for branch in ("b0", "b1", "b2", "b3"):
        edges.append(("center", branch, 1))
        if depth == 1:
            arcs[branch] = (1,)
            kinds[branch] = "leaf"
        else:
            arcs[branch] = ()
            kinds[branch] = "triangle"
            grow(branch, 2)
    return HnnDualTree(arcs, edges, kinds)


@dataclass(frozen=True)
class CentralLocation:
    """The unique point of the dual tree where f(x) <= 0."""

    kind: str  # 'vertex' | 'edge'
    node: Optional[str]
    edge: Optional[tuple[str, str]]
    offset: Optional[Fraction]  # distance from edge[0]
    f_value: Fraction


def _directed_masses(tree: HnnDualTree) -> dict[tuple[str, str], int]:
    """S(v -> w): boundary mass in the component of T - v containing w."""
    adj = tree.adjacency()
    masses: dict[tuple[str, str], int] = {}
    root = next(iter(tree.arcs))
    order: list[tuple[str, str]] = []
    stack = [(root, "")]
    seen = {root}
    while stack:
        v, parent = stack.pop()
        for w, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                order.append((v, w))
                stack.append((w, v))
    for v, w in reversed(order):  # children before parents
        length = next(l for x, l in adj[v] if x == w)
        masses[(v, w)] = (
            2 * length
            + sum(tree.arcs[w])
            + sum(masses[(w, x)] for x, _ in adj[w] if x != v)
        )
    total = tree.boundary_length
    for v, w in order:  # now fill the upward directions
        length = next(l for x, l in adj[v] if x == w)
        # the corridor's own two arcs belong to both directed masses
        masses[(w, v)] = total - masses[(v, w)] + 2 * length
    return masses


def f_at_vertex(tree: HnnDualTree, node: str, masses=None) -> Fraction:
    masses = masses if masses is not None else _directed_masses(tree)
    adj = tree.adjacency()
    biggest = max((masses[(node, w)] for w, _ in adj[node]), default=0)
    return Fraction(biggest) - Fraction(tree.boundary_length, 2)


def f_at_edge_point(
    tree: HnnDualTree, edge: tuple[str, str], offset: Fraction, masses=None
) -> Fraction:
    masses = masses if masses is not None else _directed_masses(tree)
    a, b = edge
    length = next(l for x, y, l in tree.edges if {x, y} == {a, b})
    m_a = tree.boundary_length - masses[(a, b)]
    m_b = tree.boundary_length - masses[(b, a)]
    comp_a = m_a + 2 * offset
    comp_b = m_b + 2 * (length - offset)
    return Fraction(max(comp_a, comp_b)) - Fraction(tree.boundary_length, 2)


def find_central_region(tree: HnnDualTree) -> CentralLocation:
    """The unique tree point where the longest complementary arc is <= half.

    Returns either a vertex (f <= 0 there) or an interior edge point where
    f vanishes; existence and uniqueness are asserted.
    """
    masses = _directed_masses(tree)
    total = tree.boundary_length
    found: list[CentralLocation] = []
    for v in tree.arcs:
        f = f_at_vertex(tree, v, masses)
        if f <= 0:
            found.append(CentralLocation("vertex", v, None, None, f))
    for a, b, length in tree.edges:
        m_a = total - masses[(a, b)]
        theta = Fraction(total, 2) - Fraction(m_a)
        theta = theta / 2
        if 0 < theta < length:
            found.append(CentralLocation("edge", None, (a, b), theta, Fraction(0)))
    assert len(found) == 1, f"expected a unique central point, found {found}"
    return found[0]


# ---------------------------------------------------------------------------
# worst-case area assembly


def area_budget(central: int, enfilade: int, branching: int, shells: int) -> int:
    """Worst-case area C + 4(E + B)(2^n - 1) + 2^(n+2) of the shell assembly."""
    if shells < 0:
        raise ValueError("shell count must be nonnegative")
    return central + 4 * (enfilade + branching) * (2**shells - 1) + 2 ** (shells + 2)


# ---------------------------------------------------------------------------
# JSON interchange for polygons


def polygon_to_json(poly: ApproxPolygon) -> dict:
    data = {
        "kind": poly.kind,
        "corners": [[c.u, c.v] for c in poly.corners],
        "flavors": list(poly.flavors),
        "exponents": list(poly.exponents),
        "D": poly.D,
    }
    if poly.corner_paths is not None:
        data["corner_paths"] = [str(cp) for cp in poly.corner_paths]
    return data


def polygon_from_json(params: GroupParams, data: dict) -> ApproxPolygon:
    corner_paths = None
    if data.get("corner_paths") is not None:
        corner_paths = tuple(
            PathWord(params, parse_word(w)) for w in data["corner_paths"]
        )
    return ApproxPolygon(
        data["kind"],
        tuple(HPoint(int(u), int(v)) for u, v in data["corners"]),
        tuple(data["flavors"]),
        tuple(int(e) for e in data["exponents"]),
        int(data["D"]),
        corner_paths,
    )
