"""Exact distances and geodesics inside the vertex group H = <a, x, y> of G_L.

H is free abelian of rank 2; we use canonical coordinates (u, v) for
a^u x^v, eliminating y via y = a^L x^-1.  All distances are in the word
metric over {a, s, t}.

The length of a^m is computed by the dynamic program

    |a^l|       = l            for 0 <  l <= 3 + L/2
    |a^l|       = 6 + L - l    for 3 + L/2 <= l <= L
    |a^(qL)|    = 4 + 2|a^q|   for q >= 1
    |a^(qL+r)|  = min(|a^(qL)| + r, |a^((q+1)L)| + L - r)   for 0 < r < L, q >= 1

and |a^-m| = |a^m|.  Lengths of general H elements reduce to this via

    |a^l x^m y^n| = min over decompositions l = qL + r, |r| < L, of
        min( |r| + |x^(m+q)| + |y^(n+q)|,
             L - |r| + |x^(m+q+sgn r)| + |y^(n+q+sgn r)| )

where |g^k| = 2 + |a^k| for g in {x, y}, k != 0.  The sign convention of r
is not pinned down; we minimize over every valid decomposition, which is
safe and is validated against the breadth-first-search oracle.

All functions are pure.  The only state is the internal |a^m| memo table,
whose inserts are idempotent, so concurrent use from several threads is
safe under CPython and results are deterministic either way.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .params import GroupParams
from .words import PathWord, power_chars


class HPoint(NamedTuple):
    """The element a^u x^v of H (canonical coordinates)."""

    u: int
    v: int

    @classmethod
    def identity(cls) -> "HPoint":
        return cls(0, 0)

    @classmethod
    def from_xyz(cls, params: GroupParams, ell: int, m: int, n: int) -> "HPoint":
        """Canonical form of a^ell x^m y^n."""
        return cls(ell + params.L * n, m - n)

    @classmethod
    def generator(cls, params: GroupParams, gen: str, k: int = 1) -> "HPoint":
        if gen == "a":
            return cls(k, 0)
        if gen == "x":
            return cls(0, k)
        if gen == "y":
            return cls(k * params.L, -k)
        raise ValueError(f"not an H generator: {gen!r}")

    def __mul__(self, other: "HPoint") -> "HPoint":  # type: ignore[override]
        return HPoint(self.u + other.u, self.v + other.v)

    def inverse(self) -> "HPoint":
        return HPoint(-self.u, -self.v)

    def is_identity(self) -> bool:
        return self.u == 0 and self.v == 0

    def as_power(self, params: GroupParams) -> tuple[str, int] | None:
        """(gen, k) if this is a pure power of a, x or y; None otherwise."""
        if self.v == 0:
            return ("a", self.u)
        if self.u == 0:
            return ("x", self.v)
        if self.u == -self.v * params.L:
            return ("y", -self.v)
        return None

    def word_chars(self) -> str:
        return power_chars("a", self.u) + power_chars("x", self.v)


# ---------------------------------------------------------------------------
# distance of a-powers

_dist_memo: dict[tuple[int, int], int] = {}


def _dist_a(L: int, m: int) -> int:
    """|a^m| for m >= 0; memoized on (L, m) for m > L."""
    if m <= 3 + L // 2:
        return m
    if m <= L:
        return 6 + L - m
    key = (L, m)
    hit = _dist_memo.get(key)
    if hit is not None:
        return hit
    q, r = divmod(m, L)
    val = 4 + 2 * _dist_a(L, q)
    if r:
        val = min(val + r, 4 + 2 * _dist_a(L, q + 1) + L - r)
    _dist_memo[key] = val
    return val


def dist_a_power(params: GroupParams, m: int) -> int:
    """|a^m| over {a, s, t}; symmetric in the sign of m."""
    return _dist_a(params.L, abs(m))


def dist_table(params: GroupParams, m_max: int) -> list[int]:
    """[|a^0|, |a^1|, ..., |a^m_max|] built iteratively (bulk scans)."""
    L = params.L
    table = [0] * (m_max + 1)
    for m in range(1, min(m_max, L) + 1):
        table[m] = m if m <= 3 + L // 2 else 6 + L - m
    for m in range(L + 1, m_max + 1):
        q, r = divmod(m, L)
        val = 4 + 2 * table[q]
        if r:
            val = min(val + r, 4 + 2 * table[q + 1] + L - r)
        table[m] = val
    return table


def _gpow(L: int, k: int) -> int:
    """|x^k| = |y^k| = 2 + |a^k| for k != 0, else 0."""
    return 0 if k == 0 else 2 + _dist_a(L, abs(k))


def dist_power(params: GroupParams, gen: str, m: int) -> int:
    """|gen^m| for gen in {a, x, y}."""
    if gen == "a":
        return _dist_a(params.L, abs(m))
    if gen in ("x", "y"):
        return _gpow(params.L, m)
    raise ValueError(f"not an H generator: {gen!r}")


def _decompositions(L: int, u: int) -> Iterator[tuple[int, int]]:
    """All (q, r) with u = qL + r and |r| < L; at most two."""
    q, r = divmod(u, L)
    yield q, r
    if r:
        yield q + 1, r - L


def dist_h(params: GroupParams, h: HPoint) -> int:
    """|a^u x^v| over {a, s, t}, minimizing over all decompositions."""
    L = params.L
    u, v = h
    best: int | None = None
    for q, r in _decompositions(L, u):
        cand = abs(r) + _gpow(L, v + q) + _gpow(L, q)
        if best is None or cand < best:
            best = cand
        if r:
            s = 1 if r > 0 else -1
            cand = L - abs(r) + _gpow(L, v + q + s) + _gpow(L, q + s)
            if cand < best:
                best = cand
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# geodesic expressions (base-L digit expansions realizing |a^m|)


@dataclass(frozen=True)
class GeodesicExpression:
    """m = sum digits[i] * L^i whose associated recursive path is geodesic.

    Digit constraints for m > 0: 0 < digits[-1] <= L/2 + 2 and
    |digits[i]| <= L/2 below the top; negated for m < 0.
    """

    digits: tuple[int, ...]
    base: int

    def value(self) -> int:
        return sum(d * self.base**i for i, d in enumerate(self.digits))

    def path_length(self) -> int:
        """sum |digits[i]| 2^i + 4(2^j - 1), the length of the induced path."""
        j = len(self.digits) - 1
        return sum(abs(d) << i for i, d in enumerate(self.digits)) + 4 * ((1 << j) - 1)


def _expr_digits(L: int, m: int) -> list[int]:
    """Digit list (low to high) for m > 0."""
    if m <= L // 2 + 2:
        return [m]
    q, r = divmod(m, L)
    len_low = (4 + 2 * _dist_a(L, q) if q else 0) + r
    len_high = 4 + 2 * _dist_a(L, q + 1) + (L - r)
    if len_low < len_high or (len_low == len_high and r <= L // 2):
        # route through a^(qL); q = 0 cannot win here since m > L/2 + 2
        assert q > 0
        return [r] + _expr_digits(L, q)
    return [r - L] + _expr_digits(L, q + 1)


def geodesic_expression(params: GroupParams, m: int) -> GeodesicExpression:
    """A geodesic expression of m != 0 with the standard digit bounds.

    Ties between the two guard routes are broken through qL when the
    residue r satisfies r <= L/2, through (q+1)L otherwise; this is what
    keeps every digit within the stated bounds.
    """
    if m == 0:
        raise ValueError("m must be nonzero")
    digits = _expr_digits(params.L, abs(m))
    if m < 0:
        digits = [-d for d in digits]
    return GeodesicExpression(tuple(digits), params.L)


def _expand_digits(digits: tuple[int, ...]) -> str:
    """Path word realizing sum digits[i] L^i: recursively s w s^-1 t w t^-1 a^d."""
    chars = power_chars("a", digits[-1])
    for d in reversed(digits[:-1]):
        chars = "s" + chars + "S" + "t" + chars + "T" + power_chars("a", d)
    return chars


def geodesic_word_a_power(params: GroupParams, m: int) -> PathWord:
    """A geodesic word over {a, s, t} from 1 to a^m."""
    if m == 0:
        return PathWord(params, "")
    return PathWord(params, _expand_digits(geodesic_expression(params, m).digits))


def geodesic_word_h(params: GroupParams, h: HPoint) -> PathWord:
    """A geodesic word from 1 to h of the shape (x-escape)(y-escape)(a-path)."""
    L = params.L
    u, v = h
    best: tuple[int, int, int] | None = None  # (length, q', a-exponent)
    for q, r in _decompositions(L, u):
        cand = (abs(r) + _gpow(L, v + q) + _gpow(L, q), q, r)
        if best is None or cand[0] < best[0]:
            best = cand
        if r:
            s = 1 if r > 0 else -1
            cand = (L - abs(r) + _gpow(L, v + q + s) + _gpow(L, q + s), q + s, r - s * L)
            if cand[0] < best[0]:
                best = cand
    assert best is not None
    _, q, p = best
    chars = ""
    if v + q:
        chars += "s" + geodesic_word_a_power(params, v + q).chars + "S"
    if q:
        chars += "t" + geodesic_word_a_power(params, q).chars + "T"
    chars += power_chars("a", p)
    return PathWord(params, chars)


# ---------------------------------------------------------------------------
# lines, intersections, projections


def closest_points_on_a_line(params: GroupParams, h: HPoint) -> tuple[HPoint, HPoint]:
    """The two closest points of <a> to h (not itself on <a>).

    They are the unique points of <a> meeting h<x> and h<y> respectively,
    and they are equidistant from h.
    """
    if h.v == 0:
        raise ValueError("h lies on <a>; closest-point pair is undefined")
    return HPoint(h.u, 0), HPoint(h.u + h.v * params.L, 0)


def _min_residue(L: int, target: int) -> int:
    """The representative of target mod L with |value| <= L/2, ties positive."""
    r = target % L
    if r == 0:
        return 0
    if 2 * r < L:
        return r
    if 2 * r > L:
        return r - L
    return L // 2


def xy_line_intersection(params: GroupParams, h: HPoint) -> tuple[int, HPoint]:
    """The ell with |ell| <= L/2 making <x> meet h a^ell <y>, and the meeting point."""
    L = params.L
    ell = _min_residue(L, -h.u)
    point = HPoint(0, h.v + (h.u + ell) // L)
    return ell, point


def project_to_x_line(params: GroupParams, p: int) -> HPoint:
    """x^(p/L), the unique closest point of <x> to a^p (requires L | p)."""
    if p % params.L:
        raise ValueError(f"L = {params.L} does not divide {p}")
    return HPoint(0, p // params.L)


def ratio(params: GroupParams, m: int, dist: int) -> float:
    """dist / |m|^(1/alpha), the distortion ratio (m != 0)."""
    if m == 0:
        raise ValueError("ratio undefined at m = 0")
    return dist / params.root(m)


def log_base(params: GroupParams, m: int) -> float:
    return math.log(abs(m)) / math.log(params.L)
