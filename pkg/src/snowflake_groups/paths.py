"""Snowflake paths and loops, escape decompositions, enfilades, loop checks.

The snowflake paths are the recursively defined geodesics from 1 to a^(L^n):

    sigma_{1,s} = s a s^-1 t a t^-1          sigma_{1,t} = t a t^-1 s a s^-1
    sigma_{n+1,s} = s sigma_{n,s} s^-1 t sigma_{n,s} t^-1
    sigma_{n+1,t} = t sigma_{n,t} t^-1 s sigma_{n,t} s^-1

of length 5 * 2^n - 4; sigma_{n,s} followed by the reverse of sigma_{n,t}
is a snowflake loop, and these loops are geodesic (every antipodal pair of
vertices is at distance exactly half the loop length).

With respect to a coset gH of the vertex group, an *escape* is a subpath
meeting gH exactly at its endpoints; its endpoints differ by a power of a,
x or y (its flavor), the exponent of that power is the escape's exponent,
and its trace is the toral path between its endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .hnn_group import GroupElement, pair_dist, reduce_word
from .params import GroupParams
from .vertex_group import HPoint
from .words import PathWord, invert_chars

_ESCAPE_KIND = {"s": "x-escape", "S": "a-escape", "t": "y-escape", "T": "a-escape"}
_ESCAPE_FLAVOR = {"s": "x", "S": "a", "t": "y", "T": "a"}
# flavor of the conjugated (inner) power across each opening letter
_INNER_FLAVOR = {"s": "a", "S": "x", "t": "a", "T": "y"}


class IncompleteVerification(RuntimeError):
    """A verification could not be completed under the given search cap."""


def snowflake_path(params: GroupParams, n: int, flavor: str = "s") -> PathWord:
    """sigma_{n,flavor}: a geodesic from 1 to a^(L^n) of length 5 * 2^n - 4."""
    if n < 1:
        raise ValueError(f"depth must be >= 1, got {n}")
    if flavor not in ("s", "t"):
        raise ValueError(f"flavor must be 's' or 't', got {flavor!r}")
    first, second = (("s", "S"), ("t", "T")) if flavor == "s" else (("t", "T"), ("s", "S"))
    chars = first[0] + "a" + first[1] + second[0] + "a" + second[1]
    for _ in range(n - 1):
        chars = first[0] + chars + first[1] + second[0] + chars + second[1]
    return PathWord(params, chars)


def snowflake_loop(params: GroupParams, n: int) -> PathWord:
    """The closed loop sigma_{n,s} + reverse(sigma_{n,t}) of length 2(5 * 2^n - 4)."""
    return PathWord(
        params,
        snowflake_path(params, n, "s").chars + invert_chars(snowflake_path(params, n, "t").chars),
    )


# ---------------------------------------------------------------------------
# escape decomposition


@dataclass(frozen=True)
class PathSegment:
    """A toral subpath or an escape of a decomposed path."""

    kind: str  # 'toral' | 'a-escape' | 'x-escape' | 'y-escape'
    word: PathWord
    flavor: Optional[str]  # 'a' | 'x' | 'y', None for a toral piece that is no pure power
    exponent: Optional[int]
    start: int  # letter offsets into the decomposed path
    end: int

    def is_escape(self) -> bool:
        return self.kind != "toral"


def decompose_escapes(
    params: GroupParams, path: PathWord, base: GroupElement | None = None
) -> list[PathSegment]:
    """Split a path with endpoints in the coset (base)H into escapes and toral pieces.

    Maximal runs of toral edges are consolidated into single toral segments.
    """
    keys = path.vertex_keys()
    if len(keys[-1]) != 2:
        where = str(base) + "H" if base is not None else "H"
        raise ValueError(f"path endpoint leaves the coset {where}")
    visits = [i for i, k in enumerate(keys) if len(k) == 2]
    segments: list[PathSegment] = []
    toral_from: Optional[int] = None

    def flush_toral(upto: int) -> None:
        nonlocal toral_from
        if toral_from is None:
            return
        word = PathWord(params, path.chars[toral_from:upto])
        delta = HPoint(
            keys[upto][0] - keys[toral_from][0], keys[upto][1] - keys[toral_from][1]
        )
        power = delta.as_power(params)
        flavor, exponent = power if power else (None, None)
        segments.append(PathSegment("toral", word, flavor, exponent, toral_from, upto))
        toral_from = None

    for a, b in zip(visits, visits[1:]):
        if b == a + 1:  # a single toral edge
            if toral_from is None:
                toral_from = a
            continue
        flush_toral(a)
        word = PathWord(params, path.chars[a:b])
        first = word.chars[0]
        delta = HPoint(keys[b][0] - keys[a][0], keys[b][1] - keys[a][1])
        power = delta.as_power(params)
        flavor = _ESCAPE_FLAVOR[first]
        if power is None or (power[0] != flavor and power[1] != 0):
            raise ValueError(f"escape at offset {a} does not trace a {flavor}-power")
        segments.append(PathSegment(_ESCAPE_KIND[first], word, flavor, power[1], a, b))
    flush_toral(visits[-1])
    return segments


def trace(segment: PathSegment) -> tuple[str, int]:
    """(flavor, exponent) of an escape: the toral path between its endpoints."""
    if not segment.is_escape():
        raise ValueError("trace is only defined for escapes")
    assert segment.flavor is not None and segment.exponent is not None
    return segment.flavor, segment.exponent


# ---------------------------------------------------------------------------
# enfilade decomposition


@dataclass(frozen=True)
class EnfiladeDecomposition:
    """The maximal nested factorization of an escape (growth parameter R > 2):

    gamma = eps_0 alpha_1 eps_1 ... alpha_n eps_n end eps_n^-1 beta_n ... beta_1 eps_0^-1

    with |gamma_(i+1)| >= (R-1)/R |gamma'_i| at every level.  flavors[i] is
    the flavor of the level-i escape; flavors[n+1] is the flavor of the
    endpoint difference of the end.  All exponents share one sign whenever
    the input is close enough to geodesic (biLipschitz constant below 2).
    """

    params: GroupParams
    epsilons: tuple[str, ...]
    alphas: tuple[PathWord, ...]
    betas: tuple[PathWord, ...]
    end: PathWord
    flavors: tuple[str, ...]
    exponents: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.epsilons) - 1

    def reassemble(self) -> PathWord:
        chars = self.epsilons[-1] + self.end.chars + self.epsilons[-1].swapcase()
        for i in range(len(self.epsilons) - 2, -1, -1):
            chars = (
                self.epsilons[i]
                + self.alphas[i].chars
                + chars
                + self.betas[i].chars
                + self.epsilons[i].swapcase()
            )
        return PathWord(self.params, chars)


def _single_escape(params: GroupParams, path: PathWord) -> PathSegment:
    segments = decompose_escapes(params, path)
    if len(segments) != 1 or not segments[0].is_escape():
        raise ValueError("path is not a single escape")
    return segments[0]


def enfilade_decompose(params: GroupParams, path: PathWord, R) -> EnfiladeDecomposition:
    """The unique maximal R-enfilade decomposition of a single escape."""
    R = Fraction(R)
    if R <= 2:
        raise ValueError(f"R must exceed 2, got {R}")
    seg = _single_escape(params, path)

    epsilons: list[str] = []
    alphas: list[PathWord] = []
    betas: list[PathWord] = []
    flavors: list[str] = [seg.flavor or "a"]
    exponents: list[int] = [seg.exponent or 0]

    current = seg.word
    while True:
        eps = current.chars[0]
        if current.chars[-1] != eps.swapcase():
            raise ValueError("escape does not close with the inverse stable letter")
        epsilons.append(eps)
        inner = PathWord(params, current.chars[1:-1])
        candidates = [
            s
            for s in decompose_escapes(params, inner)
            if s.is_escape() and R * s.word.length >= (R - 1) * inner.length
        ]
        if not candidates:
            return EnfiladeDecomposition(
                params,
                tuple(epsilons),
                tuple(alphas),
                tuple(betas),
                inner,
                tuple(flavors) + (_INNER_FLAVOR[eps],),
                tuple(exponents),
            )
        assert len(candidates) == 1, "R > 2 admits at most one qualifying escape"
        nxt = candidates[0]
        alphas.append(PathWord(params, inner.chars[: nxt.start]))
        betas.append(PathWord(params, inner.chars[nxt.end :]))
        flavors.append(nxt.flavor or "a")
        exponents.append(nxt.exponent or 0)
        current = nxt.word


# ---------------------------------------------------------------------------
# loop verification


@dataclass(frozen=True)
class BilipReport:
    """Result of scanning all vertex pairs of a closed loop.

    constant = max over pairs of d_loop(p, q) / d_X(p, q) when complete;
    when some pair exceeded the cap, `constant` is only a certified lower
    bound and `complete` is False.  Non-embedded loops report the first
    repeated vertex (or edge) instead of a constant.
    """

    embedded: bool
    complete: bool
    constant: Optional[Fraction]
    witness: Optional[tuple[int, int]]
    repeated_at: Optional[tuple[int, int]] = None

    def is_geodesic_loop(self) -> bool:
        return self.embedded and self.complete and self.constant == 1


def _loop_vertices(params: GroupParams, loop: PathWord) -> list[tuple]:
    if any(c in loop.chars for c in "xXyY"):
        raise ValueError("loop checks require an {a, s, t} word (x/y edges are weighted)")
    keys = loop.vertex_keys()
    if len(keys[-1]) != 2 or keys[-1] != (0, 0):
        raise ValueError("path is not a closed loop")
    return keys[:-1]


def loop_bilip_constant(
    params: GroupParams, loop: PathWord, cap: int, max_states: int = 10_000_000
) -> BilipReport:
    """Max distortion ratio d_loop / d_X over vertex pairs of an embedded loop."""
    keys = _loop_vertices(params, loop)
    n = len(keys)
    seen: dict[tuple, int] = {}
    for i, k in enumerate(keys):
        if k in seen:
            return BilipReport(False, True, None, None, repeated_at=(seen[k], i))
        seen[k] = i
    edges = set()
    for i in range(n):
        e = frozenset((keys[i], keys[(i + 1) % n]))
        if e in edges:
            return BilipReport(False, True, None, None, repeated_at=(i, (i + 1) % n))
        edges.add(e)
    best = Fraction(0)
    witness: Optional[tuple[int, int]] = None
    complete = True
    for i in range(n):
        gi = GroupElement(params, keys[i])
        for j in range(i + 1, n):
            d_loop = min(j - i, n - (j - i))
            if d_loop <= 1:
                continue
            d = pair_dist(params, gi, GroupElement(params, keys[j]), min(cap, d_loop), max_states)
            if d is None:
                complete = False
                continue
            r = Fraction(d_loop, d)
            if r > best:
                best, witness = r, (i, j)
    if witness is None:
        best = Fraction(1)
    return BilipReport(True, complete, best, witness)


def verify_geodesic_loop(
    params: GroupParams, loop: PathWord, cap: int | None = None, max_states: int = 10_000_000
) -> bool:
    """True iff every antipodal vertex pair of the loop is at distance |loop|/2."""
    keys = _loop_vertices(params, loop)
    n = len(keys)
    if n % 2:
        raise ValueError("loops in G_L have even length")
    half = n // 2
    if cap is None:
        cap = half
    if cap < half:
        raise IncompleteVerification(f"cap {cap} is below the antipodal distance {half}")
    for i in range(half):
        # the loop arc shows d <= half; distances have the parity of half, so
        # ruling out d <= half - 1 pins the antipodal distance to exactly half
        d = pair_dist(
            params, GroupElement(params, keys[i]), GroupElement(params, keys[i + half]),
            half - 1, max_states,
        )
        if d is not None:
            return False
    return True


def measure_bilip_constant(
    params: GroupParams, path: PathWord, max_states: int = 10_000_000
) -> Fraction:
    """Max over vertex pairs of arc distance / graph distance, for an open path."""
    keys = path.vertex_keys()
    best = Fraction(1)
    for i in range(len(keys)):
        gi = GroupElement(params, keys[i])
        for j in range(i + 2, len(keys)):
            d_arc = j - i
            d = pair_dist(params, gi, GroupElement(params, keys[j]), d_arc, max_states)
            assert d is not None
            if d > 0:
                best = max(best, Fraction(d_arc, d))
    return best
