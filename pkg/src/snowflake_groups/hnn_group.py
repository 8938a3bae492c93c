"""Britton normal forms and brute-force distance oracles for G_L.

G_L is a double HNN extension of H = <a, x> = Z^2 with stable letters
s (conjugating <a> to <x>) and t (conjugating <a> to <y>).

A normal form is

    head . e_1 . r_1 . e_2 . r_2 ... e_k . tail

with head and the r_i canonical coset representatives: before each stable
letter the part of H that can cross it is pushed to the right,

    x^k s = s a^k      a^k s^-1 = s^-1 x^k
    y^k t = t a^k      a^k t^-1 = t^-1 y^k

so the H part preceding s or t is a pure a-power and the H part
preceding s^-1 or t^-1 is a pure x-power.  The H part after the final
stable letter (the tail) is unconstrained.  Pinches s a^k s^-1,
s^-1 x^k s, t a^k t^-1, t^-1 y^k t are removed as they appear.

Internally a normal form is a flat tuple of integers

    (hu, hv, c_1, u_1, v_1, ..., c_k, u_k, v_k)

with letter codes s=1, s^-1=-1, t=2, t^-1=-2 and (u_i, v_i) the canonical
coordinates of r_i.  All helpers taking such "keys" are pure; the module
has no mutable state, so everything here is safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterator, Optional, TextIO

import json

from .params import GroupParams
from .vertex_group import HPoint
from .words import format_word, parse_word, power_chars

_CODE = {"s": 1, "S": -1, "t": 2, "T": -2}
_LETTER = {1: "s", -1: "S", 2: "t", -2: "T"}

DEFAULT_MAX_STATES = 10_000_000

Key = tuple  # flat normal-form tuple


class BudgetExceeded(RuntimeError):
    """Raised when a search would exceed its state budget."""

    def __init__(self, frontier: int, visited: int):
        super().__init__(
            f"state budget exceeded: {visited} states visited, frontier size {frontier}"
        )
        self.frontier = frontier
        self.visited = visited


def identity_key() -> Key:
    return (0, 0)


def _feed_h(key: Key, du: int, dv: int) -> Key:
    if du == 0 and dv == 0:
        return key
    return key[:-2] + (key[-2] + du, key[-1] + dv)


def _feed_stable(L: int, key: Key, code: int) -> Key:
    u, v = key[-2], key[-1]
    if code == 1:  # s: <x> crosses, x^v -> a^v
        ru, rv, cu, cv = u, 0, v, 0
    elif code == -1:  # s^-1: <a> crosses, a^u -> x^u
        ru, rv, cu, cv = 0, v, 0, u
    elif code == 2:  # t: <y> crosses, y^-v -> a^-v
        ru, rv, cu, cv = u + v * L, 0, -v, 0
    else:  # t^-1: <a> crosses, a^u -> y^u
        ru, rv, cu, cv = 0, v, u * L, -u
    if len(key) > 2 and key[-3] == -code and ru == 0 and rv == 0:
        # Britton pinch: drop the previous stable letter, merge the crossed part
        return key[:-5] + (key[-5] + cu, key[-4] + cv)
    return key[:-2] + (ru, rv, code, cu, cv)


def feed_char(L: int, key: Key, ch: str) -> Key:
    code = _CODE.get(ch)
    if code is not None:
        return _feed_stable(L, key, code)
    if ch == "a":
        return _feed_h(key, 1, 0)
    if ch == "A":
        return _feed_h(key, -1, 0)
    if ch == "x":
        return _feed_h(key, 0, 1)
    if ch == "X":
        return _feed_h(key, 0, -1)
    if ch == "y":
        return _feed_h(key, L, -1)
    if ch == "Y":
        return _feed_h(key, -L, 1)
    raise ValueError(f"unknown letter {ch!r}")


def reduce_chars(L: int, chars: str, key: Key = (0, 0)) -> Key:
    # batch runs of H letters; stable letters are fed one at a time
    for ch, grp in groupby(chars):
        n = sum(1 for _ in grp)
        if ch == "a":
            key = _feed_h(key, n, 0)
        elif ch == "A":
            key = _feed_h(key, -n, 0)
        elif ch == "x":
            key = _feed_h(key, 0, n)
        elif ch == "X":
            key = _feed_h(key, 0, -n)
        elif ch == "y":
            key = _feed_h(key, n * L, -n)
        elif ch == "Y":
            key = _feed_h(key, -n * L, n)
        else:
            code = _CODE[ch]
            for _ in range(n):
                key = _feed_stable(L, key, code)
    return key


def _key_parts(key: Key) -> Iterator[tuple[int, int, int]]:
    """Yield (code, u, v) for each syllable."""
    for i in range(2, len(key), 3):
        yield key[i], key[i + 1], key[i + 2]


def _key_chars(key: Key) -> str:
    """A word (in normal form order) spelling the element."""
    out = [power_chars("a", key[0]) + power_chars("x", key[1])]
    for code, u, v in _key_parts(key):
        out.append(_LETTER[code])
        out.append(power_chars("a", u) + power_chars("x", v))
    return "".join(out)


def _key_invert(L: int, key: Key) -> Key:
    out = identity_key()
    out = _feed_h(out, -key[-2], -key[-1])
    for i in range(len(key) - 3, 1, -3):  # code positions, last syllable first
        out = _feed_stable(L, out, -key[i])
        out = _feed_h(out, -key[i - 2], -key[i - 1])
    return out


def _key_mul(L: int, left: Key, right: Key) -> Key:
    out = _feed_h(left, right[0], right[1])
    for code, u, v in _key_parts(right):
        out = _feed_stable(L, out, code)
        out = _feed_h(out, u, v)
    return out


@dataclass(frozen=True)
class GroupElement:
    """An element of G_L in Britton normal form."""

    params: GroupParams
    key: Key

    @classmethod
    def identity(cls, params: GroupParams) -> "GroupElement":
        return cls(params, identity_key())

    @classmethod
    def from_h(cls, params: GroupParams, h: HPoint) -> "GroupElement":
        return cls(params, (h.u, h.v))

    @property
    def head(self) -> HPoint:
        return HPoint(self.key[0], self.key[1])

    @property
    def syllables(self) -> tuple[tuple[str, HPoint], ...]:
        return tuple((_LETTER[c], HPoint(u, v)) for c, u, v in _key_parts(self.key))

    @property
    def tail(self) -> HPoint:
        return HPoint(self.key[-2], self.key[-1])

    def is_identity(self) -> bool:
        return self.key == (0, 0)

    def in_vertex_group(self) -> bool:
        return len(self.key) == 2

    def h_point(self) -> HPoint:
        if not self.in_vertex_group():
            raise ValueError(f"{self} is not in the vertex group")
        return self.head

    def word_chars(self) -> str:
        return _key_chars(self.key)

    def __str__(self) -> str:
        return format_word(self.word_chars())

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.params, _key_mul(self.params.L, self.key, other.key))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.params, _key_invert(self.params.L, self.key))

    def parity(self) -> int:
        """Image in Z/2 under a, s, t, x, y -> 1; equals d(1, .) mod 2."""
        p = self.key[0] + self.key[1]
        for _, u, v in _key_parts(self.key):
            p += 1 + u + v
        return p & 1


def reduce_word(params: GroupParams, letters, direction: str = "left") -> GroupElement:
    """Britton-reduce a word over {a, s, t, x, y}^(+-1) to its normal form.

    `letters` may be a token string ("s a^6 s^-1"), a character string in the
    internal encoding, or an iterable of such tokens.  `direction` selects the
    reduction order (left-to-right folding or right-to-left folding); both
    must agree, which the test suite checks on random words.
    """
    if isinstance(letters, str):
        chars = parse_word(letters) if (" " in letters or "^" in letters or letters == "1") else letters
    else:
        chars = parse_word(" ".join(letters))
    L = params.L
    if direction == "left":
        return GroupElement(params, reduce_chars(L, chars))
    if direction == "right":
        out = identity_key()
        for ch in reversed(chars):
            out = _key_mul(L, reduce_chars(L, ch), out)
        return GroupElement(params, out)
    raise ValueError(f"unknown direction {direction!r}")


def multiply(g1: GroupElement, g2: GroupElement) -> GroupElement:
    return g1 * g2


def invert(g: GroupElement) -> GroupElement:
    return g.inverse()


def is_identity(g: GroupElement) -> bool:
    return g.is_identity()


# ---------------------------------------------------------------------------
# breadth-first search oracles over the {a, s, t} Cayley graph


def _neighbors(L: int, key: Key) -> tuple[Key, ...]:
    return (
        _feed_h(key, 1, 0),
        _feed_h(key, -1, 0),
        _feed_stable(L, key, 1),
        _feed_stable(L, key, -1),
        _feed_stable(L, key, 2),
        _feed_stable(L, key, -2),
    )


@dataclass
class Ball:
    """Exact distances from 1 for every element within some radius."""

    params: GroupParams
    radius: int
    distances: dict[Key, int]

    def __len__(self) -> int:
        return len(self.distances)

    def distance(self, g: GroupElement) -> Optional[int]:
        return self.distances.get(g.key)

    def elements(self) -> Iterator[tuple[GroupElement, int]]:
        for key, d in self.distances.items():
            yield GroupElement(self.params, key), d

    def h_elements(self) -> Iterator[tuple[HPoint, int]]:
        for key, d in self.distances.items():
            if len(key) == 2:
                yield HPoint(key[0], key[1]), d

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.distances.values():
            sizes[d] += 1
        return sizes

    def dump_jsonl(self, fp: TextIO) -> None:
        """One JSON object {"normal_form": ..., "distance": ...} per line."""
        items = sorted(self.distances.items(), key=lambda kv: (kv[1], kv[0]))
        for key, d in items:
            rec = {"normal_form": format_word(_key_chars(key)), "distance": d}
            fp.write(json.dumps(rec, sort_keys=True) + "\n")


def bfs_ball(params: GroupParams, radius: int, max_states: int = DEFAULT_MAX_STATES) -> Ball:
    """All elements with |g| <= radius, by layered BFS with normal-form dedup.

    The memory budget caps the size of a single BFS layer (the quantity that
    drives the growth of the search); exceeding it raises BudgetExceeded with
    the frontier size reached.
    """
    L = params.L
    dist: dict[Key, int] = {identity_key(): 0}
    frontier: list[Key] = [identity_key()]
    for d in range(1, radius + 1):
        nxt: list[Key] = []
        for key in frontier:
            for nb in _neighbors(L, key):
                if nb not in dist:
                    dist[nb] = d
                    nxt.append(nb)
        if len(nxt) > max_states:
            raise BudgetExceeded(frontier=len(nxt), visited=len(dist))
        frontier = nxt
    return Ball(params, radius, dist)


def pair_dist(
    params: GroupParams,
    g1: GroupElement,
    g2: GroupElement,
    cap: int,
    max_states: int = DEFAULT_MAX_STATES,
) -> Optional[int]:
    """Exact d(g1, g2) if it is <= cap, else None (bidirectional search).

    Sound and complete up to the cap: having expanded radii rA and rB with
    no meeting vertex certifies d > rA + rB.
    """
    L = params.L
    start, goal = identity_key(), _key_mul(L, _key_invert(L, g1.key), g2.key)
    if start == goal:
        return 0
    side = ({start: 0}, {goal: 0})
    frontier = ([start], [goal])
    radii = [0, 0]
    best: Optional[int] = None
    while radii[0] + radii[1] < cap:
        if best is not None and best <= radii[0] + radii[1]:
            return best
        i = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = side[i], side[1 - i]
        radii[i] += 1
        d = radii[i]
        nxt: list[Key] = []
        for key in frontier[i]:
            for nb in _neighbors(L, key):
                if nb not in mine:
                    mine[nb] = d
                    nxt.append(nb)
                    od = other.get(nb)
                    if od is not None and (best is None or d + od < best):
                        best = d + od
        if len(nxt) > max_states:
            raise BudgetExceeded(frontier=len(nxt), visited=len(side[0]) + len(side[1]))
        frontier = (nxt, frontier[1]) if i == 0 else (frontier[0], nxt)
        if not nxt:
            break  # component exhausted (cannot happen in G_L, but be safe)
    if best is not None and best <= cap:
        return best
    return None
