"""Words over the generators of G_L.

Internally a word is a plain string with one character per edge:
lowercase for a generator, uppercase for its inverse:

    a A s S t T x X y Y

The public serialization is token form, e.g. "s a^3 s^-1 t a^-1 t^-1".
a, s, t edges have length 1; x, y edges have length L.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .hnn_group import GroupElement
    from .params import GroupParams

GENERATORS = "astxy"
_VALID = set("aAsStTxXyY")


def invert_chars(chars: str) -> str:
    """Inverse word: reverse and swap every letter with its inverse."""
    return chars.swapcase()[::-1]


def char_for(gen: str, sign: int) -> str:
    if gen not in GENERATORS or sign not in (1, -1):
        raise ValueError(f"bad letter {gen!r}^{sign}")
    return gen if sign == 1 else gen.upper()


def power_chars(gen: str, exponent: int) -> str:
    """gen^exponent as a character run."""
    if exponent == 0:
        return ""
    return char_for(gen, 1 if exponent > 0 else -1) * abs(exponent)


def parse_word(text: str) -> str:
    """Parse token form ("s a^3 s^-1") into the character encoding."""
    out: list[str] = []
    for token in text.split():
        if token == "1":
            continue
        gen, _, exp = token.partition("^")
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator in token {token!r}")
        k = 1
        if exp:
            try:
                k = int(exp)
            except ValueError:
                raise ValueError(f"bad exponent in token {token!r}") from None
        out.append(power_chars(gen, k))
    return "".join(out)


def format_word(chars: str) -> str:
    """Token form with runs collapsed: 'saS' -> 's a s^-1'."""
    if not chars:
        return "1"
    tokens = []
    for ch, grp in groupby(chars):
        n = len(list(grp))
        gen = ch.lower()
        exp = n if ch.islower() else -n
        tokens.append(gen if exp == 1 else f"{gen}^{exp}")
    return " ".join(tokens)


@dataclass(frozen=True)
class PathWord:
    """An edge path in the Cayley graph, starting (by convention) at 1."""

    params: "GroupParams"
    chars: str

    def __post_init__(self) -> None:
        bad = set(self.chars) - _VALID
        if bad:
            raise ValueError(f"invalid letters {sorted(bad)!r}")

    @classmethod
    def from_str(cls, params: "GroupParams", text: str) -> "PathWord":
        return cls(params, parse_word(text))

    def __str__(self) -> str:
        return format_word(self.chars)

    def __len__(self) -> int:
        return len(self.chars)

    def __add__(self, other: "PathWord") -> "PathWord":
        if other.params.L != self.params.L:
            raise ValueError("cannot concatenate paths over different groups")
        return PathWord(self.params, self.chars + other.chars)

    @property
    def length(self) -> int:
        """Weighted length: a/s/t edges count 1, x/y edges count L."""
        heavy = sum(self.chars.count(c) for c in "xXyY")
        return len(self.chars) + (self.params.L - 1) * heavy

    def reverse(self) -> "PathWord":
        return PathWord(self.params, invert_chars(self.chars))

    def endpoint(self) -> "GroupElement":
        from .hnn_group import reduce_word

        return reduce_word(self.params, self.chars)

    def is_closed(self) -> bool:
        return self.endpoint().is_identity()

    def vertex_keys(self) -> list[tuple]:
        """Normal-form keys of all vertices visited, in order (length+1 entries)."""
        from .hnn_group import feed_char, identity_key

        keys = [identity_key()]
        k = identity_key()
        for ch in self.chars:
            k = feed_char(self.params.L, k, ch)
            keys.append(k)
        return keys
