"""Distortion tables and limit computations for the cyclic subgroups of G_L.

|a^m| grows like m^(1/alpha) with alpha = log2 L, but not monotonically;
local minima occur near powers of L.  The witness sequence

    m_n = M L^n - M (L^(n-1) + ... + 1),   M = (L-2)/2

satisfies |a^(m_n)| = (2^(n+1) - 1) M + 2^(n+2) - 4 exactly, and its
distortion ratio converges to (L+2) / ((1/2)(L-2)^2/(L-1))^(log_L 2),
while |a^(L^n)| / (L^n)^(1/alpha) converges to 5.  The gap between the two
limits witnesses why the crude power-law bounds cannot feed the reverse
Hoelder inequality directly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .params import GroupParams
from .vertex_group import HPoint, dist_a_power, dist_h, dist_power, dist_table


@dataclass(frozen=True)
class DistortionRow:
    m: int
    dist: int
    ratio: float  # dist / m^(1/alpha), in [1, C), strict > 1 unless m = 1


def distortion_table(params: GroupParams, m_max: int) -> list[DistortionRow]:
    """Rows (m, |a^m|, ratio) for m = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    table = dist_table(params, m_max)
    log_l = math.log(params.L)
    return [
        DistortionRow(m, table[m], table[m] / 2.0 ** (math.log(m) / log_l))
        for m in range(1, m_max + 1)
    ]


def write_distortion_csv(rows: Iterable[DistortionRow], fp: TextIO) -> None:
    writer = csv.writer(fp)
    writer.writerow(["m", "dist", "ratio"])
    for row in rows:
        writer.writerow([row.m, row.dist, f"{row.ratio:.12g}"])


@dataclass(frozen=True)
class MnRow:
    n: int
    m: int
    dist: int
    predicted: int  # (2^(n+1) - 1) M + 2^(n+2) - 4
    ratio: float


def mn_sequence(params: GroupParams, n_max: int) -> list[MnRow]:
    """The slow witness sequence m_n with its exact closed-form lengths."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    L = params.L
    M = (L - 2) // 2
    rows = []
    geom = 0  # L^(n-1) + ... + 1
    for n in range(n_max + 1):
        m = M * L**n - M * geom
        predicted = (2 ** (n + 1) - 1) * M + 2 ** (n + 2) - 4
        dist = dist_a_power(params, m)
        rows.append(MnRow(n, m, dist, predicted, dist / params.root(m)))
        geom = geom * L + 1
    return rows


def eq42_limit(params: GroupParams) -> float:
    """lim |a^(m_n)| / m_n^(1/alpha) = (L+2) / ((1/2)(L-2)^2/(L-1))^(log_L 2)."""
    L = params.L
    return (L + 2) / (0.5 * (L - 2) ** 2 / (L - 1)) ** (math.log(2) / math.log(L))


@dataclass(frozen=True)
class GapReport:
    """Proxies for the liminf/limsup distortion constants and their gap.

    The proxies are the limits along the two witness subsequences only:
    limsup proxy from m_n, liminf proxy = lim |a^(L^n)|/2^n = 5 exactly.
    """

    L: int
    limsup_proxy: float
    liminf_proxy: float
    gap_ratio: float  # limsup_proxy / liminf_proxy, must exceed (L+6)/10
    gap_bound: float
    gap_ok: bool
    holder_product: float | None  # (liminf/limsup) 2^(1-1/alpha) for L >= 10
    holder_below_one: bool | None

    def as_dict(self) -> dict:
        return {
            "L": self.L,
            "limsup_proxy": self.limsup_proxy,
            "liminf_proxy": self.liminf_proxy,
            "gap_ratio": self.gap_ratio,
            "gap_bound": self.gap_bound,
            "gap_ok": self.gap_ok,
            "holder_product": self.holder_product,
            "holder_below_one": self.holder_below_one,
        }


def gap_checks(params: GroupParams) -> GapReport:
    """Check limsup/liminf > (L+6)/10, and for L >= 10 the Hoelder defect."""
    hi = eq42_limit(params)
    lo = 5.0
    bound = (params.L + 6) / 10.0
    holder = None
    below = None
    if params.L >= 10:
        holder = (lo / hi) * 2.0 ** (1.0 - 1.0 / params.alpha)
        below = holder < 1.0
    return GapReport(params.L, hi, lo, hi / lo, bound, hi / lo > bound, holder, below)


def reverse_holder_check(
    params: GroupParams, samples: Sequence[Sequence[float]], tol: float = 1e-12
) -> bool:
    """Both reverse Hoelder inequalities on each tuple of nonnegative reals:

    (1/n)^(1-1/a) * sum r_i^(1/a)  <=  (sum r_i)^(1/a)  <=  sum r_i^(1/a)
    """
    a = params.alpha
    for sample in samples:
        if any(r < 0 for r in sample):
            raise ValueError("reverse Hoelder needs nonnegative inputs")
        n = len(sample)
        if n == 0:
            continue
        roots = sum(r ** (1.0 / a) for r in sample)
        total = sum(sample) ** (1.0 / a)
        scale = max(1.0, roots)
        if not ((1.0 / n) ** (1.0 - 1.0 / a) * roots <= total + tol * scale):
            return False
        if not (total <= roots + tol * scale):
            return False
    return True


@dataclass(frozen=True)
class AgRatioScan:
    max_ratio: Fraction
    at: tuple[int, int]  # (ell, m) achieving it


def ag_ratio_scan(params: GroupParams, bound: int) -> AgRatioScan:
    """max over |ell|, |m| <= bound of (|a^ell| + |x^m|) / |a^ell x^m|.

    Finite by the splitting inequality for a-and-x products; ratios are 1
    whenever ell = 0 or m = 0.
    """
    if bound < 1:
        raise ValueError("scan bound must be >= 1")
    best = Fraction(1)
    arg = (0, 1)
    for ell in range(-bound, bound + 1):
        for m in range(-bound, bound + 1):
            if ell == 0 and m == 0:
                continue
            num = dist_a_power(params, ell) + dist_power(params, "x", m)
            den = dist_h(params, HPoint(ell, m))
            r = Fraction(num, den)
            if r > best:
                best, arg = r, (ell, m)
    return AgRatioScan(best, arg)
