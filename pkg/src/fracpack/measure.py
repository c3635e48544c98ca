"""Certified measure, density and packing estimates for the attractor.

The natural measure assigns mass 3**(-n) to each level-n cylinder, so
for an interval J the number of level-n cylinders inside J (resp.
meeting J) times 3**(-n) is a certified lower (resp. upper) bound for
its mass.  Density ratios use the exact identity 4**(n*s) = 3**n for
s = log 3 / log 4: a count M inside radius C * 4**(-n) certifies the
ratio M / (2*(C+1))**s against the enclosing ball of radius
(C+1) * 4**(-n), with no rounding in the exponent bookkeeping.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numeric import (
    EnclosureCapError,
    EnumerationCapError,
    LacunarySequence,
    SymbolicPoint,
    _u_enclosure_info,
    affine_sign_scaled,
    rational_str,
    sym_compare,
)
from .ifs import (
    Ball,
    IFSSystem,
    S_DIM,
    _decode,
    _level_codes,
    count_in_ball,
    project,
    validate_word,
)


@dataclass(frozen=True)
class SymbolicInterval:
    """Closed interval [lo, hi] with exact symbolic endpoints."""

    lo: SymbolicPoint
    hi: SymbolicPoint

    def validate(self, lam: LacunarySequence) -> "SymbolicInterval":
        if sym_compare(self.lo, self.hi, lam) > 0:
            raise ValueError("interval endpoints out of order")
        return self


@dataclass(frozen=True)
class MeasureBounds:
    """Certified cylinder-counting mass bounds for one interval and level."""

    n: int
    contained: int
    intersecting: int
    lower: Fraction
    upper: Fraction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "contained": self.contained,
            "intersecting": self.intersecting,
            "lower": rational_str(self.lower),
            "upper": rational_str(self.upper),
        }


def measure_bounds(sys: IFSSystem, J: SymbolicInterval, n: int) -> MeasureBounds:
    """Count level-n cylinders inside and meeting the closed interval J.

    Exact recursion on the prefix tree: a node's cylinder either misses J
    (prune), sits inside J (all 3**(n-m) descendants counted both ways),
    or straddles a boundary and is split further.  Lower bounds are
    nondecreasing in n because each contained cylinder splits into three
    contained children.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    if n > sys.enumeration_cap:
        raise EnumerationCapError(
            f"level {n} exceeds enumeration cap {sys.enumeration_cap}")
    lam = sys.lam
    J.validate(lam)
    scale = 4 ** n
    a_p = J.lo.p * scale
    a_q = J.lo.q * scale
    b_p = J.hi.p * scale
    b_q = J.hi.q * scale
    den = math.lcm(a_p.denominator, a_q.denominator,
                   b_p.denominator, b_q.denominator)
    AP, AQ = int(a_p * den), int(a_q * den)
    BP, BQ = int(b_p * den), int(b_q * den)

    contained = 0
    intersecting = 0

    def walk(m: int, P: int, Q: int) -> None:
        nonlocal contained, intersecting
        width = 4 ** (n - m) * den
        left_p = P * den
        right_p = left_p + width
        # Cylinder [left, left + 4**(-m)] against [a, b], all exact.
        if (affine_sign_scaled(left_p - BP, Q * den - BQ, lam) > 0
                or affine_sign_scaled(right_p - AP, Q * den - AQ, lam) < 0):
            return
        if (affine_sign_scaled(left_p - AP, Q * den - AQ, lam) >= 0
                and affine_sign_scaled(right_p - BP, Q * den - BQ, lam) <= 0):
            full = 3 ** (n - m)
            contained += full
            intersecting += full
            return
        if m == n:
            intersecting += 1
            return
        c = 4 ** (n - m - 1)
        walk(m + 1, P, Q)
        walk(m + 1, P + c, Q)
        walk(m + 1, P, Q + c)

    walk(0, 0, 0)
    return MeasureBounds(
        n=n,
        contained=contained,
        intersecting=intersecting,
        lower=Fraction(contained, 3 ** n),
        upper=Fraction(intersecting, 3 ** n),
    )


@dataclass(frozen=True)
class DensityEntry:
    """One certified density bound: M points within C * 4**(-n) of x.

    The bound ratio_bound = M / (2*(C+1))**s certifies
    mass(B(x, r)) / (2*r)**s >= ratio_bound at r = (C+1) * 4**(-n):
    the M cylinders sit inside B(x, r) and carry mass M * 3**(-n),
    while (2*r)**s = (2*(C+1))**s * 3**(-n) exactly.
    """

    n: int
    C: Fraction
    count: int

    @property
    def radius(self) -> Fraction:
        return (self.C + 1) * Fraction(1, 4 ** self.n)

    @property
    def ratio_bound(self) -> float:
        return self.count / (2.0 * float(self.C + 1)) ** S_DIM

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "radius": rational_str(self.radius),
            "count": self.count,
            "ratio_bound": self.ratio_bound,
        }


def density_ratio(sys: IFSSystem, x: SymbolicPoint, n: int,
                  C: Fraction = Fraction(3)) -> DensityEntry:
    """Certified density entry at level n around x.

    Counts length-n words projecting into the closed ball of radius
    C * 4**(-n) around x.  Requires C >= 1 so that, when x truncates a
    longer word at depth at least n + 1, the word's own prefix is always
    counted and the ratio is at least (2*(C+1))**(-s).
    """
    C = Fraction(C)
    if C < 1:
        raise ValueError("C must be >= 1")
    ball = Ball(x, C * Fraction(1, 4 ** n))
    M = count_in_ball(sys, n, ball).count
    return DensityEntry(n=n, C=C, count=M)


@dataclass(frozen=True)
class DensityProfile:
    lam_descriptor: str
    word: str
    C: Fraction
    entries: tuple[DensityEntry, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lambda": self.lam_descriptor,
            "word": self.word,
            "C": rational_str(self.C),
            "entries": [e.to_dict() for e in self.entries],
        }

    def csv_rows(self) -> list[list]:
        rows = [["n", "radius", "M", "ratio_bound"]]
        for e in self.entries:
            rows.append([e.n, float(e.radius), e.count, e.ratio_bound])
        return rows


def recommended_word_length(lam: LacunarySequence, n_max: int) -> int:
    """Word length that keeps all patterns relevant up to n_max intact.

    Twice the largest exponent step at or below n_max is added as guard;
    with no step that small the minimum n_max + 1 (needed so truncation
    error stays below 4**(-n_max)) is returned.
    """
    terms = lam.terms_below(n_max + 1)
    if not terms:
        return n_max + 1
    gaps = [terms[0]] + [b - a for a, b in zip(terms, terms[1:])]
    nxt = lam.term_or_none(len(terms) + 1)
    if nxt is not None and nxt <= 2 * n_max:
        gaps.append(nxt - terms[-1])
    return n_max + 2 * max(gaps)


def density_profile(sys: IFSSystem, word: str, n_max: int,
                    C: Fraction = Fraction(3)) -> DensityProfile:
    """Density entries at levels 1..n_max around the projection of word.

    The word must be longer than n_max: the center is the exact
    projection of the whole word, and one extra digit already bounds the
    truncation gap at level n by (2/3) * 4**(-n-1), absorbed by the +1 in
    the profile radius.  recommended_word_length gives a comfortable
    margin that also preserves influence patterns.
    """
    w = validate_word(word)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if len(w) < n_max + 1:
        raise ValueError(
            f"word length {len(w)} too short for n_max = {n_max}; "
            f"need at least {n_max + 1}")
    x = project(w)
    entries = tuple(density_ratio(sys, x, n, C) for n in range(1, n_max + 1))
    return DensityProfile(sys.lam.descriptor(), w, Fraction(C), entries)


@dataclass(frozen=True)
class PackingEstimate:
    """Greedy delta-separated center count and the value count * delta**s."""

    n: int
    delta: Fraction
    accepted: int

    @property
    def value(self) -> float:
        return self.accepted * float(self.delta) ** S_DIM

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "delta": rational_str(self.delta),
            "accepted": self.accepted,
            "value": self.value,
        }


def packing_premeasure_estimate(sys: IFSSystem, n: int,
                                delta: Fraction) -> PackingEstimate:
    """Greedy packing count among distinct level-n points.

    Sweeps the points in increasing order and accepts a point whenever
    its distance to the last accepted point exceeds delta (for a sorted
    sweep that distance is minimal over all accepted points).  The
    accepted centers support disjoint closed balls of radius delta/2, so
    accepted * delta**s estimates the packing pre-measure sum at gauge
    delta.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    lam = sys.lam
    codes, shift = _level_codes(sys, n)
    pairs = {_decode(c, shift) for c in codes}
    scale = 4 ** n
    if lam.u_is_rational:
        u = lam.u_exact()
        # Scaled exact values dedupe coinciding projections.
        vals = sorted({P * u.denominator + Q * u.numerator for P, Q in pairs})
        threshold = delta * scale * u.denominator
        accepted = 0
        last: Optional[int] = None
        for v in vals:
            if last is None or v - last > threshold:
                accepted += 1
                last = v
        return PackingEstimate(n=n, delta=delta, accepted=accepted)
    # Lexicographic (P, Q) order agrees with the value order as long as
    # every q-part perturbation stays below one grid unit.
    if n + 1 <= lam.term(1):
        ordered = sorted(pairs)
    else:
        ordered = sorted(pairs, key=functools.cmp_to_key(
            lambda a, b: affine_sign_scaled(a[0] - b[0], a[1] - b[1], lam)))
    d_scaled = delta * scale
    dnum, dden = d_scaled.numerator, d_scaled.denominator
    accepted = 0
    prev: Optional[tuple[int, int]] = None
    for P, Q in ordered:
        # Distance (P - prevP + (Q - prevQ)*u) / 4**n > delta, exactly.
        if prev is None or affine_sign_scaled((P - prev[0]) * dden - dnum,
                                              (Q - prev[1]) * dden, lam) > 0:
            accepted += 1
            prev = (P, Q)
    return PackingEstimate(n=n, delta=delta, accepted=accepted)


@dataclass(frozen=True)
class BoxCountRow:
    n: int
    cells: int

    @property
    def dim_estimate(self) -> float:
        return math.log(self.cells) / (self.n * math.log(4.0))

    def to_dict(self) -> dict:
        return {"n": self.n, "cells": self.cells, "dim_estimate": self.dim_estimate}


@dataclass(frozen=True)
class BoxCountProfile:
    lam_descriptor: str
    rows: tuple[BoxCountRow, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lambda": self.lam_descriptor,
            "rows": [r.to_dict() for r in self.rows],
        }

    def csv_rows(self) -> list[list]:
        rows = [["n", "cells", "dim_estimate"]]
        for r in self.rows:
            rows.append([r.n, r.cells, r.dim_estimate])
        return rows


def _floor_scaled(P: int, Q: int, lam: LacunarySequence) -> int:
    """Exact floor of P + Q*u for integers P >= 0, Q >= 1."""
    if Q < 1 or P < 0:
        raise ValueError("expected nonnegative P and positive Q")
    if lam.u_is_rational:
        u = lam.u_exact()
        return P + (Q * u.numerator) // u.denominator
    # Jump to a truncation depth whose tail is already below 1/Q, then
    # refine until both enclosure ends share a floor; Q*u is irrational,
    # so the loop terminates (or hits the materialization cap and raises).
    bits_needed = Q.bit_length() + 2
    J = 1
    while True:
        nxt = lam.term_or_none(J + 1)
        if nxt is None or 2 * nxt >= bits_needed:
            break
        J += 1
    while True:
        enc, exact, capped = _u_enclosure_info(lam, J)
        t_lo = (Q * enc.lo.numerator) // enc.lo.denominator
        t_hi = (Q * enc.hi.numerator) // enc.hi.denominator
        if t_lo == t_hi:
            return P + t_lo
        if exact or capped:
            raise EnclosureCapError("floor undecidable within materialization cap")
        J += 1


def box_counting_profile(sys: IFSSystem, n_max: int) -> BoxCountProfile:
    """Occupied half-open grid cells [m * 4**(-n), (m+1) * 4**(-n)) per level.

    A level-n point with scaled coordinates (P, Q) lies in cell
    floor(P + Q*u), computed exactly: grid-aligned values (Q = 0, or
    rational u landing on an integer) sit in the cell they start.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > sys.enumeration_cap:
        # Fail before grinding through the feasible lower levels.
        raise EnumerationCapError(
            f"level {n_max} exceeds enumeration cap {sys.enumeration_cap}")
    lam = sys.lam
    rows = []
    lo_n, hi_n, K = lam.coarse_u_scale() if not lam.u_is_rational else (0, 0, 0)
    for n in range(1, n_max + 1):
        codes, shift = _level_codes(sys, n)
        pairs = {_decode(c, shift) for c in codes}
        q_top = max(Q for _, Q in pairs)
        if not lam.u_is_rational and q_top * hi_n < K:
            # Every q perturbation stays below one cell: floor is P.
            cells = len({P for P, _ in pairs})
        else:
            cells = len({P if Q == 0 else _floor_scaled(P, Q, lam)
                         for P, Q in pairs})
        rows.append(BoxCountRow(n=n, cells=cells))
    return BoxCountProfile(lam.descriptor(), tuple(rows))
