"""The three-map system x/4, (x+1)/4, (x+u)/4 and exact counting on it.

Code words are strings over the alphabet {0, 1, u}; position n of a word
contributes 4**(-n) times its digit value (0, 1 or the translation
parameter u) to the projected point.  All counting here is exact: ball
membership and cylinder inclusion are decided by integer affine sign
tests, and tree pruning is conservative, so pruned counts agree with
full enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numeric import (
    EnumerationCapError,
    LacunarySequence,
    SymbolicPoint,
    affine_sign,
    affine_sign_scaled,
)

ALPHABET = "01u"
CONTRACTION = Fraction(1, 4)
DEFAULT_ENUMERATION_CAP = 15

# log 3 / log 4, the similarity dimension of three ratio-1/4 maps.
S_DIM = math.log(3) / math.log(4)


def validate_word(word: str) -> str:
    """Normalize a code word to lowercase and check its alphabet."""
    w = word.lower()
    for ch in w:
        if ch not in ALPHABET:
            raise ValueError(f"invalid code symbol {ch!r}; alphabet is 0, 1, u")
    return w


@dataclass(frozen=True)
class IFSSystem:
    """Three similitudes of ratio 1/4 with translations 0, 1 and u."""

    lam: LacunarySequence
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP

    @property
    def ratio(self) -> Fraction:
        return CONTRACTION


def similarity_dimension(ratios) -> float:
    """Solve sum_j r_j**s = 1 for s by bisection.

    The ratios must lie strictly inside (0, 1); the left side is then
    strictly decreasing in s, so the root is unique.  The bisection runs
    until the bracket collapses to adjacent floats, so the result is
    within one ulp of the true root (far below the 1e-12 contract).
    """
    rs = [float(Fraction(r)) for r in ratios]
    if not rs:
        raise ValueError("need at least one contraction ratio")
    for r in rs:
        if not 0.0 < r < 1.0:
            raise ValueError(f"ratio {r} out of (0,1)")

    def f(s: float) -> float:
        return math.fsum(r ** s for r in rs) - 1.0

    if f(0.0) <= 0.0:
        return 0.0
    hi = 1.0
    while f(hi) > 0.0:
        hi *= 2.0
    lo = 0.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return hi
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid


def apply_map(symbol: str, x: SymbolicPoint) -> SymbolicPoint:
    """Image of x under the map labeled by one alphabet symbol."""
    s = validate_word(symbol)
    if len(s) != 1:
        raise ValueError("apply_map takes a single symbol")
    if s == "0":
        return SymbolicPoint(x.p / 4, x.q / 4)
    if s == "1":
        return SymbolicPoint((x.p + 1) / 4, x.q / 4)
    # (x + u)/4 adds a fresh u/4 on top of the scaled q part.
    return SymbolicPoint(x.p / 4, (x.q + 1) / 4)


def project(word: str) -> SymbolicPoint:
    """Left endpoint of the cylinder of a word: sum_n digit_n * 4**(-n)."""
    w = validate_word(word)
    n = len(w)
    scale = 4 ** n
    P = 0
    Q = 0
    c = scale
    for ch in w:
        c //= 4
        if ch == "1":
            P += c
        elif ch == "u":
            Q += c
    return SymbolicPoint(Fraction(P, scale), Fraction(Q, scale))


@dataclass(frozen=True)
class CylinderInterval:
    """Image of [0, 1] under the composition along a word."""

    prefix: str
    left: SymbolicPoint
    length: Fraction

    @property
    def right(self) -> SymbolicPoint:
        return SymbolicPoint(self.left.p + self.length, self.left.q)


def cylinder(word: str) -> CylinderInterval:
    w = validate_word(word)
    return CylinderInterval(w, project(w), Fraction(1, 4 ** len(w)))


@dataclass(frozen=True)
class Ball:
    """Closed ball B(center, radius) on the line, radius >= 0."""

    center: SymbolicPoint
    radius: Fraction

    def __post_init__(self):
        r = Fraction(self.radius)
        object.__setattr__(self, "radius", r)
        if r < 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, x: SymbolicPoint, lam: LacunarySequence) -> bool:
        lo = affine_sign(x.p - (self.center.p - self.radius), x.q - self.center.q, lam)
        hi = affine_sign(x.p - (self.center.p + self.radius), x.q - self.center.q, lam)
        return lo >= 0 and hi <= 0


@dataclass(frozen=True)
class BallCount:
    count: int
    witnesses: Optional[tuple[str, ...]] = None


def count_in_ball(sys: IFSSystem, n: int, ball: Ball,
                  witnesses: bool = False) -> BallCount:
    """Exact number of length-n words whose projection lies in the ball.

    Depth-first search over the prefix tree.  A node at depth m carries
    the partial sums (P, Q) scaled by 4**n; every completion adds between
    0 and g = (4**(n-m) - 1)/3 to each coordinate, so the subtree value
    range is [v, v + g*(1 + u)] and a subtree is pruned exactly when that
    range provably misses the ball.  Leaf membership is decided exactly,
    hence the count matches unpruned enumeration.

    The running time is proportional to the number of surviving nodes,
    not 3**n, so moderate balls are fine well past the enumeration cap.
    Beware of centers that align with the attractor's finest structure
    (e.g. 0 itself): their exact counts can be genuinely exponential.
    """
    if n < 0:
        raise ValueError("depth must be >= 0")
    lam = sys.lam
    scale = 4 ** n
    c_lo = (ball.center.p - ball.radius) * scale
    c_hi = (ball.center.p + ball.radius) * scale
    c_q = ball.center.q * scale
    den = math.lcm(c_lo.denominator, c_hi.denominator, c_q.denominator)
    CL = int(c_lo * den)
    CH = int(c_hi * den)
    CQ = int(c_q * den)

    found: list[str] = []
    stack: list[str] = []
    count = 0

    def dfs(m: int, P: int, Q: int) -> None:
        nonlocal count
        A_lo = P * den - CL
        A_hi = P * den - CH
        B = Q * den - CQ
        if m == n:
            if affine_sign_scaled(A_lo, B, lam) >= 0 and affine_sign_scaled(A_hi, B, lam) <= 0:
                count += 1
                if witnesses:
                    found.append("".join(stack))
            return
        g = (4 ** (n - m) - 1) // 3
        # Subtree minimum above the ball, or maximum below it: prune.
        if affine_sign_scaled(A_hi, B, lam) > 0:
            return
        if affine_sign_scaled((P + g) * den - CL, (Q + g) * den - CQ, lam) < 0:
            return
        if not witnesses:
            # Entire subtree inside: count without descending.
            if (affine_sign_scaled(A_lo, B, lam) >= 0
                    and affine_sign_scaled((P + g) * den - CH, (Q + g) * den - CQ, lam) <= 0):
                count += 3 ** (n - m)
                return
        c = 4 ** (n - m - 1)
        for sym, dP, dQ in (("0", 0, 0), ("1", c, 0), ("u", 0, c)):
            if witnesses:
                stack.append(sym)
            dfs(m + 1, P + dP, Q + dQ)
            if witnesses:
                stack.pop()

    dfs(0, 0, 0)
    return BallCount(count, tuple(found) if witnesses else None)


def _level_codes(sys: IFSSystem, n: int) -> tuple[list[int], int]:
    """Encoded (P, Q) pairs for all 3**n words, one entry per word.

    Returns (codes, shift) where each code is (P << shift) | Q with P, Q
    the projection numerators scaled by 4**n.  Subject to the enumeration
    cap because the list has 3**n entries.
    """
    if n < 0:
        raise ValueError("depth must be >= 0")
    if n > sys.enumeration_cap:
        raise EnumerationCapError(
            f"level {n} exceeds enumeration cap {sys.enumeration_cap}")
    shift = 2 * n + 2
    codes = [0]
    for k in range(1, n + 1):
        c = 4 ** (n - k)
        encP = c << shift
        codes = [v + d for v in codes for d in (0, encP, c)]
    return codes, shift


def _decode(code: int, shift: int) -> tuple[int, int]:
    return code >> shift, code & ((1 << shift) - 1)


def distinct_level_points(sys: IFSSystem, n: int) -> int:
    """Number of distinct projections among all 3**n length-n words.

    Deduplication is by exact equality: the (P, Q) pair for irrational-mode
    sequences (rational independence of 1 and u), the exact rational value
    otherwise.  Irrational-mode counts are always exactly 3**n because the
    digit supports of p and q recover the word.
    """
    codes, shift = _level_codes(sys, n)
    lam = sys.lam
    if not lam.u_is_rational:
        return len(set(codes))
    u = lam.u_exact()
    mask = (1 << shift) - 1
    seen = {(code >> shift) * u.denominator + (code & mask) * u.numerator
            for code in codes}
    return len(seen)
