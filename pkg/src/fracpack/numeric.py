"""Exact arithmetic for points of the form p + q*u.

Here u = sum_j 4**(-lam_j) for a sparse, strictly increasing exponent
sequence lam_1 < lam_2 < ... subject to the growth gate
lam_{k+1} >= 2*lam_k + 1.  For the built-in infinite families the series
is non-terminating and u has a non-periodic base-4 expansion, hence is
irrational; a point is then uniquely determined by the rational pair
(p, q).  Finite explicit sequences make u rational and comparisons fall
back to exact evaluation.

All interval endpoints are exact rationals.  Powers 4**(-lam) are never
materialized for exponents above a configurable cap (default 10**6);
enclosures are clamped instead, which only widens them and never breaks
soundness.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

DEFAULT_MATERIALIZE_CAP = 10**6

# Exponent of the builtin triple-exponential family: term(j) = 3 ** (3 ** j).
_PAPER_BASE = 3


class CapError(RuntimeError):
    """A configured resource cap was exceeded."""


class EnclosureCapError(CapError):
    """A comparison could not be decided within the materialization cap."""


class EnumerationCapError(CapError):
    """An enumeration request exceeded the configured depth cap."""


def _sgn(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b', decimal or integer text into an exact Fraction."""
    return Fraction(text.strip())


def rational_str(x: Fraction) -> str:
    """Compact exact encoding, inverse of parse_rational."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


class LacunarySequence:
    """Strictly increasing exponent sequence with lam_{k+1} >= 2*lam_k + 1.

    Kinds:
      paper      lam_j = 3**(3**j), an infinite doubly exponential family
      geometric  lam_j = start * b**(j-1) for b >= 3 (b = 2 violates the gate)
      explicit   a finite validated list; u is then rational

    Terms are 1-indexed arbitrary-size integers.  Term access is memoized
    and synchronized, so a shared instance is safe across threads.
    """

    def __init__(self, kind: str, *, b: int = 0, start: int = 0,
                 terms: tuple[int, ...] = (),
                 materialize_cap: int = DEFAULT_MATERIALIZE_CAP):
        self.kind = kind
        self.b = b
        self.start = start
        self.materialize_cap = materialize_cap
        self._terms: list[int] = list(terms)
        self._lock = threading.Lock()
        self._enclosures: dict[int, tuple["IntervalEnclosure", bool, bool]] = {}
        self._u_ratio: Optional[tuple[int, int]] = None
        self._coarse: Optional[tuple[int, int, int]] = None
        if kind == "explicit":
            self._validate_explicit()

    # -- construction -------------------------------------------------

    @classmethod
    def paper(cls, materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> "LacunarySequence":
        return cls("paper", materialize_cap=materialize_cap)

    @classmethod
    def geometric(cls, b: int, start: int,
                  materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> "LacunarySequence":
        if b < 2 or start < 1:
            raise ValueError(f"geometric sequence needs b >= 2 and start >= 1, got b={b}, start={start}")
        if start * (b - 2) < 1:
            # lam_{k+1} - (2*lam_k + 1) = start*b**(k-1)*(b-2) - 1 is increasing in k,
            # so the k = 1 step decides the whole gate.
            raise ValueError(f"geometric b={b}, start={start} violates lam2 >= 2*lam1 + 1")
        return cls("geometric", b=b, start=start, materialize_cap=materialize_cap)

    @classmethod
    def explicit(cls, terms, materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> "LacunarySequence":
        return cls("explicit", terms=tuple(int(t) for t in terms),
                   materialize_cap=materialize_cap)

    def _validate_explicit(self) -> None:
        terms = self._terms
        if not terms:
            raise ValueError("explicit sequence needs at least one term")
        if terms[0] < 1:
            raise ValueError("exponents must be >= 1")
        for a, b in zip(terms, terms[1:]):
            if b <= a:
                raise ValueError(f"terms must be strictly increasing, got {a} then {b}")
            if b < 2 * a + 1:
                raise ValueError(f"growth gate violated: {b} < 2*{a} + 1")
        if terms[-1] > self.materialize_cap:
            raise ValueError(
                f"explicit exponent {terms[-1]} exceeds the materialization cap "
                f"{self.materialize_cap}; exact rational u would be unrepresentable")

    # -- term access ---------------------------------------------------

    def term(self, k: int) -> int:
        """k-th exponent, 1-indexed."""
        t = self.term_or_none(k)
        if t is None:
            raise IndexError(f"sequence has no term {k}")
        return t

    def term_or_none(self, k: int) -> Optional[int]:
        if k < 1:
            raise IndexError("terms are 1-indexed")
        if self.kind == "explicit":
            return self._terms[k - 1] if k <= len(self._terms) else None
        with self._lock:
            while len(self._terms) < k:
                j = len(self._terms) + 1
                if self.kind == "paper":
                    self._terms.append(_PAPER_BASE ** (_PAPER_BASE ** j))
                else:
                    self._terms.append(self.start * self.b ** (j - 1))
        return self._terms[k - 1]

    @property
    def length(self) -> Optional[int]:
        """Number of terms for explicit kind, None for infinite kinds."""
        return len(self._terms) if self.kind == "explicit" else None

    def terms_below(self, bound: int) -> list[int]:
        """All terms strictly less than bound, in order."""
        out = []
        k = 1
        while True:
            t = self.term_or_none(k)
            if t is None or t >= bound:
                return out
            out.append(t)
            k += 1

    def window_index(self, d: int) -> Optional[int]:
        """The k >= 0 with lam_k < d <= lam_{k+1}, taking lam_0 = 0.

        Returns None when d < 1 or when the sequence is exhausted before
        a window containing d exists (finite explicit lists only).
        """
        if d < 1:
            return None
        k = len(self.terms_below(d))
        return k if self.term_or_none(k + 1) is not None else None

    # -- u as a number -------------------------------------------------

    @property
    def u_is_rational(self) -> bool:
        return self.kind == "explicit"

    def u_exact(self) -> Fraction:
        """Exact value of u; only defined for finite explicit sequences."""
        if not self.u_is_rational:
            raise ValueError("u is irrational for infinite sequence kinds")
        if self._u_ratio is None:
            top = self._terms[-1]
            num = sum(4 ** (top - t) for t in self._terms)
            self._u_ratio = (num, 4 ** top)
        return Fraction(*self._u_ratio)

    def coarse_u_scale(self) -> tuple[int, int, int]:
        """Integers (lo, hi, K) with lo/K < u < hi/K, cheap to multiply by.

        Derived from 4**(-lam1) < u < (4/3) * 4**(-lam1); the lower bound
        degrades to 0 when lam1 exceeds the materialization cap.
        """
        if self._coarse is None:
            lam1 = self.term(1)
            if lam1 <= self.materialize_cap:
                self._coarse = (3, 4, 3 * 4 ** lam1)
            else:
                self._coarse = (0, 4, 3 * 4 ** self.materialize_cap)
        return self._coarse

    def descriptor(self) -> str:
        if self.kind == "paper":
            return "paper"
        if self.kind == "geometric":
            return f"geometric:b={self.b},start={self.start}"
        return "explicit:" + ",".join(str(t) for t in self._terms)

    def __repr__(self) -> str:
        return f"LacunarySequence({self.descriptor()!r})"


def make_lacunary(descriptor: str,
                  materialize_cap: int = DEFAULT_MATERIALIZE_CAP) -> LacunarySequence:
    """Build a sequence from its text descriptor.

    Grammar: 'paper' | 'geometric:b=B,start=S' | 'explicit:t1,t2,...'.
    Raises ValueError on malformed input or a growth-gate violation.
    """
    text = descriptor.strip()
    if text == "paper":
        return LacunarySequence.paper(materialize_cap)
    if text.startswith("geometric:"):
        params = {}
        for part in text[len("geometric:"):].split(","):
            if "=" not in part:
                raise ValueError(f"bad geometric parameter {part!r}")
            key, _, val = part.partition("=")
            params[key.strip()] = int(val)
        if set(params) != {"b", "start"}:
            raise ValueError(f"geometric descriptor needs b= and start=, got {text!r}")
        return LacunarySequence.geometric(params["b"], params["start"], materialize_cap)
    if text.startswith("explicit:"):
        body = text[len("explicit:"):]
        try:
            terms = [int(t) for t in body.split(",") if t.strip()]
        except ValueError as exc:
            raise ValueError(f"bad explicit term in {body!r}") from exc
        return LacunarySequence.explicit(terms, materialize_cap)
    raise ValueError(f"unknown sequence descriptor {descriptor!r}")


@dataclass(frozen=True)
class IntervalEnclosure:
    """Closed rational interval [lo, hi] guaranteed to contain a target value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("enclosure endpoints out of order")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "IntervalEnclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def _u_enclosure_info(lam: LacunarySequence, J: int) -> tuple[IntervalEnclosure, bool, bool]:
    """(enclosure, exact, capped) for u truncated after J terms.

    exact means lo == hi == u.  capped means the cap limited the depth or
    the tail exponent, so no further refinement is possible.
    """
    if J < 0:
        raise ValueError("truncation depth must be >= 0")
    cached = lam._enclosures.get(J)
    if cached is not None:
        return cached
    cap = lam.materialize_cap
    lo = Fraction(0)
    depth = 0
    capped = False
    for j in range(1, J + 1):
        t = lam.term_or_none(j)
        if t is None:
            break
        if t > cap:
            capped = True
            break
        lo += Fraction(1, 4 ** t)
        depth = j
    nxt = lam.term_or_none(depth + 1)
    if nxt is None:
        result = (IntervalEnclosure(lo, lo), True, False)
    else:
        e = min(nxt, cap)
        capped = capped or (nxt > cap)
        hi = lo + Fraction(4, 3 * 4 ** e)
        result = (IntervalEnclosure(lo, hi), False, capped)
    lam._enclosures[J] = result
    return result


def u_enclosure(lam: LacunarySequence, J: int) -> IntervalEnclosure:
    """Rational enclosure of u from the first J terms.

    The true u satisfies lo <= u <= hi with lo = sum_{j<=J} 4**(-lam_j)
    and hi = lo + (4/3) * 4**(-lam_{J+1}); membership is strict on both
    sides for infinite kinds.  For explicit kinds with J >= length the
    enclosure degenerates to the exact point.  Tail exponents above the
    materialization cap are clamped, which only widens the interval.
    """
    return _u_enclosure_info(lam, J)[0]


@dataclass(frozen=True)
class SymbolicPoint:
    """Exact point p + q*u with p, q >= 0 expressible over a power-of-4 denominator."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
                v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            if not _is_pow2(v.denominator):
                raise ValueError(
                    f"{name} denominator {v.denominator} is not expressible over a power of 4")

    @classmethod
    def zero(cls) -> "SymbolicPoint":
        return cls(Fraction(0), Fraction(0))


def affine_sign_scaled(A: int, B: int, lam: LacunarySequence) -> int:
    """Exact sign of A + B*u for integers A, B.

    Rational u is evaluated directly.  Otherwise a cheap cached bound
    pair decides almost every query with two big-integer products; the
    residual cases refine exact enclosures, using the fact that u lies
    strictly between every truncation and its tail bound.  Raises
    EnclosureCapError if the sign is still ambiguous at the cap (only
    possible for inputs within 4**(-cap) of u itself).
    """
    if B == 0:
        return _sgn(A)
    if lam.u_is_rational:
        u = lam.u_exact()
        return _sgn(A * u.denominator + B * u.numerator)
    lo_n, hi_n, K = lam.coarse_u_scale()
    s_lo = _sgn(A * K + B * lo_n)
    s_hi = _sgn(A * K + B * hi_n)
    if s_lo == s_hi and s_lo != 0:
        return s_lo
    if s_lo == 0:
        return _sgn(B)   # u strictly exceeds the lower coarse bound
    if s_hi == 0:
        return -_sgn(B)  # u is strictly below the upper coarse bound
    J = 1
    while True:
        enc, exact, capped = _u_enclosure_info(lam, J)
        at_lo = A + B * enc.lo
        at_hi = A + B * enc.hi
        if at_lo == 0:
            return _sgn(B)   # -A/B is exactly the truncation; the tail decides
        if at_hi == 0:
            return -_sgn(B)  # the tail bound is strict
        if (at_lo > 0) == (at_hi > 0):
            return _sgn(at_lo)
        if exact or capped:
            raise EnclosureCapError(
                "sign undecidable within the materialization cap")
        J += 1


def affine_sign(a: Fraction, b: Fraction, lam: LacunarySequence) -> int:
    """Exact sign of a + b*u for rationals a, b."""
    a = Fraction(a)
    b = Fraction(b)
    d = math.lcm(a.denominator, b.denominator)
    return affine_sign_scaled(int(a * d), int(b * d), lam)


def sym_compare(a: SymbolicPoint, b: SymbolicPoint, lam: LacunarySequence) -> int:
    """Three-way comparison of two points: -1, 0 or +1.

    For irrational-mode sequences equality holds exactly when the (p, q)
    pairs coincide, since 1 and u are rationally independent; otherwise
    the sign of the difference is resolved by enclosure refinement.  For
    explicit sequences the comparison is an exact rational evaluation.
    """
    if lam.u_is_rational:
        u = lam.u_exact()
        return _sgn((a.p + a.q * u) - (b.p + b.q * u))
    if a.p == b.p and a.q == b.q:
        return 0
    return affine_sign(a.p - b.p, a.q - b.q, lam)


def sym_eval(x: SymbolicPoint, lam: LacunarySequence, width: Fraction) -> IntervalEnclosure:
    """Rational enclosure of the value of x with width at most the request.

    The truncation depth J grows until q * (4/3) * 4**(-lam_{J+1}) fits
    inside the width budget; exact values yield degenerate intervals.
    Raises EnclosureCapError if the budget is unreachable under the cap.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if x.q == 0:
        return IntervalEnclosure(x.p, x.p)
    if lam.u_is_rational:
        v = x.p + x.q * lam.u_exact()
        return IntervalEnclosure(v, v)
    J = 1
    while True:
        enc, exact, capped = _u_enclosure_info(lam, J)
        out = IntervalEnclosure(x.p + x.q * enc.lo, x.p + x.q * enc.hi)
        if out.width <= width:
            return out
        if exact or capped:
            raise EnclosureCapError(
                f"requested width {width} unreachable under materialization cap")
        J += 1
