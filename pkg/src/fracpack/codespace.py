"""Combinatorics on code words: influence records, blocks, perturbations.

Positions inside words are 1-indexed throughout, matching the usual
convention for digit expansions.  Position j is "influenced" from
position i when, for the unique k >= 0 with lam_k < j - i <= lam_{k+1}
(lam_0 = 0), the word shows the pattern u at i and 0 at i + lam_1, ...,
i + lam_k.  The count S(word, j) of influencing positions controls how
many distinct same-length words project into a small ball around the
point of the word.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numeric import LacunarySequence
from .ifs import validate_word

_SYMBOLS = "01u"


def _derived_rng(seed, *parts) -> random.Random:
    """Deterministic generator for a master seed plus index parts.

    String seeding hashes with SHA-512 under the hood, which is stable
    across platforms and interpreter versions.
    """
    tag = str(seed) + "".join(f":{p}" for p in parts)
    return random.Random(tag)


def _draw_symbol(rng: random.Random) -> str:
    # Two-bit rejection sampling: exact uniform over three symbols.
    while True:
        v = rng.getrandbits(2)
        if v < 3:
            return _SYMBOLS[v]


class CodeSequence:
    """Lazily extended i.i.d.-uniform code word with reproducible prefixes.

    The same seed always yields the same symbol stream, and extending a
    sequence never changes previously materialized symbols.
    """

    def __init__(self, seed, length: int = 0):
        self.seed = seed
        self._rng = _derived_rng(seed)
        self._word: list[str] = []
        if length:
            self.extend_to(length)

    @property
    def word(self) -> str:
        return "".join(self._word)

    def extend_to(self, length: int) -> str:
        if length < 0:
            raise ValueError("length must be >= 0")
        while len(self._word) < length:
            self._word.append(_draw_symbol(self._rng))
        return self.word

    def prefix(self, length: int) -> str:
        self.extend_to(length)
        return self.word[:length]


def sample_sequence(seed, length: int) -> CodeSequence:
    """Fresh uniform code sequence of the given materialized length."""
    return CodeSequence(seed, length)


@dataclass(frozen=True)
class InfluenceRecord:
    """Influencing position i with its window index k."""

    i: int
    k: int

    def probes(self, lam: LacunarySequence) -> list[int]:
        """Positions whose symbols the pattern constrains: i, then i + lam_m."""
        return [self.i] + [self.i + lam.term(m) for m in range(1, self.k + 1)]

    def to_dict(self) -> dict:
        return {"i": self.i, "k": self.k}


def is_influenced(word: str, i: int, j: int,
                  lam: LacunarySequence) -> Optional[InfluenceRecord]:
    """Record for the pair (i, j), or None.

    Requires 1 <= i <= j <= len(word).  The window index k is unique
    because the intervals (lam_k, lam_{k+1}] tile the positive integers;
    i = j never matches (the distance 0 lies in no window).  For finite
    explicit sequences, distances beyond the last term have no window
    and yield None.
    """
    w = validate_word(word)
    if not (1 <= i <= j <= len(w)):
        raise ValueError(f"need 1 <= i <= j <= len(word), got i={i}, j={j}, len={len(w)}")
    d = j - i
    k = lam.window_index(d)
    if k is None:
        return None
    if w[i - 1] != "u":
        return None
    for m in range(1, k + 1):
        if w[i - 1 + lam.term(m)] != "0":
            return None
    return InfluenceRecord(i, k)


@dataclass(frozen=True)
class InfluenceSummary:
    count: int
    records: tuple[InfluenceRecord, ...]


def influence_count(word: str, j: int, lam: LacunarySequence) -> InfluenceSummary:
    """All influence records for position j, scanning i = 1..j."""
    w = validate_word(word)
    if not (1 <= j <= len(w)):
        raise ValueError(f"need 1 <= j <= len(word), got j={j}, len={len(w)}")
    records = []
    for i in range(1, j + 1):
        rec = is_influenced(w, i, j, lam)
        if rec is not None:
            records.append(rec)
    return InfluenceSummary(len(records), tuple(records))


@dataclass(frozen=True)
class BlockDecomposition:
    """Partition of the influence range of j into leader blocks.

    k is the scale index with lam_{k+1} <= j < lam_{k+2}.  The positions
    max(1, j - lam_{k+1}) .. j - 1 are split greedily into consecutive
    blocks of base size lam_k + 1 (lam_0 is taken as 1 for sizing); the
    remainder is absorbed into the final block, so block lengths stay in
    [lam_k + 1, 2*(lam_k + 1) - 1].  When the whole range is shorter than
    the base size (possible only for k = 0 at j = lam_1 <= 2) a single
    undersized block is emitted, and an empty range yields no blocks.
    """

    j: int
    k: int
    lo: int
    hi: int
    base: int
    N: int

    def block(self, t: int) -> range:
        """t-th block (0-indexed); the last one absorbs the remainder."""
        if not 0 <= t < self.N:
            raise IndexError(f"block index {t} out of range(0, {self.N})")
        start = self.lo + t * self.base
        stop = start + self.base if t < self.N - 1 else self.hi + 1
        return range(start, stop)

    @property
    def blocks(self) -> tuple[range, ...]:
        return tuple(self.block(t) for t in range(self.N))

    @property
    def leaders(self) -> tuple[int, ...]:
        return tuple(self.lo + t * self.base for t in range(self.N))

    @property
    def success_probability(self) -> Fraction:
        """Per-block pattern probability under uniform symbols: 3**-(k+1)."""
        return Fraction(1, 3 ** (self.k + 1))


def block_decomposition(j: int, lam: LacunarySequence) -> BlockDecomposition:
    lam1 = lam.term(1)
    if j < lam1:
        raise ValueError(f"j must be >= lam_1 = {lam1}, got {j}")
    k = len(lam.terms_below(j + 1)) - 1  # lam_{k+1} <= j
    if lam.term_or_none(k + 2) is None:
        raise ValueError(
            f"j = {j} reaches the final window of an explicit sequence; "
            f"no term lam_{k + 2} exists")
    lo = max(1, j - lam.term(k + 1))
    hi = j - 1
    if hi < lo:
        return BlockDecomposition(j, k, lo, hi, 1, 0)
    base = (lam.term(k) if k >= 1 else 1) + 1
    N = max(1, (hi - lo + 1) // base)
    return BlockDecomposition(j, k, lo, hi, base, N)


def block_success_count(word: str, dec: BlockDecomposition,
                        lam: LacunarySequence) -> int:
    """Number of block leaders showing the full (u, 0, ..., 0) pattern.

    Each leader probes itself plus k offsets that stay inside its own
    block, so distinct blocks probe disjoint symbol sets and the count is
    binomial with N = number of blocks and p = 3**-(k+1) under uniform
    words.  Every successful leader is an influencing position for j,
    hence the count never exceeds S(word, j).
    """
    w = validate_word(word)
    if len(w) < dec.j - 1:
        raise ValueError(f"word length {len(w)} < j - 1 = {dec.j - 1}")
    hits = 0
    for i in dec.leaders:
        if w[i - 1] != "u":
            continue
        if all(w[i - 1 + lam.term(m)] == "0" for m in range(1, dec.k + 1)):
            hits += 1
    return hits


def perturb(word: str, rec: InfluenceRecord, lam: LacunarySequence) -> str:
    """Word with the pattern of rec flipped: u -> 0 and the k zeros -> 1.

    The projection moves by exactly u * 4**(-i) - sum_{m<=k} 4**(-i-lam_m),
    which equals the tail sum_{m>k} 4**(-i-lam_m) and in particular is
    nonnegative and at most (4/3) * 4**(-i-lam_{k+1}).
    """
    w = list(validate_word(word))
    probes = rec.probes(lam)
    if probes[-1] > len(w) or rec.i < 1:
        raise ValueError(f"record {rec} out of range for word of length {len(w)}")
    if w[rec.i - 1] != "u":
        raise ValueError(f"record {rec} invalid: position {rec.i} is not u")
    for pos in probes[1:]:
        if w[pos - 1] != "0":
            raise ValueError(f"record {rec} invalid: position {pos} is not 0")
    w[rec.i - 1] = "0"
    for pos in probes[1:]:
        w[pos - 1] = "1"
    return "".join(w)


def perturbation_family(word: str, j: int, lam: LacunarySequence) -> list[str]:
    """The truncated word plus one perturbation per influence record.

    All members have length j and are pairwise distinct: each perturbed
    word differs from the base at its own record position i, and two
    records have distinct i (window uniqueness), so the member with the
    smaller i shows 0 where the other still shows u.
    """
    w = validate_word(word)
    summary = influence_count(w, j, lam)
    family = [w[:j]]
    for rec in summary.records:
        family.append(perturb(w, rec, lam)[:j])
    return family
