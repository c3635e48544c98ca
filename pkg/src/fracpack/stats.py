"""Tail bounds and seeded simulation for the block success counts.

Binomial arithmetic is exact rational up to N = 10**4; beyond that a
log-domain floating evaluation is used (documented relative tolerance
1e-9, far tighter in practice).  Scale-table entries combine an exact
per-scale block count with the Hoeffding bound
exp(-2 * (N*p - M)**2 / N), flagged whenever N*p <= M since the bound
then says nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numeric import LacunarySequence, rational_str
from .codespace import (
    _derived_rng,
    block_decomposition,
    block_success_count,
    influence_count,
    sample_sequence,
)

EXACT_BINOMIAL_LIMIT = 10**4
LOG_DOMAIN_REL_TOL = 1e-9


def binom_pmf(N: int, p: Fraction) -> list[Fraction]:
    """Exact Binomial(N, p) probabilities for m = 0..N."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if N < 0:
        raise ValueError("N must be >= 0")
    a, b = p.numerator, p.denominator
    den = b ** N
    return [Fraction(math.comb(N, m) * a ** m * (b - a) ** (N - m), den)
            for m in range(N + 1)]


def binom_tail(N: int, p: Fraction, M: int):
    """P[Binomial(N, p) <= M], exact Fraction for N <= 10**4 else float.

    The floating branch sums term logs via lgamma; its relative error is
    bounded by LOG_DOMAIN_REL_TOL on the supported range.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if N < 0 or M < 0:
        raise ValueError("N and M must be >= 0")
    M = min(M, N)
    if N <= EXACT_BINOMIAL_LIMIT:
        if M >= N:
            return Fraction(1)
        a, b = p.numerator, p.denominator
        if a == b:
            return Fraction(0)
        # Incremental term recursion: only M + 1 terms, not the full pmf.
        term = Fraction((b - a) ** N, b ** N)
        total = term
        for m in range(M):
            term *= Fraction((N - m) * a, (m + 1) * (b - a))
            total += term
        return total
    if p == 0:
        return 1.0
    if p == 1:
        return 1.0 if M >= N else 0.0
    lp = math.log(p.numerator) - math.log(p.denominator)
    lq = math.log(p.denominator - p.numerator) - math.log(p.denominator)
    logs = [math.lgamma(N + 1) - math.lgamma(m + 1) - math.lgamma(N - m + 1)
            + m * lp + (N - m) * lq
            for m in range(M + 1)]
    top = max(logs)
    return math.exp(top) * math.fsum(math.exp(v - top) for v in logs)


def hoeffding_bound(N: int, p: Fraction, M: int) -> float:
    """exp(-2 * (N*p - M)**2 / N); returns 1.0 when N*p <= M (vacuous)."""
    p = Fraction(p)
    if N < 1:
        raise ValueError("N must be >= 1")
    gap = N * p - M
    if gap <= 0:
        return 1.0
    return math.exp(-2.0 * float(gap * gap) / N)


@dataclass(frozen=True)
class TailReport:
    """Exact binomial tail next to its Hoeffding bound for one (N, p, M)."""

    N: int
    p: Fraction
    M: int
    exact_tail: object
    hoeffding: float
    flagged: bool

    def to_dict(self) -> dict:
        exact = self.exact_tail
        return {
            "N": self.N,
            "p": rational_str(self.p),
            "M": self.M,
            "exact_tail": rational_str(exact) if isinstance(exact, Fraction) else exact,
            "exact_tail_float": float(exact),
            "hoeffding": self.hoeffding,
            "flagged": self.flagged,
        }


def tail_report(N: int, p: Fraction, M: int) -> TailReport:
    p = Fraction(p)
    return TailReport(
        N=N, p=p, M=M,
        exact_tail=binom_tail(N, p, M),
        hoeffding=hoeffding_bound(N, p, M),
        flagged=(N * p <= M),
    )


def _safe_exp(logv: float) -> float:
    if logv > 700.0:
        return math.inf
    if logv < -745.0:
        return 0.0
    return math.exp(logv)


@dataclass(frozen=True)
class ScaleRow:
    """One scale of the summability table.

    The row covers all j with j_lo <= j < j_hi (j_lo = lam_{k+1}); N is
    the minimum block count over that range, attained at j = j_lo, and
    the contribution bounds the sum over the range of the per-j tail
    bound by count * hoeffding.  Flagged rows carry no usable bound.
    """

    k: int
    j_lo: int
    j_hi: int
    count: int
    N: int
    p: Fraction
    M: int
    flagged: bool
    hoeffding: float
    contribution: float
    log10_contribution: Optional[float]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "j_lo": self.j_lo,
            "j_hi": self.j_hi,
            "count": self.count,
            "N": self.N,
            "p": rational_str(self.p),
            "M": self.M,
            "flagged": self.flagged,
            "hoeffding": self.hoeffding,
            "contribution": self.contribution,
            "log10_contribution": self.log10_contribution,
        }


@dataclass(frozen=True)
class ScaleTable:
    lam_descriptor: str
    M: int
    rows: tuple[ScaleRow, ...]

    @property
    def cumulative(self) -> list[float]:
        out = []
        total = 0.0
        for row in self.rows:
            total += row.contribution
            out.append(total)
        return out

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lambda": self.lam_descriptor,
            "M": self.M,
            "rows": [r.to_dict() for r in self.rows],
            "cumulative": self.cumulative,
        }


def borel_cantelli_table(lam: LacunarySequence, M: int, k_max: int) -> ScaleTable:
    """Per-scale tail-bound contributions for k = 0..k_max.

    Row k covers j in [lam_{k+1}, lam_{k+2}); the block count N is taken
    at the representative j = lam_{k+1}, where it is minimal over the
    range (the clamped range length min(lam_{k+1}, j-1) and hence the
    block count are nondecreasing in j).  Requires N >= 1 at every scale
    and, for explicit sequences, k_max + 2 available terms.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if M < 0:
        raise ValueError("M must be >= 0")
    rows = []
    for k in range(k_max + 1):
        if lam.term_or_none(k + 2) is None:
            raise ValueError(
                f"k_max = {k_max} needs term {k_max + 2}; sequence ends earlier")
        j_lo = lam.term(k + 1)
        j_hi = lam.term(k + 2)
        dec = block_decomposition(j_lo, lam)
        if dec.N < 1:
            raise ValueError(f"no blocks at scale k = {k} (j = {j_lo})")
        N = dec.N
        p = Fraction(1, 3 ** (k + 1))
        count = j_hi - j_lo
        gap = N * p - M
        flagged = gap <= 0
        if flagged:
            h = 1.0
            contribution = math.inf if count.bit_length() > 1000 else float(count)
            log10c = None
        else:
            log_h = -2.0 * float(gap * gap) / N
            h = _safe_exp(log_h)
            logc = math.log(count) + log_h
            contribution = _safe_exp(logc)
            log10c = logc / math.log(10.0)
        rows.append(ScaleRow(k=k, j_lo=j_lo, j_hi=j_hi, count=count, N=N, p=p,
                             M=M, flagged=flagged, hoeffding=h,
                             contribution=contribution, log10_contribution=log10c))
    return ScaleTable(lam.descriptor(), M, tuple(rows))


def empirical_quantile(sorted_xs: list, frac: float):
    """Nearest-rank quantile on a pre-sorted sample."""
    if not sorted_xs:
        raise ValueError("empty sample")
    idx = max(0, math.ceil(frac * len(sorted_xs)) - 1)
    return sorted_xs[min(idx, len(sorted_xs) - 1)]


@dataclass(frozen=True)
class CheckpointStats:
    j: int
    min: int
    p10: int
    p25: int
    p50: int
    p75: int
    p90: int
    max: int
    mean: float

    def to_dict(self) -> dict:
        return {"j": self.j, "min": self.min, "p10": self.p10, "p25": self.p25,
                "p50": self.p50, "p75": self.p75, "p90": self.p90,
                "max": self.max, "mean": self.mean}


@dataclass(frozen=True)
class GrowthReport:
    lam_descriptor: str
    seed: int
    trials: int
    checkpoints: tuple[int, ...]
    stats: tuple[CheckpointStats, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lambda": self.lam_descriptor,
            "seed": self.seed,
            "trials": self.trials,
            "checkpoints": list(self.checkpoints),
            "stats": [s.to_dict() for s in self.stats],
        }

    def csv_rows(self) -> list[list]:
        header = ["j", "min", "p10", "p25", "p50", "p75", "p90", "max", "mean"]
        rows = [header]
        for s in self.stats:
            rows.append([s.j, s.min, s.p10, s.p25, s.p50, s.p75, s.p90, s.max, s.mean])
        return rows


def monte_carlo_growth(lam: LacunarySequence, checkpoints, trials: int,
                       seed: int) -> GrowthReport:
    """Sampled distribution of the influence count S at several positions.

    Each trial draws one uniform word of length max(checkpoints) from a
    deterministically derived per-trial generator, so reports are
    reproducible and embarrassingly parallel in principle.
    """
    cps = tuple(int(j) for j in checkpoints)
    if not cps or any(j < 1 for j in cps):
        raise ValueError("checkpoints must be a nonempty list of positions >= 1")
    if trials < 0:
        raise ValueError("trials must be >= 0")
    if trials == 0:
        return GrowthReport(lam.descriptor(), seed, 0, cps, ())
    top = max(cps)
    samples: dict[int, list[int]] = {j: [] for j in cps}
    for t in range(trials):
        word = sample_sequence(f"{seed}:{t}", top).word
        for j in cps:
            samples[j].append(influence_count(word, j, lam).count)
    stats = []
    for j in cps:
        xs = sorted(samples[j])
        stats.append(CheckpointStats(
            j=j, min=xs[0],
            p10=empirical_quantile(xs, 0.10),
            p25=empirical_quantile(xs, 0.25),
            p50=empirical_quantile(xs, 0.50),
            p75=empirical_quantile(xs, 0.75),
            p90=empirical_quantile(xs, 0.90),
            max=xs[-1],
            mean=sum(xs) / len(xs),
        ))
    return GrowthReport(lam.descriptor(), seed, trials, cps, tuple(stats))


@dataclass(frozen=True)
class XLawReport:
    """Empirical block-success histogram against its exact binomial law."""

    lam_descriptor: str
    j: int
    k: int
    N: int
    p: Fraction
    trials: int
    seed: int
    histogram: dict[int, int]
    tv_distance: float

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "lambda": self.lam_descriptor,
            "j": self.j,
            "k": self.k,
            "N": self.N,
            "p": rational_str(self.p),
            "trials": self.trials,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "tv_distance": self.tv_distance,
        }

    def csv_rows(self) -> list[list]:
        rows: list[list] = [["value", "count"]]
        for value, count in sorted(self.histogram.items()):
            rows.append([value, count])
        return rows


def empirical_X_law(lam: LacunarySequence, j: int, trials: int,
                    seed: int) -> XLawReport:
    """Total-variation distance of sampled block successes from Binomial(N, p)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dec = block_decomposition(j, lam)
    if dec.N < 1:
        raise ValueError(f"no blocks at j = {j}")
    p = dec.success_probability
    hist: dict[int, int] = {}
    for t in range(trials):
        word = sample_sequence(f"{seed}:{t}", j).word
        x = block_success_count(word, dec, lam)
        hist[x] = hist.get(x, 0) + 1
    pmf = binom_pmf(dec.N, p)
    tv = Fraction(0)
    for m in range(dec.N + 1):
        emp = Fraction(hist.get(m, 0), trials)
        tv += abs(emp - pmf[m])
    for m, c in hist.items():
        if m > dec.N:
            tv += Fraction(c, trials)
    return XLawReport(lam.descriptor(), j, dec.k, dec.N, p, trials, seed,
                      hist, float(tv / 2))
