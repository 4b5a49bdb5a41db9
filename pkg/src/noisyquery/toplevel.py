"""The two-phase optimal algorithms for noisy OR and noisy MAX.

Both spend almost their whole budget on cheap per-element primitives at
the full tolerance delta and reserve the expensive knockout tournament
for a sublinear shortlist: the OR algorithm tournaments only the bits
whose individual checks returned 1, the MAX algorithm only a random
subsample plus the elements that beat the subsample's champion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ContractViolation
from .oracles import NoisyOracle
from .primitives import check_bit, noisy_compare
from .tournaments import tournament_max, tournament_or

__all__ = [
    "MaxRunReport",
    "OrRunReport",
    "OrThreshold",
    "noisy_max",
    "noisy_max_report",
    "noisy_or",
    "noisy_or_report",
    "or_threshold",
    "sampling_probability",
]


@dataclass(frozen=True)
class OrThreshold:
    """Survivor-count cutoff max(log n, n delta log(1/delta)) for declaring OR = 1.

    ``dominant`` records which argument achieved the max: the count term
    ``n delta log(1/delta)`` dominates exactly in the delta >= 1/n regime,
    the ``log n`` term below it.
    """

    n: int
    delta: float
    value: float
    dominant: str  # "n_delta_log" | "log_n"


def or_threshold(n: int, delta: float) -> OrThreshold:
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if not 0.0 < delta < 0.5:
        raise ContractViolation(f"delta must lie in (0, 1/2), got {delta}")
    log_term = math.log(n)
    count_term = n * delta * math.log(1.0 / delta)
    if count_term >= log_term:
        return OrThreshold(n=n, delta=delta, value=count_term, dominant="n_delta_log")
    return OrThreshold(n=n, delta=delta, value=log_term, dominant="log_n")


def sampling_probability(n: int) -> float:
    """Per-index subsampling probability 1/log n, clamped to 1 for n <= 2."""
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if n <= 2:  # log n <= 1 there
        return 1.0
    return min(1.0, 1.0 / math.log(n))


@dataclass(frozen=True)
class OrRunReport:
    """Outcome and per-phase accounting of one OR run."""

    output: int
    phase1_queries: int       # the n individual bit checks
    subroutine_queries: int   # the shortlist tournament, if it ran
    survivors: tuple[int, ...]
    threshold: OrThreshold

    @property
    def total_queries(self) -> int:
        return self.phase1_queries + self.subroutine_queries


@dataclass(frozen=True)
class MaxRunReport:
    """Outcome and per-phase accounting of one MAX run."""

    output: int
    phase1_queries: int       # the comparisons against the sample champion
    subroutine_queries: int   # both tournaments
    sample: tuple[int, ...]
    champion: int             # winner of the sample tournament
    shortlist: tuple[int, ...]

    @property
    def total_queries(self) -> int:
        return self.phase1_queries + self.subroutine_queries


def noisy_or_report(oracle: NoisyOracle, n: int, delta: float, p: float) -> OrRunReport:
    """Run the two-phase OR algorithm and report the phase breakdown.

    Phase 1 checks every bit at tolerance delta, collecting the indices
    that answered 1.  No survivor means 0; at least
    max(log n, n delta log(1/delta)) survivors means 1 outright (that
    many simultaneous false positives is overwhelmingly unlikely);
    anything between goes to a tournament at tolerance delta.  Worst-case
    error is at most 2 delta.
    """
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if oracle.instance.n < n:
        raise ContractViolation(f"oracle instance has {oracle.instance.n} bits, need {n}")
    ledger = oracle.ledger
    start = ledger.total
    survivors = [i for i in range(1, n + 1) if check_bit(oracle, i, delta, p).decision == 1]
    phase1 = ledger.total - start
    threshold = or_threshold(n, delta)
    if not survivors:
        return OrRunReport(0, phase1, 0, (), threshold)
    if len(survivors) >= threshold.value:
        return OrRunReport(1, phase1, 0, tuple(survivors), threshold)
    output = tournament_or(oracle, survivors, delta, p)
    sub = ledger.total - start - phase1
    return OrRunReport(output, phase1, sub, tuple(survivors), threshold)


def noisy_or(oracle: NoisyOracle, n: int, delta: float, p: float) -> int:
    """Estimate the OR of n bits; worst-case error at most 2 delta."""
    return noisy_or_report(oracle, n, delta, p).output


def noisy_max_report(oracle: NoisyOracle, n: int, delta: float, p: float) -> MaxRunReport:
    """Run the two-phase MAX algorithm and report the phase breakdown.

    A subsample drawn with per-index probability 1/log n is tournamented
    to a champion; every unsampled element is compared against the
    champion once at tolerance delta, and the apparent beaters plus the
    champion go to a second tournament whose winner is returned.
    Worst-case error is at most 3 delta.

    An empty subsample (possible, with vanishing probability) is redrawn
    until nonempty, which leaves the conditional law of the sample
    unchanged.
    """
    if n < 1:
        raise ContractViolation(f"n must be >= 1, got {n}")
    if oracle.instance.n < n:
        raise ContractViolation(f"oracle instance has {oracle.instance.n} values, need {n}")
    q = sampling_probability(n)
    rng = oracle.algorithm_rng
    if q >= 1.0:
        sample = list(range(1, n + 1))
    else:
        while True:
            mask = rng.random(n) < q
            if mask.any():
                break
        sample = [i + 1 for i in range(n) if mask[i]]
    ledger = oracle.ledger
    start = ledger.total

    champion = tournament_max(oracle, sample, delta, p)
    sub = ledger.total - start

    in_sample = set(sample)
    shortlist = [champion]
    before_compares = ledger.total
    for u in range(1, n + 1):
        if u in in_sample:
            continue
        if noisy_compare(oracle, champion, u, delta, p).decision:
            shortlist.append(u)
    phase1 = ledger.total - before_compares

    before_final = ledger.total
    output = tournament_max(oracle, shortlist, delta, p)
    sub += ledger.total - before_final
    return MaxRunReport(
        output=output,
        phase1_queries=phase1,
        subroutine_queries=sub,
        sample=tuple(sample),
        champion=champion,
        shortlist=tuple(shortlist),
    )


def noisy_max(oracle: NoisyOracle, n: int, delta: float, p: float) -> int:
    """Estimate the argmax of n values; worst-case error at most 3 delta."""
    return noisy_max_report(oracle, n, delta, p).output
