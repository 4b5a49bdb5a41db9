"""Knockout tournaments with a per-round shrinking error schedule.

Round i of a tournament over r entrants plays floor(r/2) positional
matches at tolerance delta^(2(2i-1)); an odd last entrant gets a bye and
is appended after the winners.  After ceil(log2 r) rounds one survivor
remains.  The OR variant decides each match by checking only the first
element of the pair (keeping it on a 1, else keeping the second) and
finishes with one more check of the survivor at the full tolerance; the
MAX variant decides each match with a noisy comparison and returns the
survivor directly.

Round tolerances underflow any float for deep brackets and small delta,
so the schedule is carried in log space and vote thresholds are computed
from logs directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ContractViolation
from .oracles import NoisyOracle
from .primitives import check_bit, check_bit_log, noisy_compare_log, vote_threshold_log

__all__ = ["Bracket", "RoundSchedule", "tournament_max", "tournament_or"]

# Observer signature: (round_index, log_tolerance, vote_threshold, first, second)
MatchHook = Callable[[int, float, int, int, int], None]


@dataclass(frozen=True)
class RoundSchedule:
    """The per-round error budget delta^(2(2i-1)), held in log space."""

    delta: float
    rounds: int

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 0.5:
            raise ContractViolation(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.rounds < 0:
            raise ContractViolation(f"rounds must be >= 0, got {self.rounds}")

    @classmethod
    def for_size(cls, r: int, delta: float) -> "RoundSchedule":
        if r < 1:
            raise ContractViolation(f"tournament size must be >= 1, got {r}")
        return cls(delta=delta, rounds=math.ceil(math.log2(r)))

    def log_round_error(self, i: int) -> float:
        """log of the round-i tolerance; exact where the tolerance itself underflows."""
        if not 1 <= i <= max(self.rounds, 1):
            raise ContractViolation(f"round index {i} outside 1..{self.rounds}")
        return 2 * (2 * i - 1) * math.log(self.delta)

    def round_error(self, i: int) -> float:
        """The round-i tolerance as a float; 0.0 signals underflow, use the log form."""
        return math.exp(self.log_round_error(i))


@dataclass
class Bracket:
    """Survivors of a knockout in entry order, by original index."""

    survivors: list[int]
    round_index: int = 0

    @property
    def size(self) -> int:
        return len(self.survivors)


def _play_rounds(
    oracle: NoisyOracle,
    entrants: Sequence[int],
    delta: float,
    p: float,
    winner_of: Callable[[int, int, float], int],
    match_hook: MatchHook | None,
) -> int:
    """Run the bracket to a single survivor; ``winner_of(a, b, log_tol)`` decides a match."""
    schedule = RoundSchedule.for_size(len(entrants), delta)
    bracket = Bracket(survivors=list(entrants))
    for i in range(1, schedule.rounds + 1):
        log_tol = schedule.log_round_error(i)
        prev = bracket.survivors
        r = len(prev)
        nxt = []
        for j in range(r // 2):
            first, second = prev[2 * j], prev[2 * j + 1]
            if match_hook is not None:
                match_hook(i, log_tol, vote_threshold_log(p, log_tol), first, second)
            nxt.append(winner_of(first, second, log_tol))
        if r % 2 == 1:
            nxt.append(prev[-1])
        bracket = Bracket(survivors=nxt, round_index=i)
    return bracket.survivors[0]


def tournament_or(
    oracle: NoisyOracle,
    indices: Sequence[int],
    delta: float,
    p: float,
    *,
    match_hook: MatchHook | None = None,
) -> int:
    """Estimate the OR of the bits at ``indices``; error probability at most delta.

    Matches check only the first element of each pair: a 1 keeps it, a 0
    advances the second.  The last survivor is checked once more at the
    full tolerance and that decision is returned.
    """
    if not indices:
        raise ContractViolation("tournament_or requires at least one index")
    if not 0.0 < delta < 0.5:
        raise ContractViolation(f"delta must lie in (0, 1/2), got {delta}")

    def winner_of(first: int, second: int, log_tol: float) -> int:
        return first if check_bit_log(oracle, first, log_tol, p).decision == 1 else second

    last = _play_rounds(oracle, indices, delta, p, winner_of, match_hook)
    return check_bit(oracle, last, delta, p).decision


def tournament_max(
    oracle: NoisyOracle,
    indices: Sequence[int],
    delta: float,
    p: float,
    *,
    match_hook: MatchHook | None = None,
) -> int:
    """Return the index of the (estimated) maximum among ``indices``.

    Each match compares the pair once through the stopping primitive: a
    "less-than" verdict advances the second element, anything else the
    first.  A single entrant is returned immediately with no queries.
    """
    if not indices:
        raise ContractViolation("tournament_max requires at least one index")
    if not 0.0 < delta < 0.5:
        raise ContractViolation(f"delta must lie in (0, 1/2), got {delta}")

    def winner_of(first: int, second: int, log_tol: float) -> int:
        return second if noisy_compare_log(oracle, first, second, log_tol, p).decision else first

    return _play_rounds(oracle, indices, delta, p, winner_of, match_hook)
