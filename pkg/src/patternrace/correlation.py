"""Suffix/prefix overlap indicators and correlation polynomials.

The correlation of a seen word A against an awaited word B collects one
term per overlap length k where the last k letters of A equal the first
k letters of B; the term at exponent -k has coefficient equal to the
reciprocal probability of that k-letter prefix of B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import LaurentPoly
from .model import Alphabet, Pattern, RaceProblem, require_valid


def overlap_indicator(a: Pattern, b: Pattern, k: int) -> int:
    """1 iff the last k letters of a equal the first k letters of b."""
    if not 1 <= k <= min(len(a), len(b)):
        raise ValueError(f"overlap length {k} out of range 1..{min(len(a), len(b))}")
    return 1 if a.suffix(k) == b.prefix(k) else 0


def correlation(a: Optional[Pattern], b: Pattern, alphabet: Alphabet) -> LaurentPoly:
    """Correlation polynomial of a against b; zero when a is empty."""
    if a is None:
        return LaurentPoly.zero()
    a.check_alphabet(alphabet)
    b.check_alphabet(alphabet)
    terms = {}
    prefix_prob = Fraction(1)
    for k in range(1, min(len(a), len(b)) + 1):
        prefix_prob *= alphabet.probs[b.letters[k - 1]]
        if a.suffix(k) == b.prefix(k):
            terms[-k] = 1 / prefix_prob
    return LaurentPoly(terms)


@dataclass(frozen=True)
class CorrMatrix:
    """Grid where entry (i, j) is the correlation of B_j against B_i."""

    m: int
    entries: tuple

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.entries[i][j]

    def at(self, alpha) -> list:
        """Evaluate every entry at a fixed alpha; plain rational grid."""
        return [[e(alpha) for e in row] for row in self.entries]


def correlation_matrix(problem: RaceProblem) -> CorrMatrix:
    require_valid(problem)
    pats = problem.patterns
    entries = tuple(
        tuple(correlation(bj, bi, problem.alphabet) for bj in pats)
        for bi in pats
    )
    return CorrMatrix(len(pats), entries)


def initial_correlation_vector(problem: RaceProblem) -> tuple:
    """Per-pattern correlation of the initial pattern; all zero when absent."""
    require_valid(problem)
    return tuple(
        correlation(problem.initial, b, problem.alphabet)
        for b in problem.patterns
    )
