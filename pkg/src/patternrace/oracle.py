"""Independent ground-truth engines.

A deterministic prefix automaton drives an exact dynamic program for
waiting-time distributions and an absorbing-chain linear solve for win
probabilities and expectations.  A seeded Monte Carlo simulator and a
direct simulation of the casino-net-gain martingale provide statistical
cross-checks.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .correlation import correlation
from .model import Alphabet, Pattern, RaceProblem, pattern_prob, require_valid
from .solver import SeriesTable

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_MAX_STEPS = 10 ** 6

# A DistributionTable has exactly the shape of the solver's SeriesTable.
DistributionTable = SeriesTable


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class PrefixAutomaton:
    """Deterministic automaton over proper pattern prefixes.

    Transition codes: a value >= 0 indexes the next live state; a value
    -(k+1) means pattern k just completed (absorbing).  The start code
    is the state reached after feeding the whole initial pattern.
    """

    problem: RaceProblem
    states: tuple            # tuple of letter tuples, states[0] == ()
    transitions: tuple       # transitions[state][letter] -> code
    start: int

    @property
    def num_states(self) -> int:
        return len(self.states)

    def state_index(self, letters: tuple) -> int:
        return self.states.index(letters)


def build_automaton(problem: RaceProblem) -> PrefixAutomaton:
    require_valid(problem)
    pats = [p.letters for p in problem.patterns]
    states = sorted({p[:i] for p in pats for i in range(len(p))},
                    key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(states)}
    nletters = problem.alphabet.size

    def step(state: tuple, letter: int) -> int:
        cand = state + (letter,)
        hits = [k for k, p in enumerate(pats)
                if len(cand) >= len(p) and cand[len(cand) - len(p):] == p]
        if len(hits) > 1:
            raise OracleError(
                f"two patterns complete on one letter: {hits}; "
                "the no-mutual-subpattern rule is broken")
        if hits:
            return -(hits[0] + 1)
        for drop in range(len(cand) + 1):
            if cand[drop:] in index:
                return index[cand[drop:]]
        raise AssertionError("empty state must always match")

    transitions = tuple(
        tuple(step(s, a) for a in range(nletters)) for s in states
    )

    start = index[()]
    if problem.initial is not None:
        letters = problem.initial.letters
        for pos, letter in enumerate(letters):
            start = transitions[start][letter]
            if start < 0 and pos < len(letters) - 1:
                raise OracleError(
                    "a pattern completed while feeding the initial word "
                    "before its last letter; validation should forbid this")
            if start < 0:
                break
    return PrefixAutomaton(problem=problem, states=tuple(states),
                           transitions=transitions, start=start)


def exact_distribution(problem: RaceProblem, n: int) -> DistributionTable:
    """Exact rational DP over the automaton up to horizon n."""
    if n < 0:
        raise ValueError("horizon must be >= 0")
    auto = build_automaton(problem)
    m = problem.num_patterns
    probs = problem.alphabet.probs
    per = [[_ZERO] * (n + 1) for _ in range(m)]
    absorbed = _ZERO
    if auto.start < 0:
        per[-auto.start - 1][0] = _ONE
        absorbed = _ONE
        live: Dict[int, Fraction] = {}
    else:
        live = {auto.start: _ONE}
    for t in range(1, n + 1):
        nxt: Dict[int, Fraction] = {}
        for s, mass in live.items():
            row = auto.transitions[s]
            for a, pa in enumerate(probs):
                code = row[a]
                chunk = mass * pa
                if code < 0:
                    per[-code - 1][t] += chunk
                    absorbed += chunk
                else:
                    nxt[code] = nxt.get(code, _ZERO) + chunk
        live = nxt
        if sum(live.values(), _ZERO) + absorbed != 1:
            raise OracleError("mass conservation violated in DP")
    per_t = tuple(tuple(col) for col in per)
    totals = tuple(sum(col[i] for col in per_t) for i in range(n + 1))
    tail = 1 - sum(totals)
    return DistributionTable(horizon=n, per_pattern=per_t,
                             totals=totals, tail_mass=tail)


def _solve_fractions(matrix: List[List[Fraction]],
                     rhs: List[List[Fraction]]) -> List[List[Fraction]]:
    """Solve matrix @ X = rhs exactly; rhs holds one column per solve."""
    n = len(matrix)
    a = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    w = len(a[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise OracleError("singular absorbing-chain system")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [c * inv for c in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                for c in range(col, w):
                    a[r][c] -= f * a[col][c]
    return [row[n:] for row in a]


def absorbing_solve(problem: RaceProblem) -> Tuple[tuple, Fraction]:
    """First-step analysis: exact win probabilities and expected steps."""
    auto = build_automaton(problem)
    m = problem.num_patterns
    if auto.start < 0:
        wins = tuple(_ONE if k == -auto.start - 1 else _ZERO for k in range(m))
        return wins, _ZERO
    probs = problem.alphabet.probs

    reach = [auto.start]
    seen = {auto.start}
    for s in reach:
        for code in auto.transitions[s]:
            if code >= 0 and code not in seen:
                seen.add(code)
                reach.append(code)
    idx = {s: i for i, s in enumerate(reach)}
    t = len(reach)

    matrix = [[_ZERO] * t for _ in range(t)]
    rhs = [[_ZERO] * (m + 1) for _ in range(t)]
    for i, s in enumerate(reach):
        matrix[i][i] += 1
        rhs[i][m] = _ONE  # expected-steps column
        for a, pa in enumerate(probs):
            code = auto.transitions[s][a]
            if code < 0:
                rhs[i][-code - 1] += pa
            else:
                matrix[i][idx[code]] -= pa
    sol = _solve_fractions(matrix, rhs)
    row = sol[idx[auto.start]]
    return tuple(row[:m]), row[m]


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class MonteCarloReport:
    reps: int
    seed: int
    max_steps: int
    win_counts: tuple
    win_freqs: tuple          # Fractions count/reps
    truncated: int
    completed: int
    mean_tau: Optional[Fraction]
    histogram: dict           # tau -> count, completed runs only


def _replicate_rng(seed: int, i: int) -> random.Random:
    # String seeds hash through sha512: stable across runs and platforms,
    # and each replicate gets its own stream regardless of run order.
    return random.Random(f"{seed}:{i}")


def monte_carlo(problem: RaceProblem, reps: int, seed: int = 0,
                max_steps: int = DEFAULT_MAX_STEPS) -> MonteCarloReport:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    auto = build_automaton(problem)
    m = problem.num_patterns
    cum = []
    acc = 0.0
    for p in problem.alphabet.probs:
        acc += float(p)
        cum.append(acc)
    cum[-1] = 1.0
    trans = auto.transitions

    wins = [0] * m
    hist: Counter = Counter()
    truncated = 0
    tau_sum = 0
    for i in range(reps):
        if auto.start < 0:
            wins[-auto.start - 1] += 1
            hist[0] += 1
            continue
        rng = _replicate_rng(seed, i)
        code = auto.start
        tau = 0
        while tau < max_steps:
            u = rng.random()
            a = 0
            while u >= cum[a]:
                a += 1
            tau += 1
            code = trans[code][a]
            if code < 0:
                break
        if code < 0:
            wins[-code - 1] += 1
            hist[tau] += 1
            tau_sum += tau
        else:
            truncated += 1
    completed = reps - truncated
    mean_tau = Fraction(tau_sum, completed) if completed else None
    return MonteCarloReport(
        reps=reps, seed=seed, max_steps=max_steps,
        win_counts=tuple(wins),
        win_freqs=tuple(Fraction(w, reps) for w in wins),
        truncated=truncated, completed=completed,
        mean_tau=mean_tau, histogram=dict(sorted(hist.items())),
    )


# ---------------------------------------------------------------------------
# martingale simulation

class MartingaleBoundViolation(RuntimeError):
    def __init__(self, rep: int, step: int, value: Fraction, bound: Fraction):
        super().__init__(
            f"net gain {value} exceeds bound {bound} at replicate {rep}, step {step}")
        self.rep = rep
        self.step = step


@dataclass(frozen=True)
class MartingaleReport:
    alpha: Fraction
    reps: int
    seed: int
    y0: Fraction              # exact initial martingale value
    empirical_mean: float
    std_error: float
    z_score: float
    bound: Fraction           # pathwise |net gain| bound
    violations: tuple         # (replicate, step) pairs
    truncated: int


def martingale_check(b: Pattern, a: Optional[Pattern], alphabet: Alphabet,
                     alpha: Fraction, reps: int, seed: int = 0,
                     max_steps: int = DEFAULT_MAX_STEPS) -> MartingaleReport:
    """Simulate the casino's net gain to the stopping time.

    Checks the optional-stopping identity (initial value equals the mean
    stopped value, up to Monte Carlo error) and the pathwise bound on the
    absolute net gain along every sampled path.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    problem = RaceProblem(alphabet=alphabet, patterns=(b,), initial=a)
    auto = build_automaton(problem)

    one_minus = 1 - alpha
    bound = 1 / (one_minus * pattern_prob(b, alphabet))
    l = len(a) if a is not None else 0
    ab = correlation(a, b, alphabet)(alpha) if a is not None else _ZERO
    bb = correlation(b, b, alphabet)(alpha)
    y0 = (1 - alpha ** l) / one_minus - alpha ** l * ab

    # Live-gambler weight per state: the correlation of the state word
    # against b prices every gambler still in the game.
    weights = []
    for s in auto.states:
        if s:
            weights.append(correlation(Pattern(s), b, alphabet)(alpha))
        else:
            weights.append(_ZERO)

    cum = []
    acc = 0.0
    for p in alphabet.probs:
        acc += float(p)
        cum.append(acc)
    cum[-1] = 1.0
    trans = auto.transitions

    violations = []
    truncated = 0
    total = 0.0
    total_sq = 0.0
    n_obs = 0

    def record(y: Fraction):
        nonlocal total, total_sq, n_obs
        fy = float(y)
        total += fy
        total_sq += fy * fy
        n_obs += 1

    if abs(y0) > bound:
        violations.append((-1, 0))
    for i in range(reps):
        if auto.start < 0:
            y = (1 - alpha ** l) / one_minus - alpha ** l * bb
            if abs(y) > bound:
                violations.append((i, 0))
            record(y)
            continue
        rng = _replicate_rng(seed, i)
        code = auto.start
        ap = alpha ** l
        step = 0
        y = None
        while step < max_steps:
            u = rng.random()
            letter = 0
            while u >= cum[letter]:
                letter += 1
            step += 1
            ap *= alpha
            code = trans[code][letter]
            w = bb if code < 0 else weights[code]
            x = (1 - ap) / one_minus - ap * w
            if abs(x) > bound:
                violations.append((i, step))
            if code < 0:
                y = x
                break
        if y is None:
            truncated += 1
        else:
            record(y)

    if n_obs:
        mean = total / n_obs
        var = max(total_sq / n_obs - mean * mean, 0.0)
        se = math.sqrt(var / n_obs)
    else:
        mean, se = float("nan"), float("nan")
    diff = mean - float(y0)
    if se > 0:
        z = diff / se
    else:
        z = 0.0 if abs(diff) < 1e-12 else float("inf")
    return MartingaleReport(
        alpha=alpha, reps=reps, seed=seed, y0=y0,
        empirical_mean=mean, std_error=se, z_score=z,
        bound=bound, violations=tuple(violations), truncated=truncated,
    )
