"""Decision mechanisms: round robin, normalized leximin, and maximum Nash welfare.

The two optimization mechanisms search the outcome tree depth first in
lexicographic order with upper-bound pruning, so ties resolve to the
lexicographically smallest choice vector exactly as in the pure-enumeration
oracles; pruning uses exact rational bounds and never changes the result
(property-tested against ``oracles.exact_optimum``).

Pruning soundness rests on two facts. Each player's utility in a subtree is
at most her current partial utility plus the sum of her per-issue maxima over
the undecided issues. And if v <= w pointwise then sorted(v) is
lexicographically at most sorted(w), so an optimistic bound vector that loses
to the incumbent rules out the whole subtree; a bound that merely ties is
also prunable because any outcome in the subtree comes later in
lexicographic order and would lose the tie-break.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .model import (
    DecisionInstance,
    MechanismResult,
    Outcome,
    Pick,
    issue_maxima,
    utility_vector,
)
from .oracles import DEFAULT_ENUM_CAP, leximin_normalization, outcome_space_size
from .errors import CapExceeded


def _check_order(n: int, order: Sequence[int] | None) -> tuple[int, ...]:
    if order is None:
        return tuple(range(n))
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}, got {order!r}")
    return order


def round_robin(
    instance: DecisionInstance, order: Sequence[int] | None = None
) -> MechanismResult:
    """Let players take turns deciding whole issues.

    Players move in the given order, cyclically, until every issue is decided.
    On her turn a player picks an undecided issue where her best alternative
    is worth the most (ties: lowest issue index) and fixes that alternative
    (ties: lowest alternative index).
    """
    order = _check_order(instance.n, order)
    maxima = [issue_maxima(instance, i) for i in range(instance.n)]
    choices: list[int | None] = [None] * instance.m
    undecided = list(range(instance.m))
    picks = []
    for turn in range(instance.m):
        player = order[turn % instance.n]
        issue = max(undecided, key=lambda t: (maxima[player][t][0], -t))
        alternative = maxima[player][issue][1]
        choices[issue] = alternative
        undecided.remove(issue)
        picks.append(Pick(player=player, issue=issue, alternative=alternative))
    outcome = Outcome(choices=tuple(choices))
    return MechanismResult(
        mechanism="round-robin",
        outcome=outcome,
        utilities=utility_vector(instance, outcome),
        picks=tuple(picks),
    )


def _suffix_maxima(instance: DecisionInstance) -> list[list[Fraction]]:
    """suffix[t][i] = the most player i can still get from issues t.. onward."""
    n, m = instance.n, instance.m
    suffix = [[Fraction(0)] * n for _ in range(m + 1)]
    for t in range(m - 1, -1, -1):
        issue = instance.issues[t]
        for i in range(n):
            suffix[t][i] = suffix[t + 1][i] + max(issue.utilities[i])
    return suffix


def _check_cap(instance: DecisionInstance, cap: int) -> None:
    size = outcome_space_size(instance)
    if size > cap:
        raise CapExceeded(size, cap, what="outcome enumeration")


def leximin(
    instance: DecisionInstance, cap: int = DEFAULT_ENUM_CAP
) -> MechanismResult:
    """Maximize the sorted vector of normalized utilities lexicographically.

    Utilities are divided by the player's round robin share (falling back to
    the proportional share when RRS is zero); players with both shares zero
    do not appear in the objective. The reported utilities are raw.
    """
    _check_cap(instance, cap)
    divisors = leximin_normalization(instance)
    included = [i for i, d in enumerate(divisors) if d is not None]
    inverse = {i: 1 / divisors[i] for i in included}
    suffix = _suffix_maxima(instance)
    m = instance.m

    best_key: tuple[Fraction, ...] | None = None
    best_choices: tuple[int, ...] | None = None
    current = [Fraction(0)] * instance.n
    choices: list[int] = []

    def search(t: int) -> None:
        nonlocal best_key, best_choices
        if best_key is not None:
            bound = tuple(
                sorted((current[i] + suffix[t][i]) * inverse[i] for i in included)
            )
            if bound <= best_key:
                return
        if t == m:
            key = tuple(sorted(current[i] * inverse[i] for i in included))
            if best_key is None or key > best_key:
                best_key = key
                best_choices = tuple(choices)
            return
        issue = instance.issues[t]
        for a in range(issue.k):
            for i in range(instance.n):
                current[i] += issue.utilities[i][a]
            choices.append(a)
            search(t + 1)
            choices.pop()
            for i in range(instance.n):
                current[i] -= issue.utilities[i][a]

    search(0)
    outcome = Outcome(choices=best_choices)
    return MechanismResult(
        mechanism="leximin",
        outcome=outcome,
        utilities=utility_vector(instance, outcome),
        normalization=divisors,
    )


def _best_support(instance: DecisionInstance) -> tuple[int, ...]:
    """Largest achievable set of positive-utility players; lex-least on size ties."""
    n, m = instance.n, instance.m
    suffix = _suffix_maxima(instance)
    best: tuple[int, ...] | None = None
    current = [Fraction(0)] * n

    def search(t: int) -> None:
        nonlocal best
        if best is not None:
            reachable = sum(
                1 for i in range(n) if current[i] > 0 or suffix[t][i] > 0
            )
            if reachable < len(best):
                return
        if t == m:
            support = tuple(i for i in range(n) if current[i] > 0)
            if (
                best is None
                or len(support) > len(best)
                or (len(support) == len(best) and support < best)
            ):
                best = support
            return
        issue = instance.issues[t]
        for a in range(issue.k):
            for i in range(n):
                current[i] += issue.utilities[i][a]
            search(t + 1)
            for i in range(n):
                current[i] -= issue.utilities[i][a]

    search(0)
    assert best is not None
    return best


def max_nash_welfare(
    instance: DecisionInstance, cap: int = DEFAULT_ENUM_CAP
) -> MechanismResult:
    """Maximize the product of utilities over the best achievable support set.

    Phase one finds S, the largest set of players that can simultaneously hold
    positive utility (ties: lexicographically smallest sorted player tuple).
    Phase two maximizes the exact rational product of the utilities of S;
    every maximizer gives all of S positive utility, so the outcome covers S.
    """
    _check_cap(instance, cap)
    support = _best_support(instance)
    suffix = _suffix_maxima(instance)
    n, m = instance.n, instance.m

    best_value: Fraction | None = None
    best_choices: tuple[int, ...] | None = None
    current = [Fraction(0)] * n
    choices: list[int] = []

    def search(t: int) -> None:
        nonlocal best_value, best_choices
        if best_value is not None:
            bound = Fraction(1)
            for i in support:
                bound *= current[i] + suffix[t][i]
            if bound <= best_value:
                return
        if t == m:
            value = Fraction(1)
            for i in support:
                value *= current[i]
            if best_value is None or value > best_value:
                best_value = value
                best_choices = tuple(choices)
            return
        issue = instance.issues[t]
        for a in range(issue.k):
            for i in range(n):
                current[i] += issue.utilities[i][a]
            choices.append(a)
            search(t + 1)
            choices.pop()
            for i in range(n):
                current[i] -= issue.utilities[i][a]

    search(0)
    outcome = Outcome(choices=best_choices)
    return MechanismResult(
        mechanism="mnw",
        outcome=outcome,
        utilities=utility_vector(instance, outcome),
        support=support,
    )
