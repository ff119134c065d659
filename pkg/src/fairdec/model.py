"""Core data model for fair public decision making.

A decision instance has n players and m issues; issue t carries k_t mutually
exclusive alternatives and an n-by-k_t matrix of non-negative rational
utilities. An outcome fixes one alternative per issue, and a player's utility
for an outcome is the sum of her per-issue utilities (preferences are additive
across issues).

Allocating private goods is the special case with one issue per good and one
alternative per player: the alternative that hands good g to player i gives
u_i(g) to i and zero to everyone else. ``goods_to_public`` performs that
embedding; ``outcome_to_allocation`` and ``allocation_to_outcome`` move
between the two views (the chosen alternative index of a reduced issue is the
recipient of the good).

All quantities are ``fractions.Fraction``. Nothing in this package rounds.
Instances, outcomes and allocations are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, "p/q" string, decimal string, or Fraction to Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not utilities")
    if isinstance(value, (Fraction, int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Violation:
    """One structural defect found by ``validate``.

    Attributes:
        path: index path into the offending field, e.g. "issues[2].utilities[0][1]".
        message: human-readable description of the defect.
    """

    path: str
    message: str


@dataclass(frozen=True)
class Issue:
    """One issue: a label, alternative labels, and an n-by-k utility matrix."""

    utilities: tuple[tuple[Fraction, ...], ...]  # rows = players, cols = alternatives
    name: str
    alternatives: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.utilities[0]) if self.utilities else 0


@dataclass(frozen=True)
class DecisionInstance:
    """A public decision instance: players and a tuple of issues."""

    issues: tuple[Issue, ...]
    players: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def m(self) -> int:
        return len(self.issues)

    def utility(self, player: int, issue: int, alternative: int) -> Fraction:
        return self.issues[issue].utilities[player][alternative]


@dataclass(frozen=True)
class GoodsInstance:
    """Indivisible private goods: an n-by-m matrix of per-good utilities."""

    utilities: tuple[tuple[Fraction, ...], ...]  # rows = players, cols = goods
    players: tuple[str, ...]
    goods: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def m(self) -> int:
        return len(self.goods)

    def utility(self, player: int, good: int) -> Fraction:
        return self.utilities[player][good]


@dataclass(frozen=True)
class Outcome:
    """One chosen alternative index per issue."""

    choices: tuple[int, ...]


@dataclass(frozen=True)
class Allocation:
    """A partition of the goods: bundles[i] is the set of goods player i holds."""

    bundles: tuple[frozenset[int], ...]

    def owner(self, good: int) -> int:
        for i, bundle in enumerate(self.bundles):
            if good in bundle:
                return i
        raise KeyError(f"good {good} is unallocated")


@dataclass(frozen=True)
class Pick:
    """One round robin turn: who decided which issue, choosing which alternative."""

    player: int
    issue: int
    alternative: int


@dataclass(frozen=True)
class MechanismResult:
    """Output of a mechanism or optimization oracle, with enough data to audit it.

    Attributes:
        mechanism: name of the procedure that produced this result.
        outcome: the chosen alternative per issue.
        utilities: raw (unnormalized) utility per player.
        picks: round robin turn log, when applicable.
        support: players with positive utility that the Nash product ranges
            over, when applicable.
        normalization: leximin divisor per player (round robin share, falling
            back to the proportional share); None marks a player excluded from
            the objective because both shares are zero.
    """

    mechanism: str
    outcome: Outcome
    utilities: tuple[Fraction, ...]
    picks: tuple[Pick, ...] | None = None
    support: tuple[int, ...] | None = None
    normalization: tuple[Fraction | None, ...] | None = None


def _default_labels(prefix: str, count: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(count))


def decision_instance(
    utilities: Sequence[Sequence[Sequence[RationalLike]]],
    players: Sequence[str] | None = None,
    issue_names: Sequence[str] | None = None,
    alternative_names: Sequence[Sequence[str]] | None = None,
) -> DecisionInstance:
    """Build a DecisionInstance from per-issue utility matrices.

    ``utilities[t][i][a]`` is player i's utility for alternative a of issue t.
    Labels default to p1.., issue1.., a1.. when omitted.
    """
    n = len(utilities[0]) if utilities else 0
    player_labels = tuple(players) if players is not None else _default_labels("p", n)
    issues = []
    for t, matrix in enumerate(utilities):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in matrix)
        k = len(rows[0]) if rows else 0
        name = issue_names[t] if issue_names is not None else f"issue{t + 1}"
        alts = (
            tuple(alternative_names[t])
            if alternative_names is not None
            else _default_labels("a", k)
        )
        issues.append(Issue(utilities=rows, name=name, alternatives=alts))
    return DecisionInstance(issues=tuple(issues), players=player_labels)


def goods_instance(
    utilities: Sequence[Sequence[RationalLike]],
    players: Sequence[str] | None = None,
    goods: Sequence[str] | None = None,
) -> GoodsInstance:
    """Build a GoodsInstance from an n-by-m utility matrix (rows = players)."""
    rows = tuple(tuple(as_fraction(v) for v in row) for row in utilities)
    n = len(rows)
    m = len(rows[0]) if rows else 0
    player_labels = tuple(players) if players is not None else _default_labels("p", n)
    good_labels = tuple(goods) if goods is not None else _default_labels("g", m)
    return GoodsInstance(utilities=rows, players=player_labels, goods=good_labels)


def allocation(bundles: Iterable[Iterable[int]]) -> Allocation:
    return Allocation(bundles=tuple(frozenset(b) for b in bundles))


def validate(instance: DecisionInstance | GoodsInstance) -> list[Violation]:
    """Check structural invariants; an empty list means the instance is well formed.

    Checks: n >= 1, m >= 1, every issue has k_t >= 1, every utility matrix has
    exactly n rows of consistent width, and every utility is non-negative.
    """
    violations: list[Violation] = []
    if isinstance(instance, GoodsInstance):
        n, m = instance.n, instance.m
        if n < 1:
            violations.append(Violation("players", "at least one player is required"))
        if m < 1:
            violations.append(Violation("goods", "at least one good is required"))
        if len(instance.utilities) != n:
            violations.append(
                Violation(
                    "utilities",
                    f"expected {n} utility rows (one per player), got {len(instance.utilities)}",
                )
            )
        for i, row in enumerate(instance.utilities):
            if len(row) != m:
                violations.append(
                    Violation(f"utilities[{i}]", f"expected {m} entries, got {len(row)}")
                )
            for g, value in enumerate(row):
                if value < 0:
                    violations.append(
                        Violation(f"utilities[{i}][{g}]", f"negative utility {value}")
                    )
        return violations

    n = instance.n
    if n < 1:
        violations.append(Violation("players", "at least one player is required"))
    if instance.m < 1:
        violations.append(Violation("issues", "at least one issue is required"))
    for t, issue in enumerate(instance.issues):
        k = issue.k
        if k < 1:
            violations.append(
                Violation(f"issues[{t}]", "an issue needs at least one alternative")
            )
        if len(issue.utilities) != n:
            violations.append(
                Violation(
                    f"issues[{t}].utilities",
                    f"expected {n} rows (one per player), got {len(issue.utilities)}",
                )
            )
        if len(issue.alternatives) != k:
            violations.append(
                Violation(
                    f"issues[{t}].alternatives",
                    f"expected {k} alternative labels, got {len(issue.alternatives)}",
                )
            )
        for i, row in enumerate(issue.utilities):
            if len(row) != k:
                violations.append(
                    Violation(
                        f"issues[{t}].utilities[{i}]",
                        f"expected {k} entries, got {len(row)}",
                    )
                )
            for a, value in enumerate(row):
                if value < 0:
                    violations.append(
                        Violation(
                            f"issues[{t}].utilities[{i}][{a}]",
                            f"negative utility {value}",
                        )
                    )
    return violations


def goods_to_public(goods: GoodsInstance) -> DecisionInstance:
    """Embed a goods instance as a decision instance, one issue per good.

    Issue t has n alternatives; alternative i hands good t to player i, giving
    utility u_i(g_t) to player i and zero to everyone else. Outcomes of the
    image correspond bijectively to allocations with identical utilities.
    """
    issues = []
    for g in range(goods.m):
        rows = tuple(
            tuple(
                goods.utilities[i][g] if i == j else Fraction(0)
                for j in range(goods.n)
            )
            for i in range(goods.n)
        )
        issues.append(
            Issue(utilities=rows, name=goods.goods[g], alternatives=goods.players)
        )
    return DecisionInstance(issues=tuple(issues), players=goods.players)


def outcome_to_allocation(goods: GoodsInstance, outcome: Outcome) -> Allocation:
    """Read an outcome of the goods embedding back as an allocation."""
    bundles = [set() for _ in range(goods.n)]
    for g, recipient in enumerate(outcome.choices):
        bundles[recipient].add(g)
    return Allocation(bundles=tuple(frozenset(b) for b in bundles))


def allocation_to_outcome(goods: GoodsInstance, alloc: Allocation) -> Outcome:
    """Write an allocation as an outcome of the goods embedding."""
    choices = [0] * goods.m
    for i, bundle in enumerate(alloc.bundles):
        for g in bundle:
            choices[g] = i
    return Outcome(choices=tuple(choices))


def outcome_utility(
    instance: DecisionInstance, outcome: Outcome, player: int
) -> Fraction:
    """Player's total utility for an outcome: the sum of her per-issue utilities."""
    total = Fraction(0)
    for issue, choice in zip(instance.issues, outcome.choices):
        total += issue.utilities[player][choice]
    return total


def utility_vector(instance: DecisionInstance, outcome: Outcome) -> tuple[Fraction, ...]:
    return tuple(outcome_utility(instance, outcome, i) for i in range(instance.n))


def bundle_utility(goods: GoodsInstance, player: int, bundle: Iterable[int]) -> Fraction:
    total = Fraction(0)
    for g in bundle:
        total += goods.utilities[player][g]
    return total


def allocation_utilities(goods: GoodsInstance, alloc: Allocation) -> tuple[Fraction, ...]:
    return tuple(
        bundle_utility(goods, i, alloc.bundles[i]) for i in range(goods.n)
    )


def issue_maxima(
    instance: DecisionInstance, player: int
) -> list[tuple[Fraction, int]]:
    """Per issue, the player's best achievable utility and one argmax alternative.

    Ties pick the lowest alternative index.
    """
    result = []
    for issue in instance.issues:
        row = issue.utilities[player]
        best = max(row)
        result.append((best, row.index(best)))
    return result


def sorted_max_utilities(instance: DecisionInstance, player: int) -> list[Fraction]:
    """The player's per-issue maxima in non-ascending order (length m)."""
    return sorted((best for best, _ in issue_maxima(instance, player)), reverse=True)
