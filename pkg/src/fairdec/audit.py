"""Fairness and efficiency audits with exact alpha levels.

For a share-based axiom with reference share s_i > 0, the alpha level is the
ratio value/s_i where value is what the axiom credits the player with (her
utility, or her utility after the best single improvement for the
one-switch/one-good relaxations); the axiom is satisfied at level alpha >= 1.
When s_i = 0 the axiom is vacuous: ``alpha`` is None and counts as satisfied
(an unbounded level, at least as large as every rational).

Envy-freeness levels follow the same pattern with the opponent's bundle value
as the reference, minimized over opponents.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from dataclasses import dataclass

from .model import (
    Allocation,
    DecisionInstance,
    GoodsInstance,
    Outcome,
    allocation_to_outcome,
    allocation_utilities,
    bundle_utility,
    goods_to_public,
    outcome_to_allocation,
    outcome_utility,
    utility_vector,
)
from .oracles import DEFAULT_ENUM_CAP, enumerate_outcomes
from .shares import (
    DEFAULT_MMS_CAP,
    maximin_share,
    pessimistic_share,
    proportional_share,
    round_robin_share,
)


@dataclass(frozen=True)
class AxiomCheck:
    """One axiom for one player: satisfied flag and exact level.

    ``alpha`` is None when the reference is zero, meaning the level is
    unbounded and the axiom holds vacuously; otherwise satisfied iff
    alpha >= 1.
    """

    satisfied: bool
    alpha: Fraction | None


@dataclass(frozen=True)
class ParetoCheck:
    """Exhaustive Pareto test; ``witness`` is the first dominating alternative found."""

    satisfied: bool
    witness: Outcome | Allocation | None


@dataclass(frozen=True)
class PlayerAudit:
    prop: AxiomCheck
    prop1: AxiomCheck
    rrs: AxiomCheck
    pps: AxiomCheck
    mms: AxiomCheck | None = None
    ef: AxiomCheck | None = None
    ef1: AxiomCheck | None = None


@dataclass(frozen=True)
class AuditReport:
    utilities: tuple[Fraction, ...]
    players: tuple[PlayerAudit, ...]
    po: ParetoCheck | None = None


def _level(value: Fraction, reference: Fraction) -> AxiomCheck:
    if reference == 0:
        return AxiomCheck(satisfied=True, alpha=None)
    alpha = value / reference
    return AxiomCheck(satisfied=alpha >= 1, alpha=alpha)


def _min_level(pairs: Iterable[tuple[Fraction, Fraction]]) -> AxiomCheck:
    """Fold (value, reference) pairs: the worst ratio over positive references."""
    worst: Fraction | None = None
    satisfied = True
    for value, reference in pairs:
        if reference == 0:
            continue
        ratio = value / reference
        if ratio < 1:
            satisfied = False
        if worst is None or ratio < worst:
            worst = ratio
    return AxiomCheck(satisfied=satisfied, alpha=worst)


def best_single_switch(
    instance: DecisionInstance, outcome: Outcome, player: int
) -> Fraction:
    """The player's best utility from changing one issue of the outcome.

    This is u_i(c) - u_i^t(c_t) + u^t_max(i) maximized over issues t; keeping
    the outcome as is is included (switching to the chosen alternative).
    """
    total = outcome_utility(instance, outcome, player)
    best_gain = Fraction(0)
    for issue, choice in zip(instance.issues, outcome.choices):
        row = issue.utilities[player]
        gain = max(row) - row[choice]
        if gain > best_gain:
            best_gain = gain
    return total + best_gain


def check_pareto_optimal(
    instance: DecisionInstance, outcome: Outcome, cap: int = DEFAULT_ENUM_CAP
) -> ParetoCheck:
    """Search every outcome for a Pareto improvement; keep the first one found."""
    base = utility_vector(instance, outcome)
    for candidate in enumerate_outcomes(instance, cap):
        utils = utility_vector(instance, candidate)
        if utils != base and all(u >= b for u, b in zip(utils, base)):
            return ParetoCheck(satisfied=False, witness=candidate)
    return ParetoCheck(satisfied=True, witness=None)


def audit(
    instance: DecisionInstance,
    outcome: Outcome,
    with_mms: bool = False,
    mms_cap: int = DEFAULT_MMS_CAP,
    po_cap: int | None = None,
) -> AuditReport:
    """Audit an outcome of a public decision instance.

    Always reports Prop, Prop1, RRS and PPS levels per player; MMS is opt-in
    (it enumerates partitions), and the exhaustive Pareto check runs when
    ``po_cap`` is given.
    """
    if len(outcome.choices) != instance.m:
        raise ValueError(
            f"outcome has {len(outcome.choices)} choices for {instance.m} issues"
        )
    for t, choice in enumerate(outcome.choices):
        if not 0 <= choice < instance.issues[t].k:
            raise ValueError(
                f"choices[{t}]: alternative {choice} out of range "
                f"0..{instance.issues[t].k - 1}"
            )
    utilities = utility_vector(instance, outcome)
    players = []
    for i in range(instance.n):
        prop = proportional_share(instance, i)
        reach = best_single_switch(instance, outcome, i)
        players.append(
            PlayerAudit(
                prop=_level(utilities[i], prop),
                prop1=_level(reach, prop),
                rrs=_level(utilities[i], round_robin_share(instance, i)),
                pps=_level(utilities[i], pessimistic_share(instance, i)),
                mms=(
                    _level(utilities[i], maximin_share(instance, i, cap=mms_cap))
                    if with_mms
                    else None
                ),
            )
        )
    po = (
        check_pareto_optimal(instance, outcome, cap=po_cap)
        if po_cap is not None
        else None
    )
    return AuditReport(utilities=utilities, players=tuple(players), po=po)


def best_unowned_good(
    goods: GoodsInstance, alloc: Allocation, player: int
) -> Fraction:
    """The most valuable good outside the player's bundle (0 when she holds all)."""
    return max(
        (
            goods.utilities[player][g]
            for g in range(goods.m)
            if g not in alloc.bundles[player]
        ),
        default=Fraction(0),
    )


def audit_goods(
    goods: GoodsInstance,
    alloc: Allocation,
    with_mms: bool = False,
    mms_cap: int = DEFAULT_MMS_CAP,
    po_cap: int | None = None,
) -> AuditReport:
    """Audit an allocation of private goods.

    Share axioms read the per-good values directly (they coincide with the
    per-issue maxima of the public embedding); the one-good relaxation of
    proportionality credits the player with her bundle plus the best good she
    does not hold. Envy-freeness and its one-good relaxation are reported per
    player as the worst case over opponents. The Pareto check runs on the
    public embedding and converts any witness back to an allocation.
    """
    if len(alloc.bundles) != goods.n:
        raise ValueError(
            f"allocation has {len(alloc.bundles)} bundles for {goods.n} players"
        )
    if sorted(g for bundle in alloc.bundles for g in bundle) != list(range(goods.m)):
        raise ValueError("allocation must hand out every good exactly once")
    utilities = allocation_utilities(goods, alloc)
    players = []
    for i in range(goods.n):
        prop = proportional_share(goods, i)
        reach = utilities[i] + best_unowned_good(goods, alloc, i)
        ef_pairs = []
        ef1_pairs = []
        for j in range(goods.n):
            if j == i:
                continue
            other = bundle_utility(goods, i, alloc.bundles[j])
            ef_pairs.append((utilities[i], other))
            if alloc.bundles[j]:
                best_there = max(goods.utilities[i][g] for g in alloc.bundles[j])
            else:
                best_there = Fraction(0)
            ef1_pairs.append((utilities[i], other - best_there))
        players.append(
            PlayerAudit(
                prop=_level(utilities[i], prop),
                prop1=_level(reach, prop),
                rrs=_level(utilities[i], round_robin_share(goods, i)),
                pps=_level(utilities[i], pessimistic_share(goods, i)),
                mms=(
                    _level(utilities[i], maximin_share(goods, i, cap=mms_cap))
                    if with_mms
                    else None
                ),
                ef=_min_level(ef_pairs),
                ef1=_min_level(ef1_pairs),
            )
        )
    po = None
    if po_cap is not None:
        image = goods_to_public(goods)
        result = check_pareto_optimal(
            image, allocation_to_outcome(goods, alloc), cap=po_cap
        )
        witness = (
            outcome_to_allocation(goods, result.witness)
            if result.witness is not None
            else None
        )
        po = ParetoCheck(satisfied=result.satisfied, witness=witness)
    return AuditReport(utilities=utilities, players=tuple(players), po=po)
