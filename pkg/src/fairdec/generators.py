"""Named instance families: worked examples, stress constructions, random draws.

Each family is a function returning the instance (plus a witness allocation
or a critical weight ratio where the construction is about one). ``generate``
dispatches on the family name for the command line.

Family overview:
- example1: two players, two binary issues, opposite interests; every share
  of every player equals 1.
- example2: two players, eight binary issues; the second player is
  indifferent on half of them, which separates PPS (0) from RRS (2).
- compromise: two binary issues where a middling alternative in each is
  jointly better than the two favorites; turn-taking picks the favorites and
  is Pareto dominated.
- theorem5: n players, n binary issues; the shared alternative pays player 1
  a sliver d and everyone else a trickle x, calibrated so the Nash-welfare
  optimum takes it everywhere while player 1's PPS level collapses to n*d.
- lemma6_upper: n players, n^2 goods, with a hand-built envy-free-up-to-one
  allocation that pays player 1 only n/(2n-2) of her round robin share.
- theorem6_upper: two players, four goods; the Nash-welfare allocation pays
  player 1 a 2/(3-2*delta) fraction of her round robin share.
- appendixA: goods instance plus a witness allocation that satisfies RRS but
  fails proportionality-up-to-one-good (possible once m > 4n - 2); certified
  by the audit before it is returned.
- weighted_welfare_gap: two players, four goods where no weighted-welfare
  allocation at any weights gives both players their (equal) RRS of 5; the
  critical weight ratio 3/4 is returned with it.
- random / random-goods: seeded uniform integer utilities.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .audit import audit_goods
from .errors import GenerationError
from .model import (
    Allocation,
    DecisionInstance,
    GoodsInstance,
    decision_instance,
    goods_instance,
)

FAMILIES = (
    "example1",
    "example2",
    "compromise",
    "theorem5",
    "lemma6_upper",
    "theorem6_upper",
    "appendixA",
    "weighted_welfare_gap",
    "random",
    "random-goods",
)


@dataclass(frozen=True)
class GeneratedInstance:
    family: str
    instance: DecisionInstance | GoodsInstance
    witness: Allocation | None = None
    critical_ratio: Fraction | None = None


def example1() -> DecisionInstance:
    issue = [[1, 0], [0, 1]]
    return decision_instance([issue, issue])


def example2() -> DecisionInstance:
    contested = [[1, 0], [0, 1]]
    solo = [[1, 0], [0, 0]]
    return decision_instance([contested] * 4 + [solo] * 4)


def compromise() -> DecisionInstance:
    c = Fraction(2, 3)
    return decision_instance(
        [
            [[1, c], [0, c]],
            [[0, c], [1, c]],
        ],
        alternative_names=[("extreme", "compromise"), ("extreme", "compromise")],
    )


# Slack on the binding lower bound for d: large enough that the two strict
# inequalities survive the rational approximation of x, small enough that
# n*d stays below 1/2 at n = 8.
_THEOREM5_SLACK = Fraction(26, 25)


def theorem5(n: int) -> DecisionInstance:
    """n binary issues; the second alternative pays player 1 d and, on issue 1,
    x to everyone else (on issue t, 1 to player t).

    x approximates (ln n - ln ln n) / n to within 1e-6 as an exact rational;
    d sits 4% above the larger of its two lower bounds, which keeps both
    certifying inequalities strict: n*d exceeds 1/((1+x)^(n-1) - 1 + 1/n) and
    n*x/(n+x).
    """
    if n < 2:
        raise ValueError("this family needs at least two players")
    x = Fraction(
        (math.log(n) - math.log(math.log(n))) / n
    ).limit_denominator(10**7)
    rhs_product = 1 / ((1 + x) ** (n - 1) - 1 + Fraction(1, n))
    rhs_linear = n * x / (n + x)
    d = _THEOREM5_SLACK * max(rhs_product, rhs_linear) / n
    if d >= 1:
        raise GenerationError(
            f"calibration failed at n={n}: d={d} >= 1 breaks the unit share of player 1"
        )
    issues = []
    for t in range(n):
        matrix = [[Fraction(0)] * 2 for _ in range(n)]
        matrix[0][0] = Fraction(1)
        matrix[0][1] = d
        if t == 0:
            for j in range(1, n):
                matrix[j][1] = x
        else:
            matrix[t][1] = Fraction(1)
        issues.append(matrix)
    return decision_instance(issues)


def lemma6_upper(n: int) -> tuple[GoodsInstance, Allocation]:
    """n players, n^2 goods, and an envy-free-up-to-one-good allocation where
    player 1 realizes only n/(2n-2) of her round robin share of 2."""
    if n < 2:
        raise ValueError("this family needs at least two players")
    m = n * n
    cheap = Fraction(1, n - 1)
    bundles = [set() for _ in range(n)]
    bundles[0] = set(range(n, 2 * n))
    bundles[1] = {0, 1}
    for i in range(2, n):
        bundles[i] = {i} | set(range(i * n, (i + 1) * n))
    utilities = []
    row0 = [Fraction(1)] * n + [cheap] * (m - n)
    utilities.append(row0)
    for i in range(1, n):
        utilities.append(
            [Fraction(1) if g in bundles[i] else Fraction(0) for g in range(m)]
        )
    return (
        goods_instance(utilities),
        Allocation(bundles=tuple(frozenset(b) for b in bundles)),
    )


def theorem6_upper(delta: Fraction = Fraction(1, 100)) -> GoodsInstance:
    """Two players, four goods; under the Nash-welfare allocation player 1
    keeps 2/(3-2*delta) of her round robin share of 3/2 - delta."""
    delta = Fraction(delta)
    if not 0 < delta < Fraction(1, 2):
        raise ValueError("delta must lie strictly between 0 and 1/2")
    one = Fraction(1)
    return goods_instance(
        [
            [one - delta, one - delta, Fraction(1, 2), Fraction(1, 2)],
            [one, one, Fraction(0), Fraction(0)],
        ]
    )


def _appendixA_candidate(n: int, m: int, k: int) -> tuple[GoodsInstance, Allocation]:
    top = (k - 1) * n + 1
    row0 = []
    for g in range(m):
        if g == 0:
            row0.append(Fraction(top))
        elif g <= k * n - 2:
            row0.append(Fraction(n))
        else:
            row0.append(Fraction(1))
    bundles = [set() for _ in range(n)]
    bundles[0] = {0}
    for g in range(1, m):
        bundles[1 + (g - 1) % (n - 1)].add(g)
    utilities = [row0]
    for i in range(1, n):
        utilities.append(
            [Fraction(1) if g in bundles[i] else Fraction(0) for g in range(m)]
        )
    return (
        goods_instance(utilities),
        Allocation(bundles=tuple(frozenset(b) for b in bundles)),
    )


def appendixA(n: int, m: int) -> tuple[GoodsInstance, Allocation]:
    """A goods instance with a witness allocation satisfying every player's
    RRS while failing proportionality-up-to-one-good for player 1.

    Player 1's values step down from (k-1)n + 1 through n to 1; holding only
    her top good meets RRS exactly but stays a full step short of Prop even
    after adding her best outside good. Every other player unit-values
    exactly the goods handed to her. The step count k is tuned (quotient
    first, then a small sweep) until the audit certifies the instance;
    certification is impossible unless m > 4n - 2.
    """
    if n < 2:
        raise ValueError("this family needs at least two players")
    if m < n:
        raise ValueError("this family needs at least as many goods as players")
    candidates = [m // n] + [k for k in range(2, m // n + 2) if k != m // n]
    for k in candidates:
        if k < 2 or k * n - 1 > m:
            continue
        goods, witness = _appendixA_candidate(n, m, k)
        report = audit_goods(goods, witness)
        rrs_all = all(player.rrs.satisfied for player in report.players)
        prop1_broken = any(not player.prop1.satisfied for player in report.players)
        if rrs_all and prop1_broken:
            return goods, witness
    raise GenerationError(
        f"no step count yields an RRS-but-not-Prop1 witness at n={n}, m={m} "
        f"(impossible unless m > 4n - 2 = {4 * n - 2})"
    )


def weighted_welfare_gap() -> tuple[GoodsInstance, Fraction]:
    """Two players, four goods, equal RRS of 5; no weight vector makes a
    welfare-maximizing allocation give both players 5. The returned ratio
    w1/w2 = 3/4 is where the allocation flips."""
    return goods_instance([[4, 4, 1, 1], [3, 3, 2, 2]]), Fraction(3, 4)


def random_public(
    n: int,
    m: int,
    k: int | Sequence[int],
    seed: int,
    umin: int = 0,
    umax: int = 5,
) -> DecisionInstance:
    """Uniform integer utilities in [umin, umax]; k alternatives per issue
    (a sequence gives per-issue counts). Draw order: issues, then players,
    then alternatives."""
    rng = random.Random(seed)
    counts = list(k) if not isinstance(k, int) else [k] * m
    if len(counts) != m:
        raise ValueError("need one alternative count per issue")
    issues = []
    for t in range(m):
        issues.append(
            [[rng.randint(umin, umax) for _ in range(counts[t])] for _ in range(n)]
        )
    return decision_instance(issues)


def random_goods(
    n: int, m: int, seed: int, umin: int = 0, umax: int = 5
) -> GoodsInstance:
    """Uniform integer per-good utilities in [umin, umax]; players then goods."""
    rng = random.Random(seed)
    return goods_instance(
        [[rng.randint(umin, umax) for _ in range(m)] for _ in range(n)]
    )


def generate(
    family: str,
    n: int | None = None,
    m: int | None = None,
    k: int | None = None,
    delta: Fraction | None = None,
    seed: int | None = None,
    umin: int = 0,
    umax: int = 5,
) -> GeneratedInstance:
    """Build a named family; raises ValueError on a missing or unknown name
    or missing parameters."""

    def need(**params):
        missing = [name for name, value in params.items() if value is None]
        if missing:
            raise ValueError(
                f"family {family!r} needs parameters: {', '.join(missing)}"
            )

    if family == "example1":
        return GeneratedInstance(family, example1())
    if family == "example2":
        return GeneratedInstance(family, example2())
    if family == "compromise":
        return GeneratedInstance(family, compromise())
    if family == "theorem5":
        need(n=n)
        return GeneratedInstance(family, theorem5(n))
    if family == "lemma6_upper":
        need(n=n)
        instance, witness = lemma6_upper(n)
        return GeneratedInstance(family, instance, witness=witness)
    if family == "theorem6_upper":
        instance = theorem6_upper(delta if delta is not None else Fraction(1, 100))
        return GeneratedInstance(family, instance)
    if family == "appendixA":
        need(n=n, m=m)
        instance, witness = appendixA(n, m)
        return GeneratedInstance(family, instance, witness=witness)
    if family == "weighted_welfare_gap":
        instance, ratio = weighted_welfare_gap()
        return GeneratedInstance(family, instance, critical_ratio=ratio)
    if family == "random":
        need(n=n, m=m, k=k, seed=seed)
        return GeneratedInstance(
            family, random_public(n, m, k, seed, umin=umin, umax=umax)
        )
    if family == "random-goods":
        need(n=n, m=m, seed=seed)
        return GeneratedInstance(
            family, random_goods(n, m, seed, umin=umin, umax=umax)
        )
    raise ValueError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
