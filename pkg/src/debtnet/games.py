"""Edge-removal games.

Every bank chooses which of its incoming debts to forgive and is paid off in
total assets, evaluated on the greatest clearing after the regulator's
injection policy (if any) has run on the post-removal network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Union

from .bailout import greedy_injections, optimal_injections_lp
from .clearing import ClearingResult, greatest_clearing
from .errors import GuardError, PolicyError
from .network import FinancialNetwork, StrategyProfile, apply_removals, require_valid
from .numeric import Scalar, convert, lt

MAX_INDEGREE = 20
MAX_PROFILE_BITS = 20
DEFAULT_MAX_STEPS = 1000

Ratio = Union[Scalar, float, None]  # math.inf for a zero denominator, None if undefined


@dataclass(frozen=True)
class PolicySpec:
    kind: str = "none"
    budget: Scalar | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("none", "greedy", "optimal"):
            raise PolicyError(f"unknown policy {self.kind!r}")
        if self.kind == "none":
            if self.budget is not None:
                raise PolicyError("policy 'none' takes no budget")
        elif self.budget is None or self.budget < 0:
            raise PolicyError(f"policy {self.kind!r} needs a non-negative budget")

    @classmethod
    def parse(cls, text: str) -> "PolicySpec":
        """``none``, ``greedy:M`` or ``optimal:M``."""
        kind, _, amount = text.partition(":")
        if kind == "none":
            if amount:
                raise PolicyError("policy 'none' takes no budget")
            return cls()
        if not amount:
            raise PolicyError(f"policy {kind!r} needs a budget, e.g. {kind}:1")
        try:
            return cls(kind, convert(amount, True))
        except ValueError as exc:
            raise PolicyError(str(exc)) from exc

    def __str__(self) -> str:
        return self.kind if self.kind == "none" else f"{self.kind}:{self.budget}"


@dataclass(frozen=True)
class Deviation:
    bank: int
    strategy: frozenset[int]
    before: Scalar
    after: Scalar


@dataclass(frozen=True)
class Equilibrium:
    profile: StrategyProfile
    moves: int = 0


@dataclass(frozen=True)
class Cycle:
    profiles: tuple[StrategyProfile, ...]


@dataclass(frozen=True)
class Truncated:
    profile: StrategyProfile
    moves: int


@dataclass(frozen=True)
class GameReport:
    equilibria: tuple[StrategyProfile, ...]
    f_original: Scalar
    f_optimal: Scalar
    f_worst_eq: Scalar | None
    f_best_eq: Scalar | None
    poa: Ratio
    pos: Ratio
    eoa: Ratio
    eos: Ratio
    cycle: tuple[StrategyProfile, ...] | None = None


def _strategies(borrowers: tuple[int, ...]) -> list[frozenset[int]]:
    """All subsets, fewest removals first, then lexicographically."""
    return [frozenset(c) for k in range(len(borrowers) + 1) for c in combinations(borrowers, k)]


class Game:
    """A network plus policy, with per-profile outcomes cached."""

    def __init__(self, net: FinancialNetwork, policy: PolicySpec | None = None):
        require_valid(net)
        self.net = net
        self.policy = policy or PolicySpec()
        if self.policy.kind == "optimal" and net.default_costs:
            raise PolicyError("the optimal policy requires alpha = beta = 1; use greedy or none")
        self.budget = None if self.policy.budget is None else convert(self.policy.budget, net.exact)
        self.incoming = tuple(net.incoming(j) for j in range(net.n))
        self._cache: dict[StrategyProfile, ClearingResult] = {}

    def _check_bank(self, bank: int) -> None:
        if not 0 <= bank < self.net.n:
            raise IndexError(f"bank {bank} out of range")
        if len(self.incoming[bank]) > MAX_INDEGREE:
            raise GuardError(f"bank {bank} has {len(self.incoming[bank])} incoming edges, limit is {MAX_INDEGREE}")

    def outcome(self, profile: StrategyProfile) -> ClearingResult:
        hit = self._cache.get(profile)
        if hit is not None:
            return hit
        g = apply_removals(self.net, profile)
        if self.policy.kind == "none":
            res = greatest_clearing(g)
        elif self.policy.kind == "greedy":
            res = greedy_injections(g, self.budget)[2]
        else:
            res = optimal_injections_lp(g, self.budget)[1]
        self._cache[profile] = res
        return res

    def utilities(self, profile: StrategyProfile) -> tuple[Scalar, ...]:
        return self.outcome(profile).assets

    def best_response(self, profile: StrategyProfile, bank: int) -> tuple[frozenset[int], Scalar]:
        self._check_bank(bank)
        best = best_u = None
        for s in _strategies(self.incoming[bank]):
            u = self.outcome(profile.with_strategy(bank, s)).assets[bank]
            if best_u is None or lt(best_u, u, self.net.exact):
                best, best_u = s, u
        return best, best_u

    def deviation(self, profile: StrategyProfile, bank: int) -> Deviation | None:
        """The tie-broken best response of ``bank`` if it strictly improves."""
        current = self.outcome(profile).assets[bank]
        s, u = self.best_response(profile, bank)
        if lt(current, u, self.net.exact):
            return Deviation(bank, s, current, u)
        return None

    def is_equilibrium(self, profile: StrategyProfile) -> tuple[bool, Deviation | None]:
        profile.validate_for(self.net)
        for bank in range(self.net.n):
            dev = self.deviation(profile, bank)
            if dev is not None:
                return False, dev
        return True, None

    def br_dynamics(self, start: StrategyProfile | None = None, max_steps: int = DEFAULT_MAX_STEPS):
        """Round-robin best responses until a fixed point, a repeat, or ``max_steps`` moves."""
        n = self.net.n
        profile = start if start is not None else StrategyProfile.keep_all(n)
        profile.validate_for(self.net)
        for bank in range(n):
            self._check_bank(bank)
        seen = {profile: 0}
        history = [profile]
        moves = idle = bank = 0
        while idle < n:
            dev = self.deviation(profile, bank)
            if dev is None:
                idle += 1
            else:
                if moves >= max_steps:
                    return Truncated(profile, moves)
                profile = profile.with_strategy(bank, dev.strategy)
                moves += 1
                idle = 0
                if profile in seen:
                    return Cycle(tuple(history[seen[profile]:]))
                seen[profile] = len(history)
                history.append(profile)
            bank = (bank + 1) % n
        return Equilibrium(profile, moves)

    def _profile_space(self) -> list[list[frozenset[int]]]:
        bits = sum(len(b) for b in self.incoming)
        if bits > MAX_PROFILE_BITS:
            raise GuardError(f"profile space 2^{bits} exceeds the limit of 2^{MAX_PROFILE_BITS}")
        return [_strategies(b) for b in self.incoming]

    def profiles(self) -> Iterator[StrategyProfile]:
        for combo in product(*self._profile_space()):
            yield StrategyProfile(tuple(combo))

    def enumerate_equilibria(self) -> tuple[StrategyProfile, ...]:
        return tuple(p for p in self.profiles() if self.is_equilibrium(p)[0])

    def quality_report(self) -> GameReport:
        ex = self.net.exact
        profiles = list(self.profiles())
        f_original = self.outcome(StrategyProfile.keep_all(self.net.n)).liquidity
        f_optimal = max((self.outcome(p).liquidity for p in profiles), key=lambda v: v)
        eq = tuple(p for p in profiles if self.is_equilibrium(p)[0])
        cycle = None
        if eq:
            values = [self.outcome(p).liquidity for p in eq]
            worst, best = min(values), max(values)
            ratios = [_ratio(f_optimal, worst, ex), _ratio(f_optimal, best, ex), _ratio(f_original, worst, ex), _ratio(f_original, best, ex)]
        else:
            worst = best = None
            ratios = [None] * 4
            dyn = self.br_dynamics()
            if isinstance(dyn, Cycle):
                cycle = dyn.profiles
        return GameReport(eq, f_original, f_optimal, worst, best, *ratios, cycle=cycle)


def _ratio(num: Scalar, den: Scalar, exact: bool) -> Ratio:
    zero_den = den == 0 if exact else abs(den) <= 1e-9
    if zero_den:
        zero_num = num == 0 if exact else abs(num) <= 1e-9
        return None if zero_num else math.inf
    return num / den


# -- functional interface ---------------------------------------------------

def _policy(policy) -> PolicySpec:
    if policy is None:
        return PolicySpec()
    if isinstance(policy, str):
        return PolicySpec.parse(policy)
    return policy


def utilities(net: FinancialNetwork, profile: StrategyProfile, policy=None) -> tuple[Scalar, ...]:
    """Total assets of every bank, injected cash included."""
    profile.validate_for(net)
    return Game(net, _policy(policy)).utilities(profile)


def best_response(net: FinancialNetwork, profile: StrategyProfile, bank: int, policy=None) -> tuple[frozenset[int], Scalar]:
    """Utility-maximising set of borrowers for ``bank`` to forgive.

    Ties prefer fewer removals, then the lexicographically smallest set.
    """
    profile.validate_for(net)
    return Game(net, _policy(policy)).best_response(profile, bank)


def is_equilibrium(net: FinancialNetwork, profile: StrategyProfile, policy=None) -> tuple[bool, Deviation | None]:
    return Game(net, _policy(policy)).is_equilibrium(profile)


def br_dynamics(net: FinancialNetwork, start: StrategyProfile | None = None, policy=None, max_steps: int = DEFAULT_MAX_STEPS):
    return Game(net, _policy(policy)).br_dynamics(start, max_steps)


def enumerate_equilibria(net: FinancialNetwork, policy=None) -> tuple[StrategyProfile, ...]:
    return Game(net, _policy(policy)).enumerate_equilibria()


def quality_report(net: FinancialNetwork, policy=None) -> GameReport:
    return Game(net, _policy(policy)).quality_report()
