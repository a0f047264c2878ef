import math
from fractions import Fraction as F
from itertools import combinations, product

import pytest
from hypothesis import assume, given, settings

from debtnet import (
    Cycle,
    Equilibrium,
    FinancialNetwork,
    Game,
    PolicyError,
    PolicySpec,
    StrategyProfile,
    Truncated,
    apply_removals,
    best_response,
    br_dynamics,
    enumerate_equilibria,
    greatest_clearing,
    is_equilibrium,
    quality_report,
    utilities,
)
from debtnet import scenarios as sc
from debtnet.errors import GuardError, ProfileError

from .strategies import networks


def _subsets(items):
    return [frozenset(c) for k in range(len(items) + 1) for c in combinations(items, k)]


def _brute_equilibria(net):
    spaces = [_subsets(net.incoming(j)) for j in range(net.n)]
    assets = {}
    for combo in product(*spaces):
        prof = StrategyProfile(tuple(combo))
        assets[prof] = greatest_clearing(apply_removals(net, prof)).assets
    out = []
    for prof, a in assets.items():
        if all(assets[prof.with_strategy(j, s)][j] <= a[j] for j in range(net.n) for s in spaces[j]):
            out.append(prof)
    return set(out)


@given(networks(min_banks=2, max_banks=4))
@settings(max_examples=60, deadline=None)
def test_enumeration_matches_brute_force(net):
    assume(len(net.edges()) <= 6)
    assert set(enumerate_equilibria(net)) == _brute_equilibria(net)


def test_fig8_best_response_in_state_b():
    net = sc.fig8()
    state_b = StrategyProfile.from_edges(5, [(3, 0)])
    s, u = best_response(net, state_b, 1)
    assert s == frozenset({3}) and u == 4


def test_equilibrium_witness():
    ok, dev = is_equilibrium(sc.fig8(), StrategyProfile.keep_all(5))
    assert not ok
    assert dev.after > dev.before
    assert utilities(sc.fig8(), StrategyProfile.keep_all(5))[dev.bank] == dev.before


def test_tree_reaches_equilibrium():
    net = FinancialNetwork.from_edges([1, 0, 0, 0], {(0, 1): 3, (1, 2): 2, (1, 3): 2})
    out = br_dynamics(net)
    assert isinstance(out, Equilibrium) and out.moves == 0


def test_fig6_only_keep_all():
    assert enumerate_equilibria(sc.fig6(10)) == (StrategyProfile.keep_all(3),)


def test_two_cycle_equilibria_and_ratios():
    net = FinancialNetwork.from_edges([0, 0], {(0, 1): 1, (1, 0): 1})
    r = quality_report(net)
    assert StrategyProfile.keep_all(2) in r.equilibria
    assert r.f_worst_eq == 0 and r.f_optimal == 2
    assert r.poa == math.inf and r.pos == 1


def test_undefined_ratio():
    net = FinancialNetwork.from_edges([0, 0], {(0, 1): 1})
    r = quality_report(net)
    assert r.f_original == 0 and r.f_worst_eq == 0
    assert r.eoa is None and r.poa is None


def test_no_equilibrium_report_carries_cycle():
    r = quality_report(sc.fig8())
    assert r.equilibria == () and r.poa is None
    assert r.cycle is not None and len(r.cycle) == 4


def test_ne_hardness_best_response_matches_scan():
    net = sc.gadget_ne_hardness([1, 2, 3])
    S = 3
    prof = StrategyProfile.keep_all(net.n)
    s, u = best_response(net, prof, S)
    scan = max(
        greatest_clearing(apply_removals(net, prof.with_strategy(S, t))).assets[S] for t in _subsets(net.incoming(S))
    )
    assert u == scan


def test_truncated_dynamics():
    out = br_dynamics(sc.fig8(), max_steps=2)
    assert isinstance(out, Truncated) and out.moves == 2


def test_dynamics_from_start_profile():
    start = StrategyProfile.from_edges(5, [(3, 0), (3, 1)])
    out = Game(sc.fig8()).br_dynamics(start)
    assert isinstance(out, Cycle) and out.profiles[0] == start


def test_indegree_guard():
    n = 22
    net = FinancialNetwork.from_edges([0] * n, {(i, n - 1): 1 for i in range(n - 1)})
    with pytest.raises(GuardError):
        best_response(net, StrategyProfile.keep_all(n), n - 1)
    with pytest.raises(GuardError):
        enumerate_equilibria(net)


def test_profile_for_wrong_network():
    with pytest.raises(ProfileError):
        is_equilibrium(sc.fig1(), StrategyProfile.from_edges(5, [(0, 1)]))


def test_policy_parsing():
    assert PolicySpec.parse("greedy:2") == PolicySpec("greedy", F(2))
    assert str(PolicySpec.parse("optimal:1/2")) == "optimal:1/2"
    for bad in ("greedy", "none:1", "magic:1", "greedy:x", "greedy:-1"):
        with pytest.raises(PolicyError):
            PolicySpec.parse(bad)
    with pytest.raises(PolicyError):
        Game(sc.fig8(), PolicySpec("optimal", F(1)))


def test_optimal_policy_game():
    g = Game(sc.fig1(), PolicySpec("optimal", F(8, 5)))
    assert g.outcome(StrategyProfile.keep_all(5)).liquidity == F(48, 5) + F(16, 5)
