import math
from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debtnet import (
    FinancialNetwork,
    PlanError,
    PolicyError,
    greatest_clearing,
    greedy_injections,
    inject_externals,
    is_clearing,
    min_budget_solvency,
    min_shift_amount,
    optimal_injections_enumerative,
    optimal_injections_lp,
)
from debtnet import scenarios as sc
from debtnet.errors import GuardError

from .strategies import networks


def _grid_best(net, M, steps=4):
    """Best greatest-clearing liquidity over a grid of splits among defaulting banks."""
    D = sorted(greatest_clearing(net).defaults)[:3]
    best = greatest_clearing(net).liquidity
    for parts in product(range(steps + 1), repeat=len(D)):
        if sum(parts) > steps:
            continue
        plan = [(b, M * k / steps) for b, k in zip(D, parts) if k]
        best = max(best, greatest_clearing(inject_externals(net, plan)).liquidity)
    return best


@given(networks(max_banks=4, costs=False), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_lp_dominates_grid(net, twice_budget):
    M = F(twice_budget, 2)
    plan, res = optimal_injections_lp(net, M)
    assert plan.total <= M
    assert res.liquidity >= _grid_best(net, M)
    injected = inject_externals(net, plan)
    assert is_clearing(injected, res.payments)[0]
    assert greatest_clearing(injected).liquidity == res.liquidity


@given(networks(max_banks=4), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_enumerative_dominates_grid_with_costs(net, twice_budget):
    M = F(twice_budget, 2)
    plan, res = optimal_injections_enumerative(net, M)
    assert plan.total <= M
    assert res.liquidity >= _grid_best(net, M)
    assert greatest_clearing(inject_externals(net, plan)).liquidity == res.liquidity


@given(networks(max_banks=4), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_greedy_spends_within_budget_and_never_hurts(net, twice_budget):
    M = F(twice_budget, 2)
    plan, trace, res = greedy_injections(net, M)
    assert plan.total <= M
    assert len(trace) == len(plan.transfers)
    assert res.liquidity >= greatest_clearing(net).liquidity


def test_fig1_plans():
    net = sc.fig1()
    plan, trace, _ = greedy_injections(net, F(8, 5))
    assert [r.bank for r in trace] == [2, 1]
    assert trace.rounds[0].threat == (0, 1, 2, 2, 0)
    assert optimal_injections_lp(net, F(1, 2))[0].transfers == ((2, F(1, 2)),)


def test_zero_budget_changes_nothing():
    net = sc.fig1()
    base = greatest_clearing(net)
    assert optimal_injections_lp(net, 0)[1] == base
    plan, trace, res = greedy_injections(net, 0)
    assert plan.transfers == () and res == base


def test_negative_budget_rejected():
    with pytest.raises(PlanError):
        optimal_injections_lp(sc.fig1(), -1)
    with pytest.raises(PlanError):
        greedy_injections(sc.fig1(), -1)


def test_lp_refuses_default_costs():
    with pytest.raises(PolicyError):
        optimal_injections_lp(sc.fig8(), 1)


def test_fig5_shift_of_v3():
    eps = F(1, 100)
    net = sc.fig5(eps)
    assert min_shift_amount(net, 2) == 2 - eps
    assert min_shift_amount(net, 3) == math.inf


def test_fig5_shift_float():
    assert min_shift_amount(sc.fig5().to_float(), 2) == pytest.approx(1.99)


def test_min_budget_isolated_bank():
    net = FinancialNetwork.from_edges([0, 0], {(0, 1): 2})
    assert min_budget_solvency(net, 0) == 2
    assert min_budget_solvency(net, 1) == 0


def test_min_budget_fig1():
    net = sc.fig1()
    assert min_budget_solvency(net, 1) == F(8, 5)
    assert min_budget_solvency(net, 3) == 2


def test_partition_gadget_quarter_cost():
    net = sc.gadget_partition([1, 2, 3, 4], "1/4")
    assert optimal_injections_enumerative(net, 5)[1].liquidity == F(75, 4)
    assert min_budget_solvency(net, 4) == 5


def test_partition_gadget_half_cost():
    net = sc.gadget_partition([1, 2, 3, 4], "1/2")
    assert optimal_injections_enumerative(net, 5)[1].liquidity == F(125, 6)


def test_enumerative_guard():
    n = 22
    net = FinancialNetwork.from_edges([0] * (n + 1), {(i, n): 1 for i in range(n)}, alpha=F(1, 2))
    with pytest.raises(GuardError):
        optimal_injections_enumerative(net, 1)


def test_out_of_range_bank():
    with pytest.raises(IndexError):
        min_shift_amount(sc.fig1(), 9)


def test_greedy_handles_closed_default_cycle():
    # both banks default under zero recovery and only pay each other
    net = FinancialNetwork.from_edges([0, 0, 0], {(1, 2): 1, (2, 1): 2}, 0, 0)
    plan, trace, res = greedy_injections(net, F(1, 2))
    assert trace.rounds[0].threat[1:] == (math.inf, math.inf)
    assert plan.transfers == ((1, F(1, 2)),)
    assert res.liquidity >= greatest_clearing(net).liquidity
