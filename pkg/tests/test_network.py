from fractions import Fraction as F

import pytest
from hypothesis import given

from debtnet import (
    FinancialNetwork,
    InjectionPlan,
    InvalidNetworkError,
    PlanError,
    ProfileError,
    StrategyProfile,
    apply_removals,
    inject_externals,
    relative_liabilities,
    validate_network,
)
from debtnet import scenarios as sc

from .strategies import networks


def test_fig1_is_valid_and_relative_rows_sum_to_one():
    net = sc.fig1()
    assert validate_network(net) == []
    pi = relative_liabilities(net)
    for i, row in enumerate(pi):
        assert sum(row) == (1 if net.total_liabilities[i] > 0 else 0)


def test_relative_row_of_bank_without_debts_is_zero():
    net = FinancialNetwork.from_edges([1, 0], {(0, 1): 2})
    assert relative_liabilities(net)[1] == [0, 0]


@pytest.mark.parametrize(
    "net, kind",
    [
        (FinancialNetwork((-1, 0), ((0, 1), (0, 0))), "negative-external"),
        (FinancialNetwork((0, 0), ((0, -1), (0, 0))), "negative-liability"),
        (FinancialNetwork((0, 0), ((1, 0), (0, 0))), "diagonal"),
        (FinancialNetwork((0,), ((0,),), alpha=F(3, 2)), "alpha-out-of-range"),
    ],
)
def test_violations_are_reported(net, kind):
    kinds = [v.kind for v in validate_network(net)]
    assert kind in kinds


def test_shape_mismatch_rejected():
    with pytest.raises(InvalidNetworkError):
        FinancialNetwork((0, 0), ((0, 1),))


def test_from_edges_merges_duplicates():
    net = FinancialNetwork.from_edges([0, 0], [(0, 1, 2), (0, 1, 3)])
    assert net.liabilities[0][1] == 5


def test_removal_of_fig8_edge():
    net = sc.fig8()
    before = net.total_liabilities[3]
    after = apply_removals(net, [(3, 0)])
    assert after.liabilities[3][0] == 0
    assert after.total_liabilities[3] == before - net.liabilities[3][0]
    assert net.liabilities[3][0] > 0  # original untouched


def test_removing_non_edge_is_rejected():
    net = sc.fig1()
    with pytest.raises(ProfileError):
        apply_removals(net, [(0, 1)])
    with pytest.raises(ProfileError):
        apply_removals(net, StrategyProfile.keep_all(net.n + 1))


def test_injection_into_fig1():
    net = sc.fig1()
    out = inject_externals(net, InjectionPlan(((2, F(3)),), F(3)))
    assert out.externals[2] == net.externals[2] + 3


def test_negative_or_out_of_range_injection():
    net = sc.fig1()
    with pytest.raises(PlanError):
        inject_externals(net, [(0, -1)])
    with pytest.raises(PlanError):
        inject_externals(net, [(net.n, 1)])


@given(networks(min_banks=2))
def test_removal_idempotent_and_commutative(net):
    edges = net.edges()
    a, b = edges[: len(edges) // 2], edges[len(edges) // 2 :]
    once = apply_removals(net, a)
    assert apply_removals(net, a + a) == once
    assert apply_removals(once, []) == once
    assert apply_removals(apply_removals(net, a), b) == apply_removals(apply_removals(net, b), a)


@given(networks())
def test_injection_additive(net):
    one = inject_externals(inject_externals(net, [(0, 1)]), [(0, 2)])
    assert one == inject_externals(net, [(0, 3)])


@given(networks())
def test_float_roundtrip_preserves_integers(net):
    assert net.to_float().to_exact() == net
