"""Named example networks and reduction gadgets.

Every constructor returns a validated :class:`FinancialNetwork` in exact mode.
The registry attaches the facts each instance is expected to satisfy, tagged
``reported`` (stated with the instance) or ``derived`` (worked out here and
cross-checked by an independent computation). :func:`verify` evaluates them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .errors import DebtNetError
from .network import FinancialNetwork, StrategyProfile, require_valid
from .numeric import to_exact

F = Fraction


class ScenarioError(DebtNetError, ValueError):
    """Bad scenario name or parameters."""


def _net(externals, edges, alpha=1, beta=1, labels=None) -> FinancialNetwork:
    net = FinancialNetwork.from_edges(externals, edges, alpha, beta, True, labels)
    require_valid(net)
    return net


def fig1() -> FinancialNetwork:
    """Five banks; v2, v3 and v4 default under greatest clearing."""
    return _net(
        [0, F("1.2"), F("2.2"), 2, 0],
        {(1, 0): 6, (2, 1): 4, (3, 2): 2, (3, 4): 2},
    )


def fig5(eps="1/100") -> FinancialNetwork:
    """Six banks with no pure equilibrium under greedy injections of 2 - 3 eps."""
    eps = to_exact(eps)
    if not 0 < eps < F(1, 3):
        raise ScenarioError(f"eps must lie in (0, 1/3), got {eps}")
    return _net(
        [eps, eps, eps, 0, 0, 0],
        {(0, 3): 2, (1, 0): 1, (1, 4): 1, (2, 1): 1, (2, 5): 1},
    )


def fig6(Z=100) -> FinancialNetwork:
    Z = to_exact(Z)
    if Z < 3:
        raise ScenarioError(f"Z must be at least 3, got {Z}")
    return _net([1, 0, 0], {(0, 1): Z, (0, 2): Z, (1, 0): Z})


def fig7(n=6) -> FinancialNetwork:
    """Chain v_n -> ... -> v_1 of unit debts, no external assets."""
    n = _count(n, 3)
    return _net([0] * n, {(i, i - 1): 1 for i in range(1, n)})


def fig8() -> FinancialNetwork:
    """Five banks, alpha = beta = 1/4; best responses cycle through four states."""
    return _net(
        [0, 0, 0, 8, 0],
        {(3, 0): 1, (3, 1): 1, (3, 2): 4, (3, 4): 4, (2, 1): 4, (4, 0): F(8, 9)},
        F(1, 4),
        F(1, 4),
    )


def fig9(n=6, eps="1/10") -> FinancialNetwork:
    """v1 owes 1 to v2 and to v_n; a unit chain runs v2 -> ... -> v_n."""
    n = _count(n, 3)
    eps = to_exact(eps)
    if not 0 < eps < 1:
        raise ScenarioError(f"eps must lie in (0, 1), got {eps}")
    edges = {(0, 1): 1, (0, n - 1): 1}
    for i in range(1, n - 1):
        edges[(i, i + 1)] = 1
    return _net([1] + [0] * (n - 1), edges, eps, eps)


def greedy_family(mu_v=2, t1=1) -> FinancialNetwork:
    """Instance on which greedy injection reaches only about 3/4 of the optimum.

    Banks are ``u, v, w, z, v1 .. v_c`` with ``c = ceil(mu_v)``; ``v`` comes
    before ``w`` so it wins the threat-index tie.
    """
    mu = to_exact(mu_v)
    t1 = to_exact(t1)
    if mu < 2:
        raise ScenarioError(f"mu_v must be at least 2, got {mu}")
    if t1 <= 0:
        raise ScenarioError(f"t1 must be positive, got {t1}")
    fl, cl = math.floor(mu), math.ceil(mu)
    a = t1 if mu == fl else (mu - fl) * t1
    b = t1 - a
    u, v, w, z = 0, 1, 2, 3
    path = [v] + [4 + k for k in range(cl)]
    edges = {}
    for k in range(cl):
        edges[(path[k], path[k + 1])] = t1 if k < fl - 1 else a
    if b:
        edges[(path[fl - 1], u)] = b
    edges[(w, v)] = t1
    edges[(w, z)] = t1 / (mu - 1)
    labels = ["u", "v", "w", "z"] + [f"v{k + 1}" for k in range(cl)]
    return _net([0] * (cl + 4), edges, labels=labels)


def gadget_rxc3(X: Sequence[Hashable], C: Sequence[Sequence[Hashable]], Z=1000) -> FinancialNetwork:
    """Banks ``s_1..s_m`` (one per triple), ``t_1..t_3k`` (one per element), then S and T."""
    X = list(X)
    if len(set(X)) != len(X) or not X or len(X) % 3:
        raise ScenarioError("X must hold 3k distinct elements")
    if len(C) != len(X):
        raise ScenarioError("RXC3 needs |C| = |X|")
    pos = {x: k for k, x in enumerate(X)}
    counts: Counter = Counter()
    for c in C:
        if len(set(c)) != 3 or any(x not in pos for x in c):
            raise ScenarioError(f"{tuple(c)} is not a triple of distinct elements of X")
        counts.update(c)
    if any(counts[x] != 3 for x in X):
        raise ScenarioError("every element must occur in exactly three triples")
    Z = to_exact(Z)
    m, k = len(C), len(X)
    S, T = m + k, m + k + 1
    edges = {}
    for i, c in enumerate(C):
        for x in c:
            edges[(i, m + pos[x])] = 1
        edges[(i, S)] = Z
    for j in range(k):
        edges[(m + j, T)] = 1
    labels = [f"s{i + 1}" for i in range(m)] + [f"t{j + 1}" for j in range(k)] + ["S", "T"]
    return _net([4] * m + [0] * (k + 2), edges, labels=labels)


def _positive_ints(X) -> list[int]:
    X = [to_exact(x) for x in X]
    if not X or any(x <= 0 or x.denominator != 1 for x in X):
        raise ScenarioError("X must be a non-empty list of positive integers")
    return [int(x) for x in X]


def gadget_partition(X: Sequence[int], alpha="1/2", beta=1) -> FinancialNetwork:
    """Banks ``v_1..v_k`` then S, T and L."""
    X = _positive_ints(X)
    alpha, beta = to_exact(alpha), to_exact(beta)
    k, total = len(X), sum(X)
    S, T, Lb = k, k + 1, k + 2
    edges = {}
    for i, x in enumerate(X):
        edges[(i, S)] = F(4 * x, 3)
        edges[(i, T)] = F(2 * x, 3)
    edges[(S, Lb)] = (2 + alpha) / 3 * total
    labels = [f"v{i + 1}" for i in range(k)] + ["S", "T", "L"]
    return _net(X + [0, 0, 0], edges, alpha, beta, labels)


def gadget_subset_sum(X: Sequence[int], t, alpha="1/2", beta="1/2") -> FinancialNetwork:
    """``v0`` holds ``t`` and owes ``x_i`` to ``v_i``."""
    X = _positive_ints(X)
    t = to_exact(t)
    if t < 0:
        raise ScenarioError("target must be non-negative")
    edges = {(0, i + 1): x for i, x in enumerate(X)}
    labels = ["v0"] + [f"v{i + 1}" for i in range(len(X))]
    return _net([t] + [0] * len(X), edges, alpha, beta, labels)


def gadget_x3c(X: Sequence[Hashable], C: Sequence[Sequence[Hashable]]) -> FinancialNetwork:
    """Banks ``u_1..u_m`` (one per triple), ``t_1..t_3k``, then T. No external assets."""
    X = list(X)
    if len(set(X)) != len(X) or not X or len(X) % 3:
        raise ScenarioError("X must hold 3k distinct elements")
    pos = {x: k for k, x in enumerate(X)}
    m, k = len(C), len(X)
    T = m + k
    edges = {}
    for i, c in enumerate(C):
        if len(set(c)) != 3 or any(x not in pos for x in c):
            raise ScenarioError(f"{tuple(c)} is not a triple of distinct elements of X")
        for x in c:
            edges[(i, m + pos[x])] = 1
    for j in range(k):
        edges[(m + j, T)] = 1
    labels = [f"u{i + 1}" for i in range(m)] + [f"t{j + 1}" for j in range(k)] + ["T"]
    return _net([0] * (m + k + 1), edges, labels=labels)


def gadget_ne_hardness(X: Sequence[int]) -> FinancialNetwork:
    """Banks ``v_1..v_k`` then S and T, with alpha = beta = 1 / sum(X)."""
    X = _positive_ints(X)
    k, total = len(X), sum(X)
    S, T = k, k + 1
    edges = {}
    for i, x in enumerate(X):
        edges[(i, S)] = x
        edges[(i, T)] = x
    edges[(T, S)] = F(total, 2) + F(1, 4)
    c = F(1, total)
    labels = [f"v{i + 1}" for i in range(k)] + ["S", "T"]
    return _net(X + [0, 0], edges, c, c, labels)


def _count(n, least: int) -> int:
    value = to_exact(n)
    if value.denominator != 1 or value < least:
        raise ScenarioError(f"n must be an integer >= {least}, got {n}")
    return int(value)


# -- registry ---------------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    description: str
    source: str  # "reported" or "derived"
    check: Callable[[FinancialNetwork], bool]


@dataclass(frozen=True)
class ScenarioDescriptor:
    name: str
    build: Callable[..., FinancialNetwork]
    defaults: dict = field(default_factory=dict)
    facts: tuple[Fact, ...] = ()
    summary: str = ""


def _profile(net: FinancialNetwork, edges) -> StrategyProfile:
    return StrategyProfile.from_edges(net.n, edges)


def _fig1_facts():
    from .analytics import threat_index
    from .bailout import greedy_injections, min_shift_amount, optimal_injections_lp
    from .clearing import greatest_clearing

    def payments(net):
        r = greatest_clearing(net)
        P = r.payments
        return (P[1][0], P[2][1], P[3][2], P[3][4]) == (F("4.4"), F("3.2"), 1, 1) and r.defaults == {1, 2, 3}

    def greedy(net):
        plan, _, res = greedy_injections(net, F("1.6"))
        return plan.transfers == ((2, F("0.8")), (1, F("0.8"))) and res.liquidity - greatest_clearing(net).liquidity == F("2.4")

    def lp(net):
        plan, res = optimal_injections_lp(net, F("1.6"))
        return plan.transfers == ((3, F("1.6")),) and res.liquidity - greatest_clearing(net).liquidity == F("3.2")

    return (
        Fact("greatest clearing pays 4.4, 3.2, 1, 1; v2, v3, v4 default", "reported", payments),
        Fact("threat indices (0, 1, 2, 2, 0)", "reported", lambda n: threat_index(n) == (0, 1, 2, 2, 0)),
        Fact("greedy with M = 1.6 sends 0.8 to v3 then 0.8 to v2, gain 2.4", "reported", greedy),
        Fact("optimal injection with M = 1.6 puts everything on v4, gain 3.2", "reported", lp),
        Fact("v3 becomes solvent after an injection of 0.8", "reported", lambda n: min_shift_amount(n, 2) == F("0.8")),
    )


def _fig5_facts():
    from .analytics import threat_index
    from .games import enumerate_equilibria, utilities

    def greedy(net):
        eps = net.externals[0]
        return f"greedy:{2 - 3 * eps}"

    def case_a(net):
        eps = net.externals[0]
        a = utilities(net, StrategyProfile.keep_all(6), greedy(net))
        return a[0] == F(1, 2) + eps and a[1] == 1

    def case_b(net):
        eps = net.externals[0]
        return utilities(net, _profile(net, [(2, 1)]), greedy(net))[1] == 2 - 2 * eps

    return (
        Fact("threat indices of v1, v2, v3 are 1, 3/2, 7/4", "reported", lambda n: threat_index(n)[:3] == (1, F(3, 2), F(7, 4))),
        Fact("keep-all under greedy: a1 = 1/2 + eps, a2 = 1", "reported", case_a),
        Fact("v2 forgiving v3: a2 = 2 - 2 eps", "reported", case_b),
        Fact("no pure equilibrium under greedy injections", "reported", lambda n: enumerate_equilibria(n, greedy(n)) == ()),
    )


def _fig6_facts():
    from .clearing import greatest_clearing

    return (
        Fact("keep-all liquidity is 3", "reported", lambda n: greatest_clearing(n).liquidity == 3),
        Fact(
            "once v3 forgives v1 liquidity is 2Z",
            "reported",
            lambda n: greatest_clearing(n.replace(liabilities=_drop(n, (0, 2)))).liquidity == 2 * n.liabilities[0][1],
        ),
    )


def _drop(net, edge):
    rows = [list(r) for r in net.liabilities]
    rows[edge[0]][edge[1]] = 0
    return tuple(map(tuple, rows))


def _fig7_facts():
    from .analytics import threat_index
    from .bailout import greedy_injections
    from .games import Game, PolicySpec

    def keep_all(net):
        return greedy_injections(net, 1)[2].liquidity == net.n - 1

    def sparse_eq(net):
        game = Game(net, PolicySpec.parse("greedy:1"))
        prof = _profile(net, [(i + 1, i) for i in range(1, net.n - 1)])
        return game.is_equilibrium(prof)[0] and game.outcome(prof).liquidity == 1

    return (
        Fact("keep-all with greedy budget 1 gives liquidity n - 1", "reported", keep_all),
        Fact("keeping only (v2, v1) is an equilibrium with liquidity 1", "reported", sparse_eq),
        Fact("threat index of v_n is n - 1", "derived", lambda n: threat_index(n)[-1] == n.n - 1),
    )


def _fig8_facts():
    from .clearing import greatest_clearing
    from .games import Cycle, br_dynamics, enumerate_equilibria, utilities

    A = []
    B = [(3, 0)]
    C = [(3, 0), (3, 1)]
    D = [(3, 1)]
    expected = {
        "A": (A, F(2, 5), F(2, 5)),
        "B": (B, F(8, 9), F(4, 9)),
        "C": (C, F(8, 9), 4),
        "D": (D, F(10, 9), F(2, 9)),
    }

    def cases(net):
        for edges, u1, u2 in expected.values():
            a = utilities(net, _profile(net, edges))
            if a[:2] != (u1, u2):
                return False
        return True

    def cycle(net):
        out = br_dynamics(net)
        return isinstance(out, Cycle) and [p.removed_edges() for p in out.profiles] == [sorted(e) for e, _, _ in expected.values()]

    def v4(net):
        P = greatest_clearing(net).payments
        return P[3] == (F(1, 5), F(1, 5), F(4, 5), 0, F(4, 5)) and P[4][0] == P[2][1] == F(1, 5)

    return (
        Fact("keep-all: v4 pays (1/5, 1/5, 4/5, 0, 4/5), p51 = p32 = 1/5", "reported", v4),
        Fact("utilities of v1 and v2 in states A-D", "reported", cases),
        Fact("best responses cycle A -> B -> C -> D", "reported", cycle),
        Fact("no pure equilibrium", "reported", lambda n: enumerate_equilibria(n) == ()),
    )


def _fig9_facts():
    from .games import quality_report

    def report(net):
        r = quality_report(net)
        eps = net.alpha
        return r.f_original < eps / (1 - eps) and r.f_best_eq == net.n - 1

    return (Fact("keep-all liquidity below eps/(1 - eps); best equilibrium liquidity n - 1", "reported", report),)


def _greedy_family_facts():
    from .analytics import threat_index

    return (
        Fact("v and w share the top threat index mu_v", "reported", lambda n: threat_index(n)[1] == threat_index(n)[2] == max(threat_index(n))),
    )


def _partition_facts():
    from .bailout import optimal_injections_enumerative

    def value(net):
        total = sum(net.externals)
        _, res = optimal_injections_enumerative(net, total / 2)
        return res.liquidity == (5 * net.alpha + 10) / 6 * total

    return (Fact("yes-instance with budget sum/2 reaches (5 alpha + 10)/6 * sum", "reported", value),)


def _rxc3_facts():
    from .debt_relief import RemovalObjective, optimal_removal

    def value(net):
        k = (net.n - 2) // 6
        return optimal_removal(net, RemovalObjective("max-liquidity")).value == 14 * k

    return (Fact("a yes-instance admits removals reaching liquidity 14k", "reported", value),)


def _subset_sum_facts():
    from .debt_relief import RemovalObjective, optimal_removal

    def value(net):
        r = optimal_removal(net, RemovalObjective("min-forgiven-target-solvent", 0))
        return r.value == sum(net.liabilities[0]) - net.externals[0]

    return (Fact("a yes-instance makes v0 solvent by forgiving exactly sum(X) - t", "derived", value),)


SCENARIOS: dict[str, ScenarioDescriptor] = {}


def _register(name, build, defaults=None, facts=(), summary=""):
    SCENARIOS[name] = ScenarioDescriptor(name, build, dict(defaults or {}), facts, summary)


_register("fig1", fig1, {}, _fig1_facts(), "five-bank clearing, threat index and injection example")
_register("fig5", fig5, {"eps": "1/100"}, _fig5_facts(), "no equilibrium under greedy injections")
_register("fig6", fig6, {"Z": "100"}, _fig6_facts(), "unbounded price of stability")
_register("fig7", fig7, {"n": "6"}, _fig7_facts(), "chain with effect of anarchy n - 1")
_register("fig8", fig8, {}, _fig8_facts(), "no equilibrium with default costs")
_register("fig9", fig9, {"n": "6", "eps": "1/10"}, _fig9_facts(), "effect of stability close to 0")
_register("greedy_family", greedy_family, {"mu_v": "2", "t1": "1"}, _greedy_family_facts(), "greedy reaches 3/4 of optimum")
_register("gadget_rxc3", gadget_rxc3, {"X": "1,2,3", "C": "1 2 3;1 2 3;1 2 3", "Z": "1000"}, _rxc3_facts(), "debt removal hardness")
_register("gadget_partition", gadget_partition, {"X": "1,2,3,4", "alpha": "1/2", "beta": "1"}, _partition_facts(), "injection hardness with default costs")
_register("gadget_subset_sum", gadget_subset_sum, {"X": "2,3,5", "t": "5", "alpha": "1/2", "beta": "1/2"}, _subset_sum_facts(), "debt removal hardness with default costs")
_register("gadget_x3c", gadget_x3c, {"X": "1,2,3", "C": "1 2 3"}, (), "integer-payment injection hardness")
_register("gadget_ne_hardness", gadget_ne_hardness, {"X": "1,2"}, (), "best-response hardness")


def _parse_param(key: str, value):
    if not isinstance(value, str):
        return value
    if key == "X":
        return [p.strip() for p in value.split(",") if p.strip()]
    if key == "C":
        return [tuple(t.split()) for t in value.split(";") if t.strip()]
    return value


def build(name: str, **params) -> FinancialNetwork:
    """Build scenario ``name``; string parameters use the CLI syntax (``X=1,2,3``, ``C=1 2 3;4 5 6``)."""
    if name not in SCENARIOS:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    desc = SCENARIOS[name]
    unknown = set(params) - set(desc.defaults)
    if unknown:
        raise ScenarioError(f"scenario {name!r} has no parameter(s) {', '.join(sorted(unknown))}")
    merged = {**desc.defaults, **params}
    args = {k: _parse_param(k, v) for k, v in merged.items()}
    try:
        return desc.build(**args)
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"bad parameters for {name!r}: {exc}") from exc


def verify(name: str, **params) -> list[str]:
    """Descriptions of the facts of ``name`` that do not hold (empty when all do)."""
    net = build(name, **params)
    return [f.description for f in SCENARIOS[name].facts if not f.check(net)]
