"""Cash-injection planning.

Three planners share one output shape, an :class:`InjectionPlan` plus the
greatest clearing of the injected network:

* ``optimal_injections_lp`` - polynomial LP, valid without default costs;
* ``greedy_injections`` - repeatedly funds the bank with the highest threat index;
* ``optimal_injections_enumerative`` - exact search over which defaulting banks
  end up solvent, one LP per configuration, for any default costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from ._kernels_py import solve_dense
from .analytics import extended_threat_index
from .clearing import ClearingResult, greatest_clearing
from .errors import GuardError, InfeasibleError, PlanError, PolicyError, SingularSystemError
from .lp import LinearProgram
from .network import FinancialNetwork, InjectionPlan, _relative, inject_externals, require_valid
from .numeric import Scalar, convert, is_zero, lt, tol

MAX_ENUM_DEFAULTS = 20
BISECTION_STEPS = 200


@dataclass(frozen=True)
class GreedyRound:
    bank: int
    amount: Scalar
    threat: tuple[Scalar, ...]


@dataclass(frozen=True)
class GreedyTrace:
    rounds: tuple[GreedyRound, ...] = ()

    def __len__(self) -> int:
        return len(self.rounds)

    def __iter__(self) -> Iterator[GreedyRound]:
        return iter(self.rounds)


def _budget(net: FinancialNetwork, M) -> Scalar:
    M = convert(M, net.exact)
    if M < 0:
        raise PlanError(f"budget must be non-negative, got {M}")
    return M


def _plan(x, M) -> InjectionPlan:
    return InjectionPlan(tuple((i, v) for i, v in enumerate(x) if v > 0), M)


def _tiebreak_objectives(n: int) -> list:
    # spend as little as possible, then prefer low bank indices
    out = [("min", {i: 1 for i in range(n)})]
    out += [("max", {i: 1}) for i in range(n)]
    return out


def optimal_injections_lp(net: FinancialNetwork, M) -> tuple[InjectionPlan, ClearingResult]:
    """Liquidity-maximising injections when there are no default costs.

    Among optimal injection vectors the cheapest is taken, then the one that
    favours banks with smaller indices. The returned clearing is the greatest
    clearing of the injected network: it dominates the raw LP payments, which
    may leave money unpaid, and has the same total.
    """
    require_valid(net)
    if net.default_costs:
        raise PolicyError("the injection LP requires alpha = beta = 1")
    M = _budget(net, M)
    n = net.n
    edges = net.edges()
    L = net.total_liabilities
    var = {e: n + k for k, e in enumerate(edges)}
    lp = LinearProgram(n + len(edges), net.exact)
    lp.add({i: 1 for i in range(n)}, "<=", M)
    for (i, j), col in var.items():
        l = net.liabilities[i][j]
        share = l / L[i]
        lp.add({col: 1}, "<=", l)
        row = {col: 1, i: -share}
        for k in net.incoming(i):
            row[var[(k, i)]] = row.get(var[(k, i)], 0) - share
        lp.add(row, "<=", net.externals[i] * share)
    sol = lp.solve([("max", {col: 1 for col in var.values()})] + _tiebreak_objectives(n))
    x = sol[:n]
    return _plan(x, M), greatest_clearing(inject_externals(net, _plan(x, M)))


def _argmax_first(values, exact: bool) -> int:
    best = max(values)
    for i, v in enumerate(values):
        if not lt(v, best, exact):
            return i
    return 0


def min_shift_amount(net: FinancialNetwork, bank: int, clearing: ClearingResult | None = None) -> Scalar | float:
    """Smallest injection at ``bank`` that turns some defaulting bank solvent.

    Within the current default set, payments of defaulting banks move linearly
    with the injection, so each defaulting bank ``j`` has a break-even amount
    ``gap_j / slope_j``; the minimum is returned. Injecting at a solvent bank
    changes nothing and gives ``math.inf``.
    """
    if not 0 <= bank < net.n:
        raise IndexError(f"bank {bank} out of range")
    if clearing is None:
        clearing = greatest_clearing(net)
    D = sorted(clearing.defaults)
    if bank not in clearing.defaults:
        return math.inf
    pi = _relative(net)
    pos = {i: k for k, i in enumerate(D)}
    m = len(D)
    A = [[(1 if r == c else 0) - net.beta * pi[j][i] for c, j in enumerate(D)] for r, i in enumerate(D)]
    rhs = [net.zero()] * m
    rhs[pos[bank]] = net.alpha + net.zero()
    try:
        dp = solve_dense(A, rhs, tol(net.exact))
    except SingularSystemError:
        return _bisect_shift(net, bank, clearing)
    best = None
    L = net.total_liabilities
    for j in D:
        slope = (1 if j == bank else 0) + sum((pi[k][j] * dp[pos[k]] for k in D), net.zero())
        if slope <= tol(net.exact):
            continue
        t = (L[j] - clearing.assets[j]) / slope
        if t > 0 and (best is None or t < best):
            best = t
    return math.inf if best is None else best


def _bisect_shift(net: FinancialNetwork, bank: int, clearing: ClearingResult):
    before = clearing.defaults

    def changed(t) -> bool:
        return greatest_clearing(inject_externals(net, [(bank, t)])).defaults != before

    # the bank itself is solvent once its own gap is covered
    hi = net.total_liabilities[bank] - clearing.assets[bank]
    lo = net.zero()
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if changed(mid):
            hi = mid
        else:
            lo = mid
    return hi


def greedy_injections(net: FinancialNetwork, M) -> tuple[InjectionPlan, GreedyTrace, ClearingResult]:
    """Fund the highest-threat bank until the budget runs out or nobody defaults.

    Ties go to the smallest index. Each transfer is the smaller of the
    remaining budget and the amount that changes the default set; when the
    chosen bank cannot become solvent with what is left, the whole remainder
    is transferred anyway.
    """
    require_valid(net)
    M = _budget(net, M)
    remaining = M
    current = net
    transfers = []
    rounds = []
    result = greatest_clearing(current)
    while result.defaults and not is_zero(remaining, net.exact) and remaining > 0:
        mu = extended_threat_index(current, result)
        bank = _argmax_first(mu, net.exact)
        shift = min_shift_amount(current, bank, result)
        amount = remaining if shift == math.inf or shift >= remaining else shift
        transfers.append((bank, amount))
        rounds.append(GreedyRound(bank, amount, mu))
        remaining -= amount
        current = inject_externals(current, [(bank, amount)])
        result = greatest_clearing(current)
    return InjectionPlan(tuple(transfers), M), GreedyTrace(tuple(rounds)), result


# -- exact search over solvency configurations ------------------------------

def _configurations(items: list[int]) -> Iterator[tuple[int, ...]]:
    """Subsets in lexicographic (depth-first preorder) order, starting with ()."""
    yield ()
    stack = [((i,), k) for k, i in reversed(list(enumerate(items)))]
    while stack:
        subset, k = stack.pop()
        yield subset
        for kk in range(len(items) - 1, k, -1):
            stack.append((subset + (items[kk],), kk))


class _ConfigLP:
    """LP builder for a fixed split of banks into solvent and defaulting."""

    def __init__(self, net: FinancialNetwork):
        self.net = net
        self.n = net.n
        self.pi = _relative(net)
        self.L = net.total_liabilities

    def _inflow_terms(self, i, solvent, pcol):
        """Coefficients on p-variables and the constant part of bank i's inflow."""
        coeffs = {}
        const = self.net.zero()
        for k in range(self.n):
            w = self.pi[k][i]
            if w == 0:
                continue
            if k in solvent:
                const += w * self.L[k]
            else:
                coeffs[pcol[k]] = coeffs.get(pcol[k], 0) + w
        return coeffs, const

    def exact(self, solvent: set[int], budget=None) -> tuple[LinearProgram, dict[int, int]]:
        """Defaulting banks pay exactly their reduced assets and stay at or below L."""
        net = self.net
        D = [i for i in range(self.n) if i not in solvent]
        pcol = {i: self.n + k for k, i in enumerate(D)}
        lp = LinearProgram(self.n + len(D), net.exact)
        if budget is not None:
            lp.add({i: 1 for i in range(self.n)}, "<=", budget)
        for i in range(self.n):
            coeffs, const = self._inflow_terms(i, solvent, pcol)
            if i in solvent:
                row = dict(coeffs)
                row[i] = row.get(i, 0) + 1
                lp.add(row, ">=", self.L[i] - net.externals[i] - const)
            else:
                # p_i - alpha x_i - beta inflow = alpha e_i + beta const
                row = {k: -net.beta * v for k, v in coeffs.items()}
                row[pcol[i]] = row.get(pcol[i], 0) + 1
                row[i] = -net.alpha
                lp.add(row, "==", net.alpha * net.externals[i] + net.beta * const)
                cap = dict(coeffs)
                cap[i] = cap.get(i, 0) + 1
                lp.add(cap, "<=", self.L[i] - net.externals[i] - const)
        return lp, pcol

    def relaxed(self, solvent: set[int]) -> LinearProgram:
        """Optimistic bound: every other bank pays at most min(L, all its assets)."""
        net = self.net
        D = [i for i in range(self.n) if i not in solvent]
        pcol = {i: self.n + k for k, i in enumerate(D)}
        lp = LinearProgram(self.n + len(D), net.exact)
        for i in range(self.n):
            coeffs, const = self._inflow_terms(i, solvent, pcol)
            row = dict(coeffs)
            row[i] = row.get(i, 0) + 1
            if i in solvent:
                lp.add(row, ">=", self.L[i] - net.externals[i] - const)
            else:
                lp.add({pcol[i]: 1}, "<=", self.L[i])
                row = {k: -v for k, v in row.items()}
                row[pcol[i]] = row.get(pcol[i], 0) + 1
                lp.add(row, "<=", net.externals[i] + const)
        return lp


def _min_budget(lp: LinearProgram, n: int):
    try:
        x = lp.solve([("min", {i: 1 for i in range(n)})])
    except InfeasibleError:
        return None
    return sum(x[:n], convert(0, lp.exact))


def _initial_split(net: FinancialNetwork) -> tuple[ClearingResult, list[int]]:
    base = greatest_clearing(net)
    D0 = sorted(base.defaults)
    if len(D0) > MAX_ENUM_DEFAULTS:
        raise GuardError(f"{len(D0)} defaulting banks exceed the enumeration limit of {MAX_ENUM_DEFAULTS}")
    return base, D0


def _search(net: FinancialNetwork, D0: list[int], require: int | None, budget, visit) -> None:
    """Walk configurations in lexicographic order, pruning hopeless supersets.

    A configuration is skipped together with all its supersets when even the
    optimistic relaxation needs more than ``budget``.
    """
    builder = _ConfigLP(net)
    base_solvent = set(range(net.n)) - set(D0)
    pruned: list[frozenset] = []
    for T in _configurations(D0):
        Tset = frozenset(T)
        if any(p <= Tset for p in pruned):
            continue
        if T and budget is not None:
            need = _min_budget(builder.relaxed(base_solvent | Tset), net.n)
            if need is None or lt(budget, need, net.exact):
                pruned.append(Tset)
                continue
        if require is not None and require not in Tset:
            continue
        visit(T, builder.exact(base_solvent | Tset, budget))


def optimal_injections_enumerative(net: FinancialNetwork, M) -> tuple[InjectionPlan, ClearingResult]:
    """Exact liquidity-maximising injections under arbitrary default costs.

    Each configuration fixes which of the initially defaulting banks become
    solvent, which makes every clearing condition linear. The first (in
    lexicographic order) configuration reaching the best liquidity wins.
    """
    require_valid(net)
    M = _budget(net, M)
    base, D0 = _initial_split(net)
    n = net.n
    best = {"value": None, "x": None}

    def visit(T, built):
        lp, pcol = built
        solvent_total = sum((net.total_liabilities[i] for i in range(n) if i not in pcol), net.zero())
        objective = {c: 1 for c in pcol.values()}
        try:
            sol = lp.solve([("max", objective)] + _tiebreak_objectives(n))
        except InfeasibleError:
            return
        value = solvent_total + sum((sol[c] for c in pcol.values()), net.zero())
        if best["value"] is None or lt(best["value"], value, net.exact):
            best["value"], best["x"] = value, sol[:n]

    _search(net, D0, None, M, visit)
    if best["x"] is None:  # cannot happen: the empty configuration is always feasible
        raise InfeasibleError("no feasible solvency configuration")
    plan = _plan(best["x"], M)
    return plan, greatest_clearing(inject_externals(net, plan))


def min_budget_solvency(net: FinancialNetwork, target: int) -> Scalar:
    """Smallest total injection, optimally allocated, that makes ``target`` solvent."""
    require_valid(net)
    if not 0 <= target < net.n:
        raise IndexError(f"bank {target} out of range")
    base, D0 = _initial_split(net)
    if target not in base.defaults:
        return net.zero()
    best = {"value": None}

    def visit(T, built):
        lp, _ = built
        need = _min_budget(lp, net.n)
        if need is not None and (best["value"] is None or lt(need, best["value"], net.exact)):
            best["value"] = need

    _search(net, D0, target, None, visit)
    if best["value"] is None:
        raise InfeasibleError(f"bank {target} cannot be made solvent")
    return best["value"]
