"""Choosing debts to forgive.

The exact solver enumerates edge subsets. Only weakly connected components
that contain a defaulting bank are searched: a component where everybody pays
in full already carries the largest possible liquidity, and any removal there
costs liquidity or forgiven debt without helping solvency elsewhere.
Components are searched independently and their optima combined.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import kernels
from .clearing import ClearingResult, greatest_clearing
from .errors import GuardError, InfeasibleError
from .network import Edge, FinancialNetwork, apply_removals, require_valid
from .numeric import TOL, Scalar, lt

MAX_REMOVAL_EDGES = 22
SCREEN_MARGIN = 1e-6

KINDS = (
    "max-liquidity",
    "max-liquidity-all-solvent",
    "min-forgiven-all-solvent",
    "min-forgiven-target-solvent",
)


@dataclass(frozen=True)
class RemovalObjective:
    kind: str
    target: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown removal objective {self.kind!r}")
        if (self.kind == "min-forgiven-target-solvent") != (self.target is not None):
            raise ValueError(f"objective {self.kind!r} " + ("needs" if self.target is None else "takes no") + " target")

    @property
    def maximize(self) -> bool:
        return self.kind.startswith("max")


class RemovalResult(NamedTuple):
    removed: tuple[Edge, ...]
    clearing: ClearingResult
    value: Scalar


def _components(net: FinancialNetwork) -> list[list[int]]:
    parent = list(range(net.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in net.edges():
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(net.n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _subnetwork(net: FinancialNetwork, banks: list[int]) -> FinancialNetwork:
    return net.replace(
        externals=tuple(net.externals[i] for i in banks),
        liabilities=tuple(tuple(net.liabilities[i][j] for j in banks) for i in banks),
        labels=None,
    )


def _forgiven(net: FinancialNetwork, edges) -> Scalar:
    return sum((net.liabilities[i][j] for i, j in edges), net.zero())


def _score(net: FinancialNetwork, obj: RemovalObjective, removed, target: int | None):
    """Objective value of removing ``removed`` from ``net``, or None if infeasible."""
    res = greatest_clearing(apply_removals(net, removed))
    if obj.kind == "max-liquidity":
        return res.liquidity
    if obj.kind == "min-forgiven-target-solvent":
        return None if target in res.defaults else _forgiven(net, removed)
    if res.defaults:
        return None
    return res.liquidity if obj.maximize else _forgiven(net, removed)


def _float_scorer(net: FinancialNetwork, obj: RemovalObjective, target: int | None):
    """Fast float version of :func:`_score` on the compiled kernel."""
    e = np.array([float(v) for v in net.externals])
    base = np.array([[float(v) for v in row] for row in net.liabilities])
    alpha, beta = float(net.alpha), float(net.beta)

    def score(removed):
        lm = base.copy()
        forgiven = 0.0
        for i, j in removed:
            forgiven += lm[i, j]
            lm[i, j] = 0.0
        tot = lm.sum(axis=1)
        pi = np.divide(lm, tot[:, None], out=np.zeros_like(lm), where=tot[:, None] > 0)
        p = np.asarray(kernels.greatest_vector_float(e, pi, tot, alpha, beta, TOL), dtype=float)
        if obj.kind == "max-liquidity":
            return float(p.sum())
        bad = e + pi.T @ p < tot - TOL
        if obj.kind == "min-forgiven-target-solvent":
            return None if bad[target] else forgiven
        if bad.any():
            return None
        return float(p.sum()) if obj.maximize else forgiven

    return score


def _better(value, best, obj: RemovalObjective, exact: bool) -> bool:
    if best is None:
        return True
    return lt(best, value, exact) if obj.maximize else lt(value, best, exact)


def _search_component(net: FinancialNetwork, obj: RemovalObjective, target: int | None):
    edges = net.edges()
    if len(edges) > MAX_REMOVAL_EDGES:
        raise GuardError(f"{len(edges)} candidate edges exceed the enumeration limit of {MAX_REMOVAL_EDGES}")
    # by size, then lexicographically: the first optimum found wins ties
    subsets = [c for k in range(len(edges) + 1) for c in combinations(edges, k)]
    fast = _float_scorer(net, obj, target)
    scored = [(v, rank) for rank, c in enumerate(subsets) if (v := fast(c)) is not None]
    if not net.exact:
        best = best_rank = None
        for v, rank in scored:
            if _better(v, best, obj, False):
                best, best_rank = v, rank
        if best_rank is None:
            raise InfeasibleError(f"no edge removal satisfies {obj.kind}")
        return subsets[best_rank]
    # exact mode: float screening, then exact evaluation from the most
    # promising candidate until the float values fall clearly behind
    sign = -1 if obj.maximize else 1
    scored.sort(key=lambda t: (sign * t[0], t[1]))
    best = best_rank = None
    for v, rank in scored:
        if best is not None and sign * (v - float(best)) > SCREEN_MARGIN * (1 + abs(float(best))):
            break
        value = _score(net, obj, subsets[rank], target)
        if value is None:
            continue
        if _better(value, best, obj, True) or (value == best and rank < best_rank):
            best, best_rank = value, rank
    if best_rank is None:
        # float screening found nothing feasible; confirm exhaustively
        for rank, c in enumerate(subsets):
            value = _score(net, obj, c, target)
            if value is not None and _better(value, best, obj, True):
                best, best_rank = value, rank
    if best_rank is None:
        raise InfeasibleError(f"no edge removal satisfies {obj.kind}")
    return subsets[best_rank]


def optimal_removal(net: FinancialNetwork, obj: RemovalObjective) -> RemovalResult:
    """Best set of debts to forgive under ``obj``, using greatest clearing.

    Ties go to the set with the fewest edges, then the lexicographically
    smallest sorted edge list. For the forgiven-amount objectives the value is
    the total forgiven debt; otherwise it is the resulting liquidity.
    """
    require_valid(net)
    if obj.target is not None and not 0 <= obj.target < net.n:
        raise IndexError(f"bank {obj.target} out of range")
    base = greatest_clearing(net)
    removed: list[Edge] = []
    for banks in _components(net):
        if not base.defaults.intersection(banks):
            continue
        if obj.target is not None and obj.target not in banks:
            continue
        sub = _subnetwork(net, banks)
        local_target = banks.index(obj.target) if obj.target is not None else None
        for i, j in _search_component(sub, obj, local_target):
            removed.append((banks[i], banks[j]))
    removed.sort()
    result = greatest_clearing(apply_removals(net, removed))
    value = result.liquidity if obj.maximize else _forgiven(net, removed)
    return RemovalResult(tuple(removed), result, value)


def greedy_removal(net: FinancialNetwork) -> tuple[tuple[Edge, ...], ClearingResult]:
    """Delete, one at a time, the edge giving the largest liquidity gain.

    Stops when no single deletion strictly helps. Candidates are scanned in
    row-major order and the first best one is taken. Edges come back in the
    order they were removed.
    """
    require_valid(net)
    current = net
    result = greatest_clearing(net)
    removed: list[Edge] = []
    while True:
        best_edge = None
        best = result
        for edge in current.edges():
            trial = greatest_clearing(apply_removals(current, [edge]))
            if lt(best.liquidity, trial.liquidity, net.exact):
                best_edge, best = edge, trial
        if best_edge is None:
            return tuple(removed), result
        removed.append(best_edge)
        current = apply_removals(current, [best_edge])
        result = best
