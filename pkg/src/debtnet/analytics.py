"""Liquidity measures and the threat index."""

from __future__ import annotations

import math
from typing import Sequence

from ._kernels_py import solve_dense
from .clearing import ClearingResult, greatest_clearing
from .network import FinancialNetwork, _relative
from .numeric import Scalar, tol


def liquidity(P: Sequence[Sequence[Scalar]]) -> Scalar:
    """Sum of all payments in the matrix."""
    total = 0
    for row in P:
        for v in row:
            total += v
    return total


def increased_liquidity(before: ClearingResult, after: ClearingResult) -> Scalar:
    if before.n != after.n:
        raise ValueError(f"dimension mismatch: {before.n} vs {after.n} banks")
    return after.liquidity - before.liquidity


def threat_index(net: FinancialNetwork, clearing: ClearingResult | None = None) -> tuple[Scalar, ...]:
    """Threat index of every bank.

    Solvent banks get 0; defaulting banks solve
    ``mu_i = 1 + sum_{j in D} pi_ij mu_j``. Raises
    :class:`~debtnet.errors.SingularSystemError` when the defaulting banks
    contain a closed cycle that pays only to itself.
    """
    if clearing is None:
        clearing = greatest_clearing(net)
    D = sorted(clearing.defaults)
    zero = net.zero()
    mu = [zero] * net.n
    if not D:
        return tuple(mu)
    pi = _relative(net)
    A = [[(1 if r == c else 0) - pi[i][j] for c, j in enumerate(D)] for r, i in enumerate(D)]
    b = [zero + 1] * len(D)
    x = solve_dense(A, b, tol(net.exact))
    for k, i in enumerate(D):
        mu[i] = x[k]
    return tuple(mu)


def extended_threat_index(net: FinancialNetwork, clearing: ClearingResult | None = None) -> tuple[Scalar | float, ...]:
    """Threat index that never fails: ``math.inf`` where the plain system is singular.

    A closed class of defaulting banks (all of its payments stay inside the
    class) recirculates any injection forever, so every defaulting bank that
    reaches one through defaulting creditors gets ``math.inf``. The remaining
    defaulting banks solve the usual system, which is then nonsingular.
    """
    if clearing is None:
        clearing = greatest_clearing(net)
    D = sorted(clearing.defaults)
    zero = net.zero()
    mu: list = [zero] * net.n
    if not D:
        return tuple(mu)
    pi = _relative(net)
    eps = tol(net.exact)
    succ = {i: [j for j in D if pi[i][j] > 0] for i in D}
    reach = {}
    for i in D:
        seen, stack = {i}, [i]
        while stack:
            for j in succ[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        reach[i] = seen
    closed = set()
    for i in D:
        cls = {j for j in reach[i] if i in reach[j]}
        if all(abs(sum((pi[k][j] for j in cls), zero) - 1) <= eps for k in cls):
            closed |= cls
    inf = {i for i in D if reach[i] & closed}
    rest = [i for i in D if i not in inf]
    if rest:
        A = [[(1 if r == c else 0) - pi[i][j] for c, j in enumerate(rest)] for r, i in enumerate(rest)]
        x = solve_dense(A, [zero + 1] * len(rest), eps)
        for k, i in enumerate(rest):
            mu[i] = x[k]
    for i in inf:
        mu[i] = math.inf
    return tuple(mu)
