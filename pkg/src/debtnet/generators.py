"""Seeded random networks for property tests and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .network import FinancialNetwork

DEFAULT_SEED = 20240101
COST_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


def _amounts(rng: random.Random, n: int, max_amount: int, zero_prob: float) -> list[int]:
    return [0 if rng.random() < zero_prob else rng.randint(1, max_amount) for _ in range(n)]


def random_network(
    rng: random.Random,
    n: int,
    max_amount: int = 10,
    density: float = 0.4,
    alpha=1,
    beta=1,
    exact: bool = True,
) -> FinancialNetwork:
    """Each ordered pair carries an integer debt in ``1..max_amount`` with probability ``density``."""
    externals = _amounts(rng, n, max_amount, 0.4)
    edges = {}
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                edges[(i, j)] = rng.randint(1, max_amount)
    return FinancialNetwork.from_edges(externals, edges, alpha, beta, exact)


def random_tree(rng: random.Random, n: int, max_amount: int = 10, alpha=1, beta=1) -> FinancialNetwork:
    """Random labelled tree; every edge gets a random direction."""
    externals = _amounts(rng, n, max_amount, 0.4)
    edges = {}
    for child in range(1, n):
        parent = rng.randrange(child)
        pair = (child, parent) if rng.random() < 0.5 else (parent, child)
        edges[pair] = rng.randint(1, max_amount)
    return FinancialNetwork.from_edges(externals, edges, alpha, beta)


def random_cycle(rng: random.Random, n: int, max_amount: int = 10, alpha=1, beta=1) -> FinancialNetwork:
    """Directed cycle ``0 -> 1 -> ... -> n-1 -> 0``."""
    externals = _amounts(rng, n, max_amount, 0.4)
    edges = {(i, (i + 1) % n): rng.randint(1, max_amount) for i in range(n)}
    return FinancialNetwork.from_edges(externals, edges, alpha, beta)


def random_costs(rng: random.Random, grid: Sequence = COST_GRID) -> tuple:
    return rng.choice(grid), rng.choice(grid)
