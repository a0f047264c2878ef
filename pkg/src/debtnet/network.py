"""Financial network data model and network transformations.

Banks are indexed ``0..n-1``. ``liabilities[i][j]`` is the debt of bank ``i``
(borrower) towards bank ``j`` (lender). The default-cost pair ``(alpha, beta)``
gives the fraction of external assets and of incoming payments that a bank in
default can still pass on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidNetworkError, PlanError, ProfileError
from .numeric import Scalar, convert

Edge = tuple[int, int]


@dataclass(frozen=True)
class Violation:
    """One broken network invariant, as reported by :func:`validate_network`."""

    kind: str
    bank: int | None = None
    other: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        where = ""
        if self.bank is not None:
            where = f" at bank {self.bank}" if self.other is None else f" at ({self.bank}, {self.other})"
        return f"{self.kind}{where}" + (f": {self.detail}" if self.detail else "")


def default_label(i: int) -> str:
    return f"v{i + 1}"


@dataclass(frozen=True)
class FinancialNetwork:
    """Immutable financial network.

    Values are coerced on construction to ``Fraction`` (``exact=True``) or
    ``float``. Construction never rejects a network; use
    :func:`validate_network` to list invariant violations.
    """

    externals: tuple[Scalar, ...]
    liabilities: tuple[tuple[Scalar, ...], ...]
    alpha: Scalar = 1
    beta: Scalar = 1
    exact: bool = True
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ex = self.exact
        n = len(self.externals)
        externals = tuple(convert(v, ex) for v in self.externals)
        rows = tuple(tuple(convert(v, ex) for v in row) for row in self.liabilities)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidNetworkError([Violation("shape", detail=f"liability matrix must be {n}x{n}")])
        object.__setattr__(self, "externals", externals)
        object.__setattr__(self, "liabilities", rows)
        object.__setattr__(self, "alpha", convert(self.alpha, ex))
        object.__setattr__(self, "beta", convert(self.beta, ex))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise InvalidNetworkError([Violation("shape", detail="one label per bank required")])
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_totals", tuple(sum(r, convert(0, ex)) for r in rows))

    @classmethod
    def from_edges(
        cls,
        externals: Sequence,
        edges: Mapping[Edge, object] | Iterable[tuple[int, int, object]],
        alpha=1,
        beta=1,
        exact: bool = True,
        labels: Sequence[str] | None = None,
    ) -> "FinancialNetwork":
        """Build a network from sparse ``{(borrower, lender): amount}`` data.

        Repeated pairs are merged by summation.
        """
        n = len(externals)
        zero = convert(0, exact)
        matrix = [[zero] * n for _ in range(n)]
        items = edges.items() if isinstance(edges, Mapping) else ((((i, j), a)) for i, j, a in edges)
        for (i, j), amount in items:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} banks")
            matrix[i][j] += convert(amount, exact)
        return cls(tuple(externals), tuple(map(tuple, matrix)), alpha, beta, exact, labels)

    @property
    def n(self) -> int:
        return len(self.externals)

    @property
    def total_liabilities(self) -> tuple[Scalar, ...]:
        """Row sums ``L_i``."""
        return self._totals  # type: ignore[attr-defined]

    @property
    def default_costs(self) -> bool:
        return not (self.alpha == 1 and self.beta == 1)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else default_label(i)

    def bank_labels(self) -> tuple[str, ...]:
        return tuple(self.label(i) for i in range(self.n))

    def zero(self) -> Scalar:
        return convert(0, self.exact)

    def edges(self) -> list[Edge]:
        """All pairs with positive liability, in row-major order."""
        return [(i, j) for i, row in enumerate(self.liabilities) for j, v in enumerate(row) if v > 0]

    def incoming(self, j: int) -> tuple[int, ...]:
        """Borrowers owing money to ``j``, ascending."""
        return tuple(i for i in range(self.n) if self.liabilities[i][j] > 0)

    def outgoing(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.liabilities[i]) if v > 0)

    def replace(self, **changes) -> "FinancialNetwork":
        fields = dict(
            externals=self.externals,
            liabilities=self.liabilities,
            alpha=self.alpha,
            beta=self.beta,
            exact=self.exact,
            labels=self.labels,
        )
        fields.update(changes)
        return FinancialNetwork(**fields)

    def to_float(self) -> "FinancialNetwork":
        return self if not self.exact else self.replace(exact=False)

    def to_exact(self) -> "FinancialNetwork":
        return self if self.exact else self.replace(exact=True)

    def scaled(self, factor) -> "FinancialNetwork":
        """Multiply every external asset and liability by ``factor``."""
        c = convert(factor, self.exact)
        return self.replace(
            externals=tuple(c * e for e in self.externals),
            liabilities=tuple(tuple(c * v for v in row) for row in self.liabilities),
        )


def _finite(v) -> bool:
    return math.isfinite(v) if isinstance(v, float) else True


def validate_network(net: FinancialNetwork) -> list[Violation]:
    """Return one :class:`Violation` per broken invariant (empty when valid)."""
    out: list[Violation] = []
    for i, e in enumerate(net.externals):
        if not _finite(e):
            out.append(Violation("non-finite-external", i))
        elif e < 0:
            out.append(Violation("negative-external", i, detail=str(e)))
    for i, row in enumerate(net.liabilities):
        for j, v in enumerate(row):
            if not _finite(v):
                out.append(Violation("non-finite-liability", i, j))
            elif i == j and v != 0:
                out.append(Violation("diagonal", i, detail=f"l_ii = {v}"))
            elif v < 0:
                out.append(Violation("negative-liability", i, j, str(v)))
    for name in ("alpha", "beta"):
        value = getattr(net, name)
        if not (0 <= value <= 1):
            out.append(Violation(f"{name}-out-of-range", detail=str(value)))
    return out


def require_valid(net: FinancialNetwork) -> None:
    violations = validate_network(net)
    if violations:
        raise InvalidNetworkError(violations)


def relative_liabilities(net: FinancialNetwork) -> list[list[Scalar]]:
    """Relative liability matrix: ``l_ij / L_i``, or a zero row when ``L_i = 0``."""
    require_valid(net)
    return _relative(net)


def _relative(net: FinancialNetwork) -> list[list[Scalar]]:
    zero = net.zero()
    out = []
    for row, total in zip(net.liabilities, net.total_liabilities):
        if total > 0:
            out.append([v / total for v in row])
        else:
            out.append([zero] * len(row))
    return out


@dataclass(frozen=True)
class StrategyProfile:
    """Per lender ``j``, the frozenset of borrowers ``i`` whose edge ``(i, j)`` is removed."""

    removed: tuple[frozenset[int], ...]

    @classmethod
    def keep_all(cls, n: int) -> "StrategyProfile":
        return cls(tuple(frozenset() for _ in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "StrategyProfile":
        removed: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            removed[j].add(i)
        return cls(tuple(frozenset(s) for s in removed))

    @property
    def n(self) -> int:
        return len(self.removed)

    def removed_edges(self) -> list[Edge]:
        return sorted((i, j) for j, s in enumerate(self.removed) for i in s)

    def with_strategy(self, bank: int, strategy: Iterable[int]) -> "StrategyProfile":
        removed = list(self.removed)
        removed[bank] = frozenset(strategy)
        return StrategyProfile(tuple(removed))

    def sort_key(self) -> tuple:
        edges = self.removed_edges()
        return (len(edges), edges)

    def validate_for(self, net: FinancialNetwork) -> None:
        if self.n != net.n:
            raise ProfileError(f"profile has {self.n} banks, network has {net.n}")
        for i, j in self.removed_edges():
            if not (0 <= i < net.n) or net.liabilities[i][j] <= 0:
                raise ProfileError(f"({i}, {j}) is not an edge of the network")


def apply_removals(net: FinancialNetwork, profile: StrategyProfile | Iterable[Edge]) -> FinancialNetwork:
    """Zero out every removed liability; everything else is unchanged."""
    if not isinstance(profile, StrategyProfile):
        profile = StrategyProfile.from_edges(net.n, profile)
    profile.validate_for(net)
    edges = profile.removed_edges()
    if not edges:
        return net
    rows = [list(r) for r in net.liabilities]
    zero = net.zero()
    for i, j in edges:
        rows[i][j] = zero
    return net.replace(liabilities=tuple(map(tuple, rows)))


@dataclass(frozen=True)
class InjectionPlan:
    """Ordered cash transfers ``(bank, amount)`` under a total budget."""

    transfers: tuple[tuple[int, Scalar], ...] = ()
    budget: Scalar | None = None

    @property
    def total(self):
        return sum((a for _, a in self.transfers), 0)

    def per_bank(self, n: int, exact: bool = True) -> list[Scalar]:
        out = [convert(0, exact)] * n
        for bank, amount in self.transfers:
            out[bank] += convert(amount, exact)
        return out


def inject_externals(net: FinancialNetwork, plan: InjectionPlan | Sequence[tuple[int, object]]) -> FinancialNetwork:
    """Add every transfer of ``plan`` to the recipient's external assets."""
    transfers = plan.transfers if isinstance(plan, InjectionPlan) else tuple(plan)
    if not transfers:
        return net
    externals = list(net.externals)
    for bank, amount in transfers:
        if not (0 <= bank < net.n):
            raise PlanError(f"bank {bank} out of range")
        value = convert(amount, net.exact)
        if value < 0:
            raise PlanError(f"negative transfer {value} to bank {bank}")
        externals[bank] += value
    return net.replace(externals=tuple(externals))
