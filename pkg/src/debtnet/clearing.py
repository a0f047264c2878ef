"""Clearing payments under proportional payments with default costs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _kernels_py, kernels
from .network import FinancialNetwork, _relative, require_valid
from .numeric import Scalar, TOL, convert, eq, lt, tol

PaymentMatrix = tuple[tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class ClearingResult:
    payments: PaymentMatrix
    assets: tuple[Scalar, ...]
    defaults: frozenset[int]
    liquidity: Scalar

    @property
    def outgoing(self) -> tuple[Scalar, ...]:
        return tuple(sum(row, 0 * self.liquidity) for row in self.payments)

    @property
    def n(self) -> int:
        return len(self.assets)


def _vectors(net: FinancialNetwork):
    return list(net.externals), _relative(net), list(net.total_liabilities)


def phi(net: FinancialNetwork, p: Sequence) -> list[Scalar]:
    """Apply the clearing map to a vector of outgoing totals."""
    require_valid(net)
    e, pi, L = _vectors(net)
    p = [convert(v, net.exact) for v in p]
    if net.exact:
        return _kernels_py.phi_vector(e, pi, L, net.alpha, net.beta, p, 0)
    return [float(v) for v in kernels.phi_vector_float(e, pi, L, net.alpha, net.beta, p, TOL)]


def result_from_totals(net: FinancialNetwork, totals: Sequence[Scalar]) -> ClearingResult:
    """Expand outgoing totals into a proportional payment matrix and summary."""
    pi = _relative(net)
    n = net.n
    zero = net.zero()
    payments = tuple(tuple(totals[i] * pi[i][j] if pi[i][j] else zero for j in range(n)) for i in range(n))
    assets = tuple(net.externals[i] + sum((payments[j][i] for j in range(n)), zero) for i in range(n))
    L = net.total_liabilities
    defaults = frozenset(i for i in range(n) if lt(assets[i], L[i], net.exact))
    liquidity = sum((v for row in payments for v in row), zero)
    return ClearingResult(payments, assets, defaults, liquidity)


def greatest_clearing_vector(net: FinancialNetwork) -> list[Scalar]:
    e, pi, L = _vectors(net)
    if net.exact:
        return _kernels_py.greatest_vector(e, pi, L, net.alpha, net.beta, 0)
    return [float(v) for v in kernels.greatest_vector_float(e, pi, L, net.alpha, net.beta, TOL)]


def greatest_clearing(net: FinancialNetwork) -> ClearingResult:
    """Pointwise-maximal clearing payments (fictitious default algorithm).

    Raises :class:`~debtnet.errors.ConvergenceError` if the float-mode
    Picard fallback exhausts its iteration cap.
    """
    require_valid(net)
    return result_from_totals(net, greatest_clearing_vector(net))


def least_clearing(net: FinancialNetwork) -> ClearingResult:
    """Pointwise-minimal clearing payments, i.e. the limit of iterating from zero."""
    require_valid(net)
    e, pi, L = _vectors(net)
    totals = _kernels_py.least_vector(e, pi, L, net.alpha, net.beta, tol(net.exact))
    return result_from_totals(net, totals)


@dataclass(frozen=True)
class ClearingViolation:
    kind: str
    bank: int
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind} at bank {self.bank}" + (f": {self.detail}" if self.detail else "")


def is_clearing(net: FinancialNetwork, P: Sequence[Sequence]) -> tuple[bool, list[ClearingViolation]]:
    """Check limited liability, absolute priority and proportionality of ``P``."""
    ex = net.exact
    n = net.n
    out: list[ClearingViolation] = []
    if len(P) != n or any(len(row) != n for row in P):
        return False, [ClearingViolation("shape", -1, f"expected {n}x{n} matrix")]
    P = [[convert(v, ex) for v in row] for row in P]
    L = net.total_liabilities
    zero = net.zero()
    for i in range(n):
        if P[i][i] != 0:
            out.append(ClearingViolation("diagonal", i))
        for j in range(n):
            if lt(P[i][j], zero, ex):
                out.append(ClearingViolation("negative-payment", i, f"to bank {j}"))
            elif lt(net.liabilities[i][j], P[i][j], ex):
                out.append(ClearingViolation("limited-liability", i, f"pays {P[i][j]} to bank {j}, owes {net.liabilities[i][j]}"))
    for i in range(n):
        inflow = sum((P[j][i] for j in range(n)), zero)
        assets = net.externals[i] + inflow
        paid = sum(P[i], zero)
        if not lt(assets, L[i], ex):
            if any(not eq(P[i][j], net.liabilities[i][j], ex) for j in range(n)):
                out.append(ClearingViolation("absolute-priority", i, "solvent bank does not pay in full"))
            continue
        due = net.alpha * net.externals[i] + net.beta * inflow
        if lt(due, paid, ex):
            out.append(ClearingViolation("limited-liability", i, f"pays {paid} but only {due} is available"))
        elif lt(paid, due, ex):
            out.append(ClearingViolation("absolute-priority", i, f"pays {paid} while {due} is available"))
        else:
            for j in range(n):
                if L[i] > 0 and not eq(P[i][j], paid * net.liabilities[i][j] / L[i], ex):
                    out.append(ClearingViolation("proportionality", i, f"payment to bank {j}"))
                    break
    return not out, out
