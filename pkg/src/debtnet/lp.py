"""Dense two-phase simplex over exact rationals (or floats).

Bland's rule guarantees termination. Several objectives can be optimised
lexicographically: after each one the tableau is restricted to its optimal
face by freezing every nonbasic column with a strictly worsening reduced cost.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import InfeasibleError, UnboundedError
from .numeric import Scalar, TOL, convert

_SENSES = ("<=", ">=", "==")


class LinearProgram:
    """Variables are indexed ``0..nvars-1`` and are all non-negative."""

    def __init__(self, nvars: int, exact: bool = True):
        self.nvars = nvars
        self.exact = exact
        self.tol = 0 if exact else TOL
        self.rows: list[tuple[dict[int, Scalar], str, Scalar]] = []

    def add(self, coeffs: Mapping[int, object], sense: str, rhs) -> None:
        if sense not in _SENSES:
            raise ValueError(f"unknown constraint sense {sense!r}")
        c = {k: convert(v, self.exact) for k, v in coeffs.items() if v != 0}
        for k in c:
            if not 0 <= k < self.nvars:
                raise IndexError(f"variable {k} out of range")
        self.rows.append((c, sense, convert(rhs, self.exact)))

    # -- tableau helpers -------------------------------------------------
    def _pos(self, v) -> bool:
        return v > self.tol

    def _build(self):
        zero = convert(0, self.exact)
        one = zero + 1
        m = len(self.rows)
        nslack = sum(1 for _, s, _ in self.rows if s != "==")
        nart = sum(1 for c, s, r in self.rows if self._needs_artificial(s, r))
        ncols = self.nvars + nslack + nart
        T = []
        b = []
        basis = []
        artificial = set()
        slack_col = self.nvars
        art_col = self.nvars + nslack
        for coeffs, sense, rhs in self.rows:
            row = [zero] * ncols
            sign = 1
            if rhs < 0:
                sign = -1
                sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
            for k, v in coeffs.items():
                row[k] = v * sign
            rhs = rhs * sign
            if sense == "<=":
                row[slack_col] = one
                basis.append(slack_col)
                slack_col += 1
            else:
                if sense == ">=":
                    row[slack_col] = -one
                    slack_col += 1
                row[art_col] = one
                basis.append(art_col)
                artificial.add(art_col)
                art_col += 1
            T.append(row)
            b.append(rhs)
        assert len(T) == m
        return T, b, basis, artificial, ncols

    @staticmethod
    def _needs_artificial(sense, rhs) -> bool:
        if sense == "==":
            return True
        return (sense == ">=") == (rhs >= 0) if rhs != 0 else sense == ">="

    def _pivot(self, T, b, basis, r, c):
        row = T[r]
        pv = row[c]
        if pv != 1:
            T[r] = row = [v / pv for v in row]
            b[r] = b[r] / pv
        for i in range(len(T)):
            if i == r:
                continue
            f = T[i][c]
            if f == 0:
                continue
            Ti = T[i]
            for k, v in enumerate(row):
                if v != 0:
                    Ti[k] -= f * v
            b[i] -= f * b[r]
            if not self.exact:
                Ti[c] = 0.0
        basis[r] = c

    def _reduced(self, T, basis, cost, ncols):
        r = list(cost)
        for i, bi in enumerate(basis):
            cb = cost[bi]
            if cb == 0:
                continue
            Ti = T[i]
            for k in range(ncols):
                if Ti[k] != 0:
                    r[k] -= cb * Ti[k]
        return r

    def _optimize(self, T, b, basis, cost, allowed, ncols):
        while True:
            r = self._reduced(T, basis, cost, ncols)
            enter = next((j for j in range(ncols) if j in allowed and self._pos(r[j])), None)
            if enter is None:
                return r
            best = None
            leave = None
            for i in range(len(T)):
                a = T[i][enter]
                if self._pos(a):
                    ratio = b[i] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                raise UnboundedError("linear program is unbounded")
            self._pivot(T, b, basis, leave, enter)

    def solve(self, objectives: Sequence[tuple[str, Mapping[int, object]]]) -> list[Scalar]:
        """Optimise ``objectives`` lexicographically; each is ``("max"|"min", coeffs)``.

        Returns the values of the structural variables.
        """
        T, b, basis, artificial, ncols = self._build()
        zero = convert(0, self.exact)
        allowed = set(range(ncols))
        if artificial:
            cost = [zero] * ncols
            for j in artificial:
                cost[j] = zero - 1
            self._optimize(T, b, basis, cost, allowed, ncols)
            infeas = sum((b[i] for i, bi in enumerate(basis) if bi in artificial), zero)
            if self._pos(infeas):
                raise InfeasibleError("linear program is infeasible")
            allowed -= artificial
            i = 0
            while i < len(T):
                if basis[i] in artificial:
                    col = next((j for j in sorted(allowed) if abs(T[i][j]) > self.tol), None)
                    if col is None:
                        del T[i], b[i], basis[i]
                        continue
                    self._pivot(T, b, basis, i, col)
                i += 1
        for sense, coeffs in objectives:
            cost = [zero] * ncols
            for k, v in coeffs.items():
                v = convert(v, self.exact)
                cost[k] = v if sense == "max" else -v
            r = self._optimize(T, b, basis, cost, allowed, ncols)
            basic = set(basis)
            allowed = {j for j in allowed if j in basic or not r[j] < -self.tol}
        x = [zero] * self.nvars
        for i, bi in enumerate(basis):
            if bi < self.nvars:
                x[bi] = b[i]
        if not self.exact:
            x = [0.0 if abs(v) < 1e-12 else v for v in x]
        return x
