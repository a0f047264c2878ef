"""Independent reference computations used by the tests.

Deliberately naive: brute force over default sets, edge subsets and LP
vertices, written without reusing package internals.
"""

from fractions import Fraction
from itertools import combinations, product


def gauss_jordan(A, b):
    """Exact solve; returns None when singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [v / pv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def _pi(lmat):
    out = []
    for row in lmat:
        tot = sum(row)
        out.append([Fraction(v) / tot if tot else Fraction(0) for v in row])
    return out


def fixed_points(e, lmat, alpha, beta):
    """Every clearing vector (outgoing totals) obtainable from a default-set guess."""
    n = len(e)
    L = [sum(map(Fraction, row)) for row in lmat]
    pi = _pi(lmat)
    found = []
    candidates = [i for i in range(n) if L[i] > 0]
    for mask in product((0, 1), repeat=len(candidates)):
        D = [i for i, m in zip(candidates, mask) if m]
        p = [Fraction(L[i]) for i in range(n)]
        if D:
            A = [[(1 if r == c else 0) - beta * pi[j][i] for c, j in enumerate(D)] for r, i in enumerate(D)]
            rhs = [alpha * e[i] + beta * sum(pi[k][i] * L[k] for k in range(n) if k not in D) for i in D]
            sol = gauss_jordan(A, rhs)
            if sol is None:
                continue
            for i, v in zip(D, sol):
                p[i] = v
        assets = [e[i] + sum(pi[k][i] * p[k] for k in range(n)) for i in range(n)]
        ok = all(p[i] >= 0 for i in range(n))
        ok = ok and all((assets[i] < L[i]) == (i in D) for i in candidates)
        if ok:
            found.append(p)
    return found


def brute_greatest(e, lmat, alpha, beta):
    pts = fixed_points(e, lmat, alpha, beta)
    for p in pts:
        if all(all(x >= y for x, y in zip(p, q)) for q in pts):
            return p
    raise AssertionError("no pointwise greatest fixed point among candidates")


def phi(e, lmat, alpha, beta, p):
    n = len(e)
    L = [sum(map(Fraction, row)) for row in lmat]
    pi = _pi(lmat)
    out = []
    for i in range(n):
        inflow = sum(pi[k][i] * p[k] for k in range(n))
        out.append(L[i] if L[i] <= e[i] + inflow else alpha * e[i] + beta * inflow)
    return out


def lp_vertex_max(c, A, b):
    """max c.x s.t. A x <= b, x >= 0 by enumerating vertices; None if infeasible."""
    nv = len(c)
    rows = [list(map(Fraction, r)) for r in A] + [[Fraction(int(k == j)) * -1 for k in range(nv)] for j in range(nv)]
    rhs = [Fraction(v) for v in b] + [Fraction(0)] * nv
    best = None
    for idx in combinations(range(len(rows)), nv):
        x = gauss_jordan([rows[i] for i in idx], [rhs[i] for i in idx])
        if x is None:
            continue
        if all(sum(r[k] * x[k] for k in range(nv)) <= v for r, v in zip(rows, rhs)):
            val = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or val > best:
                best = val
    return best


def greatest_liquidity(e, lmat, alpha, beta):
    return sum(brute_greatest(e, lmat, alpha, beta))


def brute_removal(net, kind, target=None):
    """Exhaustive shortlex search over all edges of the network."""
    from debtnet import apply_removals, greatest_clearing

    edges = net.edges()
    best = best_set = None
    for k in range(len(edges) + 1):
        for removed in combinations(edges, k):
            res = greatest_clearing(apply_removals(net, removed))
            forgiven = sum((net.liabilities[i][j] for i, j in removed), Fraction(0))
            if kind == "max-liquidity":
                value = res.liquidity
            elif kind == "min-forgiven-target-solvent":
                if target in res.defaults:
                    continue
                value = forgiven
            else:
                if res.defaults:
                    continue
                value = res.liquidity if kind.startswith("max") else forgiven
            better = best is None or (value > best if kind.startswith("max") else value < best)
            if better:
                best, best_set = value, removed
    return best_set, best
