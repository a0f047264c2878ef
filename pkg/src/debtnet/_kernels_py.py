"""Pure-Python clearing kernels.

Every routine is generic over the scalar type: with ``Fraction`` inputs and
``tol=0`` the arithmetic is exact, with floats comparisons use ``tol``.
The compiled module ``_kernels`` implements the float versions of
:func:`greatest_vector` and :func:`phi_vector` with identical semantics.
"""

from __future__ import annotations

from .errors import ConvergenceError, SingularSystemError

PICARD_TOL = 1e-12
PICARD_CAP = 10_000
PIVOT_EPS = 1e-13


def solve_dense(A, b, tol=0):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    ``A`` is a list of rows and is not modified. Raises
    :class:`SingularSystemError` on a (numerically) singular matrix.
    """
    n = len(b)
    M = [list(A[r]) + [b[r]] for r in range(n)]
    exact = tol == 0
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(M[r][c]))
        if M[piv][c] == 0 or (not exact and abs(M[piv][c]) < PIVOT_EPS):
            raise SingularSystemError(f"singular system at column {c}")
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
        row = M[c]
        pv = row[c]
        for r in range(c + 1, n):
            f = M[r][c]
            if f == 0:
                continue
            f = f / pv
            Mr = M[r]
            for k in range(c, n + 1):
                Mr[k] -= f * row[k]
    x = [0] * n
    for c in range(n - 1, -1, -1):
        s = M[c][n]
        row = M[c]
        for k in range(c + 1, n):
            s -= row[k] * x[k]
        x[c] = s / row[c]
    if not exact:
        for r in range(n):
            res = sum(A[r][k] * x[k] for k in range(n)) - b[r]
            if abs(res) > 1e-9:
                raise SingularSystemError("residual check failed")
    return x


def inflows(pi, p):
    """``inflow_i = sum_j pi[j][i] * p[j]``."""
    n = len(p)
    out = [p[0] * 0] * n if n else []
    for j in range(n):
        pj = p[j]
        if pj == 0:
            continue
        row = pi[j]
        for i in range(n):
            if row[i] != 0:
                out[i] += row[i] * pj
    return out


def phi_vector(e, pi, L, alpha, beta, p, tol=0):
    """One application of the clearing map to outgoing totals ``p``."""
    inc = inflows(pi, p)
    out = []
    for i in range(len(p)):
        if L[i] <= e[i] + inc[i] + tol:
            out.append(L[i])
        else:
            out.append(alpha * e[i] + beta * inc[i])
    return out


def _defaults(e, pi, L, p, tol):
    inc = inflows(pi, p)
    return frozenset(i for i in range(len(p)) if L[i] > 0 and e[i] + inc[i] < L[i] - tol)


def _solve_defaulting(e, pi, L, alpha, beta, D, tol):
    """Payments when banks in ``D`` default and every other bank pays in full."""
    n = len(e)
    idx = sorted(D)
    pos = {i: k for k, i in enumerate(idx)}
    zero = L[0] * 0 if n else 0
    A = [[zero] * len(idx) for _ in idx]
    b = []
    for r, i in enumerate(idx):
        A[r][r] = zero + 1
        rhs = alpha * e[i]
        for j in range(n):
            w = pi[j][i]
            if w == 0:
                continue
            if j in pos:
                A[r][pos[j]] -= beta * w
            else:
                rhs += beta * w * L[j]
        b.append(rhs)
    x = solve_dense(A, b, tol) if idx else []
    p = list(L)
    for k, i in enumerate(idx):
        p[i] = x[k]
    return p


def greatest_vector(e, pi, L, alpha, beta, tol=0):
    """Greatest clearing vector of outgoing totals by fictitious default.

    Starts from full payment and re-solves the defaulting banks' linear
    system each time the default set grows; at most ``n`` rounds.
    """
    n = len(e)
    p = list(L)
    D = frozenset()
    for _ in range(n + 1):
        new = _defaults(e, pi, L, p, tol)
        if new <= D:
            return p
        D = D | new
        try:
            p = _solve_defaulting(e, pi, L, alpha, beta, D, tol)
        except SingularSystemError:
            if tol == 0:
                raise
            return picard_from_full(e, pi, L, alpha, beta, tol)
    return p


def picard_from_full(e, pi, L, alpha, beta, tol=0.0):
    """Plain monotone iteration of the clearing map starting at full payment."""
    p = [float(v) for v in L]
    for _ in range(PICARD_CAP):
        q = phi_vector(e, pi, L, alpha, beta, p, tol)
        if max((abs(a - b) for a, b in zip(p, q)), default=0.0) <= PICARD_TOL:
            return q
        p = q
    raise ConvergenceError(f"clearing iteration did not converge in {PICARD_CAP} steps")


# least clearing vector ----------------------------------------------------


def _sccs(nodes, succ):
    """Tarjan's algorithm; returns components upstream-first."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    comps.reverse()
    return comps


def _minimal_solution(e, pi, L, alpha, beta, S, tol):
    """Minimal non-negative payments with ``S`` forced to full payment.

    Returns ``(p, divergent)`` where ``divergent`` lists closed defaulting
    classes that receive positive input and therefore have no finite
    minimal solution (their entries in ``p`` are left at zero).
    """
    n = len(e)
    zero = L[0] * 0
    D = [i for i in range(n) if i not in S]
    Dset = set(D)
    p = [L[i] if i in S else zero for i in range(n)]
    succ = {j: [i for i in range(n) if i in Dset and pi[j][i] != 0] for j in D}
    divergent = []
    for comp in _sccs(D, succ):
        cset = set(comp)
        closed = (
            beta == 1
            and len(comp) > 1
            and all(all(i in cset for i in range(n) if pi[j][i] != 0) for j in comp)
        )
        ext = {}
        for i in comp:
            s = zero
            for j in range(n):
                if j not in cset and pi[j][i] != 0:
                    s += pi[j][i] * p[j]
            ext[i] = s
        if closed:
            inp = sum((alpha * e[i] + beta * ext[i] for i in comp), zero)
            if inp > tol:
                divergent.append(comp)
            continue  # zero input: minimal solution is zero
        pos = {i: k for k, i in enumerate(comp)}
        A = [[zero] * len(comp) for _ in comp]
        b = []
        for r, i in enumerate(comp):
            A[r][r] += 1
            for j in comp:
                if pi[j][i] != 0:
                    A[r][pos[j]] -= beta * pi[j][i]
            b.append(alpha * e[i] + beta * ext[i])
        x = solve_dense(A, b, tol)
        for k, i in enumerate(comp):
            p[i] = x[k]
    return p, divergent


def least_vector(e, pi, L, alpha, beta, tol=0):
    """Least clearing vector, the limit of iterating the clearing map from zero.

    Works in phases: with a set ``S`` of banks known to be solvent, the
    remaining banks follow a linear recursion whose minimal solution is
    computed directly. Banks that would cross their solvency threshold are
    candidates for ``S``; a lone candidate is certainly solvent, several
    candidates are resolved by trying each one and keeping the least result
    that is a genuine fixed point.
    """
    n = len(e)
    if n == 0:
        return []
    base = frozenset(i for i in range(n) if L[i] == 0)
    memo: dict[frozenset, list | None] = {}

    def assets(p):
        inc = inflows(pi, p)
        return [e[i] + inc[i] for i in range(n)]

    def lfp(S):
        if S in memo:
            return memo[S]
        key = S
        while True:
            p, divergent = _minimal_solution(e, pi, L, alpha, beta, S, tol)
            a = assets(p)
            cands = sorted(
                {i for i in range(n) if i not in S and not a[i] < L[i] - tol}
                | {i for comp in divergent for i in comp}
            )
            if not cands:
                memo[key] = memo[S] = p
                return p
            if len(cands) == 1:
                S = S | {cands[0]}
                continue
            best = None
            for c in cands:
                q = lfp(S | {c})
                if q is None:
                    continue
                if assets(q)[c] < L[c] - tol:
                    continue
                if best is None or all(x <= y + tol for x, y in zip(q, best)):
                    best = q
            memo[key] = memo[S] = best
            return best

    result = lfp(base)
    if result is None:
        raise ConvergenceError("least clearing vector could not be resolved")
    return result
