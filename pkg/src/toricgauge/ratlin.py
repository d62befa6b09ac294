"""Exact rational and integer linear algebra.

Everything here runs on :class:`fractions.Fraction` and Python ints; there
is no floating point anywhere.  The polyhedral routines are backed by a
small two-phase simplex with Bland's rule, which is plenty for the ranks
(a handful) and generator counts (a few dozen) that toric GIT problems
produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DimensionError

RationalVector = tuple  # tuple[Fraction, ...]
IntegerMatrix = tuple  # tuple[tuple[int, ...], ...]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(x, float):
        raise TypeError(f"floating point value {x!r} not accepted; use 'p/q'")
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def qvec(values: Iterable) -> RationalVector:
    return tuple(to_fraction(v) for v in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def is_integral(v: Sequence) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def primitive(v: Sequence) -> tuple:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in fr)
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints)


def _check_rank(vectors: Sequence[Sequence], r: int) -> None:
    for v in vectors:
        if len(v) != r:
            raise DimensionError(f"expected rank {r}, got vector of length {len(v)}")


# ---------------------------------------------------------------- elimination


def rank(vectors: Sequence[Sequence]) -> int:
    """Rank of the rational span of ``vectors``."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk][col]
        for i in range(len(rows)):
            if i != rk and rows[i][col] != 0:
                f = rows[i][col] / p
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def span_member(generators: Sequence[Sequence], target: Sequence) -> bool:
    """True iff ``target`` lies in the rational linear span of ``generators``."""
    _check_rank(generators, len(target))
    return rank(list(generators) + [target]) == rank(generators)


# ------------------------------------------------------------ smith normal form


@dataclass(frozen=True)
class SnfDecomposition:
    """``left @ A @ right`` is diagonal with entries ``diagonal``."""

    left: IntegerMatrix
    diagonal: tuple
    right: IntegerMatrix

    def order(self) -> Optional[int]:
        """Order of the torsion group ``prod Z/d_i``; None if some factor is 0."""
        out = 1
        for d in self.diagonal:
            if d == 0:
                return None
            out *= d
        return out


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(ncols)] for i in range(len(a))]


def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SnfDecomposition:
    """Smith normal form with unimodular transforms.

    ``ncols`` is only needed for a matrix with zero rows.
    """
    a = [[int(x) for x in row] for row in A]
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    L = _identity(m)
    R = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        L[dst] = [x + f * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in R:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]

    diag = tuple(a[i][i] for i in range(min(m, n)))
    return SnfDecomposition(
        left=tuple(tuple(r) for r in L),
        diagonal=diag,
        right=tuple(tuple(r) for r in R),
    )


def kernel_torus_elements(A: Sequence[Sequence[int]], r: int, cap: Optional[int] = None):
    """All ``q`` in ``(Q/Z)^r`` with ``A q`` integral, as reduced vectors.

    Returns None when the group is infinite.  ``cap`` bounds the group order;
    exceeding it raises OverflowError so callers can translate it.
    """
    dec = snf(A, ncols=r)
    diag = list(dec.diagonal) + [0] * (r - len(dec.diagonal))
    if any(d == 0 for d in diag):
        return None
    order = 1
    for d in diag:
        order *= d
    if cap is not None and order > cap:
        raise OverflowError(order)
    R = dec.right
    out = []

    def rec(j, p):
        if j == r:
            q = tuple(
                sum((Fraction(R[i][k]) * p[k] for k in range(r)), Fraction(0)) % 1
                for i in range(r)
            )
            out.append(q)
            return
        for a_ in range(diag[j]):
            rec(j + 1, p + [Fraction(a_, diag[j])])

    rec(0, [])
    return out


# ------------------------------------------------------------------- simplex


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[list] = None
    value: Optional[Fraction] = None
    farkas: Optional[list] = None  # y with y.A <= 0 and y.b > 0 when infeasible


def _pivot(T, row, col):
    p = T[row][col]
    T[row] = [v / p for v in T[row]]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            f = T[i][col]
            Ti, Tr = T[i], T[row]
            T[i] = [a - f * b for a, b in zip(Ti, Tr)]


def _run(T, basis, ncols, allowed):
    """Bland's rule on tableau ``T`` whose last row holds reduced costs."""
    m = len(T) - 1
    while True:
        obj = T[m]
        col = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, best[1], col)
        basis[best[1]] = col


def lp_minimize(A: Sequence[Sequence], b: Sequence, c: Optional[Sequence] = None) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``, exactly.

    With ``c`` omitted this is a pure feasibility problem.  Infeasible
    results carry a Farkas vector ``y`` with ``y^T A <= 0`` and ``y.b > 0``.
    """
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    if len(b) != m:
        raise DimensionError("rhs length does not match row count")
    c = [Fraction(0)] * n if c is None else [Fraction(v) for v in c]
    if m == 0:
        if any(v < 0 for v in c):
            return LPResult("unbounded")
        return LPResult("optimal", x=[Fraction(0)] * n, value=Fraction(0))

    sign = [(-1 if Fraction(bi) < 0 else 1) for bi in b]
    # columns: x_0..x_{n-1}, a_0..a_{m-1}, rhs
    T = []
    for i in range(m):
        row = [sign[i] * Fraction(v) for v in A[i]]
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(sign[i] * Fraction(b[i]))
        T.append(row)
    cost = [Fraction(0)] * n + [Fraction(1)] * m + [Fraction(0)]
    for i in range(m):
        cost = [cv - tv for cv, tv in zip(cost, T[i])]
    T.append(cost)
    basis = [n + i for i in range(m)]
    _run(T, basis, n + m, [True] * (n + m))

    if T[m][-1] != 0:  # -(phase one optimum) < 0
        # y = c_B^T B^{-1}; B^{-1} sits in the artificial columns
        cB = [Fraction(1) if bi >= n else Fraction(0) for bi in basis]
        y = [sum((cB[i] * T[i][n + j] for i in range(m)), Fraction(0)) for j in range(m)]
        return LPResult("infeasible", farkas=[sign[j] * y[j] for j in range(m)])

    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    m2 = len(basis)
    for row in T:
        del row[n:n + m]
    obj = list(c) + [Fraction(0)]
    for i in range(m2):
        f = obj[basis[i]]
        if f:
            obj = [ov - f * tv for ov, tv in zip(obj, T[i])]
    T[m2] = obj
    if not _run(T, basis, n, [True] * n):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i in range(m2):
        x[basis[i]] = T[i][-1]
    return LPResult("optimal", x=x, value=-T[m2][-1])


# ------------------------------------------------------------ cone decisions


@dataclass(frozen=True)
class ConeDecision:
    member: bool
    coefficients: Optional[tuple] = None
    certificate: Optional[tuple] = None

    def verify(self, generators: Sequence[Sequence], target: Sequence) -> bool:
        """Re-substitute the witness; True iff it proves the stated verdict."""
        if self.member:
            if self.certificate is not None or self.coefficients is None:
                return False
            if len(self.coefficients) != len(generators) or any(c < 0 for c in self.coefficients):
                return False
            total = [Fraction(0)] * len(target)
            for c, g in zip(self.coefficients, generators):
                total = [t + c * x for t, x in zip(total, g)]
            return total == [Fraction(t) for t in target]
        if self.coefficients is not None or self.certificate is None:
            return False
        lam = self.certificate
        return all(dot(g, lam) <= 0 for g in generators) and dot(target, lam) > 0


def cone_member(generators: Sequence[Sequence], target: Sequence) -> ConeDecision:
    """Decide ``target in {sum c_i g_i : c_i >= 0}`` with a checkable witness.

    Non-members come with a primitive integer Farkas vector ``lam``:
    every generator pairs to ``<= 0`` with it and the target to ``> 0``.
    """
    r = len(target)
    _check_rank(generators, r)
    k = len(generators)
    A = [[Fraction(generators[j][i]) for j in range(k)] for i in range(r)]
    res = lp_minimize(A, [Fraction(t) for t in target])
    if res.status == "infeasible":
        return ConeDecision(False, certificate=primitive(res.farkas))
    return ConeDecision(True, coefficients=tuple(res.x))


def open_halfspace_witness(vectors: Sequence[Sequence], r: Optional[int] = None) -> Optional[tuple]:
    """A primitive ``eta`` pairing strictly positively with every vector, or None."""
    if r is None:
        if not vectors:
            raise DimensionError("rank needed for an empty vector list")
        r = len(vectors[0])
    _check_rank(vectors, r)
    if not vectors:
        return tuple(0 for _ in range(r))
    # <v_i, eta+ - eta-> - s_i = 1 with all variables nonnegative
    k = len(vectors)
    A = []
    for i, v in enumerate(vectors):
        row = [Fraction(x) for x in v] + [-Fraction(x) for x in v]
        row += [Fraction(-1 if j == i else 0) for j in range(k)]
        A.append(row)
    res = lp_minimize(A, [Fraction(1)] * k)
    if res.status == "infeasible":
        return None
    eta = [res.x[i] - res.x[r + i] for i in range(r)]
    return primitive(eta)
