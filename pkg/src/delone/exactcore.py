"""Exact rational scalars, matrices and the integer linear-algebra kernel.

Everything here is exact: Fractions for rational work, Python integers for
integer normal forms, and modular arithmetic only as an accelerator whose
output is certified exactly before it is returned.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotPositiveDefinite, PreconditionError

Rational = Fraction

_RANK_PRIMES_SEED = 0x5EED


def rat_str(x: Fraction | int) -> str:
    """Canonical `p/q` rendering (plain integer when q == 1)."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def rat_parse(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# plain-list vector/matrix helpers (internal work horses)
# ---------------------------------------------------------------------------

def vec_dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[vec_dot(row, col) for col in bt] for row in a]


def mat_vec(a, v):
    return [vec_dot(row, v) for row in a]


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_identity(n, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def mat_copy(a):
    return [list(row) for row in a]


def mat_fraction(a):
    return [[Fraction(x) for x in row] for row in a]


def mat_eq(a, b) -> bool:
    if len(a) != len(b):
        return False
    return all(len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
               for ra, rb in zip(a, b))


def gcd_vector(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def is_primitive_vector(v: Iterable[int]) -> bool:
    return gcd_vector(v) == 1


def common_denominator(entries) -> int:
    d = 1
    for x in entries:
        d = d * Fraction(x).denominator // math.gcd(d, Fraction(x).denominator)
    return d


def clear_denominators(rows):
    """Scale a rational matrix to an integer one; returns (int_rows, scale)."""
    d = common_denominator(x for row in rows for x in row)
    out = [[int(Fraction(x) * d) for x in row] for row in rows]
    return out, d


class RatMatrix:
    """Dense exact matrix; entries are Fractions (integers kept as ints)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows):
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if data and any(len(r) != len(data[0]) for r in data):
            raise PreconditionError("ragged matrix")
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0

    @classmethod
    def identity(cls, n):
        return cls(mat_identity(n))

    def tolists(self):
        return [list(row) for row in self.data]

    def transpose(self):
        return RatMatrix(zip(*self.data)) if self.data else RatMatrix([])

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[i][j] == self.data[j][i]
                   for i in range(self.rows) for j in range(i))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.data for x in row)

    def __matmul__(self, other):
        other = as_matrix(other)
        if self.cols != other.rows:
            raise PreconditionError("dimension mismatch in matrix product")
        return RatMatrix(mat_mul(self.tolists(), other.tolists()))

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(rat_str(x) for x in row) for row in self.data)
        return f"RatMatrix[{self.rows}x{self.cols}: {body}]"


def as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


def as_int_rows(m) -> list[list[int]]:
    mm = as_matrix(m)
    if not mm.is_integral():
        raise PreconditionError("integer matrix required")
    return [[int(x) for x in row] for row in mm.data]


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hnf(m) -> tuple[RatMatrix, RatMatrix]:
    """Row Hermite normal form H = U*m with U unimodular (|det U| = 1).

    Pivots are positive, entries above a pivot are reduced to [0, pivot).
    Zero rows end up at the bottom.
    """
    a = as_int_rows(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    u = mat_identity(nrows)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nrows):
            while a[i][c] != 0:
                if abs(a[i][c]) < abs(a[r][c]):
                    a[r], a[i] = a[i], a[r]
                    u[r], u[i] = u[i], u[r]
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == nrows:
            break
    return RatMatrix(a), RatMatrix(u)


def hnf_basis_rows(rows) -> list[list[int]]:
    """Nonzero rows of the HNF: a canonical basis of the integer row span."""
    h, _ = hnf(rows)
    return [list(map(int, row)) for row in h.data if any(row)]


# ---------------------------------------------------------------------------
# Smith normal form (used for quotient structures)
# ---------------------------------------------------------------------------

def smith_invariant_factors(m) -> list[int]:
    """Elementary divisors d1 | d2 | ... of an integer matrix (1s dropped)."""
    a = as_int_rows(m)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    factors = []
    top = 0
    while top < min(nrows, ncols):
        # find a nonzero entry to pivot on
        piv = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        a[top], a[i] = a[i], a[top]
        for row in a:
            row[top], row[j] = row[j], row[top]
        # clear row and column `top` by gcd steps
        while True:
            for i in range(top + 1, nrows):
                while a[i][top] != 0:
                    if abs(a[i][top]) < abs(a[top][top]):
                        a[top], a[i] = a[i], a[top]
                    q = a[i][top] // a[top][top]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            if any(a[top][j] for j in range(top + 1, ncols)):
                for j in range(top + 1, ncols):
                    while a[top][j] != 0:
                        if abs(a[top][j]) < abs(a[top][top]):
                            for row in a:
                                row[top], row[j] = row[j], row[top]
                        q = a[top][j] // a[top][top]
                        for row in a:
                            row[j] -= q * row[top]
                continue
            if all(a[i][top] == 0 for i in range(top + 1, nrows)):
                break
        # enforce divisibility of the remaining block by the pivot
        d = abs(a[top][top])
        bad = None
        for i in range(top + 1, nrows):
            for j in range(top + 1, ncols):
                if a[i][j] % d != 0:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            a[top] = [x + y for x, y in zip(a[top], a[bad])]
            continue
        factors.append(d)
        top += 1
    return [d for d in factors if d != 1]


# ---------------------------------------------------------------------------
# modular elimination helpers
# ---------------------------------------------------------------------------

def _random_prime(rng: random.Random) -> int:
    while True:
        p = rng.randrange(1 << 27, 1 << 28) | 1
        if all(p % q for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)):
            if pow(2, p - 1, p) == 1 and pow(3, p - 1, p) == 1:
                return p


def _mod_echelon(a_int_rows, p):
    """Row echelon mod p; returns (rank, pivot_rows, pivot_cols)."""
    a = np.array([[x % p for x in row] for row in a_int_rows], dtype=np.int64)
    nrows, ncols = a.shape
    row_index = list(range(nrows))
    r = 0
    piv_rows, piv_cols = [], []
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c] % p
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            row_index[r], row_index[i] = row_index[i], row_index[r]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1:, c]
        mask = below != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(below[mask], a[r])) % p
        piv_rows.append(row_index[r])
        piv_cols.append(c)
        r += 1
    return r, piv_rows, piv_cols


def _mod_solve(a_rows, b_cols, p):
    """Solve A X = B mod p for square A; returns None when singular mod p."""
    n = len(a_rows)
    k = len(b_cols[0])
    aug = np.zeros((n, n + k), dtype=np.int64)
    for i in range(n):
        aug[i, :n] = [x % p for x in a_rows[i]]
        aug[i, n:] = [x % p for x in b_cols[i]]
    for c in range(n):
        nz = np.nonzero(aug[c:, c])[0]
        if nz.size == 0:
            return None
        i = c + int(nz[0])
        if i != c:
            aug[[c, i]] = aug[[i, c]]
        inv = pow(int(aug[c, c]), p - 2, p)
        aug[c] = (aug[c] * inv) % p
        col = aug[:, c].copy()
        col[c] = 0
        mask = col != 0
        if mask.any():
            aug[mask] = (aug[mask] - np.outer(col[mask], aug[c])) % p
    return aug[:, n:]


def rational_reconstruct(u: int, m: int) -> Fraction | None:
    """Fraction p/q with p = q*u mod m, |p| <= sqrt(m/2), 0 < q <= sqrt(m/2)."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1 * (1 if s1 > 0 else -1), abs(s1))


def solve_int_system(a_rows, b_cols) -> list[list[Fraction]]:
    """Exact solution X of A X = B for a nonsingular integer A (CRT lifting).

    A is n x n, B is n x k; the result is certified by exact back-substitution
    into the original system.
    """
    n = len(a_rows)
    if n == 0:
        return []
    if any(len(r) != n for r in a_rows):
        raise PreconditionError("square system required")
    k = len(b_cols[0])
    rng = random.Random(_RANK_PRIMES_SEED ^ n)
    primes, residues = [], []
    modulus = 1
    while True:
        p = _random_prime(rng)
        if p in primes:
            continue
        sol = _mod_solve(a_rows, b_cols, p)
        if sol is None:
            continue
        primes.append(p)
        residues.append(sol)
        modulus *= p
        # combine by CRT and attempt rational reconstruction
        x = [[0] * k for _ in range(n)]
        mprod = 1
        for p_i, r_i in zip(primes, residues):
            if mprod == 1:
                for i in range(n):
                    for j in range(k):
                        x[i][j] = int(r_i[i, j])
            else:
                inv = pow(mprod % p_i, p_i - 2, p_i)
                for i in range(n):
                    for j in range(k):
                        t = ((int(r_i[i, j]) - x[i][j]) * inv) % p_i
                        x[i][j] = x[i][j] + mprod * t
            mprod *= p_i
        cand = [[rational_reconstruct(x[i][j], modulus) for j in range(k)]
                for i in range(n)]
        if any(c is None for row in cand for c in row):
            continue
        # exact verification of A * cand = B
        den = common_denominator(c for row in cand for c in row)
        xi = [[int(c * den) for c in row] for row in cand]
        ok = True
        for i in range(n):
            for j in range(k):
                s = sum(a_rows[i][t] * xi[t][j] for t in range(n))
                if s != b_cols[i][j] * den:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return cand


def solve_fraction(a_rows, b) -> list[Fraction] | None:
    """Plain exact Gaussian elimination for small dense systems.

    Returns None when the system is singular/inconsistent.
    """
    n = len(a_rows)
    m = [list(map(Fraction, row)) + [Fraction(x)] for row, x in zip(a_rows, b)]
    cols = len(a_rows[0]) if a_rows else 0
    piv_of_col = {}
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, n):
        if m[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for c, i in piv_of_col.items():
        sol[c] = m[i][cols]
    # free columns (if any) are left at zero; caller decides if that matters
    return sol


def det_int(a_rows) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination)."""
    a = [list(map(int, row)) for row in a_rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            piv = next((i for i in range(c + 1, n) if a[i][c] != 0), None)
            if piv is None:
                return 0
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def det_fraction(rows) -> Fraction:
    ai, scale = clear_denominators(as_matrix(rows).tolists())
    n = len(ai)
    return Fraction(det_int(ai), scale ** n)


def inverse_fraction(rows) -> list[list[Fraction]]:
    a = as_matrix(rows).tolists()
    n = len(a)
    cols = [solve_fraction(a, [Fraction(1) if i == j else Fraction(0)
                               for i in range(n)]) for j in range(n)]
    if any(c is None for c in cols):
        raise PreconditionError("singular matrix")
    return [list(row) for row in zip(*cols)]


# ---------------------------------------------------------------------------
# certified rank and kernels
# ---------------------------------------------------------------------------

def rank_exact(m) -> int:
    """Rank over Q: modular ranks first, then an exact certificate.

    Lower bound: a pivot submatrix nonsingular mod p is nonsingular over Q.
    Upper bound: an exactly verified kernel basis of the complementary size.
    """
    mm = as_matrix(m)
    if mm.rows == 0 or mm.cols == 0:
        return 0
    a, _ = clear_denominators(mm.tolists())
    rng = random.Random(_RANK_PRIMES_SEED ^ (mm.rows * 1000003 + mm.cols))
    best = None
    agreement = 0
    while True:
        p = _random_prime(rng)
        r, piv_rows, piv_cols = _mod_echelon(a, p)
        if best is None or r > best[0]:
            best = (r, piv_rows, piv_cols)
            agreement = 1
        elif r == best[0]:
            agreement += 1
        if agreement >= 2:
            r, piv_rows, piv_cols = best
            if _certify_rank(a, r, piv_rows, piv_cols):
                return r
            agreement = 0
            best = None


def _certify_rank(a, r, piv_rows, piv_cols) -> bool:
    nrows = len(a)
    ncols = len(a[0])
    if r == min(nrows, ncols):
        return True  # pivot block nonsingular mod p already proves rank >= r
    other_cols = [c for c in range(ncols) if c not in set(piv_cols)]
    if r == 0:
        return all(x == 0 for row in a for x in row)
    sub = [[a[i][c] for c in piv_cols] for i in piv_rows]
    rhs = [[a[i][c] for c in other_cols] for i in piv_rows]
    x = solve_int_system(sub, rhs)
    den = common_denominator(c for row in x for c in row)
    xi = [[int(c * den) for c in row] for row in x]
    # kernel vector for each non-pivot column j: den*e_j - sum_t x[t][j] e_piv[t]
    for i in range(nrows):
        row = a[i]
        lhs = [sum(row[piv_cols[t]] * xi[t][j] for t in range(r))
               for j in range(len(other_cols))]
        for j, c in enumerate(other_cols):
            if lhs[j] != den * row[c]:
                return False
    return True


def kernel_rational(m) -> list[tuple[int, ...]]:
    """Saturated integer basis of the right kernel (primitive vectors).

    The returned vectors span ker(m) ∩ Z^cols as a lattice; the basis is the
    canonical HNF basis of that kernel lattice.
    """
    mm = as_matrix(m)
    if mm.rows == 0 or mm.cols == 0:
        return [tuple(1 if i == j else 0 for j in range(mm.cols))
                for i in range(mm.cols)]
    a, _ = clear_denominators(mm.tolists())
    at = mat_transpose(a)
    h, u = hnf(at)
    kernel_rows = [list(map(int, urow))
                   for hrow, urow in zip(h.data, u.data) if not any(hrow)]
    if not kernel_rows:
        return []
    return [tuple(row) for row in hnf_basis_rows(kernel_rows)]


# ---------------------------------------------------------------------------
# LLL reduction on Gram matrices
# ---------------------------------------------------------------------------

def ldl_decompose(gram_rows):
    """Exact LDL data for a symmetric PD matrix.

    Returns (D, L): Q(x) = sum_i D[i] * (x_i + sum_{j>i} L[i][j] x_j)^2.
    Raises NotPositiveDefinite when a pivot is not positive.
    """
    a = mat_fraction(gram_rows)
    n = len(a)
    d = [Fraction(0)] * n
    l = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        d[i] = a[i][i]
        inv = 1 / a[i][i]
        for j in range(i + 1, n):
            l[i][j] = a[i][j] * inv
        for r in range(i + 1, n):
            ari = a[r][i]
            if ari:
                for c in range(r, n):
                    a[r][c] -= l[i][c] * ari
                    a[c][r] = a[r][c]
    return d, l


def _apply_rowop(g, u, k, j, q):
    """b_k <- b_k - q*b_j on Gram g and transform u (rows are basis vectors)."""
    n = len(g)
    for t in range(n):
        g[k][t] -= q * g[j][t]
    for t in range(n):
        g[t][k] -= q * g[t][j]
    u[k] = [x - q * y for x, y in zip(u[k], u[j])]


def _swap_rows(g, u, k):
    g[k], g[k - 1] = g[k - 1], g[k]
    for row in g:
        row[k], row[k - 1] = row[k - 1], row[k]
    u[k], u[k - 1] = u[k - 1], u[k]


def lll_reduce(gram, delta=Fraction(3, 4)) -> tuple[RatMatrix, RatMatrix]:
    """LLL-reduce a positive definite Gram matrix.

    Returns (G', T) with G' = T^t G T for a unimodular T; G' is size-reduced
    and satisfies the Lovász condition with the given delta. Only the Gram is
    needed; no ambient coordinates are touched.
    """
    g0 = as_matrix(gram)
    if not g0.is_symmetric():
        raise PreconditionError("Gram matrix must be symmetric")
    g = mat_fraction(g0.tolists())
    n = len(g)
    u = mat_identity(n)
    if n == 0:
        return RatMatrix([]), RatMatrix([])
    d, l = ldl_decompose(g)
    k = 1
    while k < n:
        # size-reduce b_k against b_{k-1}..b_0; mu(k, j) = l[j][k].
        # Gram-Schmidt vectors are unchanged, so d stays valid and the
        # mu column of k updates in place.
        for j in range(k - 1, -1, -1):
            q = round(l[j][k])
            if q:
                _apply_rowop(g, u, k, j, q)
                l[j][k] -= q
                for t in range(j):
                    l[t][k] -= q * l[t][j]
        if d[k] >= (delta - l[k - 1][k] ** 2) * d[k - 1]:
            k += 1
        else:
            _swap_rows(g, u, k)
            d, l = ldl_decompose(g)
            k = max(k - 1, 1)
    gm = RatMatrix(g)
    um = RatMatrix(u)
    t = um.transpose()
    assert (t.transpose() @ g0) @ t == gm
    return gm, t
