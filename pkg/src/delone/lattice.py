"""Lattices with explicit rational ambient coordinates.

A lattice is stored as a basis matrix (rows = basis vectors in Q^m) together
with its Gram matrix, kept exactly consistent. All structural operations
(dual, sections, projections, glue lattices, index-2 families, quotients)
live here.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterator

from . import exactcore as xc
from .errors import FileFormatError, PreconditionError
from .exactcore import Fraction as Q  # noqa: N814 (alias for brevity)


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    pn = math.isqrt(x.numerator)
    pd = math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


class Lattice:
    """Immutable lattice of rank k embedded in Q^m."""

    def __init__(self, basis, gram=None, name: str | None = None):
        self.basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        self.rank = len(self.basis)
        self.ambient_dim = len(self.basis[0]) if self.basis else 0
        if any(len(r) != self.ambient_dim for r in self.basis):
            raise PreconditionError("ragged basis")
        computed = [[xc.vec_dot(a, b) for b in self.basis] for a in self.basis]
        if gram is not None:
            given = xc.as_matrix(gram).tolists()
            if not xc.mat_eq(given, computed):
                raise PreconditionError("gram does not match basis * basis^T")
        self.gram = tuple(tuple(row) for row in computed)
        self.name = name
        if self.rank > self.ambient_dim:
            raise PreconditionError("rank exceeds ambient dimension")
        if self.rank and xc.det_fraction(self.gram) == 0:
            raise PreconditionError("basis rows are dependent")

    # -- basics ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Lattice) and self.basis == other.basis)

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return f"Lattice(rank={self.rank}, ambient={self.ambient_dim}{nm})"

    @cached_property
    def squared_determinant(self) -> Fraction:
        return xc.det_fraction(self.gram) if self.rank else Q(1)

    def determinant(self) -> tuple[Fraction, bool]:
        """(value, is_squared): sqrt(det gram) when rational, else det gram."""
        sq = self.squared_determinant
        root = _sqrt_fraction(sq)
        if root is not None:
            return root, False
        return sq, True

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    def is_even(self) -> bool:
        return self.is_integral() and all(
            self.gram[i][i].numerator % 2 == 0 for i in range(self.rank))

    @cached_property
    def gram_inverse(self):
        return xc.inverse_fraction(self.gram)

    # -- coordinates -------------------------------------------------------

    def to_ambient(self, coords) -> tuple[Fraction, ...]:
        if len(coords) != self.rank:
            raise PreconditionError("coordinate length mismatch")
        out = [Q(0)] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for t in range(self.ambient_dim):
                    out[t] += c * row[t]
        return tuple(out)

    def coords_of(self, point) -> tuple[Fraction, ...]:
        """Lattice-basis coordinates of an ambient point in the lattice span."""
        if len(point) != self.ambient_dim:
            raise PreconditionError("ambient dimension mismatch")
        proj = [xc.vec_dot(point, row) for row in self.basis]
        coords = xc.mat_vec(self.gram_inverse, proj)
        if tuple(self.to_ambient(coords)) != tuple(Fraction(x) for x in point):
            raise PreconditionError("point is not in the lattice span")
        return tuple(coords)

    def integer_coords_of(self, point) -> tuple[int, ...]:
        coords = self.coords_of(point)
        if any(c.denominator != 1 for c in coords):
            raise PreconditionError("point is not a lattice point")
        return tuple(int(c) for c in coords)

    def norm_of(self, coords) -> Fraction:
        g = self.gram
        n = self.rank
        total = Q(0)
        for i in range(n):
            ci = coords[i]
            if ci:
                total += g[i][i] * ci * ci
                for j in range(i + 1, n):
                    if coords[j]:
                        total += 2 * g[i][j] * ci * coords[j]
        return total

    def inner(self, x, y) -> Fraction:
        g = self.gram
        return sum(x[i] * sum(g[i][j] * y[j] for j in range(self.rank) if y[j])
                   for i in range(self.rank) if x[i])

    # -- derived lattices ----------------------------------------------------

    @cached_property
    def _dual(self) -> "Lattice":
        rows = xc.mat_mul(self.gram_inverse, [list(r) for r in self.basis])
        return Lattice(rows, name=f"{self.name}*" if self.name else None)

    def tden(self, coords) -> int:
        """Least d > 0 with d*coords integral (coords in lattice basis)."""
        return xc.common_denominator(coords)


def dual(lat: Lattice) -> Lattice:
    """Dual lattice in the same ambient span."""
    return lat._dual


def coords_transform(src: Lattice, dst: Lattice):
    """(T, den) with dst-coords of a src-coord row x equal to x*T/den.

    Valid for points of src whose ambient vector lies in span(dst); for other
    points the map is the orthogonal projection onto that span. Callers must
    guarantee span membership (cheap spot checks are advisable).
    """
    rows = []
    ginv = dst.gram_inverse
    for b in src.basis:
        proj = [xc.vec_dot(b, d) for d in dst.basis]
        rows.append(xc.mat_vec(ginv, proj))
    den = xc.common_denominator(x for row in rows for x in row)
    t = [[int(x * den) for x in row] for row in rows]
    return t, den


def batch_integer_coords(points, transform, den):
    """Apply a coords_transform to integer coordinate rows, exactly.

    Every image must be integral (PreconditionError otherwise). numpy int64
    is used when provably overflow-free, else pure Python integers.
    """
    import numpy as np

    pts = [list(map(int, p)) for p in points]
    if not pts:
        return []
    pmax = max(max(abs(c) for c in p) for p in pts) or 1
    tmax = max(max(abs(c) for c in row) for row in transform) or 1
    k = len(transform)
    if pmax * tmax * k * 2 < (1 << 62):
        arr = np.array(pts, dtype=np.int64) @ np.array(transform,
                                                       dtype=np.int64)
        if den != 1 and (arr % den).any():
            raise PreconditionError("point not in the destination lattice")
        arr = arr // den if den != 1 else arr
        return [tuple(int(v) for v in row) for row in arr]
    out = []
    cols = list(zip(*transform))
    for p in pts:
        row = []
        for col in cols:
            s = sum(a * b for a, b in zip(p, col))
            if s % den:
                raise PreconditionError("point not in the destination lattice")
            row.append(s // den)
        out.append(tuple(row))
    return out


def determinant(lat: Lattice):
    return lat.determinant()


def lattice_from_generators(rows, ambient_dim=None, name=None) -> Lattice:
    """Lattice generated by rational row vectors, with canonical HNF basis."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        raise PreconditionError("no generators")
    if ambient_dim is None:
        ambient_dim = len(rows[0])
    ints, scale = xc.clear_denominators(rows)
    basis = xc.hnf_basis_rows(ints)
    return Lattice([[Fraction(x, scale) for x in row] for row in basis],
                   name=name)


def canonical_basis(lat: Lattice):
    ints, scale = xc.clear_denominators([list(r) for r in lat.basis])
    return tuple(tuple(row) for row in xc.hnf_basis_rows(ints)), scale


def lattice_equal(a: Lattice, b: Lattice) -> bool:
    """Equality as point sets in a common ambient space."""
    if a.ambient_dim != b.ambient_dim or a.rank != b.rank:
        return False
    ba, sa = canonical_basis(a)
    bb, sb = canonical_basis(b)
    if sa == sb:
        return ba == bb
    return [[Fraction(x, sa) for x in r] for r in ba] == \
           [[Fraction(x, sb) for x in r] for r in bb]


def contains_lattice(outer: Lattice, inner: Lattice) -> bool:
    try:
        for row in inner.basis:
            outer.integer_coords_of(row)
    except PreconditionError:
        return False
    return True


class SublatticePair:
    """A finite-index pair sub ⊆ super of equal-rank lattices."""

    def __init__(self, sub: Lattice, sup: Lattice):
        if sub.rank != sup.rank or sub.ambient_dim != sup.ambient_dim:
            raise PreconditionError("pair must have equal rank and ambient")
        transform = []
        for row in sub.basis:
            transform.append(list(sup.integer_coords_of(row)))
        self.sub = sub
        self.super = sup
        self.transform = tuple(tuple(r) for r in transform)
        self.index = abs(xc.det_int(transform))
        if self.index == 0:
            raise PreconditionError("degenerate transform")

    def __repr__(self):
        return f"SublatticePair(index={self.index}, rank={self.sub.rank})"


class QuotientStructure:
    """Invariant factors d1 | d2 | ... of super/sub."""

    def __init__(self, invariant_factors):
        self.invariant_factors = tuple(int(d) for d in invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors) if self.invariant_factors else 1

    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def __eq__(self, other):
        return (isinstance(other, QuotientStructure)
                and self.invariant_factors == other.invariant_factors)

    def __repr__(self):
        return f"QuotientStructure{list(self.invariant_factors)}"


def quotient_structure(pair: SublatticePair) -> QuotientStructure:
    return QuotientStructure(xc.smith_invariant_factors(pair.transform))


def orthogonal_section(lat: Lattice, v) -> Lattice:
    """Saturated sublattice of vectors orthogonal to a primitive v (coords)."""
    v = [int(c) for c in v]
    if len(v) != lat.rank:
        raise PreconditionError("vector length must equal lattice rank")
    if not any(v):
        raise PreconditionError("vector must be nonzero")
    if not xc.is_primitive_vector(v):
        raise PreconditionError("vector must be primitive in the lattice")
    w = xc.mat_vec([list(r) for r in lat.gram], v)
    kernel = xc.kernel_rational([w])
    rows = [lat.to_ambient(k) for k in kernel]
    return Lattice(rows)


def project_orthogonal(lat: Lattice, v) -> Lattice:
    """Image of the lattice under orthogonal projection onto v-perp."""
    v = [int(c) for c in v]
    if len(v) != lat.rank or not any(v):
        raise PreconditionError("nonzero coordinate vector required")
    g = math.gcd(*[abs(c) for c in v]) if len(v) > 1 else abs(v[0])
    if g != 1:
        raise PreconditionError("vector must be primitive in the lattice")
    _, u = xc.hnf([[c] for c in v])
    uinv = xc.inverse_fraction(u.tolists())
    # rows of (U^-1)^T complete v to a unimodular basis, first row = v
    comp = [list(col) for col in zip(*uinv)]
    assert [int(x) for x in comp[0]] == v
    vb = lat.to_ambient(v)
    vnorm = xc.vec_dot(vb, vb)
    rows = []
    for crow in comp[1:]:
        wb = lat.to_ambient([int(x) for x in crow])
        coeff = Fraction(xc.vec_dot(wb, vb), vnorm)
        rows.append([a - coeff * b for a, b in zip(wb, vb)])
    return Lattice(rows)


def _element_order_mod1(vec) -> int:
    return xc.common_denominator(vec)


def _combine_cyclic(h, ordh, g, ordg):
    """Element of order lcm(ordh, ordg) inside the cyclic group <h, g>."""
    lcm = ordh * ordg // math.gcd(ordh, ordg)
    # split lcm = a*b with a | ordh, b | ordg, gcd(a, b) = 1
    a, b = 1, 1
    rest = lcm
    for p in _prime_factors(lcm):
        pe = 1
        while rest % p == 0:
            rest //= p
            pe *= p
        if ordh % pe == 0:
            a *= pe
        else:
            b *= pe
    ch = ordh // a
    cg = ordg // b
    return [Fraction(ch) * x + Fraction(cg) * y for x, y in zip(h, g)]


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def glue_lattice(lat: Lattice, d: int) -> Lattice:
    """The unique intermediate lattice of index d in a cyclic dual quotient."""
    if d < 1:
        raise PreconditionError("glue index must be positive")
    if not lat.is_integral():
        raise PreconditionError("glue lattices require an integral lattice")
    pair = SublatticePair(lat, dual(lat))
    q = quotient_structure(pair)
    if not q.is_cyclic():
        raise PreconditionError(
            f"dual quotient {q} is not cyclic; glue index is ambiguous")
    m = q.order
    if m % d != 0:
        raise PreconditionError(f"glue index {d} does not divide group order {m}")
    if d == 1:
        return lat
    # find a generator of the cyclic quotient among dual-basis combinations
    dual_rows = [[Fraction(x) % 1 for x in row] for row in lat.gram_inverse]
    gen = None
    ordg = 1
    for row in dual_rows:
        o = _element_order_mod1(row)
        if gen is None:
            gen, ordg = row, o
        elif ordg % o != 0:
            gen = _combine_cyclic(gen, ordg, row, o)
            gen = [x % 1 for x in gen]
            ordg = _element_order_mod1(gen)
        if ordg == m:
            break
    assert ordg == m, "cyclic generator search failed"
    step = [Fraction(m, d) * x for x in gen]
    extra = lat.to_ambient(step)
    glued = lattice_from_generators(list(lat.basis) + [extra],
                                    lat.ambient_dim)
    assert glued.squared_determinant * d * d == lat.squared_determinant
    return glued


def index2_sublattices(lat: Lattice) -> Iterator[Lattice]:
    """All 2^rank - 1 index-2 sublattices, in functional-mask order."""
    n = lat.rank
    for mask in range(1, 1 << n):
        support = [i for i in range(n) if (mask >> i) & 1]
        j = support[0]
        rows = []
        for i in range(n):
            if i == j:
                rows.append([2 if t == j else 0 for t in range(n)])
            elif i in support:
                row = [0] * n
                row[i] = 1
                row[j] = -1
                rows.append(row)
            else:
                row = [0] * n
                row[i] = 1
                rows.append(row)
        yield Lattice([lat.to_ambient(r) for r in rows])


def index2_superlattices(lat: Lattice) -> Iterator[Lattice]:
    """All 2^rank - 1 superlattices L + Z*(w/2) for w in F_2^rank \\ {0}."""
    n = lat.rank
    for mask in range(1, 1 << n):
        w = [Fraction((mask >> i) & 1, 2) for i in range(n)]
        extra = lat.to_ambient(w)
        yield lattice_from_generators(list(lat.basis) + [extra],
                                      lat.ambient_dim)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def write_lattice(lat: Lattice, path, with_gram=True) -> None:
    lines = [f"lattice {lat.rank} {lat.ambient_dim}"]
    for row in lat.basis:
        lines.append(" ".join(xc.rat_str(x) for x in row))
    if with_gram:
        lines.append("# gram")
        for row in lat.gram:
            lines.append(" ".join(xc.rat_str(x) for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_lattice(path) -> Lattice:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or not raw[0].startswith("lattice "):
        raise FileFormatError(f"{path}: missing lattice header")
    parts = raw[0].split()
    if len(parts) != 3:
        raise FileFormatError(f"{path}: malformed header")
    try:
        rank, amb = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise FileFormatError(f"{path}: malformed header") from exc
    if len(raw) < 1 + rank:
        raise FileFormatError(f"{path}: truncated basis")
    basis = []
    for ln in raw[1:1 + rank]:
        row = ln.split()
        if len(row) != amb:
            raise FileFormatError(f"{path}: basis row has wrong length")
        try:
            basis.append([Fraction(x) for x in row])
        except (ValueError, ZeroDivisionError) as exc:
            raise FileFormatError(f"{path}: bad rational {ln!r}") from exc
    gram = None
    rest = raw[1 + rank:]
    if rest:
        if rest[0] != "# gram" or len(rest) != 1 + rank:
            raise FileFormatError(f"{path}: malformed gram block")
        gram = []
        for ln in rest[1:]:
            row = ln.split()
            if len(row) != rank:
                raise FileFormatError(f"{path}: gram row has wrong length")
            try:
                gram.append([Fraction(x) for x in row])
            except (ValueError, ZeroDivisionError) as exc:
                raise FileFormatError(f"{path}: bad rational {ln!r}") from exc
    try:
        return Lattice(basis, gram=gram)
    except PreconditionError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
