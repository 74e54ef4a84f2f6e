"""Properties of Delaunay polytopes.

Perfection rank, spherical design strength, circumcenter denominators,
symmetry kind, the affinely generated lattice, 2-laminations, and lamination
number bounds (including the index-2 lower-bound scheme).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Literal

import numpy as np

from . import exactcore as xc
from .enumeration import EnumContext, ball_points
from .errors import DeloneError, PreconditionError
from .geometry import (DelaunayCell, affine_rank,
                       affinely_independent_subset, shortest_vectors)
from .lattice import Lattice, SublatticePair, dual as dual_lattice


class QuadraticFunction:
    """Inhomogeneous quadratic f(x) = x^t Q x + b.x + c0 on lattice coords."""

    __slots__ = ("Q", "b", "c0")

    def __init__(self, q_rows, b, c0):
        self.Q = tuple(tuple(Fraction(x) for x in row) for row in q_rows)
        self.b = tuple(Fraction(x) for x in b)
        self.c0 = Fraction(c0)
        n = len(self.Q)
        if any(len(r) != n for r in self.Q) or len(self.b) != n:
            raise PreconditionError("inconsistent quadratic dimensions")
        if any(self.Q[i][j] != self.Q[j][i] for i in range(n) for j in range(i)):
            raise PreconditionError("Q must be symmetric")

    def __call__(self, x):
        n = len(self.b)
        total = self.c0
        for i in range(n):
            if x[i]:
                total += self.b[i] * x[i]
                total += self.Q[i][i] * x[i] * x[i]
                for j in range(i + 1, n):
                    if x[j]:
                        total += 2 * self.Q[i][j] * x[i] * x[j]
        return total


def build_fD(cell: DelaunayCell) -> QuadraticFunction:
    """The distance-to-sphere quadratic: zero exactly on the vertex set."""
    g = cell.lattice.gram
    c = cell.center
    gc = xc.mat_vec([list(r) for r in g], list(c))
    b = [-2 * t for t in gc]
    c0 = xc.vec_dot(c, gc) - cell.radius_sq
    return QuadraticFunction(g, b, c0)


class PerfectionReport:
    """Rank accounting for the space of quadratics vanishing on the vertices."""

    __slots__ = ("dim_quadratics", "constraint_rank", "perfection_rank")

    def __init__(self, dim_quadratics, constraint_rank):
        self.dim_quadratics = dim_quadratics
        self.constraint_rank = constraint_rank
        self.perfection_rank = dim_quadratics - constraint_rank

    @property
    def is_perfect(self) -> bool:
        return self.perfection_rank == 1

    def __repr__(self):
        return (f"PerfectionReport(dim={self.dim_quadratics}, "
                f"rank={self.constraint_rank}, "
                f"perfection_rank={self.perfection_rank})")


def _monomial_row(v):
    n = len(v)
    row = []
    for i in range(n):
        for j in range(i, n):
            row.append(v[i] * v[j])
    row.extend(v)
    row.append(1)
    return row


def perfection_rank(cell: DelaunayCell) -> PerfectionReport:
    """Dimension of the span of quadratics vanishing on the vertex set.

    Computed as n(n+3)/2 + 1 minus the certified exact rank of the
    vertex-evaluation matrix. Checks that the cell's own sphere quadratic
    lies in the kernel.
    """
    if not cell.is_full_dimensional:
        raise PreconditionError("perfection rank needs a full-dimensional cell")
    n = cell.lattice.rank
    dim_quadratics = n * (n + 3) // 2 + 1
    rows = [_monomial_row(v) for v in cell.vertices]
    rank = xc.rank_exact(rows)
    report = PerfectionReport(dim_quadratics, rank)
    fd = build_fD(cell)
    assert all(fd(v) == 0 for v in cell.vertices[:32])
    assert report.perfection_rank >= 1
    return report


# ---------------------------------------------------------------------------
# spherical design strength
# ---------------------------------------------------------------------------

def _sphere_moment(k: int, n: int) -> Fraction:
    """Average of <u, w>^k over independent uniform points of S^(n-1)."""
    if k % 2 == 1:
        return Fraction(0)
    num = 1
    for t in range(k - 1, 0, -2):
        num *= t
    den = 1
    for j in range(k // 2):
        den *= n + 2 * j
    return Fraction(num, den)


def design_strength_points(points, center, gram, t_max: int,
                           sphere_dim: int | None = None) -> int:
    """Largest t <= t_max for which the centered pair-power sums match the
    uniform sphere moments for every k = 1..t. Exact integer arithmetic."""
    if not points:
        raise PreconditionError("empty point set")
    pts = [tuple(p) for p in points]
    center = [Fraction(c) for c in center]
    den = xc.common_denominator(center)
    gram_rows = xc.as_matrix(gram).tolists()
    gden = xc.common_denominator(x for row in gram_rows for x in row)
    ig = [[int(x * gden) for x in row] for row in gram_rows]
    w = [[int(den * Fraction(a) - den * c) for a, c in zip(p, center)]
         for p in pts]
    if sphere_dim is None:
        sphere_dim = affine_rank(pts)
    npts = len(w)
    dim = len(w[0])
    amax = max(max(abs(x) for x in row) for row in w) or 1
    gmax = max(max(abs(x) for x in row) for row in ig) or 1
    use_numpy = dim * dim * amax * amax * gmax < (1 << 61)
    if use_numpy:
        aw = np.array(w, dtype=np.int64)
        igm = np.array(ig, dtype=np.int64)
        prod = aw @ igm
        chunk = max(1, (1 << 21) // max(npts, 1))
        rsq_scaled = None
        sums = [0] * (t_max + 1)
        for lo in range(0, npts, chunk):
            block = aw[lo:lo + chunk] @ prod.T
            if rsq_scaled is None:
                rsq_scaled = int(block[0, 0])
            bmax = int(np.abs(block).max()) or 1
            flat = block.ravel()
            for k in range(1, t_max + 1):
                if bmax ** k * flat.size < (1 << 62):
                    powered = flat ** k
                    step = max(1, (1 << 62) // (bmax ** k) - 1)
                    total = 0
                    for s in range(0, powered.size, step):
                        total += int(powered[s:s + step].sum())
                    sums[k] += total
                else:
                    obj = flat.astype(object)
                    sums[k] += int((obj ** k).sum())
    else:
        gw = [[sum(ig[i][j] * row[j] for j in range(dim) if row[j])
               for i in range(dim)] for row in w]
        rsq_scaled = sum(a * b for a, b in zip(w[0], gw[0]))
        sums = [0] * (t_max + 1)
        for i in range(npts):
            for j in range(npts):
                s = sum(a * b for a, b in zip(w[i], gw[j]))
                acc = s
                for k in range(1, t_max + 1):
                    sums[k] += acc
                    acc *= s
    rsq = Fraction(rsq_scaled)
    for k in range(1, t_max + 1):
        expected = npts * npts * rsq ** k * _sphere_moment(k, sphere_dim)
        if Fraction(sums[k]) != expected:
            return k - 1
    return t_max


def design_strength(cell: DelaunayCell, t_max: int) -> int:
    """Design strength of the vertex set on its circumsphere (capped)."""
    if cell.nvertices < 1 or t_max < 0:
        raise PreconditionError("need vertices and a nonnegative cap")
    if t_max == 0:
        return 0
    return design_strength_points(cell.vertices, cell.center,
                                  cell.lattice.gram, t_max)


# ---------------------------------------------------------------------------
# tden, symmetry kind, affine lattice
# ---------------------------------------------------------------------------

def tden(center, lat: Lattice) -> int:
    """Least d > 0 with d*center in the lattice (lattice coordinates)."""
    if len(center) != lat.rank:
        raise PreconditionError("coordinate length mismatch")
    return xc.common_denominator(center)


SymmetryKind = Literal["centrally_symmetric", "antisymmetric"]


def symmetry_kind(cell: DelaunayCell) -> SymmetryKind:
    """Whether the vertex set is closed under reflection through the center."""
    vset = set(cell.vertices)
    twoc = [2 * c for c in cell.center]
    hits = 0
    for v in cell.vertices:
        w = tuple(t - x for t, x in zip(twoc, v))
        if all(c.denominator == 1 for c in w) and \
                tuple(int(c) for c in w) in vset:
            hits += 1
    if hits == len(vset):
        kind = "centrally_symmetric"
    elif hits == 0:
        kind = "antisymmetric"
    else:
        raise DeloneError(
            f"mixed symmetry: {hits} of {len(vset)} vertices have antipodes")
    if cell.radius_sq > 0:
        den = tden(cell.center, cell.lattice)
        assert (den == 2) == (kind == "centrally_symmetric"), \
            "tden = 2 must characterize central symmetry"
    return kind


def affine_lattice(cell: DelaunayCell) -> SublatticePair:
    """The lattice generated by vertex differences, as a sublattice pair."""
    if cell.nvertices < 2:
        raise PreconditionError("need at least two vertices")
    v0 = cell.vertices[0]
    n = cell.lattice.rank
    work: list[list[int]] = []
    identity = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    chunk = 4096
    verts = cell.vertices
    for lo in range(1, len(verts), chunk):
        for v in verts[lo:lo + chunk]:
            work.append([a - b for a, b in zip(v, v0)])
        work = xc.hnf_basis_rows(work)
        if work == identity:
            break
    basis_rows = work
    if len(basis_rows) != n:
        raise PreconditionError("vertex differences do not span the lattice "
                                "rationally; affine index undefined")
    sub = Lattice([cell.lattice.to_ambient(r) for r in basis_rows])
    return SublatticePair(sub, cell.lattice)


# ---------------------------------------------------------------------------
# laminations
# ---------------------------------------------------------------------------

class LaminationPartition:
    """A 2-lamination: vertex slices on two consecutive lattice hyperplanes."""

    __slots__ = ("functional", "offsets", "slices", "sublattice")

    def __init__(self, functional, offsets, slices, sublattice):
        self.functional = tuple(int(x) for x in functional)
        self.offsets = tuple(int(o) for o in offsets)
        self.slices = tuple(tuple(s) for s in slices)
        self.sublattice = sublattice

    def __repr__(self):
        return (f"LaminationPartition(functional={self.functional}, "
                f"sizes={[len(s) for s in self.slices]})")


def _two_laminations_of_points(verts, nfull):
    """Partitions of an integer point set into two consecutive layers.

    Returns a list of (functional, offsets, slices) with primitive integer
    functionals; `nfull` is the affine dimension (must equal coordinate
    count).
    """
    verts = [tuple(v) for v in verts]
    n = len(verts[0])
    assert nfull == n
    ind = affinely_independent_subset(verts, limit=n + 1)
    if len(ind) != n + 1:
        raise PreconditionError("point set is not full-dimensional")
    mat = [list(verts[i]) + [1] for i in ind]
    minv = xc.inverse_fraction(mat)
    out = {}
    total = 1 << (n + 1)
    for mask in range(1, total - 1):
        tau = [Fraction((mask >> t) & 1) for t in range(n + 1)]
        coeffs = xc.mat_vec(minv, tau)
        w = coeffs[:n]
        b = coeffs[n]
        if any(x.denominator != 1 for x in w) or b.denominator != 1:
            continue
        wi = [int(x) for x in w]
        bi = int(b)
        lo: list[int] = []
        hi: list[int] = []
        good = True
        for idx, v in enumerate(verts):
            val = sum(a * t for a, t in zip(wi, v)) + bi
            if val == 0:
                lo.append(idx)
            elif val == 1:
                hi.append(idx)
            else:
                good = False
                break
        if not good or not lo or not hi:
            continue
        key = (tuple(lo), tuple(hi)) if lo[0] == 0 else (tuple(hi), tuple(lo))
        if key not in out:
            out[key] = (wi, bi, (tuple(lo), tuple(hi)))
    results = []
    for wi, bi, slices in out.values():
        results.append((wi, (-bi, -bi + 1), slices))
    return results


def two_laminations(cell: DelaunayCell) -> list[LaminationPartition]:
    """All partitions of the vertex set into two consecutive lattice layers."""
    if not cell.is_full_dimensional:
        raise PreconditionError("two_laminations needs a full-dimensional cell")
    lat = cell.lattice
    found = _two_laminations_of_points(cell.vertices, lat.rank)
    results = []
    for wi, offsets, slices in found:
        kernel = xc.kernel_rational([wi])
        sub = Lattice([lat.to_ambient(k) for k in kernel])
        results.append(LaminationPartition(wi, offsets, slices, sub))
    results.sort(key=lambda p: p.functional)
    return results


class WidthUpperReport:
    """Upper bound on the lamination number with the witness functional."""

    __slots__ = ("laminae", "functional", "exact", "search_bound")

    def __init__(self, laminae, functional, exact, search_bound):
        self.laminae = laminae
        self.functional = tuple(int(x) for x in functional)
        self.exact = exact
        self.search_bound = search_bound

    def __repr__(self):
        flag = "exact" if self.exact else "upper bound"
        return f"WidthUpperReport({self.laminae} laminae, {flag})"


def lamination_number_upper(cell: DelaunayCell, search_bound=None,
                            lower_bound: int = 2) -> WidthUpperReport:
    """Minimum lamina count over primitive functionals of bounded dual norm.

    The result is an upper bound for the lamination number; it is flagged
    exact when it meets the supplied (or trivial) lower bound.
    """
    if not cell.is_full_dimensional:
        raise PreconditionError("lamination number needs a full-dimensional cell")
    lat = cell.lattice
    ginv = lat.gram_inverse
    dual_ctx = EnumContext(ginv)
    if search_bound is None:
        dmin, _ = shortest_vectors(dual_lattice(lat))
        search_bound = 4 * dmin
    search_bound = Fraction(search_bound)
    best = None
    witness = None
    for w, norm in sorted(ball_points(dual_ctx, [0] * lat.rank, search_bound,
                                      symmetric=True),
                          key=lambda t: (t[1], t[0])):
        if not any(w) or norm == 0:
            continue
        if xc.gcd_vector(w) != 1:
            continue
        if w < tuple(-x for x in w):
            continue  # one representative per +-w pair
        vals = {sum(a * t for a, t in zip(w, v)) for v in cell.vertices}
        count = len(vals)
        if best is None or count < best:
            best, witness = count, w
            if best <= max(2, lower_bound):
                break
    if best is None:
        raise PreconditionError("search bound too small: no functional found")
    exact = best <= max(2, lower_bound)
    return WidthUpperReport(best, witness, exact, search_bound)


# ---------------------------------------------------------------------------
# Theorem-2 style lower bound through index-2 sublattices
# ---------------------------------------------------------------------------

class WidthLowerCertificate:
    """Successful replay: every index-2 parity split is full-dimensional and
    every 2-lamination of one class induces >= 3 laminae on the other."""

    __slots__ = ("lamination_number_at_least", "sublattices_checked",
                 "laminations_checked")

    def __init__(self, sublattices_checked, laminations_checked):
        self.lamination_number_at_least = 5
        self.sublattices_checked = sublattices_checked
        self.laminations_checked = laminations_checked

    def __repr__(self):
        return (f"WidthLowerCertificate(>=5, sublattices="
                f"{self.sublattices_checked}, "
                f"laminations={self.laminations_checked})")


class WidthLowerFailure:
    """A witness that the index-2 scheme does not certify lamination >= 5."""

    __slots__ = ("functional_mask", "reason", "witness")

    def __init__(self, functional_mask, reason, witness=None):
        self.functional_mask = functional_mask
        self.reason = reason
        self.witness = witness

    def __repr__(self):
        return f"WidthLowerFailure(mask={self.functional_mask}, {self.reason})"


def _solve_half_coords(t2_inv_scaled, scale, v):
    return [Fraction(sum(a * b for a, b in zip(v, col)), scale)
            for col in t2_inv_scaled]


def width_lower_bound_index2(cell: DelaunayCell, allow_large: bool = False,
                             progress=None):
    """Replay of the index-2 lamination-number-5 certification scheme.

    For every index-2 sublattice of the cell's lattice, both parity classes
    of the vertex set must be full-dimensional, and every 2-lamination of
    each class must induce at least 3 laminae on the complementary class.
    Success certifies lamination number >= 5; any failure is returned with
    its witness.
    """
    pair = affine_lattice(cell)
    if pair.index != 1:
        raise PreconditionError(
            "the scheme requires a generating cell (affine index 1), "
            f"got index {pair.index}")
    n = cell.lattice.rank
    if n > 12 and not allow_large:
        raise PreconditionError(
            f"2^{n}-1 sublattices is a stretch-scale run; pass allow_large")
    verts = [tuple(v) for v in cell.vertices]
    vmat = np.array(verts, dtype=np.int64)
    total = (1 << n) - 1
    laminations_checked = 0
    for mask in range(1, total + 1):
        if progress and mask % 65536 == 0:
            progress(mask, total)
        f = [(mask >> i) & 1 for i in range(n)]
        parity = (vmat @ np.array(f, dtype=np.int64)) & 1
        cls = [np.nonzero(parity == 0)[0], np.nonzero(parity == 1)[0]]
        split = []
        for side in (0, 1):
            idxs = cls[side]
            if idxs.size == 0:
                return WidthLowerFailure(mask, f"parity class {side} empty")
            pts = [verts[i] for i in idxs]
            if affine_rank(pts) != n:
                return WidthLowerFailure(
                    mask, f"parity class {side} is lower-dimensional")
            split.append(pts)
        # basis of the index-2 sublattice, in lattice coordinates
        j = next(i for i in range(n) if f[i])
        t2 = []
        for i in range(n):
            if i == j:
                t2.append([2 if t == j else 0 for t in range(n)])
            elif f[i]:
                row = [0] * n
                row[i], row[j] = 1, -1
                t2.append(row)
            else:
                row = [0] * n
                row[i] = 1
                t2.append(row)
        t2_inv = xc.inverse_fraction(t2)
        den = xc.common_denominator(x for row in t2_inv for x in row)
        t2_cols = [[int(t2_inv[r][c] * den) for r in range(n)]
                   for c in range(n)]
        for side in (0, 1):
            own, other = split[side], split[1 - side]
            base = own[0]
            own_coords = []
            for p in own:
                half = _solve_half_coords(t2_cols, den,
                                          [a - b for a, b in zip(p, base)])
                assert all(x.denominator == 1 for x in half), \
                    "same-parity difference must lie in the sublattice"
                own_coords.append(tuple(int(x) for x in half))
            for g, _offs, _slices in _two_laminations_of_points(own_coords, n):
                laminations_checked += 1
                vals = set()
                for p in other:
                    half = _solve_half_coords(
                        t2_cols, den, [a - b for a, b in zip(p, base)])
                    vals.add(sum(a * b for a, b in zip(g, half)))
                    if len(vals) >= 3:
                        break
                if len(vals) < 3:
                    return WidthLowerFailure(
                        mask, f"2-lamination of class {side} induces only "
                              f"{len(vals)} laminae", witness=tuple(g))
    return WidthLowerCertificate(total, laminations_checked)
