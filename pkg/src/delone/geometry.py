"""Delaunay cells, empty spheres, tessellation traversal, covering radius.

Vectors are handled in lattice coordinates throughout (integer tuples for
lattice points, Fraction tuples for centers). Convex-hull work is done in
lattice coordinates too, since facial structure is affine-invariant.
"""
from __future__ import annotations

import hashlib
import os
import struct
from fractions import Fraction
from functools import cached_property

from . import exactcore as xc
from .enumeration import EnumContext, ball_points, closest_points
from .errors import FileFormatError, PreconditionError
from .lattice import Lattice, read_lattice, write_lattice

_ENUM_CACHE: dict[tuple, EnumContext] = {}


def enum_context(lat: Lattice) -> EnumContext:
    key = lat.gram
    ctx = _ENUM_CACHE.get(key)
    if ctx is None:
        ctx = EnumContext([list(r) for r in lat.gram])
        _ENUM_CACHE[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# vector list cache (DELONE_CACHE_DIR)
# ---------------------------------------------------------------------------

_CACHE_MAGIC = b"DLNEVEC1"


def _gram_hash(lat: Lattice, norm: Fraction) -> str:
    h = hashlib.sha256()
    h.update(f"{lat.rank}|{norm}|".encode())
    for row in lat.gram:
        h.update(("|".join(xc.rat_str(x) for x in row) + ";").encode())
    return h.hexdigest()


def _cache_path(lat: Lattice, norm: Fraction):
    root = os.environ.get("DELONE_CACHE_DIR")
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, f"minvec-{_gram_hash(lat, norm)}.bin")


def _cache_load(path, rank):
    try:
        with open(path, "rb") as fh:
            if fh.read(8) != _CACHE_MAGIC:
                return None
            stored_rank, count = struct.unpack("<II", fh.read(8))
            if stored_rank != rank:
                return None
            data = fh.read(4 * rank * count)
            if len(data) != 4 * rank * count:
                return None
            vals = struct.unpack(f"<{rank * count}i", data)
            return [tuple(vals[i * rank:(i + 1) * rank]) for i in range(count)]
    except OSError:
        return None


def _cache_store(path, rank, vectors):
    if any(abs(c) >= 1 << 31 for v in vectors for c in v):
        return
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<II", rank, len(vectors)))
        for v in vectors:
            fh.write(struct.pack(f"<{rank}i", *v))
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# enumeration-backed operations
# ---------------------------------------------------------------------------

def vectors_of_norm(lat: Lattice, q) -> list[tuple[int, ...]]:
    """All lattice vectors of norm exactly q, canonically sorted."""
    q = Fraction(q)
    if q <= 0:
        raise PreconditionError("norm must be positive")
    path = _cache_path(lat, q)
    if path and os.path.exists(path):
        cached = _cache_load(path, lat.rank)
        if cached is not None:
            return cached
    pts = ball_points(enum_context(lat), [0] * lat.rank, q, symmetric=True)
    out = sorted(c for c, d in pts if d == q)
    if path:
        _cache_store(path, lat.rank, out)
    return out


def shortest_vectors(lat: Lattice) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Minimal nonzero norm and every vector achieving it."""
    ctx = enum_context(lat)
    res = closest_points(ctx, [Fraction(0)] * lat.rank, exclude_zero=True)
    norm = res[0]
    return norm, vectors_of_norm(lat, norm)


def closest_vectors(lat: Lattice, x, initial_bound=None):
    """All lattice points at minimal distance from a rational point.

    `x` is given in lattice coordinates. Returns (dist_sq, sorted points).
    """
    x = [Fraction(t) for t in x]
    if len(x) != lat.rank:
        raise PreconditionError("point must have one coordinate per basis vector")
    d, pts = closest_points(enum_context(lat), x, initial_bound=initial_bound)
    return d, sorted(pts)


def first_point_within(lat: Lattice, x, bound) -> tuple[int, ...] | None:
    """Some lattice point within the given squared distance, or None."""
    res = closest_points(enum_context(lat), [Fraction(t) for t in x],
                         initial_bound=Fraction(bound), stop_first=True,
                         shrink=False)
    if res is None:
        return None
    return res[1][0]


class EmptySphereCertificate:
    """Outcome of an exact empty-sphere check."""

    __slots__ = ("center", "radius_sq", "boundary", "interior")

    def __init__(self, center, radius_sq, boundary, interior):
        self.center = tuple(Fraction(c) for c in center)
        self.radius_sq = Fraction(radius_sq)
        self.boundary = tuple(boundary)
        self.interior = tuple(interior)

    @property
    def empty(self) -> bool:
        return not self.interior

    def __repr__(self):
        return (f"EmptySphereCertificate(empty={self.empty}, "
                f"boundary={len(self.boundary)}, interior={len(self.interior)})")


def verify_empty_sphere(lat: Lattice, center, radius_sq) -> EmptySphereCertificate:
    """Enumerate the closed ball and split it into boundary and interior."""
    center = [Fraction(c) for c in center]
    radius_sq = Fraction(radius_sq)
    pts = ball_points(enum_context(lat), center, radius_sq)
    boundary = sorted(c for c, d in pts if d == radius_sq)
    interior = sorted(c for c, d in pts if d < radius_sq)
    return EmptySphereCertificate(center, radius_sq, boundary, interior)


# ---------------------------------------------------------------------------
# circumsphere and cells
# ---------------------------------------------------------------------------

def affinely_independent_subset(points, limit=None):
    """Indices of a maximal (or size-limited) affinely independent subset."""
    if not points:
        return []
    idx = [0]
    dirs = []
    dim = len(points[0])
    for i in range(1, len(points)):
        if limit is not None and len(idx) >= limit:
            break
        cand = [Fraction(a) - Fraction(b) for a, b in zip(points[i], points[0])]
        red = list(cand)
        for d in dirs:
            piv = next((t for t in range(dim) if d[t]), None)
            if piv is not None and red[piv]:
                f = red[piv] / d[piv]
                red = [a - f * b for a, b in zip(red, d)]
        if any(red):
            idx.append(i)
            dirs.append(red)
    return idx


def affine_rank(points) -> int:
    """Dimension of the affine span of the given points."""
    return len(affinely_independent_subset(points)) - 1 if points else -1


def circumsphere(points, gram) -> tuple[tuple[Fraction, ...], Fraction]:
    """Center (in the affine span) equidistant from all points, plus radius^2.

    Raises when the points are not co-spherical within their span.
    """
    if not points:
        raise PreconditionError("no points")
    gram = xc.as_matrix(gram).tolists()
    pts = [list(map(Fraction, p)) for p in points]
    ind = affinely_independent_subset(pts)
    p0 = pts[ind[0]]
    dirs = [[a - b for a, b in zip(pts[i], p0)] for i in ind[1:]]
    k = len(dirs)
    if k == 0:
        return tuple(p0), Fraction(0)
    gdirs = [xc.mat_vec(gram, d) for d in dirs]
    a = [[2 * xc.vec_dot(dirs[i], gdirs[j]) for j in range(k)] for i in range(k)]
    b = [xc.vec_dot(dirs[i], gdirs[i]) for i in range(k)]
    lam = xc.solve_fraction(a, b)
    if lam is None:
        raise PreconditionError("degenerate circumsphere system")
    center = list(p0)
    for l, d in zip(lam, dirs):
        if l:
            for t in range(len(center)):
                center[t] += l * d[t]
    diff0 = [x - c for x, c in zip(pts[0], center)]
    r2 = xc.vec_dot(diff0, xc.mat_vec(gram, diff0))
    for p in pts[1:]:
        diff = [x - c for x, c in zip(p, center)]
        if xc.vec_dot(diff, xc.mat_vec(gram, diff)) != r2:
            raise PreconditionError("points are not co-spherical")
    return tuple(center), r2


class DelaunayCell:
    """A Delaunay polytope: empty sphere plus the lattice points on it."""

    def __init__(self, lattice: Lattice, center, radius_sq, vertices,
                 certified=False):
        self.lattice = lattice
        self.center = tuple(Fraction(c) for c in center)
        self.radius_sq = Fraction(radius_sq)
        self.vertices = tuple(sorted(tuple(int(c) for c in v)
                                     for v in vertices))
        self.certified = certified
        # exact equidistance check; sampled for very large vertex sets whose
        # construction path already guarantees it
        check = self.vertices if len(self.vertices) <= 2048 else \
            self.vertices[::max(1, len(self.vertices) // 256)]
        for v in check:
            diff = [a - b for a, b in zip(v, self.center)]
            if lattice.norm_of(diff) != self.radius_sq:
                raise PreconditionError("vertex off the sphere")

    @property
    def nvertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def dim(self) -> int:
        return affine_rank(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.lattice.rank

    def translate(self, shift) -> "DelaunayCell":
        shift = tuple(int(s) for s in shift)
        return DelaunayCell(
            self.lattice,
            [c + s for c, s in zip(self.center, shift)],
            self.radius_sq,
            [tuple(a + s for a, s in zip(v, shift)) for v in self.vertices],
            certified=self.certified)

    def translation_key(self):
        """Lexicographically minimal translated vertex list (canonical form)."""
        best = None
        for v in self.vertices:
            cand = tuple(sorted(tuple(a - b for a, b in zip(w, v))
                                for w in self.vertices))
            if best is None or cand < best:
                best = cand
        return best

    def verify_empty(self) -> EmptySphereCertificate:
        cert = verify_empty_sphere(self.lattice, self.center, self.radius_sq)
        if cert.empty and cert.boundary == self.vertices:
            self.certified = True
        return cert

    def __eq__(self, other):
        return (isinstance(other, DelaunayCell)
                and self.lattice == other.lattice
                and self.center == other.center
                and self.radius_sq == other.radius_sq
                and self.vertices == other.vertices)

    def __repr__(self):
        return (f"DelaunayCell(n={self.nvertices}, dim={self.dim}, "
                f"r2={xc.rat_str(self.radius_sq)})")


def delaunay_cell(lat: Lattice, x, initial_bound=None) -> DelaunayCell:
    """Delaunay cell determined by a rational point (lattice coordinates).

    Vertices are the closest lattice points; the stored center is the
    circumcenter of the vertex set inside its affine span (equal to x for a
    full-dimensional cell). If recentring a lower-dimensional cell would
    break emptiness the original point is kept as center.
    """
    x = [Fraction(t) for t in x]
    dist, verts = closest_vectors(lat, x, initial_bound=initial_bound)
    center, r2 = circumsphere(verts, lat.gram)
    if (center, r2) != (tuple(x), dist):
        probe = ball_points(enum_context(lat), list(center), r2)
        if any(d < r2 for _, d in probe):
            center, r2 = tuple(x), dist
    return DelaunayCell(lat, center, r2, verts, certified=True)


# ---------------------------------------------------------------------------
# exact convex hull (gift wrapping) in lattice coordinates
# ---------------------------------------------------------------------------

def _primitive_functional(a, b):
    den = xc.common_denominator(list(a) + [b])
    ai = [int(Fraction(x) * den) for x in a]
    bi = int(Fraction(b) * den)
    g = xc.gcd_vector(ai + [bi])
    if g:
        ai = [x // g for x in ai]
        bi = bi // g
    return tuple(ai), bi


def _kernel_of_directions(dirs, dim):
    if not dirs:
        return [tuple(1 if i == j else 0 for j in range(dim))
                for i in range(dim)]
    return xc.kernel_rational(dirs)


def hull_facets(points):
    """Facets of conv(points) for a full-dimensional point set.

    Returns a list of (functional, offset, vertex_index_tuple) with integer
    primitive functionals satisfying functional . x <= offset on all points
    and equality exactly on the facet.
    """
    pts = [tuple(map(Fraction, p)) for p in points]
    dim = len(pts[0])
    npts = len(pts)
    if affine_rank(pts) != dim:
        raise PreconditionError("hull_facets requires a full-dimensional set")
    if dim == 1:
        lo = min(range(npts), key=lambda i: pts[i])
        hi = max(range(npts), key=lambda i: pts[i])
        af, bf = _primitive_functional([Fraction(-1)], -pts[lo][0])
        ag, bg = _primitive_functional([Fraction(1)], pts[hi][0])
        out = [(af, bf, (lo,)), (ag, bg, (hi,))]
        return sorted(out)

    def face_of(a):
        vals = [xc.vec_dot(a, p) for p in pts]
        b = max(vals)
        return b, [i for i, v in enumerate(vals) if v == b]

    def rotate_to_facet(a, face):
        while True:
            fpts = [pts[i] for i in face]
            if affine_rank(fpts) == dim - 1:
                return a, face
            dirs = [[p[t] - fpts[0][t] for t in range(dim)] for p in fpts[1:]]
            kern = _kernel_of_directions(dirs, dim) if dirs else \
                _kernel_of_directions([], dim)
            cand = None
            for kv in kern:
                if not _parallel(kv, a):
                    cand = [Fraction(x) for x in kv]
                    break
            assert cand is not None, "no rotation direction found"
            base = fpts[0]
            chat = [xc.vec_dot(cand, p) - xc.vec_dot(cand, base) for p in pts]
            if not any(c > 0 for c in chat):
                cand = [-x for x in cand]
                chat = [-c for c in chat]
            bval = max(xc.vec_dot(a, p) for p in pts)
            ahat = [xc.vec_dot(a, p) - bval for p in pts]
            smin = None
            for i in range(npts):
                if chat[i] > 0:
                    s = -ahat[i] / chat[i]
                    if smin is None or s < smin:
                        smin = s
            a = [x + smin * y for x, y in zip(a, cand)]
            _, face = face_of(a)

    def _parallel(u, v):
        piv = next((t for t in range(dim) if Fraction(u[t]) != 0 or
                    Fraction(v[t]) != 0), None)
        if piv is None:
            return True
        return all(Fraction(u[i]) * Fraction(v[piv]) ==
                   Fraction(v[i]) * Fraction(u[piv]) for i in range(dim))

    start = [Fraction(1)] + [Fraction(0)] * (dim - 1)
    _, f0 = face_of(start)
    a0, face0 = rotate_to_facet(list(start), f0)
    b0 = xc.vec_dot(a0, pts[face0[0]])
    first = _primitive_functional(a0, b0)

    seen = {first: tuple(sorted(face0))}
    queue = [first]
    while queue:
        key = queue.pop()
        a, b = key
        face = seen[key]
        fpts = [pts[i] for i in face]
        for ridge in _sub_facets(fpts, face, facet_dim=dim - 1):
            rpts = [pts[i] for i in ridge]
            dirs = [[p[t] - rpts[0][t] for t in range(dim)]
                    for p in rpts[1:]]
            kern = _kernel_of_directions(dirs, dim)
            cand = next(([Fraction(x) for x in kv] for kv in kern
                         if not _parallel(kv, a)), None)
            assert cand is not None
            base = rpts[0]
            cb = xc.vec_dot(cand, base)
            inner = next(i for i in face if i not in set(ridge))
            if xc.vec_dot(cand, pts[inner]) - cb > 0:
                cand = [-x for x in cand]
                cb = -cb
            # rotate within the pencil {alpha*a + beta*cand} around the ridge:
            # the second facet through the ridge is the other extreme ray of
            # the supporting cone
            smin = None
            for i in range(npts):
                ch = xc.vec_dot(cand, pts[i]) - cb
                if ch > 0:
                    ah = xc.vec_dot(a, pts[i]) - b
                    s = -ah / ch
                    if smin is None or s < smin:
                        smin = s
            if smin is not None:
                assert smin > 0
                a2 = [Fraction(x) + smin * y for x, y in zip(a, cand)]
            else:
                # every c-value is <= 0: continue the rotation past cand,
                # with functionals cand - t*a limited by the near side
                tmin = None
                for i in range(npts):
                    ah = xc.vec_dot(a, pts[i]) - b
                    if ah < 0:
                        ch = xc.vec_dot(cand, pts[i]) - cb
                        t = ch / ah
                        if tmin is None or t < tmin:
                            tmin = t
                assert tmin is not None, "polytope is not full-dimensional"
                a2 = [y - tmin * Fraction(x) for x, y in zip(a, cand)]
            b2 = xc.vec_dot(a2, pts[ridge[0]])
            key2 = _primitive_functional(a2, b2)
            if key2 not in seen:
                vals = [xc.vec_dot(key2[0], p) for p in pts]
                face2 = tuple(sorted(i for i, v in enumerate(vals)
                                     if v == key2[1]))
                assert max(vals) == key2[1]
                seen[key2] = face2
                queue.append(key2)
    return [(k[0], k[1], v) for k, v in sorted(seen.items())]


def _sub_facets(fpts, face_indices, facet_dim=None):
    """Ridges of a facet, as tuples of original point indices."""
    if len(fpts) == 2:
        return [(face_indices[0],), (face_indices[1],)]
    if facet_dim is not None and len(fpts) == facet_dim + 1:
        # simplex facet: ridges are the drop-one-vertex subsets
        return [tuple(face_indices[j] for j in range(len(fpts)) if j != i)
                for i in range(len(fpts))]
    ind = affinely_independent_subset(fpts)
    p0 = fpts[ind[0]]
    dirs = [[Fraction(a) - Fraction(b) for a, b in zip(fpts[i], p0)]
            for i in ind[1:]]
    # coordinates of facet points w.r.t. the affine frame (exact solve)
    dim = len(dirs)
    gram = [[xc.vec_dot(u, v) for v in dirs] for u in dirs]
    ginv = xc.inverse_fraction(gram)
    local = []
    for p in fpts:
        diff = [Fraction(a) - Fraction(b) for a, b in zip(p, p0)]
        proj = [xc.vec_dot(diff, d) for d in dirs]
        local.append(tuple(xc.mat_vec(ginv, proj)))
    subs = hull_facets(local) if dim >= 1 else []
    return [tuple(face_indices[i] for i in idxs) for _, _, idxs in subs]


class Facet:
    """A facet of a full-dimensional Delaunay cell."""

    __slots__ = ("cell", "vertex_indices", "functional", "offset")

    def __init__(self, cell, vertex_indices, functional, offset):
        self.cell = cell
        self.vertex_indices = tuple(vertex_indices)
        self.functional = tuple(int(x) for x in functional)
        self.offset = int(offset)

    def __repr__(self):
        return f"Facet(|verts|={len(self.vertex_indices)}, a={self.functional})"


def cell_facets(cell: DelaunayCell) -> list[Facet]:
    if not cell.is_full_dimensional:
        raise PreconditionError("facets require a full-dimensional cell")
    return [Facet(cell, idxs, a, b)
            for a, b, idxs in hull_facets(cell.vertices)]


def _pivot_sphere(lat: Lattice, center, r2, direction, beta, witness=None):
    """Pivot an empty sphere along a direction, exactly.

    The sphere (center, r2) has its boundary lattice points all at constant
    Gram inner product beta with `direction`. The center moves to
    center + t*direction for the minimal t > 0 at which a lattice point with
    inner product > beta becomes co-spherical. Returns (t, new_center,
    new_r2); None when the far side never meets the sphere family.

    A witness point on the far side seeds the search radius; any point w with
    pivot parameter <= t0 lies inside the ball at t0, so one enumeration at
    the witness parameter is conclusive.
    """
    gram = [list(r) for r in lat.gram]
    nu = list(direction)
    gnu = xc.mat_vec(gram, nu)
    nn = xc.vec_dot(nu, gnu)
    c = [Fraction(x) for x in center]
    gc = xc.vec_dot(c, gnu)
    drop = 2 * (beta - gc)
    ctx = enum_context(lat)

    def param_of(w):
        dw = xc.vec_dot(w, gnu)
        if dw <= beta:
            return None
        diff = [wi - ci for wi, ci in zip(w, c)]
        d2 = xc.vec_dot(diff, xc.mat_vec(gram, diff))
        return (d2 - r2) / (2 * (dw - beta))

    if witness is not None:
        t0 = param_of(witness)
        assert t0 is not None
    else:
        t0 = r2 / nn if nn > r2 else Fraction(1)
    for _ in range(64):
        center_t = [ci + t0 * ni for ci, ni in zip(c, nu)]
        rad_t = r2 - t0 * drop + t0 * t0 * nn
        tmin = None
        for w, _ in ball_points(ctx, center_t, rad_t):
            t = param_of(w)
            if t is not None and (tmin is None or t < tmin):
                tmin = t
        if tmin is not None and tmin <= t0:
            new_center = [ci + tmin * ni for ci, ni in zip(c, nu)]
            new_r2 = r2 - tmin * drop + tmin * tmin * nn
            return tmin, new_center, new_r2
        t0 *= 2
    return None


def adjacent_cell(lat: Lattice, cell: DelaunayCell, facet: Facet) -> DelaunayCell:
    """The unique Delaunay cell on the far side of a facet.

    The empty-sphere center is pivoted along the facet normal by the exact
    rational parameter at which the first far-side lattice point becomes
    co-spherical.
    """
    a = [Fraction(x) for x in facet.functional]
    b = Fraction(facet.offset)
    nu = xc.mat_vec(cell.lattice.gram_inverse, a)  # <nu, x>_G = a . x
    if xc.vec_dot(a, cell.center) >= b:
        raise PreconditionError("facet functional does not separate the center")
    # witness on the far side: a facet vertex plus a basis step crossing it
    v0 = cell.vertices[facet.vertex_indices[0]]
    step = max(range(lat.rank), key=lambda i: abs(a[i]))
    sgn = 1 if a[step] > 0 else -1
    witness = tuple(v0[i] + (sgn if i == step else 0) for i in range(lat.rank))
    piv = _pivot_sphere(lat, cell.center, cell.radius_sq, nu, b,
                        witness=witness)
    if piv is None:
        raise PreconditionError("no cell across this facet")
    _, new_center, new_r2 = piv
    cell2 = delaunay_cell(lat, new_center, initial_bound=new_r2)
    facet_verts = {cell.vertices[i] for i in facet.vertex_indices}
    assert facet_verts.issubset(set(cell2.vertices))
    return cell2


def cell_at_generic_point(lat: Lattice, x) -> DelaunayCell:
    """Grow a full-dimensional Delaunay cell from an arbitrary start point.

    The empty sphere around the closest-vector set of x is pivoted along
    directions orthogonal (in the Gram metric) to its current boundary until
    the boundary spans the whole space.
    """
    dist, pts = closest_vectors(lat, x)
    boundary = list(pts)
    center = [Fraction(t) for t in x]
    r2 = dist
    gram = [list(r) for r in lat.gram]
    n = lat.rank
    while affine_rank(boundary) < n:
        p0 = boundary[0]
        dirs = [[a - b for a, b in zip(p, p0)] for p in boundary[1:]]
        gdirs = [xc.mat_vec(gram, d) for d in dirs] if dirs else []
        # also stay centered: move only within the affine hull's normal space
        constraints = gdirs
        if constraints:
            kern = xc.kernel_rational(constraints)
        else:
            kern = [tuple(1 if i == j else 0 for j in range(n))
                    for i in range(n)]
        direction = [Fraction(k) for k in kern[0]]
        beta = xc.vec_dot(xc.mat_vec(gram, direction), p0)
        piv = _pivot_sphere(lat, center, r2, direction, beta)
        if piv is None:
            piv = _pivot_sphere(lat, center, r2,
                                [-d for d in direction], -beta)
        assert piv is not None, "pivot failed in both directions"
        _, center, r2 = piv
        bound = ball_points(enum_context(lat), center, r2)
        boundary = sorted(c for c, d2 in bound if d2 == r2)
        assert not any(d2 < r2 for _, d2 in bound)
    ctr, rr = circumsphere(boundary, lat.gram)
    return delaunay_cell(lat, ctr, initial_bound=rr)


# ---------------------------------------------------------------------------
# tessellation and covering radius
# ---------------------------------------------------------------------------

def _start_point(lat: Lattice, attempt: int):
    import random as _random
    seed = int(_gram_hash(lat, Fraction(0))[:12], 16) + attempt
    rng = _random.Random(seed)
    den = (1 << (3 + attempt)) * 3
    return [Fraction(rng.randrange(1, den), den) for _ in range(lat.rank)]


def tessellate(lat: Lattice, max_rank_guard: int = 8,
               allow_large: bool = False) -> list[DelaunayCell]:
    """All translation classes of full-dimensional Delaunay cells.

    Facet-adjacency closure from a cell at a generic start point. Classes are
    canonicalized up to lattice translation only.
    """
    if lat.rank > max_rank_guard and not allow_large:
        raise PreconditionError(
            f"tessellation of rank {lat.rank} exceeds the guard "
            f"({max_rank_guard}); pass allow_large to override")
    cell = None
    for attempt in range(24):
        cand = cell_at_generic_point(lat, _start_point(lat, attempt))
        if cand.is_full_dimensional:
            cell = cand
            break
    if cell is None:
        raise PreconditionError("no full-dimensional start cell found")
    first = _canonical_translate(cell)
    classes = {first.translation_key(): first}
    queue = [first]
    while queue:
        cur = queue.pop()
        for facet in cell_facets(cur):
            nb = adjacent_cell(lat, cur, facet)
            nb = _canonical_translate(nb)
            key = nb.translation_key()
            if key not in classes:
                classes[key] = nb
                queue.append(nb)
    return [classes[k] for k in sorted(classes)]


def _canonical_translate(cell: DelaunayCell) -> DelaunayCell:
    key = cell.translation_key()
    for v in cell.vertices:
        cand = tuple(sorted(tuple(a - b for a, b in zip(w, v))
                            for w in cell.vertices))
        if cand == key:
            return cell.translate([-x for x in v])
    raise AssertionError("translation key must come from a vertex shift")


def covering_radius(lat: Lattice, max_rank_guard: int = 8,
                    allow_large: bool = False) -> Fraction:
    """Squared covering radius via the full Delaunay tessellation."""
    cells = tessellate(lat, max_rank_guard=max_rank_guard,
                       allow_large=allow_large)
    return max(c.radius_sq for c in cells)


def cell_volume(cell_or_points) -> Fraction:
    """Exact volume (in lattice coordinates) of a full-dimensional polytope."""
    pts = (cell_or_points.vertices if isinstance(cell_or_points, DelaunayCell)
           else [tuple(p) for p in cell_or_points])
    dim = len(pts[0])
    simplices = _triangulate(list(pts))
    total = Fraction(0)
    fact = 1
    for k in range(2, dim + 1):
        fact *= k
    for simplex in simplices:
        mat = [[Fraction(a) - Fraction(b) for a, b in zip(p, simplex[0])]
               for p in simplex[1:]]
        total += abs(xc.det_fraction(mat))
    return total / fact


def _triangulate(pts):
    dim = len(pts[0])
    if affine_rank(pts) != dim:
        raise PreconditionError("volume requires a full-dimensional set")
    if dim == 1:
        xs = sorted(pts)
        return [(xs[0], xs[-1])]
    apex = min(pts)
    out = []
    for a, b, idxs in hull_facets(pts):
        fverts = [pts[i] for i in idxs]
        if xc.vec_dot(a, apex) == b:
            continue
        for sub in _facet_triangulation(fverts):
            out.append((apex,) + sub)
    return out


def _facet_triangulation(fpts):
    ind = affinely_independent_subset(fpts)
    p0 = fpts[ind[0]]
    dirs = [[Fraction(a) - Fraction(b) for a, b in zip(fpts[i], p0)]
            for i in ind[1:]]
    dim = len(dirs)
    if dim == 0:
        return [(fpts[0],)]
    gram = [[xc.vec_dot(u, v) for v in dirs] for u in dirs]
    ginv = xc.inverse_fraction(gram)
    local = []
    for p in fpts:
        diff = [Fraction(a) - Fraction(b) for a, b in zip(p, p0)]
        proj = [xc.vec_dot(diff, d) for d in dirs]
        local.append(tuple(xc.mat_vec(ginv, proj)))
    subs = _triangulate(local)
    back = {tuple(l): tuple(p) for l, p in zip(local, fpts)}
    return [tuple(back[tuple(q)] for q in s) for s in subs]


# ---------------------------------------------------------------------------
# polytope text format
# ---------------------------------------------------------------------------

def write_cell(cell: DelaunayCell, path, lattice_path) -> None:
    lat_abs = os.path.join(os.path.dirname(os.path.abspath(path)),
                           lattice_path)
    write_lattice(cell.lattice, lat_abs)
    lines = [f"lattice-file {lattice_path}",
             f"delaunay {cell.lattice.rank} {cell.nvertices}",
             "center " + " ".join(xc.rat_str(c) for c in cell.center),
             "radius_sq " + xc.rat_str(cell.radius_sq)]
    for v in cell.vertices:
        lines.append(" ".join(str(c) for c in v))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_cell(path) -> DelaunayCell:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if len(raw) < 4 or not raw[0].startswith("lattice-file "):
        raise FileFormatError(f"{path}: missing lattice-file line")
    lat_path = raw[0].split(None, 1)[1]
    lat = read_lattice(os.path.join(os.path.dirname(os.path.abspath(path)),
                                    lat_path))
    head = raw[1].split()
    if len(head) != 3 or head[0] != "delaunay":
        raise FileFormatError(f"{path}: malformed delaunay header")
    try:
        rank, nverts = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FileFormatError(f"{path}: malformed delaunay header") from exc
    if rank != lat.rank:
        raise FileFormatError(f"{path}: rank disagrees with lattice file")
    if not raw[2].startswith("center "):
        raise FileFormatError(f"{path}: missing center line")
    if not raw[3].startswith("radius_sq "):
        raise FileFormatError(f"{path}: missing radius_sq line")
    try:
        center = [Fraction(t) for t in raw[2].split()[1:]]
        radius_sq = Fraction(raw[3].split()[1])
        verts = [tuple(int(t) for t in ln.split()) for ln in raw[4:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(f"{path}: bad numeric field") from exc
    if len(center) != rank or any(len(v) != rank for v in verts):
        raise FileFormatError(f"{path}: wrong coordinate count")
    if len(verts) != nverts:
        raise FileFormatError(f"{path}: vertex count mismatch")
    try:
        return DelaunayCell(lat, center, radius_sq, verts)
    except PreconditionError as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
