"""Exact lattice-point enumeration (Fincke-Pohst with integer-scaled bounds).

The quadratic form is decomposed exactly (LDL over the rationals); per call
everything is rescaled to plain integers so the inner loop does only integer
arithmetic and isqrt. No floating point ever decides a comparison; floats are
used solely to pick an enumeration order.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import exactcore as xc
from .errors import PreconditionError


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class EnumContext:
    """Reusable enumeration data for one positive definite Gram matrix."""

    def __init__(self, gram_rows, reduce=True):
        g0 = [list(map(Fraction, row)) for row in gram_rows]
        self.n = n = len(g0)
        if n == 0:
            raise PreconditionError("empty Gram matrix")
        if reduce:
            gm, t = xc.lll_reduce(g0)
            self.gred = gm.tolists()
            # rows convention: x_orig = x_red * U with U = T^t
            self.U = [[int(x) for x in row] for row in t.transpose().data]
        else:
            xc.ldl_decompose(g0)  # positive definiteness check
            self.gred = g0
            self.U = xc.mat_identity(n)
        self.Uinv = [[int(x) for x in row]
                     for row in xc.inverse_fraction(self.U)]
        self._orders = []
        base_orders = [tuple(range(n)), tuple(reversed(range(n)))]
        diag = [self.gred[i][i] for i in range(n)]
        base_orders.append(tuple(sorted(range(n), key=lambda i: diag[i])))
        base_orders.append(tuple(sorted(range(n), key=lambda i: -diag[i])))
        seen = set()
        for perm in base_orders:
            if perm in seen:
                continue
            seen.add(perm)
            gp = [[self.gred[perm[i]][perm[j]] for j in range(n)]
                  for i in range(n)]
            d, l = xc.ldl_decompose(gp)
            dens, nums = [], []
            for i in range(n):
                den = xc.common_denominator(l[i][i + 1:])
                dens.append(den)
                nums.append([int(l[i][j] * den) if j > i else 0
                             for j in range(n)])
            base = 1
            for i in range(n):
                base = _lcm(base, d[i].denominator * dens[i] * dens[i])
            self._orders.append({
                "perm": perm,
                "D": d,
                "dens": dens,
                "nums": nums,
                "base": base,
                "logD": [math.log(float(x)) for x in d],
            })

    def _pick_order(self, radius_sq: Fraction):
        r = max(float(radius_sq), 1e-30)
        best, best_cost = None, None
        for od in self._orders:
            logs = od["logD"]
            n = self.n
            total = 0.0
            # estimated nodes at depth k: vol(B_k(r)) / prod of sqrt(D) for
            # the innermost-processed k levels (levels n-1 down to n-k)
            acc = 0.0
            for k in range(1, n + 1):
                acc += 0.5 * logs[n - k]
                lognodes = (0.5 * k * math.log(r) + 0.5 * k * math.log(math.pi)
                            - math.lgamma(0.5 * k + 1) - acc)
                total += math.exp(min(lognodes, 60.0))
            if best_cost is None or total < best_cost:
                best, best_cost = od, total
        return best

    # -- coordinate maps ----------------------------------------------------

    def map_to_original(self, leaves, perm):
        """Convert permuted-reduced coordinate rows to original lattice coords."""
        if not leaves:
            return []
        n = self.n
        pu = [self.U[perm[i]] for i in range(n)]
        max_leaf = max(max(abs(c) for c in leaf) for leaf in leaves)
        max_u = max(max(abs(c) for c in row) for row in pu)
        if max_leaf * max_u * n < (1 << 62):
            arr = np.array(leaves, dtype=np.int64)
            mat = np.array(pu, dtype=np.int64)
            out = arr @ mat
            return [tuple(int(v) for v in row) for row in out]
        return [tuple(sum(leaf[i] * pu[i][t] for i in range(n))
                      for t in range(n)) for leaf in leaves]

    def target_to_permuted(self, target, perm):
        tred = [sum(Fraction(target[j]) * self.Uinv[j][i]
                    for j in range(self.n)) for i in range(self.n)]
        return [tred[perm[i]] for i in range(self.n)]

    def _scaled_setup(self, order, target_p, radius_sq: Fraction):
        n = self.n
        s = xc.common_denominator(target_p)
        a = [int(Fraction(t) * s) for t in target_p]
        lam = _lcm(order["base"] * s * s, radius_sq.denominator)
        w, kk, cc, snum = [], [], [], []
        for i in range(n):
            d = order["D"][i]
            den = order["dens"][i]
            w.append(d.numerator * (lam // (d.denominator * den * den * s * s)))
            kk.append(den * s)
            ci = den * a[i]
            row = order["nums"][i]
            for j in range(i + 1, n):
                if row[j]:
                    ci += row[j] * a[j]
            cc.append(ci)
            snum.append([row[j] * s for j in range(n)])
        rtot = radius_sq.numerator * (lam // radius_sq.denominator)
        return s, lam, w, kk, cc, snum, rtot


def ball_points(ctx: EnumContext, target, radius_sq, symmetric=False):
    """All lattice points x with |x - target|^2 <= radius_sq.

    Returns a list of (coords, dist_sq) in original lattice coordinates,
    unsorted. With symmetric=True (target must be 0) only canonical
    representatives are enumerated and mirror images are appended.
    """
    radius_sq = Fraction(radius_sq)
    if radius_sq < 0:
        return []
    n = ctx.n
    order = ctx._pick_order(radius_sq)
    perm = order["perm"]
    target_p = ctx.target_to_permuted(target, perm)
    if symmetric and any(Fraction(t) != 0 for t in target_p):
        raise PreconditionError("symmetric enumeration requires target 0")
    s, lam, W, K, C, SNUM, rtot = ctx._scaled_setup(order, target_p, radius_sq)

    leaves = []
    dists = []
    X = [0] * n
    R = [0] * n           # R[i]: budget available entering level i
    F = [0] * n
    CUR = [0] * n
    HI = [0] * n
    NZ = [0] * n          # nonzero count among fixed levels above i

    i = n - 1
    R[i] = rtot
    NZ[i] = 0
    state = 0  # 0 descend (compute bounds), 1 process, 2 ascend
    while True:
        if state == 0:
            fi = -C[i]
            row = SNUM[i]
            for j in range(i + 1, n):
                xj = X[j]
                if xj:
                    fi += row[j] * xj
            F[i] = fi
            wi = W[i]
            m = math.isqrt(R[i] // wi)
            ki = K[i]
            lo = -((m + fi) // ki)
            hi = (m - fi) // ki
            if symmetric and NZ[i] == 0 and lo < 0:
                lo = 0
            if lo > hi:
                state = 2
            else:
                CUR[i] = lo
                HI[i] = hi
                state = 1
        elif state == 1:
            x = CUR[i]
            e = K[i] * x + F[i]
            rem = R[i] - W[i] * e * e
            if i == 0:
                X[0] = x
                leaves.append(tuple(X))
                dists.append(rtot - rem)
                if x < HI[0]:
                    CUR[0] = x + 1
                else:
                    state = 2
            else:
                X[i] = x
                R[i - 1] = rem
                NZ[i - 1] = NZ[i] + (1 if x else 0)
                i -= 1
                state = 0
        else:
            i += 1
            if i >= n:
                break
            if CUR[i] < HI[i]:
                CUR[i] += 1
                state = 1

    coords = ctx.map_to_original(leaves, perm)
    out = [(c, Fraction(d, lam)) for c, d in zip(coords, dists)]
    if symmetric:
        mirrored = [(tuple(-v for v in c), d) for c, d in out if any(c)]
        out.extend(mirrored)
    return out


def closest_points(ctx: EnumContext, target, initial_bound=None,
                   exclude_zero=False, stop_first=False, shrink=True):
    """Schnorr-Euchner search for closest lattice points to a rational target.

    Returns (dist_sq, [coords...]) with every minimizer, or None when an
    explicit initial_bound excludes all points. With stop_first=True the
    search stops at the first point with distance <= initial_bound (an
    existence check).

    At every level candidates are taken in order of increasing distance from
    the real minimizer (two outward cursors), so the first leaf reached is
    the Babai nearest-plane point and a failed candidate proves the whole
    remaining level fails.
    """
    bound_fr = Fraction(initial_bound) if initial_bound is not None else None
    order = ctx._pick_order(bound_fr if bound_fr is not None else Fraction(1))
    perm = order["perm"]
    target_p = ctx.target_to_permuted(target, perm)
    # Babai's nearest-plane point has cost <= sum(D_i)/4, so this cap always
    # admits at least one leaf when no explicit bound is supplied.
    cap = bound_fr if bound_fr is not None else sum(order["D"])
    res = _se_search(ctx, order, perm, target_p, cap,
                     exclude_zero=exclude_zero, stop_first=stop_first,
                     shrink=shrink)
    if res is None:
        return None
    dist_scaled, leaves, lam = res
    coords = ctx.map_to_original(leaves, perm)
    return Fraction(dist_scaled, lam), coords


def _se_search(ctx, order, perm, target_p, bound_fr, exclude_zero,
               stop_first, shrink):
    n = ctx.n
    s, lam, W, K, C, SNUM, btot = ctx._scaled_setup(order, target_p,
                                                    Fraction(bound_fr))
    best = btot
    found = []

    X = [0] * n
    COST = [0] * n        # accumulated cost above level i
    F = [0] * n
    UP = [0] * n          # next untried candidate above the minimizer
    DN = [0] * n          # next untried candidate below (or at) the minimizer

    i = n - 1
    COST[i] = 0
    state = 0  # 0: enter level, 1: try next candidate, 2: ascend
    while True:
        if state == 0:
            fi = -C[i]
            row = SNUM[i]
            for j in range(i + 1, n):
                xj = X[j]
                if xj:
                    fi += row[j] * xj
            F[i] = fi
            q = -fi // K[i]
            DN[i] = q        # E(q) = K q + fi in (-K, 0]
            UP[i] = q + 1    # E(q+1) in (0, K]
            state = 1
        elif state == 1:
            ki = K[i]
            fi = F[i]
            eu = ki * UP[i] + fi
            ed = ki * DN[i] + fi
            if eu <= -ed:
                x, e = UP[i], eu
                up = True
            else:
                x, e = DN[i], ed
                up = False
            c = COST[i] + W[i] * e * e
            if c > best:
                state = 2  # both cursors only get farther from here on
                continue
            if up:
                UP[i] += 1
            else:
                DN[i] -= 1
            if i == 0:
                X[0] = x
                if not (exclude_zero and not any(X)):
                    if shrink and c < best:
                        best = c
                        found = [tuple(X)]
                    else:
                        found.append(tuple(X))
                    if stop_first:
                        return c, found, lam
            else:
                COST[i - 1] = c
                X[i] = x
                i -= 1
                state = 0
        else:
            i += 1
            if i >= n:
                break
            state = 1
    if not found:
        return None
    return best, found, lam
