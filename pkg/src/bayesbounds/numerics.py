"""Quadrature, root finding and small optimizers shared by the other modules.

All integrals needed here are one dimensional. Integrands are called with a
numpy array of abscissae and must return an array of the same shape; a
scalar-only callable is detected and evaluated point by point.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, MaxDepthExceeded
from .prob_core import Pmf

# 15-point Kronrod abscissae (nonnegative half) with the embedded 7-point Gauss rule.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[13, 11, 9]] = _WG[:3]
_GW[7] = _WG[3]

_EPS = np.finfo(float).eps
MAX_INTERVALS = 200_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and truncation settings for :func:`integrate`.

    ``half_width`` is the truncation point used for integrals over the whole
    real line; ``max_depth`` bounds how many times an interval may be halved.
    """

    tol: float = 1e-10
    half_width: float = 60.0
    max_depth: int = 48

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


DEFAULT_SPEC = QuadratureSpec()


def _evaluate(f, x):
    try:
        y = np.asarray(f(x), dtype=float)
    except TypeError:
        y = None
    if y is None or y.shape != x.shape:
        y = np.array([float(f(xi)) for xi in x.ravel()]).reshape(x.shape)
    return y


def _gk15(f, intervals):
    """Apply the Gauss-Kronrod pair to each (a, b) row; one call to ``f``."""
    a = intervals[:, 0:1]
    b = intervals[:, 1:2]
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center + half * _NODES
    y = _evaluate(f, x)
    if not np.all(np.isfinite(y)):
        raise ValueError("integrand returned a non-finite value")
    kron = half[:, 0] * (y @ _KW)
    gauss = half[:, 0] * (y @ _GW)
    scale = np.abs(half[:, 0]) * (np.abs(y) @ _KW)
    err = np.abs(kron - gauss)
    # below round-off level the estimate carries no information
    err = np.where(err <= 50 * _EPS * scale, 0.0, err)
    return kron, err


def integrate(f, a, b, spec=DEFAULT_SPEC, points=()):
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``spec.tol``.

    Globally adaptive: the interval with the largest error estimate is halved
    until the summed estimate drops below the tolerance. ``points`` are
    known kinks or peaks inside ``(a, b)`` and seed the initial partition.

    Raises MaxDepthExceeded (carrying the estimate and error bound) when an
    interval would have to be split more than ``spec.max_depth`` times.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    cuts = sorted({float(p) for p in points if a < p < b})
    edges = [a, *cuts, b]
    init = np.array(list(zip(edges[:-1], edges[1:])))
    vals, errs = _gk15(f, init)

    heap = []
    for i, (lo, hi) in enumerate(init):
        heap.append((-errs[i], lo, hi, 0, vals[i]))
    heapq.heapify(heap)
    total_err = float(errs.sum())

    while total_err > spec.tol and heap[0][0] < 0:
        neg_err, lo, hi, depth, _ = heap[0]
        if depth >= spec.max_depth or len(heap) > MAX_INTERVALS:
            est = math.fsum(v for *_, v in heap)
            raise MaxDepthExceeded(
                f"quadrature on [{a}, {b}] did not reach tol {spec.tol} "
                f"(error estimate {total_err:.3g})",
                sign * est,
                total_err,
            )
        heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        kids = np.array([[lo, mid], [mid, hi]])
        kv, ke = _gk15(f, kids)
        for j in range(2):
            heapq.heappush(heap, (-ke[j], kids[j, 0], kids[j, 1], depth + 1, kv[j]))
        total_err += float(ke.sum()) + float(neg_err)
        if total_err <= spec.tol:
            # running sum drifts; confirm with an exact recount before stopping
            total_err = math.fsum(-e for e, *_ in heap)

    # fixed summation order keeps the result independent of heap history
    pieces = sorted((lo, v) for _, lo, _, _, v in heap)
    return sign * math.fsum(v for _, v in pieces)


def integrate_real_line(f, spec=DEFAULT_SPEC, points=()):
    """Integrate over ``[-T, T]`` with ``T = spec.half_width``.

    The caller is responsible for the tails beyond ``T`` being negligible.
    """
    t = spec.half_width
    return integrate(f, -t, t, spec, points)


def _bisect(f, lo, hi, flo, xtol=1e-10):
    slo = np.sign(flo)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if np.sign(fm) == slo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_roots(f, a, b, scan_step):
    """Locate sign changes of ``f`` on ``[a, b]``.

    The interval is scanned on a uniform grid, every bracketed sign change is
    refined by bisection to 1e-10, and each interior sample where ``|f|``
    has a local minimum is probed with a golden-section search so that a
    pair of crossings falling between two grid points is still found.
    Touching zeros (no strict sign change) are not reported. Crossings
    closer together than the resolution of that probe may still merge.
    """
    if not scan_step > 0:
        raise ValueError("scan_step must be positive")
    n = max(1, int(math.ceil((b - a) / scan_step - 1e-9)))
    x = a + scan_step * np.arange(n + 1, dtype=float)
    x[-1] = b
    v = _evaluate(f, x)
    s = np.sign(v)
    roots = []

    nz = np.flatnonzero(s != 0)
    for j, k in zip(nz[:-1], nz[1:]):
        if s[j] == s[k]:
            continue
        if k == j + 1:
            roots.append(_bisect(f, x[j], x[k], v[j]))
        else:
            roots.append(float(0.5 * (x[j + 1] + x[k - 1])))

    av = np.abs(v)
    for i in range(1, n):
        if s[i] == 0 or s[i - 1] != s[i] or s[i + 1] != s[i]:
            continue
        if not (av[i] < av[i - 1] and av[i] <= av[i + 1]):
            continue
        sgn = s[i]
        xm, fm = minimize_scalar(lambda t: sgn * float(f(t)), x[i - 1], x[i + 1], 1e-13)
        if fm < 0:
            roots.append(_bisect(f, x[i - 1], xm, v[i - 1]))
            roots.append(_bisect(f, xm, x[i + 1], sgn * fm))
    return sorted(float(r) for r in roots)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(f, a, b, tol=1e-8):
    """Golden-section search for the minimum of ``f`` on ``[a, b]``.

    Exact for unimodal ``f``; otherwise returns some local minimum. The
    endpoints are compared at the end so boundary minima are returned
    exactly. Returns ``(argmin, min)``.
    """
    lo, hi = float(min(a, b)), float(max(a, b))
    fa, fb = f(lo), f(hi)
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    xm = 0.5 * (lo + hi)
    best = (f(xm), xm)
    best = min(best, (fc, c), (fd, d))
    if fa <= best[0]:
        best = (fa, float(min(a, b)))
    if fb < best[0]:
        best = (fb, float(max(a, b)))
    return best[1], best[0]


def _simplex_grid(dim, n):
    # stars and bars: every composition of n into dim nonnegative parts
    for bars in itertools.combinations(range(n + dim - 1), dim - 1):
        prev = -1
        parts = []
        for bar in bars:
            parts.append(bar - prev - 1)
            prev = bar
        parts.append(n + dim - 2 - prev)
        yield np.array(parts, dtype=float) / n


def maximize_over_simplex(f, dim, tol=1e-10):
    """Maximize ``f(Pmf)`` over the probability simplex of dimension ``dim``.

    For ``dim == 2`` this is a golden-section search on the first weight
    (``tol`` applies). For ``dim <= 6`` a grid of step 0.05 is refined four
    times by a factor of 5 around the incumbent. The grid search is a
    heuristic, not a certified global optimum.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if dim > 6:
        raise DimensionTooLarge(f"simplex search supports dim <= 6, got {dim}")

    def g(w):
        return float(f(Pmf(w)))

    if dim == 2:
        x, fx = minimize_scalar(lambda t: -g(np.array([t, 1.0 - t])), 0.0, 1.0, tol)
        return Pmf([x, 1.0 - x]), -fx

    best_w, best_v = None, -math.inf
    for w in _simplex_grid(dim, 20):
        val = g(w)
        if val > best_v:
            best_w, best_v = w, val

    step = 0.05
    offsets = np.array(list(itertools.product(range(-5, 6), repeat=dim - 1)), dtype=float)
    for _ in range(4):
        step /= 5.0
        head = best_w[:-1] + step * offsets
        tail = 1.0 - head.sum(axis=1)
        cand = np.column_stack([head, tail])
        ok = np.all(cand >= -1e-12, axis=1)
        for w in np.clip(cand[ok], 0.0, None):
            w = w / w.sum()
            val = g(w)
            if val > best_v:
                best_w, best_v = w, val
    return Pmf(best_w), best_v
