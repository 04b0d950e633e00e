"""Binary hypothesis tests with a continuous scalar observation.

The central example pits a cosine-modulated Laplace noise

    f1(t) = (2/3) cos(t/2)**2 exp(-|t|)        (unit variance)

against Gaussian noise ``f2(z) = sqrt(g/pi) exp(-g z**2)`` under equal
priors. Its MAP decision regions are a union of many intervals, so the exact
Bayes risk needs careful quadrature. The harmonic pair, Chernoff and
Bhattacharyya bounds are cheap by comparison.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDensity
from .numerics import DEFAULT_SPEC, QuadratureSpec, find_roots, integrate, minimize_scalar

DENSITY_TOL = 1e-6
BOUNDARY_WINDOW = (-20.0, 20.0)
BOUNDARY_STEP = 0.01


@dataclass(frozen=True)
class BinaryContinuousProblem:
    """Two priors and two vectorized 1-D likelihood densities.

    ``window`` is the integration range (defaults to ``+-spec.half_width``)
    and ``points`` lists kinks or peaks that quadrature should split at.
    ``sample1``/``sample2`` are optional ``(rng, n) -> array`` samplers used
    by :func:`monte_carlo_bayes_risk`.
    """

    prior1: float
    prior2: float
    density1: object
    density2: object
    spec: QuadratureSpec = DEFAULT_SPEC
    window: tuple | None = None
    points: tuple = ()
    sample1: object = field(default=None, compare=False)
    sample2: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.prior1 < 0 or self.prior2 < 0 or abs(self.prior1 + self.prior2 - 1.0) > 1e-9:
            raise InvalidDensity(f"priors ({self.prior1}, {self.prior2}) are not a distribution")
        if self.window is None:
            t = self.spec.half_width
            object.__setattr__(self, "window", (-t, t))
        for name, dens in (("density1", self.density1), ("density2", self.density2)):
            mass = self.integrate(dens)
            if abs(mass - 1.0) > DENSITY_TOL:
                raise InvalidDensity(f"{name} integrates to {mass!r}, not 1")

    def integrate(self, f, extra_points=()):
        a, b = self.window
        return integrate(f, a, b, self.spec, tuple(self.points) + tuple(extra_points))

    def joint1(self, y):
        return self.prior1 * np.asarray(self.density1(y), dtype=float)

    def joint2(self, y):
        return self.prior2 * np.asarray(self.density2(y), dtype=float)

    def discriminant(self, y):
        """``prior1 f1(y) - prior2 f2(y)``; positive where the MAP rule picks h1."""
        return self.joint1(y) - self.joint2(y)

    def posteriors(self, y):
        """Posterior of each hypothesis on a grid; 1/2 each where both vanish."""
        g1, g2 = self.joint1(y), self.joint2(y)
        tot = g1 + g2
        with np.errstate(invalid="ignore", divide="ignore"):
            p1 = np.where(tot > 0, g1 / np.where(tot > 0, tot, 1.0), 0.5)
        return p1, 1.0 - p1


def _all_crossings(prob):
    a, b = prob.window
    return find_roots(prob.discriminant, a, b, BOUNDARY_STEP)


def exact_bayes_risk(prob):
    """``integral of min(prior1 f1, prior2 f2)``, split at every decision boundary."""
    def integrand(y):
        return np.minimum(prob.joint1(y), prob.joint2(y))

    return prob.integrate(integrand, _all_crossings(prob))


def harmonic_risk_bounds(prob):
    """``(P_LB, 2 P_LB)`` with ``P_LB = integral of g1 g2 / (g1 + g2)``."""
    def integrand(y):
        g1, g2 = prob.joint1(y), prob.joint2(y)
        den = g1 + g2
        return np.where(den > 0, g1 * g2 / np.where(den > 0, den, 1.0), 0.0)

    lo = prob.integrate(integrand)
    return lo, 2.0 * lo


def chernoff_integral(prob, alpha):
    """``integral of (prior1 f1)**alpha (prior2 f2)**(1 - alpha)``, evaluated in log space."""
    if alpha <= 0.0:
        return prob.integrate(prob.joint2)
    if alpha >= 1.0:
        return prob.integrate(prob.joint1)

    def integrand(y):
        with np.errstate(divide="ignore"):
            l1 = np.log(prob.joint1(y))
            l2 = np.log(prob.joint2(y))
        return np.exp(alpha * l1 + (1.0 - alpha) * l2)

    return prob.integrate(integrand)


def chernoff_risk_bound(prob, tol=1e-6):
    """Minimize the Chernoff integral over alpha in [0, 1]; returns ``(alpha*, bound)``."""
    return minimize_scalar(lambda a: chernoff_integral(prob, a), 0.0, 1.0, tol)


def bhattacharyya_risk_bound(prob):
    return chernoff_integral(prob, 0.5)


def decision_boundaries(prob, window=BOUNDARY_WINDOW, step=BOUNDARY_STEP):
    """Points where the MAP decision flips inside ``window``.

    Identical weighted densities never change sign, so the result is empty.
    """
    a, b = window
    return find_roots(prob.discriminant, a, b, step)


def monte_carlo_bayes_risk(prob, n, seed, chunk=1_000_000):
    """Empirical error of the MAP rule on ``n`` seeded draws.

    Returns ``(estimate, standard_error)``. Needs both samplers on ``prob``.
    """
    if prob.sample1 is None or prob.sample2 is None:
        raise ValueError("problem has no samplers")
    rng = np.random.default_rng(seed)
    errors = 0
    left = n
    while left > 0:
        m = min(chunk, left)
        is2 = rng.random(m) < prob.prior2
        k2 = int(is2.sum())
        y = np.empty(m)
        y[~is2] = prob.sample1(rng, m - k2)
        y[is2] = prob.sample2(rng, k2)
        pick1 = prob.discriminant(y) >= 0
        errors += int(np.count_nonzero(pick1 == is2))
        left -= m
    est = errors / n
    return est, math.sqrt(est * (1.0 - est) / n)


def cos_laplace_density(t):
    t = np.asarray(t, dtype=float)
    return (2.0 / 3.0) * np.cos(t / 2.0) ** 2 * np.exp(-np.abs(t))


def gaussian_density(gamma):
    c = math.sqrt(gamma / math.pi)

    def f(z):
        z = np.asarray(z, dtype=float)
        return c * np.exp(-gamma * z * z)

    return f


def sample_cos_laplace(rng, n):
    """Rejection sampler with envelope (2/3) exp(-|t|); acceptance cos(t/2)**2."""
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(16, int(1.4 * (n - filled)))
        t = rng.laplace(0.0, 1.0, m)
        keep = t[rng.random(m) < np.cos(t / 2.0) ** 2]
        take = min(keep.size, n - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def appendix1_problem(gamma, spec=DEFAULT_SPEC):
    """The cosine-Laplace versus Gaussian example with equal priors.

    The window widens beyond ``spec.half_width`` for small ``gamma`` so the
    Gaussian tail stays below ~1e-35; breakpoints sit at the kink of
    ``exp(-|t|)``, the zeros of ``cos(t/2)`` and a ladder around the
    Gaussian peak so narrow peaks are never stepped over.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    t = max(spec.half_width, math.sqrt(80.0 / gamma))
    pts = {0.0}
    k = 0
    while (2 * k + 1) * math.pi < t:
        pts.update({(2 * k + 1) * math.pi, -(2 * k + 1) * math.pi})
        k += 1
    width = 1.0 / math.sqrt(2.0 * gamma)
    scale = width
    while scale < t:
        pts.update({scale, -scale})
        scale *= 2.0
    sd = width

    def sample2(rng, n):
        return rng.normal(0.0, sd, n)

    prob = BinaryContinuousProblem(
        0.5, 0.5, cos_laplace_density, gaussian_density(gamma), spec,
        window=(-t, t), points=tuple(sorted(pts)),
        sample1=sample_cos_laplace, sample2=sample2,
    )
    var = prob.integrate(lambda y: y * y * cos_laplace_density(y))
    if abs(var - 1.0) > DENSITY_TOL:
        raise InvalidDensity(f"cos-Laplace variance is {var!r}, expected 1")
    return prob


@dataclass(frozen=True)
class SweepRow:
    gamma: float
    p_lb: float
    p_ub: float
    chernoff: float
    chernoff_alpha: float
    bhattacharyya: float
    exact: float

    def orderings_hold(self, tol=1e-6):
        return (
            self.p_lb <= self.exact + tol
            and self.exact <= self.p_ub + tol
            and self.exact <= self.chernoff + tol
            and self.chernoff <= self.bhattacharyya + tol
        )


def sweep_row(gamma, spec=DEFAULT_SPEC):
    prob = appendix1_problem(gamma, spec)
    lo, hi = harmonic_risk_bounds(prob)
    alpha, ch = chernoff_risk_bound(prob)
    return SweepRow(
        gamma=float(gamma), p_lb=lo, p_ub=hi, chernoff=ch, chernoff_alpha=alpha,
        bhattacharyya=bhattacharyya_risk_bound(prob), exact=exact_bayes_risk(prob),
    )


def default_gammas(n=25):
    return np.logspace(-3, 3, n)


def gamma_sweep(gammas=None, spec=DEFAULT_SPEC, n_jobs=1):
    """One :class:`SweepRow` per gamma, in input order whatever ``n_jobs`` is."""
    gammas = default_gammas() if gammas is None else list(gammas)
    for g in gammas:
        if not g > 0:
            raise ValueError(f"gamma must be positive, got {g!r}")
    if n_jobs == 1:
        return [sweep_row(g, spec) for g in gammas]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda g: sweep_row(g, spec), gammas))
