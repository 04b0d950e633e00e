"""Per-observation bounds on the MAP error and how they compare.

Each function takes a posterior (a :class:`~bayesbounds.prob_core.Pmf`, or an
array whose last axis holds the hypotheses) and returns floats, or arrays
for stacked input. Let ``S = sum_i p_i**2`` be the Bayesian distance and
``H`` the posterior entropy in bits. Then

    1 - sqrt(S)  <=  P_e|y  <=  2 - 2 sqrt(S)
    (1 - S) / 2  <=  P_e|y  <=  1 - S  <=  1 - 2**-H

The entropy bounds ``H`` and ``H / 2`` are returned unclamped, so they can
exceed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BetaNonNegative, NegativeEquivocation, NotBinary
from .numerics import minimize_scalar
from .prob_core import as_weights, collision_sum, entropy, map_conditional_error

LN4 = math.log(4.0)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def bd_bounds(p):
    """Bayesian-distance pair ``(1 - sqrt(S), 2 - 2 sqrt(S))``, unclamped."""
    root = np.sqrt(collision_sum(p))
    return _out(1.0 - root), _out(2.0 - 2.0 * root)


def quadratic_bounds(p):
    """Quadratic-entropy pair ``((1 - S) / 2, 1 - S)``."""
    q = 1.0 - np.asarray(collision_sum(p))
    return _out(0.5 * q), _out(q)


def renyi_bound(p):
    return entropy(p)


def hellman_raviv_bound(p):
    return _out(0.5 * np.asarray(entropy(p)))


def improved_equivocation_bound(p):
    """``1 - 2**-H(p)``; always below one, unlike the plain entropy bounds."""
    return _out(-np.expm1(-np.asarray(entropy(p)) * math.log(2.0)))


def improved_equivocation_bound_avg(equivocation):
    """Average-error form ``1 - 2**-H(X|Y)`` for an equivocation in bits."""
    h = np.asarray(equivocation, dtype=float)
    if np.any(h < 0):
        raise NegativeEquivocation(f"equivocation must be >= 0, got {equivocation!r}")
    return _out(-np.expm1(-h * math.log(2.0)))


def power_mean_upper(p, beta):
    """Power-mean bound with exponent ``beta < 0``.

    The MAP error is ``min_i (1 - p_i)``, and any power mean with negative
    exponent dominates the minimum, so

        P_e|y <= (mean_i (1 - p_i)**beta) ** (1 / beta).

    For two hypotheses the complements are just the posteriors swapped, which
    gives the binary form ``2**(-1/beta) (p1**beta + p2**beta)**(1/beta)``;
    ``beta = -1`` is the harmonic mean ``2 p1 p2``. The bound tightens as
    ``beta`` decreases. A zero complement (a certain hypothesis) makes the
    mean collapse to its limit 0, which is exact.
    """
    if not beta < 0:
        raise BetaNonNegative(f"beta must be negative, got {beta!r}")
    w = as_weights(p)
    c = np.clip(1.0 - w, 0.0, None)
    m = w.shape[-1]
    has_zero = np.any(c == 0, axis=-1)
    safe = np.where(c > 0, c, 1.0)
    # factor out the smallest complement so large |beta| cannot overflow
    cmin = np.min(safe, axis=-1, keepdims=True)
    ratio_sum = np.sum((safe / cmin) ** beta * (c > 0), axis=-1)
    val = cmin[..., 0] * (ratio_sum / m) ** (1.0 / beta)
    return _out(np.where(has_zero, 0.0, val))


def harmonic_pair(p):
    """Binary harmonic pair ``(p1 p2, 2 p1 p2)``."""
    w = as_weights(p)
    if w.shape[-1] != 2:
        raise NotBinary(f"harmonic bound needs exactly 2 hypotheses, got {w.shape[-1]}")
    lo = w[..., 0] * w[..., 1]
    return _out(lo), _out(2.0 * lo)


def chernoff_conditional(p, tol=1e-9):
    """``(alpha*, min_alpha p1**alpha p2**(1 - alpha))`` for one binary posterior."""
    w = as_weights(p)
    if w.shape != (2,):
        raise NotBinary("Chernoff bound needs one posterior over 2 hypotheses")
    p1, p2 = float(w[0]), float(w[1])
    return minimize_scalar(lambda a: p1**a * p2 ** (1.0 - a), 0.0, 1.0, tol)


def bhattacharyya_conditional(p):
    w = as_weights(p)
    if w.shape[-1] != 2:
        raise NotBinary("Bhattacharyya bound needs exactly 2 hypotheses")
    return _out(np.sqrt(w[..., 0] * w[..., 1]))


@dataclass(frozen=True)
class BoundReport:
    """Every applicable bound for one posterior.

    Binary-only entries are ``None`` when there are more than two
    hypotheses. ``power_mean_upper`` maps each requested beta to its value.
    """

    exact: float
    bd_lower: float
    bd_upper: float
    quad_lower: float
    quad_upper: float
    renyi: float
    hellman_raviv: float
    improved_equivocation: float
    power_mean_upper: dict = field(default_factory=dict)
    harmonic_lower: float | None = None
    harmonic_upper: float | None = None
    chernoff: float | None = None
    bhattacharyya: float | None = None

    def lower_bounds(self):
        out = {"bd_lower": self.bd_lower, "quad_lower": self.quad_lower}
        if self.harmonic_lower is not None:
            out["harmonic_lower"] = self.harmonic_lower
        return out

    def upper_bounds(self):
        out = {
            "bd_upper": self.bd_upper,
            "quad_upper": self.quad_upper,
            "renyi": self.renyi,
            "hellman_raviv": self.hellman_raviv,
            "improved_equivocation": self.improved_equivocation,
        }
        for beta, val in self.power_mean_upper.items():
            out[f"power_mean_upper({beta:g})"] = val
        for name in ("harmonic_upper", "chernoff", "bhattacharyya"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out

    def violations(self, tol=1e-9):
        """Names of bounds that fail to sandwich the exact error."""
        bad = [k for k, v in self.lower_bounds().items() if v > self.exact + tol]
        bad += [k for k, v in self.upper_bounds().items() if v < self.exact - tol]
        return bad

    def to_dict(self):
        out = {"exact": self.exact}
        out.update(self.lower_bounds())
        out.update(self.upper_bounds())
        return out

    def clamped(self):
        """Plotting view: every entry clipped to [0, 1]."""
        return {k: min(max(v, 0.0), 1.0) for k, v in self.to_dict().items()}


def full_report(p, betas=(-1.0,)):
    w = as_weights(p)
    if w.ndim != 1:
        raise ValueError("full_report expects a single posterior")
    bd_lo, bd_hi = bd_bounds(w)
    q_lo, q_hi = quadratic_bounds(w)
    extra = {}
    if w.shape[0] == 2:
        h_lo, h_hi = harmonic_pair(w)
        extra = dict(
            harmonic_lower=h_lo,
            harmonic_upper=h_hi,
            chernoff=chernoff_conditional(w)[1],
            bhattacharyya=bhattacharyya_conditional(w),
        )
    return BoundReport(
        exact=map_conditional_error(w),
        bd_lower=bd_lo,
        bd_upper=bd_hi,
        quad_lower=q_lo,
        quad_upper=q_hi,
        renyi=renyi_bound(w),
        hellman_raviv=hellman_raviv_bound(w),
        improved_equivocation=improved_equivocation_bound(w),
        power_mean_upper={float(b): power_mean_upper(w, b) for b in betas},
        **extra,
    )
