"""Memoryless channels, mutual information and the rho upper bound.

For an input distribution ``px`` and a transition matrix ``W[k, j] = p(j|k)``

    rho(px) = 2 log2 sum_j sqrt(sum_k px[k] W[k, j]**2)

upper-bounds ``I(X;Y)`` at the same ``px``, so ``max_px rho`` bounds capacity.
The binary-input AWGN channel (inputs +-1, noise variance ``sigma2``) uses
the integral version, computed in log space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundsError,
    DimensionMismatch,
    InvalidChannel,
    MaxDepthExceeded,
    NumericallyUnstable,
    OutOfRange,
)
from .numerics import DEFAULT_SPEC, integrate, maximize_over_simplex
from .prob_core import as_weights, entropy

ROW_TOL = 1e-12
UNSTABLE_ERROR = 1e-6
LOG2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class Dmc:
    """Discrete memoryless channel; ``matrix[k, j] = p(y=j | x=k)``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InvalidChannel("transition matrix must be a nonempty 2-D array")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise InvalidChannel("transition probabilities must be finite and nonnegative")
        if np.any(np.abs(m.sum(axis=1) - 1.0) > ROW_TOL):
            raise InvalidChannel("every row of the transition matrix must sum to 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_inputs(self):
        return self.matrix.shape[0]

    @property
    def n_outputs(self):
        return self.matrix.shape[1]

    def __eq__(self, other):
        return isinstance(other, Dmc) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())


@dataclass(frozen=True)
class BiAwgnChannel:
    """Inputs +-1 plus Gaussian noise of variance ``sigma2 = N0 / 2``."""

    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise InvalidChannel(f"sigma2 must be positive, got {self.sigma2!r}")

    @property
    def ebn0(self):
        """Eb/N0 for uncoded +-1 signalling (Eb = 1, N0 = 2 sigma2); display only."""
        return 1.0 / (2.0 * self.sigma2)

    @classmethod
    def from_ebn0_db(cls, db):
        return cls(1.0 / (2.0 * 10.0 ** (db / 10.0)))


def _check_unit(x, name):
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"{name} must lie in [0, 1], got {x!r}")


def bsc(p):
    _check_unit(p, "crossover probability")
    return Dmc(np.array([[1.0 - p, p], [p, 1.0 - p]]))


def bec(eps):
    """Outputs ordered (0, erasure, 1)."""
    _check_unit(eps, "erasure probability")
    return Dmc(np.array([[1.0 - eps, eps, 0.0], [0.0, eps, 1.0 - eps]]))


def _input(ch, px):
    if px is None:
        return np.full(ch.n_inputs, 1.0 / ch.n_inputs)
    w = as_weights(px)
    if w.shape != (ch.n_inputs,):
        raise DimensionMismatch(f"px has length {w.shape[-1]}, channel has {ch.n_inputs} inputs")
    return w


def mutual_information(ch, px=None):
    """``I(X;Y)`` in bits; ``px`` defaults to uniform."""
    w = _input(ch, px)
    joint = w[:, None] * ch.matrix
    py = joint.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(joint > 0, ch.matrix / np.where(py > 0, py, 1.0)[None, :], 1.0)
        terms = np.where(joint > 0, joint * np.log2(ratio), 0.0)
    return max(float(terms.sum()), 0.0)


def rho_discrete(ch, px=None):
    w = _input(ch, px)
    inner = w @ (ch.matrix ** 2)
    return 2.0 * math.log2(float(np.sqrt(inner).sum()))


def binary_entropy(p):
    return entropy([p, 1.0 - p])


def rho_bsc(p):
    _check_unit(p, "crossover probability")
    return 1.0 + math.log2(p * p + (1.0 - p) ** 2)


def rho_bec(eps):
    _check_unit(eps, "erasure probability")
    return 2.0 * math.log2(math.sqrt(2.0) - (math.sqrt(2.0) - 1.0) * eps)


def capacity_bsc(p):
    _check_unit(p, "crossover probability")
    return 1.0 - binary_entropy(p)


def capacity_bec(eps):
    _check_unit(eps, "erasure probability")
    return 1.0 - eps


def _awgn_setup(sigma2):
    if not sigma2 > 0:
        raise OutOfRange(f"sigma2 must be positive, got {sigma2!r}")
    sigma = math.sqrt(sigma2)
    peak = 1.0 / sigma
    # in u = y / sigma the two input peaks sit at +-1/sigma with unit width
    half = peak + 40.0
    pts = [0.0]
    for c in (peak, -peak):
        pts += [c + d for d in (-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0)]
    return sigma, peak, half, tuple(pts)


def rho_biawgn(sigma2, spec=DEFAULT_SPEC):
    """Closed form ``-log2(4 pi s2) + 2 log2 int sqrt(e^{-(y-1)^2/s2} + e^{-(y+1)^2/s2}) dy``.

    The integral is taken in ``u = y / sigma`` with the square root of the
    sum done by ``logaddexp``, so tiny ``sigma2`` neither underflows nor
    hides the peaks from the quadrature.
    """
    sigma, peak, half, pts = _awgn_setup(sigma2)

    def integrand(u):
        u = np.asarray(u, dtype=float)
        return np.exp(0.5 * np.logaddexp(-(u - peak) ** 2, -(u + peak) ** 2))

    integral_u = integrate(integrand, -half, half, spec, pts)
    # int dy = sigma * int du
    return -math.log2(4.0 * math.pi * sigma2) + 2.0 * (math.log2(sigma) + math.log2(integral_u))


def rho_continuous(densities, px, a, b, spec=DEFAULT_SPEC, points=()):
    """Generic ``2 log2 int sqrt(sum_k px[k] p_k(y)**2) dy`` for a finite input set.

    ``densities`` are vectorized callables ``p_k(y)``; ``[a, b]`` must hold
    essentially all of their mass.
    """
    w = as_weights(px)
    if len(densities) != w.shape[0]:
        raise DimensionMismatch("one density per input symbol is required")

    def integrand(y):
        y = np.asarray(y, dtype=float)
        acc = np.zeros_like(y)
        for wk, dens in zip(w, densities):
            acc = acc + wk * np.asarray(dens(y), dtype=float) ** 2
        return np.sqrt(acc)

    return 2.0 * math.log2(integrate(integrand, a, b, spec, points))


def biawgn_likelihoods(sigma2):
    c = 1.0 / math.sqrt(2.0 * math.pi * sigma2)

    def make(x):
        return lambda y: c * np.exp(-((np.asarray(y, dtype=float) - x) ** 2) / (2.0 * sigma2))

    return [make(1.0), make(-1.0)]


def rho_biawgn_generic(sigma2, spec=DEFAULT_SPEC):
    """rho of the AWGN channel through :func:`rho_continuous`, in the y variable."""
    if not sigma2 > 0:
        raise OutOfRange(f"sigma2 must be positive, got {sigma2!r}")
    reach = 1.0 + 40.0 * math.sqrt(sigma2)
    return rho_continuous(biawgn_likelihoods(sigma2), [0.5, 0.5], -reach, reach, spec,
                          points=(-1.0, 0.0, 1.0))


def capacity_biawgn(sigma2, spec=DEFAULT_SPEC):
    """Capacity with equiprobable +-1 inputs, ``h(Y) - (1/2) log2(2 pi e sigma2)``.

    Raises NumericallyUnstable, carrying the partial estimate, when the
    output-entropy quadrature cannot certify an error below 1e-6.
    """
    sigma, peak, half, pts = _awgn_setup(sigma2)
    log_norm = math.log(2.0 * math.sqrt(2.0 * math.pi))

    def integrand(u):
        # density of u = y / sigma, in nats
        u = np.asarray(u, dtype=float)
        logp = np.logaddexp(-0.5 * (u - peak) ** 2, -0.5 * (u + peak) ** 2) - log_norm
        return -np.exp(logp) * logp

    tight = type(spec)(tol=min(spec.tol, UNSTABLE_ERROR), half_width=spec.half_width,
                       max_depth=spec.max_depth)
    try:
        h_u = integrate(integrand, -half, half, tight, pts)
        err = 0.0
    except MaxDepthExceeded as exc:
        h_u, err = exc.estimate, exc.error
    # h(Y) = h(U) + log sigma; the noise entropy in u is that of N(0, 1)
    cap = (h_u - 0.5 * math.log(2.0 * math.pi * math.e)) / LOG2
    if err / LOG2 > UNSTABLE_ERROR:
        raise NumericallyUnstable(
            f"capacity integral at sigma2={sigma2} has error estimate {err / LOG2:.3g}",
            cap, err / LOG2,
        )
    return min(max(cap, 0.0), 1.0)


def capacity_upper_bound(ch):
    """``(px*, rho*)`` maximizing rho over input distributions."""
    return maximize_over_simplex(lambda p: rho_discrete(ch, p), ch.n_inputs)


def channel_from_spec(spec):
    """Build a channel from a spec mapping or JSON text.

    Accepted forms: ``{"type": "dmc", "matrix": [[...]]}``,
    ``{"type": "bsc", "p": x}``, ``{"type": "bec", "eps": x}`` and
    ``{"type": "biawgn", "sigma2": x}``.
    """
    if isinstance(spec, (str, bytes)):
        spec = json.loads(spec)
    if not isinstance(spec, dict) or "type" not in spec:
        raise InvalidChannel("channel spec must be an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "dmc":
            return Dmc(np.array(spec["matrix"], dtype=float))
        if kind == "bsc":
            return bsc(float(spec["p"]))
        if kind == "bec":
            return bec(float(spec["eps"]))
        if kind == "biawgn":
            return BiAwgnChannel(float(spec["sigma2"]))
    except KeyError as exc:
        raise InvalidChannel(f"channel spec of type {kind!r} is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BoundsError):
            raise
        raise InvalidChannel(f"malformed channel spec: {exc}") from None
    raise InvalidChannel(f"unknown channel type {kind!r}")


def closed_form_capacity(spec):
    """Capacity for parametric specs (bsc, bec, biawgn); None for a raw DMC."""
    kind = spec.get("type")
    if kind == "bsc":
        return capacity_bsc(float(spec["p"]))
    if kind == "bec":
        return capacity_bec(float(spec["eps"]))
    if kind == "biawgn":
        return capacity_biawgn(float(spec["sigma2"]))
    return None

