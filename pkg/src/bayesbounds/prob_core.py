"""Validated probability vectors, entropy, posteriors and the exact MAP error.

Every bound in :mod:`bayesbounds.bounds` is measured against
:func:`map_conditional_error`, so this module is deliberately small and strict.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyPmf, NegativeWeight, SumOutOfTolerance, ZeroEvidence

CLAMP_TOL = 1e-12
SUM_TOL = 1e-9


class Pmf:
    """Immutable finite probability vector.

    Build through :func:`make_pmf`; the constructor assumes validated input.
    """

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = np.array(weights, dtype=float)
        w.setflags(write=False)
        self._w = w

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def __len__(self):
        return self._w.shape[0]

    def __iter__(self):
        return iter(self._w.tolist())

    def __array__(self, dtype=None, copy=None):
        return self._w if dtype is None else self._w.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return type(self) is type(other) and np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash((type(self).__name__, self._w.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}({self._w.tolist()!r})"


class Posterior(Pmf):
    """A Pmf over hypotheses given one observation."""

    __slots__ = ()


def check_pmf_array(weights) -> np.ndarray:
    """Validate and renormalize a probability vector or a stack of them.

    The last axis indexes outcomes. Entries down to ``-1e-12`` are clamped
    to zero; sums within ``1e-9`` of one are renormalized exactly.
    """
    w = np.array(weights, dtype=float)
    if w.ndim == 0:
        w = w.reshape(1)
    if w.shape[-1] == 0:
        raise EmptyPmf("probability vector is empty")
    if np.any(w < -CLAMP_TOL):
        raise NegativeWeight(f"negative weight {w.min()!r}")
    w = np.where(w < 0, 0.0, w)
    s = w.sum(axis=-1, keepdims=True)
    bad = ~(np.abs(s - 1.0) <= SUM_TOL)
    if np.any(bad):
        worst = float(s[bad].ravel()[0])
        raise SumOutOfTolerance(f"weights sum to {worst!r}, expected 1 within {SUM_TOL}")
    return w / s


def make_pmf(weights) -> Pmf:
    w = check_pmf_array(weights)
    if w.ndim != 1:
        raise ValueError("make_pmf expects a 1-D vector")
    return Pmf(w)


def make_posterior(weights) -> Posterior:
    w = check_pmf_array(weights)
    if w.ndim != 1:
        raise ValueError("make_posterior expects a 1-D vector")
    return Posterior(w)


def as_weights(p) -> np.ndarray:
    """Return the weight array of a Pmf, validating raw array-likes."""
    if isinstance(p, Pmf):
        return p.weights
    return check_pmf_array(p)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def entropy(p):
    """Shannon entropy in bits, with ``0 log 0 = 0``.

    Accepts a single Pmf or a stack of probability vectors (last axis).
    """
    w = as_weights(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0, w * np.log2(np.where(w > 0, w, 1.0)), 0.0)
    # max(0, .) only removes a -0.0 or a round-off negative
    return _scalar(np.maximum(-terms.sum(axis=-1), 0.0))


def collision_sum(p):
    """Sum of squared probabilities (the Bayesian distance)."""
    w = as_weights(p)
    return _scalar(np.sum(w * w, axis=-1))


def posterior_from_likelihoods(priors, likelihoods) -> Posterior:
    pri = as_weights(priors)
    lik = np.asarray(likelihoods, dtype=float)
    if lik.shape != pri.shape:
        raise ValueError(f"likelihoods shape {lik.shape} does not match priors {pri.shape}")
    if np.any(lik < 0):
        raise NegativeWeight("likelihoods must be nonnegative")
    joint = pri * lik
    total = joint.sum()
    if not total > 0:
        raise ZeroEvidence("every prior * likelihood term is zero")
    return Posterior(joint / total)


def map_conditional_error(p):
    """Conditional error of the MAP rule, ``1 - max_i p_i``."""
    w = as_weights(p)
    return _scalar(1.0 - w.max(axis=-1))
