"""Random-coding lower bounds on MAP error and equivocation, and a brute-force check.

A code of ``M`` codewords of length ``N`` is drawn with i.i.d. symbols from
``px`` and used with equiprobable messages, so ``R = log2(M) / N``. For a
memoryless channel the ensemble-average MAP error satisfies

    mean P_e >= 1 - 2**(-(N/2)(R - rho))

and since ``P_e <= 1 - 2**-H(X|Y)`` for each code this forces
``H(X|Y) >= (N/2)(R - rho)`` on average. :func:`simulate_ensemble` samples
codes and computes both quantities exactly by enumerating every output
sequence.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import BiAwgnChannel, Dmc, rho_biawgn, rho_discrete
from .errors import BudgetExceeded
from .prob_core import Pmf, as_weights

DEFAULT_BUDGET = 10**9
SEED_MASK = (1 << 64) - 1


def enumeration_budget():
    """Operation budget for exact enumeration; ``BB_BUDGET`` overrides it."""
    raw = os.environ.get("BB_BUDGET")
    return int(float(raw)) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class EnsembleParams:
    n: int
    m: int
    channel: Dmc
    px: Pmf
    trials: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 2 or self.trials < 1:
            raise ValueError("need N >= 1, M >= 2 and trials >= 1")
        w = as_weights(self.px)
        if isinstance(self.channel, Dmc) and w.shape != (self.channel.n_inputs,):
            raise ValueError("px length must match the channel input alphabet")
        if not isinstance(self.px, Pmf):
            object.__setattr__(self, "px", Pmf(w))

    @property
    def rate(self):
        return math.log2(self.m) / self.n

    @property
    def rho(self):
        if isinstance(self.channel, BiAwgnChannel):
            return rho_biawgn(self.channel.sigma2)
        return rho_discrete(self.channel, self.px)

    def operations(self):
        return self.channel.n_outputs ** self.n * self.m * self.trials


@dataclass(frozen=True)
class ErrorLowerBound:
    """``value`` is the clamped bound; ``unclamped`` its raw exponential form.

    ``factorized`` is the same quantity written as
    ``1 - M**-0.5 * (sum_j sqrt(sum_k px W**2))**N`` before introducing rho.
    """

    value: float
    unclamped: float
    factorized: float


def ensemble_error_lower_bound(params):
    rho = params.rho
    raw = -math.expm1(-0.5 * params.n * (params.rate - rho) * math.log(2.0))
    if isinstance(params.channel, Dmc):
        w = params.px.weights
        per_symbol = float(np.sqrt(w @ params.channel.matrix ** 2).sum())
    else:
        per_symbol = 2.0 ** (rho / 2.0)
    fact = 1.0 - per_symbol ** params.n / math.sqrt(params.m)
    return ErrorLowerBound(max(0.0, raw), raw, fact)


def equivocation_lower_bound(params):
    return max(0.0, 0.5 * params.n * (params.rate - params.rho))


def _all_sequences(alphabet, n):
    """Every length-n word over range(alphabet), lexicographic, as rows."""
    return np.indices((alphabet,) * n).reshape(n, -1).T


def ensemble_average_error_exact(params):
    """Ensemble-average lower bound by brute force over every input and output word.

    ``1 - M**-0.5 * sum_y sqrt(sum_x P(x) P(y|x)**2)`` with ``P(x)`` and
    ``P(y|x)`` built as explicit products per word; no factorization over
    symbols is used, which makes it an independent check of
    :func:`ensemble_error_lower_bound`.
    """
    ch, n = params.channel, params.n
    if not isinstance(ch, Dmc):
        raise ValueError("exact enumeration needs a discrete channel")
    k, j = ch.n_inputs, ch.n_outputs
    if (k * j) ** n > enumeration_budget():
        raise BudgetExceeded(f"{k}^{n} x {j}^{n} words exceed the enumeration budget")
    xs = _all_sequences(k, n)
    ys = _all_sequences(j, n)
    px = params.px.weights
    p_x = np.prod(px[xs], axis=1)
    total = 0.0
    for y in ys:
        lik = np.prod(ch.matrix[xs, y[None, :]], axis=1)
        total += math.sqrt(float(np.dot(p_x, lik * lik)))
    return 1.0 - total / math.sqrt(params.m)


@dataclass(frozen=True)
class CodeStats:
    error: float
    equivocation: float


def code_statistics(channel, codebook):
    """Exact MAP error and equivocation of one code with equiprobable codewords.

    ``codebook`` is an (M, N) integer array of input symbols. Every output
    word is enumerated: ``P_e = 1 - sum_y max_i P(y|x_i) / M`` and
    ``H(X|Y) = sum_y P(y) H(posterior given y)``.
    """
    cb = np.asarray(codebook, dtype=int)
    m, n = cb.shape
    ys = _all_sequences(channel.n_outputs, n)
    # lik[i, y] = prod_t W[x_{i,t}, y_t]
    lik = np.ones((m, ys.shape[0]))
    for t in range(n):
        lik *= channel.matrix[cb[:, t][:, None], ys[:, t][None, :]]
    joint = lik / m
    py = joint.sum(axis=0)
    err = 1.0 - float(joint.max(axis=0).sum())
    with np.errstate(divide="ignore", invalid="ignore"):
        post = np.where(py > 0, joint / np.where(py > 0, py, 1.0), 0.0)
        terms = np.where(post > 0, joint * np.log2(np.where(post > 0, post, 1.0)), 0.0)
    equiv = max(-float(terms.sum()), 0.0)
    return CodeStats(min(max(err, 0.0), 1.0), min(equiv, math.log2(m)))


def sample_codebook(params, trial):
    """Draw codebook number ``trial``.

    A Philox counter stream keyed by the seed, with the trial index in the
    high counter word. Symbol (i, t) is inverse-CDF mapped from the
    (i*N + t)-th uniform of that stream, so each codebook depends only on
    (seed, trial) and never on execution order.
    """
    bitgen = np.random.Philox(key=params.seed & SEED_MASK, counter=[0, 0, 0, trial])
    u = np.random.Generator(bitgen).random(params.m * params.n)
    cdf = np.cumsum(params.px.weights)
    cdf[-1] = 1.0
    sym = np.searchsorted(cdf, u, side="right")
    return np.minimum(sym, len(cdf) - 1).reshape(params.m, params.n)


@dataclass(frozen=True)
class EnsembleResult:
    mean_error: float
    se_error: float
    mean_equivocation: float
    se_equivocation: float
    error_lower_bound: float
    equivocation_lower_bound: float
    per_code: tuple
    # fraction of codes individually below the equivocation bound; reported, never asserted
    equivocation_violation_rate: float

    @property
    def error_bound_ok(self):
        return self.mean_error >= self.error_lower_bound - 3.0 * self.se_error

    @property
    def equivocation_bound_ok(self):
        return self.mean_equivocation >= self.equivocation_lower_bound - 3.0 * self.se_equivocation

    @property
    def per_code_consistent(self):
        """Every code obeys ``P_e <= 1 - 2**-H(X|Y)``."""
        return all(
            c.error <= -math.expm1(-c.equivocation * math.log(2.0)) + 1e-12
            for c in self.per_code
        )

    def to_dict(self):
        return {
            "mean_error": self.mean_error,
            "se_error": self.se_error,
            "mean_equivocation": self.mean_equivocation,
            "se_equivocation": self.se_equivocation,
            "error_lower_bound": self.error_lower_bound,
            "equivocation_lower_bound": self.equivocation_lower_bound,
            "equivocation_violation_rate": self.equivocation_violation_rate,
            "checks": {
                "error_bound_within_3se": self.error_bound_ok,
                "equivocation_bound_within_3se": self.equivocation_bound_ok,
                "per_code_error_below_equivocation_bound": self.per_code_consistent,
            },
        }


def _mean_se(values):
    arr = np.array(values, dtype=float)
    mean = math.fsum(arr) / arr.size
    if arr.size < 2:
        return mean, 0.0
    var = math.fsum((arr - mean) ** 2) / (arr.size - 1)
    return mean, math.sqrt(var / arr.size)


def simulate_ensemble(params, n_jobs=1):
    """Exact MAP error and equivocation averaged over ``params.trials`` random codes.

    Deterministic in ``params.seed``; results are aggregated in trial order so
    ``n_jobs`` never changes the output.
    """
    if not isinstance(params.channel, Dmc):
        raise ValueError("only discrete channels can be simulated")
    budget = enumeration_budget()
    if params.operations() > budget:
        raise BudgetExceeded(
            f"|J|^N * M * trials = {params.operations()} exceeds the budget of {budget}"
        )

    def run(trial):
        return code_statistics(params.channel, sample_codebook(params, trial))

    if n_jobs == 1:
        stats = [run(t) for t in range(params.trials)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            stats = list(pool.map(run, range(params.trials)))

    mean_err, se_err = _mean_se([s.error for s in stats])
    mean_h, se_h = _mean_se([s.equivocation for s in stats])
    h_bound = equivocation_lower_bound(params)
    below = sum(1 for s in stats if s.equivocation < h_bound)
    return EnsembleResult(
        mean_error=mean_err,
        se_error=se_err,
        mean_equivocation=mean_h,
        se_equivocation=se_h,
        error_lower_bound=ensemble_error_lower_bound(params).value,
        equivocation_lower_bound=h_bound,
        per_code=tuple(stats),
        equivocation_violation_rate=below / len(stats),
    )
