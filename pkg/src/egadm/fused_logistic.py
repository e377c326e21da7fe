"""Fused logistic regression.

Minimizes the average logistic loss plus an l1 penalty on the
coefficients and a total-variation penalty on their successive
differences:

    min_{x, c}  loss(x, c) + alpha*||x||_1 + beta*sum_j |x_j - x_{j+1}|.

Splitting with auxiliary variables x = y and w = L y (L the forward
difference operator) puts this in two-block form: the (x, w) block is a
pair of shrinks, while the (y, c) block carries the smooth loss, whose
gradient is cheap.  The intercept c is unpenalized and enters only the
smooth block, never the coupling.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import spectral_norm_sq
from .operators import shrink
from .problem import Coupling, ProxBlock, SmoothBlock, TwoBlockProblem
from .solver import SolverConfig, VariantKind, solve


@dataclass(frozen=True)
class FusedLogisticInstance:
    """Binary-labelled data with a planted piecewise-constant coefficient
    vector; labels are exactly -1.0 or +1.0."""

    A: np.ndarray
    labels: np.ndarray
    xhat: np.ndarray
    c_true: float
    seed: int
    pattern: str = "custom"

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]


@dataclass(frozen=True)
class LogisticAux:
    """Feature rows scaled by their labels, cached for gradient evaluation."""

    signed: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_data(cls, A, labels):
        A = np.asarray(A, dtype=float)
        labels = np.asarray(labels, dtype=float)
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be exactly -1 or +1")
        return cls(signed=labels[:, None] * A, labels=labels)

    @property
    def m(self):
        return self.signed.shape[0]


def _softplus(t):
    # log(1 + exp(t)), safe for arguments of either sign and any size
    return np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))


def _sigmoid(t):
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return out


def logistic_value(aux, y, c):
    """Average logistic loss at coefficients y and intercept c."""
    t = aux.signed @ y + aux.labels * c
    return float(np.mean(_softplus(-t)))


def logistic_gradient(aux, y, c):
    """Gradient of the average logistic loss, split as (d/dy, d/dc)."""
    t = aux.signed @ y + aux.labels * c
    r = 1.0 - _sigmoid(t)
    grad_y = -(aux.signed.T @ r) / aux.m
    grad_c = -float(aux.labels @ r) / aux.m
    return grad_y, grad_c


def logistic_lipschitz(aux):
    """Upper bound on the loss gradient's Lipschitz constant in (y, c).

    The sigmoid's derivative never exceeds 1/4, so the Hessian is
    dominated by ``M^T M / (4m)`` with M the signed feature matrix
    augmented by the label column (the intercept direction).
    """
    augmented = np.hstack([aux.signed, aux.labels[:, None]])
    return spectral_norm_sq(augmented) / (4.0 * aux.m)


@dataclass(frozen=True)
class DifferenceMatrix:
    """Forward-difference operator: ``(L v)_j = v_j - v_{j+1}``, shape
    (n-1) x n."""

    n: int

    def apply(self, v):
        return v[:-1] - v[1:]

    def apply_t(self, w):
        out = np.zeros(self.n)
        out[:-1] += w
        out[1:] -= w
        return out

    def dense(self):
        return np.eye(self.n - 1, self.n) - np.eye(self.n - 1, self.n, k=1)


@dataclass(frozen=True)
class FusedLogisticConfig:
    """Penalty weights and step size; ``gamma=None`` selects it
    automatically from the problem's Lipschitz data."""

    alpha: float = 5e-4
    beta: float = 5e-2
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("penalty weights must be nonnegative")


def as_problem(inst, cfg):
    """Two-block form of the fused logistic program.

    The nonsmooth block stacks (x, w) with separable shrinks; the smooth
    block stacks (y, c) with the logistic gradient and no constraint
    (projection is the identity).  The coupling enforces x = y and
    w = L y; the intercept column of B is zero.
    """
    n = inst.n
    aux = LogisticAux.from_data(inst.A, inst.labels)
    diff = DifferenceMatrix(n)
    p = 2 * n - 1

    def prox_solve(x_prev, offset, lam, gamma, metric):
        if metric.kind != "zero":
            raise ValueError("the stacked shrink block expects the zero metric")
        anchor = lam / gamma - offset
        return np.concatenate(
            [shrink(anchor[:n], cfg.alpha / gamma), shrink(anchor[n:], cfg.beta / gamma)]
        )

    prox = ProxBlock(
        dim=p,
        evaluate=lambda v: float(
            cfg.alpha * np.sum(np.abs(v[:n])) + cfg.beta * np.sum(np.abs(v[n:]))
        ),
        solve_subproblem=prox_solve,
    )

    def value(z):
        return logistic_value(aux, z[:n], float(z[n]))

    def gradient(z):
        gy, gc = logistic_gradient(aux, z[:n], float(z[n]))
        return np.concatenate([gy, [gc]])

    smooth = SmoothBlock(
        dim=n + 1,
        evaluate=value,
        gradient=gradient,
        lipschitz_constant=logistic_lipschitz(aux),
        project=lambda z: z,
    )

    B = np.zeros((p, n + 1))
    B[:n, :n] = -np.eye(n)
    B[n:, :n] = -diff.dense()
    coupling = Coupling(A=np.eye(p), B=B, b=np.zeros(p))
    return TwoBlockProblem(prox_block=prox, smooth_block=smooth, coupling=coupling)


def _finish_instance(rng, xhat, n, m, seed, pattern):
    A = rng.standard_normal((m, n))
    c = float(rng.uniform(0.0, 1.0))
    labels = np.where(A @ xhat + c >= 0.0, 1.0, -1.0)
    return FusedLogisticInstance(
        A=A, labels=labels, xhat=xhat, c_true=c, seed=int(seed), pattern=pattern
    )


def generate_simple_pattern(n, seed, m=None):
    """Planted coefficients constant on four wide blocks.

    Blocks sit at indices 1-100, 201-300, 401-500, 601-700 (1-based) with
    heights drawn uniform in (0, 20); everything else is zero.  ``m``
    defaults to n // 2, matching the canonical n = 1000, m = 500 sizing.
    """
    if n < 1000:
        raise ValueError("the simple block pattern needs n >= 1000")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    m = n // 2 if m is None else int(m)
    if m < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng([seed, 0])
    heights = rng.uniform(0.0, 20.0, size=4)
    while np.any(heights == 0.0):
        redo = heights == 0.0
        heights[redo] = rng.uniform(0.0, 20.0, size=int(np.count_nonzero(redo)))
    xhat = np.zeros(n)
    for h, (lo, hi) in zip(heights, ((0, 100), (200, 300), (400, 500), (600, 700))):
        xhat[lo:hi] = h
    return _finish_instance(rng, xhat, n, m, seed, "simple")


def generate_block_pattern(n, m, seed):
    """Planted coefficients with narrow blocks and an isolated spike:
    20 on 1-20, 30 at 41, 10 on 71-85, 20 on 121-125 (1-based)."""
    if n < 126:
        raise ValueError("the narrow block pattern needs n >= 126")
    if m < 1:
        raise ValueError("need at least one sample")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    rng = np.random.default_rng([seed, 0])
    xhat = np.zeros(n)
    xhat[0:20] = 20.0
    xhat[40] = 30.0
    xhat[70:85] = 10.0
    xhat[120:125] = 20.0
    return _finish_instance(rng, xhat, n, m, seed, "blocks")


def sparsity_report(x, threshold=None):
    """Counts of coefficients and of successive differences above threshold.

    The default threshold is ``1e-6 * max|x|`` (an exact zero count is
    meaningless on a float solution).  Returns ``(nnz(x), nnz(L x))``.
    """
    x = np.asarray(x, dtype=float)
    top = float(np.max(np.abs(x))) if x.size else 0.0
    if threshold is None:
        if top == 0.0:
            return 0, 0
        threshold = 1e-6 * top
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    diffs = x[:-1] - x[1:]
    return (
        int(np.count_nonzero(np.abs(x) > threshold)),
        int(np.count_nonzero(np.abs(diffs) > threshold)),
    )


def solve_fused(
    inst,
    cfg,
    variant=VariantKind.EGAL,
    tol=1e-4,
    max_iters=20000,
    safety=0.9,
    monitor_certificate=False,
    record_history=False,
):
    """Run the solver on the fused logistic program.

    Stops when the constraint residual at the midpoint satisfies
    ``max(|x - y_mid|, |w - L y_mid|) < tol`` componentwise (the new
    iterate replaces the midpoint for the plain-gradient variants), or at
    the iteration cap.
    """
    problem = as_problem(inst, cfg)
    config = SolverConfig(
        variant=variant,
        gamma=cfg.gamma,
        safety=safety,
        tol=tol,
        max_iters=max_iters,
        monitor_certificate=monitor_certificate,
        record_history=record_history,
    )

    def stop(info):
        return float(np.max(np.abs(info.residual))) < tol

    return solve(problem, config, stop_rule=stop)
