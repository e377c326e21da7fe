"""Concrete operators used by the specializations: soft-thresholding,
projection onto an affine set, and the closed-form l1 x-subproblem."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import spd_factorize, spd_solve


def shrink(z, tau):
    """Soft-threshold ``z`` componentwise at level ``tau``.

    Returns ``sign(z) * max(|z| - tau, 0)``, the exact minimizer of
    ``tau*||x||_1 + (1/2)||x - z||^2``.  Components with ``|z| == tau``
    map to zero.
    """
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    z = np.asarray(z, dtype=float)
    return np.sign(z) * np.maximum(np.abs(z) - tau, 0.0)


@dataclass(frozen=True)
class MetricH:
    """Proximal metric for the x-subproblem.

    Either the zero metric (no proximal term, valid when A is the
    identity) or ``H = tau*I - gamma*A^T A``, which cancels the Gram term
    of the quadratic penalty; the latter needs ``tau > gamma *
    lmax(A^T A)`` to keep H positive definite.
    """

    kind: str
    tau: Optional[float] = None

    _KINDS = ("zero", "scaled_identity_minus_gram")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if self.kind == "scaled_identity_minus_gram":
            if self.tau is None or self.tau <= 0:
                raise ValueError("scaled_identity_minus_gram needs tau > 0")
        elif self.tau is not None:
            raise ValueError("zero metric takes no tau")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def scaled_identity_minus_gram(cls, tau):
        return cls("scaled_identity_minus_gram", float(tau))


class AffineProjector:
    """Euclidean projection onto ``{w : A w = rhs}`` for full-row-rank A.

    ``A A^T`` is factorized once at construction; each call costs two
    matvecs plus a pair of triangular solves.  Rank deficiency surfaces
    here as a NotPositiveDefiniteError, not per call.
    """

    def __init__(self, A, rhs):
        A = np.asarray(A, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        if A.ndim != 2 or rhs.shape != (A.shape[0],):
            raise ValueError("A must be a matrix with one rhs entry per row")
        self.A = A
        self.rhs = rhs
        self._gram = spd_factorize(A @ A.T)

    def __call__(self, w):
        return w + self.A.T @ spd_solve(self._gram, self.rhs - self.A @ w)


def solve_l1_subproblem(alpha, gamma, metric, x_prev, offset, lam, A=None):
    """Exact minimizer of the l1 x-subproblem.

    Minimizes, over x,

        alpha*||x||_1 - <lam, A x + offset> + (gamma/2)||A x + offset||^2
            + (1/2)||x - x_prev||_H^2

    with ``offset = B y - b``.  Supported combinations: ``A=None``
    (identity coupling) with either metric, or a general A with the
    gram-cancelling metric, which collapses the quadratic to
    ``(tau/2)||x - v||^2`` so the minimizer is a single shrink.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if A is None:
        anchor = lam / gamma - offset
        if metric.kind == "zero":
            return shrink(anchor, alpha / gamma)
        tau = metric.tau
        v = (gamma * anchor + (tau - gamma) * x_prev) / tau
        return shrink(v, alpha / tau)
    if metric.kind != "scaled_identity_minus_gram":
        raise ValueError(
            "a non-identity A requires the gram-cancelling metric "
            "H = tau*I - gamma*A^T A"
        )
    tau = metric.tau
    v = (
        A.T @ lam
        - gamma * (A.T @ offset)
        + tau * x_prev
        - gamma * (A.T @ (A @ x_prev))
    ) / tau
    return shrink(v, alpha / tau)
