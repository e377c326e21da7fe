"""Basis pursuit: min ||x||_1 subject to A x = b.

The problem is split as ``x - y = 0`` with ``y`` constrained to the
affine set ``{y : A y = b}``, so the nonsmooth block is a plain l1
shrink, the smooth block is identically zero, and the only nontrivial
piece is the affine projection.  Also houses the seeded instance
generator used by the benchmark sweeps: Gaussian A normalized to unit
spectral norm, a planted s-sparse solution with uniform (0, 1) nonzero
values, and b = A xhat.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import NotPositiveDefiniteError, spectral_norm_sq
from .operators import AffineProjector, solve_l1_subproblem
from .problem import Coupling, ProxBlock, SmoothBlock, TwoBlockProblem


@dataclass(frozen=True)
class BasisPursuitInstance:
    A: np.ndarray
    b: np.ndarray
    xhat: np.ndarray
    s: int
    seed: int

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]


def generate(n, m, s, seed):
    """Draw a reproducible basis-pursuit instance.

    Entries of A are standard Gaussian, rescaled so the largest singular
    value is 1 (estimated by power iteration).  The s support indices
    are chosen without replacement and the nonzero values drawn uniform
    in (0, 1); b is A xhat exactly.  Fully determined by ``seed``; if the
    drawn matrix is rank deficient the draw is retried (deterministically)
    up to three times.
    """
    if not (0 < s <= m <= n):
        raise ValueError("need 0 < s <= m <= n")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    for attempt in range(3):
        rng = np.random.default_rng([seed, attempt])
        A = rng.standard_normal((m, n))
        A = A / np.sqrt(spectral_norm_sq(A))
        support = np.sort(rng.choice(n, size=s, replace=False))
        vals = rng.uniform(0.0, 1.0, size=s)
        while np.any(vals == 0.0):
            redo = vals == 0.0
            vals[redo] = rng.uniform(0.0, 1.0, size=int(np.count_nonzero(redo)))
        xhat = np.zeros(n)
        xhat[support] = vals
        b = A @ xhat
        try:
            AffineProjector(A, b)
        except NotPositiveDefiniteError:
            continue
        return BasisPursuitInstance(A=A, b=b, xhat=xhat, s=int(s), seed=int(seed))
    raise RuntimeError("could not draw a full-row-rank matrix in 3 attempts")


def as_problem(inst):
    """Two-block form: f = ||.||_1 over R^n, g = 0 over Y = {y : A y = b},
    coupled by x - y = 0."""
    n = inst.n
    projector = AffineProjector(inst.A, inst.b)

    def prox_solve(x_prev, offset, lam, gamma, metric):
        return solve_l1_subproblem(1.0, gamma, metric, x_prev, offset, lam)

    def feasible(y):
        return float(np.linalg.norm(inst.A @ y - inst.b)) <= 1e-9 * (
            1.0 + float(np.linalg.norm(inst.b))
        )

    prox = ProxBlock(
        dim=n,
        evaluate=lambda x: float(np.sum(np.abs(x))),
        solve_subproblem=prox_solve,
    )
    smooth = SmoothBlock(
        dim=n,
        evaluate=lambda y: 0.0,
        gradient=lambda y: np.zeros(n),
        lipschitz_constant=0.0,
        project=projector,
        member=feasible,
    )
    coupling = Coupling(A=np.eye(n), B=-np.eye(n), b=np.zeros(n))
    return TwoBlockProblem(prox_block=prox, smooth_block=smooth, coupling=coupling)


def recovery_error(inst, x):
    """Euclidean distance to the planted solution."""
    x = np.asarray(x, dtype=float)
    if x.shape != inst.xhat.shape:
        raise ValueError("dimension mismatch with the planted solution")
    return float(np.linalg.norm(x - inst.xhat))
