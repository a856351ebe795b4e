"""Exact reference implementations over the fully enumerated node space.

Two independent routes to the optimized node distribution:

* :func:`enumerate_exact` evaluates every s(a, b) through the reduced
  support-sum formula (the same quantity the sampler thins against) and
  normalizes explicitly.
* :func:`naive_dense_solve` materializes the transform matrix R and solves
  the regularized normal equations (R diag(p) R^T + lambda I) w = R (p.f)
  directly, which is the exponential-cost baseline; its coefficients must
  reproduce s(a, b) entrywise.

Both refuse to run above the enumeration cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .domain import FiniteDomain, NodeIndex, all_points, decode_node
from .ridgelet import ActivationTable, DenseRidgelet, dense_ridgelet_matrix
from .sampler import (
    DegenerateTargetError,
    EmpiricalDistribution,
    SamplerConfig,
    phi_vector,
)


@dataclass(frozen=True)
class ExactDistribution:
    """Dense table of node weights s, normalization Z, and probabilities."""

    s_table: np.ndarray
    Z: float
    p_star: np.ndarray
    delta_smooth: float
    dom: FiniteDomain
    cum: np.ndarray = field(repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.Z <= 0.0:
            raise DegenerateTargetError("degenerate distribution: Z = 0")
        if abs(self.p_star.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {self.p_star.sum()!r}, not 1")
        if self.cum is None:
            object.__setattr__(self, "cum", np.cumsum(self.p_star))


def _finalize_distribution(
    s_table: np.ndarray, delta_smooth: float, dom: FiniteDomain
) -> ExactDistribution:
    weights = s_table / (s_table + delta_smooth)
    z = float(weights.sum())
    if z <= 0.0:
        raise DegenerateTargetError(
            "degenerate target: every node weight is zero"
        )
    return ExactDistribution(
        s_table=s_table,
        Z=z,
        p_star=weights / z,
        delta_smooth=float(delta_smooth),
        dom=dom,
    )


def enumerate_exact(
    emp: EmpiricalDistribution,
    g: ActivationTable,
    cfg: SamplerConfig,
    dom: FiniteDomain,
    cap: int | None = None,
) -> ExactDistribution:
    """Enumerate s(a, b) over all P^(D+1) nodes via the support-sum formula."""
    dom.check_enumerable(cap)
    phi = phi_vector(emp, dom, cfg.lambda_eff)
    delta = cfg.delta_smooth if cfg.delta_smooth is not None else phi.gamma
    if delta <= 0.0:
        raise DegenerateTargetError(
            "degenerate target: gamma = 0, no smoothing offset available"
        )
    a_pts = all_points(dom, cap)
    x_t = emp.points.T.astype(float)
    node_scale = float(dom.P) ** (-float(dom.D))
    s2 = np.empty((dom.num_points, dom.P))
    block = max(1, (1 << 21) // max(emp.K, 1))
    for lo in range(0, dom.num_points, block):
        hi = min(lo + block, dom.num_points)
        ax = np.rint(a_pts[lo:hi].astype(float) @ x_t).astype(np.int64) % dom.P
        for b in range(dom.P):
            rv = g.values[(ax - b) % dom.P]
            acc = rv @ phi.entries
            s2[lo:hi, b] = node_scale * acc * acc
    return _finalize_distribution(s2.reshape(-1), delta, dom)


def exact_sample(dist: ExactDistribution, rng: np.random.Generator) -> NodeIndex:
    """Inverse-CDF draw from the enumerated distribution."""
    idx = int(np.searchsorted(dist.cum, rng.random(), side="right"))
    if idx >= dist.p_star.size or dist.p_star[idx] <= 0.0:
        idx = int(np.flatnonzero(dist.p_star > 0)[-1])
    return decode_node(idx, dist.dom)


@dataclass(frozen=True)
class DenseModel:
    """Dense regularized solve artifacts over the full node space."""

    R: DenseRidgelet
    A: np.ndarray
    w_star: np.ndarray
    psi_in: np.ndarray
    lambda_eff: float


def _dense_data_vectors(
    emp: EmpiricalDistribution, dom: FiniteDomain
) -> tuple[np.ndarray, np.ndarray]:
    """(p_hat, f) as dense length-P^D vectors in encode order."""
    powers = dom.P ** np.arange(dom.D - 1, -1, -1, dtype=np.int64)
    idx = emp.points @ powers
    p_hat = np.zeros(dom.num_points)
    f_dense = np.zeros(dom.num_points)
    p_hat[idx] = emp.probs
    f_dense[idx] = emp.labels
    return p_hat, f_dense


def naive_dense_solve(
    emp: EmpiricalDistribution,
    g: ActivationTable,
    cfg: SamplerConfig,
    dom: FiniteDomain,
    cap: int | None = None,
) -> DenseModel:
    """Materialize R and solve (R diag(p) R^T + lambda I) w = R (p.f).

    This is the exponential-cost baseline: the system is dense over all
    P^(D+1) nodes and is factorized directly (SPD Cholesky).
    """
    dom.check_enumerable(cap)
    R = dense_ridgelet_matrix(g, dom, cap)
    p_hat, f_dense = _dense_data_vectors(emp, dom)
    psi_in = p_hat * f_dense
    A = (R.matrix * p_hat) @ R.matrix.T
    A[np.diag_indices_from(A)] += cfg.lambda_eff
    rhs = R.matrix @ psi_in
    w_star = cho_solve(cho_factor(A, lower=True), rhs)
    return DenseModel(R=R, A=A, w_star=w_star, psi_in=psi_in, lambda_eff=cfg.lambda_eff)


def exact_distribution_from_dense(
    model: DenseModel, delta_smooth: float | None = None
) -> ExactDistribution:
    """Optimized distribution computed from the dense solve's coefficients.

    ``delta_smooth=None`` resolves to the total coefficient mass, matching
    the reduced route's auto smoothing.
    """
    dom = model.R.dom
    scaled = float(dom.P) ** (-dom.D / 2.0) * model.w_star
    s_table = scaled * scaled
    delta = delta_smooth if delta_smooth is not None else float(s_table.sum())
    if delta <= 0.0:
        raise DegenerateTargetError("degenerate target: zero coefficient mass")
    return _finalize_distribution(s_table, delta, dom)


def inverse_decomposition_check(
    emp: EmpiricalDistribution,
    g: ActivationTable,
    cfg: SamplerConfig,
    dom: FiniteDomain,
    cap: int | None = None,
) -> float:
    """Max entrywise gap between the dense solve and the reduced formula.

    The reduced route rescales the data vector entrywise to
    p(x) f(x) / (p(x) + lambda) and applies R; agreement with the dense
    inverse is the identity that collapses the node-space solve to a
    data-space one.
    """
    model = naive_dense_solve(emp, g, cfg, dom, cap)
    p_hat, f_dense = _dense_data_vectors(emp, dom)
    phi_prime = p_hat * f_dense / (p_hat + cfg.lambda_eff)
    w_reduced = model.R.matrix @ phi_prime
    return float(np.abs(model.w_star - w_reduced).max())
