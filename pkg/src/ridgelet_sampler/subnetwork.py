"""Sparse subnetwork assembly from sampled hidden nodes.

Sampled nodes arrive with repeats; after deduplication each distinct node
contributes one column P^(-D/2) g((a.x_i - b) mod P) of the design matrix
over the empirical support, and the output weights solve a weighted ridge
problem.  The reported risk is the p-weighted squared error on the support.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .domain import FiniteDomain, NodeIndex, validate_node
from .ridgelet import ActivationTable
from .sampler import EmpiricalDistribution


@dataclass(frozen=True)
class NodeSet:
    """Raw sampled nodes plus their first-occurrence deduplication."""

    raw: tuple[NodeIndex, ...]
    unique: tuple[NodeIndex, ...]

    @property
    def N(self) -> int:
        return len(self.raw)

    @property
    def N_eff(self) -> int:
        return len(self.unique)


def dedup(raw: Iterable[NodeIndex]) -> NodeSet:
    """Deduplicate sampled nodes, keeping first-occurrence order."""
    raw_t = tuple(raw)
    return NodeSet(raw=raw_t, unique=tuple(dict.fromkeys(raw_t)))


def design_matrix(
    nodes: Sequence[NodeIndex],
    emp: EmpiricalDistribution,
    g: ActivationTable,
    dom: FiniteDomain,
) -> np.ndarray:
    """(K, N_eff) matrix with entry P^(-D/2) g((a_j.x_i - b_j) mod P)."""
    k = emp.K
    if len(nodes) == 0:
        return np.zeros((k, 0))
    a_mat = np.stack([validate_node(n, dom) for n in nodes])
    b_vec = np.array([n.b for n in nodes], dtype=np.int64)
    z = (emp.points @ a_mat.T - b_vec[None, :]) % dom.P
    return float(dom.P) ** (-dom.D / 2.0) * g.values[z]


@dataclass(frozen=True)
class FittedModel:
    """Distinct hidden nodes with their ridge-fitted output weights."""

    nodes: tuple[NodeIndex, ...]
    theta: np.ndarray
    lambda_eff: float


def ridge_fit(
    nodes: NodeSet | Sequence[NodeIndex],
    emp: EmpiricalDistribution,
    g: ActivationTable,
    dom: FiniteDomain,
    lambda_eff: float,
) -> FittedModel:
    """Weighted ridge regression of the labels onto the node columns.

    Solves (Phi^T diag(p) Phi + lambda I) theta = Phi^T diag(p) f by SPD
    factorization.  An empty node set yields the zero predictor.
    """
    if lambda_eff <= 0:
        raise ValueError(f"lambda_eff must be positive, got {lambda_eff}")
    unique = nodes.unique if isinstance(nodes, NodeSet) else tuple(nodes)
    if len(unique) == 0:
        return FittedModel(nodes=(), theta=np.zeros(0), lambda_eff=lambda_eff)
    phi_mat = design_matrix(unique, emp, g, dom)
    weighted = phi_mat * emp.probs[:, None]
    gram = phi_mat.T @ weighted
    gram[np.diag_indices_from(gram)] += lambda_eff
    rhs = weighted.T @ emp.labels
    theta = cho_solve(cho_factor(gram, lower=True), rhs)
    return FittedModel(nodes=unique, theta=theta, lambda_eff=lambda_eff)


def predict_on_support(
    model: FittedModel,
    emp: EmpiricalDistribution,
    g: ActivationTable,
    dom: FiniteDomain,
) -> np.ndarray:
    """Model predictions at the K support points."""
    if len(model.nodes) == 0:
        return np.zeros(emp.K)
    return design_matrix(model.nodes, emp, g, dom) @ model.theta


def empirical_risk(
    model: FittedModel,
    emp: EmpiricalDistribution,
    g: ActivationTable,
    dom: FiniteDomain,
) -> float:
    """p-weighted squared error sum_i p(x_i) (pred_i - f(x_i))^2."""
    resid = predict_on_support(model, emp, g, dom) - emp.labels
    return float(emp.probs @ (resid * resid))


def ridge_objective(
    model: FittedModel,
    emp: EmpiricalDistribution,
    g: ActivationTable,
    dom: FiniteDomain,
) -> float:
    """Fitted objective: empirical risk plus lambda * ||theta||^2."""
    return empirical_risk(model, emp, g, dom) + model.lambda_eff * float(
        model.theta @ model.theta
    )
