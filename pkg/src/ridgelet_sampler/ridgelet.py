"""Normalized activation tables and the discrete ridgelet transform.

A hidden node (a, b) contributes the basis function
``x -> g((a.x - b) mod P)`` on Z_P^D.  With a centered, unit-norm table g
(used both as activation and as analysis kernel), the transform

    coeff[f](a, b) = P^(-D/2) * sum_x f(x) * g((a.x - b) mod P)

has orthonormal columns when materialized as a (P^(D+1), P^D) matrix: the
transpose is a left inverse, and the synthesis sum reproduces f exactly.
Dense materialization is intended for oracles and tests only; the sampling
path never touches the full node space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import FiniteDomain, NodeIndex, all_points, validate_node, validate_point

#: Tolerance for the centering / unit-norm invariants of an activation table.
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class ActivationTable:
    """Length-P real table, centered (sum 0) and of unit Euclidean norm."""

    values: np.ndarray
    P: int

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.shape != (self.P,):
            raise ValueError(f"table has shape {vals.shape}, expected ({self.P},)")
        if abs(vals.sum()) > NORMALIZATION_TOL:
            raise ValueError(f"table is not centered: sum = {vals.sum():.3e}")
        if abs(vals @ vals - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"table is not unit-norm: |v|^2 = {vals @ vals:.15f}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def make_relu_table(P: int) -> ActivationTable:
    """Centered, normalized discrete ReLU on Z_P.

    The raw table is x for 0 <= x <= (P-1)/2 and 0 above; the mean is then
    subtracted and the result scaled to unit norm.
    """
    if P < 3:
        raise ValueError(f"discrete ReLU table is degenerate for P = {P}")
    x = np.arange(P, dtype=float)
    raw = np.where(x <= (P - 1) // 2, x, 0.0)
    centered = raw - raw.mean()
    return ActivationTable(values=centered / np.linalg.norm(centered), P=P)


class DomainFunction:
    """Real-valued function on Z_P^D, stored dense or on a sparse support.

    The sparse form keeps an (K, D) array of distinct points plus their
    values; the dense form is a length-P^D vector in encode order.
    """

    def __init__(
        self,
        dom: FiniteDomain,
        dense: np.ndarray | None = None,
        support_points: np.ndarray | None = None,
        support_values: np.ndarray | None = None,
    ):
        self.dom = dom
        if dense is not None:
            if support_points is not None or support_values is not None:
                raise ValueError("provide either dense or sparse data, not both")
            arr = np.asarray(dense, dtype=float)
            if arr.shape != (dom.num_points,):
                raise ValueError(
                    f"dense values have shape {arr.shape}, expected ({dom.num_points},)"
                )
            self._dense: np.ndarray | None = arr
            self._points: np.ndarray | None = None
            self._values: np.ndarray | None = None
        else:
            pts = np.asarray(support_points, dtype=np.int64)
            vals = np.asarray(support_values, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != dom.D or pts.shape[0] != vals.shape[0]:
                raise ValueError("support points/values have inconsistent shapes")
            if (pts < 0).any() or (pts >= dom.P).any():
                raise ValueError(f"support coordinates must lie in [0, {dom.P})")
            if len(np.unique(pts, axis=0)) != len(pts):
                raise ValueError("sparse support must consist of distinct points")
            self._dense = None
            self._points = pts
            self._values = vals

    @classmethod
    def from_dense(cls, values: np.ndarray, dom: FiniteDomain) -> "DomainFunction":
        return cls(dom, dense=values)

    @classmethod
    def from_support(
        cls, points: np.ndarray, values: np.ndarray, dom: FiniteDomain
    ) -> "DomainFunction":
        return cls(dom, support_points=points, support_values=values)

    @classmethod
    def zero(cls, dom: FiniteDomain) -> "DomainFunction":
        return cls(
            dom,
            support_points=np.empty((0, dom.D), dtype=np.int64),
            support_values=np.empty(0),
        )

    @property
    def is_sparse(self) -> bool:
        return self._dense is None

    def support(self, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(points, values) pairs carrying all nonzero mass.

        For a dense function this enumerates the full domain (cap-guarded).
        """
        if self._dense is not None:
            return all_points(self.dom, cap), self._dense
        return self._points, self._values  # type: ignore[return-value]

    def to_dense(self, cap: int | None = None) -> np.ndarray:
        """Length-P^D vector in encode order (cap-guarded)."""
        self.dom.check_enumerable(cap)
        if self._dense is not None:
            return self._dense.copy()
        out = np.zeros(self.dom.num_points)
        powers = self.dom.P ** np.arange(self.dom.D - 1, -1, -1, dtype=np.int64)
        out[self._points @ powers] = self._values
        return out


@dataclass(frozen=True)
class DenseRidgelet:
    """Materialized transform matrix of shape (P^(D+1), P^D).

    Row (a, b) at flat index encode(a)*P + b holds
    P^(-D/2) * g((a.x - b) mod P) over all points x in encode order.
    """

    matrix: np.ndarray
    dom: FiniteDomain


def dense_ridgelet_matrix(
    g: ActivationTable, dom: FiniteDomain, cap: int | None = None
) -> DenseRidgelet:
    """Materialize the full transform matrix (oracle use; cap-guarded)."""
    dom.check_enumerable(cap)
    if g.P != dom.P:
        raise ValueError("activation table modulus does not match the domain")
    pts = all_points(dom, cap)
    # a.x mod P for every (a, x); float matmul is exact at desk scale.
    ax = np.rint(pts.astype(float) @ pts.astype(float).T).astype(np.int64) % dom.P
    offsets = np.arange(dom.P, dtype=np.int64)
    blocks = g.values[(ax[:, None, :] - offsets[None, :, None]) % dom.P]
    scale = float(dom.P) ** (-dom.D / 2.0)
    matrix = scale * blocks.reshape(dom.num_nodes, dom.num_points)
    return DenseRidgelet(matrix=matrix, dom=dom)


def ridgelet_coefficient(
    f: DomainFunction, n: NodeIndex, g: ActivationTable, dom: FiniteDomain
) -> float:
    """Single transform coefficient of a (sparse) function at node n.

    Only f's support contributes; the cost is O(K * D) for K support points.
    """
    av = validate_node(n, dom)
    pts, vals = f.support()
    if len(vals) == 0:
        return 0.0
    z = (pts @ av - n.b) % dom.P
    return float(dom.P) ** (-dom.D / 2.0) * float(vals @ g.values[z])


def apply_dense(R: DenseRidgelet, f: DomainFunction) -> np.ndarray:
    """Exact matrix-vector product R f over the full node space."""
    return R.matrix @ f.to_dense()


def reconstruct(
    w: np.ndarray | Sequence[tuple[NodeIndex, float]],
    g: ActivationTable,
    dom: FiniteDomain,
    x: Sequence[int] | np.ndarray,
) -> float:
    """Evaluate the network sum P^(-D/2) * sum_(a,b) w(a,b) g((a.x - b) mod P).

    ``w`` is either a dense length-P^(D+1) coefficient vector (cap-guarded)
    or a sparse sequence of (node, weight) pairs.  With w equal to the
    transform of f (and the same table used for analysis and synthesis),
    this reproduces f(x) exactly.
    """
    xv = validate_point(x, dom)
    scale = float(dom.P) ** (-dom.D / 2.0)
    if isinstance(w, np.ndarray):
        dom.check_enumerable()
        if w.shape != (dom.num_nodes,):
            raise ValueError(
                f"coefficient vector has shape {w.shape}, expected ({dom.num_nodes},)"
            )
        pts = all_points(dom)
        ax = pts @ xv % dom.P  # (P^D,)
        gvals = g.values[(ax[:, None] - np.arange(dom.P)[None, :]) % dom.P]
        return scale * float((w.reshape(dom.num_points, dom.P) * gvals).sum())
    total = 0.0
    for node, weight in w:
        av = validate_node(node, dom)
        total += weight * g.values[(int(av @ xv) - node.b) % dom.P]
    return scale * total


def fourier_slice_check(
    f: DomainFunction, g: ActivationTable, dom: FiniteDomain, cap: int | None = None
) -> float:
    """Max residual of the slice identity linking the transform to DFTs.

    For every direction a and frequency v, the 1-D DFT of the coefficient
    slice coeff[f](a, .) must equal the D-dim DFT of f at (v*a mod P) times
    the conjugate DFT of the kernel table.  Both sides are evaluated by
    direct DFT summation (this is a diagnostic, not a fast transform).
    """
    dom.check_enumerable(cap)
    P, D = dom.P, dom.D
    f_dense = f.to_dense(cap)
    R = dense_ridgelet_matrix(g, dom, cap)
    coeff = (R.matrix @ f_dense).reshape(dom.num_points, P)  # [a, b]

    # Direct DFT matrices; omega[v, b] = exp(-2*pi*i*v*b/P).
    root = np.exp(-2j * np.pi / P)
    omega = root ** np.outer(np.arange(P), np.arange(P))
    lhs = P ** (-0.5) * coeff @ omega.T  # [a, v]

    pts = all_points(dom, cap)
    phases = pts @ pts.T % P  # [u, x] -> u.x mod P
    f_hat = float(P) ** (-D / 2.0) * (root**phases) @ f_dense  # [u]
    r_hat = P ** (-0.5) * omega @ g.values  # [v]

    powers = P ** np.arange(D - 1, -1, -1, dtype=np.int64)
    va = (np.arange(P)[:, None, None] * pts[None, :, :]) % P  # [v, a, d]
    slice_idx = va @ powers  # [v, a] -> encode(v*a mod P)
    rhs = f_hat[slice_idx].T * np.conj(r_hat)[None, :]  # [a, v]
    return float(np.abs(lhs - rhs).max())
