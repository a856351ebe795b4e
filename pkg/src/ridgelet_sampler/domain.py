"""Prime-field input domain Z_P^D and flat indexing of hidden-node parameters.

Inputs live on Z_P^D for a prime modulus P; a hidden node is a pair (a, b)
with a in Z_P^D and b in Z_P.  Nodes are flattened row-major (b fastest) so
that dense tables over the node space can be reshaped to (P^D, P) blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: Default ceiling on P^(D+1) for operations that materialize the node space.
DEFAULT_ENUMERATION_CAP = 10_000_000


class EnumerationCapError(ValueError):
    """A dense enumeration would exceed the configured node-count cap."""


def is_prime(n: int) -> bool:
    """Trial-division primality check; P is desk-scale so this is plenty."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FiniteDomain:
    """Input space Z_P^D with prime modulus P and dimension D >= 1."""

    P: int
    D: int

    def __post_init__(self) -> None:
        if not isinstance(self.P, int) or not is_prime(self.P):
            raise ValueError(f"P must be prime, got {self.P!r}")
        if not isinstance(self.D, int) or self.D < 1:
            raise ValueError(f"D must be an integer >= 1, got {self.D!r}")

    @property
    def num_points(self) -> int:
        """|Z_P^D| as an exact Python integer."""
        return self.P**self.D

    @property
    def num_nodes(self) -> int:
        """|Z_P^D x Z_P|, the size of the hidden-node parameter space."""
        return self.P ** (self.D + 1)

    def check_enumerable(self, cap: int | None = None) -> None:
        """Raise :class:`EnumerationCapError` if P^(D+1) exceeds ``cap``."""
        cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
        if self.num_nodes > cap:
            raise EnumerationCapError(
                f"node space P^(D+1) = {self.num_nodes} exceeds the "
                f"enumeration cap {cap}"
            )


@dataclass(frozen=True)
class NodeIndex:
    """Hidden-node parameter pair (a, b): a in Z_P^D, b in Z_P."""

    a: tuple[int, ...]
    b: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))
        object.__setattr__(self, "b", int(self.b))


def validate_point(x: Sequence[int] | np.ndarray, dom: FiniteDomain) -> np.ndarray:
    """Return ``x`` as an int64 vector after checking shape and residue range."""
    xv = np.asarray(x, dtype=np.int64)
    if xv.shape != (dom.D,):
        raise ValueError(f"point has shape {xv.shape}, expected ({dom.D},)")
    if (xv < 0).any() or (xv >= dom.P).any():
        raise ValueError(f"point coordinates must lie in [0, {dom.P})")
    return xv


def validate_node(n: NodeIndex, dom: FiniteDomain) -> np.ndarray:
    """Validate a node against ``dom``; returns the ``a`` part as int64."""
    av = validate_point(n.a, dom)
    if not 0 <= n.b < dom.P:
        raise ValueError(f"node offset b={n.b} out of range [0, {dom.P})")
    return av


def inner_product_mod(
    a: Sequence[int] | np.ndarray, x: Sequence[int] | np.ndarray, dom: FiniteDomain
) -> int:
    """Inner product (sum_i a_i * x_i) mod P of two points of Z_P^D."""
    av = validate_point(a, dom)
    xv = validate_point(x, dom)
    # D * (P-1)^2 stays far below 2^63 at desk scale, so int64 is exact.
    return int((av @ xv) % dom.P)


def encode_point(x: Sequence[int] | np.ndarray, dom: FiniteDomain) -> int:
    """Row-major flat index of a point (first coordinate most significant)."""
    xv = validate_point(x, dom)
    idx = 0
    for c in xv.tolist():
        idx = idx * dom.P + c
    return idx


def decode_point(i: int, dom: FiniteDomain) -> tuple[int, ...]:
    """Inverse of :func:`encode_point`."""
    if not 0 <= i < dom.num_points:
        raise ValueError(f"point index {i} out of range [0, {dom.num_points})")
    coords = [0] * dom.D
    for d in range(dom.D - 1, -1, -1):
        i, coords[d] = divmod(i, dom.P)
    return tuple(coords)


def encode_node(n: NodeIndex, dom: FiniteDomain) -> int:
    """Flat index of a node: encode(a) * P + b."""
    validate_node(n, dom)
    return encode_point(n.a, dom) * dom.P + n.b


def decode_node(i: int, dom: FiniteDomain) -> NodeIndex:
    """Inverse of :func:`encode_node`."""
    if not 0 <= i < dom.num_nodes:
        raise ValueError(f"node index {i} out of range [0, {dom.num_nodes})")
    a_idx, b = divmod(i, dom.P)
    return NodeIndex(a=decode_point(a_idx, dom), b=b)


def all_points(dom: FiniteDomain, cap: int | None = None) -> np.ndarray:
    """All points of Z_P^D as an (P^D, D) int64 array in encode order.

    Refuses (like every dense enumeration) when P^(D+1) exceeds the cap.
    """
    dom.check_enumerable(cap)
    n = dom.num_points
    idx = np.arange(n, dtype=np.int64)
    coords = np.empty((n, dom.D), dtype=np.int64)
    for d in range(dom.D - 1, -1, -1):
        idx, coords[:, d] = np.divmod(idx, dom.P)
    return coords
