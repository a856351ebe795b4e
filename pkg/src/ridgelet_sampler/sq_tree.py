"""Binary-tree sampling-and-query structure over a real vector.

Stores a vector v and the partial sums of its squared entries in an
implicit complete binary tree (heap layout in one flat array), giving
O(1) entry and squared-norm queries and O(log K) index sampling with
probability |v_i|^2 / ||v||^2.  The structure is static after build.
"""

from __future__ import annotations

import numpy as np


class SqTree:
    """Sum tree over squared magnitudes of a stored vector."""

    __slots__ = ("values", "_sums", "_base")

    def __init__(self, values: np.ndarray):
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("values must be a non-empty 1-D array")
        base = 1
        while base < vals.size:
            base *= 2
        sums = np.zeros(2 * base)
        sums[base : base + vals.size] = vals * vals
        lo = base
        while lo > 1:
            half = lo // 2
            sums[half:lo] = sums[lo : 2 * lo : 2] + sums[lo + 1 : 2 * lo : 2]
            lo = half
        self.values = vals.copy()
        self.values.setflags(write=False)
        self._sums = sums
        self._base = base

    def __len__(self) -> int:
        return self.values.size

    def query(self, i: int) -> float:
        """Stored entry v_i, exactly as given at build time."""
        if not 0 <= i < self.values.size:
            raise IndexError(f"index {i} out of range [0, {self.values.size})")
        return float(self.values[i])

    def norm_sq(self) -> float:
        """Squared Euclidean norm ||v||^2 (the root partial sum)."""
        return float(self._sums[1])

    def sample_index(self, rng: np.random.Generator) -> int:
        """Draw an index with probability |v_i|^2 / ||v||^2.

        Descends the tree on a uniform draw in [0, total), going left
        exactly when the draw is strictly below the left subtotal; leaves
        with zero weight are unreachable.
        """
        total = self._sums[1]
        if total <= 0.0:
            raise ValueError("cannot sample from an all-zero vector")
        sums = self._sums
        base = self._base
        while True:
            u = rng.random() * total
            i = 1
            while i < base:
                left = sums[2 * i]
                if u < left:
                    i = 2 * i
                else:
                    u -= left
                    i = 2 * i + 1
            idx = i - base
            # Rounding at a subtotal boundary can, with vanishing
            # probability, land on a zero leaf; redraw in that case.
            if idx < self.values.size and sums[i] > 0.0:
                return idx

    def consistency_error(self) -> float:
        """Max relative mismatch between internal nodes and their children."""
        sums = self._sums
        parents = sums[1 : self._base]
        children = sums[2 : 2 * self._base : 2] + sums[3 : 2 * self._base : 2]
        denom = np.maximum(np.abs(parents), 1.0)
        return float(np.max(np.abs(parents - children) / denom, initial=0.0))
