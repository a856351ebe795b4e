#!/usr/bin/env python3
"""Tour of the discrete transform layer.

Builds the normalized ReLU table, materializes the transform matrix on a
small domain, and verifies the three structural facts everything else
rests on: orthonormal columns, exact reconstruction, and the Fourier
slice identity.
"""

import numpy as np

from ridgelet_sampler import (
    DomainFunction,
    FiniteDomain,
    all_points,
    apply_dense,
    dense_ridgelet_matrix,
    fourier_slice_check,
    make_relu_table,
    reconstruct,
)

P, D = 5, 2
dom = FiniteDomain(P, D)
g = make_relu_table(P)

print(f"domain: Z_{P}^{D}  ({dom.num_points} points, {dom.num_nodes} hidden nodes)")
print(f"activation table: {np.round(g.values, 4)}")
print(f"  sum = {g.values.sum():+.2e}   |g|^2 = {g.values @ g.values:.12f}")

R = dense_ridgelet_matrix(g, dom)
gram_err = np.abs(R.matrix.T @ R.matrix - np.eye(dom.num_points)).max()
print(f"\ntransform matrix: {R.matrix.shape}, ||R^T R - I||_max = {gram_err:.2e}")

rng = np.random.default_rng(0)
f = DomainFunction.from_dense(rng.standard_normal(dom.num_points), dom)
coeffs = apply_dense(R, f)
print(f"coefficient vector: {coeffs.shape}, norm ratio |Rf|/|f| = "
      f"{np.linalg.norm(coeffs) / np.linalg.norm(f.to_dense()):.12f}")

worst = max(
    abs(reconstruct(coeffs, g, dom, x) - fx)
    for x, fx in zip(all_points(dom), f.to_dense())
)
print(f"reconstruction: max |S[R f](x) - f(x)| = {worst:.2e}")

print(f"fourier slice residual: {fourier_slice_check(f, g, dom):.2e}")
