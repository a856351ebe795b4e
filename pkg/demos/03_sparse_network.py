#!/usr/bin/env python3
"""Sparse subnetworks from sampled hidden nodes.

For one synthetic instance, compares the empirical risk of networks built
from exact optimized sampling, the fast sampler, and uniform sampling, as
the node budget N grows.
"""

import numpy as np

from ridgelet_sampler import (
    FiniteDomain,
    NodeIndex,
    SamplerConfig,
    SyntheticSpec,
    build_state,
    dedup,
    empirical_risk,
    enumerate_exact,
    exact_sample,
    gen_sine_dataset,
    make_relu_table,
    ridge_fit,
    sample_batch,
)

P, D, M = 7, 2, 100
LAM = 1e-3
dom = FiniteDomain(P, D)
g = make_relu_table(P)
emp = gen_sine_dataset(SyntheticSpec(P=P, D=D, M=M, seed=3))
cfg = SamplerConfig(lambda_eff=LAM, delta_tv=0.1)
state = build_state(emp, g, cfg, dom)
dist = enumerate_exact(emp, g, cfg, dom)

def uniform_nodes(n, rng):
    draws = rng.integers(0, P, size=(n, D + 1))
    return [NodeIndex(a=tuple(r[:D].tolist()), b=int(r[D])) for r in draws]

def risk_of(nodes):
    model = ridge_fit(dedup(nodes), emp, g, dom, LAM)
    return empirical_risk(model, emp, g, dom), len(model.nodes)

print(f"instance: P={P} D={D} M={M} (node space {dom.num_nodes})")
print(f"{'N':>6} | {'exact':>12} | {'dequantized':>12} | {'uniform':>12} | N_eff (deq)")
for n in (8, 32, 128, 512):
    rng = np.random.default_rng(n)
    r_exact, _ = risk_of([exact_sample(dist, rng) for _ in range(n)])
    r_deq, neff = risk_of([o.node for o in sample_batch(state, n, rng)])
    r_unif, _ = risk_of(uniform_nodes(n, rng))
    print(f"{n:>6} | {r_exact:>12.3e} | {r_deq:>12.3e} | {r_unif:>12.3e} | {neff}")

print("\noptimized sampling needs far fewer nodes than uniform in the mid range.")
