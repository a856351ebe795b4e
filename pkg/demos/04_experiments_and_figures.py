#!/usr/bin/env python3
"""Reduced-scale experiment drivers and the figure pipeline.

Runs both experiment sweeps on small grids, writes their CSVs next to
this script, and prints the fitted runtime-scaling exponents.  Render the
figures with the companion package:

    ridgelet-figures risk    demos/risk_demo.csv    demos/risk_demo
    ridgelet-figures runtime demos/runtime_demo.csv demos/runtime_demo

The full-scale sweeps (paper grids) run through the CLI:

    ridgelet-sampler risk-experiment --out risk.csv
    ridgelet-sampler runtime-experiment --out runtime.csv
"""

from pathlib import Path

from ridgelet_sampler import (
    RiskExperimentConfig,
    RuntimeExperimentConfig,
    fit_scaling,
    run_risk_experiment,
    run_runtime_experiment,
    write_risk_csv,
    write_runtime_csv,
)

HERE = Path(__file__).resolve().parent

risk_cfg = RiskExperimentConfig(
    P=7, d_values=(1, 2), m_factor=50, n_grid=(8, 16, 32, 64), reps=5,
    delta_tvs=(0.1,), seed=0,
)
rows = run_risk_experiment(risk_cfg)
write_risk_csv(rows, str(HERE / "risk_demo.csv"))
print(f"risk sweep: {len(rows)} rows -> {HERE / 'risk_demo.csv'}")

rt_cfg = RuntimeExperimentConfig(
    naive_d_values=(1, 2, 3, 4, 5), deq_d_values=(1, 2, 4, 8, 16), reps=5, seed=0,
)
rt_rows = run_runtime_experiment(rt_cfg)
write_runtime_csv(rt_rows, str(HERE / "runtime_demo.csv"))
print(f"runtime sweep: {len(rt_rows)} rows -> {HERE / 'runtime_demo.csv'}")

exponents = fit_scaling(rt_rows, {"naive": 3, "dequantized": 4})
if "naive" in exponents:
    print(f"naive baseline scales like P^({exponents['naive']:.2f} D)")
if "dequantized" in exponents:
    print(f"fast sampler scales like D^{exponents['dequantized']:.2f} "
          f"(overhead-dominated at these small D)")
