"""Render the two experiment figures from their CSV files.

The CSVs are the only interface to the experiment pipeline:

    risk.csv:    method,delta_tv,P,D,M,N,rep,N_eff,risk,seed
    runtime.csv: method,P,D,M,rep,wall_seconds,timeout,seed

All means, error bars, and scaling fits are recomputed here from the raw
rows.  Rendering is deterministic: identical CSV bytes produce identical
image bytes (file metadata that would embed timestamps is suppressed).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
# fixed hash salt keeps SVG element ids (and hence output bytes) reproducible
matplotlib.rcParams["svg.hashsalt"] = "ridgelet-figures"

import matplotlib.pyplot as plt
import numpy as np

RISK_HEADER = "method,delta_tv,P,D,M,N,rep,N_eff,risk,seed"
RUNTIME_HEADER = "method,P,D,M,rep,wall_seconds,timeout,seed"

#: Default fit windows (minimum D) for the scaling guides.
FIT_MIN_D = {"naive": 4, "dequantized": 8}

_COLORS = {
    "exact": "tab:blue",
    "uniform": "tab:red",
    "naive": "tab:blue",
    "dequantized": "tab:orange",
}
_DEQ_STYLES = ["-.", "--", ":"]


class SchemaError(ValueError):
    """The CSV file does not match the declared schema."""


@dataclass(frozen=True)
class RiskRow:
    method: str
    delta_tv: float | None
    P: int
    D: int
    M: int
    N: int
    rep: int
    N_eff: int
    risk: float
    seed: int


@dataclass(frozen=True)
class RuntimeRow:
    method: str
    P: int
    D: int
    M: int
    rep: int
    wall_seconds: float
    timeout: bool
    seed: int


def _read_lines(path: str, header: str) -> list[list[str]]:
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != header:
            raise SchemaError(
                f"{path}: header {first!r} does not match expected {header!r}"
            )
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_risk_csv(path: str) -> list[RiskRow]:
    rows = []
    for toks in _read_lines(path, RISK_HEADER):
        if len(toks) != 10:
            raise SchemaError(f"{path}: bad risk row {toks!r}")
        rows.append(
            RiskRow(
                method=toks[0],
                delta_tv=None if toks[1] == "" else float(toks[1]),
                P=int(toks[2]),
                D=int(toks[3]),
                M=int(toks[4]),
                N=int(toks[5]),
                rep=int(toks[6]),
                N_eff=int(toks[7]),
                risk=float(toks[8]),
                seed=int(toks[9]),
            )
        )
    return rows


def load_runtime_csv(path: str) -> list[RuntimeRow]:
    rows = []
    for toks in _read_lines(path, RUNTIME_HEADER):
        if len(toks) != 8:
            raise SchemaError(f"{path}: bad runtime row {toks!r}")
        rows.append(
            RuntimeRow(
                method=toks[0],
                P=int(toks[1]),
                D=int(toks[2]),
                M=int(toks[3]),
                rep=int(toks[4]),
                wall_seconds=float(toks[5]),
                timeout=bool(int(toks[6])),
                seed=int(toks[7]),
            )
        )
    return rows


def _variant_label(method: str, delta_tv: float | None) -> str:
    if method == "dequantized" and delta_tv is not None:
        return f"dequantized (delta={delta_tv:g})"
    return method


def _save(fig, out_base: str | None) -> list[str]:
    if out_base is None:
        return []
    for suffix in (".png", ".svg"):
        if out_base.endswith(suffix):
            out_base = out_base[: -len(suffix)]
    paths = []
    fig.savefig(out_base + ".png", metadata={"Software": "ridgelet-figures"})
    paths.append(out_base + ".png")
    fig.savefig(out_base + ".svg", metadata={"Date": None})
    paths.append(out_base + ".svg")
    return paths


def plot_risk(csv_path: str, out_base: str | None = None):
    """Risk vs node budget: one panel per dimension, mean +/- standard
    error per sampling method.  Returns (figure, info dict)."""
    rows = load_risk_csv(csv_path)
    d_values = sorted({r.D for r in rows})
    variants = sorted(
        {(r.method, r.delta_tv) for r in rows},
        key=lambda mv: (mv[0], -1.0 if mv[1] is None else mv[1]),
    )
    fig, axes = plt.subplots(
        1, len(d_values), figsize=(4.2 * len(d_values), 3.6), squeeze=False
    )
    info = {"panels": len(d_values), "curves": {}}
    deq_count = 0
    styles = {}
    for method, dtv in variants:
        if method == "dequantized":
            styles[(method, dtv)] = _DEQ_STYLES[deq_count % len(_DEQ_STYLES)]
            deq_count += 1
        else:
            styles[(method, dtv)] = "-"
    for ax, d in zip(axes[0], d_values):
        n_curves = 0
        for method, dtv in variants:
            pts = {}
            for r in rows:
                if r.D == d and r.method == method and r.delta_tv == dtv:
                    pts.setdefault(r.N, []).append(r.risk)
            if not pts:
                continue
            ns = sorted(pts)
            means = np.array([np.mean(pts[n]) for n in ns])
            sems = np.array(
                [
                    np.std(pts[n], ddof=1) / math.sqrt(len(pts[n]))
                    if len(pts[n]) > 1
                    else 0.0
                    for n in ns
                ]
            )
            ax.errorbar(
                ns,
                means,
                yerr=sems,
                label=_variant_label(method, dtv),
                color=_COLORS.get(method),
                linestyle=styles[(method, dtv)],
                marker="o",
                markersize=3,
                capsize=2,
            )
            n_curves += 1
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("sampled nodes N")
        ax.set_title(f"D = {d}")
        ax.grid(True, which="both", alpha=0.25)
        info["curves"][d] = n_curves
    axes[0][0].set_ylabel("empirical risk")
    axes[0][-1].legend(fontsize=8)
    fig.tight_layout()
    info["files"] = _save(fig, out_base)
    return fig, info


def fit_runtime_exponents(
    rows: list[RuntimeRow], fit_min_d: dict[str, int] | None = None
) -> dict[str, float]:
    """Least-squares scaling exponents from non-timeout rows.

    naive: slope of log(mean time) vs D*log(P)  ->  time ~ P^(cD)
    dequantized: slope of log(mean time) vs log(D)  ->  time ~ D^c
    Methods without at least 3 usable points are omitted.
    """
    windows = dict(FIT_MIN_D)
    if fit_min_d:
        windows.update(fit_min_d)
    out: dict[str, float] = {}
    for method in ("naive", "dequantized"):
        per_d: dict[tuple[int, int], list[float]] = {}
        for r in rows:
            if r.method != method or r.timeout:
                continue
            per_d.setdefault((r.D, r.P), []).append(r.wall_seconds)
        pts = [
            (d, p, float(np.mean(w)))
            for (d, p), w in sorted(per_d.items())
            if d >= windows.get(method, 0)
        ]
        if len(pts) < 3:
            continue
        if method == "naive":
            x = np.array([d * math.log(p) for d, p, _ in pts])
        else:
            x = np.array([math.log(d) for d, _, _ in pts])
        y = np.log(np.array([t for _, _, t in pts]))
        out[method] = float(np.polyfit(x, y, 1)[0])
    return out


def plot_runtime(
    csv_path: str,
    out_base: str | None = None,
    fit_min_d: dict[str, int] | None = None,
):
    """Per-sample wall time vs dimension on log axes, with 95% CI bars and
    fitted scaling guides.  Returns (figure, info dict)."""
    rows = load_runtime_csv(csv_path)
    exponents = fit_runtime_exponents(rows, fit_min_d)
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    info = {"methods": [], "exponents": exponents}
    for method in ("naive", "dequantized"):
        mrows = [r for r in rows if r.method == method]
        if not mrows:
            continue
        usable = [r for r in mrows if not r.timeout]
        if not usable:
            warnings.warn(
                f"method {method!r} has only timed-out rows; omitted from the figure"
            )
            continue
        per_d: dict[int, list[float]] = {}
        p_val = usable[0].P
        for r in usable:
            per_d.setdefault(r.D, []).append(r.wall_seconds)
        ds = sorted(per_d)
        means = np.array([np.mean(per_d[d]) for d in ds])
        cis = np.array(
            [
                1.96 * np.std(per_d[d], ddof=1) / math.sqrt(len(per_d[d]))
                if len(per_d[d]) > 1
                else 0.0
                for d in ds
            ]
        )
        label = method
        if method in exponents:
            c = exponents[method]
            label = (
                f"naive (fit ~ P^{{{c:.2f} D}})"
                if method == "naive"
                else f"dequantized (fit ~ D^{{{c:.2f}}})"
            )
        ax.errorbar(
            ds,
            means,
            yerr=cis,
            label=label,
            color=_COLORS.get(method),
            linestyle="-" if method == "naive" else "--",
            marker="o",
            markersize=4,
            capsize=3,
        )
        if method in exponents:
            c = exponents[method]
            grid = np.geomspace(min(ds), max(ds), 64)
            anchor_d = max(d for d in ds if len(per_d[d]) > 0)
            anchor_t = np.mean(per_d[anchor_d])
            if method == "naive":
                guide = anchor_t * np.exp(c * math.log(p_val) * (grid - anchor_d))
            else:
                guide = anchor_t * (grid / anchor_d) ** c
            ax.plot(grid, guide, color=_COLORS.get(method), alpha=0.35, lw=1.0)
        info["methods"].append(method)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("input dimension D")
    ax.set_ylabel("wall time per sample [s]")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend(fontsize=8)
    fig.tight_layout()
    info["files"] = _save(fig, out_base)
    return fig, info
