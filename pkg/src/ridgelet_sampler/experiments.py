"""Experiment drivers: synthetic datasets, risk-vs-N sweep, runtime scaling.

Both drivers are fully deterministic given a master seed: every repetition
draws from a generator seeded by a 64-bit mix of
(seed, D, method, variant, N, rep), so results do not depend on execution
order.  Runtime rows additionally carry wall-clock measurements, which are
the one physically non-reproducible column.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .domain import EnumerationCapError, FiniteDomain, NodeIndex
from .oracle import (
    ExactDistribution,
    enumerate_exact,
    exact_distribution_from_dense,
    exact_sample,
    naive_dense_solve,
)
from .ridgelet import make_relu_table
from .sampler import (
    EmpiricalDistribution,
    SamplerConfig,
    build_state,
    sample_batch,
    sample_node,
)
from .subnetwork import dedup, empirical_risk, ridge_fit

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1

#: Stable method identifiers folded into per-row sub-seeds.
METHOD_IDS = {"dataset": 0, "exact": 1, "dequantized": 2, "uniform": 3, "naive": 4}


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64

def derive_seed(master: int, *fields: int) -> int:
    """64-bit sub-seed mixing the master seed with integer row coordinates."""
    h = master & _MASK64
    for f in fields:
        h = _splitmix64(h ^ (int(f) & _MASK64))
    return h


@dataclass(frozen=True)
class SyntheticSpec:
    """Synthetic regression instance: uniform inputs, sine target."""

    P: int
    D: int
    M: int
    target: str = "sine"
    input_law: str = "uniform"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if self.target != "sine":
            raise ValueError(f"unsupported target {self.target!r}")
        if self.input_law != "uniform":
            raise ValueError(f"unsupported input law {self.input_law!r}")
        FiniteDomain(self.P, self.D)  # validates primality and dimension


def sine_labels(points: np.ndarray, P: int) -> np.ndarray:
    """Noiseless target sin((4 pi / P) * (sum_d x_d mod P))."""
    s = np.asarray(points, dtype=np.int64).sum(axis=-1) % P
    return np.sin(4.0 * np.pi / P * s)


def draw_sine_samples(spec: SyntheticSpec) -> tuple[np.ndarray, np.ndarray]:
    """M i.i.d. uniform points on Z_P^D with their sine labels."""
    rng = np.random.default_rng(spec.seed)
    points = rng.integers(0, spec.P, size=(spec.M, spec.D), dtype=np.int64)
    return points, sine_labels(points, spec.P)


def gen_sine_dataset(spec: SyntheticSpec) -> EmpiricalDistribution:
    """Aggregated empirical distribution of a fresh synthetic draw."""
    points, labels = draw_sine_samples(spec)
    return EmpiricalDistribution.from_samples(
        points, labels, FiniteDomain(spec.P, spec.D)
    )


@dataclass(frozen=True)
class RiskResultRow:
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
class RuntimeResultRow:
    method: str
    P: int
    D: int
    M: int
    rep: int
    wall_seconds: float
    timeout: bool
    seed: int


@dataclass(frozen=True)
class RiskExperimentConfig:
    """Risk sweep configuration (defaults reproduce the headline sweep)."""

    P: int = 7
    d_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    m_factor: int = 50
    n_grid: tuple[int, ...] = (8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
    reps: int = 50
    lambda_eff: float = 1e-3
    delta_tvs: tuple[float, ...] = (0.1, 0.7)
    methods: tuple[str, ...] = ("exact", "dequantized", "uniform")
    seed: int = 0
    cap: int | None = None


@dataclass(frozen=True)
class RuntimeExperimentConfig:
    """Runtime sweep configuration (defaults reproduce the scaling sweep)."""

    P: int = 3
    naive_d_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)
    deq_d_values: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128)
    m_factor: int = 50
    reps: int = 20
    lambda_eff: float = 1e-3
    delta_tv: float = 0.1
    timeout_seconds: float = 300.0
    seed: int = 0
    cap: int | None = None


def _uniform_nodes(n: int, dom: FiniteDomain, rng: np.random.Generator) -> list[NodeIndex]:
    draws = rng.integers(0, dom.P, size=(n, dom.D + 1))
    return [NodeIndex(a=tuple(row[: dom.D].tolist()), b=int(row[dom.D])) for row in draws]


def _dataset_for(cfg_seed: int, P: int, D: int, m_factor: int) -> EmpiricalDistribution:
    spec = SyntheticSpec(
        P=P, D=D, M=m_factor * D, seed=derive_seed(cfg_seed, D, METHOD_IDS["dataset"])
    )
    return gen_sine_dataset(spec)


def run_risk_experiment(cfg: RiskExperimentConfig) -> list[RiskResultRow]:
    """Risk-vs-N sweep: sample nodes, dedup, ridge-fit, record the risk.

    Yields one row per (D, method variant, N, repetition).  The exact
    method is skipped with a warning for dimensions whose node space
    exceeds the enumeration cap.
    """
    g = make_relu_table(cfg.P)
    rows: list[RiskResultRow] = []
    for D in cfg.d_values:
        dom = FiniteDomain(cfg.P, D)
        emp = _dataset_for(cfg.seed, cfg.P, D, cfg.m_factor)

        variants: list[tuple[str, float | None, Callable]] = []
        for method in cfg.methods:
            if method == "exact":
                try:
                    # delta_tv is irrelevant for enumeration; smoothing is
                    # auto-resolved to gamma, matching the sampler states.
                    dist = enumerate_exact(
                        emp,
                        g,
                        SamplerConfig(lambda_eff=cfg.lambda_eff, delta_tv=0.5),
                        dom,
                        cfg.cap,
                    )
                except EnumerationCapError as exc:
                    logger.warning("skipping exact method at D=%d: %s", D, exc)
                    continue
                variants.append(
                    (
                        "exact",
                        None,
                        lambda n, rng, dist=dist: [
                            exact_sample(dist, rng) for _ in range(n)
                        ],
                    )
                )
            elif method == "dequantized":
                for dtv in cfg.delta_tvs:
                    state = build_state(
                        emp,
                        g,
                        SamplerConfig(lambda_eff=cfg.lambda_eff, delta_tv=dtv),
                        dom,
                    )
                    variants.append(
                        (
                            "dequantized",
                            dtv,
                            lambda n, rng, state=state: [
                                o.node for o in sample_batch(state, n, rng)
                            ],
                        )
                    )
            elif method == "uniform":
                variants.append(
                    ("uniform", None, lambda n, rng, dom=dom: _uniform_nodes(n, dom, rng))
                )
            else:
                raise ValueError(f"unknown method {method!r}")

        for method, dtv, draw in variants:
            dtv_key = 0 if dtv is None else int(round(dtv * 1e9))
            for n in cfg.n_grid:
                for rep in range(cfg.reps):
                    row_seed = derive_seed(
                        cfg.seed, D, METHOD_IDS[method], dtv_key, n, rep
                    )
                    rng = np.random.default_rng(row_seed)
                    node_set = dedup(draw(n, rng))
                    model = ridge_fit(node_set, emp, g, dom, cfg.lambda_eff)
                    rows.append(
                        RiskResultRow(
                            method=method,
                            delta_tv=dtv,
                            P=cfg.P,
                            D=D,
                            M=emp.M,
                            N=n,
                            rep=rep,
                            N_eff=node_set.N_eff,
                            risk=empirical_risk(model, emp, g, dom),
                            seed=row_seed,
                        )
                    )
    return rows


def run_runtime_experiment(cfg: RuntimeExperimentConfig) -> list[RuntimeResultRow]:
    """Wall-clock comparison of the dense baseline and the fast sampler.

    Each repetition times one end-to-end sample: the baseline builds the
    dense system, solves it, enumerates the node weights and draws once;
    the fast path preprocesses the dataset and runs the rejection loop.
    Dataset generation is excluded from the timed section.  A repetition
    exceeding the timeout is flagged and the remaining (larger) runs of
    that method are skipped.
    """
    g = make_relu_table(cfg.P)
    rows: list[RuntimeResultRow] = []

    def timed_reps(method: str, D: int, emp: EmpiricalDistribution, once) -> bool:
        """Run cfg.reps timed executions; returns False to stop the grid."""
        for rep in range(cfg.reps):
            row_seed = derive_seed(cfg.seed, D, METHOD_IDS[method], 0, 0, rep)
            rng = np.random.default_rng(row_seed)
            t0 = time.perf_counter()
            once(rng)
            wall = time.perf_counter() - t0
            timed_out = wall > cfg.timeout_seconds
            rows.append(
                RuntimeResultRow(
                    method=method,
                    P=cfg.P,
                    D=D,
                    M=emp.M,
                    rep=rep,
                    wall_seconds=wall,
                    timeout=timed_out,
                    seed=row_seed,
                )
            )
            if timed_out:
                logger.warning(
                    "%s run at D=%d exceeded timeout (%.1fs > %.1fs); "
                    "skipping the rest of its grid",
                    method,
                    D,
                    wall,
                    cfg.timeout_seconds,
                )
                return False
        return True

    for D in cfg.naive_d_values:
        dom = FiniteDomain(cfg.P, D)
        emp = _dataset_for(cfg.seed, cfg.P, D, cfg.m_factor)
        scfg = SamplerConfig(lambda_eff=cfg.lambda_eff, delta_tv=cfg.delta_tv)

        def naive_once(rng, emp=emp, dom=dom, scfg=scfg):
            model = naive_dense_solve(emp, g, scfg, dom, cfg.cap)
            dist = exact_distribution_from_dense(model)
            exact_sample(dist, rng)

        try:
            if not timed_reps("naive", D, emp, naive_once):
                break
        except (EnumerationCapError, MemoryError) as exc:
            logger.warning("naive method stopped at D=%d: %s", D, exc)
            break

    for D in cfg.deq_d_values:
        dom = FiniteDomain(cfg.P, D)
        emp = _dataset_for(cfg.seed, cfg.P, D, cfg.m_factor)
        scfg = SamplerConfig(lambda_eff=cfg.lambda_eff, delta_tv=cfg.delta_tv)

        def deq_once(rng, emp=emp, dom=dom, scfg=scfg):
            state = build_state(emp, g, scfg, dom)
            sample_node(state, rng)

        if not timed_reps("dequantized", D, emp, deq_once):
            break

    return rows


# Default least-squares windows for the scaling fits: the baseline's cubic
# term dominates from D=4 at desk scale, the fast sampler is measured on
# the upper half of its grid.
DEFAULT_FIT_MIN_D = {"naive": 4, "dequantized": 8}


def fit_scaling(
    rows: Sequence[RuntimeResultRow],
    fit_min_d: dict[str, int] | None = None,
) -> dict[str, float]:
    """Fitted scaling exponents from runtime rows (timeouts excluded).

    The baseline exponent c is the slope of log(mean time) against
    D*log(P), i.e. time ~ P^(cD); the fast sampler's is the slope against
    log(D), i.e. time ~ D^c.  Requires at least 3 usable grid points.
    """
    windows = dict(DEFAULT_FIT_MIN_D)
    if fit_min_d:
        windows.update(fit_min_d)
    exponents: dict[str, float] = {}
    for method in ("naive", "dequantized"):
        per_d: dict[tuple[int, int], list[float]] = {}
        for row in rows:
            if row.method != method or row.timeout:
                continue
            per_d.setdefault((row.D, row.P), []).append(row.wall_seconds)
        pts = [
            (d, p, float(np.mean(walls)))
            for (d, p), walls in sorted(per_d.items())
            if d >= windows.get(method, 0)
        ]
        if not per_d:
            continue
        if len(pts) < 3:
            raise ValueError(
                f"need >= 3 non-timeout grid points with D >= "
                f"{windows.get(method, 0)} to fit {method!r}, got {len(pts)}"
            )
        if method == "naive":
            x = np.array([d * np.log(p) for d, p, _ in pts])
        else:
            x = np.array([np.log(d) for d, _, _ in pts])
        y = np.log(np.array([t for _, _, t in pts]))
        exponents[method] = float(np.polyfit(x, y, 1)[0])
    return exponents


RISK_CSV_HEADER = "method,delta_tv,P,D,M,N,rep,N_eff,risk,seed"
RUNTIME_CSV_HEADER = "method,P,D,M,rep,wall_seconds,timeout,seed"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_risk_csv(rows: Sequence[RiskResultRow], path: str) -> None:
    """Comma-separated rows, '.' decimals, LF line endings."""
    with open(path, "w", newline="\n") as fh:
        fh.write(RISK_CSV_HEADER + "\n")
        for r in rows:
            dtv = "" if r.delta_tv is None else _fmt(r.delta_tv)
            fh.write(
                f"{r.method},{dtv},{r.P},{r.D},{r.M},{r.N},{r.rep},"
                f"{r.N_eff},{_fmt(r.risk)},{r.seed}\n"
            )


def write_runtime_csv(rows: Sequence[RuntimeResultRow], path: str) -> None:
    """Comma-separated rows, '.' decimals, LF line endings, timeout as 0/1."""
    with open(path, "w", newline="\n") as fh:
        fh.write(RUNTIME_CSV_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.method},{r.P},{r.D},{r.M},{r.rep},{_fmt(r.wall_seconds)},"
                f"{int(r.timeout)},{r.seed}\n"
            )
