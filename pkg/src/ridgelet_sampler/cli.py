"""Command-line interface: dataset generation, sampling, fitting, experiments.

File formats (plain text, LF endings):

* dataset: first line ``P D M``, then M lines of D space-separated residues
  followed by the real label;
* node list: one node per line as ``a_1,...,a_D,b,accepted`` with accepted
  in {0, 1};
* model: first line ``P D N_eff lambda_eff``, then one line per distinct
  node as ``a_1,...,a_D,b,theta``.

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .domain import DEFAULT_ENUMERATION_CAP, FiniteDomain, NodeIndex, is_prime
from .experiments import (
    RiskExperimentConfig,
    RuntimeExperimentConfig,
    draw_sine_samples,
    fit_scaling,
    run_risk_experiment,
    run_runtime_experiment,
    write_risk_csv,
    write_runtime_csv,
    SyntheticSpec,
)
from .oracle import enumerate_exact, exact_sample
from .ridgelet import make_relu_table
from .sampler import (
    EmpiricalDistribution,
    SamplerConfig,
    build_state,
    sample_batch,
)
from .subnetwork import dedup, empirical_risk, ridge_fit


def write_dataset(path: str, P: int, points: np.ndarray, labels: np.ndarray) -> None:
    m, d = points.shape
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{P} {d} {m}\n")
        for row, label in zip(points, labels):
            fh.write(" ".join(str(int(c)) for c in row) + f" {float(label)!r}\n")


def read_dataset(path: str) -> tuple[FiniteDomain, np.ndarray, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}: malformed dataset header")
        p, d, m = (int(tok) for tok in header)
        dom = FiniteDomain(p, d)
        points = np.empty((m, d), dtype=np.int64)
        labels = np.empty(m)
        for i in range(m):
            toks = fh.readline().split()
            if len(toks) != d + 1:
                raise ValueError(f"{path}: row {i + 1} has {len(toks)} fields, expected {d + 1}")
            points[i] = [int(t) for t in toks[:d]]
            labels[i] = float(toks[d])
    if (points < 0).any() or (points >= p).any():
        raise ValueError(f"{path}: coordinates out of range [0, {p})")
    return dom, points, labels


def read_nodes(path: str, dom: FiniteDomain) -> list[NodeIndex]:
    nodes: list[NodeIndex] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            toks = line.split(",")
            if len(toks) != dom.D + 2:
                raise ValueError(
                    f"{path}:{lineno}: expected {dom.D + 2} fields (D={dom.D}), "
                    f"got {len(toks)}; node list and dataset dimensions mismatch"
                )
            coords = [int(t) for t in toks[: dom.D + 1]]
            if any(c < 0 or c >= dom.P for c in coords):
                raise ValueError(
                    f"{path}:{lineno}: residues out of range for P={dom.P}; "
                    f"node list and dataset moduli mismatch"
                )
            nodes.append(NodeIndex(a=tuple(coords[: dom.D]), b=coords[dom.D]))
    return nodes


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(P=args.p, D=args.d, M=args.m, seed=args.seed)
    points, labels = draw_sine_samples(spec)
    write_dataset(args.out, args.p, points, labels)
    distinct = len(np.unique(points, axis=0))
    coverage = distinct / float(args.p**args.d)
    print(f"wrote {args.out}: P={args.p} D={args.d} M={args.m}")
    print(f"K={distinct} distinct support points (coverage {coverage:.6g})")
    print(
        f"labels: min={labels.min():.6g} max={labels.max():.6g} "
        f"mean={labels.mean():.6g}"
    )
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    dom, points, labels = read_dataset(args.data)
    emp = EmpiricalDistribution.from_samples(points, labels, dom)
    g = make_relu_table(dom.P)
    rng = np.random.default_rng(args.seed)
    cfg = SamplerConfig(
        lambda_eff=args.lambda_eff,
        delta_tv=args.delta_tv,
        delta_smooth=args.delta_smooth,
        seed=args.seed,
    )
    lines: list[str] = []
    if args.method == "uniform":
        draws = rng.integers(0, dom.P, size=(args.n, dom.D + 1))
        for row in draws:
            lines.append(",".join(str(int(c)) for c in row) + ",1")
    elif args.method == "exact":
        dist = enumerate_exact(emp, g, cfg, dom, args.enum_cap)
        for _ in range(args.n):
            node = exact_sample(dist, rng)
            lines.append(",".join(map(str, node.a)) + f",{node.b},1")
    else:
        state = build_state(emp, g, cfg, dom)
        for outcome in sample_batch(state, args.n, rng):
            node = outcome.node
            accepted = 1 if outcome.accepted else 0
            lines.append(",".join(map(str, node.a)) + f",{node.b},{accepted}")
    _emit(lines, args.out)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    dom, points, labels = read_dataset(args.data)
    emp = EmpiricalDistribution.from_samples(points, labels, dom)
    g = make_relu_table(dom.P)
    nodes = read_nodes(args.nodes, dom)
    node_set = dedup(nodes)
    model = ridge_fit(node_set, emp, g, dom, args.lambda_eff)
    risk = empirical_risk(model, emp, g, dom)
    if args.out is not None:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(f"{dom.P} {dom.D} {node_set.N_eff} {float(args.lambda_eff)!r}\n")
            for node, theta in zip(model.nodes, model.theta):
                fh.write(",".join(map(str, node.a)) + f",{node.b},{float(theta)!r}\n")
    print(f"N={node_set.N} N_eff={node_set.N_eff} risk={risk!r}")
    return 0


def cmd_risk_experiment(args: argparse.Namespace) -> int:
    cfg = RiskExperimentConfig(
        P=args.p,
        d_values=tuple(range(1, args.d_max + 1)),
        m_factor=args.m_factor,
        n_grid=tuple(args.n_grid),
        reps=args.reps,
        lambda_eff=args.lambda_eff,
        delta_tvs=tuple(args.delta_tvs),
        methods=tuple(args.methods),
        seed=args.seed,
        cap=args.enum_cap,
    )
    rows = run_risk_experiment(cfg)
    write_risk_csv(rows, args.out)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


def cmd_runtime_experiment(args: argparse.Namespace) -> int:
    cfg = RuntimeExperimentConfig(
        P=args.p,
        naive_d_values=tuple(args.naive_d),
        deq_d_values=tuple(args.deq_d),
        m_factor=args.m_factor,
        reps=args.reps,
        lambda_eff=args.lambda_eff,
        delta_tv=args.delta_tv,
        timeout_seconds=args.timeout,
        seed=args.seed,
        cap=args.enum_cap,
    )
    rows = run_runtime_experiment(cfg)
    write_runtime_csv(rows, args.out)
    print(f"wrote {args.out}: {len(rows)} rows")
    try:
        exponents = fit_scaling(
            rows,
            {"naive": args.fit_min_d_naive, "dequantized": args.fit_min_d_deq},
        )
    except ValueError as exc:
        print(f"scaling fit unavailable: {exc}")
        return 0
    if "naive" in exponents:
        print(f"naive scaling exponent c (time ~ P^(c*D)): {exponents['naive']:.2f}")
    if "dequantized" in exponents:
        print(
            "dequantized scaling exponent c (time ~ D^c): "
            f"{exponents['dequantized']:.2f}"
        )
    return 0


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgelet-sampler",
        description="Sparse-subnetwork construction by optimized hidden-node sampling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic sine dataset")
    p_gen.add_argument("--p", type=int, required=True, help="prime modulus")
    p_gen.add_argument("--d", type=int, required=True, help="input dimension")
    p_gen.add_argument("--m", type=int, required=True, help="number of samples")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="dataset file to write")
    p_gen.set_defaults(func=cmd_gen)

    p_sample = sub.add_parser("sample", help="sample hidden nodes for a dataset")
    p_sample.add_argument("--data", required=True, help="dataset file")
    p_sample.add_argument(
        "--method",
        choices=("dequantized", "exact", "uniform"),
        default="dequantized",
    )
    p_sample.add_argument("--n", type=int, required=True, help="number of nodes")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--lambda-eff", type=float, default=1e-3)
    p_sample.add_argument(
        "--delta-smooth",
        default="auto",
        help="smoothing offset, or 'auto' for the coefficient mass gamma",
    )
    p_sample.add_argument("--delta-tv", type=float, default=0.1)
    p_sample.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p_sample.add_argument("--out", default=None, help="node list file (default stdout)")
    p_sample.set_defaults(func=cmd_sample)

    p_fit = sub.add_parser("fit", help="ridge-fit output weights on sampled nodes")
    p_fit.add_argument("--data", required=True, help="dataset file")
    p_fit.add_argument("--nodes", required=True, help="node list file")
    p_fit.add_argument("--lambda-eff", type=float, default=1e-3)
    p_fit.add_argument("--out", default=None, help="model file to write")
    p_fit.set_defaults(func=cmd_fit)

    p_risk = sub.add_parser("risk-experiment", help="risk-vs-N sweep, writes CSV")
    p_risk.add_argument("--p", type=int, default=7)
    p_risk.add_argument("--d-max", type=int, default=6)
    p_risk.add_argument("--m-factor", type=int, default=50)
    p_risk.add_argument(
        "--n-grid",
        type=_int_list,
        default=[8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096],
    )
    p_risk.add_argument("--reps", type=int, default=50)
    p_risk.add_argument("--lambda-eff", type=float, default=1e-3)
    p_risk.add_argument("--delta-tvs", type=_float_list, default=[0.1, 0.7])
    p_risk.add_argument(
        "--methods", type=lambda s: s.split(","), default=["exact", "dequantized", "uniform"]
    )
    p_risk.add_argument("--seed", type=int, default=0)
    p_risk.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p_risk.add_argument("--out", default="risk.csv")
    p_risk.set_defaults(func=cmd_risk_experiment)

    p_rt = sub.add_parser("runtime-experiment", help="runtime scaling sweep, writes CSV")
    p_rt.add_argument("--p", type=int, default=3)
    p_rt.add_argument("--naive-d", type=_int_list, default=[1, 2, 3, 4, 5, 6, 7, 8])
    p_rt.add_argument("--deq-d", type=_int_list, default=[1, 2, 4, 8, 16, 32, 64, 128])
    p_rt.add_argument("--m-factor", type=int, default=50)
    p_rt.add_argument("--reps", type=int, default=20)
    p_rt.add_argument("--lambda-eff", type=float, default=1e-3)
    p_rt.add_argument("--delta-tv", type=float, default=0.1)
    p_rt.add_argument("--timeout", type=float, default=300.0)
    p_rt.add_argument("--fit-min-d-naive", type=int, default=4)
    p_rt.add_argument("--fit-min-d-deq", type=int, default=8)
    p_rt.add_argument("--seed", type=int, default=0)
    p_rt.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p_rt.add_argument("--out", default="runtime.csv")
    p_rt.set_defaults(func=cmd_runtime_experiment)

    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """Flag-level validation beyond argparse types (usage errors, exit 2)."""
    if args.command in ("gen", "risk-experiment", "runtime-experiment"):
        if not is_prime(args.p):
            parser.error(f"P must be prime, got {args.p}")
    if args.command == "gen":
        if args.d < 1:
            parser.error(f"D must be >= 1, got {args.d}")
        if args.m < 1:
            parser.error(f"M must be >= 1, got {args.m}")
    if args.command == "sample":
        if args.n < 1:
            parser.error(f"--n must be >= 1, got {args.n}")
        if not 0.0 < args.delta_tv < 1.0:
            parser.error(f"--delta-tv must lie in (0, 1), got {args.delta_tv}")
        if args.lambda_eff <= 0:
            parser.error(f"--lambda-eff must be positive, got {args.lambda_eff}")
        if args.delta_smooth == "auto":
            args.delta_smooth = None
        else:
            try:
                args.delta_smooth = float(args.delta_smooth)
            except ValueError:
                parser.error(
                    f"--delta-smooth must be a number or 'auto', got {args.delta_smooth!r}"
                )
            if args.delta_smooth <= 0:
                parser.error("--delta-smooth must be positive")
    if args.command == "fit" and args.lambda_eff <= 0:
        parser.error(f"--lambda-eff must be positive, got {args.lambda_eff}")
    if args.command == "risk-experiment":
        if args.d_max < 1:
            parser.error("--d-max must be >= 1")
        for m in args.methods:
            if m not in ("exact", "dequantized", "uniform"):
                parser.error(f"unknown method {m!r}")
        for dtv in args.delta_tvs:
            if not 0.0 < dtv < 1.0:
                parser.error(f"--delta-tvs entries must lie in (0, 1), got {dtv}")
    if args.command == "runtime-experiment":
        if not 0.0 < args.delta_tv < 1.0:
            parser.error(f"--delta-tv must lie in (0, 1), got {args.delta_tv}")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except (ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
