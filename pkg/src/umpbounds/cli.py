"""Command-line front end: bound sweeps, coset simulation, betting tradeoffs.

Output is CSV with a '#' comment header that echoes the scientific config and
tool version (never the thread count or output path, so identical configs
produce byte-identical files). Infeasible cells print "NA". Exit codes:
0 success, 2 config error, 3 resource budget error, 4 simulate acceptance
failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .achievability import (
    SimplexWeights,
    dt_class_bound,
    max_log2M_dt,
    max_log2M_header_ach,
    max_log2M_header_ach_best,
)
from .asymptotics import kl_divergence_bits, normal_approx_log2M
from .channel import ChannelKind, ChannelSpec, channel_stats
from .numerics import gaussian_Q_inv
from .converse import (
    converse_max_log2M_bec,
    converse_max_log2M_bsc,
    header_conv_max_log2M_bec,
    header_conv_max_log2M_bec_best,
    header_conv_max_log2M_bsc,
    header_conv_max_log2M_bsc_best,
)
from .cosets import ResourceBudgetError, build_coset_code, monte_carlo_error, save_codebook

NA = "NA"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_ACCEPTANCE = 4


class ConfigError(Exception):
    pass


@dataclass
class ClassSpec:
    eps: Optional[float] = None
    k: Optional[int] = None
    lam: Optional[float] = None


@dataclass
class SweepConfig:
    command: str
    channel: ChannelKind
    p: float
    n_list: List[int]
    classes: List[ClassSpec]
    mu: Optional[List[float]] = None
    n0: str = "auto"  # "auto" or an integer literal
    seed: int = 0
    trials: int = 10000
    codebooks: int = 1
    grid: float = 0.01
    eps0_grid: int = 1000
    out: Optional[str] = None
    codebook_out: Optional[str] = None
    threads: int = 1

    def echo_items(self) -> List[Tuple[str, str]]:
        """Config lines for the CSV comment header, deterministic order."""
        items = [
            ("command", self.command),
            ("channel", self.channel.value),
            ("p", _fmt(self.p)),
            ("n", ",".join(str(n) for n in self.n_list)),
        ]
        for c in self.classes:
            if c.k is not None:
                items.append(("class", f"k={c.k},lambda={_fmt(c.lam)}"))
            else:
                items.append(("class", f"eps={_fmt(c.eps)},lambda={_fmt(c.lam)}"))
        if self.mu is not None:
            items.append(("mu", ",".join(_fmt(v) for v in self.mu)))
        items.append(("n0", self.n0))
        items.append(("seed", str(self.seed)))
        items.append(("trials", str(self.trials)))
        items.append(("codebooks", str(self.codebooks)))
        items.append(("grid", _fmt(self.grid)))
        items.append(("eps0_grid", str(self.eps0_grid)))
        return items


def _fmt(x) -> str:
    """Floating-point cells carry 12 significant digits."""
    if x is None:
        return NA
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _parse_n(text: str) -> List[int]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"n range must be start:stop:step, got {text!r}")
        start, stop, step = (int(v) for v in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"bad n range {text!r}")
        return list(range(start, stop + 1, step))
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad n list {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"n values must be >= 1: {text!r}")
    return values


def _parse_class(text: str) -> ClassSpec:
    out = ClassSpec()
    for part in text.split(","):
        if "=" not in part:
            raise ConfigError(f"class entries look like key=value, got {part!r}")
        key, value = part.split("=", 1)
        key = key.strip()
        if key == "eps":
            out.eps = float(value)
        elif key == "k":
            out.k = int(value)
        elif key == "lambda":
            out.lam = float(value)
        else:
            raise ConfigError(f"unknown class key {key!r}")
    if out.lam is None:
        raise ConfigError(f"class {text!r} needs lambda=")
    if (out.eps is None) == (out.k is None):
        raise ConfigError(f"class {text!r} needs exactly one of eps= or k=")
    return out


def _parse_mu(text: str) -> List[float]:
    values = [float(v) for v in text.split(",") if v.strip()]
    if abs(sum(values) - 1.0) > 1e-9 or any(v < 0 for v in values):
        raise ConfigError(f"mu must be a probability vector, got {text!r}")
    return values


def _read_config_file(path: str) -> List[Tuple[str, str]]:
    pairs = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"config line needs key=value: {line!r}")
                key, value = line.split("=", 1)
                pairs.append((key.strip(), value.strip()))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return pairs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="umpbounds",
        description="Finite-blocklength UMP bounds and coset-code simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("bound", "simulate", "tradeoff"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None, help="key=value config file; flags override")
        sp.add_argument("--channel", choices=["bsc", "bec"], default=None)
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--n", default=None, help="comma list or start:stop:step")
        sp.add_argument(
            "--class",
            dest="classes",
            action="append",
            default=None,
            help="eps=<f>,lambda=<f> or k=<u>,lambda=<f>; repeatable",
        )
        sp.add_argument("--mu", default=None)
        sp.add_argument("--n0", default=None, help="auto or an integer header length")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--trials", type=int, default=None)
        sp.add_argument("--codebooks", type=int, default=None)
        sp.add_argument("--grid", type=float, default=None)
        sp.add_argument("--eps0-grid", type=int, default=None, dest="eps0_grid")
        sp.add_argument("--out", default=None)
        sp.add_argument("--codebook-out", default=None, dest="codebook_out")
    return parser


def _merge(cli_value, file_map, key, default):
    if cli_value is not None:
        return cli_value
    if key in file_map:
        return file_map[key]
    return default


def build_config(argv: Sequence[str]) -> SweepConfig:
    args = _build_parser().parse_args(argv)
    file_pairs = _read_config_file(args.config) if args.config else []
    file_map = {}
    file_classes = []
    for key, value in file_pairs:
        if key == "class":
            file_classes.append(value)
        else:
            file_map[key] = value

    channel = _merge(args.channel, file_map, "channel", None)
    if channel is None:
        raise ConfigError("--channel is required")
    p = _merge(args.p, file_map, "p", None)
    if p is None:
        raise ConfigError("--p is required")
    n_text = _merge(args.n, file_map, "n", None)
    if n_text is None:
        raise ConfigError("--n is required")
    class_texts = args.classes if args.classes is not None else (file_classes or None)
    if class_texts is None:
        raise ConfigError("at least one --class is required")
    mu_text = _merge(args.mu, file_map, "mu", None)

    try:
        cfg = SweepConfig(
            command=args.command,
            channel=ChannelKind(channel),
            p=float(p),
            n_list=_parse_n(str(n_text)),
            classes=[_parse_class(t) for t in class_texts],
            mu=_parse_mu(mu_text) if mu_text is not None else None,
            n0=str(_merge(args.n0, file_map, "n0", "auto")),
            seed=int(_merge(args.seed, file_map, "seed", 0)),
            trials=int(_merge(args.trials, file_map, "trials", 10000)),
            codebooks=int(_merge(args.codebooks, file_map, "codebooks", 1)),
            grid=float(_merge(args.grid, file_map, "grid", 0.01)),
            eps0_grid=int(_merge(args.eps0_grid, file_map, "eps0_grid", 1000)),
            out=_merge(args.out, file_map, "out", None),
            codebook_out=_merge(args.codebook_out, file_map, "codebook_out", None),
            threads=max(1, int(os.environ.get("UMP_THREADS", "1"))),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not 0.0 <= cfg.p <= 1.0:
        raise ConfigError(f"p must be in [0,1], got {cfg.p}")
    if cfg.n0 != "auto":
        try:
            int(cfg.n0)
        except ValueError as exc:
            raise ConfigError(f"--n0 must be 'auto' or an integer, got {cfg.n0!r}") from exc
    lams = [c.lam for c in cfg.classes]
    try:
        SimplexWeights(lams)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.command in ("bound", "tradeoff") and any(c.eps is None for c in cfg.classes):
        raise ConfigError(f"{cfg.command} classes need eps=")
    if cfg.command == "simulate":
        if any(c.k is None for c in cfg.classes):
            raise ConfigError("simulate classes need k=")
        if cfg.trials < 100:
            raise ConfigError(f"simulate needs at least 100 trials, got {cfg.trials}")
        if cfg.codebooks < 1:
            raise ConfigError(f"codebooks must be >= 1, got {cfg.codebooks}")
    if cfg.command == "tradeoff":
        if cfg.mu is None:
            raise ConfigError("tradeoff requires --mu")
        if len(cfg.mu) != len(cfg.classes):
            raise ConfigError(
                f"{len(cfg.mu)} mu entries for {len(cfg.classes)} classes"
            )
    return cfg


# --------------------------------------------------------------------------
# bound sweep
# --------------------------------------------------------------------------

BOUND_COLUMNS = [
    "n",
    "class",
    "lambda",
    "eps_target",
    "log2M_dt",
    "log2M_converse",
    "log2M_header_ach",
    "log2M_header_conv",
    "log2M_normal_approx",
]


def _converse_rate(spec: ChannelSpec, eps: float, lam: float) -> Optional[float]:
    if spec.kind is ChannelKind.BEC:
        return converse_max_log2M_bec(spec, eps, lam)
    # reduce BSC p > 1/2 by symmetry; the degenerate p in {0, 1/2, 1} have no
    # Neyman-Pearson shell structure and report NA
    p_eff = min(spec.p, 1.0 - spec.p)
    if p_eff == 0.0 or p_eff == 0.5:
        return None
    value = converse_max_log2M_bsc(ChannelSpec(ChannelKind.BSC, p_eff, spec.n), eps, lam)
    return value if value >= 0.0 else None


def _header_rates(
    spec: ChannelSpec, eps: float, m: int, all_eps: List[float], cfg: SweepConfig
) -> Tuple[Optional[float], Optional[float]]:
    if cfg.n0 == "auto":
        ach = max_log2M_header_ach_best(spec, eps, m, all_eps)
    else:
        n0 = int(cfg.n0)
        if n0 > spec.n or (n0 == 0 and m > 1):
            ach = None
        else:
            ach = max_log2M_header_ach(spec, eps, m, n0)
    if spec.kind is ChannelKind.BEC:
        if cfg.n0 == "auto":
            conv = header_conv_max_log2M_bec_best(spec, eps, m, all_eps)
        else:
            n0 = int(cfg.n0)
            conv = header_conv_max_log2M_bec(spec, eps, m, n0, all_eps) if n0 <= spec.n else None
    else:
        p_eff = min(spec.p, 1.0 - spec.p)
        if p_eff == 0.0 or p_eff == 0.5:
            conv = None
        else:
            spec_eff = ChannelSpec(ChannelKind.BSC, p_eff, spec.n)
            if cfg.n0 == "auto":
                conv = header_conv_max_log2M_bsc_best(
                    spec_eff, eps, m, all_eps, cfg.eps0_grid
                )
            else:
                n0 = int(cfg.n0)
                conv = (
                    header_conv_max_log2M_bsc(spec_eff, eps, m, n0, all_eps, cfg.eps0_grid)
                    if n0 <= spec.n
                    else None
                )
    return ach, conv


def bound_rows(cfg: SweepConfig) -> List[List[str]]:
    m = len(cfg.classes)
    all_eps = [c.eps for c in cfg.classes]

    def rows_for_n(n: int) -> List[List[str]]:
        spec = ChannelSpec(cfg.channel, cfg.p, n)
        stats = channel_stats(spec)
        cache = {}  # classes sharing (eps, lambda) share one computation
        out = []
        for idx, cls in enumerate(cfg.classes):
            key = (cls.eps, cls.lam)
            if key not in cache:
                dt = max_log2M_dt(spec, cls.eps, cls.lam)
                conv = _converse_rate(spec, cls.eps, cls.lam)
                header_ach, header_conv = _header_rates(spec, cls.eps, m, all_eps, cfg)
                if stats.dispersion > 0.0:
                    normal = max(0.0, normal_approx_log2M(spec, cls.eps, cls.lam))
                else:
                    normal = None
                cache[key] = (dt, conv, header_ach, header_conv, normal)
            dt, conv, header_ach, header_conv, normal = cache[key]
            out.append(
                [
                    str(n),
                    str(idx),
                    _fmt(cls.lam),
                    _fmt(cls.eps),
                    _fmt(dt),
                    _fmt(conv),
                    _fmt(header_ach),
                    _fmt(header_conv),
                    _fmt(normal),
                ]
            )
        return out

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            groups = list(pool.map(rows_for_n, cfg.n_list))
    else:
        groups = [rows_for_n(n) for n in cfg.n_list]
    rows = [row for group in groups for row in group]
    rows.sort(key=lambda r: (int(r[0]), int(r[1])))
    return rows


# --------------------------------------------------------------------------
# coset simulation
# --------------------------------------------------------------------------

SIMULATE_COLUMNS = [
    "n",
    "class",
    "k",
    "lambda",
    "codebooks",
    "trials",
    "errors",
    "error_rate",
    "std_error",
    "dt_bound",
    "pass",
]


def simulate_rows(cfg: SweepConfig) -> Tuple[List[List[str]], bool]:
    if len(cfg.n_list) != 1:
        raise ConfigError("simulate expects a single blocklength n")
    n = cfg.n_list[0]
    spec = ChannelSpec(cfg.channel, cfg.p, n)
    ks = [c.k for c in cfg.classes]
    lambdas = SimplexWeights([c.lam for c in cfg.classes])
    m = len(ks)
    errors = [0] * m
    for s in range(cfg.codebooks):
        build_rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.seed, s, 0]))
        )
        code = build_coset_code(spec, ks, lambdas, build_rng)
        if cfg.codebook_out:
            suffix = f"_{s}" if cfg.codebooks > 1 else ""
            save_codebook(code, spec, f"{cfg.codebook_out}{suffix}")
        mc_seed = int(
            np.random.SeedSequence([cfg.seed, s, 1]).generate_state(1, dtype=np.uint64)[0]
        )
        results = monte_carlo_error(code, spec, cfg.trials, mc_seed, threads=cfg.threads)
        for i, res in enumerate(results):
            errors[i] += res.errors
    total_trials = cfg.trials * cfg.codebooks
    rows = []
    all_pass = True
    for i, cls in enumerate(cfg.classes):
        rate = errors[i] / total_trials
        se = math.sqrt(rate * (1.0 - rate) / total_trials)
        bound = dt_class_bound(spec, float(cls.k), cls.lam)
        ok = rate <= bound + 3.0 * se
        all_pass &= ok
        rows.append(
            [
                str(n),
                str(i),
                str(cls.k),
                _fmt(cls.lam),
                str(cfg.codebooks),
                str(total_trials),
                str(errors[i]),
                _fmt(rate),
                _fmt(se),
                _fmt(bound),
                "1" if ok else "0",
            ]
        )
    return rows, all_pass


# --------------------------------------------------------------------------
# betting tradeoff
# --------------------------------------------------------------------------


def _simplex_grid(m: int, steps: int):
    """All integer compositions of `steps` into m parts, as weight tuples."""

    def rec(prefix, remaining, parts_left):
        if parts_left == 1:
            yield prefix + (remaining,)
            return
        for v in range(remaining + 1):
            yield from rec(prefix + (v,), remaining - v, parts_left - 1)

    for comp in rec((), steps, m):
        yield tuple(c / steps for c in comp)


def tradeoff_columns(m: int) -> List[str]:
    return ["n"] + [f"lambda_{i+1}" for i in range(m)] + [
        "expected_rate",
        "kl_loss",
        "is_argmax",
    ]


def tradeoff_rows(cfg: SweepConfig) -> List[List[str]]:
    m = len(cfg.classes)
    mu = cfg.mu
    steps = round(1.0 / cfg.grid)
    if steps < 1:
        raise ConfigError(f"grid resolution {cfg.grid} coarser than the simplex")
    eps = [c.eps for c in cfg.classes]
    rows = []
    for n in cfg.n_list:
        spec = ChannelSpec(cfg.channel, cfg.p, n)
        stats = channel_stats(spec)
        if stats.dispersion <= 0.0:
            raise ConfigError(
                f"tradeoff needs positive dispersion, got V={stats.dispersion}"
            )
        # nC - sqrt(nV) Qinv(eps_i) is lambda-independent; precompute per class
        base = [
            n * stats.capacity - math.sqrt(n * stats.dispersion) * gaussian_Q_inv(e)
            for e in eps
        ]
        best_rate, best_point = -math.inf, None
        points = list(_simplex_grid(m, steps))
        rates = []
        for lam in points:
            total = 0.0
            for mu_i, base_i, lam_i in zip(mu, base, lam):
                if mu_i == 0.0:
                    continue
                if lam_i == 0.0:
                    total = -math.inf
                    break
                total += mu_i * (base_i + math.log2(lam_i) - math.log2(mu_i))
            rate = total / n
            rates.append(rate)
            if rate > best_rate:
                best_rate, best_point = rate, lam
        for lam, rate in zip(points, rates):
            rows.append(
                [str(n)]
                + [_fmt(v) for v in lam]
                + [
                    _fmt(rate),
                    _fmt(kl_divergence_bits(mu, lam) / n),
                    "1" if lam == best_point else "0",
                ]
            )
    return rows


# --------------------------------------------------------------------------
# CSV emission and entry point
# --------------------------------------------------------------------------


def write_csv(cfg: SweepConfig, columns: List[str], rows: List[List[str]], stream) -> None:
    stream.write(f"# umpbounds {__version__}\n")
    for key, value in cfg.echo_items():
        stream.write(f"# {key} = {value}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(row) + "\n")


def run(cfg: SweepConfig) -> int:
    status = EXIT_OK
    if cfg.command == "bound":
        columns, rows = BOUND_COLUMNS, bound_rows(cfg)
    elif cfg.command == "simulate":
        rows, all_pass = simulate_rows(cfg)
        columns = SIMULATE_COLUMNS
        if not all_pass:
            status = EXIT_ACCEPTANCE
    else:
        columns, rows = tradeoff_columns(len(cfg.classes)), tradeoff_rows(cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            write_csv(cfg, columns, rows, fh)
    else:
        write_csv(cfg, columns, rows, sys.stdout)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = build_config(list(argv) if argv is not None else sys.argv[1:])
        return run(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceBudgetError as exc:
        print(
            f"resource budget exceeded: {exc}\n"
            "reduce class exponents k or the number of classes",
            file=sys.stderr,
        )
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
