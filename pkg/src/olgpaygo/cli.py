"""Command-line front end.

Every subcommand writes its tables to ``--out`` (CSV by default) and prints
a short summary. Settings come from built-in defaults, then an optional
``--config`` file of ``key = value`` lines, then explicit flags.

Exit codes: 0 success, 2 invalid configuration, 3 ingestion error,
4 no feasible equilibrium.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import data, pipeline, simple, svgplot
from .exceptions import IngestionError, LookupFailure, NoEquilibriumError, OLGError
from .tails import boundary_prices, prone_to_savings_tail, tail_rates

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INGEST = 3
EXIT_NO_EQUILIBRIUM = 4

COMMANDS = ("series", "bounds", "tail", "sweep", "design", "simple")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    country: str = "Brazil"
    gamma: Optional[List[float]] = None
    theta: float = pipeline.DEFAULT_THETA
    theta_tau: Optional[float] = None
    phi: float = pipeline.DEFAULT_PHI
    alpha_tau: Optional[float] = None
    grid_step: float = 1e-4
    jobs: int = 1
    out: str = "out"
    format: str = "csv"
    source: str = "canonical"
    data: Optional[str] = None
    a3: Optional[List[float]] = None
    periods: int = 20
    alpha: List[float] = None

    def countries(self) -> List[str]:
        if self.gamma is not None:
            return ["custom"]
        if self.country.lower() == "all":
            return list(data.COUNTRIES)
        return [c.strip() for c in self.country.split(",") if c.strip()]


def _floats(text) -> List[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(" ", "").split(",") if v]


_CONVERT = {
    "country": str, "gamma": _floats, "theta": float, "theta_tau": float, "phi": float,
    "alpha_tau": float, "grid_step": float, "jobs": int, "out": str, "format": str,
    "source": str, "data": str, "a3": _floats, "periods": int, "alpha": _floats,
}


def read_config(path) -> Dict[str, object]:
    """Parse a flat ``key = value`` file; a section header is optional."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text if text.lstrip().startswith("[") else "[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            values[key.replace("-", "_")] = raw
    return values


def _apply(cfg: RunConfig, values: Dict[str, object]) -> None:
    known = {f.name for f in fields(RunConfig)}
    for key, raw in values.items():
        if key not in known:
            raise ConfigError(f"unknown setting {key!r}")
        if raw is None:
            continue
        try:
            setattr(cfg, key, _CONVERT[key](raw))
        except (TypeError, ValueError):
            raise ConfigError(f"invalid value for {key}: {raw!r}") from None


def _validate(cfg: RunConfig) -> None:
    if cfg.format not in ("csv", "json", "svg"):
        raise ConfigError(f"format must be csv, json or svg, got {cfg.format!r}")
    if cfg.source not in ("canonical", "raw"):
        raise ConfigError("source must be canonical or raw")
    if not cfg.grid_step > 0:
        raise ConfigError("grid_step must be positive")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    if cfg.theta < 1 or (cfg.theta_tau is not None and cfg.theta_tau <= 0):
        raise ConfigError("theta must be >= 1 and theta_tau positive")
    if not 0 <= cfg.phi <= 1:
        raise ConfigError("phi must lie in [0, 1]")
    if cfg.periods < 1:
        raise ConfigError("periods must be positive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="olgpaygo",
        description="Pareto-optimal OLG equilibria and pay-as-you-go designs.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    d = RunConfig()
    S = argparse.SUPPRESS
    parser.add_argument("--config", default=None, help="key = value file; flags override it")
    parser.add_argument("--country", default=S,
                        help=f"country name, comma list or 'all' (default: {d.country})")
    parser.add_argument("--gamma", default=S, help="explicit comma-separated growth factors")
    parser.add_argument("--theta", type=float, default=S,
                        help=f"preference weight (default: {d.theta})")
    parser.add_argument("--theta-tau", dest="theta_tau", type=float, default=S,
                        help="tail preference weight (default: theta)")
    parser.add_argument("--phi", type=float, default=S,
                        help=f"old-age endowment share (default: {d.phi})")
    parser.add_argument("--alpha-tau", dest="alpha_tau", type=float, default=S,
                        help="tail growth factor (default: last gamma)")
    parser.add_argument("--grid-step", dest="grid_step", type=float, default=S,
                        help=f"a3 grid spacing (default: {d.grid_step})")
    parser.add_argument("--jobs", type=int, default=S,
                        help=f"sweep worker threads (default: {d.jobs})")
    parser.add_argument("--out", default=S, help=f"output directory (default: {d.out})")
    parser.add_argument("--format", choices=("csv", "json", "svg"), default=S,
                        help=f"table format; svg adds charts to the CSV (default: {d.format})")
    parser.add_argument("--source", choices=("canonical", "raw"), default=S,
                        help=f"published tables or recomputed from cohorts (default: {d.source})")
    parser.add_argument("--data", default=S, help="cohort CSV replacing the bundled file")
    parser.add_argument("--a3", default=S, help="comma-separated a3 samples for 'tail'")
    parser.add_argument("--periods", type=int, default=S,
                        help=f"tail series length (default: {d.periods})")
    parser.add_argument("--alpha", default=S,
                        help="growth factors for 'simple' (default: 0.5,1,2)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        _apply(cfg, read_config(args.config))
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    _apply(cfg, overrides)
    if cfg.data is not None and "source" not in overrides:
        cfg.source = "raw"
    if cfg.alpha is None:
        cfg.alpha = [0.5, 1.0, 2.0]
    _validate(cfg)
    return cfg


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


class Writer:
    """Writes tables and charts under one directory, in one format."""

    def __init__(self, cfg: RunConfig):
        self.root = Path(cfg.out)
        self.format = cfg.format
        self.root.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def table(self, name: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
        if self.format == "json":
            path = self.root / f"{name}.json"
            records = [{h: _json_value(v) for h, v in zip(header, row)} for row in rows]
            text = json.dumps(records, indent=2) + "\n"
        else:
            path = self.root / f"{name}.csv"
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([[_cell(v) for v in row] for row in rows])
            text = buf.getvalue()
        path.write_bytes(text.encode("utf-8"))
        self.written.append(path)
        return path

    def chart(self, name: str, series, **kwargs) -> Optional[Path]:
        if self.format != "svg":
            return None
        path = self.root / f"{name}.svg"
        path.write_bytes(svgplot.line_chart(series, **kwargs).encode("utf-8"))
        self.written.append(path)
        return path


def _json_value(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _economy(cfg: RunConfig, country: str):
    if country == "custom":
        return pipeline.build_economy(cfg.gamma, cfg.theta, cfg.theta_tau, cfg.phi, cfg.alpha_tau)
    alpha, gamma = pipeline.country_series(country, cfg.source, cfg.data)
    return pipeline.build_economy(gamma, cfg.theta, cfg.theta_tau, cfg.phi, cfg.alpha_tau)


def _label(country: str) -> str:
    if country == "custom":
        return country
    try:
        return data.resolve_country(country)
    except LookupFailure:
        return country


def cmd_series(cfg: RunConfig, out: Writer) -> int:
    raw = data.ingest(cfg.data)
    names = list(raw) if cfg.country.lower() == "all" else [
        n for n in raw if n.lower() in {c.lower() for c in cfg.countries()}
        or _label(n) in {_label(c) for c in cfg.countries()}
    ]
    if not names:
        raise LookupFailure(f"no series for {cfg.country!r}")
    t1, t2, t3, diff = [], [], [], []
    for name in names:
        cs = data.derive_series(raw[name])
        for t, h in enumerate(cs.H):
            t1.append([name, t, h, cs.e[t] if t < len(cs.e) else None])
        canon = None
        if cfg.source == "canonical":
            try:
                label = data.resolve_country(name)
                canon = (data.canonical_alpha(label), data.canonical_beta(label),
                         data.canonical_gamma(label))
            except LookupFailure:
                canon = None
        alpha, beta, gamma = canon if canon else (cs.alpha, cs.beta, cs.gamma)
        for t, a in enumerate(alpha):
            t2.append([name, t, a, beta[t] if t < len(beta) else None])
        for t, g in enumerate(gamma):
            t3.append([name, t, g])
        if canon:
            for t in range(len(canon[2])):
                diff.append([name, t, cs.alpha[t] - canon[0][t], cs.gamma[t] - canon[2][t]])
    out.table("table1", ["country", "t", "H_millions", "gdp_pc"], t1)
    out.table("table2", ["country", "t", "alpha", "beta"], t2)
    out.table("table3", ["country", "t", "gamma"], t3)
    if diff:
        out.table("raw_vs_canonical", ["country", "t", "alpha_diff", "gamma_diff"], diff)
    print(f"series: {len(names)} countries ({cfg.source})")
    return EXIT_OK


def cmd_bounds(cfg: RunConfig, out: Writer) -> int:
    rows = []
    for country in cfg.countries():
        label = _label(country)
        bounds = pipeline.theta_bounds(label, cfg.phi, cfg.source, cfg.data)
        published = data.PUBLISHED_THETA_BOUNDS.get(label) if cfg.phi == 0.2 else None
        for t, b in enumerate(bounds):
            ref = published[t] if published else None
            rows.append([label, t, b, ref])
        print(f"{label}: " + ", ".join(f"{b:.2f}" for b in bounds))
    out.table("bounds", ["country", "t", "theta_lower_bound", "published"], rows)
    return EXIT_OK


def _tail_samples(cfg: RunConfig, tail) -> List[float]:
    if cfg.a3 is not None:
        return list(cfg.a3)
    hi = tail.a3_upper
    return [-0.5, -0.25, 0.0, round(0.25 * hi, 4), round(0.5 * hi, 4), round(0.9 * hi, 4)]


def cmd_tail(cfg: RunConfig, out: Writer) -> int:
    summary, series_rows, charts = [], [], {}
    for country in cfg.countries():
        label = _label(country)
        _, tail = _economy(cfg, country)
        lo, hi = tail.a3_interval
        summary.append([label, tail.alpha, tail.theta, tail.lambda3, lo, hi,
                        prone_to_savings_tail(tail), tail.hypotheses_hold()])
        print(f"{label}: lambda3={tail.lambda3:.6f}, a3 in ({lo:g}, {hi:.4f})")
        for a3 in _tail_samples(cfg, tail):
            boundary_prices(tail, a3)
            rates = tail_rates(tail, a3, cfg.periods)
            series_rows += [[label, a3, t, r] for t, r in enumerate(rates)]
            charts[f"{label} a3={a3:g}"] = (np.arange(rates.size), rates)
    out.table("tail", ["country", "alpha_tau", "theta_tau", "lambda3", "a3_lower", "a3_upper",
                       "prone_to_savings", "hypotheses_hold"], summary)
    out.table("fig2", ["country", "a3", "t", "rate"], series_rows)
    out.chart("fig2", charts, title="Tail return rates", xlabel="t", ylabel="r_t")
    return EXIT_OK


def _sweep_rows(run):
    rows = []
    for c in run.result.candidates:
        rates = list(c.rates[:9]) + [None] * (9 - min(9, c.rates.size))
        rows.append([c.a3, c.feasible] + rates + [c.rate_stddev,
                     c.max_residual if c.feasible else None])
    return rows


def cmd_sweep(cfg: RunConfig, out: Writer) -> int:
    header = ["a3", "feasible"] + [f"r{t}" for t in range(9)] + ["stddev", "max_residual"]
    intervals, fig3, charts = [], [], {}
    status = EXIT_OK
    multi = len(cfg.countries()) > 1
    for country in cfg.countries():
        label = _label(country)
        econ, tail = _economy(cfg, country)
        run = pipeline.run(econ, tail, label, cfg.grid_step, cfg.jobs)
        name = f"sweep_{label}" if multi else "sweep"
        out.table(name, header, _sweep_rows(run))
        for lo, hi in run.result.intervals:
            intervals.append([label, lo, hi])
        if run.selected is None:
            print(f"{label}: no feasible a3")
            status = EXIT_NO_EQUILIBRIUM
            continue
        s = run.selected
        fig3 += [[label, s.a3, t, r, t >= econ.horizon] for t, r in enumerate(s.rates)]
        charts[label] = (np.arange(s.rates.size), s.rates)
        bands = ", ".join(f"[{lo:.4f}, {hi:.4f}]" for lo, hi in run.result.intervals)
        print(f"{label}: feasible {bands}; selected a3={s.a3:.4f}, "
              f"max residual {s.max_residual:.2e}")
    out.table("intervals", ["country", "a3_low", "a3_high"], intervals)
    out.table("fig3", ["country", "a3", "t", "rate", "tail"], fig3)
    if charts:
        first = next(iter(cfg.countries()))
        horizon = _economy(cfg, first)[0].horizon
        out.chart("fig3", charts, title="Minimum-variance return rates", xlabel="t",
                  ylabel="r_t", vline=horizon)
    return status


def cmd_design(cfg: RunConfig, out: Writer) -> int:
    design_rows, balance_rows, fig4, charts = [], [], [], {}
    status = EXIT_OK
    for country in cfg.countries():
        label = _label(country)
        econ, tail = _economy(cfg, country)
        run = pipeline.run(econ, tail, label, cfg.grid_step, cfg.jobs)
        if run.selected is None:
            print(f"{label}: no feasible a3")
            status = EXIT_NO_EQUILIBRIUM
            continue
        for row in run.design.rows():
            design_rows.append([label] + list(row.values()))
        for k, r in enumerate(run.design.balance_residuals):
            balance_rows.append([label, k, None if np.isnan(r) else r])
        n = econ.horizon + 1
        gamma = pipeline.gamma_overlay(econ.gamma, n)
        rates = run.selected.rates[:n]
        fig4 += [[label, t, rates[t], gamma[t]] for t in range(n)]
        charts[f"{label} r"] = (np.arange(n), rates)
        charts[f"{label} gamma"] = (np.arange(n), gamma)
        print(f"{label}: a3={run.selected.a3:.4f}, contribution rate (G0) "
              f"{run.design.contribution_paid[0]:.4f}, cass {run.cass.verdict.value}")
    out.table("design", ["country", "generation", "s1", "s2", "s3", "sigma_paper",
                         "contribution_paid", "replacement"], design_rows)
    out.table("balance", ["country", "period", "relative_residual"], balance_rows)
    out.table("fig4", ["country", "t", "rate", "gamma"], fig4)
    if charts:
        out.chart("fig4", charts, title="Return rates and growth", xlabel="t", ylabel="")
    return status


def cmd_simple(cfg: RunConfig, out: Writer) -> int:
    trace_rows, sens_rows = [], []
    for alpha in cfg.alpha:
        for seed in (0.1, 1.0, 10.0):
            conv = simple.solve_first_rate(alpha, seed)
            trace_rows += [[alpha, seed, d + 1, r] for d, r in enumerate(conv.trace)]
            print(f"alpha={alpha:g} seed={seed:g}: r1={conv.rate:.12f} depth={conv.depth}")
        for t in range(1, 7):
            exact = simple.sensitivity(alpha, t)
            fd = simple.finite_difference_sensitivity(alpha, t)
            sens_rows.append([alpha, t, exact, fd, abs(fd - exact) / exact])
    out.table("convergence", ["alpha", "seed", "depth", "r1"], trace_rows)
    out.table("sensitivity", ["alpha", "t", "formula", "finite_difference", "rel_error"],
              sens_rows)
    return EXIT_OK


_DISPATCH = {
    "series": cmd_series, "bounds": cmd_bounds, "tail": cmd_tail,
    "sweep": cmd_sweep, "design": cmd_design, "simple": cmd_simple,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _DISPATCH[args.command](cfg, Writer(cfg))
    except IngestionError as exc:
        print(f"ingestion error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except NoEquilibriumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_EQUILIBRIUM
    except OLGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
