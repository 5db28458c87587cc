"""Country cohort and income series.

Input is a long-format CSV with header ``country,t,H_millions,gdp_pc``:
cohort sizes ``H_t`` (millions) for every ``t`` and per-capita income
``e_t`` for a leading run of periods. Growth factors are derived as
``alpha_t = H_{t+1}/H_t``, ``beta_t = e_{t+1}/e_t`` and
``gamma_t = alpha_t beta_t``; income growth beyond the data repeats the
last observed factor.

The bundled file holds two-decade cohort averages for five countries. The
published, rounded growth tables are also available verbatim
(:func:`canonical_gamma`, :func:`canonical_alpha`, :func:`canonical_beta`)
for runs that must be bit-stable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple

from ..exceptions import IngestionError, LookupFailure

HEADER = ("country", "t", "H_millions", "gdp_pc")
COUNTRIES = ("Brazil", "China", "India", "Italy", "US")

_ALIASES = {"usa": "US", "united states": "US", "us": "US"}

_ALPHA = {
    "Brazil": (1.78, 1.58, 1.16, 0.87, 0.82),
    "China": (1.62, 1.51, 0.92, 0.78, 0.60),
    "India": (1.58, 1.66, 1.42, 1.06, 0.88),
    "Italy": (1.07, 1.09, 0.80, 0.87, 0.79),
    "US": (1.49, 1.17, 1.10, 1.06, 0.98),
}
_BETA = {
    "Brazil": (2.49, 1.05, 1.38),
    "China": (1.81, 5.13, 4.73),
    "India": (1.26, 1.92, 2.39),
    "Italy": (2.25, 1.49, 0.90),
    "US": (1.64, 1.56, 1.22),
}
_GAMMA = {
    "Brazil": (4.42, 1.67, 1.61, 1.21, 1.14),
    "China": (2.93, 7.75, 4.37, 3.71, 2.82),
    "India": (1.99, 3.18, 3.39, 2.54, 2.10),
    "Italy": (2.41, 1.62, 0.72, 0.78, 0.71),
    "US": (2.44, 1.83, 1.34, 1.29, 1.20),
}
# Lower bounds on theta at phi = 0.2, relabeled periods t = 0, 1, 2.
PUBLISHED_THETA_BOUNDS = {
    "Brazil": (1.50, 1.57, 1.56),
    "China": (1.28, 2.69, 2.82),
    "India": (0.90, 1.70, 1.65),
    "Italy": (1.54, 1.02, 1.07),
    "US": (1.29, 1.11, 1.12),
}


@dataclass(frozen=True)
class CountrySeries:
    name: str
    H: Tuple[float, ...]
    e: Tuple[float, ...]
    alpha: Optional[Tuple[float, ...]] = None
    beta: Optional[Tuple[float, ...]] = None
    gamma: Optional[Tuple[float, ...]] = None


def resolve_country(name: str) -> str:
    key = name.strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    for country in COUNTRIES:
        if country.lower() == key:
            return country
    raise LookupFailure(f"unknown country {name!r}; known: {', '.join(COUNTRIES)}")


def canonical_gamma(country: str) -> Tuple[float, ...]:
    return _GAMMA[resolve_country(country)]


def canonical_alpha(country: str) -> Tuple[float, ...]:
    return _ALPHA[resolve_country(country)]


def canonical_beta(country: str) -> Tuple[float, ...]:
    return _BETA[resolve_country(country)]


def bundled_path() -> Path:
    return Path(str(resources.files(__name__).joinpath("table1.csv")))


def _number(text: str, field: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise IngestionError(f"{field} is not a number: {text!r}", row=row) from None
    if not value > 0:
        raise IngestionError(f"{field} must be positive, got {text}", row=row)
    return value


def ingest(path=None) -> Dict[str, CountrySeries]:
    """Read and validate a cohort CSV; defaults to the bundled file.

    Returns raw series (no derived ratios), keyed by country in file order.
    """
    path = bundled_path() if path is None else Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            return _parse(handle)
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc.strerror}") from None


def ingest_text(text: str) -> Dict[str, CountrySeries]:
    return _parse(io.StringIO(text))


def _parse(handle) -> Dict[str, CountrySeries]:
    reader = csv.reader(handle)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != HEADER:
        raise IngestionError(f"header must be {','.join(HEADER)}", row=1)
    rows: Dict[str, list] = {}
    for row_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(HEADER):
            raise IngestionError(f"expected {len(HEADER)} fields, got {len(fields)}", row=row_no)
        name, t_text, h_text, e_text = (f.strip() for f in fields)
        if not name:
            raise IngestionError("empty country name", row=row_no)
        try:
            t = int(t_text)
        except ValueError:
            raise IngestionError(f"t is not an integer: {t_text!r}", row=row_no) from None
        entries = rows.setdefault(name, [])
        if t != len(entries):
            raise IngestionError(f"{name}: expected t={len(entries)}, got t={t}", row=row_no)
        h = _number(h_text, "H_millions", row_no)
        e = _number(e_text, "gdp_pc", row_no) if e_text else None
        if e is not None and entries and entries[-1][1] is None:
            raise IngestionError(f"{name}: gdp_pc resumes after a gap", row=row_no)
        entries.append((h, e))
    return {
        name: CountrySeries(
            name=name,
            H=tuple(h for h, _ in entries),
            e=tuple(e for _, e in entries if e is not None),
        )
        for name, entries in rows.items()
    }


def serialize(series: Dict[str, CountrySeries], path=None) -> str:
    """Write series back in the input format; returns the CSV text."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for cs in series.values():
        for t, h in enumerate(cs.H):
            e = format(cs.e[t], ".17g") if t < len(cs.e) else ""
            writer.writerow([cs.name, t, format(h, ".17g"), e])
    text = out.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text


def derive_series(cs: CountrySeries) -> CountrySeries:
    if len(cs.H) < 2 or len(cs.e) < 2:
        raise IngestionError(f"{cs.name}: need at least two H and two e values")
    alpha = tuple(b / a for a, b in zip(cs.H, cs.H[1:]))
    beta = [b / a for a, b in zip(cs.e, cs.e[1:])]
    beta += [beta[-1]] * max(0, len(alpha) - len(beta))
    beta = tuple(beta[: len(alpha)])
    gamma = tuple(a * b for a, b in zip(alpha, beta))
    return replace(cs, alpha=alpha, beta=beta, gamma=gamma)


def load_country(country: str, path=None) -> CountrySeries:
    """Derived series of one country from ``path`` (default: bundled)."""
    series = ingest(path)
    wanted = country.strip().lower()
    for name, cs in series.items():
        if name.lower() == wanted:
            return derive_series(cs)
    try:
        canonical = resolve_country(country)
    except LookupFailure:
        canonical = None
    if canonical in series:
        return derive_series(series[canonical])
    raise LookupFailure(f"country {country!r} not in {path or 'bundled data'}")


def to_json(cs: CountrySeries) -> str:
    return json.dumps(asdict(cs), indent=2, sort_keys=True)
