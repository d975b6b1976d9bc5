"""CSV output, sweep spec files and the bundled figure presets."""
from __future__ import annotations

import configparser
import io
import math
import os
from pathlib import Path

from .model import BlockingParams, ConfigurationError, LigandParams, ScenarioConfig
from .scenarios import SweepRecord, SweepSpec
from .solver import SolverOptions

__all__ = ["PRESETS", "preset", "write_csv", "format_csv", "read_spec_file", "parse_spec"]

_COLONY = dict(n=16, N=5)

PRESETS = {
    # LS against TS for several m, no background noise
    "fig7": dict(
        varying="A_s", values=tuple(range(10, 161, 10)), config=dict(_COLONY, A_ne=0.0),
        ts_m=(2, 4, 8, 16), alpha_ls=0.5, alpha_ts=0.5,
    ),
    "fig10": dict(
        varying="A_s", values=tuple(range(10, 161, 10)), config=dict(_COLONY, A_ne=5.0),
        ts_m=(2, 4, 8, 16), alpha_ls=0.5, alpha_ts=0.5,
    ),
    # capacity and symmetrized-KL bound against background noise
    "fig9": dict(
        varying="A_ne", values=(1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0),
        config=dict(_COLONY, A_s=80.0, alpha=40.0), include_bounds=True,
    ),
    # on-off lower bound against the unconstrained capacity, small colony
    "fig22": dict(
        varying="A_s", values=(1.0, 2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0),
        config=dict(n=4, N=5, A_ne=0.0), alpha_ls=1.0, include_bounds=True,
    ),
    # TS with and without blocking against LS, m = 2
    "fig24": dict(
        varying="A_s", values=(10.0, 20.0, 40.0, 80.0, 120.0, 160.0), config=dict(_COLONY, A_ne=0.0),
        ts_m=(2,), blocking=True, alpha_ls=0.5, alpha_ts=0.5,
    ),
    # same, with level budget A_s / (2m) and type budget A_s / 2
    "fig24-caption": dict(
        varying="A_s", values=(10.0, 20.0, 40.0, 80.0, 120.0, 160.0), config=dict(_COLONY, A_ne=0.0),
        ts_m=(2,), blocking=True, alpha_ls=0.25, alpha_ts=0.5,
    ),
}


def preset(name: str, *, solver: SolverOptions | None = None, workers: int = 1) -> SweepSpec:
    try:
        entry = dict(PRESETS[name])
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    config = entry.pop("config")
    A_s = config.pop("A_s", 80.0)
    alpha = config.pop("alpha", A_s)
    return SweepSpec(
        config=ScenarioConfig(A_s=A_s, alpha=alpha, **config),
        params=LigandParams(0.0004, 0.1),
        blocking_params=BlockingParams(0.0004, 0.1, 0.0005, 0.01),
        solver=solver or SolverOptions(),
        workers=workers,
        **entry,
    )


def _fmt(value, scale: float) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value / scale, ".9g")


def format_csv(records: list[SweepRecord], units: str = "nats") -> str:
    """CSV text for ``records``; columns for quantities never computed are left out."""
    if not records:
        raise ValueError("no records to write")
    if units not in ("nats", "bits"):
        raise ValueError(f"units must be 'nats' or 'bits', got {units!r}")
    scale = math.log(2) if units == "bits" else 1.0
    ms = sorted({m for r in records for m in r.capacity_ts})
    columns = [("parameter", lambda r: format(r.parameter, ".9g"))]
    if any(r.capacity_ls is not None for r in records):
        columns.append((f"capacity_ls_{units}", lambda r: _fmt(r.capacity_ls, scale)))
    for m in ms:
        columns.append((f"capacity_ts_m{m}_{units}", lambda r, m=m: _fmt(r.capacity_ts.get(m), scale)))
    for name in ("upper_bound", "lower_bound", "blocking_capacity"):
        if any(getattr(r, name) is not None for r in records):
            columns.append((f"{name}_{units}", lambda r, name=name: _fmt(getattr(r, name), scale)))
    columns.append(("converged", lambda r: "true" if r.converged else "false"))
    columns.append((f"gap_{units}", lambda r: _fmt(r.gap, scale)))
    if any(r.error for r in records):
        columns.append(("error", lambda r: (r.error or "").replace(",", ";")))

    out = io.StringIO()
    out.write(",".join(name for name, _ in columns) + "\n")
    for r in records:
        out.write(",".join(get(r) for _, get in columns) + "\n")
    return out.getvalue()


def write_csv(records: list[SweepRecord], path, units: str = "nats") -> None:
    """Write ``records`` to ``path``; nothing is created when ``records`` is empty."""
    text = format_csv(records, units)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_spec(text: str, *, workers: int = 1) -> SweepSpec:
    """Sweep spec from ``key = value`` lines; keys are the CLI flag names without dashes.

    ``values`` and ``ts-m`` take comma-separated lists, ``alpha-ls`` and
    ``alpha-ts`` are fractions of ``As``.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.optionxform = str
    cp.read_string("[sweep]\n" + text)
    raw = dict(cp["sweep"])
    known = {
        "varying", "values", "n", "N", "As", "alpha", "Ane", "gamma", "kappa", "gamma-block",
        "kappa-block", "ts-m", "ls", "include-bounds", "blocking", "blocking-m", "full-peak",
        "alpha-ls", "alpha-ts", "grid-points", "grid-per-dim", "tol", "max-iter",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown spec keys: {', '.join(sorted(unknown))}")

    def num(key, default, kind=float):
        return kind(raw[key]) if key in raw else default

    def flag(key, default):
        if key not in raw:
            return default
        try:
            return _BOOL[raw[key].strip().lower()]
        except KeyError:
            raise ConfigurationError(f"{key} must be true or false, got {raw[key]!r}") from None

    def floats(key):
        return tuple(float(v) for v in raw.get(key, "").split(",") if v.strip())

    if "varying" not in raw or "values" not in raw:
        raise ConfigurationError("spec needs 'varying' and 'values'")
    A_s = num("As", 80.0)
    config = ScenarioConfig(
        n=num("n", 16, int), N=num("N", 5, int), A_s=A_s, alpha=num("alpha", A_s), A_ne=num("Ane", 0.0)
    )
    gamma, kappa = num("gamma", 0.0004), num("kappa", 0.1)
    return SweepSpec(
        varying=raw["varying"].strip(),
        values=floats("values"),
        config=config,
        params=LigandParams(gamma, kappa),
        blocking_params=BlockingParams(gamma, kappa, num("gamma-block", 0.0005), num("kappa-block", 0.01)),
        solver=SolverOptions(tolerance=num("tol", 1e-7), max_iterations=num("max-iter", 50_000, int)),
        ls=flag("ls", True),
        ts_m=tuple(int(m) for m in floats("ts-m")),
        include_bounds=flag("include-bounds", False),
        blocking=flag("blocking", False),
        blocking_m=num("blocking-m", 2, int),
        full_peak=flag("full-peak", False),
        alpha_ls=num("alpha-ls", None),
        alpha_ts=num("alpha-ts", None),
        grid_points=num("grid-points", 201, int),
        grid_per_dim=num("grid-per-dim", 41, int),
        workers=workers,
    )


def read_spec_file(path: str | os.PathLike, *, workers: int = 1) -> SweepSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"), workers=workers)
