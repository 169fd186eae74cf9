"""Command line interface: figure sweeps and closed-form validation.

Examples
--------
::

    linklab pathloss-d1 --preset fig03
    linklab outage-rho --config my.cfg --sweep rho_over_gamma_dB:0:30:31 --family fog:light,moderate
    linklab validate --samples 1000000 --seed 7

Exit status is 0 on success, 1 when validation fails and 2 for configuration
or grid errors.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .atmosphere import load_catalog
from .channel import PRESETS, FogFadingDist, ProductChannelDist, end_to_end_gain
from .config import ScenarioConfig, load_config, preset_path
from .errors import ConfigError, DomainError
from .montecarlo import ValidationCase, run_validation
from .performance import (
    linear_to_db,
    max_spectral_efficiency,
    outage_probability,
    sdnr_ceiling,
    throughput,
)

__all__ = ["main", "COMMANDS", "VARIABLES", "parse_grid", "parse_family", "sweep",
           "default_validation_cases", "format_csv", "format_json"]


@dataclass(frozen=True)
class Variable:
    """A sweepable scenario quantity and how it is written into a config."""

    apply: Callable[[ScenarioConfig, object], ScenarioConfig]
    categorical: bool = False


def _set_d1(cfg, v):
    total = cfg.d1 + cfg.d2
    if not 0 < v < total:
        raise ConfigError(f"d1={v} must lie strictly between 0 and d1 + d2 = {total}")
    return cfg.replace(d1=v, d2=total - v)


def _set_snr(cfg, v):
    noise = cfg.noise_dBW if cfg.noise_dBW is not None else 0.0
    return cfg.replace(P_s_dBW=noise + v, noise_dBW=noise, rho_dB=None)


def _set_rho_over_gamma(cfg, v):
    return cfg.replace(rho_dB=float(linear_to_db(cfg.gamma_th())) + v,
                       P_s_dBW=None, noise_dBW=None)


def _set_fog(cfg, name):
    if name not in PRESETS:
        raise ConfigError(f"unknown fog preset {name!r}; choose from {sorted(PRESETS)}")
    return cfg.replace(hop1=name, hop2=name, k1=None, beta1=None, k2=None, beta2=None)


VARIABLES = {
    "f_GHz": Variable(lambda c, v: c.replace(f_GHz=v)),
    "d1": Variable(_set_d1),
    "d": Variable(lambda c, v: c.replace(d1=v, d2=v)),
    "psi_deg": Variable(lambda c, v: c.replace(psi_deg=v)),
    "l": Variable(lambda c, v: c.replace(l_h=v, l_v=v)),
    "rho_dB": Variable(lambda c, v: c.replace(rho_dB=v, P_s_dBW=None, noise_dBW=None)),
    "snr_dB": Variable(_set_snr),
    "gamma_th_dB": Variable(lambda c, v: c.replace(gamma_th_dB=v, r_t=None)),
    "rho_over_gamma_dB": Variable(_set_rho_over_gamma),
    "kappa": Variable(lambda c, v: c.replace(kappa_t=v / math.sqrt(2.0), kappa_r=v / math.sqrt(2.0))),
    "kappa_each": Variable(lambda c, v: c.replace(kappa_t=v, kappa_r=v)),
    "rt": Variable(lambda c, v: c.replace(r_t=v, gamma_th_dB=None)),
    "M": Variable(lambda c, v: c.replace(M=v)),
    "fog": Variable(_set_fog, categorical=True),
}

PATHLOSS_COLUMNS = ("free_space_loss_dB", "molecular_loss_dB", "fog_loss_dB", "loss_dB")
OUTAGE_COLUMNS = ("loss_dB", "rho_dB", "gamma_th_dB", "ceiling_dB", "P_o", "valid")
THROUGHPUT_COLUMNS = ("loss_dB", "rho_dB", "r_t", "max_r_t", "P_o", "D_per_W", "D", "valid")

# command -> (kind, variables the sweep may run over)
COMMANDS = {
    "pathloss-f": ("pathloss", ("f_GHz", "l")),
    "pathloss-d1": ("pathloss", ("d1",)),
    "outage-f": ("outage", ("f_GHz",)),
    "outage-rho": ("outage", ("rho_dB", "snr_dB", "rho_over_gamma_dB")),
    "outage-d1": ("outage", ("d1", "d")),
    "outage-kappa": ("outage", ("kappa", "kappa_each")),
    "throughput-rt": ("throughput", ("rt",)),
    "throughput-psi": ("throughput", ("psi_deg",)),
    "throughput-d1": ("throughput", ("d1",)),
}
COLUMNS = {"pathloss": PATHLOSS_COLUMNS, "outage": OUTAGE_COLUMNS, "throughput": THROUGHPUT_COLUMNS}


def parse_grid(spec: str) -> tuple[str, np.ndarray]:
    """``var:start:stop:count`` to a variable name and a linear grid."""
    parts = spec.split(":")
    if len(parts) != 4:
        raise ConfigError(f"grid {spec!r} must look like var:start:stop:count")
    var, start, stop, count = parts
    if var not in VARIABLES or VARIABLES[var].categorical:
        raise ConfigError(f"grid variable {var!r} is not a numeric sweep variable")
    try:
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise ConfigError(f"grid {spec!r}: start/stop must be numbers and count an integer") from None
    if count < 1:
        raise ConfigError(f"grid {spec!r}: count must be at least 1")
    return var, np.linspace(start, stop, count)


def parse_family(spec: str) -> tuple[str, list]:
    """``var:v1,v2,...`` to a variable name and its values."""
    var, sep, values = spec.partition(":")
    if not sep or not values:
        raise ConfigError(f"family {spec!r} must look like var:v1,v2,...")
    if var not in VARIABLES:
        raise ConfigError(f"unknown family variable {var!r}")
    items = [v.strip() for v in values.split(",")]
    if VARIABLES[var].categorical:
        return var, items
    try:
        return var, [float(v) for v in items]
    except ValueError:
        raise ConfigError(f"family {spec!r}: values must be numbers") from None


def _evaluate(kind, cfg, catalog):
    gain = end_to_end_gain(cfg.geometry(), cfg.state(), catalog=catalog)
    if kind == "pathloss":
        return {
            "free_space_loss_dB": gain.free_space_loss_dB,
            "molecular_loss_dB": gain.molecular_loss_dB,
            "fog_loss_dB": gain.fog_loss_dB,
            "loss_dB": gain.loss_dB,
        }
    rho = cfg.rho(gain.h_g)
    dist = cfg.channel_dist()
    hw = cfg.hardware()
    gamma_th = cfg.gamma_th()
    if kind == "outage":
        ceiling = sdnr_ceiling(rho, hw)
        return {
            "loss_dB": gain.loss_dB,
            "rho_dB": float(linear_to_db(rho)),
            "gamma_th_dB": float(linear_to_db(gamma_th)),
            "ceiling_dB": float(linear_to_db(ceiling)),
            "P_o": outage_probability(gamma_th, rho, dist, hw),
            "valid": int(gamma_th < ceiling),
        }
    r_t = cfg.rate()
    max_rt = max_spectral_efficiency(rho, hw)
    valid = r_t < max_rt
    D = throughput(cfg.W, r_t, rho, dist, hw)
    return {
        "loss_dB": gain.loss_dB,
        "rho_dB": float(linear_to_db(rho)),
        "r_t": r_t,
        "max_r_t": max_rt,
        "P_o": outage_probability(2.0 ** r_t - 1.0, rho, dist, hw) if valid else 1.0,
        "D_per_W": D / cfg.W,
        "D": D,
        "valid": int(valid),
    }


def _evaluate_point(args):
    kind, cfg, catalog = args
    try:
        return _evaluate(kind, cfg, catalog)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


@dataclass
class SweepResult:
    columns: list
    rows: list


def sweep(command: str, config: ScenarioConfig, grid: str, family: str | None = None,
          catalog=None, jobs: int = 1) -> SweepResult:
    """Evaluate ``command`` over a grid, optionally for a family of values.

    Rows are ordered by family value, then grid index.
    """
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    kind, allowed = COMMANDS[command]
    var, values = parse_grid(grid)
    if var not in allowed:
        raise ConfigError(f"{command} sweeps one of {', '.join(allowed)}, not {var!r}")
    fam_var, fam_values = parse_family(family) if family else (None, [None])
    if fam_var == var:
        raise ConfigError("family and sweep variable must differ")
    if catalog is None:
        catalog = load_catalog(config.catalog_path())

    tasks = []
    keys = []
    for fv in fam_values:
        base = VARIABLES[fam_var].apply(config, fv) if fam_var else config
        for v in values:
            tasks.append((kind, VARIABLES[var].apply(base, float(v)), catalog))
            keys.append((fv, float(v)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(_evaluate_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        outputs = [_evaluate_point(t) for t in tasks]

    columns = [var] + ([fam_var] if fam_var else []) + list(COLUMNS[kind])
    rows = []
    for (fv, v), out in zip(keys, outputs):
        row = {var: v}
        if fam_var:
            row[fam_var] = fv
        row.update(out)
        rows.append(row)
    return SweepResult(columns, rows)


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int, np.integer)):
        return str(int(value))
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.9e}"


def format_csv(columns, rows) -> str:
    out = io.StringIO()
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    return out.getvalue()


def _json_value(value):
    if isinstance(value, (str, bool, int, np.integer)):
        return value if isinstance(value, str) else int(value)
    if not math.isfinite(value):
        return None
    return float(_fmt(value))


def format_json(columns, rows, **meta) -> str:
    payload = dict(meta)
    payload["columns"] = list(columns)
    payload["rows"] = [{c: _json_value(row[c]) for c in columns} for row in rows]
    return json.dumps(payload, indent=1) + "\n"


# operating points of the default validation set: rho / gamma_th this many dB
# above the mean fog loss of the link, which keeps every preset away from
# the trivial outage values 0 and 1
VALIDATION_OFFSETS_DB = (0.0, 5.0, 10.0)


def mean_fog_loss_dB(dist: ProductChannelDist) -> float:
    """Mean of ``-20 log10 A``: the mean of ``-ln A`` converted to dB."""
    nepers = dist.hop1.k / dist.hop1.zeta + dist.hop2.k / dist.hop2.zeta
    return 20.0 / math.log(10.0) * nepers


def default_validation_cases(config: ScenarioConfig,
                             negative_control: bool = False) -> list[ValidationCase]:
    """Every fog preset at three operating points, with the config's hops and hardware.

    The operating points sit ``VALIDATION_OFFSETS_DB`` above the mean fog
    loss of each preset. The negative control feeds the closed form a rate
    computed with the hop distance in metres instead of kilometres, which
    must be caught.
    """
    if config.r_t is None and config.gamma_th_dB is None:
        gamma_th = 1.0
    else:
        gamma_th = config.gamma_th()
    hw = config.hardware()
    cases = []
    for name, cond in PRESETS.items():
        dist = ProductChannelDist.from_conditions(cond, config.d1, cond, config.d2)
        for offset in VALIDATION_OFFSETS_DB:
            rho = gamma_th * 10.0 ** ((mean_fog_loss_dB(dist) + offset) / 10.0)
            cases.append(ValidationCase(f"{name}/mean+{offset:g}dB", dist, dist, rho, gamma_th, hw))
    if negative_control:
        cond = PRESETS["light"]
        good = ProductChannelDist.from_conditions(cond, config.d1, cond, config.d2)
        bad = ProductChannelDist(FogFadingDist(cond.k, 4.343 / (cond.beta * config.d1)),
                                 FogFadingDist(cond.k, 4.343 / (cond.beta * config.d2)))
        rho = gamma_th * 10.0 ** 1.5
        cases.append(ValidationCase("light/15dB/zeta-in-metres", bad, good, rho, gamma_th, hw))
    return cases


VALIDATION_COLUMNS = ("case", "closed_form", "monte_carlo", "half_width_95", "n_samples", "pass")


def _build_parser():
    parser = argparse.ArgumentParser(prog="linklab", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS) + ["validate"])
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--config", help="scenario INI file")
    src.add_argument("--preset", help="bundled figure preset, e.g. fig05")
    parser.add_argument("--sweep", help="grid as var:start:stop:count")
    parser.add_argument("--family", help="family as var:v1,v2,...")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--samples", type=int, default=10_000_000)
    parser.add_argument("--catalog", help="line catalog file or directory")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("--negative-control", action="store_true",
                        help="validate: add a case with a deliberately wrong fading rate")
    return parser


def _run(args) -> tuple[str, int]:
    if args.preset:
        config = load_config(preset_path(args.preset))
    elif args.config:
        config = load_config(args.config)
    else:
        config = ScenarioConfig()
    if args.catalog:
        config = config.replace(catalog=args.catalog)

    if args.command == "validate":
        if args.samples < 1000:
            raise ConfigError(f"--samples must be at least 1000, got {args.samples}")
        cases = default_validation_cases(config, args.negative_control)
        results = run_validation(cases, args.samples, args.seed)
        rows = [{
            "case": r.case.label,
            "closed_form": r.closed_form,
            "monte_carlo": r.estimate.value,
            "half_width_95": r.estimate.half_width_95,
            "n_samples": r.estimate.n_samples,
            "pass": int(r.passed),
        } for r in results]
        status = 0 if all(r.passed for r in results) else 1
        columns = VALIDATION_COLUMNS
        meta = {"command": "validate", "seed": args.seed}
    else:
        grid = args.sweep or config.sweep
        if not grid:
            raise ConfigError("no sweep grid: pass --sweep var:start:stop:count or set [sweep] sweep")
        family = args.family or config.family
        result = sweep(args.command, config, grid, family, jobs=args.jobs)
        columns, rows, status = result.columns, result.rows, 0
        meta = {"command": args.command}

    if args.format == "json":
        return format_json(columns, rows, **meta), status
    return format_csv(columns, rows), status


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text, status = _run(args)
    except (ConfigError, DomainError) as exc:
        print(f"linklab: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
