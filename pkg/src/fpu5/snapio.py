"""Snapshot files, run manifests, and key-value run configuration parsing.

Snapshot format: a `# t=<t> N=<N> L=<L>` header line followed by N rows of
`x<TAB>u`, both printed with 17 significant digits so reading a file back
reproduces the doubles bit for bit.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .experiments import InitialCondition, SimulationConfig, Snapshot
from .params import EquationKind, ModelParams
from .spectral import Grid

FLOAT_FMT = "%.16e"


@dataclass
class RunManifest:
    config: dict
    version: str
    wall_time: float
    files: list[str] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"config": self.config, "version": self.version,
             "wall_time_seconds": self.wall_time, "files": self.files,
             "checks": self.checks}, indent=2, sort_keys=True)


def write_snapshot(path, snapshot: Snapshot, grid: Grid) -> None:
    with open(path, "w") as fh:
        fh.write(f"# t={FLOAT_FMT % snapshot.t} N={grid.n} L={FLOAT_FMT % grid.length}\n")
        for x, u in zip(grid.x, snapshot.u):
            fh.write(f"{FLOAT_FMT % x}\t{FLOAT_FMT % u}\n")


def read_snapshot(path):
    """Return (Snapshot, (n, length)) parsed from a snapshot file."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# "):
            raise ConfigError(f"{path}: missing snapshot header")
        fields = dict(item.split("=", 1) for item in header[2:].split())
        t = float(fields["t"])
        n = int(fields["N"])
        length = float(fields["L"])
        xs = np.empty(n)
        us = np.empty(n)
        for i in range(n):
            line = fh.readline()
            if not line:
                raise ConfigError(f"{path}: truncated after {i} rows")
            sx, su = line.split("\t")
            xs[i] = float(sx)
            us[i] = float(su)
    return Snapshot(t=t, u=us), (n, length)


def write_snapshots(snapshots, grid: Grid, path_prefix, config_echo=None,
                    checks=None, started=None) -> RunManifest:
    """Write one file per snapshot plus a JSON manifest listing them all."""
    from . import __version__
    if not snapshots:
        raise DomainError("no snapshots to write")
    paths = []
    for i, snap in enumerate(snapshots):
        path = f"{path_prefix}_{i:04d}.dat"
        write_snapshot(path, snap, grid)
        paths.append(path)
    wall = 0.0 if started is None else time.monotonic() - started
    manifest = RunManifest(config=config_echo or {}, version=__version__,
                           wall_time=wall, files=paths, checks=checks or {})
    manifest.checks.setdefault(
        "snapshot_times", [float(s.t) for s in snapshots])
    with open(f"{path_prefix}_manifest.json", "w") as fh:
        fh.write(manifest.to_json())
        fh.write("\n")
    return manifest


# ------------------------------------------------------------ run config

_CONFIG_KEYS = {
    "kind": str,
    "delta": float,
    "mu": float,
    "L": float,
    "N": int,
    "t_end": float,
    "dt": float,
    "snapshot_interval": float,
    "initial_condition": str,
    "ic_k": float,
    "ic_c0": float,
    "ic_g3": float,
    "ic_path": str,
}
_REQUIRED = ("kind", "delta", "mu", "L", "N", "t_end")
_IC_PARAM_KEYS = {"kdv5_soliton": "ic_k", "gardner_soliton": "ic_c0",
                  "elliptic": "ic_g3", "from_file": "ic_path"}


def parse_config(text: str) -> SimulationConfig:
    """Parse `key = value` lines (# comments) into a validated run config."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError("expected `key = value`", line=lineno)
        key, _, value = body.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", line=lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", line=lineno)
        raw[key] = value
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    values: dict[str, object] = {}
    for key, text_value in raw.items():
        try:
            values[key] = _CONFIG_KEYS[key](text_value)
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {text_value!r}") from None

    try:
        kind = EquationKind(values["kind"])
    except ValueError:
        names = ", ".join(k.value for k in EquationKind)
        raise ConfigError(f"kind must be one of: {names}") from None

    n = values["N"]
    if n < 8 or n & (n - 1):
        raise ConfigError("N must be a power of two and at least 8")
    grid = Grid(values["L"], n)
    params = ModelParams(delta=values["delta"], mu=values["mu"])

    ic_name = values.get("initial_condition", "cosine")
    ic_kwargs = {}
    for name, key in _IC_PARAM_KEYS.items():
        if key in values:
            if ic_name != name:
                raise ConfigError(f"{key} only applies to initial_condition = {name}")
            attr = key[3:]
            ic_kwargs[attr] = values[key]
    ic = InitialCondition(ic_name, **ic_kwargs)

    return SimulationConfig(
        kind=kind, params=params, grid=grid, t_end=values["t_end"],
        dt=values.get("dt"), snapshot_interval=values.get("snapshot_interval"),
        initial_condition=ic)


def config_to_dict(config: SimulationConfig) -> dict:
    """Manifest echo of a run configuration."""
    ic = config.initial_condition
    out = {
        "kind": config.kind.value,
        "delta": config.params.delta,
        "mu": config.params.mu,
        "L": config.grid.length,
        "N": config.grid.n,
        "t_end": config.t_end,
        "dt": config.dt,
        "snapshot_interval": config.snapshot_interval,
        "initial_condition": ic.name,
    }
    for attr in ("k", "c0", "g3", "path"):
        if getattr(ic, attr) is not None:
            out[f"ic_{attr}"] = getattr(ic, attr)
    return out
