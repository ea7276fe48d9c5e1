"""Acceleration sweeps: evaluate resource measures of a state over a grid of r values."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy

from .channel import R_MAX, ChannelSpec, apply_channel, kraus_multiparty, r_from_omega
from .fock import DensityMatrix
from .kernels import BACKEND
from .measures import MEASURES, measure_report
from .states import PRESETS, random_state

OUTPUT_DIR_ENV = "NONINERTIAL_OUTPUT_DIR"
FIXED_COLUMNS = ["r", "omega", "K", "tail", "trace_deficit"]


@dataclass
class SweepConfig:
    state: str = "bell-phi-plus"
    accelerated: list[int] | None = None
    r_min: float = 0.0
    r_max: float = 2.0
    r_count: int = 6
    omega_grid: list[float] | None = None
    measures: list[str] = field(default_factory=lambda: ["negativity", "l1_coherence"])
    bipartition: list[int] | None = None
    epsilon: float = 1e-10
    seed: int = 0
    dims: list[int] | None = None
    output: str | None = None
    format: str = "csv"
    jobs: int = 1

    def validate(self) -> None:
        if self.r_count < 1:
            raise ValueError("r_count must be at least 1")
        if not 0.0 <= self.r_min <= self.r_max:
            raise ValueError("need 0 <= r_min <= r_max")
        if self.r_max > R_MAX:
            raise ValueError(f"r_max must not exceed {R_MAX}")
        if not 1e-14 <= self.epsilon <= 1e-6:
            raise ValueError("epsilon must lie in [1e-14, 1e-6]")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        unknown = [m for m in self.measures if m not in MEASURES]
        if unknown:
            raise ValueError(f"unknown measures {unknown}; choose from {sorted(MEASURES)}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.omega_grid is not None:
            if any(w <= 0 for w in self.omega_grid):
                raise ValueError("omega grid values must be positive")
            if any(r_from_omega(w) > R_MAX for w in self.omega_grid):
                raise ValueError(f"omega grid maps beyond r = {R_MAX}")

    def grid(self) -> list[tuple[float, float | None]]:
        if self.omega_grid is not None:
            return [(r_from_omega(w), float(w)) for w in self.omega_grid]
        if self.r_count == 1:
            return [(float(self.r_min), None)]
        return [(float(r), None) for r in np.linspace(self.r_min, self.r_max, self.r_count)]

    @classmethod
    def from_json(cls, path: str, **overrides) -> "SweepConfig":
        with open(path) as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def load_state(name: str, seed: int = 0, dims=None) -> DensityMatrix:
    """A named preset, ``random`` (seeded two-qubit state), or a path to a ``.npy``/text matrix."""
    if name in PRESETS:
        return PRESETS[name]()
    if name == "random":
        return random_state(tuple(dims) if dims else (2, 2), np.random.default_rng(seed))
    if os.path.exists(name):
        data = np.load(name) if name.endswith(".npy") else np.loadtxt(name, dtype=complex)
        data = np.atleast_2d(np.asarray(data, dtype=complex))
        if dims is None:
            n = int(round(math.log2(data.shape[0])))
            if 2 ** n != data.shape[0]:
                raise ValueError("give dims for a custom matrix that is not a qubit register")
            dims = (2,) * n
        state = DensityMatrix(data, tuple(dims))
        state.check()
        return state
    raise ValueError(f"unknown state {name!r}; presets are {sorted(PRESETS)} or 'random' or a file path")


def _row(args) -> dict:
    cfg, rho, r, omega = args
    accelerated = tuple(cfg.accelerated) if cfg.accelerated else (len(rho.dims) - 1,)
    spec = ChannelSpec.build(rho.dims, accelerated, r, cfg.epsilon)
    out = apply_channel(kraus_multiparty(spec), rho)
    normalized = DensityMatrix(out.data / out.trace(), out.dims)
    bipartition = cfg.bipartition if cfg.bipartition is not None else list(accelerated)
    values = measure_report(normalized, cfg.measures, bipartition).values
    row = {"r": r, "omega": omega, "K": ";".join(str(k) for k in spec.cutoffs),
           "tail": spec.tail_bound(), "trace_deficit": out.trace_deficit}
    row.update(values)
    return row


def run_sweep(cfg: SweepConfig) -> list[dict]:
    """One row per grid point, in grid order whatever the worker completion order."""
    cfg.validate()
    rho = load_state(cfg.state, cfg.seed, cfg.dims)
    tasks = [(cfg, rho, r, omega) for r, omega in cfg.grid()]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_row, tasks))
    return [_row(t) for t in tasks]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return "%.12g" % value


def rows_to_csv(rows: list[dict], measures) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = FIXED_COLUMNS + list(measures)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def versions() -> dict:
    from . import __version__
    return {"noninertial": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version(), "backend": BACKEND}


def rows_to_json(rows: list[dict], cfg: SweepConfig) -> str:
    doc = {"config": asdict(cfg), "rows": rows, "versions": versions(), "seed": cfg.seed}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def resolve_output(path: str | None, default_name: str) -> str | None:
    """Explicit path, else a file in the output directory named by the environment, else stdout."""
    if path:
        return path
    directory = os.environ.get(OUTPUT_DIR_ENV)
    return os.path.join(directory, default_name) if directory else None


def write_sweep(rows: list[dict], cfg: SweepConfig) -> str:
    text = rows_to_csv(rows, cfg.measures) if cfg.format == "csv" else rows_to_json(rows, cfg)
    target = resolve_output(cfg.output, f"sweep.{cfg.format}")
    if target is None:
        return text
    with open(target, "w", newline="") as fh:
        fh.write(text)
    return text
