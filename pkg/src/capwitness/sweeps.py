"""Parameter sweeps for the three built-in channel families and the custom
channel report. Rows are computed independently and written in grid order.
"""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .channels import (DampingParams, DephasingParams, DepolarizingParams, build_damping,
                       build_dephasing, build_depolarizing)
from .errors import InvalidArgument
from .infotheory import capacity_damping_exact, capacity_dephasing_exact, capacity_depolarizing_fc
from .shots import estimate_q_det, simulate_all
from .witness import DAMPING_SEARCH, DEFAULT_SEARCH, SearchSpec, output_state, q_det

DEPHASING_P = (0.01, 0.1, 0.2, 0.3, 0.5)
DEPOLARIZING_P = (0.005, 0.05, 0.1, 0.15, 0.2)


def unit_grid(step: float = 0.01) -> tuple:
    n = int(round(1 / step))
    return tuple(round(k / n, 12) for k in range(n + 1))


@dataclass
class SweepConfig:
    kind: str
    p_values: tuple = ()
    grid: tuple = field(default_factory=unit_grid)
    mode: str = "exact"
    shots: int = 100_000
    seed: int = 0
    resamples: int = 200
    full_search: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.kind not in ("dephasing", "depolarizing", "damping", "custom"):
            raise InvalidArgument(f"unknown channel kind {self.kind!r}")
        if self.mode not in ("exact", "shots"):
            raise InvalidArgument(f"mode must be 'exact' or 'shots', got {self.mode!r}")
        if self.kind != "custom" and not self.grid:
            raise InvalidArgument("parameter grid is empty")
        if self.kind in ("dephasing", "depolarizing") and not self.p_values:
            raise InvalidArgument("no p values given")
        for v in tuple(self.grid) + tuple(self.p_values):
            if not 0.0 <= v <= 1.0:
                raise InvalidArgument(f"parameter {v} outside [0, 1]")
        if self.mode == "shots" and self.shots <= 0:
            raise InvalidArgument("shots must be positive")

    def search(self, base: SearchSpec) -> SearchSpec:
        if self.full_search:
            return SearchSpec(families=base.families, damping=base.damping, full=True,
                              grid_points=base.grid_points)
        return base


def fmt(x) -> str:
    return f"{x:.9g}"


def _witness(cfg: SweepConfig, ch, search: SearchSpec, row_seed: int):
    """(q_det, ci_low, ci_high) for one channel."""
    if cfg.mode == "exact":
        return (q_det(ch, search=search).q_det,)
    records = simulate_all(output_state(ch), cfg.shots, row_seed)
    est = estimate_q_det(records, search, cfg.resamples, row_seed)
    return (est.q_det_hat, est.ci_low, est.ci_high)


def _dephasing_row(args):
    cfg, i, p, mu = args
    ch = build_dephasing(DephasingParams(p, mu))
    w = _witness(cfg, ch, cfg.search(DEFAULT_SEARCH), cfg.seed + 1000 * i)
    return (p, mu) + w + (capacity_dephasing_exact(DephasingParams(p, mu)),)


def _depolarizing_row(args):
    cfg, i, p, mu = args
    ch = build_depolarizing(DepolarizingParams(p, mu))
    w = _witness(cfg, ch, cfg.search(DEFAULT_SEARCH), cfg.seed + 1000 * i)
    return (p, mu) + w + (capacity_depolarizing_fc(p),)


def _damping_row(args):
    cfg, i, eta = args
    ch = build_damping(DampingParams(eta))
    w = _witness(cfg, ch, cfg.search(DAMPING_SEARCH), cfg.seed + 1000 * i)
    return (eta,) + w + (capacity_damping_exact(DampingParams(eta)),)


def _run(fn, tasks, jobs: int):
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks, chunksize=8))
    return [fn(t) for t in tasks]


def _columns(cfg: SweepConfig, lead, tail):
    mid = ["q_det"] if cfg.mode == "exact" else ["q_det", "ci_low", "ci_high"]
    return list(lead) + mid + list(tail)


def run_dephasing_sweep(cfg: SweepConfig):
    tasks = [(cfg, i, p, mu) for i, (p, mu) in
             enumerate((p, mu) for p in cfg.p_values for mu in cfg.grid)]
    return _columns(cfg, ("p", "mu"), ("q_exact",)), _run(_dephasing_row, tasks, cfg.jobs)


def run_depolarizing_sweep(cfg: SweepConfig):
    tasks = [(cfg, i, p, mu) for i, (p, mu) in
             enumerate((p, mu) for p in cfg.p_values for mu in cfg.grid)]
    return (_columns(cfg, ("p", "mu"), ("q_fc_exact_at_mu1",)),
            _run(_depolarizing_row, tasks, cfg.jobs))


def run_damping_sweep(cfg: SweepConfig):
    tasks = [(cfg, i, eta) for i, eta in enumerate(cfg.grid)]
    return _columns(cfg, ("eta",), ("q_exact",)), _run(_damping_row, tasks, cfg.jobs)


def write_csv(cfg: SweepConfig, columns, rows, out=None) -> str:
    buf = io.StringIO()
    buf.write(f"# capwitness {__version__}\n")
    buf.write(f"# channel {cfg.kind}\n")
    buf.write(f"# mode {cfg.mode}\n")
    if cfg.mode == "shots":
        buf.write(f"# shots {cfg.shots} seed {cfg.seed} resamples {cfg.resamples}\n")
    if cfg.p_values:
        buf.write("# p " + " ".join(fmt(p) for p in cfg.p_values) + "\n")
    grid_name = "eta" if cfg.kind == "damping" else "mu"
    buf.write(f"# {grid_name}_grid " + " ".join(fmt(v) for v in cfg.grid) + "\n")
    buf.write(f"# search {'full' if cfg.full_search else 'symmetric'}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out is not None:
        with open(out, "w") as fh:
            fh.write(text)
    return text


def custom_report(ch, cfg: SweepConfig) -> dict:
    """Witness for a user channel; adds the shot-noise estimate in shots mode."""
    search = cfg.search(SearchSpec(damping=True))
    res = q_det(ch, search=search)
    report = {
        "q_det": res.q_det,
        "s_out": res.s_out,
        "h_min": res.h_min,
        "optimal_basis": res.optimal_basis,
        "prob_vector": res.prob_vector,
    }
    if cfg.mode == "shots":
        records = simulate_all(output_state(ch), cfg.shots, cfg.seed)
        est = estimate_q_det(records, search, cfg.resamples, cfg.seed)
        report["estimate"] = est
    return report
