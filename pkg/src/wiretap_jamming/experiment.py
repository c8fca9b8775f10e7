"""Monte-Carlo comparison of the three jamming schemes.

Channels are i.i.d. circularly-symmetric complex Gaussian (Rayleigh) with
unit-variance entries. Each matrix of each trial is drawn from its own
random stream keyed by ``(seed, trial_index, matrix_id)``, so results do
not depend on evaluation order or on the number of worker threads.
Matrices are drawn row by row, hence growing ``B`` or ``E`` only appends
rows to the same trial's channels.
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelRealization, RateReport, Scheme, scheme_rate
from .mimo import SolverBudget, optimize_gn_mimo, optimize_no_mimo, optimize_sit_cj_mimo
from .simo import solve_gn_simo, solve_no_jamming_simo, solve_sit_cj_simo

log = logging.getLogger(__name__)

AXES = ("b", "e", "p", "t")
CSV_HEADER = ("sweep_axis", "sweep_value", "scheme", "mean_rs", "mean_ro", "mean_rtotal", "trials")
_MATRIX_IDS = {"h1": 0, "h2": 1, "g1": 2, "g2": 3}


@dataclass(frozen=True)
class Dims:
    b: int
    e: int
    t1: int
    t2: int

    def __post_init__(self):
        for name in ("b", "e", "t1", "t2"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")


def db_to_linear(p_db):
    return 10.0 ** (p_db / 10.0)


def _draw(seed, trial_index, matrix_id, rows, cols):
    rng = np.random.default_rng([seed, trial_index, matrix_id])
    z = rng.standard_normal((rows, cols, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def generate_channel(trial_index: int, seed: int, dims: Dims) -> ChannelRealization:
    """Rayleigh channel realisation number ``trial_index`` of stream ``seed``."""
    if trial_index < 0 or seed < 0:
        raise ValueError("seed and trial_index must be nonnegative")
    shapes = {"h1": (dims.b, dims.t1), "h2": (dims.b, dims.t2),
              "g1": (dims.e, dims.t1), "g2": (dims.e, dims.t2)}
    mats = {k: _draw(seed, trial_index, _MATRIX_IDS[k], *shape) for k, shape in shapes.items()}
    return ChannelRealization(**mats)


def solve_scheme(scheme, ch: ChannelRealization, p: float,
                 budget: Optional[SolverBudget] = None) -> RateReport:
    """Optimise ``scheme`` on ``ch`` with budget ``p`` for both users and
    report its rates. Uses the exact solvers when both users have one antenna."""
    scheme = Scheme(scheme)
    if ch.is_simo:
        if scheme is Scheme.NO:
            sol = solve_no_jamming_simo(ch, p)
        elif scheme is Scheme.GN:
            sol = solve_gn_simo(ch, p, p)
        else:
            sol = solve_sit_cj_simo(ch, p, p)
        f1, f2 = sol.f1, sol.f2
    else:
        if scheme is Scheme.NO:
            sol = optimize_no_mimo(ch, p, budget)
        elif scheme is Scheme.GN:
            sol = optimize_gn_mimo(ch, p, p, budget)
        else:
            sol = optimize_sit_cj_mimo(ch, p, p, budget)
        f1, f2 = sol.f1, sol.f2
    return scheme_rate(scheme, ch, f1, f2)


def _parse_schemes(schemes):
    out = tuple(Scheme(s) for s in schemes)
    if not out:
        raise ValueError("schemes: at least one scheme required")
    if len(set(out)) != len(out):
        raise ValueError("schemes: duplicates")
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep of the Monte-Carlo experiment.

    Both users share the antenna count ``t`` and the power ``p_db`` (dB
    relative to the unit noise power). ``sweep_axis`` selects which of
    ``b``, ``e``, ``p`` (dB) or ``t`` is replaced by ``sweep_values``.
    """

    sweep_axis: str
    sweep_values: Tuple
    schemes: Tuple = (Scheme.NO, Scheme.GN, Scheme.SITCJ)
    b: int = 4
    e: int = 4
    t: int = 1
    p_db: float = 20.0
    trials: int = 1000
    seed: int = 0
    budget: SolverBudget = field(default_factory=SolverBudget)
    workers: int = 1

    def __post_init__(self):
        if self.sweep_axis not in AXES:
            raise ValueError(f"sweep_axis: expected one of {AXES}, got {self.sweep_axis!r}")
        values = tuple(self.sweep_values)
        if not values:
            raise ValueError("sweep_values: must be nonempty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("sweep_values: must be strictly increasing")
        if self.sweep_axis != "p":
            if any(int(v) != v or v < 1 for v in values):
                raise ValueError("sweep_values: antenna counts must be positive integers")
            values = tuple(int(v) for v in values)
        else:
            values = tuple(float(v) for v in values)
        object.__setattr__(self, "sweep_values", values)
        object.__setattr__(self, "schemes", _parse_schemes(self.schemes))
        for name in ("b", "e", "t", "trials", "workers"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name}: must be a positive integer")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed: must be a 64-bit unsigned integer")

    def point(self, value):
        """``(Dims, p_linear)`` at one sweep value."""
        b, e, t, p_db = self.b, self.e, self.t, self.p_db
        if self.sweep_axis == "b":
            b = value
        elif self.sweep_axis == "e":
            e = value
        elif self.sweep_axis == "t":
            t = value
        else:
            p_db = value
        return Dims(b, e, t, t), db_to_linear(p_db)


@dataclass(frozen=True)
class ResultRow:
    sweep_axis: str
    sweep_value: float
    scheme: Scheme
    mean_rs: float
    mean_ro: float
    mean_rtotal: float
    trials: int


def run_trial(cfg: ExperimentConfig, dims: Dims, p: float, trial_index: int):
    """Rates ``[[rs, ro], ...]`` of every configured scheme on one channel."""
    ch = generate_channel(trial_index, cfg.seed, dims)
    out = np.empty((len(cfg.schemes), 2))
    for k, scheme in enumerate(cfg.schemes):
        rep = solve_scheme(scheme, ch, p, cfg.budget)
        out[k] = rep.rs, rep.ro
    return out


def _format_value(axis, v):
    return str(int(v)) if axis != "p" else f"{v:.12g}"


def write_csv(rows: Sequence[ResultRow], out):
    """Write rows to a path or text stream."""
    if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([
            r.sweep_axis, _format_value(r.sweep_axis, r.sweep_value), r.scheme.value,
            f"{r.mean_rs:.12g}", f"{r.mean_ro:.12g}", f"{r.mean_rtotal:.12g}", r.trials,
        ])


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, out_path=None, per_trial=None) -> List[ResultRow]:
    """Run the sweep, optionally writing the CSV to ``out_path``.

    If ``per_trial`` is a dict it receives, for every sweep value, the raw
    per-trial rate array of shape ``(trials, n_schemes, 2)``.
    """
    rows = []
    for value in cfg.sweep_values:
        dims, p = cfg.point(value)
        log.info("sweep %s=%s: %d trials", cfg.sweep_axis, value, cfg.trials)
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(lambda i: run_trial(cfg, dims, p, i), range(cfg.trials)))
        else:
            results = [run_trial(cfg, dims, p, i) for i in range(cfg.trials)]
        rates = np.stack(results)  # trial order is fixed, so sums are reproducible
        if per_trial is not None:
            per_trial[value] = rates
        for k, scheme in enumerate(cfg.schemes):
            rs, ro = rates[:, k, 0], rates[:, k, 1]
            rows.append(ResultRow(
                cfg.sweep_axis, value, scheme,
                float(np.mean(rs)), float(np.mean(ro)), float(np.mean(rs + ro)), cfg.trials,
            ))
    if out_path is not None:
        write_csv(rows, out_path)
    return rows
