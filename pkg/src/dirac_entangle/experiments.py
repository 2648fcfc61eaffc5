"""Figure-reproduction runs that produce machine-readable tables.

Each ``cmd_*`` function takes a validated :class:`RunConfig` and returns a
:class:`ResultTable`; :func:`write_table` serializes it as CSV or JSON.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .averages import (
    AveragingSpec,
    EnsembleStats,
    ensemble_states,
    initial_concurrence_stats,
    time_averaged_concurrences,
)
from .dynamics import TimeGrid, make_propagator, trajectory
from .entanglement import concurrence
from .errors import ConfigError, OutputError
from .model import TIME_UNIT_NS, ModelParams, analytic_eigensystem, numeric_eigensystem, build_hamiltonian
from .states import (
    NAMED_STATES,
    SEPARABLE_SAMPLINGS,
    bloch_vectors,
    member_rng,
    named_state,
    parse_state,
    random_haar_state,
    random_separable_state,
)

LAMBDA = 37.5  # ueV, graphene on SiO2 / hBN
DEFAULT_SEED = 1935
COMMANDS = ("eigen-sweep", "dynamics", "avg-sweep", "ensemble-sweep", "chsh")
FORMATS = ("csv", "json")

# keys that never change numeric output and are left out of the config hash
_RUNTIME_KEYS = ("out", "format", "threads")


@dataclass
class RunConfig:
    """Everything a run needs. ``None`` means "use the command's default".

    Energies are in ueV. ``periods`` counts Rashba precession periods
    ``pi hbar / lambda_R``; ``horizon`` is in ``hbar / lambda_R``.
    """

    command: str
    lambda_r: list | None = None
    epsilon: list | None = None
    states: list | None = None
    n: int = 1000
    seed: int = DEFAULT_SEED
    theta: float = 0.0
    tau: int = 1
    periods: float | None = None
    n_samples: int | None = None
    horizon: float = 200 * math.pi
    avg_samples: int = 32768
    sweep_points: int = 401
    sweep_min_ratio: float = 1e-3
    sweep_max_ratio: float = 1e3
    sampling: str = "sphere"
    bloch: bool = False
    out: str | None = None
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if int(self.threads) < 1:
            raise ConfigError("threads must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.sampling not in SEPARABLE_SAMPLINGS:
            raise ConfigError(f"sampling must be one of {SEPARABLE_SAMPLINGS}")
        if self.lambda_r is not None:
            self.lambda_r = [float(x) for x in self.lambda_r]
            if not self.lambda_r or any(not x > 0 for x in self.lambda_r):
                raise ConfigError("lambda_r must be a nonempty list of positive energies (ueV)")
        if self.epsilon is not None:
            self.epsilon = [float(x) for x in self.epsilon]
            if not self.epsilon:
                raise ConfigError("epsilon list is empty")
        if self.states is not None:
            for s in self.states:
                parse_state(s)
        min_n = 2 if self.command == "ensemble-sweep" else 1
        if int(self.n) < min_n:
            raise ConfigError(f"n must be >= {min_n} for {self.command}")
        if self.sweep_points < 3 or self.sweep_points % 2 == 0:
            raise ConfigError("sweep_points must be an odd number >= 3")
        if not 0 < self.sweep_min_ratio < self.sweep_max_ratio:
            raise ConfigError("need 0 < sweep_min_ratio < sweep_max_ratio")
        if self.n_samples is not None and self.n_samples < 2:
            raise ConfigError("n_samples must be >= 2")
        if self.periods is not None and not self.periods > 0:
            raise ConfigError("periods must be positive")
        try:
            AveragingSpec(self.horizon, self.avg_samples)
            ModelParams(0.0, 1.0, self.theta, self.tau)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_mapping(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path, **overrides):
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_mapping(data)

    def digest(self):
        payload = {k: v for k, v in dataclasses.asdict(self).items() if k not in _RUNTIME_KEYS}
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class ResultTable:
    """Named, unit-tagged columns plus provenance lines."""

    columns: list  # [(name, unit)]
    data: dict  # name -> list of values
    provenance: dict = field(default_factory=dict)

    @property
    def names(self):
        return [name for name, _ in self.columns]

    def __len__(self):
        return len(self.data[self.columns[0][0]]) if self.columns else 0

    def column(self, name):
        return np.asarray(self.data[name])

    def rows(self):
        return zip(*(self.data[n] for n in self.names))


def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def to_csv(table: ResultTable) -> str:
    lines = [",".join(f"{n}[{u}]" for n, u in table.columns)]
    lines += [",".join(_fmt(v) for v in row) for row in table.rows()]
    lines += [f"# {k}: {v}" for k, v in table.provenance.items()]
    return "\n".join(lines) + "\n"


def to_json(table: ResultTable) -> str:
    doc = {
        "columns": [{"name": n, "unit": u} for n, u in table.columns],
        "rows": [[v if isinstance(v, str) else float(v) for v in row] for row in table.rows()],
        "provenance": table.provenance,
    }
    return json.dumps(doc, indent=1) + "\n"


def parse_csv(text: str) -> ResultTable:
    lines = [ln for ln in text.splitlines() if ln]
    body = [ln for ln in lines if not ln.startswith("#")]
    footer = [ln[2:] for ln in lines if ln.startswith("# ")]
    columns = []
    for head in body[0].split(","):
        name, unit = head[:-1].split("[", 1)
        columns.append((name, unit))
    data = {n: [] for n, _ in columns}
    for ln in body[1:]:
        for (name, _), cell in zip(columns, ln.split(",")):
            try:
                data[name].append(float(cell))
            except ValueError:
                data[name].append(cell)
    provenance = dict(item.split(": ", 1) for item in footer)
    return ResultTable(columns, data, provenance)


def write_table(table: ResultTable, path, fmt="csv"):
    text = to_csv(table) if fmt == "csv" else to_json(table)
    if path is None:
        return text
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text


def _provenance(config: RunConfig, **extra):
    prov = {"tool": f"dirac-entangle {__version__}", "command": config.command,
            "seed": str(config.seed), "config_sha256": config.digest()}
    prov.update({k: str(v) for k, v in extra.items()})
    return prov


def _map(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _lambdas(config, default):
    return config.lambda_r if config.lambda_r is not None else list(default)


# --------------------------------------------------------------------------
# eigen-sweep


def cmd_eigen_sweep(config: RunConfig) -> ResultTable:
    """Eigenstate concurrence and Bloch length vs energy for several lambda_R.

    Negative energies are the hole branch at the same ``|epsilon|``.
    """
    lambdas = _lambdas(config, (LAMBDA, 10 * LAMBDA, 100 * LAMBDA))
    eps_list = config.epsilon if config.epsilon is not None else list(np.linspace(-300.0, 300.0, 601))
    cols = {"epsilon": [], "lambda_R": [], "C": [], "bloch": []}
    for lam in lambdas:
        for eps in eps_list:
            params = ModelParams(abs(eps), lam, config.theta, config.tau)
            if config.tau == 1:
                es = analytic_eigensystem(params)
            else:
                es = numeric_eigensystem(build_hamiltonian(params))
            state = es.levels[0 if eps < 0 else 3].state
            cols["epsilon"].append(eps)
            cols["lambda_R"].append(lam)
            cols["C"].append(concurrence(state))
            cols["bloch"].append(float(np.linalg.norm(bloch_vectors(state).spin)))
    return ResultTable(
        [("epsilon_ueV", "ueV"), ("lambda_R_ueV", "ueV"), ("concurrence", "-"), ("bloch_magnitude", "-")],
        {"epsilon_ueV": cols["epsilon"], "lambda_R_ueV": cols["lambda_R"],
         "concurrence": cols["C"], "bloch_magnitude": cols["bloch"]},
        _provenance(config),
    )


# --------------------------------------------------------------------------
# dynamics

_BLOCH_COLS = ("sx", "sy", "sz", "sigma_x", "sigma_y", "sigma_z")


def cmd_dynamics(config: RunConfig) -> ResultTable:
    """Concurrence and CHSH trajectories for each (state, energy) pair."""
    lambdas = _lambdas(config, (LAMBDA,))
    states = config.states or list(NAMED_STATES)
    periods = config.periods if config.periods is not None else 4.0
    n_samples = config.n_samples or 2001
    channels = ["C", "beta"] + (list(_BLOCH_COLS) if config.bloch else [])
    columns = [("state", "-"), ("epsilon_ueV", "ueV"), ("lambda_R_ueV", "ueV"),
               ("t_over_hbar_lambdaR", "hbar/lambda_R"), ("t_ns", "ns"), ("C", "-"), ("beta", "-")]
    columns += [(c, "-") for c in channels[2:]]
    data = {n: [] for n, _ in columns}
    for lam in lambdas:
        eps_list = config.epsilon if config.epsilon is not None else [0.0, lam, 10 * lam]
        grid = TimeGrid.rashba_periods(lam, periods, n_samples)
        t = grid.times
        for eps in eps_list:
            prop = make_propagator(ModelParams(abs(eps), lam, config.theta, config.tau))
            for name in states:
                series = trajectory(prop, parse_state(name), grid, channels)
                n = len(t)
                data["state"] += [name] * n
                data["epsilon_ueV"] += [eps] * n
                data["lambda_R_ueV"] += [lam] * n
                data["t_over_hbar_lambdaR"] += list(t * lam)
                data["t_ns"] += list(t * TIME_UNIT_NS)
                for ch in channels:
                    data[ch] += list(series[ch])
    return ResultTable(columns, data, _provenance(config))


# --------------------------------------------------------------------------
# avg-sweep


def sweep_ratios(points=401, lo=1e-3, hi=1e3):
    """Log-symmetric grid of ``epsilon / lambda_R`` with a single 0 in the middle."""
    pos = np.geomspace(lo, hi, (points - 1) // 2)
    return np.concatenate([-pos[::-1], [0.0], pos])


def mark_extrema(ratios, values):
    """+1 / -1 flags at the interior argmax / argmin of each half-axis."""
    flags = np.zeros(len(ratios), dtype=int)
    for side in (ratios > 0, ratios < 0):
        idx = np.nonzero(side)[0]
        vals = values[idx]
        inner = slice(1, len(idx) - 1)
        imax = idx[inner][np.argmax(vals[inner])]
        imin = idx[inner][np.argmin(vals[inner])]
        if values[imax] > max(values[idx[0]], values[idx[-1]]):
            flags[imax] = 1
        if values[imin] < min(values[idx[0]], values[idx[-1]]):
            flags[imin] = -1
    return flags


def cmd_avg_sweep(config: RunConfig) -> ResultTable:
    """Time-averaged concurrence vs energy for the named states.

    ``bell_1`` at exactly ``epsilon = 0`` is omitted (it is static there and
    not representative of the ``epsilon -> 0`` limit).
    """
    lambdas = _lambdas(config, (LAMBDA, 10 * LAMBDA, 100 * LAMBDA))
    names = config.states or list(NAMED_STATES)
    for n in names:
        named_state(n)
    spec = AveragingSpec(config.horizon, config.avg_samples)
    amps = np.stack([named_state(n).amplitudes for n in names])
    if config.epsilon is not None:
        ratio_sets = {lam: np.array(config.epsilon) / lam for lam in lambdas}
    else:
        r = sweep_ratios(config.sweep_points, config.sweep_min_ratio, config.sweep_max_ratio)
        ratio_sets = {lam: r for lam in lambdas}

    items = [(lam, r) for lam in lambdas for r in ratio_sets[lam]]

    def work(item):
        lam, r = item
        prop = make_propagator(ModelParams(abs(r) * lam, lam, config.theta, config.tau))
        return time_averaged_concurrences(prop, amps, spec)

    results = _map(work, items, config.threads)
    by_item = dict(zip(items, results))

    columns = [("state", "-"), ("lambda_R_ueV", "ueV"), ("epsilon_ueV", "ueV"),
               ("epsilon_over_lambdaR", "-"), ("avg_concurrence", "-"), ("extremum", "-")]
    data = {n: [] for n, _ in columns}
    for lam in lambdas:
        ratios = ratio_sets[lam]
        for k, name in enumerate(names):
            vals = np.array([by_item[(lam, r)][k] for r in ratios])
            keep = ~((ratios == 0) & (name == "bell_1"))
            can_mark = config.epsilon is None
            flags = mark_extrema(ratios[keep], vals[keep]) if can_mark else np.zeros(keep.sum(), int)
            for r, v, f in zip(ratios[keep], vals[keep], flags):
                data["state"].append(name)
                data["lambda_R_ueV"].append(lam)
                data["epsilon_ueV"].append(r * lam)
                data["epsilon_over_lambdaR"].append(r)
                data["avg_concurrence"].append(v)
                data["extremum"].append(int(f))
    return ResultTable(columns, data, _provenance(config, horizon=config.horizon, avg_samples=config.avg_samples))


# --------------------------------------------------------------------------
# ensemble-sweep

ENSEMBLE_RATIOS = (0.0, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0)


def cmd_ensemble_sweep(config: RunConfig) -> ResultTable:
    """Ensemble-averaged time-averaged concurrence vs energy.

    Both ensembles are drawn once and reused at every energy. Rows labelled
    ``haar_t0`` repeat the Haar ensemble's mean concurrence at ``t = 0``.
    """
    lam = _lambdas(config, (LAMBDA,))[0]
    eps_list = config.epsilon if config.epsilon is not None else [r * lam for r in ENSEMBLE_RATIOS]
    spec = AveragingSpec(config.horizon, config.avg_samples)
    draws = {
        "haar": ensemble_states("haar", config.n, config.seed),
        "separable": ensemble_states("separable", config.n, config.seed, config.sampling),
    }
    t0 = initial_concurrence_stats("haar", config.n, config.seed)
    columns = [("ensemble", "-"), ("epsilon_ueV", "ueV"), ("lambda_R_ueV", "ueV"),
               ("mean", "-"), ("std_error", "-"), ("n", "-")]
    data = {n: [] for n, _ in columns}

    def add(stats: EnsembleStats, eps):
        data["ensemble"].append(stats.label)
        data["epsilon_ueV"].append(eps)
        data["lambda_R_ueV"].append(lam)
        data["mean"].append(stats.mean)
        data["std_error"].append(stats.std_error)
        data["n"].append(stats.n)

    for label in ("haar", "separable"):
        for eps in eps_list:
            prop = make_propagator(ModelParams(abs(eps), lam, config.theta, config.tau))
            vals = time_averaged_concurrences(prop, draws[label], spec, threads=config.threads)
            add(EnsembleStats.from_values(vals, label), eps)
    for eps in eps_list:
        add(t0, eps)
    return ResultTable(columns, data, _provenance(config, sampling=config.sampling))


# --------------------------------------------------------------------------
# chsh

CHSH_EPSILON = 25_000.0  # ueV


def chsh_states(seed, sampling="sphere"):
    """Bell state plus one seeded Haar and one seeded product state."""
    return {
        "bell_1": named_state("bell_1"),
        "haar": random_haar_state(member_rng(seed, 0)),
        "separable": random_separable_state(member_rng(seed, 1), sampling),
    }


def cmd_chsh(config: RunConfig) -> ResultTable:
    """CHSH parameter vs time for a Bell state and two seeded random states.

    The grid samples the slow Rashba envelope: 2001 points over two
    precession periods by default.
    """
    lam = _lambdas(config, (LAMBDA,))[0]
    eps = config.epsilon[0] if config.epsilon is not None else CHSH_EPSILON
    periods = config.periods if config.periods is not None else 2.0
    grid = TimeGrid.rashba_periods(lam, periods, config.n_samples or 2001)
    prop = make_propagator(ModelParams(abs(eps), lam, config.theta, config.tau))
    states = chsh_states(config.seed, config.sampling)
    t = grid.times
    columns = [("t_over_hbar_lambdaR", "hbar/lambda_R"), ("t_ns", "ns")]
    data = {"t_over_hbar_lambdaR": list(t * lam), "t_ns": list(t * TIME_UNIT_NS)}
    for label, state in states.items():
        series = trajectory(prop, state, grid, ["C", "beta"])
        columns += [(f"beta_{label}", "-"), (f"C_{label}", "-")]
        data[f"beta_{label}"] = list(series["beta"])
        data[f"C_{label}"] = list(series["C"])
    literals = {
        f"{label}_state": json.dumps([[z.real, z.imag] for z in states[label].amplitudes])
        for label in ("haar", "separable")
    }
    return ResultTable(columns, data, _provenance(config, epsilon_ueV=eps, lambda_R_ueV=lam, **literals))


COMMAND_FUNCS = {
    "eigen-sweep": cmd_eigen_sweep,
    "dynamics": cmd_dynamics,
    "avg-sweep": cmd_avg_sweep,
    "ensemble-sweep": cmd_ensemble_sweep,
    "chsh": cmd_chsh,
}


def run(config: RunConfig) -> ResultTable:
    return COMMAND_FUNCS[config.command](config)


# --------------------------------------------------------------------------
# gnuplot scripts

FIGURE_SCHEMAS = {
    "fig1": ("epsilon_ueV", "lambda_R_ueV", "concurrence", "bloch_magnitude"),
    "fig2": ("state", "epsilon_ueV", "t_ns", "C", "beta"),
    "fig2d": ("t_ns", "beta_bell_1", "beta_haar", "beta_separable"),
    "fig3": ("state", "lambda_R_ueV", "epsilon_ueV", "avg_concurrence"),
    "fig3c": ("ensemble", "epsilon_ueV", "mean", "std_error"),
}
FIGURE_FOR_COMMAND = {
    "eigen-sweep": "fig1", "dynamics": "fig2", "chsh": "fig2d",
    "avg-sweep": "fig3", "ensemble-sweep": "fig3c",
}


def _unique(values):
    out = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


def emit_plot_script(table: ResultTable, figure: str, data_file: str) -> str:
    """Gnuplot script that plots ``data_file`` (a CSV of ``table``).

    ``figure`` is one of ``fig1``, ``fig2``, ``fig3``; ``fig2`` and ``fig3``
    also accept the CHSH and ensemble tables (their ``fig2d``/``fig3c``
    schemas are picked from the columns present).
    """
    names = table.names
    if figure == "fig2" and "beta_bell_1" in names:
        figure = "fig2d"
    if figure == "fig3" and "ensemble" in names:
        figure = "fig3c"
    if figure not in FIGURE_SCHEMAS:
        raise ConfigError(f"unknown figure {figure!r}; choose from fig1, fig2, fig3")
    for col in FIGURE_SCHEMAS[figure]:
        if col not in names:
            raise ConfigError(f"table does not match {figure}: missing column {col!r}")
    idx = {n: i + 1 for i, n in enumerate(names)}
    head = [
        f"# {figure} from {data_file}",
        "set datafile separator ','",
        "set terminal pngcairo size 800,600",
        f"set output '{Path(data_file).stem}.png'",
        "set key top right",
    ]
    body = []
    if figure == "fig1":
        body += ["set multiplot layout 1,2",
                 "set xlabel 'Energy (ueV)'", "set ylabel 'Concurrence'",
                 "plot " + ", ".join(
                     f"'{data_file}' every ::1 using {idx['epsilon_ueV']}:(${idx['lambda_R_ueV']}=={lam!r}"
                     f" ? ${idx['concurrence']} : 1/0) with lines title 'lambda_R = {lam:g} ueV'"
                     for lam in _unique(table.data["lambda_R_ueV"])),
                 "set ylabel '|s| = |sigma|'",
                 "plot " + ", ".join(
                     f"'{data_file}' every ::1 using {idx['epsilon_ueV']}:(${idx['lambda_R_ueV']}=={lam!r}"
                     f" ? ${idx['bloch_magnitude']} : 1/0) with lines title 'lambda_R = {lam:g} ueV'"
                     for lam in _unique(table.data["lambda_R_ueV"])),
                 "unset multiplot"]
    elif figure == "fig2":
        energies = _unique(table.data["epsilon_ueV"])[:3]
        states = _unique(table.data["state"])
        body += ["set multiplot layout 4,1", "set xlabel 't (ns)'"]
        for k, eps in enumerate(energies + [energies[-1]]):
            col, label = ("beta", "CHSH beta") if k == len(energies) else ("C", "Concurrence")
            body.append(f"set ylabel '{label}'")
            body.append(f"set title 'epsilon = {eps:g} ueV'")
            body.append("plot " + ", ".join(
                f"'{data_file}' every ::1 using {idx['t_ns']}:(strcol({idx['state']}) eq '{s}' && "
                f"${idx['epsilon_ueV']}=={eps!r} ? ${idx[col]} : 1/0) with lines title '{s}'"
                for s in states))
        body.append("unset multiplot")
    elif figure == "fig2d":
        body += ["set xlabel 't (ns)'", "set ylabel 'CHSH beta'", "set yrange [0.95:1.45]",
                 "plot " + ", ".join(
                     f"'{data_file}' every ::1 using {idx['t_ns']}:{idx[f'beta_{s}']} with lines title '{s}'"
                     for s in ("bell_1", "haar", "separable"))]
    elif figure == "fig3":
        states = _unique(table.data["state"])
        lambdas = _unique(table.data["lambda_R_ueV"])
        body += ["set multiplot layout 2,1", "set xlabel 'Energy (ueV)'",
                 "set ylabel 'Time-averaged concurrence'"]
        for group in ([s for s in states if s.startswith("psi")], [s for s in states if s.startswith("bell")]):
            if not group:
                continue
            body.append("plot " + ", ".join(
                f"'{data_file}' every ::1 using {idx['epsilon_ueV']}:(strcol({idx['state']}) eq '{s}' && "
                f"${idx['lambda_R_ueV']}=={lam!r} ? ${idx['avg_concurrence']} : 1/0) with lines "
                f"title '{s}, lambda_R = {lam:g} ueV'"
                for s in group for lam in lambdas))
        body.append("unset multiplot")
    else:
        body += ["set xlabel 'Energy (ueV)'", "set ylabel 'Ensemble-averaged concurrence'",
                 "plot " + ", ".join(
                     f"'{data_file}' every ::1 using {idx['epsilon_ueV']}:(strcol({idx['ensemble']}) eq '{e}'"
                     f" ? ${idx['mean']} : 1/0):{idx['std_error']} with yerrorlines title '{e}'"
                     for e in _unique(table.data["ensemble"]))]
    return "\n".join(head + body) + "\n"
