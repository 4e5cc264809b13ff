"""Scenario runner: declarative configs in, CSV time series and summary out.

Configs are TOML with a fixed key set per engine; unknown keys are hard
errors so typos cannot silently change the physics.  Every run writes
``series.csv`` (schema ``cqednet-csv v1``) and ``summary.txt`` with the
numerical-contract audit.
"""

from __future__ import annotations

import copy
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli

from . import chains, correlations, mme, multipartite, network, qstate
from .errors import ValidationError

CSV_MAGIC = "# cqednet-csv v1"

ENGINES = ("two_node_mme", "chain", "two_chain", "tangle")

_TWO_NODE_PARAMS = {
    "omega_a": 1.0,
    "omega_0": 1.0,
    "omega_f": 1.0,
    "g1": None,
    "g2": None,
    "J": None,
    "gamma": None,
    "nbar": [0.0, 0.0, 0.0],
    "nbar_reference": None,
    "n_max": 2,
    "step_scale": 1.0,
    "frame": "interaction",
}

_CHAIN_PARAMS = {
    "n_sites": 3,
    "omega": 1.0,
    "g": 0.0,
    "omega_f": 0.0,
    "J": 0.0,
    "model": "perturbative",
    "gamma_loss": 0.0,
    "step_scale": 1.0,
}

_TWO_CHAIN_PARAMS = {
    "gamma_loss": 0.0,
    "step_scale": 1.0,
}


def _require(section: dict, key: str, path: str):
    if key not in section:
        raise ValidationError(f"missing required key {path}.{key}")
    return section[key]


def _check_keys(section: dict, allowed, path: str):
    for key in section:
        if key not in allowed:
            raise ValidationError(f"unknown key {path}.{key}")


def _numeric(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path} must be a number, got {value!r}")
    return float(value)


def _positive_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{path} must be a positive integer, got {value!r}")
    return value


def load_config(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file {path} does not exist")
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ValidationError(f"config {path} is not valid TOML: {exc}") from exc


def validate_config(config: dict) -> dict:
    """Normalize a raw config dict; raises ValidationError naming the
    offending key."""
    _check_keys(config, {"scenario", "params", "initial_state", "time_grid", "outputs"}, "config")
    scenario = _require(config, "scenario", "config")
    _check_keys(scenario, {"id", "engine", "seed"}, "scenario")
    engine = _require(scenario, "engine", "scenario")
    if engine not in ENGINES:
        raise ValidationError(f"scenario.engine must be one of {ENGINES}, got {engine!r}")
    sid = scenario.get("id", "unnamed")
    seed = scenario.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValidationError("scenario.seed must be an integer")

    grid = _require(config, "time_grid", "config")
    _check_keys(grid, {"t_max", "n_samples"}, "time_grid")
    t_max = _numeric(_require(grid, "t_max", "time_grid"), "time_grid.t_max")
    if t_max <= 0:
        raise ValidationError("time_grid.t_max must be > 0")
    n_samples = _positive_int(_require(grid, "n_samples", "time_grid"), "time_grid.n_samples")

    params = dict(config.get("params", {}))
    initial = dict(config.get("initial_state", {}))
    outputs = dict(config.get("outputs", {}))

    if engine == "two_node_mme":
        _check_keys(params, set(_TWO_NODE_PARAMS), "params")
        for key in ("g1", "g2", "J", "gamma"):
            if key not in params:
                raise ValidationError(f"missing required key params.{key}")
        for key, default in _TWO_NODE_PARAMS.items():
            params.setdefault(key, default)
        if params["nbar_reference"] is None:
            params["nbar_reference"] = params["omega_a"]
        if not (isinstance(params["gamma"], list) and len(params["gamma"]) == 3):
            raise ValidationError("params.gamma must list the 3 reservoir rates")
        if not (isinstance(params["nbar"], list) and len(params["nbar"]) == 3):
            raise ValidationError("params.nbar must list the 3 thermal photon numbers")
        params["n_max"] = _positive_int(params["n_max"], "params.n_max")
        if params["frame"] not in ("interaction", "schrodinger"):
            raise ValidationError("params.frame must be 'interaction' or 'schrodinger'")
        _check_keys(initial, {"kind", "c", "label"}, "initial_state")
        kind = _require(initial, "kind", "initial_state")
        if kind == "bell_diagonal":
            c = _require(initial, "c", "initial_state")
            if not (isinstance(c, list) and len(c) == 3):
                raise ValidationError("initial_state.c must be a 3-vector")
        elif kind == "bare":
            _require(initial, "label", "initial_state")
        else:
            raise ValidationError(
                f"initial_state.kind must be 'bell_diagonal' or 'bare', got {kind!r}"
            )
        _check_keys(outputs, {"detect_changes", "plateau_window", "plateau_measure"}, "outputs")
    elif engine == "chain":
        _check_keys(params, set(_CHAIN_PARAMS), "params")
        for key, default in _CHAIN_PARAMS.items():
            params.setdefault(key, default)
        if params["model"] not in ("perturbative", "adiabatic"):
            raise ValidationError("params.model must be 'perturbative' or 'adiabatic'")
        _check_keys(initial, {"kind", "site"}, "initial_state")
        if initial.get("kind", "site") != "site":
            raise ValidationError("chain initial_state.kind must be 'site'")
        initial.setdefault("kind", "site")
        initial.setdefault("site", 1)
        _check_keys(outputs, set(), "outputs")
    else:  # two_chain and tangle share the state machinery
        _check_keys(params, set(_TWO_CHAIN_PARAMS), "params")
        for key, default in _TWO_CHAIN_PARAMS.items():
            params.setdefault(key, default)
        _check_keys(initial, {"kind", "theta_over_pi", "a"}, "initial_state")
        kind = _require(initial, "kind", "initial_state")
        if kind in ("a", "b"):
            theta = _numeric(
                _require(initial, "theta_over_pi", "initial_state"),
                "initial_state.theta_over_pi",
            )
            if not 0.0 <= theta <= 0.5:
                raise ValidationError("initial_state.theta_over_pi must lie in [0, 0.5]")
        elif kind == "werner":
            _numeric(_require(initial, "a", "initial_state"), "initial_state.a")
        else:
            raise ValidationError(
                f"initial_state.kind must be 'a', 'b' or 'werner', got {kind!r}"
            )
        if engine == "two_chain":
            _check_keys(outputs, {"transmission", "eavesdrop_site", "eavesdrop_mode"}, "outputs")
            if "transmission" in outputs:
                _check_keys(outputs["transmission"], {"src", "dst"}, "outputs.transmission")
            outputs.setdefault("eavesdrop_mode", "monitored")
            if outputs["eavesdrop_mode"] not in ("monitored", "instantaneous"):
                raise ValidationError(
                    "outputs.eavesdrop_mode must be 'monitored' or 'instantaneous'"
                )
        else:
            _check_keys(outputs, {"reference_site"}, "outputs")
            outputs.setdefault("reference_site", "1")
            if outputs["reference_site"] not in chains.SITE_SLOTS:
                raise ValidationError("outputs.reference_site must name a chain site")

    return {
        "id": sid,
        "engine": engine,
        "seed": seed,
        "params": params,
        "initial_state": initial,
        "outputs": outputs,
        "t_max": t_max,
        "n_samples": n_samples,
    }


@dataclass
class RunSummary:
    scenario_id: str
    engine: str
    wall_time_s: float
    max_trace_drift: float
    min_eigenvalue: float
    sudden_changes: dict[str, list[float]] = field(default_factory=dict)
    metrics: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [
            f"scenario: {self.scenario_id}",
            f"engine: {self.engine}",
            f"wall_time_s: {self.wall_time_s:.3f}",
            f"max_trace_drift: {self.max_trace_drift!r}",
            f"min_eigenvalue: {self.min_eigenvalue!r}",
        ]
        for measure in sorted(self.sudden_changes):
            times = ", ".join(repr(t) for t in self.sudden_changes[measure])
            out.append(f"sudden_changes[{measure}]: {times}")
            out.append(f"n_changes[{measure}]: {len(self.sudden_changes[measure])}")
        for key in sorted(self.metrics):
            out.append(f"{key}: {self.metrics[key]!r}")
        for note in self.notes:
            out.append(f"note: {note}")
        return out


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and np.isnan(value):
        return ""
    return repr(float(value))


def write_csv(path: Path, columns: list[str], rows: list[list], scenario_id: str,
              engine: str, kind: str = "series") -> None:
    lines = [CSV_MAGIC, f"# scenario: {scenario_id}", f"# engine: {engine}", f"# kind: {kind}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Engines


def _run_two_node(cfg: dict):
    p = cfg["params"]
    temps = tuple(
        mme.temperature_for_occupation(_numeric(n, "params.nbar"), p["nbar_reference"])
        for n in p["nbar"]
    )
    params = network.NetworkParams(
        omega_a=p["omega_a"], omega_0=p["omega_0"], omega_f=p["omega_f"],
        g1=p["g1"], g2=p["g2"], J=p["J"],
        gamma=tuple(float(g) for g in p["gamma"]), temps=temps,
    )
    basis = network.enumerate_basis(p["n_max"])
    h = network.build_hamiltonian(params, basis)
    dressed = network.dressed_states(h, basis)
    rates = mme.compute_rates(dressed, params, basis)

    initial = cfg["initial_state"]
    notes = []
    if initial["kind"] == "bell_diagonal":
        c_raw = np.asarray(initial["c"], dtype=float)
        c = correlations.nearest_bell_diagonal(c_raw)
        if np.abs(c - c_raw).max() > 1e-12:
            notes.append(
                f"initial c-vector {tuple(c_raw)} projected onto the physical "
                f"simplex as {tuple(np.round(c, 6))}"
            )
        rho0 = network.prepare_bell_diagonal(c, basis, dressed)
    else:
        rho0 = network.prepare_bare_state(initial["label"], basis, dressed)

    t_grid = np.linspace(0.0, cfg["t_max"], cfg["n_samples"])
    traj = mme.integrate(rho0, dressed, rates, t_grid, basis=basis,
                         step_scale=p["step_scale"])
    series = mme.correlation_trajectory(traj, dressed, basis, frame=p["frame"])

    columns = ["t", "cc", "qd", "gqd", "eof", "concurrence", "ge", "p_vac", "ree"]
    rows = []
    for point in series.points:
        rows.append([
            point.t, point.cc, point.qd, point.gqd_bures, point.eof,
            point.concurrence, point.ge_norm, point.p_vac, None,
        ])

    sudden = {}
    for measure in cfg["outputs"].get("detect_changes", []):
        key = {"gqd": "gqd_bures", "ge": "ge_norm"}.get(measure, measure)
        if key not in correlations.MEASURE_FIELDS:
            raise ValidationError(f"outputs.detect_changes names unknown measure {measure!r}")
        report = correlations.detect_sudden_changes(t_grid, series.column(key), measure)
        sudden[measure] = report.change_times

    metrics = {
        "late_cc": series.points[-1].cc,
        "late_qd": series.points[-1].qd,
        "late_gqd": series.points[-1].gqd_bures,
        "late_eof": series.points[-1].eof,
    }
    window = cfg["outputs"].get("plateau_window")
    if window:
        lo, hi = (float(w) for w in window)
        key = cfg["outputs"].get("plateau_measure", "gqd")
        key = {"gqd": "gqd_bures", "ge": "ge_norm"}.get(key, key)
        sel = (t_grid >= lo) & (t_grid <= hi)
        if not sel.any():
            raise ValidationError("outputs.plateau_window lies outside the time grid")
        values = series.column(key)[sel]
        metrics["plateau_flatness"] = float(
            (values.max() - values.min()) / max(values.mean(), 1e-12)
        )
    audit = (traj.max_trace_drift(), traj.min_eigenvalue())
    return columns, rows, sudden, metrics, notes, audit


def _chain_generator(cfg: dict):
    p = cfg["params"]
    cp = chains.ChainParams(
        n_sites=p["n_sites"], omega=p["omega"], g=p["g"],
        omega_f=p["omega_f"], J=p["J"], gamma_loss=p["gamma_loss"],
    )
    if p["model"] == "perturbative":
        return chains.effective_h_perturbative(cp), cp
    return chains.effective_h_adiabatic(cp), cp


def _run_chain(cfg: dict):
    """Single chain, one excitation plus the shared vacuum level."""
    h_single, cp = _chain_generator(cfg)
    n = cp.n_sites
    site = cfg["initial_state"]["site"]
    if not 1 <= site <= n:
        raise ValidationError(f"initial_state.site must be in 1..{n}")
    dim = n + 1  # |vac>, |site 1>, ..., |site n>
    h = np.zeros((dim, dim), dtype=complex)
    h[1:, 1:] = h_single
    gamma = cp.gamma_loss
    rho = np.zeros((dim, dim), dtype=complex)
    rho[site, site] = 1.0
    t_grid = np.linspace(0.0, cfg["t_max"], cfg["n_samples"])

    def rhs(r):
        out = -1j * (h @ r - r @ h)
        pops = np.real(np.diag(r))
        out -= 0.5 * gamma * ((np.arange(dim) > 0)[:, None] + (np.arange(dim) > 0)[None, :]) * r
        out[0, 0] += gamma * pops[1:].sum()
        return out

    evals = np.linalg.eigvalsh(h)
    span = max(float(evals[-1] - evals[0]), gamma, 1e-12)
    h_cap = 0.05 * cfg["params"]["step_scale"] / span
    states = []
    t = 0.0
    for target in t_grid:
        while t < target - 1e-15:
            step = min(h_cap, target - t)
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * step * k1)
            k3 = rhs(rho + 0.5 * step * k2)
            k4 = rhs(rho + step * k3)
            rho = rho + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            rho = (rho + rho.conj().T) / 2
            t += step
        states.append(rho.copy())
        t = float(target)

    columns = ["t", "p_ground"] + [f"pop_{i}" for i in range(1, n + 1)]
    rows = []
    for t, state in zip(t_grid, states):
        pops = np.real(np.diag(state))
        rows.append([t, pops[0], *pops[1:]])
    drift = max(abs(float(np.real(np.trace(s))) - 1.0) for s in states)
    mineig = min(float(np.linalg.eigvalsh(s).min()) for s in states)
    metrics = {"late_p_ground": float(np.real(states[-1][0, 0]))}
    return columns, rows, {}, metrics, [], (drift, mineig)


def _two_chain_initial(cfg: dict):
    initial = cfg["initial_state"]
    if initial["kind"] == "werner":
        return chains.werner_initial(float(initial["a"]))
    theta = float(initial["theta_over_pi"]) * np.pi
    return chains.initial_state(initial["kind"], theta)


def _monitored_states(state0, h, gamma_loss, t_grid, site, step_scale):
    """Trajectory with the eavesdropper's ground-state projection applied
    at every sample (repeated measurement of the cavity)."""
    state = np.asarray(state0, dtype=complex)
    if state.ndim == 1:
        state = np.outer(state, state.conj())
    out = []
    prev = float(t_grid[0])
    state = chains.eavesdrop_measure(state, site)
    out.append(state)
    for t in t_grid[1:]:
        seg = chains.evolve(state, h, gamma_loss, np.array([0.0, t - prev]),
                            step_scale=step_scale)
        state = chains.eavesdrop_measure(seg.states[-1], site)
        out.append(state)
        prev = float(t)
    return out


def _run_two_chain(cfg: dict):
    state0 = _two_chain_initial(cfg)
    h = chains.two_chain_hamiltonian()
    t_grid = np.linspace(0.0, cfg["t_max"], cfg["n_samples"])
    traj = chains.evolve(state0, h, cfg["params"]["gamma_loss"], t_grid,
                         step_scale=cfg["params"]["step_scale"])
    eav_site = cfg["outputs"].get("eavesdrop_site")
    if eav_site:
        if cfg["outputs"]["eavesdrop_mode"] == "monitored":
            measured_states = _monitored_states(
                state0, h, cfg["params"]["gamma_loss"], t_grid, eav_site,
                cfg["params"]["step_scale"],
            )
        else:
            measured_states = [
                chains.eavesdrop_measure(s, eav_site) for s in traj.states
            ]

    columns = ["t", "concurrence_11p", "concurrence_33p", "eof_33p", "qd_33p",
               "qdm_33p", "purity"]
    rows = []
    conc_src0 = None
    conc_dst = []
    for i, (t, state) in enumerate(zip(t_grid, traj.states)):
        pair_11 = chains.reduce_pair(state, ("1", "1p"))
        pair_33 = chains.reduce_pair(state, ("3", "3p"))
        c11 = correlations.concurrence(pair_11)
        c33 = correlations.concurrence(pair_33)
        qd33 = correlations.quantum_discord(pair_33)
        if eav_site:
            qdm = correlations.quantum_discord(
                chains.reduce_pair(measured_states[i], ("3", "3p"))
            )
        else:
            qdm = None
        if conc_src0 is None:
            conc_src0 = c11
        conc_dst.append(c33)
        rows.append([
            t, c11, c33, correlations.eof_from_concurrence(c33), qd33, qdm,
            qstate.purity(state),
        ])

    metrics = {}
    transmission = cfg["outputs"].get("transmission")
    if transmission:
        src = transmission.get("src", "11p")
        dst = transmission.get("dst", "33p")
        if (src, dst) != ("11p", "33p"):
            raise ValidationError("transmission is reported for src='11p', dst='33p'")
        pct, t_peak = chains.transmission_ratio(t_grid, conc_src0, np.array(conc_dst))
        metrics["transmission_pct"] = pct
        metrics["transmission_peak_time"] = t_peak
    if eav_site:
        qd_vals = np.array([r[4] for r in rows])
        qdm_vals = np.array([r[5] for r in rows])
        metrics["mean_qd_33p"] = float(qd_vals.mean())
        metrics["mean_qdm_33p"] = float(qdm_vals.mean())
        metrics["qdm_qd_ratio"] = float(qdm_vals.mean() / max(qd_vals.mean(), 1e-12))
    return columns, rows, {}, metrics, [], (traj.max_trace_drift(), traj.min_eigenvalue())


def _run_tangle(cfg: dict):
    state0 = _two_chain_initial(cfg)
    h = chains.two_chain_hamiltonian()
    t_grid = np.linspace(0.0, cfg["t_max"], cfg["n_samples"])
    traj = chains.evolve(state0, h, cfg["params"]["gamma_loss"], t_grid,
                         step_scale=cfg["params"]["step_scale"])
    site = chains.SITE_SLOTS[cfg["outputs"]["reference_site"]]

    columns = ["t", "tau_lower", "tau_upper", "total_purity", "marginal_purity",
               "validity", "one_to_rest_c2", "sum_pairwise_c2"]
    rows = []
    for t, state in zip(t_grid, traj.states):
        report = multipartite.tangle_bounds(state, (2,) * 6, site)
        rows.append([
            t, report.tau_lower, report.tau_upper, report.total_purity,
            report.marginal_purity, 1.0 if report.validity else 0.0,
            report.one_to_rest_c2, sum(report.pairwise_c2),
        ])
    taus_upper = np.array([r[2] for r in rows])
    purities = np.array([r[3] for r in rows])
    metrics = {
        "max_tau_upper": float(taus_upper.max()),
        "min_purity": float(purities.min()),
        "first_invalid_time": next(
            (float(r[0]) for r in rows if r[5] == 0.0), float("nan")
        ),
    }
    return columns, rows, {}, metrics, [], (traj.max_trace_drift(), traj.min_eigenvalue())


_ENGINE_RUNNERS = {
    "two_node_mme": _run_two_node,
    "chain": _run_chain,
    "two_chain": _run_two_chain,
    "tangle": _run_tangle,
}


def run_scenario(config: dict, out_dir, samples_override: int | None = None) -> RunSummary:
    cfg = validate_config(config)
    if samples_override is not None:
        cfg["n_samples"] = _positive_int(samples_override, "--samples")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        columns, rows, sudden, metrics, notes, audit = _ENGINE_RUNNERS[cfg["engine"]](cfg)
    notes = list(notes) + [str(w.message) for w in caught]
    summary = RunSummary(
        scenario_id=cfg["id"],
        engine=cfg["engine"],
        wall_time_s=time.perf_counter() - start,
        max_trace_drift=audit[0],
        min_eigenvalue=audit[1],
        sudden_changes=sudden,
        metrics=metrics,
        notes=notes,
    )
    write_csv(out_dir / "series.csv", columns, rows, cfg["id"], cfg["engine"])
    (out_dir / "summary.txt").write_text("\n".join(summary.lines()) + "\n")
    return summary


# ---------------------------------------------------------------------------
# Sweeps


def set_by_path(config: dict, dotted: str, value):
    """Assign into a nested dict/list by a dotted path like params.nbar.2."""
    parts = dotted.split(".")
    target = config
    for i, part in enumerate(parts[:-1]):
        if isinstance(target, list):
            target = target[int(part)]
        elif part in target:
            target = target[part]
        else:
            raise ValidationError(f"axis path {dotted!r} has no key {part!r}")
    last = parts[-1]
    if isinstance(target, list):
        idx = int(last)
        if not 0 <= idx < len(target):
            raise ValidationError(f"axis path {dotted!r} index out of range")
        if not isinstance(target[idx], (int, float)):
            raise ValidationError(f"axis {dotted!r} does not resolve to a numeric value")
        target[idx] = value
    else:
        if last not in target:
            raise ValidationError(f"axis path {dotted!r} has no key {last!r}")
        if isinstance(target[last], bool) or not isinstance(target[last], (int, float)):
            raise ValidationError(f"axis {dotted!r} does not resolve to a numeric value")
        target[last] = value


def _sweep_point(args):
    config, axis, value, out_dir = args
    local = copy.deepcopy(config)
    set_by_path(local, axis, value)
    summary = run_scenario(local, out_dir)
    return value, summary


def run_sweep(config: dict, axis: str, values: list[float], out_dir) -> list[RunSummary]:
    if not values:
        raise ValidationError("sweep needs a non-empty list of values")
    validate_config(config)  # fail fast before forking workers
    probe = copy.deepcopy(config)
    set_by_path(probe, axis, values[0])
    validate_config(probe)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [
        (config, axis, value, out_dir / f"{axis.replace('.', '_')}={value:g}")
        for value in values
    ]

    max_workers = os.cpu_count() or 1
    env_cap = os.environ.get("CQEDNET_THREADS")
    if env_cap:
        try:
            max_workers = max(1, min(max_workers, int(env_cap)))
        except ValueError as exc:
            raise ValidationError(f"CQEDNET_THREADS must be an integer: {env_cap!r}") from exc
    max_workers = min(max_workers, len(tasks))

    if max_workers == 1:
        results = [_sweep_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_sweep_point, tasks))

    # merge single-threaded, ordered by the value list
    metric_keys = sorted({k for _, s in results for k in s.metrics})
    change_keys = sorted({k for _, s in results for k in s.sudden_changes})
    columns = (
        ["value"]
        + [f"n_changes_{k}" for k in change_keys]
        + metric_keys
        + ["max_trace_drift", "min_eigenvalue"]
    )
    rows = []
    for value, summary in results:
        row = [value]
        row += [len(summary.sudden_changes.get(k, [])) for k in change_keys]
        row += [summary.metrics.get(k) for k in metric_keys]
        row += [summary.max_trace_drift, summary.min_eigenvalue]
        rows.append(row)
    sid = config.get("scenario", {}).get("id", "sweep")
    write_csv(out_dir / "sweep.csv", columns, rows, sid, config["scenario"]["engine"],
              kind="sweep")
    return [s for _, s in results]
