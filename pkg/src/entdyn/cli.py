"""Command-line scenarios.

Each scenario writes one CSV file (header row, comma separator, floats at 9
significant digits, newline endings) and keeps stdout clean; diagnostics go
to stderr. Exit status 0 on success, 1 on configuration errors, 2 on
numerical failures.

Parameter precedence is flag over config-file key over scenario default.
Config files are plain text, one `key = value` per line, `#` comments.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .errors import EntdynError, InvalidStateError
from .evolution import TimeGrid, Trajectory, propagate_expm, steady_state, unitary_evolve
from .feedback import (
    FeedbackParams,
    bloch_steady_state,
    bloch_system,
    concurrence_sweep,
    steady_state_closed_form,
    wm_full_generator,
    wm_subspace_generator,
)
from .generators import (
    HamiltonianParams,
    assemble_liouvillian,
    build_hamiltonian,
    phenomenological_superop,
)
from .quantum import (
    bell_state,
    bloch_from_density,
    concurrence_2x2_embedded,
    density_from_pure,
    purity,
    restrict_23,
    validate_density,
    vectorize,
)

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "run_scenario", "main"]

#: lower edge of the logarithmic (m, f) grids
_GRID_MIN = 0.1

#: density-matrix tolerance applied to every emitted state row
_EMIT_TOL = 1e-8


class ConfigError(Exception):
    """Invalid flags or config-file content; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_sign(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}")
    if value not in (1, -1):
        raise argparse.ArgumentTypeError(f"sign must be +1 or -1, got {text!r}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}")


_KEY_TYPES = {
    "gamma": float,
    "m": float,
    "f": float,
    "mu": float,
    "y": _float_list,
    "a": float,
    "b": float,
    "c": float,
    "t_max": float,
    "steps": int,
    "m_max": float,
    "f_max": float,
    "points": int,
    "sign": _parse_sign,
    "out": str,
}

# Parameters each scenario consumes, with their defaults. None means the
# scenario computes its own fallback. Keys a scenario does not list are
# rejected when given explicitly.
_SCENARIOS: dict[str, dict] = {
    "fig1": {"a": 1.0, "y": [1.0], "sign": 1, "t_max": float(np.pi), "steps": 200},
    "fig2": {"gamma": 1.0, "t_max": 5.0, "steps": 100},
    "fig-nogo": {"gamma": 1.0, "y": [0.5, 1.0, 5.0], "t_max": 20.0, "steps": 200},
    "fig4": {"gamma": 1.0, "m_max": 200.0, "f_max": 200.0, "points": 81},
    "evolve": {
        "m": 1.0,
        "f": 1.0,
        "mu": 0.0,
        "gamma": 1.0,
        "y": [0.0],
        "a": None,
        "b": None,
        "c": None,
        "t_max": 10.0,
        "steps": 200,
    },
    "steady": {"m": 1.0, "f": 1.0, "mu": 0.0, "gamma": 1.0, "y": [0.0]},
    "sweep": {"gamma": 1.0, "mu": 0.0, "m_max": 200.0, "f_max": 200.0, "points": 81},
}

_EPILOG = """\
scenarios:
  fig1      coherent exchange oscillation of the pair state |01>: CSV (t, concurrence),
            equal to |sin(2 y t)|; uses --a (both local splittings), --y, --sign.
  fig2      collective-dephasing decay from the Bell state: CSV (t, concurrence),
            equal to exp(-gamma t); --gamma is the (2,3) coherence decay rate.
  fig-nogo  coherent control only (no feedback): CSV (y, t, concurrence, bloch_norm)
            for every requested --y (repeatable; must be nonzero). --gamma is the
            subspace collapse-operator strength, so coherences decay at 2*gamma.
  fig4      steady-state concurrence under feedback: CSV (m, f, concurrence,
            log10_one_minus_concurrence) over logarithmic grids from 0.1 to
            --m-max / --f-max with --points values per axis.
  evolve    full two-qubit feedback evolution from the Bell state: CSV
            (t, concurrence, purity); --a/--b/--c override the coherent couplings.
  steady    one-excitation steady state for one parameter set: single-row CSV with
            Bloch components, concurrence, purity, and the closed forms when y = 0.
  sweep     like fig4 with --mu and purity columns.

--steps counts uniform intervals, so a trajectory CSV has steps + 1 rows.
Config files hold `key = value` lines with the flag names (hyphen or
underscore); flags override file keys, file keys override defaults.
"""


@dataclass
class ScenarioConfig:
    """A scenario name with its fully resolved parameter values."""

    scenario: str
    values: dict
    out: str


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="entdyn",
        description="Two-qubit entanglement dissipation and feedback scenarios.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("scenario", choices=sorted(_SCENARIOS))
    parser.add_argument("--gamma", type=float, default=None, help="dephasing strength")
    parser.add_argument("--m", type=float, default=None, help="measurement strength")
    parser.add_argument("--f", type=float, default=None, help="feedback strength")
    parser.add_argument("--mu", type=float, default=None, help="level splitting in the one-excitation block")
    parser.add_argument(
        "--y",
        type=float,
        action="append",
        default=None,
        help="exchange coupling; repeatable for fig-nogo",
    )
    parser.add_argument("--a", type=float, default=None, help="first local splitting")
    parser.add_argument("--b", type=float, default=None, help="second local splitting")
    parser.add_argument("--c", type=float, default=None, help="isotropic exchange strength")
    parser.add_argument("--t-max", dest="t_max", type=float, default=None, help="end of the time window")
    parser.add_argument("--steps", type=int, default=None, help="uniform time intervals (rows = steps + 1)")
    parser.add_argument("--m-max", dest="m_max", type=float, default=None, help="upper edge of the m grid")
    parser.add_argument("--f-max", dest="f_max", type=float, default=None, help="upper edge of the f grid")
    parser.add_argument("--points", type=int, default=None, help="grid points per axis")
    parser.add_argument("--config", default=None, help="config file path")
    parser.add_argument("--out", default=None, help="output CSV path (default <scenario>.csv)")
    parser.add_argument("--sign", type=_parse_sign, default=None, help="evolution sign convention, +1 or -1")
    return parser


def _read_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if key not in _KEY_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        try:
            values[key] = _KEY_TYPES[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}")
    return values


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _validate_values(scenario: str, values: dict):
    for key in ("gamma", "m", "f"):
        if values.get(key) is not None and key in values:
            _require(values[key] >= 0, f"{key} must be nonnegative, got {values[key]}")
    for key in ("gamma", "m", "f", "mu", "a", "b", "c", "t_max", "m_max", "f_max"):
        value = values.get(key)
        if value is not None and not np.isfinite(value):
            raise ConfigError(f"{key} must be finite, got {value}")
    if "t_max" in values:
        _require(values["t_max"] > 0, f"t-max must be positive, got {values['t_max']}")
    if "steps" in values:
        _require(values["steps"] >= 1, f"steps must be at least 1, got {values['steps']}")
    if "points" in values:
        _require(values["points"] >= 2, f"points must be at least 2, got {values['points']}")
    for key in ("m_max", "f_max"):
        if key in values:
            _require(
                values[key] > _GRID_MIN,
                f"{key.replace('_', '-')} must exceed the grid floor {_GRID_MIN}",
            )
    if scenario in ("fig4", "sweep"):
        _require(values["gamma"] > 0, "gamma must be positive for steady-state sweeps")
    if "y" in values:
        ys = values["y"]
        _require(all(np.isfinite(v) for v in ys), "y values must be finite")
        if scenario == "fig-nogo":
            _require(all(v != 0 for v in ys), "fig-nogo requires nonzero y")
        else:
            _require(len(ys) == 1, f"scenario {scenario} accepts a single --y")


def parse_config(argv: list[str]) -> ScenarioConfig:
    """Resolve argv (and an optional config file) into a ScenarioConfig.

    Raises ConfigError on unknown flags or keys, values of the wrong type,
    keys outside the scenario's parameter set, and out-of-range values.
    """
    parser = _build_parser()
    ns = parser.parse_args(argv)
    defaults = _SCENARIOS[ns.scenario]
    allowed = set(defaults) | {"out"}

    file_values = _read_config_file(ns.config) if ns.config else {}
    for key in file_values:
        if key not in allowed:
            raise ConfigError(f"key {key!r} is not a parameter of scenario {ns.scenario}")

    flag_values = {
        key: value
        for key, value in vars(ns).items()
        if key in _KEY_TYPES and value is not None
    }
    for key in flag_values:
        if key not in allowed:
            raise ConfigError(f"--{key.replace('_', '-')} is not a parameter of scenario {ns.scenario}")

    merged = dict(defaults)
    merged.update(file_values)
    merged.update(flag_values)
    out = merged.pop("out", None) or f"{ns.scenario}.csv"
    _validate_values(ns.scenario, merged)
    return ScenarioConfig(ns.scenario, merged, out)


def _format(value) -> str:
    return f"{float(value):.9g}"


def _write_csv(path: str, header: list[str], rows) -> int:
    count = 0
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_format(v) for v in row) + "\n")
                count += 1
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}")
    return count


def _check_emitted_densities(traj: Trajectory):
    for state in traj.states:
        validate_density(
            state, herm_atol=_EMIT_TOL, trace_atol=_EMIT_TOL, eig_floor=-_EMIT_TOL
        )


def _time_grid(values: dict) -> TimeGrid:
    return TimeGrid(0.0, values["t_max"], values["steps"] + 1)


def _run_fig1(values: dict, out: str) -> int:
    y = values["y"][0]
    h = build_hamiltonian(HamiltonianParams(a=values["a"], b=values["a"], c=y / 2))
    traj = unitary_evolve(h, np.array([0, 1, 0, 0], dtype=complex), _time_grid(values), sign=values["sign"])
    for norm in traj.observables["norm"]:
        if abs(norm - 1.0) > _EMIT_TOL:
            raise InvalidStateError(f"propagated norm {norm:.12f} drifted from 1")
    rows = zip(traj.times, traj.observables["concurrence"])
    return _write_csv(out, ["t", "concurrence"], rows)


def _run_fig2(values: dict, out: str) -> int:
    rates = np.zeros((4, 4))
    rates[1, 2] = rates[2, 1] = values["gamma"]
    gen = assemble_liouvillian(None, [phenomenological_superop(rates)])
    r0 = vectorize(density_from_pure(bell_state()))
    traj = propagate_expm(gen, r0, _time_grid(values))
    _check_emitted_densities(traj)
    rows = zip(traj.times, traj.observables["concurrence"])
    return _write_csv(out, ["t", "concurrence"], rows)


def _run_fig_nogo(values: dict, out: str) -> int:
    grid = _time_grid(values)
    rho0 = restrict_23(density_from_pure(bell_state()))
    rows = []
    for y in values["y"]:
        params = FeedbackParams(m=0.0, f=0.0, mu=0.0, gamma=values["gamma"], y=y)
        traj = propagate_expm(wm_subspace_generator(params), vectorize(rho0), grid)
        _check_emitted_densities(traj)
        fixed_point = bloch_steady_state(bloch_system(params))
        print(
            f"fig-nogo y={y:g}: |Bloch fixed point| = {np.linalg.norm(fixed_point):.3e}",
            file=sys.stderr,
        )
        for k, t in enumerate(traj.times):
            rows.append(
                (y, t, traj.observables["concurrence"][k], traj.observables["bloch_norm"][k])
            )
    return _write_csv(out, ["y", "t", "concurrence", "bloch_norm"], rows)


def _log_grid(upper: float, points: int) -> np.ndarray:
    return np.logspace(np.log10(_GRID_MIN), np.log10(upper), points)


def _run_fig4(values: dict, out: str) -> int:
    m_grid = _log_grid(values["m_max"], values["points"])
    f_grid = _log_grid(values["f_max"], values["points"])
    sweep = concurrence_sweep(m_grid, f_grid, values["gamma"])
    rows = (
        (m_grid[i], f_grid[j], sweep.concurrence[i, j], sweep.log10_one_minus_concurrence[i, j])
        for i in range(m_grid.size)
        for j in range(f_grid.size)
    )
    return _write_csv(out, ["m", "f", "concurrence", "log10_one_minus_concurrence"], rows)


def _run_evolve(values: dict, out: str) -> int:
    y = values["y"][0]
    params = FeedbackParams(
        m=values["m"], f=values["f"], mu=values["mu"], gamma=values["gamma"], y=y
    )
    overrides = (values["a"], values["b"], values["c"])
    if any(v is not None for v in overrides):
        a = values["a"] if values["a"] is not None else params.mu / 2
        b = values["b"] if values["b"] is not None else -params.mu / 2
        c = values["c"] if values["c"] is not None else params.y / 2
        hamiltonian = HamiltonianParams(a, b, c)
    else:
        hamiltonian = None
    gen = wm_full_generator(params, hamiltonian=hamiltonian)
    r0 = vectorize(density_from_pure(bell_state()))
    traj = propagate_expm(gen, r0, _time_grid(values))
    _check_emitted_densities(traj)
    rows = zip(traj.times, traj.observables["concurrence"], traj.observables["purity"])
    return _write_csv(out, ["t", "concurrence", "purity"], rows)


def _run_steady(values: dict, out: str) -> int:
    y = values["y"][0]
    params = FeedbackParams(
        m=values["m"], f=values["f"], mu=values["mu"], gamma=values["gamma"], y=y
    )
    rho = steady_state(wm_subspace_generator(params))
    validate_density(rho, herm_atol=_EMIT_TOL, trace_atol=_EMIT_TOL, eig_floor=-_EMIT_TOL)
    bloch = bloch_from_density(rho)
    conc = concurrence_2x2_embedded(rho)
    pur = purity(rho)
    if y == 0 and params.f > 0:
        closed = steady_state_closed_form(params)
        conc_closed, pur_closed = closed.concurrence, closed.purity
    else:
        conc_closed = pur_closed = float("nan")
    row = (
        params.m, params.f, params.mu, params.gamma, y,
        bloch[0], bloch[1], bloch[2], conc, pur, conc_closed, pur_closed,
    )
    header = [
        "m", "f", "mu", "gamma", "y",
        "bloch_x", "bloch_y", "bloch_z", "concurrence", "purity",
        "concurrence_closed_form", "purity_closed_form",
    ]
    return _write_csv(out, header, [row])


def _run_sweep(values: dict, out: str) -> int:
    m_grid = _log_grid(values["m_max"], values["points"])
    f_grid = _log_grid(values["f_max"], values["points"])
    sweep = concurrence_sweep(m_grid, f_grid, values["gamma"], mu=values["mu"])
    purity_grid = 0.5 * (1.0 + sweep.concurrence**2)
    rows = (
        (
            m_grid[i],
            f_grid[j],
            sweep.concurrence[i, j],
            purity_grid[i, j],
            sweep.log10_one_minus_concurrence[i, j],
        )
        for i in range(m_grid.size)
        for j in range(f_grid.size)
    )
    header = ["m", "f", "concurrence", "purity", "log10_one_minus_concurrence"]
    return _write_csv(out, header, rows)


_RUNNERS = {
    "fig1": _run_fig1,
    "fig2": _run_fig2,
    "fig-nogo": _run_fig_nogo,
    "fig4": _run_fig4,
    "evolve": _run_evolve,
    "steady": _run_steady,
    "sweep": _run_sweep,
}


def run_scenario(config: ScenarioConfig):
    """Execute a resolved scenario and report the written file on stderr."""
    rows = _RUNNERS[config.scenario](config.values, config.out)
    print(f"{config.scenario}: wrote {config.out} ({rows} rows)", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"entdyn: error: {exc}", file=sys.stderr)
        return 1
    try:
        run_scenario(config)
    except EntdynError as exc:
        print(f"entdyn: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0
