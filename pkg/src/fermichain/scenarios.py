"""Named figure scenarios, config parsing, and deterministic CSV output.

Each scenario computes a small set of panels (one CSV file per panel) with
the independent variable in the first column and unit-annotated headers,
e.g. "J_QT[alpha^2]".  Energies are in units of the hopping scale alpha,
times in 1/alpha, entropies in k_B.  Output is written RFC-4180 style with
UTF-8 text, LF line endings, and a fixed significant-digit format, and is
byte-identical for any thread count: work items are dispatched to a pool
but collected strictly in submission order, and every reduction inside a
work item has a fixed association.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import closedforms, entropy, transport
from .lattice import BipartitePreparation, ReservoirParams


class ConfigError(ValueError):
    """A scenario config was malformed; the message names the offender."""


class LinearResponseWarning(UserWarning):
    """A reservoir split is large for the linear-response formulas."""


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    temperature: float = 0.1
    mu: float = 0.0
    dephasing: float = 0.05
    g: float = 1.0
    stats: str = transport.STATS_FD
    tol: float = 1e-10
    threads: int = 1
    sig_digits: int = 12
    out_dir: str = "figures"
    delta_t: float = 0.0
    delta_mu: float = 0.0
    t_grid: tuple = ()
    mu_grid: tuple = ()
    n_eq: float = 0.5
    delta_n: float = 0.1
    n_max: int = 25
    linear_response_threshold: float = 0.05
    explicit: frozenset = field(default_factory=frozenset, compare=False)

    def pick(self, key: str, pinned):
        """Scenario-pinned default unless the user set the key explicitly."""
        return getattr(self, key) if key in self.explicit else pinned

    def quad(self) -> transport.QuadratureSpec:
        return transport.QuadratureSpec(abs_tol=self.tol, rel_tol=self.tol)


_NUMBER_FIELDS = {
    "temperature": lambda v: v > 0.0,
    "mu": lambda v: math.isfinite(v),
    "dephasing": lambda v: v >= 0.0,
    "g": lambda v: math.isfinite(v),
    "tol": lambda v: 0.0 < v < 1.0,
    "delta_t": lambda v: math.isfinite(v),
    "delta_mu": lambda v: math.isfinite(v),
    "n_eq": lambda v: 0.0 < v < 1.0,
    "delta_n": lambda v: math.isfinite(v),
    "linear_response_threshold": lambda v: v > 0.0,
}
_INT_FIELDS = {
    "threads": lambda v: 1 <= v <= 256,
    "sig_digits": lambda v: 3 <= v <= 17,
    "n_max": lambda v: 1 <= v <= 30,
}
_GRID_FIELDS = ("t_grid", "mu_grid")
_STR_FIELDS = ("scenario", "stats", "out_dir")


def _check_grid(name: str, values) -> tuple:
    if not isinstance(values, (list, tuple)) or len(values) < 2:
        raise ConfigError("config field '%s' must be a list of at least 2 numbers"
                          % name)
    arr = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError("config field '%s' must contain finite numbers" % name)
        arr.append(float(v))
    if any(b <= a for a, b in zip(arr, arr[1:])):
        raise ConfigError("config field '%s' must be strictly increasing" % name)
    if name == "t_grid" and arr[0] < 0.0:
        raise ConfigError("config field 't_grid' must start at a time >= 0")
    return tuple(arr)


def parse_config(data: Mapping) -> ScenarioConfig:
    """Validate a config mapping; reject unknown keys by name."""
    if not isinstance(data, Mapping):
        raise ConfigError("config must be a JSON object")
    known = set(_NUMBER_FIELDS) | set(_INT_FIELDS) | set(_GRID_FIELDS) | set(_STR_FIELDS)
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError("unknown config key '%s'" % unknown[0])
    if "scenario" not in data:
        raise ConfigError("config needs a 'scenario' key")
    kwargs = {}
    for key in _STR_FIELDS:
        if key in data:
            if not isinstance(data[key], str):
                raise ConfigError("config field '%s' must be a string" % key)
            kwargs[key] = data[key]
    for key, ok in _NUMBER_FIELDS.items():
        if key in data:
            v = data[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not ok(float(v)):
                raise ConfigError("config field '%s' is out of range" % key)
            kwargs[key] = float(v)
    for key, ok in _INT_FIELDS.items():
        if key in data:
            v = data[key]
            if isinstance(v, bool) or not isinstance(v, int) or not ok(v):
                raise ConfigError("config field '%s' must be a small positive integer"
                                  % key)
            kwargs[key] = v
    for key in _GRID_FIELDS:
        if key in data:
            kwargs[key] = _check_grid(key, data[key])
    if kwargs["scenario"] not in SCENARIOS:
        raise ConfigError("unknown scenario '%s'" % kwargs["scenario"])
    if "stats" in kwargs and kwargs["stats"] not in (transport.STATS_FD,
                                                     transport.STATS_BOLTZMANN):
        raise ConfigError("config field 'stats' must be 'fd' or 'boltzmann'")
    cfg = ScenarioConfig(explicit=frozenset(data) - {"scenario"}, **kwargs)
    _warn_if_beyond_linear_response(cfg)
    return cfg


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config file is not valid JSON: %s" % exc) from None
    return parse_config(data)


def _warn_if_beyond_linear_response(cfg: ScenarioConfig):
    if cfg.delta_t == 0.0 and cfg.delta_mu == 0.0:
        return
    prep = BipartitePreparation(base=ReservoirParams(cfg.temperature, cfg.mu),
                                delta_t=cfg.delta_t, delta_mu=cfg.delta_mu,
                                linear_response_threshold=cfg.linear_response_threshold)
    for name in prep.linear_response_warnings():
        warnings.warn("%s split exceeds %g of the scale it perturbs; "
                      "linear-response output may be inaccurate"
                      % (name, cfg.linear_response_threshold),
                      LinearResponseWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# results, parallel map, CSV writing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Panel:
    name: str
    headers: tuple
    columns: tuple

    def __post_init__(self):
        if len(self.headers) != len(self.columns):
            raise ValueError("headers and columns disagree")
        lengths = {len(c) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError("ragged panel columns")


@dataclass(frozen=True)
class ComparisonReport:
    panel: str
    quantity: str
    max_rel_deviation: float
    threshold: float

    @property
    def within(self) -> bool:
        return self.max_rel_deviation <= self.threshold

    def line(self) -> str:
        if math.isinf(self.threshold):
            return ("%s/%s: max relative deviation %.3g (informational)"
                    % (self.panel, self.quantity, self.max_rel_deviation))
        return ("%s/%s: max relative deviation %.3g (threshold %.3g) %s"
                % (self.panel, self.quantity, self.max_rel_deviation,
                   self.threshold, "ok" if self.within else "EXCEEDED"))


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    panels: tuple
    reports: tuple = ()


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))  # submission order, not completion order


def _tag(value: float) -> str:
    return ("%g" % value).replace("-", "m").replace(".", "p")


def _format_value(x: float, digits: int) -> str:
    return "%.*g" % (digits, x)


def _csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def write_result(result: ScenarioResult, out_dir: str, sig_digits: int = 12):
    """One CSV per panel; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for panel in result.panels:
        stem = result.scenario if not panel.name else (
            "%s_%s" % (result.scenario, panel.name))
        path = os.path.join(out_dir, stem + ".csv")
        lines = [",".join(_csv_field(h) for h in panel.headers)]
        n_rows = len(panel.columns[0]) if panel.columns else 0
        for i in range(n_rows):
            lines.append(",".join(
                _format_value(float(col[i]), sig_digits) for col in panel.columns))
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        paths.append(path)
    return paths


def _max_norm_deviation(series, reference) -> float:
    series = np.asarray(series, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = float(np.max(np.abs(reference)))
    if scale == 0.0:
        return float(np.max(np.abs(series - reference)))
    return float(np.max(np.abs(series - reference)) / scale)


# ---------------------------------------------------------------------------
# scenario builders
# ---------------------------------------------------------------------------

_J_HEADERS = ("J_NM[1]", "J_NT[alpha]", "J_QM[alpha]", "J_QT[alpha^2]")


def _block_columns(blocks) -> tuple:
    return (np.array([b.j_n_mu for b in blocks]),
            np.array([b.j_n_t for b in blocks]),
            np.array([b.j_q_mu for b in blocks]),
            np.array([b.j_q_t for b in blocks]))


def _ons1(cfg: ScenarioConfig) -> ScenarioResult:
    """Damped-limit Onsager coefficients across the band vs mu."""
    mu_grid = np.asarray(cfg.mu_grid or np.linspace(-4.0, 4.0, 161))
    temps = (cfg.temperature,) if "temperature" in cfg.explicit else (0.1, 0.5)
    quad = cfg.quad()
    panels = []
    for temp in temps:
        blocks = _pmap(
            lambda m: transport.onsager(math.inf, ReservoirParams(temp, m),
                                        cfg.dephasing, cfg.g, quad, cfg.stats),
            mu_grid, cfg.threads)
        panels.append(Panel(name="T%s" % _tag(temp),
                            headers=("mu[alpha]",) + _J_HEADERS,
                            columns=(mu_grid,) + _block_columns(blocks)))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels))


def _onsevo1(cfg: ScenarioConfig) -> ScenarioResult:
    """Coefficient build-up in time at very low temperature, per mu."""
    temp = cfg.pick("temperature", 0.005)
    lam = cfg.pick("dephasing", 0.05)
    mus = (cfg.mu,) if "mu" in cfg.explicit else (0.0, 1.0, 1.9)
    t_grid = np.asarray(cfg.t_grid or np.linspace(0.0, 40.0, 81))
    quad = cfg.quad()
    panels = []
    for mu in mus:
        res = ReservoirParams(temp, mu)
        blocks = _pmap(
            lambda t: transport.onsager(float(t), res, lam, cfg.g, quad, cfg.stats),
            t_grid, cfg.threads)
        panels.append(Panel(name="mu%s" % _tag(mu),
                            headers=("t[1/alpha]",) + _J_HEADERS,
                            columns=(t_grid,) + _block_columns(blocks)))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels))


def _onsevo2(cfg: ScenarioConfig) -> ScenarioResult:
    """Time evolution of the coefficients with and without dephasing."""
    temp = cfg.pick("temperature", 0.1)
    lams = (cfg.dephasing,) if "dephasing" in cfg.explicit else (0.05, 0.0)
    t_grid = np.asarray(cfg.t_grid or np.linspace(0.0, 60.0, 121))
    res = ReservoirParams(temp, cfg.mu)
    quad = cfg.quad()
    panels = []
    for lam in lams:
        blocks = _pmap(
            lambda t: transport.onsager(float(t), res, lam, cfg.g, quad, cfg.stats),
            t_grid, cfg.threads)
        panels.append(Panel(name="lam%s" % _tag(lam),
                            headers=("t[1/alpha]",) + _J_HEADERS,
                            columns=(t_grid,) + _block_columns(blocks)))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels))


def _entropy_panels(cfg: ScenarioConfig, n_eq_pin: float, delta_n_pin: float,
                    column_fn) -> ScenarioResult:
    n_eq = cfg.pick("n_eq", n_eq_pin)
    delta_n = cfg.pick("delta_n", delta_n_pin)
    lams = (cfg.dephasing,) if "dephasing" in cfg.explicit else (0.2, 0.0)
    t_grid = np.asarray(cfg.t_grid or np.linspace(0.0, 20.0, 401))
    panels = []
    for lam in lams:
        prep = entropy.EquilibriumModePrep(n_eq=n_eq, delta_n=delta_n,
                                           coupling=cfg.g, dephasing=lam)
        headers, columns = column_fn(prep, t_grid)
        panels.append(Panel(name="lam%s" % _tag(lam), headers=headers,
                            columns=columns))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels))


def _entroevo(cfg: ScenarioConfig) -> ScenarioResult:
    """Site entropies and mutual information for a weak split."""

    def cols(prep, t_grid):
        c = entropy.entropy_coeffs(prep, t_grid)
        mi = entropy.mutual_information(prep, t_grid)
        s_ab = entropy.joint_entropy(prep, t_grid)
        return (("t[1/alpha]", "S_A[k_B]", "S_B[k_B]", "I[k_B]",
                 "S_sum_minus_I[k_B]", "S_AB[k_B]"),
                (t_grid, c.entropy_a, c.entropy_b, mi,
                 c.entropy_a + c.entropy_b - mi, s_ab))

    return _entropy_panels(cfg, 0.1, 0.01, cols)


def _entroprod(cfg: ScenarioConfig) -> ScenarioResult:
    """Joint entropy growth and the irreversible rate behind it."""

    def cols(prep, t_grid):
        return (("t[1/alpha]", "S_AB[k_B]", "S_AB_exact[k_B]", "Pi[k_B*alpha]"),
                (t_grid, entropy.joint_entropy(prep, t_grid),
                 entropy.joint_entropy_exact(prep, t_grid),
                 entropy.entropy_production(prep, t_grid)))

    return _entropy_panels(cfg, 0.5, 0.1, cols)


def _mutint(cfg: ScenarioConfig) -> ScenarioResult:
    """Mutual information: generated by the coupling, erased by noise."""

    def cols(prep, t_grid):
        return (("t[1/alpha]", "I[k_B]", "I_exact[k_B]"),
                (t_grid, entropy.mutual_information(prep, t_grid),
                 entropy.mutual_information_exact(prep, t_grid)))

    return _entropy_panels(cfg, 0.5, 0.1, cols)


def _onsteste1(cfg: ScenarioConfig) -> ScenarioResult:
    """Damped-limit coefficients: quadrature vs low-T closed form.

    The deviations are reported without a pass/fail threshold: the
    temperature-odd coefficients are carried entirely by the O(T^2) term
    of the closed form, so their truncation error is first order in
    (pi T)^2/(4 - mu^2) and visibly grows toward the band edges and with
    T.  Contrasting the two temperatures is the point of this figure.
    """
    mu_grid = np.asarray(cfg.mu_grid or np.linspace(-1.5, 1.5, 61))
    if np.any(np.abs(mu_grid) >= 2.0):
        raise ConfigError("config field 'mu_grid' must stay inside (-2, 2) here")
    temps = (cfg.temperature,) if "temperature" in cfg.explicit else (0.1, 0.25)
    quad = cfg.quad()
    panels = []
    reports = []
    for temp in temps:
        blocks = _pmap(
            lambda m: transport.onsager(math.inf, ReservoirParams(temp, m),
                                        cfg.dephasing, cfg.g, quad, cfg.stats),
            mu_grid, cfg.threads)
        closed = [closedforms.equilibrium_sommerfeld_onsager(ReservoirParams(temp, m))
                  for m in mu_grid]
        quad_cols = _block_columns(blocks)
        series_cols = _block_columns(closed)
        headers = ["mu[alpha]"]
        columns = [mu_grid]
        name = "T%s" % _tag(temp)
        for label, qc, sc in zip(_J_HEADERS, quad_cols, series_cols):
            base, unit = label.split("[")
            headers += ["%s_quad[%s" % (base, unit), "%s_series[%s" % (base, unit)]
            columns += [qc, sc]
            reports.append(ComparisonReport(
                panel=name, quantity=base,
                max_rel_deviation=_max_norm_deviation(sc, qc),
                threshold=math.inf))
        panels.append(Panel(name=name, headers=tuple(headers),
                            columns=tuple(columns)))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels),
                          reports=tuple(reports))


def _onsteste2(cfg: ScenarioConfig) -> ScenarioResult:
    """Counter evolution: truncated low-T series vs adaptive quadrature."""
    temp = cfg.pick("temperature", 0.1)
    lam = cfg.pick("dephasing", 0.35)
    mus = (cfg.mu,) if "mu" in cfg.explicit else (0.0, 1.0)
    t_grid = np.asarray(cfg.t_grid or np.linspace(0.0, 10.0, 41))
    quad = cfg.quad()
    panels = []
    reports = []
    for mu in mus:
        res = ReservoirParams(temp, mu)

        def point(t):
            t = float(t)
            return (transport.nbar(t, res, lam, cfg.g, quad),
                    transport.ebar(t, res, lam, cfg.g, quad),
                    closedforms.nbar_fd_sommerfeld(t, res, lam, cfg.g, cfg.n_max).value,
                    closedforms.ebar_fd_sommerfeld(t, res, lam, cfg.g, cfg.n_max).value)

        rows = _pmap(point, t_grid, cfg.threads)
        n_quad, e_quad, n_series, e_series = (np.array(col) for col in zip(*rows))
        name = "mu%s" % _tag(mu)
        reports.append(ComparisonReport(panel=name, quantity="N",
                                        max_rel_deviation=_max_norm_deviation(
                                            n_series, n_quad), threshold=0.05))
        reports.append(ComparisonReport(panel=name, quantity="E",
                                        max_rel_deviation=_max_norm_deviation(
                                            e_series, e_quad), threshold=0.05))
        panels.append(Panel(
            name=name,
            headers=("t[1/alpha]", "N_quad[1]", "N_series[1]",
                     "E_quad[alpha]", "E_series[alpha]"),
            columns=(t_grid, n_quad, n_series, e_quad, e_series)))
    return ScenarioResult(scenario=cfg.scenario, panels=tuple(panels),
                          reports=tuple(reports))


def _custom(cfg: ScenarioConfig) -> ScenarioResult:
    """Counters, coefficients, and linear-response fluxes on a user grid."""
    if not cfg.t_grid:
        raise ConfigError("custom scenario requires config field 't_grid'")
    t_grid = np.asarray(cfg.t_grid)
    res = ReservoirParams(cfg.temperature, cfg.mu)
    quad = cfg.quad()

    def point(t):
        t = float(t)
        n = transport.nbar(t, res, cfg.dephasing, cfg.g, quad, cfg.stats)
        e = transport.ebar(t, res, cfg.dephasing, cfg.g, quad, cfg.stats)
        block = transport.onsager(t, res, cfg.dephasing, cfg.g, quad, cfg.stats)
        flux = transport.fluxes(block, cfg.delta_mu, cfg.delta_t)
        return (n, e, e - cfg.mu * n, block.j_n_mu, block.j_n_t, block.j_q_mu,
                block.j_q_t, flux.j_particle, flux.j_heat)

    rows = _pmap(point, t_grid, cfg.threads)
    columns = tuple(np.array(col) for col in zip(*rows))
    headers = ("t[1/alpha]", "N[1]", "E[alpha]", "Q[alpha]") + _J_HEADERS + (
        "flux_N[1]", "flux_Q[alpha]")
    return ScenarioResult(scenario=cfg.scenario,
                          panels=(Panel(name="", headers=headers,
                                        columns=(t_grid,) + columns),))


SCENARIOS = {
    "ons1": _ons1,
    "onsevo1": _onsevo1,
    "onsevo2": _onsevo2,
    "entroevo": _entroevo,
    "entroprod": _entroprod,
    "mutint": _mutint,
    "onsteste1": _onsteste1,
    "onsteste2": _onsteste2,
    "custom": _custom,
}


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    try:
        builder = SCENARIOS[cfg.scenario]
    except KeyError:
        raise ConfigError("unknown scenario '%s'" % cfg.scenario) from None
    return builder(cfg)
