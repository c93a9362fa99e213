"""Named sweep recipes, deterministic execution, and CSV/JSON emission.

Each sweep kind reproduces one figure-class experiment: a rate or
energy-efficiency curve against transmit power, quantization bits, antenna
count, or Rician factor, for a list of receiver cases (ADC splits, Rician
factors, CSI assumptions).  Output rows are ordered by (axis value, case,
method) regardless of worker scheduling, and the metadata header carries
every input needed to reproduce the file byte for byte.
"""
from __future__ import annotations

import configparser
import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import __version__
from .analytic import (
    RateReport,
    rate_imperfect_csi,
    rate_limit_imperfect_constant,
    rate_limit_power_scaled_perfect,
    rate_perfect_K_infinity,
    rate_perfect_csi,
)
from .montecarlo import McSettings, mc_rate
from .power import PowerParams, energy_efficiency, total_power
from .quantization import AqnmParams
from .scenario import GeometryParams, SystemConfig, UserScenario, db_to_linear, sample_user_scenario

__all__ = [
    "CSV_COLUMNS",
    "CaseSpec",
    "SWEEP_KINDS",
    "SweepResult",
    "SweepSpec",
    "make_spec",
    "parse_config_file",
    "parse_csv_metadata",
    "result_to_csv",
    "result_to_json",
    "run_sweep",
    "spec_from_metadata",
    "spec_overrides_from_config",
]

CSV_COLUMNS = (
    "sweep_kind",
    "axis_name",
    "axis_value",
    "case_label",
    "method",
    "M",
    "M0",
    "M1",
    "N",
    "b",
    "K_db",
    "pu_db",
    "tau",
    "kappa",
    "sum_rate_bpshz",
    "per_user_rate_json",
    "stderr_bpshz",
    "p_total_w",
    "ee_bits_per_joule",
    "seed",
    "n_realizations",
)

KIND_AXIS = {
    "rate-vs-pu": "pu_db",
    "rate-vs-b": "b",
    "rate-vs-M": "M",
    "rate-vs-K": "K_db",
    "power-scaling": "M",
    "ee-vs-b": "b",
    "ee-vs-M": "M",
    "tradeoff-ee-rate": "b",
    "tradeoff-power-rate": "b",
}
SWEEP_KINDS = tuple(KIND_AXIS)

METHODS = ("analytic", "mc", "limit")
_LIMIT_KINDS = ("rate-vs-K", "power-scaling")

# Scenario streams must not collide with per-realization MC streams, which
# spawn children (t,) of the same seed.
_SCENARIO_SPAWN = 101


@dataclass(frozen=True)
class CaseSpec:
    """One labeled receiver case; unset fields fall back to the sweep base.

    ``M0`` or ``kappa`` pins the ADC split (``kappa`` resolves to
    ``round(kappa * M)`` per axis point, for antenna-count sweeps).
    """

    label: str
    M: int | None = None
    M0: int | None = None
    kappa: float | None = None
    b: int | None = None
    K_db: float | None = None
    csi: str | None = None

    def __post_init__(self):
        if not self.label:
            raise ValueError("case label must be non-empty")
        if self.M0 is None and self.kappa is None:
            raise ValueError(f"case {self.label!r} must set M0 or kappa")
        if self.kappa is not None and not 0.0 <= self.kappa <= 1.0:
            raise ValueError("kappa must lie in [0, 1]")
        if self.csi is not None and self.csi not in ("perfect", "imperfect"):
            raise ValueError("case csi must be 'perfect' or 'imperfect'")

    def to_dict(self) -> dict:
        d = {"label": self.label}
        for key in ("M", "M0", "kappa", "b", "K_db", "csi"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CaseSpec":
        return cls(**d)


def _default_mc() -> McSettings:
    return McSettings(n_realizations=2000, seed=1, workers=1)


@dataclass(frozen=True)
class SweepSpec:
    """Fully pinned sweep: axis grid, cases, methods, and all constants."""

    kind: str
    axis_name: str
    axis_values: tuple
    cases: tuple
    methods: tuple = ("analytic",)
    csi: str = "perfect"
    M: int = 200
    N: int = 10
    b: int = 1
    K_db: float = 10.0
    pu_db: float = 10.0
    tau: int | None = None
    E_u_db: float = 10.0
    d_over_lambda: float = 0.5
    W_hz: float = 1e9
    b_high: int = 12
    normalized_beta: bool = False
    redraw_users_per_point: bool = False
    geometry: GeometryParams = field(default_factory=GeometryParams)
    power: PowerParams = field(default_factory=PowerParams)
    mc: McSettings = field(default_factory=_default_mc)

    def __post_init__(self):
        if self.kind not in KIND_AXIS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {SWEEP_KINDS}")
        if self.axis_name != KIND_AXIS[self.kind]:
            raise ValueError(f"sweep kind {self.kind!r} uses axis {KIND_AXIS[self.kind]!r}")
        values = tuple(self.axis_values)
        if len(values) == 0:
            raise ValueError("axis grid must be non-empty")
        if any(values[i + 1] <= values[i] for i in range(len(values) - 1)):
            raise ValueError("axis grid must be strictly increasing")
        if self.axis_name in ("b", "M"):
            if any(int(v) != v for v in values):
                raise ValueError(f"axis {self.axis_name!r} requires integer grid values")
            values = tuple(int(v) for v in values)
        else:
            values = tuple(float(v) for v in values)
        object.__setattr__(self, "axis_values", values)
        cases = tuple(self.cases)
        if not cases:
            raise ValueError("at least one case is required")
        object.__setattr__(self, "cases", cases)
        methods = tuple(self.methods)
        if not methods:
            raise ValueError("at least one method must be selected")
        for m in methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; expected subset of {METHODS}")
        if "limit" in methods and self.kind not in _LIMIT_KINDS:
            raise ValueError(f"method 'limit' is not defined for sweep kind {self.kind!r}")
        object.__setattr__(self, "methods", methods)
        if self.csi not in ("perfect", "imperfect"):
            raise ValueError("csi must be 'perfect' or 'imperfect'")

    @property
    def tau_effective(self) -> int:
        return self.N if self.tau is None else self.tau


_CASES_ADC_SPLIT_200 = (
    CaseSpec("M0=200,M1=0", M=200, M0=200),
    CaseSpec("M0=100,M1=100", M=200, M0=100),
    CaseSpec("M0=0,M1=200", M=200, M0=0),
)
_CASES_FOUR_RECEIVERS = _CASES_ADC_SPLIT_200 + (CaseSpec("M0=128,M1=0", M=128, M0=128),)
_CASES_KAPPA = (
    CaseSpec("kappa=0", kappa=0.0),
    CaseSpec("kappa=0.5", kappa=0.5),
    CaseSpec("kappa=1", kappa=1.0),
)
_RAYLEIGH_DB = float("-inf")

DEFAULT_RECIPES = {
    "rate-vs-pu": dict(
        axis_values=(-10.0, -5.0, 0.0, 5.0, 10.0),
        cases=_CASES_FOUR_RECEIVERS,
        methods=("analytic", "mc"),
        K_db=10.0,
        b=1,
    ),
    "rate-vs-b": dict(
        axis_values=tuple(range(1, 13)),
        cases=(
            CaseSpec("M0=100,M1=100,K=0", M0=100, K_db=_RAYLEIGH_DB),
            CaseSpec("M0=100,M1=100,K=10dB", M0=100, K_db=10.0),
            CaseSpec("M0=0,M1=200,K=0", M0=0, K_db=_RAYLEIGH_DB),
            CaseSpec("M0=0,M1=200,K=10dB", M0=0, K_db=10.0),
        ),
        methods=("analytic", "mc"),
        pu_db=10.0,
    ),
    "rate-vs-M": dict(
        axis_values=tuple(range(20, 201, 20)),
        cases=_CASES_KAPPA,
        methods=("analytic", "mc"),
        K_db=10.0,
        b=1,
        pu_db=10.0,
    ),
    "rate-vs-K": dict(
        axis_values=tuple(float(k) for k in range(-10, 41, 5)),
        cases=_CASES_ADC_SPLIT_200,
        methods=("analytic", "limit"),
        b=1,
        pu_db=10.0,
    ),
    "power-scaling": dict(
        axis_values=(50, 100, 200, 400, 800, 1600),
        cases=_CASES_KAPPA,
        methods=("analytic", "limit"),
        K_db=10.0,
        b=1,
        E_u_db=10.0,
    ),
    "ee-vs-b": dict(
        axis_values=tuple(range(1, 13)),
        cases=_CASES_KAPPA,
        methods=("analytic",),
        K_db=10.0,
        pu_db=-10.0,
    ),
    "ee-vs-M": dict(
        axis_values=tuple(range(20, 301, 20)),
        cases=_CASES_KAPPA,
        methods=("analytic",),
        K_db=10.0,
        b=1,
        pu_db=0.0,
    ),
    "tradeoff-ee-rate": dict(
        axis_values=tuple(range(1, 13)),
        cases=(
            CaseSpec("kappa=0.5,K=10dB", kappa=0.5, K_db=10.0),
            CaseSpec("kappa=0,K=10dB", kappa=0.0, K_db=10.0),
            CaseSpec("kappa=0.5,K=0", kappa=0.5, K_db=_RAYLEIGH_DB),
            CaseSpec("kappa=0,K=0", kappa=0.0, K_db=_RAYLEIGH_DB),
        ),
        methods=("analytic",),
        pu_db=10.0,
    ),
    "tradeoff-power-rate": dict(
        axis_values=tuple(range(1, 13)),
        cases=(
            CaseSpec("kappa=0.5", kappa=0.5),
            CaseSpec("kappa=0", kappa=0.0),
        ),
        methods=("analytic",),
        K_db=10.0,
        pu_db=10.0,
    ),
}

_MC_KEYS = ("realizations", "seed", "workers", "ci_level")
_GEOMETRY_KEYS = ("cell_radius_m", "min_distance_m", "pathloss_exponent", "shadowing_std_db")
_POWER_KEYS = (
    "p_lo_w",
    "p_lna_w",
    "p_h_w",
    "p_m_w",
    "p_agc_w",
    "p_bb_w",
    "fom_w_j_per_step",
    "f_s_hz",
)


def make_spec(kind: str, **overrides) -> SweepSpec:
    """Build a sweep from the kind's figure recipe plus explicit overrides.

    Accepts every :class:`SweepSpec` field plus the flat Monte Carlo keys
    ``realizations``, ``seed``, ``workers``, ``ci_level`` and the flat
    geometry/power keys; ``cases`` may be given as dicts.
    """
    if kind not in KIND_AXIS:
        raise ValueError(f"unknown sweep kind {kind!r}; expected one of {SWEEP_KINDS}")
    kwargs = dict(DEFAULT_RECIPES[kind])
    kwargs["kind"] = kind
    kwargs["axis_name"] = KIND_AXIS[kind]

    mc_kwargs = {}
    geometry_kwargs = {}
    power_kwargs = {}
    spec_fields = {f.name for f in fields(SweepSpec)}
    for key, value in overrides.items():
        if value is None:
            continue
        if key in _MC_KEYS:
            mc_kwargs["n_realizations" if key == "realizations" else key] = value
        elif key in _GEOMETRY_KEYS:
            geometry_kwargs[key] = value
        elif key in _POWER_KEYS:
            power_kwargs[key] = value
        elif key in spec_fields:
            kwargs[key] = value
        else:
            raise ValueError(f"unknown sweep option {key!r}")

    if "cases" in kwargs:
        kwargs["cases"] = tuple(
            c if isinstance(c, CaseSpec) else CaseSpec.from_dict(c) for c in kwargs["cases"]
        )
    base_mc = kwargs.get("mc", _default_mc())
    if mc_kwargs:
        kwargs["mc"] = replace(base_mc, **mc_kwargs)
    base_geometry = kwargs.get("geometry", GeometryParams())
    if geometry_kwargs:
        kwargs["geometry"] = replace(base_geometry, **geometry_kwargs)
    base_power = kwargs.get("power", PowerParams())
    if power_kwargs:
        kwargs["power"] = replace(base_power, **power_kwargs)
    if isinstance(kwargs.get("methods"), str):
        kwargs["methods"] = tuple(m.strip() for m in kwargs["methods"].split(",") if m.strip())
    return SweepSpec(**kwargs)


@dataclass
class SweepResult:
    spec: SweepSpec
    metadata: dict
    rows: list


def _scenario_for(spec: SweepSpec, point_index: int | None) -> UserScenario:
    if spec.redraw_users_per_point and point_index is not None:
        seed = np.random.SeedSequence(entropy=spec.mc.seed, spawn_key=(_SCENARIO_SPAWN, point_index))
    else:
        seed = spec.mc.seed
    return sample_user_scenario(
        spec.N, spec.geometry, K=1.0, rng_seed=seed, normalized_beta=spec.normalized_beta
    )


def _resolve_point(spec: SweepSpec, axis_value, case: CaseSpec):
    axis = spec.axis_name
    M = case.M if case.M is not None else (int(axis_value) if axis == "M" else spec.M)
    if case.M0 is not None:
        M0 = case.M0
    else:
        M0 = int(round(case.kappa * M))
    b = case.b if case.b is not None else (int(axis_value) if axis == "b" else spec.b)
    K_db = case.K_db if case.K_db is not None else (float(axis_value) if axis == "K_db" else spec.K_db)
    csi = case.csi if case.csi is not None else spec.csi
    if spec.kind == "power-scaling":
        p_u = db_to_linear(spec.E_u_db) / M
        pu_db = 10.0 * math.log10(p_u)
    else:
        pu_db = float(axis_value) if axis == "pu_db" else spec.pu_db
        p_u = db_to_linear(pu_db)
    config = SystemConfig(
        M=M,
        M0=M0,
        N=spec.N,
        b=b,
        p_u=p_u,
        tau=spec.tau_effective,
        d_over_lambda=spec.d_over_lambda,
        W_hz=spec.W_hz,
    )
    return config, K_db, pu_db, csi


def _limit_report(spec: SweepSpec, scenario: UserScenario, config: SystemConfig, aqnm, csi) -> RateReport:
    if spec.kind == "rate-vs-K":
        return rate_perfect_K_infinity(scenario, config, aqnm)
    E_u = db_to_linear(spec.E_u_db)
    kappa = config.kappa
    if csi == "perfect":
        rates = [rate_limit_power_scaled_perfect(E_u, bn, kappa, aqnm) for bn in scenario.beta]
        return RateReport.from_per_user(rates, "limit-power-scaling-perfect")
    rates = [
        rate_limit_imperfect_constant(E_u, bn, Kn, kappa, aqnm)
        for bn, Kn in zip(scenario.beta, scenario.K)
    ]
    return RateReport.from_per_user(rates, "limit-power-scaling-imperfect")


def _eval_point(spec: SweepSpec, scenario_base: UserScenario, point_index: int, axis_value, case: CaseSpec):
    config, K_db, pu_db, csi = _resolve_point(spec, axis_value, case)
    scenario = scenario_base if not spec.redraw_users_per_point else _scenario_for(spec, point_index)
    scenario = scenario.with_K(db_to_linear(K_db))
    aqnm = AqnmParams.from_bits(config.b)
    breakdown = total_power(config, spec.b_high, spec.power)
    rows = []
    for method in spec.methods:
        if method == "analytic":
            if csi == "perfect":
                report = rate_perfect_csi(scenario, config, aqnm)
            else:
                report = rate_imperfect_csi(scenario, config, aqnm)
            n_real = None
        elif method == "mc":
            report = mc_rate(scenario, config, aqnm, csi, replace(spec.mc, workers=1))
            n_real = spec.mc.n_realizations
        else:
            report = _limit_report(spec, scenario, config, aqnm, csi)
            n_real = None
        ee = energy_efficiency(report, config, breakdown)
        rows.append(
            {
                "sweep_kind": spec.kind,
                "axis_name": spec.axis_name,
                "axis_value": axis_value,
                "case_label": case.label,
                "method": report.method,
                "M": config.M,
                "M0": config.M0,
                "M1": config.M1,
                "N": config.N,
                "b": config.b,
                "K_db": K_db,
                "pu_db": pu_db,
                "tau": config.tau,
                "kappa": config.kappa,
                "sum_rate_bpshz": report.sum_rate,
                "per_user_rate_json": json.dumps(list(report.per_user_rate)),
                "stderr_bpshz": report.sum_rate_stderr,
                "p_total_w": breakdown.total_w,
                "ee_bits_per_joule": ee,
                "seed": spec.mc.seed,
                "n_realizations": n_real,
            }
        )
    return rows


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute a sweep; one output row per (axis value, case, method).

    Points are dispatched to a pool of ``spec.mc.workers`` threads; the row
    order and every number are independent of the worker count.
    """
    scenario_base = _scenario_for(spec, None)
    points = [
        (index, axis_value, case)
        for index, (axis_value, case) in enumerate(
            (a, c) for a in spec.axis_values for c in spec.cases
        )
    ]

    def work(point):
        index, axis_value, case = point
        return _eval_point(spec, scenario_base, index, axis_value, case)

    if spec.mc.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.mc.workers) as pool:
            blocks = list(pool.map(work, points))
    else:
        blocks = [work(p) for p in points]
    rows = [row for block in blocks for row in block]
    return SweepResult(spec=spec, metadata=spec_to_metadata(spec), rows=rows)


# --- metadata and serialization --------------------------------------------


def spec_to_metadata(spec: SweepSpec) -> dict:
    """Flat string metadata capturing the full sweep for exact replay."""
    meta = {
        "tool": "mixadc",
        "version": __version__,
        "kind": spec.kind,
        "axis_name": spec.axis_name,
        "axis_values": json.dumps(list(spec.axis_values)),
        "cases": json.dumps([c.to_dict() for c in spec.cases]),
        "methods": json.dumps(list(spec.methods)),
        "csi": spec.csi,
        "M": str(spec.M),
        "N": str(spec.N),
        "b": str(spec.b),
        "K_db": repr(spec.K_db),
        "pu_db": repr(spec.pu_db),
        "tau": "" if spec.tau is None else str(spec.tau),
        "E_u_db": repr(spec.E_u_db),
        "d_over_lambda": repr(spec.d_over_lambda),
        "W_hz": repr(spec.W_hz),
        "b_high": str(spec.b_high),
        "normalized_beta": str(spec.normalized_beta).lower(),
        "redraw_users_per_point": str(spec.redraw_users_per_point).lower(),
        "seed": str(spec.mc.seed),
        "n_realizations": str(spec.mc.n_realizations),
        "ci_level": repr(spec.mc.ci_level),
    }
    for key in _GEOMETRY_KEYS:
        meta[key] = repr(getattr(spec.geometry, key))
    for key in _POWER_KEYS:
        meta[key] = repr(getattr(spec.power, key))
    return meta


def spec_from_metadata(meta: dict) -> SweepSpec:
    """Rebuild the exact sweep spec from a metadata header."""
    return SweepSpec(
        kind=meta["kind"],
        axis_name=meta["axis_name"],
        axis_values=tuple(json.loads(meta["axis_values"])),
        cases=tuple(CaseSpec.from_dict(d) for d in json.loads(meta["cases"])),
        methods=tuple(json.loads(meta["methods"])),
        csi=meta["csi"],
        M=int(meta["M"]),
        N=int(meta["N"]),
        b=int(meta["b"]),
        K_db=float(meta["K_db"]),
        pu_db=float(meta["pu_db"]),
        tau=None if meta["tau"] == "" else int(meta["tau"]),
        E_u_db=float(meta["E_u_db"]),
        d_over_lambda=float(meta["d_over_lambda"]),
        W_hz=float(meta["W_hz"]),
        b_high=int(meta["b_high"]),
        normalized_beta=meta["normalized_beta"] == "true",
        redraw_users_per_point=meta["redraw_users_per_point"] == "true",
        geometry=GeometryParams(**{k: float(meta[k]) for k in _GEOMETRY_KEYS}),
        power=PowerParams(**{k: float(meta[k]) for k in _POWER_KEYS}),
        # Workers are an execution detail: they never influence the numbers,
        # so they are not part of the recorded metadata.
        mc=McSettings(
            n_realizations=int(meta["n_realizations"]),
            seed=int(meta["seed"]),
            workers=1,
            ci_level=float(meta["ci_level"]),
        ),
    )


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def result_to_csv(result: SweepResult) -> str:
    """Render metadata header lines ('# key=value') plus the fixed-schema CSV."""
    out = io.StringIO()
    for key in sorted(result.metadata):
        out.write(f"# {key}={result.metadata[key]}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        writer.writerow([_format_cell(row[col]) for col in CSV_COLUMNS])
    return out.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def result_to_json(result: SweepResult) -> str:
    rows = [{k: _json_safe(v) for k, v in row.items()} for row in result.rows]
    return json.dumps({"metadata": result.metadata, "rows": rows}, indent=2)


def parse_csv_metadata(text: str) -> dict:
    """Read the '# key=value' header block of an emitted CSV."""
    meta = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if "=" in body:
            key, value = body.split("=", 1)
            meta[key.strip()] = value
    return meta


# --- config file ------------------------------------------------------------

_CONFIG_SECTIONS = ("system", "geometry", "power", "mc", "sweep")


def _auto_type(text: str):
    text = text.strip()
    lowered = text.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_config_file(path: str) -> dict:
    """Parse an INI-style key-value config into nested per-section dicts."""
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as handle:
        parser.read_file(handle)
    out = {}
    for section in parser.sections():
        if section not in _CONFIG_SECTIONS:
            raise ValueError(f"unknown config section [{section}]; expected {_CONFIG_SECTIONS}")
        out[section] = {key: _auto_type(value) for key, value in parser.items(section)}
    return out


def spec_overrides_from_config(config: dict) -> dict:
    """Flatten a parsed config file into :func:`make_spec` overrides."""
    overrides = {}
    system = config.get("system", {})
    for key in ("M", "N", "b", "K_db", "pu_db", "tau", "d_over_lambda"):
        lowered = key.lower()
        if lowered in system:
            overrides[key] = system[lowered]
    if "bandwidth_hz" in system:
        overrides["W_hz"] = system["bandwidth_hz"]
    sweep = config.get("sweep", {})
    for key in ("methods", "csi", "normalized_beta", "redraw_users_per_point", "E_u_db", "b_high"):
        lowered = key.lower()
        if lowered in sweep:
            overrides[key] = sweep[lowered]
    for key in _GEOMETRY_KEYS:
        if key in config.get("geometry", {}):
            overrides[key] = config["geometry"][key]
    power = config.get("power", {})
    for mw_key in ("p_lo", "p_lna", "p_h", "p_m", "p_agc", "p_bb"):
        if f"{mw_key}_mw" in power:
            overrides[f"{mw_key}_w"] = power[f"{mw_key}_mw"] * 1e-3
    if "fom_w_fj" in power:
        overrides["fom_w_j_per_step"] = power["fom_w_fj"] * 1e-15
    if "f_s_hz" in power:
        overrides["f_s_hz"] = power["f_s_hz"]
    if "b_high" in power:
        overrides["b_high"] = power["b_high"]
    mc = config.get("mc", {})
    for key in _MC_KEYS:
        if key in mc:
            overrides[key] = mc[key]
    return overrides
