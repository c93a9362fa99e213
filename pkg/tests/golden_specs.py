"""Tiny sweep definitions shared by the golden-file test and regenerator.

Desk-scale smoke configurations: M <= 16, at most 40 Monte Carlo
realizations, two users, fixed seed.
"""
from mixadc.experiments import SweepSpec, make_spec

_COMMON = dict(M=16, N=2, seed=123, realizations=40, normalized_beta=True)
_SPLIT_CASES = [{"label": "M0=8,M1=8", "M0": 8}, {"label": "M0=0,M1=16", "M0": 0}]
_KAPPA_CASES = [{"label": "kappa=0", "kappa": 0.0}, {"label": "kappa=0.5", "kappa": 0.5}]

_TINY = {
    "rate-vs-pu": dict(axis_values=(-5.0, 5.0), cases=_SPLIT_CASES),
    "rate-vs-b": dict(
        axis_values=(1, 2, 3),
        cases=[
            {"label": "M0=8,M1=8,K=10dB", "M0": 8, "K_db": 10.0},
            {"label": "M0=0,M1=16,K=0", "M0": 0, "K_db": float("-inf")},
        ],
    ),
    "rate-vs-M": dict(axis_values=(8, 16), cases=_KAPPA_CASES),
    "rate-vs-K": dict(axis_values=(0.0, 10.0), cases=_SPLIT_CASES, methods=("analytic", "limit")),
    "power-scaling": dict(axis_values=(8, 16), cases=_KAPPA_CASES, methods=("analytic", "limit")),
    "ee-vs-b": dict(axis_values=(1, 2, 3), cases=_KAPPA_CASES),
    "ee-vs-M": dict(axis_values=(8, 16), cases=_KAPPA_CASES),
    "tradeoff-ee-rate": dict(axis_values=(1, 2, 3), cases=_KAPPA_CASES),
    "tradeoff-power-rate": dict(axis_values=(1, 2, 3), cases=_KAPPA_CASES),
}


def tiny_sweep_spec(kind: str) -> SweepSpec:
    overrides = dict(_COMMON)
    overrides.update(_TINY[kind])
    if kind in ("rate-vs-pu", "rate-vs-b", "rate-vs-M"):
        overrides["methods"] = ("analytic", "mc")
    return make_spec(kind, **overrides)
