"""Scenario files (YAML).

Schema::

    name: free text                      # optional
    params:                              # required
      Dp, Dr, p, q, r, hp, hr, Sp, Sr    # numbers
      cw: 0                              # optional, waste cost per unit
      s_fixed: 0.7                       # optional; present => model 1
    decision:                            # optional, for evaluate/simulate
      Qp, Qr, m, n                       # integers
      s: 0.7                             # defaults to s_fixed
    solver:                              # optional, SolverConfig fields
      m_max, n_max, q_max, s_grid, tol, min_repair_time, jobs
    moo:                                 # optional
      method: PS | FVC
      K: 200
      utopia: [-70, -1000]               # PS only; default derived
      normalization: plain | boundary-scaled
      tol_eq: 1.0e-4
    sweep:                               # optional
      parameter: hp
      values: [5, 15]                    # default: 10 log-spaced 0.2x..3x
      model: 2
    expect:                              # optional reference values
      ...                                # free-form, read by the tests
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .model import DecisionVector, ParameterError, SystemParameters
from .sensitivity import SweepSpec, default_values
from .solver import SolverConfig

__all__ = ["ScenarioError", "MooSettings", "Scenario", "load_scenario", "parse_scenario"]

_PARAM_KEYS = {f.name for f in fields(SystemParameters)}
_SOLVER_KEYS = {f.name for f in fields(SolverConfig)}


class ScenarioError(ParameterError):
    pass


@dataclass(frozen=True)
class MooSettings:
    method: str = "PS"
    K: int = 200
    utopia: tuple | None = None
    normalization: str = "plain"
    tol_eq: float = 1e-4

    def __post_init__(self):
        if self.method.upper() not in ("PS", "FVC"):
            raise ScenarioError(f"moo.method must be PS or FVC, got {self.method!r}")
        object.__setattr__(self, "method", self.method.upper())
        if self.K < 1:
            raise ScenarioError("moo.K must be >= 1")
        if self.normalization not in ("plain", "boundary-scaled"):
            raise ScenarioError(f"moo.normalization must be plain or boundary-scaled")
        if self.utopia is not None:
            if len(self.utopia) != 2:
                raise ScenarioError("moo.utopia needs two values")
            object.__setattr__(self, "utopia", tuple(float(v) for v in self.utopia))


@dataclass
class Scenario:
    params: SystemParameters
    solver: SolverConfig = field(default_factory=SolverConfig)
    moo: MooSettings = field(default_factory=MooSettings)
    sweep: SweepSpec | None = None
    decision: DecisionVector | None = None
    name: str = ""
    expect: dict = field(default_factory=dict)

    @property
    def model(self) -> int:
        return 1 if self.params.s_fixed is not None else 2


def _section(doc, key):
    val = doc.get(key) or {}
    if not isinstance(val, dict):
        raise ScenarioError(f"{key} must be a mapping")
    return val


def _unknown(section, got, allowed):
    extra = set(got) - set(allowed)
    if extra:
        raise ScenarioError(f"unknown {section} keys: {sorted(extra)}")


def parse_scenario(doc: dict) -> Scenario:
    if not isinstance(doc, dict) or "params" not in doc:
        raise ScenarioError("scenario needs a params mapping")
    raw = _section(doc, "params")
    _unknown("params", raw, _PARAM_KEYS)
    try:
        params = SystemParameters(**raw)
    except TypeError as exc:
        raise ScenarioError(f"params: {exc}") from None

    sraw = _section(doc, "solver")
    _unknown("solver", sraw, _SOLVER_KEYS)
    solver = SolverConfig(**sraw)

    mraw = _section(doc, "moo")
    _unknown("moo", mraw, {f.name for f in fields(MooSettings)})
    moo = MooSettings(**mraw)

    decision = None
    draw = _section(doc, "decision")
    if draw:
        _unknown("decision", draw, {"Qp", "Qr", "m", "n", "s"})
        s = draw.get("s", params.s_fixed)
        if s is None:
            raise ScenarioError("decision.s is required when params.s_fixed is absent")
        decision = DecisionVector(draw["Qp"], draw["Qr"], draw["m"], draw["n"], s)

    sweep = None
    wraw = _section(doc, "sweep")
    if wraw:
        _unknown("sweep", wraw, {"parameter", "values", "model"})
        name = wraw.get("parameter")
        if name is None:
            raise ScenarioError("sweep.parameter is required")
        if name not in _PARAM_KEYS:
            raise ScenarioError(f"sweep.parameter {name!r} is not a parameter")
        values = wraw.get("values") or default_values(getattr(params, name))
        model = wraw.get("model", 1 if params.s_fixed is not None else 2)
        sweep = SweepSpec(name, tuple(values), params, model)

    return Scenario(
        params=params, solver=solver, moo=moo, sweep=sweep, decision=decision,
        name=str(doc.get("name", "")), expect=dict(doc.get("expect") or {}),
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{path}: not valid YAML ({exc})") from None
    return parse_scenario(doc)
