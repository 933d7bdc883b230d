"""Batch front-end: scenario files in, CSV and JSON reports out.

Scenario files are strict-key JSON (unknown keys are rejected by name) so a
typo can never silently fall back to a default. Trajectories leave as CSV
and summaries as JSON, both with shortest round-trip float formatting, so
two runs of the same scenario are byte-identical and regression fixtures
can be diffed directly. Plotting is deliberately out of scope: the contract
of this tool is data.

Exit codes: 0 success, 2 parse/validation, 3 numerical degeneracy or
integration failure, 4 I/O. Every failure prints the stable error category
token as the first stderr line before any human-readable detail.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from argparse import ArgumentParser
from dataclasses import dataclass

import numpy as np

from .analysis import asymptotic_bias, compare, validity_horizon
from .closed_form import (
    ModelKind,
    TimeGrid,
    Trajectory,
    evaluate_closed_trajectory,
    _check_model_params,
)
from .errors import (
    BetaZero,
    EpikinError,
    LambdaZero,
    NonFinite,
    ParseError,
    StepSizeInsufficient,
    UnknownField,
    ValidationError,
)
from .models import (
    SirParameters,
    SisParameters,
    sir_composites,
    sis_composites,
)
from .reference import IntegratorConfig, integrate

__all__ = [
    "SweepSpec",
    "ScenarioConfig",
    "parse_scenario",
    "serialize_scenario",
    "cmd_simulate",
    "cmd_compare",
    "cmd_horizon",
    "cmd_sweep",
    "main",
    "main_entry",
]

_NUMERICAL_ERRORS = (BetaZero, LambdaZero, NonFinite, StepSizeInsufficient)

_SIS_FIELDS = ("r", "alpha", "k", "i0")
_SIR_FIELDS = ("beta", "mu", "s0", "i0")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter sweep: field swept from lo to hi.

    ``scale`` is "linear" or "log"; log spacing needs positive endpoints.
    Serialized with JSON keys field/from/to/steps/scale.
    """

    field: str
    lo: float
    hi: float
    steps: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if not (isinstance(self.steps, int) and self.steps >= 2):
            raise ValidationError(f"sweep steps must be an integer >= 2, got {self.steps!r}")
        if self.scale not in ("linear", "log"):
            raise ValidationError(f"sweep scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not (self.lo > 0 and self.hi > 0):
            raise ValidationError(
                f"log sweep needs positive endpoints, got from={self.lo!r}, to={self.hi!r}"
            )

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.steps)
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one command run needs, parsed and validated."""

    model: ModelKind
    parameters: SisParameters | SirParameters
    grid: TimeGrid
    integrator: IntegratorConfig = IntegratorConfig()
    eps: float = 1e-3
    sweep: SweepSpec | None = None

    def __post_init__(self) -> None:
        _check_model_params(self.model, self.parameters)
        if not (isinstance(self.eps, float) and self.eps > 0):
            raise ValidationError(f"eps must be a positive number, got {self.eps!r}")


def _as_float(obj: object, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ValidationError(f"{where} must be a number, got {obj!r}")
    return float(obj)


def _as_int(obj: object, where: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ValidationError(f"{where} must be an integer, got {obj!r}")
    return obj


def _as_bool(obj: object, where: str) -> bool:
    if not isinstance(obj, bool):
        raise ValidationError(f"{where} must be true or false, got {obj!r}")
    return obj


def _as_str(obj: object, where: str) -> str:
    if not isinstance(obj, str):
        raise ValidationError(f"{where} must be a string, got {obj!r}")
    return obj


def _as_object(obj: object, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be a JSON object, got {type(obj).__name__}")
    return obj


def _reject_unknown(block: dict, allowed: tuple[str, ...], where: str) -> None:
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown keys in {where}: {', '.join(unknown)}")


def _require_keys(block: dict, required: tuple[str, ...], where: str) -> None:
    missing = sorted(set(required) - set(block))
    if missing:
        raise ValidationError(f"missing keys in {where}: {', '.join(missing)}")


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse and validate a UTF-8 JSON scenario document.

    The document must carry exactly one parameter block, named after the
    model tag ("sis" or "sir"). Unknown keys anywhere are errors listing
    the offending names; malformed JSON reports the position.

    Raises:
        ParseError: the text is not valid JSON.
        ValidationError: a key is unknown or missing, or a value violates a
            model invariant (the message names the field).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            f"malformed JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from None
    doc = _as_object(doc, "scenario")
    _require_keys(doc, ("model", "grid"), "scenario")
    tag = _as_str(doc["model"], "model")
    if tag not in ("sis", "sir"):
        raise ValidationError(f"model must be 'sis' or 'sir', got {tag!r}")
    model = ModelKind(tag)
    _reject_unknown(doc, ("model", tag, "grid", "integrator", "eps", "sweep"), "scenario")
    _require_keys(doc, (tag,), "scenario")

    pblock = _as_object(doc[tag], tag)
    names = _SIS_FIELDS if model is ModelKind.SIS else _SIR_FIELDS
    _reject_unknown(pblock, names, tag)
    _require_keys(pblock, names, tag)
    kwargs = {name: _as_float(pblock[name], f"{tag}.{name}") for name in names}
    parameters = (SisParameters if model is ModelKind.SIS else SirParameters)(**kwargs)

    gblock = _as_object(doc["grid"], "grid")
    _reject_unknown(gblock, ("t_start", "t_end", "n_points"), "grid")
    _require_keys(gblock, ("t_start", "t_end", "n_points"), "grid")
    grid = TimeGrid(
        t_start=_as_float(gblock["t_start"], "grid.t_start"),
        t_end=_as_float(gblock["t_end"], "grid.t_end"),
        n_points=_as_int(gblock["n_points"], "grid.n_points"),
    )

    integrator = IntegratorConfig()
    if "integrator" in doc:
        iblock = _as_object(doc["integrator"], "integrator")
        _reject_unknown(iblock, ("dt", "halving_check", "tolerance"), "integrator")
        ikwargs: dict[str, object] = {}
        if "dt" in iblock:
            ikwargs["dt"] = _as_float(iblock["dt"], "integrator.dt")
        if "halving_check" in iblock:
            ikwargs["halving_check"] = _as_bool(
                iblock["halving_check"], "integrator.halving_check"
            )
        if "tolerance" in iblock:
            ikwargs["tolerance"] = _as_float(iblock["tolerance"], "integrator.tolerance")
        integrator = IntegratorConfig(**ikwargs)

    eps = _as_float(doc["eps"], "eps") if "eps" in doc else 1e-3

    sweep = None
    if "sweep" in doc:
        sblock = _as_object(doc["sweep"], "sweep")
        _reject_unknown(sblock, ("field", "from", "to", "steps", "scale"), "sweep")
        _require_keys(sblock, ("field", "from", "to", "steps"), "sweep")
        sweep = SweepSpec(
            field=_as_str(sblock["field"], "sweep.field"),
            lo=_as_float(sblock["from"], "sweep.from"),
            hi=_as_float(sblock["to"], "sweep.to"),
            steps=_as_int(sblock["steps"], "sweep.steps"),
            scale=_as_str(sblock.get("scale", "linear"), "sweep.scale"),
        )

    return ScenarioConfig(
        model=model,
        parameters=parameters,
        grid=grid,
        integrator=integrator,
        eps=eps,
        sweep=sweep,
    )


def serialize_scenario(cfg: ScenarioConfig) -> str:
    """Render a config back to canonical scenario JSON.

    parse_scenario(serialize_scenario(cfg)) == cfg for every valid config;
    floats use Python's shortest round-trip representation.
    """
    tag = cfg.model.value
    names = _SIS_FIELDS if cfg.model is ModelKind.SIS else _SIR_FIELDS
    doc: dict[str, object] = {
        "model": tag,
        tag: {name: getattr(cfg.parameters, name) for name in names},
        "grid": {
            "t_start": cfg.grid.t_start,
            "t_end": cfg.grid.t_end,
            "n_points": cfg.grid.n_points,
        },
        "integrator": {
            "dt": cfg.integrator.dt,
            "halving_check": cfg.integrator.halving_check,
            "tolerance": cfg.integrator.tolerance,
        },
        "eps": cfg.eps,
    }
    if cfg.sweep is not None:
        doc["sweep"] = {
            "field": cfg.sweep.field,
            "from": cfg.sweep.lo,
            "to": cfg.sweep.hi,
            "steps": cfg.sweep.steps,
            "scale": cfg.sweep.scale,
        }
    return json.dumps(doc, indent=2) + "\n"


def _derive_composites(cfg: ScenarioConfig):
    # Derived constants are part of every command's provenance, and deriving
    # them up front makes degenerate parameters fail fast with exit code 3
    # instead of surfacing halfway through an output file.
    if cfg.model is ModelKind.SIS:
        return sis_composites(cfg.parameters)
    return sir_composites(cfg.parameters)


def _composites_dict(cfg: ScenarioConfig) -> dict:
    comps = _derive_composites(cfg)
    if cfg.model is ModelKind.SIS:
        return {
            "beta_sis": comps.beta_sis,
            "c_sis": comps.c_sis,
            "r0": comps.r0,
            "i_star": comps.i_star,
        }
    return {
        "c": comps.c,
        "lambda": comps.lam,
        "d_raw": comps.d_raw,
        "d_cancelled": comps.d_cancelled,
        "i_inf_closed": comps.i_inf_closed,
        "i_star_true": comps.i_star_true,
        "s_star_true": comps.s_star_true,
        "overflow_risk": comps.overflow_risk,
    }


def _parameters_dict(cfg: ScenarioConfig) -> dict:
    names = _SIS_FIELDS if cfg.model is ModelKind.SIS else _SIR_FIELDS
    return {name: getattr(cfg.parameters, name) for name in names}


def _grid_dict(grid: TimeGrid) -> dict:
    return {"t_start": grid.t_start, "t_end": grid.t_end, "n_points": grid.n_points}


def _integrator_dict(cfg: IntegratorConfig) -> dict:
    return {"dt": cfg.dt, "halving_check": cfg.halving_check, "tolerance": cfg.tolerance}


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_bool(flag: bool) -> str:
    return "true" if flag else "false"


def _csv(header: str, rows: list[str]) -> str:
    return "\n".join([header] + rows) + "\n"


def cmd_simulate(cfg: ScenarioConfig, mode: str = "both") -> str:
    """Trajectory CSV for one scenario.

    Column sets by mode:
        closed:    t,s_closed,i_closed,nonphysical
        reference: t,s_ref,i_ref,nonphysical
        both:      t,s_closed,i_closed,s_ref,i_ref,abs_err_s,abs_err_i,nonphysical

    The nonphysical column is "true" when any trajectory in the row has
    left the physical region at that point.
    """
    if mode not in ("closed", "reference", "both"):
        raise ValidationError(f"mode must be closed, reference or both, got {mode!r}")
    _derive_composites(cfg)
    t = cfg.grid.points()
    closed: Trajectory | None = None
    ref: Trajectory | None = None
    if mode in ("closed", "both"):
        closed = evaluate_closed_trajectory(cfg.model, cfg.parameters, cfg.grid)
    if mode in ("reference", "both"):
        ref = integrate(cfg.model, cfg.parameters, cfg.grid, cfg.integrator)
    rows = []
    if mode == "closed":
        for j in range(len(t)):
            rows.append(
                f"{_fmt(t[j])},{_fmt(closed.s[j])},{_fmt(closed.i[j])},"
                f"{_fmt_bool(bool(closed.nonphysical[j]))}"
            )
        return _csv("t,s_closed,i_closed,nonphysical", rows)
    if mode == "reference":
        for j in range(len(t)):
            rows.append(
                f"{_fmt(t[j])},{_fmt(ref.s[j])},{_fmt(ref.i[j])},"
                f"{_fmt_bool(bool(ref.nonphysical[j]))}"
            )
        return _csv("t,s_ref,i_ref,nonphysical", rows)
    for j in range(len(t)):
        flagged = bool(closed.nonphysical[j]) or bool(ref.nonphysical[j])
        rows.append(
            f"{_fmt(t[j])},{_fmt(closed.s[j])},{_fmt(closed.i[j])},"
            f"{_fmt(ref.s[j])},{_fmt(ref.i[j])},"
            f"{_fmt(abs(closed.s[j] - ref.s[j]))},{_fmt(abs(closed.i[j] - ref.i[j]))},"
            f"{_fmt_bool(flagged)}"
        )
    return _csv(
        "t,s_closed,i_closed,s_ref,i_ref,abs_err_s,abs_err_i,nonphysical", rows
    )


def cmd_compare(cfg: ScenarioConfig) -> str:
    """JSON discrepancy report, closed form against the reference run."""
    composites = _composites_dict(cfg)
    closed = evaluate_closed_trajectory(cfg.model, cfg.parameters, cfg.grid)
    ref = integrate(cfg.model, cfg.parameters, cfg.grid, cfg.integrator)
    rep = compare(closed, ref, cfg.eps)
    doc = {
        "max_abs_s": rep.max_abs_s,
        "max_abs_i": rep.max_abs_i,
        "max_rel_i": rep.max_rel_i,
        "l2_i": rep.l2_i,
        "argmax_t": rep.argmax_t,
        "horizon": rep.horizon,
        "composites": composites,
        "parameters": _parameters_dict(cfg),
        "model": cfg.model.value,
        "grid": _grid_dict(cfg.grid),
        "integrator": _integrator_dict(cfg.integrator),
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_horizon(cfg: ScenarioConfig) -> str:
    """JSON report of the bisection-refined validity horizon on the grid span."""
    _derive_composites(cfg)
    horizon = validity_horizon(cfg.parameters, cfg.eps, cfg.grid.t_end, cfg.integrator)
    doc = {
        "model": cfg.model.value,
        "parameters": _parameters_dict(cfg),
        "eps": cfg.eps,
        "t_max": cfg.grid.t_end,
        "horizon": horizon,
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_sweep(cfg: ScenarioConfig) -> str:
    """Sweep CSV: value,max_abs_i,horizon,bias, one row per sweep value.

    ``horizon`` is the grid-level threshold crossing from the comparison
    (empty when never exceeded) and ``bias`` the exact long-time error C
    (SIR only, empty when its preconditions fail). Rows appear in sweep
    order regardless of how the evaluations are scheduled.
    """
    if cfg.sweep is None:
        raise ValidationError("sweep command needs a 'sweep' section in the scenario")
    spec = cfg.sweep
    names = _SIS_FIELDS if cfg.model is ModelKind.SIS else _SIR_FIELDS
    if spec.field not in names:
        raise UnknownField(
            f"cannot sweep {spec.field!r}; {cfg.model.value} fields are {', '.join(names)}"
        )
    rows = []
    for value in spec.values():
        value = float(value)
        params = dataclasses.replace(cfg.parameters, **{spec.field: value})
        closed = evaluate_closed_trajectory(cfg.model, params, cfg.grid)
        ref = integrate(cfg.model, params, cfg.grid, cfg.integrator)
        rep = compare(closed, ref, cfg.eps)
        horizon = "" if rep.horizon is None else _fmt(rep.horizon)
        bias = ""
        if cfg.model is ModelKind.SIR:
            try:
                bias = _fmt(asymptotic_bias(params))
            except ValidationError:
                bias = ""
        rows.append(f"{_fmt(value)},{_fmt(rep.max_abs_i)},{horizon},{bias}")
    return _csv("value,max_abs_i,horizon,bias", rows)


def _build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="epikin",
        description="Closed-form SIS/SIR trajectories, reference integration, "
        "and error analysis over JSON scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="scenario JSON path")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        return p

    p_sim = add("simulate", "write a trajectory CSV")
    p_sim.add_argument(
        "--mode",
        choices=("closed", "reference", "both"),
        default="both",
        help="which trajectories to evaluate (default: both)",
    )
    p_cmp = add("compare", "write a JSON discrepancy report")
    p_hor = add("horizon", "write the refined validity horizon as JSON")
    p_swp = add("sweep", "write a parameter sweep CSV")
    for p in (p_cmp, p_hor, p_swp):
        p.add_argument(
            "--eps",
            type=float,
            default=None,
            help="override the scenario's horizon threshold",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_scenario(fh.read())
        if getattr(args, "eps", None) is not None:
            cfg = dataclasses.replace(cfg, eps=args.eps)
        if args.command == "simulate":
            output = cmd_simulate(cfg, args.mode)
        elif args.command == "compare":
            output = cmd_compare(cfg)
        elif args.command == "horizon":
            output = cmd_horizon(cfg)
        else:
            output = cmd_sweep(cfg)
        if args.out is None:
            sys.stdout.write(output)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(output)
    except EpikinError as err:
        print(err.category, file=sys.stderr)
        print(str(err), file=sys.stderr)
        return 3 if isinstance(err, _NUMERICAL_ERRORS) else 2
    except OSError as err:
        print("IOError", file=sys.stderr)
        print(str(err), file=sys.stderr)
        return 4
    return 0


def main_entry() -> None:
    sys.exit(main())
