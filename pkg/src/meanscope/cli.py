"""Command-line front end.

Subcommands: ``classify``, ``scan``, ``hansen``, ``fuzz``, ``reproduce``.
Exit codes: 0 when every requested property holds, 1 when something is
violated (or a witness is found), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import reproduce
from .classify import PROPERTIES, GridSpec, ToleranceConfig, classify, region_scan
from .hansen import (HansenDensity, HansenMean, gcv_integrand, hansen_eval, pmi_integrand,
                     theorem_counterexample)
from .matmean import ando_hiai_search
from .means_core import (UAB, Binomial, GeodesicMeasure, Geodesic, MeanFunction, ParameterError,
                         Power, Section5Example, Stolarsky, adjoint)

FAMILIES = ("power", "binomial", "uab", "stolarsky", "section5", "arithmetic", "harmonic",
            "geodesic", "hansen", "theorem")
SEED_ENV = "MEANSCOPE_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    grid: GridSpec = field(default_factory=GridSpec)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    seed: int = 0
    format: str = "json"
    output: str | None = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "grid": self.grid.to_dict(),
            "tolerances": self.tolerances.to_dict(),
            "seed": self.seed,
            "format": self.format,
            "output": self.output,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(
            command=d["command"],
            params=dict(d.get("params", {})),
            grid=GridSpec.from_dict(d["grid"]) if "grid" in d else GridSpec(),
            tolerances=(ToleranceConfig.from_dict(d["tolerances"]) if "tolerances" in d
                        else ToleranceConfig()),
            seed=int(d.get("seed", 0)),
            format=d.get("format", "json"),
            output=d.get("output"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# family construction from flags


def _parse_atoms(text):
    atoms = []
    for item in text.split(","):
        w, _, e = item.partition(":")
        atoms.append((float(w), float(e)))
    return tuple(atoms)


def _read_density(path):
    if path == "theorem":
        return theorem_counterexample()
    try:
        return HansenDensity.from_json(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read density file: {exc}") from exc
    except ParameterError as exc:
        raise UsageError(f"bad density file: {exc}") from exc


def _need(params, key, family):
    if params.get(key) is None:
        raise UsageError(f"family {family!r} needs --{key.replace('_', '-')}")
    return params[key]


def function_from_params(params: dict) -> MeanFunction:
    """Build a representation function from flat ``--family`` style params."""
    family = params.get("family")
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    try:
        if family == "power":
            f = Power(_need(params, "alpha", family))
        elif family == "binomial":
            f = Binomial(_need(params, "bp", family))
        elif family == "uab":
            f = UAB(_need(params, "a", family), _need(params, "b", family))
        elif family == "stolarsky":
            f = Stolarsky(_need(params, "alpha", family))
        elif family == "section5":
            f = Section5Example()
        elif family == "arithmetic":
            f = Binomial(1.0)
        elif family == "harmonic":
            f = Binomial(-1.0)
        elif family == "geodesic":
            f = Geodesic(GeodesicMeasure(_parse_atoms(_need(params, "atoms", family))))
        elif family == "hansen":
            f = HansenMean(_read_density(_need(params, "density", family)))
        else:
            f = HansenMean(theorem_counterexample())
    except (ParameterError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return adjoint(f) if params.get("adjoint") else f


def _param(cfg, key, default):
    value = cfg.params.get(key)
    return default if value is None else value


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# parser

_FUNC_KEYS = ("family", "alpha", "bp", "a", "b", "atoms", "density", "adjoint")
_GRID_KEYS = {"t_min": "t_min", "t_max": "t_max", "n_points": "n_points"}
_TOL_KEYS = {"slack": "criterion_slack", "rel_eval": "rel_eval", "fd_step": "fd_step",
             "derivative_tol": "derivative_tol"}


def _add_function_args(p):
    g = p.add_argument_group("function")
    g.add_argument("--family", help=f"one of: {', '.join(FAMILIES)}")
    g.add_argument("--alpha", type=float, help="exponent for power / stolarsky")
    g.add_argument("--bp", type=float, help="parameter p of the binomial mean b_p")
    g.add_argument("--a", type=float, help="u_{a,b} parameter a")
    g.add_argument("--b", type=float, help="u_{a,b} parameter b")
    g.add_argument("--atoms", help="geodesic atoms as weight:exponent,...")
    g.add_argument("--density", help="Hansen density JSON file (or 'theorem')")
    g.add_argument("--adjoint", action="store_true", default=None,
                   help="use the adjoint 1/f(1/t) instead")


def _add_common_args(p):
    p.add_argument("--config", help="JSON RunConfig file; explicit flags override it")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv", "table"))
    p.add_argument("--seed", type=int, help=f"random seed (fallback: ${SEED_ENV}, then 0)")
    g = p.add_argument_group("grid / tolerances")
    g.add_argument("--t-min", type=float)
    g.add_argument("--t-max", type=float)
    g.add_argument("--n-points", type=int)
    g.add_argument("--r-values", type=_floats, help="comma separated exponents >= 1")
    g.add_argument("--slack", type=float, help="criterion slack")
    g.add_argument("--rel-eval", type=float)
    g.add_argument("--fd-step", type=float)
    g.add_argument("--derivative-tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanscope",
        description="Classify and test operator means numerically.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="grid membership tests for one function")
    _add_function_args(p)
    _add_common_args(p)
    p.add_argument("--props",
                   help=f"comma separated subset of {','.join(PROPERTIES)} (default gcv,pmi)")
    p.add_argument("--r", type=float, help="exponent for pmi_r (default 2)")

    p = sub.add_parser("scan", help="region scan of a parametric family")
    _add_common_args(p)
    p.add_argument("--family", choices=("uab", "stolarsky", "binomial"))
    p.add_argument("--property", choices=("gcv", "gcc", "pmi", "pmd"), help="default gcv")
    p.add_argument("--step", type=float, help="parameter grid step (default 0.25)")

    p = sub.add_parser("hansen", help="evaluate a Hansen density or its criteria")
    _add_common_args(p)
    p.add_argument("--density", help="density JSON file (or 'theorem')")
    p.add_argument("--t", type=_floats, help="comma separated t values (default: grid)")
    p.add_argument("--criterion", choices=("eval", "pmi", "gcv"), help="default eval")
    p.add_argument("--r", type=_floats, default=None, help="exponents for the pmi criterion")
    p.add_argument("--method", choices=("closed_form", "quadrature"), help="default closed_form")

    p = sub.add_parser("fuzz", help="random search for Ando-Hiai counterexamples")
    _add_function_args(p)
    _add_common_args(p)
    p.add_argument("--p", type=float, help="power p > 1 (default 2)")
    p.add_argument("--trials", type=int, help="random trials (default 10000)")
    p.add_argument("--dim", type=int, help="matrix dimension (default 3)")

    p = sub.add_parser("reproduce", help="rerun a named separation result")
    _add_common_args(p)
    p.add_argument("name", help=", ".join(reproduce.EXPERIMENTS))
    return parser


def _resolve_config(args) -> RunConfig:
    if args.config:
        try:
            cfg = RunConfig.from_json(Path(args.config).read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad config file: {exc}") from exc
        cfg.command = args.command
    else:
        cfg = RunConfig(command=args.command)
    ns = vars(args)
    for key in ns:
        if key in ("command", "config", "out", "format", "seed") or key in _GRID_KEYS \
                or key in _TOL_KEYS or key == "r_values":
            continue
        if ns[key] is not None:
            cfg.params[key] = ns[key]
    grid = cfg.grid.to_dict()
    for key, name in _GRID_KEYS.items():
        if ns.get(key) is not None:
            grid[name] = ns[key]
    if ns.get("r_values") is not None:
        grid["r_values"] = ns["r_values"]
    tol = cfg.tolerances.to_dict()
    for key, name in _TOL_KEYS.items():
        if ns.get(key) is not None:
            tol[name] = ns[key]
    try:
        cfg.grid = GridSpec.from_dict(grid)
        cfg.tolerances = ToleranceConfig.from_dict(tol)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    if args.seed is not None:
        cfg.seed = args.seed
    elif not args.config and os.environ.get(SEED_ENV):
        try:
            cfg.seed = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise UsageError(f"${SEED_ENV} must be an integer") from exc
    if args.format:
        cfg.format = args.format
    elif not args.config and args.command in ("scan", "hansen"):
        cfg.format = "csv"
    if args.out:
        cfg.output = args.out
    return cfg


# ---------------------------------------------------------------------------
# commands


def _cmd_classify(cfg: RunConfig):
    f = function_from_params(cfg.params)
    props = [p.strip() for p in str(_param(cfg, "props", "gcv,pmi")).split(",")
             if p.strip()]
    unknown = [p for p in props if p.lower() not in PROPERTIES]
    if unknown:
        raise UsageError(f"unknown properties {unknown}; choose from {', '.join(PROPERTIES)}")
    reports = classify(f, props, cfg.grid, cfg.tolerances, r=_param(cfg, "r", 2.0))
    ok = all(rep.holds for rep in reports)
    if cfg.format == "csv":
        lines = ["property,verdict,witness_t,witness_r,witness_value"]
        for rep in reports:
            w = rep.witness
            cells = ["", "", ""] if w is None or rep.holds else \
                ["" if w.t is None else repr(w.t), "" if w.r is None else repr(w.r), repr(w.value)]
            lines.append(",".join([rep.property, rep.verdict] + cells))
        text = "\n".join(lines) + "\n"
    elif cfg.format == "table":
        text = "".join(f"{rep.property:<10} {rep.verdict}"
                       + ("" if rep.holds else f"  witness={rep.witness}") + "\n"
                       for rep in reports)
    else:
        text = json.dumps({"config": cfg.to_dict(), "function": f.describe(),
                           "all_hold": ok, "reports": [r.to_dict() for r in reports]},
                          indent=2) + "\n"
    return text, 0 if ok else 1


def _cmd_scan(cfg: RunConfig):
    family = cfg.params.get("family")
    if family not in ("uab", "stolarsky", "binomial"):
        raise UsageError("scan needs --family uab, stolarsky or binomial")
    step = float(_param(cfg, "step", 0.25))
    if step <= 0:
        raise UsageError("--step must be positive")
    if family == "uab":
        vals = np.round(np.arange(-2.0, 2.0 + step / 2, step), 12)
        pts = [(a, b) for a in vals for b in vals]
    elif family == "stolarsky":
        pts = np.round(np.arange(-2.0, 2.0 + step / 2, step), 12)
    else:
        pts = np.round(np.arange(-1.0, 1.0 + step / 2, step), 12)
    scan = region_scan(family, pts, _param(cfg, "property", "gcv"), cfg.grid,
                       cfg.tolerances)
    if cfg.format == "json":
        text = json.dumps({"config": cfg.to_dict(), "scan": scan.to_dict(),
                           "rows": scan.to_csv().splitlines()}, indent=2) + "\n"
    else:
        text = scan.to_csv()
    return text, 0 if not scan.mismatches else 1


def _cmd_hansen(cfg: RunConfig):
    if not cfg.params.get("density"):
        raise UsageError("hansen needs --density")
    h = _read_density(cfg.params["density"])
    ts = cfg.params.get("t") or list(cfg.grid.ts())
    crit = _param(cfg, "criterion", "eval")
    method = _param(cfg, "method", "closed_form")
    rows = []
    try:
        if crit == "pmi":
            for r in cfg.params.get("r") or [2.0]:
                vals = np.atleast_1d(pmi_integrand(h, ts, r, method))
                rows += [(t, r, float(v)) for t, v in zip(ts, vals)]
        else:
            fn = hansen_eval if crit == "eval" else gcv_integrand
            vals = np.atleast_1d(fn(h, ts, method))
            rows = [(t, None, float(v)) for t, v in zip(ts, vals)]
    except (ValueError, OverflowError) as exc:
        raise UsageError(str(exc)) from exc
    if cfg.format == "json":
        text = json.dumps({"config": cfg.to_dict(), "density": h.to_records(),
                           "criterion": crit,
                           "rows": [{"t": t, "r": r, "value": v, "method": method}
                                    for t, r, v in rows]}, indent=2) + "\n"
    else:
        lines = ["t,r,value,method"]
        lines += [f"{float(t)!r},{'' if r is None else repr(float(r))},{v!r},{method}"
                  for t, r, v in rows]
        text = "\n".join(lines) + "\n"
    return text, 0


def _cmd_fuzz(cfg: RunConfig):
    f = function_from_params(cfg.params)
    p = float(_param(cfg, "p", 2.0))
    trials, dim = int(_param(cfg, "trials", 10_000)), int(_param(cfg, "dim", 3))
    if p <= 1 or trials < 0 or dim < 1:
        raise UsageError("fuzz needs --p > 1, --trials >= 0 and --dim >= 1")
    w = ando_hiai_search(f, p, trials=trials, dim=dim, seed=cfg.seed,
                         t_min=cfg.grid.t_min, t_max=cfg.grid.t_max, n_points=cfg.grid.n_points)
    report = {"config": cfg.to_dict(), "function": f.describe(),
              "witness": None if w is None else w.to_dict()}
    if cfg.format == "table":
        text = "no witness\n" if w is None else \
            f"witness ({w.phase}, trial {w.trial}): min eig after = {w.min_eig_after!r}\n"
    else:
        text = json.dumps(report, indent=2) + "\n"
    return text, 0 if w is None else 1


def _cmd_reproduce(cfg: RunConfig):
    name = cfg.params["name"]
    if name not in reproduce.EXPERIMENTS:
        raise UsageError(f"unknown result {name!r}; choose from {', '.join(reproduce.EXPERIMENTS)}")
    result = reproduce.run(name, cfg.grid, cfg.tolerances)
    if cfg.format == "table":
        text = f"{name}: {'PASS' if result['pass'] else 'FAIL'}\n"
        for k, v in result.get("checks", {}).items():
            text += f"  {k}: {'ok' if v else 'FAILED'}\n"
    else:
        text = json.dumps({"config": cfg.to_dict(), "result": result,
                           "status": "PASS" if result["pass"] else "FAIL"}, indent=2) + "\n"
    return text, 0 if result["pass"] else 1


COMMANDS = {"classify": _cmd_classify, "scan": _cmd_scan, "hansen": _cmd_hansen,
            "fuzz": _cmd_fuzz, "reproduce": _cmd_reproduce}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"meanscope {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
