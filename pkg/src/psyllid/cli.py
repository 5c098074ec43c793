"""``psyllid`` command-line interface.

Exit codes: 0 success, 2 configuration or usage error, 3 model precondition
violated, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from . import __version__
from ._io import atomic_write_text, csv_text, json_text
from .analysis import all_equilibria, derived_quantities, k_star
from .errors import ConfigError, NumericalError, PreconditionError, PsyllidError
from .experiments import SWEEPS
from .model import PRESETS, TABLE1, ModelParams, State, preset
from .simulator import (
    ClosedLoopContinuous,
    ClosedLoopSampled,
    ControlStrategy,
    Mixed,
    OpenLoop,
    SimulationConfig,
    integrate,
)
from .thresholds import ap_crit, ap_crit_aux

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 2, 3, 4


class UsageError(ConfigError):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_schema() -> dict:
    text = resources.files("psyllid").joinpath("schema/config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_config(path: Optional[str]) -> dict:
    """Read and validate a JSON scenario file; an absent path yields ``{}``."""
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    validate_config(doc)
    return doc


def validate_config(doc: dict) -> None:
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None


def resolve_params(doc: dict, preset_name: Optional[str] = None) -> tuple:
    """Parameters from ``preset`` (default table1) overlaid with ``params``."""
    name = preset_name or doc.get("preset")
    overrides = doc.get("params", {})
    if name is None and overrides and len(overrides) == 8:
        base = None
    else:
        name = name or "table1"
        base = preset(name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        values = dict(base.as_dict() if base is not None else {}, **overrides)
        return ModelParams(**values), name


def resolve_strategy(spec: Optional[dict], params: ModelParams) -> ControlStrategy:
    spec = dict(spec or {"policy": "none"})
    alpha = spec.get("alpha", 0.0)
    policy = spec["policy"]
    k = spec.get("k", 0.0)
    if k == "k_star":
        k = k_star(params, alpha) + spec.get("k_shift", 0.0)
    elif k == "N_M":
        k = derived_quantities(params).n_m + spec.get("k_shift", 0.0)
    needs = {
        "open_loop": ("a_p",),
        "closed_loop_continuous": ("k",),
        "closed_loop_sampled": ("k", "period"),
        "mixed": ("a_p_cap", "k", "period"),
    }.get(policy, ())
    missing = [key for key in needs if key not in spec]
    if missing:
        raise ConfigError(f"strategy {policy!r} requires {missing}")
    if policy == "none":
        pol = OpenLoop(0.0)
    elif policy == "open_loop":
        pol = OpenLoop(spec["a_p"])
    elif policy == "closed_loop_continuous":
        pol = ClosedLoopContinuous(k)
    elif policy == "closed_loop_sampled":
        pol = ClosedLoopSampled(k, spec["period"])
    else:
        pol = Mixed(spec["a_p_cap"], k, spec["period"])
    return ControlStrategy(alpha, pol)


def resolve_sim(spec: Optional[dict], params: ModelParams) -> SimulationConfig:
    spec = dict(spec or {})
    init = spec.pop("initial", "E1")
    if init == "E1":
        from .analysis import equilibrium_E1

        init = equilibrium_E1(params).coords
    return SimulationConfig(initial=State(*init), **spec)


def parse_grid(text: str) -> list:
    """``"a,b,c"`` or ``"lo:hi:n"`` (n evenly spaced points)."""
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            if n == 1:
                return [float(lo)]
            lo, hi = float(lo), float(hi)
            return [lo + (hi - lo) * i / (n - 1) for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}; use 'a,b,c' or 'lo:hi:n'") from None


def _check_alpha(alphas):
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise UsageError(f"alpha must lie in [0, 1], got {a}")


# ---------------------------------------------------------------------------
# output


def _emit(args, stem: str, fmt_name: str, csv_payload: Optional[tuple], json_payload) -> None:
    if fmt_name == "csv" and csv_payload is not None:
        text = csv_text(*csv_payload)
        ext = "csv"
    else:
        text = json_text(json_payload)
        ext = "json"
    if args.out:
        path = atomic_write_text(Path(args.out) / f"{stem}.{ext}", text)
        print(path)
    else:
        sys.stdout.write(text)


def _format(args, doc) -> str:
    return args.format or doc.get("output", {}).get("format", "json")


def _out_dir(args, doc):
    if args.out is None:
        args.out = doc.get("output", {}).get("dir")


# ---------------------------------------------------------------------------
# subcommands


def cmd_presets(args, doc) -> int:
    rows = [{"name": name, **p.as_dict()} for name, p in sorted(PRESETS.items())]
    header = ["name"] + list(TABLE1.as_dict())
    _emit(args, "presets", _format(args, doc), (header, [[r[h] for h in header] for r in rows]), rows)
    return EXIT_OK


def cmd_equilibria(args, doc) -> int:
    params, name = resolve_params(doc, args.preset)
    an = doc.get("analysis", {})
    alpha = args.alpha if args.alpha is not None else an.get("alpha", 0.0)
    a_p = args.a_p if args.a_p is not None else an.get("a_p", 0.0)
    k = args.k if args.k is not None else an.get("k", 0.0)
    _check_alpha([alpha])
    if a_p < 0 or k < 0:
        raise UsageError("a_p and k must be >= 0")
    reports = all_equilibria(params, alpha, a_p, k)
    d = derived_quantities(params)
    payload = {
        "preset": name,
        "params": params.as_dict(),
        "derived": {"N_M": d.n_m, "N_F": d.n_f, "theta_M": d.theta_m, "vartheta": d.vartheta, "P_hat": d.p_hat},
        "equilibria": [r.as_dict() for r in reports],
    }
    header = ["label", "exists", "M", "A", "U", "region", "alpha", "a_p", "gain", "pws_class", "stability",
              "max_real_eigenvalue", "residual"]
    rows = []
    for r in reports:
        eig = r.stability.eigenvalues if r.stability else ()
        rows.append([
            r.label.value, r.exists, r.coords.M, r.coords.A, r.coords.U, r.region.value, r.alpha, r.a_p, r.gain,
            r.pws_class.value, r.stability.verdict.value if r.stability else "NotApplicable",
            max(z.real for z in eig) if eig else None, r.residual,
        ])
    _emit(args, "equilibria", _format(args, doc), (header, rows), payload)
    return EXIT_OK


def cmd_thresholds(args, doc) -> int:
    params, name = resolve_params(doc, args.preset)
    th = doc.get("thresholds", {})
    if args.alpha_grid is not None:
        alphas = parse_grid(args.alpha_grid)
    elif args.alpha is not None:
        alphas = [args.alpha]
    elif "alpha_grid" in th:
        alphas = list(th["alpha_grid"])
    else:
        alphas = [th.get("alpha", 0.0)]
    _check_alpha(alphas)
    d = derived_quantities(params)
    if d.theta_m <= 1.0:
        raise PreconditionError(
            f"theta_M = {d.theta_m:.6g} <= 1: the condition theta_M > 1 ((1-r)rho/delta > N_M) is required"
        )
    rows, out = [], []
    for a in alphas:
        fold = ap_crit(params, a)
        aux = ap_crit_aux(params, a)
        ks = k_star(params, a)
        rows.append([a, fold.a_p_crit, fold.tangency_point, fold.residuals[0], fold.residuals[1],
                     aux.a_p_crit, aux.tangency_point, aux.residuals[0], aux.residuals[1], ks])
        out.append({"alpha": a, "ap_crit": fold.as_dict(), "ap_crit_aux": aux.as_dict(), "k_star": ks})
    header = ["alpha", "ap_crit", "a_tangency", "ap_crit_residual", "ap_crit_slope_residual",
              "ap_crit_aux", "m_tangency", "aux_residual", "aux_slope_residual", "k_star"]
    _emit(args, "thresholds", _format(args, doc), (header, rows), {"preset": name, "thresholds": out})
    return EXIT_OK


def cmd_simulate(args, doc) -> int:
    params, name = resolve_params(doc, args.preset)
    strategy = resolve_strategy(doc.get("strategy"), params)
    config = resolve_sim(doc.get("sim"), params)
    traj = integrate(params, strategy, config)
    summary = dict(traj.summary(), preset=name, params=params.as_dict())
    if args.out:
        out = Path(args.out)
        p1 = atomic_write_text(out / "trajectory.csv", traj.to_csv())
        p2 = atomic_write_text(out / "summary.json", json_text(summary))
        print(p1)
        print(p2)
    elif _format(args, doc) == "csv":
        sys.stdout.write(traj.to_csv())
    else:
        sys.stdout.write(json_text(summary))
    return EXIT_OK


def cmd_sweep(args, doc) -> int:
    if args.list:
        for key, fn in SWEEPS.items():
            first = (fn.__doc__ or "").strip().splitlines()[0] if fn.__doc__ else ""
            print(f"{key}\t{first}")
        return EXIT_OK
    sw = dict(doc.get("sweep", {}))
    name = args.name or sw.pop("name", None)
    sw.pop("name", None)
    if name is None:
        raise UsageError("sweep name required (see --list)")
    if name not in SWEEPS:
        raise UsageError(f"unknown sweep {name!r}; available: {', '.join(SWEEPS)}")
    params, pname = resolve_params(doc, args.preset)
    if args.alpha_grid is not None:
        key = "alpha_list" if name == "fig9" else "alpha_grid"
        sw[key] = parse_grid(args.alpha_grid)
    for key in ("alpha_grid", "alpha_list"):
        if key in sw:
            _check_alpha(sw[key])
    fn = SWEEPS[name]
    try:
        result = fn(params, jobs=args.jobs, **sw)
    except TypeError as exc:
        raise UsageError(f"sweep {name!r} does not accept these options: {exc}") from None
    result.preset = pname
    out = args.out or "."
    for path in result.write(out):
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file")
    common.add_argument("--preset", help="named parameter set (default table1)")
    common.add_argument("--out", help="output directory (default: stdout, or '.' for sweeps)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps (default 1)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")

    parser = argparse.ArgumentParser(prog="psyllid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"psyllid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("presets", parents=[common], help="list built-in parameter sets")

    p = sub.add_parser("equilibria", parents=[common], help="equilibria, stability and switching-plane position")
    p.add_argument("--alpha", type=float)
    p.add_argument("--a-p", dest="a_p", type=float, help="open-loop lure strength")
    p.add_argument("--k", type=float, help="closed-loop gain")

    p = sub.add_parser("thresholds", parents=[common], help="critical lure strengths and feedback threshold")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-grid", help="'a,b,c' or 'lo:hi:n'")

    sub.add_parser("simulate", parents=[common], help="integrate one scenario")

    p = sub.add_parser("sweep", parents=[common], help="run a figure sweep")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true", help="list available sweeps")
    p.add_argument("--alpha-grid", help="'a,b,c' or 'lo:hi:n'")
    return parser


_COMMANDS = {
    "presets": cmd_presets,
    "equilibria": cmd_equilibria,
    "thresholds": cmd_thresholds,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if os.environ.get("PSYLLID_SEED_DETERMINISTIC") == "1":
        args.jobs = 1
    try:
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        doc = load_config(args.config)
        _out_dir(args, doc)
        return _COMMANDS[args.command](args, doc)
    except PreconditionError as exc:
        print(f"psyllid: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NumericalError, ArithmeticError) as exc:
        print(f"psyllid: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, PsyllidError) as exc:
        print(f"psyllid: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
