"""Command-line workflow: fit, test, calibrate, optimize, tabulate, export.

Configuration can come from a flat ``key=value`` file (``--config``);
explicit command-line flags win over file values, which win over
defaults. All currency figures print with four decimals. Figures (PNG)
are rendered next to every delimited output unless ``--no-plot`` is set.

Exit codes: 0 success, 2 validation problem (bad flags, config, data),
3 numerical failure (fit, quadrature or optimizer did not converge).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .benefit import EconomicConfig
from .copula import JointModel, fit_joint_mle
from .dataset import Dataset, load_dataset
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    FitError,
    NumericsError,
    OptimizerError,
    QuadratureError,
    WarrantyError,
)
from .gof import ad_pvalue, kaplan_meier
from .marginal import WeibullParams, fit_weibull_mle, weibull_sf
from .optimizer import (
    SEARCH_ANCHORED,
    SEARCH_WIDE,
    OptimizationResult,
    optimize_region,
    run_policy_table,
)
from .policy import PolicyKind, PolicyPair, WarrantyRegion, cost_surface_grid
from .utility import QuadratureSpec

_EXIT_VALIDATION = 2
_EXIT_NUMERICAL = 3

_VALIDATION_ERRORS = (DataError, DomainError, ConfigError)
_NUMERICAL_ERRORS = (FitError, NumericsError, QuadratureError, OptimizerError)

#: Keys accepted in a config file; mirrors the long option names.
_CONFIG_KEYS = {
    "data",
    "out",
    "seed",
    "starts",
    "bootstrap",
    "refit",
    "quad_nodes",
    "search",
    "pair",
    "region",
    "grid",
    "points",
    "no_plot",
    "s",
    "a1",
    "m",
    "q1",
    "q2",
    "anchor_p",
    "t_w",
    "u_w",
    "a2",
    "a3",
    "shape_t",
    "scale_t",
    "shape_u",
    "scale_u",
    "theta",
}

_MODEL_KEYS = ("shape_t", "scale_t", "shape_u", "scale_u", "theta")


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value config file; '#' starts a comment line."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset argparse values from the config file, if any."""
    if not args.config:
        return
    values = load_config_file(args.config)
    for key, raw in values.items():
        if not hasattr(args, key) or getattr(args, key) is not None:
            continue
        if key == "no_plot":
            lowered = raw.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigError(f"config key no_plot must be boolean, got {raw!r}")
            setattr(args, key, lowered in ("true", "1", "yes"))
        else:
            setattr(args, key, raw)


def _float_arg(args: argparse.Namespace, name: str, default: float | None) -> float | None:
    value = getattr(args, name, None)
    if value is None:
        return default
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name.replace('_', '-')} must be a number, got {value!r}") from None


def _int_arg(args: argparse.Namespace, name: str, default: int) -> int:
    value = getattr(args, name, None)
    if value is None:
        return default
    try:
        return int(str(value), 10)
    except ValueError:
        raise ConfigError(f"{name.replace('_', '-')} must be an integer, got {value!r}") from None


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dataset(args: argparse.Namespace) -> Dataset:
    return load_dataset(args.data)


def _explicit_model(args: argparse.Namespace) -> JointModel | None:
    given = [k for k in _MODEL_KEYS if getattr(args, k, None) is not None]
    if not given:
        return None
    if len(given) != len(_MODEL_KEYS):
        missing = sorted(set(_MODEL_KEYS) - set(given))
        raise ConfigError(
            "explicit model parameters must all be given; missing: "
            + ", ".join(m.replace("_", "-") for m in missing)
        )
    return JointModel(
        margin_t=WeibullParams(
            shape=_float_arg(args, "shape_t", None),
            scale=_float_arg(args, "scale_t", None),
        ),
        margin_u=WeibullParams(
            shape=_float_arg(args, "shape_u", None),
            scale=_float_arg(args, "scale_u", None),
        ),
        theta=_float_arg(args, "theta", None),
    )


def _model(args: argparse.Namespace) -> JointModel:
    explicit = _explicit_model(args)
    if explicit is not None:
        return explicit
    fit = fit_joint_mle(
        _dataset(args),
        starts=_int_arg(args, "starts", 5),
        seed=_int_arg(args, "seed", 0),
    )
    return fit.model


def _econ(args: argparse.Namespace, model: JointModel) -> EconomicConfig:
    return EconomicConfig.calibrated(
        model,
        S=_float_arg(args, "s", 700.0),
        A1=_float_arg(args, "a1", 200.0),
        M=_float_arg(args, "m", 1.0),
        q1=_float_arg(args, "q1", 0.75),
        q2=_float_arg(args, "q2", 0.75),
        anchor_p=_float_arg(args, "anchor_p", 0.1),
        t_w=_float_arg(args, "t_w", None),
        u_w=_float_arg(args, "u_w", None),
        A2=_float_arg(args, "a2", None),
        A3=_float_arg(args, "a3", None),
    )


def _quad(args: argparse.Namespace) -> QuadratureSpec:
    nodes = _int_arg(args, "quad_nodes", 64)
    return QuadratureSpec(nodes_per_axis=nodes)


def _parse_pair(text: str | None) -> tuple[PolicyKind, PolicyKind]:
    if not text:
        raise ConfigError("a policy pair is required, e.g. --pair CW,CW")
    normalized = text.replace("×", "x").replace("X", "x")
    for sep in (",", "x"):
        if sep in normalized:
            left, _, right = normalized.partition(sep)
            return (PolicyKind.parse(left), PolicyKind.parse(right))
    raise ConfigError(f"cannot parse policy pair {text!r}; use e.g. CW,PRW")


def _parse_region(text: str | None) -> WarrantyRegion | None:
    if not text:
        return None
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 4:
        raise ConfigError(f"region needs 4 numbers t_w1,t_w2,u_w1,u_w2, got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"region values must be numbers, got {text!r}") from None
    return WarrantyRegion(*vals)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit(args: argparse.Namespace, name: str, payload: dict) -> None:
    out = _out_dir(args)
    _write_json(out / f"{name}.json", payload)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _result_payload(res: OptimizationResult) -> dict:
    return {
        "pair": f"{res.pair.kinds[0].value} x {res.pair.kinds[1].value}",
        "region": {
            "t_w1": res.region.t_w1,
            "t_w2": res.region.t_w2,
            "u_w1": res.region.u_w1,
            "u_w2": res.region.u_w2,
        },
        "utility": res.utility,
        "starts": res.starts,
        "best_start_index": res.best_start_index,
        "start_utilities": list(res.start_utilities),
        "convergence": {
            "iterations": res.convergence.iterations,
            "simplex_spread": res.convergence.simplex_spread,
            "boundary_hit": res.convergence.boundary_hit,
        },
    }


def cmd_fit(args: argparse.Namespace) -> int:
    data = _dataset(args)
    fit_t = fit_weibull_mle(data.age)
    fit_u = fit_weibull_mle(data.usage)
    joint = fit_joint_mle(
        data, starts=_int_arg(args, "starts", 5), seed=_int_arg(args, "seed", 0)
    )
    payload = {
        "dataset": {"source": data.source, "n": len(data)},
        "units": "scaled units",
        "marginals": {
            "age": {
                "shape": fit_t.params.shape,
                "scale": fit_t.params.scale,
                "loglik": fit_t.loglik,
            },
            "usage": {
                "shape": fit_u.params.shape,
                "scale": fit_u.params.scale,
                "loglik": fit_u.loglik,
            },
        },
        "joint": {
            "shape_t": joint.model.margin_t.shape,
            "scale_t": joint.model.margin_t.scale,
            "shape_u": joint.model.margin_u.shape,
            "scale_u": joint.model.margin_u.scale,
            "theta": joint.model.theta,
            "loglik": joint.loglik,
            "starts": joint.starts,
            "best_start": joint.best_start,
            "iterations": joint.iterations,
            "fun_spread": joint.fun_spread,
            "theta_at_boundary": joint.theta_at_boundary,
        },
    }
    _emit(args, "fit", payload)
    return 0


def cmd_gof(args: argparse.Namespace) -> int:
    data = _dataset(args)
    b = _int_arg(args, "bootstrap", 10000)
    seed = _int_arg(args, "seed", 0)
    refit = bool(getattr(args, "refit", None))
    payload = {"bootstrap": b, "seed": seed, "refit": refit, "axes": {}}
    for label, sample, sub_seed in (("age", data.age, seed), ("usage", data.usage, seed + 1)):
        res = ad_pvalue(sample, b=b, seed=sub_seed, refit=refit)
        payload["axes"][label] = {
            "statistic": res.statistic,
            "pvalue": res.pvalue,
            "replicates": res.replicates,
            "failures": res.failures,
        }
    _emit(args, "gof", payload)
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    model = _model(args)
    cfg = _econ(args, model)
    payload = {
        "S": cfg.S,
        "A1": cfg.A1,
        "M": cfg.M,
        "q1": cfg.q1,
        "q2": cfg.q2,
        "anchor_p": cfg.anchor_p,
        "t_w": cfg.t_w,
        "u_w": cfg.u_w,
        "A2": cfg.A2,
        "A3": cfg.A3,
        "units": "scaled units",
    }
    _emit(args, "calibrate", payload)
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    kinds = _parse_pair(args.pair)
    model = _model(args)
    cfg = _econ(args, model)
    search = (args.search or SEARCH_ANCHORED).strip().lower()
    if search not in (SEARCH_ANCHORED, SEARCH_WIDE):
        raise ConfigError(f"search must be anchored or wide, got {args.search!r}")
    res = optimize_region(
        kinds,
        model,
        cfg,
        spec=_quad(args),
        seed=_int_arg(args, "seed", 0),
        search=search,
    )
    payload = _result_payload(res)
    payload["search"] = search
    payload["S"] = cfg.S
    _emit(args, "optimize", payload)
    return 0


def _table_rows(cells) -> list[dict]:
    rows = []
    for cell in cells:
        if cell.result is None:
            rows.append({"policy": cell.label, "error": cell.error})
            continue
        region = cell.result.region
        rows.append(
            {
                "policy": cell.label,
                "t_w1": region.t_w1,
                "t_w2": region.t_w2,
                "u_w1": region.u_w1,
                "u_w2": region.u_w2,
                "utility": cell.result.utility,
            }
        )
    return rows


def cmd_table(args: argparse.Namespace) -> int:
    raw = args.s if args.s is not None else "500,700,900"
    try:
        s_values = [float(tok) for tok in str(raw).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--S must be a comma-separated number list, got {raw!r}") from None
    if not s_values:
        raise ConfigError("--S gave no sale prices")
    model = _model(args)
    cfg = _econ_template(args, model)
    search = (args.search or SEARCH_ANCHORED).strip().lower()
    table = run_policy_table(
        model,
        cfg,
        s_values,
        spec=_quad(args),
        seed=_int_arg(args, "seed", 0),
        search=search,
    )
    out = _out_dir(args)
    written: list[str] = []
    dominance = {s: (best, worst) for s, best, worst in table.dominance}
    for s, cells in table.entries:
        best, worst = dominance.get(s, ("-", "-"))
        stem = f"table_S{s:g}"
        rows = _table_rows(cells)
        with open(out / f"{stem}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["policy", "t_w1", "t_w2", "u_w1", "u_w2", "utility"])
            for row in rows:
                if "error" in row:
                    writer.writerow([row["policy"], "", "", "", "", f"error: {row['error']}"])
                else:
                    writer.writerow(
                        [
                            row["policy"],
                            _fmt(row["t_w1"]),
                            _fmt(row["t_w2"]),
                            _fmt(row["u_w1"]),
                            _fmt(row["u_w2"]),
                            _fmt(row["utility"]),
                        ]
                    )
        _write_json(
            out / f"{stem}.json",
            {"S": s, "rows": rows, "dominance": {"best": best, "worst": worst}},
        )
        written.append(f"{stem}.csv")
        written.append(f"{stem}.json")
        if not args.no_plot:
            from . import report

            solved = [r for r in rows if "error" not in r]
            report.render_table(
                [r["policy"] for r in solved],
                [r["utility"] for r in solved],
                s,
                out / f"{stem}.png",
            )
            written.append(f"{stem}.png")
        print(f"S={s:g}  (best {best}, worst {worst})")
        for row in rows:
            if "error" in row:
                print(f"  {row['policy']:<11} failed: {row['error']}")
            else:
                print(
                    f"  {row['policy']:<11} ({_fmt(row['t_w1'])}, {_fmt(row['t_w2'])}, "
                    f"{_fmt(row['u_w1'])}, {_fmt(row['u_w2'])})  utility {_fmt(row['utility'])}"
                )
    print("wrote: " + ", ".join(str(out / name) for name in written))
    return 0


def _econ_template(args: argparse.Namespace, model: JointModel) -> EconomicConfig:
    # S is replaced per table entry; the template carries the shared fields.
    base = dict(
        S=700.0,
        A1=_float_arg(args, "a1", 200.0),
        M=_float_arg(args, "m", 1.0),
        q1=_float_arg(args, "q1", 0.75),
        q2=_float_arg(args, "q2", 0.75),
        anchor_p=_float_arg(args, "anchor_p", 0.1),
        t_w=_float_arg(args, "t_w", None),
        u_w=_float_arg(args, "u_w", None),
        A2=_float_arg(args, "a2", None),
        A3=_float_arg(args, "a3", None),
    )
    return EconomicConfig.calibrated(model, **base)


def cmd_surface(args: argparse.Namespace) -> int:
    kinds = _parse_pair(args.pair)
    model = _model(args)
    cfg = _econ(args, model)
    region = _parse_region(args.region)
    if region is None:
        t_w, u_w = cfg.t_w, cfg.u_w
        t1 = t_w / 2 if kinds[0] is PolicyKind.CW else (0.0 if kinds[0] is PolicyKind.PRW else t_w)
        u1 = u_w / 2 if kinds[1] is PolicyKind.CW else (0.0 if kinds[1] is PolicyKind.PRW else u_w)
        region = WarrantyRegion(t1, t_w, u1, u_w)
    pair = PolicyPair.from_region(kinds, region)
    n = _int_arg(args, "grid", 101)
    grid = cost_surface_grid(
        pair, cfg.S, t_max=1.5 * region.t_w2, u_max=1.5 * region.u_w2, nt=n, nu=n
    )
    out = _out_dir(args)
    with open(out / "surface.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "u", "cost"])
        for t, u, c in grid:
            writer.writerow([f"{t:.6g}", f"{u:.6g}", _fmt(c)])
    written = ["surface.csv"]
    if not args.no_plot:
        from . import report

        label = f"{kinds[0].value} x {kinds[1].value}, region {tuple(round(v, 4) for v in region.as_tuple())}"
        report.render_surface(grid, label, out / "surface.png")
        written.append("surface.png")
    print("wrote: " + ", ".join(str(out / name) for name in written))
    return 0


def cmd_curves(args: argparse.Namespace) -> int:
    data = _dataset(args)
    model = _model(args)
    points = _int_arg(args, "points", 200)
    if points < 2:
        raise ConfigError("points must be >= 2")
    out = _out_dir(args)
    columns: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for label, sample, margin in (
        ("age", data.age, model.margin_t),
        ("usage", data.usage, model.margin_u),
    ):
        km = kaplan_meier(sample)
        grid = np.union1d(np.linspace(0.0, 1.05 * sample.max(), points), km.breakpoints)
        columns[label] = (grid, weibull_sf(grid, margin), km(grid))
    with open(out / "curves.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis", "x", "parametric", "empirical"])
        for label, (grid, par, km_vals) in columns.items():
            for x, p, k in zip(grid, par, km_vals):
                writer.writerow([label, f"{x:.6g}", f"{p:.6f}", f"{k:.6f}"])
    written = ["curves.csv"]
    if not args.no_plot:
        from . import report

        age_cols = columns["age"]
        usage_cols = columns["usage"]
        report.render_curves(
            age_cols[0],
            age_cols[1],
            age_cols[2],
            usage_cols[0],
            usage_cols[1],
            usage_cols[2],
            out / "curves.png",
        )
        written.append("curves.png")
    print("wrote: " + ", ".join(str(out / name) for name in written))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warranty2d",
        description="Two-dimensional warranty region optimization "
        "(Gumbel-Weibull joint lifetime model; all values in scaled units).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, econ: bool = True, model: bool = True) -> None:
        p.add_argument("--data", help="CSV with header age,usage (default: bundled data)")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--out", help="output directory (default: current)")
        p.add_argument("--seed", help="master seed (default 0)")
        p.add_argument("--no-plot", action="store_const", const=True, dest="no_plot",
                       help="skip figure rendering")
        if model:
            p.add_argument("--starts", help="joint MLE starts (default 5)")
            for key in _MODEL_KEYS:
                p.add_argument(
                    f"--{key.replace('_', '-')}",
                    help="explicit model parameter (give all five to skip fitting)",
                )
        if econ:
            p.add_argument("--S", dest="s", help="sale price (default 700)")
            p.add_argument("--A1", dest="a1", help="profit per unit (default 200)")
            p.add_argument("--M", dest="m", help="potential sales (default 1)")
            p.add_argument("--q1", help="age retention target (default 0.75)")
            p.add_argument("--q2", help="usage retention target (default 0.75)")
            p.add_argument("--anchor-p", dest="anchor_p", help="anchor quantile (default 0.1)")
            p.add_argument("--t-w", dest="t_w", help="explicit age anchor")
            p.add_argument("--u-w", dest="u_w", help="explicit usage anchor")
            p.add_argument("--A2", dest="a2", help="explicit age benefit rate")
            p.add_argument("--A3", dest="a3", help="explicit usage benefit rate")
            p.add_argument("--quad-nodes", dest="quad_nodes",
                           help="quadrature nodes per axis (default 64)")

    p_fit = sub.add_parser("fit", help="marginal and joint maximum likelihood fit")
    common(p_fit, econ=False, model=True)
    p_fit.set_defaults(func=cmd_fit)

    p_gof = sub.add_parser("gof", help="Anderson-Darling bootstrap test per axis")
    common(p_gof, econ=False, model=False)
    p_gof.add_argument("--bootstrap", help="bootstrap replicates (default 10000)")
    p_gof.add_argument("--refit", action="store_const", const=True,
                       help="re-estimate parameters on each replicate")
    p_gof.set_defaults(func=cmd_gof)

    p_cal = sub.add_parser("calibrate", help="anchors and benefit rates")
    common(p_cal)
    p_cal.set_defaults(func=cmd_calibrate)

    p_opt = sub.add_parser("optimize", help="optimal region for one policy pair")
    common(p_opt)
    p_opt.add_argument("--pair", help="policy pair, e.g. CW,CW")
    p_opt.add_argument("--search", help="anchored (default) or wide")
    p_opt.set_defaults(func=cmd_optimize)

    p_table = sub.add_parser("table", help="optimal regions for all nine pairs")
    common(p_table)
    p_table.add_argument("--search", help="anchored (default) or wide")
    p_table.set_defaults(func=cmd_table)

    p_surf = sub.add_parser("surface", help="cost surface grid for one pair")
    common(p_surf)
    p_surf.add_argument("--pair", help="policy pair, e.g. CW,CW")
    p_surf.add_argument("--region", help="t_w1,t_w2,u_w1,u_w2 (default: anchor region)")
    p_surf.add_argument("--grid", help="grid resolution per axis (default 101)")
    p_surf.set_defaults(func=cmd_surface)

    p_curves = sub.add_parser("curves", help="parametric vs Kaplan-Meier reliability")
    common(p_curves, econ=False, model=True)
    p_curves.add_argument("--points", help="grid points per axis (default 200)")
    p_curves.set_defaults(func=cmd_curves)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        _print_error(exc, _EXIT_VALIDATION)
        return _EXIT_VALIDATION
    except _NUMERICAL_ERRORS as exc:
        _print_error(exc, _EXIT_NUMERICAL)
        return _EXIT_NUMERICAL
    except WarrantyError as exc:  # fallback: treat unclassified as numerical
        _print_error(exc, _EXIT_NUMERICAL)
        return _EXIT_NUMERICAL


def _print_error(exc: Exception, code: int) -> None:
    json.dump(
        {"error": type(exc).__name__, "message": str(exc), "exit_code": code},
        sys.stderr,
    )
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
