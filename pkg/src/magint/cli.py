"""Command-line entry point: ``magint <command> --config cfg.json --out dir``.

Exit statuses: 0 every requested check passed, 1 a check missed its
tolerance, 2 the config is malformed (nothing is written), 3 a numerical
failure (blow-up, step collapse, quadrature, grid too narrow).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__, dynamics, families, odes, quantum, verify
from .errors import (
    AccuracyError,
    BlowUpError,
    BracketError,
    ComplexBError,
    ConstructionError,
    ContractError,
    DomainError,
    PatternError,
    QuadratureError,
    StiffnessError,
)
from .fields import ExpressionError, ExprProfile

COMMANDS = ("build", "simulate", "verify", "ode", "spectrum", "bessel-check")

EXIT_OK, EXIT_TOL, EXIT_SCHEMA, EXIT_NUMERIC = 0, 1, 2, 3

NUMERICAL_ERRORS = (
    AccuracyError,
    BlowUpError,
    BracketError,
    ConstructionError,
    QuadratureError,
    StiffnessError,
    FloatingPointError,
    ZeroDivisionError,
)

DEFAULT_TOL = {
    "verify": {"first-order": 1e-8, "second-order": 1e-8, "polar": 1e-8, "poisson": 1e-10,
               "commutator": 1e-10, "algebra": 1e-10},
    "simulate": dynamics.DEFAULT_TOL,
    "ode": 1e-9,
    "spectrum": 1e-6,
    "bessel-check": 1e-8,
}


class ConfigError(Exception):
    """Config violates its schema; ``path`` locates the offending field."""

    def __init__(self, path, message):
        self.path = "/" + "/".join(str(p) for p in path) if path else "/"
        super().__init__(f"{self.path}: {message}")


class NumericalFailure(Exception):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


# -- output formatting --------------------------------------------------------

def format_float_json(x):
    """17 significant digits in scientific notation; non-finite values become null."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return f"{x:.16e}"


def dump_json(obj, indent=0):
    """JSON text with floats as 17-digit scientific literals and sorted keys."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dump_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float_json(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return dump_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, np.ndarray):
        return dump_json(obj.tolist(), indent)
    return json.dumps(str(obj))


def format_float_csv(x):
    """Shortest decimal that reads back to the same double."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def header_lines(command, config, seed):
    return [
        f"magint {__version__}",
        f"command: {command}",
        f"config: {json.dumps(config, sort_keys=True, separators=(',', ':'))}",
        f"seed: {seed}",
        f"convention: {families.CONVENTION}",
    ]


def csv_text(header, columns, rows):
    out = [f"# {h}" for h in header]
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(format_float_csv(v) for v in row))
    return "\n".join(out) + "\n"


def json_text(header_info, body):
    doc = {"header": header_info, **body}
    # version on its own first line so bodies compare byte-for-byte across releases
    return '{\n  "version": ' + json.dumps(__version__) + ",\n" + dump_json(doc)[2:] + "\n"


def write_atomic(directory: Path, files: dict):
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, directory / name)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


# -- config loading -----------------------------------------------------------

def load_schema(command):
    text = resources.files("magint").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError((), f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError((), f"malformed JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from None


def validate_config(command, cfg):
    validator = jsonschema.Draft202012Validator(load_schema(command))
    errors = sorted(validator.iter_errors(cfg), key=lambda e: (-len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise ConfigError(list(err.absolute_path), err.message)


def _expr_profile(params, key, var, path, window=(-math.inf, math.inf)):
    try:
        return ExprProfile(params[key], var=var, params=params.get("constants"), window=window)
    except ExpressionError as exc:
        raise ConfigError(list(path) + [key] + list(exc.path), str(exc).split(": ", 1)[-1]) from None


def build_family(spec, path=("family",)):
    """Construct a Family from a ``{"name", "params"}`` spec."""
    name, params = spec["name"], dict(spec["params"])
    ppath = list(path) + ["params"]
    try:
        if name == "constant-field":
            return families.build_constant_field(params["omega0"], params.get("w0", 0.0), params.get("half", 10.0))
        if name == "radial-first-order":
            om = _expr_profile(params, "omega", "r", ppath)
            w = _expr_profile(params, "W", "r", ppath)
            return families.build_radial_first_order(
                om, w, params.get("rmin", 0.1), params.get("rmax", 5.0), params.get("base", 0.0)
            )
        if name == "translational-first-order":
            om = _expr_profile(params, "omega", "x", ppath)
            w = _expr_profile(params, "W", "x", ppath)
            return families.build_translational_first_order(
                om, w, params.get("half_x", 5.0), params.get("half_y", 5.0), params.get("base", 0.0)
            )
        if name == "cartesian":
            for key in ("xlim", "ylim"):
                if key in params:
                    params[key] = tuple(params[key])
            return families.build_cartesian_family(families.CartesianParams(**params))
        if name == "polar-case1":
            return families.build_polar_case1(families.PolarCase1Params(**params))
        if name == "polar-case2":
            sel = dict(params.pop("selector"))
            for key in ("roots", "window"):
                if key in sel:
                    sel[key] = tuple(sel[key])
            if "philim" in params:
                params["philim"] = tuple(params["philim"])
            return families.build_polar_case2(families.PolarCase2Params(families.YSelector(**sel), **params))
        if name == "polar-degenerate":
            q = _expr_profile(params, "Q", "r", ppath)
            w = _expr_profile(params, "W", "r", ppath)
            return families.build_polar_degenerate(q, w, params.get("rmin", 0.2), params.get("rmax", 3.0))
    except (ContractError, DomainError, ComplexBError, PatternError) as exc:
        raise ConfigError(ppath, f"{type(exc).__name__}: {exc}") from None
    raise ConfigError(list(path) + ["name"], f"unknown family {name!r}")


def resolve_family(cfg, config_dir):
    if "family" in cfg:
        return cfg["family"], build_family(cfg["family"])
    fpath = Path(cfg["family_file"])
    if not fpath.is_absolute():
        fpath = config_dir / fpath
    try:
        doc = json.loads(fpath.read_text())
        spec = doc["family_spec"]
    except FileNotFoundError:
        raise ConfigError(["family_file"], f"family file not found: {fpath}") from None
    except (json.JSONDecodeError, KeyError, TypeError):
        raise ConfigError(["family_file"], f"{fpath} is not a magint build output") from None
    try:
        validate_config("build", {"family": spec})
    except ConfigError as exc:
        raise ConfigError(["family_file"], f"embedded family spec invalid at {exc.path}") from None
    return spec, build_family(spec, ("family_file", "family_spec"))


# -- commands -------------------------------------------------------------------

def cmd_build(cfg, ctx):
    spec = cfg["family"]
    fam = build_family(spec)
    n = cfg.get("grid", 21)
    pts = verify.grid_points(fam.domain, n, n, margin=0.0)
    rows = []
    for x, y in pts:
        try:
            rows.append((x, y, fam.physical.Omega(x, y), fam.physical.W(x, y)))
        except DomainError:
            continue
    body = {"family_spec": spec, "family": fam.describe()}
    return EXIT_OK, {
        "family.json": ctx.json(body),
        "fields.csv": ctx.csv(["x", "y", "Omega", "W"], rows),
    }, f"built {fam.name}"


def _state_columns(kind):
    return ["x", "y", "px", "py"] if kind == "phase" else ["x", "y", "xdot", "ydot"]


def cmd_simulate(cfg, ctx):
    spec, fam = resolve_family(cfg, ctx.config_dir)
    kind = cfg.get("state_kind", "phase")
    source = fam.gauge if kind == "phase" else fam.physical
    s0 = cfg["initial_state"]
    try:
        fam.domain.check(s0[0], s0[1])
    except DomainError as exc:
        raise ConfigError(["initial_state"], str(exc)) from None
    tol = ctx.tol if ctx.tol is not None else cfg.get("tol", DEFAULT_TOL["simulate"])
    tr = dynamics.integrate(s0, source, cfg["t_end"], tol=tol, integrals=fam.integrals)
    labels = list(tr.logs)
    if "samples" in cfg:
        ts = np.linspace(0.0, tr.t[-1], cfg["samples"])
        states = tr.sample(ts)
        value_of = (lambda I, s: dynamics.eval_integral(s, I, fam.gauge)) if kind == "phase" else \
            (lambda I, s: dynamics.eval_integral_velocity(s, I))
        energy = (lambda s: dynamics.hamiltonian(s, fam.gauge)) if kind == "phase" else \
            (lambda s: dynamics.energy(s, fam.physical))
        logs = {"H": np.array([energy(s) for s in states])}
        for I in fam.integrals:
            logs[I.label] = np.array([value_of(I, s) for s in states])
    else:
        ts, states, logs = tr.t, tr.states, tr.logs
    scale = {k: max(math.sqrt(float(np.mean(v**2))), 1e-14) for k, v in logs.items()}
    rows = []
    for i, t in enumerate(ts):
        vals = [logs[k][i] for k in labels]
        drifts = [(logs[k][i] - logs[k][0]) / scale[k] for k in labels]
        rows.append((t, *states[i], *vals, *drifts))
    columns = ["t", *_state_columns(kind), *labels, *[f"drift_{k}" for k in labels]]
    drift_tol = cfg.get("drift_tol")
    passed = drift_tol is None or all(d < drift_tol for d in tr.drift.values())
    summary = {
        "family": fam.describe(),
        "state_kind": kind,
        "integrator_tol": tol,
        "t_reached": float(tr.t[-1]),
        "exited": tr.exited,
        "message": tr.message,
        "drift": tr.drift,
        "drift_tol": drift_tol,
        "stats": tr.stats,
        "passed": passed and not tr.exited,
    }
    files = {"trajectory.csv": ctx.csv(columns, rows), "summary.json": ctx.json(summary)}
    if tr.exited:
        raise NumericalFailure(f"trajectory {tr.message}", summary) from None
    status = EXIT_OK if passed else EXIT_TOL
    return status, files, "drift " + ", ".join(f"{k}={v:.3g}" for k, v in tr.drift.items())


def _verify_systems(cfg, fam):
    system = cfg.get("system", "auto")
    if system != "auto":
        return system
    return "first-order" if all(I.order == 1 for I in fam.integrals) else "second-order"


def cmd_verify(cfg, ctx):
    spec, fam = resolve_family(cfg, ctx.config_dir)
    system = _verify_systems(cfg, fam)
    hbar = cfg.get("hbar", fam.hbar_built)
    n = cfg.get("points", 100)
    margin = cfg.get("margin", 0.05)
    tol = ctx.tol if ctx.tol is not None else cfg.get("tol", DEFAULT_TOL["verify"][system])
    pts = verify.sample_points(fam.domain, n, seed=ctx.seed, margin=margin)
    results, rows, columns = [], [], None

    if system in ("first-order", "second-order", "polar"):
        for I in fam.integrals:
            if system == "first-order":
                if I.order != 1:
                    raise ConfigError(["system"], f"integral {I.label} is quadratic; use second-order or polar")
                rep = verify.residual_first_order(fam.physical, I, pts)
            elif system == "second-order":
                if I.order != 2:
                    raise ConfigError(["system"], f"integral {I.label} is linear; use first-order")
                rep = verify.residual_second_order(fam.physical, I, hbar, pts)
            else:
                if fam.P is None:
                    raise ConfigError(["system"], f"family {fam.name} has no polar form")
                rep = verify.residual_polar_form(fam.physical, fam.P, fam.Q, I.m, hbar, pts)
            ok = rep.passed(tol)
            results.append({"integral": I.label, **rep.to_dict(), "worst": rep.worst, "passed": ok})
            columns = ["integral", "x", "y", *rep.labels]
            rows += [(I.label, *p, *v) for p, v in zip(rep.points, rep.values)]
    elif system == "poisson":
        states = verify.random_phase_states(fam.domain, n, seed=ctx.seed, margin=margin)
        columns = ["integral", "x", "y", "px", "py", "bracket"]
        for I in fam.integrals:
            vals = np.array([verify.poisson_bracket(fam.gauge, I, s) for s in states])
            worst = float(np.max(np.abs(vals)))
            results.append({"integral": I.label, "system": "poisson", "npoints": len(states),
                            "worst": worst, "passed": worst < tol})
            rows += [(I.label, *s, v) for s, v in zip(states, vals)]
    elif system == "commutator":
        x0, y0 = np.mean(pts, axis=0)
        psis = verify.default_test_functions((float(x0), float(y0)))
        columns = ["integral", "psi", "x", "y", "re", "im", "scale", "relative"]
        for I in fam.integrals:
            worst = 0.0
            for k, psi in enumerate(psis):
                rep = verify.quantum_commutator_residual(fam.gauge, I, hbar, psi, pts)
                worst = max(worst, rep.max_relative)
                rows += [(I.label, k, *p, r.real, r.imag, s, rel)
                         for p, r, s, rel in zip(rep.points, rep.residual, rep.scale, rep.relative)]
            results.append({"integral": I.label, "system": "commutator", "hbar": hbar, "npoints": len(pts),
                            "test_functions": [p.to_dict() for p in psis], "worst": worst, "passed": worst < tol})
    elif system == "algebra":
        if fam.name != "constant-field":
            raise ConfigError(["system"], "the algebra check needs the constant-field family")
        rep = verify.algebra_check(fam, hbar, pts=pts[: min(len(pts), 10)])
        worst = max(rep.relative.values())
        results.append({"system": "algebra", "hbar": hbar, "relative": rep.relative, "worst": worst,
                        "passed": rep.passed(tol)})
        columns = ["identity", "relative"]
        rows = [(k, rep.relative[k]) for k in rep.labels]
    passed = all(r["passed"] for r in results)
    report = {
        "family": fam.describe(),
        "system": system,
        "hbar_used": hbar,
        "points": n,
        "tol": tol,
        "results": results,
        "passed": passed,
    }
    files = {"report.json": ctx.json(report), "residuals.csv": ctx.csv(columns, rows)}
    worst = max(r["worst"] for r in results)
    return (EXIT_OK if passed else EXIT_TOL), files, f"{system}: worst {worst:.3g} (tol {tol:g})"


def cmd_ode(cfg, ctx):
    c = cfg["constants"]
    init = cfg["initial"]
    window = tuple(cfg["window"])
    t0 = init.get("t0", window[0] if not window[0] <= 0 <= window[1] else 0.0)
    if not window[0] <= t0 <= window[1]:
        raise ConfigError(["initial", "t0"], f"t0 = {t0} outside window {list(window)}")
    tol = ctx.tol if ctx.tol is not None else cfg.get("tol", DEFAULT_TOL["ode"])
    if cfg["equation"] == "fg":
        sol = odes.solve_fg_ode(c.get("a", 0.0), c.get("b", 0.0), c.get("c", 0.0), init["v0"], init["v0p"], window, t0)
    else:
        if "B" in c and "B2" in c:
            raise ConfigError(["constants"], "give B or B2, not both")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", odes.ConsistencyWarning)
            sol = odes.solve_y_ode(c.get("A", 0.0), c.get("B", 0.0), c.get("K"), init["v0"], init["v0p"], window, t0,
                                   B2=c.get("B2"))
        for w in caught:
            ctx.say(f"warning: {w.message}")
    ts, v, vp = sol.grid(cfg.get("samples", 201))
    inv = np.array([sol.first_integral(a, b) for a, b in zip(v, vp)])
    terms = max(max(abs(x) for x in sol.integral_terms(a, b)) for a, b in zip(v, vp))
    scale = max(abs(sol.reference), terms, 1e-14)
    rows = [(t, a, b, q, (q - sol.reference) / scale) for t, a, b, q in zip(ts, v, vp, inv)]
    drift = sol.drift()
    passed = drift < tol
    summary = {"equation": cfg["equation"], "first_integral": sol.reference, "drift": drift, "tol": tol,
               "window": list(window), "t0": t0, "passed": passed}
    files = {"ode.csv": ctx.csv(["t", "value", "derivative", "first_integral", "drift"], rows),
             "summary.json": ctx.json(summary)}
    return (EXIT_OK if passed else EXIT_TOL), files, f"first-integral drift {drift:.3g} (tol {tol:g})"


def cmd_spectrum(cfg, ctx):
    omega0 = cfg["omega0"]
    if omega0 == 0:
        raise ConfigError(["omega0"], "omega0 must be nonzero")
    hbar = cfg.get("hbar", 1.0)
    n = cfg.get("levels", 6)
    grid = quantum.GridSpec(cfg.get("lengths", quantum.DEFAULT_LENGTHS), cfg.get("points", quantum.DEFAULT_POINTS))
    tol = ctx.tol if ctx.tol is not None else cfg.get("tol", DEFAULT_TOL["spectrum"])
    spec = quantum.oscillator_reduction(omega0, cfg.get("lambda", 0.0), hbar, grid, n)
    exact = quantum.landau_levels(omega0, hbar, n)
    err = np.abs(spec.eigenvalues - exact)
    rows = [(k, e, x, d) for k, (e, x, d) in enumerate(zip(spec.eigenvalues, exact, err))]
    passed = bool(np.max(err) < tol)
    summary = {"spectrum": spec.to_dict(), "landau": exact.tolist(), "max_error": float(np.max(err)), "tol": tol,
               "passed": passed}
    files = {"eigenvalues.csv": ctx.csv(["n", "E", "E_landau", "abs_error"], rows), "summary.json": ctx.json(summary)}
    return (EXIT_OK if passed else EXIT_TOL), files, f"max |E - E_landau| = {np.max(err):.3g} (tol {tol:g})"


def cmd_bessel_check(cfg, ctx):
    hbar = cfg.get("hbar", 1.0)
    if hbar != 1:
        raise ConfigError(["hbar"], "the R-separated ansatz is only supported at hbar = 1")
    omega0, m, E = cfg["omega0"], cfg["m"], cfg["E"]
    k2 = cfg.get("k2", 2 * E + m * omega0)
    if k2 < 0:
        raise ConfigError(["k2"] if "k2" in cfg else ["E"], f"k^2 = {k2} < 0")
    rmin, rmax = cfg.get("rmin", 0.5), cfg.get("rmax", 3.0)
    if not rmin < rmax:
        raise ConfigError(["rmax"], "rmax must exceed rmin")
    from .fields import annulus

    pts = verify.sample_points(annulus(rmin, rmax), cfg.get("points", 30), seed=ctx.seed, margin=0.0)
    tol = ctx.tol if ctx.tol is not None else cfg.get("tol", DEFAULT_TOL["bessel-check"])
    rep = quantum.bessel_rsep_residual(omega0, m, E, hbar, pts, k2=k2)
    rows = [(*p, r.real, r.imag, abs(r), s, rel) for p, r, s, rel in zip(rep.points, rep.residual, rep.scale, rep.relative)]
    worst = rep.max_relative
    passed = worst < tol
    summary = {"params": rep.params, "k": rep.k, "max_relative": worst, "tol": tol, "passed": passed}
    files = {"residuals.csv": ctx.csv(["x", "y", "re", "im", "abs", "scale", "relative"], rows),
             "summary.json": ctx.json(summary)}
    return (EXIT_OK if passed else EXIT_TOL), files, f"max relative residual {worst:.3g} (tol {tol:g})"


HANDLERS = {
    "build": cmd_build,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "ode": cmd_ode,
    "spectrum": cmd_spectrum,
    "bessel-check": cmd_bessel_check,
}


class Context:
    def __init__(self, command, cfg, seed, tol, quiet, config_dir):
        self.command, self.cfg, self.seed, self.tol, self.quiet = command, cfg, seed, tol, quiet
        self.config_dir = config_dir
        echo = dict(cfg)
        echo["seed"] = seed
        if tol is not None:
            echo["tol"] = tol
        self.echo = echo

    def say(self, msg):
        if not self.quiet:
            print(msg, file=sys.stderr)

    def csv(self, columns, rows):
        return csv_text(header_lines(self.command, self.echo, self.seed), columns, rows)

    def json(self, body):
        info = {"command": self.command, "config": self.echo, "seed": self.seed, "convention": families.CONVENTION}
        return json_text(info, body)


def run(command, config_path, out_dir, seed=None, tol=None, quiet=False):
    """Run one command; returns the exit status."""
    say = (lambda m: None) if quiet else (lambda m: print(m, file=sys.stderr))
    try:
        cfg = load_config(config_path)
        validate_config(command, cfg)
        if seed is None:
            seed = cfg.get("seed", 0)
        if seed < 0 or seed >= 2**64:
            raise ConfigError(["seed"], "seed must be an unsigned 64-bit integer")
        if tol is not None and not tol > 0:
            raise ConfigError(["tol"], "tolerance must be positive")
        ctx = Context(command, cfg, seed, tol, quiet, Path(config_path).resolve().parent)
        with np.errstate(divide="raise", over="raise", invalid="raise"):
            status, files, message = HANDLERS[command](cfg, ctx)
    except ConfigError as exc:
        print(f"magint {command}: schema violation at {exc.path}: {str(exc).split(': ', 1)[-1]}", file=sys.stderr)
        return EXIT_SCHEMA
    except NumericalFailure as exc:
        print(f"magint {command}: numerical failure: {exc}", file=sys.stderr)
        write_atomic(Path(out_dir), {"diagnostics.json": ctx.json({"error": str(exc), "details": exc.diagnostics})})
        return EXIT_NUMERIC
    except NUMERICAL_ERRORS as exc:
        print(f"magint {command}: numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "abscissa", None) is not None:
            diag["abscissa"] = exc.abscissa
        write_atomic(Path(out_dir), {"diagnostics.json": ctx.json(diag)})
        return EXIT_NUMERIC
    write_atomic(Path(out_dir), files)
    say(f"magint {command}: {message} -> {'pass' if status == EXIT_OK else 'FAIL'}")
    return status


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON config file")
    common.add_argument("--out", default="out", help="output directory (default: ./out)")
    common.add_argument("--seed", type=int, default=None, help="sample-point seed (default: config or 0)")
    common.add_argument("--tol", type=float, default=None, help="override the pass/fail tolerance")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")
    parser = argparse.ArgumentParser(prog="magint", description="Magnetic integrable systems toolkit")
    parser.add_argument("--version", action="version", version=f"magint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "build": "construct a family and write its descriptor",
        "simulate": "integrate a classical trajectory",
        "verify": "evaluate determining-equation residuals, brackets or commutators",
        "ode": "solve one of the auxiliary ODEs and monitor its first integral",
        "spectrum": "Landau levels from the oscillator reduction",
        "bessel-check": "residual of the R-separated Bessel ansatz",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    return run(args.command, args.config, args.out, args.seed, args.tol, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
