"""Command-line surface: flat-file configs, four pipelines, result documents.

    pdem solve|verify|scan|dirac --config cfg.ini [--out path]
                                 [--format json|csv] [--no-timestamp]

Configs are flat ``key = value`` files with bracketed sections (INI).  Exit
codes: 0 all gates pass, 1 at least one verification gate failed, 2
configuration error.  Identical configs produce byte-identical documents
once the timestamp is disabled.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .dirac import DiracModel, solve_dirac_energy
from .errors import ConfigError, PdemError
from .massmap import MassProfile, chart_from_mass, pullback_potential
from .models import (Generator, PotentialModel, analytic_spectrum_eckart,
                     analytic_spectrum_ptpt, constraint_residuals,
                     evaluate_model, v_from_generator)
from .numerics import ComplexField, make_uniform_grid
from .operators import (discretize_eta, discretize_pdem_x,
                        discretize_schrodinger_q, intertwining_residual,
                        pt_residual)
from .spectra import (classify_spectrum, eig_dense, refine_shoot,
                      spectrum_compare)

PROVENANCE_NOTES = (
    "generator-to-potential map keeps the imaginary derivative term: V = -F^2 - i dF/dq + alpha0",
    "variable-mass adjoint taken in the mass-weighted inner product, weight M(x)",
    "second-derivative term of the reduced spinor equation carries a real coefficient",
    "single-tower level formula compared with the numerically confirmed sign (levels below the continuum edge)",
    "eckart as_printed level variant retained for discrepancy reporting only",
)

_SCHEMA = {
    "run": {"command"},
    "model": {"kind", "v1", "v2", "alpha", "c", "gamma", "alpha0", "a", "b"},
    "mass": {"kind", "m0", "x0"},
    "grid": {"a", "b", "n"},
    "solver": {"im_tol", "trim", "dim_cap", "refine", "tol_intertwine", "tol_dirac"},
    "scan": {"parameter", "values", "start", "stop", "steps"},
    "dirac": {"v0", "m0", "level", "bracket_lo", "bracket_hi"},
    "output": {"path", "format", "timestamp"},
}

_COMMANDS = ("solve", "verify", "scan", "dirac")


@dataclass
class RunConfig:
    command: str
    model_kind: str
    model_params: dict
    mass_kind: str
    mass_m0: float
    mass_x0: float
    grid_a: float
    grid_b: float
    grid_n: int
    im_tol: float | None
    trim: int
    dim_cap: int
    refine: bool
    tol_intertwine: float
    tol_dirac: float
    scan_parameter: str
    scan_values: tuple
    dirac_v0: float
    dirac_m0: float
    dirac_level: int
    dirac_bracket: tuple
    out_path: str | None
    out_format: str
    timestamp: bool
    config_text: str = field(repr=False, default="")


def _to_float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None


def _to_int(section, key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None


def _to_bool(section, key, raw):
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"[{section}] {key} = {raw!r} is not a boolean")


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a flat key = value config document."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    def get(section, key, default=None):
        if cp.has_option(section, key):
            return cp.get(section, key).strip()
        return default

    cmd = command or get("run", "command")
    if cmd not in _COMMANDS:
        raise ConfigError(f"command must be one of {_COMMANDS}, got {cmd!r}")

    kind = get("model", "kind", "pseudo_pt")
    params = {}
    if kind == "pseudo_pt":
        if get("model", "v2") is None:
            raise ConfigError("[model] v2 is required for pseudo_pt")
        params["v2"] = _to_float("model", "v2", get("model", "v2"))
        params["gamma"] = _to_float("model", "gamma", get("model", "gamma", "0.4"))
        params["alpha0"] = _to_float("model", "alpha0", get("model", "alpha0", "0"))
    elif kind == "pt_poschl_teller":
        for k in ("v1", "v2"):
            if get("model", k) is None:
                raise ConfigError(f"[model] {k} is required for pt_poschl_teller")
        params["v1"] = _to_float("model", "v1", get("model", "v1"))
        params["v2"] = _to_float("model", "v2", get("model", "v2"))
        params["alpha"] = _to_float("model", "alpha", get("model", "alpha", "1"))
        params["c"] = _to_float("model", "c", get("model", "c", "0"))
        params["gamma"] = _to_float("model", "gamma", get("model", "gamma", "0.4"))
    elif kind in ("eckart_hermitian", "eckart_complex"):
        for k in ("a", "b"):
            if get("model", k) is None:
                raise ConfigError(f"[model] {k} is required for {kind}")
        params["a"] = _to_float("model", "a", get("model", "a"))
        params["b"] = _to_float("model", "b", get("model", "b"))
    else:
        raise ConfigError(f"unknown model kind {kind!r}")

    mass_kind = get("mass", "kind", "constant")
    if mass_kind not in ("constant", "rational_x2m1"):
        raise ConfigError(f"unknown mass kind {mass_kind!r}")
    mass_m0 = _to_float("mass", "m0", get("mass", "m0", "1.0"))
    default_x0 = "1.4142135623730951" if mass_kind == "rational_x2m1" else "0.0"
    mass_x0 = _to_float("mass", "x0", get("mass", "x0", default_x0))

    if kind in ("eckart_hermitian", "eckart_complex"):
        ga, gb, gn = "0.05", "10.0", "1500"
    else:
        ga, gb, gn = "-12", "12", "1201"
    grid_a = _to_float("grid", "a", get("grid", "a", ga))
    grid_b = _to_float("grid", "b", get("grid", "b", gb))
    grid_n = _to_int("grid", "n", get("grid", "n", gn))
    if grid_a >= grid_b or grid_n < 3:
        raise ConfigError(f"[grid] invalid grid ({grid_a}, {grid_b}, {grid_n})")

    im_tol_raw = get("solver", "im_tol")
    im_tol = None if im_tol_raw in (None, "") else _to_float("solver", "im_tol", im_tol_raw)
    trim = _to_int("solver", "trim", get("solver", "trim", "2"))
    dim_cap = _to_int("solver", "dim_cap", get("solver", "dim_cap", "2000"))
    refine = _to_bool("solver", "refine", get("solver", "refine", "true"))
    tol_intertwine = _to_float("solver", "tol_intertwine", get("solver", "tol_intertwine", "2e-3"))
    tol_dirac = _to_float("solver", "tol_dirac", get("solver", "tol_dirac", "1e-3"))

    scan_parameter = get("scan", "parameter", "v2")
    values_raw = get("scan", "values")
    if values_raw:
        try:
            scan_values = tuple(float(v) for v in values_raw.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"[scan] values = {values_raw!r} is not a number list") from None
    elif get("scan", "start") is not None:
        start = _to_float("scan", "start", get("scan", "start"))
        stop = _to_float("scan", "stop", get("scan", "stop", str(start)))
        steps = _to_int("scan", "steps", get("scan", "steps", "1"))
        if steps < 1:
            raise ConfigError("[scan] steps must be >= 1")
        scan_values = tuple(np.linspace(start, stop, steps).tolist())
    else:
        scan_values = ()
    if cmd == "scan" and not scan_values:
        raise ConfigError("[scan] values (or start/stop/steps) required for the scan command")

    dirac_v0 = _to_float("dirac", "v0", get("dirac", "v0", "-0.5"))
    dirac_m0 = _to_float("dirac", "m0", get("dirac", "m0", "1.0"))
    dirac_level = _to_int("dirac", "level", get("dirac", "level", "0"))
    dirac_bracket = (_to_float("dirac", "bracket_lo", get("dirac", "bracket_lo", "0.05")),
                     _to_float("dirac", "bracket_hi", get("dirac", "bracket_hi", "0.95")))

    out_path = get("output", "path")
    out_format = get("output", "format", "json")
    if out_format not in ("json", "csv"):
        raise ConfigError(f"[output] format must be json or csv, got {out_format!r}")
    timestamp = _to_bool("output", "timestamp", get("output", "timestamp", "true"))

    # model invariants checked up front so bad parameters exit with code 2
    try:
        model = _build_model(kind, params)
    except PdemError as exc:
        raise ConfigError(str(exc)) from exc
    lo, hi = model.natural_domain()
    if cmd in ("solve", "verify", "scan") and (grid_a <= lo or grid_b >= hi):
        raise ConfigError(
            f"[grid] ({grid_a}, {grid_b}) outside the model's regular domain ({lo}, {hi})"
        )

    return RunConfig(
        command=cmd, model_kind=kind, model_params=params,
        mass_kind=mass_kind, mass_m0=mass_m0, mass_x0=mass_x0,
        grid_a=grid_a, grid_b=grid_b, grid_n=grid_n,
        im_tol=im_tol, trim=trim, dim_cap=dim_cap, refine=refine,
        tol_intertwine=tol_intertwine, tol_dirac=tol_dirac,
        scan_parameter=scan_parameter, scan_values=scan_values,
        dirac_v0=dirac_v0, dirac_m0=dirac_m0, dirac_level=dirac_level,
        dirac_bracket=dirac_bracket,
        out_path=out_path, out_format=out_format, timestamp=timestamp,
        config_text=text,
    )


def _build_model(kind: str, p: dict) -> PotentialModel:
    if kind == "pseudo_pt":
        return PotentialModel.pseudo_pt(p["v2"], gamma=p["gamma"], alpha0=p.get("alpha0", 0.0))
    if kind == "pt_poschl_teller":
        return PotentialModel.pt_poschl_teller(p["v1"], p["v2"], alpha=p["alpha"],
                                               c=p["c"], gamma=p["gamma"])
    if kind == "eckart_hermitian":
        return PotentialModel.eckart_hermitian(p["a"], p["b"])
    return PotentialModel.eckart_complex(p["a"], p["b"])


def _build_mass(cfg: RunConfig) -> MassProfile:
    if cfg.mass_kind == "constant":
        return MassProfile.constant(cfg.mass_m0)
    return MassProfile.rational_x2m1()


def _analytic_for(model: PotentialModel):
    if model.kind == "pseudo_pt":
        return analytic_spectrum_ptpt(model.V2)
    if model.kind in ("eckart_hermitian", "eckart_complex"):
        return analytic_spectrum_eckart(model.A, model.B, "standard")
    return None


@dataclass
class ResultDocument:
    """Self-describing record of one pipeline run."""

    command: str
    config_text: str
    body: dict
    gates: dict          # name -> {"passed": bool, ...detail}
    timestamp: str | None

    @property
    def passed(self) -> bool:
        return all(g.get("passed", True) for g in self.gates.values())

    def to_dict(self) -> dict:
        doc = {
            "command": self.command,
            "provenance_notes": list(PROVENANCE_NOTES),
            "config": self.config_text,
        }
        if self.timestamp is not None:
            doc["timestamp"] = self.timestamp
        doc.update(self.body)
        doc["gates"] = self.gates
        doc["passed"] = self.passed
        return doc


def _c2d(z) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _spectrum_block(spec, refined=None) -> dict:
    rows = []
    for lam, res in zip(spec.eigenvalues, spec.residual_norms):
        is_real = abs(lam.imag) <= spec.im_tol
        below = lam.real < spec.threshold
        cls = "real_bound" if (is_real and below) else ("complex" if below else "continuum")
        rows.append({"re": float(lam.real), "im": float(lam.imag),
                     "residual": float(res), "class": cls})
    block = {
        "threshold": float(spec.threshold),
        "im_tol": float(spec.im_tol),
        "real_levels": [float(e) for e in spec.real_levels],
        "complex_pairs": [[_c2d(z) for z in pair] for pair in spec.complex_pairs],
        "eigenvalues": rows,
    }
    if refined is not None:
        block["refined_levels"] = [float(e) for e in refined]
    return block


def _solve_core(model: PotentialModel, cfg: RunConfig):
    """Shared by solve and scan: spectrum, optional refinement, comparison."""
    grid = make_uniform_grid(cfg.grid_a, cfg.grid_b, cfg.grid_n)
    mass = _build_mass(cfg)
    if cfg.mass_kind == "constant" and cfg.mass_m0 == 1.0:
        V = evaluate_model(model, grid)
        op = discretize_schrodinger_q(V)
        shoot_domain = _shoot_domain_const(model, grid)
        shoot_V = model.potential()
    else:
        chart = chart_from_mass(mass, grid, cfg.mass_x0)
        V = pullback_potential(model.potential(), chart)
        op = discretize_pdem_x(mass, V)
        shoot_domain = chart.q_window()
        shoot_V = model.potential()
    raw = eig_dense(op, dim_cap=cfg.dim_cap)
    spec = classify_spectrum(raw, threshold=model.threshold(), im_tol=cfg.im_tol)
    refined = None
    if cfg.refine and spec.real_levels:
        refined = []
        for E in spec.real_levels:
            try:
                refined.append(complex(refine_shoot(shoot_V, E, shoot_domain)).real)
            except PdemError:
                refined.append(float(E))
        refined = _dedupe(sorted(refined))
    analytic = _analytic_for(model)
    compare = None
    if analytic is not None:
        levels = refined if refined is not None else list(spec.real_levels)
        probe = spec if refined is None else _with_levels(spec, refined)
        compare = spectrum_compare(probe, analytic, rtol=0.01,
                                   atol=max(0.05, 100 * np.finfo(float).eps))
    return spec, refined, analytic, compare


def _with_levels(spec, levels):
    from dataclasses import replace
    return replace(spec, real_levels=tuple(levels))


def _dedupe(levels, tol_scale=1e-6):
    out = []
    for e in levels:
        if not out or abs(e - out[-1]) > tol_scale * max(1.0, abs(e)):
            out.append(e)
    return out


def _shoot_domain_const(model: PotentialModel, grid):
    lo, hi = model.natural_domain()
    a = grid.a if np.isinf(lo) else max(lo, 0.0)
    b = grid.b if np.isinf(hi) else min(hi, grid.b)
    return (a, b)


def run_solve(cfg: RunConfig) -> ResultDocument:
    model = _build_model(cfg.model_kind, cfg.model_params)
    spec, refined, analytic, compare = _solve_core(model, cfg)
    body = {"model": {"kind": cfg.model_kind, **cfg.model_params},
            "grid": [cfg.grid_a, cfg.grid_b, cfg.grid_n],
            "spectrum": _spectrum_block(spec, refined)}
    gates = {}
    if analytic is not None:
        body["analytic"] = {
            "levels": [float(e) for e in analytic.energies],
            "threshold": float(analytic.threshold),
        }
        if cfg.model_kind in ("eckart_hermitian", "eckart_complex"):
            printed = analytic_spectrum_eckart(model.A, model.B, "as_printed")
            body["analytic"]["as_printed_levels"] = [float(e) for e in printed.energies]
        body["comparison"] = {
            "matches": [list(m) for m in compare.matches],
            "unmatched_numeric": list(compare.unmatched_numeric),
            "unmatched_analytic": list(compare.unmatched_analytic),
            "passed": compare.passed,
        }
        gates["analytic_match"] = {"passed": compare.passed,
                                   "rtol": compare.rtol, "atol": compare.atol}
    return _finish(cfg, "solve", body, gates)


def _verify_generator(cfg: RunConfig, model: PotentialModel):
    """Generator and sampling coordinate matching the configured model."""
    if cfg.model_kind == "pseudo_pt":
        gen = Generator.cosech(model.V2, alpha0=model.alpha0)
        convention = "pseudo"

        def coord(x):
            return np.asarray(x, dtype=complex) - 1j * model.gamma
    elif cfg.model_kind in ("eckart_hermitian",):
        gen = Generator.coth_shift(model.A, model.B)
        convention = "hermitian"

        def coord(q):
            return np.asarray(q, dtype=complex)
    else:
        return None, None, None
    return gen, convention, coord


def _intertwine_at(cfg, gen, convention, coord, n):
    grid = make_uniform_grid(cfg.grid_a, cfg.grid_b, n)
    mass = _build_mass(cfg)
    T = coord(grid.points)
    F = ComplexField(grid, gen.F(T))
    Vfun = v_from_generator(gen, convention)
    V = ComplexField(grid, Vfun(T))
    if cfg.mass_kind == "constant" and cfg.mass_m0 == 1.0:
        H = discretize_schrodinger_q(V)
    else:
        H = discretize_pdem_x(mass, V)
    eta = discretize_eta(F, mass, which=2)
    return intertwining_residual(H, eta, trim=cfg.trim), V


def run_verify(cfg: RunConfig) -> ResultDocument:
    model = _build_model(cfg.model_kind, cfg.model_params)
    gates = {}
    body = {"model": {"kind": cfg.model_kind, **cfg.model_params},
            "grid": [cfg.grid_a, cfg.grid_b, cfg.grid_n]}
    gen, convention, coord = _verify_generator(cfg, model)
    if gen is not None:
        n1 = cfg.grid_n
        n2 = 2 * n1 - 1
        r1, V1 = _intertwine_at(cfg, gen, convention, coord, n1)
        r2, _ = _intertwine_at(cfg, gen, convention, coord, n2)
        ratio = r1 / r2 if r2 > 0 else np.inf
        body["intertwining"] = {"residual_h": r1, "residual_h_half": r2, "ratio": ratio,
                                "convention": convention}
        gates["intertwining_residual"] = {"passed": r1 <= cfg.tol_intertwine,
                                          "value": r1, "tolerance": cfg.tol_intertwine}
        gates["intertwining_order"] = {"passed": bool(3.5 <= ratio <= 4.5),
                                       "ratio": ratio, "window": [3.5, 4.5]}
        grid = make_uniform_grid(cfg.grid_a, cfg.grid_b, n1)
        mass = _build_mass(cfg)
        cons1 = constraint_residuals(gen, mass, grid)
        grid2 = make_uniform_grid(cfg.grid_a, cfg.grid_b, n2)
        cons2 = constraint_residuals(gen, mass, grid2)
        body["constraints"] = {
            "algebraic_h": cons1.algebraic, "chain_rule_h": cons1.chain_rule,
            "algebraic_h_half": cons2.algebraic, "chain_rule_h_half": cons2.chain_rule,
        }
        gates["constraint_algebraic"] = {"passed": cons1.algebraic == 0.0,
                                         "value": cons1.algebraic}
    grid = make_uniform_grid(cfg.grid_a, cfg.grid_b, cfg.grid_n)
    if grid.symmetric:
        V = evaluate_model(model, grid)
        r_pt = pt_residual(V)
        body["pt_residual"] = r_pt
        if cfg.model_kind == "pt_poschl_teller":
            gates["pt_symmetric"] = {"passed": r_pt <= 1e-12, "value": r_pt,
                                     "tolerance": 1e-12}
        elif cfg.model_kind == "pseudo_pt":
            bar = 0.1 * float(np.abs(V.values.imag).max())
            gates["pt_broken"] = {"passed": r_pt > bar, "value": r_pt, "floor": bar}
    return _finish(cfg, "verify", body, gates)


def _scan_one(cfg: RunConfig, value: float):
    params = dict(cfg.model_params)
    params[cfg.scan_parameter] = value
    model = _build_model(cfg.model_kind, params)
    spec, refined, analytic, compare = _solve_core(model, cfg)
    levels = refined if refined is not None else [float(e) for e in spec.real_levels]
    return {"param": float(value), "count": len(levels),
            "levels": [float(e) for e in levels],
            "passed": compare.passed if compare is not None else True}


def run_scan(cfg: RunConfig) -> ResultDocument:
    workers = int(os.environ.get("PDEM_WORKERS", os.cpu_count() or 1))
    rows = []
    if workers > 1 and len(cfg.scan_values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda v: _scan_one(cfg, v), cfg.scan_values))
    else:
        rows = [_scan_one(cfg, v) for v in cfg.scan_values]
    rows.sort(key=lambda r: r["param"])
    body = {"model": {"kind": cfg.model_kind, **cfg.model_params},
            "scan": {"parameter": cfg.scan_parameter, "rows": rows}}
    gates = {"scan_matches": {"passed": all(r["passed"] for r in rows)}}
    return _finish(cfg, "scan", body, gates)


def run_dirac(cfg: RunConfig) -> ResultDocument:
    grid = make_uniform_grid(cfg.grid_a, cfg.grid_b, cfg.grid_n)
    v_vals = cfg.dirac_v0 / np.cosh(grid.points) ** 2
    model = DiracModel(v=ComplexField(grid, v_vals.astype(complex)),
                       M=MassProfile.constant(cfg.dirac_m0))
    sol = solve_dirac_energy(model, cfg.dirac_level, cfg.dirac_bracket)
    body = {
        "dirac": {
            "v0": cfg.dirac_v0, "m0": cfg.dirac_m0, "level": cfg.dirac_level,
            "eps": sol.eps, "eps_squared": sol.eps ** 2,
            "residual_coupled": sol.residual_coupled,
            "residual_construction": sol.residual_construction,
            "g_value": sol.g_value, "iterations": sol.iterations,
        },
        "grid": [cfg.grid_a, cfg.grid_b, cfg.grid_n],
    }
    gates = {"dirac_residual": {"passed": sol.residual_coupled <= cfg.tol_dirac,
                                "value": sol.residual_coupled,
                                "tolerance": cfg.tol_dirac}}
    return _finish(cfg, "dirac", body, gates)


def _finish(cfg: RunConfig, command: str, body: dict, gates: dict) -> ResultDocument:
    stamp = datetime.now(timezone.utc).isoformat() if cfg.timestamp else None
    return ResultDocument(command=command, config_text=cfg.config_text,
                          body=body, gates=gates, timestamp=stamp)


RUNNERS = {"solve": run_solve, "verify": run_verify, "scan": run_scan, "dirac": run_dirac}


def export(doc: ResultDocument, fmt: str = "json") -> str:
    """Serialize a document; deterministic field order, exact float round trip."""
    if fmt == "json":
        return json.dumps(doc.to_dict(), indent=2) + "\n"
    if fmt != "csv":
        raise ConfigError(f"unknown export format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if doc.command == "scan":
        w.writerow(["param", "count", "E0", "E1", "E2", "E3"])
        for row in doc.body["scan"]["rows"]:
            levels = list(row["levels"])[:4]
            levels += [""] * (4 - len(levels))
            w.writerow([_f17(row["param"]), row["count"]] +
                       [_f17(e) if e != "" else "" for e in levels])
    elif "spectrum" in doc.body:
        w.writerow(["index", "re", "im", "residual", "class"])
        for i, row in enumerate(doc.body["spectrum"]["eigenvalues"]):
            w.writerow([i, _f17(row["re"]), _f17(row["im"]),
                        _f17(row["residual"]), row["class"]])
    else:
        w.writerow(["gate", "passed", "detail"])
        for name, g in doc.gates.items():
            w.writerow([name, g.get("passed"), json.dumps(g)])
    return buf.getvalue()


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pdem",
        description="spectra and operator diagnostics for generator-built "
                    "non-hermitian Hamiltonians with position-dependent mass",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in _COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--config", required=True, help="path to the run config file")
        p.add_argument("--out", default=None, help="write the result document here")
        p.add_argument("--format", default=None, choices=["json", "csv"])
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp for byte-identical reruns")
    args = parser.parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, command=args.command)
        if args.no_timestamp:
            cfg.timestamp = False
        if args.format:
            cfg.out_format = args.format
        if args.out:
            cfg.out_path = args.out
        doc = RUNNERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PdemError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    payload = export(doc, cfg.out_format)
    if cfg.out_path:
        try:
            with open(cfg.out_path, "w", encoding="utf-8") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"io error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(payload)
    return 0 if doc.passed else 1


if __name__ == "__main__":
    sys.exit(main())
