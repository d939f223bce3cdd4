"""Command-line front end.

Commands: ``sweep``, ``resonances``, ``verify``, ``conservation``,
``amplitudes``. Model parameters come from ``--preset``, then ``--config``
(JSON, keys mirror the long flags), then explicit flags, later sources
overriding earlier ones.

Exit codes: 0 success, 1 verification failure, 2 usage or model errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, analytic, oracle
from .compare import compare
from .errors import ScatteringError
from .model import ScatteringModel, build_model_a, build_model_b, build_model_c
from .presets import PRESETS
from .sweep import DEFAULT_STEPS, SweepSpec, conservation_audit, run_sweep_axis

MODEL_KEYS = ("J", "J_par", "Ed", "gamma", "J_perp", "J1", "J2", "Ed1", "Ed2", "gamma1", "gamma2")
ALLOWED = {
    "a": {"J", "J_par", "Ed", "gamma"},
    "b": {"J", "J_par", "Ed", "gamma", "J_perp", "J1", "J2", "Ed1", "Ed2", "gamma1", "gamma2"},
    "c": {"J", "J_perp", "Ed", "gamma"},
}
VARY_FLAG = {"gamma": "gamma", "J_perp": "J_perp", "J1": "J1", "J2": "J2", "E_d1": "Ed1", "E_d2": "Ed2"}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--config", help="JSON file whose keys mirror the long flags")
    g.add_argument("--model", choices=("a", "b", "c"), type=str.lower)
    for key in MODEL_KEYS:
        flag = "--" + key.replace("_", "-")
        g.add_argument(flag, dest=key, type=float)
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--output", "-o", help="output path (default: standard output)")
    o.add_argument("--oracle", action="store_true", default=None, help="also run the linear-solve oracle")
    o.add_argument("--tol", type=float)
    grid = common.add_argument_group("grid")
    grid.add_argument("--omega-min", type=float)
    grid.add_argument("--omega-max", type=float)
    grid.add_argument("--steps", type=int)
    grid.add_argument("--omega", type=float, nargs="+", help="frequencies for 'amplitudes'")
    grid.add_argument("--vary", choices=sorted(VARY_FLAG), help="secondary sweep axis")
    grid.add_argument("--values", type=float, nargs="+", help="values of the secondary axis")

    p = argparse.ArgumentParser(prog="ptfano", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"ptfano {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [("sweep", "T, R and phase over a frequency grid"),
                       ("resonances", "closed-form perfect reflection/transmission frequencies"),
                       ("verify", "closed forms against the linear-solve oracle"),
                       ("conservation", "max |R+T-1| over a frequency grid"),
                       ("amplitudes", "complex t, r, B1, B2 at given frequencies")]:
        sub.add_parser(name, parents=[common], help=text)
    return p


def _resolve(ns: argparse.Namespace) -> dict:
    """Merge preset < config < flags into one settings dict."""
    cfg: dict = {}
    vary = None
    if ns.preset:
        variant, params, vary = PRESETS[ns.preset]
        cfg["model"] = variant.lower()
        rename = {"E_d": "Ed", "E_d1": "Ed1", "E_d2": "Ed2"}
        cfg.update({rename.get(k, k): v for k, v in params.items()})
        if vary:
            cfg["vary"] = next(f for f, a in VARY_FLAG.items() if a == vary[0] or f == vary[0])
            cfg["values"] = list(vary[1])
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in data.items():
            cfg[key.replace("-", "_").lstrip("_")] = val
    for key, val in vars(ns).items():
        if key in ("preset", "config", "command") or val is None:
            continue
        cfg[key] = val
    if ns.preset and str(cfg.get("model", "")).lower() != PRESETS[ns.preset][0].lower():
        raise UsageError(f"--model conflicts with preset {ns.preset}")
    return cfg


def _build(cfg: dict) -> ScatteringModel:
    variant = str(cfg.get("model", "")).lower()
    if variant not in ALLOWED:
        raise UsageError("a model is required: --model a|b|c or --preset")
    given = {k for k in MODEL_KEYS if cfg.get(k) is not None}
    extra = given - ALLOWED[variant]
    if extra:
        raise UsageError(f"flags not valid for model {variant}: "
                         + ", ".join("--" + e.replace("_", "-") for e in sorted(extra)))

    def need(*keys):
        for key in keys:
            if cfg.get(key) is not None:
                return float(cfg[key])
        raise UsageError(f"model {variant} needs --{keys[0].replace('_', '-')}")

    def opt(key, default=0.0):
        return float(cfg[key]) if cfg.get(key) is not None else default

    if variant == "a":
        return build_model_a(need("J"), need("J_par"), need("Ed"), opt("gamma"))
    if variant == "c":
        return build_model_c(need("J"), need("J_perp"), need("Ed"), opt("gamma"))
    g1 = opt("gamma1", opt("gamma"))
    g2 = opt("gamma2", -g1 if cfg.get("gamma1") is None else -opt("gamma"))
    return build_model_b(need("J"), need("J1", "J_par"), need("J2", "J_par"), need("Ed1", "Ed"),
                         need("Ed2", "Ed"), g1, g2, opt("J_perp"))


def _num(x) -> str:
    return "%.17g" % x


def _clean(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _meta(command: str, model: ScatteringModel, cfg: dict, **extra) -> dict:
    meta = {"tool": "ptfano", "version": __version__, "command": command,
            "model": {"variant": model.variant, **{k: float(v) for k, v in model.params.items()}}}
    meta.update(extra)
    return meta


def _emit(fmt: str, meta: dict, columns: list[str], rows: list[dict], extra: dict | None = None) -> str:
    if fmt == "json":
        body = {"meta": meta}
        if not extra or "roots" not in extra:
            body["rows"] = [{k: _clean(v) for k, v in r.items()} for r in rows]
        body.update(extra or {})
        return json.dumps(body, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_num(r[c]) if isinstance(r[c], float) else r[c] for c in columns])
    return buf.getvalue()


def _grid_spec(model: ScatteringModel, cfg: dict, use_oracle: bool) -> SweepSpec:
    vary = None
    if cfg.get("vary"):
        if not cfg.get("values"):
            raise UsageError("--vary needs --values")
        vary = (cfg["vary"], tuple(float(v) for v in cfg["values"]))
    return SweepSpec(model, cfg.get("omega_min"), cfg.get("omega_max"),
                     int(cfg.get("steps") or DEFAULT_STEPS), use_oracle, vary)


def _cmd_sweep(model, cfg, fmt):
    spec = _grid_spec(model, cfg, bool(cfg.get("oracle")))
    results = run_sweep_axis(spec)
    axis = spec.vary[0] if spec.vary else None
    cols = ([axis] if axis else []) + ["omega", "k", "T", "R", "sum", "phase_wrapped", "phase_unwrapped", "flags"]
    rows, jumps = [], []
    for res in results:
        for row in res.rows:
            d = {"omega": row.omega, "k": row.k, "T": row.T, "R": row.R, "sum": row.sum,
                 "phase_wrapped": row.phase_wrapped, "phase_unwrapped": row.phase_unwrapped,
                 "flags": ";".join(row.flags)}
            if axis:
                d = {axis: res.axis[1], **d}
            rows.append(d)
        for j in res.jumps:
            jd = {"omega_lo": j.omega_lo, "omega_hi": j.omega_hi, "sign": j.sign,
                  "omega_at_min": j.omega_at_min, "min_abs_t": j.min_abs_t}
            jumps.append({axis: res.axis[1], **jd} if axis else jd)
    meta = _meta("sweep", model, cfg, grid={"omega_min": spec.omega_min, "omega_max": spec.omega_max,
                                              "steps": spec.steps},
                 source=results[0].source, vary=({"name": axis, "values": list(spec.vary[1])} if axis else None))
    return _emit(fmt, meta, cols, rows, {"jumps": jumps}), 0


def _cmd_resonances(model, cfg, fmt):
    if model.variant not in ("A", "B"):
        raise UsageError("closed-form resonances exist for models a and b only")
    rs = analytic.resonances(model)
    edge = 2 * abs(model.J)
    roots = ([{"kind": "reflection", "omega": w, "in_band": abs(w) < edge} for w in rs.perfect_reflection]
             + [{"kind": "transmission", "omega": w, "in_band": abs(w) < edge} for w in rs.perfect_transmission])
    conditions = {"discriminant": rs.discriminant, "critical_gamma": rs.critical_gamma,
                  "degenerate": rs.degenerate}
    meta = _meta("resonances", model, cfg)
    if fmt == "json":
        return _emit(fmt, meta, [], [], {"roots": roots, "conditions": conditions}), 0
    for r in roots:
        r["in_band"] = str(r["in_band"]).lower()
    return _emit(fmt, meta, ["kind", "omega", "in_band"], roots), 0


def _cmd_verify(model, cfg, fmt):
    tol = float(cfg.get("tol") if cfg.get("tol") is not None else 1e-9)
    spec = _grid_spec(model, cfg, True)
    rep = compare(model, spec.grid())
    ok = rep.max_deviation <= tol
    row = {"variant": model.variant, "points": len(rep.omegas), "excluded": len(rep.excluded),
           "max_dt": rep.max_dt, "max_dr": rep.max_dr, "tol": tol, "passed": str(ok).lower()}
    meta = _meta("verify", model, cfg, grid={"omega_min": spec.omega_min, "omega_max": spec.omega_max,
                                               "steps": spec.steps})
    return _emit(fmt, meta, list(row), [row]), 0 if ok else 1


def _cmd_conservation(model, cfg, fmt):
    tol = float(cfg.get("tol") if cfg.get("tol") is not None else 1e-10)
    spec = _grid_spec(model, cfg, bool(cfg.get("oracle")))
    dev, at = conservation_audit(model, spec.grid(), cross_check=spec.use_oracle)
    ok = dev <= tol
    row = {"variant": model.variant, "max_deviation": dev, "at_omega": at, "tol": tol, "passed": str(ok).lower()}
    meta = _meta("conservation", model, cfg, grid={"omega_min": spec.omega_min, "omega_max": spec.omega_max,
                                                     "steps": spec.steps})
    return _emit(fmt, meta, list(row), [row]), 0 if ok else 1


def _cmd_amplitudes(model, cfg, fmt):
    omegas = cfg.get("omega")
    if not omegas:
        raise UsageError("amplitudes needs --omega")
    if isinstance(omegas, (int, float)):
        omegas = [omegas]
    use_oracle = bool(cfg.get("oracle"))
    rows = []
    for w in omegas:
        w = float(w)
        if use_oracle:
            s = oracle.solve_scattering(model, w)
            flags = ""
        else:
            s = analytic.amplitudes(model, w)
            flags = ";".join(s.flags)
        rows.append({"omega": w, "k": s.k, "t_re": s.t.real, "t_im": s.t.imag, "r_re": s.r.real,
                     "r_im": s.r.imag, "B1_re": s.B1.real, "B1_im": s.B1.imag, "B2_re": s.B2.real,
                     "B2_im": s.B2.imag, "T": s.T, "R": s.R, "sum": s.T + s.R,
                     "phase": s.phase_sigma, "flags": flags})
    meta = _meta("amplitudes", model, cfg, source="oracle" if use_oracle else "analytic")
    return _emit(fmt, meta, list(rows[0]), rows), 0


COMMANDS = {"sweep": _cmd_sweep, "resonances": _cmd_resonances, "verify": _cmd_verify,
            "conservation": _cmd_conservation, "amplitudes": _cmd_amplitudes}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(ns)
        fmt = cfg.get("format") or ("json" if ns.command == "resonances" else "csv")
        if fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {fmt!r}")
        model = _build(cfg)
        text, code = COMMANDS[ns.command](model, cfg, fmt)
    except (UsageError, ScatteringError) as exc:
        print(f"ptfano: error: {exc}", file=sys.stderr)
        return 2
    if cfg.get("output"):
        try:
            with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"ptfano: error: cannot write {cfg['output']}: {exc}", file=sys.stderr)
            return 2
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader closed early (e.g. piped into head); silence the flush at exit
            os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    if ns.command in ("verify", "conservation"):
        print(f"ptfano: {ns.command} {'passed' if code == 0 else 'FAILED'}", file=sys.stderr)
    return code
