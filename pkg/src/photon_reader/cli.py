"""``photon-reader`` command-line front end.

Subcommands write CSV (canonical), JSON or SVG. Every output embeds the fully
resolved configuration. Flags override ``--config`` (a JSON object keyed by
flag name) which overrides the built-in defaults.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .exponents import exponent_contours, min_pixels_for_pie
from .montecarlo import (
    MAX_SIM_M,
    InfeasibleTarget,
    TrialPlan,
    estimate_word_error,
    pixels_for_target,
)
from .optics import ReadScheme
from .svg import contour_plot, line_plot
from .transceivers import LossModel, SchemeId, apply_loss, capacity, holevo_g

COMMANDS = ("pie-curve", "tradeoff", "simulate", "exponent", "budget")

DEFAULTS = {
    "schemes": "all",
    "ns_min": 1e-4,
    "ns_max": 10.0,
    "ns_points": 61,
    "ns": None,
    "m": 1024,
    "kappa": "1.0",
    "k_copies": None,
    "epsilon": 1e-3,
    "pie": "5",
    "trials": 10_000,
    "seed": 0,
    "out": "-",
    "format": None,
    "deterministic": False,
    "pie_min": 1.0,
    "pie_max": 8.0,
    "pie_points": 57,
}

FORMATS = {
    "pie-curve": ("csv", "json", "svg"),
    "tradeoff": ("csv", "json", "svg"),
    "simulate": ("json", "csv"),
    "exponent": ("csv", "json", "svg"),
    "budget": ("csv", "json"),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    values: dict
    failures: list = field(default_factory=list)

    def __getattr__(self, name):
        try:
            return self.values[name]
        except KeyError:
            raise AttributeError(name) from None

    def echo(self) -> dict:
        return {"command": self.command, **{k: v for k, v in sorted(self.values.items()) if k != "out"}}


def _float_list(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


def _schemes(text) -> list[SchemeId]:
    if isinstance(text, (list, tuple)):
        text = ",".join(text)
    names = [s for s in str(text).split(",") if s.strip()]
    if not names:
        raise UsageError("scheme list is empty")
    if [n.strip().lower() for n in names] == ["all"]:
        return list(SchemeId)
    try:
        return [SchemeId.parse(n) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ns_grid(cfg: RunConfig) -> np.ndarray:
    lo, hi, n = float(cfg.ns_min), float(cfg.ns_max), int(cfg.ns_points)
    if n < 1:
        raise UsageError("n_s grid is empty (--ns-points must be >= 1)")
    if not (0 < lo <= hi):
        raise UsageError("n_s grid needs 0 < ns-min <= ns-max")
    return np.array([lo]) if n == 1 else np.logspace(math.log10(lo), math.log10(hi), n)


def _csv_text(cfg: RunConfig, header: list[str], rows: list[list], extra_meta: list[str] = ()) -> str:
    buf = io.StringIO()
    buf.write(f"# photon-reader {__version__} {cfg.command}\n")
    buf.write(f"# config: {json.dumps(cfg.echo(), sort_keys=True)}\n")
    if not cfg.deterministic:
        buf.write(f"# generated: {time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}\n")
    for line in extra_meta:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {str(k): _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return _json_safe(v.item())
    if isinstance(v, (SchemeId, ReadScheme)):
        return v.value
    return v


def _json_text(cfg: RunConfig, payload: dict) -> str:
    doc = {"config": cfg.echo(), "version": __version__, **payload}
    if not cfg.deterministic:
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n"


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.out}: {exc}") from None


def _aux_text(aux: dict) -> str:
    parts = []
    for k, v in sorted(aux.items()):
        parts.append(f"{k}={v:.10g}" if isinstance(v, float) else f"{k}={_csv_cell(v)}")
    return ";".join(parts)


def _curve_rows(cfg: RunConfig):
    schemes = _schemes(cfg.schemes)
    grid = _ns_grid(cfg)
    kappas = _float_list(cfg.kappa)
    if len(kappas) != 1:
        raise UsageError("curve commands take a single --kappa")
    loss = LossModel(kappas[0])
    rows = []
    for scheme in schemes:
        for n_s in grid:
            try:
                if loss.kappa < 1.0:
                    pt = apply_loss(scheme, n_s, loss)
                else:
                    pt = capacity(scheme, n_s)
            except ValueError as exc:
                if scheme is SchemeId.W_STATE and n_s > 0.5:
                    continue  # outside the scheme's domain, not a failure
                cfg.failures.append(f"{scheme.value} n_s={n_s:g}: {exc}")
                continue
            rows.append((scheme, float(n_s), pt))
    return rows


def cmd_pie_curve(cfg: RunConfig) -> str:
    rows = _curve_rows(cfg)
    fmt = cfg.format
    if fmt == "svg":
        series = {}
        for scheme, n_s, pt in rows:
            xs, ys = series.setdefault(scheme.value, ([], []))
            xs.append(n_s)
            ys.append(pt.pie_bits_per_photon)
        return line_plot(series, "Photon information efficiency vs mean photon number",
                         "N_S (photons/pixel)", "PIE (bits/photon)", meta=json.dumps(cfg.echo()))
    if fmt == "json":
        return _json_text(cfg, {"points": [
            {"scheme": s.value, "n_s": n, "capacity_bits_per_pixel": p.capacity_bits_per_pixel,
             "pie_bpp": p.pie_bits_per_photon, "aux": p.aux} for s, n, p in rows]})
    return _csv_text(
        cfg,
        ["scheme", "n_s", "capacity_bits_per_pixel", "pie_bpp", "aux"],
        [[s.value, n, p.capacity_bits_per_pixel, p.pie_bits_per_photon, _aux_text(p.aux)] for s, n, p in rows],
    )


def cmd_tradeoff(cfg: RunConfig) -> str:
    rows = _curve_rows(cfg)
    table = []
    for scheme, n_s, pt in rows:
        detected = pt.aux.get("detected_n_s", n_s)
        table.append([scheme.value, n_s, pt.capacity_bits_per_pixel, pt.pie_bits_per_photon,
                      holevo_g(detected), scheme is SchemeId.OOK_DIRECT])
    if cfg.format == "svg":
        series = {}
        for r in table:
            xs, ys = series.setdefault(r[0], ([], []))
            xs.append(r[2])
            ys.append(r[3])
        return line_plot(series, "Photon efficiency vs encoding efficiency", "bits/pixel", "bits/photon",
                         xlog=True, ylog=True, meta=json.dumps(cfg.echo()))
    header = ["scheme", "n_s", "bits_per_pixel", "bits_per_photon", "holevo_bits_per_pixel", "conventional"]
    if cfg.format == "json":
        return _json_text(cfg, {"points": [dict(zip(header, r)) for r in table]})
    return _csv_text(cfg, header, table,
                     ["conventional=true marks the on-off direct-detection curve (conventional drives)"])


def _read_scheme(name) -> ReadScheme:
    key = str(name).strip().upper().replace("-", "_")
    if key in ("GM_HADAMARD", "COHERENT_GM", "GM"):
        return ReadScheme.COHERENT_GM
    if key == "W_STATE":
        return ReadScheme.W_STATE
    raise UsageError(f"simulate supports GM_HADAMARD (coherent Green Machine) or W_STATE, got {name!r}")


def cmd_simulate(cfg: RunConfig) -> str:
    schemes = [s for s in str(cfg.schemes).split(",") if s.strip()]
    if len(schemes) != 1 or schemes[0].lower() == "all":
        raise UsageError("simulate needs exactly one scheme via --schemes (GM_HADAMARD or W_STATE)")
    scheme = _read_scheme(schemes[0])
    m = int(cfg.m)
    if m > MAX_SIM_M:
        raise UsageError(f"simulation is capped at M = 2^20 (got {m}); use `budget` for analytic large-M results")
    kappas = _float_list(cfg.kappa)
    if len(kappas) != 1:
        raise UsageError("simulate takes a single --kappa")
    n_s = cfg.ns
    if scheme is ReadScheme.COHERENT_GM and n_s is None:
        raise UsageError("the coherent Green Machine needs --ns")
    try:
        plan = TrialPlan(
            scheme, m, int(cfg.trials), int(cfg.seed),
            n_s=None if n_s is None else float(n_s),
            kappa=kappas[0],
            k_copies=int(cfg.k_copies or 1),
        )
    except ValueError as exc:
        raise UsageError(f"invalid plan: {exc}") from None
    est = estimate_word_error(plan)
    p = plan.analytic_word_error()
    sigma = math.sqrt(p * (1.0 - p) / plan.trials)
    q = plan.analytic_erasure()
    sigma_q = math.sqrt(q * (1.0 - q) / plan.trials)
    report = {
        "scheme": scheme.value,
        "m": m,
        "trials": plan.trials,
        "errors": est.errors,
        "p_e_hat": est.p_e_hat,
        "stderr": est.stderr,
        "erasure_rate": est.erasure_rate,
        "multi_clicks": est.multi_clicks,
        "analytic_p_e": p,
        "analytic_erasure": q,
        "z_score": (est.p_e_hat - p) / sigma if sigma > 0 else None,
        "erasure_z_score": (est.erasure_rate - q) / sigma_q if sigma_q > 0 else None,
    }
    if cfg.format == "csv":
        keys = list(report)
        return _csv_text(cfg, keys, [[report[k] for k in keys]])
    return _json_text(cfg, {"report": report})


def _comparison(pie: float, epsilon: float) -> dict:
    out = {}
    try:
        out["optimal_jdr_m_ub"] = min_pixels_for_pie(pie, epsilon).m_ub
    except InfeasibleTarget:
        out["optimal_jdr_m_ub"] = None
    for key, scheme in (("green_machine_m", ReadScheme.COHERENT_GM), ("w_state_m", ReadScheme.W_STATE)):
        try:
            out[key] = pixels_for_target(scheme, pie, epsilon).m
        except InfeasibleTarget:
            out[key] = None
    return out


def cmd_exponent(cfg: RunConfig) -> str:
    pies = _float_list(cfg.pie)
    if not pies:
        raise UsageError("--pie list is empty")
    eps = float(cfg.epsilon)
    if not 0 < eps < 1:
        raise UsageError("--epsilon must lie in (0, 1)")
    grid = _ns_grid(cfg)
    if int(cfg.pie_points) < 1:
        raise UsageError("--pie-points must be >= 1")
    pie_axis = np.linspace(float(cfg.pie_min), float(cfg.pie_max), int(cfg.pie_points))
    table = exponent_contours(pie_axis, grid, eps)

    summary = []
    for pie in pies:
        try:
            b = min_pixels_for_pie(pie, eps)
            summary.append({"pie": pie, "min_m_ub": b.m_ub, "n_s_at_min": b.n_s, "e_lb": b.e_lb,
                            "rate_over_capacity": b.rate_over_capacity, **_comparison(pie, eps)})
        except InfeasibleTarget as exc:
            cfg.failures.append(str(exc))
            summary.append({"pie": pie, "min_m_ub": None})
    for s in summary:
        print(f"pie={s['pie']:g} bits/photon epsilon={eps:g}: min M_UB = {s['min_m_ub']}"
              + (f" (GM {s.get('green_machine_m')}, W-state {s.get('w_state_m')})" if s.get("min_m_ub") else ""),
              file=sys.stderr)

    if cfg.format == "svg":
        finite = table.m_ub[np.isfinite(table.m_ub)]
        levels = [v for v in (30, 100, 300, 1000, 3000, 4800, 10000, 30000, 100000)
                  if finite.size and finite.min() <= v <= finite.max()]
        lines = {"capacity boundary": (list(table.n_s), list(table.boundary_pie))}
        for pie in pies:
            lines[f"{pie:g} bits/photon"] = ([table.n_s[0], table.n_s[-1]], [pie, pie])
        return contour_plot(table.n_s, table.pie, table.m_ub, levels,
                            f"M_UB contours, epsilon={eps:g}", "N_S (photons/pixel)", "PIE R/N_S (bits/photon)",
                            extra_lines=lines, meta=json.dumps({"config": cfg.echo(), "summary": summary}))
    if cfg.format == "json":
        return _json_text(cfg, {
            "summary": summary,
            "grid": [{"n_s": n, "pie": p, "e_lb": e, "m_ub": m} for n, p, e, m in table.rows()],
            "capacity_boundary": [{"n_s": float(n), "pie": float(p)} for n, p in zip(table.n_s, table.boundary_pie)],
        })
    rows = [["grid", n, p, e, m] for n, p, e, m in table.rows()]
    rows += [["boundary", float(n), float(p), 0.0, math.inf] for n, p in zip(table.n_s, table.boundary_pie)]
    meta = [f"summary: {json.dumps(_json_safe(s), sort_keys=True)}" for s in summary]
    return _csv_text(cfg, ["kind", "n_s", "pie", "e_lb", "m_ub"], rows, meta)


def cmd_budget(cfg: RunConfig) -> str:
    pies = _float_list(cfg.pie)
    kappas = _float_list(cfg.kappa)
    if not pies or not kappas:
        raise UsageError("--pie and --kappa lists must be non-empty")
    eps = float(cfg.epsilon)
    variants = [
        ("GM_HADAMARD", ReadScheme.COHERENT_GM, None),
        ("W_STATE_K_COPY", ReadScheme.W_STATE, None if cfg.k_copies is None else int(cfg.k_copies)),
        ("W_STATE_SINGLE_SHOT", ReadScheme.W_STATE, 1),
    ]
    header = ["pie_target", "epsilon", "kappa", "scheme", "m", "log2_m", "k_copies", "n_s", "pie", "pie_unit",
              "p_e", "status"]
    rows = []
    for pie in pies:
        for kappa in kappas:
            for label, scheme, k in variants:
                try:
                    r = pixels_for_target(scheme, pie, eps, kappa, k_copies=k)
                    rows.append([pie, eps, kappa, label, r.m, r.log2_m, r.k_copies, r.n_s, r.pie, r.pie_unit,
                                 r.p_e, "ok"])
                except (InfeasibleTarget, ValueError) as exc:
                    rows.append([pie, eps, kappa, label, None, None, k, None, None, None, None,
                                 f"infeasible: {exc}"])
    if cfg.format == "json":
        return _json_text(cfg, {"rows": [dict(zip(header, r)) for r in rows]})
    return _csv_text(cfg, header, [["" if v is None else v for v in r] for r in rows])


HANDLERS = {
    "pie-curve": cmd_pie_curve,
    "tradeoff": cmd_tradeoff,
    "simulate": cmd_simulate,
    "exponent": cmd_exponent,
    "budget": cmd_budget,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photon-reader",
        description="Capacity, photon efficiency and error-exponent trade-offs of optical reading.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file of option values (keys as flag names)")
    parser.add_argument("--schemes", help="comma-separated scheme names, or 'all'")
    parser.add_argument("--ns-min", type=float)
    parser.add_argument("--ns-max", type=float)
    parser.add_argument("--ns-points", type=int)
    parser.add_argument("--ns", type=float, help="photons per pixel for simulate")
    parser.add_argument("--m", type=int, help="block length (pixels)")
    parser.add_argument("--kappa", help="transmissivity, or a comma list for budget")
    parser.add_argument("--k-copies", type=int)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--pie", help="target bits/photon, comma list allowed")
    parser.add_argument("--pie-min", type=float)
    parser.add_argument("--pie-max", type=float)
    parser.add_argument("--pie-points", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=("csv", "json", "svg"))
    parser.add_argument("--deterministic", action="store_true", default=None,
                        help="omit timestamps so identical runs are byte-identical")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in loaded.items():
            key = key.replace("-", "_")
            if key not in values:
                raise UsageError(f"unknown config key {key!r}")
            values[key] = val
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            values[key] = val
    if args.command == "simulate" and values["schemes"] == "all":
        values["schemes"] = "W_STATE"
    fmt = values["format"] or FORMATS[args.command][0]
    if fmt not in FORMATS[args.command]:
        raise UsageError(f"{args.command} does not support --format {fmt}")
    values["format"] = fmt
    values["deterministic"] = bool(values["deterministic"])
    return RunConfig(args.command, values)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        text = HANDLERS[cfg.command](cfg)
        _write(cfg, text)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"photon-reader: error: {exc}", file=sys.stderr)
        return 2
    if cfg.failures:
        print(f"photon-reader: {len(cfg.failures)} row(s) failed:", file=sys.stderr)
        for f in cfg.failures:
            print(f"  {f}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
