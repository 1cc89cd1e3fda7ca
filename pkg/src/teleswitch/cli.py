"""Command-line front end emitting figure data as CSV or JSON.

Subcommands mirror the analysis surface: fidelity-curves, region-map,
fom-scan, tradeoff, coherence-scan, three-path, and verify. Outputs are
deterministic given the flags and seed; floats are printed with 12
significant digits.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 numerical
failure.
"""
import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, channels, switch, verification

DEFAULTS = {
    "q": 0.5,
    "p_min": 0.0,
    "p_max": 1 / 3,
    "p_step": 0.001,
    "seed": 42,
    "format": "csv",
    "paths": 3,
    "outcome": "plus",
}

OUTCOME_VECTORS = {
    "plus": np.array([1.0, 1.0]) / math.sqrt(2),
    "minus": np.array([1.0, -1.0]) / math.sqrt(2),
    "0": np.array([1.0, 0.0]),
    "1": np.array([0.0, 1.0]),
}

CAPTION_ALPHAS = (
    analysis.AlphaOutcome(1, 1, 1),
    analysis.AlphaOutcome(0, 0, 0),
    analysis.AlphaOutcome(-1, -1, 0),
    analysis.AlphaOutcome(-1, -1, -1),
)


class UsageError(ValueError):
    """Bad flag combination or out-of-domain parameter."""


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(f"{value:.12g}")
    if isinstance(value, np.integer):
        return int(value)
    return value


def _write_csv(path, columns, rows):
    handle = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            handle.close()


def _write_json(path, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_tables(cfg, command, params, tables):
    """tables: list of (suffix, columns, rows); suffix '' names the main table."""
    if cfg["format"] == "json":
        payload = {
            "command": command,
            "params": {k: _json_value(v) for k, v in params.items()},
            "tables": {
                suffix or "main": {
                    "columns": list(columns),
                    "rows": [[_json_value(v) for v in row] for row in rows],
                }
                for suffix, columns, rows in tables
            },
        }
        _write_json(cfg.get("out"), payload)
        return
    out = cfg.get("out")
    if len(tables) > 1 and not out:
        raise UsageError("this command writes multiple CSV tables; --out is required")
    for suffix, columns, rows in tables:
        if out:
            base = Path(out)
            path = base if not suffix else base.with_name(f"{base.stem}_{suffix}{base.suffix}")
        else:
            path = None
        _write_csv(path, columns, rows)


def _p_grid(cfg):
    p_min, p_max, p_step = cfg["p_min"], cfg["p_max"], cfg["p_step"]
    if not 0.0 <= p_min <= p_max <= 1 / 3 + 1e-12:
        raise UsageError(f"p range [{p_min}, {p_max}] must sit inside [0, 1/3]")
    if p_step <= 0:
        raise UsageError("p-step must be positive")
    grid = np.arange(p_min, p_max + p_step / 2, p_step)
    if grid.size == 0 or grid[-1] < p_max - 1e-12:
        grid = np.append(grid, p_max)
    return np.minimum(grid, 1 / 3)

def _outcome_vector(cfg):
    label = cfg["outcome"]
    if label == "custom":
        lam = cfg.get("lam")
        phi = cfg.get("phi")
        if lam is None or phi is None:
            raise UsageError("outcome 'custom' needs --lambda and --phi")
        return analysis.OutcomeFamily2(lam, phi).vector(), "custom"
    return OUTCOME_VECTORS[label], label


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_fidelity_curves(cfg):
    q = cfg["q"]
    if not 0.0 <= q <= 1.0:
        raise UsageError(f"q={q} outside [0, 1]")
    outcome, label = _outcome_vector(cfg)
    control = switch.control_qubit(q)
    num, den = analysis.fidelity_polynomials(control, outcome, 2)
    ps = _p_grid(cfg)
    fs = analysis.evaluate_fidelity(num, den, ps)
    rows = [
        [p, channels.no_switch_fidelity(p, 1), channels.no_switch_fidelity(p, 2), f, 2 / 3]
        for p, f in zip(ps, fs)
    ]
    columns = ["p", "F1", "F2", f"F_switch_{label}", "classical_threshold"]
    _emit_tables(cfg, "fidelity-curves", {"q": q, "outcome": label}, [("", columns, rows)])


def cmd_region_map(cfg):
    region_rows = []
    for mu in np.linspace(0.0, 0.5, 101):
        regions = analysis.advantage_regions(mu)
        region_rows.append([float(mu), regions.p_lo, regions.p_hi, regions.region2_exists])
    ps = _p_grid(cfg)
    surface_rows = []
    for q in np.linspace(0.0, 1.0, 51):
        for p in ps:
            surface_rows.append(
                [p, q, analysis.switched_fidelity(analysis.SwitchParams(p, q))]
            )
    tables = [
        ("", ["mu", "p_lo", "p_hi", "region2_exists"], region_rows),
        ("surface", ["p", "q", "F"], surface_rows),
    ]
    _emit_tables(cfg, "region-map", {"p_step": cfg["p_step"]}, tables)


def _scan_grids(cfg):
    lams = [cfg["lam"]] if cfg.get("lam") is not None else np.linspace(0.0, 2.0, 41)
    phis = [cfg["phi"]] if cfg.get("phi") is not None else np.arange(0.0, 2 * math.pi, math.pi / 90)
    return lams, phis


def cmd_fom_scan(cfg):
    control = switch.control_qubit(cfg["q"])
    lams, phis = _scan_grids(cfg)
    rows = []
    for lam in lams:
        for phi in phis:
            k = analysis.figure_of_merit(analysis.OutcomeFamily2(lam, phi), control)
            rows.append([float(lam), float(phi), k])
    _emit_tables(
        cfg,
        "fom-scan",
        {"q": cfg["q"]},
        [("", ["lambda", "phi", "K"], rows)],
    )


def cmd_tradeoff(cfg):
    rows = []
    for q in np.linspace(0.5, 1.0, 21):
        control = switch.control_qubit(q)
        kt = analysis.k_total(control)
        for label in ("plus", "minus", "0", "1"):
            k = analysis.figure_of_merit(OUTCOME_VECTORS[label], control)
            rows.append([float(q), kt, k, label])
    _emit_tables(
        cfg,
        "tradeoff",
        {},
        [("", ["q", "K_total", "K", "outcome_label"], rows)],
    )


def cmd_coherence_scan(cfg):
    rows = []
    for q in np.linspace(1.0, 0.5, 41):
        control = switch.control_qubit(q)
        coherence = analysis.l1_coherence(control.amplitudes)
        k = analysis.figure_of_merit(OUTCOME_VECTORS["plus"], control)
        rows.append([coherence, k])
    _emit_tables(
        cfg,
        "coherence-scan",
        {"outcome": "plus"},
        [("", ["coherence", "K_optimal"], rows)],
    )


def cmd_three_path(cfg):
    if cfg["paths"] != 3:
        raise UsageError("three-path requires --paths 3")
    control = switch.uniform_control(3)
    if cfg.get("lam") is not None or cfg.get("phi") is not None:
        lams, phis = _scan_grids(cfg)
        rows = []
        for phi in phis:
            for lam in lams:
                k = analysis.figure_of_merit(analysis.OutcomeFamily3(lam, phi), control)
                rows.append([float(phi), float(lam), k])
        _emit_tables(
            cfg,
            "three-path",
            {"mode": "phase-scan"},
            [("", ["phi", "lambda", "K"], rows)],
        )
        return
    alphas = (analysis.AlphaOutcome(*cfg["alpha"]),) if cfg.get("alpha") else CAPTION_ALPHAS
    ps = _p_grid(cfg)
    profiles = [analysis.alpha_fidelity_profile(a, ps) for a in alphas]
    columns = ["p"]
    columns += [f"F{a.label()}" for a in alphas]
    columns += ["F3_no_switch", "degenerate"]
    rows = []
    for i, p in enumerate(ps):
        row = [float(p)]
        flagged = []
        for a, prof in zip(alphas, profiles):
            row.append(prof[i].fidelity)
            if prof[i].degenerate:
                flagged.append(a.label())
        row.append(float(channels.no_switch_fidelity(p, 3)))
        row.append(";".join(flagged))
        rows.append(row)
    _emit_tables(
        cfg,
        "three-path",
        {"mode": "alpha-profile"},
        [("", columns, rows)],
    )


def cmd_verify(cfg):
    results = verification.run_all(cfg["seed"])
    payload = {
        "command": "verify",
        "seed": cfg["seed"],
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
    }
    out = cfg.get("out")
    _write_json(out, payload)
    if out:
        for line in verification.report_lines(results):
            print(line)
    return 0 if all(r.passed for r in results) else 2


COMMANDS = {
    "fidelity-curves": cmd_fidelity_curves,
    "region-map": cmd_region_map,
    "fom-scan": cmd_fom_scan,
    "tradeoff": cmd_tradeoff,
    "coherence-scan": cmd_coherence_scan,
    "three-path": cmd_three_path,
    "verify": cmd_verify,
}


def _alpha_tuple(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("alpha needs exactly three comma-separated values")
    try:
        return tuple(float(x) for x in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = _Parser(
        prog="teleswitch",
        description="Teleportation fidelity data for Pauli channels in a quantum switch.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"{name} data")
        p.add_argument("--q", type=float, default=None, help="control weight q in [0, 1]")
        p.add_argument("--p-min", dest="p_min", type=float, default=None)
        p.add_argument("--p-max", dest="p_max", type=float, default=None)
        p.add_argument("--p-step", dest="p_step", type=float, default=None)
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="outcome family weight (>= 0)")
        p.add_argument("--phi", type=float, default=None, help="outcome family phase")
        p.add_argument("--alpha", type=_alpha_tuple, default=None,
                       help="three-path odd-permutation coefficients a1,a2,a3")
        p.add_argument("--paths", type=int, default=None, help="number of channel copies")
        p.add_argument("--outcome", choices=["plus", "minus", "0", "1", "custom"],
                       default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None, help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--config", type=str, default=None,
                       help="JSON file of defaults, overridden by flags")
    return parser


def resolve_config(args):
    """Merge precedence: command-line flags > config file > built-in defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            cfg["lam" if key == "lambda" else key] = value
    for key in ("q", "p_min", "p_max", "p_step", "lam", "phi", "alpha",
                "paths", "outcome", "seed", "out", "format"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        code = COMMANDS[args.command](cfg)
        return 0 if code is None else code
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    except (analysis.QuadratureError, switch.DegenerateOutcomeError, FloatingPointError) as exc:
        print(f"teleswitch: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError) as exc:
        print(f"teleswitch: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
