"""Command-line front end.

    python3 -m starnet certify --state "horodecki p=0.2169 theta=0.4585"
    python3 -m starnet bound --config scenario.cfg
    python3 -m starnet optimize --config scenario.cfg --restarts 32 --format json
    python3 -m starnet scan --config sweep.cfg --out region.csv --workers 4
    python3 -m starnet reproduce all

Exit status: 0 success, 2 parse/usage error, 3 numerical failure,
4 reproduction mismatch.
"""
import argparse
import csv
import dataclasses
import io
import json
import sys

import numpy as np

from .certify import bd_local_up_to_slocc, chsh_local, hidden_nonlocal
from .config import build_scenario, build_state, parse_config_file, parse_state_spec
from .errors import ConfigError, NonSeparableAssignment, StarNetError
from .network import (MeasurementSettings, bound_closed, bound_seq_closed, bound_seq_xy, bound_xy,
                      evaluate, scenario_success)
from .optimize import maximize_s
from .reproduce import reproduce
from .scan import fmt, run_scan, scan_csv

EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_MISMATCH = 0, 2, 3, 4


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--seed", type=int)
    common.add_argument("--restarts", type=int)
    common.add_argument("--max-iter", type=int, dest="max_iter")
    common.add_argument("--tol", type=float)
    common.add_argument("--workers", type=int)

    p = argparse.ArgumentParser(prog="starnet", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("certify", parents=[common], help="CHSH and hidden-nonlocality verdicts per source")
    c.add_argument("--state", help='inline state, e.g. "werner v=0.5"')
    sub.add_parser("bound", parents=[common], help="closed-form bounds B and B_seq")
    e = sub.add_parser("evaluate", parents=[common], help="direct evaluation at given settings")
    e.add_argument("--settings", help="6n numbers: m_i0 then m_i1 for each edge (default x and y)")
    sub.add_parser("optimize", parents=[common], help="maximize S over measurement settings")
    sub.add_parser("scan", parents=[common], help="parameter sweep to CSV")
    r = sub.add_parser("reproduce", parents=[common], help="compare against reference values")
    r.add_argument("instances", nargs="*", default=["all"])
    return p


def _optimizer(cfg_opt, args):
    over = {k: v for k, v in (("seed", args.seed), ("restarts", args.restarts),
                              ("max_iterations", args.max_iter), ("tolerance", args.tol),
                              ("workers", args.workers)) if v is not None}
    return dataclasses.replace(cfg_opt, **over)


def _load(args):
    if not args.config:
        raise ConfigError("--config is required for this command")
    cfg = parse_config_file(args.config)
    return dataclasses.replace(cfg, optimizer=_optimizer(cfg.optimizer, args))


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_plain(x) for x in v]
    return v


def _render(records, form):
    records = [{k: _plain(v) for k, v in r.items()} for r in records]
    if form == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2) + "\n"
    if form == "csv":
        buf = io.StringIO()
        keys = list(dict.fromkeys(k for r in records for k in r))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in records:
            w.writerow([_cell(r.get(k, "")) for k in keys])
        return buf.getvalue()
    blocks = []
    for r in records:
        width = max(len(k) for k in r)
        blocks.append("\n".join(f"{k.ljust(width)}  {_cell(v)}" for k, v in r.items()))
    return "\n\n".join(blocks) + "\n"


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def _certify_record(label, spec, state):
    is_local, value = chsh_local(state)
    rep = hidden_nonlocal(state)
    rec = {"state": label, "chsh_value": value, "chsh_local": is_local,
           "mu1": rep.mu[0], "mu2": rep.mu[1], "mu3": rep.mu[2], "mu4": rep.mu[3],
           "margin": rep.margin, "max_imag": rep.max_imag, "hidden_nonlocal": rep.hidden_nonlocal}
    if spec.family == "bell_diagonal" and spec.channel is None:
        p = dict(spec.params)
        w4 = p.get("w4", 1 - p["w1"] - p["w2"] - p["w3"])
        rec["bd_local_up_to_slocc"] = bd_local_up_to_slocc(p["w1"], p["w2"], p["w3"], w4)
    return rec


def cmd_certify(args):
    if args.state:
        spec = parse_state_spec(args.state)
        return [_certify_record(args.state, spec, build_state(spec))], EXIT_OK
    cfg = _load(args)
    return [_certify_record(f"source{i + 1}", s, build_state(s)) for i, s in enumerate(cfg.sources)], EXIT_OK


def cmd_bound(args):
    sc = build_scenario(_load(args))
    rec = {"n": sc.n, "B": bound_closed(sc), "B_xy": bound_xy(sc)}
    try:
        rec["B_seq"], rec["success"] = bound_seq_closed(sc)
        rec["B_seq_xy"] = bound_seq_xy(sc)[0]
    except NonSeparableAssignment as e:
        raise NonSeparableAssignment(f"{e} (run 'starnet optimize' for this scenario)") from None
    rec["violation"] = rec["B_seq"] > 2
    rec["hidden"] = rec["violation"] and rec["B"] <= 2
    return [rec], EXIT_OK


def _report_record(sc, settings, report):
    rec = {"n": sc.n, "S": report.S, "S_raw": report.S_raw, "success": report.success,
           "B": report.bound_closed, "B_xy": report.bound_xy}
    if report.bound_seq is not None:
        rec["B_seq"] = report.bound_seq
    rec.update({f"J{i + 1}": j for i, j in enumerate(report.J)})
    for i, pair in enumerate(settings.m):
        rec[f"m{i + 1}_0"] = list(pair[0])
        rec[f"m{i + 1}_1"] = list(pair[1])
    rec["violation"] = report.S > 2
    return rec


def cmd_evaluate(args):
    cfg = _load(args)
    sc = build_scenario(cfg)
    if args.settings:
        try:
            vals = [float(x) for x in args.settings.replace(",", " ").split()]
            m = np.array(vals).reshape(sc.n, 2, 3)
        except ValueError:
            raise ConfigError(f"--settings needs {6 * sc.n} numbers") from None
        settings = MeasurementSettings(m / np.linalg.norm(m, axis=2, keepdims=True))
    else:
        settings = MeasurementSettings.uniform(sc.n, [1, 0, 0], [0, 1, 0])
    return [_report_record(sc, settings, evaluate(sc, settings))], EXIT_OK


def cmd_optimize(args):
    cfg = _load(args)
    sc = build_scenario(cfg)
    settings, report = maximize_s(sc, cfg.optimizer)
    rec = _report_record(sc, settings, report)
    rec["restart"] = report.extra["restart"]
    rec["restarts"] = cfg.optimizer.restarts
    rec["seed"] = cfg.optimizer.seed
    return [rec], EXIT_OK


def cmd_scan(args):
    cfg = _load(args)
    if not cfg.scans:
        raise ConfigError("scenario has no [scan] blocks")
    rows = run_scan(cfg, workers=cfg.optimizer.workers)
    return scan_csv(cfg, rows), EXIT_OK


def cmd_reproduce(args):
    override = None
    if any(v is not None for v in (args.seed, args.restarts, args.max_iter, args.tol, args.workers)):
        def override(opt):
            return _optimizer(opt, args)
    try:
        checks = reproduce(args.instances, override)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from None
    records = [{"instance": c.instance, "quantity": c.quantity, "reference": c.reference, "computed": c.computed,
                "tolerance": c.tol, "kind": c.kind, "verdict": c.verdict, "note": c.note} for c in checks]
    status = EXIT_OK if all(c.passed for c in checks) else EXIT_MISMATCH
    if args.format == "text":
        lines = [f"{'instance':<12} {'quantity':<14} {'reference':>9} {'computed':>10} {'tol':>7}  verdict  note"]
        for c in checks:
            tol = "" if c.tol is None else ("-" if c.kind == "min" else "+-") + f"{c.tol:g}"
            lines.append(f"{c.instance:<12} {c.quantity:<14} {fmt(c.reference):>9} {fmt(c.computed):>10} "
                         f"{tol:>7}  {c.verdict:<7}  {c.note}")
        return "\n".join(lines) + "\n", status
    return records, status


COMMANDS = {"certify": cmd_certify, "bound": cmd_bound, "evaluate": cmd_evaluate,
            "optimize": cmd_optimize, "scan": cmd_scan, "reproduce": cmd_reproduce}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        out, status = COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except StarNetError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    if not isinstance(out, str):
        out = _render(out, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
