"""Command-line front end.

Exit codes: 0 success, 1 verification violations, 2 invalid input or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from .bipartition import profile
from .catalog import EnsembleSpec, build_family, build_named, parse_family, sample_array
from .errors import ConfigError, EntanglemetryError
from .geometry import quadrilaterals
from .kets import parse as parse_ket
from .kets import to_text
from .measures import classify_separability, concurrence_fill_3q, gme_report
from .report import FillReport, ReportEnvelope, dumps, serialize
from .state import StateVector, state_from_json, state_to_json
from .svg import quadrilaterals_svg
from .verify import CampaignConfig, parse_checks, run_campaign, saturation_probe

TABLE_ROWS = (("W4", "w4"), ("GHZ4", "ghz4"), ("Cluster4", "cluster4"), ("HS", "hs"))
THREADS_ENV = "ENTANGLEMETRY_THREADS"


def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--state", help="ket expression, e.g. '1/sqrt(2)(|0000>+|1111>)'")
    g.add_argument("--state-file", help="JSON state file {n_qubits, amplitudes: [[re, im], ...]}")
    g.add_argument("--named", help="ghz3, ghz4, w3, w4, cluster4, hs, bellxbell, basis:0101")
    g.add_argument("--family", help="gabcd:a,b,c,d or lab3:a,b with complex literals like 1+2i")


def resolve_input(args) -> tuple[str, StateVector]:
    if args.state is not None:
        return args.state, parse_ket(args.state)
    if args.state_file is not None:
        try:
            text = Path(args.state_file).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.state_file}: {exc}") from exc
        return args.state_file, state_from_json(text)
    if args.named is not None:
        return args.named, build_named(args.named)
    return args.family, build_family(parse_family(args.family))


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        n = args.threads
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def round3(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))


def _emit(text: str, out: str | None = None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ConfigError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    label, state = resolve_input(args)
    n = state.n_qubits
    if n == 3:
        prof = profile(state)
        rep = FillReport(concurrence_fill_3q(state), prof, classify_separability(prof))
        if args.format == "json":
            _emit(serialize(ReportEnvelope("fill", rep, to_text(state))).decode())
        elif args.format == "csv":
            _emit(_csv([["state", "fill"], [label, repr(rep.fill)]]))
        else:
            lines = [f"state: {label}", f"fill = {rep.fill:.12f}", f"class: {rep.separability.kind.value}"]
            lines += [f"  {cut:<6} C={v['c']:.12f}  C^2={v['c2']:.12f}" for cut, v in prof.as_dict().items()]
            _emit("\n".join(lines) + "\n")
        return 0
    if n != 4:
        raise ConfigError(f"analyze needs a 3- or 4-qubit state, got {n} qubits")
    rep = gme_report(state)
    cols = {"f": ["f"], "f1": ["f1"], "both": ["f", "f1"]}[args.measure]
    if args.format == "json":
        _emit(serialize(ReportEnvelope("gme", rep, to_text(state))).decode())
    elif args.format == "csv":
        vals = {"f": rep.f, "f1": rep.f1}
        _emit(_csv([["state", *cols], [label, *(repr(vals[c]) for c in cols)]]))
    else:
        lines = [f"state: {label}"]
        if "f" in cols:
            lines.append(f"F  = {rep.f:.12f}")
        if "f1" in cols:
            lines.append(f"F1 = {rep.f1:.12f}")
        sep = rep.separability
        lines.append(f"class: {sep.kind.value}" + (f" ({', '.join(sep.cuts)})" if sep.cuts else ""))
        for cut, v in rep.profile.as_dict().items():
            lines.append(f"  {cut:<6} C={v['c']:.12f}  C^2={v['c2']:.12f}")
        _emit("\n".join(lines) + "\n")
    return 0


def cmd_profile(args) -> int:
    label, state = resolve_input(args)
    prof = profile(state)
    if args.format == "json":
        _emit(serialize(ReportEnvelope("profile", prof, to_text(state))).decode())
    elif args.format == "csv":
        rows = [["state", "cut", "c", "c2"]]
        rows += [[label, cut, repr(v["c"]), repr(v["c2"])] for cut, v in prof.as_dict().items()]
        _emit(_csv(rows))
    else:
        lines = [f"{cut:<6} C={v['c']:.12f}  C^2={v['c2']:.12f}" for cut, v in prof.as_dict().items()]
        _emit("\n".join(lines) + "\n")
    return 0


def table_rows() -> list[tuple[str, float, float]]:
    rows = []
    for title, name in TABLE_ROWS:
        rep = gme_report(build_named(name))
        rows.append((title, rep.f, rep.f1))
    return rows


def cmd_table(args) -> int:
    rows = table_rows()
    if args.format == "json":
        _emit(dumps([{"state": t, "f": f, "f1": f1} for t, f, f1 in rows]) + "\n")
    elif args.format == "csv":
        _emit(_csv([["state", "f", "f1"], *[[t, round3(f), round3(f1)] for t, f, f1 in rows]]))
    else:
        lines = [f"{'state':<10}{'F':>8}{'F1':>8}"]
        lines += [f"{t:<10}{round3(f):>8}{round3(f1):>8}" for t, f, f1 in rows]
        _emit("\n".join(lines) + "\n")
    return 0


def _campaign_config(args) -> CampaignConfig:
    spec = EnsembleSpec.from_name(args.ensemble, args.seed, args.samples)
    return CampaignConfig(
        ensemble=spec,
        checks=parse_checks(args.checks),
        tolerance=args.tolerance,
        zero_threshold=args.zero_threshold,
        fail_fast=args.fail_fast,
    )


def cmd_verify(args) -> int:
    cfg = _campaign_config(args)
    runner = saturation_probe if args.saturation else run_campaign
    result = runner(cfg, threads=_threads(args))
    env = ReportEnvelope("campaign", result, cfg.ensemble.to_json())
    _emit(serialize(env).decode(), args.out)
    if not args.quiet:
        for name, r in result.checks.items():
            status = "PASS" if r.passed else "FAIL"
            print(
                f"{status} {name}: {r.passes} pass, {r.failures} fail, {r.not_applicable} n/a, "
                f"min margin {r.min_margin}",
                file=sys.stderr,
            )
    return 0 if result.passed else 1


def cmd_sample(args) -> int:
    spec = EnsembleSpec.from_name(args.ensemble, args.seed, args.samples)
    arr = sample_array(spec, threads=_threads(args))
    lines = [json.dumps(state_to_json(StateVector(spec.n_qubits, row))) for row in arr]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_export_geometry(args) -> int:
    _, state = resolve_input(args)
    if state.n_qubits != 4:
        raise ConfigError("export-geometry needs a 4-qubit state")
    quads = quadrilaterals(profile(state), use_squared=args.mode == "squared")
    if args.format == "svg":
        text = quadrilaterals_svg(quads)
    else:
        text = serialize(ReportEnvelope("geometry", quads, to_text(state))).decode()
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entanglemetry", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="F / F1 (4 qubits) or concurrence fill (3 qubits)")
    _add_input(p)
    p.add_argument("--measure", choices=("f", "f1", "both"), default="both")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("profile", help="all bipartite concurrences of a state")
    _add_input(p)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("table", help="F / F1 for W4, GHZ4, Cluster4 and HS")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run an inequality-verification campaign")
    p.add_argument("--ensemble", default="haar4")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--zero-threshold", type=float, default=1e-7)
    p.add_argument("--checks", default="all", help="comma list: t1,t2,t3,t4,fig2,fig3,lu,perm,bisep,positive")
    p.add_argument("--saturation", action="store_true", help="run the saturation probe instead")
    p.add_argument("--fail-fast", action="store_true")
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="write ensemble samples as JSON lines")
    p.add_argument("--ensemble", default="haar4")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("export-geometry", help="the three quadrilaterals as JSON or SVG")
    _add_input(p)
    p.add_argument("--mode", choices=("squared", "concurrence"), default="squared")
    p.add_argument("--format", choices=("json", "svg"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_geometry)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EntanglemetryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
