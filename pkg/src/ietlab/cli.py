"""Command-line front end.

Exit status: 0 on success, 1 on usage errors (bad flags, unreadable files),
2 when the inputs violate an operation's contract.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import io as ietio
from . import render
from .adhoc import adhoc_trajectory, default_perm
from .fixed import (
    HIGH_DIM_SPACING,
    circle_ratio,
    krotter_cuts,
    refine_minimum,
    sweep,
    weak_mixing_comparison,
)
from .line import FLOAT, RATIONAL, ColoredLine, ContractError, apply_iet, is_irreducible, parse_perm
from .metrics import scaled_report
from .optimal import CutChoice, build_optimal_protocol, enumerate_optimal_perms

log = logging.getLogger("ietlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError("%s: %s" % (self.prog, message))


def _perm(text):
    try:
        return parse_perm(text)
    except ContractError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _ratio(text: str):
    """``3/2``, ``1.5``, or ``pi:i`` for 1 + 1/(2^i pi)."""
    if text.startswith("pi:"):
        return circle_ratio(int(text[3:]))
    if "/" in text or text.isdigit():
        return Fraction(text)
    return float(text)


def _emit(text: str, out: Path | None, name: str, written: list) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = out / name
    path.write_text(text, encoding="utf-8")
    written.append(path)


def _write_bytes(path: Path, data: bytes, written: list) -> None:
    path.write_bytes(data)
    written.append(path)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _report_all(lines, perm, k):
    return [scaled_report(line, n, len(perm), k) for n, line in enumerate(lines)]


def _load_protocol(path: Path):
    if not path.is_file():
        raise UsageError("protocol file not found: %s" % path)
    try:
        return ietio.load_protocol(path)
    except ContractError:
        raise
    except ValueError as exc:
        raise UsageError("cannot read protocol %s: %s" % (path, exc))


def cmd_simulate(args, written):
    if args.protocol:
        protocol = _load_protocol(Path(args.protocol))
        perm, k, cut_sets = protocol.perm, protocol.k, list(protocol.cut_sets)
    else:
        if args.perm is None or args.ratio is None or args.n is None:
            raise UsageError("simulate needs --protocol, or --perm, --ratio and --n")
        perm, k = args.perm, args.k
        cut_sets = [krotter_cuts(len(perm), _ratio(args.ratio))] * args.n
    mode = args.mode or (FLOAT if any(cs.mode == FLOAT for cs in cut_sets) else RATIONAL)
    line = ColoredLine.equal_colors(k, mode)
    lines = [line]
    for cs in cut_sets:
        line = apply_iet(line, cs, perm)
        lines.append(line)
    out = _outdir(args)
    _emit(ietio.reports_csv(_report_all(lines, perm, k)), out, "report.csv", written)
    if out is not None:
        rows = render.space_time_rows(lines, cut_sets)
        _write_bytes(out / "spacetime.svg", render.render_space_time_svg(rows), written)


def cmd_optimal(args, written):
    choices = None
    if args.choices:
        path = Path(args.choices)
        if not path.is_file():
            raise UsageError("choices file not found: %s" % path)
        choices = [CutChoice.from_json(c) for c in json.loads(path.read_text(encoding="utf-8"))]
    protocol = build_optimal_protocol(args.perm, args.k, args.n, choices)
    text = ietio.dumps(ietio.protocol_to_json(protocol))
    if args.out is None:
        sys.stdout.write(text)
    else:
        path = Path(args.out)
        path.write_text(text, encoding="utf-8")
        written.append(path)


def cmd_adhoc(args, written):
    perm = args.perm or default_perm(args.k)
    ic = ColoredLine.equal_colors(args.k, args.mode or RATIONAL)
    states = adhoc_trajectory(args.k, perm, args.n, ic)
    reports = [s.report() for s in states]
    if states[-1].fallbacks:
        log.info("order constraint changed the choice of segment %d times", states[-1].fallbacks)
    out = _outdir(args)
    _emit(ietio.reports_csv(reports), out, "report.csv", written)
    if out is not None:
        rows = render.space_time_rows([s.line for s in states], states[-1].history)
        _write_bytes(out / "spacetime.svg", render.render_space_time_svg(rows), written)
        path = out / "phi.png"
        render.plot_phi_series({"adhoc %s" % perm: [float(r.Phi) for r in reports]}, path, log_scale=False)
        written.append(path)


def cmd_enumerate(args, written):
    perms = enumerate_optimal_perms(args.l, args.k)
    if args.irreducible:
        perms = [p for p in perms if is_irreducible(p)]
    print(" ".join(str(p) for p in perms))


def _fixed_ic(args):
    return ColoredLine.equal_colors(args.k, FLOAT)


def cmd_sweep(args, written):
    spacing = args.spacing or (5e-3 if len(args.perm) <= 3 else HIGH_DIM_SPACING)
    result = sweep(args.perm, _fixed_ic(args), args.n, spacing, keep_field=True)
    out = _outdir(args)
    _emit(ietio.dumps(result.to_json()), out, "sweep.json", written)
    if out is not None:
        _emit(ietio.field_csv(result), out, "field.csv", written)
        if len(result.argmin) == 2:
            _write_bytes(out / "heatmap.svg", render.render_heatmap_svg(result.field, result.argmin), written)
            path = out / "heatmap.png"
            render.plot_heatmap(result.field, path, result.argmin, title="%s, N=%d" % (args.perm, args.n))
            written.append(path)


def cmd_refine(args, written):
    spacing = args.spacing or (5e-3 if len(args.perm) <= 3 else HIGH_DIM_SPACING)
    ic = _fixed_ic(args)
    if args.seed:
        seed = tuple(float(v) for v in args.seed.split(","))
        coarse = None
    else:
        coarse = sweep(args.perm, ic, args.n, spacing)
        seed = coarse.argmin
    cuts, phi = refine_minimum(args.perm, ic, args.n, seed, args.rounds, args.factor, spacing)
    obj = {
        "perm": str(args.perm),
        "N": args.n,
        "seed": [float(c) for c in seed],
        "coarse_phi_min": coarse.phi_min if coarse else None,
        "cuts": [float(c) for c in cuts],
        "phi_min": phi,
    }
    _emit(ietio.dumps(obj), _outdir(args), "refine.json", written)


def cmd_compare(args, written):
    i_values = tuple(int(v) for v in args.i.split(","))
    table = weak_mixing_comparison(i_values, args.n)
    header, body = table.rows()
    out = _outdir(args)
    _emit(ietio.table_csv(header, body), out, "compare.csv", written)
    if out is not None:
        series = {"fixed 321, i=%d" % i: table.fixed[i] for i in i_values}
        series["adhoc 132"] = table.adhoc
        path = out / "compare.png"
        render.plot_phi_series(series, path, log_scale=True)
        written.append(path)
    log.info("best fixed protocol at N=%d: Phi=%.3f", args.n, table.best_final())


def cmd_render(args, written):
    out = Path(args.out)
    fmt = "ppm" if out.suffix.lower() == ".ppm" else "svg"
    if args.protocol:
        protocol = _load_protocol(Path(args.protocol))
        line = ColoredLine.equal_colors(protocol.k, RATIONAL if all(cs.mode == RATIONAL for cs in protocol.cut_sets) else FLOAT)
        lines = [line]
        for cs in protocol.cut_sets:
            line = apply_iet(line, cs, protocol.perm)
            lines.append(line)
        rows = render.space_time_rows(lines, protocol.cut_sets)
        data = render.render_space_time_ppm(rows) if fmt == "ppm" else render.render_space_time_svg(rows)
    elif args.field:
        path = Path(args.field)
        if not path.is_file():
            raise UsageError("field file not found: %s" % path)
        field = ietio.read_field_csv(path.read_text(encoding="utf-8"))
        lowest = min(v for _, v in field)
        argmin = next(p for p, v in field if v == lowest)
        data = render.render_heatmap_ppm(field, argmin) if fmt == "ppm" else render.render_heatmap_svg(field, argmin)
    else:
        raise UsageError("render needs --protocol or --field")
    _write_bytes(out, data, written)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ietlab", description="Mixing by cutting and shuffling on the unit interval.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, perm=True, k=True, n=True, out=True):
        if perm:
            p.add_argument("--perm", type=_perm)
        if k:
            p.add_argument("--k", type=int, default=2)
        if n:
            p.add_argument("--n", type=int)
        if out:
            p.add_argument("--out")

    p = sub.add_parser("simulate", help="run a protocol file or a geometric fixed IET")
    common(p)
    p.add_argument("--protocol")
    p.add_argument("--ratio", help="piece-length ratio: 3/2, 1.5 or pi:i for 1+1/(2^i pi)")
    p.add_argument("--mode", choices=[RATIONAL, FLOAT])
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimal", help="build an optimal variable protocol (JSON)")
    common(p)
    p.add_argument("--choices", help="JSON list of per-iteration cut choices")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("adhoc", help="run the halve-the-longest-segments heuristic")
    common(p)
    p.add_argument("--mode", choices=[RATIONAL, FLOAT])
    p.set_defaults(func=cmd_adhoc, n=20)

    p = sub.add_parser("enumerate", help="list permutations that can mix optimally")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--irreducible", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sweep", help="grid sweep of Phi over fixed cut locations")
    common(p)
    p.add_argument("--spacing", type=float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("refine", help="refine the sweep minimum")
    common(p)
    p.add_argument("--spacing", type=float)
    p.add_argument("--seed", help="comma-separated starting cuts (default: coarse argmin)")
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--factor", type=int, default=10)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("compare", help="geometric fixed IETs against the ad hoc method")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--i", default="-1,0,1,2")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="render a protocol or a sweep field to SVG/PPM")
    p.add_argument("--protocol")
    p.add_argument("--field")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


_REQUIRED = {
    "optimal": ("perm", "n"),
    "sweep": ("perm", "n"),
    "refine": ("perm", "n"),
}


def main(argv=None) -> int:
    parser = build_parser()
    written: list = []
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
        for name in _REQUIRED.get(args.command, ()):
            if getattr(args, name) is None:
                raise UsageError("%s: --%s is required" % (args.command, name))
        args.func(args, written)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ContractError as exc:
        print("contract violation: %s" % exc, file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


def cli(argv=None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
