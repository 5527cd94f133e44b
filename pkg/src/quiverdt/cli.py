"""Command-line driver: parse quiver spec files, dispatch computations,
emit delimited tables (TSV or JSON lines) and verification reports, and
optionally render figures next to the delimited output.

Exit status is 0 exactly when every requested verification passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .exactalg import eval_at_q
from .hall import (DTTable, dtbar, dtbar_table, hn_semistable_count,
                   stacky_count_all, SuperpotentialNotSupportedError)
from .invariants import (bps_from_dtbar, demo, dtbar_from_pair,
                         integrality_report, pair_from_dtbar)
from .oracle import (CapExceededError, InterpolationError, gaussian_binomial,
                     framed_stable_count_oracle, hall_twist_oracle,
                     ndt_direct, semistable_count_oracle, stacky_count_oracle)
from .quiver import (DimVector, Quiver, classes_in_box, euler_form_nonsym,
                     point_quiver)
from .quiverfile import QuiverFileError, format_rational, load_quiver_file
from .wallcross import transform_dt


class CliError(Exception):
    pass


def _parse_box(quiver: Quiver, text: str) -> DimVector:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise CliError(f"bad box {text!r}; expected comma-joined integers")
    if len(values) != len(quiver.vertices):
        raise CliError(f"box {text!r} has {len(values)} entries, quiver has "
                       f"{len(quiver.vertices)} vertices")
    return quiver.dim(values)


def _load(args):
    quiver, stabilities = load_quiver_file(args.quiver)
    stabilities.setdefault("trivial", quiver.trivial_stability())
    if getattr(args, "ignore_potential", False):
        quiver = quiver.without_potential()
        stabilities = {name: quiver.stability(s.c, s.r)
                       for name, s in stabilities.items()}
    return quiver, stabilities


def _stability(stabilities, name: str):
    if name not in stabilities:
        raise CliError(f"stability {name!r} not defined in the quiver file "
                       f"(available: {', '.join(sorted(stabilities))})")
    return stabilities[name]


def _class_str(d: DimVector) -> str:
    return ",".join(str(x) for x in d.values)


def _emit(rows, header, args, comments=()):
    """Write the delimited report (stable lexicographic row order)."""
    out_lines = []
    if args.format == "tsv":
        out_lines.append("\t".join(header))
        for row in rows:
            out_lines.append("\t".join(str(x) for x in row))
        out_lines.extend(f"# {c}" for c in comments)
    else:
        for row in rows:
            out_lines.append(json.dumps(dict(zip(header, row)), sort_keys=True))
        for c in comments:
            out_lines.append(json.dumps({"note": c}))
    text = "\n".join(out_lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _maybe_plot(args, entries, box: DimVector, title: str, label: str):
    if getattr(args, "plot", None):
        from .plotting import render_table_figure
        render_table_figure(entries, box.values, title, args.plot, label)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dt(args) -> int:
    quiver, stabilities = _load(args)
    s = _stability(stabilities, args.stability)
    box = _parse_box(quiver, args.box)
    table = dtbar_table(quiver, s, box, unsigned=args.unsigned)
    rows = [(_class_str(d), format_rational(v)) for d, v in table.items_sorted()]
    _emit(rows, ("class", "j" if args.unsigned else "dtbar"), args)
    _maybe_plot(args, table.entries, box,
                f"{quiver.name or 'quiver'}: {'J' if args.unsigned else 'DT'} "
                f"table ({args.stability})", "J" if args.unsigned else "DT")
    return 0


def cmd_bps(args) -> int:
    quiver, stabilities = _load(args)
    s = _stability(stabilities, args.stability)
    box = _parse_box(quiver, args.box)
    table = dtbar_table(quiver, s, box)
    bps = bps_from_dtbar(table)
    report = integrality_report(bps)
    rows = []
    for d, v in table.items_sorted():
        b = bps[d]
        rows.append((_class_str(d), format_rational(v), format_rational(b),
                     "yes" if b.denominator == 1 else "no"))
    _emit(rows, ("class", "dtbar", "bps", "integral"), args,
          comments=report.lines())
    _maybe_plot(args, bps.entries, box,
                f"{quiver.name or 'quiver'}: BPS table ({args.stability})", "BPS")
    return 1 if report.conjecture_violated else 0


def cmd_wallcross(args) -> int:
    quiver, stabilities = _load(args)
    s_from = _stability(stabilities, args.from_stability)
    s_to = _stability(stabilities, args.to_stability)
    box = _parse_box(quiver, args.box)
    table = dtbar_table(quiver, s_from, box)
    rows = []
    mismatches = 0
    for d, v in table.items_sorted():
        transformed = transform_dt(table, s_from, s_to, d)
        direct = dtbar(quiver, s_to, d)
        ok = transformed == direct
        mismatches += 0 if ok else 1
        rows.append((_class_str(d), format_rational(v),
                     format_rational(transformed), format_rational(direct),
                     "yes" if ok else "NO"))
    _emit(rows, ("class", "dtbar_from", "transformed", "direct", "match"), args,
          comments=[f"wall-crossing {args.from_stability} -> {args.to_stability}: "
                    + ("all classes match" if mismatches == 0
                       else f"{mismatches} mismatches")])
    return 0 if mismatches == 0 else 1


def cmd_framed(args) -> int:
    quiver, stabilities = _load(args)
    s = _stability(stabilities, args.stability)
    box = _parse_box(quiver, args.box)
    e = _parse_box(quiver, args.e)
    table = dtbar_table(quiver, s, box)
    pairs = pair_from_dtbar(table, e, s, box)
    rows = []
    comments = []
    failures = 0
    for d, v in pairs.items_sorted():
        row = [_class_str(d), format_rational(v)]
        if args.ndt_check:
            try:
                direct = ndt_direct(quiver, s, d, e)
                ok = direct == v
                failures += 0 if ok else 1
                row += [format_rational(direct), "yes" if ok else "NO"]
            except (CapExceededError, InterpolationError) as exc:
                row += ["skipped", "-"]
        rows.append(tuple(row))
    header = ("class", "ndt") + (("ndt_direct", "match") if args.ndt_check else ())
    if args.ndt_check:
        comments.append("ndt_direct cross-check: "
                        + ("all checked classes match" if failures == 0
                           else f"{failures} mismatches"))
    _emit(rows, header, args, comments)
    _maybe_plot(args, pairs.entries, box,
                f"{quiver.name or 'quiver'}: framed invariants e=({args.e})", "NDT")
    return 0 if failures == 0 else 1


def cmd_verify(args) -> int:
    quiver, stabilities = _load(args)
    primes = tuple(int(p) for p in args.p.split(","))
    cap = args.cap
    lines = []
    ok_all = True

    def check(label, ok):
        nonlocal ok_all
        ok_all = ok_all and ok
        lines.append(("ok" if ok else "FAIL") + f": {label}")

    n = len(quiver.vertices)
    box = quiver.dim((cap,) * n)
    small = [d for d in classes_in_box(box) if d.total() <= cap]

    for p in primes:
        for d in small:
            if d.total() > 4:
                continue
            lhs = stacky_count_oracle(quiver, d, p)
            rhs = eval_at_q(stacky_count_all(quiver, d), p)
            check(f"stacky count {d} at p={p}: {lhs}", lhs == rhs)

    for name, s in sorted(stabilities.items()):
        for p in primes:
            if p not in (2, 3):
                continue
            for d in small:
                if d.total() > 3:
                    continue
                lhs = semistable_count_oracle(quiver, s, d, p)
                rhs = eval_at_q(hn_semistable_count(quiver, s, d), p)
                check(f"semistable count {d} ({name}) at p={p}: {lhs}", lhs == rhs)

    for p in primes:
        if p not in (2, 3):
            continue
        for d1 in classes_in_box(box, include_zero=True):
            for d3 in classes_in_box(box, include_zero=True):
                total = (d1 + d3).total()
                if total == 0 or total > min(cap, 3):
                    continue
                lhs = hall_twist_oracle(quiver, d1, d3, p)
                twist = Fraction(p) ** (-euler_form_nonsym(quiver, d3, d1))
                a1 = eval_at_q(stacky_count_all(quiver, d1), p) if not d1.is_zero() else Fraction(1)
                a3 = eval_at_q(stacky_count_all(quiver, d3), p) if not d3.is_zero() else Fraction(1)
                check(f"Hall twist ({d1},{d3}) at p={p}: {lhs}", lhs == twist * a1 * a3)

    if len(quiver.vertices) == 1 and not quiver.arrows:
        s0 = quiver.trivial_stability()
        for p in (2, 3):
            for dn in range(1, min(cap, 3) + 1):
                for en in range(dn, 5):
                    got = framed_stable_count_oracle(
                        quiver, s0, quiver.dim((dn,)), quiver.dim((en,)), p)
                    check(f"framed count d={dn} e={en} p={p}: {got}",
                          Fraction(got) == gaussian_binomial(en, dn, p))

    text = "\n".join(lines + [f"verify: {'PASS' if ok_all else 'FAIL'}"]) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok_all else 1


def cmd_demo(args) -> int:
    params = {}
    if args.name == "conifold":
        if args.box:
            parts = tuple(int(x) for x in args.box.split(","))
            if len(parts) != 2:
                raise CliError("conifold demo box must be 'b0,b1'")
            params["box"] = parts
    elif args.name == "grassmannian":
        if args.p_range:
            lo, _, hi = args.p_range.partition("..")
            params["p_values"] = tuple(range(int(lo), int(hi) + 1))
        if args.m_max:
            params["m_max"] = args.m_max
    else:
        if args.chi:
            params["chis"] = tuple(int(x) for x in args.chi.split(","))
        if args.d_max:
            params["d_max"] = args.d_max
    report = demo(args.name, **params)
    sys.stdout.write("\n".join(report.lines()) + "\n")
    if args.plot:
        from .plotting import render_table_figure
        table = _demo_plot_table(report)
        if table is not None:
            label, tab = table
            render_table_figure(tab.entries, tab.box.values,
                                f"demo {report.name}: {label}", args.plot, label)
    return 0 if report.passed else 1


def _demo_plot_table(report):
    for key in ("bps", "dt"):
        if key in report.tables:
            return key.upper(), report.tables[key]
    for key, tab in sorted(report.tables.items()):
        if key.startswith("bps_") or key.startswith("dt_"):
            return key, tab
    return None


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_io_flags(p):
    p.add_argument("--format", choices=("tsv", "json-lines"), default="tsv")
    p.add_argument("--output", help="write the report to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverdt",
        description="Exact Donaldson-Thomas style invariants of quivers: "
                    "DT/BPS tables, wall-crossing, framed invariants, and a "
                    "brute-force finite-field verification suite.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dt", help="DT table over a box")
    p.add_argument("--quiver", required=True)
    p.add_argument("--stability", default="trivial")
    p.add_argument("--box", required=True)
    p.add_argument("--unsigned", action="store_true",
                   help="unsigned Euler-characteristic variant (J values)")
    p.add_argument("--ignore-potential", action="store_true",
                   help="drop any superpotential and run the W = 0 engine")
    p.add_argument("--plot", help="render a figure of the table to this file")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_dt)

    p = sub.add_parser("bps", help="DT + BPS table with integrality report")
    p.add_argument("--quiver", required=True)
    p.add_argument("--stability", default="trivial")
    p.add_argument("--box", required=True)
    p.add_argument("--ignore-potential", action="store_true")
    p.add_argument("--plot")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_bps)

    p = sub.add_parser("wallcross",
                       help="transform a DT table between stabilities and "
                            "diff against direct recomputation")
    p.add_argument("--quiver", required=True)
    p.add_argument("--from", dest="from_stability", required=True)
    p.add_argument("--to", dest="to_stability", required=True)
    p.add_argument("--box", required=True)
    p.add_argument("--ignore-potential", action="store_true")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_wallcross)

    p = sub.add_parser("framed", help="framed/pair invariants for a framing vector")
    p.add_argument("--quiver", required=True)
    p.add_argument("--stability", default="trivial")
    p.add_argument("--e", required=True, help="framing vector, comma-joined")
    p.add_argument("--box", required=True)
    p.add_argument("--ndt-check", action="store_true",
                   help="cross-check against the finite-field count within caps")
    p.add_argument("--ignore-potential", action="store_true")
    p.add_argument("--plot")
    _add_io_flags(p)
    p.set_defaults(fn=cmd_framed)

    p = sub.add_parser("verify", help="run the brute-force oracle suite")
    p.add_argument("--quiver", required=True)
    p.add_argument("--p", default="2,3", help="comma-joined primes")
    p.add_argument("--cap", type=int, default=3, help="max total dimension")
    p.add_argument("--ignore-potential", action="store_true")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("demo", help="reproduce a closed-form example family")
    p.add_argument("name", choices=("grassmannian", "hilbert-points", "conifold"))
    p.add_argument("--box", help="conifold truncation box, e.g. 5,5")
    p.add_argument("--p-range", help="grassmannian pairing range, e.g. 5..12")
    p.add_argument("--m-max", type=int, help="grassmannian maximal multiple")
    p.add_argument("--chi", help="hilbert-points Euler numbers, comma-joined")
    p.add_argument("--d-max", type=int, help="hilbert-points maximal length")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, QuiverFileError, CapExceededError, InterpolationError,
            SuperpotentialNotSupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
