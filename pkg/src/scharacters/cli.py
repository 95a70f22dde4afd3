"""Command-line entry point: ``scharacters <subcommand> TABLE [options]``.

TABLE is a path to a character-table JSON file or the name of a bundled
table (looked up in ``$SCHARACTERS_CORPUS`` if set).

Exit status: 0 on success, 1 on an invalid table, bad input or I/O error,
2 when a ``--limit`` or ``--timeout`` guard stopped the computation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bundled
from .chartab import InvalidTableError, TableParseError, census, validate
from .cyclo import format_value
from .lattice import (
    EnumerationError,
    EnumerationTimeout,
    LimitExceeded,
    OracleTooLarge,
    StrengthenError,
    brute_force,
    constraints_from_simplex,
    enumerate_points,
    strengthen,
)
from .report import dumps, render_search_json, render_search_text
from .schar import InvalidFusionError, SearchOptions, load_fusion, project, project_scharacter, search
from .scpoly import dilate, polarity_suite, simplex_from_table

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_LIMIT = 2


class _Parser(argparse.ArgumentParser):
    # usage errors share the invalid-input status so that 2 only means a guard fired
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _load(name):
    try:
        return bundled.load(name)
    except FileNotFoundError as exc:
        raise _Failure(EXIT_INVALID, str(exc)) from None
    except OSError as exc:
        raise _Failure(EXIT_INVALID, f"{name}: {exc.strerror or exc}") from None


def _vec(v) -> list:
    return [format_value(x) for x in v]


def _text_value(x) -> str:
    f = format_value(x)
    return str(x) if isinstance(f, dict) else str(f)


def _emit(args, payload: dict, text: str) -> None:
    sys.stdout.write(dumps(payload) if args.format == "json" else text)


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    t = _load(args.table)
    violations = validate(t)
    payload = {
        "table": t.name,
        "valid": not violations,
        "violations": [
            {"kind": v.kind, "indices": list(v.indices), "message": v.message} for v in violations
        ],
    }
    lines = [f"{t.name}: {'valid' if not violations else f'{len(violations)} violation(s)'}"]
    lines += [f"  {v.kind}: {v.message}" for v in violations]
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK if not violations else EXIT_INVALID


def cmd_info(args) -> int:
    t = _load(args.table)
    c = census(t)
    payload = {"table": t.name, "order": t.order, **c}
    _emit(args, payload, f"{c['classes']} classes, {c['real']} real, {c['rational']} rational\n")
    return EXIT_OK


def cmd_simplex(args) -> int:
    t = _load(args.table)
    rt = t.real
    s = simplex_from_table(rt)
    if args.dilate != 1:
        s = dilate(s, args.dilate)
    flags = polarity_suite(s)
    names = [rt.column_name(j) for j in range(rt.m)]
    payload = {
        "table": t.name,
        "dim": s.dim,
        "dilation": s.scale,
        "vertices": [{"column": n, "coords": _vec(v)} for n, v in zip(names, s.vertices)],
        **flags,
    }
    lines = [f"S({t.name}): dimension {s.dim}, dilation {s.scale}"]
    for n, v in zip(names, s.vertices):
        lines.append(f"  {n:>10}  (" + ", ".join(_text_value(x) for x in v) + ")")
    lines.append("  " + ", ".join(f"{k}={str(v).lower()}" for k, v in flags.items()))
    _emit(args, payload, "\n".join(lines) + "\n")
    if args.figures:
        from .plotting import plot_simplex

        try:
            pts = enumerate_points(constraints_from_simplex(s), limit=args.plot_limit)
        except LimitExceeded:
            pts = []
        path = plot_simplex(s, pts, t.name, args.figures)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _constraints(t, args):
    rt = t.real
    s = simplex_from_table(rt)
    cs = constraints_from_simplex(s, tuple(rt.column_name(j) for j in range(rt.m)))
    cols = []
    if args.strengthen_prime_power:
        # irrational columns are never strengthened; search post-filters them instead
        cols = [j for j in rt.prime_power_columns(args.include_identity) if rt.column_is_rational(j)]
        cs = strengthen(cs, cols)
    return s, cs, cols


def cmd_enumerate(args) -> int:
    t = _load(args.table)
    s, cs, cols = _constraints(t, args)
    if args.oracle:
        pts = brute_force(cs)
        if args.limit is not None and len(pts) > args.limit:
            raise LimitExceeded(args.limit)
    else:
        pts = enumerate_points(cs, threads=args.threads, timeout=args.timeout, limit=args.limit)
    rt = t.real
    payload = {
        "table": t.name,
        "dim": cs.dim,
        "method": "brute-force" if args.oracle else "project-and-lift",
        "strengthened_columns": [rt.column_name(j) for j in cols],
        "count": len(pts),
    }
    if not args.count_only:
        payload["points"] = [list(p) for p in pts]
    lines = [f"{t.name}: {len(pts)} lattice points in dimension {cs.dim}"]
    if not args.count_only:
        lines += [" ".join(str(v) for v in p) for p in pts]
    _emit(args, payload, "\n".join(lines) + "\n")
    if args.figures:
        from .plotting import plot_simplex

        path = plot_simplex(s, pts, t.name, args.figures)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _search_options(args) -> SearchOptions:
    return SearchOptions(
        strengthen=args.strengthen_prime_power,
        include_identity=args.include_identity,
        faithful_only=args.faithful_only,
        ordinary_only=args.ordinary_only,
        count_all_points=args.count_all,
        threads=args.threads,
        timeout=args.timeout,
        limit=args.limit,
    )


def cmd_search(args) -> int:
    t = _load(args.table)
    report = search(t, _search_options(args))
    if args.format == "json":
        sys.stdout.write(render_search_json(report, t, timings=args.timings))
    else:
        text = render_search_text(report, t)
        if args.timings:
            text += "timings (ms): " + ", ".join(f"{k} {v:.1f}" for k, v in report.timings.items()) + "\n"
        sys.stdout.write(text)
    if args.figures:
        from .plotting import plot_hit_values

        path = plot_hit_values(report, t, args.figures)
        if path is not None:
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK if report.status == "ok" else EXIT_LIMIT


def _irreducible_index(tF, values):
    if all(v.is_zero() for v in values):
        return None
    for k, row in enumerate(tF.irreducibles):
        if tuple(values) == row:
            return k
    return -1


def cmd_project(args) -> int:
    tG = _load(args.table)
    tF = _load(args.target)
    fpath = Path(args.fusion) if args.fusion else bundled.fusion_path(tG.name, tF.name)
    try:
        fm = load_fusion(fpath)
    except OSError as exc:
        raise _Failure(EXIT_INVALID, f"{fpath}: {exc.strerror or exc}") from None
    if (fm.source, fm.target) != (tG.name, tF.name):
        raise InvalidFusionError(f"{fpath}: fusion is {fm.source} -> {fm.target}, not {tG.name} -> {tF.name}")
    payload = {"source": tG.name, "target": tF.name}
    lines = [f"projection {tG.name} -> {tF.name}"]
    if args.irreducibles:
        rows = []
        for i, chi in enumerate(tG.irreducibles):
            k = _irreducible_index(tF, project(chi, tG, fm, tF))
            if k == -1:
                raise InvalidFusionError(f"projection of irreducible {i + 1} is neither zero nor irreducible")
            rows.append({"irreducible": i + 1, "image": None if k is None else k + 1})
            lines.append(f"  chi{i + 1} -> " + ("0" if k is None else f"chi{k + 1}"))
        payload["irreducibles"] = rows
    else:
        report = search(tG, _search_options(args))
        if report.status != "ok":
            raise (EnumerationTimeout if report.status == "timeout" else LimitExceeded)(args.limit)
        rows = []
        for i, h in enumerate(report.hits, 1):
            img = project_scharacter(h, tG, fm, tF, args.include_identity)
            rows.append({
                "hit": i,
                "coeffs": list(h.coeffs),
                "image_coeffs": list(img.coeffs),
                "image_complex_coeffs": list(img.complex_coeffs),
                "image_values": _vec(img.values),
                "image_is_ordinary": img.is_ordinary,
                "image_positive_on_prime_power": img.positive_on_prime_power,
            })
            lines.append(f"  hit {i}: " + " ".join(map(str, h.complex_coeffs)))
            lines.append("    -> " + " ".join(map(str, img.complex_coeffs)))
            lines.append("    values " + " ".join(_text_value(v) for v in img.values))
        payload["hits"] = rows
    _emit(args, payload, "\n".join(lines) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scharacters", description="S-character simplices and their lattice points.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("table", help="table JSON file or bundled table name")
        sp.add_argument("--format", choices=("json", "text"), default="text")

    def search_flags(sp):
        sp.add_argument("--strengthen-prime-power", action=argparse.BooleanOptionalAction, default=True,
                        help="require value >= 1 at rational prime-power columns (default on)")
        sp.add_argument("--include-identity", action=argparse.BooleanOptionalAction, default=True,
                        help="count the identity class as prime power order (default on)")
        sp.add_argument("--faithful-only", action=argparse.BooleanOptionalAction, default=True)
        sp.add_argument("--ordinary-only", action="store_true")
        sp.add_argument("--count-all", action="store_true", help="also count all lattice points")
        guards(sp)

    def guards(sp):
        sp.add_argument("--threads", type=int, default=1, metavar="N")
        sp.add_argument("--limit", type=int, default=None, metavar="K",
                        help="stop with exit status 2 after K lattice points")
        sp.add_argument("--timeout", type=float, default=None, metavar="SECONDS")

    sp = sub.add_parser("validate", help="check orthogonality and consistency of a table")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("info", help="class counts: all, real, rational")
    common(sp)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("simplex", help="vertices and polarity flags of S(G)")
    common(sp)
    sp.add_argument("--dilate", type=int, default=1, metavar="K")
    sp.add_argument("--figures", type=Path, default=None, metavar="DIR")
    sp.add_argument("--plot-limit", type=int, default=200000, metavar="K",
                    help="skip lattice points in the figure above this count")
    sp.set_defaults(func=cmd_simplex)

    sp = sub.add_parser("enumerate", help="lattice points of S(G)")
    common(sp)
    sp.add_argument("--strengthen-prime-power", action="store_true")
    sp.add_argument("--include-identity", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--oracle", action="store_true", help="use the brute-force box scan")
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--figures", type=Path, default=None, metavar="DIR")
    guards(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("search", help="S-characters positive on all prime-power classes")
    common(sp)
    search_flags(sp)
    sp.add_argument("--figures", type=Path, default=None, metavar="DIR")
    sp.add_argument("--timings", action="store_true", help="include per-phase timings")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("project", help="project hits or irreducibles to a factor group")
    common(sp)
    sp.add_argument("--target", required=True, help="factor group table")
    sp.add_argument("--fusion", default=None, help="fusion JSON (default: bundled SOURCE--TARGET)")
    sp.add_argument("--irreducibles", action="store_true", help="project irreducibles instead of hits")
    search_flags(sp)
    sp.set_defaults(func=cmd_project)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("scharacters: --threads must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    if getattr(args, "dilate", 1) < 1:
        print("scharacters: --dilate must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except _Failure as exc:
        print(f"scharacters: {exc}", file=sys.stderr)
        return exc.status
    except (LimitExceeded, EnumerationTimeout) as exc:
        what = "timeout" if isinstance(exc, EnumerationTimeout) else f"limit of {args.limit} points exceeded"
        print(f"scharacters: {what}", file=sys.stderr)
        return EXIT_LIMIT
    except (TableParseError, InvalidTableError, InvalidFusionError, StrengthenError,
            OracleTooLarge, EnumerationError) as exc:
        print(f"scharacters: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
