"""Text and JSON rendering for search results and table summaries."""

from __future__ import annotations

import json

from .chartab import CharacterTable
from .cyclo import format_value
from .schar import SCharacter, SearchReport

TABLE_COLUMNS = ("G", "#classes", "#real", "#rat.", "#S-char.", "#virt.S-char.")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _align(rows: list[list[str]], right_from: int = 1) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [
            c.ljust(w) if i < right_from else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))
        ]
        out.append("  ".join(cells).rstrip())
    return out


def summary_row(report: SearchReport) -> list[str]:
    return [
        report.group,
        str(report.class_count),
        str(report.real_count),
        str(report.rational_count),
        str(report.hit_count),
        str(report.virtual_hit_count),
    ]


def render_summary(reports: list[SearchReport]) -> str:
    rows = [list(TABLE_COLUMNS)] + [summary_row(r) for r in reports]
    return "\n".join(_align(rows)) + "\n"


def _flags(h: SCharacter) -> str:
    kind = "ordinary" if h.is_ordinary else "virtual"
    return f"{kind}, {'faithful' if h.is_faithful else 'not faithful'}"


def _value_str(v) -> str:
    f = format_value(v)
    return str(f) if not isinstance(f, dict) else str(v)


def render_hit(h: SCharacter, t: CharacterTable, index: int) -> str:
    lines = [f"hit {index}: {_flags(h)}"]
    lines.append("  coefficients: " + " ".join(str(a) for a in h.complex_coeffs))
    lines.append("  real basis:   " + " ".join(str(a) for a in h.coeffs))
    rows = [["  class"] + t.class_names, ["  value"] + [_value_str(v) for v in h.values]]
    lines.extend(_align(rows))
    return "\n".join(lines)


def render_search_text(report: SearchReport, t: CharacterTable) -> str:
    parts = [render_summary([report]).rstrip("\n")]
    if report.lattice_point_total is not None:
        parts.append(f"lattice points in S({report.group}): {report.lattice_point_total}")
    if report.status != "ok":
        parts.append(f"status: {report.status} (did not finish; counts are partial)")
    for i, h in enumerate(report.hits, 1):
        parts.append(render_hit(h, t, i))
    return "\n".join(parts) + "\n"


def render_search_json(report: SearchReport, t: CharacterTable, timings: bool = False) -> str:
    return dumps(report.to_dict(t, with_timings=timings))
