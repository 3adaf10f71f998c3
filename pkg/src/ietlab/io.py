"""JSON and CSV formats for lines, protocols, reports and sweeps."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fixed import SweepResult
from .line import FLOAT, RATIONAL, ColoredLine, ContractError, CutSet, Permutation, parse_perm
from .metrics import MixReport, format_scalar
from .optimal import CutChoice, VariableProtocol


def scalar_to_json(value):
    if isinstance(value, Fraction):
        return "%d/%d" % (value.numerator, value.denominator)
    return float(value)


def scalar_from_json(value):
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


def line_to_json(line: ColoredLine) -> dict:
    if line.mode == RATIONAL:
        segs = [{"color": c, "num": str(l.numerator), "den": str(l.denominator)} for c, l in line.segments]
    else:
        segs = [{"color": c, "length": float(l)} for c, l in line.segments]
    return {"mode": line.mode, "segments": segs}


def line_from_json(obj: dict, k: int | None = None) -> ColoredLine:
    mode = obj.get("mode", RATIONAL)
    segs = []
    for s in obj["segments"]:
        if mode == RATIONAL:
            segs.append((int(s["color"]), Fraction(int(s["num"]), int(s["den"]))))
        else:
            segs.append((int(s["color"]), float(s["length"])))
    if k is None:
        k = max(c for c, _ in segs) + 1
    return ColoredLine(tuple(segs), k)


@dataclass(frozen=True)
class FixedProtocol:
    perm: Permutation
    cuts: CutSet
    k: int
    N: int

    @property
    def cut_sets(self) -> tuple:
        return (self.cuts,) * self.N


def protocol_to_json(protocol) -> dict:
    if isinstance(protocol, FixedProtocol):
        return {
            "perm": str(protocol.perm),
            "k": protocol.k,
            "N": protocol.N,
            "cuts": [scalar_to_json(c) for c in protocol.cuts],
        }
    return {
        "perm": str(protocol.perm),
        "k": protocol.k,
        "N": protocol.N,
        "cut_sets": [[scalar_to_json(c) for c in cs] for cs in protocol.cut_sets],
        "choices": [c.to_json() for c in protocol.choices],
    }


def protocol_from_json(obj: dict):
    try:
        perm = parse_perm(obj["perm"])
        k = int(obj["k"])
        if "cuts" in obj:
            return FixedProtocol(perm, CutSet(tuple(scalar_from_json(c) for c in obj["cuts"])), k, int(obj["N"]))
        cut_sets = tuple(CutSet(tuple(scalar_from_json(c) for c in cs)) for cs in obj["cut_sets"])
        choices = tuple(CutChoice.from_json(c) for c in obj.get("choices", []))
    except KeyError as exc:
        raise ContractError("protocol JSON is missing field %s" % exc) from None
    if "N" in obj and int(obj["N"]) != len(cut_sets):
        raise ContractError("protocol says N=%s but has %d cut sets" % (obj["N"], len(cut_sets)))
    return VariableProtocol(perm, cut_sets, k, choices)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def save_protocol(protocol, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(protocol_to_json(protocol)))


def load_protocol(path):
    with open(path, encoding="utf-8") as fh:
        return protocol_from_json(json.load(fh))


def reports_csv(reports: Iterable[MixReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MixReport.CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def field_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    dim = len(result.argmin)
    writer.writerow(["c_%d" % (j + 1) for j in range(dim)] + ["Phi"])
    for point, phi in result.field:
        writer.writerow([repr(float(c)) for c in point] + [repr(float(phi))])
    return buf.getvalue()


def read_field_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    body = rows[1:]
    return [(tuple(float(v) for v in row[:-1]), float(row[-1])) for row in body]


def table_csv(header: Sequence, rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_scalar(v) if isinstance(v, (float, Fraction)) else v for v in row])
    return buf.getvalue()
