"""Canonical JSON and CSV encodings.

Probabilities and weights always travel as exact "num/den" strings (plain
integers when the denominator is 1), never as floats.  Table entries are
emitted in sorted key order so equal objects serialize to identical bytes.
"""

import csv
import io
import json
from fractions import Fraction

from .models import (
    LabelDistribution,
    OccupancyDistribution,
    WeightFunction,
    builtin_weight,
)
from .process import FiniteProcess, build_process


def fraction_to_str(q) -> str:
    return str(Fraction(q))


def fraction_from_str(s) -> Fraction:
    return Fraction(str(s))


def table_doc(n: int, r: int, table: dict) -> dict:
    """Canonical document for any exact table keyed by int tuples."""
    entries = [
        [*key, fraction_to_str(table[key])] for key in sorted(table)
    ]
    return {"n": n, "r": r, "entries": entries}


def occupancy_to_doc(d: OccupancyDistribution) -> dict:
    return table_doc(d.n, d.r, d.table)


def labels_to_doc(ld: LabelDistribution) -> dict:
    return table_doc(ld.n, ld.r, ld.table)


def occupancy_from_doc(doc: dict) -> OccupancyDistribution:
    try:
        n, r, entries = doc["n"], doc["r"], doc["entries"]
    except (KeyError, TypeError):
        raise ValueError("distribution document needs fields n, r, entries") from None
    table = {}
    for entry in entries:
        key = tuple(int(v) for v in entry[:-1])
        table[key] = fraction_from_str(entry[-1])
    return OccupancyDistribution(n, r, table)


def weight_to_doc(a: WeightFunction) -> dict:
    doc = {"values": [fraction_to_str(v) for v in a.values]}
    if a.kind:
        doc["kind"] = a.kind
    return doc


def weight_from_spec(spec, x_max: int) -> WeightFunction:
    """Build a weight table from a builtin name, a value list, or a document.

    Builtin names are padded out to ``x_max``; explicit value lists are taken
    as given (and must already reach any occupancy the caller will query).
    """
    if isinstance(spec, str):
        return builtin_weight(spec, x_max)
    if isinstance(spec, dict):
        try:
            values = spec["values"]
        except KeyError:
            raise ValueError("weight document needs a values field") from None
        return WeightFunction(
            tuple(fraction_from_str(v) for v in values), kind=spec.get("kind")
        )
    return WeightFunction(tuple(fraction_from_str(v) for v in spec))


def process_from_doc(doc: dict) -> FiniteProcess:
    """Build a process from {"weight": ..., "horizon": M, "terminal_law": [...]}."""
    try:
        weight_spec = doc["weight"]
        horizon = int(doc["horizon"])
        terminal = doc["terminal_law"]
    except (KeyError, TypeError):
        raise ValueError(
            "process document needs fields weight, horizon, terminal_law"
        ) from None
    pi = [fraction_from_str(v) for v in terminal]
    cap = len(pi) - 1
    a = weight_from_spec(weight_spec, max(cap, 0))
    return build_process(a, horizon, pi)


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2)


def rows_to_csv(header: list[str], rows) -> str:
    """CSV text with a fixed header; newline is always a bare LF."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


def compositions_to_csv(compositions, n: int) -> str:
    return rows_to_csv([f"x{j}" for j in range(1, n + 1)], compositions)


def paths_to_csv(paths, horizon: int) -> str:
    return rows_to_csv([f"j{t}" for t in range(horizon + 1)], paths)
