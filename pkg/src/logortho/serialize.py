"""Deterministic JSON/CSV rendering of tables and reports.

Extended-precision numbers are written as decimal strings carrying the full
working precision, so a table can be re-read without loss.
"""

from __future__ import annotations

import csv
import io
import json
import math

from mpmath import mp

from . import __version__
from .recurrence import RecurrenceTable

__all__ = ["decimal_digits", "dec", "table_payload", "table_to_json", "table_to_csv", "dumps"]


def decimal_digits(bits: int) -> int:
    return math.ceil(bits * math.log10(2)) + 1


def dec(x, bits: int = 53) -> str:
    """Decimal rendering of a real or complex mpmath value at ``bits``."""
    digits = decimal_digits(bits)
    # converting at ambient precision would silently round to 53 bits
    with mp.workprec(max(bits, 53)):
        if isinstance(x, (mp.mpc, complex)):
            x = mp.mpc(x)
            if x.imag == 0:
                return mp.nstr(x.real, digits)
            sign = "+" if x.imag >= 0 else "-"
            return f"{mp.nstr(x.real, digits)}{sign}{mp.nstr(abs(x.imag), digits)}j"
        return mp.nstr(mp.mpf(x), digits)

def header(config: dict, **extra) -> dict:
    return {"artifact_version": __version__, "config": config, **extra}


def table_payload(table: RecurrenceTable, config: dict) -> dict:
    bits = table.precision_bits
    hdr = header(
        config,
        k=table.weight.k,
        weight=table.weight.kind.value,
        N=table.N,
        precision_bits=bits,
        method=table.method.value,
    )
    records = [{"n": n, "a": dec(a, bits), "b": dec(b, bits)} for n, a, b in table.rows()]
    return {"header": hdr, "records": records}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def table_to_json(table: RecurrenceTable, config: dict) -> str:
    return dumps(table_payload(table, config))


def table_to_csv(table: RecurrenceTable, config: dict) -> str:
    """CSV mirror of the JSON table; header metadata goes in '#' comment lines."""
    payload = table_payload(table, config)
    buf = io.StringIO()
    for key, value in sorted(payload["header"].items()):
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "a", "b"])
    for r in payload["records"]:
        writer.writerow([r["n"], r["a"], r["b"]])
    return buf.getvalue()
