"""Deterministic report serialization: canonical JSON, CSV sampling, atomic
writes.  Two runs on the same input produce byte-identical files (no
timestamps, sorted keys, escaped non-ASCII)."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .mpoly import MPoly, format_fraction

APPROX_DIGITS = 12


def _sig_decimal(q: Fraction, sig: int = APPROX_DIGITS) -> str:
    """Decimal string with a fixed number of significant digits."""
    if q == 0:
        return "0." + "0" * (sig - 1)
    sign = "-" if q < 0 else ""
    q = abs(q)
    e = 0
    t = q
    while t >= 10:
        t /= 10
        e += 1
    while t < 1:
        t *= 10
        e -= 1
    shift = sig - 1 - e
    scaled = q * Fraction(10) ** shift
    m = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        m += 1
    digits = str(m)
    if len(digits) > sig:
        e += 1
        digits = digits[:sig]
    if e >= sig:
        return sign + digits + "0" * (e - sig + 1)
    if e >= 0:
        return sign + digits[: e + 1] + "." + digits[e + 1:]
    return sign + "0." + "0" * (-e - 1) + digits


def canonical_json_bytes(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n").encode("ascii")


def input_hash(doc) -> str:
    return hashlib.sha256(canonical_json_bytes(doc)).hexdigest()


def atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_document(job_doc: dict, report_json: dict) -> dict:
    return {
        "engine": {"name": "flopslope", "version": __version__},
        "input_sha256": input_hash(job_doc),
        "job": job_doc,
        "report": report_json,
    }


def approx_str(q: Fraction) -> str:
    return "≈" + _sig_decimal(q)


def grid_csv(poly: MPoly, lo: Fraction, hi: Fraction, step: Fraction) -> str:
    """Sample a univariate polynomial in b over a rational grid.

    Exact p/q columns first, decimal approximations (12 significant digits,
    marked) alongside.
    """
    if step <= 0:
        raise ValueError("grid step must be positive")
    rows = ["beta,futaki,beta_approx,futaki_approx"]
    x = lo
    while x <= hi:
        value = poly.eval({"b": x}) if "b" in poly.variables else poly.constant_value()
        rows.append(",".join([
            format_fraction(x),
            format_fraction(value),
            approx_str(x),
            approx_str(value),
        ]))
        x += step
    return "\n".join(rows) + "\n"
