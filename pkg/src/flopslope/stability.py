"""Verdicts, stability reports, and exact sign decomposition in beta.

A report never claims stability: a single degeneration can only witness
instability, so the verdict vocabulary is unstable / not destabilized (by
the tested configuration) / invalid configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from .mpoly import MPoly, format_fraction
from .roots import AlgebraicRoot, Interval, isolate_real_roots


class Verdict(Enum):
    UNSTABLE = "unstable"
    NOT_DESTABILIZED = "not_destabilized"
    INVALID_CONFIG = "invalid_config"


Endpoint = Union[Fraction, AlgebraicRoot]


def _endpoint_json(ep: Endpoint):
    if isinstance(ep, AlgebraicRoot):
        return ep.to_json()
    return format_fraction(ep)


def endpoint_value_bounds(ep: Endpoint) -> tuple[Fraction, Fraction]:
    if isinstance(ep, AlgebraicRoot):
        iv = ep.isolating_interval
        return iv.lo, iv.hi
    return ep, ep


@dataclass(frozen=True)
class SignRange:
    """A beta-range with certified constant sign; endpoints may be algebraic
    numbers (roots of the analyzed polynomial)."""

    lo: Endpoint
    hi: Endpoint
    lo_open: bool
    hi_open: bool
    sign: int

    def to_json(self) -> dict:
        return {
            "lo": _endpoint_json(self.lo),
            "hi": _endpoint_json(self.hi),
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
            "sign": self.sign,
        }

    def strictly_contains(self, x: Fraction) -> bool:
        """True when x is certainly in the open core of the range."""
        lo_lo, lo_hi = endpoint_value_bounds(self.lo)
        hi_lo, hi_hi = endpoint_value_bounds(self.hi)
        return lo_hi < x < hi_lo


@dataclass(frozen=True)
class RangeResult:
    ranges: tuple[SignRange, ...]
    thresholds: tuple[AlgebraicRoot, ...]
    touch_points: tuple[AlgebraicRoot, ...] = ()
    identically_zero: bool = False

    def negative_ranges(self) -> tuple[SignRange, ...]:
        return tuple(r for r in self.ranges if r.sign < 0)

    def to_json(self) -> dict:
        return {
            "negative_ranges": [r.to_json() for r in self.negative_ranges()],
            "thresholds": [t.to_json() for t in self.thresholds],
            "touch_points": [t.to_json() for t in self.touch_points],
            "identically_zero": self.identically_zero,
        }


def unstable_beta_range(f: MPoly, window: Interval) -> RangeResult:
    """Exact sign decomposition of a univariate polynomial over a window.

    Sign ranges are the maximal subintervals of certified constant sign;
    roots of even multiplicity do not split ranges (the sign is preserved
    across them) and are reported separately.  Thresholds are the
    sign-change roots.
    """
    if f.is_zero():
        return RangeResult((), (), identically_zero=True)
    name, coeffs = f.univariate_coeffs()
    if len(coeffs) == 1:
        s = 1 if coeffs[0] > 0 else -1
        return RangeResult(
            (SignRange(window.lo, window.hi, window.lo_open, window.hi_open, s),), ())
    if window.is_point():
        v = f.eval({name: window.lo})
        s = (v > 0) - (v < 0)
        if s == 0:
            return RangeResult((), ())
        return RangeResult((SignRange(window.lo, window.hi, False, False, s),), ())

    interior = Interval.open(window.lo, window.hi)
    roots = isolate_real_roots(f, interior)
    crossing = tuple(r for r in roots if r.sign_change)
    touching = tuple(r for r in roots if not r.sign_change)

    def value_at(x: Fraction) -> int:
        v = f.eval({name: x})
        return (v > 0) - (v < 0)

    lo_sign = value_at(window.lo)
    hi_sign = value_at(window.hi)

    # breakpoints at crossing roots only: even-multiplicity roots preserve
    # the sign, so ranges are not split there
    pieces = []
    prev: Endpoint = window.lo
    prev_open = window.lo_open or lo_sign == 0
    for r in crossing:
        pieces.append((prev, prev_open, r, True, r.sign_left))
        prev, prev_open = r, True
    pieces.append((prev, prev_open, window.hi, window.hi_open or hi_sign == 0,
                   crossing[-1].sign_right if crossing else None))

    ranges = []
    for lo, lo_open, hi, hi_open, s in pieces:
        if s is None:
            # no crossing at all: the sign is constant on the window
            lo_b = endpoint_value_bounds(lo)[1]
            hi_b = endpoint_value_bounds(hi)[0]
            sample = (lo_b + hi_b) / 2
            s = value_at(sample)
            while s == 0:
                sample = (lo_b + sample) / 2
                s = value_at(sample)
        ranges.append(SignRange(lo, hi, lo_open, hi_open, s))
    return RangeResult(tuple(ranges), crossing, touching)


@dataclass(frozen=True)
class PolyInterval:
    """A c-window whose endpoints are polynomials in b."""

    lo: MPoly
    hi: MPoly
    lo_open: bool = True
    hi_open: bool = True

    def at(self, beta) -> Interval:
        lo = self.lo.eval({"b": beta}) if not self.lo.is_constant() else self.lo.constant_value()
        hi = self.hi.eval({"b": beta}) if not self.hi.is_constant() else self.hi.constant_value()
        if lo > hi or (lo == hi and (self.lo_open or self.hi_open)):
            return None
        return Interval(lo, hi, self.lo_open, self.hi_open)

    def to_json(self) -> dict:
        return {
            "lo": self.lo.to_string(),
            "hi": self.hi.to_string(),
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
        }

    def __str__(self):
        return (("(" if self.lo_open else "[") + self.lo.to_string() + ", "
                + self.hi.to_string() + (")" if self.hi_open else "]"))


@dataclass(frozen=True)
class Witness:
    beta: Fraction
    c: Fraction
    value: Fraction

    def to_json(self) -> dict:
        return {
            "beta": format_fraction(self.beta),
            "c": format_fraction(self.c),
            "futaki_value": format_fraction(self.value),
        }


class ReportInvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class StabilityReport:
    """Result of one destabilization pipeline.

    Construction re-verifies the witness of an unstable verdict: the
    polynomial really is negative there and c lies inside the certified
    window at the witness beta.
    """

    pipeline: str
    configuration: dict
    verdict: Verdict
    futaki: object | None = None             # FutakiPoly
    futaki_after_rule: MPoly | None = None
    c_rule: str = ""
    window: PolyInterval | None = None
    window_boundary_probe: bool = False
    thresholds: tuple[AlgebraicRoot, ...] = ()
    beta_unstable_ranges: tuple[SignRange, ...] = ()
    witness: Witness | None = None
    certificates: tuple[str, ...] = ()
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.UNSTABLE:
            if self.witness is None:
                raise ReportInvariantError("unstable verdict requires a witness")
            w = self.witness
            if self.futaki is not None:
                value = self.futaki.value.eval({"b": w.beta, "c": w.c})
                if value != w.value:
                    raise ReportInvariantError("witness value does not match the polynomial")
                if value >= 0:
                    raise ReportInvariantError("witness does not make the invariant negative")
            if self.window is not None:
                rng = self.window.at(w.beta)
                if rng is None or not rng.contains(w.c):
                    raise ReportInvariantError("witness c lies outside the certified window")

    def to_json(self) -> dict:
        out = {
            "pipeline": self.pipeline,
            "configuration": self.configuration,
            "verdict": self.verdict.value,
            "c_rule": self.c_rule,
            "futaki": self.futaki.to_json() if self.futaki is not None else None,
            "futaki_after_c_rule": (self.futaki_after_rule.to_string()
                                    if self.futaki_after_rule is not None else None),
            "window": self.window.to_json() if self.window is not None else None,
            "window_boundary_probe": self.window_boundary_probe,
            "thresholds": [t.to_json() for t in self.thresholds],
            "beta_unstable_ranges": [r.to_json() for r in self.beta_unstable_ranges],
            "witness": self.witness.to_json() if self.witness else None,
            "certificates": list(self.certificates),
        }
        if self.extras:
            out["extras"] = self.extras
        return out
