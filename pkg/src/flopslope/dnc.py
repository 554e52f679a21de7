"""Symbolic intersection engine for the deformation to the normal cone.

The family is the blow-up of Z x {0} inside S x P1 for a curve Z on a
surface S.  All triple intersection numbers on the threefold reduce to
surface intersection numbers:

    E^3 = -Z^2,   (pull A).E^2 = -A.Z,   (pull A).(pull B).E = 0,
    (pull A).(pull B).(pull D) = 0,

and the boundary divisor on the family is the proper transform of C x P1,
which picks up a -E correction exactly when Z is the boundary curve.  The
invariant is computed along two routes: a closed form in (b, c) and the
general symbolic expansion, which must agree whenever the polarization is
the standard log one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mpoly import MPoly, as_fraction, format_fraction
from .roots import Interval, Sign, sign_on_interval
from .stability import PolyInterval, StabilityReport, Verdict, Witness
from .surface import (
    BetaFunctionClass,
    DivisorClass,
    SurfacePair,
    amp_region,
    log_polarization,
    seshadri,
    SeshadriResult,
)


class DNCError(ValueError):
    pass


class PolarizationMismatchError(DNCError):
    """The closed form needs the standard log polarization -K-(1-b)C."""


class DegeneratePolarizationError(DNCError):
    pass


@dataclass(frozen=True)
class DNCConfig:
    """Data of a slope test configuration: the pair, the curve Z to degenerate
    along, and the polarization family."""

    pair: SurfacePair
    z: DivisorClass
    z_is_boundary: bool
    polarization: BetaFunctionClass
    c_symbol: str = "c"

    def __post_init__(self):
        if self.z.lattice != self.pair.lattice:
            raise DNCError("Z lives on the wrong lattice")
        if self.z.is_zero():
            raise DNCError("Z must be a nonzero effective class")
        if self.z_is_boundary and self.z != self.pair.boundary:
            raise DNCError("z_is_boundary set but Z differs from the boundary class")

    @classmethod
    def standard(cls, pair: SurfacePair, z: DivisorClass | None = None) -> "DNCConfig":
        """Standard log polarization; Z defaults to the boundary."""
        z_is_boundary = z is None or z == pair.boundary
        return cls(pair, pair.boundary if z is None else z, z_is_boundary,
                   log_polarization(pair))

    def summary(self) -> dict:
        return {
            "surface": self.pair.to_json(),
            "z": self.z.to_json(),
            "z_is_boundary": self.z_is_boundary,
            "polarization": self.polarization.to_json(),
        }


@dataclass(frozen=True)
class TripleProductTable:
    """Triple products on the family, as polynomials in b."""

    e3: MPoly
    pull_l_e2: MPoly
    pull_l2_e: MPoly
    pull_l3: MPoly
    pull_k_e2: MPoly
    pull_boundary_e2: MPoly

    def to_json(self) -> dict:
        return {
            "E^3": self.e3.to_string(),
            "(pull L).E^2": self.pull_l_e2.to_string(),
            "(pull L)^2.E": self.pull_l2_e.to_string(),
            "(pull L)^3": self.pull_l3.to_string(),
            "(pull K).E^2": self.pull_k_e2.to_string(),
            "(pull C).E^2": self.pull_boundary_e2.to_string(),
        }


def triple_products(config: DNCConfig, polarization: BetaFunctionClass | None = None) -> TripleProductTable:
    """Populate the table from surface intersection numbers."""
    l = polarization or config.polarization
    z = config.z
    return TripleProductTable(
        e3=MPoly.const(-z.dot(z)),
        pull_l_e2=-l.pairing(z),
        pull_l2_e=MPoly.zero(),
        pull_l3=MPoly.zero(),
        pull_k_e2=MPoly.const(-config.pair.k.dot(z)),
        pull_boundary_e2=MPoly.const(-config.pair.boundary.dot(z)),
    )


@dataclass(frozen=True)
class FutakiPoly:
    """The invariant as an exact polynomial in (b, c), tagged with the branch
    and the route that produced it."""

    value: MPoly
    branch: str                       # "Z=C" or "Z!=C"
    provenance: str                   # "closed_form" | "symbolic_engine" | "flop_correction"

    def substitute_c(self, rule) -> MPoly:
        if "c" in self.value.variables:
            return self.value.substitute("c", rule)
        return self.value

    def to_json(self) -> dict:
        return {"value": self.value.to_string(), "branch": self.branch,
                "provenance": self.provenance}


def _require_standard_polarization(config: DNCConfig):
    std = log_polarization(config.pair)
    if (config.polarization.base != std.base
            or config.polarization.beta_coefficient != std.beta_coefficient):
        raise PolarizationMismatchError(
            "closed form requires the polarization -K-(1-b)C")


def slope_futaki(config: DNCConfig) -> FutakiPoly:
    """Closed form of the invariant for the deformation to the normal cone.

    With L.Z and Z^2 substituted as exact polynomials in b:

        Z = C:   (6bc - 3c^2) L.Z + (2c^3 - 3bc^2) Z^2
        Z != C:  (6c - 3c^2) L.Z + (2c^3 - 3c^2) Z^2
    """
    _require_standard_polarization(config)
    b, c = MPoly.var("b"), MPoly.var("c")
    lz = config.polarization.pairing(config.z)
    z2 = MPoly.const(config.z.dot(config.z))
    if config.z_is_boundary:
        value = (6 * b * c - 3 * c * c) * lz + (2 * c ** 3 - 3 * b * c * c) * z2
        return FutakiPoly(value, "Z=C", "closed_form")
    value = (6 * c - 3 * c * c) * lz + (2 * c ** 3 - 3 * c * c) * z2
    return FutakiPoly(value, "Z!=C", "closed_form")


@dataclass(frozen=True)
class GeneralFutaki:
    """Numerator/denominator form of the general invariant: the denominator
    is the (positive) self-intersection of the polarization, kept separate
    so sign analysis can work on the numerator alone."""

    numerator: MPoly
    denominator: MPoly
    branch: str

    def matches_closed_form(self, closed: FutakiPoly) -> bool:
        return self.numerator == closed.value * self.denominator

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_string(),
                "denominator": self.denominator.to_string(),
                "branch": self.branch}


def general_futaki(config: DNCConfig, polarization: BetaFunctionClass | None = None) -> GeneralFutaki:
    """The general invariant for an arbitrary ample polarization family,
    expanded through the triple-product table without assuming the standard
    log polarization.
    """
    l = polarization or config.polarization
    l2 = l.self_intersection()
    if l2.is_zero():
        raise DegeneratePolarizationError("polarization family has identically zero square")
    b, c = MPoly.var("b"), MPoly.var("c")
    pair = config.pair
    z = config.z
    lz = l.pairing(z)
    z2 = MPoly.const(z.dot(z))

    # numerator of -(K + (1-b)C).L
    kl = l.pairing(pair.k)
    cl = l.pairing(pair.boundary)
    minus_kd_l = -(kl + (1 - b) * cl)

    # relative polarization cubed: -3c^2 L.Z + c^3 Z^2
    triple_l = -3 * c * c * lz + c ** 3 * z2

    # (K_total - pull of the base canonical + (1-b) boundary).L^2:
    # the boundary transform contributes the exceptional with weight b
    # exactly when Z is the boundary, weight 1 otherwise.
    kz = MPoly.const(pair.k.dot(z))
    cz = MPoly.const(pair.boundary.dot(z))
    theta = b if config.z_is_boundary else MPoly.const(1)
    second = -c * c * (kz + (1 - b) * cz) + theta * (2 * c * lz - c * c * z2)

    numerator = 2 * minus_kd_l * triple_l + 3 * l2 * second
    branch = "Z=C" if config.z_is_boundary else "Z!=C"
    return GeneralFutaki(numerator, l2, branch)


@dataclass(frozen=True)
class PAmpleWindow:
    """The relative-ampleness window (0, eps) for the exceptional weight c."""

    window: PolyInterval | None
    unbounded: bool = False
    threshold: SeshadriResult | None = None

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json() if self.window else None,
            "unbounded": self.unbounded,
            "threshold": self.threshold.to_json() if self.threshold else None,
        }


def p_ample_window(config: DNCConfig, beta_window: Interval | None = None) -> PAmpleWindow:
    """(0, eps(S, Z, L_b)) with the threshold from the generator list."""
    kwargs = {}
    if beta_window is not None:
        kwargs["beta_window"] = beta_window
    eps = seshadri(config.pair, config.z, config.polarization, **kwargs)
    if eps.unbounded:
        return PAmpleWindow(None, unbounded=True, threshold=eps)
    if eps.quadratic_binding or not eps.pieces:
        return PAmpleWindow(None, unbounded=False, threshold=eps)
    return PAmpleWindow(PolyInterval(MPoly.zero(), eps.single()), threshold=eps)


def slope_verdict(config: DNCConfig, beta) -> StabilityReport:
    """Scan the invariant over the admissible c-window at a fixed angle.

    Probes c at the window boundary first (a useful heuristic, not a
    theorem), then certifies the sign over the whole open window.  One curve
    cannot certify stability, so the verdict is either unstable or merely
    "not destabilized by this Z".
    """
    beta = as_fraction(beta)
    region = amp_region(config.pair)
    if region.interval is None or not region.interval.contains(beta):
        raise DNCError(f"beta = {beta} is outside the ample region")
    futaki = slope_futaki(config)
    eps = seshadri(config.pair, config.z, config.polarization)
    eps_val = eps.at(beta)
    window = PolyInterval(MPoly.zero(), eps.single())
    f_at_beta = (futaki.value.substitute("b", beta)
                 if "b" in futaki.value.variables else futaki.value)

    probe = f_at_beta.eval({"c": eps_val})
    certificates = [
        f"eps(S,Z,L_b) at b={format_fraction(beta)} is {format_fraction(eps_val)}",
        f"boundary probe F(c=eps) = {format_fraction(probe)}",
    ]
    analysis = sign_on_interval(f_at_beta, Interval.open(0, eps_val))
    extras = {"c_sign_analysis": analysis.to_json()}

    witness = None
    if analysis.kind is Sign.NEGATIVE:
        c_w = analysis.witnesses[0][0]
        witness = Witness(beta, c_w, f_at_beta.eval({"c": c_w}))
    elif analysis.kind is Sign.MIXED:
        for pt, s in analysis.witnesses:
            if s < 0:
                witness = Witness(beta, pt, f_at_beta.eval({"c": pt}))
                break
    verdict = Verdict.UNSTABLE if witness is not None else Verdict.NOT_DESTABILIZED
    return StabilityReport(
        pipeline="slope",
        configuration=config.summary(),
        verdict=verdict,
        futaki=futaki,
        futaki_after_rule=f_at_beta,
        c_rule=f"b={format_fraction(beta)}, scan c in (0, eps)",
        window=window,
        window_boundary_probe=True,
        witness=witness,
        certificates=tuple(certificates),
        extras=extras,
    )
