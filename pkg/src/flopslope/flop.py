"""Flopped slope test configurations.

Flopping the proper transforms of the exceptional curves over points on Z
changes triple products by the cube rule

    H1^.H2^.H3^ = H1.H2.H3 - (H1.Ci)(H2.Ci)(H3.Ci),

summed over the (disjoint) flopped curves, which corrects the invariant by

    -2 sum (L.Ci)^3 - 3(1-b) sum (L.Ci)^2 (D.Ci).

The blow-up oracle recomputes the cube rule a second, independent way: on
the common blow-up of both sides of the flop, where the exceptional surface
is a quadric with E^3 = 2, (c*H).E^2 = -(H.C), and mixed pullback products
vanishing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .mpoly import MPoly, as_fraction, format_fraction
from .roots import Interval, Sign, sign_on_interval
from .stability import PolyInterval
from .surface import (
    BetaFunctionClass,
    BlowupPoint,
    DivisorClass,
    SurfacePair,
    log_polarization,
    seshadri,
)
from .dnc import DNCConfig, FutakiPoly, slope_futaki


class FlopError(ValueError):
    pass


class FlopConstructionError(FlopError):
    """A flop center must lie on Z: the flopped curves are the transforms of
    the exceptional curves meeting the degenerated curve."""


def _beta() -> MPoly:
    return MPoly.var("b")


@dataclass(frozen=True)
class FlopSpec:
    """Per-point data of the flop construction.

    ``deltas`` are the exceptional weights of the polarization downstairs
    (default b for every point); ``d_prime_dot_ci`` optionally overrides the
    derived boundary pairings with the flopped curves.
    """

    r: int
    deltas: tuple[MPoly, ...] = ()
    incidence: tuple[BlowupPoint, ...] = ()
    d_prime_dot_ci: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.r < 1:
            raise FlopError("a flop needs at least one curve")
        deltas = tuple(self.deltas) if self.deltas else tuple(_beta() for _ in range(self.r))
        if len(deltas) != self.r:
            raise FlopError("one delta per flopped curve required")
        for d in deltas:
            verdict = sign_on_interval(d, Interval.open(0, 1))
            if verdict.kind is not Sign.POSITIVE:
                raise FlopError(f"delta {d} is not positive on the working interval")
        object.__setattr__(self, "deltas", deltas)
        incidence = tuple(self.incidence)
        if incidence and len(incidence) != self.r:
            raise FlopError("one incidence record per flopped curve required")
        object.__setattr__(self, "incidence", incidence)
        if self.d_prime_dot_ci is not None:
            vals = tuple(as_fraction(v) for v in self.d_prime_dot_ci)
            if len(vals) != self.r:
                raise FlopError("one boundary pairing per flopped curve required")
            for v in vals:
                if v < 0 or v.denominator != 1:
                    raise FlopError("boundary pairings must be nonnegative integers")
            object.__setattr__(self, "d_prime_dot_ci", vals)

    @classmethod
    def from_provenance(cls, pair: SurfacePair, deltas=(), d_prime_dot_ci=None) -> "FlopSpec":
        prov = pair.provenance
        if prov is None:
            raise FlopError("no blow-up provenance recorded on the pair")
        return cls(prov.r, tuple(deltas), prov.points, d_prime_dot_ci)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "deltas": [d.to_string() for d in self.deltas],
            "incidence": [p.to_json() for p in self.incidence],
            "d_prime_dot_ci": ([format_fraction(v) for v in self.d_prime_dot_ci]
                               if self.d_prime_dot_ci is not None else None),
        }


@dataclass(frozen=True)
class FlopPairings:
    """Pairings of the relative polarization and the boundary with each
    flopped curve: L.Ci = delta_i - c, and D.Ci by the incidence rule."""

    l_dot: tuple[MPoly, ...]
    d_dot: tuple[Fraction, ...]


def flop_curve_pairings(config: DNCConfig, spec: FlopSpec) -> FlopPairings:
    """Exact pairings with the flopped curves.

    The boundary rule: when Z is the boundary, the boundary transform and
    the central surface separate after the blow-up, so D.Ci = 0.  When Z
    differs from the boundary, D.Ci equals the boundary pairing with the
    exceptional curve (the points of contact survive the blow-up) unless the
    tangent of the boundary at the center agrees with Z, in which case the
    blow-up separates them too.  The rule is a geometric reconstruction and
    can be overridden.
    """
    prov = config.pair.provenance
    if prov is None:
        raise FlopError("flopped curves require recorded blow-up provenance")
    if spec.r > prov.r:
        raise FlopError("more flopped curves than blow-up centers")
    points = spec.incidence or prov.points[: spec.r]
    c = MPoly.var("c")
    l_dot = []
    d_dot = []
    for i, pt in enumerate(points):
        if not pt.on_z:
            raise FlopConstructionError(f"blow-up center {i + 1} does not lie on Z")
        e = prov.exceptionals[i]
        if e.dot(config.z) != 1:
            raise FlopConstructionError(
                f"exceptional {i + 1} meets Z with multiplicity {e.dot(config.z)} != 1")
        l_dot.append(spec.deltas[i] - c)
        if spec.d_prime_dot_ci is not None:
            d_dot.append(spec.d_prime_dot_ci[i])
        elif config.z_is_boundary:
            d_dot.append(Fraction(0))
        elif not pt.on_boundary:
            d_dot.append(Fraction(0))
        elif pt.tangent_dir_equals_z:
            d_dot.append(Fraction(0))
        else:
            d_dot.append(config.pair.boundary.dot(e))
    return FlopPairings(tuple(l_dot), tuple(d_dot))


@dataclass(frozen=True)
class FlopTriple:
    """Data for the cube rule: a base triple product and, per flopped curve,
    the three pairings (H1.Ci, H2.Ci, H3.Ci)."""

    base: MPoly
    r_values: tuple[tuple[MPoly, MPoly, MPoly], ...]


def _mp(x) -> MPoly:
    return x if isinstance(x, MPoly) else MPoly.const(as_fraction(x))


def flop_triple_product(triple: FlopTriple) -> MPoly:
    """base - sum over curves of r1*r2*r3."""
    out = _mp(triple.base)
    for r1, r2, r3 in triple.r_values:
        out = out - _mp(r1) * _mp(r2) * _mp(r3)
    return out


def blowup_oracle_triple(m, r, base):
    """Second route to the cube rule, through the common blow-up.

    On the blow-up of either side along the flopped curve, each transform is
    pull(H_i) - m_i E with E^3 = 2, pull(H_i).E^2 = -r_i, and mixed products
    pull(H_i).pull(H_j).E = 0.  Expanding the same product from the other
    side, where the multiplicities are m_i + r_i and the curve pairings
    -r_i, and eliminating the common value gives the flopped triple product.
    The result is independent of m (checked property, not assumed here).
    """
    m1, m2, m3 = (_mp(x) for x in m)
    r1, r2, r3 = (_mp(x) for x in r)
    base = _mp(base)

    def w_product(h123, mm, rr):
        mm1, mm2, mm3 = mm
        rr1, rr2, rr3 = rr
        mixed = mm1 * mm2 * rr3 + mm1 * mm3 * rr2 + mm2 * mm3 * rr1
        return h123 - mixed - 2 * mm1 * mm2 * mm3

    common = w_product(base, (m1, m2, m3), (r1, r2, r3))
    mh = (r1 + m1, r2 + m2, r3 + m3)
    rh = (-r1, -r2, -r3)
    # invert the same expansion on the flopped side
    mixed_h = mh[0] * mh[1] * rh[2] + mh[0] * mh[2] * rh[1] + mh[1] * mh[2] * rh[0]
    result = common + mixed_h + 2 * mh[0] * mh[1] * mh[2]
    if base.is_constant() and all(x.is_constant() for x in (m1, m2, m3, r1, r2, r3)):
        return result.constant_value()
    return result


def assert_flopped_curves_k_trivial(config: DNCConfig, spec: FlopSpec):
    """The flopped curves must be canonically trivial on the family:
    K.Ci = K_surface.Ei + E_Z.Ci = -1 + 1 = 0.  This is the testable
    surrogate for the (-1,-1) normal bundle hypothesis."""
    prov = config.pair.provenance
    if prov is None:
        raise FlopError("flopped curves require recorded blow-up provenance")
    k = config.pair.k
    for i in range(spec.r):
        e = prov.exceptionals[i]
        total = k.dot(e) + e.dot(config.z)
        if total != 0:
            raise FlopError(
                f"flopped curve {i + 1} is not canonically trivial: K.C = {total}")


def flop_futaki(config: DNCConfig, spec: FlopSpec | None) -> FutakiPoly:
    """Invariant of the flopped configuration:

        F_flop = F_slope - 2 sum (L.Ci)^3 - 3(1-b) sum (L.Ci)^2 (D.Ci).

    ``spec=None`` means no curves are flopped; the result degenerates to the
    plain slope invariant.
    """
    if spec is None:
        base = slope_futaki(config)
        return FutakiPoly(base.value, base.branch, "flop_correction")
    assert_flopped_curves_k_trivial(config, spec)
    pairings = flop_curve_pairings(config, spec)
    base = slope_futaki(config)
    b = MPoly.var("b")
    correction = MPoly.zero()
    for l, d in zip(pairings.l_dot, pairings.d_dot):
        correction = correction + 2 * l ** 3 + 3 * (1 - b) * l * l * d
    return FutakiPoly(base.value - correction, base.branch, "flop_correction")


@dataclass(frozen=True)
class FlopWindow:
    """Admissible c-window of the flopped configuration:
    (max(eps(S', Z', L'), max delta_i), eps(S, Z, L)) with exact
    beta-dependent bounds.  ``valid`` is the certified sign of hi - lo on
    the working beta-interval (empty window when it fails)."""

    window: PolyInterval | None
    lower: MPoly
    upper: MPoly
    valid: str
    certificates: tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return self.window is None

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json() if self.window else None,
            "lower": self.lower.to_string(),
            "upper": self.upper.to_string(),
            "valid": self.valid,
            "certificates": list(self.certificates),
        }


def flop_window(parent: SurfacePair, pair_prime: SurfacePair, z_parent: DivisorClass,
                spec: FlopSpec, z_prime: DivisorClass | None = None,
                polarization_prime: BetaFunctionClass | None = None,
                beta_window: Interval = Interval.lopen(0, 1)) -> FlopWindow:
    """Window bounds from the two ampleness thresholds and the deltas."""
    prov = pair_prime.provenance
    if prov is None or prov.parent != parent:
        raise FlopError("provenance does not link the pair to the given parent")
    if z_prime is None:
        z_prime = pair_prime.boundary
    pol_prime = polarization_prime or log_polarization(pair_prime)
    parent_pol = log_polarization(parent)

    eps_prime = seshadri(pair_prime, z_prime, pol_prime, beta_window)
    eps_parent = seshadri(parent, z_parent, parent_pol, beta_window)
    lower_candidates = [eps_prime.single()] + list(spec.deltas)
    lower = _piecewise_max(lower_candidates, beta_window)
    upper = eps_parent.single()

    gap = upper - lower
    verdict = sign_on_interval(gap, Interval.open(beta_window.lo, beta_window.hi))
    certs = (
        f"lower bound max(eps', deltas) = {lower}",
        f"upper bound eps(parent) = {upper}",
        f"upper - lower = {gap}: {verdict.kind.value}",
    )
    if verdict.kind is Sign.POSITIVE:
        return FlopWindow(PolyInterval(lower, upper), lower, upper, "nonempty", certs)
    if verdict.kind is Sign.MIXED:
        return FlopWindow(PolyInterval(lower, upper), lower, upper, "partial", certs)
    return FlopWindow(None, lower, upper, "empty", certs)


def _piecewise_max(candidates: list[MPoly], window: Interval) -> MPoly:
    """Maximum of linear candidates when one of them dominates throughout;
    distinct pieces would need a piecewise window, which the catalog
    configurations never produce."""
    best = None
    for cand in candidates:
        dominated = True
        for other in candidates:
            diff = cand - other
            if diff.is_zero():
                continue
            verdict = sign_on_interval(diff, Interval.open(window.lo, window.hi))
            if verdict.kind not in (Sign.POSITIVE, Sign.ZERO):
                dominated = False
                break
        if dominated:
            best = cand
            break
    if best is None:
        raise FlopError("window lower bound is not a single polynomial piece")
    return best
