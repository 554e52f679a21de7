"""Top-level verdict pipelines.

Three routes produce stability reports:

* ``maeda_destabilize``: pairs whose adjoint difference -K-C is ample are
  destabilized by degenerating along the boundary itself, with an explicit
  small-angle bound and an explicit rational instability threshold.
* ``flop_destabilize``: blow-ups of such pairs (and more general flop
  configurations) are destabilized after flopping the exceptional transforms
  on the degeneration.
* ``theorem_check``: routes a pair to one of the two pipelines using its
  recorded blow-up presentation, after the (K+C)^2 = 0 exclusion.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from .mpoly import MPoly, as_fraction, format_fraction
from .roots import AlgebraicRoot, Interval
from .stability import (
    PolyInterval,
    RangeResult,
    SignRange,
    StabilityReport,
    Verdict,
    Witness,
    endpoint_value_bounds,
    unstable_beta_range,
)
from .surface import (
    BetaFunctionClass,
    DivisorClass,
    SurfacePair,
    adjunction_genus,
    amp_region,
    is_ample,
    k_plus_c_squared,
    log_polarization,
    seshadri,
)
from .dnc import DNCConfig, slope_futaki
from .flop import FlopSpec, flop_curve_pairings, flop_futaki, flop_window

__all__ = [
    "AnalyzerError",
    "default_gamma",
    "maeda_destabilize",
    "slope_destabilize",
    "flop_destabilize",
    "theorem_check",
    "unstable_beta_range",
    "closed_form_small_beta",
    "small_beta_bound",
]


class AnalyzerError(ValueError):
    pass


def _constant_threshold(pair: SurfacePair, z: DivisorClass, d: DivisorClass) -> Fraction:
    """Ampleness threshold of a constant (beta-free) polarization."""
    zero = pair.lattice.zero()
    eps = seshadri(pair, z, BetaFunctionClass(d, zero))
    value = eps.single()
    if not value.is_constant():
        raise AnalyzerError("constant polarization produced a beta-dependent threshold")
    return value.constant_value()


def default_gamma(pair: SurfacePair) -> Fraction:
    """Midpoint of (0, eps(S, C, -K-C)): the deterministic default for the
    frozen weight."""
    adjoint = -pair.k - pair.boundary
    return _constant_threshold(pair, pair.boundary, adjoint) / 2


def _first_zero_adjacent_negative(ranges: RangeResult, amp: Interval):
    for r in ranges.negative_ranges():
        lo, _ = endpoint_value_bounds(r.lo)
        if lo == amp.lo:
            return r
    return None


def _rational_below(endpoint, floor: Fraction = Fraction(0)) -> Fraction:
    """An explicit rational strictly between floor and the endpoint."""
    if isinstance(endpoint, AlgebraicRoot):
        root = endpoint
        while root.isolating_interval.lo <= floor:
            root = root.refined(root.isolating_interval.width / 4)
            if root.is_rational:
                break
        value = root.value if root.is_rational else root.isolating_interval.lo
    else:
        value = endpoint
    if value <= floor:
        raise AnalyzerError("no rational point below the endpoint")
    return value


def maeda_destabilize(pair: SurfacePair, gamma) -> StabilityReport:
    """Destabilize a pair with -K-C ample by degenerating along the boundary.

    With c frozen at gamma the invariant becomes a polynomial in b whose
    value at b=0 is at most -2*gamma^2 < 0; the report carries an explicit
    rational beta_0 with a negative invariant on (0, beta_0) and a verified
    witness.
    """
    gamma = as_fraction(gamma)
    boundary = pair.boundary
    adjoint = -pair.k - boundary
    cert = is_ample(pair, adjoint)
    if not cert:
        raise AnalyzerError(f"-K-C is not ample: {cert.failure}")
    genus = adjunction_genus(pair, boundary)
    if genus != 0:
        raise AnalyzerError(f"boundary has genus {genus}; the pipeline needs a rational boundary")
    eps0 = _constant_threshold(pair, boundary, adjoint)
    if not (0 < gamma < eps0):
        raise AnalyzerError(
            f"gamma = {format_fraction(gamma)} outside (0, {format_fraction(eps0)})")

    config = DNCConfig.standard(pair)
    futaki = slope_futaki(config)
    f_gamma = futaki.value.substitute("c", gamma)

    pol = log_polarization(pair)
    lc = pol.pairing(boundary)              # 2 + b*C^2 for a rational boundary
    c2 = boundary.dot(boundary)
    b = MPoly.var("b")
    bound = MPoly.const(-2 * gamma * gamma) + b * (6 * gamma * lc - MPoly.const(4 * gamma * gamma * c2))
    slack = -2 * gamma * gamma * (lc - MPoly.const(gamma * c2))
    if f_gamma != bound + slack:
        raise AnalyzerError("closed form disagrees with its small-angle bound decomposition")

    limit = f_gamma.eval({"b": 0}) if "b" in f_gamma.variables else f_gamma.constant_value()
    if limit > -2 * gamma * gamma:
        raise AnalyzerError("zero-angle limit exceeds -2*gamma^2")

    region = amp_region(pair)
    ranges = unstable_beta_range(f_gamma, region.interval)
    first = _first_zero_adjacent_negative(ranges, region.interval)
    if first is None:
        raise AnalyzerError("no instability range adjacent to angle zero")
    beta0 = _rational_below(first.hi)
    beta_w = beta0 / 2
    value = f_gamma.eval({"b": beta_w})
    if value >= 0:
        raise AnalyzerError("witness candidate fails to be negative")

    eps_family = seshadri(pair, boundary, pol)
    window = PolyInterval(MPoly.zero(), eps_family.single())

    certificates = (
        f"-K-C ample: {'; '.join(cert.checks[:1])}",
        f"eps(S, C, -K-C) = {format_fraction(eps0)}; gamma = {format_fraction(gamma)}",
        f"limit at b->0+ is {format_fraction(limit)} <= {format_fraction(-2 * gamma * gamma)}",
        f"invariant = bound + slack with slack = {slack} (negative for admissible gamma)",
        f"invariant negative on (0, {format_fraction(beta0)})",
    )
    return StabilityReport(
        pipeline="maeda",
        configuration=config.summary(),
        verdict=Verdict.UNSTABLE,
        futaki=futaki,
        futaki_after_rule=f_gamma,
        c_rule=f"c={format_fraction(gamma)}",
        window=window,
        thresholds=ranges.thresholds,
        beta_unstable_ranges=ranges.negative_ranges(),
        witness=Witness(beta_w, gamma, value),
        certificates=certificates,
        extras={
            "gamma": format_fraction(gamma),
            "beta0": format_fraction(beta0),
            "zero_angle_limit": format_fraction(limit),
            "small_beta_bound": bound.to_string(),
        },
    )


def closed_form_small_beta(parent: SurfacePair, pair_prime: SurfacePair, r: int) -> MPoly:
    """Closed form of the flopped invariant in (b, g) for the boundary
    degeneration with exceptional weights b: equals the slope form at c=g
    plus 2r(g-b)^3, grouped so the b->0 limit -2g^2 - 2g^2(L_0 - gC).C is
    visible."""
    b, g = MPoly.var("b"), MPoly.var("g")
    lc_parent = log_polarization(parent).pairing(parent.boundary)
    c2_parent = parent.boundary.dot(parent.boundary)
    lc_prime = log_polarization(pair_prime).pairing(pair_prime.boundary)
    c2_prime = pair_prime.boundary.dot(pair_prime.boundary)
    return (
        -2 * g * g
        - 2 * g * g * (lc_parent - g * MPoly.const(c2_parent))
        + b * (6 * g * lc_prime - 4 * g * g * MPoly.const(c2_prime)
               - 4 * r * g * g + 6 * r * b * g - 2 * r * b * b)
    )


def small_beta_bound(pair_prime: SurfacePair, r: int) -> MPoly:
    """Upper bound for the closed form: drop the -2g^2(L-gC).C slack."""
    b, g = MPoly.var("b"), MPoly.var("g")
    lc_prime = log_polarization(pair_prime).pairing(pair_prime.boundary)
    c2_prime = pair_prime.boundary.dot(pair_prime.boundary)
    return -2 * g * g + b * (6 * g * lc_prime - 4 * g * g * MPoly.const(c2_prime)
                             - 4 * r * g * g + 6 * r * b * g - 2 * r * b * b)


def _linear_positive_interval(p: MPoly, window: Interval) -> Interval | None:
    """Sub-window where an (at most linear) polynomial in b is positive."""
    if p.degree_in("b") > 1 or (p.variables and p.variables != ("b",)):
        raise AnalyzerError(f"validity constraint {p} is not linear in b")
    a0 = p.coefficient_of("b", 0)
    a0 = a0.constant_value() if a0.is_constant() else Fraction(0)
    a1 = p.coefficient_of("b", 1)
    a1 = a1.constant_value() if a1.is_constant() else Fraction(0)
    lo, lo_open, hi, hi_open = window.lo, window.lo_open, window.hi, window.hi_open
    if a1 == 0:
        return window if a0 > 0 else None
    cut = -a0 / a1
    if a1 > 0:
        if cut >= hi:
            return None
        if cut > lo or (cut == lo and not lo_open):
            lo, lo_open = cut, True
    else:
        if cut <= lo:
            return None
        if cut < hi or (cut == hi and not hi_open):
            hi, hi_open = cut, True
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return None
    return Interval(lo, hi, lo_open, hi_open)


def _separate_endpoint(ep, points) -> "Fraction | AlgebraicRoot":
    """Refine an algebraic endpoint until it compares strictly with each of
    the given rationals (an irrational root never equals one, so this
    terminates)."""
    if not isinstance(ep, AlgebraicRoot):
        return ep
    root = ep
    for x in points:
        while (not root.is_rational
               and root.isolating_interval.lo <= x <= root.isolating_interval.hi):
            root = root.refined(root.isolating_interval.width / 4)
    return root


def _cap_range(rng: SignRange, cap: Interval) -> SignRange | None:
    lo = _separate_endpoint(rng.lo, (cap.lo, cap.hi))
    hi = _separate_endpoint(rng.hi, (cap.lo, cap.hi))
    lo_open, hi_open = rng.lo_open, rng.hi_open
    if endpoint_value_bounds(lo)[0] >= cap.hi or endpoint_value_bounds(hi)[1] <= cap.lo:
        return None
    if endpoint_value_bounds(lo)[1] <= cap.lo:
        lo, lo_open = cap.lo, cap.lo_open
    if endpoint_value_bounds(hi)[0] >= cap.hi:
        hi, hi_open = cap.hi, cap.hi_open
    if endpoint_value_bounds(lo)[1] > endpoint_value_bounds(hi)[0]:
        return None
    return SignRange(lo, hi, lo_open, hi_open, rng.sign)


def _witness_in_range(rng: SignRange, f_rule: MPoly, rule: MPoly,
                      window: PolyInterval, futaki_value: MPoly) -> Witness | None:
    lo_hi = endpoint_value_bounds(rng.lo)[1]
    hi_lo = endpoint_value_bounds(rng.hi)[0]
    if lo_hi >= hi_lo:
        return None
    candidates = [lo_hi + Fraction(k, 4) * (hi_lo - lo_hi) for k in (2, 1, 3)]
    for beta_w in candidates:
        if f_rule.eval({"b": beta_w}) >= 0:
            continue
        cw = window.at(beta_w)
        if cw is None:
            continue
        c_w = rule.eval({"b": beta_w})
        if cw.contains(c_w):
            val = futaki_value.eval({"b": beta_w, "c": c_w})
            if val < 0:
                return Witness(beta_w, c_w, val)
        # boundary rule: step inside the window until the sign survives
        span = cw.hi - cw.lo
        step = span / 4
        while step > span / 2 ** 20:
            c_try = cw.hi - step
            if cw.contains(c_try):
                val = futaki_value.eval({"b": beta_w, "c": c_try})
                if val < 0:
                    return Witness(beta_w, c_try, val)
            step /= 2
    return None


def _rule_report(pipeline: str, config: DNCConfig, futaki, rule: MPoly, rule_text: str,
                 window: PolyInterval, window_lower: MPoly, window_upper: MPoly,
                 region_interval: Interval, certificates: list, extras: dict) -> StabilityReport:
    """Shared tail of the symbolic pipelines: substitute the c-rule, decompose
    the sign in beta, cap by the rule's admissibility region, find and verify
    a witness."""
    f_rule = futaki.substitute_c(rule)
    ranges = unstable_beta_range(f_rule, region_interval)

    # validity: the rule must sit inside the window (touching the upper
    # bound is allowed as a probe; the witness steps strictly inside)
    boundary_probe = rule == window_upper
    cap = _linear_positive_interval(rule - window_lower, region_interval)
    if cap is None:
        raise AnalyzerError("c-rule never exceeds the window lower bound")
    if not boundary_probe:
        cap = _linear_positive_interval(window_upper - rule, cap)
        if cap is None:
            raise AnalyzerError("c-rule never stays below the window upper bound")
    certificates.append(f"c-rule {rule_text} admissible for b in {cap}"
                        + (" (upper boundary probe)" if boundary_probe else ""))

    capped = []
    for rng in ranges.negative_ranges():
        kept = _cap_range(rng, cap)
        if kept is not None:
            capped.append(kept)

    witness = None
    for rng in capped:
        witness = _witness_in_range(rng, f_rule, rule, window, futaki.value)
        if witness is not None:
            break

    if "b" in f_rule.variables:
        extras["zero_angle_limit"] = format_fraction(f_rule.eval({"b": 0}))
    elif f_rule.is_constant():
        extras["zero_angle_limit"] = format_fraction(f_rule.constant_value())

    verdict = Verdict.UNSTABLE if witness is not None else Verdict.NOT_DESTABILIZED
    return StabilityReport(
        pipeline=pipeline,
        configuration=config.summary(),
        verdict=verdict,
        futaki=futaki,
        futaki_after_rule=f_rule,
        c_rule=rule_text,
        window=window,
        window_boundary_probe=boundary_probe,
        thresholds=ranges.thresholds,
        beta_unstable_ranges=tuple(capped),
        witness=witness,
        certificates=tuple(certificates),
        extras=extras,
    )


def slope_destabilize(pair: SurfacePair, z: DivisorClass | None = None,
                      c_rule: MPoly | None = None) -> StabilityReport:
    """Symbolic slope pipeline: the invariant with c tied to a rule in b,
    analyzed over the whole ample region.  The default rule is the
    ampleness threshold itself (a boundary probe)."""
    config = DNCConfig.standard(pair, z=z)
    region = amp_region(pair)
    if region.interval is None:
        raise AnalyzerError("polarization family is never ample")
    futaki = slope_futaki(config)
    eps = seshadri(pair, config.z, config.polarization)
    eps_poly = eps.single()
    window = PolyInterval(MPoly.zero(), eps_poly)
    if c_rule is None:
        rule, rule_text = eps_poly, "c=eps(S,Z,L_b)"
    else:
        rule, rule_text = c_rule, f"c={c_rule.to_string()}"
    certificates = [f"eps(S, Z, L_b) = {eps_poly}"]
    extras = {"eps": eps_poly.to_string()}
    return _rule_report("slope", config, futaki, rule, rule_text, window,
                        MPoly.zero(), eps_poly, region.interval, certificates, extras)


def flop_destabilize(pair_prime: SurfacePair, gamma=None, *, z: DivisorClass | None = None,
                     flop_spec: FlopSpec | None = None, c_rule: MPoly | str | None = None,
                     pipeline_name: str = "flop") -> StabilityReport:
    """Report on the flopped degeneration of a blown-up pair.

    ``z`` defaults to the boundary (the adjoint presentation route, which
    carries the closed form in (b, g) and its small-angle bound); a
    different Z runs the same machinery with the c-rule supplied by the
    caller.  The c-rule defaults to the constant gamma.
    """
    prov = pair_prime.provenance
    if prov is None:
        raise AnalyzerError("flop pipeline requires recorded blow-up provenance")
    parent = prov.parent
    boundary_route = z is None or z == pair_prime.boundary
    if z is None:
        z = pair_prime.boundary
    config = DNCConfig(pair_prime, z, boundary_route, log_polarization(pair_prime))
    spec = flop_spec or FlopSpec.from_provenance(pair_prime)

    region = amp_region(pair_prime)
    if region.interval is None:
        raise AnalyzerError("polarization family is never ample")

    futaki = flop_futaki(config, spec)
    n = parent.lattice.rank
    z_parent = parent.lattice.divisor(z.coeffs[:n])
    window = flop_window(parent, pair_prime, z_parent, spec,
                         z_prime=z, polarization_prime=config.polarization)
    if window.is_empty():
        raise AnalyzerError("empty admissible window for the flopped configuration")

    extras: dict = {"flop_spec": spec.to_json(), "window_bounds": window.to_json()}
    certificates = list(window.certificates)
    pairings = flop_curve_pairings(config, spec)
    extras["curve_pairings"] = {
        "L.Ci": [p.to_string() for p in pairings.l_dot],
        "D.Ci": [format_fraction(v) for v in pairings.d_dot],
    }

    gamma_frac = as_fraction(gamma) if gamma is not None else None
    if boundary_route:
        genus = adjunction_genus(pair_prime, pair_prime.boundary)
        if genus != 0:
            raise AnalyzerError(f"boundary has genus {genus}; the closed form needs a rational boundary")
        deltas_are_beta = all(d == MPoly.var("b") for d in spec.deltas)
        parent_adjoint_ample = bool(is_ample(parent, -parent.k - parent.boundary))
        if deltas_are_beta and parent_adjoint_ample:
            closed = closed_form_small_beta(parent, pair_prime, spec.r)
            flop_at_g = futaki.value.substitute("c", MPoly.var("g"))
            if closed != flop_at_g:
                raise AnalyzerError("closed form disagrees with the flop correction")
            bound = small_beta_bound(pair_prime, spec.r)
            slack = closed - bound
            extras["closed_form"] = closed.to_string()
            extras["small_beta_bound"] = bound.to_string()
            certificates.append("closed form in (b, g) equals the flop correction at c=g")
            certificates.append(f"closed form = bound + ({slack}), the slack being "
                                "-2g^2(L-gC).C < 0 for admissible g")

    if c_rule is None:
        if gamma_frac is None:
            raise AnalyzerError("either a gamma value or a c-rule is required")
        rule = MPoly.const(gamma_frac)
        rule_text = f"c={format_fraction(gamma_frac)}"
    elif c_rule == "epsilon":
        rule = window.upper
        rule_text = "c=eps(S,Z,L_b)"
    else:
        rule = c_rule
        rule_text = f"c={rule.to_string()}"

    return _rule_report(pipeline_name, config, futaki, rule, rule_text, window.window,
                        window.lower, window.upper, region.interval, certificates, extras)


def theorem_check(pair: SurfacePair, gamma=None) -> StabilityReport:
    """Route a presented pair through the instability dichotomy.

    Pairs with (K+C)^2 = 0 are outside the criterion's scope and are
    reported as not destabilized.  Otherwise the pair must either have -K-C
    ample (boundary degeneration) or be presented as a blow-up of such a
    pair at points on its boundary (flopped boundary degeneration); gamma
    defaults to the midpoint of (0, eps(S, C, -K-C)) on the relevant pair.
    """
    region = amp_region(pair)
    if not region.alf:
        raise AnalyzerError("pair is not asymptotically log Fano (ample region misses angle 0)")
    kc2 = k_plus_c_squared(pair)
    summary = {"surface": pair.to_json()}
    if kc2 == 0:
        return StabilityReport(
            pipeline="theorem",
            configuration=summary,
            verdict=Verdict.NOT_DESTABILIZED,
            certificates=("(K+C)^2 = 0: the criterion is silent for this pair",),
            extras={"k_plus_c_squared": "0"},
        )

    adjoint_cert = is_ample(pair, -pair.k - pair.boundary)
    if adjoint_cert:
        eps0 = _constant_threshold(pair, pair.boundary, -pair.k - pair.boundary)
        g = as_fraction(gamma) if gamma is not None else eps0 / 2
        report = maeda_destabilize(pair, g)
        extras = dict(report.extras)
        extras["route"] = "adjoint_ample"
        extras["k_plus_c_squared"] = format_fraction(kc2)
        return dataclasses.replace(report, pipeline="theorem", extras=extras)

    prov = pair.provenance
    if prov is not None and prov.r >= 1 and all(p.on_boundary for p in prov.points):
        parent = prov.parent
        parent_adjoint = -parent.k - parent.boundary
        if is_ample(parent, parent_adjoint):
            eps0 = _constant_threshold(parent, parent.boundary, parent_adjoint)
            g = as_fraction(gamma) if gamma is not None else eps0 / 2
            report = flop_destabilize(pair, g, pipeline_name="theorem")
            extras = dict(report.extras)
            extras["route"] = "blown_up_adjoint_ample"
            extras["k_plus_c_squared"] = format_fraction(kc2)
            extras["gamma"] = format_fraction(g)
            # scope statement: instability holds for every angle in the ample
            # region making the closed form negative at this gamma
            if "closed_form" in extras:
                closed = MPoly.parse(extras["closed_form"]).substitute("g", g)
                scoped = unstable_beta_range(closed, region.interval)
                extras["closed_form_negative_ranges"] = [
                    r.to_json() for r in scoped.negative_ranges()
                ]
            certs = report.certificates + (
                "statement scoped to angles in the ample region where the closed form is negative",)
            return dataclasses.replace(report, pipeline="theorem", extras=extras,
                                       certificates=certs)

    return StabilityReport(
        pipeline="theorem",
        configuration=summary,
        verdict=Verdict.INVALID_CONFIG,
        certificates=("presentation matches neither route: -K-C is not ample and no "
                      "boundary blow-up presentation with an adjoint-ample parent is recorded",),
        extras={"k_plus_c_squared": format_fraction(kc2)},
    )
