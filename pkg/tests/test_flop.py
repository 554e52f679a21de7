import random
from fractions import Fraction as Q

import pytest

from flopslope.catalog import build_surface, get_entry
from flopslope.dnc import DNCConfig, slope_futaki
from flopslope.flop import (
    FlopConstructionError,
    FlopError,
    FlopSpec,
    FlopTriple,
    blowup_oracle_triple,
    flop_curve_pairings,
    flop_futaki,
    flop_triple_product,
    flop_window,
)
from flopslope.mpoly import MPoly
from flopslope.surface import log_polarization

B, C = MPoly.var("b"), MPoly.var("c")


def _nonboundary_config(built):
    return DNCConfig(built.pair, built.z, False, log_polarization(built.pair))


def test_pairings_boundary_route():
    built = get_entry("conic_blowup_r2").build()
    config = DNCConfig.standard(built.pair)
    pairings = flop_curve_pairings(config, FlopSpec.from_provenance(built.pair))
    assert pairings.l_dot == (B - C, B - C)
    assert pairings.d_dot == (Q(0), Q(0))


def test_pairings_f1_anticanonical_generic_tangents(f1_anticanonical):
    config = _nonboundary_config(f1_anticanonical)
    pairings = flop_curve_pairings(config, FlopSpec.from_provenance(f1_anticanonical.pair))
    assert pairings.l_dot == (B - C,)
    assert pairings.d_dot == (Q(1),)


def test_pairings_point_off_boundary():
    built = build_surface({
        "minimal_model": "P2",
        "boundary": {"name": "cubic"},
        "z": {"name": "line"},
        "blowups": [{"on_boundary": False, "on_Z": True}],
    })
    config = _nonboundary_config(built)
    pairings = flop_curve_pairings(config, FlopSpec.from_provenance(built.pair))
    assert pairings.d_dot == (Q(0),)


def test_pairings_tangent_directions_agree():
    built = build_surface({
        "minimal_model": "P2",
        "boundary": {"name": "cubic"},
        "z": {"name": "line"},
        "blowups": [{"on_boundary": True, "on_Z": True, "tangent_dir_equals_Z": True}],
    })
    config = _nonboundary_config(built)
    pairings = flop_curve_pairings(config, FlopSpec.from_provenance(built.pair))
    assert pairings.d_dot == (Q(0),)


def test_pairings_override(f1_anticanonical):
    config = _nonboundary_config(f1_anticanonical)
    spec = FlopSpec.from_provenance(f1_anticanonical.pair, d_prime_dot_ci=(Q(0),))
    assert flop_curve_pairings(config, spec).d_dot == (Q(0),)


def test_pairings_require_center_on_z():
    built = build_surface({
        "minimal_model": "P2",
        "boundary": {"name": "cubic"},
        "z": {"name": "line"},
        "blowups": [{"on_boundary": True, "on_Z": False}],
    })
    config = _nonboundary_config(built)
    with pytest.raises((FlopConstructionError, FlopError)):
        flop_futaki(config, FlopSpec.from_provenance(built.pair))


def test_flop_spec_validation():
    with pytest.raises(FlopError):
        FlopSpec(0)
    with pytest.raises(FlopError):
        FlopSpec(1, deltas=(MPoly.const(-1),))
    with pytest.raises(FlopError):
        FlopSpec(1, d_prime_dot_ci=(Q(1, 2),))


def test_triple_product_zero_pairings():
    base = MPoly.const(Q(7, 3))
    t = FlopTriple(base, ((MPoly.zero(), MPoly.zero(), MPoly.zero()),))
    assert flop_triple_product(t) == base


def test_triple_product_unit_curve():
    one = MPoly.const(1)
    t = FlopTriple(MPoly.zero(), ((one, one, one),))
    assert flop_triple_product(t) == MPoly.const(-1)


def test_triple_product_symbolic_cube():
    delta_minus_c = B - C
    base = 6 * C * B * (2 - C)
    t = FlopTriple(base, ((delta_minus_c,) * 3,))
    assert flop_triple_product(t) == base - delta_minus_c ** 3


def test_triple_product_symmetric_and_trilinear():
    rng = random.Random(5)
    for _ in range(50):
        base = Q(rng.randint(-9, 9), rng.randint(1, 5))
        r = [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
        value = flop_triple_product(FlopTriple(MPoly.const(base), (tuple(MPoly.const(x) for x in r),)))
        for perm in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
            permuted = tuple(MPoly.const(r[i]) for i in perm)
            assert flop_triple_product(FlopTriple(MPoly.const(base), (permuted,))) == value
        # additivity in the first slot (base and pairing add together)
        b2 = Q(rng.randint(-9, 9), rng.randint(1, 5))
        r1b = Q(rng.randint(-4, 4), rng.randint(1, 3))
        lhs = flop_triple_product(FlopTriple(
            MPoly.const(base + b2),
            ((MPoly.const(r[0] + r1b), MPoly.const(r[1]), MPoly.const(r[2])),)))
        rhs = (flop_triple_product(FlopTriple(MPoly.const(base), (tuple(MPoly.const(x) for x in r),)))
               + flop_triple_product(FlopTriple(MPoly.const(b2),
                                                ((MPoly.const(r1b), MPoly.const(r[1]), MPoly.const(r[2])),))))
        assert lhs == rhs


def test_oracle_trivial_cases():
    assert blowup_oracle_triple((0, 0, 0), (2, 3, 5), Q(9)) == 9 - 30
    assert blowup_oracle_triple((1, 4, 2), (1, 1, 1), Q(5)) == 4


def test_oracle_matches_cube_rule_on_random_samples():
    rng = random.Random(1234)
    for _ in range(100):
        base = Q(rng.randint(-50, 50), rng.randint(1, 8))
        m = tuple(Q(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        r = tuple(Q(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        direct = flop_triple_product(FlopTriple(MPoly.const(base),
                                                (tuple(MPoly.const(x) for x in r),)))
        oracle = blowup_oracle_triple(m, r, base)
        assert direct == MPoly.const(oracle)
        # independence from the multiplicities
        m2 = tuple(x + Q(rng.randint(1, 3)) for x in m)
        assert blowup_oracle_triple(m2, r, base) == oracle
        # double flop with negated pairings is the identity
        again = flop_triple_product(FlopTriple(direct, (tuple(MPoly.const(-x) for x in r),)))
        assert again == MPoly.const(base)


def test_oracle_matches_cube_rule_symbolically():
    # the oracle also works with polynomial entries: one flopped curve with
    # pairing delta - c against a symbolic base
    base = 6 * C * B * (2 - C)
    pairing = B - C
    direct = flop_triple_product(FlopTriple(base, ((pairing, pairing, pairing),)))
    for m in (MPoly.zero(), MPoly.const(Q(2, 3)), B):
        assert blowup_oracle_triple((m, m, m), (pairing, pairing, pairing), base) == direct


def test_flop_futaki_example51_all_r():
    for r in range(1, 6):
        built = get_entry(f"conic_blowup_r{r}").build()
        config = DNCConfig.standard(built.pair)
        slope = slope_futaki(config)
        expected_slope = ((6 * B * C - 3 * C ** 2) * (2 + B * (4 - r))
                          + (2 * C ** 3 - 3 * C ** 2 * B) * (4 - r))
        assert slope.value == expected_slope
        flopped = flop_futaki(config, FlopSpec.from_provenance(built.pair))
        assert flopped.value == slope.value + 2 * r * (C - B) ** 3


def test_flop_futaki_none_spec_degenerates():
    built = get_entry("conic_blowup_r3").build()
    config = DNCConfig.standard(built.pair)
    assert flop_futaki(config, None).value == slope_futaki(config).value


def test_flop_futaki_f1_anticanonical(f1_anticanonical):
    config = _nonboundary_config(f1_anticanonical)
    flopped = flop_futaki(config, FlopSpec.from_provenance(f1_anticanonical.pair))
    expected = 6 * C * B * (2 - C) - 2 * (B - C) ** 3 - 3 * (1 - B) * (B - C) ** 2
    assert flopped.value == expected
    assert flopped.value.substitute("c", 3 * B) == 24 * B ** 2 - 26 * B ** 3


def test_flop_futaki_bl2p2_anticanonical(bl2p2_anticanonical):
    config = _nonboundary_config(bl2p2_anticanonical)
    flopped = flop_futaki(config, FlopSpec.from_provenance(bl2p2_anticanonical.pair))
    slope = slope_futaki(config)
    assert slope.value == 3 * B * C * (2 - C) - C ** 2 * (2 * C - 3)
    assert flopped.value == slope.value - 4 * (B - C) ** 3 - 6 * (B - C) ** 2 * (1 - B)
    assert flopped.value.substitute("c", 3 * B) == B ** 2 * (21 - 25 * B)


def test_flop_futaki_second_path_through_triple_products():
    # rebuild the corrected invariant by applying the cube rule to each
    # term of 2 L^3 + 3 (K - pullback + (1-b) boundary) . L^2 separately,
    # using that the flopped curves pair trivially with both canonical terms
    for name in ("conic_blowup_r1", "conic_blowup_r2", "conic_blowup_r5", "f1_anticanonical", "bl2p2_anticanonical"):
        built = get_entry(name).build()
        if built.z_is_boundary:
            config = DNCConfig.standard(built.pair)
        else:
            config = _nonboundary_config(built)
        spec = FlopSpec.from_provenance(built.pair)
        pair = built.pair
        z = config.z
        lz = config.polarization.pairing(z)
        z2 = MPoly.const(z.dot(z))
        kz = MPoly.const(pair.k.dot(z))
        cz = MPoly.const(pair.boundary.dot(z))
        theta = B if config.z_is_boundary else MPoly.const(1)
        l_cubed = -3 * C * C * lz + C ** 3 * z2
        a_l_squared = -C * C * (kz + (1 - B) * cz) + theta * (2 * C * lz - C * C * z2)
        assert 2 * l_cubed + 3 * a_l_squared == slope_futaki(config).value

        pairings = flop_curve_pairings(config, spec)
        first = flop_triple_product(FlopTriple(
            l_cubed, tuple((l, l, l) for l in pairings.l_dot)))
        second = flop_triple_product(FlopTriple(
            a_l_squared,
            tuple(((1 - B) * MPoly.const(d), l, l)
                  for l, d in zip(pairings.l_dot, pairings.d_dot))))
        assert 2 * first + 3 * second == flop_futaki(config, spec).value


def test_k_trivial_surrogate_rejects_bad_center():
    built = build_surface({
        "minimal_model": "P2",
        "boundary": {"name": "cubic"},
        "z": {"name": "line"},
        "blowups": [{"on_boundary": True, "on_Z": False}],
    })
    config = _nonboundary_config(built)
    # claim the center sits on Z even though the transform never met it
    bad_points = tuple(
        type(p)(on_boundary=p.on_boundary, on_z=True) for p in built.pair.provenance.points)
    spec = FlopSpec(1, (), bad_points, None)
    with pytest.raises(FlopError):
        flop_futaki(config, spec)


def test_flop_window_f1_anticanonical(f1_anticanonical):
    parent = f1_anticanonical.pair.provenance.parent
    z_parent = parent.lattice.generator("H")
    window = flop_window(parent, f1_anticanonical.pair, z_parent,
                         FlopSpec.from_provenance(f1_anticanonical.pair), z_prime=f1_anticanonical.z)
    assert window.window.lo == B
    assert window.window.hi == 3 * B
    assert window.valid == "nonempty"


def test_flop_window_conic_blowup():
    built = get_entry("conic_blowup_r2").build()
    parent = built.pair.provenance.parent
    window = flop_window(parent, built.pair, parent.boundary,
                         FlopSpec.from_provenance(built.pair))
    assert window.window.lo == B
    assert window.window.hi == B + Q(1, 2)


def test_flop_window_crossed_bounds_is_empty():
    built = get_entry("conic_blowup_r2").build()
    parent = built.pair.provenance.parent
    spec = FlopSpec.from_provenance(built.pair, deltas=(MPoly.const(2), MPoly.const(2)))
    window = flop_window(parent, built.pair, parent.boundary, spec)
    assert window.is_empty()
    assert window.valid == "empty"
