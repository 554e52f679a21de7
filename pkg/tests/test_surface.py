import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from flopslope.catalog import build_surface, get_entry, named_curve, p2
from flopslope.mpoly import MPoly
from flopslope.roots import Interval
from flopslope.surface import (
    BetaFunctionClass,
    BlowupPoint,
    GenusParityError,
    LatticeMismatchError,
    SurfaceError,
    adjunction_genus,
    amp_region,
    blow_up,
    intersect,
    is_ample,
    k_plus_c_squared,
    log_polarization,
    proper_transform,
    pseff_threshold_certificate,
    seshadri,
)

B = MPoly.var("b")


def test_intersections_on_f1(f1_pair):
    lat = f1_pair.lattice
    e, f = lat.generator("E"), lat.generator("F")
    assert intersect(e, e) == -1
    assert intersect(e, f) == 1
    assert intersect(f, f) == 0
    k = lat.canonical_class
    assert k == -2 * e - 3 * f
    assert intersect(k, k) == 8  # 4*(-1) + 12*1 + 0


def test_intersections_on_p2():
    pair = p2()
    h = pair.lattice.generator("H")
    assert intersect(h, h) == 1
    assert intersect(pair.k, pair.k) == 9


def test_lattice_mismatch_rejected(f1_pair):
    h = p2().lattice.generator("H")
    with pytest.raises(LatticeMismatchError):
        intersect(h, f1_pair.lattice.generator("E"))


def test_signature_validation():
    from flopslope.surface import PicardLattice

    with pytest.raises(SurfaceError):
        PicardLattice(("A", "B"), ((Q(1), Q(0)), (Q(0), Q(1))), (Q(0), Q(0)))


def test_blow_up_two_points_on_line():
    pair = p2()
    pts = [BlowupPoint(on_boundary=False, on_z=True),
           BlowupPoint(on_boundary=False, on_z=True)]
    result = blow_up(pair, pts)
    line = pair.lattice.generator("H")
    z_prime = proper_transform(result, line, [1, 1])
    assert intersect(z_prime, z_prime) == -1


def test_blow_up_no_points_is_identity():
    pair = p2()
    result = blow_up(pair, [])
    assert result.pair.lattice == pair.lattice
    assert result.pair.boundary == pair.boundary
    assert result.pair.mori_generators == pair.mori_generators
    assert result.exceptionals == ()


def test_blow_up_cubic_and_line_point(f1_anticanonical):
    boundary = f1_anticanonical.pair.boundary
    assert intersect(boundary, boundary) == 8
    # the line transform is a fiber of the ruling: square zero
    assert intersect(f1_anticanonical.z, f1_anticanonical.z) == 0


def test_proper_transform_multiplicities():
    pair = p2()
    pts = [BlowupPoint(on_boundary=True, on_z=False)]
    result = blow_up(pair, pts)
    cubic = named_curve(pair, "cubic")
    transform = proper_transform(result, cubic, [1])
    assert intersect(transform, transform) == 8
    untouched = proper_transform(result, cubic, [0])
    assert untouched == result.pullback(cubic)
    with pytest.raises(SurfaceError):
        proper_transform(result, cubic, [-1])


def test_adjunction_genus_values(f1_pair):
    pair = p2()
    assert adjunction_genus(pair, named_curve(pair, "line")) == 0
    assert adjunction_genus(pair, named_curve(pair, "cubic")) == 1
    assert adjunction_genus(f1_pair, f1_pair.boundary) == 0


def test_adjunction_genus_parity_error():
    pair = p2()
    half = pair.lattice.divisor([Q(1, 2)])
    with pytest.raises(GenusParityError):
        adjunction_genus(pair, half)


def test_is_ample_certificates(f1_pair):
    anti = -f1_pair.k
    cert = is_ample(f1_pair, anti)
    assert cert
    assert any("D^2 = 8" in c for c in cert.checks)
    e = f1_pair.lattice.generator("E")
    bad = is_ample(f1_pair, e)
    assert not bad and "<= 0" in bad.failure
    zero = p2().lattice.zero()
    assert not is_ample(p2(), zero)


def test_amp_region_f1(f1_pair):
    region = amp_region(f1_pair)
    assert region.alf
    assert region.interval == Interval.lopen(0, 1)


def test_amp_region_p2_cubic():
    region = amp_region(get_entry("p2_cubic").build().pair)
    assert region.alf and region.interval == Interval.lopen(0, 1)


def test_amp_region_p2_quartic_not_alf():
    region = amp_region(get_entry("p2_quartic").build().pair)
    assert not region.alf
    assert region.interval == Interval(Q(1, 4), Q(1), True, False)


def test_seshadri_f1_boundary(f1_pair):
    eps = seshadri(f1_pair, f1_pair.boundary, log_polarization(f1_pair))
    assert eps.single() == B + 1


def test_seshadri_f1_negative_section(f1_pair):
    e = f1_pair.lattice.generator("E")
    eps = seshadri(f1_pair, e, log_polarization(f1_pair))
    assert eps.single() == B + 1


def test_seshadri_p2_line_constant_polarization():
    pair = get_entry("p2_line").build().pair
    h = pair.lattice.generator("H")
    eps = seshadri(pair, h, BetaFunctionClass(h, pair.lattice.zero()))
    assert eps.single() == MPoly.const(1)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_seshadri_conic_blowups(r):
    built = get_entry(f"conic_blowup_r{r}").build()
    eps = seshadri(built.pair, built.z, log_polarization(built.pair))
    assert eps.single() == B


def test_seshadri_unbounded_flag(f1_pair):
    f = f1_pair.lattice.generator("F")
    eps = seshadri(f1_pair, -1 * f, log_polarization(f1_pair))
    assert eps.unbounded


def test_seshadri_quadratic_binding_flagged_on_pruned_generators():
    # with the fiber class removed from the generator list nothing pairs
    # positively with the boundary, so only the quadratic constraint is
    # left: the result must be flagged, not silently linearized
    from flopslope.surface import SurfacePair

    built = build_surface({
        "minimal_model": "P2",
        "boundary": {"name": "line"},
        "blowups": [{"on_boundary": False, "on_Z": False}],
    })
    pair = built.pair
    e1 = pair.lattice.generator("e1")
    pruned = SurfacePair(pair.lattice, pair.boundary, (e1,),
                         minimal_model=pair.minimal_model)
    eps = seshadri(pruned, pruned.boundary, log_polarization(pruned))
    assert eps.quadratic_binding
    assert "root of" in eps.algebraic_description
    with pytest.raises(SurfaceError):
        eps.single()


def test_linear_min_pieces_with_crossing():
    from flopslope.surface import _linear_min_pieces

    b = MPoly.var("b")
    pieces = _linear_min_pieces([1 - b, b], Interval.lopen(0, 1))
    assert len(pieces) == 2
    assert pieces[0].value == b and pieces[0].beta_range.hi == Q(1, 2)
    assert pieces[1].value == 1 - b and pieces[1].beta_range.lo == Q(1, 2)


def test_build_surface_with_explicit_generators():
    built = build_surface({
        "minimal_model": "F1",
        "boundary": {"name": "e_plus_f"},
        "mori_generators": [["1", "0"], ["0", "1"]],
    })
    assert len(built.pair.mori_generators) == 2
    region = amp_region(built.pair)
    assert region.alf


def test_pseff_certificate_conic_blowup():
    built = get_entry("conic_blowup_r2").build()
    cert = pseff_threshold_certificate(built.pair, built.z,
                                       log_polarization(built.pair), [])
    assert cert.known
    assert cert.threshold.single() == B + Q(1, 2)


def test_pseff_certificate_f1_anticanonical(f1_anticanonical):
    cert = pseff_threshold_certificate(f1_anticanonical.pair, f1_anticanonical.z,
                                       log_polarization(f1_anticanonical.pair), [])
    assert cert.known
    assert cert.threshold.single() == 3 * B


def test_pseff_certificate_without_provenance(f1_pair):
    cert = pseff_threshold_certificate(f1_pair, f1_pair.boundary,
                                       log_polarization(f1_pair), [])
    assert not cert.known


def test_pseff_certificate_with_wrong_deltas():
    built = get_entry("conic_blowup_r2").build()
    cert = pseff_threshold_certificate(built.pair, built.z,
                                       log_polarization(built.pair),
                                       [MPoly.const(Q(1)), MPoly.const(Q(1))])
    assert not cert.known


def test_k_plus_c_squared_values(f1_pair):
    assert k_plus_c_squared(get_entry("p2_cubic").build().pair) == 0
    assert k_plus_c_squared(get_entry("p2_conic").build().pair) == 1
    assert k_plus_c_squared(f1_pair) == 3


def test_f3_catalog_entry_allows_deep_section():
    pair = get_entry("F3").build().pair
    e = pair.lattice.generator("E")
    assert intersect(e, e) == -3
    assert adjunction_genus(pair, e) == 0


# -- structural invariants ----------------------------------------------------


def _random_class(lattice, rng):
    return lattice.divisor([Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in lattice.basis])


def test_pullback_preserves_intersections():
    pair = p2()
    pts = [BlowupPoint(on_boundary=True, on_z=True) for _ in range(3)]
    result = blow_up(pair, pts)
    rng = random.Random(7)
    for _ in range(20):
        a = _random_class(pair.lattice, rng)
        b = _random_class(pair.lattice, rng)
        assert intersect(result.pullback(a), result.pullback(b)) == intersect(a, b)
        for e in result.exceptionals:
            assert intersect(result.pullback(a), e) == 0
    for i, ei in enumerate(result.exceptionals):
        for j, ej in enumerate(result.exceptionals):
            assert intersect(ei, ej) == (-1 if i == j else 0)


def test_canonical_square_drops_by_r():
    pair = p2()
    for r in range(1, 5):
        pts = [BlowupPoint(on_boundary=True, on_z=True) for _ in range(r)]
        result = blow_up(pair, pts)
        assert intersect(result.pair.k, result.pair.k) == 9 - r


def test_exceptionals_have_genus_zero():
    built = get_entry("conic_blowup_r5").build()
    for e in built.pair.provenance.exceptionals:
        assert adjunction_genus(built.pair, e) == 0


@pytest.mark.parametrize("name", ["conic_blowup_r1", "conic_blowup_r2", "conic_blowup_r5", "f1_anticanonical", "bl2p2_anticanonical"])
def test_seshadri_monotone_under_blow_up(name):
    built = get_entry(name).build()
    prov = built.pair.provenance
    parent = prov.parent
    n = parent.lattice.rank
    z_parent = parent.lattice.divisor(built.z.coeffs[:n])
    eps_child = seshadri(built.pair, built.z, log_polarization(built.pair)).single()
    eps_parent = seshadri(parent, z_parent, log_polarization(parent)).single()
    deltas = [MPoly.const(-log_polarization(built.pair).base.coeffs[n + i])
              + B * (-log_polarization(built.pair).beta_coefficient.coeffs[n + i])
              for i in range(prov.r)]
    for x in [Q(k, 16) for k in range(1, 16)]:
        child = eps_child.eval({"b": x})
        assert child <= eps_parent.eval({"b": x})
        for d in deltas:
            assert child <= d.eval({"b": x})


def test_is_ample_agrees_with_amp_region(f1_pair):
    rng = random.Random(11)
    for pair in (f1_pair, get_entry("p2_quartic").build().pair,
                 get_entry("bl2p2_anticanonical").build().pair):
        region = amp_region(pair)
        pol = log_polarization(pair)
        for _ in range(16):
            beta = Q(rng.randint(1, 96), 96)
            inside = region.interval is not None and region.interval.contains(beta)
            assert bool(is_ample(pair, pol.at(beta))) == inside


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_blowup_boundary_transform_squares(r, seed):
    rng = random.Random(seed)
    pair = p2()
    pts = [BlowupPoint(on_boundary=rng.random() < 0.7, on_z=False) for _ in range(r)]
    result = blow_up(pair, pts)
    on = sum(1 for p in pts if p.on_boundary)
    boundary = result.pair.boundary
    assert intersect(boundary, boundary) == 9 - on
