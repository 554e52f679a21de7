"""Acceptance suite: one test (or test group) per numbered criterion.

All comparisons are exact: polynomial identities or rational equality, with
zero tolerance.  The conftest hook prints a PASS/FAIL line per criterion at
the end of the run.
"""

import random
from fractions import Fraction as Q

import pytest

from flopslope.analyzer import (
    closed_form_small_beta,
    flop_destabilize,
    maeda_destabilize,
    theorem_check,
    unstable_beta_range,
)
from flopslope.catalog import get_entry
from flopslope.cli import main as cli_main
from flopslope.dnc import DNCConfig, general_futaki, slope_futaki
from flopslope.flop import (
    FlopSpec,
    FlopTriple,
    blowup_oracle_triple,
    flop_futaki,
    flop_triple_product,
    flop_window,
)
from flopslope.mpoly import MPoly, limit_at_zero_plus
from flopslope.roots import Interval, Sign, sign_on_interval
from flopslope.stability import Verdict
from flopslope.surface import log_polarization, pseff_threshold_certificate, seshadri

B, C, G = MPoly.var("b"), MPoly.var("c"), MPoly.var("g")
ONE_PLUS_B = B + 1


# -- criterion 1 ---------------------------------------------------------------


def test_criterion_01_boundary_slope(f1_pair):
    futaki = slope_futaki(DNCConfig.standard(f1_pair))
    at_eps = futaki.value.substitute("c", ONE_PLUS_B)
    assert at_eps == 2 * ONE_PLUS_B * (B ** 2 + 2 * B - 2)

    result = unstable_beta_range(at_eps, Interval.lopen(0, 1))
    negatives = result.negative_ranges()
    assert len(negatives) == 1
    assert negatives[0].lo == Q(0)
    root = negatives[0].hi
    assert root.defining_polynomial == B ** 2 + 2 * B - 2
    iv = root.isolating_interval
    target = Q("0.7320508")
    assert iv.lo <= target + Q(1, 10 ** 6) and iv.hi >= target - Q(1, 10 ** 6)
    assert iv.width <= 2 * Q(1, 10 ** 6)


def test_criterion_01_negcurve_slope(f1_pair):
    # pinned expected display; the closed-form branch produces exactly
    # twice this quantity, consistently with criteria 3, 4 and 6
    e = f1_pair.lattice.generator("E")
    futaki = slope_futaki(DNCConfig.standard(f1_pair, z=e))
    at_eps = futaki.value.substitute("c", ONE_PLUS_B)
    assert at_eps == ONE_PLUS_B * (2 - B ** 2 - 2 * B)


# -- criterion 2 ---------------------------------------------------------------


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_criterion_02_conic_blowups(r):
    built = get_entry(f"conic_blowup_r{r}").build()
    config = DNCConfig.standard(built.pair)
    slope = slope_futaki(config)
    expected = ((6 * B * C - 3 * C ** 2) * (2 + B * (4 - r))
                + (2 * C ** 3 - 3 * C ** 2 * B) * (4 - r))
    assert slope.value == expected

    flopped = flop_futaki(config, FlopSpec.from_provenance(built.pair))
    assert flopped.value - slope.value == 2 * r * (C - B) ** 3

    at_rule = flopped.value.substitute("c", MPoly.const(Q(1, 2)) + B)
    assert limit_at_zero_plus(at_rule, "b") == MPoly.const(Q(-1, 2))


# -- criterion 3 ---------------------------------------------------------------


def test_criterion_03_anticanonical_f1(f1_anticanonical):
    config = DNCConfig(f1_anticanonical.pair, f1_anticanonical.z, False, log_polarization(f1_anticanonical.pair))
    slope = slope_futaki(config)
    assert slope.value == 6 * C * B * (2 - C)

    flopped = flop_futaki(config, FlopSpec.from_provenance(f1_anticanonical.pair))
    assert flopped.value == (6 * C * B * (2 - C)
                             - 2 * (B - C) ** 3 - 3 * (1 - B) * (B - C) ** 2)
    at_rule = flopped.value.substitute("c", 3 * B)
    assert at_rule == 24 * B ** 2 - 26 * B ** 3

    report = flop_destabilize(f1_anticanonical.pair, z=f1_anticanonical.z, c_rule=3 * B)
    assert [t.value for t in report.thresholds] == [Q(12, 13)]

    parent = f1_anticanonical.pair.provenance.parent
    window = flop_window(parent, f1_anticanonical.pair, parent.lattice.generator("H"),
                         FlopSpec.from_provenance(f1_anticanonical.pair), z_prime=f1_anticanonical.z)
    assert window.window.lo == B and window.window.hi == 3 * B


# -- criterion 4 ---------------------------------------------------------------


def test_criterion_04_two_point_blowup(bl2p2_anticanonical):
    config = DNCConfig(bl2p2_anticanonical.pair, bl2p2_anticanonical.z, False, log_polarization(bl2p2_anticanonical.pair))
    slope = slope_futaki(config)
    assert slope.value == 3 * B * C * (2 - C) - C ** 2 * (2 * C - 3)

    for beta in (Q(1, 10), Q(1, 2), Q(9, 10)):
        at_beta = slope.value.substitute("b", beta)
        verdict = sign_on_interval(at_beta, Interval.open(0, beta))
        assert verdict.kind is Sign.POSITIVE

    flopped = flop_futaki(config, FlopSpec.from_provenance(bl2p2_anticanonical.pair))
    at_rule = flopped.value.substitute("c", 3 * B)
    assert at_rule == B ** 2 * (21 - 25 * B)

    report = flop_destabilize(bl2p2_anticanonical.pair, z=bl2p2_anticanonical.z, c_rule=3 * B)
    assert [t.value for t in report.thresholds] == [Q(21, 25)]


# -- criterion 5 ---------------------------------------------------------------


def test_criterion_05_oracle_and_involution():
    rng = random.Random(20240817)
    for _ in range(100):
        base = Q(rng.randint(-60, 60), rng.randint(1, 9))
        m = tuple(Q(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(3))
        r = tuple(Q(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(3))
        triple = FlopTriple(MPoly.const(base), (tuple(MPoly.const(x) for x in r),))
        direct = flop_triple_product(triple)
        assert direct == MPoly.const(blowup_oracle_triple(m, r, base))
        flipped = FlopTriple(direct, (tuple(MPoly.const(-x) for x in r),))
        assert flop_triple_product(flipped) == MPoly.const(base)


# -- criterion 6 ---------------------------------------------------------------


CATALOG_CONFIGS = [
    ("f1_e_plus_f", "boundary"),
    ("f1_e_plus_f", "E"),
    ("p2_conic", "boundary"),
    ("p2_cubic", "H"),
    ("f1_anticanonical", "own"),
    ("bl2p2_anticanonical", "own"),
    ("conic_blowup_r1", "boundary"),
    ("conic_blowup_r2", "boundary"),
    ("conic_blowup_r4", "boundary"),
    ("conic_blowup_r5", "boundary"),
]


@pytest.mark.parametrize("name,zkind", CATALOG_CONFIGS)
def test_criterion_06_path_equivalence(name, zkind):
    built = get_entry(name).build()
    if zkind == "boundary":
        config = DNCConfig.standard(built.pair)
    elif zkind == "own":
        config = DNCConfig(built.pair, built.z, False, log_polarization(built.pair))
    else:
        config = DNCConfig.standard(built.pair, z=built.pair.lattice.generator(zkind))
    closed = slope_futaki(config)
    engine = general_futaki(config)
    assert engine.numerator == closed.value * engine.denominator


# -- criterion 7 ---------------------------------------------------------------


@pytest.mark.parametrize("name,eps0", [("p2_conic", Q(1, 2)), ("f1_e_plus_f", Q(1))])
def test_criterion_07_adjoint_ample_pipeline(name, eps0):
    pair = get_entry(name).build().pair
    gamma = eps0 / 2
    report = maeda_destabilize(pair, gamma)
    limit = Q(report.extras["zero_angle_limit"])
    assert limit <= -2 * gamma * gamma
    beta0 = Q(report.extras["beta0"])
    assert beta0 > 0
    verdict = sign_on_interval(report.futaki_after_rule, Interval.open(0, beta0))
    assert verdict.kind is Sign.NEGATIVE


# -- criterion 8 ---------------------------------------------------------------


def test_criterion_08_theorem_silent_case():
    report = theorem_check(get_entry("p2_cubic").build().pair)
    assert report.verdict is Verdict.NOT_DESTABILIZED


@pytest.mark.parametrize("name,r", [("conic_blowup_r1", 1), ("conic_blowup_r2", 2)])
def test_criterion_08_theorem_blown_up_presentations(name, r):
    built = get_entry(name).build()
    report = theorem_check(built.pair)
    assert report.verdict is Verdict.UNSTABLE
    w = report.witness
    assert report.futaki.value.eval({"b": w.beta, "c": w.c}) == w.value < 0

    closed = closed_form_small_beta(built.pair.provenance.parent, built.pair, r)
    flopped = flop_futaki(DNCConfig.standard(built.pair),
                          FlopSpec.from_provenance(built.pair))
    assert closed == flopped.value.substitute("c", G)


# -- criterion 9 ---------------------------------------------------------------


def test_criterion_09_threshold_table(f1_pair):
    eps_f1 = seshadri(f1_pair, f1_pair.boundary, log_polarization(f1_pair))
    assert eps_f1.single() == ONE_PLUS_B

    for r in (1, 2, 3, 4, 5):
        built = get_entry(f"conic_blowup_r{r}").build()
        eps = seshadri(built.pair, built.z, log_polarization(built.pair))
        assert eps.single() == B

    conic_blowup = get_entry("conic_blowup_r2").build()
    tau = pseff_threshold_certificate(conic_blowup.pair, conic_blowup.z,
                                      log_polarization(conic_blowup.pair), [])
    assert tau.known and tau.threshold.single() == B + Q(1, 2)

    f1_anticanonical = get_entry("f1_anticanonical").build()
    tau61 = pseff_threshold_certificate(f1_anticanonical.pair, f1_anticanonical.z,
                                        log_polarization(f1_anticanonical.pair), [])
    assert tau61.known and tau61.threshold.single() == 3 * B


# -- criterion 10 --------------------------------------------------------------


def test_criterion_10_verification_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "one", tmp_path / "two"
    code1 = cli_main(["verify-examples", "--out", str(out1)])
    stdout1 = capsys.readouterr().out
    code2 = cli_main(["verify-examples", "--out", str(out2)])
    stdout2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert stdout1 == stdout2
    files1 = sorted(p.name for p in out1.iterdir())
    files2 = sorted(p.name for p in out2.iterdir())
    assert files1 == files2 and files1
    for name in files1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
