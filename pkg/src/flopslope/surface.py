"""Picard-lattice model of rational surfaces and their blow-ups.

A surface is represented by a labeled basis of its Picard lattice, the Gram
matrix of the intersection form, and the canonical class.  Ampleness is
decided by positivity against a finite list of curve classes spanning the
cone of curves (shipped as catalog data, not computed); correctness of that
list for the catalog surfaces is a documented assumption.  All arithmetic
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .mpoly import MPoly, as_fraction, format_fraction
from .roots import Interval, Sign, sign_on_interval


class SurfaceError(ValueError):
    pass


class LatticeMismatchError(SurfaceError):
    pass


class GenusParityError(SurfaceError):
    """K.C + C^2 is odd: the class cannot be a reduced irreducible curve."""


class EmptyGeneratorListError(SurfaceError):
    pass


def _signature(gram: list[list[Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix,
    by exact congruence diagonalization."""
    m = [row[:] for row in gram]
    n = len(m)
    pos = neg = zero = 0
    idx = list(range(n))
    for k in range(n):
        # find a nonzero diagonal pivot at or after k
        pivot = next((i for i in range(k, n) if m[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                         if m[i][j] != 0), None)
            if pair is None:
                zero += n - k
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i,i) entry 2*m[i][j]
            for t in range(n):
                m[i][t] += m[j][t]
            for t in range(n):
                m[t][i] += m[t][j]
            pivot = i
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            for row in m:
                row[k], row[pivot] = row[pivot], row[k]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = m[i][k] / d
            if not f:
                continue
            for t in range(n):
                m[i][t] -= f * m[k][t]
            for t in range(n):
                m[t][i] -= f * m[t][k]
    return pos, neg, zero


@dataclass(frozen=True)
class PicardLattice:
    """Labeled basis, symmetric Gram matrix, canonical class vector."""

    basis: tuple[str, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    canonical: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.basis)
        gram = tuple(tuple(as_fraction(x) for x in row) for row in self.gram)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise SurfaceError("Gram matrix shape does not match basis")
        for i in range(n):
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise SurfaceError("Gram matrix is not symmetric")
        canonical = tuple(as_fraction(x) for x in self.canonical)
        if len(canonical) != n:
            raise SurfaceError("canonical class length does not match basis")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "canonical", canonical)
        pos, neg, zero = _signature([list(row) for row in gram])
        if pos != 1 or zero != 0:
            raise SurfaceError(
                f"intersection form must have signature (1, n-1); got ({pos},{neg},{zero})")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def divisor(self, coeffs: Iterable) -> "DivisorClass":
        return DivisorClass(self, tuple(as_fraction(x) for x in coeffs))

    def zero(self) -> "DivisorClass":
        return self.divisor([0] * self.rank)

    def generator(self, label: str) -> "DivisorClass":
        i = self.basis.index(label)
        return self.divisor([1 if j == i else 0 for j in range(self.rank)])

    @property
    def canonical_class(self) -> "DivisorClass":
        return self.divisor(self.canonical)

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "gram": [[format_fraction(x) for x in row] for row in self.gram],
            "canonical_class": [format_fraction(x) for x in self.canonical],
        }


@dataclass(frozen=True)
class DivisorClass:
    lattice: PicardLattice
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_fraction(x) for x in self.coeffs)
        if len(coeffs) != self.lattice.rank:
            raise SurfaceError("coefficient length does not match lattice rank")
        object.__setattr__(self, "coeffs", coeffs)

    def _check(self, other: "DivisorClass"):
        if self.lattice != other.lattice:
            raise LatticeMismatchError("divisor classes live on different lattices")

    def dot(self, other: "DivisorClass") -> Fraction:
        self._check(other)
        g = self.lattice.gram
        return sum(
            (x * sum(g[i][j] * y for j, y in enumerate(other.coeffs))
             for i, x in enumerate(self.coeffs)),
            Fraction(0),
        )

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.lattice, tuple(-x for x in self.coeffs))

    def __rmul__(self, scalar):
        q = as_fraction(scalar)
        return DivisorClass(self.lattice, tuple(q * x for x in self.coeffs))

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def to_json(self) -> list:
        return [format_fraction(x) for x in self.coeffs]

    def __str__(self):
        pieces = []
        for x, label in zip(self.coeffs, self.lattice.basis):
            if not x:
                continue
            if x == 1:
                term = label
            elif x == -1:
                term = f"-{label}"
            else:
                term = f"{format_fraction(x)}*{label}"
            if pieces and not term.startswith("-"):
                pieces.append("+" + term)
            else:
                pieces.append(term)
        return "".join(pieces) if pieces else "0"


def intersect(a: DivisorClass, b: DivisorClass) -> Fraction:
    """Exact intersection number a^T . gram . b."""
    return a.dot(b)


@dataclass(frozen=True)
class BetaFunctionClass:
    """A divisor class varying linearly with the angle parameter:
    base + beta * beta_coefficient."""

    base: DivisorClass
    beta_coefficient: DivisorClass

    def __post_init__(self):
        if self.base.lattice != self.beta_coefficient.lattice:
            raise LatticeMismatchError("base and coefficient live on different lattices")

    @property
    def lattice(self) -> PicardLattice:
        return self.base.lattice

    def at(self, beta) -> DivisorClass:
        return self.base + as_fraction(beta) * self.beta_coefficient

    def pairing(self, other: DivisorClass) -> MPoly:
        """Intersection with a fixed class, as a polynomial in b."""
        return MPoly.const(self.base.dot(other)) + MPoly.var("b") * self.beta_coefficient.dot(other)

    def self_intersection(self) -> MPoly:
        b = MPoly.var("b")
        return (MPoly.const(self.base.dot(self.base))
                + 2 * b * self.base.dot(self.beta_coefficient)
                + b * b * self.beta_coefficient.dot(self.beta_coefficient))

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "beta_coefficient": self.beta_coefficient.to_json()}


def log_polarization(pair: "SurfacePair") -> BetaFunctionClass:
    """The standard family -K - (1-beta) C = (-K - C) + beta*C."""
    k = pair.lattice.canonical_class
    return BetaFunctionClass(-k - pair.boundary, pair.boundary)


@dataclass(frozen=True)
class BlowupPoint:
    """Incidence data of a blow-up center with the boundary curve and the
    slope-test curve Z.  The tangency flag is only meaningful when the point
    lies on both curves."""

    on_boundary: bool = False
    on_z: bool = False
    tangent_dir_equals_z: bool = False
    label: str = ""

    def __post_init__(self):
        if self.tangent_dir_equals_z and not (self.on_boundary and self.on_z):
            raise SurfaceError("tangency flag requires the point to lie on both curves")

    def to_json(self) -> dict:
        out = {"on_boundary": self.on_boundary, "on_Z": self.on_z,
               "tangent_dir_equals_Z": self.tangent_dir_equals_z}
        if self.label:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class Provenance:
    """Blow-up history linking a pair to its parent."""

    parent: "SurfacePair"
    points: tuple[BlowupPoint, ...]
    exceptionals: tuple[DivisorClass, ...]   # classes on the child lattice

    @property
    def r(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SurfacePair:
    """A surface (via its Picard lattice) with a boundary curve class and a
    spanning list of curve classes for the cone of curves."""

    lattice: PicardLattice
    boundary: DivisorClass
    mori_generators: tuple[DivisorClass, ...]
    minimal_model: str = ""
    provenance: Provenance | None = None
    name: str = ""
    generator_floor: int = -2

    def __post_init__(self):
        if self.boundary.lattice != self.lattice:
            raise LatticeMismatchError("boundary class on the wrong lattice")
        if self.boundary.is_zero():
            raise SurfaceError("boundary class must be nonzero")
        gens = tuple(self.mori_generators)
        for g in gens:
            if g.lattice != self.lattice:
                raise LatticeMismatchError("generator on the wrong lattice")
            sq = g.dot(g)
            if sq.denominator != 1 or sq < self.generator_floor:
                raise SurfaceError(
                    f"generator {g} has self-intersection {sq}; expected an integer >= {self.generator_floor}")
            genus = adjunction_genus_class(self.lattice, g)
            if genus < 0:
                raise SurfaceError(f"generator {g} has negative adjunction genus {genus}")
        object.__setattr__(self, "mori_generators", gens)

    @property
    def k(self) -> DivisorClass:
        return self.lattice.canonical_class

    def with_boundary(self, boundary: DivisorClass) -> "SurfacePair":
        return SurfacePair(self.lattice, boundary, self.mori_generators,
                           self.minimal_model, self.provenance, self.name,
                           self.generator_floor)

    def to_json(self) -> dict:
        out = self.lattice.to_json()
        out["boundary"] = self.boundary.to_json()
        out["mori_generators"] = [g.to_json() for g in self.mori_generators]
        if self.minimal_model:
            out["minimal_model"] = self.minimal_model
        if self.name:
            out["name"] = self.name
        return out


def adjunction_genus_class(lattice: PicardLattice, c: DivisorClass) -> int:
    kc = lattice.canonical_class.dot(c)
    c2 = c.dot(c)
    num = kc + c2
    if num.denominator != 1 or int(num) % 2 != 0:
        raise GenusParityError(f"K.C + C^2 = {num} is not an even integer")
    return 1 + int(num) // 2


def adjunction_genus(pair: SurfacePair, c: DivisorClass) -> int:
    """Arithmetic genus 1 + (K.C + C^2)/2; parity failure is an error."""
    return adjunction_genus_class(pair.lattice, c)


def k_plus_c_squared(pair: SurfacePair) -> Fraction:
    kc = pair.k + pair.boundary
    return kc.dot(kc)


@dataclass(frozen=True)
class BlowupResult:
    pair: SurfacePair
    pullback: Callable[[DivisorClass], DivisorClass]
    exceptionals: tuple[DivisorClass, ...]


def blow_up(pair: SurfacePair, points: Sequence[BlowupPoint],
            generator_multiplicities: Sequence[Sequence[int]] | None = None,
            extra_generators: Sequence[Sequence] = (),
            exceptional_prefix: str = "e") -> BlowupResult:
    """Blow up distinct points, extending the lattice by orthogonal
    (-1)-classes.

    The generator list is updated as pullbacks of the old generators minus
    the given incidence multiplicities plus the new exceptional classes;
    ``extra_generators`` supplies classes (coefficient vectors on the new
    basis) the caller knows to be effective, e.g. proper transforms of lines
    through pairs of the new points.  Infinitely-near points are not
    supported: every point is a point of the surface being blown up.
    """
    r = len(points)
    old = pair.lattice
    # unique labels continuing any existing exceptional numbering
    existing = set(old.basis)
    labels = []
    k = 1
    for pt in points:
        if pt.label and pt.label not in existing:
            labels.append(pt.label)
            existing.add(pt.label)
            continue
        while f"{exceptional_prefix}{k}" in existing:
            k += 1
        labels.append(f"{exceptional_prefix}{k}")
        existing.add(f"{exceptional_prefix}{k}")

    n = old.rank
    basis = old.basis + tuple(labels)
    gram = [[old.gram[i][j] if i < n and j < n else Fraction(0)
             for j in range(n + r)] for i in range(n + r)]
    for i in range(r):
        gram[n + i][n + i] = Fraction(-1)
    canonical = tuple(old.canonical) + tuple(Fraction(1) for _ in range(r))
    lattice = PicardLattice(basis, tuple(tuple(row) for row in gram), canonical)

    def pullback(cls: DivisorClass) -> DivisorClass:
        if cls.lattice != old:
            raise LatticeMismatchError("pullback expects a class on the parent lattice")
        return lattice.divisor(tuple(cls.coeffs) + (Fraction(0),) * r)

    exceptionals = tuple(lattice.generator(lbl) for lbl in labels)

    boundary_mults = [1 if pt.on_boundary else 0 for pt in points]
    boundary = pullback(pair.boundary)
    for m, e in zip(boundary_mults, exceptionals):
        boundary = boundary - m * e

    if generator_multiplicities is None:
        generator_multiplicities = [[0] * r for _ in pair.mori_generators]
    if len(generator_multiplicities) != len(pair.mori_generators):
        raise SurfaceError("one multiplicity row per old generator required")
    gens = []
    for g, mults in zip(pair.mori_generators, generator_multiplicities):
        gg = pullback(g)
        for m, e in zip(mults, exceptionals):
            gg = gg - int(m) * e
        gens.append(gg)
    gens.extend(exceptionals)
    for vec in extra_generators:
        gens.append(lattice.divisor(vec))

    provenance = Provenance(pair, tuple(points), exceptionals)
    new_pair = SurfacePair(lattice, boundary, tuple(gens),
                           minimal_model=pair.minimal_model,
                           provenance=provenance,
                           generator_floor=pair.generator_floor)
    return BlowupResult(new_pair, pullback, exceptionals)


def proper_transform(result: BlowupResult, cls: DivisorClass,
                     multiplicities: Sequence[int]) -> DivisorClass:
    """pullback(cls) - sum of m_i * E_i."""
    if any(m < 0 for m in multiplicities):
        raise SurfaceError("multiplicities must be nonnegative")
    out = result.pullback(cls)
    for m, e in zip(multiplicities, result.exceptionals):
        out = out - int(m) * e
    return out


@dataclass(frozen=True)
class AmpleCertificate:
    ample: bool
    checks: tuple[str, ...]
    failure: str | None = None

    def __bool__(self):
        return self.ample


def is_ample(pair: SurfacePair, d: DivisorClass) -> AmpleCertificate:
    """Nakai-Moishezon over the supplied generator list: D^2 > 0 and
    D.Gamma > 0 for every generator."""
    if not pair.mori_generators:
        raise EmptyGeneratorListError("ampleness test needs a nonempty generator list")
    d2 = d.dot(d)
    if d2 <= 0:
        return AmpleCertificate(False, (), f"D^2 = {format_fraction(d2)} <= 0")
    checks = [f"D^2 = {format_fraction(d2)} > 0"]
    for g in pair.mori_generators:
        v = d.dot(g)
        if v <= 0:
            return AmpleCertificate(False, tuple(checks),
                                    f"D.({g}) = {format_fraction(v)} <= 0")
        checks.append(f"D.({g}) = {format_fraction(v)} > 0")
    return AmpleCertificate(True, tuple(checks))


@dataclass(frozen=True)
class AmpRegion:
    """Maximal beta-subinterval of (0, 1] on which -K-(1-b)C is ample,
    with the asymptotically-log-Fano flag (closure reaches 0)."""

    interval: Interval | None
    alf: bool
    certificates: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "interval": self.interval.to_json() if self.interval else None,
            "alf": self.alf,
            "certificates": list(self.certificates),
        }


def amp_region(pair: SurfacePair) -> AmpRegion:
    """Solve the linear-in-beta positivity constraints against every
    generator exactly, then certify the square is positive on the result.

    Positivity on a spanning set of the curve cone puts the class in the
    interior of the nef cone, which forces positive self-intersection; the
    quadratic check is a consistency certificate for the generator list.
    """
    if not pair.mori_generators:
        raise EmptyGeneratorListError("ample region needs a nonempty generator list")
    pol = log_polarization(pair)
    lo, lo_open = Fraction(0), True
    hi, hi_open = Fraction(1), False
    certs = []
    for g in pair.mori_generators:
        a = pol.base.dot(g)
        slope = pol.beta_coefficient.dot(g)
        # need a + slope*beta > 0
        if slope == 0:
            if a <= 0:
                return AmpRegion(None, False, (f"generator {g}: pairing {format_fraction(a)} <= 0",))
            continue
        cut = -a / slope
        if slope > 0:
            if cut > lo or (cut == lo and not lo_open):
                lo, lo_open = cut, True
        else:
            if cut < hi or (cut == hi and not hi_open):
                hi, hi_open = cut, True
        certs.append(f"generator {g}: {format_fraction(a)} + {format_fraction(slope)}*b > 0")
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return AmpRegion(None, False, tuple(certs))
    interval = Interval(lo, hi, lo_open, hi_open)
    square = pol.self_intersection()
    verdict = sign_on_interval(square, _open_core(interval))
    if verdict.kind is not Sign.POSITIVE:
        raise SurfaceError(
            "self-intersection fails to be positive on the linear ample region; "
            "the generator list does not span the cone of curves")
    certs.append(f"(L_b)^2 = {square} > 0 on {interval}")
    alf = interval.lo == 0
    return AmpRegion(interval, alf, tuple(certs))


def _open_core(iv: Interval) -> Interval:
    if iv.is_point():
        return iv
    return Interval.open(iv.lo, iv.hi)


@dataclass(frozen=True)
class SeshadriPiece:
    beta_range: Interval
    value: MPoly                 # the threshold as a polynomial in b


@dataclass(frozen=True)
class SeshadriResult:
    """Piecewise description of sup{c : L - cZ ample} over a beta-window.

    The generator-list method yields beta-linear pieces; if the quadratic
    positivity constraint (L - cZ)^2 > 0 would bind before the linear ones,
    the result is flagged and carries the algebraic description instead of a
    linearization.  ``unbounded`` flags the degenerate case of a class with
    no positive pairing and no quadratic obstruction.
    """

    pieces: tuple[SeshadriPiece, ...]
    quadratic_binding: bool = False
    algebraic_description: str = ""
    unbounded: bool = False

    def single(self) -> MPoly:
        if self.unbounded or self.quadratic_binding:
            raise SurfaceError("threshold is not a single polynomial piece")
        values = {p.value for p in self.pieces}
        if len(values) != 1:
            raise SurfaceError(f"threshold has {len(values)} distinct pieces")
        return next(iter(values))

    def at(self, beta) -> Fraction:
        beta = as_fraction(beta)
        for p in self.pieces:
            if p.beta_range.contains(beta):
                return p.value.eval({"b": beta})
        raise SurfaceError(f"beta = {beta} outside the analyzed window")

    def to_json(self) -> dict:
        return {
            "pieces": [
                {"beta_range": p.beta_range.to_json(), "value": p.value.to_string()}
                for p in self.pieces
            ],
            "quadratic_binding": self.quadratic_binding,
            "algebraic_description": self.algebraic_description,
            "unbounded": self.unbounded,
        }


DEFAULT_BETA_WINDOW = Interval.lopen(0, 1)


def _linear_min_pieces(candidates: list[MPoly], window: Interval) -> list[SeshadriPiece]:
    """Lower envelope of finitely many beta-linear polynomials over a window."""
    cuts = {window.lo, window.hi}
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            diff = candidates[i] - candidates[j]
            if diff.is_zero():
                continue
            if diff.degree_in("b") == 1:
                a0 = diff.coefficient_of("b", 0).constant_value()
                a1 = diff.coefficient_of("b", 1).constant_value()
                x = -a0 / a1
                if window.lo < x < window.hi:
                    cuts.add(x)
    points = sorted(cuts)
    pieces = []
    for a, b in zip(points, points[1:]):
        mid = (a + b) / 2
        winner = min(candidates, key=lambda p: p.eval({"b": mid}))
        rng = Interval(a, b,
                       window.lo_open if a == window.lo else True,
                       window.hi_open if b == window.hi else False)
        if pieces and pieces[-1].value == winner:
            prev = pieces[-1]
            rng = Interval(prev.beta_range.lo, b, prev.beta_range.lo_open, rng.hi_open)
            pieces[-1] = SeshadriPiece(rng, winner)
        else:
            pieces.append(SeshadriPiece(rng, winner))
    if not pieces:
        # degenerate point window
        winner = min(candidates, key=lambda p: p.eval({"b": window.lo}))
        pieces = [SeshadriPiece(window, winner)]
    return pieces


def seshadri(pair: SurfacePair, z: DivisorClass, polarization: BetaFunctionClass,
             beta_window: Interval = DEFAULT_BETA_WINDOW) -> SeshadriResult:
    """Ampleness threshold of polarization - c*Z by the generator-list method.

    The linear candidate from a generator G with Z.G > 0 is (L.G)/(Z.G); the
    piecewise minimum is certified against the quadratic constraint
    (L - cZ)^2 > 0 on each piece.
    """
    if z.is_zero():
        raise SurfaceError("threshold needs a nonzero effective class")
    l2 = polarization.self_intersection()
    lz = polarization.pairing(z)
    z2 = z.dot(z)

    candidates = []
    for g in pair.mori_generators:
        zg = z.dot(g)
        if zg > 0:
            candidates.append(polarization.pairing(g) / zg)
    if not candidates:
        # fall back to the quadratic constraint alone
        lz_sign = sign_on_interval(lz, _open_core(beta_window))
        if lz_sign.kind is not Sign.POSITIVE:
            return SeshadriResult((), unbounded=True)
        if z2 == 0:
            desc = f"({l2})/(2*({lz}))"
            return SeshadriResult((), quadratic_binding=True,
                                  algebraic_description=f"threshold = {desc}")
        desc = (f"smallest positive root of ({format_fraction(z2)})*t^2"
                f" - 2*({lz})*t + ({l2})")
        return SeshadriResult((), quadratic_binding=True, algebraic_description=desc)

    pieces = _linear_min_pieces(candidates, beta_window)

    # certify that the quadratic constraint does not bind before the linear
    # minimum on each piece
    for piece in pieces:
        m = piece.value
        s = l2 - 2 * m * lz + m * m * z2
        verdict = sign_on_interval(s, _open_core(piece.beta_range))
        ok = verdict.kind in (Sign.POSITIVE, Sign.ZERO)
        if not ok and verdict.kind is Sign.MIXED:
            ok = all(sg > 0 for _, sg in verdict.witnesses)
        if ok and z2 > 0:
            u = lz - z2 * m
            uv = sign_on_interval(u, _open_core(piece.beta_range))
            ok = uv.kind in (Sign.POSITIVE, Sign.ZERO) or (
                uv.kind is Sign.MIXED and all(sg > 0 for _, sg in uv.witnesses))
        if not ok:
            desc = (f"smallest positive root of ({format_fraction(z2)})*t^2"
                    f" - 2*({lz})*t + ({l2}) binds before the linear bound {m}")
            return SeshadriResult(tuple(pieces), quadratic_binding=True,
                                  algebraic_description=desc)
    return SeshadriResult(tuple(pieces))


@dataclass(frozen=True)
class PseffCertificate:
    """Certified lower bound for the pseudoeffective threshold
    sup{c : L' - cZ' big}, or Unknown when no parent decomposition applies."""

    known: bool
    threshold: SeshadriResult | None = None
    certificate: str = ""

    def to_json(self) -> dict:
        return {
            "known": self.known,
            "threshold": self.threshold.to_json() if self.threshold else None,
            "certificate": self.certificate,
        }


def pseff_threshold_certificate(pair_prime: SurfacePair, z_prime: DivisorClass,
                                polarization_prime: BetaFunctionClass,
                                deltas: Sequence[MPoly],
                                beta_window: Interval = DEFAULT_BETA_WINDOW) -> PseffCertificate:
    """Certify bigness of L' - cZ' up to the parent ampleness threshold.

    Writes L' - cZ' = pullback(L - cZ) + sum (c*m_i - delta_i) E_i; for
    max(delta_i/m_i) <= c < eps(parent) the first part is the pullback of an
    ample class and the second is effective, so the pseudoeffective
    threshold is at least eps(parent).
    """
    prov = pair_prime.provenance
    if prov is None:
        return PseffCertificate(False, certificate="no recorded parent blow-up")
    r = prov.r
    n = prov.parent.lattice.rank
    # split the given classes into pullback part and exceptional multiples
    l_base = prov.parent.lattice.divisor(polarization_prime.base.coeffs[:n])
    l_coef = prov.parent.lattice.divisor(polarization_prime.beta_coefficient.coeffs[:n])
    parent_pol = BetaFunctionClass(l_base, l_coef)
    z_parent = prov.parent.lattice.divisor(z_prime.coeffs[:n])
    z_mults = [-z_prime.coeffs[n + i] for i in range(r)]
    if any(m.denominator != 1 or m < 1 for m in z_mults):
        return PseffCertificate(False, certificate="Z' is not a proper transform through every center")
    b = MPoly.var("b")
    derived_deltas = [
        MPoly.const(-polarization_prime.base.coeffs[n + i])
        + b * (-polarization_prime.beta_coefficient.coeffs[n + i])
        for i in range(r)
    ]
    if list(deltas) and list(deltas) != derived_deltas:
        return PseffCertificate(False, certificate="deltas disagree with the recorded polarization")
    eps_parent = seshadri(prov.parent, z_parent, parent_pol, beta_window)
    if eps_parent.quadratic_binding or eps_parent.unbounded or not eps_parent.pieces:
        return PseffCertificate(False, certificate="parent threshold not available in linear form")
    # require max(delta_i/m_i) < eps(parent) on the window
    for piece in eps_parent.pieces:
        for d, m in zip(derived_deltas, z_mults):
            gap = piece.value - d / m
            verdict = sign_on_interval(gap, _open_core(piece.beta_range))
            if verdict.kind is not Sign.POSITIVE:
                return PseffCertificate(False,
                                        certificate="delta bound does not stay below the parent threshold")
    cert = ("L' - cZ' = pullback(L - cZ) + sum (c*m_i - delta_i) E_i is "
            "pullback-of-ample plus effective for max(delta_i/m_i) <= c < parent threshold")
    return PseffCertificate(True, eps_parent, cert)
