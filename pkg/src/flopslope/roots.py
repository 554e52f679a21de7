"""Certified real-root isolation and sign analysis for univariate polynomials.

Everything here is exact: isolating intervals have rational endpoints and
are certified by Sturm counts; rational roots are extracted exactly (so
thresholds like 12/13 come out as points, not intervals).  The pipeline is
square-free decomposition (Yun), rational-root deflation, then Sturm
bisection down to a configurable interval width.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt

from .mpoly import MPoly, ZeroPolynomialError, as_fraction, format_fraction

DEFAULT_WIDTH = Fraction(1, 2 ** 32)

# trial-division factoring is skipped above this bound; isolation still
# certifies such roots, they just stay intervals instead of exact points
_RATIONAL_ROOT_BOUND = 10 ** 12


class IntervalError(ValueError):
    pass


class EmptyWindowError(IntervalError):
    pass


@dataclass(frozen=True)
class Interval:
    """Rational interval with independent endpoint openness.

    A degenerate interval (lo == hi) must be closed on both sides and
    represents a single point.
    """

    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise IntervalError(f"lo {self.lo} exceeds hi {self.hi}")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise EmptyWindowError("degenerate interval must be closed")

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(as_fraction(lo), as_fraction(hi), True, True)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(as_fraction(lo), as_fraction(hi), False, False)

    @classmethod
    def lopen(cls, lo, hi) -> "Interval":
        """Half-open (lo, hi]."""
        return cls(as_fraction(lo), as_fraction(hi), True, False)

    def contains(self, x) -> bool:
        x = as_fraction(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def interior_point(self) -> Fraction:
        if self.is_point():
            return self.lo
        return self.midpoint

    def to_json(self) -> dict:
        return {
            "lo": format_fraction(self.lo),
            "hi": format_fraction(self.hi),
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
        }

    def __str__(self):
        return (
            ("(" if self.lo_open else "[")
            + format_fraction(self.lo)
            + ", "
            + format_fraction(self.hi)
            + (")" if self.hi_open else "]")
        )


# -- dense univariate helpers (ascending coefficient lists of Fractions) -----


def _deg(p: list) -> int:
    return len(p) - 1


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _peval(p: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(p):
        acc = acc * x + coeff
    return acc


def _pderiv(p: list) -> list:
    return _trim([p[i] * i for i in range(1, len(p))])


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
           for i in range(n)]
    return _trim(out)


def _pdivmod(a: list, b: list):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while a and len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = factor
        for i, coeff in enumerate(b):
            a[shift + i] -= factor * coeff
        _trim(a)
    return _trim(q), a


def _pgcd(a: list, b: list) -> list:
    a, b = list(a), list(b)
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [coeff / lead for coeff in a]
    return a


def _squarefree_decomposition(p: list) -> list[tuple[list, int]]:
    """Yun's algorithm: [(factor, multiplicity)] with square-free, pairwise
    coprime factors whose mult-power product is p up to a constant."""
    d = _pderiv(p)
    a = _pgcd(p, d)
    if _deg(a) == 0:
        return [(list(p), 1)]
    b, _ = _pdivmod(p, a)
    c, _ = _pdivmod(d, a)
    out = []
    i = 1
    while _deg(b) > 0:
        diff = _psub(c, _pderiv(b))
        g = _pgcd(b, diff)
        if _deg(g) > 0:
            out.append((g, i))
        b, _ = _pdivmod(b, g)
        c, _ = _pdivmod(diff, g)
        i += 1
    return out


def _integerize(p: list) -> list[int]:
    """Clear denominators and content; primitive integer coefficients."""
    den = reduce(lambda acc, q: acc * q.denominator // gcd(acc, q.denominator), p, 1)
    ints = [int(q * den) for q in p]
    content = reduce(gcd, (abs(x) for x in ints), 0)
    if content:
        ints = [x // content for x in ints]
    return ints


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def _rational_roots(p: list) -> list[Fraction]:
    """All rational roots of a square-free p, by the rational root test.
    Candidates beyond the trial-division bound are skipped (those roots are
    still isolated, just not as exact points)."""
    ints = _integerize(p)
    if len(ints) <= 1:
        return []
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
    if len(ints) <= 1:
        return roots
    a0, an = ints[0], ints[-1]
    if abs(a0) > _RATIONAL_ROOT_BOUND or abs(an) > _RATIONAL_ROOT_BOUND:
        return roots
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and _peval(p, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _deflate(p: list, root: Fraction) -> list:
    """Divide p by (x - root) exactly."""
    q, r = _pdivmod(p, [-root, Fraction(1)])
    if r:
        raise ValueError("deflation by a non-root")
    return q


def _normalize_primitive(p: list) -> list:
    """Primitive integer coefficients with positive leading coefficient."""
    ints = _integerize(p)
    if ints and ints[-1] < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def sturm_sequence(p: list) -> list[list]:
    seq = [list(p), _pderiv(p)]
    while seq[-1]:
        _, r = _pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-coeff for coeff in r])
    return [s for s in seq if s]


def _sign_changes(values: list[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(seq: list[list], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b] by Sturm's theorem."""
    va = _sign_changes([_peval(s, a) for s in seq])
    vb = _sign_changes([_peval(s, b) for s in seq])
    return va - vb


def _root_bound(p: list) -> Fraction:
    """Cauchy bound: all real roots lie in [-M, M]."""
    lead = abs(p[-1])
    m = max((abs(coeff) for coeff in p[:-1]), default=Fraction(0))
    return Fraction(1) + m / lead


@dataclass(frozen=True)
class AlgebraicRoot:
    """A certified real algebraic number.

    ``defining_polynomial`` is square-free with exactly one root in
    ``isolating_interval`` (Sturm count 1; a degenerate interval means an
    exact rational root).  ``sign_left``/``sign_right`` are the signs of the
    polynomial the root was isolated from, just left/right of the root;
    ``multiplicity`` is its multiplicity in that polynomial.
    """

    defining_polynomial: MPoly
    isolating_interval: Interval
    sign_left: int
    sign_right: int
    multiplicity: int = 1

    @property
    def is_rational(self) -> bool:
        return self.isolating_interval.is_point()

    @property
    def value(self) -> Fraction | None:
        """Exact value when rational, else None."""
        return self.isolating_interval.lo if self.is_rational else None

    @property
    def sign_change(self) -> bool:
        return self.sign_left != self.sign_right

    def refined(self, width: Fraction) -> "AlgebraicRoot":
        """Shrink the isolating interval below ``width`` by bisection."""
        if self.is_rational or self.isolating_interval.width <= width:
            return self
        _, coeffs = self.defining_polynomial.univariate_coeffs()
        lo, hi = self.isolating_interval.lo, self.isolating_interval.hi
        flo = _peval(coeffs, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            fmid = _peval(coeffs, mid)
            if fmid == 0:
                return AlgebraicRoot(self.defining_polynomial, Interval.closed(mid, mid),
                                     self.sign_left, self.sign_right, self.multiplicity)
            if (flo > 0) != (fmid > 0):
                hi = mid
            else:
                lo, flo = mid, fmid
        return AlgebraicRoot(self.defining_polynomial, Interval.lopen(lo, hi),
                             self.sign_left, self.sign_right, self.multiplicity)

    def approx(self, digits: int = 12) -> str:
        """Decimal approximation, prefixed with the approximation mark."""
        target = Fraction(1, 10 ** (digits + 2))
        r = self.refined(target)
        mid = r.isolating_interval.midpoint
        return "≈" + _decimal_string(mid, digits)

    def to_json(self) -> dict:
        return {
            "defining_polynomial": self.defining_polynomial.to_string(),
            "isolating_interval": self.isolating_interval.to_json(),
            "sign_left": self.sign_left,
            "sign_right": self.sign_right,
            "multiplicity": self.multiplicity,
            "exact": format_fraction(self.value) if self.is_rational else None,
            "approx": self.approx(),
        }

    def __str__(self):
        if self.is_rational:
            return format_fraction(self.value)
        return f"root of {self.defining_polynomial} in {self.isolating_interval}"


def _decimal_string(q: Fraction, digits: int) -> str:
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q * 10 ** digits
    n = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        n += 1
    s = str(n).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


@dataclass
class _Located:
    point: Fraction | None          # exact value when rational
    interval: Interval
    factor: list                    # square-free defining factor (dense)
    mult: int


def isolate_real_roots(p: MPoly, window: Interval, width: Fraction = DEFAULT_WIDTH) -> list[AlgebraicRoot]:
    """Distinct real roots of ``p`` inside ``window``, each certified.

    Roots carry the sign of ``p`` on either side and their multiplicity;
    rational roots get degenerate (point) intervals.
    """
    if p.is_zero():
        raise ZeroPolynomialError("zero polynomial has no isolated roots")
    name, coeffs = p.univariate_coeffs()
    if len(coeffs) == 1:
        return []

    located: list[_Located] = []
    for factor, mult in _squarefree_decomposition(coeffs):
        work = list(factor)
        for r in _rational_roots(factor):
            work = _deflate(work, r)
            if window.contains(r):
                linear = _normalize_primitive([-r, Fraction(1)])
                located.append(_Located(r, Interval.closed(r, r), linear, mult))
        work = _normalize_primitive(work)
        extra = _isolate_irrational(work, window, width)
        for iv in extra:
            located.append(_Located(None, iv, work, mult))

    if not located:
        return []

    # separate overlapping isolating intervals (roots are pairwise distinct,
    # so finitely many shrink steps suffice)
    changed = True
    while changed:
        changed = False
        for i in range(len(located)):
            for j in range(i + 1, len(located)):
                one, two = located[i], located[j]
                if not (one.interval.hi < two.interval.lo or two.interval.hi < one.interval.lo):
                    if one.point is None:
                        one.interval = _shrink_once(one.factor, one.interval)
                    if two.point is None:
                        two.interval = _shrink_once(two.factor, two.interval)
                    changed = True

    located.sort(key=lambda loc: (loc.interval.lo, loc.interval.hi))

    out = []
    for loc in located:
        sl, sr = _side_signs(coeffs, loc)
        defining = MPoly.from_coeffs(name, loc.factor)
        out.append(AlgebraicRoot(defining, loc.interval, sl, sr, loc.mult))
    return out


def _isolate_irrational(work: list, window: Interval, width: Fraction) -> list[Interval]:
    """Sturm isolation of a square-free polynomial with no rational roots.
    All bisection points are rational, hence never roots of ``work``."""
    if _deg(work) < 1 or window.is_point():
        return []
    seq = sturm_sequence(work)
    bound = _root_bound(work)
    lo = max(window.lo, -bound)
    hi = min(window.hi, bound)
    if lo >= hi:
        return []
    stack = [(lo, hi)]
    boxes = []
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            boxes.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out = []
    for a, b in boxes:
        while b - a > width:
            mid = (a + b) / 2
            if sturm_count(seq, a, mid) == 1:
                b = mid
            else:
                a = mid
        out.append(Interval.lopen(a, b))
    out.sort(key=lambda iv: iv.lo)
    return out


def _shrink_once(factor: list, iv: Interval) -> Interval:
    seq = sturm_sequence(factor)
    a, b = iv.lo, iv.hi
    mid = (a + b) / 2
    if sturm_count(seq, a, mid) == 1:
        return Interval.lopen(a, mid)
    return Interval.lopen(mid, b)


def _side_signs(coeffs: list, loc: _Located) -> tuple[int, int]:
    """Signs of the full polynomial immediately left/right of a root.

    If p = (x - r)^m u with u(r) != 0, the right sign is sign(u(r)) and the
    left sign flips iff m is odd.  For irrational roots the isolating
    interval endpoints serve the same purpose once they are clear of other
    roots of the full polynomial.
    """
    if loc.point is not None:
        u = list(coeffs)
        for _ in range(loc.mult):
            u = _deflate(u, loc.point)
        s = 1 if _peval(u, loc.point) > 0 else -1
        right = s
        left = s if loc.mult % 2 == 0 else -s
        return left, right
    iv = loc.interval
    a, b = iv.lo, iv.hi
    while _peval(coeffs, a) == 0 or _peval(coeffs, b) == 0:
        iv = _shrink_once(loc.factor, Interval.lopen(a, b))
        a, b = iv.lo, iv.hi
    loc.interval = Interval.lopen(a, b)
    sa = 1 if _peval(coeffs, a) > 0 else -1
    sb = 1 if _peval(coeffs, b) > 0 else -1
    if loc.mult % 2 == 0:
        # even multiplicity cannot flip the sign; the endpoint evaluation
        # of the full polynomial already accounts for the other factors
        return sa, sb
    return sa, sb


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    MIXED = "mixed"


@dataclass(frozen=True)
class SignAnalysis:
    """Certified sign of a univariate polynomial over a window.

    ``kind`` is the constant sign when one exists.  Interior roots of even
    multiplicity do not change the sign; they are recorded in
    ``touch_points`` so POSITIVE/NEGATIVE means "that sign except for
    isolated zeros".  MIXED carries one rational witness per achieved sign.
    """

    kind: Sign
    witnesses: tuple = ()
    touch_points: tuple = ()
    roots: tuple = ()

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "witnesses": [
                {"point": format_fraction(pt), "sign": s} for pt, s in self.witnesses
            ],
            "touch_points": [str(r) for r in self.touch_points],
        }


def sign_on_interval(p: MPoly, window: Interval, width: Fraction = DEFAULT_WIDTH) -> SignAnalysis:
    """Certified constant sign of ``p`` on ``window``, or MIXED with witnesses."""
    if p.is_zero():
        return SignAnalysis(Sign.ZERO)
    if not p.is_univariate():
        raise ValueError("sign analysis needs a univariate polynomial")
    name, coeffs = p.univariate_coeffs()
    if len(coeffs) == 1:
        s = 1 if coeffs[0] > 0 else -1
        return SignAnalysis(Sign.POSITIVE if s > 0 else Sign.NEGATIVE,
                            witnesses=((window.interior_point(), s),))
    if window.is_point():
        val = _peval(coeffs, window.lo)
        s = (val > 0) - (val < 0)
        kind = Sign.ZERO if s == 0 else (Sign.POSITIVE if s > 0 else Sign.NEGATIVE)
        return SignAnalysis(kind, witnesses=((window.lo, s),))

    interior = Interval.open(window.lo, window.hi)
    roots = isolate_real_roots(p, interior, width)
    crossing = [r for r in roots if r.sign_change]
    if not crossing:
        if roots:
            sample = (window.lo + roots[0].isolating_interval.lo) / 2
        else:
            sample = window.interior_point()
        val = _peval(coeffs, sample)
        while val == 0:
            sample = (window.lo + sample) / 2
            val = _peval(coeffs, sample)
        s = 1 if val > 0 else -1
        return SignAnalysis(Sign.POSITIVE if s > 0 else Sign.NEGATIVE,
                            witnesses=((sample, s),),
                            touch_points=tuple(roots), roots=tuple(roots))

    # one witness per achieved sign, sampled between consecutive roots
    points = [window.lo]
    for r in roots:
        points.append(r.isolating_interval.lo)
        points.append(r.isolating_interval.hi)
    points.append(window.hi)
    witnesses = {}
    for a, b in zip(points, points[1:]):
        if a >= b:
            continue
        mid = (a + b) / 2
        val = _peval(coeffs, mid)
        s = (val > 0) - (val < 0)
        if s != 0 and s not in witnesses:
            witnesses[s] = mid
    wit = tuple((pt, s) for s, pt in sorted(witnesses.items(), reverse=True))
    touch = tuple(r for r in roots if not r.sign_change)
    return SignAnalysis(Sign.MIXED, witnesses=wit, touch_points=touch, roots=tuple(roots))
