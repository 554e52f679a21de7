"""Exact multivariate polynomials over the rationals.

Coefficients are arbitrary-precision ``fractions.Fraction``; there is no
floating point anywhere in this module.  Polynomials are immutable values
with a canonical form: variables are a sorted subset of the fixed symbol
alphabet ``b < c < g < d1 < d2 < ...``, no zero coefficients are stored,
and unused variables are dropped.  Serialization lists terms in descending
graded-lexicographic order and is byte-stable across runs.

Grammar of the canonical string form::

    poly    := "0" | term (("+"|"-") term)*
    term    := coeff | coeff "*" factors | factors
    factors := varpow ("*" varpow)*
    varpow  := name | name "^" exponent
    coeff   := integer | integer "/" positive-integer

Examples: ``"-26*b^3+24*b^2"``, ``"b^2+2*b-2"``, ``"3/2*b*c"``, ``"0"``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

RationalLike = Union[Fraction, int]

_VAR_RE = re.compile(r"^(b|c|g|d[1-9][0-9]*)$")


class MPolyError(ValueError):
    """Base class for polynomial errors."""


class MissingVariableError(MPolyError):
    """An evaluation assignment does not cover some variable."""

    def __init__(self, name: str):
        self.variable = name
        super().__init__(f"no value assigned to variable {name!r}")


class UnknownVariableError(MPolyError):
    """A referenced variable does not occur in the polynomial."""

    def __init__(self, name: str):
        self.variable = name
        super().__init__(f"variable {name!r} does not occur in the polynomial")


class ZeroPolynomialError(MPolyError):
    """An operation that needs a nonzero polynomial got the zero polynomial."""


def _var_key(name: str) -> tuple:
    """Total order on admissible symbol names: b < c < g < d1 < d2 < ..."""
    if not _VAR_RE.match(name):
        raise MPolyError(f"inadmissible variable name {name!r} (expected b, c, g or dN)")
    if name == "b":
        return (0, 0)
    if name == "c":
        return (1, 0)
    if name == "g":
        return (2, 0)
    return (3, int(name[1:]))


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise MPolyError(f"not an exact rational: {x!r}")


def format_fraction(q: Fraction) -> str:
    """Render ``p/q`` with ``/1`` omitted."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


class MPoly:
    """Immutable multivariate polynomial with exact rational coefficients.

    ``variables`` is the sorted tuple of symbols actually occurring;
    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    ``Fraction`` coefficients.
    """

    __slots__ = ("_variables", "_terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[tuple, RationalLike] | None = None):
        varlist = tuple(variables)
        for v in varlist:
            _var_key(v)
        if len(set(varlist)) != len(varlist):
            raise MPolyError(f"duplicate variables in {varlist!r}")
        raw = {}
        if terms:
            for expo, coeff in terms.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != len(varlist):
                    raise MPolyError("exponent arity does not match variable list")
                if any(e < 0 for e in expo):
                    raise MPolyError("negative exponent")
                q = as_fraction(coeff)
                if q:
                    raw[expo] = raw.get(expo, Fraction(0)) + q
        raw = {e: q for e, q in raw.items() if q}
        # canonical form: drop unused variables, sort the rest
        used = [i for i in range(len(varlist)) if any(e[i] for e in raw)]
        varlist2 = tuple(varlist[i] for i in used)
        order = sorted(range(len(varlist2)), key=lambda i: _var_key(varlist2[i]))
        self._variables = tuple(varlist2[i] for i in order)
        self._terms = {
            tuple(expo[used[i]] for i in order): q for expo, q in raw.items()
        }
        self._hash = hash((self._variables, tuple(sorted(self._terms.items()))))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def const(cls, q: RationalLike) -> "MPoly":
        q = as_fraction(q)
        if not q:
            return cls()
        return cls((), {(): q})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls((name,), {(1,): Fraction(1)})

    @classmethod
    def from_coeffs(cls, name: str, coeffs: Iterable[RationalLike]) -> "MPoly":
        """Univariate polynomial from ascending coefficients [a0, a1, ...]."""
        return cls((name,), {(i,): as_fraction(a) for i, a in enumerate(coeffs)})

    # -- basic structure ---------------------------------------------------

    @property
    def variables(self) -> tuple:
        return self._variables

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._variables

    def constant_value(self) -> Fraction:
        if self._variables:
            raise MPolyError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        if name not in self._variables:
            return 0
        i = self._variables.index(name)
        return max((e[i] for e in self._terms), default=0)

    def coefficient_of(self, name: str, power: int) -> "MPoly":
        """Coefficient of name**power, as a polynomial in the other variables."""
        if name not in self._variables:
            return self if power == 0 else MPoly.zero()
        i = self._variables.index(name)
        rest = self._variables[:i] + self._variables[i + 1:]
        terms = {
            e[:i] + e[i + 1:]: q for e, q in self._terms.items() if e[i] == power
        }
        return MPoly(rest, terms)

    def is_univariate(self) -> bool:
        return len(self._variables) <= 1

    def univariate_coeffs(self, name: str | None = None) -> tuple[str, list]:
        """Dense ascending coefficient list.  Constants report variable ``name``
        (default "b") with a single coefficient."""
        if len(self._variables) > 1:
            raise MPolyError(f"{self} is not univariate")
        if not self._variables:
            return (name or "b", [self._terms.get((), Fraction(0))])
        v = self._variables[0]
        if name is not None and name != v:
            raise UnknownVariableError(name)
        n = self.degree_in(v)
        coeffs = [Fraction(0)] * (n + 1)
        for e, q in self._terms.items():
            coeffs[e[0]] = q
        return (v, coeffs)

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "MPoly"):
        allvars = sorted(set(self._variables) | set(other._variables), key=_var_key)
        idx_s = [allvars.index(v) for v in self._variables]
        idx_o = [allvars.index(v) for v in other._variables]

        def lift(terms, idx):
            out = {}
            for e, q in terms.items():
                ee = [0] * len(allvars)
                for pos, val in zip(idx, e):
                    ee[pos] = val
                out[tuple(ee)] = q
            return out

        return tuple(allvars), lift(self._terms, idx_s), lift(other._terms, idx_o)

    @staticmethod
    def _coerce(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        return MPoly.const(as_fraction(x))

    def __add__(self, other):
        other = MPoly._coerce(other)
        allvars, a, b = self._aligned(other)
        out = dict(a)
        for e, q in b.items():
            out[e] = out.get(e, Fraction(0)) + q
        return MPoly(allvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self._variables, {e: -q for e, q in self._terms.items()})

    def __sub__(self, other):
        return self + (-MPoly._coerce(other))

    def __rsub__(self, other):
        return MPoly._coerce(other) - self

    def __mul__(self, other):
        other = MPoly._coerce(other)
        allvars, a, b = self._aligned(other)
        out = {}
        for e1, q1 in a.items():
            for e2, q2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + q1 * q2
        return MPoly(allvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise MPolyError("polynomial powers must be nonnegative integers")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, scalar):
        q = as_fraction(scalar)
        if not q:
            raise ZeroDivisionError("division of polynomial by zero")
        return MPoly(self._variables, {e: v / q for e, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self._variables == other._variables and self._terms == other._terms

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, assignment: Mapping[str, RationalLike]) -> Fraction:
        """Exact value at a rational point covering all variables."""
        for v in self._variables:
            if v not in assignment:
                raise MissingVariableError(v)
        total = Fraction(0)
        values = [as_fraction(assignment[v]) for v in self._variables]
        for e, q in self._terms.items():
            term = q
            for val, k in zip(values, e):
                if k:
                    term *= val ** k
            total += term
        return total

    def substitute(self, name: str, replacement) -> "MPoly":
        """Exact composition p[name := replacement], re-canonicalized."""
        if name not in self._variables:
            raise UnknownVariableError(name)
        repl = MPoly._coerce(replacement)
        i = self._variables.index(name)
        rest = self._variables[:i] + self._variables[i + 1:]
        out = MPoly.zero()
        # group by the exponent of the substituted variable, Horner style
        by_power: dict[int, dict] = {}
        for e, q in self._terms.items():
            by_power.setdefault(e[i], {})[e[:i] + e[i + 1:]] = q
        powers = {0: MPoly.const(1)}
        for k in sorted(by_power):
            if k not in powers:
                last = max(powers)
                acc = powers[last]
                for _ in range(k - last):
                    acc = acc * repl
                    powers[max(powers) + 1] = acc
            out = out + MPoly(rest, by_power[k]) * powers[k]
        return out

    def derivative(self, name: str) -> "MPoly":
        if name not in self._variables:
            return MPoly.zero()
        i = self._variables.index(name)
        terms = {}
        for e, q in self._terms.items():
            if e[i] == 0:
                continue
            ee = e[:i] + (e[i] - 1,) + e[i + 1:]
            terms[ee] = terms.get(ee, Fraction(0)) + q * e[i]
        return MPoly(self._variables, terms)

    # -- serialization -------------------------------------------------------

    def _sorted_terms(self):
        # descending graded-lex: higher total degree first, then larger
        # exponent vector w.r.t. the canonical variable order
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, q in self._sorted_terms():
            factors = []
            for v, k in zip(self._variables, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            if not factors:
                body = format_fraction(abs(q))
            elif abs(q) == 1:
                body = "*".join(factors)
            else:
                body = format_fraction(abs(q)) + "*" + "*".join(factors)
            pieces.append(("-" if q < 0 else "+", body))
        sign0, body0 = pieces[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in pieces[1:]:
            out += sign + body
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MPoly({self.to_string()!r})"

    @classmethod
    def parse(cls, text: str) -> "MPoly":
        return parse_poly(text)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<var>b|c|g|d[1-9][0-9]*)|(?P<op>[-+*^()]))"
)


def parse_poly(text: str) -> MPoly:
    """Parse the canonical polynomial grammar (also accepts parentheses)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise MPolyError(f"cannot parse polynomial at {text[pos:]!r}")
            break
        tokens.append(m)
        pos = m.end()
    toks = [(m.lastgroup, m.group(m.lastgroup)) for m in tokens]
    if not toks:
        raise MPolyError("empty polynomial string")

    idx = 0

    def peek():
        return toks[idx] if idx < len(toks) else (None, None)

    def take():
        nonlocal idx
        if idx >= len(toks):
            raise MPolyError(f"unexpected end of polynomial string {text!r}")
        t = toks[idx]
        idx += 1
        return t

    def parse_sum() -> MPoly:
        acc = parse_signed_product()
        while peek() == ("op", "+") or peek() == ("op", "-"):
            _, op = take()
            term = parse_signed_product()
            acc = acc + term if op == "+" else acc - term
        return acc

    def parse_signed_product() -> MPoly:
        sign = 1
        while peek() == ("op", "-") or peek() == ("op", "+"):
            _, op = take()
            if op == "-":
                sign = -sign
        p = parse_product()
        return p if sign > 0 else -p

    def parse_product() -> MPoly:
        acc = parse_power()
        while peek() == ("op", "*"):
            take()
            acc = acc * parse_power()
        return acc

    def parse_power() -> MPoly:
        base = parse_atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num" or "/" in val:
                raise MPolyError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def parse_atom() -> MPoly:
        kind, val = take()
        if kind == "num":
            return MPoly.const(Fraction(val))
        if kind == "var":
            return MPoly.var(val)
        if (kind, val) == ("op", "("):
            inner = parse_sum()
            if take() != ("op", ")"):
                raise MPolyError("unbalanced parentheses")
            return inner
        raise MPolyError(f"unexpected token {val!r}")

    result = parse_sum()
    if idx != len(toks):
        raise MPolyError(f"trailing tokens in polynomial string {text!r}")
    return result


# -- module-level operations matching the public API -------------------------


def poly_eval(p: MPoly, assignment: Mapping[str, RationalLike]) -> Fraction:
    return p.eval(assignment)


def poly_substitute(p: MPoly, name: str, replacement) -> MPoly:
    return p.substitute(name, replacement)


def limit_at_zero_plus(p: MPoly, name: str) -> MPoly:
    """One-sided limit as ``name`` tends to 0+.

    For polynomials this is plain evaluation at 0; a variable absent from
    ``p`` leaves it unchanged.
    """
    if name not in p.variables:
        return p
    return p.substitute(name, Fraction(0))


B = MPoly.var("b")
C = MPoly.var("c")
G = MPoly.var("g")
