"""Sparse multivariate and Laurent polynomials over exact rationals.

Coefficients are `fractions.Fraction` throughout: arithmetic never rounds,
denominators stay positive and fully reduced.  Polynomials are immutable
once built; all operations return fresh objects.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
Scalar = Fraction | int

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class PolyRing:
    """A polynomial (or Laurent) ambient ring: a variable-name tuple."""

    __slots__ = ("names", "index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        for nm in names:
            if not _NAME_RE.fullmatch(nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.names = names
        self.index = {nm: j for j, nm in enumerate(names)}

    @property
    def n(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.names)})"

    def zero_exp(self) -> Exponent:
        return (0,) * self.n

    def variable(self, j: int) -> "MultiPoly":
        e = [0] * self.n
        e[j] = 1
        return MultiPoly(self, {tuple(e): Fraction(1)})

    def constant(self, c: Scalar) -> "MultiPoly":
        return MultiPoly(self, {self.zero_exp(): Fraction(c)})

    def extend(self, *extra: str) -> "PolyRing":
        return PolyRing(self.names + tuple(extra))


# --- monomial orders -------------------------------------------------------
#
# Keys are "larger key = larger monomial" under tuple comparison.

def grevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exponent):
    return tuple(e)


def grlex_key(e: Exponent):
    return (sum(e), tuple(e))


MONOMIAL_ORDERS: dict[str, Callable[[Exponent], tuple]] = {
    "grevlex": grevlex_key,
    "lex": lex_key,
    "grlex": grlex_key,
}

DEFAULT_ORDER = "grevlex"


def _merge(a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction],
           sign: int) -> dict[Exponent, Fraction]:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, Fraction(0)) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


class _TermPoly:
    """Shared term-dict mechanics for MultiPoly and LaurentPoly."""

    __slots__ = ("ring", "terms")
    _allow_negative = False

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Scalar] | None = None):
        self.ring = ring
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != ring.n:
                raise ValueError(f"exponent {e} has wrong length for {ring}")
            if not self._allow_negative and any(x < 0 for x in e):
                raise ValueError(f"negative exponent {e} in polynomial ring")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean

    # -- ring structure --
    def _check(self, other: "_TermPoly"):
        if self.ring != other.ring:
            raise ValueError(f"mixed rings: {self.ring} vs {other.ring}")
        if type(self) is not type(other):
            raise TypeError("mixed polynomial kinds")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        return type(self)(self.ring, _merge(self.terms, other.terms, +1))

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.ring, _merge(self.terms, other.terms, -1))

    def __neg__(self):
        return type(self)(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e, Fraction(0)) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return type(self)(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar):
        c = Fraction(c)
        if not c:
            return type(self)(self.ring, {})
        return type(self)(self.ring, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = type(self)(self.ring, {self.ring.zero_exp(): Fraction(1)})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- inspection --
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.zero_exp(), Fraction(0))

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.ring.n:
            raise ValueError("point dimension mismatch")
        pt = [Fraction(x) for x in point]
        if self._allow_negative and any(x == 0 for x in pt):
            if any(e[j] < 0 for e in self.terms for j in range(self.ring.n) if pt[j] == 0):
                raise ZeroDivisionError("Laurent evaluation at a zero coordinate")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def __repr__(self) -> str:
        return poly_to_string(self)


class MultiPoly(_TermPoly):
    """Element of Q[x1..xn], sparse exponent-vector representation."""

    _allow_negative = False

    def leading(self, key=grevlex_key) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, key=grevlex_key) -> "MultiPoly":
        if not self.terms:
            return self
        _, c = self.leading(key)
        return self.scale(1 / c)

    def lowest_form(self) -> "MultiPoly":
        """Homogeneous component of minimal total degree (the initial form)."""
        if not self.terms:
            return self
        d = min(sum(e) for e in self.terms)
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def homogeneous_component(self, d: int) -> "MultiPoly":
        return MultiPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def compose(self, values: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute values[j] for variable j (values share one target ring)."""
        if len(values) != self.ring.n:
            raise ValueError("substitution arity mismatch")
        target = values[0].ring if values else self.ring
        out = MultiPoly(target, {})
        for e, c in self.terms.items():
            term = MultiPoly(target, {target.zero_exp(): c})
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            out = out + term
        return out

    def translate(self, point: Sequence[Scalar]) -> "MultiPoly":
        """f(x) -> f(x + point), moving `point` to the origin."""
        vals = [self.ring.variable(j) + self.ring.constant(point[j])
                for j in range(self.ring.n)]
        return self.compose(vals)


class LaurentPoly(_TermPoly):
    """Element of Q[t1^±1..tn^±1]; exponents range over Z."""

    _allow_negative = True

    def monomial_clear(self) -> MultiPoly:
        """Multiply by the minimal monomial clearing all negative exponents."""
        if not self.terms:
            return MultiPoly(self.ring, {})
        shift = [max(0, -min(e[j] for e in self.terms)) for j in range(self.ring.n)]
        return MultiPoly(self.ring,
                         {tuple(x + s for x, s in zip(e, shift)): c
                          for e, c in self.terms.items()})

    def to_multipoly(self) -> MultiPoly:
        if any(x < 0 for e in self.terms for x in e):
            raise ValueError("Laurent polynomial has negative exponents")
        return MultiPoly(self.ring, dict(self.terms))


# --- string grammar --------------------------------------------------------
#
# term   := [coeff '*'] factor ('*' factor)*  |  coeff
# factor := name ['^' int]
# coeff  := int ['/' int]
# Terms are joined by '+' / '-'.  Canonical printing sorts terms grevlex
# descending and omits unit coefficients and ^1 powers.

class PolyParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"parse error at position {pos} in {text!r}: {msg}")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[\^*+\-]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(text, pos, "unexpected character")
        if m.lastgroup == "num":
            out.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return out


def parse_poly(text: str, ring: PolyRing, laurent: bool = False):
    """Parse the strict term grammar into a MultiPoly or LaurentPoly."""
    tokens = _tokenize(text)
    cls = LaurentPoly if laurent else MultiPoly
    if not tokens:
        raise PolyParseError(text, 0, "empty polynomial")
    terms: dict[Exponent, Fraction] = {}
    i = 0
    sign = 1

    def expect_int(i: int, allow_neg: bool) -> tuple[int, int]:
        neg = 1
        if allow_neg and i < len(tokens) and tokens[i][:2] == ("op", "-"):
            neg, i = -1, i + 1
        if i >= len(tokens) or tokens[i][0] != "num" or "/" in tokens[i][1]:
            pos = tokens[i][2] if i < len(tokens) else len(text)
            raise PolyParseError(text, pos, "expected integer exponent")
        return neg * int(tokens[i][1]), i + 1

    while i < len(tokens):
        kind, val, pos = tokens[i]
        if kind == "op" and val in "+-":
            if not terms and i == 0 and val == "+":
                raise PolyParseError(text, pos, "leading '+'")
            sign = 1 if val == "+" else -1
            i += 1
            if i >= len(tokens):
                raise PolyParseError(text, len(text), "dangling sign")
            kind, val, pos = tokens[i]
        elif terms or i > 0:
            raise PolyParseError(text, pos, "expected '+' or '-' between terms")
        coeff = Fraction(1)
        exp = [0] * ring.n
        saw_factor = False
        if kind == "num":
            coeff = Fraction(val)
            i += 1
            saw_factor = True
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                saw_factor = False
        while i < len(tokens) and tokens[i][0] == "name":
            name = tokens[i][1]
            if name not in ring.index:
                raise PolyParseError(text, tokens[i][2], f"unknown variable {name!r}")
            i += 1
            power = 1
            if i < len(tokens) and tokens[i][:2] == ("op", "^"):
                power, i = expect_int(i + 1, allow_neg=laurent)
            exp[ring.index[name]] += power
            saw_factor = True
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                if i >= len(tokens) or tokens[i][0] == "op":
                    raise PolyParseError(text, pos, "dangling '*'")
                saw_factor = False
        if not saw_factor:
            raise PolyParseError(text, pos, "expected a term")
        if not laurent and any(x < 0 for x in exp):
            raise PolyParseError(text, pos, "negative exponent outside Laurent ring")
        e = tuple(exp)
        v = terms.get(e, Fraction(0)) + sign * coeff
        if v:
            terms[e] = v
        else:
            terms.pop(e, None)
        sign = 1
    return cls(ring, terms)


def _format_term(names: Sequence[str], e: Exponent, c: Fraction) -> str:
    factors = []
    for nm, k in zip(names, e):
        if k == 1:
            factors.append(nm)
        elif k != 0:
            factors.append(f"{nm}^{k}")
    mag = abs(c)
    if not factors:
        return str(mag)
    if mag == 1:
        return "*".join(factors)
    return str(mag) + "*" + "*".join(factors)


def poly_to_string(p: _TermPoly) -> str:
    """Canonical form: grevlex-descending terms, explicit '+'/'-' joins."""
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda ec: grevlex_key(ec[0]), reverse=True)
    parts = []
    for idx, (e, c) in enumerate(items):
        body = _format_term(p.ring.names, e, c)
        if idx == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def random_rational(rng, span: int = 6) -> Fraction:
    """Small random rational, suitable for exact sampling tests."""
    num = rng.randint(-span, span)
    den = rng.randint(1, 4)
    return Fraction(num, den)
