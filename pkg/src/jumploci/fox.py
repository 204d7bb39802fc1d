"""Finitely presented groups and Fox calculus: free-group words, Fox
derivatives, Alexander and linearized Alexander matrices, and the
characteristic ideal E_1 of codimension-1 minors.

Words are tuples of nonzero signed generator indices (1-based; negative
means inverse), always freely reduced.  The commutator convention is
[a, b] = a b a^-1 b^-1.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ideals import Ideal, PolyMatrix, laurent_radical_membership
from .linalg import smith_normal_form, snf_divisors
from .rings import LaurentPoly, MultiPoly, PolyRing

Word = tuple[int, ...]
RingElt = dict[Word, int]       # Z[F], free reduction applied to keys


class TorsionError(ValueError):
    """Abelianization has torsion; character components are out of scope."""


class RelatorError(ValueError):
    pass


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("zero letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_mul(u: Word, v: Word) -> Word:
    return reduce_word(list(u) + list(v))


def word_inv(u: Word) -> Word:
    return tuple(-x for x in reversed(u))


def commutator(u: Word, v: Word) -> Word:
    return reduce_word(list(u) + list(v) + list(word_inv(u)) + list(word_inv(v)))


def word_pow(u: Word, k: int) -> Word:
    if k < 0:
        return word_pow(word_inv(u), -k)
    out: Word = ()
    for _ in range(k):
        out = word_mul(out, u)
    return out


# -- Z[F] arithmetic --

def elt_add(a: RingElt, b: RingElt, sign: int = 1) -> RingElt:
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, 0) + sign * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def word_times_elt(w: Word, a: RingElt) -> RingElt:
    out: RingElt = {}
    for u, c in a.items():
        key = word_mul(w, u)
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def elt_times_word(a: RingElt, w: Word) -> RingElt:
    out: RingElt = {}
    for u, c in a.items():
        key = word_mul(u, w)
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def augmentation(a: RingElt) -> int:
    return sum(a.values())


def fox_derivative(w: Word, j: int) -> RingElt:
    """Fox derivative d w / d x_j in Z[F] (j is 1-based).

    Satisfies d(uv) = du + u dv, d x_j = 1, d x_j^-1 = -x_j^-1, and
    d x_k = 0 for k != j."""
    out: RingElt = {}
    prefix: Word = ()
    for letter in w:
        if letter == j:
            out = elt_add(out, {prefix: 1})
        elif letter == -j:
            out = elt_add(out, {word_mul(prefix, (-j,)): 1}, sign=-1)
        prefix = word_mul(prefix, (letter,))
    return out


def fox_derivative_elt(a: RingElt, j: int) -> RingElt:
    """Linear extension of the Fox derivative to Z[F]."""
    out: RingElt = {}
    for w, c in a.items():
        for u, cu in fox_derivative(w, j).items():
            v = out.get(u, 0) + c * cu
            if v:
                out[u] = v
            else:
                out.pop(u, None)
    return out


class GroupPresentation:
    """<x_1..x_n | r_1..r_m> with freely reduced relator words."""

    def __init__(self, generators: Sequence[str], relators: Iterable[Word],
                 name: str = ""):
        gens = list(generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        self.generators = gens
        self.relators = [reduce_word(r) for r in relators]
        for r in self.relators:
            if any(abs(x) > len(gens) for x in r):
                raise ValueError("relator uses an unknown generator")
        self.name = name

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def m(self) -> int:
        return len(self.relators)

    # -- abelianization --
    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for r in self.relators:
            row = [0] * self.n
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    def abelianization(self):
        """(b, images): first Betti number and, per generator, its exponent
        vector in the free quotient Z^b.  Raises TorsionError on torsion."""
        M = self.exponent_matrix()
        if not M:
            return self.n, [[int(i == j) for j in range(self.n)]
                            for i in range(self.n)]
        divisors = snf_divisors(M)
        if any(d != 1 for d in divisors):
            raise TorsionError(
                f"abelianization has torsion (divisors {divisors}); unsupported")
        r = len(divisors)
        b = self.n - r
        _, _, V = smith_normal_form(M)
        images = [[V[j][r + k] for k in range(b)] for j in range(self.n)]
        return b, images

    def abelianized(self, a: RingElt, ring: PolyRing,
                    images: list[list[int]]) -> LaurentPoly:
        terms: dict[tuple[int, ...], Fraction] = {}
        for w, c in a.items():
            e = [0] * ring.n
            for x in w:
                img = images[abs(x) - 1]
                s = 1 if x > 0 else -1
                for k in range(ring.n):
                    e[k] += s * img[k]
            key = tuple(e)
            v = terms.get(key, Fraction(0)) + c
            if v:
                terms[key] = v
            else:
                terms.pop(key, None)
        return LaurentPoly(ring, terms)

    def character_ring(self) -> PolyRing:
        b, _ = self.abelianization()
        return PolyRing([f"t{j + 1}" for j in range(b)])

    def is_commutator_relators(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.exponent_matrix())

    # -- serialization --
    def to_text(self) -> str:
        parts = ["gens: " + " ".join(self.generators)]
        for r in self.relators:
            parts.append("rel: " + word_to_text(r, self.generators))
        return "; ".join(parts)

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "GroupPresentation":
        gens: list[str] = []
        relators: list[Word] = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if ":" not in chunk:
                raise ValueError(f"expected 'gens:' or 'rel:' section in {chunk!r}")
            tag, _, body = chunk.partition(":")
            tag = tag.strip()
            if tag == "gens":
                gens = body.split()
            elif tag == "rel":
                if not gens:
                    raise ValueError("rel before gens")
                relators.append(parse_word(body, gens))
            else:
                raise ValueError(f"unknown section {tag!r}")
        return cls(gens, relators, name=name)

    def __repr__(self) -> str:
        return f"GroupPresentation(<{' '.join(self.generators)} | {self.m} relators>)"


_WORD_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[\[\],^])"
                         r"|(?P<int>-?\d+))")


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Word grammar: generators with optional ^k powers and nestable
    commutator brackets [u, v] = u v u^-1 v^-1."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad word syntax at {text[pos:]!r}")
        for kind in ("name", "op", "int"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind)))
                break
        pos = m.end()
    index = {g: i + 1 for i, g in enumerate(generators)}
    at = 0

    def parse_seq(stop_ops: frozenset[str]) -> Word:
        nonlocal at
        word: Word = ()
        while at < len(tokens):
            kind, val = tokens[at]
            if kind == "op" and val in stop_ops:
                return word
            if kind == "name":
                if val not in index:
                    raise ValueError(f"unknown generator {val!r}")
                at += 1
                piece: Word = (index[val],)
            elif kind == "op" and val == "[":
                at += 1
                left = parse_seq(frozenset(","))
                at += 1          # consume ','
                right = parse_seq(frozenset("]"))
                if at >= len(tokens):
                    raise ValueError("unterminated commutator")
                at += 1          # consume ']'
                piece = commutator(left, right)
            else:
                raise ValueError(f"unexpected token {val!r}")
            if at < len(tokens) and tokens[at] == ("op", "^"):
                at += 1
                if at >= len(tokens) or tokens[at][0] != "int":
                    raise ValueError("expected integer power after '^'")
                piece = word_pow(piece, int(tokens[at][1]))
                at += 1
            word = word_mul(word, piece)
        return word

    w = parse_seq(frozenset())
    if at != len(tokens):
        raise ValueError("trailing tokens in word")
    return w


def word_to_text(w: Word, generators: Sequence[str]) -> str:
    parts = []
    i = 0
    while i < len(w):
        x = w[i]
        k = 1
        while i + k < len(w) and w[i + k] == x:
            k += 1
        power = k if x > 0 else -k
        nm = generators[abs(x) - 1]
        parts.append(nm if power == 1 else f"{nm}^{power}")
        i += k
    return " ".join(parts) if parts else "1"


# -- Alexander matrices --

def alexander_matrix(P: GroupPresentation) -> tuple[PolyMatrix, PolyRing]:
    """m x n matrix of abelianized Fox derivatives over Z[t1^± .. tb^±]."""
    b, images = P.abelianization()
    ring = PolyRing([f"t{j + 1}" for j in range(b)])
    rows = []
    for r in P.relators:
        row = []
        for j in range(1, P.n + 1):
            row.append(P.abelianized(fox_derivative(r, j), ring, images))
        rows.append(row)
    return PolyMatrix(ring, rows), ring


def v1_ideal(P: GroupPresentation):
    """E_1: the ideal of codimension-1 (size n-1) minors of the Alexander
    matrix, as a list of Laurent generators with its ring.  Fewer relators
    than n-1 means the ideal is zero (the locus is the whole torus)."""
    A, ring = alexander_matrix(P)
    k = P.n - 1
    if k == 0:
        # a 0x0 minor is 1: E_1 is the unit ideal, empty locus
        return [LaurentPoly(ring, {ring.zero_exp(): Fraction(1)})], ring
    if P.m < k:
        return [], ring
    return [mnr for mnr in A.minors(k)], ring


def linearized_alexander_matrix(P: GroupPresentation) -> tuple[PolyMatrix, PolyRing]:
    """For commutator-relators presentations: the m x n matrix of linear
    forms sum_k eps(d_k d_j r_i) y_k over Z[y1..yn]."""
    exps = P.exponent_matrix()
    for i, row in enumerate(exps):
        if any(row):
            raise RelatorError(
                f"relator {word_to_text(P.relators[i], P.generators)!r} "
                "is not in the commutator subgroup")
    ring = PolyRing([f"y{j + 1}" for j in range(P.n)])
    rows = []
    for r in P.relators:
        row = []
        for j in range(1, P.n + 1):
            dj = fox_derivative(r, j)
            terms = {}
            for k in range(1, P.n + 1):
                coeff = augmentation(fox_derivative_elt(dj, k))
                if coeff:
                    e = [0] * P.n
                    e[k - 1] = 1
                    terms[tuple(e)] = Fraction(coeff)
            row.append(MultiPoly(ring, terms))
        rows.append(row)
    return PolyMatrix(ring, rows), ring


def linearized_r1_ideal(P: GroupPresentation) -> Ideal:
    """Codimension-1 minor ideal of the linearized Alexander matrix; its
    variety is the first resonance variety of the presentation 2-complex."""
    L, ring = linearized_alexander_matrix(P)
    k = P.n - 1
    if k == 0 or P.m < k:
        return Ideal.zero(ring)
    minors = L.minors(k)
    return Ideal(ring, minors).interreduced()


def strip_monomial_content(p: MultiPoly) -> MultiPoly:
    """Divide out the largest monomial dividing every term."""
    if p.is_zero():
        return p
    n = p.ring.n
    content = [min(e[j] for e in p.terms) for j in range(n)]
    if not any(content):
        return p
    return MultiPoly(p.ring, {tuple(x - c for x, c in zip(e, content)): v
                              for e, v in p.terms.items()})


def detect_quadric(I: Ideal) -> MultiPoly | None:
    """A homogeneous quadratic form q with V(I) = V(q), if one shows up as
    the monomial-content-stripped part of a generator (exact variety
    equality is then certified by mutual radical membership)."""
    seen = set()
    for g in list(I.groebner()) + list(I.gens):
        q = strip_monomial_content(g)
        if q.total_degree() != 2 or not q.is_homogeneous():
            continue
        key = frozenset(q.monic().terms.items())
        if key in seen:
            continue
        seen.add(key)
        qi = Ideal(I.ring, [q])
        if I.radical_contains(q) and all(qi.radical_contains(h) for h in I.gens):
            return q
    return None


def alexander_taylor_linear(P: GroupPresentation) -> PolyMatrix:
    """Degree-1 Taylor truncation of the Alexander matrix at t = 1 + y,
    used to cross-check the linearized matrix on commutator relators."""
    A, ring = alexander_matrix(P)
    yring = PolyRing([f"y{j + 1}" for j in range(ring.n)])
    rows = []
    for row in A.rows:
        out = []
        for p in row:
            const = sum(p.terms.values(), Fraction(0))
            terms = {}
            if const:
                terms[yring.zero_exp()] = const
            for k in range(ring.n):
                lin = sum((c * e[k] for e, c in p.terms.items()), Fraction(0))
                if lin:
                    ee = [0] * yring.n
                    ee[k] = 1
                    terms[tuple(ee)] = lin
            out.append(MultiPoly(yring, terms))
        rows.append(out)
    return PolyMatrix(yring, rows)
