"""Ideals in Q[x1..xn]: Buchberger Groebner bases, division, radical
membership via Rabinowitsch, determinantal ideals, and tangent-cone
(initial-form) ideals via homogenization.

Default monomial order is graded reverse lex; tangent cones use a custom
order with the homogenizing variable heaviest.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .linalg import bareiss_det, in_row_span, row_space_basis
from .rings import (DEFAULT_ORDER, MONOMIAL_ORDERS, Exponent, MultiPoly,
                    PolyRing, grevlex_key)

# generator-count threshold above which we avoid computing a full GB
# eagerly and prefer graded linear algebra fast paths
_GB_GEN_LIMIT = 120


# --- division and Buchberger ------------------------------------------------

def _exp_div(a: Exponent, b: Exponent):
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def _exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _exp_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def poly_reduce(f: MultiPoly, divisors: Sequence[MultiPoly], key) -> MultiPoly:
    """Remainder of f under multivariate division by `divisors`."""
    ring = f.ring
    rem: dict[Exponent, Fraction] = {}
    work = dict(f.terms)
    lts = [(g.leading(key)) for g in divisors]
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for g, (ge, gc) in zip(divisors, lts):
            q = _exp_div(e, ge)
            if q is not None:
                factor = c / gc
                for te, tc in g.terms.items():
                    if te == ge:
                        continue
                    me = _exp_mul(te, q)
                    v = work.get(me, Fraction(0)) - factor * tc
                    if v:
                        work[me] = v
                    else:
                        work.pop(me, None)
                break
        else:
            rem[e] = c
    return MultiPoly(ring, rem)


def _s_poly(f: MultiPoly, g: MultiPoly, key) -> MultiPoly:
    fe, fc = f.leading(key)
    ge, gc = g.leading(key)
    l = _exp_lcm(fe, ge)
    mf = MultiPoly(f.ring, {_exp_div(l, fe): Fraction(1) / fc})
    mg = MultiPoly(g.ring, {_exp_div(l, ge): Fraction(1) / gc})
    return mf * f - mg * g


def interreduce(polys: Iterable[MultiPoly], key=grevlex_key) -> list[MultiPoly]:
    """Autoreduce: drop zeros, make monic, reduce each against the others."""
    basis = [p.monic(key) for p in polys if not p.is_zero()]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1:]
            r = poly_reduce(basis[i], others, key) if others else basis[i]
            if r != basis[i]:
                changed = True
                if r.is_zero():
                    basis.pop(i)
                else:
                    basis[i] = r.monic(key)
                break
    return sorted(basis, key=lambda p: key(p.leading(key)[0]))


def buchberger(gens: Sequence[MultiPoly], key=grevlex_key,
               stop_at_unit: bool = False) -> list[MultiPoly]:
    """Reduced Groebner basis of <gens> for the given monomial-order key."""
    basis = interreduce(gens, key)
    if not basis:
        return []
    lts = [g.leading(key)[0] for g in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}

    def lcm_of(i, j):
        return _exp_lcm(lts[i], lts[j])

    while pairs:
        # normal selection: smallest lcm first
        i, j = min(pairs, key=lambda p: (key(lcm_of(*p)), p))
        pairs.discard((i, j))
        l = lcm_of(i, j)
        # coprime criterion
        if l == _exp_mul(lts[i], lts[j]):
            continue
        # chain criterion: some k divides the lcm and both mixed pairs done
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or _exp_div(l, lts[k]) is None:
                continue
            pik = (max(i, k), min(i, k))
            pjk = (max(j, k), min(j, k))
            if pik not in pairs and pjk not in pairs:
                skip = True
                break
        if skip:
            continue
        s = _s_poly(basis[i], basis[j], key)
        r = poly_reduce(s, basis, key)
        if r.is_zero():
            continue
        r = r.monic(key)
        if stop_at_unit and r.is_constant():
            return [r.ring.constant(1)]
        basis.append(r)
        lts.append(r.leading(key)[0])
        new = len(basis) - 1
        pairs.update((new, k) for k in range(new))
    return interreduce(basis, key)


# --- the Ideal type ----------------------------------------------------------

class Ideal:
    """An ideal of Q[x1..xn] given by generators, with cached reduced
    Groebner bases tagged by monomial order."""

    __slots__ = ("ring", "gens", "_gb", "_graded_pieces")

    def __init__(self, ring: PolyRing, gens: Iterable[MultiPoly] = ()):
        self.ring = ring
        cleaned = []
        seen = set()
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator in wrong ring")
            if g.is_zero():
                continue
            skey = frozenset(g.monic().terms.items())
            if skey in seen:
                continue
            seen.add(skey)
            cleaned.append(g)
        self.gens = tuple(cleaned)
        self._gb: dict[str, tuple[MultiPoly, ...]] = {}
        self._graded_pieces: dict[int, tuple] = {}

    @classmethod
    def zero(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, ())

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, (ring.constant(1),))

    def __repr__(self) -> str:
        inside = ", ".join(str(g) for g in self.gens) or "0"
        return f"Ideal({inside})"

    def groebner(self, order: str = DEFAULT_ORDER) -> tuple[MultiPoly, ...]:
        if order not in MONOMIAL_ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        if order not in self._gb:
            self._gb[order] = tuple(buchberger(self.gens, MONOMIAL_ORDERS[order]))
        return self._gb[order]

    def with_groebner(self, order: str = DEFAULT_ORDER) -> "Ideal":
        self.groebner(order)
        return self

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        if any(g.is_constant() and not g.is_zero() for g in self.gens):
            return True
        if self.is_homogeneous():
            # a homogeneous ideal with all generators of degree >= 1 is proper
            return False
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant() and not gb[0].is_zero()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def reduce(self, f: MultiPoly, order: str = DEFAULT_ORDER) -> MultiPoly:
        gb = self.groebner(order)
        if not gb:
            return f
        return poly_reduce(f, gb, MONOMIAL_ORDERS[order])

    def contains(self, f: MultiPoly) -> bool:
        if f.is_zero():
            return True
        if self.is_zero():
            return False
        return self.reduce(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        """Equality of ideals, by two-sided generator reduction."""
        return self.contains_ideal(other) and other.contains_ideal(self)

    def sum(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        return Ideal(self.ring, self.gens + other.gens)

    def product(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        return Ideal(self.ring, (a * b for a in self.gens for b in other.gens))

    def interreduced(self) -> "Ideal":
        """Same ideal on a smaller generator list.  For sets of homogeneous
        generators this is per-degree row reduction (cheap); otherwise a
        full autoreduction."""
        if not self.gens:
            return self
        if self.is_homogeneous():
            by_deg: dict[int, list[MultiPoly]] = {}
            for g in self.gens:
                by_deg.setdefault(g.total_degree(), []).append(g)
            out = []
            for d in sorted(by_deg):
                out.extend(_graded_span_basis(self.ring, by_deg[d], d))
            return Ideal(self.ring, out)
        return Ideal(self.ring, interreduce(self.gens))

    def vanishes_at(self, point: Sequence[Fraction]) -> bool:
        return all(g.evaluate(point) == 0 for g in self.gens)

    def _same_ring(self, other: "Ideal"):
        if self.ring != other.ring:
            raise ValueError("ideals in different rings")

    # -- radical membership --

    def radical_contains(self, f: MultiPoly, max_power: int = 4,
                         complete: bool = True) -> bool:
        """True iff f vanishes on V(I).  Layered: graded linear algebra for
        homogeneous data, direct membership of small powers, then the
        Rabinowitsch construction.  With complete=False the expensive final
        step is skipped and False only means "not proven"."""
        if f.is_zero():
            return True
        if f.ring != self.ring:
            raise ValueError("polynomial in wrong ring")
        if self.is_zero():
            return False
        if f.is_constant():
            return self.is_unit()
        if self.is_homogeneous():
            # radical of a homogeneous ideal is homogeneous: test componentwise
            comps = [f.homogeneous_component(d)
                     for d in range(f.total_degree() + 1)]
            comps = [c for c in comps if not c.is_zero()]
            if len(comps) > 1:
                return all(self.radical_contains(c, max_power, complete)
                           for c in comps)
            fk = f
            for _ in range(max_power):
                if self._graded_contains(fk):
                    return True
                fk = fk * f
        elif len(self.gens) <= _GB_GEN_LIMIT:
            fk = f
            for _ in range(max_power):
                if self.contains(fk):
                    return True
                fk = fk * f
        if not complete:
            return False
        return self._rabinowitsch(f)

    # graded pieces beyond this many spanning rows are not materialized
    _SPAN_ROW_BUDGET = 40000

    def _graded_contains(self, f: MultiPoly) -> bool:
        """Membership of a homogeneous f in a homogeneous ideal, by sparse
        row reduction against the ideal's graded piece in degree deg f."""
        span = self._graded_piece(f.total_degree())
        if span is None or span == "too-big":
            return False
        return span.contains(dict(f.terms))

    def _graded_piece(self, d: int):
        if d in self._graded_pieces:
            return self._graded_pieces[d]
        from math import comb
        from .linalg import SparseSpan
        n = self.ring.n
        estimate = sum(comb(d - g.total_degree() + n - 1, n - 1)
                       for g in self.gens if g.total_degree() <= d)
        if estimate > self._SPAN_ROW_BUDGET:
            self._graded_pieces[d] = "too-big"
            return "too-big"
        span = SparseSpan(grevlex_key)
        empty = True
        for g in self.gens:
            gd = g.total_degree()
            if gd > d:
                continue
            for m in _monomials_of_degree(n, d - gd):
                span.add({_exp_mul(e, m): c for e, c in g.terms.items()})
                empty = False
        self._graded_pieces[d] = None if empty else span
        return self._graded_pieces[d]

    def _rabinowitsch(self, f: MultiPoly) -> bool:
        tname = "_t"
        while tname in self.ring.index:
            tname += "_"
        ext = self.ring.extend(tname)
        lift = [ext.variable(j) for j in range(self.ring.n)]

        def up(p: MultiPoly) -> MultiPoly:
            return MultiPoly(ext, {e + (0,): c for e, c in p.terms.items()})

        gens = [up(g) for g in self.gens]
        gens.append(ext.constant(1) - ext.variable(ext.n - 1) * up(f))
        gb = buchberger(gens, grevlex_key, stop_at_unit=True)
        return len(gb) == 1 and gb[0].is_constant()


def _monomials_of_degree(n: int, d: int):
    """All exponent vectors in n variables of total degree exactly d."""
    if n == 0:
        if d == 0:
            yield ()
        return
    if n == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def _graded_span_basis(ring: PolyRing, polys: list[MultiPoly], d: int) -> list[MultiPoly]:
    from .linalg import SparseSpan
    span = SparseSpan(grevlex_key)
    for g in polys:
        span.add(dict(g.terms))
    return [MultiPoly(ring, row) for row in span.reduced_rows()]


# --- polynomial matrices and determinantal ideals ---------------------------

class PolyMatrix:
    """Rectangular matrix of polynomial (or Laurent) entries sharing one
    ambient ring and one element kind."""

    __slots__ = ("ring", "rows", "elt_cls")

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[MultiPoly]]):
        self.ring = ring
        self.elt_cls = MultiPoly
        for r in rows:
            for x in r:
                from .rings import _TermPoly
                if isinstance(x, _TermPoly):
                    self.elt_cls = type(x)
                    break
            else:
                continue
            break
        self.rows = tuple(tuple(self._coerce(x) for x in r) for r in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        for r in self.rows:
            for x in r:
                if x.ring != ring or type(x) is not self.elt_cls:
                    raise ValueError("entry in wrong ring or of mixed kind")

    def _coerce(self, x):
        from .rings import _TermPoly
        if isinstance(x, _TermPoly):
            return x
        return self.elt_cls(self.ring, {self.ring.zero_exp(): Fraction(x)})

    def zero_elt(self):
        return self.elt_cls(self.ring, {})

    def one_elt(self):
        return self.elt_cls(self.ring, {self.ring.zero_exp(): Fraction(1)})

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ring, self.rows))

    def transpose(self) -> "PolyMatrix":
        m, n = self.shape
        return PolyMatrix(self.ring, [[self.rows[i][j] for i in range(m)]
                                      for j in range(n)])

    def evaluate(self, point: Sequence[Fraction]) -> list[list[Fraction]]:
        return [[x.evaluate(point) for x in r] for r in self.rows]

    def compose(self, values: Sequence[MultiPoly]) -> "PolyMatrix":
        target = values[0].ring if values else self.ring
        return PolyMatrix(target, [[x.compose(values) for x in r] for r in self.rows])

    def max_total_degree(self) -> int:
        return max((x.total_degree() for r in self.rows for x in r), default=-1)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in col_perm]
                                      for i in row_perm])

    def det(self) -> MultiPoly:
        m, n = self.shape
        if m != n:
            raise ValueError("determinant of a non-square matrix")
        if m == 0:
            return self.ring.constant(1)
        if self.max_total_degree() <= 0:
            num = bareiss_det([[x.constant_term() for x in r] for r in self.rows])
            return self.ring.constant(num)
        memo: dict = {}
        return _cofactor_det(self, tuple(range(m)), tuple(range(n)), memo)

    def minors(self, k: int) -> list[MultiPoly]:
        """All nonzero k x k minors, deduplicated up to sign, memoized
        cofactor expansion along the sparsest column."""
        m, n = self.shape
        if k < 1 or k > min(m, n):
            raise ValueError(f"minor size {k} out of range for {m}x{n}")
        memo: dict = {}
        out = []
        seen = set()
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                d = _cofactor_det(self, rows, cols, memo)
                if d.is_zero():
                    continue
                lead = d.terms[max(d.terms, key=grevlex_key)]
                fp = frozenset((e, c / lead) for e, c in d.terms.items())
                if fp in seen:
                    continue
                seen.add(fp)
                out.append(d)
        return out


def _cofactor_det(M: PolyMatrix, rows: tuple, cols: tuple, memo: dict) -> MultiPoly:
    if not rows:
        return M.one_elt()
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    # expand along the sparsest column of the submatrix
    best_j, best_nz = None, None
    for jpos, j in enumerate(cols):
        nz = sum(1 for i in rows if not M.rows[i][j].is_zero())
        if best_nz is None or nz < best_nz:
            best_j, best_nz = jpos, nz
        if nz == 0:
            break
    acc = M.zero_elt()
    if best_nz:
        j = cols[best_j]
        rest = cols[:best_j] + cols[best_j + 1:]
        for ipos, i in enumerate(rows):
            entry = M.rows[i][j]
            if entry.is_zero():
                continue
            sub = _cofactor_det(M, rows[:ipos] + rows[ipos + 1:], rest, memo)
            if sub.is_zero():
                continue
            term = entry * sub
            acc = acc + term if (ipos + best_j) % 2 == 0 else acc - term
    memo[key] = acc
    return acc


def determinantal_ideal(M: PolyMatrix, k: int) -> Ideal:
    """Ideal generated by every k x k minor of M."""
    return Ideal(M.ring, M.minors(k)).interreduced()


def minors_ideal_capped(M: PolyMatrix, k: int) -> Ideal:
    """Ideal cutting out the rank <= k-1 locus of M.  Unlike
    determinantal_ideal this accepts any k: the condition is vacuous for
    k > min(shape) (zero ideal) and unsatisfiable for k <= 0 (unit ideal)."""
    m, n = M.shape
    if k <= 0:
        return Ideal.unit(M.ring)
    if k > min(m, n):
        return Ideal.zero(M.ring)
    return determinantal_ideal(M, k)


# --- radical membership / Rabinowitsch entry point ---------------------------

def radical_membership(f: MultiPoly, ideal: Ideal) -> bool:
    """True iff f vanishes on V(ideal) (Rabinowitsch-backed)."""
    return ideal.radical_contains(f)


# --- Laurent variety tests ----------------------------------------------------

def laurent_radical_membership(f, gens) -> bool:
    """Does the Laurent polynomial f vanish on V(gens) inside the torus
    (C*)^n?  Decided in a polynomial ring with a torus inverter adjoined:
    1 in (cleared gens, 1 - u*t1...tn, 1 - z*cleared f)."""
    from .rings import LaurentPoly
    ring = f.ring
    if f.is_zero():
        return True
    cleared = [g.monomial_clear() for g in gens if not g.is_zero()]
    fc = f.monomial_clear()
    names = list(ring.names)
    uname, zname = "_u", "_z"
    while uname in names:
        uname += "_"
    while zname in names:
        zname += "_"
    ext = PolyRing(names + [uname, zname])

    def up(p: MultiPoly) -> MultiPoly:
        return MultiPoly(ext, {e + (0, 0): c for e, c in p.terms.items()})

    polys = [up(p) for p in cleared]
    torus_mono = MultiPoly(ext, {tuple([1] * ring.n + [1, 0]): Fraction(1)})
    polys.append(ext.constant(1) - torus_mono)
    polys.append(ext.constant(1) - ext.variable(ext.n - 1) * up(fc))
    gb = buchberger(polys, grevlex_key, stop_at_unit=True)
    return len(gb) == 1 and gb[0].is_constant()


def laurent_variety_contains(sub_gens, super_gens) -> bool:
    """V(sub) subseteq V(super) inside the torus: every generator of the
    bigger locus' ideal vanishes on V(sub)."""
    return all(laurent_radical_membership(g, sub_gens) for g in super_gens)


# --- tangent cone ------------------------------------------------------------

def tangent_cone_ideal(ideal: Ideal, base: Sequence[Fraction]) -> Ideal:
    """Initial-form ideal of `ideal` translated so `base` sits at the origin.

    Pipeline: translate; grevlex GB (graded, so homogenizations generate the
    homogenized ideal); re-GB with the homogenizing variable heaviest; take
    lowest-degree forms of the dehomogenized basis.  Returns the unit ideal
    when base is not on the variety.
    """
    ring = ideal.ring
    if len(base) != ring.n:
        raise ValueError("base point dimension mismatch")
    if ideal.is_zero():
        return Ideal.zero(ring)
    translated = [g.translate(base) for g in ideal.gens]
    g0 = buchberger(translated, grevlex_key)
    if len(g0) == 1 and g0[0].is_constant():
        return Ideal.unit(ring)
    hname = "_h"
    while hname in ring.index:
        hname += "_"
    ext = ring.extend(hname)
    hpos = ext.n - 1

    def homogenize(p: MultiPoly) -> MultiPoly:
        d = p.total_degree()
        return MultiPoly(ext, {e + (d - sum(e),): c for e, c in p.terms.items()})

    def heavy_h_key(e: Exponent):
        return (e[hpos], grevlex_key(e[:hpos]))

    g1 = buchberger([homogenize(p) for p in g0], heavy_h_key)
    forms = []
    for p in g1:
        deh = MultiPoly(ring, {})
        for e, c in p.terms.items():
            deh = deh + MultiPoly(ring, {e[:hpos]: c})
        if not deh.is_zero():
            forms.append(deh.lowest_form())
    return Ideal(ring, forms).interreduced()
