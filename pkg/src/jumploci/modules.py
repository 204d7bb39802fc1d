"""Free-module Groebner machinery over Q[x1..xn]: syzygies, finite
complexes of free modules with polynomial boundary maps, homology
presentations and their Fitting supports.

Module elements live in S^m and are stored as sparse dicts keyed by
(component, exponent).  The order is position-over-term: lower component
index dominates, grevlex inside a component.  Syzygies come from the
elimination property of an augmented module S^m (+) S^k.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .ideals import Ideal, PolyMatrix, _exp_div, _exp_lcm, _exp_mul
from .rings import Exponent, MultiPoly, PolyRing, grevlex_key

ModMono = tuple[int, Exponent]
ModElt = dict[ModMono, Fraction]


def _mod_key(mono: ModMono):
    comp, e = mono
    return (-comp, grevlex_key(e))


def _vec_to_elt(vec: Sequence[MultiPoly], offset: int = 0) -> ModElt:
    out: ModElt = {}
    for comp, p in enumerate(vec):
        for e, c in p.terms.items():
            out[(comp + offset, e)] = c
    return out


def _elt_to_vec(elt: ModElt, ring: PolyRing, length: int, offset: int = 0) -> list[MultiPoly]:
    terms: list[dict] = [dict() for _ in range(length)]
    for (comp, e), c in elt.items():
        if offset <= comp < offset + length:
            terms[comp - offset][e] = c
    return [MultiPoly(ring, t) for t in terms]


def _elt_leading(elt: ModElt) -> tuple[ModMono, Fraction]:
    mono = max(elt, key=_mod_key)
    return mono, elt[mono]


def _elt_sub_scaled(a: ModElt, b: ModElt, coeff: Fraction, shift: Exponent) -> ModElt:
    out = dict(a)
    for (comp, e), c in b.items():
        key = (comp, _exp_mul(e, shift))
        v = out.get(key, Fraction(0)) - coeff * c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _elt_monic(elt: ModElt) -> ModElt:
    if not elt:
        return elt
    _, c = _elt_leading(elt)
    if c == 1:
        return elt
    return {m: v / c for m, v in elt.items()}


def _elt_reduce(elt: ModElt, basis: Sequence[ModElt]) -> ModElt:
    lts = [_elt_leading(b) for b in basis]
    work = dict(elt)
    rem: ModElt = {}
    while work:
        mono = max(work, key=_mod_key)
        comp, e = mono
        coeff = work[mono]
        for b, ((bc, be), bcoef) in zip(basis, lts):
            if bc != comp:
                continue
            q = _exp_div(e, be)
            if q is None:
                continue
            work = _elt_sub_scaled(work, b, coeff / bcoef, q)
            break
        else:
            del work[mono]
            rem[mono] = coeff
    return rem


def _module_interreduce(elts: list[ModElt]) -> list[ModElt]:
    basis = [_elt_monic(e) for e in elts if e]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1:]
            r = _elt_reduce(basis[i], others) if others else basis[i]
            if r != basis[i]:
                changed = True
                if r:
                    basis[i] = _elt_monic(r)
                else:
                    basis.pop(i)
                break
    return sorted(basis, key=lambda b: _mod_key(_elt_leading(b)[0]))


def module_groebner(elts: Iterable[ModElt]) -> list[ModElt]:
    """Reduced Groebner basis of the submodule generated by elts (POT)."""
    basis = _module_interreduce(list(elts))
    if not basis:
        return []
    lts = [_elt_leading(b)[0] for b in basis]
    pairs = {(i, j) for i in range(len(basis)) for j in range(i)
             if lts[i][0] == lts[j][0]}
    while pairs:
        i, j = min(pairs, key=lambda p: (grevlex_key(_exp_lcm(lts[p[0]][1], lts[p[1]][1])), p))
        pairs.discard((i, j))
        le = _exp_lcm(lts[i][1], lts[j][1])
        fi, fj = basis[i], basis[j]
        ci = fi[lts[i]]
        cj = fj[lts[j]]
        s = _elt_sub_scaled(
            _elt_sub_scaled({}, fi, Fraction(-1) / ci, _exp_div(le, lts[i][1])),
            fj, Fraction(1) / cj, _exp_div(le, lts[j][1]))
        r = _elt_reduce(s, basis)
        if not r:
            continue
        r = _elt_monic(r)
        basis.append(r)
        lts.append(_elt_leading(r)[0])
        new = len(basis) - 1
        pairs.update((new, k) for k in range(new) if lts[new][0] == lts[k][0])
    return _module_interreduce(basis)


def _augmented_gb(cols: list[list[MultiPoly]], ring: PolyRing, m: int):
    """GB of span{(col_j (+) e_j)} in S^m (+) S^k, POT with the first block
    dominating.  Returns (gb, k)."""
    k = len(cols)
    elts = []
    for j, col in enumerate(cols):
        elt = _vec_to_elt(col)
        elt[(m + j, ring.zero_exp())] = Fraction(1)
        elts.append(elt)
    return module_groebner(elts), k


def syzygy_matrix(M: PolyMatrix) -> PolyMatrix:
    """Columns generate the kernel of the map S^cols -> S^rows given by M."""
    m, n = M.shape
    ring = M.ring
    cols = [[M.rows[i][j] for i in range(m)] for j in range(n)]
    gb, k = _augmented_gb(cols, ring, m)
    syz = []
    for elt in gb:
        if all(comp >= m for comp, _ in elt):
            syz.append(_elt_to_vec(elt, ring, k, offset=m))
    return PolyMatrix(ring, [[syz[j][i] for j in range(len(syz))]
                             for i in range(k)])


class NotAComplexError(ValueError):
    pass


class PolyComplex:
    """Finite complex of free S-modules.  `ranks[i]` is the rank in
    position i; `maps[i]` carries position i to position i-1 (chain) or
    i+1 (cochain)."""

    def __init__(self, ring: PolyRing, ranks: Sequence[int],
                 maps: dict[int, PolyMatrix], direction: str = "chain"):
        if direction not in ("chain", "cochain"):
            raise ValueError("direction must be 'chain' or 'cochain'")
        self.ring = ring
        self.ranks = tuple(ranks)
        self.maps = dict(maps)
        self.direction = direction
        for i, M in self.maps.items():
            src = self.rank(i)
            dst = self.rank(i - 1 if direction == "chain" else i + 1)
            if M.shape != (dst, src) and not (dst == 0 or src == 0):
                raise ValueError(f"map {i} has shape {M.shape}, expected {(dst, src)}")

    def rank(self, i: int) -> int:
        if 0 <= i < len(self.ranks):
            return self.ranks[i]
        return 0

    def map_from(self, i: int) -> PolyMatrix:
        """The boundary leaving position i (zero map if absent)."""
        if i in self.maps:
            return self.maps[i]
        dst = self.rank(i - 1 if self.direction == "chain" else i + 1)
        return PolyMatrix(self.ring, [[self.ring.constant(0)] * self.rank(i)
                                      for _ in range(dst)])

    def map_into(self, i: int) -> PolyMatrix:
        j = i + 1 if self.direction == "chain" else i - 1
        if j in self.maps:
            return self.maps[j]
        return PolyMatrix(self.ring, [[self.ring.constant(0)] * self.rank(j)
                                      for _ in range(self.rank(i))])

    def check_complex(self):
        for i in range(len(self.ranks)):
            out_map = self.map_from(i)
            inc = self.map_into(i)
            if not inc.rows or not out_map.rows:
                continue
            prod = _matmul_poly(out_map, inc)
            if not prod.is_zero():
                raise NotAComplexError(f"composite through position {i} is nonzero")

    def specialize(self, point: Sequence[Fraction]) -> dict[int, list[list[Fraction]]]:
        return {i: M.evaluate(point) for i, M in self.maps.items()}

    def dual(self) -> "PolyComplex":
        """Transpose all maps and flip chain <-> cochain."""
        direction = "cochain" if self.direction == "chain" else "chain"
        if self.direction == "chain":
            # map i: i -> i-1 transposes to a map i-1 -> i
            maps = {i - 1: M.transpose() for i, M in self.maps.items()}
        else:
            maps = {i + 1: M.transpose() for i, M in self.maps.items()}
        return PolyComplex(self.ring, self.ranks, maps, direction)


def _matmul_poly(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    am, an = A.shape
    bm, bn = B.shape
    if an != bm:
        raise ValueError("shape mismatch")
    zero = A.ring.constant(0)
    rows = []
    for i in range(am):
        row = []
        for j in range(bn):
            acc = zero
            for l in range(an):
                a = A.rows[i][l]
                b = B.rows[l][j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        rows.append(row)
    return PolyMatrix(A.ring, rows)


class HomologyPresentation:
    """Generators (columns of `generators`, inside S^rank) and a relations
    matrix (rows indexed by generators)."""

    def __init__(self, generators: PolyMatrix, relations: PolyMatrix):
        self.generators = generators
        self.relations = relations

    @property
    def gen_count(self) -> int:
        return self.relations.shape[0]


def homology_presentation(C: PolyComplex, i: int) -> HomologyPresentation:
    """Presentation of homology at position i: ker(out) / im(into)."""
    C.check_complex()
    ring = C.ring
    r = C.rank(i)
    out_map = C.map_from(i)
    inc = C.map_into(i)
    inc_cols = [[inc.rows[a][j] for a in range(inc.shape[0])]
                for j in range(inc.shape[1])]
    if out_map.shape[0] == 0 or out_map.is_zero():
        # kernel is everything: unit-vector generators, relations = incoming
        gens = PolyMatrix(ring, [[ring.constant(int(a == b)) for b in range(r)]
                                 for a in range(r)])
        rel = PolyMatrix(ring, [[inc.rows[a][j] for j in range(inc.shape[1])]
                                for a in range(r)])
        return HomologyPresentation(gens, rel)

    ker = syzygy_matrix(out_map)          # r x g
    g = ker.shape[1]
    kcols = [[ker.rows[a][j] for a in range(r)] for j in range(g)]
    gb, _ = _augmented_gb(kcols, ring, r)
    second_syz = []
    for elt in gb:
        if all(comp >= r for comp, _ in elt):
            second_syz.append(_elt_to_vec(elt, ring, g, offset=r))
    # coordinates of each incoming column in the kernel generators
    rel_cols: list[list[MultiPoly]] = []
    for col in inc_cols:
        elt = _vec_to_elt(col)
        rem = _elt_reduce(elt, gb)
        if any(comp < r for comp, _ in rem):
            raise NotAComplexError("incoming column is not in the kernel")
        coords = _elt_to_vec(rem, ring, g, offset=r)
        rel_cols.append([-c for c in coords])
    rel_cols.extend(second_syz)
    rel = PolyMatrix(ring, [[rel_cols[j][a] for j in range(len(rel_cols))]
                            for a in range(g)])
    return HomologyPresentation(ker, rel)


def minimize_presentation(P: PolyMatrix) -> PolyMatrix:
    """Split off unit relations: pivot away entries that are nonzero
    constants.  The presented module (hence every Fitting radical and the
    support) is unchanged."""
    rows = [list(r) for r in P.rows]
    while True:
        pivot = None
        for a, row in enumerate(rows):
            for b, x in enumerate(row):
                if x.is_constant() and not x.is_zero():
                    pivot = (a, b)
                    break
            if pivot:
                break
        if pivot is None:
            break
        a, b = pivot
        pc = rows[a][b].constant_term()
        ncols = len(rows[0])
        # clear row a in the other columns, then drop generator a, relation b
        for j in range(ncols):
            if j == b or rows[a][j].is_zero():
                continue
            f = rows[a][j].scale(1 / pc)
            for x in range(len(rows)):
                rows[x][j] = rows[x][j] - f * rows[x][b]
        rows = [[row[j] for j in range(ncols) if j != b]
                for x, row in enumerate(rows) if x != a]
        if not rows:
            break
    if not rows:
        return PolyMatrix(P.ring, [])
    return PolyMatrix(P.ring, rows)


def fitting_support(P: PolyMatrix, g: int | None = None) -> Ideal:
    """0-th Fitting ideal of the presented module: g x g minors of the
    relations matrix (g = generator count).  Fewer than g relations means
    the module is not torsion: zero ideal, full support."""
    if g is None:
        g = P.shape[0]
    if P.shape[0] != g:
        raise ValueError("relations matrix must have one row per generator")
    if g == 0:
        # zero module: empty support
        return Ideal.unit(P.ring)
    if P.shape[1] < g:
        return Ideal.zero(P.ring)
    from .ideals import determinantal_ideal
    minors = P.minors(g)
    if not minors:
        return Ideal.zero(P.ring)
    return Ideal(P.ring, minors).interreduced()
