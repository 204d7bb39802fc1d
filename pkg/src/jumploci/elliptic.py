"""Unimodular elliptic arrangements and their finite CDGA models.

An arrangement in the n-fold product of an elliptic curve is an integer
m x n matrix of homomorphism coefficients; translation points are accepted
in input but do not enter the model.  The model is the quotient of the
exterior algebra on a_1, b_1, .., a_n, b_n, e_1, .., e_m by the
Orlik-Solomon circuit boundaries among the e's together with f_i*(a) e_i
and f_i*(b) e_i, with differential d e_i = f_i*(a) ^ f_i*(b).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .cdga import FiniteCdga
from .linalg import SparseSpan, rank, snf_divisors
from .rings import PolyRing

Mono = tuple[int, ...]      # ascending generator indices


class EllipticArrangementError(ValueError):
    pass


class EllipticArrangement:
    def __init__(self, n: int, rows: Sequence[Sequence[int]],
                 translations: Sequence[Sequence[Fraction]] | None = None,
                 name: str = ""):
        self.n = n
        self.rows = [list(map(int, r)) for r in rows]
        self.name = name
        for r in self.rows:
            if len(r) != n:
                raise EllipticArrangementError("row arity mismatch")
            if not any(r):
                raise EllipticArrangementError("zero row")
        for i in range(len(self.rows)):
            for j in range(i + 1, len(self.rows)):
                if rank([[Fraction(x) for x in self.rows[i]],
                         [Fraction(x) for x in self.rows[j]]]) < 2:
                    raise EllipticArrangementError(
                        f"rows {i + 1} and {j + 1} are proportional")
        # translation points are recorded but ignored by the model builder
        self.translations = ([list(map(Fraction, t)) for t in translations]
                             if translations else None)

    @property
    def m(self) -> int:
        return len(self.rows)

    def unimodularity_check(self):
        """ok iff every row subset up to size min(m, n) has all nonzero
        Smith divisors equal to 1 (all intersections connected); otherwise
        returns a failing subset as witness."""
        for size in range(1, min(self.m, self.n) + 1):
            for subset in itertools.combinations(range(self.m), size):
                divisors = snf_divisors([self.rows[i] for i in subset])
                if any(d != 1 for d in divisors):
                    return False, tuple(i + 1 for i in subset)
        return True, None

    def circuits(self) -> list[tuple[int, ...]]:
        """Minimal dependent row subsets (matroid circuits)."""
        out = []
        qrows = [[Fraction(x) for x in r] for r in self.rows]
        for size in range(2, min(self.m, self.n + 1) + 1):
            for subset in itertools.combinations(range(self.m), size):
                sub = [qrows[i] for i in subset]
                if rank(sub) == size:
                    continue
                if any(set(c) < set(subset) for c in out):
                    continue
                out.append(subset)
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, data) -> "EllipticArrangement":
        return cls(data["n"], data["rows"], name=data.get("name", ""))


def _mono_key(mono: Mono, first_e: int):
    es = tuple(i for i in mono if i >= first_e)
    torus = tuple(i for i in mono if i < first_e)
    return (len(es), es, torus)


def _wedge(u: Mono, v: Mono) -> tuple[int, Mono]:
    """Sign and sorted support of the exterior product; sign 0 on repeats."""
    if set(u) & set(v):
        return 0, ()
    merged = list(u) + list(v)
    sign = 1
    arr = merged[:]
    # count inversions of the concatenation
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return sign, tuple(sorted(merged))


class _Element(dict):
    """Sparse exterior-algebra element {monomial: Fraction}."""

    def add_term(self, mono: Mono, coeff: Fraction):
        v = self.get(mono, Fraction(0)) + coeff
        if v:
            self[mono] = v
        else:
            self.pop(mono, None)

    def wedge(self, other: "_Element") -> "_Element":
        out = _Element()
        for u, cu in self.items():
            for v, cv in other.items():
                s, m = _wedge(u, v)
                if s:
                    out.add_term(m, s * cu * cv)
        return out


def bibby_model(A: EllipticArrangement) -> FiniteCdga:
    """The finite CDGA model of the complement of a unimodular elliptic
    arrangement, built degree by degree with exact linear algebra."""
    ok, witness = A.unimodularity_check()
    if not ok:
        raise EllipticArrangementError(
            f"arrangement is not unimodular (witness rows {witness}); "
            "run the unimodularity check")
    n, m = A.n, A.m
    first_e = 2 * n
    g = 2 * n + m
    gen_names = []
    for i in range(n):
        gen_names += [f"a{i + 1}", f"b{i + 1}"]
    gen_names += [f"e{i + 1}" for i in range(m)]

    def fa(i: int) -> _Element:
        out = _Element()
        for j, c in enumerate(A.rows[i]):
            if c:
                out.add_term((2 * j,), Fraction(c))
        return out

    def fb(i: int) -> _Element:
        out = _Element()
        for j, c in enumerate(A.rows[i]):
            if c:
                out.add_term((2 * j + 1,), Fraction(c))
        return out

    def e_elt(i: int) -> _Element:
        out = _Element()
        out.add_term((first_e + i,), Fraction(1))
        return out

    relations: list[_Element] = []
    for i in range(m):
        relations.append(fa(i).wedge(e_elt(i)))
        relations.append(fb(i).wedge(e_elt(i)))
    for circuit in A.circuits():
        boundary = _Element()
        for pos, i in enumerate(circuit):
            boundary.add_term(tuple(first_e + j for j in circuit if j != i),
                              Fraction((-1) ** pos))
        relations.append(boundary)

    key = lambda mono: _mono_key(mono, first_e)

    def reduce_element(elt: _Element, rewrite: dict[Mono, dict[Mono, Fraction]]) -> _Element:
        out = _Element()
        for mono, c in elt.items():
            rule = rewrite.get(mono)
            if rule is None:
                out.add_term(mono, c)
            else:
                for tm, tc in rule.items():
                    out.add_term(tm, c * tc)
        return out

    # degree-by-degree quotient bases and rewrite rules
    kept_by_degree: dict[int, list[Mono]] = {0: [()]}
    rewrite: dict[Mono, dict[Mono, Fraction]] = {}
    top = 0
    for deg in range(1, g + 1):
        span = SparseSpan(key)
        for rel in relations:
            rel_deg = len(next(iter(rel)))
            extra = deg - rel_deg
            if extra < 0:
                continue
            for mono in itertools.combinations(range(g), extra):
                mult = _Element()
                mult.add_term(tuple(mono), Fraction(1))
                prod = rel.wedge(mult)
                if prod:
                    span.add(dict(prod))
        pivot_rules: dict[Mono, dict[Mono, Fraction]] = {}
        for row in span.reduced_rows():
            pivot = max(row, key=key)
            pivot_rules[pivot] = {mn: -c for mn, c in row.items() if mn != pivot}
        rewrite.update(pivot_rules)
        kept = [mono for mono in itertools.combinations(range(g), deg)
                if mono not in pivot_rules]
        kept.sort(key=key)
        if not kept:
            break
        kept_by_degree[deg] = kept
        top = deg

    def mono_name(mono: Mono) -> str:
        if not mono:
            return "1"
        return "".join(gen_names[i] for i in mono)

    degrees = [[mono_name(mn) for mn in kept_by_degree[d]]
               for d in range(top + 1)]
    products = {}
    for d1 in range(1, top + 1):
        for d2 in range(d1, top + 1):
            if d1 + d2 > top:
                continue
            for i1, m1 in enumerate(kept_by_degree[d1]):
                for i2, m2 in enumerate(kept_by_degree[d2]):
                    if d1 == d2 and i2 < i1:
                        continue
                    s, prod = _wedge(m1, m2)
                    terms: dict[str, Fraction] = {}
                    if s:
                        elt = _Element()
                        elt.add_term(prod, Fraction(s))
                        red = reduce_element(elt, rewrite)
                        terms = {mono_name(mn): c for mn, c in red.items()}
                    products[(mono_name(m1), mono_name(m2))] = terms

    # differential: d e_i = f_i*(a) ^ f_i*(b), extended by Leibniz
    de: dict[int, _Element] = {}
    for i in range(m):
        de[first_e + i] = fa(i).wedge(fb(i))
    differential = {}
    for d in range(1, top + 1):
        for mono in kept_by_degree[d]:
            total = _Element()
            for pos, idx in enumerate(mono):
                if idx not in de:
                    continue
                prefix = mono[:pos]
                suffix = mono[pos + 1:]
                sign = (-1) ** pos
                for dm, dc in de[idx].items():
                    s1, m1 = _wedge(prefix, dm)
                    if not s1:
                        continue
                    s2, m2 = _wedge(m1, suffix)
                    if not s2:
                        continue
                    total.add_term(m2, Fraction(sign * s1 * s2) * dc)
            if d + 1 <= top:
                total = reduce_element(total, rewrite)
                terms = {mono_name(mn): c for mn, c in total.items()}
                if terms:
                    differential[mono_name(mono)] = terms

    weights = {}
    for d in range(1, top + 1):
        for mono in kept_by_degree[d]:
            weights[mono_name(mono)] = sum(2 if i >= first_e else 1 for i in mono)
    h1_vars = []
    for i in range(n):
        h1_vars += [f"x{i + 1}", f"y{i + 1}"]

    model = FiniteCdga(degrees, products, differential, weights=weights,
                       h1_var_names=h1_vars, name=A.name or "elliptic")
    if model.betti(1) != 2 * n:
        # extra degree-1 classes (dependent differentials): generic names
        model = FiniteCdga(degrees, products, differential, weights=weights,
                           h1_var_names=None, name=A.name or "elliptic")
    return model


# Frozen boundary matrices of the two-point configuration model on a
# punctured elliptic curve, in the canonical bases above.  The pipeline
# checks the construction against them entry for entry.
CONF2_D2_ROWS = [
    ["-y1", "-x2", "-y2", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["x1", "0", "0", "-x2", "-y2", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "x1", "0", "y1", "0", "-y2", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "x1", "0", "y1", "x2", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["1", "0", "0", "0", "0", "0", "x2", "y2", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "1", "0", "0", "x1", "y1", "0", "0", "0", "0"],
    ["1", "0", "-1", "1", "0", "1", "0", "0", "0", "0", "x1 + x2", "y1 + y2", "0", "0"],
]
CONF2_D1_ROW = ["x1", "y1", "x2", "y2", "0", "0", "0"]
CONF2_DEGREE2_BASIS = [
    "a1b1", "a1a2", "a1b2", "b1a2", "b1b2", "a2b2", "a2e1", "b2e1",
    "a1e2", "b1e2", "a1e3", "b1e3", "e1e2", "e1e3"]


class PipelineMismatch(AssertionError):
    pass


def conf_e_pipeline():
    """Full non-formality pipeline for the two-point configuration space on
    a punctured elliptic curve.  Returns a result dict; raises
    PipelineMismatch if any frozen value fails to reproduce."""
    from .loci import (AffineLocus, CoverCertificate, LinearSubspace,
                       certify_linear_cover, resonance_locus,
                       resonance_of_cohomology)
    from .modules import (fitting_support, homology_presentation,
                          minimize_presentation)
    from .rings import parse_poly, poly_to_string
    from .ideals import Ideal
    from .tcones import TorusLocus, TranslatedTorus, tangent_cone_formula_check

    arrangement = EllipticArrangement(2, [[1, 0], [0, 1], [1, -1]],
                                      name="conf_e_star_2")
    ok, witness = arrangement.unimodularity_check()
    if not ok:
        raise PipelineMismatch(f"unimodularity failed at {witness}")
    model = bibby_model(arrangement)
    violations = model.validate() + model.validate_weights()
    if violations:
        raise PipelineMismatch(f"model validation failed: {violations}")
    if model.basis(2) != CONF2_DEGREE2_BASIS:
        raise PipelineMismatch("degree-2 basis differs from the frozen one")

    chain = model.universal_complex(dual=True)
    d2 = chain.maps[2]
    d1 = chain.maps[1]
    for i, row in enumerate(CONF2_D2_ROWS):
        for j, entry in enumerate(row):
            if poly_to_string(d2.rows[i][j]) != entry:
                raise PipelineMismatch(
                    f"boundary d2 entry ({i + 1},{j + 1}) is "
                    f"{poly_to_string(d2.rows[i][j])!r}, expected {entry!r}")
    for j, entry in enumerate(CONF2_D1_ROW):
        if poly_to_string(d1.rows[0][j]) != entry:
            raise PipelineMismatch(f"boundary d1 entry {j + 1} mismatch")

    pres = homology_presentation(chain, 1)
    phi = minimize_presentation(pres.relations)
    ring = chain.ring
    planes = [
        LinearSubspace.from_equations(4, [[1, 0, 0, 0], [0, 1, 0, 0]]),
        LinearSubspace.from_equations(4, [[0, 0, 1, 0], [0, 0, 0, 1]]),
        LinearSubspace.from_equations(4, [[1, 0, 1, 0], [0, 1, 0, 1]]),
    ]
    support_piece = fitting_support(phi)
    support_cert = certify_linear_cover(AffineLocus(ring, [support_piece]), planes)
    if phi.shape[0] != 3 or not isinstance(support_cert, CoverCertificate):
        raise PipelineMismatch("H_1 presentation does not cut the three planes")

    r_model = resonance_locus(model, 1)
    model_cert = certify_linear_cover(r_model, planes)
    if not isinstance(model_cert, CoverCertificate):
        raise PipelineMismatch("model resonance is not the three planes")
    r_model.decomposition = planes

    r_coh = resonance_of_cohomology(model, 1)
    quad = parse_poly("x1*y2 - x2*y1", r_coh.ring)
    quad_locus = AffineLocus(r_coh.ring, [Ideal(r_coh.ring, [quad])])
    if not r_coh.variety_equals(quad_locus)[0]:
        raise PipelineMismatch("cohomology resonance is not the quadric")
    plane_cover_of_quadric = certify_linear_cover(r_coh, planes)

    tori = TorusLocus(4, [
        TranslatedTorus(4, [[1, 0, 0, 0], [0, 1, 0, 0]]),
        TranslatedTorus(4, [[0, 0, 1, 0], [0, 0, 0, 1]]),
        TranslatedTorus(4, [[1, 0, 1, 0], [0, 1, 0, 1]]),
    ])
    report = tangent_cone_formula_check(tori, r_model, r_coh)
    return {
        "arrangement": arrangement.to_dict(),
        "model_dims": [model.dim(i) for i in range(model.top + 1)],
        "boundary_check": "matched the frozen displays entry for entry",
        "h1_presentation_generators": phi.shape[0],
        "model_resonance": r_model.to_dict(),
        "cohomology_resonance": r_coh.to_dict(),
        "cohomology_resonance_is_quadric": True,
        "quadric_plane_cover": plane_cover_of_quadric.to_dict(),
        "formality": report.to_dict(),
        "verdict": report.verdict,
    }
