"""Exponential and classical tangent cones at the identity of algebraic
subsets of (C*)^n, torsion-translated subtorus bookkeeping, and the
tangent-cone formality tests.

Torsion translations are exact rotation numbers p/q (never floating-point
roots of unity), so the through-1 test is integer arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .ideals import Ideal, tangent_cone_ideal
from .linalg import rank, snf_divisors
from .loci import AffineLocus, LinearSubspace, prune_subspaces
from .rings import LaurentPoly, MultiPoly, PolyRing, poly_to_string

DEFAULT_PARTITION_BOUND = 12


class PartitionBoundError(ValueError):
    pass


class TranslatedTorus:
    """Subtorus {t : prod_j t_j^{m_rj} = 1 for each row m_r}, translated by
    the root-of-unity tuple exp(2 pi i rotations)."""

    def __init__(self, n: int, rows: Sequence[Sequence[int]],
                 rotations: Sequence[Fraction] | None = None):
        self.n = n
        rows = [list(map(int, r)) for r in rows]
        for r in rows:
            if len(r) != n:
                raise ValueError("equation row arity mismatch")
        rows = [r for r in rows if any(r)]
        divisors = snf_divisors(rows) if rows else []
        if any(d != 1 for d in divisors):
            raise ValueError(
                f"equation lattice is not primitive (divisors {divisors}); "
                "the solution set would be disconnected")
        self.rows = [list(r) for r in rows]
        rot = [Fraction(x) % 1 for x in (rotations or [0] * n)]
        if len(rot) != n:
            raise ValueError("rotation arity mismatch")
        self.rotations = rot

    def passes_through_identity(self) -> bool:
        return all(sum(m * r for m, r in zip(row, self.rotations)) % 1 == 0
                   for row in self.rows)

    def tangent_space(self) -> LinearSubspace:
        return LinearSubspace.from_equations(
            self.n, [[Fraction(x) for x in row] for row in self.rows])

    def dim(self) -> int:
        return self.n - (rank([[Fraction(x) for x in r] for r in self.rows])
                         if self.rows else 0)

    def contains_torus(self, other: "TranslatedTorus") -> bool:
        """Exact containment other subseteq self."""
        if self.n != other.n:
            return False
        # direction part: every equation of self must be a Q-combination of
        # other's equations, so the connected directions of other obey it
        others = [[Fraction(x) for x in r] for r in other.rows]
        base = rank(others) if others else 0
        for row in self.rows:
            qrow = [Fraction(x) for x in row]
            if others:
                if rank(others + [qrow]) != base:
                    return False
            elif any(qrow):
                return False
        # translation part: self's equations hold at other's translation point
        for row in self.rows:
            val = sum(m * (ro - rs) for m, ro, rs in
                      zip(row, other.rotations, self.rotations))
            if val % 1 != 0:
                return False
        return True

    def contains_point(self, rotations: Sequence[Fraction]) -> bool:
        """Membership of the torsion point exp(2 pi i rotations)."""
        return all(
            sum(m * (Fraction(r) - s) for m, r, s in
                zip(row, rotations, self.rotations)) % 1 == 0
            for row in self.rows)

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows],
                "rotations": [str(r) for r in self.rotations]}

    @classmethod
    def from_dict(cls, n: int, data) -> "TranslatedTorus":
        return cls(n, data["rows"],
                   [Fraction(r) for r in data.get("rotations", ["0"] * n)])

    def __repr__(self) -> str:
        return f"TranslatedTorus(dim {self.dim()} in (C*)^{self.n})"


class TorusLocus:
    """Finite union of torsion-translated subtori plus finitely many
    torsion points; redundant components are pruned on construction."""

    def __init__(self, n: int, tori: Iterable[TranslatedTorus] = (),
                 points: Iterable[Sequence[Fraction]] = ()):
        self.n = n
        tori = list(tori)
        for t in tori:
            if t.n != n:
                raise ValueError("torus arity mismatch")
        kept: list[TranslatedTorus] = []
        for i, t in enumerate(tori):
            redundant = any(
                i != j and u.contains_torus(t) and
                not (t.contains_torus(u) and j > i)
                for j, u in enumerate(tori))
            if not redundant:
                kept.append(t)
        self.tori = kept
        pts = [[Fraction(x) % 1 for x in p] for p in points]
        self.points = [p for p in pts
                       if not any(t.contains_point(p) for t in self.tori)]

    def components_through_identity(self) -> list[TranslatedTorus]:
        return [t for t in self.tori if t.passes_through_identity()]

    def identity_member(self) -> bool:
        return (any(t.passes_through_identity() for t in self.tori)
                or any(all(x % 1 == 0 for x in p) for p in self.points))

    def to_dict(self) -> dict:
        return {"n": self.n,
                "tori": [t.to_dict() for t in self.tori],
                "points": [[str(x) for x in p] for p in self.points]}

    @classmethod
    def from_dict(cls, data) -> "TorusLocus":
        n = data["n"]
        tori = [TranslatedTorus.from_dict(n, t) for t in data.get("tori", [])]
        points = [[Fraction(x) for x in p] for p in data.get("points", [])]
        return cls(n, tori, points)


# --- exponential tangent cones ----------------------------------------------

def _zero_sum_partitions(coeffs: list[Fraction]):
    """Set partitions of range(len(coeffs)) whose block coefficient sums all
    vanish.  Prunes branches where open nonzero blocks outnumber the
    remaining elements."""
    n = len(coeffs)
    blocks: list[tuple[list[int], Fraction]] = []
    out: list[list[list[int]]] = []

    def rec(i: int):
        if i == n:
            if all(s == 0 for _, s in blocks):
                out.append([list(ix) for ix, _ in blocks])
            return
        open_nonzero = sum(1 for _, s in blocks if s != 0)
        if open_nonzero > n - i:
            return
        for b in range(len(blocks)):
            ix, s = blocks[b]
            blocks[b] = (ix + [i], s + coeffs[i])
            rec(i + 1)
            blocks[b] = (ix, s)
        blocks.append(([i], coeffs[i]))
        rec(i + 1)
        blocks.pop()

    rec(0)
    return out


def exp_tcone_hypersurface(f: LaurentPoly,
                           bound: int = DEFAULT_PARTITION_BOUND) -> list[LinearSubspace]:
    """tau_1 of the hypersurface V(f) in (C*)^n: z lies in it iff the
    grouping of supp(f) by equal values <m, z> has all coefficient-block
    sums zero, so enumerate zero-sum partitions of the support."""
    if f.is_zero():
        raise ValueError("tau_1 of the zero polynomial is not defined")
    support = f.support()
    if len(support) > bound:
        raise PartitionBoundError(
            f"support size {len(support)} exceeds the partition bound {bound}")
    coeffs = [f.terms[m] for m in support]
    n = f.ring.n
    spaces = []
    for partition in _zero_sum_partitions(coeffs):
        eqs = []
        for block in partition:
            first = support[block[0]]
            for k in block[1:]:
                eqs.append([Fraction(a - b) for a, b in zip(support[k], first)])
        spaces.append(LinearSubspace.from_equations(n, eqs))
    return prune_subspaces(spaces)


def exp_tcone_tori(L: TorusLocus) -> list[LinearSubspace]:
    """tau_1 of a finite union of translated tori: rational tangent spaces
    of the components through 1 (tau_1 commutes with finite unions)."""
    spaces = [t.tangent_space() for t in L.components_through_identity()]
    for p in L.points:
        if all(x % 1 == 0 for x in p):
            spaces.append(LinearSubspace.from_point([Fraction(0)] * L.n))
    return prune_subspaces(spaces)


# --- classical tangent cones --------------------------------------------------

def _cone_ring(n: int) -> PolyRing:
    return PolyRing([f"z{j + 1}" for j in range(n)])


def classical_tcone_tori(L: TorusLocus, ring: PolyRing | None = None) -> AffineLocus:
    """TC_1 of a torus union: tangent spaces of the components through 1
    (exact; TC_1 commutes with finite unions)."""
    ring = ring or _cone_ring(L.n)
    spaces = [t.tangent_space() for t in L.components_through_identity()]
    for p in L.points:
        if all(x % 1 == 0 for x in p):
            spaces.append(LinearSubspace.from_point([Fraction(0)] * L.n))
    return AffineLocus.from_subspaces(ring, prune_subspaces(spaces))


def classical_tcone_laurent(gens: Sequence[LaurentPoly],
                            ring: PolyRing | None = None) -> AffineLocus:
    """TC_1 of V(gens): clear monomial denominators, substitute t -> z + 1,
    take the initial-form ideal at 0.  Exact for principal ideals; for
    several generators this is the cone of the presented generators."""
    if not gens:
        if ring is None:
            raise ValueError("ambient ring required for the zero ideal")
        return AffineLocus(ring, [Ideal.zero(ring)])
    n = gens[0].ring.n
    ring = ring or _cone_ring(n)
    polys = []
    for g in gens:
        cleared = g.monomial_clear()
        shifted = MultiPoly(ring, dict(cleared.terms)).translate([Fraction(1)] * n)
        polys.append(shifted)
    cone = tangent_cone_ideal(Ideal(ring, polys), [Fraction(0)] * n)
    if cone.is_unit():
        return AffineLocus.empty(ring)
    return AffineLocus(ring, [cone])


# --- the tangent cone formula -------------------------------------------------

class FormalityReport:
    def __init__(self, verdict: str, checks: dict, certificate: str | None,
                 tau: list[LinearSubspace], tc: AffineLocus):
        self.verdict = verdict
        self.checks = checks
        self.certificate = certificate
        self.tau = tau
        self.tc = tc

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "checks": dict(self.checks),
            "certificate": self.certificate,
            "tau1": [s.to_dict() for s in self.tau],
            "tc1": self.tc.to_dict(),
        }


def tangent_cone_formula_check(V: TorusLocus, R_model: AffineLocus | None,
                               R_cohomology: AffineLocus) -> FormalityReport:
    """Run the tangent-cone chain tau_1(V) in TC_1(V) in R^1 of the
    cohomology ring; any strict inclusion certifies non-formality.  When a
    model resonance locus is supplied the equalities tau_1 = TC_1 = R(model)
    are verified as consistency checks."""
    if R_cohomology.n != V.n or (R_model is not None and R_model.n != V.n):
        raise ValueError("ambient dimension mismatch")
    ring = R_cohomology.ring
    tau = exp_tcone_tori(V)
    tc = classical_tcone_tori(V, ring)
    tau_locus = AffineLocus.from_subspaces(ring, tau)
    checks: dict[str, bool] = {}
    checks["tau_subset_tc"] = tau_locus.is_variety_subset_of(tc)[0]
    checks["tc_subset_cohomology_resonance"] = \
        tc.is_variety_subset_of(R_cohomology)[0]
    if R_model is not None:
        checks["tau_equals_model_resonance"] = \
            tau_locus.variety_equals(R_model)[0]
        checks["tc_equals_model_resonance"] = tc.variety_equals(R_model)[0]
    back, witness = R_cohomology.is_variety_subset_of(tc)
    checks["cohomology_resonance_subset_tc"] = back
    if not checks["tau_subset_tc"] or not checks["tc_subset_cohomology_resonance"]:
        verdict = "INCONSISTENT-INPUT"
        certificate = ("the chain tau_1 in TC_1 in R^1(cohomology) fails; "
                       "the supplied loci cannot come from one space")
    elif back:
        verdict = "CONSISTENT-WITH-FORMALITY"
        certificate = None
    else:
        verdict = "NON-FORMAL"
        piece, gen = witness
        certificate = (
            "strict inclusion TC_1(V) < R^1(cohomology): generator "
            f"{poly_to_string(gen)} of the tangent-cone product ideal does "
            f"not vanish on the resonance piece {[poly_to_string(g) for g in piece.gens]}")
    return FormalityReport(verdict, checks, certificate, tau, tc)


# --- rationality of quadrics ---------------------------------------------------

def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return (isqrt(x.numerator) ** 2 == x.numerator
            and isqrt(x.denominator) ** 2 == x.denominator)


def rational_quadric_test(q: MultiPoly) -> str:
    """Decide whether a homogeneous quadratic form in <= 4 variables splits
    into rational linear factors: 'splits-over-Q', 'irreducible-over-Q', or
    'inconclusive' (rank >= 3)."""
    if q.is_zero() or not q.is_homogeneous() or q.total_degree() != 2:
        raise ValueError("input must be a nonzero homogeneous quadratic form")
    n = q.ring.n
    if n > 4:
        raise ValueError("quadric test limited to at most 4 variables")
    G = [[Fraction(0)] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [j for j, x in enumerate(e) for _ in range(x)]
        i, j = idx[0], idx[1]
        if i == j:
            G[i][i] += c
        else:
            G[i][j] += c / 2
            G[j][i] += c / 2
    # congruent diagonalization
    M = [row[:] for row in G]
    diag = []
    live = list(range(n))
    while live:
        pivot = next((i for i in live if M[i][i]), None)
        if pivot is None:
            pair = next(((i, j) for i in live for j in live
                         if i != j and M[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                M[i][k] += M[j][k]
            for k in range(n):
                M[k][i] += M[k][j]
            pivot = i
        live.remove(pivot)
        d = M[pivot][pivot]
        diag.append(d)
        for i in live:
            f = M[i][pivot] / d
            for k in range(n):
                M[i][k] -= f * M[pivot][k]
            for k in range(n):
                M[k][i] -= f * M[k][pivot]
    diag = [d for d in diag if d]
    r = len(diag)
    if r == 1:
        return "splits-over-Q"
    if r == 2:
        return ("splits-over-Q" if _is_rational_square(-diag[1] / diag[0])
                else "irreducible-over-Q")
    return "inconclusive"
