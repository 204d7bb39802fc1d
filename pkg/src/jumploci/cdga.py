"""Finite-dimensional connected CDGAs over Q.

A FiniteCdga is a basis-indexed graded algebra: named basis per degree,
structure constants for products of basis pairs, differential matrices,
and an optional positive-weight decoration.  Validation, cohomology,
Aomoto complexes, the universal complex over S = Q[x1..xn] and tensor
products all live here.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import (kernel_basis, matmul, rank, row_space_basis, rref,
                     solve, transpose)
from .ideals import PolyMatrix
from .modules import PolyComplex
from .rings import MultiPoly, PolyRing

Vector = list[Fraction]


class CdgaError(ValueError):
    pass


class FiniteCdga:
    """Connected CDGA with a named basis in each degree.

    products maps an *ordered* basis-name pair to a coefficient dict on the
    basis of the target degree; pairs not stored are filled by graded
    commutativity, products with the unit are implicit, and pairs landing
    above the top degree are zero.
    """

    def __init__(self, degrees: Sequence[Sequence[str]],
                 products: Mapping[tuple[str, str], Mapping[str, Fraction]],
                 differential: Mapping[str, Mapping[str, Fraction]],
                 weights: Mapping[str, int] | None = None,
                 h1_var_names: Sequence[str] | None = None,
                 name: str = ""):
        self.degrees = [list(names) for names in degrees]
        if not self.degrees or len(self.degrees[0]) != 1:
            raise CdgaError("degree 0 must consist of exactly the unit")
        all_names = [nm for layer in self.degrees for nm in layer]
        if len(set(all_names)) != len(all_names):
            raise CdgaError("duplicate basis names")
        self.degree_of = {nm: d for d, layer in enumerate(self.degrees)
                          for nm in layer}
        self.index_of = {nm: i for layer in self.degrees
                         for i, nm in enumerate(layer)}
        self.top = len(self.degrees) - 1
        self.unit = self.degrees[0][0]
        self.name = name
        self.weights = dict(weights) if weights else None
        self.h1_var_names = list(h1_var_names) if h1_var_names else None

        self._products: dict[tuple[str, str], dict[str, Fraction]] = {}
        for (u, v), terms in products.items():
            self._check_name(u), self._check_name(v)
            target = self.degree_of[u] + self.degree_of[v]
            clean = {}
            for w, c in terms.items():
                self._check_name(w)
                if self.degree_of[w] != target:
                    raise CdgaError(f"product {u}*{v} has term {w} of wrong degree")
                c = Fraction(c)
                if c:
                    clean[w] = c
            self._products[(u, v)] = clean
        self._differential: dict[str, dict[str, Fraction]] = {}
        for u, terms in differential.items():
            self._check_name(u)
            clean = {}
            for w, c in terms.items():
                self._check_name(w)
                if self.degree_of[w] != self.degree_of[u] + 1:
                    raise CdgaError(f"d({u}) has term {w} not of degree +1")
                c = Fraction(c)
                if c:
                    clean[w] = c
            if clean:
                self._differential[u] = clean
        self._rep_cache: dict[int, list[Vector]] = {}

    def _check_name(self, nm: str):
        if nm not in self.degree_of:
            raise CdgaError(f"unknown basis element {nm!r}")

    # -- basic access --
    def dim(self, i: int) -> int:
        if 0 <= i <= self.top:
            return len(self.degrees[i])
        return 0

    def basis(self, i: int) -> list[str]:
        return list(self.degrees[i]) if 0 <= i <= self.top else []

    def zero_vector(self, i: int) -> Vector:
        return [Fraction(0)] * self.dim(i)

    def basis_product(self, u: str, v: str) -> dict[str, Fraction]:
        """Structure constants of u*v, applying unit rules and graded
        commutativity for unstored pairs."""
        du, dv = self.degree_of[u], self.degree_of[v]
        if u == self.unit:
            return {v: Fraction(1)}
        if v == self.unit:
            return {u: Fraction(1)}
        if du + dv > self.top:
            return {}
        if (u, v) in self._products:
            return self._products[(u, v)]
        if (v, u) in self._products:
            sign = Fraction(-1 if (du * dv) % 2 else 1)
            return {w: sign * c for w, c in self._products[(v, u)].items()}
        if u == v and du % 2 == 1:
            return {}
        return {}

    def multiply(self, i: int, uvec: Sequence[Fraction], j: int,
                 vvec: Sequence[Fraction]) -> Vector:
        """Bilinear product A^i x A^j -> A^(i+j) in basis coordinates."""
        out = self.zero_vector(i + j)
        if i + j > self.top:
            return out
        for a, ca in enumerate(uvec):
            if not ca:
                continue
            u = self.degrees[i][a]
            for b, cb in enumerate(vvec):
                if not cb:
                    continue
                v = self.degrees[j][b]
                for w, c in self.basis_product(u, v).items():
                    out[self.index_of[w]] += ca * cb * c
        return out

    def d_of_basis(self, u: str) -> dict[str, Fraction]:
        return self._differential.get(u, {})

    def d_matrix(self, i: int) -> list[Vector]:
        """Matrix of d: A^i -> A^(i+1), columns indexed by the A^i basis."""
        rows = [[Fraction(0)] * self.dim(i) for _ in range(self.dim(i + 1))]
        for col, u in enumerate(self.basis(i)):
            for w, c in self.d_of_basis(u).items():
                rows[self.index_of[w]][col] = c
        return rows

    def apply_d(self, i: int, vec: Sequence[Fraction]) -> Vector:
        out = self.zero_vector(i + 1)
        for col, c in enumerate(vec):
            if not c:
                continue
            for w, cw in self.d_of_basis(self.degrees[i][col]).items():
                out[self.index_of[w]] += c * cw
        return out

    # -- validation --
    def validate(self) -> list[str]:
        """All CDGA identities on basis elements; returns violations."""
        bad: list[str] = []
        if self.dim(0) != 1:
            bad.append("A^0 is not one-dimensional")
        if self.d_of_basis(self.unit):
            bad.append("d(1) != 0")
        names = [(nm, d) for d, layer in enumerate(self.degrees) for nm in layer]
        # stored products of the unit must be trivial, degrees already checked
        for (u, v), terms in self._products.items():
            du, dv = self.degree_of[u], self.degree_of[v]
            if (v, u) in self._products or (u == v and du % 2 == 1 and terms):
                uv = self._products[(u, v)]
                vu = self._products.get((v, u), {})
                sign = -1 if (du * dv) % 2 else 1
                if u == v and du % 2 == 1:
                    vu = uv
                mismatch = _dict_axpy(uv, vu, -Fraction(sign))
                if mismatch:
                    bad.append(f"graded commutativity fails on ({u}, {v})")
        # Leibniz on all basis pairs
        for u, du in names:
            if du == 0:
                continue
            for v, dv in names:
                if dv == 0 or du + dv + 1 > self.top + 1:
                    continue
                uv = self.basis_product(u, v)
                lhs = self.zero_vector(du + dv + 1)
                for w, c in uv.items():
                    for t, ct in self.d_of_basis(w).items():
                        lhs[self.index_of[t]] += c * ct
                rhs = self.zero_vector(du + dv + 1)
                for w, c in self.d_of_basis(u).items():
                    for t, ct in self.basis_product(w, v).items():
                        rhs[self.index_of[t]] += c * ct
                sign = -1 if du % 2 else 1
                for w, c in self.d_of_basis(v).items():
                    for t, ct in self.basis_product(u, w).items():
                        rhs[self.index_of[t]] += sign * c * ct
                if lhs != rhs:
                    bad.append(f"Leibniz fails on ({u}, {v})")
        # d o d = 0
        for u, du in names:
            out = self.zero_vector(du + 2)
            for w, c in self.d_of_basis(u).items():
                for t, ct in self.d_of_basis(w).items():
                    out[self.index_of[t]] += c * ct
            if any(out):
                bad.append(f"d^2 != 0 on {u}")
        return bad

    def validate_weights(self) -> list[str]:
        """Positive weights in degree 1, additive under products, preserved
        by the differential."""
        if self.weights is None:
            raise CdgaError("no weight decoration present")
        bad: list[str] = []
        wt = dict(self.weights)
        wt.setdefault(self.unit, 0)
        for d, layer in enumerate(self.degrees):
            for nm in layer:
                if nm not in wt:
                    bad.append(f"missing weight for {nm}")
        if bad:
            return bad
        for nm in self.degrees[1] if self.top >= 1 else []:
            if wt[nm] <= 0:
                bad.append(f"non-positive degree-1 weight on {nm}")
        for (u, v) in list(self._products):
            target = wt[u] + wt[v]
            for w, c in self._products[(u, v)].items():
                if wt[w] != target:
                    bad.append(f"product {u}*{v} not weight-homogeneous")
                    break
        for u, terms in self._differential.items():
            for w in terms:
                if wt[w] != wt[u]:
                    bad.append(f"d({u}) changes weight")
                    break
        return bad

    # -- cohomology --
    def cocycles(self, i: int) -> list[Vector]:
        """Canonical kernel basis of d^i (RREF convention)."""
        if self.dim(i) == 0:
            return []
        mat = self.d_matrix(i)
        if not mat:
            return [[Fraction(int(a == b)) for a in range(self.dim(i))]
                    for b in range(self.dim(i))]
        return kernel_basis(mat, self.dim(i))

    def coboundaries(self, i: int) -> list[Vector]:
        if i == 0 or self.dim(i) == 0:
            return []
        cols = self.d_matrix(i - 1)
        vecs = transpose(cols)
        return [v for v in row_space_basis(vecs)] if vecs else []

    def cohomology(self, i: int) -> tuple[int, list[Vector]]:
        """Betti number and representative cocycles (deterministic: first
        kernel-basis vectors extending the coboundary space)."""
        if i in self._rep_cache:
            reps = self._rep_cache[i]
            return len(reps), [list(v) for v in reps]
        if i > self.top or i < 0:
            return 0, []
        Z = self.cocycles(i)
        B = self.coboundaries(i)
        reps: list[Vector] = []
        current = [list(b) for b in B]
        r = rank(current) if current else 0
        for z in Z:
            if rank(current + [list(z)]) > r:
                reps.append(list(z))
                current.append(list(z))
                r += 1
        self._rep_cache[i] = [list(v) for v in reps]
        return len(reps), reps

    def betti(self, i: int) -> int:
        return self.cohomology(i)[0]

    def h1_basis(self) -> list[Vector]:
        return self.cohomology(1)[1]

    def h1_ring(self) -> PolyRing:
        n = self.betti(1)
        names = self.h1_var_names or [f"x{j + 1}" for j in range(n)]
        if len(names) != n:
            raise CdgaError("h1 variable names do not match dim H^1")
        return PolyRing(names)

    # -- Aomoto complexes --
    def aomoto(self, a: Sequence[Fraction]) -> "CochainComplexQ":
        """(A, delta_a) with delta(u) = a.u + du, for a cocycle a in A^1."""
        a = [Fraction(x) for x in a]
        if len(a) != self.dim(1):
            raise CdgaError("Aomoto parameter must lie in A^1")
        if any(self.apply_d(1, a)):
            raise CdgaError("Aomoto parameter is not a cocycle")
        mats = {}
        for i in range(self.top):
            ni, nj = self.dim(i), self.dim(i + 1)
            rows = [[Fraction(0)] * ni for _ in range(nj)]
            for col in range(ni):
                unit_col = [Fraction(int(t == col)) for t in range(ni)]
                img = self.multiply(1, a, i, unit_col)
                dd = self.apply_d(i, unit_col)
                for rix in range(nj):
                    rows[rix][col] = img[rix] + dd[rix]
            mats[i] = rows
        return CochainComplexQ([self.dim(i) for i in range(self.top + 1)], mats)

    def universal_complex(self, dual: bool = False) -> PolyComplex:
        """A tensor S with delta(u (x) s) = sum_j e_j.u (x) s x_j + du (x) s.
        With dual=True, the transposed chain complex of A_* (x) S."""
        ring = self.h1_ring()
        reps = self.h1_basis()
        mats: dict[int, PolyMatrix] = {}
        for i in range(self.top):
            ni, nj = self.dim(i), self.dim(i + 1)
            if ni == 0 or nj == 0:
                continue
            cols: list[list[MultiPoly]] = []
            for col in range(ni):
                unit_col = [Fraction(int(t == col)) for t in range(ni)]
                entries = [dict() for _ in range(nj)]
                for j, rep in enumerate(reps):
                    img = self.multiply(1, rep, i, unit_col)
                    exp = [0] * ring.n
                    exp[j] = 1
                    for rix, c in enumerate(img):
                        if c:
                            entries[rix][tuple(exp)] = entries[rix].get(tuple(exp), Fraction(0)) + c
                dd = self.apply_d(i, unit_col)
                zero_exp = ring.zero_exp()
                for rix, c in enumerate(dd):
                    if c:
                        entries[rix][zero_exp] = entries[rix].get(zero_exp, Fraction(0)) + c
                cols.append([MultiPoly(ring, e) for e in entries])
            mats[i] = PolyMatrix(ring, [[cols[c][r] for c in range(ni)]
                                        for r in range(nj)])
        ranks = [self.dim(i) for i in range(self.top + 1)]
        cochain = PolyComplex(ring, ranks, mats, "cochain")
        return cochain.dual() if dual else cochain

    # -- derived algebras --
    def cohomology_algebra(self) -> "FiniteCdga":
        """H*(A) with zero differential, on the canonical representatives."""
        reps = {i: self.cohomology(i)[1] for i in range(self.top + 1)}
        degrees = [[f"h{i}_{k}" for k in range(len(reps[i]))]
                   for i in range(self.top + 1)]
        top_unit = degrees[0]
        if not top_unit:
            raise CdgaError("H^0 vanished; algebra not connected")
        degrees[0] = ["1H"]
        products: dict[tuple[str, str], dict[str, Fraction]] = {}
        for i in range(1, self.top + 1):
            for j in range(i, self.top + 1 - i):
                for a, u in enumerate(reps[i]):
                    for b, v in enumerate(reps[j]):
                        if i == j and b < a:
                            continue
                        w = self.multiply(i, u, j, v)
                        coords = self._class_coordinates(i + j, w, reps[i + j])
                        terms = {f"h{i + j}_{k}": c for k, c in enumerate(coords) if c}
                        products[(f"h{i}_{a}", f"h{j}_{b}")] = terms
        while len(degrees) > 1 and not degrees[-1]:
            degrees.pop()
        hname = self.name + ".H" if self.name else "H"
        out = FiniteCdga(degrees, products, {}, weights=None,
                         h1_var_names=self.h1_var_names, name=hname)
        return out

    def _class_coordinates(self, deg: int, vec: Vector, reps: list[Vector]) -> Vector:
        if deg > self.top or not any(vec):
            return [Fraction(0)] * len(reps)
        B = self.coboundaries(deg)
        cols = [list(r) for r in reps] + [list(b) for b in B]
        mat = transpose(cols)
        sol = solve(mat, list(vec))
        if sol is None:
            raise CdgaError("product of cocycles is not a cocycle class")
        return sol[:len(reps)]

    def tensor(self, other: "FiniteCdga") -> "FiniteCdga":
        """Tensor product CDGA with Koszul signs."""
        top = self.top + other.top
        pair_name = lambda u, v: f"{u}.{v}"
        degrees: list[list[str]] = [[] for _ in range(top + 1)]
        pairs: dict[str, tuple[str, str, int, int]] = {}
        for i in range(self.top + 1):
            for j in range(other.top + 1):
                for u in self.degrees[i]:
                    for v in other.degrees[j]:
                        nm = pair_name(u, v)
                        degrees[i + j].append(nm)
                        pairs[nm] = (u, v, i, j)
        products: dict[tuple[str, str], dict[str, Fraction]] = {}
        names_ordered = [nm for layer in degrees for nm in layer]
        pos = {nm: t for t, nm in enumerate(names_ordered)}
        for nm1 in names_ordered:
            u1, v1, i1, j1 = pairs[nm1]
            for nm2 in names_ordered:
                if pos[nm2] < pos[nm1]:
                    continue
                u2, v2, i2, j2 = pairs[nm2]
                if i1 + j1 == 0 or i2 + j2 == 0:
                    continue
                if i1 + j1 + i2 + j2 > top:
                    continue
                sign = Fraction(-1 if (j1 * i2) % 2 else 1)
                uu = self.basis_product(u1, u2)
                vv = other.basis_product(v1, v2)
                terms: dict[str, Fraction] = {}
                for w1, c1 in uu.items():
                    for w2, c2 in vv.items():
                        terms[pair_name(w1, w2)] = terms.get(pair_name(w1, w2), Fraction(0)) + sign * c1 * c2
                products[(nm1, nm2)] = {k: v for k, v in terms.items() if v}
        differential: dict[str, dict[str, Fraction]] = {}
        for nm, (u, v, i, j) in pairs.items():
            terms: dict[str, Fraction] = {}
            for w, c in self.d_of_basis(u).items():
                terms[pair_name(w, v)] = terms.get(pair_name(w, v), Fraction(0)) + c
            sign = Fraction(-1 if i % 2 else 1)
            for w, c in other.d_of_basis(v).items():
                terms[pair_name(u, w)] = terms.get(pair_name(u, w), Fraction(0)) + sign * c
            terms = {k: v for k, v in terms.items() if v}
            if terms:
                differential[nm] = terms
        weights = None
        if self.weights is not None and other.weights is not None:
            wt1 = dict(self.weights)
            wt1.setdefault(self.unit, 0)
            wt2 = dict(other.weights)
            wt2.setdefault(other.unit, 0)
            weights = {nm: wt1[u] + wt2[v] for nm, (u, v, _, _) in pairs.items()}
        tname = f"{self.name}(x){other.name}" if self.name and other.name else ""
        return FiniteCdga(degrees, products, differential, weights=weights,
                          name=tname)

    # -- serialization --
    def to_dict(self) -> dict:
        products = []
        for (u, v), terms in sorted(self._products.items()):
            products.append([u, v, sorted((w, str(c)) for w, c in terms.items())])
        differential = []
        for u, terms in sorted(self._differential.items()):
            differential.append([u, sorted((w, str(c)) for w, c in terms.items())])
        out = {
            "schema": 1,
            "degrees": [list(layer) for layer in self.degrees],
            "products": products,
            "differential": differential,
        }
        if self.weights is not None:
            out["weights"] = dict(sorted(self.weights.items()))
        if self.h1_var_names is not None:
            out["h1_vars"] = list(self.h1_var_names)
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteCdga":
        products = {}
        for u, v, terms in data.get("products", []):
            products[(u, v)] = {w: Fraction(c) for w, c in terms}
        differential = {}
        for u, terms in data.get("differential", []):
            differential[u] = {w: Fraction(c) for w, c in terms}
        return cls(data["degrees"], products, differential,
                   weights=data.get("weights"),
                   h1_var_names=data.get("h1_vars"),
                   name=data.get("name", ""))


def _dict_axpy(a: Mapping[str, Fraction], b: Mapping[str, Fraction],
               coeff: Fraction) -> dict[str, Fraction]:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Fraction(0)) + coeff * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class CochainComplexQ:
    """Finite complex of Q-vector spaces with explicit matrices
    delta^i: position i -> i+1."""

    def __init__(self, ranks: Sequence[int], mats: Mapping[int, list[list[Fraction]]]):
        self.ranks = list(ranks)
        self.mats = {i: [list(r) for r in m] for i, m in mats.items()}

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def matrix(self, i: int) -> list[list[Fraction]]:
        if i in self.mats:
            return self.mats[i]
        return [[Fraction(0)] * self.rank(i) for _ in range(self.rank(i + 1))]

    def check_complex(self) -> bool:
        for i in sorted(self.mats):
            if i + 1 in self.mats and self.mats[i] and self.mats[i + 1]:
                prod = matmul(self.mats[i + 1], self.mats[i])
                if any(any(x for x in row) for row in prod):
                    return False
        return True

    def betti(self, i: int) -> int:
        ni = self.rank(i)
        if ni == 0:
            return 0
        out = self.matrix(i)
        rk_out = rank(out) if out else 0
        inc = self.matrix(i - 1) if i > 0 else []
        rk_in = rank(inc) if inc else 0
        return ni - rk_out - rk_in

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * r for i, r in enumerate(self.ranks))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CochainComplexQ):
            return NotImplemented
        if self.ranks != other.ranks:
            return False
        keys = set(self.mats) | set(other.mats)
        return all(self.matrix(i) == other.matrix(i) for i in keys)


def specialize(C: PolyComplex, point: Sequence[Fraction]) -> CochainComplexQ:
    """Evaluate a universal complex at a rational point of H^1."""
    pt = [Fraction(x) for x in point]
    if len(pt) != C.ring.n:
        raise ValueError("point dimension does not match the ring")
    mats = {}
    if C.direction == "cochain":
        for i, M in C.maps.items():
            mats[i] = M.evaluate(pt)
        return CochainComplexQ(list(C.ranks), mats)
    # chain complex: transpose the evaluated maps back into cochain form
    for i, M in C.maps.items():
        mats[i - 1] = transpose(M.evaluate(pt))
    return CochainComplexQ(list(C.ranks), mats)
