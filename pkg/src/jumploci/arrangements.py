"""Hyperplane arrangements: rank-2 intersection data, the Orlik-Solomon
algebra through degree 2, local and 3-net resonance components, and the
certified decomposition of R^1.

Forms are exact: rational, or elements of Q(w) with w a primitive cube
root of unity for reflection arrangements like G(3,3,3) (only the
combinatorial operations accept the extension field; the OS algebra and
resonance require rational forms).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cdga import FiniteCdga
from .ideals import Ideal
from .linalg import rank, row_space_basis
from .loci import (AffineLocus, CoverCertificate, CoverRefutation,
                   LinearSubspace, certify_linear_cover, prune_subspaces)


class Cyclo3:
    """Element a + b*w of Q(w), w^2 + w + 1 = 0.  Just enough field
    arithmetic for exact rank computations."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __add__(self, other):
        other = _cy(other)
        return Cyclo3(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo3(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_cy(other))

    def __rsub__(self, other):
        return _cy(other) + (-self)

    def __mul__(self, other):
        other = _cy(other)
        # (a1 + b1 w)(a2 + b2 w), w^2 = -1 - w
        a = self.a * other.a - self.b * other.b
        b = self.a * other.b + self.b * other.a - self.b * other.b
        return Cyclo3(a, b)

    __rmul__ = __mul__

    def conj_norm(self) -> Fraction:
        # N(a + bw) = a^2 - ab + b^2
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "Cyclo3":
        n = self.conj_norm()
        if not n:
            raise ZeroDivisionError("zero in Q(w)")
        # (a + bw)^-1 = (a - b - bw) / N
        return Cyclo3((self.a - self.b) / n, -self.b / n)

    def __truediv__(self, other):
        return self * _cy(other).inverse()

    def __rtruediv__(self, other):
        return _cy(other) * self.inverse()

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        other = _cy(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Cyclo3({self.a}, {self.b})"


def _cy(x) -> Cyclo3:
    return x if isinstance(x, Cyclo3) else Cyclo3(x)


@dataclass(frozen=True)
class Rank2Flat:
    hyperplanes: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.hyperplanes)


class HyperplaneArrangement:
    """Central arrangement given by pairwise non-proportional linear forms.
    Affine input (forms with constants) is coned by one extra coordinate."""

    def __init__(self, dim: int, forms: Sequence[Sequence], labels: Sequence[str] | None = None,
                 name: str = ""):
        self.dim = dim
        self.forms = [list(f) for f in forms]
        self.name = name
        for f in self.forms:
            if len(f) != dim:
                raise ValueError("form arity mismatch")
            if not any(f):
                raise ValueError("zero form")
        for i in range(len(self.forms)):
            for j in range(i + 1, len(self.forms)):
                if rank([self.forms[i], self.forms[j]]) < 2:
                    raise ValueError(f"forms {i + 1} and {j + 1} are proportional")
        self.labels = list(labels) if labels else [str(i + 1) for i in range(len(self.forms))]

    @classmethod
    def from_affine(cls, dim: int, rows: Sequence[Sequence[Fraction]],
                    labels: Sequence[str] | None = None, **kw):
        """Rows are [c0, c1..cdim] meaning c0 + sum c_j x_j = 0.  Coning
        homogenizes with a new first coordinate and appends the hyperplane
        at infinity, so the complement picks up the usual C* factor."""
        coned = [[Fraction(r[0])] + [Fraction(c) for c in r[1:]] for r in rows]
        coned.append([Fraction(1)] + [Fraction(0)] * dim)
        if labels is None:
            labels = [str(i + 1) for i in range(len(rows))]
        return cls(dim + 1, coned, labels=list(labels) + ["inf"], **kw)

    @property
    def size(self) -> int:
        return len(self.forms)

    def is_rational(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for f in self.forms for c in f)

    def rank2_flats(self) -> list[Rank2Flat]:
        """Maximal sets of hyperplanes through a common codimension-2
        subspace, by exact rank computation on the forms."""
        seen: set[tuple[int, ...]] = set()
        out: list[Rank2Flat] = []
        m = self.size
        for i in range(m):
            for j in range(i + 1, m):
                pair = [self.forms[i], self.forms[j]]
                members = [k for k in range(m)
                           if rank(pair + [self.forms[k]]) == 2]
                key = tuple(members)
                if key not in seen:
                    seen.add(key)
                    out.append(Rank2Flat(key))
        return sorted(out, key=lambda f: (-f.multiplicity, f.hyperplanes))

    # -- Orlik-Solomon algebra through degree 2 --
    def os_algebra(self) -> FiniteCdga:
        if not self.is_rational():
            raise ValueError("OS algebra construction requires rational forms")
        m = self.size
        pairs = list(itertools.combinations(range(m), 2))
        pair_index = {p: t for t, p in enumerate(pairs)}
        relations = []
        for flat in self.rank2_flats():
            if flat.multiplicity < 3:
                continue
            for (i, j, k) in itertools.combinations(flat.hyperplanes, 3):
                row = [Fraction(0)] * len(pairs)
                row[pair_index[(j, k)]] = Fraction(1)
                row[pair_index[(i, k)]] = Fraction(-1)
                row[pair_index[(i, j)]] = Fraction(1)
                relations.append(row)
        reduced = row_space_basis(relations) if relations else []
        pivots = []
        for row in reduced:
            pivots.append(next(t for t, c in enumerate(row) if c))
        pivot_of = dict(zip(pivots, reduced))
        kept = [p for t, p in enumerate(pairs) if t not in pivots]
        kept_pos = {p: a for a, p in enumerate(kept)}

        def reduce_pair(t: int) -> dict[int, Fraction]:
            """Coordinates of pair-monomial t in the kept basis."""
            if t not in pivot_of:
                return {kept_pos[pairs[t]]: Fraction(1)}
            row = pivot_of[t]
            out: dict[int, Fraction] = {}
            for s in range(t + 1, len(pairs)):
                if row[s]:
                    for b, c in reduce_pair(s).items():
                        out[b] = out.get(b, Fraction(0)) - row[s] * c
            return out

        e_names = [f"e{lbl}" for lbl in self.labels]
        pair_names = [f"e{self.labels[i]}e{self.labels[j]}" for (i, j) in kept]
        degrees = [["1"], e_names, pair_names]
        products = {}
        for t, (i, j) in enumerate(pairs):
            coords = reduce_pair(t)
            products[(e_names[i], e_names[j])] = {
                pair_names[b]: c for b, c in coords.items() if c}
        algebra = FiniteCdga(degrees, products, {},
                             h1_var_names=[f"x{k + 1}" for k in range(m)],
                             name=self.name or "arrangement")
        return algebra

    # -- resonance components --
    def local_components(self) -> list[LinearSubspace]:
        m = self.size
        out = []
        for flat in self.rank2_flats():
            if flat.multiplicity < 3:
                continue
            forms = []
            total = [Fraction(0)] * m
            for h in flat.hyperplanes:
                total[h] = Fraction(1)
            forms.append((Fraction(0), total))
            for h in range(m):
                if h not in flat.hyperplanes:
                    row = [Fraction(0)] * m
                    row[h] = Fraction(1)
                    forms.append((Fraction(0), row))
            out.append(LinearSubspace(m, forms))
        return out

    def find_3nets(self, bound: int = 12, include_single_flat: bool = False) -> list["ThreeNet"]:
        """Reduced 3-nets on sub-arrangements, by brute-force enumeration of
        block assignments (block symmetry removed by normalization).  Nets
        whose base locus is one flat duplicate local components and are
        skipped unless asked for."""
        m = self.size
        if m > bound:
            raise ValueError(f"arrangement size {m} exceeds the 3-net bound {bound}")
        flat_of_pair: dict[tuple[int, int], tuple[int, ...]] = {}
        for flat in self.rank2_flats():
            for p in itertools.combinations(flat.hyperplanes, 2):
                flat_of_pair[p] = flat.hyperplanes
        nets = []
        seen = set()
        for assignment in itertools.product(range(4), repeat=m):
            support = [h for h in range(m) if assignment[h]]
            if len(support) < 3:
                continue
            blocks = [tuple(h for h in support if assignment[h] == b)
                      for b in (1, 2, 3)]
            if any(not b for b in blocks):
                continue
            # normalize away the S3 action on blocks
            canon = tuple(sorted(blocks))
            if canon in seen:
                continue
            seen.add(canon)
            if len({len(b) for b in blocks}) != 1:
                continue
            if _is_net(blocks, flat_of_pair):
                net = ThreeNet(tuple(canon))
                if include_single_flat or len(net.base_locus(flat_of_pair)) > 1:
                    nets.append(net)
        return sorted(nets, key=lambda n: n.blocks)

    def net_component(self, net: "ThreeNet") -> LinearSubspace:
        m = self.size
        support = sorted(h for b in net.blocks for h in b)
        forms = []
        firsts = [b[0] for b in net.blocks]
        total = [Fraction(0)] * m
        for f in firsts:
            total[f] = Fraction(1)
        forms.append((Fraction(0), total))
        for block in net.blocks:
            for h in block[1:]:
                row = [Fraction(0)] * m
                row[h] = Fraction(1)
                row[block[0]] = Fraction(-1)
                forms.append((Fraction(0), row))
        for h in range(m):
            if h not in support:
                row = [Fraction(0)] * m
                row[h] = Fraction(1)
                forms.append((Fraction(0), row))
        return LinearSubspace(m, forms)


@dataclass(frozen=True)
class ThreeNet:
    """Partition of a sub-arrangement into three equal blocks such that the
    flat of any cross-block pair meets each block exactly once."""
    blocks: tuple[tuple[int, ...], ...]

    def base_locus(self, flat_of_pair) -> set[tuple[int, ...]]:
        flats = set()
        for a in range(3):
            for b in range(a + 1, 3):
                for h in self.blocks[a]:
                    for k in self.blocks[b]:
                        flats.add(flat_of_pair[tuple(sorted((h, k)))])
        return flats

    def labels(self, arrangement: HyperplaneArrangement) -> str:
        return "(" + "|".join("".join(arrangement.labels[h] for h in b)
                              for b in self.blocks) + ")"


def _is_net(blocks, flat_of_pair) -> bool:
    members = {h for b in blocks for h in b}
    for a in range(3):
        for b in range(a + 1, 3):
            for h in blocks[a]:
                for k in blocks[b]:
                    flat = flat_of_pair[tuple(sorted((h, k)))]
                    inside = [x for x in flat if x in members]
                    counts = [sum(1 for x in inside if x in blocks[c])
                              for c in range(3)]
                    if counts != [1, 1, 1]:
                        return False
    return True


def r1_arrangement(A: HyperplaneArrangement):
    """R^1 of the OS algebra with a certified decomposition into local and
    3-net components.  Returns (locus, components, certificate)."""
    from .loci import resonance_locus
    algebra = A.os_algebra()
    locus = resonance_locus(algebra, 1)
    candidates = A.local_components() + [A.net_component(n) for n in A.find_3nets()]
    # 0 always lies in R^1 (H^1 != 0); it only survives pruning when no
    # positive-dimensional component covers it
    candidates.append(LinearSubspace.from_point([Fraction(0)] * A.size))
    candidates = prune_subspaces(candidates)
    cert = certify_linear_cover(locus, candidates)
    if isinstance(cert, CoverCertificate):
        locus.decomposition = candidates
    return locus, candidates, cert
