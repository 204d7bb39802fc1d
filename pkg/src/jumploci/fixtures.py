"""Named fixtures: the worked examples the acceptance suite runs on.

Builders are deterministic; JSON copies of the CDGA fixtures ship under
fixtures_data/ and a test pins them to these builders.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

from .arrangements import Cyclo3, HyperplaneArrangement
from .cdga import FiniteCdga
from .elliptic import EllipticArrangement, bibby_model
from .fox import GroupPresentation
from .tcones import TorusLocus, TranslatedTorus

F = Fraction


# --- CDGA fixtures -----------------------------------------------------------

def exterior_algebra(n: int) -> FiniteCdga:
    """Exterior algebra on e1..en with zero differential."""
    names: dict[tuple, str] = {(): "1"}
    degrees = [["1"]]
    for k in range(1, n + 1):
        layer = []
        for S in itertools.combinations(range(1, n + 1), k):
            nm = "e" + "".join(map(str, S))
            names[S] = nm
            layer.append(nm)
        degrees.append(layer)
    products = {}
    subsets = [S for S in names if S]
    for S in subsets:
        for T in subsets:
            if set(S) & set(T):
                products[(names[S], names[T])] = {}
                continue
            arr = list(S + T)
            sign = 1
            for i in range(len(arr)):
                for j in range(i + 1, len(arr)):
                    if arr[i] > arr[j]:
                        sign = -sign
            products[(names[S], names[T])] = {names[tuple(sorted(S + T))]: F(sign)}
    return FiniteCdga(degrees, products, {}, name=f"exterior_{n}")


def lambda_ab_dba() -> FiniteCdga:
    """Exterior on a, b with db = ba; the non-homogeneous resonance toy."""
    return FiniteCdga(
        degrees=[["1"], ["a", "b"], ["ab"]],
        products={("a", "b"): {"ab": F(1)}},
        differential={"b": {"ab": F(-1)}},      # db = ba = -ab
        h1_var_names=["x"],
        name="lambda_ab_dba",
    )


def heisenberg() -> FiniteCdga:
    """Model of the Heisenberg nilmanifold: exterior on a, b, c with
    dc = ba, degree-2 basis oriented (ba, ca, cb) to match the classical
    boundary-matrix display."""
    return FiniteCdga(
        degrees=[["1"], ["a", "b", "c"], ["ba", "ca", "cb"], ["cba"]],
        products={
            ("a", "b"): {"ba": F(-1)},
            ("a", "c"): {"ca": F(-1)},
            ("b", "c"): {"cb": F(-1)},
            ("a", "ba"): {}, ("b", "ba"): {}, ("c", "ba"): {"cba": F(1)},
            ("a", "ca"): {}, ("b", "ca"): {"cba": F(-1)}, ("c", "ca"): {},
            ("a", "cb"): {"cba": F(1)}, ("b", "cb"): {}, ("c", "cb"): {},
        },
        differential={"c": {"ba": F(1)}},
        weights={"a": 1, "b": 1, "c": 2, "ba": 2, "ca": 3, "cb": 3, "cba": 4},
        h1_var_names=["x", "y"],
        name="heisenberg",
    )


def conf_e_star_2_cdga() -> FiniteCdga:
    """Bibby model of the configuration space of two points on a
    once-punctured elliptic curve."""
    return bibby_model(conf_e_star_2())


def formal_surface_group() -> FiniteCdga:
    """Genus-1 surface with weights equal to degrees (a formal example for
    weight validation)."""
    alg = exterior_algebra(2)
    return FiniteCdga(alg.degrees, alg._products, {},
                      weights={"e1": 1, "e2": 1, "e12": 2},
                      name="formal_torus")


CDGA_FIXTURES: dict[str, Callable[[], FiniteCdga]] = {
    "lambda_ab_dba": lambda_ab_dba,
    "heisenberg": heisenberg,
    "exterior_1": lambda: exterior_algebra(1),
    "exterior_2": lambda: exterior_algebra(2),
    "exterior_3": lambda: exterior_algebra(3),
    "exterior_4": lambda: exterior_algebra(4),
    "conf_e_star_2": conf_e_star_2_cdga,
    "formal_torus": formal_surface_group,
}


# --- arrangement fixtures ----------------------------------------------------

def braid_slice() -> HyperplaneArrangement:
    """Generic 3-slice of the rank-3 braid arrangement; hyperplane order
    matches the defining polynomial z0 z1 z2 (z0-z1)(z0-z2)(z1-z2), which
    reproduces the classical flats 124, 135, 236, 456 and net (16|25|34)."""
    return HyperplaneArrangement(3, [
        [1, 0, 0], [0, 1, 0], [0, 0, 1],
        [1, -1, 0], [1, 0, -1], [0, 1, -1]], name="braid_slice")


def boolean_arrangement(n: int = 4) -> HyperplaneArrangement:
    rows = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    return HyperplaneArrangement(n, rows, name=f"boolean_{n}")


def pencil(m: int = 3) -> HyperplaneArrangement:
    """m concurrent lines x = k*y plus x = 0 style pencil through 0."""
    rows = [[F(1), F(0)]] + [[F(k), F(1)] for k in range(m - 1)]
    return HyperplaneArrangement(2, rows, name=f"pencil_{m}")


def generic_lines_4() -> HyperplaneArrangement:
    """Four affine lines in general position, coned."""
    return HyperplaneArrangement.from_affine(2, [
        [F(1), F(1), F(0)], [F(2), F(0), F(1)],
        [F(4), F(1), F(1)], [F(7), F(1), F(-1)]], name="generic_4")


def g333() -> HyperplaneArrangement:
    """Reflection arrangement of G(3,3,3), defined over Q(w)."""
    w = Cyclo3(0, 1)
    wk = [Cyclo3(1), w, w * w]
    forms = []
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        for k in range(3):
            f = [Cyclo3(0)] * 3
            f[i] = Cyclo3(1)
            f[j] = Cyclo3(0) - wk[k]
            forms.append(f)
    return HyperplaneArrangement(3, forms, name="g333")


ARRANGEMENT_FIXTURES: dict[str, Callable[[], HyperplaneArrangement]] = {
    "braid_slice": braid_slice,
    "boolean_4": lambda: boolean_arrangement(4),
    "pencil_3": lambda: pencil(3),
    "generic_4": generic_lines_4,
    "g333": g333,
}


# --- elliptic fixtures ---------------------------------------------------------

def e_star() -> EllipticArrangement:
    return EllipticArrangement(1, [[1]], name="e_star")


def conf_e_star_2() -> EllipticArrangement:
    return EllipticArrangement(2, [[1, 0], [0, 1], [1, -1]], name="conf_e_star_2")


def boolean_elliptic(n: int = 2) -> EllipticArrangement:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    return EllipticArrangement(n, rows, name=f"boolean_elliptic_{n}")


def doubled_fiber() -> EllipticArrangement:
    """Multiplication by 2 on E: the standard non-unimodular witness."""
    return EllipticArrangement(1, [[2]], name="doubled_fiber")


ELLIPTIC_FIXTURES: dict[str, Callable[[], EllipticArrangement]] = {
    "e_star": e_star,
    "conf_e_star_2": conf_e_star_2,
    "boolean_elliptic_2": lambda: boolean_elliptic(2),
    "doubled_fiber": doubled_fiber,
}


# --- characteristic-variety fixtures -------------------------------------------

def conf_v1() -> TorusLocus:
    """First characteristic variety of the two-point configuration space:
    three 2-tori pulled back along the three natural fibrations."""
    return TorusLocus(4, [
        TranslatedTorus(4, [[1, 0, 0, 0], [0, 1, 0, 0]]),
        TranslatedTorus(4, [[0, 0, 1, 0], [0, 0, 0, 1]]),
        TranslatedTorus(4, [[1, 0, 1, 0], [0, 1, 0, 1]]),
    ])


def toy_v1() -> TorusLocus:
    """{t1 = 1} in the rank-2 character torus."""
    return TorusLocus(2, [TranslatedTorus(2, [[1, 0]])])


def mobius_v1() -> TorusLocus:
    """{1} together with the order-2-translated subtorus {t2 = -1}."""
    return TorusLocus(2, [TranslatedTorus(2, [[0, 1]], [F(0), F(1, 2)])],
                      points=[[F(0), F(0)]])


def knot_pattern_v1() -> TorusLocus:
    """Knot-complement pattern: identity plus off-identity torsion points."""
    return TorusLocus(1, [], [[F(0)], [F(1, 6)], [F(5, 6)]])


TORUS_FIXTURES: dict[str, Callable[[], TorusLocus]] = {
    "conf_v1": conf_v1,
    "toy_v1": toy_v1,
    "mobius_v1": mobius_v1,
    "knot_pattern_v1": knot_pattern_v1,
}


# --- group presentations ---------------------------------------------------------

GROUP_FIXTURES: dict[str, Callable[[], GroupPresentation]] = {
    "toy": lambda: GroupPresentation.from_text(
        "gens: x1 x2; rel: [x1, [x1, x2]]", name="toy"),
    "mobius": lambda: GroupPresentation.from_text(
        "gens: x1 x2; rel: x1 x2^2 x1^-1 x2^-2", name="mobius"),
    "trefoil": lambda: GroupPresentation.from_text(
        "gens: x y; rel: x y x y^-1 x^-1 y^-1", name="trefoil"),
    "sqr2": lambda: GroupPresentation.from_text(
        "gens: x1 x2 x3 x4; rel: [x1, x2]; rel: [x1, x4] [x2^-2, x3]; "
        "rel: [x1^-1, x3] [x2, x4]", name="sqr2"),
    "torus_group": lambda: GroupPresentation.from_text(
        "gens: x1 x2; rel: [x1, x2]", name="torus_group"),
    "free_2": lambda: GroupPresentation.from_text(
        "gens: x1 x2", name="free_2"),
}


def list_fixtures() -> dict[str, list[str]]:
    return {
        "cdga": sorted(CDGA_FIXTURES),
        "arrangement": sorted(ARRANGEMENT_FIXTURES),
        "elliptic": sorted(ELLIPTIC_FIXTURES),
        "torus": sorted(TORUS_FIXTURES),
        "group": sorted(GROUP_FIXTURES),
    }


class UnknownFixtureError(KeyError):
    pass


def _get(table: dict, kind: str, name: str):
    try:
        return table[name]()
    except KeyError:
        raise UnknownFixtureError(
            f"unknown {kind} fixture {name!r}; available: {sorted(table)}") from None


def get_cdga(name: str) -> FiniteCdga:
    return _get(CDGA_FIXTURES, "cdga", name)


def get_arrangement(name: str) -> HyperplaneArrangement:
    return _get(ARRANGEMENT_FIXTURES, "arrangement", name)


def get_elliptic(name: str) -> EllipticArrangement:
    return _get(ELLIPTIC_FIXTURES, "elliptic", name)


def get_torus_locus(name: str) -> TorusLocus:
    return _get(TORUS_FIXTURES, "torus", name)


def get_group(name: str) -> GroupPresentation:
    return _get(GROUP_FIXTURES, "group", name)
