"""Pure handlers: request model in, Report out.  The FastAPI routes and the
CLI both call these; nothing here touches the network or the clock except
the timing sidecar."""
from __future__ import annotations

import hashlib
import json
import time
from fractions import Fraction

from ..arrangements import Cyclo3, HyperplaneArrangement, r1_arrangement
from ..cdga import FiniteCdga
from ..elliptic import EllipticArrangement, bibby_model, conf_e_pipeline
from ..fox import (GroupPresentation, alexander_matrix,
                   linearized_alexander_matrix, linearized_r1_ideal, v1_ideal)
from ..ideals import Ideal
from ..fixtures import (get_arrangement, get_cdga, get_elliptic, get_group,
                        get_torus_locus, list_fixtures)
from ..loci import (AffineLocus, CoverCertificate, certify_linear_cover,
                    compare_res_supports, resonance_locus,
                    resonance_of_cohomology, support_locus)
from ..rings import PolyRing, parse_poly, poly_to_string
from ..tcones import (TorusLocus, classical_tcone_laurent, classical_tcone_tori,
                      exp_tcone_hypersurface, exp_tcone_tori,
                      rational_quadric_test, tangent_cone_formula_check)
from .schemas import (ArrangementRequest, CdgaRequest, EllipticRequest,
                      FormalityRequest, FoxRequest, QuadricRequest, Report,
                      TconeRequest)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NON_FORMAL = 2


class InputError(ValueError):
    pass


def _digest(command: str, payload) -> str:
    canonical = json.dumps({"command": command, "payload": payload},
                           sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _report(command: str, payload, data: dict, verdict: str | None,
            started: float) -> Report:
    return Report(command=command, input_digest=_digest(command, payload),
                  data=data, verdict=verdict,
                  timing_ms=round((time.monotonic() - started) * 1000, 3))


def _load_cdga(req: CdgaRequest | FormalityRequest, fixture_attr="fixture",
               inline_attr="input") -> tuple[FiniteCdga, dict]:
    fixture = getattr(req, fixture_attr)
    inline = getattr(req, inline_attr)
    if fixture is not None:
        return get_cdga(fixture), {"fixture": fixture}
    if inline is not None:
        try:
            return FiniteCdga.from_dict(inline), {"input": inline}
        except Exception as exc:
            raise InputError(f"bad CDGA input: {exc}") from exc
    raise InputError("supply either fixture or input")


def _matrix_strings(M) -> list[list[str]]:
    return [[poly_to_string(x) for x in row] for row in M.rows]


# --- cdga ---------------------------------------------------------------------

def cdga_validate(req: CdgaRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_cdga(req)
    violations = A.validate()
    if A.weights is not None:
        violations += A.validate_weights()
    data = {"name": A.name, "dims": [A.dim(i) for i in range(A.top + 1)],
            "violations": violations}
    code = EXIT_OK if not violations else EXIT_INPUT_ERROR
    return _report("cdga validate", payload, data,
                   "VALID" if not violations else "INVALID", t0), code


def cdga_cohomology(req: CdgaRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_cdga(req)
    payload["degree"] = req.degree
    dim, reps = A.cohomology(req.degree)
    data = {"degree": req.degree, "betti": dim,
            "representatives": [[str(c) for c in v] for v in reps],
            "basis": A.basis(req.degree)}
    return _report("cdga cohomology", payload, data, None, t0), EXIT_OK


def cdga_resonance(req: CdgaRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_cdga(req)
    payload["degree"] = req.degree
    locus = resonance_locus(A, req.degree)
    data = {"degree": req.degree, "locus": locus.to_dict()}
    return _report("cdga resonance", payload, data, None, t0), EXIT_OK


def cdga_support(req: CdgaRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_cdga(req)
    payload.update(degree=req.degree, variant=req.variant)
    locus = support_locus(A, req.degree, req.variant)
    data = {"degree": req.degree, "variant": req.variant,
            "locus": locus.to_dict()}
    return _report("cdga support", payload, data, None, t0), EXIT_OK


def cdga_compare(req: CdgaRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_cdga(req)
    payload["q"] = req.q
    ok, witness, res, sup = compare_res_supports(A, req.q)
    data = {"q": req.q, "equal": ok,
            "resonance_union": res.to_dict(), "support_union": sup.to_dict()}
    if witness is not None:
        direction, (piece, gen) = witness
        data["witness"] = {"direction": direction,
                           "generator": poly_to_string(gen)}
    return _report("cdga compare", payload, data,
                   "PASS" if ok else "FAIL", t0), EXIT_OK if ok else EXIT_INPUT_ERROR


# --- tangent cones --------------------------------------------------------------

def _load_torus(fixture, inline) -> tuple[TorusLocus, dict]:
    if fixture is not None:
        return get_torus_locus(fixture), {"fixture": fixture}
    if inline is not None:
        try:
            return TorusLocus.from_dict(inline), {"input": inline}
        except Exception as exc:
            raise InputError(f"bad torus locus: {exc}") from exc
    raise InputError("supply either fixture or input")


def tcone(req: TconeRequest, mode: str) -> tuple[Report, int]:
    t0 = time.monotonic()
    if req.laurent is not None:
        if not req.vars:
            raise InputError("Laurent input needs variable names")
        ring = PolyRing(req.vars)
        try:
            f = parse_poly(req.laurent, ring, laurent=True)
        except Exception as exc:
            raise InputError(str(exc)) from exc
        payload = {"laurent": req.laurent, "vars": req.vars}
        if mode == "exp":
            spaces = exp_tcone_hypersurface(f, req.max_partition_support)
            data = {"subspaces": [s.to_dict() for s in spaces],
                    "count": len(spaces)}
        else:
            locus = classical_tcone_laurent([f])
            data = {"locus": locus.to_dict(),
                    "exactness": "exact (principal ideal)"}
        return _report(f"tcone {mode}", payload, data, None, t0), EXIT_OK
    locus, payload = _load_torus(req.fixture, req.input)
    if mode == "exp":
        spaces = exp_tcone_tori(locus)
        data = {"subspaces": [s.to_dict() for s in spaces], "count": len(spaces)}
    else:
        cone = classical_tcone_tori(locus)
        data = {"locus": cone.to_dict(), "exactness": "exact (torus union)"}
    return _report(f"tcone {mode}", payload, data, None, t0), EXIT_OK


def formality(req: FormalityRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    torus, tp = _load_torus(req.torus_fixture, req.torus)
    payload = {"torus": tp}
    r_model = None
    if req.group_fixture is not None or req.presentation is not None:
        P, gp = _load_group(FoxRequest(fixture=req.group_fixture,
                                       presentation=req.presentation))
        payload["group"] = gp
        ideal = linearized_r1_ideal(P)
        r_coh = AffineLocus(ideal.ring, [ideal])
    else:
        A, ap = _load_cdga(req, "cdga_fixture", "cdga")
        payload["cdga"] = ap
        r_model = resonance_locus(A, 1)
        r_coh = resonance_of_cohomology(A, 1)
    rep = tangent_cone_formula_check(torus, r_model, r_coh)
    data = {"report": rep.to_dict(),
            "cohomology_resonance": r_coh.to_dict()}
    if r_model is not None:
        data["model_resonance"] = r_model.to_dict()
    code = EXIT_NON_FORMAL if rep.verdict == "NON-FORMAL" else EXIT_OK
    if rep.verdict == "INCONSISTENT-INPUT":
        code = EXIT_INPUT_ERROR
    return _report("formality", payload, data, rep.verdict, t0), code


def quadric(req: QuadricRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    ring = PolyRing(req.vars)
    try:
        q = parse_poly(req.form, ring)
        verdict = rational_quadric_test(q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {"form": req.form, "vars": req.vars}
    return _report("quadric", payload, {"verdict": verdict}, verdict, t0), EXIT_OK


# --- fox -------------------------------------------------------------------------

def _load_group(req: FoxRequest) -> tuple[GroupPresentation, dict]:
    if req.fixture is not None:
        return get_group(req.fixture), {"fixture": req.fixture}
    if req.presentation is not None:
        try:
            return (GroupPresentation.from_text(req.presentation),
                    {"presentation": req.presentation})
        except Exception as exc:
            raise InputError(f"bad presentation: {exc}") from exc
    raise InputError("supply either fixture or presentation")


def fox_alexander(req: FoxRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    P, payload = _load_group(req)
    M, ring = alexander_matrix(P)
    data = {"generators": P.generators, "betti": ring.n,
            "vars": list(ring.names), "matrix": _matrix_strings(M)}
    return _report("fox alexander", payload, data, None, t0), EXIT_OK


def fox_linearized(req: FoxRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    P, payload = _load_group(req)
    M, ring = linearized_alexander_matrix(P)
    data = {"vars": list(ring.names), "matrix": _matrix_strings(M)}
    return _report("fox linearized", payload, data, None, t0), EXIT_OK


def fox_v1(req: FoxRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    P, payload = _load_group(req)
    gens, ring = v1_ideal(P)
    data = {"vars": list(ring.names),
            "ideal": [poly_to_string(g) for g in gens],
            "zero_ideal": not gens}
    return _report("fox v1", payload, data, None, t0), EXIT_OK


def fox_r1(req: FoxRequest) -> tuple[Report, int]:
    """Linearized minors ideal; when its variety is a single quadric, the
    rationality test result is attached."""
    from ..fox import detect_quadric
    t0 = time.monotonic()
    P, payload = _load_group(req)
    ideal = linearized_r1_ideal(P)
    data = {"vars": [f"y{j + 1}" for j in range(P.n)],
            "ideal": [poly_to_string(g) for g in ideal.gens],
            "zero_ideal": ideal.is_zero()}
    verdict = None
    if not ideal.is_zero() and P.n <= 4:
        q = detect_quadric(ideal)
        if q is not None:
            verdict = rational_quadric_test(q)
            data["quadric"] = poly_to_string(q)
            data["quadric_verdict"] = verdict
    return _report("fox r1", payload, data, verdict, t0), EXIT_OK


# --- arrangements ------------------------------------------------------------------

def _parse_cyclo(text: str):
    """Entry grammar for arrangement forms: 'p/q', 'w', '-w', 'a+b*w',
    'a-b*w' with w a primitive cube root of unity."""
    s = text.replace(" ", "")
    if "w" not in s:
        return Fraction(s)
    if s == "w":
        return Cyclo3(0, 1)
    if s == "-w":
        return Cyclo3(0, -1)
    for sep in ("+", "-"):
        idx = s.rfind(sep)
        if idx > 0:
            a, b = s[:idx], s[idx:]
            bcoef = b.replace("*w", "").replace("w", "")
            if bcoef in ("+", "-"):
                bcoef += "1"
            return Cyclo3(Fraction(a), Fraction(bcoef))
    coef = s.replace("*w", "").replace("w", "")
    return Cyclo3(0, Fraction(coef or "1"))


def _load_arrangement(req: ArrangementRequest) -> tuple[HyperplaneArrangement, dict]:
    if req.fixture is not None:
        return get_arrangement(req.fixture), {"fixture": req.fixture}
    if req.input is not None:
        try:
            dim = req.input["dim"]
            forms = [[_parse_cyclo(str(c)) for c in row]
                     for row in req.input["forms"]]
            labels = req.input.get("labels")
            return (HyperplaneArrangement(dim, forms, labels=labels),
                    {"input": req.input})
        except InputError:
            raise
        except Exception as exc:
            raise InputError(f"bad arrangement: {exc}") from exc
    raise InputError("supply either fixture or input")


def arrangement_flats(req: ArrangementRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_arrangement(req)
    flats = A.rank2_flats()
    data = {"size": A.size,
            "flats": [{"hyperplanes": [A.labels[h] for h in f.hyperplanes],
                       "multiplicity": f.multiplicity} for f in flats],
            "nets": []}
    if A.size <= req.max_arrangement_size:
        data["nets"] = [n.labels(A) for n in A.find_3nets(req.max_arrangement_size)]
    return _report("arrangement flats", payload, data, None, t0), EXIT_OK


def arrangement_os(req: ArrangementRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_arrangement(req)
    algebra = A.os_algebra()
    data = {"dims": [algebra.dim(i) for i in range(algebra.top + 1)],
            "degree1": algebra.basis(1), "degree2": algebra.basis(2),
            "violations": algebra.validate()}
    return _report("arrangement os", payload, data, None, t0), EXIT_OK


def arrangement_r1(req: ArrangementRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_arrangement(req)
    if A.size > req.max_arrangement_size:
        raise InputError(f"arrangement size {A.size} exceeds the bound "
                         f"{req.max_arrangement_size}")
    locus, components, cert = r1_arrangement(A)
    certified = isinstance(cert, CoverCertificate)
    data = {"locus": locus.to_dict(),
            "components": [{"dim": s.dim(), **s.to_dict()} for s in components],
            "certificate": cert.to_dict(),
            "certified": certified}
    verdict = "CERTIFIED" if certified else "REFUTED"
    return _report("arrangement r1", payload, data, verdict,
                   t0), EXIT_OK if certified else EXIT_INPUT_ERROR


# --- elliptic ---------------------------------------------------------------------

def _load_elliptic(req: EllipticRequest) -> tuple[EllipticArrangement, dict]:
    if req.fixture is not None:
        return get_elliptic(req.fixture), {"fixture": req.fixture}
    if req.input is not None:
        try:
            return (EllipticArrangement(req.input["n"], req.input["rows"]),
                    {"input": req.input})
        except Exception as exc:
            raise InputError(f"bad elliptic arrangement: {exc}") from exc
    raise InputError("supply either fixture or input")


def elliptic_check(req: EllipticRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_elliptic(req)
    ok, witness = A.unimodularity_check()
    data = {"unimodular": ok}
    if witness is not None:
        data["witness_rows"] = list(witness)
    return _report("elliptic check", payload, data,
                   "UNIMODULAR" if ok else "NOT-UNIMODULAR",
                   t0), EXIT_OK if ok else EXIT_INPUT_ERROR


def elliptic_model(req: EllipticRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    A, payload = _load_elliptic(req)
    ok, witness = A.unimodularity_check()
    if not ok:
        raise InputError(f"not unimodular (rows {witness}); run elliptic check")
    model = bibby_model(A)
    data = {"cdga": model.to_dict(),
            "dims": [model.dim(i) for i in range(model.top + 1)],
            "violations": model.validate() + model.validate_weights(),
            "translation_points_ignored": A.translations is not None}
    return _report("elliptic model", payload, data, None, t0), EXIT_OK


def elliptic_pipeline(req: EllipticRequest) -> tuple[Report, int]:
    t0 = time.monotonic()
    if req.fixture not in (None, "conf_e_star_2"):
        raise InputError("the pipeline is fixture-driven: conf_e_star_2")
    payload = {"fixture": "conf_e_star_2"}
    result = conf_e_pipeline()
    verdict = result["verdict"]
    code = EXIT_NON_FORMAL if verdict == "NON-FORMAL" else EXIT_OK
    return _report("elliptic pipeline", payload, result, verdict, t0), code


def fixtures_handler() -> Report:
    t0 = time.monotonic()
    return _report("fixtures", {}, {"fixtures": list_fixtures()}, None, t0)
