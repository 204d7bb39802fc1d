"""jumploci: exact-arithmetic cohomology jump loci.

Resonance varieties of finite CDGAs, support loci, exponential and
classical tangent cones, Fox-calculus characteristic ideals,
Orlik-Solomon and elliptic-arrangement models, and tangent-cone
formality verdicts, all over exact rationals.
"""

__version__ = "0.1.0"

from .cdga import CochainComplexQ, FiniteCdga, specialize
from .ideals import (Ideal, PolyMatrix, determinantal_ideal,
                     radical_membership, tangent_cone_ideal)
from .loci import (AffineLocus, LinearSubspace, certify_linear_cover,
                   compare_res_supports, resonance_locus,
                   resonance_of_cohomology, support_locus)
from .modules import (PolyComplex, fitting_support, homology_presentation,
                      minimize_presentation, syzygy_matrix)
from .rings import LaurentPoly, MultiPoly, PolyRing, parse_poly, poly_to_string
from .tcones import (TorusLocus, TranslatedTorus, exp_tcone_hypersurface,
                     exp_tcone_tori, rational_quadric_test,
                     tangent_cone_formula_check)

__all__ = [
    "AffineLocus", "CochainComplexQ", "FiniteCdga", "Ideal", "LaurentPoly",
    "LinearSubspace", "MultiPoly", "PolyComplex", "PolyMatrix", "PolyRing",
    "TorusLocus", "TranslatedTorus", "certify_linear_cover",
    "compare_res_supports", "determinantal_ideal", "exp_tcone_hypersurface",
    "exp_tcone_tori", "fitting_support", "homology_presentation",
    "minimize_presentation", "parse_poly", "poly_to_string",
    "radical_membership", "rational_quadric_test", "resonance_locus",
    "resonance_of_cohomology", "specialize", "support_locus",
    "syzygy_matrix", "tangent_cone_formula_check", "tangent_cone_ideal",
]
