"""branegauge: exact holomorphic gauge theory on complexes of free modules.

The package computes holomorphic connections as jet splittings, curvature
and Yang-Mills data as exact Gaussian-rational quantities, critical points
of the induced gradient systems numerically, and the Bruhat/Schubert
combinatorics behind uniqueness verdicts for gauge fields.
"""

from .exact import ExteriorForm, Matrix, Ring, Scalar, TruncPoly
from .dg import Connection, FormVector, FreeModule, HomElement, JetElement
from .branes import (
    BraneComplex,
    ChainMap,
    GaugeField,
    GaugeVariation,
    cohomology,
    compatible_family_connections,
    cone,
    gauge_solve,
    hom_complex,
    induced_connection,
    induced_connections,
    jet_complex,
    shift,
    variation_difference,
)
from .schubert import (
    Permutation,
    StrataCatalog,
    bruhat_leq,
    flag3_catalog,
    hom_vanishing_verdict,
    is_singular,
    length,
    schubert_closure,
    uniqueness_verdict,
)
from .yang_mills import (
    CriticalSet,
    CurvatureExpansion,
    SolverConfig,
    YMPolynomial,
    cone_ym,
    curvature_expansion,
    euler_poincare_check,
    gradient_system,
    orthogonality_check,
    semisimple_converse_harness,
    solve_critical,
    stationarity_check,
    ym_brane,
    ym_polynomial,
    ym_sheaf,
)

__version__ = "0.1.0"
