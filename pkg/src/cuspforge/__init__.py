"""cuspforge: cusps of X_0(N)/X_1(N), genus formulas, Weierstrass verdicts."""

__version__ = "0.1.0"

from .arith import (
    DeltaSubgroup,
    delta_d,
    divisors,
    full_units,
    pm_one,
    projection_image_size,
    subgroup_generated,
    totient,
    units,
)
from .cusps import (
    GAMMA0,
    GAMMA1,
    CuspAtlas,
    CuspClass,
    atlas,
    atlas_delta,
    canonicalize_x0,
    canonicalize_x1,
    ramification_x0_tower,
    ramification_x1_to_delta,
    width_and_stabilizer_sign,
    x1_equivalent,
)
from .criteria import (
    NOT_WEIERSTRASS,
    UNKNOWN,
    WEIERSTRASS,
    CertStep,
    GapSequence,
    SurveyReport,
    Verdict,
    al_divisor_orbit,
    atkin_lehner_reduce,
    fricke_reduce,
    gap_sequence_from_nongaps,
    lemma_cusp_inequality,
    lemma_genus_check,
    lewittes,
    schoeneberg,
    survey_x1,
    x0_verdict,
    x1_verdict,
)
from .etaq import (
    CuspDivisor,
    EtaQuotient,
    QSeries,
    bernoulli2,
    certify_x1_20,
    divisor,
    eta_series,
    ord_at_cusp,
    ord_at_cusp_exact,
    quotient_series,
)
from .genus import GenusProfile, g0, g1, genus_delta, mu, nu2, nu3, nu_inf
from .symmetry import (
    AtkinLehnerOp,
    DiamondOp,
    act_atkin_lehner,
    act_diamond,
    act_sp,
    build_atkin_lehner,
    cusp_orbits_x1,
    fixed_cusps,
)
