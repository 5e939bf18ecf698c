from math import gcd

import pytest

from cuspforge.arith import divisors
from cuspforge.criteria import (
    NOT_WEIERSTRASS,
    UNKNOWN,
    WEIERSTRASS,
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
from cuspforge.errors import (
    BadGenus,
    GenusTooSmall,
    InconsistentGapCount,
    NotIrregular,
    NotPrime,
)
from cuspforge.genus import g0, g1


def test_schoeneberg_examples():
    assert not schoeneberg(3, 2, 1)  # the level-20 failure forcing the certificate
    assert schoeneberg(5, 2, 1)
    assert schoeneberg(2, 2, 0)
    with pytest.raises(BadGenus):
        schoeneberg(1, 2, 0)


def test_lewittes_threshold():
    assert lewittes(5)
    assert not lewittes(4)
    assert lewittes(20)


def test_lemma_cusp_inequality_examples():
    assert not lemma_cusp_inequality(20, 2)
    assert lemma_cusp_inequality(100, 10)
    assert lemma_cusp_inequality(52, 2)  # phi(2)phi(26) = 12 meets the bound
    with pytest.raises(NotIrregular):
        lemma_cusp_inequality(20, 4)


def test_lemma_genus_check_examples():
    assert lemma_genus_check(24, 2)
    assert not lemma_genus_check(20, 2)
    assert lemma_genus_check(36, 3)
    with pytest.raises(GenusTooSmall):
        lemma_genus_check(12, 2)


def test_fricke_reduce_examples():
    assert fricke_reduce(20, 10) == 2
    assert fricke_reduce(36, 6) == 6
    assert fricke_reduce(48, 4) == 4


def test_al_reduce():
    assert atkin_lehner_reduce(24, 4) == 2
    assert atkin_lehner_reduce(40, 4) == 2
    assert atkin_lehner_reduce(16, 4) == 4
    assert atkin_lehner_reduce(32, 8) == 4
    assert atkin_lehner_reduce(18, 6) == 3
    assert al_divisor_orbit(24, 4) == {2, 4, 6, 12}


def test_al_orbit_preserves_e_and_phi_product():
    from cuspforge.arith import totient

    for n in range(2, 200):
        for d in divisors(n):
            for d2 in al_divisor_orbit(n, d):
                assert gcd(d2, n // d2) == gcd(d, n // d)
                assert totient(d2) * totient(n // d2) == totient(d) * totient(n // d)


def test_x1_verdict_18():
    for d in (3, 6):
        v = x1_verdict(18, d)
        assert v.status == NOT_WEIERSTRASS
        assert v.decisive_rule() == "FactTable"


def test_x1_verdict_20():
    v = x1_verdict(20, 10)
    assert v.status == WEIERSTRASS and v.weight == 2
    assert v.rules() == ("FrickeDualityReduction", "EtaCertificate")
    v2 = x1_verdict(20, 2)
    assert v2.status == WEIERSTRASS and v2.rules() == ("EtaCertificate",)


def test_x1_verdict_lemma_cases():
    assert x1_verdict(72, 6).decisive_rule() == "LemmaGenus"
    assert x1_verdict(24, 2).decisive_rule() == "LemmaGenus"
    assert x1_verdict(52, 2).decisive_rule() == "LemmaCuspIneq"
    assert x1_verdict(16, 4).decisive_rule() == "FactTable"
    assert x1_verdict(16, 4).status == WEIERSTRASS


def test_x1_verdict_never_uses_fact_table_when_lemma_fires():
    for n in range(13, 121):
        if g1(n) < 2:
            continue
        for d in divisors(n):
            if gcd(d, n // d) == 1:
                continue
            v = x1_verdict(n, d)
            d0 = fricke_reduce(n, d)
            if lemma_genus_check(n, d0):
                assert "FactTable" not in v.rules()
                assert v.status == WEIERSTRASS


def test_x1_verdict_errors():
    with pytest.raises(NotIrregular):
        x1_verdict(20, 5)
    with pytest.raises(GenusTooSmall):
        x1_verdict(12, 2)


def test_x0_verdict_examples():
    assert x0_verdict(2, 16).status == WEIERSTRASS  # N = 64
    assert x0_verdict(3, 9).status == NOT_WEIERSTRASS  # N = 81
    assert x0_verdict(2, 11).status == NOT_WEIERSTRASS  # N = 44
    assert x0_verdict(2, 77).status == UNKNOWN
    assert x0_verdict(3, 10).status == UNKNOWN


def test_x0_verdict_more_cases():
    assert x0_verdict(2, 10).status == NOT_WEIERSTRASS  # N = 40 = 8*5
    assert x0_verdict(2, 20).status == NOT_WEIERSTRASS  # N = 80 = 16*5
    assert x0_verdict(2, 15).status == NOT_WEIERSTRASS  # M = 3q
    assert x0_verdict(2, 7).status == NOT_WEIERSTRASS  # M = q, smallest valid
    assert x0_verdict(2, 13 * 17).status == WEIERSTRASS  # both 1 mod 4
    assert x0_verdict(3, 7 * 13).status == WEIERSTRASS  # both 1 mod 3
    assert x0_verdict(3, 7).status == UNKNOWN  # M prime
    assert x0_verdict(5, 3).status == UNKNOWN  # p >= 5, p not dividing M
    assert x0_verdict(5, 5).status == WEIERSTRASS  # N = 125, p | M
    with pytest.raises(NotPrime):
        x0_verdict(4, 4)
    with pytest.raises(GenusTooSmall):
        x0_verdict(2, 2)  # g_0(8) = 0


def test_x0_lemma_43_consistency():
    # wherever the quotient-genus inequality holds with p | M, the verdict
    # is Weierstrass and never overridden
    for p in (2, 3, 5):
        for m in range(p, 401 // (p * p) + 1, p):
            n = p * p * m
            if g0(n) < 2:
                continue
            v = x0_verdict(p, m)
            if g0(n) - p * g0(p * m) >= p:
                assert v.status == WEIERSTRASS
                assert v.rules() == ("LemmaGenus",)


def test_gap_sequence_examples():
    seq = gap_sequence_from_nongaps({3, 4}, 3)
    assert seq.gaps == (1, 2, 5) and seq.weight == 2
    seq = gap_sequence_from_nongaps({2}, 2)
    assert seq.gaps == (1, 3) and seq.weight == 1
    for g in range(2, 8):
        seq = gap_sequence_from_nongaps(set(range(g + 1, 2 * g + 1)), g)
        assert seq.gaps == tuple(range(1, g + 1)) and seq.weight == 0


def test_gap_sequence_counts_and_range():
    seq = gap_sequence_from_nongaps({4, 5}, 6)
    assert len(seq.gaps) == 6 and all(1 <= a <= 11 for a in seq.gaps)
    with pytest.raises(InconsistentGapCount):
        gap_sequence_from_nongaps({5}, 3)  # too few certified non-gaps


def test_gap_complement_is_a_numerical_semigroup():
    for nongaps, g in (({3, 4}, 3), ({2}, 2), ({4, 5}, 6), ({3, 7}, 5)):
        seq = gap_sequence_from_nongaps(nongaps, g)
        bound = 2 * g - 1
        semigroup = set(range(bound + 1, 3 * bound)) | (
            set(range(1, bound + 1)) - set(seq.gaps)
        )
        for a in semigroup:
            for b in semigroup:
                if a + b < 3 * bound:
                    assert a + b in semigroup, (nongaps, g, a, b)


def test_survey_failure_lists():
    rep = survey_x1(100)
    assert rep.lemma_cusp_failures[2] == (16, 20, 24, 28, 32, 36, 40, 44, 48, 60)
    assert rep.lemma_cusp_failures[3] == (18, 36)
    assert rep.lemma_cusp_failures[4] == (16, 32, 48)
    assert rep.lemma_cusp_failures[6] == (36, 72)


def test_survey_only_18_fails():
    rep = survey_x1(100)
    assert rep.non_weierstrass_levels() == (18,)
    for row in rep.rows:
        assert row.status in (WEIERSTRASS, NOT_WEIERSTRASS)


def test_survey_rows_sorted_and_deterministic():
    rep1, rep2 = survey_x1(60), survey_x1(60)
    assert rep1 == rep2
    keys = [(r.n, r.d) for r in rep1.rows]
    assert keys == sorted(keys)


def test_survey_parallel_matches_serial():
    assert survey_x1(80, jobs=2) == survey_x1(80, jobs=1)
