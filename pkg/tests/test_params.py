from fractions import Fraction as F

import pytest
from mpmath import mp

from spfq.errors import BadEpsilon, FieldTooSmallForN, NBelow18, NotPrimePower
from spfq.params import (ROW_TABLE, compare_with_paper, derive_params, find_row,
                         paper_params, row_anchors, table_row, theorem2_headline,
                         theorem2_params)

# published eps = 1/10 table values, keyed by row anchor
PUBLISHED_DELTA = [2, 3, 4, 5, 6, 7, 8, 9, 10, 14, 20, 28, 42, 57, 73, 89]
PUBLISHED_K = [33, 49, 60, 71, 92, 105, 121, 133, 147, 191, 283, 379, 575, 781, 994, 1211]
PUBLISHED_C2 = [9, 6, 5, 4, 4, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2]
PUBLISHED_ELL = [8, 5, 4, 4, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2]
PUBLISHED_UPSILON = [41, 55, 65, 75, 96, 108, 124, 136, 150, 194, 285, 381, 577, 783, 996, 1213]


def test_table_row_examples():
    assert table_row(2) == (F(43, 3), F(6, 43))
    assert table_row(25) == (F(8, 3), F(3, 4))
    with pytest.raises(NotPrimePower):
        table_row(6)


def test_row_product_identity():
    for row in ROW_TABLE:
        assert row.c4 * row.beta0 == 2


def test_sigma_decreases_down_the_table():
    sigmas = [3 * row.c4 * F(row.q_lo - 1, row.q_lo) for row in ROW_TABLE]
    assert all(a > b for a, b in zip(sigmas, sigmas[1:]))
    for row, s in zip(ROW_TABLE, sigmas):
        assert 6 * F(row.q_lo - 1, row.q_lo) <= s <= F(43, 2)


def test_derive_q2_full_bundle():
    p = derive_params(2, F(1, 10))
    assert (p.c2, p.ell, p.delta, p.k_min) == (9, 8, 2, 33)
    assert p.sigma == F(43, 2) and p.tau == 17 and p.upsilon == 41
    assert p.c3 == 43 and p.source == "derived_formula"


def test_derive_q9_bundle():
    p = derive_params(9, F(1, 10))
    assert (p.c2, p.ell, p.sigma, p.tau, p.upsilon) == (3, 3, F(88, 9), 6, 124)


def test_bad_epsilon():
    with pytest.raises(BadEpsilon):
        derive_params(2, 1)
    with pytest.raises(BadEpsilon):
        derive_params(2, F(0))
    with pytest.raises(NotPrimePower):
        derive_params(12, F(1, 10))


def test_published_tables_reproduced_at_tenth():
    for i, q in enumerate(row_anchors()):
        p = derive_params(q, F(1, 10))
        assert p.delta == PUBLISHED_DELTA[i], q
        assert p.k_min == PUBLISHED_K[i], q
        assert p.c2 == PUBLISHED_C2[i], q
        assert p.ell == PUBLISHED_ELL[i], q


def test_comparison_discrepancy_set():
    offenders = {}
    for q in row_anchors():
        rep = compare_with_paper(derive_params(q, F(1, 10)))
        if rep["discrepancies"]:
            offenders[q] = rep["discrepancies"]
    assert sorted(offenders) == [3, 4, 7, 16]
    for q, det in offenders.items():
        assert [d["field"] for d in det] == ["upsilon"]
        assert abs(det[0]["ours"] - det[0]["paper"]) == 1
    # spot values called out by the published tables
    rep3 = compare_with_paper(derive_params(3, F(1, 10)))
    d = rep3["discrepancies"][0]
    assert (d["ours"], d["paper"]) == (54, 55)
    assert compare_with_paper(derive_params(31, F(1, 10)))["confirmed"]
    assert derive_params(31, F(1, 10)).upsilon == 379 + 2 == 381


def test_comparison_requires_tenth_and_derived():
    with pytest.raises(ValueError):
        compare_with_paper(derive_params(2, F(1, 20)))
    with pytest.raises(ValueError):
        compare_with_paper(paper_params(2))


def test_paper_params_source():
    p = paper_params(3)
    assert p.source == "paper_table"
    assert p.upsilon == 55 and p.k_min == 49


def test_in_range_field_sizes_use_row_constants():
    p = derive_params(25, F(1, 10))
    assert (p.c4, p.beta0) == (F(8, 3), F(3, 4))
    assert p.sigma == 8 * F(24, 25)
    assert p.upsilon == 283 + 2


def test_monotone_in_epsilon():
    prev = None
    for eps in (F(1, 2), F(1, 5), F(1, 10), F(1, 40), F(1, 100), F(1, 1000)):
        for q in (2, 9, 89):
            p = derive_params(q, eps)
            if prev is not None and prev[0] == q:
                assert p.delta >= prev[1].delta
                assert p.k_min >= prev[1].k_min
                assert p.c2 >= prev[1].c2
                assert p.ell >= prev[1].ell
        prev = (q, p)


def test_split_point_coefficients_dominate_exact_requirement():
    with mp.workprec(200):
        for row in ROW_TABLE:
            for eps in (F(1, 2), F(1, 10), F(1, 1000)):
                printed = (mp.mpf(row.delta_a.numerator) / row.delta_a.denominator
                           * mp.log(1 / mp.mpf(eps.numerator) * eps.denominator)
                           + mp.mpf(row.delta_b.numerator) / row.delta_b.denominator)
                b0 = mp.mpf(row.beta0.numerator) / row.beta0.denominator
                exact = ((mp.log(mp.mpf(eps.denominator) / eps.numerator)
                          + mp.log(10) - mp.log(1 - b0)) / mp.log(1 / b0) - 1)
                assert printed >= exact


def test_ell_zero_threshold():
    # ell drops to zero exactly when q - 1 >= 20/eps; just below the cutoff a
    # single extra row does not reach the tail target, so the ceiling gives 2
    assert derive_params(211, F(1, 10)).ell == 0
    assert derive_params(199, F(1, 10)).ell == 2
    assert derive_params(101, F(1, 5)).ell == 0
    assert derive_params(97, F(1, 5)).ell == 2


def test_theorem2_constants():
    t = theorem2_params(18, F(1, 10), 297)
    assert t.c4 == F(37, 18) and t.beta0 == F(36, 37)
    assert t.c2 == 2 and t.ell == 0 and t.tau == 2
    assert t.source == "theorem2(18)"
    with pytest.raises(FieldTooSmallForN):
        theorem2_params(18, F(1, 10), 256)
    with pytest.raises(NBelow18):
        theorem2_params(17, F(1, 10), 297)


def test_theorem2_kmin_against_independent_evaluation():
    t = theorem2_params(18, F(1, 10), 297)
    with mp.workprec(300):
        val = (mp.mpf(25) / 2 + 1) * 37 * (mp.log(10) + mp.log(37) + mp.log(10))
        expected = int(mp.ceil(val))
    assert t.k_min == expected
    assert t.upsilon == t.k_min  # ell = 0 in this regime


def test_theorem2_sigma_limit_identity():
    for n_big in (18, 25, 40):
        q = 16 * n_big + 9
        t = theorem2_params(n_big, F(1, 10), q)
        assert t.sigma - 6 * F(q - 1, q) == 3 * F(q - 1, q) / n_big


def test_theorem2_headline_vs_derived():
    hl = theorem2_headline(18, 297)
    t = theorem2_params(18, F(1, 10), 297)
    assert hl.sigma == F(296, 297) * (6 + F(3, 18))
    assert hl.q_min == 297
    # the printed upsilon formula undercounts the derived row requirement;
    # both are reported rather than silently reconciled
    assert hl.upsilon == 1370
    assert t.upsilon == 4104
    assert hl.upsilon != t.upsilon


def test_find_row_boundaries():
    assert find_row(16).q_lo == 16 and find_row(19).q_lo == 16
    assert find_row(89).q_hi is None and find_row(10_007).q_lo == 89
    assert find_row(49).q_lo == 47
