from fractions import Fraction as F

import pytest
from mpmath import mp

from spfq.analysis import (CERT_ROWS, check_asymptotic, check_f_decreasing,
                           check_mid_beta, check_pesky_certificate,
                           check_power_certificate, check_small_beta,
                           coefficient_margin, eval_fn, grid_check_core,
                           plot_data, rho0_bruteforce, rho_budget, verify_all,
                           verify_row)
from spfq.certdata import cert_row
from spfq.errors import (DomainError, KTooLarge, KTooSmall, NotPrimePower,
                         PreconditionUnmet)
from spfq.params import derive_params


def failing(report):
    return [c for c in report.checks if c.passed is not True]


# -- eval --------------------------------------------------------------------------


def test_eval_f1_endpoint_examples():
    lo = eval_fn("f1", F(5, 43), q=2, c=F(43, 3), gamma=F(-11, 25), delta=0)
    hi = eval_fn("f1", F(7, 43), q=2, c=F(43, 3), gamma=F(-11, 25), delta=0)
    assert lo > 0.04
    assert hi < -0.03


def test_eval_core_limit():
    v = eval_fn("g_core", 1e-8, q=2, c4=F(43, 3))
    assert abs(v - 1) < 1e-6


def test_eval_domain_errors():
    with pytest.raises(DomainError):
        eval_fn("g_core", 1.5, q=2, c4=F(43, 3))
    with pytest.raises(DomainError):
        eval_fn("f1", 0, q=2, c=F(43, 3), gamma=F(-11, 25), delta=0)
    with pytest.raises(DomainError):
        eval_fn("f", 1, beta=F(1, 10), c4=F(43, 3), n=5)
    with pytest.raises(KeyError):
        eval_fn("nope", 0.5)


def test_eval_field_size_factor_decreases():
    # the delegation certificate's conclusion, observed directly
    vals = [eval_fn("f", x, beta=F(1, 3), c4=F(13, 6), n=50) for x in (16, 32, 64, 997)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_eval_precision_stability(monkeypatch):
    args = [("f1", F(5, 43), dict(q=2, c=F(43, 3), gamma=F(-11, 25), delta=0)),
            ("g_core", F(1, 7), dict(q=2, c4=F(43, 3))),
            ("h_prime", F(9, 10), dict(q=297, c4=F(37, 18))),
            ("g_pesky", F(1, 5), dict(gamma=F(-23, 40)))]
    base = [eval_fn(name, x, **kw) for name, x, kw in args]
    monkeypatch.setenv("SPFQ_PRECISION", "320")
    doubled = [eval_fn(name, x, **kw) for name, x, kw in args]
    with mp.workprec(400):
        for a, b in zip(base, doubled):
            assert abs((a - b) / b) < mp.mpf(10) ** -18


def test_eval_deterministic():
    a = eval_fn("F2", F(1, 5), q=3, c4=8, eta=F(39, 40))
    b = eval_fn("F2", F(1, 5), q=3, c4=8, eta=F(39, 40))
    assert a == b


# -- base certificates ---------------------------------------------------------------


def test_pesky_certificate_examples():
    rep = check_pesky_certificate(F(-11, 25), F(5, 43))
    assert rep.overall
    by_label = {c.label: c for c in rep.checks}
    assert by_label["g(5/43) vs published"].value > 0.0008
    assert by_label["g'(5/43) vs published"].value < -0.3
    assert check_pesky_certificate(F(-23, 40), F(1, 5)).overall
    assert check_pesky_certificate(F(-33, 250), F(1, 2000)).overall


def test_pesky_certificate_failure_reported_not_raised():
    rep = check_pesky_certificate(F(-11, 25), F(3, 4))   # far beyond validity
    assert not rep.overall


def test_power_certificate_examples():
    rep = check_power_certificate(2, F(-9, 20), F(1, 5))
    assert rep.overall
    assert any(c.value > 0.006 for c in rep.checks if "published" in c.label)
    assert check_power_certificate(30, F(-8, 7), F(1, 20)).overall
    bad = check_power_certificate(2, F(-9, 20), F(9, 10))
    assert not bad.overall


# -- row certificates ------------------------------------------------------------------


def test_small_beta_q2():
    row = cert_row(2)
    rep = check_small_beta(row, 2)
    assert rep.overall
    assert coefficient_margin(2, F(43, 3), F(-11, 25), F(0)) == F(709, 75)
    # the printed margin is still met (it undershoots the exact value)
    assert F(709, 75) > F(89, 15)


def test_small_beta_q3():
    rep = check_small_beta(cert_row(3), 3)
    assert rep.overall
    assert coefficient_margin(3, F(8), F(-23, 40), F(-9, 20)) == F(313, 80)


def test_small_beta_q47():
    rep = check_small_beta(cert_row(47), 47)
    assert rep.overall
    vals = {c.label: c.value for c in rep.checks}
    assert vals["f1(1/53)"] > 0.0002
    assert vals["f1(1/35)"] < -0.00001


def test_margin_values_match_published_quotes():
    expected = {
        3: F(313, 80), 4: F(31, 12), 5: F(907, 480), 7: F(271, 240),
        8: F(309, 350), 9: F(77, 120), 11: F(433, 800), 13: F(107, 240),
        16: F(4, 15), 23: F(133, 1320), 31: F(16, 315), 47: F(181, 13800),
        61: F(61, 6000), 73: F(19, 2700), 89: F(239, 66000),
    }
    for q, margin in expected.items():
        row = cert_row(q)
        assert coefficient_margin(q, row.c4, row.gamma, row.delta) == margin


def test_mid_beta_q2():
    rep = check_mid_beta(cert_row(2), 2)
    assert rep.overall
    vals = {c.label: c.value for c in rep.checks}
    assert vals["F1(6/43) at eta=99/100"] > 0.004
    assert vals["F2(5/43) at eta=99/100"] > 0.2
    assert vals["F1'(6/43)"] < -2.7
    assert vals["F2'(6/43)"] > 21


def test_mid_beta_q3_ladder():
    rep = check_mid_beta(cert_row(3), 3)
    assert rep.overall
    vals = {c.label: c.value for c in rep.checks}
    assert vals["F1(1/4) at eta=123/125"] > 0.0002
    assert vals["F2(6/25) at eta=123/125"] > 0.05


def test_mid_beta_q89_eta_anomaly():
    row = cert_row(89)
    rep = check_mid_beta(row, 89)
    assert rep.overall
    assert any("101/100" in a for a in rep.anomalies)
    final = row.eta_ladder[-1]
    assert final.eta == F(100, 101) and final.eta_published == F(101, 100)


def test_ladders_are_contiguous_and_reach_beta0():
    for row in CERT_ROWS:
        assert row.eta_ladder[0].lo == row.small_beta_end
        for a, b in zip(row.eta_ladder, row.eta_ladder[1:]):
            assert a.hi == b.lo
        assert row.eta_ladder[-1].hi == row.beta0
        assert row.small_beta_end < row.small_beta_witness


def test_f_decreasing_examples():
    rep = check_f_decreasing(16, F(13, 6), F(12, 13), 1)
    assert rep.overall
    cap = {c.label: c.value for c in rep.checks}["H(12/13)"]
    assert cap == pytest.approx(float(F(-1, 65) + F(1, 256)))
    assert float(F(-1, 65) + F(1, 256)) < -0.01
    assert check_f_decreasing(17, 3, F(2, 3), 100).overall
    with pytest.raises(PreconditionUnmet):
        check_f_decreasing(8, F(13, 6), F(12, 13), 1)


def test_all_rows_verify():
    res = verify_all(grid_points=2000)
    assert res["overall"]
    assert len(res["rows"]) == 16
    for rep in res["rows"]:
        assert rep.overall, (rep.name, failing(rep))


def test_verify_rejects_non_prime_power():
    with pytest.raises(NotPrimePower):
        verify_row(6)


def test_expected_anomaly_notes():
    res = verify_all(grid_points=2000)
    text = "\n".join(a for r in res["rows"] for a in r.anomalies)
    for fragment in ("-5/40", "-19/50", "101/100", "9/500", "2/11",
                     "89/15", "19/2700"):
        assert fragment in text, fragment


# -- grid scans ---------------------------------------------------------------------------


def test_grid_consistent_for_published_constants():
    scan = grid_check_core(2, F(43, 3), F(6, 43), 10_000)
    assert scan.max_gap <= 0 and scan.consistent
    scan = grid_check_core(3, 8, F(1, 4), 10_000)
    assert scan.consistent


def test_grid_negative_control():
    scan = grid_check_core(2, 14, F(1, 7), 10_000)
    assert scan.max_gap > 0
    assert scan.consistent is False


def test_grid_concordance_all_rows():
    for row in CERT_ROWS:
        scan = grid_check_core(row.q_lo, row.c4, row.beta0, 10_000)
        assert scan.consistent, row.label


def test_weakened_constants_break_every_eta_split():
    # converse smoke check: when the grid shows a positive gap at beta0, no
    # choice of eta can make both ladder functions nonnegative there
    from spfq.analysis import big_f1, big_f2
    beta0 = F(1, 7)
    for i in range(1, 40):
        eta = F(i, 40)
        ok1 = big_f1(beta0, 2, eta) >= 0
        ok2 = big_f2(beta0, 2, 14, eta) >= 0
        assert not (ok1 and ok2), eta


def test_grid_requires_enough_points():
    with pytest.raises(ValueError):
        grid_check_core(2, F(43, 3), F(6, 43), 10)


# -- plot samples -----------------------------------------------------------------------


def test_plot_two_point_contract():
    pts = plot_data(2, F(43, 3), F(6, 43), 2)
    assert len(pts) == 2
    assert pts[0][0] == pytest.approx(float(F(6, 43)) / 2)
    assert pts[1][0] == pytest.approx(float(F(6, 43)))


def test_plot_gaps_nonnegative_and_vanishing():
    pts = plot_data(2, F(43, 3), F(6, 43), 2000)
    assert all(g >= 0 for _, g in pts)
    # the gap vanishes toward 0+: the first samples shrink as the grid refines
    finer = plot_data(2, F(43, 3), F(6, 43), 20_000)
    assert finer[0][1] < pts[0][1]
    assert float(eval_fn("g_core", 1e-10, q=2, c4=F(43, 3)) - 1) == pytest.approx(0, abs=1e-7)
    pts3 = plot_data(3, 8, F(1, 4), 2000)
    assert all(g >= 0 for _, g in pts3)


# -- asymptotic suite ----------------------------------------------------------------------


def test_asymptotic_reference_case():
    rep = check_asymptotic(18, 297, 10_000)
    assert rep.overall, failing(rep)
    vals = {c.label: c.value for c in rep.checks}
    assert vals["first split term at beta0"] <= float(F(296, 297))
    assert vals["second split term at beta0"] <= float(F(1, 297))
    assert vals["g at beta0"] <= 1


def test_asymptotic_preconditions():
    with pytest.raises(PreconditionUnmet):
        check_asymptotic(18, 289)
    with pytest.raises(PreconditionUnmet):
        check_asymptotic(17, 297)


def test_asymptotic_other_cases():
    assert check_asymptotic(20, 329, 2000).overall
    assert check_asymptotic(18, 1009, 2000).overall


# -- budget and the tail oracle --------------------------------------------------------------


def test_budget_q2_reference():
    params = derive_params(2, F(1, 10))
    rep = rho_budget(params, 33)
    assert rep["ok"]
    assert rep["total"] <= F(1, 10)
    assert rep["theta_bound"] == F(6, 43) ** 3 / (1 - F(6, 43))
    assert rep["zeta_bound"] == F(2, 31)
    assert rep["rho1_bound"] == F(2, 512)
    assert rep["dense_bound"] == F(1, 256)


def test_budget_k_too_small():
    with pytest.raises(KTooSmall):
        rho_budget(derive_params(2, F(1, 10)), 10)


def test_budget_q89():
    rep = rho_budget(derive_params(89, F(1, 10)), 1211)
    assert rep["total"] <= F(1, 10)


def test_rho0_bruteforce_examples():
    lhs, rhs = rho0_bruteforce(2, 60, 69, 0)
    assert lhs <= rhs
    lhs, rhs = rho0_bruteforce(3, 49, 65, 10)
    assert lhs <= rhs
    lhs, rhs = rho0_bruteforce(2, 0, 11, 0)
    assert lhs == 0 and rhs == 0
    with pytest.raises(KTooLarge):
        rho0_bruteforce(2, 201, 212, 0)


def test_rho0_strict_upper_limit():
    # j runs strictly below k*beta0: at q=8, k=16, k*beta0 = 8 so j stops at 7
    lhs_a, rhs_a = rho0_bruteforce(8, 16, 40, 0)
    with mp.workprec(160):
        manual = sum((mp.mpf(j) / 16) ** j for j in range(1, 8))
        assert abs(rhs_a - manual) < mp.mpf(10) ** -30
