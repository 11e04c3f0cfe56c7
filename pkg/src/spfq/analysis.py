"""Evaluation of the rank-bound analysis functions and certificate checks.

Every claim behind the field-size table reduces to finitely many numeric
facts: endpoint values of explicit functions and signs of their derivatives.
This module evaluates those functions in high-precision arithmetic (mpmath,
160-bit default, SPFQ_PRECISION override) and replays each certificate as a
list of labelled checks.  A value landing within 1e-12 of its threshold is
reported as inconclusive instead of pass/fail; rational quantities (margins,
interval endpoints, probability budgets) are compared exactly as fractions.

Dense grid scans run in float64 (numpy) as an independent second line of
evidence, with the extremal points re-evaluated in mpmath before anything is
concluded from them.  Neither path substitutes for a symbolic proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .certdata import CERT_ROWS, PESKY_CERTS, POWER_CERTS, CertificateRow, Quoted, cert_row
from .errors import DomainError, KTooLarge, KTooSmall, PreconditionUnmet
from .params import PreconditionerParams
from .precision import mpf_frac, working_prec

F = Fraction


# -- the analysis functions ------------------------------------------------------

def f_of_x(x, beta, c4, n):
    """(x-1)^beta * (1/x + (1 - 1/x) (n x)^(-c4 beta)): the field-size factor."""
    x, beta, c4, n = map(mpf_frac, (x, beta, c4, n))
    if x <= 1:
        raise DomainError("f is defined for x > 1")
    return (x - 1) ** beta * (1 / x + (1 - 1 / x) * (n * x) ** (-c4 * beta))


def f1(beta, q, c, gamma, delta):
    """beta^beta - beta^(beta(gamma-1)) (beta^(beta delta)/q + (q-1)/q beta^(beta c))."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c, gamma, delta = map(mpf_frac, (q, c, gamma, delta))
    bb = b ** b
    return bb - b ** (b * (gamma - 1)) * (b ** (b * delta) / q
                                          + (q - 1) / q * b ** (b * c))


def big_f1(x, q, eta):
    """2x ln x + (1-x) ln(1-x) - x ln(q-1) + ln q + ln eta."""
    x = mpf_frac(x)
    _check_unit_interval(x)
    q, eta = mpf_frac(q), mpf_frac(eta)
    if eta <= 0:
        raise DomainError("eta must be positive")
    return (2 * x * mp.log(x) + (1 - x) * mp.log(1 - x)
            - x * mp.log(q - 1) + mp.log(q) + mp.log(eta))


def big_f1_prime(x, q):
    x = mpf_frac(x)
    _check_unit_interval(x)
    q = mpf_frac(q)
    return 1 + 2 * mp.log(x) - mp.log(1 - x) - mp.log(q - 1)


def big_f2(x, q, c4, eta):
    """(2-c4)x ln x + (1-x)ln(1-x) + (c4 x+1)ln q - (x+1)ln(q-1) + ln(1-eta)."""
    x = mpf_frac(x)
    _check_unit_interval(x)
    q, c4, eta = mpf_frac(q), mpf_frac(c4), mpf_frac(eta)
    if eta >= 1:
        raise DomainError("eta must be below 1")
    return ((2 - c4) * x * mp.log(x) + (1 - x) * mp.log(1 - x)
            + (c4 * x + 1) * mp.log(q) - (x + 1) * mp.log(q - 1)
            + mp.log(1 - eta))


def big_f2_prime(x, q, c4):
    x = mpf_frac(x)
    _check_unit_interval(x)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    return ((1 - c4) + (2 - c4) * mp.log(x) - mp.log(1 - x)
            + c4 * mp.log(q) - mp.log(q - 1))


def g_core(beta, q, c4):
    """(q-1)^b / (b^(2b) (1-b)^(1-b)) * (1/q + (q-1)/q (b/q)^(c4 b)).

    The table certificates amount to g_core <= 1 on (0, beta0]."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    return ((q - 1) ** b / (b ** (2 * b) * (1 - b) ** (1 - b))
            * (1 / q + (q - 1) / q * (b / q) ** (c4 * b)))


def h_log(beta, q, c4):
    """ln g_core, written as a sum of logarithms."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    return (b * mp.log(q - 1) - 2 * b * mp.log(b) - (1 - b) * mp.log(1 - b)
            + mp.log(1 / q + (q - 1) / q * (b / q) ** (c4 * b)))


def big_h(beta, q, c4):
    """(q-1)(beta/q)^(c4 beta)."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    return (q - 1) * (b / q) ** (c4 * b)


def h_prime(beta, q, c4):
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    H = (q - 1) * (b / q) ** (c4 * b)
    return (mp.log(q - 1) - 2 * mp.log(b) + mp.log(1 - b) - 1
            + H / (H + 1) * (c4 + c4 * mp.log(b) - c4 * mp.log(q)))


def g1(beta, q, c4):
    """Contribution of the 1/q term to g_core."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q = mpf_frac(q)
    return (q - 1) ** b / (b ** (2 * b) * (1 - b) ** (1 - b)) / q


def g2(beta, q, c4):
    """Contribution of the (beta/q)^(c4 beta) term to g_core."""
    b = mpf_frac(beta)
    _check_unit_interval(b)
    q, c4 = mpf_frac(q), mpf_frac(c4)
    return ((q - 1) ** b / (b ** (2 * b) * (1 - b) ** (1 - b))
            * (q - 1) / q * (b / q) ** (c4 * b))


def g_pesky(x, gamma):
    """gamma x ln x + (1-x) ln(1-x); nonnegative iff (1-x)^-(1-x) <= x^(gamma x)."""
    x = mpf_frac(x)
    _check_unit_interval(x)
    gamma = mpf_frac(gamma)
    return gamma * x * mp.log(x) + (1 - x) * mp.log(1 - x)


def g_pesky_prime(x, gamma):
    x = mpf_frac(x)
    _check_unit_interval(x)
    gamma = mpf_frac(gamma)
    return gamma * mp.log(x) - mp.log(1 - x) + gamma - 1


def h_power(x, zeta, delta):
    """delta x ln x - x ln zeta; nonnegative iff zeta^x <= x^(delta x)."""
    x = mpf_frac(x)
    if x <= 0:
        raise DomainError("x must be positive")
    zeta, delta = mpf_frac(zeta), mpf_frac(delta)
    return delta * x * mp.log(x) - x * mp.log(zeta)


def decreasing_cap(beta, n):
    """(16/15) beta - 1 + (16n)^(-13 beta / 6): the field-size-16 majorant."""
    beta, n = mpf_frac(beta), mpf_frac(n)
    return mpf_frac(F(16, 15)) * beta - 1 + (16 * n) ** (-mpf_frac(F(13, 6)) * beta)


def _check_unit_interval(x):
    if not 0 < x < 1:
        raise DomainError(f"argument {x} outside (0, 1)")


EVAL_FUNCS = {
    "f": (f_of_x, ("beta", "c4", "n")),
    "f1": (f1, ("q", "c", "gamma", "delta")),
    "F1": (big_f1, ("q", "eta")),
    "F2": (big_f2, ("q", "c4", "eta")),
    "g_core": (g_core, ("q", "c4")),
    "h_log": (h_log, ("q", "c4")),
    "h_prime": (h_prime, ("q", "c4")),
    "H_big": (big_h, ("q", "c4")),
    "g1": (g1, ("q", "c4")),
    "g2": (g2, ("q", "c4")),
    "g_pesky": (g_pesky, ("gamma",)),
    "h_power": (h_power, ("zeta", "delta")),
}


def eval_fn(name: str, x, **params):
    """Evaluate a named analysis function at x under the working precision."""
    if name not in EVAL_FUNCS:
        raise KeyError(f"unknown analysis function {name!r}")
    fn, wanted = EVAL_FUNCS[name]
    missing = [w for w in wanted if w not in params]
    if missing:
        raise TypeError(f"{name} needs parameters {missing}")
    with mp.workprec(working_prec()):
        return fn(x, **{w: params[w] for w in wanted})


# -- check plumbing ----------------------------------------------------------------

@dataclass
class CheckResult:
    label: str
    requirement: str
    value: float
    passed: bool | None     # None = within the inconclusive band
    note: str = ""

    def to_dict(self):
        return {"label": self.label, "requirement": self.requirement,
                "value": self.value,
                "passed": self.passed if self.passed is not None else "inconclusive",
                "note": self.note}


@dataclass
class CertificateReport:
    name: str
    checks: list[CheckResult] = field(default_factory=list)
    anomalies: list[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed is True for c in self.checks)

    def extend(self, other: "CertificateReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.label, c.requirement,
                                           c.value, c.passed, c.note))
        self.anomalies.extend(other.anomalies)

    def to_dict(self):
        return {"name": self.name, "overall": self.overall,
                "checks": [c.to_dict() for c in self.checks],
                "anomalies": self.anomalies}


def _fmt_bound(b) -> str:
    if isinstance(b, Fraction):
        scaled = b * 10 ** 12
        if scaled.denominator == 1:  # decimal with <= 12 places
            return f"{float(b):.12g}"
        return f"{b.numerator}/{b.denominator}"
    return mp.nstr(b, 8)


def _num_check(report, label, value, op, bound, note=""):
    """Record a high-precision comparison with the inconclusive band."""
    bv = mpf_frac(bound) if isinstance(bound, (Fraction, int)) else bound
    diff = value - bv
    band = mp.mpf(10) ** -12
    if abs(diff) <= band:
        passed = None
    elif op in (">", ">="):
        passed = bool(diff > 0)
    else:
        passed = bool(diff < 0)
    report.checks.append(CheckResult(label, f"{op} {_fmt_bound(bound)}",
                                     float(value), passed, note))
    return passed


def _exact_check(report, label, value: Fraction, op, bound: Fraction, note=""):
    ops = {">": value > bound, ">=": value >= bound,
           "<": value < bound, "<=": value <= bound}
    passed = ops[op]
    report.checks.append(CheckResult(label, f"{op} {_fmt_bound(bound)}",
                                     float(value), passed, note))
    return passed


def _quoted_note(q: Quoted) -> str:
    if q.effective is not None:
        return f"published {_fmt_bound(q.published)}; {q.note}"
    return q.note


def _note_anomaly(report: CertificateReport, label: str, q: Quoted):
    if q.note:
        report.anomalies.append(f"{label}: {_quoted_note(q)}")


# -- base certificates ---------------------------------------------------------------

def check_pesky_certificate(gamma, delta_end) -> CertificateReport:
    """Certify (1-x)^-(1-x) <= x^(gamma x) on (0, delta_end]."""
    gamma, delta_end = F(gamma), F(delta_end)
    rep = CertificateReport(f"pesky-factor bound, gamma={gamma}")
    with mp.workprec(working_prec()):
        gv = g_pesky(delta_end, gamma)
        gp = g_pesky_prime(delta_end, gamma)
        _num_check(rep, f"g({delta_end})", gv, ">=", F(0))
        _num_check(rep, f"g'({delta_end})", gp, "<", F(0))
        known = PESKY_CERTS.get(gamma)
        if known is not None and known.x_end == delta_end:
            _num_check(rep, f"g({delta_end}) vs published", gv, ">",
                       known.g_min.bound, _quoted_note(known.g_min))
            _num_check(rep, f"g'({delta_end}) vs published", gp, "<",
                       known.gprime_max.bound, _quoted_note(known.gprime_max))
            _note_anomaly(rep, f"g({delta_end})", known.g_min)
            _note_anomaly(rep, f"g'({delta_end})", known.gprime_max)
    return rep


def check_power_certificate(zeta: int, delta, rho) -> CertificateReport:
    """Certify zeta^x <= x^(delta x) on (0, rho]."""
    delta, rho = F(delta), F(rho)
    rep = CertificateReport(f"power-factor bound, zeta={zeta}, delta={delta}")
    with mp.workprec(working_prec()):
        hv = h_power(rho, zeta, delta)
        _num_check(rep, f"h({rho})", hv, ">=", F(0))
        known = POWER_CERTS.get((zeta, delta))
        if known is not None and known.rho == rho:
            _num_check(rep, f"h({rho}) vs published", hv, ">",
                       known.h_min.bound, _quoted_note(known.h_min))
            _note_anomaly(rep, f"h({rho})", known.h_min)
    return rep


# -- per-row certificates --------------------------------------------------------------

def coefficient_margin(q: int, c4: Fraction, gamma: Fraction, delta: Fraction) -> Fraction:
    """c4 minus the exponent-count requirement 2q/(q-1) - delta/(q-1) - q gamma/(q-1)."""
    return c4 - (F(2 * q, q - 1) - delta / (q - 1) - F(q) * gamma / (q - 1))


def check_small_beta(row: CertificateRow, q: int) -> CertificateReport:
    """Replay the sign-count certificate for (0, small_beta_end]."""
    if not row.covers(q):
        raise PreconditionUnmet(f"row {row.label} does not cover q = {q}")
    rep = CertificateReport(f"small-beta certificate, {row.label}")
    rep.anomalies.extend(row.notes)
    qa = row.q_lo
    if q != qa:
        rep.anomalies.append(
            f"evaluated at the row base q={qa}; q={q} is covered by the "
            f"decreasing-f delegation check")
    margin = coefficient_margin(q, row.c4, row.gamma, row.delta)
    _exact_check(rep, "coefficient margin", margin, ">", F(0))
    _exact_check(rep, "coefficient margin vs published", margin, ">=",
                 row.margin_quoted.bound, _quoted_note(row.margin_quoted))
    _note_anomaly(rep, "coefficient margin", row.margin_quoted)
    _note_anomaly(rep, "small-interval lower bound", row.f1_low_min)
    _note_anomaly(rep, "small-interval upper bound", row.f1_high_max)
    d, dh = row.small_beta_end, row.small_beta_witness
    _exact_check(rep, "interval end below witness", d, "<", dh)
    pesky = PESKY_CERTS[row.gamma]
    _exact_check(rep, "interval end within pesky validity", d, "<=", pesky.x_end)
    if row.delta != 0:
        power = POWER_CERTS[(qa - 1, row.delta)]
        _exact_check(rep, "interval end within power validity", d, "<=", power.rho)
    with mp.workprec(working_prec()):
        _num_check(rep, "witness below 1/e", mpf_frac(dh), "<=", mp.exp(-1))
        lo = f1(d, qa, row.c4, row.gamma, row.delta)
        hi = f1(dh, qa, row.c4, row.gamma, row.delta)
        _num_check(rep, f"f1({d})", lo, ">=", F(0))
        _num_check(rep, f"f1({d}) vs published", lo, ">", row.f1_low_min.bound,
                   _quoted_note(row.f1_low_min))
        _num_check(rep, f"f1({dh})", hi, "<", F(0))
        _num_check(rep, f"f1({dh}) vs published", hi, "<", row.f1_high_max.bound,
                   _quoted_note(row.f1_high_max))
    return rep


def check_mid_beta(row: CertificateRow, q: int) -> CertificateReport:
    """Replay the eta-ladder covering [small_beta_end, beta0]."""
    if not row.covers(q):
        raise PreconditionUnmet(f"row {row.label} does not cover q = {q}")
    rep = CertificateReport(f"mid-beta ladder, {row.label}")
    qa = row.q_lo
    xstar = 1 + 1 / (1 - row.c4)   # inflection of the second ladder function
    if row.beta0 <= xstar:
        expect_at, case = row.beta0, "monotone up to beta0"
    elif row.small_beta_end <= xstar:
        expect_at, case = xstar, "minimum slope at the inflection"
    else:
        expect_at, case = row.small_beta_end, "monotone from the interval start"
    if expect_at != row.f2prime_at:
        rep.anomalies.append(
            f"monotonicity checked at {row.f2prime_at} but case analysis "
            f"gives {expect_at}")
    with mp.workprec(working_prec()):
        f1p = big_f1_prime(row.beta0, qa)
        _num_check(rep, f"F1'({row.beta0})", f1p, "<", F(0))
        _num_check(rep, f"F1'({row.beta0}) vs published", f1p, "<",
                   row.f1prime_max.bound, _quoted_note(row.f1prime_max))
        f2p = big_f2_prime(row.f2prime_at, qa, row.c4)
        _num_check(rep, f"F2'({row.f2prime_at})", f2p, ">=", F(0), case)
        _num_check(rep, f"F2'({row.f2prime_at}) vs published", f2p, ">",
                   row.f2prime_min.bound, _quoted_note(row.f2prime_min))
        _note_anomaly(rep, "monotonicity slope", row.f2prime_min)
        prev_hi = row.small_beta_end
        for step in row.eta_ladder:
            if step.note:
                rep.anomalies.append(f"step [{step.lo},{step.hi}]: {step.note}")
            _exact_check(rep, f"eta={step.eta} inside (0,1)", step.eta, "<", F(1))
            _exact_check(rep, f"ladder contiguous at {step.lo}", step.lo, ">=",
                         prev_hi)
            v1 = big_f1(step.hi, qa, step.eta)
            v2 = big_f2(step.lo, qa, row.c4, step.eta)
            _num_check(rep, f"F1({step.hi}) at eta={step.eta}", v1, ">=", F(0))
            _num_check(rep, f"F1({step.hi}) vs published", v1, ">",
                       step.f1_min.bound, _quoted_note(step.f1_min))
            _num_check(rep, f"F2({step.lo}) at eta={step.eta}", v2, ">=", F(0))
            _num_check(rep, f"F2({step.lo}) vs published", v2, ">",
                       step.f2_min.bound, _quoted_note(step.f2_min))
            _note_anomaly(rep, f"step [{step.lo},{step.hi}] first bound", step.f1_min)
            _note_anomaly(rep, f"step [{step.lo},{step.hi}] second bound", step.f2_min)
            prev_hi = step.hi
        _exact_check(rep, "ladder reaches beta0", prev_hi, ">=", row.beta0)
    return rep


def check_f_decreasing(q: int, c4, beta0, n: int) -> CertificateReport:
    """Certify that the field-size factor decreases for x >= q (q >= 16)."""
    c4, beta0 = F(c4), F(beta0)
    if q < 16:
        raise PreconditionUnmet(f"delegation requires q >= 16, got {q}")
    if beta0 > F(12, 13) or c4 < F(13, 6) or c4 * beta0 > 2 or n < 1:
        raise PreconditionUnmet("delegation requires beta0 <= 12/13, "
                                "c4 >= 13/6, c4*beta0 <= 2, n >= 1")
    rep = CertificateReport(f"decreasing field-size factor, q={q}, n={n}")
    _exact_check(rep, "q above 1 + 1/(c4-1)", F(q), ">", 1 + 1 / (c4 - 1))
    cap_end = F(64, 65) - 1 + F(1, (16 * n) ** 2)
    _exact_check(rep, "H(12/13)", cap_end, "<", F(0))
    _exact_check(rep, "H(12/13) vs published", cap_end, "<=",
                 F(-1, 65) + F(1, 256),
                 "worst case n = 1 gives -1/65 + 1/256 < -0.01")
    with mp.workprec(working_prec()):
        slope0 = mpf_frac(F(16, 15)) - mpf_frac(F(13, 6)) * mp.log(16 * n)
        _num_check(rep, "initial slope of the majorant", slope0, "<", F(-4))
    return rep


# -- grid scans -------------------------------------------------------------------------

@dataclass
class GridScan:
    max_gap: float
    beta_at_max: float
    grid_points: int
    consistent: bool | None   # max gap <= 0, None if inside the band

    def to_dict(self):
        return {"max_gap": self.max_gap, "beta_at_max": self.beta_at_max,
                "grid_points": self.grid_points,
                "consistent": self.consistent if self.consistent is not None
                else "inconclusive"}


def _core_log_np(beta: np.ndarray, q: float, c4: float) -> np.ndarray:
    """ln g_core, vectorized in float64."""
    lb = np.log(beta)
    return (beta * math.log(q - 1) - 2 * beta * lb
            - (1 - beta) * np.log1p(-beta)
            + np.log(1 / q + (q - 1) / q * np.exp(c4 * beta * (lb - math.log(q)))))


def _h_prime_np(beta: np.ndarray, q: float, c4: float) -> np.ndarray:
    lb = np.log(beta)
    H = (q - 1) * np.exp(c4 * beta * (lb - math.log(q)))
    return (math.log(q - 1) - 2 * lb + np.log1p(-beta) - 1
            + H / (H + 1) * (c4 + c4 * lb - c4 * math.log(q)))


def grid_check_core(q: int, c4, beta0, grid_points: int) -> GridScan:
    """Max of g_core - 1 over a uniform grid on (0, beta0].

    The scan runs in float64; the extremal candidates are re-evaluated at the
    working precision before the verdict.  Consistency with a row certificate
    means the returned maximum is nonpositive.
    """
    if grid_points < 1000:
        raise ValueError("grid_points must be at least 1000")
    c4, beta0 = F(c4), F(beta0)
    b0 = float(beta0)
    grid = b0 * np.arange(1, grid_points + 1) / grid_points
    gaps = np.expm1(_core_log_np(grid, float(q), float(c4)))
    order = np.argsort(gaps)[::-1]
    cand = order[:8]
    with mp.workprec(working_prec()):
        best_val = None
        best_beta = None
        for i in cand:
            bexact = beta0 * F(int(i) + 1, grid_points)
            v = g_core(bexact, q, c4) - 1
            if best_val is None or v > best_val:
                best_val, best_beta = v, bexact
        band = mp.mpf(10) ** -12
        if abs(best_val) <= band:
            consistent = None
        else:
            consistent = bool(best_val < 0)
    return GridScan(float(best_val), float(best_beta), grid_points, consistent)


def plot_data(q: int, c4, beta0, points: int) -> list[tuple[float, float]]:
    """Samples of beta^beta * (1 - g_core) on (0, beta0], the published plot shape."""
    if points < 2:
        raise ValueError("need at least two sample points")
    c4, beta0 = F(c4), F(beta0)
    b0 = float(beta0)
    grid = b0 * np.arange(1, points + 1) / points
    lg = _core_log_np(grid, float(q), float(c4))
    gap = -np.power(grid, grid) * np.expm1(lg)
    return list(zip(grid.tolist(), gap.tolist()))


# -- asymptotic suite ----------------------------------------------------------------------

_STAGES = (
    # (a, b, bound for the shape factor, start bound, end bound)
    ("low", None, F(1, 75), F(2), F(397, 400), F(3, 400)),
    ("mid1", F(1, 75), F(1, 4), F(3), F(19, 20), F(1, 20)),
    ("mid2", F(1, 4), F(2, 3), F(3), F(1, 3), F(2, 3)),
    ("mid3", F(2, 3), F(4, 5), F(5, 2), F(1, 20), F(19, 20)),
    ("mid4", F(4, 5), F(7, 8), F(99, 50), F(23, 1000), F(977, 1000)),
)


def _shape_factor(x):
    """(1-x)^(x-1) / x^(2x), the unimodal factor bounding g1."""
    x = mpf_frac(x)
    return (1 - x) ** (x - 1) / x ** (2 * x)


def check_asymptotic(N: int, q: int, grid_points: int = 10_000) -> CertificateReport:
    """Replay the three-interval argument for c4 = 2 + 1/N, q >= 16N + 9."""
    if not isinstance(N, int) or N < 18:
        raise PreconditionUnmet(f"N must be an integer >= 18, got {N}")
    if q < 16 * N + 9:
        raise PreconditionUnmet(f"q = {q} < 16N+9 = {16 * N + 9}")
    if grid_points < 100:
        raise ValueError("grid_points must be at least 100")
    c4 = 2 + F(1, N)
    beta0 = F(2 * N, 2 * N + 1)
    rep = CertificateReport(f"asymptotic suite, N={N}, q={q}")
    qf, c4f = float(q), float(c4)
    with mp.workprec(working_prec()):
        beta_low = 1 / (50 * mpf_frac(c4) * mp.log(q))
        _num_check(rep, "first interval ends before 1/75", beta_low, "<", F(1, 75))
        # interval 1: g -> 1 from below, h' < 0 throughout
        limit_gap = g_core(mp.mpf(10) ** -8, q, c4) - 1
        _num_check(rep, "g at 1e-8 within 1e-6 of the limit 1",
                   abs(limit_gap), "<", F(1, 10 ** 6))
        grid1 = np.geomspace(1e-9, float(beta_low), grid_points)
        hp1 = _h_prime_np(grid1, qf, c4f)
        hworst = h_prime(mp.mpf(grid1[int(np.argmax(hp1))]), q, c4)
        _num_check(rep, "h' below 0 on the first interval (grid max)",
                   hworst, "<", F(0),
                   f"float64 grid max {float(np.max(hp1)):.3g}")
        # interval 2: staged split bounds, worst-case coefficients at q = 297
        xstar = (mp.sqrt(1 + 4 * mp.e) - 1) / (2 * mp.e)
        # decreasing envelope of the second split term: (1 - 1/q)(e/q^(c4-1))^beta
        qpow = mp.mpf(q) ** (mpf_frac(c4) - 1)
        for name, a, b, kb, start_bound, end_bound in _STAGES:
            av = beta_low if a is None else mpf_frac(a)
            cands = [av, mpf_frac(b)]
            if av < xstar < mpf_frac(b):
                cands.append(xstar)
            kmax = max(_shape_factor(x) for x in cands)
            _num_check(rep, f"{name}: shape factor within {kb}", kmax, "<=",
                       kb, "unimodal; endpoints and the critical point checked")
            ub2 = (1 - 1 / mp.mpf(q)) * (mp.e / qpow) ** av
            _num_check(rep, f"{name}: start bound", ub2, "<", start_bound)
            ub1 = mpf_frac(kb) / 297 * mp.mpf(296) ** mpf_frac(b)
            _num_check(rep, f"{name}: end bound", ub1, "<", end_bound)
            _exact_check(rep, f"{name}: bounds add to at most 1",
                         start_bound + end_bound, "<=", F(1))
        # interval 3: h' > 0, endpoint split
        grid3 = np.linspace(7 / 8, float(beta0), grid_points)
        hp3 = _h_prime_np(grid3, qf, c4f)
        wix = int(np.argmin(hp3))
        hmin = h_prime(mp.mpf(grid3[wix]), q, c4)
        _num_check(rep, "h' above 0 on the last interval (grid min)", hmin,
                   ">", F(0), f"float64 grid min {float(np.min(hp3)):.3g}")
        v1 = g1(beta0, q, c4)
        v2 = g2(beta0, q, c4)
        _num_check(rep, "first split term at beta0", v1, "<=",
                   F(16 * N + 8, 16 * N + 9))
        _num_check(rep, "second split term at beta0", v2, "<=",
                   F(1, 16 * N + 9))
        _num_check(rep, "g at beta0", v1 + v2, "<=", F(1))
    return rep


# -- probability budget and the brute-force tail oracle --------------------------------------

def rho_budget(params: PreconditionerParams, k: int) -> dict:
    """Exact failure-budget split for k sparse rows (k >= the table minimum)."""
    if k < params.k_min:
        raise KTooSmall(f"k = {k} below the row minimum {params.k_min}")
    eps = params.epsilon
    theta = params.beta0 ** (params.delta + 1) / (1 - params.beta0)
    zeta = F(params.delta, k - params.delta)
    rho1 = F(2, params.q ** params.c2)
    if params.ell > 0:
        dense = F(1, params.q ** params.ell)
    elif params.q >= 3:
        dense = F(1, params.q - 1)
    else:
        dense = F(1)
    total = theta + zeta + rho1 + dense
    checks = [
        ("tail beyond the split point", theta, eps / 10),
        ("head of the split", zeta, 4 * eps / 5),
        ("heavy combinations", rho1, eps / 20),
        ("dense completion", dense, eps / 20),
        ("total", total, eps),
    ]
    for label, value, bound in checks:
        assert value <= bound, f"budget item {label!r}: {value} > {bound}"
    return {
        "theta_bound": theta, "zeta_bound": zeta, "rho1_bound": rho1,
        "dense_bound": dense, "total": total, "epsilon": eps, "k": k,
        "checks": [{"label": lab, "value": float(v), "bound": float(b),
                    "ok": v <= b} for lab, v, b in checks],
        "ok": True,
    }


def rho0_bruteforce(q: int, k: int, n: int, m: int, c4=None, beta0=None):
    """Both sides of the sparse-tail inequality, summed exactly.

    Left: sum over 1 <= j < k*beta0 of C(k,j)(q-1)^j (1/q + (q-1)/q (nq)^(-c4 j/k))^(n-m),
    with exact big-integer binomials and the analytic factor in working precision.
    Right: sum of (j/k)^j over the same range.  This is the end-to-end oracle
    for the certificate chain; the certified claim is left <= right.
    """
    if k > 200:
        raise KTooLarge(f"k = {k} exceeds the exact-binomial cap 200")
    if k < 0 or m < 0:
        raise ValueError("k and m must be nonnegative")
    if c4 is None or beta0 is None:
        from .params import find_row
        row = find_row(q)
        c4 = row.c4 if c4 is None else F(c4)
        beta0 = row.beta0 if beta0 is None else F(beta0)
    c4, beta0 = F(c4), F(beta0)
    if k and n < m + k + 2:
        raise ValueError("n must allow at least two dense completion rows")
    kb = beta0 * k
    j_max = -((-kb.numerator) // kb.denominator) - 1   # largest j strictly below k*beta0
    with mp.workprec(working_prec()):
        lhs = mp.mpf(0)
        rhs = mp.mpf(0)
        for j in range(1, j_max + 1):
            comb = math.comb(k, j) * (q - 1) ** j
            base = (1 / mp.mpf(q)
                    + mpf_frac(F(q - 1, q)) * mp.mpf(n * q) ** (-mpf_frac(c4 * F(j, k))))
            lhs += mp.mpf(comb) * base ** (n - m)
            rhs += mpf_frac(F(j, k)) ** j
    return lhs, rhs


# -- row-level and global verification ---------------------------------------------------------

def verify_row(q: int, grid_points: int = 10_000) -> CertificateReport:
    """All certificate checks backing the field-size row that covers q."""
    from .errors import NotPrimePower
    from .fields import prime_power

    if prime_power(q) is None:
        raise NotPrimePower(f"{q} is not a prime power")
    row = cert_row(q)
    rep = CertificateReport(row.label)
    rep.extend(check_pesky_certificate(row.gamma, PESKY_CERTS[row.gamma].x_end),
               prefix="pesky: ")
    if row.delta != 0:
        power = POWER_CERTS[(row.q_lo - 1, row.delta)]
        rep.extend(check_power_certificate(power.zeta, power.delta, power.rho),
                   prefix="power: ")
    rep.extend(check_small_beta(row, q), prefix="small: ")
    rep.extend(check_mid_beta(row, q), prefix="mid: ")
    scan = grid_check_core(row.q_lo, row.c4, row.beta0, grid_points)
    rep.checks.append(CheckResult(
        f"grid: max gap over {grid_points} points", "<= 0", scan.max_gap,
        scan.consistent, f"attained near beta = {scan.beta_at_max:.6g}"))
    if row.q_hi != row.q_lo:
        rep.extend(check_f_decreasing(row.q_lo, row.c4, row.beta0, 1),
                   prefix="delegate: ")
    return rep


def verify_all(grid_points: int = 10_000, asym_n: int = 18,
               asym_q: int | None = None) -> dict:
    """Certificate reports for all sixteen rows plus the asymptotic suite."""
    rows = [verify_row(r.q_lo, grid_points) for r in CERT_ROWS]
    if asym_q is None:
        asym_q = 16 * asym_n + 9
    asym = check_asymptotic(asym_n, asym_q, grid_points)
    overall = all(r.overall for r in rows) and asym.overall
    return {"rows": rows, "asymptotic": asym, "overall": overall}
