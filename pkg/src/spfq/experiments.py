"""Monte Carlo harness and brute-force oracles.

run_trials measures the full-rank success rate and the added-nonzero cost of
the preconditioner against the published guarantees.  The remaining routines
are exhaustive oracles on tiny instances: the Hamming-weight census of a row
space, the two weight-enumerator propositions, the binomial-coefficient
bound, and the exact rank-deficiency probability of fully random matrices.
Violations of the proposition checks are reported, not raised -- the claims
are theorems, so a violation means a code bug upstream.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from . import rng
from .errors import GenerationFailed, SpaceTooLarge, TooLarge
from .fields import Field, field_from_order, sample_vec
from .precision import mpf_frac, working_prec
from .preconditioner import plan, precondition
from .sparsemat import SparseMatrix, rank

F = Fraction


# -- rank-m test inputs ---------------------------------------------------------

def gen_rank_m(field: Field, m: int, n: int, density: float | None = None,
               seed: int = 0) -> SparseMatrix:
    """An m x n matrix of exact rank m: uniform rows (optionally thinned to
    the given nonzero density), dependent rows redrawn, at most 100 redraws.

    The returned matrix is re-verified with the rank routine.
    """
    if m > n:
        raise GenerationFailed(f"rank {m} impossible with {n} columns")
    gen = rng.stream(seed, "rank-m-input")
    draws = [_draw_row(field, n, density, gen) for _ in range(m)]
    M = SparseMatrix.from_row_arrays(field, n, draws)
    if rank(M) == m:
        return M
    # rare path: rebuild row by row, redrawing whatever fails to extend the rank
    accepted: list[np.ndarray] = []
    redraws = 0
    pool = list(draws)
    while len(accepted) < m:
        row = pool.pop(0) if pool else _draw_row(field, n, density, gen)
        cand = SparseMatrix.from_row_arrays(field, n, accepted + [row])
        if rank(cand) == len(accepted) + 1:
            accepted.append(row)
        else:
            redraws += 1
            if redraws > 100:
                raise GenerationFailed(f"more than 100 redraws at rank {len(accepted)}")
            pool.append(_draw_row(field, n, density, gen))
    M = SparseMatrix.from_row_arrays(field, n, accepted)
    if rank(M) != m:
        raise GenerationFailed("verification after rebuild failed")
    return M


def _draw_row(field: Field, n: int, density: float | None,
              gen: np.random.Generator) -> np.ndarray:
    if density is None:
        return sample_vec(field, gen, n)
    keep = gen.random(n) < density
    row = np.zeros(n, dtype=np.int64)
    count = int(keep.sum())
    if count:
        row[keep] = sample_vec(field, gen, count, mode="uniform_nonzero")
    return row


# -- Monte Carlo ------------------------------------------------------------------

@dataclass
class TrialStats:
    trials: int
    successes: int
    success_rate: float
    mean_added_nonzeros: float
    std_added_nonzeros: float
    max_added_nonzeros: int
    wall_time: float
    config: dict
    ci95: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "trials": self.trials, "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_added_nonzeros": self.mean_added_nonzeros,
            "std_added_nonzeros": self.std_added_nonzeros,
            "max_added_nonzeros": self.max_added_nonzeros,
            "wall_time": self.wall_time, "config": self.config,
            "ci95": list(self.ci95),
        }


def _wilson_ci(successes: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def run_trials(q: int, n: int, m: int, epsilon, trials: int, seed: int,
               density: float | None = None, log=None) -> TrialStats:
    """Repeated precondition-and-rank trials with per-trial derived seeds.

    Trial t draws a fresh rank-m input from a stream derived off the master
    seed and preconditions it with seed XOR t; when log is a writable stream,
    one CSV line "trial,seed,rank,added_nnz,success" is emitted per trial.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    field = field_from_order(q)
    t0 = time.perf_counter()
    successes = 0
    total_added = 0
    total_added_sq = 0
    max_added = 0
    if log is not None:
        log.write("trial,seed,rank,added_nnz,success\n")
    for t in range(trials):
        a_seed = rng.derive_seed(seed, "trial-input", t)
        A = gen_rank_m(field, m, n, density, a_seed)
        b_seed = seed ^ t
        B = precondition(A, epsilon, b_seed, check_rank=False)
        r = rank(B)
        added = B.nnz - A.nnz
        ok = r == n
        successes += ok
        total_added += added
        total_added_sq += added * added
        max_added = max(max_added, added)
        if log is not None:
            log.write(f"{t},{b_seed},{r},{added},{int(ok)}\n")
    wall = time.perf_counter() - t0
    mean = total_added / trials
    var = max(total_added_sq / trials - mean * mean, 0.0)
    return TrialStats(
        trials=trials, successes=successes, success_rate=successes / trials,
        mean_added_nonzeros=mean, std_added_nonzeros=math.sqrt(var),
        max_added_nonzeros=max_added, wall_time=wall,
        config={"q": q, "n": n, "m": m,
                "epsilon": [F(epsilon).numerator, F(epsilon).denominator],
                "seed": seed, "density": density},
        ci95=_wilson_ci(successes, trials))


def weight_gate(q: int, n: int, m: int, epsilon) -> float:
    """Expected-added-nonzeros bound for the route plan(q, n, m) selects."""
    p = plan(q, n, m, epsilon)
    params = p.params
    if p.path == "all_dense":
        return float(F(q - 1, q)) * p.added_rows * n
    return float(F(q - 1, q)) * (float(params.c3) * n * math.log(n)
                                 + (params.c2 + params.ell) * n)


# -- weight enumerators and the propositions ------------------------------------------

@dataclass
class WeightEnumerator:
    coefficients: tuple[int, ...]   # a[0..n]
    m: int
    q: int
    n: int


def weight_enum(basis: SparseMatrix) -> WeightEnumerator:
    """Exact Hamming-weight census of the q^m vectors spanned by the basis rows."""
    field = basis.field
    m, n, q = basis.rows, basis.cols, field.q
    if q ** m > 2 ** 20:
        raise SpaceTooLarge(f"{q}^{m} vectors exceed the enumeration cap 2^20")
    if rank(basis) != m:
        raise ValueError("basis rows are linearly dependent")
    vectors = np.zeros((1, n), dtype=np.int64)
    for i in range(m):
        row = np.zeros(n, dtype=np.int64)
        for c, v in basis.entries[i]:
            row[c] = v
        pieces = []
        for coef in range(q):
            shifted = field.add_vec(vectors, field.mul_scalar_vec(coef, row)[None, :])
            pieces.append(shifted)
        vectors = np.concatenate(pieces, axis=0)
    weights = np.count_nonzero(vectors, axis=1)
    counts = np.bincount(weights, minlength=n + 1)
    return WeightEnumerator(tuple(int(c) for c in counts), m, q, n)


def check_props_1_2(enum: WeightEnumerator, r_samples: int = 64) -> dict:
    """Both weight-enumerator facts, exactly and at sampled evaluation points.

    First: every prefix sum of a[] is at most the corresponding prefix sum of
    C(m,j)(q-1)^j.  Second: a(r) <= (1 + (q-1) r)^m for r in [0, 1], checked
    on an evenly spaced grid including both endpoints.
    """
    a = enum.coefficients
    q, m, n = enum.q, enum.m, enum.n
    prefix_ok = True
    worst_margin = None
    run_a = 0
    run_b = 0
    for i in range(n + 1):
        run_a += a[i]
        run_b += math.comb(m, i) * (q - 1) ** i if i <= m else 0
        margin = run_b - run_a
        if margin < 0:
            prefix_ok = False
        if worst_margin is None or margin < worst_margin:
            worst_margin = margin
    poly_ok = True
    worst_gap = None
    with mp.workprec(working_prec()):
        for s in range(r_samples):
            r = mp.mpf(s) / (r_samples - 1) if r_samples > 1 else mp.mpf(1)
            value = sum(mp.mpf(a[j]) * r ** j for j in range(n + 1) if a[j])
            bound = (1 + (q - 1) * r) ** m
            gap = bound - value
            if gap < -mp.mpf(10) ** -12:
                poly_ok = False
            gapf = float(gap)
            if worst_gap is None or gapf < worst_gap:
                worst_gap = gapf
    return {
        "prefix_bound_ok": prefix_ok,
        "prefix_worst_margin": worst_margin,
        "poly_bound_ok": poly_ok,
        "poly_worst_gap": worst_gap,
        "ok": prefix_ok and poly_ok,
        "total": sum(a),
    }


def check_binomial_bound(k_max: int) -> dict:
    """C(k,j) <= (beta^-beta (1-beta)^-(1-beta))^k for all 2 <= k <= k_max,
    exact integers against the working-precision right side."""
    if k_max > 500:
        raise ValueError("k_max capped at 500 for exact binomials")
    ok = True
    worst = None
    with mp.workprec(working_prec()):
        for k in range(2, k_max + 1):
            for j in range(1, k):
                beta = mpf_frac(F(j, k))
                rhs = (beta ** -beta * (1 - beta) ** -(1 - beta)) ** k
                lhs = mp.mpf(math.comb(k, j))
                ratio = float(lhs / rhs)
                if lhs > rhs:
                    ok = False
                if worst is None or ratio > worst[0]:
                    worst = (ratio, k, j)
    return {"ok": ok, "k_max": k_max,
            "worst_ratio": worst[0], "worst_at": worst[1:]}


def exhaustive_dense_lemma(q: int, n: int, ell: int) -> tuple[Fraction, Fraction]:
    """Exact P(rank < n) over all (n+ell) x n matrices with uniform entries,
    next to the q^-ell tail bound it must not exceed (the m = 0 case)."""
    field = field_from_order(q)
    nrows = n + ell
    cells = nrows * n
    if q ** cells > 2 ** 24:
        raise TooLarge(f"{q}^{cells} matrices exceed the enumeration cap 2^24")
    deficient = 0
    total = q ** cells
    for index in range(total):
        mat = []
        v = index
        for _ in range(nrows):
            row = []
            for _ in range(n):
                v, d = divmod(v, q)
                row.append(d)
            mat.append(row)
        if _tiny_rank(field, mat, n) < n:
            deficient += 1
    return F(deficient, total), F(1, q ** ell)


def _tiny_rank(field: Field, mat: list[list[int]], ncols: int) -> int:
    rows = [r[:] for r in mat if any(r)]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [field.sub(x, field.mul(f, y))
                           for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def random_subspace_report(count: int, seed: int, q_choices=(2, 3, 4),
                           m_max: int = 10, r_samples: int = 32) -> dict:
    """Proposition checks over `count` random subspaces with q <= 4, m <= m_max."""
    gen = rng.stream(seed, "subspaces")
    failures = []
    for trial in range(count):
        q = int(gen.choice(list(q_choices)))
        field = field_from_order(q)
        m = int(gen.integers(0, m_max + 1))
        span_cap = int(math.log(2 ** 20, q))
        m = min(m, span_cap)
        n = int(gen.integers(max(m, 1), max(m, 1) + 8))
        basis = gen_rank_m(field, m, n, None,
                           rng.derive_seed(seed, "subspace-basis", trial))
        enum = weight_enum(basis)
        rep = check_props_1_2(enum, r_samples)
        if not rep["ok"] or rep["total"] != q ** m:
            failures.append({"trial": trial, "q": q, "m": m, "n": n, "report": rep})
    return {"count": count, "failures": failures, "ok": not failures}
