"""Randomized row generation that restores full column rank.

Given a full-row-rank m x n matrix over GF(q) (or just its shape), emit
n - m + ell rows so that the stacked matrix reaches rank n with probability
at least 1 - epsilon.  Three routes:

  sparse      k = n - m - c2 rows with entries zeroed independently with
              probability z = 1 - c3 ln(n)/k and the rest drawn uniformly
              from the whole field, followed by c2 + ell dense uniform rows.
  all_dense   n - m + ell dense uniform rows (k too small for the sparse
              route to pay off, or its tail bound to apply).
  large_field q > n^2: the sparsity pattern is planned as if the field had
              q_hat = largest prime power <= n^2 elements (with ell = 0),
              while the realized values are drawn uniformly from the actual
              field, which plays the role of the size->=n^2 sample set.

Row i of a generation is always drawn from the stream (seed, "row", i), so
rows may be produced in any order -- or in parallel -- without changing the
output for a fixed master seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import BadShape, RankDeficientInput, WrongPath
from .fields import Field, largest_prime_power_leq
from .params import PreconditionerParams, derive_params
from .sparsemat import SparseMatrix, rank, stack

F = Fraction

SPARSE, ALL_DENSE, LARGE_FIELD = "sparse", "all_dense", "large_field"


@dataclass(frozen=True)
class PreconditionPlan:
    params: PreconditionerParams
    n: int
    m: int
    path: str
    k: int | None = None          # sparse row count (sparse pattern only)
    z: float | None = None        # per-entry zero probability
    effective_q_hat: int | None = None
    sample_set_size: int | None = None
    note: str = ""

    @property
    def ell(self) -> int:
        return self.params.ell

    @property
    def added_rows(self) -> int:
        if self.path == SPARSE:
            return self.k + self.params.c2 + self.params.ell
        if self.path == LARGE_FIELD:
            if self.k is not None:
                return self.k + self.params.c2
            return self.n - self.m
        return self.n - self.m + self.params.ell

    def to_dict(self) -> dict:
        return {
            "path": self.path, "n": self.n, "m": self.m,
            "k": self.k, "z": self.z,
            "effective_q_hat": self.effective_q_hat,
            "sample_set_size": self.sample_set_size,
            "added_rows": self.added_rows,
            "params": self.params.to_dict(),
            "note": self.note,
        }


@dataclass(frozen=True)
class GeneratedRows:
    rows: SparseMatrix
    per_row_weights: tuple[int, ...]
    seed: int
    plan: PreconditionPlan


def plan(q: int, n: int, m: int, epsilon) -> PreconditionPlan:
    """Choose the generation route for shape (m, n) over GF(q)."""
    if not (isinstance(n, int) and isinstance(m, int) and 0 <= m <= n and n >= 1):
        raise BadShape(f"need 0 <= m <= n and n >= 1, got m={m}, n={n}")
    if q > n * n:
        if n >= 7:
            q_hat = largest_prime_power_leq(n * n)
            params = _with_ell_zero(derive_params(q_hat, epsilon))
            k = n - m - params.c2
            if k > float(params.c3) * math.log(n) and k >= params.k_min:
                z = 1 - float(params.c3) * math.log(n) / k
                return PreconditionPlan(params, n, m, LARGE_FIELD, k=k, z=z,
                                        effective_q_hat=q_hat, sample_set_size=q)
            return PreconditionPlan(params, n, m, LARGE_FIELD,
                                    effective_q_hat=q_hat, sample_set_size=q)
        params = _with_ell_zero(derive_params(q, epsilon))
        note = (f"n = {n} below the large-field cutoff; dense rows over the "
                f"full field leave the stacked matrix rank-deficient with "
                f"probability at most {n - m}/{q} by the degree bound on the "
                f"determinant polynomial")
        return PreconditionPlan(params, n, m, ALL_DENSE, note=note)
    params = derive_params(q, epsilon)
    k = n - m - params.c2
    if k > float(params.c3) * math.log(n) and k >= params.k_min:
        z = 1 - float(params.c3) * math.log(n) / k
        return PreconditionPlan(params, n, m, SPARSE, k=k, z=z)
    return PreconditionPlan(params, n, m, ALL_DENSE)


def _with_ell_zero(params: PreconditionerParams) -> PreconditionerParams:
    if params.ell == 0:
        return params
    return PreconditionerParams(
        q=params.q, epsilon=params.epsilon, c4=params.c4, beta0=params.beta0,
        c3=params.c3, c2=params.c2, ell=0, delta=params.delta,
        k_min=params.k_min, sigma=params.sigma, tau=params.c2,
        upsilon=params.k_min, source=params.source)


def _sparse_row_values(n: int, z: float, field: Field,
                       gen: np.random.Generator) -> np.ndarray:
    """One sparse-pattern row: each entry zeroed with probability z, the rest
    uniform over the whole field (so zeros can also arise from the draw)."""
    keep = gen.random(n) >= z
    values = np.zeros(n, dtype=np.int64)
    count = int(keep.sum())
    if count:
        values[keep] = gen.integers(0, field.q, size=count)
    return values


def gen_sparse_row(plan: PreconditionPlan, gen: np.random.Generator,
                   field: Field) -> np.ndarray:
    """Dense value array for one sparse-path row (zeros included)."""
    if plan.path != SPARSE:
        raise WrongPath(f"sparse rows are only drawn on the sparse path, "
                        f"plan has {plan.path!r}")
    return _sparse_row_values(plan.n, plan.z, field, gen)


def generate(plan: PreconditionPlan, seed: int, field: Field) -> GeneratedRows:
    """All added rows for a plan, deterministically from (plan, seed).

    Row i comes from the stream (seed, "row", i); sparse-pattern rows precede
    the dense ones.
    """
    if field.q != plan.params.q and plan.path != LARGE_FIELD:
        raise BadShape(f"plan was made for q = {plan.params.q}, "
                       f"field has q = {field.q}")
    n = plan.n
    sparse_rows = plan.k if plan.k is not None else 0
    total = plan.added_rows
    row_values = []
    for i in range(total):
        gen = rng.stream(seed, "row", i)
        if i < sparse_rows:
            row_values.append(_sparse_row_values(n, plan.z, field, gen))
        else:
            row_values.append(gen.integers(0, field.q, size=n, dtype=np.int64))
    rows = SparseMatrix.from_row_arrays(field, n, row_values)
    return GeneratedRows(rows=rows, per_row_weights=tuple(rows.row_weights()),
                         seed=seed, plan=plan)


def precondition(A: SparseMatrix, epsilon, seed: int,
                 check_rank: bool = True) -> SparseMatrix:
    """Stack randomized rows under A so the result has full column rank with
    probability at least 1 - epsilon.

    The guarantee presumes rank(A) = rows(A); that is verified up front unless
    check_rank is False (callers that just produced A with a verified rank may
    waive the recheck, at their own risk).
    """
    n, m = A.cols, A.rows
    if m > n:
        raise BadShape(f"A has more rows ({m}) than columns ({n})")
    if check_rank and rank(A) != m:
        raise RankDeficientInput(f"A has rank below its row count {m}")
    p = plan(A.field.q, n, m, epsilon)
    generated = generate(p, seed, A.field)
    return stack(A, generated.rows)
