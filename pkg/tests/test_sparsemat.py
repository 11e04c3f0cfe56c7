import pytest

from spfq import rng
from spfq.errors import (FieldMismatch, ParseError, ShapeMismatch, ValueOutOfRange)
from spfq.fields import Field
from spfq.sparsemat import SparseMatrix, rank, read_sms, stack, write_sms

F2 = Field(2)
F3 = Field(3)
F9 = Field(3, 2)


def naive_rank(field, dense):
    """Textbook elimination on Python ints: the independent rank oracle."""
    A = [list(map(int, r)) for r in dense]
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, x) for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def span_size(field, dense):
    """Row-space cardinality by brute enumeration (tiny matrices only)."""
    vectors = {tuple([0] * len(dense[0]))}
    for row in dense:
        new = set()
        for coef in range(field.q):
            scaled = tuple(field.mul(coef, int(v)) for v in row)
            for v in vectors:
                new.add(tuple(field.add(a, b) for a, b in zip(v, scaled)))
        vectors = new
    return len(vectors)


def random_matrix(field, m, n, gen, density=None):
    dense = gen.integers(0, field.q, size=(m, n))
    if density is not None:
        dense = dense * (gen.random((m, n)) < density)
    return dense


def test_construction_invariants():
    with pytest.raises(ValueOutOfRange):
        SparseMatrix(F2, 1, 2, [((0, 0),)])          # explicit zero
    with pytest.raises(ValueOutOfRange):
        SparseMatrix(F2, 1, 2, [((0, 2),)])          # value = q
    with pytest.raises(ValueError):
        SparseMatrix(F3, 1, 3, [((1, 1), (0, 1))])   # columns out of order
    with pytest.raises(ShapeMismatch):
        SparseMatrix(F3, 1, 2, [((5, 1),)])          # column out of range
    with pytest.raises(ShapeMismatch):
        SparseMatrix(F3, 2, 2, [()])                 # row count mismatch


def test_rank_trivia():
    assert rank(SparseMatrix.identity(F3, 5)) == 5
    assert rank(SparseMatrix.zero(F2, 3, 4)) == 0
    ones = SparseMatrix.from_dense(F2, [[1, 1], [1, 1]])
    assert rank(ones) == 1
    # the row-space of the all-ones matrix has q^rank elements
    assert span_size(F2, [[1, 1], [1, 1]]) == 2 ** 1


def test_rank_against_oracle_and_permutations():
    gen = rng.stream(42, "rank-oracle")
    fields = (F2, F3, F9, Field(5), Field(2, 3), Field(7), Field(2, 2))
    cases = 0
    for field in fields:
        for trial in range(15):
            m = int(gen.integers(1, 12))
            n = int(gen.integers(1, 12))
            dense = random_matrix(field, m, n, gen,
                                  density=0.3 if trial % 2 else None)
            M = SparseMatrix.from_dense(field, dense)
            expected = naive_rank(field, dense)
            assert rank(M) == expected
            # second, independently ordered elimination
            perm = list(gen.permutation(n))
            assert rank(M, column_order=perm) == expected
            # rank is invariant under row and column permutation of the matrix
            rp = gen.permutation(m)
            cp = gen.permutation(n)
            assert rank(SparseMatrix.from_dense(field, dense[rp][:, cp])) == expected
            cases += 1
    assert cases >= 100


def test_rank_reverse_order_matches():
    gen = rng.stream(3, "rev")
    for _ in range(20):
        dense = random_matrix(F3, 8, 10, gen)
        M = SparseMatrix.from_dense(F3, dense)
        assert rank(M, column_order=list(range(9, -1, -1))) == rank(M)


def test_rank_sparse_phase_agrees():
    # low-density inputs exercise the dict phase before densification
    gen = rng.stream(9, "sparse-phase")
    for field in (F3, F9, Field(5)):
        for _ in range(10):
            dense = random_matrix(field, 30, 40, gen, density=0.05)
            M = SparseMatrix.from_dense(field, dense)
            assert rank(M) == naive_rank(field, dense)


def test_stack_behavior():
    A = SparseMatrix.from_dense(F3, [[1, 2, 0], [0, 1, 1]])
    B = SparseMatrix.from_dense(F3, [[2, 2, 2]])
    S = stack(A, B)
    assert (S.rows, S.cols) == (3, 3)
    assert S.entries[:2] == A.entries
    assert stack(A, SparseMatrix.zero(F3, 0, 3)) == A
    with pytest.raises(ShapeMismatch):
        stack(A, SparseMatrix.zero(F3, 1, 4))
    with pytest.raises(FieldMismatch):
        stack(A, SparseMatrix.zero(F2, 1, 3))


def test_stack_never_lowers_rank():
    gen = rng.stream(17, "stack-rank")
    for _ in range(100):
        field = (F2, F3, F9)[int(gen.integers(0, 3))]
        A = random_matrix(field, int(gen.integers(1, 8)), 10, gen)
        R = random_matrix(field, int(gen.integers(1, 5)), 10, gen)
        MA = SparseMatrix.from_dense(field, A)
        MS = stack(MA, SparseMatrix.from_dense(field, R))
        assert rank(MS) >= rank(MA)


def test_sms_identity_parse():
    M = read_sms("2 2 M\n1 1 1\n2 2 1\n0 0 0", F2)
    assert M == SparseMatrix.identity(F2, 2)


def test_sms_round_trips():
    gen = rng.stream(5, "sms-roundtrip")
    dense = random_matrix(F9, 50, 80, gen, density=0.1)
    M = SparseMatrix.from_dense(F9, dense)
    assert read_sms(write_sms(M), F9) == M
    # read . write is the identity on canonical text
    text = write_sms(M)
    assert write_sms(read_sms(text, F9)) == text


def test_sms_errors():
    with pytest.raises(ValueOutOfRange):
        read_sms("1 1 M\n1 1 2\n0 0 0", F2)         # value q
    with pytest.raises(ParseError) as err:
        read_sms("1 1 M\n1 1 1", F2)                # missing terminator
    assert err.value.line == 2
    with pytest.raises(ParseError):
        read_sms("1 1\n0 0 0", F2)                  # bad header
    with pytest.raises(ParseError):
        read_sms("1 1 M\nx y z\n0 0 0", F2)
    with pytest.raises(ParseError):
        read_sms("2 2 M\n1 1 1\n1 1 1\n0 0 0", F3)  # duplicate entry
    with pytest.raises(ParseError):
        read_sms("1 1 M\n2 1 1\n0 0 0", F2)         # row index out of range


def test_sms_accepts_unordered_entries():
    M = read_sms("2 3 M\n2 3 1\n1 2 1\n2 1 1\n0 0 0", F2)
    assert M.entries == (((1, 1),), ((0, 1), (2, 1)))
