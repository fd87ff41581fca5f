import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semiinv.linalg import (
    LinearSolver,
    ResMatrix,
    Residue,
    howell_form,
    image,
    int_det,
    int_solve,
    kernel,
    modmatmul,
    preimage,
    smith_form,
    solve_linear,
    zero_span,
)

MODULI = [2, 4, 6, 8, 9, 12]


def brute_span(rows, m, n):
    """Every combination of the rows, as a set of tuples."""
    out = {tuple([0] * n)}
    for r in rows:
        r = np.array(r) % m
        out = {tuple(int(x) for x in (np.array(v) + c * r) % m) for v in out for c in range(m)}
    return out


def all_vectors(m, n):
    return itertools.product(range(m), repeat=n)


@st.composite
def matrices(draw, max_rows=3, max_cols=3):
    m = draw(st.sampled_from(MODULI))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(st.integers(0, m - 1)) for _ in range(c)] for _ in range(r)]
    return m, c, rows


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_howell_span_matches_enumeration(data):
    m, n, rows = data
    H = howell_form(rows, m, n)
    assert set(H.elements()) == brute_span(rows, m, n)
    assert H.size == len(brute_span(rows, m, n))
    for v in all_vectors(m, n):
        assert H.contains(v) == (v in brute_span(rows, m, n))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_howell_form_is_canonical(data, rnd):
    m, n, rows = data
    H = howell_form(rows, m, n)
    shuffled = [list(r) for r in rows]
    rnd.shuffle(shuffled)
    if shuffled:
        i, j = rnd.randrange(len(shuffled)), rnd.randrange(len(shuffled))
        if i != j:
            shuffled[i] = [(a + 3 * b) % m for a, b in zip(shuffled[i], shuffled[j])]
        shuffled.append([(2 * x) % m for x in shuffled[0]])
    assert howell_form(shuffled, m, n) == H


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_sum_and_intersection(a, b):
    m, n, rows1 = a
    rows2 = [[x % m for x in (r + [0] * n)[:n]] for r in b[2]]
    X, Y = howell_form(rows1, m, n), howell_form(rows2, m, n)
    sx, sy = brute_span(rows1, m, n), brute_span(rows2, m, n)
    assert set((X & Y).elements()) == sx & sy
    assert set((X + Y).elements()) == brute_span(rows1 + rows2, m, n)
    assert (X & Y) <= X and X <= (X + Y)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_and_solver(data):
    m, n, rows = data
    A = np.array(rows, dtype=np.int64).reshape(-1, n)
    if A.shape[0] == 0:
        return
    K = kernel(A, m)
    brute_ker = {v for v in all_vectors(m, n) if not (A @ np.array(v) % m).any()}
    assert set(K.elements()) == brute_ker
    solver = LinearSolver(A, m)
    reachable = {tuple(int(x) for x in A @ np.array(v) % m) for v in all_vectors(m, n)}
    for b in all_vectors(m, A.shape[0]):
        x = solver.solve(b)
        if b in reachable:
            assert x is not None and tuple(int(t) for t in A @ x % m) == b
        else:
            assert x is None


def test_solve_many_and_solve_linear():
    A = np.array([[2, 0], [0, 3]])
    solver = LinearSolver(A, 6)
    X, ok = solver.solve_many([[2, 3], [1, 0], [4, 0]])
    assert ok.tolist() == [True, False, True]
    assert (A @ X[0] % 6).tolist() == [2, 3]
    x, K = solve_linear(A, [0, 3], 6)
    assert (A @ x % 6).tolist() == [0, 3]
    assert K.size == 6
    with pytest.raises(ValueError):
        solve_linear(A, [1, 2, 3], 6)


def test_preimage_and_image():
    A = np.array([[1, 1], [0, 2]])
    target = howell_form([[0, 1]], 4, 2)
    P = preimage(A, target)
    brute = {v for v in all_vectors(4, 2) if target.contains(A @ np.array(v) % 4)}
    assert set(P.elements()) == brute
    assert set(image(A, 4).elements()) == {tuple(int(t) for t in A @ np.array(v) % 4) for v in all_vectors(4, 2)}


def test_annihilator_cuts_out_span():
    S = howell_form([[2, 0, 1], [0, 3, 0]], 6, 3)
    Q = S.annihilator
    for v in all_vectors(6, 3):
        assert S.contains(v) == (not (modmatmul(Q, np.array(v).reshape(-1, 1), 6)).any())


def test_lift_and_zero_span():
    S = howell_form([[1, 1]], 2, 2)
    L = S.lift(4)
    assert L.size == 8 and L.contains([1, 1]) and L.contains([2, 0]) and not L.contains([1, 0])
    with pytest.raises(ValueError):
        S.lift(3)
    assert zero_span(5, 2).size == 1


def test_large_modulus_uses_python_integers():
    m = 2**61 - 1
    S = howell_form([[m - 1, 3]], m, 2)
    assert S.contains([1, (-3) % m])
    assert S.array.dtype == object


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_form(A):
    U, D, V = smith_form(A)
    prod = np.array(U, dtype=object) @ np.array(A, dtype=object) @ np.array(V, dtype=object)
    assert prod.tolist() == D
    assert abs(int_det(U)) == 1 and abs(int_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(x >= 0 for x in diag)
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    nonzero = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert diag[len(nonzero):] == [0] * (len(diag) - len(nonzero))


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(st.integers(-5, 5), min_size=3, max_size=3),
)
def test_int_solve(A, x0):
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    x, ker = int_solve(A, b)
    assert x is not None
    assert [sum(a * t for a, t in zip(row, x)) for row in A] == b
    for k in ker:
        assert all(sum(a * t for a, t in zip(row, k)) == 0 for row in A)


def test_int_solve_detects_no_solution():
    x, ker = int_solve([[2, 4]], [3])
    assert x is None and len(ker) == 1
    assert int_det([[2, 1], [7, 4]]) == 1
    assert int_det([[0, 1], [1, 0]]) == -1


def test_residues_and_matrices():
    a = Residue(5, 6)
    assert int(a + 3) == 2 and int(a * a) == 1 and int(-a) == 1
    with pytest.raises(ValueError):
        a + Residue(1, 4)
    M = ResMatrix(4, ((1, 2), (3, 5)))
    assert M.entries == ((1, 2), (3, 1))
    assert (M @ M).entries == ((3, 0), (2, 3))
    with pytest.raises(ValueError):
        ResMatrix(4, ((1,), (1, 2)))
