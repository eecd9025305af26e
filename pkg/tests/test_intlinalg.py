import random

import numpy as np
import pytest

from rootdata import intlinalg as la


def random_matrix(rng, m, n, lo=-6, hi=6):
    return la.intmat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)])


def test_snf_identity():
    U, D, V = la.smith_normal_form(la.eye(3))
    assert la.mat_eq(D, la.eye(3))


def test_snf_zero():
    A = la.zeros(2, 3)
    U, D, V = la.smith_normal_form(A)
    assert la.mat_eq(D, la.zeros(2, 3))


def test_snf_diag_2_3():
    # gcd(2,3)=1 and det 6 force diag(1,6)
    A = la.intmat([[2, 0], [0, 3]])
    _, D, _ = la.smith_normal_form(A)
    assert [int(D[0, 0]), int(D[1, 1])] == [1, 6]


def test_snf_random_properties():
    rng = random.Random(7)
    for _ in range(40):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(rng, m, n)
        U, D, V = la.smith_normal_form(A)
        assert la.mat_eq(U @ A @ V, D)
        # unimodularity
        la.unimodular_inverse(U)
        la.unimodular_inverse(V)
        diag = [int(D[i, i]) for i in range(min(m, n))]
        for a, b in zip(diag, diag[1:]):
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D[i, j] == 0


def test_hermite_and_kernel():
    rng = random.Random(11)
    for _ in range(40):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        A = random_matrix(rng, m, n)
        H, V = la.column_hermite_form(A)
        assert la.mat_eq(A @ V, H)
        K = la.kernel_basis(A)
        if K.shape[1]:
            assert la.mat_eq(A @ K, la.zeros(m, K.shape[1]))
        assert K.shape[1] == n - la.rat_rank(A)


def test_solve_int():
    A = la.intmat([[2, 0], [0, 3]])
    x = la.solve_int(A, [4, 9])
    assert list(x) == [2, 3]
    assert la.solve_int(A, [1, 0]) is None


def test_lattice_ops():
    L1 = la.lattice_basis(la.intmat([[2, 0], [0, 1]]))
    L2 = la.lattice_basis(la.intmat([[1, 0], [0, 3]]))
    L = la.lattice_intersect(L1, L2)
    # intersection of 2Z x Z and Z x 3Z is 2Z x 3Z
    assert la.lattice_contains(L, [2, 0]) and la.lattice_contains(L, [0, 3])
    assert not la.lattice_contains(L, [1, 0]) and not la.lattice_contains(L, [0, 1])
    S = la.lattice_sum(L1, L2)
    assert la.lattice_contains(S, [1, 0]) and la.lattice_contains(S, [0, 1])


def test_preimage_lattice():
    # {x : 2x in 4Z} = 2Z
    A = la.intmat([[2]])
    L = la.intmat([[4]])
    P = la.preimage_lattice(A, L)
    assert la.lattice_contains(P, [2]) and not la.lattice_contains(P, [1])


def test_saturation():
    L = la.intmat([[2, 0], [0, 3]])
    S = la.saturation(la.intmat([[2], [4]]))
    assert la.lattice_contains(S, [1, 2])
    assert not la.lattice_contains(S, [1, 1])


def test_quotient_group():
    # Z^2 / <(2,0),(0,4)> = Z/2 + Z/4
    facs, free, lifts = la.quotient_group(la.eye(2), la.intmat([[2, 0], [0, 4]]))
    assert facs == [2, 4] and free == 0
    # Z^2 / <(1,0)> = Z
    facs, free, _ = la.quotient_group(la.eye(2), la.intmat([[1], [0]]))
    assert facs == [] and free == 1


def test_finabgroup():
    G = la.FinAbGroup([2, 4])
    assert G.order == 8 and G.exponent == 4
    assert repr(G) == "Z/2 x Z/4"
    assert la.FinAbGroup([]) == la.FinAbGroup([1])
    with pytest.raises(ValueError):
        la.FinAbGroup([4, 2])


def test_rational_kernel_and_solve():
    A = [[1, 2, 3], [2, 4, 6]]
    K = la.rat_kernel(A)
    assert K.shape[1] == 2
    assert all(x == 0 for x in (la.ratmat(A) @ K).ravel())
    x = la.rat_solve([[2, 0], [0, 4]], [1, 2])
    assert [str(v) for v in x] == ["1/2", "1/2"]


def test_subspace_ops():
    B1 = la.ratmat([[1], [2]])
    B2 = la.ratmat([[1], [0]])
    assert la.subspace_intersect(B1, B2).shape[1] == 0
    assert la.subspace_contains(B1, [2, 4])
    assert not la.subspace_contains(B1, [1, 1])


def test_mod_pe_toolkit():
    rng = random.Random(3)
    p, e = 2, 5
    q = p ** e
    for _ in range(30):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = np.array([[rng.randrange(q) for _ in range(n)] for _ in range(m)], dtype=np.int64)
        U, diag, V = la.diagonalize_mod(A, p, e)
        D = (U @ A @ V) % q
        for i in range(m):
            for j in range(n):
                expected = diag[i] if (i == j and i < len(diag)) else 0
                assert D[i, j] % q == expected % q
        K = la.kernel_mod(A, p, e)
        if K.shape[1]:
            assert not ((A @ K) % q).any()
        # exhaustive kernel check in tiny cases
        if n <= 2 and m <= 2:
            true_kernel = {
                (x, y) if n == 2 else (x,)
                for x in range(q)
                for y in (range(q) if n == 2 else [0])
                if not ((A @ np.array([x, y][:n])) % q).any()
            }
            spanned = {tuple(np.zeros(n, dtype=int))}
            frontier = [np.zeros(n, dtype=np.int64)]
            for j in range(K.shape[1]):
                new = set()
                for s in spanned:
                    cur = np.array(s, dtype=np.int64)
                    for k in range(1, q):
                        new.add(tuple((cur + k * K[:, j]) % q))
                spanned |= new
            assert spanned == true_kernel


def test_solve_mod():
    x = la.solve_mod(np.array([[2]]), np.array([6]), 2, 4)
    assert x is not None and (2 * x[0]) % 16 == 6
    assert la.solve_mod(np.array([[2]]), np.array([1]), 2, 4) is None
