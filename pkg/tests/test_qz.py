import random
from fractions import Fraction

import numpy as np
import pytest

from rootdata import intlinalg as la
from rootdata import qz


F = Fraction


def test_qz_basics():
    v = qz.qz([F(3, 2), F(-1, 4)])
    assert v == (F(1, 2), F(3, 4))
    assert qz.qz_order(v) == 4
    assert qz.qz_add(v, v) == (F(0), F(1, 2))
    assert qz.qz_is_zero(qz.qz_smul(4, v))


def test_qz_apply():
    sigma = [[-1]]
    assert qz.qz_apply(sigma, (F(1, 4),)) == (F(3, 4),)


def test_solve_qz_simple():
    # 2x = 1/2 has solution 1/4 with kernel Z/2
    x, ker = qz.solve_qz([[2]], [F(1, 2)])
    assert (2 * x[0]) % 1 == F(1, 2)
    assert ker.structure()[0] == 0
    assert ker.quotient_structure().factors == [2]
    # 0x = 1/2 insoluble
    with pytest.raises(qz.NoSolution):
        qz.solve_qz([[0]], [F(1, 2)])
    # identity
    x, ker = qz.solve_qz(la.eye(2), [F(1, 3), F(2, 5)])
    assert x == (F(1, 3), F(2, 5))
    assert ker.divisible_rank() == 0 and ker.quotient_structure().is_trivial()


def test_solve_qz_kernel_regenerates_solutions():
    # cross-check kernel description against exhaustive enumeration mod small m
    rng = random.Random(5)
    for _ in range(25):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        N = 12
        target = qz.qz([F(rng.randrange(N), N) for _ in range(m)])
        # exhaustive solutions with denominator dividing N
        brute = {
            x
            for x in (
                qz.qz([F(a, N) for a in coords])
                for coords in _tuples(N, n)
            )
            if qz.qz_apply(A, x) == target
        }
        try:
            x0, ker = qz.solve_qz(A, target)
        except qz.NoSolution:
            assert not brute
            continue
        assert qz.qz_apply(A, x0) == target
        # every brute solution differs from x0 by a kernel element
        for x in brute:
            assert ker.contains(qz.qz_sub(x, x0))


def _tuples(N, n):
    if n == 0:
        yield ()
        return
    for rest in _tuples(N, n - 1):
        for a in range(N):
            yield (a,) + rest


def test_subgroup_structure():
    # <(1/2,0),(0,1/2)> = Z/2 x Z/2
    G = qz.quotient_structure([(F(1, 2), 0), (0, F(1, 2))])
    assert G.factors == [2, 2]
    assert qz.quotient_structure([(F(1, 2), F(1, 2))]).factors == [2]
    assert qz.quotient_structure([(F(1, 4),), (F(1, 2),)]).factors == [4]


def test_subgroup_membership_and_torsion():
    S = qz.TorusSubgroup(2, la.ratmat([[1], [0]]), [(0, F(1, 2))])
    assert S.contains((F(1, 3), F(1, 2)))
    assert not S.contains((0, F(1, 4)))
    els = S.elements_of_order_dividing(2)
    assert (F(1, 2), F(1, 2)) in els and len(els) == 4


def test_intersect_trivial_cases():
    A = qz.TorusSubgroup(1, None, [(F(1, 2),)])
    B = qz.zero_subgroup(1)
    I = A.intersect(B)
    assert I.divisible_rank() == 0 and I.quotient_structure().is_trivial()
    J = A.intersect(A)
    assert J.equals(A)


def test_intersect_skew_lines():
    # lines spanned by (1,2) and (1,0) meet in a finite Z/2 inside (Q/Z)^2
    A = qz.TorusSubgroup(2, la.ratmat([[1], [2]]))
    B = qz.TorusSubgroup(2, la.ratmat([[1], [0]]))
    I = A.intersect(B)
    assert I.divisible_rank() == 0
    assert I.quotient_structure().factors == [2]
    assert I.contains((F(1, 2), F(0)))


def test_intersect_su2xsu2_singular_sets():
    # two coordinate singular sets of rank-2: <e2-line, (1/2,0)> cap <e1-line, (0,1/2)>
    S1 = qz.TorusSubgroup(2, la.ratmat([[0], [1]]), [(F(1, 2), 0)])
    S2 = qz.TorusSubgroup(2, la.ratmat([[1], [0]]), [(0, F(1, 2))])
    I = S1.intersect(S2, start=4)
    assert I.divisible_rank() == 0
    assert I.quotient_structure().factors == [2, 2]


def test_intersect_properties_randomized():
    rng = random.Random(9)
    for _ in range(10):
        n = 2
        def rand_sub():
            cols = rng.randint(0, 1)
            space = la.ratmat([[rng.randint(-2, 2)] for _ in range(n)]) if cols else None
            if space is not None and all(x == 0 for x in space.ravel()):
                space = None
            k = rng.randint(0, 2)
            gens = [tuple(F(rng.randrange(4), 4) for _ in range(n)) for _ in range(k)]
            return qz.TorusSubgroup(n, space, gens)
        A, B = rand_sub(), rand_sub()
        AB = A.intersect(B)
        BA = B.intersect(A)
        assert AB.equals(BA)                      # commutative
        assert AB.equals(AB.intersect(A))         # monotone/idempotent-ish
        assert AB.is_subgroup_of(A) and AB.is_subgroup_of(B)


def test_p_primary_mode():
    x, ker = qz.solve_qz([[3]], [F(1, 3)], p=3)
    assert (3 * x[0]) % 1 == F(1, 3)
    assert x[0].denominator in (3, 9)
    G = qz.quotient_structure([(F(1, 3),)], p=3)
    assert G.factors == [3]
    with pytest.raises(ValueError):
        qz.TorusSubgroup(1, None, [(F(1, 2),)], p=3)


def test_image_and_kernel_subgroups():
    img = qz.image_subgroup([[2, 0], [0, 0]])
    assert img.contains((F(1, 3), 0))
    assert not img.contains((0, F(1, 3)))
    ker = qz.kernel_subgroup([[2, 0], [0, 1]])
    assert ker.contains((F(1, 2), 0))
    assert not ker.contains((0, F(1, 2)))
