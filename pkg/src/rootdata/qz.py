"""Exact arithmetic in the discrete torus (Q/Z)^n and its subgroups.

A torus element is a vector of rationals normalized to [0, 1).  A torus
subgroup is stored as a rational subspace (its divisible part is the image
of the subspace mod Z^n) together with finitely many torsion generators.
All operations are exact; intersections are computed on N-torsion at a
doubling denominator bound until two successive bounds agree.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import intlinalg as la


class StabilizationError(RuntimeError):
    """An iterated subgroup computation failed to stabilize within the cap."""


class NoSolution(Exception):
    """A linear system over the requested ring has no solution."""


def qz(values) -> tuple[Fraction, ...]:
    """Normalize a vector of rationals to the cube [0,1)^n."""
    return tuple(Fraction(v) % 1 for v in values)


def qz_add(a, b):
    return tuple((x + y) % 1 for x, y in zip(a, b))


def qz_sub(a, b):
    return tuple((x - y) % 1 for x, y in zip(a, b))


def qz_neg(a):
    return tuple((-x) % 1 for x in a)


def qz_smul(k: int, a):
    return tuple((k * x) % 1 for x in a)


def qz_zero(n: int):
    return tuple(Fraction(0) for _ in range(n))


def qz_is_zero(a) -> bool:
    return all(x == 0 for x in a)


def qz_apply(M, a):
    """Apply an integer matrix to a torus element."""
    M = np.asarray(M)
    return tuple(
        sum(Fraction(int(M[i, j])) * a[j] for j in range(len(a))) % 1
        for i in range(M.shape[0])
    )


def qz_order(a) -> int:
    """Order of a torsion element of (Q/Z)^n."""
    m = 1
    for x in a:
        m = m * x.denominator // math.gcd(m, x.denominator)
    return m


def common_denominator_int_vector(a, N: int):
    """Write a as (1/N) * integer vector; N must clear all denominators."""
    out = []
    for x in a:
        y = Fraction(x) * N
        if y.denominator != 1:
            raise ValueError(f"{x} does not have denominator dividing {N}")
        out.append(int(y))
    return out


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _pval(d: int, p: int) -> int:
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


def _has_bad_denominator(x: Fraction, p: int) -> bool:
    d = Fraction(x).denominator
    while d % p == 0:
        d //= p
    return d != 1


def _next_p_power(n: int, p: int) -> int:
    q = 1
    while q < n:
        q *= p
    return q


class TorusSubgroup:
    """A subgroup of (Q/Z)^n: (divisible part from a rational subspace) + finite.

    `p` restricts denominators to powers of a prime (p-primary mode); p=None
    allows all denominators.
    """

    MAX_DOUBLINGS = 24

    def __init__(self, ambient_rank: int, space=None, gens=(), p: int | None = None):
        self.n = ambient_rank
        if space is None or (hasattr(space, "shape") and space.shape[1] == 0):
            space = np.zeros((ambient_rank, 0), dtype=object)
            self.space = space
        else:
            self.space = la.subspace_basis(space)
        self.gens = [g for g in (qz(g) for g in gens) if not qz_is_zero(g)]
        self.p = p
        if p is not None:
            for g in self.gens:
                if any(_has_bad_denominator(x, p) for x in g):
                    raise ValueError(f"generator {g} has denominator not a power of {p}")
        self._satlat = None

    def space_lattice(self) -> np.ndarray:
        """Z^n cap space, canonical column basis."""
        if self._satlat is None:
            self._satlat = la.lattice_of_subspace(self.space)
        return self._satlat

    def divisible_rank(self) -> int:
        return self.space.shape[1]

    def gen_exponent(self) -> int:
        m = 1
        for g in self.gens:
            m = _lcm(m, qz_order(g))
        return m

    def _working_denominator(self, extra: int = 1) -> int:
        N = _lcm(max(2, self.gen_exponent()), extra)
        if self.p is not None:
            N = _next_p_power(N, self.p)
        return N

    # -- membership and comparison -------------------------------------------

    def contains(self, v) -> bool:
        v = qz(v)
        if qz_is_zero(v):
            return True
        if self.p is not None and any(_has_bad_denominator(x, self.p) for x in v):
            return False
        N = self._working_denominator(qz_order(v))
        w = common_denominator_int_vector(v, N)
        return la.lattice_contains(self.torsion_lattice(N), w)

    def is_subgroup_of(self, other: "TorusSubgroup") -> bool:
        for j in range(self.space.shape[1]):
            if not la.subspace_contains(other.space, self.space[:, j]):
                return False
        return all(other.contains(g) for g in self.gens)

    def equals(self, other: "TorusSubgroup") -> bool:
        return self.is_subgroup_of(other) and other.is_subgroup_of(self)

    # -- torsion lattices ------------------------------------------------------

    def torsion_lattice(self, N: int) -> np.ndarray:
        """The N-torsion subgroup as the column lattice {N*x}, N Z^n <= L <= Z^n.

        Requires N to be a multiple of every generator order; the subgroup's
        N-torsion is then exactly (1/N) L / Z^n.
        """
        if N % max(1, self.gen_exponent()) != 0:
            raise ValueError("N must clear the torsion generators")
        cols = [self.space_lattice()]
        if self.gens:
            cols.append(la.intmat([common_denominator_int_vector(g, N) for g in self.gens]).T)
        cols.append(N * la.eye(self.n))
        return la.lattice_basis(np.concatenate(cols, axis=1))

    # -- algebra ---------------------------------------------------------------

    def add(self, other: "TorusSubgroup") -> "TorusSubgroup":
        assert self.n == other.n
        sp = np.concatenate([self.space, other.space], axis=1)
        return TorusSubgroup(self.n, sp, self.gens + other.gens, p=self.p or other.p)

    def intersect(self, other: "TorusSubgroup", start: int | None = None) -> "TorusSubgroup":
        """Exact intersection, stabilized over a doubling denominator bound."""
        assert self.n == other.n
        p = self.p or other.p
        scale = p if p is not None else 2
        N = self._working_denominator(other._working_denominator(start or 1))
        vs = la.subspace_intersect(self.space, other.space)
        vlat = la.lattice_of_subspace(vs)
        prev = None
        for _ in range(self.MAX_DOUBLINGS):
            L = la.lattice_intersect(self.torsion_lattice(N), other.torsion_lattice(N))
            denom = la.lattice_basis(np.concatenate([vlat, N * la.eye(self.n)], axis=1))
            facs, free, lifts = la.quotient_group(L, denom)
            if free:
                raise StabilizationError("torsion quotient unexpectedly infinite")
            gens = [qz(Fraction(int(x), N) for x in lifts[:, j]) for j in range(lifts.shape[1])]
            cand = TorusSubgroup(self.n, vs, gens, p=p)
            if prev is not None and prev[0] == facs and prev[1].equals(cand):
                return cand
            prev = (facs, cand)
            N *= scale
        raise StabilizationError(f"intersection did not stabilize below denominator {N}")

    def quotient_structure(self, sub: "TorusSubgroup" | None = None) -> la.FinAbGroup:
        """Invariant factors of self/sub (sub <= self, quotient finite).

        With sub=None quotients by the divisible part, giving the finite part.
        """
        if sub is None:
            sub = TorusSubgroup(self.n, self.space, (), p=self.p)
        joint = la.subspace_basis(np.concatenate([self.space, sub.space], axis=1))
        if not la.subspace_equal(joint, sub.space):
            raise ValueError("quotient is not finite")
        N = self._working_denominator(sub._working_denominator())
        num = self.torsion_lattice(N)
        den = sub.torsion_lattice(N)
        facs, free, lifts = la.quotient_group(num, den)
        if free:
            raise ValueError("quotient not finite")
        gens = [qz(Fraction(int(x), N) for x in lifts[:, j]) for j in range(lifts.shape[1])]
        return la.FinAbGroup(facs, gens=gens)

    def structure(self):
        """(divisible_rank, FinAbGroup of the finite part)."""
        return self.divisible_rank(), self.quotient_structure()

    def elements_of_order_dividing(self, m: int):
        """Enumerate the m-torsion elements of the subgroup."""
        N = self._working_denominator(m)
        L = self.torsion_lattice(N)
        step = N // math.gcd(N, m)
        M = la.lattice_intersect(L, step * la.eye(self.n))
        facs, free, lifts = la.quotient_group(M, N * la.eye(self.n))
        assert free == 0
        gens = [qz(Fraction(int(x), N) for x in lifts[:, j]) for j in range(lifts.shape[1])]
        out = [qz_zero(self.n)]
        for g, d in zip(gens, facs):
            out = [qz_add(x, qz_smul(k, g)) for x in out for k in range(d)]
        return sorted(set(out))

    def __repr__(self):
        r, fin = self.structure()
        parts = []
        if r:
            parts.append(f"(Q/Z)^{r}" if self.p is None else f"(Z/{self.p}^oo)^{r}")
        if not fin.is_trivial():
            parts.append(repr(fin))
        return " + ".join(parts) if parts else "0"


def zero_subgroup(n: int, p=None) -> TorusSubgroup:
    return TorusSubgroup(n, None, (), p=p)


def full_torus(n: int, p=None) -> TorusSubgroup:
    return TorusSubgroup(n, la.ratmat(la.eye(n)), (), p=p)


# ---------------------------------------------------------------------------
# Linear solving over Q/Z
# ---------------------------------------------------------------------------

def solve_qz(A, b, p: int | None = None):
    """Solve A x = b in (Q/Z)^m for x in (Q/Z)^n, with A an integer matrix.

    Returns (x, kernel): one solution and the TorusSubgroup of homogeneous
    solutions, so x + kernel is the full solution set.  Raises NoSolution.
    In p-primary mode solutions are restricted to p-power denominators.
    """
    A = la.intmat(A)
    m, n = A.shape
    b = qz(b)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    if p is not None and any(_has_bad_denominator(x, p) for x in b):
        raise NoSolution("right-hand side is not p-primary")
    U, D, V = la.smith_normal_form(A)
    c = qz_apply(U, b)
    k = min(m, n)
    y = [Fraction(0)] * n
    for i in range(m):
        d = int(D[i, i]) if i < k else 0
        if d == 0:
            if c[i] != 0:
                raise NoSolution(f"inconsistent row: 0 = {c[i]}")
        else:
            y[i] = _divide_qz(c[i], d, p)
    space_cols, torsion = [], []
    for j in range(n):
        d = int(D[j, j]) if j < k else 0
        if d == 0:
            col = np.array([Fraction(0)] * n, dtype=object)
            col[j] = Fraction(1)
            space_cols.append(col)
        else:
            dd = d if p is None else p ** _pval(d, p)
            if dd > 1:
                t = np.array([Fraction(0)] * n, dtype=object)
                t[j] = Fraction(1, dd)
                torsion.append(t)
    x = qz_apply(V, y)
    Vr = la.ratmat(V)
    space = (Vr @ np.array(space_cols, dtype=object).T) if space_cols else np.zeros((n, 0), dtype=object)
    gens = [qz_apply(V, t) for t in torsion]
    return x, TorusSubgroup(n, space, gens, p=p)


def _divide_qz(c: Fraction, d: int, p: int | None) -> Fraction:
    """One solution y of d*y = c in Q/Z (or Z/p^oo)."""
    if p is None:
        return Fraction(c, d) % 1
    v = _pval(d, p)
    u = d // p ** v
    mod = c.denominator * p ** v
    uinv = pow(u % mod, -1, mod) if mod > 1 else 0
    y = Fraction(c.numerator * uinv, mod) % 1
    if (d * y) % 1 != c % 1:
        raise NoSolution("p-primary division failed")
    return y


def image_subgroup(A, p=None) -> TorusSubgroup:
    """The image A * (Q/Z)^n inside (Q/Z)^m (a divisible subgroup)."""
    A = la.intmat(A)
    return TorusSubgroup(A.shape[0], la.subspace_basis(la.ratmat(A)), (), p=p)


def kernel_subgroup(A, p=None) -> TorusSubgroup:
    """The kernel {x in (Q/Z)^n : A x = 0} as a TorusSubgroup."""
    A = la.intmat(A)
    _, kernel = solve_qz(A, qz_zero(A.shape[0]), p=p)
    return kernel


def quotient_structure(gens, relations_space=None, n=None, p=None) -> la.FinAbGroup:
    """Invariant factors of the finite subgroup of (Q/Z)^n generated by `gens`,
    modulo the divisible subgroup of `relations_space` (optional)."""
    gens = [qz(g) for g in gens]
    if n is None:
        if not gens:
            raise ValueError("ambient rank needed for an empty generating set")
        n = len(gens[0])
    return TorusSubgroup(n, relations_space, gens, p=p).quotient_structure()
