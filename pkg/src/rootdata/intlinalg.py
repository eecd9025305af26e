"""Exact integer linear algebra: normal forms, solvers, lattices.

Everything in this module works over Z with arbitrary-precision Python
integers (numpy arrays with dtype=object), or over Z/p^e with machine
integers.  No floating point is used anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def intmat(data) -> np.ndarray:
    """Coerce to a 2d numpy array of Python ints (dtype=object)."""
    A = np.array(data, dtype=object)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    return np.vectorize(int, otypes=[object])(A) if A.size else A.astype(object)


def eye(n: int) -> np.ndarray:
    M = np.zeros((n, n), dtype=object)
    for i in range(n):
        M[i, i] = 1
    return M


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=object)


def mat_eq(A, B) -> bool:
    A, B = np.asarray(A), np.asarray(B)
    return A.shape == B.shape and bool((A == B).all())


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms
# ---------------------------------------------------------------------------

def smith_normal_form(A):
    """Smith normal form with transforms.

    Returns (U, D, V) with U @ A @ V == D, U and V unimodular, D diagonal
    with d1 | d2 | ... >= 0.
    """
    A = intmat(A) if not isinstance(A, np.ndarray) or A.dtype != object else A.copy()
    m, n = A.shape
    U, V = eye(m), eye(n)
    D = A.copy()

    def pivot_at(t):
        # smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i, j]
                if v != 0 and (best is None or abs(v) < abs(best[2])):
                    best = (i, j, v)
        return best

    t = 0
    while t < min(m, n):
        piv = pivot_at(t)
        if piv is None:
            break
        i, j, _ = piv
        if i != t:
            D[[t, i], :] = D[[i, t], :]
            U[[t, i], :] = U[[i, t], :]
        if j != t:
            D[:, [t, j]] = D[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        # clear row and column t by Euclidean steps
        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    q = D[i, t] // D[t, t]
                    if q:
                        D[i, :] -= q * D[t, :]
                        U[i, :] -= q * U[t, :]
                    if D[i, t] != 0:
                        D[[t, i], :] = D[[i, t], :]
                        U[[t, i], :] = U[[i, t], :]
                        dirty = True
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    q = D[t, j] // D[t, t]
                    if q:
                        D[:, j] -= q * D[:, t]
                        V[:, j] -= q * V[:, t]
                    if D[t, j] != 0:
                        D[:, [t, j]] = D[:, [j, t]]
                        V[:, [t, j]] = V[:, [j, t]]
                        dirty = True
            if not dirty:
                break
        # divisibility: D[t,t] must divide everything below-right
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i, j] % D[t, t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            D[t, :] += D[bad, :]
            U[t, :] += U[bad, :]
            continue
        t += 1

    for i in range(min(m, n)):
        if D[i, i] < 0:
            D[i, :] = -D[i, :]
            U[i, :] = -U[i, :]
    return U, D, V


def invariant_factors(A) -> list[int]:
    """Nontrivial invariant factors (> 1) of coker(A : Z^n -> Z^m)."""
    _, D, _ = smith_normal_form(A)
    return [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] not in (0, 1)]


def column_hermite_form(A):
    """Column-style Hermite form.

    Returns (H, V) with A @ V == H, V unimodular, H in column echelon form:
    pivots top-to-bottom left-to-right, zero columns last, pivot entries
    positive, entries right of... i.e. entries left of a pivot in its row
    reduced to [0, pivot).
    """
    A = A.copy() if isinstance(A, np.ndarray) and A.dtype == object else intmat(A)
    m, n = A.shape
    V = eye(n)
    H = A.copy()
    row, col = 0, 0
    while row < m and col < n:
        # gcd-reduce columns col..n-1 on this row
        while True:
            js = [j for j in range(col, n) if H[row, j] != 0]
            if not js:
                break
            j0 = min(js, key=lambda j: abs(H[row, j]))
            if j0 != col:
                H[:, [col, j0]] = H[:, [j0, col]]
                V[:, [col, j0]] = V[:, [j0, col]]
            done = True
            for j in range(col + 1, n):
                if H[row, j] != 0:
                    q = H[row, j] // H[row, col]
                    H[:, j] -= q * H[:, col]
                    V[:, j] -= q * V[:, col]
                    if H[row, j] != 0:
                        done = False
            if done:
                break
        if H[row, col] != 0:
            if H[row, col] < 0:
                H[:, col] = -H[:, col]
                V[:, col] = -V[:, col]
            # reduce the columns to the left of this pivot
            for j in range(col):
                q = H[row, j] // H[row, col]
                if q:
                    H[:, j] -= q * H[:, col]
                    V[:, j] -= q * V[:, col]
            col += 1
        row += 1
    return H, V


def kernel_basis(A) -> np.ndarray:
    """Basis (as columns) of the integer kernel {x : A x = 0}."""
    A = intmat(A)
    H, V = column_hermite_form(A)
    zero_cols = [j for j in range(A.shape[1]) if not any(H[i, j] for i in range(A.shape[0]))]
    return V[:, zero_cols] if zero_cols else zeros(A.shape[1], 0)


def solve_int(A, b):
    """One integer solution of A x = b, or None.  b is a vector."""
    A = intmat(A)
    b = np.array([int(x) for x in np.asarray(b).ravel()], dtype=object)
    U, D, V = smith_normal_form(A)
    c = U @ b
    m, n = A.shape
    y = np.zeros(n, dtype=object)
    for i in range(min(m, n)):
        if D[i, i] != 0:
            if c[i] % D[i, i] != 0:
                return None
            y[i] = c[i] // D[i, i]
    for i in range(min(m, n), m):
        if c[i] != 0:
            return None
    # rows min(m,n)..m already checked; zero diagonal rows
    for i in range(min(m, n)):
        if D[i, i] == 0 and c[i] != 0:
            return None
    return V @ y


# ---------------------------------------------------------------------------
# Lattices: column spans of integer matrices inside Z^n
# ---------------------------------------------------------------------------

def lattice_basis(gens) -> np.ndarray:
    """Canonical (column Hermite) basis of the lattice spanned by the columns."""
    G = intmat(gens) if not isinstance(gens, np.ndarray) or gens.dtype != object else gens
    if G.shape[1] == 0:
        return G
    H, _ = column_hermite_form(G)
    cols = [j for j in range(H.shape[1]) if any(H[i, j] for i in range(H.shape[0]))]
    return H[:, cols]


def lattice_contains(L: np.ndarray, v) -> bool:
    if L.shape[1] == 0:
        return all(int(x) == 0 for x in np.asarray(v).ravel())
    return solve_int(L, v) is not None


def lattice_sum(L1, L2) -> np.ndarray:
    return lattice_basis(np.concatenate([L1, L2], axis=1))


def lattice_intersect(L1, L2) -> np.ndarray:
    """Intersection of two column lattices in the same Z^n."""
    if L1.shape[1] == 0 or L2.shape[1] == 0:
        return zeros(L1.shape[0], 0)
    K = kernel_basis(np.concatenate([L1, -L2], axis=1))
    return lattice_basis(L1 @ K[: L1.shape[1], :])


def preimage_lattice(A, L) -> np.ndarray:
    """The lattice {x in Z^n : A x in span_Z(columns of L)}."""
    A = intmat(A)
    m, n = A.shape
    if L.shape[1] == 0:
        return kernel_basis(A)
    K = kernel_basis(np.concatenate([A, -intmat(L)], axis=1))
    return lattice_basis(K[:n, :])


def saturation(L) -> np.ndarray:
    """Saturation of a column lattice: (span_Q(L)) cap Z^n."""
    L = intmat(L)
    n, r = L.shape
    if r == 0:
        return L
    # x is in the saturation iff x is orthogonal to everything orthogonal to L
    K = kernel_basis(L.T)          # columns orthogonal to span(L)
    return kernel_basis(K.T)


def quotient_group(L_big: np.ndarray, L_small: np.ndarray):
    """Structure of span(L_big)/span(L_small), requiring containment.

    Returns (factors, free_rank, gen_lifts) where factors are the nontrivial
    invariant factors of the torsion part, free_rank the number of Z-summands,
    and gen_lifts columns in the ambient Z^n mapping to the torsion generators
    (in the order of `factors`) followed by free generators.
    """
    B = lattice_basis(L_big)
    r = B.shape[1]
    if r == 0:
        if L_small.shape[1] != 0:
            raise ValueError("not contained")
        return [], 0, zeros(B.shape[0], 0)
    # coordinates of L_small in the basis B
    cols = []
    for j in range(L_small.shape[1]):
        x = solve_int(B, L_small[:, j])
        if x is None:
            raise ValueError("second lattice not contained in first")
        cols.append(x)
    C = np.array(cols, dtype=object).T if cols else zeros(r, 0)
    U, D, V = smith_normal_form(C)
    Uinv = unimodular_inverse(U)
    factors, lifts, free_lifts = [], [], []
    k = min(D.shape)
    for i in range(r):
        d = int(D[i, i]) if i < k else 0
        g = B @ Uinv[:, i]
        if d == 0:
            free_lifts.append(g)
        elif d > 1:
            factors.append(d)
            lifts.append(g)
    free_rank = len(free_lifts)
    allg = lifts + free_lifts
    G = np.array(allg, dtype=object).T if allg else zeros(B.shape[0], 0)
    return factors, free_rank, G


def unimodular_inverse(U: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix."""
    n = U.shape[0]
    H, V = column_hermite_form(U)
    if not mat_eq(H, eye(n)):
        raise ValueError("matrix is not unimodular")
    return V


# ---------------------------------------------------------------------------
# Rational linear algebra (exact, Fraction entries)
# ---------------------------------------------------------------------------

def ratmat(data) -> np.ndarray:
    A = np.array(data, dtype=object)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return np.vectorize(Fraction, otypes=[object])(A) if A.size else A.astype(object)


def rat_rref(A):
    """Reduced row echelon form; returns (R, pivots)."""
    R = ratmat(A).copy()
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        pr = None
        for i in range(row, m):
            if R[i, col] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != row:
            R[[row, pr], :] = R[[pr, row], :]
        R[row, :] = R[row, :] / R[row, col]
        for i in range(m):
            if i != row and R[i, col] != 0:
                R[i, :] -= R[i, col] * R[row, :]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return R, pivots


def rat_rank(A) -> int:
    return len(rat_rref(A)[1])


def rat_kernel(A) -> np.ndarray:
    """Columns spanning the rational kernel."""
    A = ratmat(A)
    m, n = A.shape
    R, pivots = rat_rref(A)
    free = [j for j in range(n) if j not in pivots]
    cols = []
    for f in free:
        v = np.array([Fraction(0)] * n, dtype=object)
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        cols.append(v)
    return np.array(cols, dtype=object).T if cols else np.zeros((n, 0), dtype=object)


def rat_solve(A, b):
    """One rational solution of A x = b, or None."""
    A = ratmat(A)
    m, n = A.shape
    bb = np.array([Fraction(x) for x in np.asarray(b).ravel()], dtype=object)
    Ab = np.concatenate([A, bb.reshape(-1, 1)], axis=1)
    R, pivots = rat_rref(Ab)
    if n in pivots:
        return None
    x = np.array([Fraction(0)] * n, dtype=object)
    for i, p in enumerate(pivots):
        x[p] = R[i, n]
    return x


def subspace_basis(vectors) -> np.ndarray:
    """Canonical basis (columns, rational RREF rows transposed) of a span."""
    V = ratmat(vectors)
    if V.shape[1] == 0 or V.shape[0] == 0:
        return np.zeros((V.shape[0] if V.ndim == 2 else 0, 0), dtype=object)
    R, pivots = rat_rref(V.T)
    rows = [R[i, :] for i in range(len(pivots))]
    return np.array(rows, dtype=object).T if rows else np.zeros((V.shape[0], 0), dtype=object)


def subspace_intersect(B1: np.ndarray, B2: np.ndarray) -> np.ndarray:
    if B1.shape[1] == 0 or B2.shape[1] == 0:
        return np.zeros((B1.shape[0], 0), dtype=object)
    K = rat_kernel(np.concatenate([B1, -B2], axis=1))
    return subspace_basis(B1 @ K[: B1.shape[1], :])


def subspace_contains(B: np.ndarray, v) -> bool:
    if B.shape[1] == 0:
        return all(Fraction(x) == 0 for x in np.asarray(v).ravel())
    return rat_solve(B, v) is not None


def subspace_equal(B1, B2) -> bool:
    return (rat_rank(B1) == rat_rank(B2) == rat_rank(np.concatenate([B1, B2], axis=1))
            if B1.shape[1] or B2.shape[1] else True)


def lattice_of_subspace(B: np.ndarray) -> np.ndarray:
    """Integer lattice (span_Q(B)) cap Z^n, as canonical column basis."""
    n = B.shape[0]
    if B.shape[1] == 0:
        return zeros(n, 0)
    d = 1
    for x in B.ravel():
        den = Fraction(x).denominator
        d = d * den // math.gcd(d, den)
    Bi = np.vectorize(lambda x: int(Fraction(x) * d), otypes=[object])(B)
    return saturation(Bi)


# ---------------------------------------------------------------------------
# Finite abelian groups
# ---------------------------------------------------------------------------

class FinAbGroup:
    """A finite abelian group recorded by its invariant factors d1 | d2 | ...

    Each factor is > 1; the trivial group has no factors.  Optional generator
    lifts (columns in some ambient module) may be attached.
    """

    def __init__(self, factors, gens=None):
        factors = [int(d) for d in factors if int(d) != 1]
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors must form a divisibility chain: {factors}")
        if any(d < 1 for d in factors):
            raise ValueError("factors must be positive")
        self.factors = factors
        self.gens = gens

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def is_trivial(self) -> bool:
        return not self.factors

    def __eq__(self, other):
        if isinstance(other, FinAbGroup):
            return self.factors == other.factors
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.factors))

    def __repr__(self):
        if not self.factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.factors)

    @staticmethod
    def from_presentation(rels) -> "FinAbGroup":
        """Group Z^n / (columns of rels); must be finite."""
        R = intmat(rels)
        facs = invariant_factors(R)
        rank = R.shape[0] - rat_rank(R)
        if rank:
            raise ValueError("presented group is infinite")
        return FinAbGroup(facs)


# ---------------------------------------------------------------------------
# Arithmetic over Z/p^e with numpy machine integers
# ---------------------------------------------------------------------------

def diagonalize_mod(A, p: int, e: int):
    """U A V = diag over Z/p^e, with U, V invertible mod p^e.

    Returns (U, diag, V) where diag is the list of diagonal entries (each a
    power of p times a unit normalized to the pure power, possibly 0).
    """
    q = p ** e
    A = np.asarray(A, dtype=np.int64) % q
    m, n = A.shape
    U = np.eye(m, dtype=np.int64)
    V = np.eye(n, dtype=np.int64)
    D = A.copy()

    def val(x):
        if x == 0:
            return e
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i, j] % q:
                    v = val(int(D[i, j]))
                    if best is None or v < best[2]:
                        best = (i, j, v)
                        if v == 0:
                            break
            if best is not None and best[2] == 0:
                break
        if best is None:
            break
        i, j, v = best
        if i != t:
            D[[t, i]] = D[[i, t]]
            U[[t, i]] = U[[i, t]]
        if j != t:
            D[:, [t, j]] = D[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        # normalize pivot to p^v
        unit = int(D[t, t]) // (p ** v)
        uinv = pow(unit % q, -1, q)
        D[t] = (D[t] * uinv) % q
        U[t] = (U[t] * uinv) % q
        piv = p ** v
        # clear column and row (all entries have valuation >= v)
        for i in range(m):
            if i != t and D[i, t]:
                f = (int(D[i, t]) // piv) % q
                D[i] = (D[i] - f * D[t]) % q
                U[i] = (U[i] - f * U[t]) % q
        for j in range(n):
            if j != t and D[t, j]:
                f = (int(D[t, j]) // piv) % q
                D[:, j] = (D[:, j] - f * D[:, t]) % q
                V[:, j] = (V[:, j] - f * V[:, t]) % q
        t += 1
    diag = [int(D[i, i]) % q for i in range(min(m, n))]
    return U % q, diag, V % q


def kernel_mod(A, p: int, e: int) -> np.ndarray:
    """Generators (columns) of {x in (Z/p^e)^n : A x = 0 mod p^e}."""
    q = p ** e
    A = np.asarray(A, dtype=np.int64) % q
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    U, diag, V = diagonalize_mod(A, p, e)
    cols = []
    k = len(diag)
    for i in range(n):
        d = diag[i] if i < k else 0
        if d == 0:
            cols.append(V[:, i] % q)
        else:
            f = q // int(np.gcd(d, q))
            if f % q:
                cols.append((f * V[:, i]) % q)
    return np.array(cols, dtype=np.int64).T if cols else np.zeros((n, 0), dtype=np.int64)


def solve_mod(A, b, p: int, e: int):
    """One solution of A x = b over Z/p^e, or None."""
    q = p ** e
    A = np.asarray(A, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64).ravel() % q
    U, diag, V = diagonalize_mod(A, p, e)
    c = (U @ b) % q
    n = A.shape[1]
    y = np.zeros(n, dtype=np.int64)
    for i in range(A.shape[0]):
        d = diag[i] if i < len(diag) and i < n else 0
        ci = int(c[i])
        if d == 0:
            if ci % q:
                return None
        else:
            if ci % d:
                return None
            # solve d * y = c mod q: y = (c/d) * inverse(unit part) -- d is a pure power
            y[i] = (ci // d) % q
            # general solution requires ci divisible by gcd(d, q) = d; y_i = ci/d works
    return (V @ y) % q


def subgroup_structure_mod(gens, p: int, e: int):
    """Invariant factors of the subgroup of (Z/p^e)^n generated by the columns."""
    q = p ** e
    G = np.asarray(gens, dtype=np.int64) % q
    n = G.shape[0]
    if G.shape[1] == 0:
        return []
    _, diag, _ = diagonalize_mod(G, p, e)
    facs = sorted(q // int(np.gcd(int(d), q)) for d in diag)
    return [f for f in facs if f > 1]
