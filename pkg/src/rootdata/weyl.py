"""Finite reflection groups as integer matrix groups.

Groups are enumerated by orbit closure from generator matrices, over Z or
with entries truncated mod a prime power (for the exotic rank-3 2-adic
group).  A simple system, reduced words and a Coxeter presentation are
available whenever the group preserves a real root system.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import intlinalg as la


class NotCoxeterType(Exception):
    """Raised when an operation needs a real simple system that does not exist."""


class EnumerationBound(Exception):
    """Group closure exceeded the configured element bound."""


class WeylGroup:
    """A finite matrix group with an element table and Cayley structure.

    Elements are n x n integer matrices, stored as a list indexed 0..N-1 with
    index 0 the identity.  `modulus` is None for groups over Z, or a prime
    power q: all matrix arithmetic is then done mod q.
    """

    def __init__(self, generators, bound: int = 20000, modulus: int | None = None,
                 rank: int | None = None):
        gens = [np.array(g, dtype=np.int64) for g in generators]
        n = gens[0].shape[0] if gens else (rank if rank is not None else 1)
        for g in gens:
            if g.shape != (n, n):
                raise ValueError("generators must be square of equal size")
        self.rank = n
        self.modulus = modulus
        ident = np.eye(n, dtype=np.int64)
        if modulus is not None:
            gens = [g % modulus for g in gens]
        self.elements: list[np.ndarray] = [ident]
        self._index = {ident.tobytes(): 0}
        self.gen_indices: list[int] = []
        frontier = [0]
        # BFS closure; FIFO with ascending generators gives ShortLex words
        self._word = {0: ()}
        while frontier:
            nxt = []
            for i in frontier:
                a = self.elements[i]
                for gi, g in enumerate(gens):
                    b = a @ g
                    if modulus is not None:
                        b %= modulus
                    key = b.tobytes()
                    j = self._index.get(key)
                    if j is None:
                        j = len(self.elements)
                        if j >= bound:
                            raise EnumerationBound(f"more than {bound} elements")
                        self.elements.append(b)
                        self._index[key] = j
                        self._word[j] = self._word[i] + (gi,)
                        nxt.append(j)
            frontier = nxt
        for g in gens:
            self.gen_indices.append(self._index[g.tobytes()])
        self.order = len(self.elements)
        self._mul = None
        self._inv = None
        self._reflections = None
        self._classes = None

    # -- element access -------------------------------------------------------

    def matrix(self, i: int) -> np.ndarray:
        return self.elements[i]

    def index_of(self, M) -> int:
        M = np.array(M, dtype=np.int64)
        if self.modulus is not None:
            M %= self.modulus
        j = self._index.get(M.tobytes())
        if j is None:
            raise KeyError("matrix not in group")
        return j

    def contains_matrix(self, M) -> bool:
        M = np.array(M, dtype=np.int64)
        if self.modulus is not None:
            M %= self.modulus
        return M.tobytes() in self._index

    def mul(self, i: int, j: int) -> int:
        if self._mul is not None:
            return int(self._mul[i, j])
        b = self.elements[i] @ self.elements[j]
        if self.modulus is not None:
            b %= self.modulus
        return self._index[b.tobytes()]

    def inv(self, i: int) -> int:
        if self._inv is None:
            self._inv = np.full(self.order, -1, dtype=np.int64)
        if self._inv[i] < 0:
            # order of the element is finite; walk the cyclic group
            j, k = i, 0
            while j != 0:
                k = j
                j = self.mul(j, i)
            self._inv[i] = k if i != 0 else 0
        return int(self._inv[i])

    def build_mul_table(self):
        """Dense multiplication table (index arithmetic); built on demand."""
        if self._mul is not None:
            return
        N = self.order
        table = np.zeros((N, N), dtype=np.int32)
        elems = np.stack(self.elements)
        for j in range(N):
            prod = elems @ self.elements[j]
            if self.modulus is not None:
                prod %= self.modulus
            for i in range(N):
                table[i, j] = self._index[prod[i].tobytes()]
        self._mul = table

    def conj(self, w: int, x: int) -> int:
        """w x w^-1."""
        return self.mul(self.mul(w, x), self.inv(w))

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            k += 1
        return k if i != 0 else 1

    def word(self, i: int):
        """A word in the generators reaching element i (from the closure BFS)."""
        return self._word[i]

    # -- reflections ------------------------------------------------------------

    def reflections(self) -> list[int]:
        """Indices of elements with rank-one 1 - sigma."""
        if self._reflections is None:
            out = []
            for i, M in enumerate(self.elements):
                if i == 0:
                    continue
                if self._rank_one_minus(M):
                    out.append(i)
            self._reflections = out
        return self._reflections

    def _rank_one_minus(self, M) -> bool:
        A = np.eye(self.rank, dtype=np.int64) - M
        if self.modulus is None:
            return la.rat_rank(la.intmat(A)) == 1
        # truncated: count elementary divisors that are nonzero mod q
        p = _prime_of(self.modulus)
        e = _exponent_of(self.modulus, p)
        _, diag, _ = la.diagonalize_mod(A % self.modulus, p, e)
        return sum(1 for d in diag if d % self.modulus) == 1

    def reflection_classes(self) -> list[list[int]]:
        """Conjugacy classes of reflections (each sorted, classes sorted)."""
        if self._classes is None:
            refl = set(self.reflections())
            seen, classes = set(), []
            for s in sorted(refl):
                if s in seen:
                    continue
                orbit = {s}
                frontier = [s]
                while frontier:
                    x = frontier.pop()
                    for g in self.gen_indices:
                        y = self.conj(g, x)
                        if y not in orbit:
                            orbit.add(y)
                            frontier.append(y)
                assert orbit <= refl, "reflections are not closed under conjugation"
                classes.append(sorted(orbit))
                seen |= orbit
            self._classes = classes
        return self._classes

    def class_of_reflection(self, s: int) -> int:
        for k, cl in enumerate(self.reflection_classes()):
            if s in cl:
                return k
        raise ValueError("not a reflection")

    def centralizer(self, x: int) -> list[int]:
        return [w for w in range(self.order) if self.mul(w, x) == self.mul(x, w)]

    def stabilizer_of_vector(self, v) -> list[int]:
        v = np.asarray(v, dtype=np.int64)
        out = []
        for i, M in enumerate(self.elements):
            w = M @ v
            if self.modulus is not None:
                w %= self.modulus
            if (w == (v % self.modulus if self.modulus is not None else v)).all():
                out.append(i)
        return out

    def subgroup_indices(self, gens: list[int]) -> list[int]:
        """Closure of a set of element indices (sorted)."""
        seen = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return sorted(seen)

    def __len__(self):
        return self.order

    def __repr__(self):
        mod = f" mod {self.modulus}" if self.modulus else ""
        return f"<matrix group of order {self.order}, rank {self.rank}{mod}>"


def _prime_of(q: int) -> int:
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            return p
    raise ValueError(f"modulus {q} is not a small prime power")


def _exponent_of(q: int, p: int) -> int:
    e = 0
    while q > 1:
        q //= p
        e += 1
    return e


def generate_group(generators, bound: int = 20000, modulus=None) -> WeylGroup:
    return WeylGroup(generators, bound=bound, modulus=modulus)


# ---------------------------------------------------------------------------
# Simple systems and reduced words (Coxeter-type groups over Z)
# ---------------------------------------------------------------------------

class SimpleSystem:
    """A simple system for a reflection group acting on root vectors in Z^n.

    Built from the full set of signed root vectors by choosing positives with
    a deterministic generic linear functional and extracting the
    indecomposable ones.
    """

    def __init__(self, W: WeylGroup, roots_by_reflection: dict[int, np.ndarray],
                 functional=None):
        if W.modulus is not None:
            raise NotCoxeterType("no real root system for a truncated matrix group")
        self.W = W
        self.root_of = {s: np.array(v, dtype=object) for s, v in roots_by_reflection.items()}
        allroots = []
        for s, v in sorted(self.root_of.items()):
            allroots.append((s, v))
            allroots.append((s, -v))
        lam = functional if functional is not None else _generic_functional(
            [v for _, v in allroots], W.rank)
        self.functional = lam
        pos = [(s, v) for s, v in allroots if _dot(lam, v) > 0]
        if 2 * len(pos) != len(allroots):
            raise NotCoxeterType("functional vanishes on a root")
        self.positive = pos
        posvecs = [tuple(int(x) for x in v) for _, v in pos]
        posset = set(posvecs)
        simple = []
        for s, v in pos:
            vt = tuple(int(x) for x in v)
            decomposable = False
            for u in posvecs:
                w = tuple(a - b for a, b in zip(vt, u))
                if w != tuple([0] * len(w)) and w in posset and u != vt:
                    decomposable = True
                    break
            if not decomposable:
                simple.append((s, v))
        simple.sort(key=lambda sv: tuple(int(x) for x in sv[1]))
        self.simple = simple
        self.simple_reflections = [s for s, _ in simple]
        self._check()
        self._words = None
        self._lengths = None

    def _check(self):
        W = self.W
        closure = W.subgroup_indices(self.simple_reflections)
        if len(closure) != W.order:
            raise NotCoxeterType("simple reflections do not generate the group")
        span = la.ratmat([list(v) for _, v in self.root_of.items()]).T
        if la.rat_rank(span) != len(self.simple):
            raise NotCoxeterType("simple system size differs from the semisimple rank")

    # -- reduced words ---------------------------------------------------------

    def _build_words(self):
        if self._words is not None:
            return
        W = self.W
        S = self.simple_reflections
        words = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for i in frontier:
                for k, s in enumerate(S):
                    j = W.mul(i, s)
                    if j not in words:
                        words[j] = words[i] + (k,)
                        nxt.append(j)
            frontier = nxt
        if len(words) != W.order:
            raise NotCoxeterType("simple reflections do not generate")
        self._words = words
        self._lengths = {i: len(w) for i, w in words.items()}

    def reduced_word(self, i: int):
        """The ShortLex-minimal reduced word of element i (simple indices)."""
        self._build_words()
        return self._words[i]

    def length(self, i: int) -> int:
        self._build_words()
        return self._lengths[i]

    def inversions(self, i: int) -> int:
        """Number of positive roots sent negative; equals the word length."""
        W = self.W
        M = W.matrix(i)
        lam = self.functional
        count = 0
        for _, v in self.positive:
            w = M @ np.array([int(x) for x in v], dtype=np.int64)
            if _dot(lam, w) < 0:
                count += 1
        return count

    def longest_element(self) -> int:
        self._build_words()
        return max(self._lengths, key=lambda i: self._lengths[i])

    def coxeter_matrix(self) -> np.ndarray:
        S = self.simple_reflections
        r = len(S)
        m = np.ones((r, r), dtype=np.int64)
        for a in range(r):
            for b in range(r):
                if a != b:
                    m[a, b] = self.W.element_order(self.W.mul(S[a], S[b]))
        return m


def _dot(lam, v):
    return sum(int(a) * int(b) for a, b in zip(lam, v))


def _generic_functional(vectors, n):
    # powers of a fixed large prime; escalate if some root pairing vanishes
    for M in (10007, 100003, 1000003):
        lam = [M ** k for k in range(n)]
        if all(_dot(lam, v) != 0 for v in vectors):
            return lam
    raise NotCoxeterType("could not find a generic functional")


# ---------------------------------------------------------------------------
# Presentations and coset enumeration
# ---------------------------------------------------------------------------

class Presentation:
    """A finite presentation: generator count and relator words.

    Relator letters are generator indices; negative letter -(i+1) denotes the
    inverse of generator i.
    """

    def __init__(self, ngens: int, relators: list[tuple[int, ...]]):
        self.ngens = ngens
        self.relators = [tuple(r) for r in relators]

    def evaluate_word(self, W: WeylGroup, gen_indices: list[int], word) -> int:
        x = 0
        for letter in word:
            g = gen_indices[letter] if letter >= 0 else W.inv(gen_indices[-letter - 1])
            x = W.mul(x, g)
        return x

    def check_relations(self, W: WeylGroup, gen_indices: list[int]) -> bool:
        return all(self.evaluate_word(W, gen_indices, r) == 0 for r in self.relators)


def coxeter_presentation(W: WeylGroup, simple: SimpleSystem) -> Presentation:
    """Relators s_i^2 and (s_i s_j)^{m_ij} on the simple reflections."""
    m = simple.coxeter_matrix()
    r = len(simple.simple_reflections)
    relators = [(i, i) for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            relators.append((i, j) * int(m[i, j]))
    P = Presentation(r, relators)
    if not P.check_relations(W, simple.simple_reflections):
        raise AssertionError("Coxeter relators do not evaluate to the identity")
    return P


def todd_coxeter(P: Presentation, max_cosets: int = 200000) -> int:
    """Order of the presented group by coset enumeration over the trivial
    subgroup (HLT with coincidence handling)."""
    ngens = P.ngens
    ncols = 2 * ngens

    def col(letter):
        return letter if letter >= 0 else ngens + (-letter - 1)

    def invcol(letter):
        return ngens + letter if letter >= 0 else (-letter - 1)

    table = [[None] * ncols]
    rep = [0]

    def find(c):
        while rep[c] != c:
            rep[c] = rep[rep[c]]
            c = rep[c]
        return c

    queue = []

    def merge(a, b):
        a, b = find(a), find(b)
        if a != b:
            if a > b:
                a, b = b, a
            rep[b] = a
            queue.append(b)

    def define(c, cl):
        nonlocal table
        if len(table) >= max_cosets:
            raise EnumerationBound("coset table exceeded the bound")
        d = len(table)
        table.append([None] * ncols)
        rep.append(d)
        set_entry(c, cl, d)
        return d

    def set_entry(c, cl, d):
        inverse = cl + ngens if cl < ngens else cl - ngens
        if table[c][cl] is None:
            table[c][cl] = d
        elif find(table[c][cl]) != find(d):
            merge(table[c][cl], d)
        if table[d][inverse] is None:
            table[d][inverse] = c
        elif find(table[d][inverse]) != find(c):
            merge(table[d][inverse], c)

    def scan(c, word):
        # forward
        f, i = c, 0
        while i < len(word):
            cl = col(word[i])
            nxt = table[f][cl]
            if nxt is None:
                break
            f, i = find(nxt), i + 1
        if i == len(word):
            merge(f, c)
            return
        # backward
        b, j = c, len(word)
        while j > i:
            cl = invcol(word[j - 1])
            nxt = table[b][cl]
            if nxt is None:
                break
            b, j = find(nxt), j - 1
        if j == i + 1:
            set_entry(f, col(word[i]), b)
        elif j == i:
            merge(f, b)
        else:
            d = define(f, col(word[i]))
            scan(c, word)

    def process_queue():
        while queue:
            dead = queue.pop()
            for cl in range(ncols):
                d = table[dead][cl]
                if d is not None:
                    inverse = cl + ngens if cl < ngens else cl - ngens
                    a = find(dead)
                    db = find(d)
                    if table[a][cl] is None:
                        table[a][cl] = db
                    else:
                        merge(table[a][cl], db)
                    if table[db][inverse] is None:
                        table[db][inverse] = a
                    else:
                        merge(table[db][inverse], a)

    c = 0
    while c < len(table):
        if find(c) != c:
            c += 1
            continue
        for r in P.relators:
            scan(c, r)
            process_queue()
            if find(c) != c:
                break
        c += 1
    # close the table: every live coset must have full rows
    changed = True
    while changed:
        changed = False
        live = [c for c in range(len(table)) if find(c) == c]
        for c in live:
            for cl in range(ncols):
                if table[c][cl] is None:
                    define(c, cl)
                    changed = True
        c2 = 0
        while c2 < len(table):
            if find(c2) == c2:
                for r in P.relators:
                    scan(c2, r)
                    process_queue()
            c2 += 1
    return len({find(c) for c in range(len(table))})


# ---------------------------------------------------------------------------
# The exotic rank-3 group over Z/2^k
# ---------------------------------------------------------------------------

def _gl3f2_elements():
    mats = []
    for bits in itertools.product([0, 1], repeat=9):
        M = np.array(bits, dtype=np.int64).reshape(3, 3)
        d = int(round(np.linalg.det(M.astype(float)))) % 2
        if d == 1:
            mats.append(M)
    return mats


def _find_hurwitz_pair():
    """Generators s, t of GL_3(F_2) with |s|=2, |t|=3, |st|=7, |[s,t]|=4."""
    G = WeylGroup([np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
                   np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
                   np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]])], modulus=2)
    assert G.order == 168
    for i in range(1, G.order):
        if G.element_order(i) != 2:
            continue
        for j in range(1, G.order):
            if G.element_order(j) != 3:
                continue
            if G.element_order(G.mul(i, j)) != 7:
                continue
            comm = G.mul(G.mul(i, j), G.mul(G.inv(i), G.inv(j)))
            if G.element_order(comm) != 4:
                continue
            if len(G.subgroup_indices([i, j])) == 168:
                return G.matrix(i) % 2, G.matrix(j) % 2
    raise AssertionError("no Hurwitz generating pair found in GL_3(F_2)")


def gl3f2_presentation() -> Presentation:
    """The (2,3,7) presentation s^2, t^3, (st)^7, [s,t]^4 of GL_3(F_2)."""
    s, t = 0, 1
    rel_comm = (s, t, -s - 1, -t - 1) * 4
    return Presentation(2, [(s, s), (t, t, t), (s, t) * 7, rel_comm])


def _hensel_lift_pair(s2, t2, k: int):
    """Lift the mod-2 pair through Z/2^j, j <= k, preserving the relators."""
    P = gl3f2_presentation()
    S = s2.astype(np.int64).copy()
    T = t2.astype(np.int64).copy()
    for j in range(1, k):
        q = 2 ** (j + 1)
        defects = _relator_defects(P, S, T, q)
        if all(not d.any() for d in defects):
            continue
        A, b = _lift_system(P, S, T, q, defects, j)
        sol = la.solve_mod(A, b, 2, 1)
        if sol is None:
            raise AssertionError("representation lift is obstructed; inconsistent input")
        X = np.array(sol[:9], dtype=np.int64).reshape(3, 3)
        Y = np.array(sol[9:], dtype=np.int64).reshape(3, 3)
        S = (S @ (np.eye(3, dtype=np.int64) + (2 ** j) * X)) % q
        T = (T @ (np.eye(3, dtype=np.int64) + (2 ** j) * Y)) % q
        defects = _relator_defects(P, S, T, q)
        assert all(not d.any() for d in defects), "lift step failed"
    return S % (2 ** k), T % (2 ** k)


def _word_matrices(S, T, q, word):
    Sinv, Tinv = _matinv_mod(S, q), _matinv_mod(T, q)
    out = []
    for letter in word:
        if letter >= 0:
            out.append((letter, (S, T)[letter] % q))
        else:
            out.append((letter, (Sinv, Tinv)[-letter - 1] % q))
    return out


def _relator_defects(P, S, T, q):
    out = []
    for r in P.relators:
        M = np.eye(3, dtype=np.int64)
        for _, mat in _word_matrices(S, T, q, r):
            M = (M @ mat) % q
        out.append((M - np.eye(3, dtype=np.int64)) % q)
    return out


def _lift_system(P, S, T, q, defects, j):
    """Linearized relator equations for the multiplicative correction mod 2."""
    rows, rhs = [], []
    for r, defect in zip(P.relators, defects):
        # R(S(1+2^j X), T(1+2^j Y)) = R + 2^j * sum_i (terms linear in X, Y)
        # mod 2^{j+1}; a positive letter g contributes prefix.g Z suffix, an
        # inverse letter contributes -prefix Z g^-1.suffix.
        coeffs = np.zeros((3, 3, 18), dtype=np.int64)
        mats = _word_matrices(S, T, q, r)
        prefixes = [np.eye(3, dtype=np.int64)]
        for _, m in mats:
            prefixes.append((prefixes[-1] @ m) % q)
        suffixes = [np.eye(3, dtype=np.int64)]
        for _, m in reversed(mats):
            suffixes.insert(0, (m @ suffixes[0]) % q)
        for i, (letter, m) in enumerate(mats):
            which = 0 if letter in (0, -1) else 1
            if letter >= 0:
                sign, pre, suf = 1, (prefixes[i] @ m) % q, suffixes[i + 1]
            else:
                sign, pre, suf = -1, prefixes[i], suffixes[i]
            for a in range(3):
                for b in range(3):
                    contrib = np.outer(pre[:, a], suf[b, :]) * sign
                    coeffs[:, :, which * 9 + 3 * a + b] += contrib
        target = (-(defect // (2 ** j))) % 2
        for a in range(3):
            for b in range(3):
                rows.append(coeffs[a, b, :] % 2)
                rhs.append(target[a, b] % 2)
    return np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64)


def _matinv_mod(M, q):
    n = M.shape[0]
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        x = la.solve_mod(np.array(M % q, dtype=np.int64), np.array(e, dtype=np.int64),
                         _prime_of(q), _exponent_of(q, _prime_of(q)))
        if x is None:
            raise ValueError("matrix not invertible mod q")
        cols.append(x)
    return np.array(cols, dtype=np.int64).T % q


def builtin_di4(k: int) -> WeylGroup:
    """The rank-3 reflection group over Z/2^k: center <-1> times a simple
    group of order 168 acting irreducibly, with 21 reflections.

    Built by lifting a generating pair of GL_3(F_2) through the 2-adic
    congruence tower (possible since -7 is a square in Z_2) and adjoining -1.
    The stated verification checks run on every call; failure raises.
    """
    if k < 3:
        raise ValueError("need truncation exponent k >= 3")
    s2, t2 = _find_hurwitz_pair()
    S, T = _hensel_lift_pair(s2, t2, k)
    q = 2 ** k
    negI = (-np.eye(3, dtype=np.int64)) % q
    W = WeylGroup([S, T, negI], bound=1000, modulus=q)
    # verification: order, reflections, center, mod-2 image
    if W.order != 336:
        raise AssertionError(f"exotic group lift has order {W.order}, expected 336")
    refl = W.reflections()
    if len(refl) != 21:
        raise AssertionError(f"expected 21 reflections, found {len(refl)}")
    if len(W.reflection_classes()) != 1:
        raise AssertionError("reflections must form a single conjugacy class")
    center = [i for i in range(W.order)
              if all(W.mul(i, g) == W.mul(g, i) for g in W.gen_indices)]
    if sorted(center) != sorted([0, W.index_of(negI)]):
        raise AssertionError("center must be {1, -1}")
    mod2 = {W.matrix(i).astype(np.int64).__mod__(2).tobytes() for i in range(W.order)}
    if len(mod2) != 168:
        raise AssertionError("mod-2 reduction must be GL_3(F_2) of order 168")
    closure = W.subgroup_indices(W.gen_indices[:2])
    if len(closure) != 168:
        raise AssertionError("lifted pair must generate a group of order 168")
    return W
