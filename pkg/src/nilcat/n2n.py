"""The groups N_{2,n}(R).

An element is a pair of coordinate tuples ``((a_1..a_n), (c_12, c_13, .., c_{n-1,n}))``
with the central coordinates in lexicographic pair order.  Multiplication is

    ((a_i), (c_ij)) * ((b_i), (d_ij)) = ((a_i + b_i), (c_ij + d_ij + a_i b_j)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleElements, NotEnumerable, NotInCentralizer
from .finite import FiniteGroup, basis_report


def lex_pairs(n):
    """Central coordinate positions (i, j), 1 <= i < j <= n, in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


class Element:
    __slots__ = ("group", "alphas", "gammas")

    def __init__(self, group, alphas, gammas):
        self.group = group
        self.alphas = alphas
        self.gammas = gammas

    def __mul__(self, other):
        return self.group.mul(self, other)

    def inverse(self):
        return self.group.inv(self)

    def __pow__(self, k):
        G = self.group
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = G.identity
        while k:
            if k & 1:
                out = G.mul(out, base)
            base = G.mul(base, base)
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.alphas == other.alphas and self.gammas == other.gammas
                and self.group.key == other.group.key)

    def __hash__(self):
        return hash((self.alphas, self.gammas))

    @property
    def coords(self):
        return self.alphas + self.gammas

    def to_json(self):
        R = self.group.ring
        return {"alphas": [R.to_str(a) for a in self.alphas],
                "gammas": [R.to_str(c) for c in self.gammas]}

    def __repr__(self):
        R = self.group.ring
        a = ",".join(R.to_str(v) for v in self.alphas)
        c = ",".join(R.to_str(v) for v in self.gammas)
        return f"(({a}),({c}))"


@dataclass(frozen=True)
class NormalForm:
    """Exponents of x = g_n^a_n ... g_1^a_1 g_12^c_12 ... g_{n-1,n}^c_{n-1,n}."""

    alphas_desc: tuple
    gammas: tuple

    @property
    def exponents(self):
        return self.alphas_desc + self.gammas


class Subgroup:
    """Membership predicate plus lazy enumeration for finite rings."""

    def __init__(self, group, name, contains):
        self.group = group
        self.name = name
        self._contains = contains

    def __contains__(self, x):
        return self._contains(x)

    def elements(self):
        return [x for x in self.group.elements() if self._contains(x)]

    def __repr__(self):
        return f"Subgroup({self.name} of {self.group!r})"


class N2nGroup:
    def __init__(self, ring, n):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.ring = ring
        self.n = n
        self.pairs = lex_pairs(n)
        self.pair_index = {p: k for k, p in enumerate(self.pairs)}
        self.K = len(self.pairs)
        zero = ring.zero
        self.identity = Element(self, (zero,) * n, (zero,) * self.K)

    @property
    def key(self):
        return ("N", self.ring.key, self.n)

    def __eq__(self, other):
        return isinstance(other, N2nGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"N_2,{self.n}({self.ring!r})"

    # -- construction -------------------------------------------------------

    def element(self, alphas, gammas=None):
        R = self.ring
        if gammas is None:
            gammas = (R.zero,) * self.K
        alphas, gammas = tuple(alphas), tuple(gammas)
        if len(alphas) != self.n or len(gammas) != self.K:
            raise ValueError(f"expected {self.n} alphas and {self.K} gammas")

        def conv(v):
            if hasattr(v, "ring"):
                if v.ring != R:
                    raise IncompatibleElements(f"value from {v.ring} used in {self}")
                return v.value
            if isinstance(v, str):
                return R.from_str(v)
            return R.canon(v)

        return Element(self, tuple(conv(a) for a in alphas), tuple(conv(c) for c in gammas))

    def from_json(self, obj):
        return self.element(obj["alphas"], obj["gammas"])

    def gen(self, i, alpha=None):
        """g_i^alpha (1-based i); alpha defaults to 1."""
        R = self.ring
        a = [R.zero] * self.n
        a[i - 1] = R.one if alpha is None else alpha
        return self.element(a)

    def central_gen(self, i, j, gamma=None):
        """g_ij^gamma for i < j."""
        R = self.ring
        c = [R.zero] * self.K
        c[self.pair_index[i, j]] = R.one if gamma is None else gamma
        return self.element([R.zero] * self.n, c)

    def standard_basis(self):
        """(g_1..g_n) and (g_12..g_{n-1,n})."""
        return ([self.gen(i) for i in range(1, self.n + 1)],
                [self.central_gen(i, j) for i, j in self.pairs])

    # -- arithmetic ------------------------------------------------------------

    def _check(self, *xs):
        for x in xs:
            if x.group.key != self.key:
                raise IncompatibleElements(f"{x!r} does not belong to {self!r}")

    def _twist(self, a, b):
        """Extra central summand of the product; zero for N_{2,n}."""
        return None

    def mul(self, x, y):
        self._check(x, y)
        R = self.ring
        a, b = x.alphas, y.alphas
        gam = [R.add(R.add(c, d), R.mul(a[i - 1], b[j - 1]))
               for (i, j), c, d in zip(self.pairs, x.gammas, y.gammas)]
        tw = self._twist(a, b)
        if tw is not None:
            gam = [R.add(g, t) for g, t in zip(gam, tw)]
        return Element(self, tuple(R.add(s, t) for s, t in zip(a, b)), tuple(gam))

    def inv(self, x):
        self._check(x)
        R = self.ring
        a = x.alphas
        gam = tuple(R.sub(R.mul(a[i - 1], a[j - 1]), c) for (i, j), c in zip(self.pairs, x.gammas))
        return Element(self, tuple(R.neg(v) for v in a), gam)

    def commutator(self, x, y):
        """[x, y] = ((0), (a_i b_j - b_i a_j)) by the closed formula."""
        self._check(x, y)
        R = self.ring
        a, b = x.alphas, y.alphas
        gam = tuple(R.sub(R.mul(a[i - 1], b[j - 1]), R.mul(b[i - 1], a[j - 1])) for i, j in self.pairs)
        return Element(self, (R.zero,) * self.n, gam)

    def commutator_word(self, x, y):
        """x^-1 y^-1 x y evaluated with the group multiplication."""
        return self.mul(self.mul(self.mul(self.inv(x), self.inv(y)), x), y)

    # -- normal forms ------------------------------------------------------------

    def normal_form(self, x):
        self._check(x)
        return NormalForm(tuple(reversed(x.alphas)), x.gammas)

    def normal_form_build(self, nf):
        """Evaluate g_n^a_n ... g_1^a_1 g_12^c_12 ... with the group multiplication."""
        out = self.identity
        for i, a in zip(range(self.n, 0, -1), nf.alphas_desc):
            out = self.mul(out, self.gen(i, a))
        for (i, j), c in zip(self.pairs, nf.gammas):
            out = self.mul(out, self.central_gen(i, j, c))
        return out

    # -- centre and centralizers ------------------------------------------------

    def is_central(self, x):
        self._check(x)
        return all(a == self.ring.zero for a in x.alphas)

    def center(self):
        return Subgroup(self, "Z(G)", self.is_central)

    def center_members(self):
        return self.center().elements()

    def centralizer(self, i):
        """G_i = C_G(g_i) = g_i^R + Z(G)."""
        zero = self.ring.zero

        def contains(x):
            return all(a == zero for k, a in enumerate(x.alphas) if k != i - 1)

        return Subgroup(self, f"G_{i}", contains)

    def decompose(self, x, i):
        """Write x in G_i as g_i^alpha * v with v central; returns (alpha, v)."""
        self._check(x)
        if x not in self.centralizer(i):
            raise NotInCentralizer(f"{x!r} does not commute with g_{i}")
        R = self.ring
        v = Element(self, (R.zero,) * self.n, x.gammas)
        return x.alphas[i - 1], v

    # -- enumeration -----------------------------------------------------------

    @property
    def is_finite(self):
        return self.ring.is_finite

    @property
    def order(self):
        if not self.ring.is_finite:
            raise NotEnumerable(f"{self} is infinite")
        return self.ring.order ** (self.n + self.K)

    def elements(self):
        if not self.ring.is_finite:
            raise NotEnumerable(f"{self} is infinite")
        R = list(self.ring.elements())
        n = self.n
        for coords in itertools.product(R, repeat=n + self.K):
            yield Element(self, coords[:n], coords[n:])

    def random_element(self, rng, bound=50):
        R = self.ring
        return Element(self, tuple(R.random_element(rng, bound) for _ in range(self.n)),
                       tuple(R.random_element(rng, bound) for _ in range(self.K)))

    def _twist_vec(self, A, B):
        return None

    def cayley_table(self):
        """Vectorised multiplication table over the canonical enumeration."""
        add, mul, _ = self.ring.tables
        m = add.shape[0]
        n, K = self.n, self.K
        coords = np.array(list(itertools.product(range(m), repeat=n + K)), dtype=np.int64).reshape(-1, n + K)
        A, C = coords[:, :n], coords[:, n:]
        I = np.array([i - 1 for i, _ in self.pairs], dtype=np.int64)
        J = np.array([j - 1 for _, j in self.pairs], dtype=np.int64)
        Ax, Ay = A[:, None, :], A[None, :, :]
        alpha = add[Ax, Ay]
        gamma = add[add[C[:, None, :], C[None, :, :]], mul[A[:, None, I], A[None, :, J]]]
        tw = self._twist_vec(Ax, Ay)
        if tw is not None:
            gamma = add[gamma, tw]
        weights = m ** np.arange(n + K - 1, -1, -1, dtype=np.int64)
        table = np.concatenate([alpha, gamma], axis=2) @ weights
        labels = [Element(self, tuple(int(v) for v in row[:n]), tuple(int(v) for v in row[n:])) for row in coords]
        return table, labels

    def finite(self):
        """The tabulated group (cached)."""
        if not hasattr(self, "_finite"):
            self._finite = FiniteGroup.from_group(self)
        return self._finite

    def basis_indices(self, H=None):
        H = H or self.finite()
        return [H.index(g) for g in self.standard_basis()[0]]

    def check_basis_axioms(self):
        """Conditions (1)-(5) for the standard basis plus class-2 nilpotency, by enumeration."""
        H = self.finite()
        rep = basis_report(H, self.basis_indices(H))
        rep.name = f"basis-axioms {self!r}"
        rep.record("nilpotent-class-2", H.is_nilpotent_class2())
        rep.record("Z=[G,G]", set(H.center) == set(H.commutator_subgroup()))
        return rep


def n2n_mul(x, y):
    return x.group.mul(x, y)


def n2n_inv(x):
    return x.group.inv(x)


def n2n_commutator(x, y):
    return x.group.commutator(x, y)
