"""Commutative unital rings with exact arithmetic.

Ring values are plain Python ints in a canonical form (residues in
``[0, m)`` for ``Z/m``, indices for table rings, arbitrary integers for
``Z``).  Group and cocycle code works on these raw ints; :class:`RingValue`
wraps one together with its ring for user-facing arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidModulus, NotEnumerable


class Ring:
    kind = "abstract"

    # subclasses provide: zero, one, add, neg, mul, canon, key, is_finite
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b):
        return self.canon(a) == self.canon(b)

    def from_int(self, k):
        """Image of the integer ``k`` under the unique map Z -> R."""
        if k < 0:
            return self.neg(self.from_int(-k))
        out, base = self.zero, self.one
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return out

    def scale(self, k, a):
        """``k * a`` for an integer ``k``."""
        return self.mul(self.from_int(k), a)

    def power(self, a, k):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def elements(self):
        raise NotEnumerable(f"{self} is not finite")

    @property
    def order(self):
        raise NotEnumerable(f"{self} is not finite")

    def random_element(self, rng, bound=10**6):
        if self.is_finite:
            return rng.randrange(self.order)
        return rng.randint(-bound, bound)

    def to_str(self, a):
        return str(self.canon(a))

    def from_str(self, s):
        return self.canon(int(s))

    def __call__(self, x):
        if isinstance(x, str):
            return RingValue(self, self.from_str(x))
        return RingValue(self, self.canon(x))

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def tables(self):
        """``(add, mul, neg)`` as numpy lookup tables; finite rings only."""
        elems = list(self.elements())
        k = len(elems)
        add = np.empty((k, k), dtype=np.int64)
        mul = np.empty((k, k), dtype=np.int64)
        for a, b in itertools.product(elems, repeat=2):
            add[a, b] = self.add(a, b)
            mul[a, b] = self.mul(a, b)
        neg = np.array([self.neg(a) for a in elems], dtype=np.int64)
        return add, mul, neg


class Integers(Ring):
    kind = "integers"
    zero = 0
    one = 1
    is_finite = False
    key = ("integers",)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def canon(self, a):
        return int(a)

    def from_int(self, k):
        return k

    def to_json(self):
        return {"kind": "integers"}

    def __repr__(self):
        return "Z"


class IntegersMod(Ring):
    kind = "modular"
    zero = 0
    one = 1
    is_finite = True

    def __init__(self, m):
        if m < 2:
            raise InvalidModulus(f"modulus must be >= 2, got {m}")
        self.m = m
        self.key = ("modular", m)

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return -a % self.m

    def mul(self, a, b):
        return a * b % self.m

    def canon(self, a):
        return int(a) % self.m

    def from_int(self, k):
        return k % self.m

    def elements(self):
        return iter(range(self.m))

    @property
    def order(self):
        return self.m

    def to_json(self):
        return {"kind": "modular", "m": self.m}

    def __repr__(self):
        return f"Z/{self.m}"


class TableRing(Ring):
    """A finite ring given by addition and multiplication tables on 0..k-1.

    The tables are checked against the commutative unital ring axioms on
    construction.
    """

    kind = "table"
    is_finite = True

    def __init__(self, add, mul, zero=0, one=1, names=None, check=True):
        self._add = tuple(tuple(int(v) for v in row) for row in add)
        self._mul = tuple(tuple(int(v) for v in row) for row in mul)
        k = len(self._add)
        if any(len(r) != k for r in self._add + self._mul) or len(self._mul) != k:
            raise ValueError("ring tables must be square and of equal size")
        self.zero, self.one = int(zero), int(one)
        self.names = tuple(names) if names is not None else None
        self.key = ("table", self._add, self._mul, self.zero, self.one)
        if check:
            report = check_ring_axioms(self)
            if not report.ok:
                raise ValueError(f"tables do not define a commutative unital ring: {report.failures}")

    def add(self, a, b):
        return self._add[a][b]

    def neg(self, a):
        row = self._add[a]
        return row.index(self.zero)

    def mul(self, a, b):
        return self._mul[a][b]

    def canon(self, a):
        a = int(a)
        if not 0 <= a < len(self._add):
            raise ValueError(f"{a} is not an element of {self}")
        return a

    def from_int(self, k):
        return Ring.from_int(self, k)

    def elements(self):
        return iter(range(len(self._add)))

    @property
    def order(self):
        return len(self._add)

    def to_json(self):
        return {
            "kind": "table",
            "add": [list(r) for r in self._add],
            "mul": [list(r) for r in self._mul],
            "zero": self.zero,
            "one": self.one,
        }

    def __repr__(self):
        return f"TableRing(order={self.order})"


def ring_make(kind, m=None, **params):
    """Build a ring from a kind name (``integers``, ``modular``, ``table``)."""
    if kind in ("integers", "Z", "int"):
        return Integers()
    if kind in ("modular", "mod"):
        if m is None:
            raise InvalidModulus("modular ring needs a modulus m")
        return IntegersMod(int(m))
    if kind in ("table", "custom-table"):
        return TableRing(**params)
    raise ValueError(f"unknown ring kind {kind!r}")


def ring_from_json(desc):
    desc = dict(desc)
    return ring_make(desc.pop("kind"), **desc)


def ring_from_name(name):
    """Parse the short names used on the command line: ``Z``, ``mod3``, ``Z/3``."""
    if name in ("Z", "int", "integers"):
        return Integers()
    for prefix in ("mod", "Z/"):
        if name.startswith(prefix):
            return IntegersMod(int(name[len(prefix):]))
    raise ValueError(f"unrecognised ring name {name!r}")


def ring_enumerate(R):
    """All elements of a finite ring in canonical order."""
    if not R.is_finite:
        raise NotEnumerable(f"{R} is not finite")
    return list(R.elements())


@dataclass(frozen=True)
class RingValue:
    ring: Ring
    value: int

    def _coerce(self, other):
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise TypeError(f"cannot combine values of {self.ring} and {other.ring}")
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return RingValue(self.ring, self.ring.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return RingValue(self.ring, self.ring.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return RingValue(self.ring, self.ring.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        return RingValue(self.ring, self.ring.mul(self.value, b))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.key, self.value))

    def __str__(self):
        return self.ring.to_str(self.value)

    def __repr__(self):
        return f"{self.ring!r}({self.ring.to_str(self.value)})"


@dataclass
class AxiomReport:
    exhaustive: bool
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def check_ring_axioms(R, samples=10_000, seed=0):
    """Check the commutative unital ring axioms.

    Finite rings are checked on every triple; infinite ones on ``samples``
    random triples (a sampled pass is not a proof).
    """
    if R.is_finite:
        elems = list(R.elements())
        triples = itertools.product(elems, repeat=3)
        exhaustive = True
    else:
        rng = random.Random(seed)
        triples = ((R.random_element(rng), R.random_element(rng), R.random_element(rng))
                   for _ in range(samples))
        exhaustive = False
    add, mul, z, o = R.add, R.mul, R.zero, R.one
    report = AxiomReport(exhaustive=exhaustive, checked=0)
    for a, b, c in triples:
        report.checked += 1
        checks = {
            "add-assoc": add(add(a, b), c) == add(a, add(b, c)),
            "mul-assoc": mul(mul(a, b), c) == mul(a, mul(b, c)),
            "add-comm": add(a, b) == add(b, a),
            "mul-comm": mul(a, b) == mul(b, a),
            "distrib": mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
            "zero": add(a, z) == a,
            "one": mul(a, o) == a,
            "neg": add(a, R.neg(a)) == z,
        }
        for name, ok in checks.items():
            if not ok:
                report.failures.append((name, (a, b, c)))
        if len(report.failures) > 20:
            break
    if z == o:
        report.failures.append(("one-ne-zero", (z, o)))
    return report
