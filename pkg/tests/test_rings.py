import pytest
from hypothesis import given, strategies as st

from nilcat.errors import InvalidModulus, NotEnumerable
from nilcat.rings import (
    Integers,
    IntegersMod,
    TableRing,
    check_ring_axioms,
    ring_enumerate,
    ring_from_json,
    ring_from_name,
    ring_make,
)


def test_mod2_arithmetic():
    R = ring_make("modular", m=2)
    assert list(R.elements()) == [0, 1]
    assert R.add(1, 1) == 0


def test_integer_arithmetic():
    Z = ring_make("integers")
    assert Z.add(2, 3) == 5
    assert Z.mul(2, 3) == 6


@pytest.mark.parametrize("m", [1, 0, -3])
def test_degenerate_modulus(m):
    with pytest.raises(InvalidModulus):
        ring_make("modular", m=m)


def test_enumeration():
    assert ring_enumerate(IntegersMod(3)) == [0, 1, 2]
    assert len(ring_enumerate(IntegersMod(4))) == 4
    with pytest.raises(NotEnumerable):
        ring_enumerate(Integers())


@pytest.mark.parametrize("m", [2, 3, 4, 6, 8])
def test_modular_axioms_exhaustive(m):
    rep = check_ring_axioms(IntegersMod(m))
    assert rep.ok and rep.exhaustive and rep.checked == m ** 3


def test_integer_axioms_sampled():
    rep = check_ring_axioms(Integers(), samples=2000)
    assert rep.ok and not rep.exhaustive


def test_table_ring_f4():
    # GF(4) = {0, 1, a, a+1} with a^2 = a + 1
    add = [[i ^ j for j in range(4)] for i in range(4)]
    log = {1: 0, 2: 1, 3: 2}
    exp = [1, 2, 3]
    mul = [[0 if 0 in (i, j) else exp[(log[i] + log[j]) % 3] for j in range(4)] for i in range(4)]
    R = TableRing(add, mul)
    assert R.mul(2, 2) == 3 and R.neg(3) == 3
    assert ring_from_json(R.to_json()) == R


def test_table_ring_rejects_non_ring():
    add = [[0, 1], [1, 0]]
    mul = [[0, 0], [0, 0]]  # 1 * 1 = 0 breaks the unit
    with pytest.raises(ValueError):
        TableRing(add, mul)


@pytest.mark.parametrize("name,expected", [("Z", Integers()), ("mod5", IntegersMod(5)), ("Z/7", IntegersMod(7))])
def test_names(name, expected):
    assert ring_from_name(name) == expected


def test_json_round_trip():
    for R in (Integers(), IntegersMod(9)):
        assert ring_from_json(R.to_json()) == R


@given(st.integers(min_value=2, max_value=50), st.integers(), st.integers())
def test_modular_matches_python(m, a, b):
    R = IntegersMod(m)
    x, y = R.canon(a), R.canon(b)
    assert R.add(x, y) == (a + b) % m
    assert R.mul(x, y) == (a * b) % m
    assert R.sub(x, y) == (a - b) % m


@given(st.integers(min_value=-10**12, max_value=10**12))
def test_decimal_strings(a):
    Z = Integers()
    assert Z.from_str(Z.to_str(a)) == a


def test_ring_values():
    R = IntegersMod(5)
    x = R(3)
    assert str(x * x + 1) == "0"
    assert -x == R(2)
    with pytest.raises(TypeError):
        x + IntegersMod(7)(1)
