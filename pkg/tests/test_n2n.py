import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from nilcat.errors import IncompatibleElements, NotInCentralizer
from nilcat.n2n import N2nGroup, n2n_commutator, n2n_inv, n2n_mul
from nilcat.rings import Integers, IntegersMod

Z = Integers()
ints = st.integers(min_value=-10**6, max_value=10**6)


def elem(G, a, c):
    return G.element(a, c)


def test_product_mod2():
    G = N2nGroup(IntegersMod(2), 2)
    assert n2n_mul(G.element((1, 0), (0,)), G.element((0, 1), (0,))) == G.element((1, 1), (1,))


def test_product_over_z_rank3():
    G = N2nGroup(Z, 3)
    x = G.element((1, 2, 3), (0, 0, 0))
    y = G.element((1, 1, 1), (0, 0, 0))
    assert x * y == G.element((2, 3, 4), (1, 1, 2))


def test_identity():
    G = N2nGroup(IntegersMod(3), 2)
    for x in G.elements():
        assert G.identity * x == x == x * G.identity
    assert n2n_inv(G.identity) == G.identity


@pytest.mark.parametrize("ring,x,expected", [
    (IntegersMod(3), ((1, 1), (1,)), ((2, 2), (0,))),
    (Z, ((2, 3), (5,)), ((-2, -3), (1,))),
])
def test_inverse_examples(ring, x, expected):
    G = N2nGroup(ring, 2)
    xi = n2n_inv(G.element(*x))
    assert xi == G.element(*expected)
    assert xi * G.element(*x) == G.identity


def test_commutator_examples():
    G = N2nGroup(Z, 2)
    g1, g2 = G.standard_basis()[0]
    assert n2n_commutator(g1, g2) == G.element((0, 0), (1,))
    x, y = G.element((2, 0), (0,)), G.element((0, 3), (0,))
    assert n2n_commutator(x, y) == G.element((0, 0), (6,))
    assert G.commutator_word(x, y) == n2n_commutator(x, y)
    assert n2n_commutator(x, x) == G.identity


def test_generators():
    G = N2nGroup(IntegersMod(2), 2)
    assert G.gen(1) == G.element((1, 0), (0,))
    assert len(N2nGroup(Z, 3).standard_basis()[1]) == 3
    g1, g2 = G.standard_basis()[0]
    assert G.commutator(g1, g2) == G.central_gen(1, 2)


@given(st.tuples(ints, ints), st.tuples(ints), st.tuples(ints, ints), st.tuples(ints))
def test_heisenberg_oracle(a, c, b, d):
    G = N2nGroup(Z, 2)
    x, y = G.element(a, c), G.element(b, d)
    p = x * y
    assert oracles.heisenberg((p.alphas, p.gammas)) == oracles.matmul(oracles.heisenberg((a, c)), oracles.heisenberg((b, d)))


coord3 = st.tuples(st.tuples(ints, ints, ints), st.tuples(ints, ints, ints))


@given(coord3, coord3, coord3)
def test_rank3_over_z_against_formula(x, y, z):
    G = N2nGroup(Z, 3)
    X, Y, W = (G.element(*v) for v in (x, y, z))
    p = X * Y
    assert (p.alphas, p.gammas) == oracles.mul(None, 3, x, y)
    assert (X * Y) * W == X * (Y * W)
    assert X * n2n_inv(X) == G.identity
    assert n2n_commutator(X, Y) == G.commutator_word(X, Y)


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (2, 3)])
def test_table_matches_oracle(m, n):
    G = N2nGroup(IntegersMod(m), n)
    F = G.finite()
    for i, j in itertools.product(range(F.order), repeat=2):
        x, y = F.labels[i], F.labels[j]
        p = F.labels[F.mul(i, j)]
        assert (p.alphas, p.gammas) == oracles.mul(m, n, (x.alphas, x.gammas), (y.alphas, y.gammas))


def test_normal_form_example():
    G = N2nGroup(IntegersMod(2), 2)
    x = G.element((1, 1), (1,))
    nf = G.normal_form(x)
    assert nf.exponents == (1, 1, 1)
    assert G.gen(2) * G.gen(1) * G.central_gen(1, 2) == x
    assert G.normal_form_build(nf) == x
    assert G.normal_form(G.identity).exponents == (0, 0, 0)


def test_normal_forms_unique_mod3():
    G = N2nGroup(IntegersMod(3), 2)
    built = {G.normal_form_build(G.normal_form(x)) for x in G.elements()}
    forms = {G.normal_form(x).exponents for x in G.elements()}
    assert len(built) == len(forms) == 27


@given(coord3)
def test_normal_form_round_trip_z(x):
    G = N2nGroup(Z, 3)
    X = G.element(*x)
    assert G.normal_form_build(G.normal_form(X)) == X


def test_center_mod2():
    G = N2nGroup(IntegersMod(2), 2)
    T = oracles.TableGroup(oracles.carrier(2, 2), lambda x, y: oracles.mul(2, 2, x, y))
    got = {(z.alphas, z.gammas) for z in G.center_members()}
    assert got == T.center() and len(got) == 2
    assert G.is_central(G.central_gen(1, 2))
    assert not G.is_central(G.gen(1))


def test_centralizers():
    G = N2nGroup(IntegersMod(2), 2)
    assert len(list(G.centralizer(1).elements())) == 4
    x = G.gen(1) * G.central_gen(1, 2)
    assert G.decompose(x, 1) == (1, G.central_gen(1, 2))
    with pytest.raises(NotInCentralizer):
        G.decompose(G.gen(2), 1)
    G3 = N2nGroup(IntegersMod(3), 2)
    inter = set(G3.centralizer(1).elements()) & set(G3.centralizer(2).elements())
    assert inter == set(G3.center_members())


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (2, 3)])
def test_center_equals_derived_oracle(m, n):
    G = N2nGroup(IntegersMod(m), n)
    T = oracles.TableGroup(oracles.carrier(m, n), lambda x, y: oracles.mul(m, n, x, y))
    F = G.finite()
    Zs = {(F.labels[z].alphas, F.labels[z].gammas) for z in F.center}
    assert Zs == T.center() == T.derived()


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 2)])
def test_basis_axioms(m, n):
    assert N2nGroup(IntegersMod(m), n).check_basis_axioms().ok


def test_mixing_groups_is_an_error():
    G2, G3 = N2nGroup(IntegersMod(2), 2), N2nGroup(IntegersMod(3), 2)
    with pytest.raises(IncompatibleElements):
        G2.gen(1) * G3.gen(1)


def test_element_json():
    G = N2nGroup(Z, 2)
    x = G.element((-4, 10**20), (7,))
    assert x.to_json() == {"alphas": ["-4", str(10**20)], "gammas": ["7"]}
    assert G.from_json(x.to_json()) == x


def test_power():
    G = N2nGroup(Z, 2)
    x = G.element((1, 1), (0,))
    assert x ** 3 == x * x * x
    assert x ** -2 == n2n_inv(x * x)
