import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithcodes.algebra import (INF, NotFullRank, NotRamified, Order, QuatAlgebra, alg_mul,
                                hilbert_symbol, nrd_trd, prime_data, quotient_size, quotient_size_bruteforce,
                                ramification_set, ramified_residue_map, splitting_map, verify_order)
from arithcodes.exactnum import RamifiedPrime
from arithcodes.exactnum.numberfield import NumberField


coord = st.integers(-6, 6)
quad = st.lists(coord, min_size=4, max_size=4)


# -- arithmetic --------------------------------------------------------------------

def test_multiplication_table(b6):
    _, A, _ = b6
    one = A.one()
    i, j, k = A.gens()
    assert alg_mul(A, i, i) == A.element(-1)
    assert alg_mul(A, j, j) == A.element(3)
    assert alg_mul(A, i, j) == k
    assert alg_mul(A, j, i) == -k
    assert alg_mul(A, k, k) == A.element(3)  # (ij)^2 = -ab
    assert alg_mul(A, one, k) == k


def test_nrd_trd_examples(b6):
    _, A, _ = b6
    i, j, _ = A.gens()
    n, t = nrd_trd(A, A.one() + j)
    assert n.as_rational() == -2 and t.as_rational() == 2
    n, t = nrd_trd(A, i)
    assert n.as_rational() == 1 and t.as_rational() == 0


@settings(max_examples=80)
@given(quad, quad)
def test_nrd_multiplicative_and_conj(u, v):
    A = QuatAlgebra(NumberField.rationals(), "-1", "3")
    x, y = A.from_coords(u), A.from_coords(v)
    assert (x * y).nrd() == x.nrd() * y.nrd()
    assert (x + y).trd() == x.trd() + y.trd()
    assert x * x.conj() == A.one() * x.nrd()
    if not x.is_zero():
        assert x * x.inverse() == A.one()


def test_associativity_on_basis(b6):
    _, A, _ = b6
    g = (A.one(),) + A.gens()
    for a, b, c in itertools.product(g, repeat=3):
        assert (a * b) * c == a * (b * c)


# -- orders --------------------------------------------------------------------------

def test_lipschitz_not_maximal_hurwitz_maximal(lipschitz, hurwitz, b6):
    rl = lipschitz[2].verify()
    assert rl.ok and rl.disc_norm == 16 and not rl.is_maximal
    rh = hurwitz[2].verify()
    assert rh.ok and rh.disc_norm == 4 and rh.is_maximal
    rb = b6[2].verify()
    assert rb.ok and rb.disc_norm == 36 and rb.is_maximal


def test_scaled_lattice_is_not_an_order(hurwitz):
    _, A, _ = hurwitz
    rep = verify_order(A, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not rep.contains_one and not rep.ok


def test_non_ring_lattice_detected(hurwitz):
    _, A, _ = hurwitz
    rep = verify_order(A, [[1, 0, 0, 0], ["1/2", "1/2", 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not rep.ok


def test_dependent_basis_rejected(hurwitz):
    _, A, _ = hurwitz
    with pytest.raises(NotFullRank):
        Order(A, [[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(NotFullRank):
        Order(A, [[1, 0, 0, 0]])


def test_m2z_is_maximal_and_split(m2z):
    _, A, O = m2z
    assert A.ramified_norms == [] and not A.is_division
    assert O.verify().is_maximal


def test_golden_orders(golden_hamilton, golden_m2):
    _, A, O = golden_hamilton
    rep = O.verify()
    assert rep.ok and O.rank == 8
    _, A2, O2 = golden_m2
    assert O2.verify().is_maximal


# -- Hilbert symbols -----------------------------------------------------------------

def _has_primitive_solution(a, b, p, k):
    """a x^2 + b y^2 = z^2 with a primitive solution mod p^k."""
    m = p**k
    sq = {}
    for z in range(m):
        sq.setdefault(z * z % m, []).append(z)
    for x, y in itertools.product(range(m), repeat=2):
        v = (a * x * x + b * y * y) % m
        for z in sq.get(v, ()):
            if x % p or y % p or z % p:
                return True
    return False


def _brute_hilbert(a, b, p):
    # stripping squares keeps the symbol; the remaining exponents are 0 or 1
    def reduce(x):
        while x % (p * p) == 0:
            x //= p * p
        return x

    a, b = reduce(a), reduce(b)
    k = 5 if p == 2 else 3
    return 1 if _has_primitive_solution(a, b, p, k) else -1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_hilbert_symbol_against_brute_force(p):
    vals = [-15, -6, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10]
    for a, b in itertools.product(vals, repeat=2):
        assert hilbert_symbol(a, b, p) == _brute_hilbert(a, b, p), (a, b, p)


@settings(max_examples=60)
@given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool))
def test_hilbert_product_formula(a, b):
    from sympy import primerange

    total = 1
    for v in [INF] + list(primerange(2, 62)):
        total *= hilbert_symbol(a, b, v)
    assert total == 1


def test_hilbert_rational_arguments():
    assert hilbert_symbol("1/3", "-1", 3) == hilbert_symbol(3, -1, 3)
    assert hilbert_symbol("-1/4", "-1", INF) == -1


def test_ramification_sets():
    assert ramification_set(-1, -1) == {2, INF}
    assert ramification_set(-1, 3) == {2, 3}
    assert ramification_set(1, 1) == set()
    assert ramification_set(-1, 7) == {2, 7}


def test_declared_ramification_checked():
    with pytest.raises(ValueError):
        QuatAlgebra(NumberField.rationals(), "-1", "3", ramified_finite=[(5, (0, 1))])


# -- splitting maps ----------------------------------------------------------------------

def _mat_ops(ff):
    def mul(x, y):
        return tuple(tuple(ff.add(ff.mul(x[r][0], y[0][s]), ff.mul(x[r][1], y[1][s])) for s in range(2))
                     for r in range(2))

    def add(x, y):
        return tuple(tuple(ff.add(x[r][s], y[r][s]) for s in range(2)) for r in range(2))

    return mul, add


def test_b6_splitting_at_5_relations(b6):
    _, A, O = b6
    smap = splitting_map(O, prime_data(A, 5))
    ff = smap.field
    mul, _ = _mat_ops(ff)
    one, (i, j, k) = A.one(), A.gens()
    I, J, Id = smap.image(i), smap.image(j), smap.image(one)
    assert Id == ((1, 0), (0, 1))
    assert mul(I, I) == ((4, 0), (0, 4))
    assert mul(J, J) == ((3, 0), (0, 3))
    assert mul(I, J) == tuple(tuple(ff.neg(x) for x in r) for r in mul(J, I))
    assert smap.image(k) == mul(I, J)


def test_b6_splitting_bijective_on_quotient(b6):
    _, A, O = b6
    smap = splitting_map(O, prime_data(A, 5))
    Q = smap.quotient
    assert Q.dim == 4
    imgs = {smap.image_quotient(u) for u in Q.elements()}
    assert len(imgs) == 625


@settings(max_examples=60, deadline=None)
@given(quad, quad)
def test_splitting_is_multiplicative_det_nrd_tr_trd(b6, u, v):
    _, A, O = b6
    smap = splitting_map(O, prime_data(A, 5))
    ff = smap.field
    mul, _ = _mat_ops(ff)
    x, y = O.element(u), O.element(v)
    X, Y = smap.image(x), smap.image(y)
    assert smap.image(x * y) == mul(X, Y)
    n, t = nrd_trd(A, x)
    assert ff.det2(X) == ff.from_int(int(n.as_rational()) % 5)
    assert ff.add(X[0][0], X[1][1]) == ff.from_int(int(t.as_rational()) % 5)


def test_splitting_deterministic(b6):
    _, A, O = b6
    a = splitting_map(O, prime_data(A, 13)).to_json()
    b = splitting_map(O, prime_data(A, 13)).to_json()
    assert a == b


def test_splitting_rejects_ramified_prime(b6):
    _, A, O = b6
    with pytest.raises(RamifiedPrime):
        splitting_map(O, prime_data(A, 3))


def test_lipschitz_m2_at_small_primes(m2z, hurwitz):
    _, A, O = m2z
    smap = splitting_map(O, prime_data(A, 2))
    assert len({smap.image_quotient(u) for u in smap.quotient.elements()}) == 16
    _, A, O = hurwitz
    smap = splitting_map(O, prime_data(A, 3))
    assert len({smap.image_quotient(u) for u in smap.quotient.elements()}) == 81


def test_golden_field_maps(golden_hamilton, golden_m2):
    # x^2 - x - 1 splits mod 11 (roots 4, 8) and is inert mod 7
    _, A, O = golden_hamilton
    for p, f in [(11, 1), (7, 2)]:
        pd = prime_data(A, p)
        assert pd.f == f
        smap = splitting_map(O, pd)
        assert smap.field.q == p**f
        mul, _ = _mat_ops(smap.field)
        i, j, _ = A.gens()
        I, J = smap.image(i), smap.image(j)
        minus_one = smap.field.neg(smap.field.from_int(1))
        assert mul(I, I) == ((minus_one, 0), (0, minus_one))
        assert mul(J, J) == ((minus_one, 0), (0, minus_one))
    _, A2, O2 = golden_m2
    pd = prime_data(A2, 11, g=prime_data(A2, 11).g)
    assert splitting_map(O2, pd).quotient.dim == 4


def test_prime_data_errors(golden_hamilton):
    _, A, _ = golden_hamilton
    with pytest.raises(RamifiedPrime):
        prime_data(A, 5)
    with pytest.raises(ValueError):
        prime_data(A, 9)
    with pytest.raises(ValueError):
        prime_data(A, 11, g=(1, 1))


# -- ramified residue map ------------------------------------------------------------------

def test_ramified_map_b6_at_3(b6):
    _, A, O = b6
    rmap = ramified_residue_map(O, prime_data(A, 3))
    assert rmap.field.q == 9
    imgs = {rmap.image_quotient(u) for u in rmap.quotient.elements()}
    assert imgs == set(range(9))
    ff = rmap.field
    i, j, _ = A.gens()
    # multiplicative and kills j (j^2 = 3 lies in P^2)
    assert rmap.image(j) == 0
    assert rmap.image(i * i) == ff.mul(rmap.image(i), rmap.image(i))
    assert rmap.image(A.one()) == ff.from_int(1)


def test_ramified_map_multiplicative_on_quotient(b6):
    _, A, O = b6
    rmap = ramified_residue_map(O, prime_data(A, 3))
    Q = rmap.quotient
    ff = rmap.field
    rng = np.random.default_rng(3)
    for _ in range(100):
        u, v = rng.integers(0, 3, 4), rng.integers(0, 3, 4)
        assert rmap.image_quotient(Q.mul(u, v)) == ff.mul(rmap.image_quotient(u), rmap.image_quotient(v))


def test_ramified_map_needs_ramified_prime(b6):
    _, A, O = b6
    with pytest.raises(NotRamified):
        ramified_residue_map(O, prime_data(A, 5))


# -- quotient sizes ---------------------------------------------------------------------------

def test_quotient_size_against_brute_force(b6):
    _, A, O = b6
    smap = splitting_map(O, prime_data(A, 5))
    Q = smap.quotient
    rng = np.random.default_rng(11)
    seen = set()
    samples = [np.zeros(4, dtype=np.int64), Q.one] + [rng.integers(0, 5, 4) for _ in range(60)]
    # a zero divisor: 1 + i has nrd 2, so try elements of nrd 0 mod 5 via 2 + i
    samples.append(Q.project_elem(A.one() * 2 + A.gens()[0]))
    for u in samples:
        coeffs = [0] * 4
        # lift u back to the order basis (Q.free is all of 0..3 over Q)
        for c, val in zip(Q.free, u):
            coeffs[c] = int(val)
        size = quotient_size(O, smap, coeffs=coeffs)
        assert size == quotient_size_bruteforce(Q, u)
        seen.add(size)
    assert seen == {1, 25, 625}
