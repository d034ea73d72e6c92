import itertools
import json
import math

import numpy as np
import pytest
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from arithcodes.algebra import prime_data, ramified_residue_map, splitting_map
from arithcodes.codes import (Code, Infeasible, MapMismatch, ShapeMismatch, TooFewWords, collision_norm_check,
                              describe_bound, distance_bound_add, distance_bound_mult, distances,
                              expand_columns, injectivity_threshold, load_code, min_distance, pairwise_csv,
                              save_code, theta)
from arithcodes.exactnum import ff_make
from arithcodes.geometry import enumerate_units_in_ball


def rank_oracle(M, p):
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in M], (len(M), len(M[0])), GF(p)).rank()


def random_code(K, s, d, p, seed):
    rng = np.random.default_rng(seed)
    words = {tuple(tuple(tuple(int(v) for v in row) for row in blk) for blk in rng.integers(0, p, (s, d, d)))
             for _ in range(K)}
    return Code(tuple(sorted(words)), s, d, ff_make(p))


def oracle_distances(x, y, p):
    dr = dh = 0
    for bx, by in zip(x, y):
        diff = (np.array(bx) - np.array(by)) % p
        dr += rank_oracle(diff.tolist(), p)
        dh += int((diff != 0).any(axis=0).sum())
    return dr, dh


@pytest.fixture(scope="module")
def b6_map5(b6):
    _, A, O = b6
    return splitting_map(O, prime_data(A, 5))


# -- theta -----------------------------------------------------------------------------------

def test_theta_of_one_is_identity(b6, b6_map5):
    _, A, O = b6
    C = theta([A.one()], [b6_map5, b6_map5])
    assert C.words == ((((1, 0), (0, 1)), ((1, 0), (0, 1))),)
    assert C.N == 4 and C.q == 25 and C.s == 2


def test_theta_collision_on_kernel(b6, b6_map5):
    _, A, O = b6
    x = O.element([1, 2, 0, 1])
    y = O.element([0, 1, 1, 0])
    C = theta([x, x + y * 5], [b6_map5])
    assert len(C) == 1 and C.collisions == [(0, 1)]
    assert collision_norm_check(O, x, x + y * 5, 5)


def test_theta_accepts_coordinate_rows(b6, b6_map5):
    _, _, O = b6
    rows = [[1, 0, 0, 0], [0, 1, 0, 0], [2, -1, 3, 1]]
    a = theta(rows, [b6_map5])
    b = theta([O.element(r) for r in rows], [b6_map5])
    assert a.words == b.words


def test_theta_map_mismatch(b6, b6_map5):
    _, A, O = b6
    other = splitting_map(O, prime_data(A, 7))
    with pytest.raises(MapMismatch):
        theta([A.one()], [b6_map5, other])
    ram = ramified_residue_map(O, prime_data(A, 3))
    with pytest.raises(MapMismatch):
        theta([A.one()], [b6_map5, ram])
    with pytest.raises(MapMismatch):
        theta([A.one()], [])


def test_b6_injective_below_threshold(b6, b6_embedding, b6_map5):
    _, _, O = b6
    tmax = injectivity_threshold(2, 1, 2, 25)
    res = enumerate_units_in_ball(O, b6_embedding, 0.45)
    assert 0.45 <= tmax
    C = theta(res.coords, [b6_map5])
    assert len(C) == len(res) and not C.collisions
    rep = min_distance(C, distance_bound_mult(1, 2, 0.45, 25, 2))
    assert rep.meets_bound


def test_collision_norm_divisibility_on_large_ball(b6, b6_embedding, b6_map5):
    _, _, O = b6
    res = enumerate_units_in_ball(O, b6_embedding, 2)
    C = theta(res.coords, [b6_map5])
    assert C.collisions
    els = res.elements
    for i, j in C.collisions:
        assert collision_norm_check(O, els[i], els[j], 5)


# -- distances -------------------------------------------------------------------------------

def test_distance_examples():
    F5 = ff_make(5)
    x = (((1, 2), (3, 4)),)
    assert distances(x, x, F5) == (0, 0)
    y = (((1, 2), (3, 4)), ((0, 0), (0, 0)))
    with pytest.raises(ShapeMismatch):
        distances(x, y, F5)
    inv = (((2, 2), (3, 0)),)  # x - inv has det != 0
    assert distances(x, inv, F5)[0] == 2
    rank_one = (((0, 0), (3, 4)),)
    assert distances(x, rank_one, F5) == (1, 2)


def test_distances_against_oracle_on_random_pairs():
    rng = np.random.default_rng(2)
    F5 = ff_make(5)
    for _ in range(1000):
        a, b = rng.integers(0, 5, (2, 3, 2, 2))
        x = tuple(tuple(map(tuple, blk.tolist())) for blk in a)
        y = tuple(tuple(map(tuple, blk.tolist())) for blk in b)
        dr, dh = distances(x, y, F5)
        assert (dr, dh) == oracle_distances(x, y, 5)
        assert dr <= dh <= 6


def test_distances_over_extension_field():
    F9 = ff_make(3, 2)
    # over F_9 a 2x2 matrix of non-zero equal entries has rank 1
    x = (((1, 1), (1, 1)),)
    z = (((0, 0), (0, 0)),)
    assert distances(x, z, F9) == (1, 2)
    g = 3  # an element outside F_3
    assert distances((((1, g), (g, 1)),), z, F9)[0] == (1 if F9.mul(g, g) == 1 else 2)


@pytest.mark.parametrize("p,seed", [(3, 0), (5, 1), (7, 2)])
def test_min_distance_against_all_pairs(p, seed):
    C = random_code(25, 2, 2, p, seed)
    rep = min_distance(C)
    pairs = [oracle_distances(x, y, p) for x, y in itertools.combinations(C.words, 2)]
    assert rep.d_R == min(a for a, _ in pairs)
    assert rep.d_H == min(b for _, b in pairs)
    i, j = rep.witnesses
    assert oracle_distances(C.words[i], C.words[j], p)[0] == rep.d_R
    assert rep.d_R <= rep.d_H <= C.N


def test_min_distance_over_f9_matches_pairwise():
    F9 = ff_make(3, 2)
    rng = np.random.default_rng(4)
    words = sorted({tuple(tuple(tuple(int(v) for v in r) for r in blk) for blk in rng.integers(0, 9, (2, 2, 2)))
                    for _ in range(15)})
    C = Code(tuple(words), 2, 2, F9)
    rep = min_distance(C)
    brute = min(distances(x, y, F9)[0] for x, y in itertools.combinations(C.words, 2))
    assert rep.d_R == brute


def test_full_distance_code():
    C = Code(((((1, 0), (0, 1)),), (((0, 0), (0, 0)),)), 1, 2, ff_make(5))
    assert min_distance(C).d_R == C.N


def test_too_few_words():
    C = Code(((((1, 0), (0, 1)),),), 1, 2, ff_make(5))
    with pytest.raises(TooFewWords):
        min_distance(C)


# -- column codes ----------------------------------------------------------------------------

def test_expand_columns_identity():
    C = Code(((((1, 0), (0, 1)),), (((0, 0), (0, 0)),)), 1, 2, ff_make(5))
    col = expand_columns(C)
    assert col.words[0] == ((1, 0), (0, 1))
    assert len(col) == len(C)


def test_column_code_rate_and_hamming():
    C = random_code(30, 3, 2, 5, 9)
    col = expand_columns(C)
    assert math.isclose(col.rate, C.rate)
    rep = min_distance(C)
    assert col.min_hamming() == rep.d_H >= rep.d_R


# -- bounds -------------------------------------------------------------------------------------

def test_bound_values():
    # 2 - 4 log 2 / log 25 - 2 * 4 * 0.5 / log 25: past the injectivity threshold, so negative
    assert distance_bound_mult(1, 2, 0.5, 25, 2) == pytest.approx(-0.1040, abs=1e-4)
    assert distance_bound_mult(1, 2, 0.25, 25, 2) == pytest.approx(0.5173, abs=1e-4)
    assert injectivity_threshold(2, 1, 2, 25) == pytest.approx(0.4581, abs=1e-4)
    assert distance_bound_add(1, 2, 2, 25, 2) == pytest.approx(0.7080, abs=1e-4)
    # the multiplicative bound vanishes exactly at the threshold
    assert distance_bound_mult(1, 2, injectivity_threshold(2, 1, 2, 25), 25, 2) == pytest.approx(0, abs=1e-12)


def test_bound_limits_and_monotonicity():
    assert distance_bound_mult(1, 2, 1e-12, 1e300, 2) == pytest.approx(2, abs=1e-2)
    ts = np.linspace(0.1, 5, 50)
    vals = [distance_bound_mult(1, 2, t, 25, 2) for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    vals = [distance_bound_add(1, 2, t, 25, 2) for t in ts]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    for d in (2, 3, 5):
        assert distance_bound_add(2, d, math.sqrt(d) / 2, 49, 2 * d) == pytest.approx(2 * d)
    qs = [25, 49, 121, 169]
    th = [injectivity_threshold(2, 1, 2, q) for q in qs]
    assert th == sorted(th)
    with pytest.raises(Infeasible):
        injectivity_threshold(1, 1, 2, 2)


def test_describe_bound():
    assert describe_bound(-0.3) == "vacuous (<= 0)"
    assert describe_bound(0.0) == "vacuous (<= 0)"
    assert describe_bound(None) == "none"
    assert describe_bound(0.5173) == "0.5173"


# -- serialisation ------------------------------------------------------------------------------

def test_json_round_trip(tmp_path, b6, b6_map5):
    _, _, O = b6
    C = theta([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 1, 0]], [b6_map5], {"t": "1"})
    path = tmp_path / "code.json"
    save_code(C, path)
    D = load_code(path)
    assert D.words == C.words and D.q == C.q and D.metadata["t"] == "1"
    json.loads(path.read_text())


def test_ramified_alphabet_code(b6):
    _, A, O = b6
    rmap = ramified_residue_map(O, prime_data(A, 3))
    C = theta([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0]], [rmap])
    assert C.d == 1 and C.q0 == 9 and C.q == 9
    rep = min_distance(C)
    assert rep.d_R == rep.d_H == 1


def test_pairwise_csv_rows():
    C = random_code(6, 1, 2, 5, 3)
    lines = pairwise_csv(C).strip().splitlines()
    assert lines[0] == "i,j,d_R,d_H"
    assert len(lines) == 1 + len(C) * (len(C) - 1) // 2
    for line in lines[1:]:
        i, j, dr, dh = map(int, line.split(","))
        assert (dr, dh) == distances(C.words[i], C.words[j], C.field)
