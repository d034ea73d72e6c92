import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy

from arithcodes.exactnum import NumberField, dedekind_zeta
from arithcodes.volumes import (GroupSpec, ToleranceNotMet, additive_volumes, intervals, kak_ball_quadrature,
                                lenstra_lower_bound, log_unit_ball_volume, macdonald_data, prasad_quaternion,
                                prasad_quaternion_symbolic, prasad_volume, unit_ball_volume_symbolic,
                                unit_count_prediction, vol_ball_lower_bound, vol_ball_quaternion_closed,
                                vol_ball_quaternion_symbolic, vol_k, vol_k_asymptotic_check, vol_k_symbolic,
                                vol_zka, vol_zka_symbolic)

pi = sympy.pi


def same(expr, value):
    return sympy.simplify(expr - value) == 0


# -- compact groups ------------------------------------------------------------------------

def test_group_spec():
    assert (GroupSpec("R", 3).n, GroupSpec("R", 3).e) == (1, 1)
    assert (GroupSpec("C", 3).n, GroupSpec("C", 3).e) == (2, 1)
    assert (GroupSpec("H", 3).n, GroupSpec("H", 3).e) == (1, 2)
    assert GroupSpec.from_ne(1, 2, 4) == GroupSpec("H", 4)
    with pytest.raises(ValueError):
        GroupSpec("Q", 2)
    with pytest.raises(ValueError):
        GroupSpec("R", 0)


def test_vol_zka_values():
    assert same(vol_zka_symbolic(GroupSpec("R", 2)), 2)
    assert same(vol_zka_symbolic(GroupSpec("H", 1)), 4 * sympy.sqrt(2) * pi**2)
    assert float(vol_zka(GroupSpec("H", 1)).value) == pytest.approx(55.8309, abs=1e-4)
    assert same(vol_zka_symbolic(GroupSpec("C", 2)), 4 * pi)


def test_vol_k_reproduces_small_group_constants():
    assert same(vol_k_symbolic(GroupSpec("R", 2)), 2 * sympy.sqrt(2) * pi)
    assert same(vol_k_symbolic(GroupSpec("C", 2)), 16 * pi**2)
    assert same(vol_k_symbolic(GroupSpec("H", 1)), 4 * sympy.sqrt(2) * pi**2)
    r, x, s, m = macdonald_data(GroupSpec("C", 2))
    assert (r, s, m) == (1, 2, [1]) and x == Fraction(7, 2)


@pytest.mark.parametrize("D", ["R", "C", "H"])
def test_vol_k_log_matches_symbolic(D):
    for d in (2, 3, 4, 5, 7):
        v = vol_k(GroupSpec(D, d))
        assert float(v.log_value) == pytest.approx(float(sympy.log(vol_k_symbolic(GroupSpec(D, d))).evalf(30)),
                                                   rel=1e-12)
        assert math.exp(float(v.log_value)) == pytest.approx(float(v.value), rel=1e-12)


def test_vol_k_asymptotic_trend():
    rows = vol_k_asymptotic_check("C", 60)
    assert [r["d"] for r in rows] == list(range(2, 61))
    assert all(r["leading"] != 0 for r in rows)
    assert all(r["increasing"] for r in rows[1:])
    with pytest.raises(ValueError):
        vol_k_asymptotic_check("C", 61)


# -- intervals --------------------------------------------------------------------------------

def test_interval_examples():
    f1 = intervals(1)
    assert f1.centers == (Fraction(1, 2),)
    assert f1.intervals[0] == (Fraction(1, 2) - Fraction(1, 32), Fraction(1, 2) + Fraction(1, 32))
    f2 = intervals(2)
    assert f2.centers == (Fraction(-1, 3), Fraction(1, 3))
    assert f2.intervals[0][1] - f2.intervals[0][0] == Fraction(2, 72)
    assert sum(1 for c in intervals(9).centers if c >= Fraction(1, 4)) >= 2


def _sample_check(fam, rng, trials=200):
    """Random points of the box tested against the six properties (independent of the affine argument)."""
    k = fam.k
    eps = Fraction(1, 4 * (k + 1) ** 2)
    den = 1000
    for _ in range(trials):
        a = [lo + (hi - lo) * Fraction(int(rng.integers(0, den + 1)), den) for lo, hi in fam.intervals]
        s = sum(a)
        assert all(abs(x) <= 1 for x in a) and abs(s) <= 1
        assert all(abs(a[i] - a[j]) >= eps for i in range(k) for j in range(i + 1, k))
        assert all(abs(x + s) >= eps for x in a)
        assert 5 * sum(1 for x in a if x >= Fraction(1, 4)) >= k + 1


def test_intervals_all_properties_k_1_to_64():
    rng = np.random.default_rng(0)
    for k in range(1, 65):
        fam = intervals(k)
        assert fam.ok
        if k <= 12:
            _sample_check(fam, rng, 50)
    with pytest.raises(ValueError):
        intervals(0)


# -- balls ---------------------------------------------------------------------------------------

def test_closed_form_examples():
    v = vol_ball_quaternion_closed(1, 0, 0, 1)
    assert float(v.value) == pytest.approx(2**1.5 * math.pi**2 * (math.cosh(2) - 1), rel=1e-14)
    assert float(v.value) == pytest.approx(77.10, abs=0.01)
    w = vol_ball_quaternion_closed(0, 0, 1, 1)
    assert float(w.value) == pytest.approx(16 * math.pi**3 * (math.sinh(4) - 4), rel=1e-14)
    assert float(vol_ball_quaternion_closed(1, 0, 0, 1e-8).value) < 1e-12
    sym = vol_ball_quaternion_symbolic(1, 1, 1, sympy.Rational(1, 2))
    assert float(sym) == pytest.approx(float(vol_ball_quaternion_closed(1, 1, 1, 0.5).value), rel=1e-12)


@pytest.mark.parametrize("D,u,r2", [("R", 1, 0), ("C", 0, 1)])
@pytest.mark.parametrize("t", [0.5, 1, 2, 3])
def test_quadrature_matches_closed_form(D, u, r2, t):
    q = kak_ball_quadrature(GroupSpec(D, 2), t)
    c = vol_ball_quaternion_closed(u, 0, r2, t)
    assert abs(q.value - c.value) <= 1e-9 * c.value


def test_quadrature_monotone_and_errors():
    vals = [kak_ball_quadrature(GroupSpec("R", 2), t).value for t in (0.25, 0.5, 1, 1.5)]
    assert vals == sorted(vals)
    with pytest.raises(ValueError):
        kak_ball_quadrature(GroupSpec("H", 2), 1)
    with pytest.raises(ValueError):
        kak_ball_quadrature(GroupSpec("R", 3), 1)
    with pytest.raises(ToleranceNotMet):
        kak_ball_quadrature(GroupSpec("C", 2), 40, abs_tol=1e-300)


def test_lower_bound_dominated_by_closed_form():
    for t in np.linspace(1, 10, 200):
        lb = vol_ball_lower_bound(1, 1, 2, t)
        assert lb.log_value <= vol_ball_quaternion_closed(1, 0, 0, t, symbolic=False).log_value
    assert vol_ball_lower_bound(1, 1, 2, 5).value <= 2**1.5 * math.pi**2 * (math.cosh(10) - 1)


def test_lower_bound_increasing_and_notes():
    vals = [vol_ball_lower_bound(2, 1, 6, t).log_value for t in (1, 2, 5, 10)]
    assert vals == sorted(vals)
    assert not vol_ball_lower_bound(1, 1, 3, 1).notes["chain_covers"]
    assert vol_ball_lower_bound(1, 1, 10, 1).notes["chain_covers"]
    with pytest.raises(ValueError):
        vol_ball_lower_bound(1, 1, 2, 0.5)
    with pytest.raises(ValueError):
        vol_ball_lower_bound(1, 1, 1, 2)


def test_lower_bound_leading_t_coefficient():
    # d log mu_LB / dt = d^2 n e^2 / 200 exactly
    for n, e, d in [(1, 1, 3), (2, 1, 4), (1, 2, 6)]:
        a, b = vol_ball_lower_bound(n, e, d, 3), vol_ball_lower_bound(n, e, d, 8)
        assert float((b.log_value - a.log_value) / 5) == pytest.approx(d * d * n * e * e / 200, rel=1e-12)


# -- covolumes -------------------------------------------------------------------------------------

def test_prasad_b6():
    z = float(mpmath.zeta(2))
    v = prasad_quaternion(1, 1, [2, 3], z)
    assert float(v.value) == pytest.approx(2**1.5 * math.pi**2 / 6, rel=1e-14)
    assert float(v.value) == pytest.approx(4.65258, abs=1e-5)
    g = prasad_volume(2, 1, 1, [(2, 2), (3, 2)], [z])
    assert float(g.value) == pytest.approx(float(v.value), rel=1e-14)
    assert same(prasad_quaternion_symbolic(1, 1, [2, 3], pi**2 / 6), 2 * sympy.sqrt(2) * pi**2 / 6)


def test_prasad_general_matches_quaternion_on_random_sets():
    rng = np.random.default_rng(8)
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    for _ in range(10):
        k = int(rng.integers(0, 4))
        norms = sorted(rng.choice(primes, k, replace=False).tolist())
        n = int(rng.integers(1, 4))
        disc_F = int(rng.integers(1, 50))
        zeta2 = 1 + float(rng.random())
        q = prasad_quaternion(n, disc_F, norms, zeta2)
        g = prasad_volume(2, n, disc_F, [(p, 2) for p in norms], [zeta2])
        assert float(g.value) == pytest.approx(float(q.value), rel=1e-12)


def test_prasad_phi_at_most_one_and_error_propagation():
    z = dedekind_zeta(NumberField.rationals(), 2, 2000)
    z3 = dedekind_zeta(NumberField.rationals(), 3, 2000)
    v = prasad_volume(3, 1, 1, [(7, 3)], [z, z3])
    assert v.value <= v.notes["phi_free"] + 1e-12
    assert Fraction(v.notes["phi"]) == (1 - Fraction(1, 7)) * (1 - Fraction(1, 49))
    assert v.abs_err > 0
    exact = float(mpmath.mpf(3) ** 0.5 * mpmath.sqrt(mpmath.mpf(7) ** 6) * mpmath.zeta(2) * mpmath.zeta(3)
                  * (1 - mpmath.mpf(1) / 7) * (1 - mpmath.mpf(1) / 49))
    assert abs(float(v.value) - exact) <= v.abs_err
    with pytest.raises(ValueError):
        prasad_volume(3, 1, 1, [(7, 2)], [z, z3])
    with pytest.raises(ValueError):
        prasad_volume(3, 1, 1, [], [z])


# -- additive volumes -------------------------------------------------------------------------------

def test_unit_ball_volumes():
    assert same(unit_ball_volume_symbolic(2), pi)
    assert same(unit_ball_volume_symbolic(4), pi**2 / 2)
    for m in range(1, 20):
        want = mpmath.pi ** (mpmath.mpf(m) / 2) / mpmath.gamma(mpmath.mpf(m) / 2 + 1)
        assert float(unit_ball_volume_symbolic(m)) == pytest.approx(float(want), rel=1e-14)
        assert float(log_unit_ball_volume(m)) == pytest.approx(float(mpmath.log(want)), rel=1e-14, abs=1e-14)


def test_additive_b6_lenstra_bound():
    av = additive_volumes(2, 1, 1, 0, 1, 36)
    assert same(av.lenstra_lb.symbolic, pi**2 / 12)
    assert float(av.lenstra_lb.value) == pytest.approx(0.8225, abs=1e-4)
    assert float(av.mu_quot.value) == pytest.approx(6)


def test_additive_homogeneity_and_errors():
    a = additive_volumes(2, 2, 0, 1, 1.5, 100)
    b = additive_volumes(2, 2, 0, 1, 3.0, 100)
    assert float(b.mu_B.value / a.mu_B.value) == pytest.approx(2.0 ** (4 * 2), rel=1e-12)
    with pytest.raises(ValueError):
        additive_volumes(2, 1, 1, 0, 0, 36)
    with pytest.raises(ValueError):
        additive_volumes(2, 2, 1, 0, 1, 36)


def test_lenstra_and_unit_count():
    assert lenstra_lower_bound(3.5, 3.5) == 1
    assert lenstra_lower_bound(2, 1) < lenstra_lower_bound(3, 1)
    with pytest.raises(ValueError):
        lenstra_lower_bound(0, 1)
    cov = prasad_quaternion(1, 1, [2, 3], float(mpmath.zeta(2)))
    pred = unit_count_prediction(1, 0, 0, 3, cov)
    assert float(pred) == pytest.approx(6 * (math.cosh(6) - 1), rel=1e-12)
