import cmath
import math
import random
from functools import lru_cache
from fractions import Fraction

import numpy as np
import pytest

from gaussdioph.expsum import (
    BudgetExceededError,
    TypeSumParams,
    VaalerParams,
    e1_exact,
    e2_exact,
    e3_exact,
    f1_exact,
    f3_exact,
    g_c_profile,
    linear_bound,
    linear_expsum,
    ones,
    random_signs,
    type_sum_report,
    vaaler_eval,
    vaaler_weight,
)
from gaussdioph.gint import ComplexHP, GaussInt, hurwitz_expansion
from gaussdioph.gsieve import SectorAnnulus
from oracles import IRRATIONAL, arg_in, lattice_disc_points, sup_dist_mp

C_NUM = (3, 1)  # c = (3 + i)/10
C = ComplexHP.parse("0.3+0.1i")
E10 = [cmath.exp(2j * math.pi * k / 10) for k in range(10)]


def _mul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _pairs(m_lo, m_hi, x1, x2, t1=-math.pi, t2=math.pi):
    out = []
    for m in lattice_disc_points(m_hi):
        nm = m[0] ** 2 + m[1] ** 2
        if nm <= m_lo:
            continue
        for n in lattice_disc_points(x2 // nm):
            w = _mul(m, n)
            nw = w[0] ** 2 + w[1] ** 2
            if x1 < nw <= x2 and (t2 - t1 >= 2 * math.pi or arg_in(w[0], w[1], t1, t2)):
                out.append((m, n, w))
    return out


def _frequencies(H1, H2):
    return [(a, b) for a in range(-int(H1), int(H1) + 1) for b in range(-int(H2), int(H2) + 1) if a or b]


def naive_e3(pairs, H1, H2):
    total = 0.0
    for j in _frequencies(H1, H2):
        inner = {}
        for m, n, w in pairs:
            im10 = _mul(_mul(j, w), C_NUM)[1]  # 10 * Im(j w c)
            inner[m] = inner.get(m, 0) + E10[im10 % 10]
        total += sum(abs(v) for v in inner.values())
    return total


def _in_A(w, delta10):
    x, y = _mul(w, C_NUM)
    return min(x % 10, 10 - x % 10) <= delta10 and min(y % 10, 10 - y % 10) <= delta10


def naive_f3(pairs, H1, H2, delta10, a=lambda m: 1, b=lambda n: 1):
    sel = [(m, n, w) for m, n, w in pairs if _in_A(w, delta10)]
    total = 0.0
    for j in _frequencies(H1, H2):
        s = sum(a(m) * b(n) * E10[_mul(_mul(j, w), C_NUM)[1] % 10] for m, n, w in sel)
        total += abs(s)
    return total


class TestVaaler:
    def test_examples(self):
        psi, ps, sg = vaaler_eval(VaalerParams(1), 0.25)
        assert psi == -0.25
        assert ps == pytest.approx(-1 / (2 * math.pi), abs=1e-15)
        for J in (1, 2, 7, 64):
            assert vaaler_eval(J, 0.0)[2] == pytest.approx(0.5, abs=1e-12)

    def test_weight(self):
        assert float(vaaler_weight(0.5)) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("J", [1, 4, 16, 64])
    def test_envelope(self, J):
        x = np.arange(100_000) / 100_000
        psi, ps, sg = vaaler_eval(J, x)
        assert sg.min() >= -1e-12
        assert (np.abs(ps - psi) - sg).max() <= 1e-12

    def test_periodic(self):
        a = vaaler_eval(5, np.array([0.3, 0.7]))
        b = vaaler_eval(5, np.array([7.3, -4.3]))
        for u, v in zip(a, b):
            assert np.allclose(u, v, atol=1e-12)

    def test_params(self):
        with pytest.raises(ValueError):
            VaalerParams(0)
        assert VaalerParams(10).admits(Fraction(1, 10))
        assert not VaalerParams(9).admits(Fraction(1, 10))


class TestLinear:
    def test_zero_kappa_counts(self):
        s, _ = linear_expsum(ComplexHP.parse("0"), 0, 100)
        assert s == len(lattice_disc_points(100))
        s, _ = linear_expsum(ComplexHP.parse("0"), 10, 100, 0, math.pi / 2)
        assert s.real == sum(1 for a, b in lattice_disc_points(100) if a * a + b * b > 10 and arg_in(a, b, 0, math.pi / 2))

    def test_full_sector_is_real(self):
        for name in IRRATIONAL:
            s, _ = linear_expsum(ComplexHP.preset(name), 3, 2000)
            assert abs(s.imag) <= 1e-9 * max(1.0, abs(s))

    @pytest.mark.parametrize("name", ["mix_sqrt", "mix_e_pi", "sqrt3i"])
    def test_row_factorization(self, name):
        # the disc is a union of horizontal rows; each row is a 1-d geometric sum
        k = ComplexHP.preset(name)
        kr, ki = k.real, k.imag
        for y in (50, 777, 5000):
            want = 0j
            for b in range(-math.isqrt(y), math.isqrt(y) + 1):
                A = math.isqrt(y - b * b)
                t = ki
                row = math.sin(math.pi * (2 * A + 1) * t) / math.sin(math.pi * t)
                want += cmath.exp(2j * math.pi * b * kr) * row
            want -= 1  # the origin
            got, _ = linear_expsum(k, 0, y)
            assert abs(got - want) <= 1e-9 * max(1.0, abs(want))

    def test_bound_formula(self):
        k = ComplexHP.parse("0.3+0.1i")
        assert linear_bound(k, 100) == pytest.approx(10 * math.sqrt(10) * math.sqrt(1 / 0.3))
        assert linear_bound(ComplexHP.parse("0"), 100) == pytest.approx(10 * 10)

    def test_random_audit(self):
        rng = random.Random(3)
        worst = 0.0
        for _ in range(100):
            k = ComplexHP.from_fractions(rng.random(), rng.random())
            y_hi = rng.uniform(2, 10_000)
            f1 = rng.uniform(-math.pi, math.pi)
            s, b = linear_expsum(k, rng.uniform(0, y_hi / 2), y_hi, f1, f1 + rng.uniform(0.1, 2 * math.pi))
            worst = max(worst, abs(s) / b)
        assert worst <= 16

    def test_validation(self):
        with pytest.raises(ValueError):
            linear_expsum(C, 5, 5)
        with pytest.raises(ValueError):
            linear_expsum(C, 0, 5, 0, 7)


class TestGc:
    def test_examples(self):
        c = ComplexHP.parse("0.1+0.2i")
        assert g_c_profile(c, 100, 0.5, 1).exact == 0
        assert g_c_profile(c, 100, 1, 1).exact == pytest.approx(4 * math.sqrt(50), rel=1e-12)

    def test_against_oracle(self):
        c = ComplexHP.preset("mix_golden")
        v = c.at(256)
        q = hurwitz_expansion(c, max_terms=4).denominators[-1]
        y, z = 1000.0, 300
        want = 0.0
        for a, b in lattice_disc_points(z):
            dr, di = sup_dist_mp(a, b, v)
            want += math.sqrt(min(1 / di, math.sqrt(y))) * math.sqrt(min(1 / dr, math.sqrt(y)))
        assert g_c_profile(c, y, z, q).exact == pytest.approx(want, rel=1e-9)

    def test_small_z_bound_presence(self):
        c = ComplexHP.preset("sqrt2i")
        g = g_c_profile(c, 100, 3, GaussInt(5))
        assert g.bound_small_z == pytest.approx((5 * 100 ** 0.25 + 25) * math.log(10) ** 2)
        assert g_c_profile(c, 100, 4, GaussInt(5)).bound_small_z is None
        assert g.bound_general == pytest.approx((1 + 3 / 25) * (10 + 25) * math.log(200) ** 2)

    def test_grid_audit(self):
        c = ComplexHP.preset("sqrt2i")
        for q in hurwitz_expansion(c, min_q_norm=2501).denominators:
            if q.norm() > 2500:
                break
            for y in (1, 10, 1e3, 1e5):
                for z in (1, q.norm() / 8, q.norm(), 10 * q.norm()):
                    g = g_c_profile(c, y, z, q)
                    assert g.exact <= 32 * g.bound_general
                    if g.bound_small_z is not None:
                        assert g.exact <= 32 * g.bound_small_z

    def test_bad_q(self):
        with pytest.raises(ValueError):
            g_c_profile(ComplexHP.preset("sqrt2i"), 10, 10, GaussInt(4))


class TestTypeSums:
    def test_e3_matches_naive(self):
        p = TypeSumParams(x1=1, x2=400, M=16, H1=2, H2=2)
        got = e3_exact(C, p)
        want = naive_e3(_pairs(0, 16, 1, 400), 2, 2)
        assert got == pytest.approx(want, rel=1e-9)

    def test_e3_sector_matches_naive(self):
        p = TypeSumParams(x1=20, x2=600, M=30, H1=1, H2=1, sector=SectorAnnulus(0, math.inf, -0.4, 1.9))
        want = naive_e3(_pairs(0, 30, 20, 600, -0.4, 1.9), 1, 1)
        assert e3_exact(C, p) == pytest.approx(want, rel=1e-9)

    def test_e3_half_is_e1(self):
        for name in ("mix_sqrt", "sqrt2i"):
            c = ComplexHP.preset(name)
            p = TypeSumParams(x1=5, x2=900, M=40, H1=3, H2=0.5)
            assert e3_exact(c, p) == pytest.approx(e1_exact(c, p, 3), rel=1e-9)

    def test_empty(self):
        assert e3_exact(C, TypeSumParams(x1=400, x2=400, M=16)) == 0
        assert f3_exact(C, TypeSumParams(x1=400, x2=400, M=16, delta=Fraction(1, 4))) == 0

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            e3_exact(C, TypeSumParams(x1=1, x2=10 ** 7, M=1000, H1=5, H2=5), budget=10 ** 8)

    def test_f3_matches_naive(self):
        p = TypeSumParams(x1=1, x2=4096, M=256, alpha=1 / 3, beta=0.5, H1=2, H2=2, delta=Fraction(3, 10))
        want = naive_f3(_pairs(16, 1024, 1, 4096), 2, 2, 3)
        assert f3_exact(C, p) == pytest.approx(want, rel=1e-9)

    def test_f3_random_coefficients_match_naive(self):
        p = TypeSumParams(x1=1, x2=1000, M=100, alpha=1 / 3, beta=0.5, H1=1, H2=1, delta=Fraction(2, 10))
        a, b = random_signs(5), random_signs(6)
        # 1000^(1/3) = 10 exactly, 1000^(5/6) = 316.2...
        want = naive_f3(_pairs(10, 316, 1, 1000), 1, 1, 2,
                        lambda m: float(a(np.array([m[0]]), np.array([m[1]]))[0]),
                        lambda n: float(b(np.array([n[0]]), np.array([n[1]]))[0]))
        assert f3_exact(C, p, a, b) == pytest.approx(want, rel=1e-9)

    def test_f3_empty_set(self):
        p = TypeSumParams(x1=1, x2=2000, M=200, H1=2, H2=2, delta=Fraction(1, 10 ** 9))
        assert f3_exact(ComplexHP.preset("mix_e_pi"), p) == 0

    def test_f3_half_is_f1(self):
        c = ComplexHP.preset("mix_cbrt")
        p = TypeSumParams(x1=1, x2=3000, M=200, H1=2, H2=0.5, delta=Fraction(1, 4))
        assert f3_exact(c, p) == pytest.approx(f1_exact(c, p, 2), rel=1e-9)

    def test_rotation_identity(self):
        rng = random.Random(9)
        c = ComplexHP.preset("mix_golden")
        for _ in range(4):
            w1 = rng.uniform(-math.pi, 0)
            w2 = w1 + rng.uniform(0.3, 3)
            p2 = TypeSumParams(x1=3, x2=800, M=30, H1=2, H2=0.5, sector=SectorAnnulus(0, math.inf, w1, w2))
            p1 = TypeSumParams(x1=3, x2=800, M=30, H1=2, H2=0.5,
                               sector=SectorAnnulus(0, math.inf, w1 + math.pi / 2, w2 + math.pi / 2))
            assert e2_exact(c, p2, 2) == pytest.approx(e1_exact(c, p1, 2), rel=1e-9)

    def test_random_signs(self):
        f = random_signs(42)
        re, im = np.arange(-50, 50), np.arange(100)
        v = f(re, im)
        assert set(np.unique(v)) <= {-1.0, 1.0}
        assert np.array_equal(v, random_signs(42)(re, im))
        assert not np.array_equal(v, random_signs(43)(re, im))
        assert 30 < (v > 0).sum() < 70
        assert np.array_equal(ones(re, im), np.ones(100))

    def test_coefficient_modulus_checked(self):
        p = TypeSumParams(x1=1, x2=1000, M=100, H1=1, H2=1, delta=Fraction(1, 2))
        with pytest.raises(ValueError):
            f3_exact(C, p, lambda r, i: 2.0 * np.ones(np.shape(r)))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            TypeSumParams(x1=1, x2=100, M=100, beta=0.6)
        with pytest.raises(ValueError):
            TypeSumParams(x1=1, x2=1000, M=5, alpha=1 / 3)
        with pytest.raises(ValueError):
            TypeSumParams(x1=1, x2=100, M=100, H1=0.5)
        with pytest.raises(ValueError):
            TypeSumParams(x1=1, x2=100, M=100, delta=Fraction(3, 4))


class TestReport:
    def test_saturation(self):
        r = type_sum_report(ComplexHP.preset("sqrt2i"), GaussInt(0, -2), Fraction(1, 2))
        assert r.diff_typeI == 0 and r.diff_typeII == 0

    @pytest.mark.parametrize("name", ["sqrt2i", "sqrt2"])
    def test_q2_budget(self, name):
        c = ComplexHP.preset(name)
        q = next(d for d in hurwitz_expansion(c, max_terms=6).denominators if d.norm() == 4)
        r = type_sum_report(c, q, Fraction(3, 10))
        assert r.x == 4096
        assert r.typeI_ok and r.typeII_ok
        assert abs(r.diff_typeI) <= 32 * r.budget_typeI
        assert abs(r.diff_typeII) <= 32 * r.budget_typeII

    def test_counts_match_naive(self):
        # c = i sqrt 2: wc = -sqrt2 Im w + i sqrt2 Re w, and ||sqrt2 k|| <= 3/10 is decided in integers
        c = ComplexHP.preset("sqrt2i")
        r = type_sum_report(c, GaussInt(0, -2), Fraction(3, 10))

        @lru_cache(maxsize=None)
        def near(k):
            # is there an integer m >= 0 with |sqrt2 |k| - m| <= 3/10 ?
            t = Fraction(3, 10)
            return any(2 * k * k <= (m + t) ** 2 and (m - t <= 0 or (m - t) ** 2 <= 2 * k * k)
                       for m in range(0, 2 * abs(k) + 2))

        for lo, hi, lhs, main in ((0, 256, r.lhs_typeI, r.main_typeI), (16, 1024, r.lhs_typeII, r.main_typeII)):
            pairs = _pairs(lo, hi, 1, 4096)
            assert lhs == sum(1 for _, _, w in pairs if near(w[0]) and near(w[1]))
            assert main == pytest.approx(4 * 0.09 * len(pairs))

    def test_empty_window(self):
        r = type_sum_report(ComplexHP.preset("sqrt2i"), GaussInt(0, -2), Fraction(3, 10), x1=4096)
        assert (r.lhs_typeI, r.main_typeI, r.lhs_typeII, r.main_typeII) == (0, 0, 0, 0)

    def test_prime_sums(self, table_1e4):
        r = type_sum_report(ComplexHP.preset("sqrt2i"), GaussInt(0, -2), Fraction(3, 10), table=table_1e4)
        assert r.S_c is not None and r.S_main > 0
