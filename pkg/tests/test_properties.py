"""Property-based checks against small brute-force oracles."""
import math
from fractions import Fraction

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from gaussdioph.expsum import vaaler_eval
from gaussdioph.gint import ComplexHP, GaussInt, gaussian_factor, gaussian_gcd, nearest_and_dist, omega
from gaussdioph.gsieve import SectorAnnulus, count_primes_sector
from oracles import gaussian_omega_td

small = st.integers(-300, 300)
gints = st.builds(GaussInt, small, small)
nonzero = gints.filter(bool)


@given(nonzero, nonzero)
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()


@given(gints, nonzero)
def test_division_remainder(a, b):
    q, r = a // b, a % b
    assert q * b + r == a
    assert 2 * r.norm() <= b.norm()


@given(nonzero, nonzero, nonzero)
def test_gcd_contract(a, b, k):
    g = gaussian_gcd(a * k, b * k)
    assert (a * k) % g == GaussInt(0) and (b * k) % g == GaussInt(0)
    assert g % k.canonical() == GaussInt(0)
    assert g.re > 0 and g.im >= 0


@settings(max_examples=60)
@given(nonzero)
def test_factorization(g):
    prod = GaussInt(1)
    for p, e in gaussian_factor(g):
        for _ in range(e):
            prod = prod * p
    assert prod.norm() == g.norm() and (g % prod == GaussInt(0))
    assert omega(g) == gaussian_omega_td(g.re, g.im)


@given(st.fractions(min_value=-50, max_value=50, max_denominator=97),
       st.fractions(min_value=-50, max_value=50, max_denominator=97))
def test_nearest_beats_neighbours(x, y):
    n, dsup, deuc = nearest_and_dist(ComplexHP.from_fractions(x, y))
    best = min((x - a) ** 2 + (y - b) ** 2
               for a in range(n.re - 1, n.re + 2) for b in range(n.im - 1, n.im + 2))
    assert (x - n.re) ** 2 + (y - n.im) ** 2 == best
    assert dsup <= 0.5 and math.isclose(deuc ** 2, float(best), rel_tol=1e-12, abs_tol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.floats(0, 2 * math.pi), st.integers(5, 60))
def test_sector_partition(table_1e4, k, start, r):
    pieces = [SectorAnnulus(0, r, start - math.pi + 2 * math.pi * i / k,
                            start - math.pi + 2 * math.pi * (i + 1) / k) for i in range(k)]
    total = sum(count_primes_sector(table_1e4, s)[0] for s in pieces)
    assert total == count_primes_sector(table_1e4, SectorAnnulus(0, r))[0]


@settings(max_examples=30, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(0.01, 3.0), st.integers(5, 60))
def test_sector_quarter_turn(table_1e4, t1, w, r):
    # multiplication by i permutes the primes and rotates every sector by pi/2
    s = SectorAnnulus(0, r, t1, t1 + w)
    assert count_primes_sector(table_1e4, s)[0] == count_primes_sector(table_1e4, s.rotated(math.pi / 2))[0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.lists(st.floats(-20, 20), min_size=1, max_size=50))
def test_vaaler_envelope(J, xs):
    psi, psi_star, sigma = vaaler_eval(J, np.array(xs))
    assert np.all(sigma >= -1e-12)
    assert np.all(np.abs(psi_star - psi) <= sigma + 1e-12)
