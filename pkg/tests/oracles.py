"""Independent brute-force oracles: plain loops, trial division, Fractions, mpmath.

Nothing here calls into the package's kernels.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import mpmath

# irrational presets used as test constants
IRRATIONAL = ["sqrt2i", "mix_sqrt", "mix_e_pi", "mix_cbrt", "mix_golden"]


@lru_cache(maxsize=None)
def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def gprime_td(a: int, b: int) -> bool:
    if a == 0 or b == 0:
        m = abs(a + b)
        return m % 4 == 3 and is_prime_td(m)
    return is_prime_td(a * a + b * b)


def gaussian_primes_td(max_norm: int) -> set[tuple[int, int]]:
    r = math.isqrt(max_norm)
    return {(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1)
            if 0 < a * a + b * b <= max_norm and gprime_td(a, b)}


def factor_td(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def gaussian_omega_td(a: int, b: int) -> int:
    """Number of Gaussian prime factors with multiplicity, by trial division of the norm."""
    total = 0
    for p, e in factor_td(a * a + b * b).items():
        total += e // 2 if p % 4 == 3 else e
    return total


def frac_dist(x: Fraction) -> Fraction:
    return abs(x - math.floor(x + Fraction(1, 2)))


def sup_dist_exact(a: int, b: int, cr: Fraction, ci: Fraction) -> tuple[Fraction, Fraction]:
    """(||Re((a+bi)c)||, ||Im((a+bi)c)||) for rational c."""
    return frac_dist(a * cr - b * ci), frac_dist(a * ci + b * cr)


def sup_dist_mp(a: int, b: int, c: mpmath.mpc) -> tuple[float, float]:
    with mpmath.workprec(300):
        x = mpmath.mpc(a, b) * c
        dr = abs(x.real - mpmath.nint(x.real))
        di = abs(x.imag - mpmath.nint(x.imag))
        return float(dr), float(di)


def lattice_disc_points(z) -> list[tuple[int, int]]:
    r = math.isqrt(math.floor(z)) if z >= 0 else -1
    return [(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1) if 0 < a * a + b * b <= z]


def e(x: Fraction | float) -> complex:
    if isinstance(x, Fraction):
        x = x - math.floor(x)
    return cmath.exp(2j * math.pi * float(x))


def arg_in(a: int, b: int, t1: float, t2: float) -> bool:
    th = math.atan2(b, a)
    while th <= t1:
        th += 2 * math.pi
    while th > t1 + 2 * math.pi:
        th -= 2 * math.pi
    return th <= t2


def naive_F(c: complex, alpha: complex, N: int, eps: float) -> int:
    total = 0
    for a, b in lattice_disc_points(N * N):
        if not gprime_td(a, b):
            continue
        eta2 = (a * a + b * b) ** (eps - 1 / 12)
        p = complex(a, b)
        z, w = p * alpha, p * c * alpha
        nr = nq = 0
        for x in range(math.floor(z.real) - 1, math.floor(z.real) + 3):
            for y in range(math.floor(z.imag) - 1, math.floor(z.imag) + 3):
                if abs(z - complex(x, y)) ** 2 <= eta2 and gprime_td(x, y):
                    nr += 1
        for x in range(math.floor(w.real) - 1, math.floor(w.real) + 3):
            for y in range(math.floor(w.imag) - 1, math.floor(w.imag) + 3):
                if abs(w - complex(x, y)) ** 2 <= eta2:
                    nq += 1
        total += nr * nq
    return total


def naive_t_p(P, alpha, c, mu, d1=(1, 0), d2=(1, 0)):
    """Exact loop with rational alpha, c (Fractions)."""
    ar, ai = alpha
    cr, ci = c
    n1 = d1[0] ** 2 + d1[1] ** 2
    n2 = d2[0] ** 2 + d2[1] ** 2
    # k1 = d1 alpha / d2, k2 = d1 c alpha
    da = (d1[0] * ar - d1[1] * ai, d1[0] * ai + d1[1] * ar)
    k1 = ((da[0] * d2[0] + da[1] * d2[1]) / n2, (da[1] * d2[0] - da[0] * d2[1]) / n2)
    k2 = (da[0] * cr - da[1] * ci, da[0] * ci + da[1] * cr)
    lo, hi = Fraction(P * P, 4 * n1), Fraction(P * P, n1)
    mu2 = mu if n2 == 1 else Fraction(float(mu) / math.sqrt(n2))
    count = 0
    r = math.isqrt(math.floor(hi))
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            if not (lo < a * a + b * b <= hi):
                continue
            if max(frac_dist(a * k1[0] - b * k1[1]), frac_dist(a * k1[1] + b * k1[0])) > mu2:
                continue
            if max(frac_dist(a * k2[0] - b * k2[1]), frac_dist(a * k2[1] + b * k2[0])) <= mu:
                count += 1
    return count
