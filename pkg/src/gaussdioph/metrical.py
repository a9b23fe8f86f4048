"""Metrical counting: F_N(alpha), the G_N main term with a Monte-Carlo check of
the integral inequality, and the sieve-error quantities T_P, E_P and A_P.

Throughout eta = |p|^(eps - 1/12), so eta^2 = N(p)^(eps - 1/12).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp

from .gint import GUARD, ComplexHP, GaussInt, as_fraction, as_hp, frac_parts, within_threshold
from .gsieve import PrimeTable, SectorAnnulus, gaussian_prime_mask
from .dioph import lattice_disc

__all__ = [
    "PreconditionError",
    "MetricalParams",
    "SieveErrorParams",
    "MonteCarloResult",
    "SieveErrorResult",
    "FACTOR_BUDGET",
    "min_sieve_radius",
    "count_F_N",
    "g_n_value",
    "monte_carlo_theo_i",
    "t_p_and_e_p",
    "a_p_two_prime_count",
    "omega_of_norms",
]

FACTOR_BUDGET = 20_000_000

_OFFSETS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


class PreconditionError(ValueError):
    """Parameters outside the range where an operation is defined."""


@dataclass(frozen=True)
class MetricalParams:
    c: ComplexHP
    epsilon: float
    N: float
    A: float
    B: float
    C_const: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", as_hp(self.c))
        if not (0 < self.epsilon < 1 / 12):
            raise PreconditionError("epsilon must lie in (0, 1/12)")
        if not (0 < self.A < self.B):
            raise PreconditionError("need 0 < A < B")
        if self.C_const <= 0:
            raise PreconditionError("C_const must be positive")
        if self.N < 0:
            raise PreconditionError("N must be non-negative")

    @property
    def exponent(self) -> float:
        return self.epsilon - 1 / 12


def min_sieve_radius(epsilon: float) -> float:
    """The smallest admissible P is just above 2^(1 + 1/(1/12 - eps))."""
    return 2.0 ** (1 + 1 / (1 / 12 - epsilon))


@dataclass(frozen=True)
class SieveErrorParams:
    """P, d1, d2, alpha and mu = (P/2)^(eps - 1/12).

    Passing ``mu`` explicitly selects desk-scale mode: the lower bound on P is
    not enforced (it exceeds 25000 at eps = 0.01), but mu < 1/2 still is.
    """

    P: float
    d1: GaussInt
    d2: GaussInt
    alpha: ComplexHP
    epsilon: float = 0.01
    mu: float | None = None
    desk_scale: bool = field(init=False, default=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "d1", GaussInt.coerce(self.d1))
        object.__setattr__(self, "d2", GaussInt.coerce(self.d2))
        object.__setattr__(self, "alpha", as_hp(self.alpha))
        if self.d1.norm() == 0 or self.d2.norm() == 0:
            raise PreconditionError("d1 and d2 must be nonzero")
        if not (0 < self.epsilon < 1 / 12):
            raise PreconditionError("epsilon must lie in (0, 1/12)")
        if self.P <= 0:
            raise PreconditionError("P must be positive")
        if self.mu is None:
            if not self.P > min_sieve_radius(self.epsilon):
                raise PreconditionError(
                    f"P = {self.P} is below 2^(1+1/(1/12-eps)) = {min_sieve_radius(self.epsilon):.6g}; "
                    "pass mu explicitly for a desk-scale run")
            object.__setattr__(self, "mu", (self.P / 2) ** (self.epsilon - 1 / 12))
        else:
            object.__setattr__(self, "desk_scale", True)
        if not (0 < self.mu < 0.5):
            raise PreconditionError(f"mu = {self.mu} must lie in (0, 1/2)")


# ---------------------------------------------------------------------------
# F_N


def _nearest_offsets(pr: np.ndarray, pi: np.ndarray, kappa: ComplexHP):
    """Nearest lattice point to p*kappa and the signed offset (p*kappa minus it)."""
    fr, fi = frac_parts(pr, pi, kappa)
    kr, ki = kappa.real, kappa.imag
    approx_r = pr * kr - pi * ki
    approx_i = pr * ki + pi * kr
    gr = np.rint(approx_r - fr).astype(np.int64)
    gi = np.rint(approx_i - fi).astype(np.int64)
    return gr, gi, fr, fi


def _dist2_exact(a: int, b: int, kappa: ComplexHP, gx: int, gy: int, prec: int):
    if kappa.exact is not None:
        kr, ki = kappa.exact
        return (a * kr - b * ki - gx) ** 2 + (a * ki + b * kr - gy) ** 2
    v = kappa.at(prec)
    return (a * v.real - b * v.imag - gx) ** 2 + (a * v.imag + b * v.real - gy) ** 2


def _inside_exact(a: int, b: int, kappa: ComplexHP, gx: int, gy: int, eps: Fraction) -> bool:
    """|p kappa - g|^2 <= N(p)^(eps - 1/12), decided at two working precisions."""
    n = a * a + b * b
    verdict = False
    for prec in (kappa.prec, 2 * kappa.prec):
        with mp.workprec(prec):
            d2 = _dist2_exact(a, b, kappa, gx, gy, prec)
            if isinstance(d2, Fraction):
                d2 = mpmath.mpf(d2.numerator) / d2.denominator
            e = mpmath.mpf(eps.numerator) / eps.denominator - mpmath.mpf(1) / 12
            gap = d2 - mpmath.power(n, e)
            verdict = gap <= 0
            if abs(gap) > mpmath.mpf(2) ** (-(prec // 2)):
                return verdict
    return verdict


def _hits(pr: np.ndarray, pi: np.ndarray, kappa: ComplexHP, eta2: np.ndarray, eps: Fraction):
    """For each of the 9 candidates around p*kappa: (gx, gy, inside-mask)."""
    gr, gi, fr, fi = _nearest_offsets(pr, pi, kappa)
    out = []
    for dx, dy in _OFFSETS:
        d2 = (fr - dx) ** 2 + (fi - dy) ** 2
        inside = d2 <= eta2
        for k in np.flatnonzero(np.abs(d2 - eta2) < GUARD):
            inside[k] = _inside_exact(int(pr[k]), int(pi[k]), kappa, int(gr[k] + dx), int(gi[k] + dy), eps)
        out.append((gr + dx, gi + dy, inside))
    return out


def count_F_N(table: PrimeTable, params: MetricalParams, alpha) -> int:
    """Number of triples (p, q, r), p and r prime, |p| <= N, with
    |p alpha - r| <= eta and |p c alpha - q| <= eta (closed discs)."""
    alpha = as_hp(alpha)
    c = params.c
    N = float(params.N)
    reach = N * max(1.0, abs(c)) * abs(alpha) + 1
    table.require(max(N * N, reach * reach), "F_N count")
    sl = table.norm_slice(0, math.floor(N * N + 1e-9))
    pr, pi, pn = table.re[sl], table.im[sl], table.norm[sl]
    if pr.size == 0:
        return 0
    eps = as_fraction(params.epsilon)
    eta2 = pn.astype(np.float64) ** params.exponent
    n_r = np.zeros(pr.size, dtype=np.int64)
    for gx, gy, inside in _hits(pr, pi, alpha, eta2, eps):
        cand = np.flatnonzero(inside)
        if cand.size:
            prime = gaussian_prime_mask(table.is_prime, gx[cand], gy[cand])
            n_r[cand[prime]] += 1
    if not n_r.any():
        return 0
    sel = np.flatnonzero(n_r)
    n_q = np.zeros(sel.size, dtype=np.int64)
    for _, _, inside in _hits(pr[sel], pi[sel], c * alpha, eta2[sel], eps):
        n_q += inside
    return int(np.dot(n_r[sel], n_q))


def g_n_value(params: MetricalParams) -> float:
    """G_N(A, B) = C (A/B) N^(5/3 + 4 eps) / log^2 N."""
    N = float(params.N)
    if N < 2:
        raise PreconditionError("G_N needs N >= 2")
    return params.C_const * (params.A / params.B) * N ** (5 / 3 + 4 * params.epsilon) / math.log(N) ** 2


@dataclass(frozen=True)
class MonteCarloResult:
    integral_estimate: float
    rhs: float
    stderr: float
    samples: int
    seed: int
    degenerate: bool

    def as_dict(self) -> dict:
        return asdict(self)


def monte_carlo_theo_i(table: PrimeTable, params: MetricalParams, sector: SectorAnnulus,
                       samples: int, seed: int = 0) -> MonteCarloResult:
    """Monte-Carlo estimate of the dR dtheta integral of F_N(R e^(i theta)) over the sector,
    next to (gamma2 - gamma1)(b^2 - a^2) G_N(A, B).  No verdict is attached."""
    samples = int(samples)
    if samples < 1:
        raise PreconditionError("samples must be at least 1")
    a, b = float(sector.r_min), float(sector.r_max)
    if not (params.A <= a < b <= params.B):
        raise PreconditionError("sector radii must lie within [A, B]")
    g1, g2 = float(sector.theta_min), float(sector.theta_max)
    values = np.empty(samples, dtype=np.float64)
    for i in range(samples):
        u, v = np.random.default_rng([int(seed), i]).random(2)
        R = a + (b - a) * float(u)
        th = g1 + (g2 - g1) * float(v)
        alpha = ComplexHP.from_fractions(R * math.cos(th), R * math.sin(th))
        values[i] = count_F_N(table, params, alpha)
    area = (b - a) * (g2 - g1)
    est = area * float(np.mean(values))
    err = area * float(np.std(values, ddof=1)) / math.sqrt(samples) if samples > 1 else 0.0
    # G_N is undefined below N = 2; the estimate is still reported
    rhs = (g2 - g1) * (b * b - a * a) * g_n_value(params) if float(params.N) >= 2 else math.nan
    return MonteCarloResult(est, rhs, err, samples, int(seed), params.c.is_rational)


# ---------------------------------------------------------------------------
# sieve error


@dataclass(frozen=True)
class SieveErrorResult:
    t_p: int
    main: float
    e_p: float
    mu: float
    degenerate: bool
    desk_scale: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _annulus_points(r2_lo: Fraction, r2_hi: Fraction) -> tuple[np.ndarray, np.ndarray]:
    """Lattice points with r2_lo < |n|^2 <= r2_hi."""
    gx, gy = lattice_disc(math.floor(r2_hi))
    nrm = gx * gx + gy * gy
    keep = nrm > math.floor(r2_lo)
    return gx[keep], gy[keep]


def t_p_and_e_p(sp: SieveErrorParams, c) -> SieveErrorResult:
    """T_P: lattice n with P/(2|d1|) < |n| <= P/|d1|, ||n d1 alpha/d2|| <= mu/|d2|
    and ||n d1 c alpha|| <= mu (sup norm); main = 12 pi P^2 mu^4 / (|d1|^2 |d2|^2)."""
    c = as_hp(c)
    P = as_fraction(sp.P)
    n1, n2 = sp.d1.norm(), sp.d2.norm()
    gx, gy = _annulus_points(P * P / (4 * n1), P * P / n1)
    k1 = sp.alpha * sp.d1 / sp.d2
    k2 = sp.d1 * c * sp.alpha
    mu = as_fraction(sp.mu)
    if gx.size:
        mu2 = mu if n2 == 1 else Fraction(float(sp.mu) / math.sqrt(n2))
        ok = within_threshold(gx, gy, k1, mu2)
        sel = np.flatnonzero(ok)
        ok2 = within_threshold(gx[sel], gy[sel], k2, mu)
        t_p = int(np.count_nonzero(ok2))
    else:
        t_p = 0
    main = 12 * math.pi * float(P) ** 2 * sp.mu ** 4 / (n1 * n2)
    degenerate = sp.alpha.exact == (0, 0) or c.is_rational
    return SieveErrorResult(t_p, main, t_p - main, float(sp.mu), degenerate, sp.desk_scale)


def _spf_sieve(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def omega_of_norms(norms: np.ndarray, spf: np.ndarray | None = None) -> np.ndarray:
    """Omega of Gaussian integers given their norms: a rational prime factor
    q = 3 mod 4 with exponent e contributes e/2, every other one e."""
    norms = np.asarray(norms, dtype=np.int64)
    if norms.size == 0:
        return np.zeros(0, dtype=np.int64)
    if spf is None:
        spf = _spf_sieve(int(norms.max()))
    x = norms.copy()
    out = np.zeros(x.size, dtype=np.int64)
    active = x > 1
    while active.any():
        idx = np.flatnonzero(active)
        p = spf[x[idx]].astype(np.int64)
        out[idx] += np.where(p % 4 == 3, 1, 2)
        x[idx] //= p
        active = x > 1
    # each inert q contributes q^2 to the norm and was counted twice
    return out // 2


def a_p_two_prime_count(sp: SieveErrorParams, c, alpha=None, budget: int = FACTOR_BUDGET) -> int:
    """Number of n with P/2 < |n| <= P and max(||n alpha||, ||n c alpha||) <= mu such that
    n f(n alpha) is a product of exactly two Gaussian primes, f being the nearest
    lattice point (units disregarded; f(n alpha) = 0 never qualifies)."""
    c = as_hp(c)
    alpha = sp.alpha if alpha is None else as_hp(alpha)
    P = as_fraction(sp.P)
    mu = as_fraction(sp.mu)
    gx, gy = _annulus_points(P * P / 4, P * P)
    if gx.size == 0:
        return 0
    ok = within_threshold(gx, gy, alpha, mu)
    gx, gy = gx[ok], gy[ok]
    ok = within_threshold(gx, gy, c * alpha, mu)
    gx, gy = gx[ok], gy[ok]
    if gx.size == 0:
        return 0
    fx, fy, _, _ = _nearest_offsets(gx, gy, alpha)
    nn = gx * gx + gy * gy
    nf = fx * fx + fy * fy
    top = int(max(nn.max(), nf.max()))
    if top > budget:
        raise PreconditionError(f"factorization budget exceeded: norm {top} > {budget}")
    spf = _spf_sieve(max(top, 2))
    total = omega_of_norms(nn, spf) + omega_of_norms(np.maximum(nf, 1), spf)
    return int(np.count_nonzero((total == 2) & (nf > 0)))
