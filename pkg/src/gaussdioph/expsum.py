"""Vaaler's trigonometric approximation and exact evaluation of the linear,
type-I and type-II exponential sums over Z[i], with their bound audits.

e(x) = exp(2 pi i x).  Phases are reduced modulo 1 from an extended-precision
coefficient before conversion to float (see ``gint.frac_parts``).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .gint import ComplexHP, GaussInt, as_fraction, as_hp, frac_parts, verify_convergent, within_threshold
from .gsieve import FULL_CIRCLE, PrimeTable, SectorAnnulus, sector_mask
from .dioph import lattice_disc

__all__ = [
    "VaalerParams",
    "TypeSumParams",
    "GcProfile",
    "TypeSumReport",
    "BudgetExceededError",
    "LIN_AUDIT_CONSTANT",
    "GC_AUDIT_CONSTANT",
    "ENUMERATION_BUDGET",
    "vaaler_weight",
    "vaaler_eval",
    "linear_expsum",
    "linear_bound",
    "g_c_profile",
    "e1_exact",
    "e2_exact",
    "e3_exact",
    "f1_exact",
    "f3_exact",
    "ones",
    "random_signs",
    "type_sum_params_for",
    "type_sum_report",
]

LIN_AUDIT_CONSTANT = 16.0
GC_AUDIT_CONSTANT = 32.0
ENUMERATION_BUDGET = 10 ** 8

Coefficients = Callable[[np.ndarray, np.ndarray], np.ndarray]


class BudgetExceededError(RuntimeError):
    """An exact sum would enumerate more terms than the configured budget."""


# ---------------------------------------------------------------------------
# Vaaler


@dataclass(frozen=True)
class VaalerParams:
    J: int
    J1: int | None = None
    J2: int | None = None

    def __post_init__(self) -> None:
        if int(self.J) < 1:
            raise ValueError("J must be a positive integer")
        for name in ("J1", "J2"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise ValueError(f"{name} must be a positive integer")

    def admits(self, delta) -> bool:
        """J >= 1/delta."""
        return self.J * as_fraction(delta) >= 1


def vaaler_weight(t):
    """W(t) = pi t (1 - |t|) cot(pi t) + |t| for 0 < |t| < 1."""
    t = np.asarray(t, dtype=np.float64)
    return math.pi * t * (1 - np.abs(t)) / np.tan(math.pi * t) + np.abs(t)


def vaaler_eval(params, x):
    """(psi, psi_star, sigma) at x.

    psi(x) = x - floor(x) - 1/2; psi_star is the degree-J trigonometric
    polynomial and sigma the non-negative Fejer-type envelope with
    |psi_star - psi| <= sigma.  Pairing j with -j gives
    psi_star(x) = -sum_{j=1}^{J} W(j/(J+1)) sin(2 pi j x) / (pi j) and
    sigma(x) = (1 + 2 sum_{j=1}^{J} (1 - j/(J+1)) cos(2 pi j x)) / (2J + 2).
    """
    J = params.J if isinstance(params, VaalerParams) else int(params)
    if J < 1:
        raise ValueError("J must be a positive integer")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    xr = xs - np.floor(xs)
    psi = xr - 0.5
    psi_star = np.zeros_like(xr)
    sigma = np.ones_like(xr)
    for j in range(1, J + 1):
        t = j / (J + 1)
        ph = 2 * math.pi * np.remainder(j * xr, 1.0)
        psi_star -= float(vaaler_weight(t)) * np.sin(ph) / (math.pi * j)
        sigma += 2 * (1 - t) * np.cos(ph)
    sigma /= 2 * J + 2
    if scalar:
        return float(psi[0]), float(psi_star[0]), float(sigma[0])
    return psi, psi_star, sigma


# ---------------------------------------------------------------------------
# linear sums


def _e(phase: np.ndarray) -> np.ndarray:
    return np.exp(2j * math.pi * phase)


def _norm_window(y_lo, y_hi) -> tuple[int, int]:
    return math.floor(as_fraction(y_lo)), math.floor(as_fraction(y_hi))


def _sector_points(y_lo, y_hi, f1: float, f2: float) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = _norm_window(y_lo, y_hi)
    mx, my = lattice_disc(hi)
    nrm = mx * mx + my * my
    keep = nrm > lo
    mx, my = mx[keep], my[keep]
    if f2 - f1 < 2 * math.pi and mx.size:
        s = sector_mask(mx, my, f1, f2)
        mx, my = mx[s], my[s]
    return mx, my


def _dist_component(x: float) -> float:
    return abs(x - math.floor(x + 0.5))


def linear_bound(kappa, y) -> float:
    """y^(1/2) * min{||Im k||^-1, sqrt y}^(1/2) * min{||Re k||^-1, sqrt y}^(1/2)."""
    kappa = as_hp(kappa)
    fr, fi = frac_parts(np.array([1]), np.array([0]), kappa)
    sy = math.sqrt(float(y))

    def cap(d: float) -> float:
        return sy if d == 0 else min(1 / d, sy)

    return sy * math.sqrt(cap(abs(float(fi[0])))) * math.sqrt(cap(abs(float(fr[0]))))


def linear_expsum(kappa, y_lo, y_hi, f1: float = -math.pi, f2: float = math.pi) -> tuple[complex, float]:
    """sum of e(Im(m kappa)) over y_lo < N(m) <= y_hi, f1 < arg m <= f2, and its bound."""
    if not (0 <= y_lo < y_hi):
        raise ValueError("need 0 <= y_lo < y_hi")
    if not (f1 < f2 <= f1 + 2 * math.pi):
        raise ValueError("need f1 < f2 <= f1 + 2*pi")
    kappa = as_hp(kappa)
    mx, my = _sector_points(y_lo, y_hi, f1, f2)
    if mx.size == 0:
        exact = 0j
    else:
        _, fi = frac_parts(mx, my, kappa)
        exact = complex(np.sum(_e(fi)))
    return exact, linear_bound(kappa, y_hi)


# ---------------------------------------------------------------------------
# G_c


@dataclass(frozen=True)
class GcProfile:
    exact: float
    bound_general: float
    bound_small_z: float | None

    def ratios(self) -> tuple[float, float | None]:
        r1 = self.exact / self.bound_general
        r2 = None if self.bound_small_z is None else self.exact / self.bound_small_z
        return r1, r2


def g_c_profile(c, y, z, q) -> GcProfile:
    """G_c(y, z) exactly, with the general and the small-z bounds for a convergent q.

    G_c(y, z) = sum_{0<N(n)<=z} min{||Im nc||^-1, sqrt y}^(1/2) min{||Re nc||^-1, sqrt y}^(1/2).
    """
    c = as_hp(c)
    y, z = float(y), float(z)
    if y < 1 or z < 0:
        raise ValueError("need y >= 1 and z >= 0")
    q = GaussInt.coerce(q)
    verify_convergent(c, q)
    gx, gy = lattice_disc(as_fraction(z))
    sy = math.sqrt(y)
    if gx.size:
        fr, fi = frac_parts(gx, gy, c)
        with np.errstate(divide="ignore"):
            ci = np.minimum(1 / np.abs(fi), sy)
            cr = np.minimum(1 / np.abs(fr), sy)
        exact = float(np.sum(np.sqrt(ci) * np.sqrt(cr)))
    else:
        exact = 0.0
    nq = q.norm()
    abs_q = math.sqrt(nq)
    general = (1 + z / nq) * (math.sqrt(y) + nq) * math.log(2 * y) ** 2
    small = None
    if 8 * z <= nq:
        small = (abs_q * y ** 0.25 + nq) * math.log(2 * abs_q) ** 2
    return GcProfile(exact, general, small)


# ---------------------------------------------------------------------------
# type I / type II sums


@dataclass(frozen=True)
class TypeSumParams:
    """Parameters of the bilinear sums: norm window (x1, x2], type-I range N(m) <= M,
    type-II range x2^alpha < N(m) <= x2^(alpha+beta), frequency box |Re j| <= H1,
    |Im j| <= H2, threshold delta and the sector of arg(mn)."""

    x1: float
    x2: float
    M: float
    alpha: float = 1 / 3
    beta: float = 0.5
    H1: float = 1
    H2: float = 0.5
    delta: Fraction = Fraction(1, 2)
    sector: SectorAnnulus = FULL_CIRCLE

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if not (0 < self.beta <= 0.5):
            raise ValueError("need 0 < beta <= 1/2")
        if self.alpha <= 0:
            raise ValueError("need alpha > 0")
        if self.x1 < 1 or self.x2 < 1:
            raise ValueError("need x1, x2 >= 1")
        if not self.M > self.x2 ** self.alpha:
            raise ValueError("need M > x2^alpha")
        if self.H1 < 1 or self.H2 < 0.5:
            raise ValueError("need H1 >= 1 and H2 >= 1/2")
        if not (0 < self.delta <= Fraction(1, 2)):
            raise ValueError("delta must lie in (0, 1/2]")

    @property
    def type2_range(self) -> tuple[float, float]:
        return self.x2 ** self.alpha, self.x2 ** (self.alpha + self.beta)

    def frequencies(self) -> list[GaussInt]:
        h1, h2 = math.floor(self.H1), math.floor(self.H2)
        return [GaussInt(a, b) for a in range(-h1, h1 + 1) for b in range(-h2, h2 + 1) if a or b]


@dataclass
class _Pairs:
    m_idx: np.ndarray
    m_re: np.ndarray
    m_im: np.ndarray
    n_re: np.ndarray
    n_im: np.ndarray
    w_re: np.ndarray
    w_im: np.ndarray
    n_m: int


def _exact_int_window(lo, hi) -> tuple[int, int]:
    """(lo, hi] on integers: returns (floor lo, floor hi), tolerant of float powers."""
    def fl(v):
        r = round(v)
        return r if abs(v - r) < 1e-9 else math.floor(v)
    return fl(lo), fl(hi)


def _enumerate_pairs(p: TypeSumParams, m_lo, m_hi) -> _Pairs:
    """All (m, n) with m_lo < N(m) <= m_hi, x1 < N(mn) <= x2, and arg(mn) in the sector."""
    mlo, mhi = _exact_int_window(m_lo, m_hi)
    x1, x2 = _exact_int_window(p.x1, p.x2)
    mx, my = lattice_disc(mhi)
    mn = mx * mx + my * my
    sel = mn > mlo
    mx, my, mn = mx[sel], my[sel], mn[sel]
    chunks = []
    for k in range(mx.size):
        cap = x2 // int(mn[k])
        if cap < 1:
            continue
        nx, ny = lattice_disc(cap)
        wx = mx[k] * nx - my[k] * ny
        wy = mx[k] * ny + my[k] * nx
        wn = wx * wx + wy * wy
        keep = (wn > x1) & (wn <= x2)
        if not keep.any():
            continue
        chunks.append((np.full(int(keep.sum()), k), nx[keep], ny[keep], wx[keep], wy[keep]))
    if chunks:
        idx, nx, ny, wx, wy = (np.concatenate(c) for c in zip(*chunks))
    else:
        idx = nx = ny = wx = wy = np.zeros(0, dtype=np.int64)
    if idx.size and not p.sector.is_full_circle:
        s = sector_mask(wx, wy, p.sector.theta_min, p.sector.theta_max)
        idx, nx, ny, wx, wy = idx[s], nx[s], ny[s], wx[s], wy[s]
    return _Pairs(idx, mx[idx] if idx.size else idx, my[idx] if idx.size else idx,
                  nx, ny, wx, wy, int(mx.size))


def _check_budget(p: TypeSumParams, budget: float) -> None:
    if p.x2 * (p.H1 ** 2 + p.H2 ** 2) > budget:
        raise BudgetExceededError(
            f"x2*(H1^2+H2^2) = {p.x2 * (p.H1 ** 2 + p.H2 ** 2):.3g} exceeds the budget {budget:.3g}")


def _abs_group_sums(idx: np.ndarray, values: np.ndarray, groups: int) -> float:
    re = np.bincount(idx, weights=values.real, minlength=groups)
    im = np.bincount(idx, weights=values.imag, minlength=groups)
    return float(np.sum(np.hypot(re, im)))


def e3_exact(c, params: TypeSumParams, budget: float = ENUMERATION_BUDGET) -> float:
    """E_3(H1, H2): sum over Gaussian j != 0 in the box and N(m) <= M of
    |sum_n e(Im(j m n c))|, n over x1 < N(mn) <= x2 with arg(mn) in the sector."""
    c = as_hp(c)
    _check_budget(params, budget)
    pairs = _enumerate_pairs(params, 0, params.M)
    if pairs.w_re.size == 0:
        return 0.0
    total = 0.0
    for j in params.frequencies():
        _, fi = frac_parts(pairs.w_re, pairs.w_im, c * j)
        total += _abs_group_sums(pairs.m_idx, _e(fi), pairs.n_m)
    return total


def _e12(c, params: TypeSumParams, H: int, component: int, budget: float) -> float:
    c = as_hp(c)
    _check_budget(params, budget)
    pairs = _enumerate_pairs(params, 0, params.M)
    if pairs.w_re.size == 0:
        return 0.0
    base = frac_parts(pairs.w_re, pairs.w_im, c)[component]
    total = 0.0
    for j in range(1, int(H) + 1):
        for s in (j, -j):
            ph = np.remainder(s * base, 1.0)
            total += _abs_group_sums(pairs.m_idx, _e(ph), pairs.n_m)
    return total


def e1_exact(c, params: TypeSumParams, H: int | None = None, budget: float = ENUMERATION_BUDGET) -> float:
    """E_1(H) from its own definition: rational j with 1 <= |j| <= H and phase j*Im(mnc)."""
    return _e12(c, params, params.H1 if H is None else H, 1, budget)


def e2_exact(c, params: TypeSumParams, H: int | None = None, budget: float = ENUMERATION_BUDGET) -> float:
    """E_2(H): as E_1 with the real part Re(mnc) in the phase."""
    return _e12(c, params, params.H1 if H is None else H, 0, budget)


def ones(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(re), dtype=np.float64)


def random_signs(seed: int) -> Coefficients:
    """Deterministic pseudorandom +-1 per lattice point (splitmix64 of (re, im, seed))."""
    key = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)

    def coeff(re: np.ndarray, im: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            x = (np.asarray(re).astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
                 ^ np.asarray(im).astype(np.uint64) * np.uint64(0xC2B2AE3D27D4EB4F) ^ key)
            x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            x = x ^ (x >> np.uint64(31))
        return np.where(x & np.uint64(1), 1.0, -1.0)

    return coeff


def _type2_terms(c: ComplexHP, params: TypeSumParams, a_seq: Coefficients, b_seq: Coefficients):
    lo, hi = params.type2_range
    pairs = _enumerate_pairs(params, lo, hi)
    if pairs.w_re.size == 0:
        return pairs, np.zeros(0, dtype=np.complex128)
    inA = within_threshold(pairs.w_re, pairs.w_im, c, params.delta)
    for name in ("m_idx", "m_re", "m_im", "n_re", "n_im", "w_re", "w_im"):
        setattr(pairs, name, getattr(pairs, name)[inA])
    a = np.asarray(a_seq(pairs.m_re, pairs.m_im))
    b = np.asarray(b_seq(pairs.n_re, pairs.n_im))
    if a.size and (np.abs(a).max() > 1 + 1e-12 or np.abs(b).max() > 1 + 1e-12):
        raise ValueError("coefficient sequences must have modulus <= 1")
    return pairs, (a * b).astype(np.complex128)


def f3_exact(c, params: TypeSumParams, a_seq: Coefficients = ones, b_seq: Coefficients = ones,
             budget: float = ENUMERATION_BUDGET) -> float:
    """F_3(H1, H2): sum over Gaussian j != 0 in the box of
    |sum a_m b_n e(Im(j m n c))| over x2^alpha < N(m) <= x2^(alpha+beta) and mn in A,
    A being the sector/norm-window points with ||mnc|| <= delta."""
    c = as_hp(c)
    _check_budget(params, budget)
    pairs, weights = _type2_terms(c, params, a_seq, b_seq)
    if weights.size == 0:
        return 0.0
    total = 0.0
    for j in params.frequencies():
        _, fi = frac_parts(pairs.w_re, pairs.w_im, c * j)
        total += abs(complex(np.sum(weights * _e(fi))))
    return total


def f1_exact(c, params: TypeSumParams, H: int | None = None, a_seq: Coefficients = ones,
             b_seq: Coefficients = ones, budget: float = ENUMERATION_BUDGET) -> float:
    """F_1(H) from its own definition: rational j with 1 <= |j| <= H, phase j*Im(mnc)."""
    c = as_hp(c)
    _check_budget(params, budget)
    H = params.H1 if H is None else H
    pairs, weights = _type2_terms(c, params, a_seq, b_seq)
    if weights.size == 0:
        return 0.0
    base = frac_parts(pairs.w_re, pairs.w_im, c)[1]
    total = 0.0
    for j in range(1, int(H) + 1):
        for s in (j, -j):
            total += abs(complex(np.sum(weights * _e(np.remainder(s * base, 1.0)))))
    return total


# ---------------------------------------------------------------------------
# report


@dataclass
class TypeSumReport:
    q: str
    x: int
    delta: float
    epsilon: float
    lhs_typeI: int
    main_typeI: float
    lhs_typeII: int
    main_typeII: float
    budget_typeI: float
    budget_typeII: float
    audit_constant: float
    J: int
    S_c: int | None = None
    S_main: float | None = None

    @property
    def diff_typeI(self) -> float:
        return self.lhs_typeI - self.main_typeI

    @property
    def diff_typeII(self) -> float:
        return self.lhs_typeII - self.main_typeII

    @property
    def typeI_ok(self) -> bool:
        return abs(self.diff_typeI) <= self.audit_constant * self.budget_typeI

    @property
    def typeII_ok(self) -> bool:
        return abs(self.diff_typeII) <= self.audit_constant * self.budget_typeII

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(diff_typeI=self.diff_typeI, diff_typeII=self.diff_typeII,
                 typeI_ok=self.typeI_ok, typeII_ok=self.typeII_ok)
        return d


def type_sum_params_for(q, delta, x1: float = 1, sector: SectorAnnulus = FULL_CIRCLE,
                        H1: float = 1, H2: float = 0.5) -> TypeSumParams:
    """The standard choice x2 = norm(q)^6 (= |q|^12), M = x2^(2/3), alpha = 1/3, beta = 1/2."""
    nq = GaussInt.coerce(q).norm()
    x2 = nq ** 6
    return TypeSumParams(x1=x1, x2=x2, M=nq ** 4, alpha=1 / 3, beta=0.5, H1=H1, H2=H2,
                         delta=delta, sector=sector)


def _count_pairs(c: ComplexHP, params: TypeSumParams, m_lo, m_hi) -> tuple[int, int]:
    pairs = _enumerate_pairs(params, m_lo, m_hi)
    total = int(pairs.w_re.size)
    if total == 0:
        return 0, 0
    hits = int(np.count_nonzero(within_threshold(pairs.w_re, pairs.w_im, c, params.delta)))
    return hits, total


def type_sum_report(c, q, delta, table: PrimeTable | None = None, x1: float = 1,
                    sector: SectorAnnulus = FULL_CIRCLE, epsilon: float = 0.01,
                    audit_constant: float = GC_AUDIT_CONSTANT) -> TypeSumReport:
    """Both sides of the type-I and type-II relations with a = b = 1 at x = norm(q)^6.

    lhs counts pairs (m, n) with mn in A, main is 4 delta^2 times the same count
    with mn in B (no distance constraint); the type-II main term uses the same
    m-range as its left-hand side.  The error budgets are delta^2 x^(1-eps) +
    x^(5/6+8eps) (type I) and delta^2 x^(1-eps) + x^(11/12+8eps) (type II).
    """
    c = as_hp(c)
    q = GaussInt.coerce(q)
    verify_convergent(c, q)
    params = type_sum_params_for(q, delta, x1=x1, sector=sector)
    d = float(params.delta)
    x = int(params.x2)
    lhs1, tot1 = _count_pairs(c, params, 0, params.M)
    lo, hi = params.type2_range
    lhs2, tot2 = _count_pairs(c, params, lo, hi)
    four_d2 = 4 * d * d
    J = max(1, math.floor(x ** (3 * epsilon) / d))
    S_c = S_main = None
    if table is not None and x1 < x:
        from .dioph import equid_window
        rep = equid_window(table, c, x1, x, params.delta, sector)
        S_c, S_main = rep.observed, rep.predicted
    return TypeSumReport(
        q=str(q), x=x, delta=d, epsilon=epsilon,
        lhs_typeI=lhs1, main_typeI=four_d2 * tot1,
        lhs_typeII=lhs2, main_typeII=four_d2 * tot2,
        budget_typeI=d * d * x ** (1 - epsilon) + x ** (5 / 6 + 8 * epsilon),
        budget_typeII=d * d * x ** (1 - epsilon) + x ** (11 / 12 + 8 * epsilon),
        audit_constant=audit_constant, J=J, S_c=S_c, S_main=S_main)
