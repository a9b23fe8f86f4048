"""Prime counts under a Diophantine constraint ||pc|| <= delta, and their audits.

Distances are to the nearest Gaussian integer: the sup metric uses
max(||Re z||, ||Im z||), the Euclidean metric the ordinary distance.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np
from mpmath import mp
from sympy import factorint

from .gint import (
    GUARD,
    ComplexHP,
    GaussInt,
    _exact_frac_pair,
    as_fraction,
    as_hp,
    frac_parts,
    hurwitz_expansion,
    verify_convergent,
    within_threshold,
)
from .gsieve import FULL_CIRCLE, CoverageError, PrimeTable, SectorAnnulus, sector_mask

__all__ = [
    "ConstraintQuery",
    "Scale",
    "ScaleSchedule",
    "EquidReport",
    "SpacingAudit",
    "count_constrained_primes",
    "relation_check_pi_star",
    "lattice_disc",
    "sigma_count",
    "spacing_audit",
    "min_prime_factor_norm",
    "sieve_count_S",
    "build_schedule",
    "equid_window",
    "equid_report",
    "find_approx_primes",
]


def _half() -> Fraction:
    return Fraction(1, 2)


@dataclass(frozen=True)
class ConstraintQuery:
    """Region, threshold and metric for pi_c / pi*_c / S_c.

    ``norm_window=(x1, x2)`` replaces the radii by the norm window x1 < N(p) <= x2.
    """

    region: SectorAnnulus = FULL_CIRCLE
    delta: Fraction = Fraction(1, 2)
    metric: str = "sup"
    norm_window: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        d = as_fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if not (0 < d <= _half()):
            raise ValueError(f"delta must lie in (0, 1/2], got {float(d)}")
        if self.metric not in ("sup", "euclid"):
            raise ValueError(f"metric must be 'sup' or 'euclid', got {self.metric!r}")
        if self.norm_window is not None:
            x1, x2 = self.norm_window
            if not (1 <= x1 < x2):
                raise ValueError(f"norm window needs 1 <= x1 < x2, got {x1}, {x2}")

    def norm_bounds(self) -> tuple[float, float]:
        if self.norm_window is not None:
            return self.norm_window
        return self.region.norm_bounds()


def _query_indices(table: PrimeTable, query: ConstraintQuery) -> np.ndarray:
    lo, hi = query.norm_bounds()
    if math.isinf(hi):
        raise CoverageError("query needs a finite outer bound")
    table.require(hi, "constrained count")
    sl = table.norm_slice(lo, hi)
    idx = np.arange(sl.start, sl.stop)
    if not query.region.is_full_circle:
        keep = sector_mask(table.re[sl], table.im[sl], query.region.theta_min,
                           query.region.theta_max, table.arg[sl])
        idx = idx[keep]
    return idx


def count_constrained_primes(table: PrimeTable, c, query: ConstraintQuery) -> int:
    """Number of table primes p in the query region with dist(pc, Z[i]) <= delta."""
    c = as_hp(c)
    idx = _query_indices(table, query)
    if idx.size == 0:
        return 0
    mask = within_threshold(table.re[idx], table.im[idx], c, query.delta, query.metric)
    return int(np.count_nonzero(mask))


def _sqrt_half_times(delta: Fraction) -> Fraction:
    with mp.workprec(200):
        v = mpmath.mpf(delta.numerator) / delta.denominator / mpmath.sqrt(2)
        return Fraction(mpmath.nstr(v, 50, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))


def relation_check_pi_star(table: PrimeTable, c, query: ConstraintQuery) -> bool:
    """pi_c(delta) >= pi*_c(delta/sqrt 2): the sup-ball of radius delta/sqrt 2 sits inside
    the Euclidean ball of radius delta."""
    pi_c = count_constrained_primes(table, c, ConstraintQuery(
        query.region, query.delta, "euclid", query.norm_window))
    pi_star = count_constrained_primes(table, c, ConstraintQuery(
        query.region, _sqrt_half_times(query.delta), "sup", query.norm_window))
    return pi_c >= pi_star


# ---------------------------------------------------------------------------
# lattice counting


def lattice_disc(z, include_zero: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Lattice points with norm <= z (origin excluded unless asked for)."""
    zf = as_fraction(z)
    if zf < 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    zi = math.floor(zf)
    r = math.isqrt(zi)
    xs = np.arange(-r, r + 1, dtype=np.int64)
    gx, gy = (a.ravel() for a in np.meshgrid(xs, xs, indexing="ij"))
    keep = gx * gx + gy * gy <= zi
    if not include_zero:
        keep &= (gx != 0) | (gy != 0)
    return gx[keep], gy[keep]


def sigma_count(c, z, delta1, delta2) -> int:
    """#{n : 0 < N(n) <= z, ||Im(nc)|| <= delta1, ||Re(nc)|| <= delta2}."""
    d1, d2 = as_fraction(delta1), as_fraction(delta2)
    if not (0 <= d1 <= _half() and 0 <= d2 <= _half()):
        raise ValueError("thresholds must lie in [0, 1/2]")
    gx, gy = lattice_disc(z)
    if gx.size == 0:
        return 0
    mask = within_threshold(gx, gy, c, d2, "sup", delta_im=d1)
    return int(np.count_nonzero(mask))


@dataclass(frozen=True)
class SpacingAudit:
    q: GaussInt
    a: GaussInt
    box_side: float
    min_pair_dist: float
    spacing_bound: float
    spacing_ok: bool
    zero_window_delta: float
    zero_window_z: float
    zero_window_count: int

    @property
    def zero_window_ok(self) -> bool:
        return self.zero_window_count == 0

    def row(self) -> dict:
        d = asdict(self)
        d["q"] = str(self.q)
        d["a"] = str(self.a)
        d["zero_window_ok"] = self.zero_window_ok
        return d


def spacing_audit(c, q, a=None, zero_window_factor: float = 0.999) -> SpacingAudit:
    """Check the spacing of the points nc modulo Z[i] given a convergent a/q of c.

    min_pair_dist is the least sup-distance ||n1 c - n2 c|| over distinct
    lattice points of one axis-aligned half-open box of side |q|/4, placed
    anywhere: coordinate differences of such pairs range over |dx|, |dy| <=
    floor(|q|/4), so the minimum is taken over that difference set.  It must be
    at least 1/(2 sqrt 2 |q|).  The zero window checks that no n with
    0 < N(n) <= |q|^2/8 has ||nc|| <= factor/(sqrt 8 |q|).
    """
    c = as_hp(c)
    q = GaussInt.coerce(q)
    a = verify_convergent(c, q, a)
    nq = q.norm()
    abs_q = math.sqrt(nq)
    k = math.isqrt(nq // 16)
    bound = 1 / (2 * math.sqrt(2) * abs_q)
    if k == 0:
        min_d = math.inf
    else:
        xs = np.arange(-k, k + 1, dtype=np.int64)
        dx, dy = (v.ravel() for v in np.meshgrid(xs, xs, indexing="ij"))
        nz = (dx != 0) | (dy != 0)
        dx, dy = dx[nz], dy[nz]
        fr, fi = frac_parts(dx, dy, c)
        d = np.maximum(np.abs(fr), np.abs(fi))
        j = int(np.argmin(d))
        pr, pi_ = _exact_frac_pair(int(dx[j]), int(dy[j]), c, 2 * c.prec)
        min_d = float(max(pr, pi_))
    delta = zero_window_factor / (math.sqrt(8) * abs_q)
    z = Fraction(nq, 8)
    count = sigma_count(c, z, delta, delta)
    return SpacingAudit(q, a, abs_q / 4, min_d, bound, min_d >= bound, delta, float(z), count)


# ---------------------------------------------------------------------------
# sieve counts


def min_prime_factor_norm(g) -> int | None:
    """Smallest norm of a Gaussian prime dividing g (None for units).

    A rational prime p | N(g) contributes a Gaussian prime of norm 2 (p = 2),
    p (p = 1 mod 4, one of the split pair divides g) or p^2 (p = 3 mod 4, inert).
    """
    g = GaussInt.coerce(g)
    if not g:
        raise ValueError("zero has no prime factorization")
    best = None
    for p in factorint(g.norm()):
        n = p * p if p % 4 == 3 else p
        if best is None or n < best:
            best = n
    return best


def sieve_count_S(elements: Iterable, z) -> int:
    """#{n in elements : no Gaussian prime of norm <= z divides n}."""
    zf = as_fraction(z)
    count = 0
    for g in elements:
        m = min_prime_factor_norm(g)
        if m is None or m > zf:
            count += 1
    return count


# ---------------------------------------------------------------------------
# equidistribution


@dataclass(frozen=True)
class Scale:
    q: GaussInt
    N: int
    M: int

    @property
    def radius_bound(self) -> int:
        """N in radius units: |p| <= M  <=>  N(p) <= N."""
        return self.M


@dataclass(frozen=True)
class ScaleSchedule:
    """Scales N_k = norm(q_k)^6 (= |q_k|^12) from successive Hurwitz denominators."""

    c: ComplexHP
    scales: tuple[Scale, ...]

    def __len__(self) -> int:
        return len(self.scales)

    def __getitem__(self, k: int) -> Scale:
        return self.scales[k]


def build_schedule(c, max_N: int, max_terms: int = 64) -> ScaleSchedule:
    """Scales with N_k <= max_N (plus none beyond); q_k strictly increasing in norm."""
    c = as_hp(c)
    # norm(q)^6 <= max_N  <=>  norm(q) <= max_N^(1/6)
    limit = 1
    while (limit + 1) ** 6 <= max_N:
        limit += 1
    h = hurwitz_expansion(c, max_terms=max_terms, min_q_norm=limit + 1)
    scales: list[Scale] = []
    last = 0
    for q in h.denominators:
        nq = q.norm()
        if nq <= last or nq ** 6 > max_N:
            continue
        scales.append(Scale(q, nq ** 6, nq ** 3))
        last = nq
    return ScaleSchedule(c, tuple(scales))


@dataclass
class EquidReport:
    observed: int
    baseline: int
    predicted: float
    ratio: float | None
    delta: float
    x1: float
    x2: float
    theta_min: float
    theta_max: float
    admissible: bool
    rational_constant: bool
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    def to_csv_row(self) -> str:
        d = self.as_dict()
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(d), lineterminator="\n")
        w.writerow({k: ("" if v is None else v) for k, v in d.items()})
        return buf.getvalue()


def equid_window(table: PrimeTable, c, x1, x2, delta, region: SectorAnnulus = FULL_CIRCLE,
                 epsilon: float = 0.01) -> EquidReport:
    """S_c(x1, x2; delta) against 4 delta^2 S(x1, x2) in the sector of ``region``."""
    c = as_hp(c)
    d = as_fraction(delta)
    if not (0 < d <= _half()):
        raise ValueError("delta must lie in (0, 1/2]")
    table.require(x2, "equidistribution window")
    if x1 >= x2:
        observed = baseline = 0
    else:
        q = ConstraintQuery(region, d, "sup", (max(1, x1), x2))
        idx = _query_indices(table, q)
        baseline = int(idx.size)
        observed = 0
        if idx.size:
            observed = int(np.count_nonzero(within_threshold(table.re[idx], table.im[idx], c, d)))
    predicted = float(4 * d * d) * baseline
    ratio = observed / predicted if predicted > 0 else None
    admissible = x2 > 1 and float(d) >= x2 ** (-1 / 24 + epsilon)
    return EquidReport(observed, baseline, predicted, ratio, float(d), float(x1), float(x2),
                       region.theta_min, region.theta_max, admissible, c.is_rational)


def equid_report(table: PrimeTable, schedule: ScaleSchedule, k: int, x, delta,
                 region: SectorAnnulus = FULL_CIRCLE, epsilon: float = 0.01) -> EquidReport:
    """Equidistribution at scale N_k over the norm window x < N(p) <= N_k."""
    scale = schedule[k]
    if x > scale.N:
        raise ValueError(f"need x <= N_k = {scale.N}")
    rep = equid_window(table, schedule.c, x, scale.N, delta, region, epsilon)
    rep.extra.update({"k": k, "q": str(scale.q), "N_k": scale.N, "M_k": scale.M})
    return rep


def find_approx_primes(table: PrimeTable, c, exponent) -> list[tuple[GaussInt, float]]:
    """Primes p of the table with ||pc|| <= |p|^exponent (sup metric), sorted by norm."""
    c = as_hp(c)
    e = as_fraction(exponent)
    if len(table) == 0:
        return []
    fr, fi = frac_parts(table.re, table.im, c)
    dist = np.maximum(np.abs(fr), np.abs(fi))
    thr = table.norm.astype(np.float64) ** (float(e) / 2)
    mask = dist <= thr
    for k in np.flatnonzero(np.abs(dist - thr) < GUARD):
        a, b = int(table.re[k]), int(table.im[k])
        n = int(table.norm[k])
        with mp.workprec(2 * c.prec):
            dr, di = _exact_frac_pair(a, b, c, 2 * c.prec)
            t = mpmath.mpf(n) ** (mpmath.mpf(e.numerator) / e.denominator / 2)
            mask[k] = max(mpmath.mpf(dr), mpmath.mpf(di)) <= t
    idx = np.flatnonzero(mask)
    return [(GaussInt(int(table.re[k]), int(table.im[k])), float(dist[k])) for k in idx]
