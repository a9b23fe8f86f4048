"""Gaussian primes up to a norm bound, and sector/annulus/disc queries on them."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
from mpmath import mp

from .gint import GUARD, ComplexHP, GaussInt, as_fraction, as_hp, two_squares

__all__ = [
    "PrimeTable",
    "SectorAnnulus",
    "CoverageError",
    "ResourceLimitError",
    "CacheFormatError",
    "MAX_NORM_BUDGET",
    "FULL_CIRCLE",
    "rational_prime_sieve",
    "build_prime_table",
    "count_primes_sector",
    "kubilius_main_term",
    "primes_in_disc",
    "sector_mask",
    "gaussian_prime_mask",
    "save_table",
    "load_table",
]

MAX_NORM_BUDGET = 200_000_000
CACHE_MAGIC = b"GPTB"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIqq")


class CoverageError(ValueError):
    """A query reaches beyond the norm bound of the prime table."""


class ResourceLimitError(MemoryError):
    """Requested table exceeds the configured memory budget."""


class CacheFormatError(ValueError):
    """Cache file has a bad magic number, an unknown version or is truncated."""


# ---------------------------------------------------------------------------
# sectors


@dataclass(frozen=True)
class SectorAnnulus:
    """r_min < |z| <= r_max and theta_min < arg z <= theta_max (arg taken mod 2*pi)."""

    r_min: float = 0.0
    r_max: float = math.inf
    theta_min: float = -math.pi
    theta_max: float = math.pi

    def __post_init__(self) -> None:
        if not (0 <= self.r_min < self.r_max):
            raise ValueError(f"need 0 <= r_min < r_max, got {self.r_min}, {self.r_max}")
        if not (self.theta_min < self.theta_max <= self.theta_min + 2 * math.pi):
            raise ValueError(
                f"need theta_min < theta_max <= theta_min + 2*pi, got {self.theta_min}, {self.theta_max}")

    @property
    def width(self) -> float:
        return self.theta_max - self.theta_min

    @property
    def is_full_circle(self) -> bool:
        return self.width >= 2 * math.pi

    def norm_bounds(self) -> tuple[int, float]:
        """Integer norm window (lo, hi]: lo exclusive, hi inclusive (hi may be inf)."""
        lo = math.floor(as_fraction(self.r_min) ** 2)
        if math.isinf(self.r_max):
            return lo, math.inf
        return lo, math.floor(as_fraction(self.r_max) ** 2)

    def with_radii(self, r_min: float, r_max: float) -> "SectorAnnulus":
        return SectorAnnulus(r_min, r_max, self.theta_min, self.theta_max)

    def rotated(self, angle: float) -> "SectorAnnulus":
        return SectorAnnulus(self.r_min, self.r_max, self.theta_min + angle, self.theta_max + angle)


FULL_CIRCLE = SectorAnnulus()


def _eighth_turn_index(a: int, b: int) -> int | None:
    """k with arg(a+bi) = k*pi/4 exactly, k in (-4, 4]; None off the axes/diagonals."""
    if b == 0:
        return 0 if a > 0 else 4
    if a == 0:
        return 2 if b > 0 else -2
    if abs(a) == abs(b):
        return {(1, 1): 1, (-1, 1): 3, (-1, -1): -3, (1, -1): -1}[(a > 0) - (a < 0), (b > 0) - (b < 0)]
    return None


def _snap_eighths(theta: float) -> Fraction | None:
    """theta as an exact multiple of pi/4 when it is one up to float rounding."""
    k = theta / (math.pi / 4)
    r = round(k)
    if abs(k - r) < 1e-12:
        return Fraction(r)
    return None


def _member_exact(a: int, b: int, lo: float, hi: float) -> bool:
    k = _eighth_turn_index(a, b)
    klo, khi = _snap_eighths(lo), _snap_eighths(hi)
    if k is not None and klo is not None and khi is not None:
        t = Fraction(k)
        while t <= klo:
            t += 8
        while t > klo + 8:
            t -= 8
        return t <= khi
    with mp.workprec(256):
        quarter = mpmath.pi / 4
        t = k * quarter if k is not None else mpmath.atan2(b, a)
        vlo = klo * quarter if klo is not None else mpmath.mpf(lo)
        vhi = khi * quarter if khi is not None else mpmath.mpf(hi)
        two_pi = 2 * mpmath.pi
        t = t + two_pi * (mpmath.floor((vlo - t) / two_pi) + 1)
        return t <= vhi


def sector_mask(re: np.ndarray, im: np.ndarray, theta_min: float, theta_max: float,
                arg: np.ndarray | None = None) -> np.ndarray:
    """Mask of nonzero lattice points with theta_min < arg <= theta_max (mod 2*pi).

    Float arguments decide everything except points within GUARD of a
    boundary, which are re-decided exactly: axis and diagonal points against
    boundaries that are multiples of pi/4 in exact eighth-turns, everything
    else at 256 bits.
    """
    if not (theta_min < theta_max <= theta_min + 2 * math.pi):
        raise ValueError("need theta_min < theta_max <= theta_min + 2*pi")
    re = np.asarray(re, dtype=np.int64)
    im = np.asarray(im, dtype=np.int64)
    if arg is None:
        arg = np.arctan2(im.astype(np.float64), re.astype(np.float64))
    two_pi = 2 * math.pi
    shift = two_pi * (np.floor((theta_min - arg) / two_pi) + 1)
    t = arg + shift
    mask = (t > theta_min) & (t <= theta_max)
    d_lo = np.abs(np.remainder(arg - theta_min + math.pi, two_pi) - math.pi)
    d_hi = np.abs(np.remainder(arg - theta_max + math.pi, two_pi) - math.pi)
    near = (d_lo < GUARD) | (d_hi < GUARD)
    for k in np.flatnonzero(near):
        mask[k] = _member_exact(int(re[k]), int(im[k]), theta_min, theta_max)
    return mask


# ---------------------------------------------------------------------------
# prime table


def rational_prime_sieve(limit: int) -> np.ndarray:
    """Boolean array is_prime[0..limit]."""
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return is_prime


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All Gaussian primes with 0 < norm <= max_norm, sorted by (norm, arg).

    ``is_prime`` is the rational sieve up to max_norm; it answers primality of
    any lattice point inside the covered disc without scanning the table.
    """

    max_norm: int
    re: np.ndarray
    im: np.ndarray
    norm: np.ndarray
    arg: np.ndarray
    is_prime: np.ndarray

    def __len__(self) -> int:
        return int(self.re.size)

    def primes(self) -> list[GaussInt]:
        return [GaussInt(int(a), int(b)) for a, b in zip(self.re, self.im)]

    def norm_slice(self, lo: float, hi: float) -> slice:
        """Index range of entries with lo < norm <= hi."""
        start = int(np.searchsorted(self.norm, math.floor(lo), side="right")) if lo >= 0 else 0
        stop = len(self) if math.isinf(hi) else int(np.searchsorted(self.norm, math.floor(hi), side="right"))
        return slice(start, max(start, stop))

    def require(self, norm_bound, what: str = "query") -> None:
        if norm_bound > self.max_norm:
            raise CoverageError(
                f"{what} needs primes up to norm {float(norm_bound):.6g}, "
                f"table covers norm <= {self.max_norm}")

    def contains(self, g) -> bool:
        g = GaussInt.coerce(g)
        self.require(g.norm(), "primality test")
        return bool(gaussian_prime_mask(self.is_prime, np.array([g.re]), np.array([g.im]))[0])


def gaussian_prime_mask(is_prime: np.ndarray, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorized Gaussian primality from a rational sieve covering all norms involved."""
    re = np.asarray(re, dtype=np.int64)
    im = np.asarray(im, dtype=np.int64)
    norm = re * re + im * im
    out = np.zeros(re.shape, dtype=bool)
    axis = (re == 0) | (im == 0)
    off = ~axis
    out[off] = is_prime[norm[off]]
    m = np.abs(re[axis] + im[axis])
    out[axis] = (m % 4 == 3) & is_prime[m]
    return out


def _assemble(max_norm: int, split_xy: np.ndarray, inert: np.ndarray, is_prime: np.ndarray) -> PrimeTable:
    x, y = split_xy[:, 0], split_xy[:, 1]
    res = [np.array([1, -1, -1, 1], dtype=np.int64)]
    ims = [np.array([1, 1, -1, -1], dtype=np.int64)]
    # eight entries per split prime: four associates of x+iy and of x-iy
    for sx, sy in ((x, y), (x, -y)):
        res += [sx, -sy, -sx, sy]
        ims += [sy, sx, -sy, -sx]
    z = np.zeros_like(inert)
    res += [inert, z, -inert, z]
    ims += [z, inert, z, -inert]
    re = np.concatenate(res)
    im = np.concatenate(ims)
    if max_norm < 2:
        re, im = re[:0], im[:0]
    norm = re * re + im * im
    keep = norm <= max_norm
    re, im, norm = re[keep], im[keep], norm[keep]
    arg = np.arctan2(im.astype(np.float64), re.astype(np.float64))
    order = np.lexsort((arg, norm))
    arrays = [a[order] for a in (re, im, norm, arg)]
    for a in arrays + [is_prime]:
        a.setflags(write=False)
    return PrimeTable(int(max_norm), *arrays, is_prime)


def build_prime_table(max_norm: int, budget: int = MAX_NORM_BUDGET) -> PrimeTable:
    """Sieve the rational primes up to ``max_norm`` and lift them to Z[i].

    Split primes p = 1 (mod 4) are decomposed as x^2 + y^2, the ramified prime
    contributes 1+i, inert q = 3 (mod 4) contribute q itself when q^2 <= max_norm.
    """
    max_norm = int(max_norm)
    if max_norm < 2:
        raise ValueError("max_norm must be at least 2")
    if max_norm > budget:
        raise ResourceLimitError(f"max_norm {max_norm} exceeds the memory budget of {budget}")
    is_prime = rational_prime_sieve(max_norm)
    ps = np.flatnonzero(is_prime)
    split = ps[ps % 4 == 1]
    xy = np.array([two_squares(int(p)) for p in split], dtype=np.int64).reshape(-1, 2)
    inert = ps[(ps % 4 == 3) & (ps <= math.isqrt(max_norm))].astype(np.int64)
    return _assemble(max_norm, xy, inert, is_prime)


# ---------------------------------------------------------------------------
# queries


def kubilius_main_term(region: SectorAnnulus) -> float:
    """(2/pi) * width * (r_max^2 - r_min^2) / log(r_max^2)."""
    r2 = region.r_max ** 2
    return 2 / math.pi * region.width * (r2 - region.r_min ** 2) / math.log(r2)


def _region_indices(table: PrimeTable, region: SectorAnnulus) -> np.ndarray:
    lo, hi = region.norm_bounds()
    table.require(hi, "sector query")
    sl = table.norm_slice(lo, hi)
    idx = np.arange(sl.start, sl.stop)
    if region.is_full_circle:
        return idx
    mask = sector_mask(table.re[sl], table.im[sl], region.theta_min, region.theta_max, table.arg[sl])
    return idx[mask]


def count_primes_sector(table: PrimeTable, region: SectorAnnulus) -> tuple[int, float]:
    """Exact prime count in the sector annulus and the Kubilius main term."""
    if math.isinf(region.r_max):
        raise CoverageError("sector query needs a finite outer radius")
    observed = int(_region_indices(table, region).size)
    return observed, kubilius_main_term(region)


def primes_in_disc(table: PrimeTable, center, radius) -> list[GaussInt]:
    """Table primes g with |g - center| <= radius, by scanning nearby lattice points."""
    center = as_hp(center)
    r = as_fraction(radius)
    if r < 0:
        raise ValueError("radius must be non-negative")
    reach = abs(center) + float(r)
    table.require(reach * reach, "disc query")
    cx, cy = center.real, center.imag
    fr = float(r)
    xs = np.arange(math.floor(cx - fr) - 1, math.ceil(cx + fr) + 2, dtype=np.int64)
    ys = np.arange(math.floor(cy - fr) - 1, math.ceil(cy + fr) + 2, dtype=np.int64)
    gx, gy = (a.ravel() for a in np.meshgrid(xs, ys, indexing="ij"))
    keep = (gx != 0) | (gy != 0)
    gx, gy = gx[keep], gy[keep]
    d2 = _disc_dist2(gx, gy, center)
    r2 = float(r * r)
    inside = d2 <= r2
    for k in np.flatnonzero(np.abs(d2 - r2) < GUARD):
        inside[k] = _disc_exact(int(gx[k]), int(gy[k]), center, r)
    gx, gy = gx[inside], gy[inside]
    prime = gaussian_prime_mask(table.is_prime, gx, gy)
    out = [GaussInt(int(a), int(b)) for a, b in zip(gx[prime], gy[prime])]
    out.sort(key=lambda g: (g.norm(), math.atan2(g.im, g.re)))
    return out


def _disc_dist2(gx: np.ndarray, gy: np.ndarray, center: ComplexHP) -> np.ndarray:
    with mp.workprec(center.prec):
        v = center.value
        bx, by = int(mpmath.floor(v.real)), int(mpmath.floor(v.imag))
        ox, oy = float(v.real - bx), float(v.imag - by)
    dx = (gx - bx).astype(np.float64) - ox
    dy = (gy - by).astype(np.float64) - oy
    return dx * dx + dy * dy


def _disc_exact(x: int, y: int, center: ComplexHP, r: Fraction) -> bool:
    if center.exact is not None:
        cr, ci = center.exact
        return (x - cr) ** 2 + (y - ci) ** 2 <= r * r
    with mp.workprec(2 * center.prec):
        v = center.at(2 * center.prec)
        rr = mpmath.mpf(r.numerator) / r.denominator
        return (x - v.real) ** 2 + (y - v.imag) ** 2 <= rr * rr


# ---------------------------------------------------------------------------
# cache


def save_table(table: PrimeTable, path) -> None:
    """Flat little-endian file: magic, version, max_norm, count, then int64 (re, im) pairs."""
    path = Path(path)
    pairs = np.empty((len(table), 2), dtype="<i8")
    pairs[:, 0] = table.re
    pairs[:, 1] = table.im
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.max_norm, len(table)))
        fh.write(pairs.tobytes())


def load_table(path) -> PrimeTable:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, max_norm, count = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"{path}: cache version {version}, this build reads version {CACHE_VERSION}")
    body = data[_HEADER.size:]
    if len(body) != 16 * count:
        raise CacheFormatError(f"{path}: expected {count} entries, found {len(body) // 16}")
    pairs = np.frombuffer(body, dtype="<i8").reshape(-1, 2).astype(np.int64)
    re, im = pairs[:, 0].copy(), pairs[:, 1].copy()
    norm = re * re + im * im
    arg = np.arctan2(im.astype(np.float64), re.astype(np.float64))
    is_prime = rational_prime_sieve(int(max_norm))
    for a in (re, im, norm, arg, is_prime):
        a.setflags(write=False)
    return PrimeTable(int(max_norm), re, im, norm, arg, is_prime)
