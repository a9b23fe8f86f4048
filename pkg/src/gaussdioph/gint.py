"""Gaussian-integer arithmetic, lattice distances and Hurwitz continued fractions.

Everything here is a pure function of immutable values.  ``GaussInt`` is the
exact lattice atom; ``ComplexHP`` carries a complex constant that can be
re-evaluated at any binary precision (and exactly, when it is rational).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np
from mpmath import mp
from sympy import factorint, isprime

__all__ = [
    "GaussInt",
    "ComplexHP",
    "HurwitzExpansion",
    "PrecisionExhaustedError",
    "HurwitzInvariantError",
    "DEFAULT_PREC",
    "PRESETS",
    "ONE",
    "ZERO",
    "I",
    "UNITS",
    "as_hp",
    "as_fraction",
    "round_half_up",
    "is_gaussian_prime",
    "gaussian_gcd",
    "gaussian_factor",
    "omega",
    "two_squares",
    "nearest_and_dist",
    "frac_parts",
    "within_threshold",
    "hurwitz_expansion",
    "evaluate_continued_fraction",
    "verify_convergent",
]

DEFAULT_PREC = 256
_INT64_MIN = -(1 << 63)
_INT64_MAX = (1 << 63) - 1
# fractional parts are computed in float64 from a three-way split of the
# coefficient; products stay exact while |n| < 2**26
_FRAC_INT_LIMIT = 1 << 26
# float fractional parts are accurate to ~1e-15; anything closer than this to
# a threshold is re-decided in extended precision
GUARD = 1e-10


class PrecisionExhaustedError(ArithmeticError):
    """Working precision is too small for the requested continued-fraction depth."""


class HurwitzInvariantError(ArithmeticError):
    """A convergent failed |c - p/q| <= |q|^-2."""


# ---------------------------------------------------------------------------
# Gaussian integers


def round_half_up(num: int, den: int = 1) -> int:
    """Nearest integer to num/den, ties rounded toward +infinity."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return (2 * num + den) // (2 * den)


def _check64(v: int) -> int:
    if not (_INT64_MIN <= v <= _INT64_MAX):
        raise OverflowError(f"Gaussian integer component {v} exceeds 64 bits")
    return v


@dataclass(frozen=True, slots=True)
class GaussInt:
    """a + bi with 64-bit checked components."""

    re: int
    im: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _check64(int(self.re)))
        object.__setattr__(self, "im", _check64(int(self.im)))

    @classmethod
    def coerce(cls, value) -> "GaussInt":
        if isinstance(value, GaussInt):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(int(value), 0)
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise ValueError(f"{value!r} is not a lattice point")
            return cls(int(value.real), int(value.imag))
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian integer")

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __add__(self, other) -> "GaussInt":
        o = GaussInt.coerce(other)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussInt":
        o = GaussInt.coerce(other)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussInt":
        return GaussInt.coerce(other) - self

    def __mul__(self, other) -> "GaussInt":
        if isinstance(other, ComplexHP):
            return NotImplemented
        o = GaussInt.coerce(other)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["GaussInt", "GaussInt"]:
        """Nearest-lattice-point quotient; the remainder has norm <= norm(other)/2."""
        b = GaussInt.coerce(other)
        n = b.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * b.conj()
        q = GaussInt(round_half_up(num.re, n), round_half_up(num.im, n))
        return q, self - q * b

    def __floordiv__(self, other) -> "GaussInt":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "GaussInt":
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        o = GaussInt.coerce(other)
        n = self.norm()
        if n == 0:
            return not o
        num = o * self.conj()
        return num.re % n == 0 and num.im % n == 0

    def exact_div(self, other) -> "GaussInt":
        b = GaussInt.coerce(other)
        q, r = divmod(self, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {self}")
        return q

    def canonical(self) -> "GaussInt":
        """Associate with re > 0 and im >= 0 (zero maps to zero)."""
        g = self
        if not g:
            return g
        for _ in range(4):
            if g.re > 0 and g.im >= 0:
                return g
            g = GaussInt(-g.im, g.re)
        raise AssertionError("unreachable")

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return self.to_complex()

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))


def is_gaussian_prime(g) -> bool:
    g = GaussInt.coerce(g)
    if not g:
        raise ValueError("zero is not a valid input")
    if g.re == 0 or g.im == 0:
        m = abs(g.re + g.im)
        return m % 4 == 3 and bool(isprime(m))
    return bool(isprime(g.norm()))


def gaussian_gcd(a, b) -> GaussInt:
    a, b = GaussInt.coerce(a), GaussInt.coerce(b)
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.canonical()


def two_squares(p: int) -> tuple[int, int]:
    """(x, y) with x^2 + y^2 = p for p = 2 or a prime p = 1 (mod 4).

    Uses a square root of -1 mod p followed by the truncated Euclidean
    algorithm (Cornacchia / Hermite-Serret).
    """
    if p == 2:
        return 1, 1
    if p % 4 != 1:
        raise ValueError(f"{p} is not a sum of two squares of a prime shape")
    e = (p - 1) // 4
    t = 0
    for base in range(2, p):
        t = pow(base, e, p)
        if t * t % p == p - 1:
            break
    else:  # pragma: no cover - only reachable for composite input
        raise ValueError(f"{p} is not prime")
    a, b = p, t
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    y2 = p - b * b
    y = math.isqrt(y2)
    if y * y != y2:
        raise ValueError(f"{p} is not prime")
    return b, y


def gaussian_factor(g) -> list[tuple[GaussInt, int]]:
    """Prime factorization up to a unit, primes in canonical (first-quadrant) form.

    The norm is factored over the rational primes and each prime is split:
    2 -> (1+i)^2 up to a unit, q = 3 mod 4 stays inert, p = 1 mod 4 splits into
    a conjugate pair whose multiplicities are found by trial division.
    """
    g = GaussInt.coerce(g)
    if not g:
        raise ValueError("cannot factor zero")
    out: list[tuple[GaussInt, int]] = []
    rest = g
    for p, e in sorted(factorint(g.norm()).items()):
        if p == 2:
            out.append((GaussInt(1, 1), e))
            for _ in range(e):
                rest = rest.exact_div(GaussInt(1, 1))
        elif p % 4 == 3:
            out.append((GaussInt(p, 0), e // 2))
            for _ in range(e // 2):
                rest = rest.exact_div(p)
        else:
            x, y = two_squares(p)
            for pi in (GaussInt(x, y).canonical(), GaussInt(x, -y).canonical()):
                k = 0
                while pi.divides(rest):
                    rest = rest.exact_div(pi)
                    k += 1
                if k:
                    out.append((pi, k))
    if not rest.is_unit():  # pragma: no cover - guards factorint misuse
        raise ArithmeticError(f"incomplete factorization of {g}")
    return out


def omega(g) -> int:
    """Number of Gaussian prime factors counted with multiplicity (units ignored)."""
    g = GaussInt.coerce(g)
    if not g:
        raise ValueError("omega(0) is undefined")
    total = 0
    for p, e in factorint(g.norm()).items():
        total += e // 2 if p % 4 == 3 else e
    return total


# ---------------------------------------------------------------------------
# Extended-precision complex constants


def as_fraction(x) -> Fraction:
    """Exact rational value of an int, float, Fraction or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def _fraction_to_mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _preset_table() -> dict[str, Callable[[], object]]:
    return {
        "i": lambda: mpmath.mpc(0, 1),
        "sqrt2i": lambda: mpmath.mpc(0, mpmath.sqrt(2)),
        "sqrt2": lambda: mpmath.mpc(mpmath.sqrt(2), 0),
        "sqrt3i": lambda: mpmath.mpc(0, mpmath.sqrt(3)),
        "golden": lambda: mpmath.mpc((mpmath.sqrt(5) - 1) / 2, 0),
        "cbrt2": lambda: mpmath.mpc(mpmath.cbrt(2), 0),
        "pi": lambda: mpmath.mpc(mpmath.pi, 0),
        "e": lambda: mpmath.mpc(mpmath.e, 0),
        "mix_sqrt": lambda: mpmath.mpc(mpmath.sqrt(2) - 1, mpmath.sqrt(3) - 1),
        "mix_e_pi": lambda: mpmath.mpc(mpmath.e - 2, mpmath.pi - 3),
        "mix_cbrt": lambda: mpmath.mpc(mpmath.cbrt(2) - 1, mpmath.sqrt(5) - 2),
        "mix_golden": lambda: mpmath.mpc((mpmath.sqrt(5) - 1) / 2, (mpmath.sqrt(7) - 2)),
    }


PRESETS = tuple(_preset_table())

_COMPLEX_RE = re.compile(
    r"""^\s*
    (?P<re>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?
    \s*
    (?:(?P<sign>[+-])?\s*(?P<im>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?P<unit>[ij]))?
    \s*$""",
    re.VERBOSE,
)


class ComplexHP:
    """A complex constant evaluated at a configurable binary precision.

    Rational constants keep their exact value (``exact``) so that ties at a
    threshold can be decided without rounding; irrational ones keep a
    recipe that recomputes them at any precision.
    """

    __slots__ = ("prec", "exact", "label", "_fn", "_cache")

    def __init__(self, fn: Callable[[], object], prec: int = DEFAULT_PREC,
                 exact: tuple[Fraction, Fraction] | None = None, label: str | None = None):
        if prec < 53:
            raise ValueError("precision must be at least 53 bits")
        self.prec = int(prec)
        self.exact = exact
        self.label = label
        self._fn = fn
        self._cache: dict[int, object] = {}

    # construction ---------------------------------------------------------
    @classmethod
    def from_fractions(cls, re_part, im_part=0, prec: int = DEFAULT_PREC, label=None) -> "ComplexHP":
        fr, fi = as_fraction(re_part), as_fraction(im_part)
        return cls(lambda: mpmath.mpc(_fraction_to_mpf(fr), _fraction_to_mpf(fi)),
                   prec=prec, exact=(fr, fi), label=label)

    @classmethod
    def from_mpc(cls, value, prec: int = DEFAULT_PREC, label=None) -> "ComplexHP":
        v = mpmath.mpc(value)
        return cls(lambda: v, prec=prec, label=label)

    @classmethod
    def preset(cls, name: str, prec: int = DEFAULT_PREC) -> "ComplexHP":
        table = _preset_table()
        if name not in table:
            raise KeyError(f"unknown preset {name!r}; known: {', '.join(table)}")
        if name == "i":
            return cls.from_fractions(0, 1, prec=prec, label=name)
        return cls(table[name], prec=prec, label=name)

    @classmethod
    def parse(cls, text: str, prec: int = DEFAULT_PREC) -> "ComplexHP":
        """Decimal strings such as ``0.31+0.17i``, ``-2i``, ``1.5`` or a preset name."""
        s = text.strip()
        if s in PRESETS:
            return cls.preset(s, prec)
        m = _COMPLEX_RE.match(s)
        if not m or (m.group("re") is None and m.group("unit") is None):
            raise ValueError(f"cannot parse complex constant {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
        im_part = Fraction(0)
        if m.group("unit") and m.group("re") and not m.group("sign") and not m.group("im"):
            # a pure imaginary such as "-2i": the leading number is the coefficient
            return cls.from_fractions(0, re_part, prec=prec, label=s)
        if m.group("unit"):
            if m.group("re") and not m.group("sign"):
                raise ValueError(f"cannot parse complex constant {text!r}")
            im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("sign") == "-":
                im_part = -im_part
        return cls.from_fractions(re_part, im_part, prec=prec, label=s)

    # evaluation -----------------------------------------------------------
    def at(self, prec: int | None = None):
        """mpc value at ``prec`` bits; must be called where mp.prec >= prec to keep digits."""
        prec = self.prec if prec is None else int(prec)
        v = self._cache.get(prec)
        if v is None:
            with mp.workprec(prec):
                v = +mpmath.mpc(self._fn())
            self._cache[prec] = v
        return v

    @property
    def value(self):
        return self.at(self.prec)

    @property
    def is_rational(self) -> bool:
        return self.exact is not None

    @property
    def real(self) -> float:
        return float(self.value.real)

    @property
    def imag(self) -> float:
        return float(self.value.imag)

    def __complex__(self) -> complex:
        return complex(self.real, self.imag)

    def __abs__(self) -> float:
        with mp.workprec(self.prec):
            return float(abs(self.value))

    def with_prec(self, prec: int) -> "ComplexHP":
        return ComplexHP(self._fn, prec=prec, exact=self.exact, label=self.label)

    def decimal_strings(self, digits: int | None = None) -> tuple[str, str]:
        if digits is None:
            digits = max(17, int(self.prec * 0.30103))
        with mp.workprec(self.prec):
            v = self.value
            return (mpmath.nstr(v.real, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf),
                    mpmath.nstr(v.imag, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))

    def __repr__(self) -> str:
        if self.label:
            return f"ComplexHP({self.label!r}, prec={self.prec})"
        return f"ComplexHP({complex(self)!r}, prec={self.prec})"

    # arithmetic -----------------------------------------------------------
    def _binary(self, other, op) -> "ComplexHP":
        o = as_hp(other, self.prec)
        prec = max(self.prec, o.prec)
        exact = None
        if self.exact is not None and o.exact is not None:
            exact = op(_GaussRational(*self.exact), _GaussRational(*o.exact)).parts()
        a, b = self, o

        def fn():
            return op(a.at(mp.prec), b.at(mp.prec))

        return ComplexHP(fn, prec=prec, exact=exact)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return as_hp(other, self.prec) - self

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return as_hp(other, self.prec) / self

    def __neg__(self):
        return self * -1


@dataclass(frozen=True)
class _GaussRational:
    re: Fraction
    im: Fraction

    def parts(self) -> tuple[Fraction, Fraction]:
        return self.re, self.im

    def __add__(self, o):
        return _GaussRational(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _GaussRational(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return self * _GaussRational(o.re / n, -o.im / n)


def as_hp(x, prec: int = DEFAULT_PREC) -> ComplexHP:
    """Coerce constants, lattice points, numbers and strings to ComplexHP."""
    if isinstance(x, ComplexHP):
        return x
    if isinstance(x, GaussInt):
        return ComplexHP.from_fractions(x.re, x.im, prec=prec)
    if isinstance(x, str):
        return ComplexHP.parse(x, prec)
    if isinstance(x, (int, np.integer, float, np.floating, Fraction)):
        return ComplexHP.from_fractions(x, 0, prec=prec)
    if isinstance(x, complex):
        return ComplexHP.from_fractions(x.real, x.imag, prec=prec)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return ComplexHP.from_fractions(x[0], x[1], prec=prec)
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return ComplexHP.from_mpc(x, prec=prec)
    raise TypeError(f"cannot interpret {x!r} as a complex constant")


# ---------------------------------------------------------------------------
# Distances to the lattice


def nearest_and_dist(z) -> tuple[GaussInt, float, float]:
    """Component-wise nearest lattice point, sup distance and Euclidean distance.

    Ties are rounded toward +infinity in each component.  The Euclidean
    nearest point of Z[i] is the component-wise nearest one, so the Euclidean
    distance is the hypotenuse of the two component distances.
    """
    z = as_hp(z)
    if z.exact is not None:
        fr, fi = z.exact
        nr = math.floor(fr + Fraction(1, 2))
        ni = math.floor(fi + Fraction(1, 2))
        dr, di = abs(fr - nr), abs(fi - ni)
        return GaussInt(nr, ni), float(max(dr, di)), math.sqrt(float(dr * dr + di * di))
    with mp.workprec(z.prec):
        v = z.value
        nr = int(mpmath.floor(v.real + mpmath.mpf(0.5)))
        ni = int(mpmath.floor(v.imag + mpmath.mpf(0.5)))
        dr, di = abs(v.real - nr), abs(v.imag - ni)
        return GaussInt(nr, ni), float(max(dr, di)), float(mpmath.sqrt(dr * dr + di * di))


def _split_frac(x) -> tuple[float, float, float]:
    """Three floats summing to frac(x): two 24-bit dyadic pieces and a remainder."""
    f = x - mpmath.floor(x)
    s1 = mpmath.floor(f * (1 << 24)) / (1 << 24)
    r = f - s1
    s2 = mpmath.floor(r * (1 << 48)) / (1 << 48)
    return float(s1), float(s2), float(r - s2)


def _frac_mul(n: np.ndarray, parts: tuple[float, float, float]) -> np.ndarray:
    t1 = n * parts[0]
    t1 -= np.floor(t1)
    t2 = n * parts[1]
    t2 -= np.floor(t2)
    return t1 + t2 + n * parts[2]


def _coerce_int_arrays(n_re, n_im) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(n_re, dtype=np.int64)
    b = np.asarray(n_im, dtype=np.int64)
    if a.size and (np.abs(a).max() >= _FRAC_INT_LIMIT or np.abs(b).max() >= _FRAC_INT_LIMIT):
        raise ValueError("lattice coordinates beyond 2**26 are outside the float kernel's range")
    return a, b


def frac_parts(n_re, n_im, kappa) -> tuple[np.ndarray, np.ndarray]:
    """Signed fractional parts of Re(n*kappa) and Im(n*kappa), in [-1/2, 1/2).

    Accurate to about 1e-15 absolute for |n| < 2**26; the coefficient is
    reduced modulo 1 in extended precision before conversion to float.
    """
    kappa = as_hp(kappa)
    a, b = _coerce_int_arrays(n_re, n_im)
    with mp.workprec(kappa.prec):
        v = kappa.value
        kr = _split_frac(v.real)
        ki = _split_frac(v.imag)
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    fr = _frac_mul(af, kr) - _frac_mul(bf, ki)
    fi = _frac_mul(af, ki) + _frac_mul(bf, kr)
    fr -= np.floor(fr + 0.5)
    fi -= np.floor(fi + 0.5)
    return fr, fi


def _exact_frac_pair(a: int, b: int, kappa: ComplexHP, prec: int):
    """(||Re(n kappa)||, ||Im(n kappa)||) exactly (Fraction) or at ``prec`` bits."""
    if kappa.exact is not None:
        kr, ki = kappa.exact
        xr = a * kr - b * ki
        xi = a * ki + b * kr
        half = Fraction(1, 2)
        return abs(xr - math.floor(xr + half)), abs(xi - math.floor(xi + half))
    with mp.workprec(prec):
        v = kappa.at(prec)
        xr = a * v.real - b * v.imag
        xi = a * v.imag + b * v.real
        return (abs(xr - mpmath.floor(xr + mpmath.mpf(0.5))),
                abs(xi - mpmath.floor(xi + mpmath.mpf(0.5))))


def _decide(a: int, b: int, kappa: ComplexHP, d_re: Fraction, d_im: Fraction, metric: str) -> bool:
    if kappa.exact is not None:
        dr, di = _exact_frac_pair(a, b, kappa, 0)
        if metric == "sup":
            return dr <= d_re and di <= d_im
        return dr * dr + di * di <= d_re * d_re
    verdict = False
    for prec in (kappa.prec, 2 * kappa.prec):
        with mp.workprec(prec):
            dr, di = _exact_frac_pair(a, b, kappa, prec)
            tol = mpmath.mpf(2) ** (-(prec - 40)) * (abs(a) + abs(b) + 1)
            if metric == "sup":
                gaps = (dr - _fraction_to_mpf(d_re), di - _fraction_to_mpf(d_im))
                verdict = gaps[0] <= 0 and gaps[1] <= 0
                if all(abs(g) > tol for g in gaps):
                    return verdict
            else:
                gap = dr * dr + di * di - _fraction_to_mpf(d_re) ** 2
                verdict = gap <= 0
                if abs(gap) > tol:
                    return verdict
    return verdict


def within_threshold(n_re, n_im, kappa, delta, metric: str = "sup", delta_im=None) -> np.ndarray:
    """Mask of lattice points n with n*kappa within ``delta`` of Z[i].

    ``metric="sup"`` tests ||Re(n kappa)|| <= delta and ||Im(n kappa)|| <=
    delta_im (default: delta); ``metric="euclid"`` tests the Euclidean
    distance.  Points whose float distance lies within GUARD of a threshold are
    re-decided exactly (rational kappa) or at the constant's precision, then at
    double that precision.
    """
    if metric not in ("sup", "euclid"):
        raise ValueError(f"unknown metric {metric!r}")
    kappa = as_hp(kappa)
    d_re = as_fraction(delta)
    d_im = d_re if delta_im is None else as_fraction(delta_im)
    a, b = _coerce_int_arrays(n_re, n_im)
    fr, fi = frac_parts(a, b, kappa)
    dr, di = np.abs(fr), np.abs(fi)
    fdr, fdi = float(d_re), float(d_im)
    if metric == "sup":
        mask = (dr <= fdr) & (di <= fdi)
        near = (np.abs(dr - fdr) < GUARD) | (np.abs(di - fdi) < GUARD)
    else:
        e2 = dr * dr + di * di
        mask = e2 <= fdr * fdr
        near = np.abs(e2 - fdr * fdr) < GUARD
    for k in np.flatnonzero(near):
        mask[k] = _decide(int(a[k]), int(b[k]), kappa, d_re, d_im, metric)
    return mask


# ---------------------------------------------------------------------------
# Hurwitz continued fractions


@dataclass(frozen=True)
class HurwitzExpansion:
    """Partial quotients a_n and convergents p_n/q_n of a complex constant.

    ``tail`` is the complete quotient after the last stored partial quotient
    (None when the expansion terminated), so that the quotient list plus the
    tail reproduces the constant to working precision.
    """

    constant: ComplexHP
    quotients: tuple[GaussInt, ...]
    convergents: tuple[tuple[GaussInt, GaussInt], ...]
    terminated: bool
    tail: object = None

    @property
    def denominators(self) -> list[GaussInt]:
        return [q for _, q in self.convergents]

    def to_json(self) -> str:
        re_s, im_s = self.constant.decimal_strings()
        doc = {
            "constant": [re_s, im_s],
            "precision": self.constant.prec,
            "quotients": [[a.re, a.im] for a in self.quotients],
            "convergents": [[[p.re, p.im], [q.re, q.im]] for p, q in self.convergents],
            "terminated": self.terminated,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "HurwitzExpansion":
        doc = json.loads(text)
        prec = int(doc.get("precision", DEFAULT_PREC))
        re_s, im_s = doc["constant"]
        with mp.workprec(prec):
            c = ComplexHP.from_mpc(mpmath.mpc(mpmath.mpf(re_s), mpmath.mpf(im_s)), prec=prec)
        return cls(
            constant=c,
            quotients=tuple(GaussInt(*a) for a in doc["quotients"]),
            convergents=tuple((GaussInt(*p), GaussInt(*q)) for p, q in doc["convergents"]),
            terminated=bool(doc["terminated"]),
        )


def _nearest_mp(z) -> GaussInt:
    half = mpmath.mpf(0.5)
    return GaussInt(int(mpmath.floor(z.real + half)), int(mpmath.floor(z.imag + half)))


def hurwitz_expansion(c, max_terms: int = 64, min_q_norm: int | None = None) -> HurwitzExpansion:
    """Hurwitz (nearest Gaussian integer) continued fraction of ``c``.

    a_n = nearest(z_n), z_{n+1} = 1/(z_n - a_n).  Expansion stops after
    ``max_terms`` quotients, once norm(q_n) >= ``min_q_norm``, or when the
    remainder vanishes to working precision (``terminated``: c is in Q(i) as
    far as the precision can tell).  A convergent whose denominator needs more
    than a quarter of the working precision raises PrecisionExhaustedError.
    """
    c = as_hp(c)
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    if c.exact is not None:
        return _hurwitz_exact(c, max_terms, min_q_norm)
    prec = c.prec
    quotients: list[GaussInt] = []
    convergents: list[tuple[GaussInt, GaussInt]] = []
    p2, p1 = ZERO, ONE
    q2, q1 = ONE, ZERO
    terminated = False
    with mp.workprec(prec):
        cval = c.value
        z = cval
        tiny = mpmath.mpf(2) ** (-(prec // 2))
        for _ in range(max_terms):
            a = _nearest_mp(z)
            p = a * p1 + p2
            q = a * q1 + q2
            if 4 * q.norm().bit_length() > prec:
                raise PrecisionExhaustedError(
                    f"convergent denominator with norm {q.norm()} needs more than "
                    f"{prec} bits; raise the constant's precision")
            gap = abs(cval - mpmath.mpc(p.re, p.im) / mpmath.mpc(q.re, q.im)) * q.norm()
            if gap > 1:
                raise HurwitzInvariantError(f"|c - p/q|*|q|^2 = {gap} for q = {q}")
            quotients.append(a)
            convergents.append((p, q))
            p2, p1, q2, q1 = p1, p, q1, q
            r = z - mpmath.mpc(a.re, a.im)
            if abs(r) <= tiny * max(1, abs(z)):
                terminated = True
                z = None
                break
            z = 1 / r
            if min_q_norm is not None and q.norm() >= min_q_norm:
                break
    return HurwitzExpansion(c, tuple(quotients), tuple(convergents), terminated, z)


def _hurwitz_exact(c: ComplexHP, max_terms: int, min_q_norm: int | None) -> HurwitzExpansion:
    half = Fraction(1, 2)
    cval = _GaussRational(*c.exact)
    z = cval
    quotients: list[GaussInt] = []
    convergents: list[tuple[GaussInt, GaussInt]] = []
    p2, p1 = ZERO, ONE
    q2, q1 = ONE, ZERO
    terminated = False
    for _ in range(max_terms):
        a = GaussInt(math.floor(z.re + half), math.floor(z.im + half))
        p = a * p1 + p2
        q = a * q1 + q2
        gap = cval - _GaussRational(Fraction(p.re), Fraction(p.im)) / _GaussRational(Fraction(q.re), Fraction(q.im))
        if (gap.re ** 2 + gap.im ** 2) * q.norm() ** 2 > 1:
            raise HurwitzInvariantError(f"|c - p/q|*|q|^2 > 1 for q = {q}")
        quotients.append(a)
        convergents.append((p, q))
        p2, p1, q2, q1 = p1, p, q1, q
        r = z - _GaussRational(Fraction(a.re), Fraction(a.im))
        if r.re == 0 and r.im == 0:
            terminated = True
            z = None
            break
        z = _GaussRational(Fraction(1), Fraction(0)) / r
        if min_q_norm is not None and q.norm() >= min_q_norm:
            break
    tail = None if z is None else mpmath.mpc(_fraction_to_mpf(z.re), _fraction_to_mpf(z.im))
    return HurwitzExpansion(c, tuple(quotients), tuple(convergents), terminated, tail)


def evaluate_continued_fraction(quotients: Sequence[GaussInt], tail=None, prec: int = DEFAULT_PREC):
    """Backward evaluation of a0 + 1/(a1 + 1/(... + 1/tail)) as an mpc."""
    if not quotients:
        raise ValueError("empty quotient list")
    with mp.workprec(prec):
        qs = [mpmath.mpc(a.re, a.im) for a in quotients]
        if tail is None:
            v = qs[-1]
            rest = qs[:-1]
        else:
            v = mpmath.mpc(tail)
            rest = qs
        for a in reversed(rest):
            v = a + 1 / v
        return v


def verify_convergent(c, q, a=None) -> GaussInt:
    """Check that a/q approximates c with (a, q) = 1 and |c - a/q| <= |q|^-2.

    ``a`` defaults to the nearest lattice point to q*c.  Returns ``a``; raises
    ValueError when the approximation property fails.
    """
    c = as_hp(c)
    q = GaussInt.coerce(q)
    if not q:
        raise ValueError("q must be nonzero")
    if a is None:
        a, _, _ = nearest_and_dist(c * q)
    a = GaussInt.coerce(a)
    if not gaussian_gcd(a, q).is_unit():
        raise ValueError(f"({a}, {q}) are not coprime")
    if c.exact is not None:
        fr, fi = c.exact
        n = q.norm()
        dr = fr - Fraction(a.re * q.re + a.im * q.im, n)
        di = fi - Fraction(a.im * q.re - a.re * q.im, n)
        ok = (dr * dr + di * di) * n * n <= 1
    else:
        with mp.workprec(c.prec):
            gap = abs(c.value - mpmath.mpc(a.re, a.im) / mpmath.mpc(q.re, q.im))
            ok = gap * q.norm() <= 1
    if not ok:
        raise ValueError(f"{a}/{q} is not within |q|^-2 of the constant")
    return a


def iter_lattice_box(r: int) -> Iterable[GaussInt]:
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            yield GaussInt(x, y)
