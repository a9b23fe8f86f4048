"""Nearest-integer complex continued fractions and the spacing they give.

Each convergent p/q satisfies |c - p/q| |q|^2 <= 1, and the points nc modulo
Z[i] for n in a box of side |q|/4 stay at least 1/(2 sqrt2 |q|) apart.
"""
import mpmath

from gaussdioph.dioph import spacing_audit
from gaussdioph.gint import ComplexHP, hurwitz_expansion

for name in ("sqrt2i", "mix_e_pi"):
    c = ComplexHP.preset(name)
    h = hurwitz_expansion(c, max_terms=10)
    print(f"{name} = {c}")
    print("  quotients:", " ".join(str(a) for a in h.quotients))
    with mpmath.workprec(256):
        v = c.at(256)
        for p, q in h.convergents:
            gap = abs(v - mpmath.mpc(p.re, p.im) / mpmath.mpc(q.re, q.im)) * q.norm()
            line = f"  q={str(q):>12}  |q|^2={q.norm():>10}  |c-p/q||q|^2={float(gap):.3f}"
            if q.norm() <= 10_000:
                a = spacing_audit(c, q)
                line += f"  spacing {a.min_pair_dist:.2e} >= {a.spacing_bound:.2e}: {a.spacing_ok}"
            print(line)
