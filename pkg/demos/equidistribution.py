"""How often is p c close to a Gaussian integer?

For irrational c the fraction of primes with ||p c|| <= delta (sup norm)
approaches 4 delta^2.  For c in Q(i) it does not: the values p c mod Z[i]
live on a finite set, and for small delta they can miss the window entirely.
"""
from fractions import Fraction

from gaussdioph.dioph import equid_window
from gaussdioph.gint import ComplexHP
from gaussdioph.gsieve import build_prime_table

table = build_prime_table(1_000_000)
for name in ("sqrt2i", "mix_sqrt", "mix_e_pi", "0.31+0.17i"):
    c = ComplexHP.preset(name) if not name[0].isdigit() else ComplexHP.parse(name)
    cells = []
    for d in (Fraction(3, 10), Fraction(1, 10), Fraction(1, 20)):
        rep = equid_window(table, c, 1, table.max_norm, d)
        cells.append(f"delta={float(d):.2f}: {rep.observed:6d}/{rep.predicted:9.1f} = {rep.ratio:.3f}")
    print(f"{name:>11}  " + "  ".join(cells))
