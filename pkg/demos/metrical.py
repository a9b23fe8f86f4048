"""Counting prime triples (p, r, q) with p alpha ~ r and p c alpha ~ q.

F_N counts them for one alpha; the Monte-Carlo integral over a sector of
alpha is printed next to the G_N main term (whose constant is not explicit,
so no verdict is drawn).  The sieve error E_P fluctuates around 0.
"""
import numpy as np

from gaussdioph.gint import ComplexHP
from gaussdioph.gsieve import SectorAnnulus, build_prime_table
from gaussdioph.metrical import MetricalParams, SieveErrorParams, count_F_N, monte_carlo_theo_i, t_p_and_e_p

table = build_prime_table(1_000_000)
c = ComplexHP.parse("0.31+0.17i")
for N in (50, 100, 200, 400):
    p = MetricalParams(c, 0.01, N, 1, 2)
    print(f"N={N:4d}: F_N(1.37+0.22i) = {count_F_N(table, p, ComplexHP.parse('1.37+0.22i'))}")

p = MetricalParams(ComplexHP.preset("mix_e_pi"), 0.01, 300, 1, 1.5)
mc = monte_carlo_theo_i(table, p, SectorAnnulus(1, 1.5, 0.0, 1.0), 100, seed=1)
print(f"Monte-Carlo integral {mc.integral_estimate:.1f} +- {mc.stderr:.1f}; G_N side {mc.rhs:.1f}")

rng = np.random.default_rng(5)
errs = []
for _ in range(20):
    a = rng.random(2)
    sp = SieveErrorParams(150, 1, 1, ComplexHP.from_fractions(float(a[0]), float(a[1])), mu=0.2)
    errs.append(t_p_and_e_p(sp, ComplexHP.preset("mix_sqrt")).e_p)
print(f"E_P over 20 random alpha at P=150: mean {np.mean(errs):.1f}, sd {np.std(errs, ddof=1):.1f}")
