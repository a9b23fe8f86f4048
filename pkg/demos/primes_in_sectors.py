"""Gaussian primes in sectors: observed counts against the smooth main term.

The ratio sits a few percent above 1 at these sizes; the main term uses
x / log x where the log-integral would be closer.
"""
import math

from gaussdioph.gsieve import SectorAnnulus, build_prime_table, count_primes_sector

table = build_prime_table(1_000_000)
print(f"{len(table)} Gaussian primes of norm <= {table.max_norm}")
for r in (100, 300, 1000):
    obs, main = count_primes_sector(table, SectorAnnulus(0, r))
    print(f"disc r={r:5d}: observed {obs:7d}  main {main:10.1f}  ratio {obs / main:.4f}")
print("octants of the disc r=1000:")
for k in range(8):
    s = SectorAnnulus(0, 1000, -math.pi + k * math.pi / 4, -math.pi + (k + 1) * math.pi / 4)
    obs, main = count_primes_sector(table, s)
    print(f"  octant {k}: {obs:6d}  ratio {obs / main:.4f}")
