"""Exponential sums over sectors, their bounds, and the E1/E2 pairing.

Over the full circle E1 and E2 agree by the quarter-turn symmetry n -> i n.
On a fixed proper sector they do not; the identity that does hold is
E2 on (w1, w2) = E1 on (w1 + pi/2, w2 + pi/2).
"""
import math

from gaussdioph.expsum import TypeSumParams, e1_exact, e2_exact, e3_exact, linear_expsum, type_sum_report
from gaussdioph.gint import ComplexHP, GaussInt
from gaussdioph.gsieve import SectorAnnulus

for k in ("0.3+0.7i", "0.01+0.5i", "0.001+0.001i"):
    s, b = linear_expsum(ComplexHP.parse(k), 0, 5000)
    print(f"linear sum kappa={k:>12}: |S|={abs(s):10.2f}  bound (up to a constant) {b:10.2f}")

c = ComplexHP.preset("mix_golden")
full = TypeSumParams(x1=3, x2=800, M=30, H1=2, H2=0.5)
print(f"full circle: E1={e1_exact(c, full, 2):.6f}  E2={e2_exact(c, full, 2):.6f}  E3={e3_exact(c, full):.6f}")
w1, w2 = -1.0, 0.6
fixed = TypeSumParams(x1=3, x2=800, M=30, H1=2, H2=0.5, sector=SectorAnnulus(0, math.inf, w1, w2))
turned = TypeSumParams(x1=3, x2=800, M=30, H1=2, H2=0.5,
                       sector=SectorAnnulus(0, math.inf, w1 + math.pi / 2, w2 + math.pi / 2))
print(f"sector ({w1}, {w2}): E1={e1_exact(c, fixed, 2):.6f}  E2={e2_exact(c, fixed, 2):.6f}")
print(f"E1 on the quarter-turned sector = {e1_exact(c, turned, 2):.6f}")

rep = type_sum_report(ComplexHP.preset("sqrt2i"), GaussInt(0, -2), 0.3)
print(f"type sums at x={rep.x:.0f}: type I diff {rep.diff_typeI:.1f} (budget {rep.budget_typeI:.1f}),"
      f" type II diff {rep.diff_typeII:.1f} (budget {rep.budget_typeII:.1f})")
