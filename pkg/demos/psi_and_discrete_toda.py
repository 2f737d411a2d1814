# psi functions on a nodal cubic and the discrete Toda grid they generate
from fractions import Fraction

from todapsi import EllipticCurve, PointValue, PsiSequence, TodaParams, build_grids, verify_dtoda_phi
from todapsi.psi import psi_bk

curve = EllipticCurve(0, 0, Fraction(1, 4))   # y^2 = x^2 (x + 1/4)
seq = PsiSequence(curve)

for n in range(1, 7):
    print(f"psi_{n} =", seq[n])

# the determinant formula lands on the same polynomials
print("psi_6 from the Hankel determinant agrees:", psi_bk(seq, 6) == seq[6])

# x = -1 is a 6-cyclic point: psi_6 and psi_12 vanish there
pt = PointValue.from_x(curve, -1)
vals = seq.values_at(pt, 12)
print([str(v) for v in vals])

for p, q in [(3, 2), (2, 3)]:
    prm = TodaParams(seq, p, q, 0, pt)
    phi, U, V = build_grids(prm, range(4), range(4))
    print(f"(p, q) = ({p}, {q})  delta^2 = {prm.delta2}  c(1 - delta^2) = {prm.cd}  c = {prm.c}")
    for row in U.rows:
        print("   ", "  ".join(f"{str(v):>5}" for v in row))
    print("    relation holds on a 6x6 block:", verify_dtoda_phi(prm, range(-1, 5), range(-1, 5))["ok"])
