# valuations of psi_n at a branch point and the max-plus equation they satisfy
from fractions import Fraction

from todapsi import EllipticCurve, PsiSequence, ValuationPoint, evolve, f_grid, verify_uDTE
from todapsi.tropical import genericity_check
from todapsi.valuation import g_sequence, val_shortcut

curve = EllipticCurve(Fraction(1, 4), 0, 0)            # y^2 = x^3 + 1/4
seq = PsiSequence(curve)
y0 = ValuationPoint.branch(curve, factor=curve.f)      # the three roots of y, all conjugate

g = g_sequence(seq, y0, 12)
print("g_n =", [str(v) for v in g])
print("shortcut route agrees:", all(val_shortcut(seq[n], y0) == g[n] for n in range(13)))

grid = f_grid(seq, y0, 3, 2, 0, range(1, 6), range(4))
print("d =", grid.d, " val(c(1 - delta^2)) =", grid.params["val_cd"])
print(grid.to_csv())
print("max-plus equation:", verify_uDTE(grid)["ok"])
print("no cancellation between terms:", genericity_check(seq, y0, 3, 2, 0, range(1, 6), range(4))["ok"])

# run the cellular automaton forward from two rows, then back again
fwd = evolve([0, 3, -1, 2, 0, 0], [1, 0, 2, -2, 0, 1], d=-1, steps=6, boundary="periodic")
print(fwd.to_csv())
back = evolve(fwd.rows[-1], fwd.rows[-2], d=-1, steps=6, boundary="periodic")
print("reversible:", back.rows[-1] == fwd.rows[0])
