# numerical wp / sigma near the origin, then exact genus-two wp values
import numpy as np

from todapsi.analytic import (ContinuousTodaProbe, WeierstrassData, check_add1,
                              check_continuous_toda, convergence_order, random_admissible_pairs)
from todapsi.genus2 import TEST_CURVE, q_function, wp_values

w = WeierstrassData.from_lambdas(0, -1, 0)   # y^2 = x^3 - x, so g2 = 4, g3 = 0
print("g2, g3 =", w.g2.real, w.g3.real, " series radius ~", round(w.series_radius(), 4))

pairs = random_admissible_pairs(w, 50, seed=0)
res = np.array([check_add1(w, u, v) for u, v in pairs])
print(f"addition formula: max rel. residual {res.max():.2e}, median {np.median(res):.2e}")

probe = ContinuousTodaProbe(0.2, 0.4j, [-1, 0, 1, 2, 3])
for h in (4e-3, 2e-3, 1e-3):
    probe.h = h
    print(f"h = {h:.0e}: Toda residual {check_continuous_toda(w, probe)['max_residual']:.3e}")
print("observed order:", round(convergence_order(w, probe), 3))

C = TEST_CURVE
a = C.point(0, 1) + C.point(2, 1)
b = C.point(-1, 1) + C.point(1, 1)
print("a =", a, " b =", b, " a + b =", a + b)
print("wp(a) =", wp_values(a).to_json())
print("Q(a, b) =", q_function(a, b), " Q(b, a) =", q_function(b, a))
