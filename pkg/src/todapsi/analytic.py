"""Numerical Weierstrass functions near the origin.

The curve y^2 = x^3 + lam2 x^2 + lam1 x + lam0 becomes
Y^2 = 4 X^3 - g2 X - g3 under X = x + lam2/3, Y = 2y, and X = wp(u).
wp and sigma are evaluated from their power series inside a disk whose
radius is estimated from the series itself.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DEFAULT_TERMS = 60
TOLERANCES = {"ode": 1e-10, "add1": 1e-9, "toda": 1e-4, "sigma": 1e-9}


class DomainError(ValueError):
    pass


def invariants(lambda0, lambda1, lambda2) -> tuple[Fraction, Fraction]:
    """Exact (g2, g3) for the depressed, rescaled model."""
    l0, l1, l2 = (Fraction(v) for v in (lambda0, lambda1, lambda2))
    g2 = Fraction(4, 3) * l2 * l2 - 4 * l1
    g3 = -4 * l0 + Fraction(4, 3) * l1 * l2 - Fraction(8, 27) * l2**3
    return g2, g3


def wp_coefficients(g2, g3, terms: int = DEFAULT_TERMS) -> np.ndarray:
    """c[k] with wp(u) = u^-2 + sum_{k>=2} c[k] u^(2k-2)."""
    c = np.zeros(terms + 1, dtype=complex)
    if terms >= 2:
        c[2] = g2 / 20
    if terms >= 3:
        c[3] = g3 / 28
    for k in range(4, terms + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
    return c


def _exp_series(a: np.ndarray) -> np.ndarray:
    # b = exp(A) for A(z) = sum a[k] z^k with a[0] = 0, via b' = A' b
    n = len(a)
    b = np.zeros(n, dtype=complex)
    b[0] = 1.0
    for k in range(1, n):
        b[k] = sum(j * a[j] * b[k - j] for j in range(1, k + 1)) / k
    return b


@dataclass
class WeierstrassData:
    g2: complex
    g3: complex
    terms: int = DEFAULT_TERMS
    radius_factor: float = 0.5
    shift: float = 0.0
    c: np.ndarray = field(init=False, repr=False)
    sigma_coeffs: np.ndarray = field(init=False, repr=False)
    u_max: float = field(init=False)

    def __post_init__(self):
        self.g2, self.g3 = complex(self.g2), complex(self.g3)
        self.c = wp_coefficients(self.g2, self.g3, self.terms)
        # log(sigma/u) = sum a_k u^(2k) with a_k = -c_k / ((2k)(2k-1)), as a series in z = u^2
        a = np.zeros(self.terms + 1, dtype=complex)
        for k in range(2, self.terms + 1):
            a[k] = -self.c[k] / ((2 * k) * (2 * k - 1))
        self.sigma_coeffs = _exp_series(a)
        self.u_max = self.radius_factor * self.series_radius()

    @classmethod
    def from_lambdas(cls, lambda0, lambda1, lambda2, **kw) -> "WeierstrassData":
        g2, g3 = invariants(lambda0, lambda1, lambda2)
        obj = cls(float(g2), float(g3), **kw)
        obj.shift = float(Fraction(lambda2) / 3)
        return obj

    @property
    def discriminant(self) -> complex:
        return self.g2**3 - 27 * self.g3**2

    def series_radius(self) -> float:
        """Ratio-test estimate of the convergence radius of the wp series in u."""
        mags = [(k, abs(self.c[k])) for k in range(self.terms // 2, self.terms + 1) if abs(self.c[k]) > 0]
        if len(mags) < 2:
            return float("inf") if not mags else abs(self.c[mags[0][0]]) ** (-1.0 / (2 * mags[0][0] - 2))
        est = [m ** (-1.0 / (2 * k - 2)) for k, m in mags]
        return float(min(est[-3:]))

    def _check(self, u, allow_zero=False):
        u = complex(u)
        if not allow_zero and u == 0:
            raise DomainError("u = 0 is a pole")
        if abs(u) > self.u_max:
            raise DomainError(f"|u| = {abs(u):.4g} exceeds u_max = {self.u_max:.4g}")
        return u

    def _poly(self, z: complex, coeffs) -> complex:
        acc = 0j
        for co in coeffs[::-1]:
            acc = acc * z + co
        return acc

    def wp(self, u) -> complex:
        u = self._check(u)
        z = u * u
        return 1 / z + self._poly(z, self.c[2:]) * z

    def wp_deriv(self, u) -> complex:
        u = self._check(u)
        z = u * u
        ks = np.arange(2, self.terms + 1)
        d = self.c[2:] * (2 * ks - 2)
        return -2 / (u * z) + self._poly(z, d) * u

    def x_of_u(self, u) -> complex:
        """x-coordinate on the original (undepressed) curve."""
        return self.wp(u) - self.shift

    def sigma(self, u) -> complex:
        u = self._check(u, allow_zero=True)
        return u * self._poly(u * u, self.sigma_coeffs)

    def log_sigma_dd(self, u) -> complex:
        """(log sigma)''(u) from the series, for the defining-relation check."""
        u = self._check(u)
        z = u * u
        ks = np.arange(2, self.terms + 1)
        a = -self.c[2:] / ((2 * ks) * (2 * ks - 1))
        d2 = a * (2 * ks) * (2 * ks - 1)
        return -1 / z + self._poly(z, d2) * z


def ode_residual(w: WeierstrassData, u) -> float:
    p, dp = w.wp(u), w.wp_deriv(u)
    return abs(dp * dp - (4 * p**3 - w.g2 * p - w.g3)) / max(1.0, abs(dp * dp))


def sigma_relation_residual(w: WeierstrassData, u) -> float:
    """|-(log sigma)'' - wp| with (log sigma)'' = (sigma sigma'' - sigma'^2) / sigma^2.

    sigma and its derivatives come from the exponentiated series, so this
    checks the exp step against the wp coefficients it was built from.
    """
    u = w._check(u)
    z = u * u
    b = w.sigma_coeffs
    k = np.arange(len(b))
    s0 = u * w._poly(z, b)                                   # sum b_k u^(2k+1)
    s1 = w._poly(z, b * (2 * k + 1))                          # sum (2k+1) b_k u^(2k)
    s2 = u * w._poly(z, (b * (2 * k + 1) * (2 * k))[1:])  # sum (2k+1)(2k) b_k u^(2k-1)
    dd = (s0 * s2 - s1 * s1) / (s0 * s0)
    return abs(-dd - w.wp(u)) / max(1.0, abs(w.wp(u)))


def check_add1(w: WeierstrassData, u, v) -> float:
    """Relative residual of wp(v) - wp(u) = sigma(u+v) sigma(u-v) / (sigma(u) sigma(v))^2."""
    u, v = complex(u), complex(v)
    su, sv = w.sigma(u), w.sigma(v)
    rhs = w.sigma(u + v) * w.sigma(u - v) / (su * sv) ** 2
    if u == v:
        return abs(rhs)
    lhs = w.wp(v) - w.wp(u)
    return abs(lhs - rhs) / max(abs(lhs), 1e-300)


def random_admissible_pairs(w: WeierstrassData, count: int, seed: int = 0, frac: float = 0.45):
    """Pairs (u, v) with |u|, |v|, |u +- v| <= u_max and away from 0 and u = +-v."""
    rng = np.random.default_rng(seed)
    out = []
    r = frac * w.u_max
    while len(out) < count:
        u = complex(*rng.uniform(-r, r, 2))
        v = complex(*rng.uniform(-r, r, 2))
        if min(abs(u), abs(v), abs(u - v), abs(u + v)) < 0.05 * w.u_max:
            continue
        if max(abs(u), abs(v)) > r:
            continue
        out.append((u, v))
    return out


@dataclass
class ContinuousTodaProbe:
    u0: complex
    t: complex
    n_values: list
    h: float = 1e-3

    def b(self, w: WeierstrassData) -> complex:
        return w.wp(self.u0)


def check_continuous_toda(w: WeierstrassData, probe: ContinuousTodaProbe) -> dict:
    """-q_n'' against exp(q_{n+1}) - 2 exp(q_n) + exp(q_{n-1}), q_n = log(wp((n+1)u0 + t) - b).

    The second difference of q_n is formed from logs of ratios so that no
    branch cut of the logarithm is crossed.
    """
    b = probe.b(w)
    h = probe.h

    def F(n, t):
        return w.wp((n + 1) * probe.u0 + t) - b

    rows = []
    for n in probe.n_values:
        try:
            centre = F(n, probe.t)
            if abs(centre) < 1e-12:
                raise DomainError("log of ~0")
            dd = (cmath.log(F(n, probe.t + h) / centre) + cmath.log(F(n, probe.t - h) / centre)) / (h * h)
            rhs = F(n + 1, probe.t) - 2 * centre + F(n - 1, probe.t)
        except (DomainError, ZeroDivisionError) as exc:
            rows.append({"n": n, "skipped": str(exc)})
            continue
        rows.append({"n": n, "residual": abs(-dd - rhs), "scale": abs(rhs)})
    res = [r["residual"] for r in rows if "residual" in r]
    return {"rows": rows, "max_residual": max(res) if res else None, "h": h}


def convergence_order(w: WeierstrassData, probe: ContinuousTodaProbe, factor: float = 2.0) -> float:
    """log_factor of residual(h * factor) / residual(h)."""
    r1 = check_continuous_toda(w, probe)["max_residual"]
    coarse = ContinuousTodaProbe(probe.u0, probe.t, probe.n_values, probe.h * factor)
    r2 = check_continuous_toda(w, coarse)["max_residual"]
    return float(np.log(r2 / r1) / np.log(factor))
