"""Genus-two curves y^2 = x^5 + lam4 x^4 + ... + lam0.

Jacobian arithmetic uses Mumford pairs (u, v) with Cantor's composition and
reduction.  For a divisor with u = (x - x1)(x - x2) the three wp values are

    wp22 = x1 + x2,   wp12 = x1 x2,
    wp11 = (F(x1, x2) - 2 y1 y2) / (x1 - x2)^2,

F(x, z) = sum_j (x z)^j (lam_{2j+1} (x + z) + 2 lam_{2j}) with lam5 = 1.

The recursion / discrete-Toda helpers at the end work on any sequence of
ring elements, so they apply equally to genus-one psi values.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Mapping, Sequence

from .exact import MultiPoly, QuadExt, as_rational, format_rational


class DivisorError(ValueError):
    pass


def _poly(coeffs) -> MultiPoly:
    return MultiPoly.from_coeffs([as_rational(c) for c in coeffs])


def _ext_value(poly: MultiPoly, root: QuadExt):
    d = poly.coeff_dict()
    acc = QuadExt(0, 0, root.r)
    for k in range(max(d, default=-1), -1, -1):
        acc = acc * root + d.get(k, 0)
    return acc


class Genus2Curve:
    def __init__(self, lambdas: Sequence):
        if len(lambdas) != 5:
            raise ValueError("need lambda0..lambda4")
        self.lambdas = tuple(as_rational(v) for v in lambdas)
        self.f = _poly(list(self.lambdas) + [1])

    @property
    def lam(self) -> tuple:
        """lambda0..lambda5 with lambda5 = 1."""
        return self.lambdas + (Fraction(1),)

    @property
    def is_squarefree(self) -> bool:
        return self.f.gcd_x(self.f.diff("x")).degree() == 0

    def F(self, x, z):
        lam = self.lam
        return sum(((x * z) ** j * (lam[2 * j + 1] * (x + z) + 2 * lam[2 * j]) for j in range(3)), 0)

    def is_on(self, x, y) -> bool:
        return as_rational(y) ** 2 == self.f.horner(as_rational(x))

    def identity(self) -> "MumfordDivisor":
        return MumfordDivisor(self, _poly([1]), _poly([]))

    def point(self, x, y) -> "MumfordDivisor":
        x, y = as_rational(x), as_rational(y)
        if not self.is_on(x, y):
            raise DivisorError(f"({x}, {y}) is not on the curve")
        return MumfordDivisor(self, _poly([-x, 1]), _poly([y]))

    def __eq__(self, other):
        return isinstance(other, Genus2Curve) and self.lambdas == other.lambdas

    def __hash__(self):
        return hash(self.lambdas)

    def to_json(self):
        return {"genus": 2, "lambda": [format_rational(v) for v in self.lambdas]}

    @classmethod
    def from_json(cls, data):
        if data.get("genus") != 2:
            raise ValueError("expected a genus-2 curve")
        return cls([as_rational(v) for v in data["lambda"]])


@dataclass(frozen=True, eq=False)
class MumfordDivisor:
    curve: Genus2Curve
    u: MultiPoly
    v: MultiPoly

    def __post_init__(self):
        u, v = self.u, self.v
        if u.is_zero() or u.coeff_dict()[u.degree()] != 1:
            raise DivisorError("u must be monic")
        if u.degree() > 2:
            raise DivisorError("u must have degree <= 2 (reduced divisor)")
        if v.degree() >= u.degree():
            raise DivisorError("deg v must be < deg u")
        if not (v * v - self.curve.f).divmod_x(u)[1].is_zero():
            raise DivisorError("u does not divide v^2 - f")

    def __add__(self, other):
        return cantor_add(self, other)

    def __neg__(self):
        return MumfordDivisor(self.curve, self.u, -self.v)

    def __sub__(self, other):
        return cantor_add(self, -other)

    def __mul__(self, k: int):
        result = self.curve.identity()
        base = self if k >= 0 else -self
        k = abs(k)
        while k:
            if k & 1:
                result = result + base
            base = base + base
            k >>= 1
        return result

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MumfordDivisor) and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def is_identity(self) -> bool:
        return self.u.degree() == 0

    def to_json(self):
        return {"u": [format_rational(c) for c in self.u.coeff_list()],
                "v": [format_rational(c) for c in self.v.coeff_list()]}

    @classmethod
    def from_json(cls, curve: Genus2Curve, data: Mapping):
        return cls(curve, _poly(data["u"]), _poly(data.get("v", [])))

    def __repr__(self):
        return f"MumfordDivisor(u={self.u}, v={self.v})"


def cantor_add(a: MumfordDivisor, b: MumfordDivisor) -> MumfordDivisor:
    if a.curve != b.curve:
        raise DivisorError("divisors on different curves")
    f = a.curve.f
    d1, e1, e2 = a.u.xgcd_x(b.u)
    d, c1, s3 = d1.xgcd_x(a.v + b.v)
    s1, s2 = c1 * e1, c1 * e2
    u = (a.u * b.u).exact_div_x(d * d)
    v = (s1 * a.u * b.v + s2 * b.u * a.v + s3 * (a.v * b.v + f)).exact_div_x(d)
    v = v.divmod_x(u)[1]
    while u.degree() > 2:
        u = (f - v * v).exact_div_x(u)
        v = (-v).divmod_x(u)[1]
    u = u.monic()
    v = v.divmod_x(u)[1]
    return MumfordDivisor(a.curve, u, v)


# ---------------------------------------------------------------------------
# wp values


@dataclass(frozen=True)
class WpTriple:
    wp11: Fraction
    wp12: Fraction
    wp22: Fraction

    def to_json(self):
        return {k: format_rational(getattr(self, k)) for k in ("wp11", "wp12", "wp22")}


def _generic_check(D: MumfordDivisor):
    if D.u.degree() != 2:
        raise DivisorError("wp values need a degree-2 divisor")
    u1, u0 = D.u.coeff_dict().get(1, 0), D.u.coeff_dict().get(0, 0)
    s, p = -as_rational(u1), as_rational(u0)
    if s * s - 4 * p == 0:
        raise DivisorError("x1 = x2: degenerate divisor")
    return s, p


def wp_values(D: MumfordDivisor) -> WpTriple:
    """wp11, wp12, wp22 through symmetric functions of x1, x2."""
    s, p = _generic_check(D)
    v = D.v.coeff_dict()
    v1, v0 = as_rational(v.get(1, 0)), as_rational(v.get(0, 0))
    lam = D.curve.lam
    F = lam[1] * s + 2 * lam[0] + p * (lam[3] * s + 2 * lam[2]) + p * p * (lam[5] * s + 2 * lam[4])
    y1y2 = v1 * v1 * p + v1 * v0 * s + v0 * v0
    return WpTriple((F - 2 * y1y2) / (s * s - 4 * p), p, s)


def wp_values_split(D: MumfordDivisor) -> WpTriple:
    """Same values computed from the roots x1, x2 in Q(sqrt(disc)).

    The result must land in the base field; that is asserted here.
    """
    s, p = _generic_check(D)
    disc = s * s - 4 * p
    x1 = QuadExt(s / 2, Fraction(1, 2), disc)
    x2 = QuadExt(s / 2, Fraction(-1, 2), disc)
    y1, y2 = _ext_value(D.v, x1), _ext_value(D.v, x2)
    num = D.curve.F(x1, x2) - 2 * y1 * y2
    wp11 = num / ((x1 - x2) ** 2)
    wp12, wp22 = x1 * x2, x1 + x2
    for val in (wp11, wp12, wp22):
        if not val.is_rational():
            raise ArithmeticError("wp value did not descend to the base field")
    return WpTriple(wp11.a, wp12.a, wp22.a)


def wp_from_points(curve: Genus2Curve, P1, P2) -> WpTriple:
    """Direct evaluation at two points (x1, y1), (x2, y2) with x1 != x2."""
    (x1, y1), (x2, y2) = [(as_rational(a), as_rational(b)) for a, b in (P1, P2)]
    if x1 == x2:
        raise DivisorError("x1 = x2: degenerate divisor")
    return WpTriple((curve.F(x1, x2) - 2 * y1 * y2) / (x1 - x2) ** 2, x1 * x2, x1 + x2)


def q_function(Du: MumfordDivisor, Dv: MumfordDivisor) -> Fraction:
    a, b = wp_values(Du), wp_values(Dv)
    return -(a.wp11 - b.wp11 + a.wp12 * b.wp22 - b.wp12 * a.wp22)


def q_from_triples(a: WpTriple, b: WpTriple):
    return -(a.wp11 - b.wp11 + a.wp12 * b.wp22 - b.wp12 * a.wp22)


# ---------------------------------------------------------------------------
# random divisors


def rational_points(curve: Genus2Curve, search: range = range(-6, 7)) -> list[tuple[Fraction, Fraction]]:
    """Integral points with x in ``search`` (y found by exact square roots)."""
    from math import isqrt

    out = []
    for a in search:
        fa = curve.f.horner(Fraction(a))
        fa = as_rational(fa)
        if fa < 0 or fa.denominator != 1:
            continue
        r = isqrt(fa.numerator)
        if r * r == fa.numerator:
            out.append((Fraction(a), Fraction(r)))
            if r:
                out.append((Fraction(a), Fraction(-r)))
    return out


def random_divisor(curve: Genus2Curve, rng: random.Random, points=None, terms: int = 3) -> MumfordDivisor:
    points = points or rational_points(curve)
    D = curve.identity()
    for _ in range(terms):
        x, y = rng.choice(points)
        D = D + curve.point(x, y) * rng.choice([1, 1, 2, -1])
    return D


TEST_CURVE = Genus2Curve([1, 4, 0, -5, 0])  # x(x-1)(x-2)(x+1)(x+2) + 1


# ---------------------------------------------------------------------------
# sequence-level checks shared with genus one


def _getter(psis) -> Callable[[int], object]:
    if callable(psis):
        return psis
    if isinstance(psis, Mapping):
        def get(n):
            if n in psis:
                return psis[n]
            if -n in psis:
                return -psis[-n]
            raise KeyError(n)
        return get

    def get(n):
        if n < 0:
            return -psis[-n]
        return psis[n]
    return get


def verify_rec_sequence(psis, m: int, n: int) -> bool:
    """psi_{m+n} psi_{m-n} == psi_{m-1} psi_{m+1} psi_n^2 - psi_m^2 psi_{n+1} psi_{n-1}."""
    g = _getter(psis)
    lhs = g(m + n) * g(m - n)
    rhs = g(m - 1) * g(n) * g(m + 1) * g(n) - g(m) * g(n + 1) * g(m) * g(n - 1)
    return lhs == rhs


def dtoda3_grid(psis, p: int, q: int, n0: int, i_values, j_values) -> dict:
    """phi[i][j] = psi_{n0 + p i + q j} and the delta^-2 form of the relation.

    delta^-2 phi[j+1] phi[j-1] + c (1 - delta^-2) phi^2 - phi[i+1] phi[i-1] = 0,
    where c (1 - delta^2) = psi_{p+q} psi_{p-q} / psi_p^2 fixes c.
    """
    if gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    g = _getter(psis)
    psi_p, psi_q = g(p), g(q)
    if psi_p == 0 or psi_q == 0:
        raise ValueError("psi_p and psi_q must be nonzero")
    d2 = psi_q * psi_q / (psi_p * psi_p)
    cd = g(p + q) * g(p - q) / (psi_p * psi_p)
    # c (1 - delta^-2) = -cd / delta^2; this needs no division by 1 - delta^2
    k = -cd / d2
    inv = 1 / d2

    def phi(i, j):
        return g(n0 + p * i + q * j)

    grid = [[phi(i, j) for i in i_values] for j in j_values]
    bad = []
    for j in j_values:
        for i in i_values:
            r = inv * phi(i, j + 1) * phi(i, j - 1) + k * phi(i, j) ** 2 - phi(i + 1, j) * phi(i - 1, j)
            if r != 0:
                bad.append([i, j])
    return {"grid": grid, "ok": not bad, "failures": bad, "delta2": d2, "cd": cd,
            "c_one_minus_inv_delta2": k}
