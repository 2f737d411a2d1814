"""Discrete valuations of coordinate-ring elements at points of the curve.

Three kinds of points are supported, each with its own uniformizer t:

* ``Generic``  -- a point with y != 0; t = x - x0 and y is a power series in t.
* ``Branch``   -- a zero of y; x = b + t^2 and y = t * (unit).  ``b`` may be a
  rational root of f or be given implicitly by an irreducible factor h of f.
* ``Infinity`` -- x = t^-2, y = t^-3 * (unit), with the unit -> +1.

``val`` expands the element as a power series in t and reports its leading
exponent.  ``val_shortcut`` reads the same number off root multiplicities.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .curve import CurveElement, EllipticCurve
from .exact import (
    INF,
    ExtInt,
    MultiPoly,
    QuadExt,
    as_rational,
    factor_multiplicity,
    format_rational,
    root_multiplicity,
)

PRECISION_CAP = int(os.environ.get("TODAPSI_SERIES_CAP", str(2**12)))


class UnsupportedPointError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ValuationPoint:
    kind: str  # "generic" | "branch" | "infinity"
    curve: EllipticCurve
    x0: Fraction | None = None
    y0: QuadExt | None = None
    b: Fraction | None = None
    factor: MultiPoly | None = field(default=None, compare=False)

    @classmethod
    def generic(cls, curve: EllipticCurve, x0, y0=None, branch: int = 1) -> "ValuationPoint":
        x0 = as_rational(x0)
        fx = curve.f_at(x0)
        if fx == 0:
            raise UnsupportedPointError(f"f({x0}) = 0: use a branch point instead")
        if y0 is None:
            y0 = QuadExt(0, branch, fx)
        elif not isinstance(y0, QuadExt):
            y0 = QuadExt(y0, 0, fx)
        if y0 * y0 != fx:
            raise UnsupportedPointError("y0^2 != f(x0)")
        return cls("generic", curve, x0=x0, y0=y0)

    @classmethod
    def branch(cls, curve: EllipticCurve, b=None, factor: MultiPoly | None = None) -> "ValuationPoint":
        """A zero of y: either a rational root b or the roots of a factor h of f."""
        if (b is None) == (factor is None):
            raise ValueError("give exactly one of b or factor")
        if b is not None:
            b = as_rational(b)
            mult = root_multiplicity(curve.f, b)
            if mult == 0:
                raise UnsupportedPointError(f"f({b}) != 0: not a branch point")
            if mult > 1:
                raise UnsupportedPointError(f"x = {b} is a singular point (root of multiplicity {mult})")
            return cls("branch", curve, b=b)
        h = factor.with_variables(("x",)).monic()
        if h.degree() < 1:
            raise ValueError("factor must be non-constant")
        q, r = curve.f.divmod_x(h)
        if not r.is_zero():
            raise UnsupportedPointError("factor does not divide f")
        if h.gcd_x(q).degree() > 0 or h.gcd_x(h.diff("x")).degree() > 0:
            raise UnsupportedPointError("factor meets a repeated root of f")
        if h.degree() == 1:
            return cls.branch(curve, b=-h.coeff_dict()[0])
        return cls("branch", curve, factor=h)

    @classmethod
    def infinity(cls, curve: EllipticCurve) -> "ValuationPoint":
        return cls("infinity", curve)

    def __hash__(self):
        key = str(self.factor) if self.factor is not None else None
        return hash((self.kind, self.curve, self.x0, self.y0, self.b, key))

    def to_json(self) -> dict:
        if self.kind == "generic":
            return {"kind": "generic", "x": format_rational(self.x0), "y": self.y0.to_json()}
        if self.kind == "branch":
            if self.b is not None:
                return {"kind": "branch", "b": format_rational(self.b)}
            return {"kind": "branch", "factor": [format_rational(c) for c in self.factor.coeff_list()]}
        return {"kind": "infinity"}

    @classmethod
    def from_json(cls, curve: EllipticCurve, data) -> "ValuationPoint":
        kind = data.get("kind")
        if kind == "generic":
            y = data.get("y")
            if isinstance(y, dict):
                y = QuadExt.from_json(y)
            return cls.generic(curve, data["x"], y, int(data.get("branch", 1)))
        if kind == "branch":
            if "factor" in data:
                return cls.branch(curve, factor=MultiPoly.from_coeffs([as_rational(c) for c in data["factor"]]))
            return cls.branch(curve, b=data["b"])
        if kind == "infinity":
            return cls.infinity(curve)
        raise ValueError(f"unknown point kind {kind!r}")


@dataclass
class LocalSeries:
    """Truncated expansion sum_k coefficients[k] t^(offset + k)."""

    coefficients: list
    offset: int
    precision: int

    def leading(self) -> ExtInt:
        for k, c in enumerate(self.coefficients):
            if c != 0:
                return ExtInt(self.offset + k)
        return INF


# ---------------------------------------------------------------------------
# series helpers


def taylor_coefficients(p: MultiPoly, x0) -> Iterator[Fraction]:
    """Lazily yield the coefficients of p(x0 + t) by repeated synthetic division."""
    x0 = as_rational(x0)
    d = p.coeff_dict()
    dense = [d.get(k, 0) for k in range(max(d) + 1)] if d else []
    while dense:
        out = []
        acc = 0
        for c in reversed(dense):
            acc = acc * x0 + c
            out.append(acc)
        yield as_rational(out[-1])
        dense = list(reversed(out[:-1]))
    while True:
        yield Fraction(0)


class _SqrtSeries:
    """Lazy square root w(s) of g(s) = sum g_k s^k with w(0) = w0 given."""

    def __init__(self, g_coeffs, w0):
        self.g = g_coeffs
        self.w = [w0]
        self.inv = (w0 * 2).inverse() if isinstance(w0, QuadExt) else Fraction(1) / (2 * w0)

    def __getitem__(self, k):
        while len(self.w) <= k:
            n = len(self.w)
            gk = self.g[n] if n < len(self.g) else 0
            s = sum((self.w[i] * self.w[n - i] for i in range(1, n)), 0 * self.w[0])
            self.w.append((self.w[0] * 0 + gk - s) * self.inv)
        return self.w[k]


def _require_numeric(elem: CurveElement, pt: ValuationPoint):
    if elem.curve.is_symbolic:
        raise ValueError("valuations need numeric lambdas")
    if elem.curve != pt.curve:
        raise ValueError("element and point live on different curves")


def local_expansion(elem: CurveElement, pt: ValuationPoint, precision: int) -> LocalSeries:
    """Expansion of elem in the uniformizer of pt, to ``precision`` terms."""
    offset, terms = _series_terms(elem, pt)
    return LocalSeries(_take(terms, precision), offset, precision)


def _series_terms(elem, pt):
    _require_numeric(elem, pt)
    if pt.kind == "generic":
        return 0, _expand_generic(elem, pt)
    if pt.kind == "branch":
        if pt.b is None:
            raise UnsupportedPointError("series expansion needs a rational branch point")
        return 0, _expand_branch(elem, pt)
    return _expand_infinity(elem, pt)


def _expand_generic(elem, pt):
    # x = x0 + t, y = Y(t) with Y^2 = f(x0 + t), Y(0) = y0
    fser = _take(taylor_coefficients(pt.curve.f, pt.x0), 4)
    y = _SqrtSeries(fser, pt.y0)
    pgen = taylor_coefficients(elem.p, pt.x0)
    qgen = taylor_coefficients(elem.q, pt.x0)
    qc = []
    zero = pt.y0 * 0
    while True:
        k = len(qc)
        qc.append(next(qgen))
        c = zero + next(pgen)
        for i in range(k + 1):
            if qc[i]:
                c = c + y[k - i] * qc[i]
        yield c


def _expand_branch(elem, pt):
    # x = b + t^2, y = t w(t^2) with w^2 = f(b + s)/s
    fser = _take(taylor_coefficients(pt.curve.f, pt.b), 4)
    w0 = QuadExt(0, 1, fser[1])
    w = _SqrtSeries(fser[1:], w0)
    pgen = taylor_coefficients(elem.p, pt.b)
    qgen = taylor_coefficients(elem.q, pt.b)
    qc = []
    zero = w0 * 0
    while True:
        yield zero + next(pgen)
        m = len(qc)
        qc.append(next(qgen))
        yield sum((w[m - i] * qc[i] for i in range(m + 1) if qc[i]), zero)


def _expand_infinity(elem, pt):
    # x = t^-2, y = t^-3 w(t^2), w^2 = 1 + lam2 s + lam1 s^2 + lam0 s^3;
    # the series is scaled by t^top so that it starts at t^0
    l0, l1, l2 = pt.curve.lambdas
    w = _SqrtSeries([Fraction(1), l2, l1, l0], Fraction(1))
    dp, dq = elem.p.degree("x"), elem.q.degree("x")
    cands = [2 * dp] if dp >= 0 else []
    if dq >= 0:
        cands.append(2 * dq + 3)
    top = max(cands, default=0)
    pd, qd = elem.p.coeff_dict(), elem.q.coeff_dict()

    def gen():
        e = 0
        while True:
            c = Fraction(0)
            if (top - e) % 2 == 0:
                c += pd.get((top - e) // 2, 0)
            for k, qk in qd.items():
                m2 = e - (top - 2 * k - 3)
                if m2 >= 0 and m2 % 2 == 0:
                    c += qk * w[m2 // 2]
            yield c
            e += 1

    return -top, gen()


def _take(it, n):
    return [next(it) for _ in range(n)]


# ---------------------------------------------------------------------------
# valuations


def val(elem: CurveElement, pt: ValuationPoint) -> ExtInt:
    """Order of vanishing of elem at pt (series route)."""
    _require_numeric(elem, pt)
    if elem.is_zero():
        return INF
    if pt.kind == "branch" and pt.b is None:
        return _val_branch_factor_series(elem, pt)
    offset, terms = _series_terms(elem, pt)
    deg = max(elem.p.degree("x"), elem.q.degree("x") + 2)
    precision = min(2 * deg + 4, PRECISION_CAP)
    seen = 0
    while True:
        while seen < precision:
            if next(terms) != 0:
                return ExtInt(offset + seen)
            seen += 1
        if precision >= PRECISION_CAP:
            raise PrecisionError(f"no nonzero term within {precision} terms")
        precision = min(2 * precision, PRECISION_CAP)


def _hasse_orders(p: MultiPoly, h: MultiPoly) -> ExtInt:
    # smallest k with (d^k p / k!) nonzero modulo h
    if p.is_zero():
        return INF
    cur = p
    k = 0
    while not cur.is_zero():
        if not cur.divmod_x(h)[1].is_zero():
            return ExtInt(k)
        k += 1
        cur = cur.diff("x") / k
    return INF


def _val_branch_factor_series(elem, pt):
    # at a root beta of h: x - beta = t^2 and y = t * (unit)
    op = _hasse_orders(elem.p, pt.factor)
    oq = _hasse_orders(elem.q, pt.factor)
    return min(op * 2, oq * 2 + 1)


def val_shortcut(elem: CurveElement, pt: ValuationPoint) -> ExtInt:
    """Same value as :func:`val`, from root multiplicities and degrees."""
    _require_numeric(elem, pt)
    if elem.is_zero():
        return INF
    p, q = elem.p, elem.q
    if pt.kind == "branch":
        def order(poly):
            if poly.is_zero():
                return INF
            if pt.b is not None:
                return ExtInt(root_multiplicity(poly, pt.b))
            return ExtInt(factor_multiplicity(poly, pt.factor))
        return min(order(p) * 2, order(q) * 2 + 1)
    if pt.kind == "infinity":
        vp = ExtInt(-2 * p.degree("x")) if p else INF
        vq = ExtInt(-2 * q.degree("x") - 3) if q else INF
        return min(vp, vq)
    # generic: strip common powers of (x - x0); if the remaining element
    # still vanishes at the point, its conjugate does not, so the rest of
    # the order is carried by the norm P^2 - Q^2 f
    k = min(root_multiplicity(p, pt.x0) if p else 10**9, root_multiplicity(q, pt.x0) if q else 10**9)
    lin = MultiPoly.from_coeffs([-pt.x0, 1]) ** k
    p, q = p.exact_div_x(lin), q.exact_div_x(lin)
    at = pt.y0 * as_rational(q.horner(pt.x0)) + as_rational(p.horner(pt.x0))
    if not at.is_zero():
        return ExtInt(k)
    reduced = CurveElement(elem.curve, p, q)
    return ExtInt(k + root_multiplicity(reduced.norm(), pt.x0))


def val_ratio(num: CurveElement, den: CurveElement, pt: ValuationPoint) -> ExtInt:
    vd = val(den, pt)
    if not vd.is_finite:
        raise ZeroDivisionError("denominator vanishes identically")
    return val(num, pt) - vd


def differential_order(pt: ValuationPoint) -> int:
    """Order in t of dx/(2y); 0 means t is a genuine uniformizer for u."""
    if pt.kind == "branch" and pt.b is None:
        return 0  # dx = 2t dt and 2y = t * (unit) at every root of the factor
    two_y = local_expansion(pt.curve.y() * 2, pt, 8).leading()
    dx = {"generic": 0, "branch": 1, "infinity": -3}[pt.kind]  # order of dx/dt
    return int(ExtInt(dx) - two_y)


def val_axioms_check(f: CurveElement, g: CurveElement, pt: ValuationPoint) -> dict:
    vf, vg = val(f, pt), val(g, pt)
    vfg = val(f * g, pt)
    vsum = val(f + g, pt)
    lower = min(vf, vg)
    return {
        "val_f": vf,
        "val_g": vg,
        "product_ok": vfg == vf + vg,
        "sum_ok": vsum >= lower,
        "sum_is_min": vsum == lower,
        "val_fg": vfg,
        "val_sum": vsum,
    }


def g_sequence(seq, pt: ValuationPoint, max_n: int) -> list[ExtInt]:
    """[val(psi_0), ..., val(psi_max_n)]."""
    return [val(seq[n], pt) for n in range(max_n + 1)]


def nonarch_norm(v) -> str:
    """Size class of exp(-v): '<1', '=1', '>1' or '=0'."""
    v = ExtInt.of(v)
    if not v.is_finite:
        if v.inf > 0:
            return "=0"
        raise ValueError("val = -inf does not occur for ring elements")
    if v > 0:
        return "<1"
    if v == 0:
        return "=1"
    return ">1"
