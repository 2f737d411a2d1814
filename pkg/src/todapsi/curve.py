"""Elliptic curves y^2 = x^3 + lam2 x^2 + lam1 x + lam0 and their coordinate rings.

An element of the ring is kept in the canonical form ``P(x) + Q(x) y``; any
``y^2`` produced by multiplication is immediately replaced by ``f(x)``.  The
coefficients ``lam0, lam1, lam2`` may be rationals or free symbols.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exact import (
    InexactDivisionError,
    MultiPoly,
    QuadExt,
    as_rational,
    format_rational,
    rational_roots,
)

GENERIC_VARS = ("x", "lam0", "lam1", "lam2")


class CurveError(ValueError):
    pass


class EllipticCurve:
    """Monic cubic model ``y^2 = f(x)``.

    Pass ``None`` for a coefficient to keep it symbolic (``lam0`` etc.).
    """

    def __init__(self, lambda0=None, lambda1=None, lambda2=None):
        lams = [lambda0, lambda1, lambda2]
        self.lambdas = tuple(None if v is None else as_rational(v) for v in lams)
        symbolic = [f"lam{i}" for i, v in enumerate(self.lambdas) if v is None]
        self.variables = ("x",) + tuple(symbolic)
        x = MultiPoly.var("x", self.variables)
        coeffs = [self._coeff(i) for i in range(3)]
        self.f = x**3 + coeffs[2] * x**2 + coeffs[1] * x + coeffs[0]
        self.df = self.f.diff("x")

    @classmethod
    def generic(cls) -> "EllipticCurve":
        return cls(None, None, None)

    def _coeff(self, i: int):
        v = self.lambdas[i]
        if v is None:
            return MultiPoly.var(f"lam{i}", self.variables)
        return MultiPoly.const(v, self.variables)

    @property
    def is_symbolic(self) -> bool:
        return any(v is None for v in self.lambdas)

    def _require_numeric(self):
        if self.is_symbolic:
            raise CurveError("operation needs numeric lambda values")

    @property
    def branch_points(self) -> dict[Fraction, int]:
        """Rational roots of f with multiplicities."""
        self._require_numeric()
        return rational_roots(self.f)

    @property
    def is_nodal(self) -> bool:
        """True iff f has a repeated root (f is not square-free)."""
        self._require_numeric()
        return self.f.gcd_x(self.df).degree("x") > 0

    def f_at(self, x0) -> Fraction:
        self._require_numeric()
        return as_rational(self.f.horner(as_rational(x0)))

    def bind(self, values: Mapping[str, object]) -> "EllipticCurve":
        lams = list(self.lambdas)
        for i in range(3):
            key = f"lam{i}"
            if lams[i] is None and key in values:
                lams[i] = as_rational(values[key])
        return EllipticCurve(*lams)

    # ring element shortcuts
    def element(self, p=0, q=0) -> "CurveElement":
        return CurveElement(self, p, q)

    def one(self) -> "CurveElement":
        return CurveElement(self, 1, 0)

    def zero(self) -> "CurveElement":
        return CurveElement(self, 0, 0)

    def x(self) -> "CurveElement":
        return CurveElement(self, MultiPoly.var("x", self.variables), 0)

    def y(self) -> "CurveElement":
        return CurveElement(self, 0, 1)

    def __eq__(self, other):
        return isinstance(other, EllipticCurve) and self.lambdas == other.lambdas

    def __hash__(self):
        return hash(("EllipticCurve", self.lambdas))

    def to_json(self) -> dict:
        return {
            "genus": 1,
            "lambda": [None if v is None else format_rational(v) for v in self.lambdas],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EllipticCurve":
        if data.get("genus", 1) != 1:
            raise CurveError("expected a genus-1 curve")
        lam = data.get("lambda")
        if not isinstance(lam, (list, tuple)) or len(lam) != 3:
            raise CurveError('curve JSON needs "lambda": [l0, l1, l2]')
        return cls(*[None if v is None else as_rational(v) for v in lam])

    def __repr__(self):
        return f"EllipticCurve(y^2 = {self.f})"


class CurveElement:
    """``p + q*y`` in the coordinate ring of ``curve``."""

    __slots__ = ("curve", "p", "q")

    def __init__(self, curve: EllipticCurve, p=0, q=0):
        self.curve = curve
        self.p = _as_poly(p, curve.variables)
        self.q = _as_poly(q, curve.variables)

    @classmethod
    def _make(cls, curve, p, q):
        obj = cls.__new__(cls)
        obj.curve = curve
        obj.p = p
        obj.q = q
        return obj

    def _other(self, other) -> "CurveElement":
        if isinstance(other, CurveElement):
            if other.curve != self.curve:
                raise CurveError("elements live on different curves")
            return other
        return CurveElement(self.curve, other, 0)

    def __add__(self, other):
        o = self._other(other)
        return CurveElement._make(self.curve, self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return CurveElement._make(self.curve, -self.p, -self.q)

    def __sub__(self, other):
        o = self._other(other)
        return CurveElement._make(self.curve, self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CurveElement._make(self.curve, self.p * other, self.q * other)
        o = self._other(other)
        ap, aq, bp, bq = self.p, self.q, o.p, o.q
        # skip the products that are known to vanish; psi values are pure
        zero = MultiPoly._raw({}, self.p.variables)
        if not aq and not bq:
            return CurveElement._make(self.curve, ap * bp, zero)
        if not ap and not bp:
            return CurveElement._make(self.curve, aq * bq * self.curve.f, zero)
        if not aq:
            return CurveElement._make(self.curve, ap * bp, ap * bq)
        if not bq:
            return CurveElement._make(self.curve, ap * bp, aq * bp)
        p = ap * bp + aq * bq * self.curve.f
        q = ap * bq + aq * bp
        return CurveElement._make(self.curve, p, q)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not ring elements")
        result = self.curve.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = CurveElement(self.curve, other, 0)
        if not isinstance(other, CurveElement):
            return NotImplemented
        return self.curve == other.curve and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    # -- structure ----------------------------------------------------------

    @property
    def parity(self) -> str:
        """'even' (pure P), 'odd' (pure Q*y), 'zero' or 'mixed'."""
        if self.is_zero():
            return "zero"
        if self.q.is_zero():
            return "even"
        if self.p.is_zero():
            return "odd"
        return "mixed"

    def conjugate(self) -> "CurveElement":
        return CurveElement._make(self.curve, self.p, -self.q)

    def norm(self) -> MultiPoly:
        """self * conjugate, an element of Q[lambda][x]."""
        return self.p * self.p - self.q * self.q * self.curve.f

    def reduce(self) -> "CurveElement":
        # the representation is always canonical; kept for API symmetry
        return self

    def divide_by_y(self) -> "CurveElement":
        """Exact quotient by y: (P + Q y)/y = Q + (P/f) y."""
        try:
            pf = self.p.exact_div_x(self.curve.f)
        except InexactDivisionError as exc:
            raise InexactDivisionError("element is not divisible by y") from exc
        return CurveElement._make(self.curve, self.q, pf)

    def exact_div(self, other: "CurveElement") -> "CurveElement":
        """Exact quotient in the ring; raises InexactDivisionError otherwise."""
        o = self._other(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero element")
        if o.q.is_zero():
            return CurveElement._make(
                self.curve, self.p.exact_div_x(o.p), self.q.exact_div_x(o.p)
            )
        if o.p.is_zero():
            # (P + Q y)/(R y) = Q/R + P/(R f) y
            return CurveElement._make(
                self.curve, self.q.exact_div_x(o.q), self.p.exact_div_x(o.q * self.curve.f)
            )
        num = self * o.conjugate()
        n = o.norm()
        return CurveElement._make(self.curve, num.p.exact_div_x(n), num.q.exact_div_x(n))

    def derivation(self) -> "CurveElement":
        """D = 2y d/dx:  D(P + Q y) = (2 Q' f + Q f') + 2 P' y."""
        f, df = self.curve.f, self.curve.df
        dq = self.q.diff("x")
        p = dq * f * 2 + self.q * df
        q = self.p.diff("x") * 2
        return CurveElement._make(self.curve, p, q)

    D = derivation

    def x_degree(self) -> tuple[int, int]:
        return self.p.degree("x"), self.q.degree("x")

    def bind(self, values: Mapping[str, object]) -> "CurveElement":
        """Substitute numeric lambdas, returning an element on the bound curve."""
        curve = self.curve.bind(values)
        subs = {k: v for k, v in values.items() if k in self.p.variables}
        p = self.p.substitute(subs).with_variables(curve.variables)
        q = self.q.substitute(subs).with_variables(curve.variables)
        return CurveElement._make(curve, p, q)

    def evaluate(self, point: "PointValue") -> QuadExt:
        """P(x0) + Q(x0) y0."""
        if point.curve != self.curve:
            if self.curve.is_symbolic:
                raise CurveError("symbolic lambdas need bindings before evaluation")
            raise CurveError("point is on a different curve")
        x0 = point.x
        pv = as_rational(self.p.horner(x0)) if self.p else Fraction(0)
        qv = as_rational(self.q.horner(x0)) if self.q else Fraction(0)
        return point.y * qv + pv

    def to_json(self) -> dict:
        return {"p_part": self.p.to_json()["terms"], "q_part": self.q.to_json()["terms"],
                "variables": list(self.curve.variables)}

    def __str__(self):
        if self.q.is_zero():
            return str(self.p)
        if self.p.is_zero():
            return f"({self.q})*y"
        return f"{self.p} + ({self.q})*y"

    def __repr__(self):
        return f"CurveElement({self})"


def _as_poly(v, variables) -> MultiPoly:
    if isinstance(v, MultiPoly):
        return v.with_variables(variables)
    return MultiPoly.const(v, variables)


@dataclass(frozen=True)
class PointValue:
    """A point (x, y) with rational x and y in Q(sqrt(f(x)))."""

    curve: EllipticCurve
    x: Fraction
    y: QuadExt

    def __post_init__(self):
        if self.curve.is_symbolic:
            raise CurveError("points need a curve with numeric lambdas")
        object.__setattr__(self, "x", as_rational(self.x))
        fx = self.curve.f_at(self.x)
        y = self.y if isinstance(self.y, QuadExt) else QuadExt(self.y, 0, fx)
        object.__setattr__(self, "y", y)
        if y * y != fx:
            raise CurveError(f"y^2 != f(x) at x = {self.x}")

    @classmethod
    def from_x(cls, curve: EllipticCurve, x0, branch: int = 1) -> "PointValue":
        """The point over x0 with y = branch * sqrt(f(x0)), kept symbolic."""
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        x0 = as_rational(x0)
        return cls(curve, x0, QuadExt(0, branch, curve.f_at(x0)))

    def negate(self) -> "PointValue":
        return PointValue(self.curve, self.x, -self.y)

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, curve: EllipticCurve, data: Mapping) -> "PointValue":
        if "y" in data:
            y = data["y"]
            y = QuadExt.from_json(y) if isinstance(y, Mapping) else as_rational(y)
            return cls(curve, as_rational(data["x"]), y)
        return cls.from_x(curve, data["x"], int(data.get("branch", 1)))
