"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`; on top of them this module
provides a single quadratic extension (:class:`QuadExt`), sparse
multivariate polynomials (:class:`MultiPoly`) and the extended integers
``Z + {+inf, -inf}`` used by valuations and tropical grids (:class:`ExtInt`).
"""
from __future__ import annotations

import ast
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from operator import add as _add
from typing import Any, Iterable, Mapping

Rational = Fraction

MAX_EXPONENT = 2**31 - 1


class IndeterminateError(ArithmeticError):
    """Raised for +inf + -inf and other undefined extended-integer forms."""


class InexactDivisionError(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


# ---------------------------------------------------------------------------
# rationals


def as_rational(value) -> Fraction:
    """Coerce int / Fraction / "p/q" strings to a Fraction."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value) -> str:
    q = as_rational(value)
    return f"{q.numerator}/{q.denominator}"


def _norm(c):
    # ints stay ints; integral Fractions collapse to ints (much faster products)
    if type(c) is int:
        return c
    if type(c) is Fraction:
        return c.numerator if c.denominator == 1 else c
    return _norm(as_rational(c))


def _is_scalar(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


# ---------------------------------------------------------------------------
# quadratic extension


@dataclass(frozen=True, slots=True, eq=False)
class QuadExt:
    """``a + b*theta`` with ``theta**2 == r``.

    theta is never collapsed to a rational, even when r is a nonzero square
    (r = 0 forces b = 0).  Equality is structural (same r, same components).  Plain rationals are
    embedded with ``b == 0`` and compare equal to such values.
    """

    a: Fraction
    b: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        object.__setattr__(self, "r", as_rational(self.r))
        if self.r == 0:
            # theta = 0 is the only square root of 0
            object.__setattr__(self, "b", Fraction(0))

    @classmethod
    def sqrt(cls, r, sign: int = 1) -> "QuadExt":
        return cls(0, sign, r)

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.r != self.r:
                raise ValueError(f"incompatible extensions: theta^2={self.r} vs {other.r}")
            return other
        if _is_scalar(other):
            return QuadExt(other, 0, self.r)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.r)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.r)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.r)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if _is_scalar(other):
            return QuadExt(self.a * other, self.b * other, self.r)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.a * o.a + self.b * o.b * self.r,
            self.a * o.b + self.b * o.a,
            self.r,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.r

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.r)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError(f"{self} is not invertible (a^2 - b^2 r = 0)")
        return QuadExt(self.a / n, -self.b / n, self.r)

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExt(self.a / other, self.b / other, self.r)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, self.r)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.r == other.r and self.a == other.a and self.b == other.b
        if _is_scalar(other):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "r": format_rational(self.r)}

    @classmethod
    def from_json(cls, data: Mapping) -> "QuadExt":
        return cls(as_rational(data["a"]), as_rational(data["b"]), as_rational(data["r"]))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        theta = f"sqrt({self.r})"
        if self.a == 0:
            return f"{self.b}*{theta}"
        return f"{self.a} + {self.b}*{theta}"

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, r={self.r})"


# ---------------------------------------------------------------------------
# extended integers


@total_ordering
@dataclass(frozen=True, slots=True)
class ExtInt:
    """An element of ``Z + {+inf, -inf}``.

    ``inf + (-inf)`` raises :class:`IndeterminateError`; it is never a value.
    """

    value: int = 0
    inf: int = 0  # 0 finite, +1 -> +inf, -1 -> -inf

    @classmethod
    def pos_inf(cls) -> "ExtInt":
        return cls(0, 1)

    @classmethod
    def neg_inf(cls) -> "ExtInt":
        return cls(0, -1)

    @classmethod
    def of(cls, v) -> "ExtInt":
        if isinstance(v, ExtInt):
            return v
        if isinstance(v, bool):
            raise TypeError("bool is not an extended integer")
        if isinstance(v, int):
            return cls(v)
        if isinstance(v, float) and v in (float("inf"), float("-inf")):
            return cls(0, 1 if v > 0 else -1)
        if isinstance(v, str):
            s = v.strip().lower()
            if s in ("inf", "+inf", "infinity"):
                return cls.pos_inf()
            if s in ("-inf", "-infinity"):
                return cls.neg_inf()
            return cls(int(s))
        raise TypeError(f"cannot interpret {v!r} as an extended integer")

    @property
    def is_finite(self) -> bool:
        return self.inf == 0

    def __add__(self, other):
        try:
            o = ExtInt.of(other)
        except TypeError:
            return NotImplemented
        if self.inf and o.inf:
            if self.inf != o.inf:
                raise IndeterminateError("inf + (-inf) is undefined")
            return self
        if self.inf:
            return self
        if o.inf:
            return o
        return ExtInt(self.value + o.value)

    __radd__ = __add__

    def __neg__(self):
        return ExtInt(-self.value, -self.inf) if self.inf == 0 else ExtInt(0, -self.inf)

    def __sub__(self, other):
        try:
            o = ExtInt.of(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return ExtInt.of(other) - self

    def __mul__(self, k):
        if isinstance(k, ExtInt):
            if not k.is_finite:
                return k * self if self.is_finite else ExtInt(0, self.inf * k.inf)
            k = k.value
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if self.inf:
            if k == 0:
                raise IndeterminateError("0 * inf is undefined")
            return ExtInt(0, self.inf if k > 0 else -self.inf)
        return ExtInt(self.value * k)

    __rmul__ = __mul__

    def _key(self):
        return (self.inf, self.value if self.inf == 0 else 0)

    def __eq__(self, other):
        if isinstance(other, ExtInt):
            return self._key() == other._key()
        if isinstance(other, int) and not isinstance(other, bool):
            return self.inf == 0 and self.value == other
        return NotImplemented

    def __lt__(self, other):
        try:
            o = ExtInt.of(other)
        except TypeError:
            return NotImplemented
        return self._key() < o._key()

    def __hash__(self):
        return hash(self.value) if self.inf == 0 else hash(("inf", self.inf))

    def __int__(self):
        if self.inf:
            raise OverflowError("infinite extended integer")
        return self.value

    def to_json(self):
        if self.inf == 0:
            return self.value
        return "inf" if self.inf > 0 else "-inf"

    def __str__(self):
        if self.inf == 0:
            return str(self.value)
        return "inf" if self.inf > 0 else "-inf"

    __repr__ = __str__


INF = ExtInt.pos_inf()
NEG_INF = ExtInt.neg_inf()


def max0(v: ExtInt) -> ExtInt:
    """max(0, v); +inf stays +inf and -inf gives 0."""
    v = ExtInt.of(v)
    return v if v > 0 else ExtInt(0)


# ---------------------------------------------------------------------------
# sparse multivariate polynomials

_FIXED_ORDER = {"x": 0, "lam0": 1, "lam1": 2, "lam2": 3, "lam3": 4, "lam4": 5}


def _var_key(name: str):
    return (_FIXED_ORDER.get(name, 100), name)


def canonical_variables(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


class MultiPoly:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    coefficients.  Coefficients are ints when integral, Fractions otherwise.
    Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, terms: Mapping[tuple, Any] | None = None, variables: Iterable[str] = ("x",)):
        self.variables = tuple(variables)
        clean = {}
        n = len(self.variables)
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.variables}")
                if any(k < 0 for k in e):
                    raise ValueError("negative exponent")
                c = _norm(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            clean = {e: _norm(c) for e, c in clean.items() if c}
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, variables: tuple) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, variables: Iterable[str] = ("x",)) -> "MultiPoly":
        variables = tuple(variables)
        c = _norm(c)
        return cls._raw({(0,) * len(variables): c} if c else {}, variables)

    @classmethod
    def var(cls, name: str, variables: Iterable[str] | None = None) -> "MultiPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise ValueError(f"{name} not in {variables}")
        e = tuple(1 if v == name else 0 for v in variables)
        return cls._raw({e: 1}, variables)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, var: str = "x") -> "MultiPoly":
        """Univariate polynomial from an ascending coefficient list."""
        return cls({(i,): c for i, c in enumerate(coeffs)}, (var,))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            return -1

    def degree(self, var: str = "x") -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = self._index(var)
        if i < 0:
            return 0
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for e in self.terms:
            for v, k in zip(self.variables, e):
                if k:
                    used.add(v)
        return canonical_variables(used)

    def with_variables(self, variables: Iterable[str]) -> "MultiPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = set(self.used_variables()) - set(variables)
        if missing:
            raise ValueError(f"cannot drop variables in use: {sorted(missing)}")
        pos = [variables.index(v) if v in variables else -1 for v in self.variables]
        out = {}
        n = len(variables)
        for e, c in self.terms.items():
            ne = [0] * n
            for p, k in zip(pos, e):
                if k:
                    ne[p] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(out, variables)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if _is_scalar(other):
            return MultiPoly.const(other, self.variables)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    @staticmethod
    def align(a: "MultiPoly", b: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        if a.variables == b.variables:
            return a, b
        merged = canonical_variables(a.variables + b.variables)
        return a.with_variables(merged), b.with_variables(merged)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if _is_scalar(other) or isinstance(other, MultiPoly):
            a, b = MultiPoly.align(self, self._lift(other))
        else:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _norm(s)
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, a.variables)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        if _is_scalar(other) or isinstance(other, MultiPoly):
            return self + (-self._lift(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _norm(c)
        if not c:
            return MultiPoly._raw({}, self.variables)
        return MultiPoly._raw({e: _norm(v * c) for e, v in self.terms.items()}, self.variables)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = MultiPoly.align(self, other)
        ta, tb = a.terms, b.terms
        if not ta or not tb:
            return MultiPoly._raw({}, a.variables)
        for i in range(len(a.variables)):
            if a.degree(a.variables[i]) + b.degree(a.variables[i]) > MAX_EXPONENT:
                raise OverflowError("exponent overflow")
        out: dict = {}
        get = out.get
        if len(a.variables) == 1:
            for (ea,), ca in ta.items():
                for (eb,), cb in tb.items():
                    k = (ea + eb,)
                    out[k] = get(k, 0) + ca * cb
        else:
            for ea, ca in ta.items():
                for eb, cb in tb.items():
                    k = tuple(map(_add, ea, eb))
                    out[k] = get(k, 0) + ca * cb
        clean = {}
        for e, c in out.items():
            if c:
                clean[e] = _norm(c)
        return MultiPoly._raw(clean, a.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / as_rational(other))
        return NotImplemented

    def __eq__(self, other):
        if _is_scalar(other):
            other = MultiPoly.const(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.variables == other.variables:
            return self.terms == other.terms
        a, b = MultiPoly.align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        used = self.used_variables()
        return hash(frozenset(self.with_variables(used).terms.items()) | {used})

    # -- calculus and substitution -----------------------------------------

    def diff(self, var: str = "x") -> "MultiPoly":
        i = self._index(var)
        if i < 0:
            return MultiPoly._raw({}, self.variables)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = _norm(c * k)
        return MultiPoly._raw(out, self.variables)

    def substitute(self, values: Mapping[str, Any]) -> "MultiPoly":
        """Replace some variables by rationals; see :meth:`compose` for polynomials."""
        values = {k: as_rational(v) for k, v in values.items() if k in self.variables}
        if not values:
            return self
        keep = tuple(v for v in self.variables if v not in values)
        idx_keep = [self.variables.index(v) for v in keep]
        idx_sub = [(self.variables.index(v), val) for v, val in values.items()]
        out: dict = {}
        for e, c in self.terms.items():
            cc = c
            for i, val in idx_sub:
                if e[i]:
                    cc = cc * val ** e[i]
            ne = tuple(e[i] for i in idx_keep)
            out[ne] = out.get(ne, 0) + cc
        if keep:
            return MultiPoly(out, keep)
        return MultiPoly.const(sum(out.values(), 0))

    def compose(self, var: str, value: "MultiPoly") -> "MultiPoly":
        """Substitute the polynomial ``value`` for ``var``."""
        i = self._index(var)
        if i < 0:
            return self
        by_power: dict[int, dict] = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            by_power.setdefault(e[i], {})[rest] = c
        result = MultiPoly._raw({}, self.variables)
        if not by_power:
            return result
        top = max(by_power)
        for k in range(top, -1, -1):
            result = result * value
            if k in by_power:
                result = result + MultiPoly._raw(dict(by_power[k]), self.variables)
        return result

    def shift(self, x0, var: str = "x") -> "MultiPoly":
        """p(var + x0)."""
        t = MultiPoly.var(var, self.variables) + x0
        return self.compose(var, t)

    def horner(self, value, var: str = "x"):
        """Evaluate a univariate polynomial at any ring element."""
        if self.used_variables() not in ((), (var,)):
            raise ValueError(f"horner needs a polynomial in {var} only, got {self.used_variables()}")
        i = self._index(var)
        coeffs = self.coeff_dict(var)
        if not coeffs:
            return value * 0 if not _is_scalar(value) else 0
        top = max(coeffs)
        acc = coeffs.get(top, 0)
        if not _is_scalar(value):
            acc = value * 0 + acc
        prev = top
        for k in sorted(coeffs, reverse=True)[1:]:
            acc = acc * value ** (prev - k) + coeffs[k]
            prev = k
        if prev:
            acc = acc * value ** prev
        return acc

    def __call__(self, value, var: str = "x"):
        return self.horner(value, var)

    def coeff_dict(self, var: str = "x") -> dict[int, Any]:
        """Univariate coefficients {degree: coefficient}."""
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial is not univariate in " + var)
            out[e[i] if i >= 0 else 0] = c
        return out

    def coeff_list(self, var: str = "x") -> list:
        d = self.coeff_dict(var)
        if not d:
            return []
        return [d.get(k, 0) for k in range(max(d) + 1)]

    # -- division in one distinguished variable ------------------------------

    def _rows(self, var: str) -> tuple[int, dict[int, dict]]:
        i = self._index(var)
        rows: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i] if i >= 0 else 0
            rest = e[:i] + (0,) + e[i + 1:] if i >= 0 else e
            rows.setdefault(k, {})[rest] = c
        return i, rows

    def divmod_x(self, g: "MultiPoly", var: str = "x") -> tuple["MultiPoly", "MultiPoly"]:
        """Long division in ``var``; g's leading coefficient must be a rational."""
        a, g = MultiPoly.align(self, self._lift(g))
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        i, grows = g._rows(var)
        dg = max(grows)
        lead = grows[dg]
        if len(lead) != 1 or any(next(iter(lead))):
            raise ValueError("divisor's leading coefficient must be a nonzero rational constant")
        lc = next(iter(lead.values()))
        inv_lc = Fraction(1) / lc if lc not in (1, -1) else lc
        _, rrows = a._rows(var)
        n = len(a.variables)
        quot: dict = {}
        if rrows:
            for d in range(max(rrows), dg - 1, -1):
                row = rrows.get(d)
                if not row:
                    continue
                shift = d - dg
                qrow = {e: _norm(c * inv_lc) for e, c in row.items() if c}
                for e, c in qrow.items():
                    qe = list(e)
                    if i >= 0:
                        qe[i] = shift
                    quot[tuple(qe)] = c
                for gd, grow in grows.items():
                    target = rrows.setdefault(shift + gd, {})
                    for e1, c1 in qrow.items():
                        for e2, c2 in grow.items():
                            k = tuple(map(_add, e1, e2)) if n > 1 else e1
                            target[k] = target.get(k, 0) - c1 * c2
                rrows[d] = {}
        rem = {}
        for d, row in rrows.items():
            for e, c in row.items():
                if c:
                    re_ = list(e)
                    if i >= 0:
                        re_[i] = d
                    rem[tuple(re_)] = _norm(c)
        return MultiPoly(quot, a.variables), MultiPoly._raw(rem, a.variables)

    def exact_div_x(self, g: "MultiPoly", var: str = "x") -> "MultiPoly":
        q, r = self.divmod_x(g, var)
        if not r.is_zero():
            raise InexactDivisionError(f"division leaves remainder of degree {r.degree(var)}")
        return q

    def monic(self, var: str = "x") -> "MultiPoly":
        if self.is_zero():
            return self
        _, rows = self._rows(var)
        lead = rows[max(rows)]
        if len(lead) != 1 or any(next(iter(lead))):
            raise ValueError("leading coefficient is not a rational constant")
        return self / next(iter(lead.values()))

    def gcd_x(self, other: "MultiPoly", var: str = "x") -> "MultiPoly":
        """Monic gcd of two univariate polynomials (Euclid over Q)."""
        a, b = MultiPoly.align(self, self._lift(other))
        while not b.is_zero():
            a, b = b, a.divmod_x(b, var)[1]
        return a.monic(var) if not a.is_zero() else a

    def xgcd_x(self, other: "MultiPoly", var: str = "x"):
        """(g, s, t) with s*self + t*other = g, g monic (univariate)."""
        a, b = MultiPoly.align(self, self._lift(other))
        one = MultiPoly.const(1, a.variables)
        zero = MultiPoly.const(0, a.variables)
        r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
        while not r1.is_zero():
            q, r = r0.divmod_x(r1, var)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        lc = r0.coeff_dict(var)[r0.degree(var)]
        return r0 / lc, s0 / lc, t0 / lc

    # -- presentation -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, Any]]:
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [[format_rational(c), list(e)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        variables = tuple(data["variables"])
        return cls({tuple(e): as_rational(c) for c, e in data["terms"]}, variables)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self})"


def univariate_x(coeffs: Iterable) -> MultiPoly:
    return MultiPoly.from_coeffs(coeffs, "x")


# ---------------------------------------------------------------------------
# univariate root utilities


def _require_univariate(p: MultiPoly, var: str = "x") -> dict[int, Any]:
    if p.is_zero():
        raise ValueError("zero polynomial")
    used = p.used_variables()
    if used not in ((), (var,)):
        raise ValueError(f"expected a univariate polynomial in {var}, got variables {used}")
    return p.coeff_dict(var)


def root_multiplicity(p: MultiPoly, x0, var: str = "x") -> int:
    """Largest k with (var - x0)^k dividing p, by repeated synthetic division."""
    coeffs = _require_univariate(p, var)
    x0 = as_rational(x0)
    dense = [coeffs.get(k, 0) for k in range(max(coeffs) + 1)]
    k = 0
    while len(dense) > 1:
        # synthetic division, highest degree first
        out = []
        acc = 0
        for c in reversed(dense):
            acc = acc * x0 + c
            out.append(acc)
        if out[-1] != 0:
            break
        dense = list(reversed(out[:-1]))
        k += 1
    return k


def factor_multiplicity(p: MultiPoly, h: MultiPoly, var: str = "x") -> int:
    """Largest k with h^k dividing p (h univariate, non-constant)."""
    _require_univariate(p, var)
    if h.degree(var) < 1:
        raise ValueError("factor must be non-constant")
    k = 0
    while True:
        q, r = p.divmod_x(h, var)
        if not r.is_zero():
            return k
        p = q
        k += 1


def _divisors(n: int) -> list[int]:
    from sympy import factorint

    n = abs(n)
    divs = [1]
    for prime, exp in factorint(n).items():
        divs = [d * prime**k for d in divs for k in range(exp + 1)]
    return divs


def rational_roots(p: MultiPoly, var: str = "x") -> dict[Fraction, int]:
    """All rational roots with multiplicities (rational-root theorem)."""
    coeffs = _require_univariate(p, var)
    roots: dict[Fraction, int] = {}
    low = min(coeffs)
    if low:
        roots[Fraction(0)] = low
    shifted = {k - low: as_rational(c) for k, c in coeffs.items()}
    if max(shifted) == 0:
        return roots
    den = 1
    for c in shifted.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = {k: int(c * den) for k, c in shifted.items()}
    lead, const = ints[max(ints)], ints[0]
    poly = MultiPoly({(k,): c for k, c in ints.items()}, (var,))
    candidates = set()
    for num in _divisors(const):
        for d in _divisors(lead):
            candidates.add(Fraction(num, d))
            candidates.add(Fraction(-num, d))
    for cand in sorted(candidates):
        if poly.horner(cand, var) == 0:
            roots[cand] = root_multiplicity(poly, cand, var)
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# expression evaluation (for transcribed factored listings)

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def evaluate_expression(text: str, namespace: Mapping[str, Any]):
    """Evaluate an arithmetic expression over ring elements.

    Only +, -, *, / (by a rational), ** (by a nonnegative integer literal),
    integer literals and the names in ``namespace`` are accepted.
    """
    tree = ast.parse(text.strip(), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in namespace:
                raise NameError(f"unknown name {node.id!r}")
            return namespace[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not _is_scalar(right):
                    raise ValueError("division only by rational constants")
                if _is_scalar(left):
                    return Fraction(left) / right
                return left * (Fraction(1) / right)
            if not (isinstance(right, int) and right >= 0):
                raise ValueError("exponent must be a nonnegative integer")
            return left**right
        raise ValueError(f"unsupported syntax: {ast.dump(node)[:60]}")

    return ev(tree)
