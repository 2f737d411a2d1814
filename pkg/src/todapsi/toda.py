"""Discrete Toda grids built from psi values.

The grid is ``phi[i][j] = psi_{n0 + p i + q j}(P)`` and the ratio grid is
``U[i][j] = phi[i+1][j] phi[i-1][j] / phi[i][j]^2``.  With

    delta^2 = psi_q^2 / psi_p^2,       cd = psi_{p+q} psi_{p-q} / psi_p^2,

the quadratic relation

    phi[i][j+1] phi[i][j-1] - cd phi[i][j]^2 - delta^2 phi[i+1][j] phi[i-1][j] = 0

holds identically; cd plays the role of c (1 - delta^2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .curve import PointValue
from .exact import QuadExt, format_rational
from .psi import PsiSequence, signed_value


class IndeterminateCellError(ArithmeticError):
    def __init__(self, i, j, what="0/0"):
        super().__init__(f"indeterminate cell ({i}, {j}): {what}")
        self.cell = (i, j)


class UndefinedConstantError(ArithmeticError):
    pass


class _Infinity:
    """Projective infinity used for display in U and V grids."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__


PINF = _Infinity()


def is_inf(v) -> bool:
    return v is PINF


def value_to_json(v):
    if v is PINF:
        return "inf"
    if isinstance(v, QuadExt):
        return format_rational(v.a) if v.is_rational() else v.to_json()
    return format_rational(v)


@dataclass
class TodaParams:
    seq: PsiSequence
    p: int
    q: int
    n0: int
    point: PointValue
    delta2: QuadExt = field(init=False)
    cd: QuadExt = field(init=False)

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime positive integers")
        top = self.p + self.q
        vals = self.seq.values_at(self.point, top)
        self._base = vals
        psi_p, psi_q = vals[self.p], vals[self.q]
        if psi_p.is_zero() or psi_q.is_zero():
            raise ValueError("psi_p and psi_q must not vanish at the point")
        self.delta2 = (psi_q * psi_q) / (psi_p * psi_p)
        self.cd = vals[self.p + self.q] * signed_value(vals, self.p - self.q) / (psi_p * psi_p)

    @property
    def c(self) -> QuadExt:
        one_minus = 1 - self.delta2
        if one_minus.is_zero():
            raise UndefinedConstantError("delta^2 = 1, so c is undefined")
        return self.cd / one_minus

    def index(self, i: int, j: int) -> int:
        return self.n0 + self.p * i + self.q * j

    def psi_values(self, n_max: int) -> list:
        return self.seq.values_at(self.point, max(n_max, self.p + self.q))


@dataclass
class TodaGrid:
    kind: str
    i_values: list[int]
    j_values: list[int]
    rows: list[list]  # rows[j_index][i_index]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[self.j_values.index(j)][self.i_values.index(i)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "i": self.i_values,
            "j": self.j_values,
            "rows": [[value_to_json(v) for v in row] for row in self.rows],
        }


def _phi_table(params: TodaParams, i_values, j_values):
    idx = [params.index(i, j) for j in j_values for i in i_values]
    n_max = max(abs(n) for n in idx)
    vals = params.psi_values(n_max)
    return vals


def phi_grid(params: TodaParams, i_values: Sequence[int], j_values: Sequence[int]) -> TodaGrid:
    vals = _phi_table(params, i_values, j_values)
    rows = [[signed_value(vals, params.index(i, j)) for i in i_values] for j in j_values]
    return TodaGrid("phi", list(i_values), list(j_values), rows)


def ratio_cell(num, den, i, j):
    if den.is_zero():
        if num.is_zero():
            raise IndeterminateCellError(i, j)
        return PINF
    return num / den


def build_grids(params: TodaParams, i_values: Sequence[int], j_values: Sequence[int],
                scale=None) -> tuple[TodaGrid, TodaGrid, TodaGrid]:
    """phi, U and V = U - c on the requested cells.

    ``scale`` optionally regauges phi_n -> scale^n phi_n (U is unchanged).
    """
    i_values, j_values = list(i_values), list(j_values)
    ext_i = [i_values[0] - 1] + i_values + [i_values[-1] + 1]
    vals = _phi_table(params, ext_i, j_values)

    def phi(i, j):
        n = params.index(i, j)
        v = signed_value(vals, n)
        if scale is None:
            return v
        return v * (scale**n if n >= 0 else (1 / Fraction(scale)) ** (-n))

    phis, us, vs = [], [], []
    try:
        c = params.c
    except UndefinedConstantError:
        c = None
    for j in j_values:
        prow, urow, vrow = [], [], []
        for i in i_values:
            prow.append(phi(i, j))
            u = ratio_cell(phi(i + 1, j) * phi(i - 1, j), phi(i, j) * phi(i, j), i, j)
            urow.append(u)
            vrow.append(PINF if u is PINF or c is None else u - c)
        phis.append(prow)
        us.append(urow)
        vs.append(vrow)
    return (TodaGrid("phi", i_values, j_values, phis),
            TodaGrid("U", i_values, j_values, us),
            TodaGrid("V", i_values, j_values, vs))


def verify_dtoda_phi(params: TodaParams, i_values: Sequence[int], j_values: Sequence[int]) -> dict:
    """Check the quadratic phi relation exactly at every listed cell."""
    ext_i = [min(i_values) - 1, max(i_values) + 1]
    ext_j = [min(j_values) - 1, max(j_values) + 1]
    idx = [params.index(i, j) for i in list(i_values) + ext_i for j in list(j_values) + ext_j]
    vals = params.psi_values(max(abs(n) for n in idx))

    def phi(i, j):
        return signed_value(vals, params.index(i, j))

    failures = []
    cells = 0
    for j in j_values:
        for i in i_values:
            r = (phi(i, j + 1) * phi(i, j - 1) - params.cd * phi(i, j) * phi(i, j)
                 - params.delta2 * phi(i + 1, j) * phi(i - 1, j))
            cells += 1
            if not r.is_zero():
                failures.append({"cell": [i, j], "residual": value_to_json(r)})
    return {"ok": not failures, "cells": cells, "failures": failures,
            "delta2": value_to_json(params.delta2), "cd": value_to_json(params.cd)}


def verify_dtoda3(params: TodaParams, i_values, j_values) -> dict:
    """The same relation written with delta^-2 and c (1 - delta^-2)."""
    c = params.c
    inv = 1 / params.delta2
    k = c * (1 - inv)
    n_all = [params.index(i + di, j + dj) for i in i_values for j in j_values
             for di, dj in ((0, 1), (0, -1), (1, 0), (-1, 0), (0, 0))]
    vals = params.psi_values(max(abs(n) for n in n_all))

    def phi(i, j):
        return signed_value(vals, params.index(i, j))

    bad = []
    for j in j_values:
        for i in i_values:
            r = inv * phi(i, j + 1) * phi(i, j - 1) + k * phi(i, j) ** 2 - phi(i + 1, j) * phi(i - 1, j)
            if not r.is_zero():
                bad.append([i, j])
    return {"ok": not bad, "failures": bad}


def verify_dtodaV(params: TodaParams, V: TodaGrid) -> dict:
    """Cross-multiplied V relation at cells whose six factors are finite.

    (c+V)^2 (c+d2 V[i+1]) (c+d2 V[i-1]) = (c+d2 V)^2 (c+V[j+1]) (c+V[j-1])
    """
    c = params.c
    d2 = params.delta2
    checked, skipped, failures = [], [], []
    for jj, j in enumerate(V.j_values[1:-1], start=1):
        for ii, i in enumerate(V.i_values[1:-1], start=1):
            six = [V.rows[jj][ii], V.rows[jj][ii + 1], V.rows[jj][ii - 1],
                   V.rows[jj + 1][ii], V.rows[jj - 1][ii]]
            if any(v is PINF for v in six):
                skipped.append([i, j])
                continue
            v, vr, vl, vu, vd = six
            lhs = (c + v) ** 2 * (c + d2 * vr) * (c + d2 * vl)
            rhs = (c + d2 * v) ** 2 * (c + vu) * (c + vd)
            checked.append([i, j])
            if lhs != rhs:
                failures.append([i, j])
    return {"ok": not failures, "checked": checked, "skipped": skipped, "failures": failures}


def check_c1(params: TodaParams, flipped: bool = False) -> bool:
    """True iff c = 1 at the point.

    c = 1 means psi_{p+q} psi_{p-q} - psi_p^2 + psi_q^2 = 0; with
    ``flipped=True`` the opposite-sign combination is tested instead.
    """
    return c1_value(params, flipped).is_zero()


def c1_value(params: TodaParams, flipped: bool = False):
    vals = params.psi_values(params.p + params.q)
    pp, qq = vals[params.p] ** 2, vals[params.q] ** 2
    prod = vals[params.p + params.q] * signed_value(vals, params.p - params.q)
    return prod + (pp - qq) if flipped else prod - pp + qq


def surd(text: str, r) -> QuadExt:
    """Parse '0', '-1/3', 'sqrt(-3)', '-2*sqrt(5)' into the extension theta^2 = r."""
    r = Fraction(r)
    s = text.replace(" ", "")
    if "sqrt(" not in s:
        return QuadExt(Fraction(s), 0, r)
    coef, _, rest = s.partition("sqrt(")
    inner = Fraction(rest.rstrip(")"))
    coef = coef.rstrip("*")
    k = Fraction(-1) if coef == "-" else Fraction(1) if coef in ("", "+") else Fraction(coef)
    ratio = inner / r
    num, den = _exact_sqrt(ratio.numerator), _exact_sqrt(ratio.denominator)
    if num is None or den is None:
        raise ValueError(f"sqrt({inner}) is not a rational multiple of sqrt({r})")
    return QuadExt(0, k * Fraction(num, den), r)


def _exact_sqrt(n: int):
    if n < 0:
        return None
    from math import isqrt
    s = isqrt(n)
    return s if s * s == n else None
