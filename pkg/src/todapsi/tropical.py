"""Ultradiscrete (max-plus) Toda layer.

Valuation-seeded grids use g_{i,j} = val(psi_{n0 + p i + q j}) and

    f[i][j] = g_{i+1,j} - 2 g_{i,j} + g_{i-1,j},     d = -2 (g_q - g_p),

and the equation checked / iterated is

    f[i][j+1] - 2 f[i][j] + f[i][j-1]
        = max(0, f[i+1][j] + d) - 2 max(0, f[i][j] + d) + max(0, f[i-1][j] + d).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import INF, ExtInt, IndeterminateError, max0
from .psi import PsiSequence
from .valuation import ValuationPoint, val


@dataclass
class TropicalGrid:
    rows: list[list[ExtInt]]          # rows[j_index][i_index]
    d: ExtInt
    i_values: list[int]
    j_values: list[int]
    params: dict = field(default_factory=dict)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[self.j_values.index(j)][self.i_values.index(i)]

    def to_json(self) -> dict:
        out = {
            "i": self.i_values,
            "j": self.j_values,
            "d": self.d.to_json(),
            "rows": [[v.to_json() for v in row] for row in self.rows],
        }
        out.update({k: (v.to_json() if isinstance(v, ExtInt) else v) for k, v in self.params.items()})
        return out

    def to_csv(self) -> str:
        lines = ["j\\i," + ",".join(str(i) for i in self.i_values)]
        for j, row in zip(self.j_values, self.rows):
            lines.append(f"{j}," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table(cls, rows, d, i_start=0, j_start=0, **params) -> "TropicalGrid":
        conv = [[ExtInt.of(v) for v in row] for row in rows]
        width = len(conv[0])
        return cls(conv, ExtInt.of(d), list(range(i_start, i_start + width)),
                   list(range(j_start, j_start + len(conv))), dict(params))


class GValues:
    """Cached g_n = val(psi_n) at a point, with g_{-n} = g_n."""

    def __init__(self, seq: PsiSequence, pt: ValuationPoint):
        self.seq, self.pt = seq, pt
        self._cache: dict[int, ExtInt] = {}

    def __getitem__(self, n: int) -> ExtInt:
        n = abs(n)
        if n not in self._cache:
            self._cache[n] = val(self.seq[n], self.pt)
        return self._cache[n]


def second_difference(a: ExtInt, b: ExtInt, c: ExtInt) -> ExtInt:
    """a - 2 b + c, with infinities propagated and inf - inf refused."""
    return a + c - b * 2


def f_grid(seq: PsiSequence, pt: ValuationPoint, p: int, q: int, n0: int,
           i_values: Sequence[int], j_values: Sequence[int], sign: int = 1) -> TropicalGrid:
    """Valuation-seeded f grid.  ``sign=-1`` gives -val(U) instead of +val(U)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = GValues(seq, pt)
    rows = []
    for j in j_values:
        row = []
        for i in i_values:
            n = n0 + p * i + q * j
            try:
                v = second_difference(g[n + p], g[n], g[n - p])
            except IndeterminateError as exc:
                raise IndeterminateError(f"cell ({i}, {j}): {exc}") from exc
            row.append(v * sign if v.is_finite or sign == 1 else -v)
        rows.append(row)
    d = (g[q] - g[p]) * -2
    val_cd = g[p + q] + g[p - q] - g[p] * 2
    return TropicalGrid(rows, d, list(i_values), list(j_values),
                        {"p": p, "q": q, "n0": n0, "val_cd": val_cd,
                         "standing_condition": val_cd == 0})


def _rhs(fl: ExtInt, fc: ExtInt, fr: ExtInt, d: ExtInt) -> ExtInt:
    return max0(fr + d) - max0(fc + d) * 2 + max0(fl + d)


def verify_uDTE(grid: TropicalGrid) -> dict:
    """Check the ultradiscrete equation at every interior cell.

    Cells whose nine inputs are not all finite are reported in ``excluded``;
    cells where inf - inf would arise are reported in ``indeterminate``.
    """
    rows, d = grid.rows, grid.d
    checked, excluded, failures, indeterminate = [], [], [], []
    for jj in range(1, len(rows) - 1):
        for ii in range(1, len(rows[jj]) - 1):
            cell = [grid.i_values[ii], grid.j_values[jj]]
            inputs = [rows[jj + 1][ii], rows[jj][ii], rows[jj - 1][ii],
                      rows[jj][ii - 1], rows[jj][ii + 1]]
            if not all(v.is_finite for v in inputs):
                excluded.append(cell)
                try:
                    lhs = second_difference(rows[jj + 1][ii], rows[jj][ii], rows[jj - 1][ii])
                    _rhs(rows[jj][ii - 1], rows[jj][ii], rows[jj][ii + 1], d)
                except IndeterminateError:
                    indeterminate.append(cell)
                continue
            lhs = second_difference(rows[jj + 1][ii], rows[jj][ii], rows[jj - 1][ii])
            rhs = _rhs(rows[jj][ii - 1], rows[jj][ii], rows[jj][ii + 1], d)
            checked.append(cell)
            if lhs != rhs:
                failures.append({"cell": cell, "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return {"ok": not failures, "checked": checked, "excluded": excluded,
            "indeterminate": indeterminate, "failures": failures}


class EvolutionError(ArithmeticError):
    pass


def evolve(prev_row: Sequence, row: Sequence, d, steps: int, boundary: str = "fixed",
           left=0, right=0) -> TropicalGrid:
    """Iterate the equation forward in j.

    ``fixed`` pins ghost columns to ``left``/``right``; ``periodic`` wraps.
    The returned grid holds the two seed rows followed by ``steps`` new rows.
    """
    if len(prev_row) != len(row):
        raise ValueError("seed rows must have equal length")
    if boundary not in ("fixed", "periodic"):
        raise ValueError("boundary must be 'fixed' or 'periodic'")
    d = ExtInt.of(d)
    left, right = ExtInt.of(left), ExtInt.of(right)
    a = [ExtInt.of(v) for v in prev_row]
    b = [ExtInt.of(v) for v in row]
    width = len(b)
    rows = [a, b]
    for step in range(steps):
        new = []
        for i in range(width):
            if boundary == "periodic":
                fl, fr = b[(i - 1) % width], b[(i + 1) % width]
            else:
                fl = b[i - 1] if i > 0 else left
                fr = b[i + 1] if i < width - 1 else right
            try:
                new.append(b[i] * 2 - a[i] + _rhs(fl, b[i], fr, d))
            except IndeterminateError as exc:
                raise EvolutionError(f"inf - inf at column {i}, step {step + 1}") from exc
        a, b = b, new
        rows.append(new)
    return TropicalGrid(rows, d, list(range(width)), list(range(len(rows))),
                        {"boundary": boundary})


def genericity_check(seq: PsiSequence, pt: ValuationPoint, p: int, q: int, n0: int,
                     i_values: Sequence[int], j_values: Sequence[int]) -> dict:
    """Compare val(cd + delta^2 U) with min(val cd, val delta^2 U) cell by cell.

    cd + delta^2 U is formed directly as
    (psi_{p+q} psi_{p-q} phi^2 + psi_q^2 phi_{i+1} phi_{i-1}) / (psi_p^2 phi^2),
    so a cancellation between the two terms shows up as a strict inequality.
    """
    g = GValues(seq, pt)
    val_cd = g[p + q] + g[p - q] - g[p] * 2
    val_d2 = (g[q] - g[p]) * 2
    flags, checked, skipped = [], [], []
    a = seq[p + q] * seq[p - q]
    b = seq[q] ** 2
    den_base = seq[p] ** 2
    for j in j_values:
        for i in i_values:
            n = n0 + p * i + q * j
            cell = [i, j]
            if not g[n].is_finite:
                skipped.append(cell)
                continue
            phi, phi_r, phi_l = seq[n], seq[n + p], seq[n - p]
            num = a * phi * phi + b * phi_r * phi_l
            total = val(num, pt) - (g[p] * 2 + g[n] * 2)
            val_u = g[n + p] + g[n - p] - g[n] * 2
            bound = min(val_cd, val_d2 + val_u)
            checked.append(cell)
            if total != bound:
                flags.append({"cell": cell, "val_sum": total.to_json(), "min": bound.to_json()})
    return {"ok": not flags, "flags": flags, "checked": checked, "skipped": skipped,
            "val_cd": val_cd.to_json()}


def table_grid(table: dict) -> TropicalGrid:
    """TropicalGrid from a reference table dict (rows, d, i_start)."""
    p, q, n0 = table["pqn0"]
    return TropicalGrid.from_table(table["rows"], table["d"], i_start=table.get("i_start", 0),
                                   p=p, q=q, n0=n0)


__all__ = [
    "INF", "TropicalGrid", "GValues", "f_grid", "verify_uDTE", "evolve",
    "genericity_check", "EvolutionError", "table_grid",
]
