"""One-shot regeneration of every reference table and listing.

Each check returns a report item ``{item, status, expected, actual}``;
``status`` is "pass" or "fail".
"""
from __future__ import annotations

from fractions import Fraction

from . import reference as ref
from .curve import EllipticCurve, PointValue
from .exact import ExtInt
from .psi import PsiSequence, check_listing
from .toda import TodaParams, build_grids, is_inf, surd, value_to_json
from .tropical import f_grid
from .valuation import ValuationPoint, g_sequence


def curve(name: str) -> EllipticCurve:
    return EllipticCurve(*ref.CURVES[name])


def _item(name, expected, actual, ok):
    return {"item": name, "status": "pass" if ok else "fail", "expected": expected, "actual": actual}


def _u_matches(table, grid, r) -> bool:
    for trow, grow in zip(table, grid.rows):
        for t, g in zip(trow, grow):
            if t == "inf" or is_inf(g):
                if not (t == "inf" and is_inf(g)):
                    return False
            elif g != surd(t, r):
                return False
    return True


def check_psi_at_minus_one():
    c = curve("nodal")
    pt = PointValue.from_x(c, -1)
    vals = PsiSequence(c).values_at(pt, 12)
    ok = all(surd(t, pt.y.r) == v for t, v in zip(ref.PSI_AT_MINUS_ONE, vals))
    return _item("psi values at x = -1", ref.PSI_AT_MINUS_ONE, [value_to_json(v) for v in vals], ok)


def check_u_grid(p, q, table):
    c = curve("nodal")
    params = TodaParams(PsiSequence(c), p, q, 0, PointValue.from_x(c, -1))
    _, U, _ = build_grids(params, range(4), range(4))
    consts = ref.GRID_CONSTANTS[(p, q)]
    ok_consts = params.delta2 == Fraction(consts["delta2"]) and params.cd == Fraction(consts["cd"])
    actual = {"rows": U.to_json()["rows"], "delta2": value_to_json(params.delta2),
              "cd": value_to_json(params.cd)}
    expected = {"rows": table, **consts}
    return _item(f"U grid (p, q) = ({p}, {q})", expected, actual, _u_matches(table, U, params.point.y.r) and ok_consts)


def g_values(name: str, max_n: int = 12):
    c = curve(name)
    if name == "cubic_quarter":
        pt = ValuationPoint.branch(c, factor=c.f)
    else:
        pt = ValuationPoint.branch(c, b=0)
    return g_sequence(PsiSequence(c), pt, max_n), pt


def check_g_table(name, table, label):
    gs, _ = g_values(name)
    expected = [ExtInt.of(v) for v in table]
    return _item(label, table, [g.to_json() for g in gs], gs == expected)


def check_f_table(table, label):
    c = curve(table["curve"])
    p, q, n0 = table["pqn0"]
    _, pt = g_values(table["curve"], 1)
    rows = table["rows"]
    i_vals = list(range(table["i_start"], table["i_start"] + len(rows[0])))
    grid = f_grid(PsiSequence(c), pt, p, q, n0, i_vals, range(len(rows)))
    actual = {"rows": grid.to_json()["rows"], "d": grid.d.to_json(),
              "val_cd": grid.params["val_cd"].to_json()}
    expected = {"rows": rows, "d": table["d"], "val_cd": table["val_cd"]}
    ok = (actual["rows"] == rows and grid.d == ExtInt.of(table["d"])
          and grid.params["val_cd"] == ExtInt.of(table["val_cd"]))
    return _item(label, expected, actual, ok)


def check_listing_item(name):
    seq = PsiSequence(curve(name))
    listing = ref.LISTINGS[name]
    rep = check_listing(seq, listing)
    bad = [r["n"] for r in rep if not r["ok"]]
    return _item(f"psi listing on {name}", {"mismatched": []}, {"mismatched": bad}, not bad)


def reproduce_all() -> list[dict]:
    return [
        check_psi_at_minus_one(),
        check_u_grid(3, 2, ref.U_GRID_3_2),
        check_u_grid(2, 3, ref.U_GRID_2_3),
        check_g_table("cubic_quarter", ref.G_CUBIC_QUARTER_AT_Y0, "g_n on cubic_quarter at y = 0"),
        check_f_table(ref.F_GRID_3_2, "f grid (p, q, n0) = (3, 2, 0)"),
        check_g_table("cubic_minus_x", ref.G_CUBIC_MINUS_X_AT_X0, "g_n on cubic_minus_x at x = 0"),
        check_f_table(ref.F_GRID_5_2, "f grid (p, q, n0) = (5, 2, 0)"),
        check_listing_item("cubic_quarter"),
        check_listing_item("cubic_minus_x"),
        check_listing_item("nodal"),
    ]
