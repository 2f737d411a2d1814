"""Command-line entry point: ``todapsi <subcommand> [options]``.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
Exact values are written as strings ("p/q"); infinities as "inf"/"-inf".
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import analytic, reference, valuation
from .curve import CurveError, EllipticCurve, PointValue
from .exact import ExtInt, IndeterminateError, InexactDivisionError, evaluate_expression
from .genus2 import TEST_CURVE, DivisorError, Genus2Curve, MumfordDivisor, wp_values
from .psi import (DEFAULT_BK_BOUND, PsiSequence, check_divisibility, check_listing,
                  check_structure, condition_polynomial, psi_bk, verify_recursion_identity)
from .serialize import dumps, to_jsonable
from .toda import (TodaParams, UndefinedConstantError, build_grids, value_to_json, verify_dtoda3,
                   verify_dtoda_phi, verify_dtodaV)
from .tropical import EvolutionError, f_grid, evolve, genericity_check, verify_uDTE
from .valuation import ValuationPoint, g_sequence


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


@dataclass
class RunConfig:
    curve: object = None
    point: object = None
    pq: object = None
    n0: int = 0
    rows: int = 4
    cols: int = 4
    i_start: int = 0
    j_start: int = 0
    max_n: int = 12
    kind: str = "U"
    symbolic: bool = False
    listing: object = None
    expr: str | None = None
    seed_rows: object = None
    d: object = None
    steps: int = 5
    boundary: str = "fixed"
    left: object = 0
    right: object = 0
    samples: int = 50
    seed: int = 0
    h: float = 1e-3
    divisors: object = None
    divisor: object = None
    output: str | None = None
    format: str = "json"
    tolerances: dict = field(default_factory=dict)
    series_cap: int | None = None

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    def validate(self) -> None:
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.kind not in ("phi", "U", "V"):
            raise UsageError(f"kind must be phi, U or V, not {self.kind!r}")
        if self.boundary not in ("fixed", "periodic"):
            raise UsageError("boundary must be fixed or periodic")
        for name in ("rows", "cols", "max_n", "samples"):
            if int(getattr(self, name)) < 1:
                raise UsageError(f"{name} must be positive")
        if self.steps < 0:
            raise UsageError("steps must be >= 0")
        unknown = set(self.tolerances) - set(analytic.TOLERANCES)
        if unknown:
            raise UsageError(f"unknown tolerance keys: {sorted(unknown)}")
        if self.series_cap is not None and int(self.series_cap) < 8:
            raise UsageError("series_cap must be >= 8")


# ---------------------------------------------------------------------------
# input parsing

GENUS1_PRESETS = {name: lam for name, lam in reference.CURVES.items()}


def _load_json_arg(text, what):
    """Inline JSON, or a path to a JSON file."""
    if not isinstance(text, str):
        return text
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")) and path.is_file():
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed {what} JSON: {exc.msg}") from exc


def parse_curve(source, genus=1):
    if source is None:
        if genus == 2:
            return TEST_CURVE
        raise UsageError("--curve is required")
    if isinstance(source, str) and source in GENUS1_PRESETS:
        return EllipticCurve(*GENUS1_PRESETS[source])
    if source == "generic":
        return EllipticCurve.generic()
    if source == "genus2_test":
        return TEST_CURVE
    data = _load_json_arg(source, "curve")
    if not isinstance(data, dict):
        raise UsageError("curve JSON must be an object")
    try:
        if data.get("genus", 1) == 2:
            return Genus2Curve.from_json(data)
        return EllipticCurve.from_json(data)
    except (CurveError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid curve: {exc}") from exc


def _elliptic(cfg):
    c = parse_curve(cfg.curve)
    if not isinstance(c, EllipticCurve):
        raise UsageError("this subcommand needs a genus-1 curve")
    return c


def _genus2(cfg):
    c = parse_curve(cfg.curve, genus=2)
    if not isinstance(c, Genus2Curve):
        raise UsageError("this subcommand needs a genus-2 curve")
    return c


def parse_point_value(curve, source) -> PointValue:
    data = _load_json_arg(source, "point")
    if isinstance(data, (int, str)):
        data = {"x": data}
    if not isinstance(data, dict) or "x" not in data:
        raise UsageError('point JSON needs "x"')
    try:
        return PointValue.from_json(curve, data)
    except (CurveError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid point: {exc}") from exc


def parse_valuation_point(curve, source) -> ValuationPoint:
    data = _load_json_arg(source, "point")
    if not isinstance(data, dict):
        raise UsageError('point JSON must be an object with "kind"')
    try:
        return ValuationPoint.from_json(curve, data)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid point: {exc}") from exc


def parse_pq(source) -> tuple[int, int]:
    if source is None:
        raise UsageError("--pq is required")
    try:
        p, q = (int(v) for v in (source.split(",") if isinstance(source, str) else source))
    except (ValueError, TypeError) as exc:
        raise UsageError("--pq must look like 3,2") from exc
    return p, q


def _require(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _ranges(cfg):
    return (list(range(cfg.i_start, cfg.i_start + cfg.cols)),
            list(range(cfg.j_start, cfg.j_start + cfg.rows)))


# ---------------------------------------------------------------------------
# subcommands


def cmd_psi_table(cfg):
    curve = EllipticCurve.generic() if cfg.symbolic else _elliptic(cfg)
    seq = PsiSequence(curve, max_n=max(cfg.max_n + 2, 8))
    out = []
    for n in range(1, cfg.max_n + 1):
        e = seq[n].to_json()
        out.append({"n": n, "p_part": e["p_part"], "q_part": e["q_part"]})
    return out


def _listing(source):
    if isinstance(source, str) and source in reference.LISTINGS:
        return reference.LISTINGS[source]
    data = _load_json_arg(source, "listing")
    if not isinstance(data, dict):
        raise UsageError("listing JSON must map n to an expression")
    return {int(k): v for k, v in data.items()}


def cmd_psi_check(cfg):
    curve = EllipticCurve.generic() if cfg.symbolic else _elliptic(cfg)
    top = cfg.max_n
    seq = PsiSequence(curve, max_n=2 * top + 2)
    structure = [check_structure(seq, n) for n in range(1, top + 1)]
    rec = [{"m": m, "n": n, "ok": verify_recursion_identity(seq, m, n)}
           for m in range(2, top // 2 + 1) for n in range(1, m)]
    bk_top = DEFAULT_BK_BOUND if curve.is_symbolic else 10
    bk = [{"n": n, "ok": psi_bk(seq, n, bound=bk_top) == seq[n]}
          for n in range(2, min(top, bk_top) + 1)]
    div = [{"n": n, "m": m, "ok": check_divisibility(seq, n, m)}
           for n in range(2, top + 1) for m in range(2 * n, top + 1, n)]
    ok = (all(s["parity_ok"] for s in structure)
          and all(r["ok"] for r in rec + bk + div)
          and (not curve.is_symbolic or all(s["degree_ok"] for s in structure)))
    out = {"structure": structure, "recursion": rec, "determinant": bk, "divisibility": div}
    if cfg.listing is not None:
        rep = check_listing(seq, _listing(cfg.listing))
        out["listing"] = [{"n": r["n"], "ok": r["ok"], "negated": r["negated"]} for r in rep]
        ok = ok and all(r["ok"] for r in rep)
    if cfg.pq is not None:
        p, q = parse_pq(cfg.pq)
        cond = condition_polynomial(seq, p, q)
        out["c_equals_one"] = {"element": cond["element"], "degree": cond["degree"],
                               "rational_roots": {k: {str(r): m for r, m in v.items()}
                                                  for k, v in cond["rational_roots"].items()}}
    out["ok"] = ok
    if not ok:
        raise VerificationFailed(out)
    return out


def cmd_eval(cfg):
    curve = _elliptic(cfg)
    pt = parse_point_value(curve, _require(cfg.point, "--point"))
    seq = PsiSequence(curve, max_n=max(cfg.max_n, 8))
    if cfg.expr:
        ns = {"x": curve.x(), "y": curve.y()}
        ns.update({f"psi{k}": seq[k] for k in range(cfg.max_n + 1)})
        try:
            elem = evaluate_expression(cfg.expr, ns)
        except (ValueError, SyntaxError, KeyError, NameError) as exc:
            raise UsageError(f"bad expression: {exc}") from exc
        if not hasattr(elem, "evaluate"):
            elem = curve.one() * elem
        return {"point": pt, "value": elem.evaluate(pt)}
    vals = seq.values_at(pt, cfg.max_n)
    return {"point": pt, "values": [{"n": n, "value": v} for n, v in enumerate(vals)]}


def cmd_val_table(cfg):
    curve = _elliptic(cfg)
    pt = parse_valuation_point(curve, _require(cfg.point, "--point"))
    return g_sequence(PsiSequence(curve, max_n=max(cfg.max_n, 8)), pt, cfg.max_n)


def _toda_params(cfg):
    curve = _elliptic(cfg)
    pt = parse_point_value(curve, _require(cfg.point, "--point"))
    p, q = parse_pq(cfg.pq)
    try:
        return TodaParams(PsiSequence(curve), p, q, cfg.n0, pt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _constants(params):
    try:
        c = params.c
    except UndefinedConstantError:
        c = None
    return {"delta2": value_to_json(params.delta2), "cd": value_to_json(params.cd),
            "c": None if c is None else value_to_json(c)}


def cmd_dtoda_grid(cfg):
    params = _toda_params(cfg)
    i_vals, j_vals = _ranges(cfg)
    phi, U, V = build_grids(params, i_vals, j_vals)
    grid = {"phi": phi, "U": U, "V": V}[cfg.kind]
    return {**grid.to_json(), **_constants(params)}


def cmd_dtoda_verify(cfg):
    params = _toda_params(cfg)
    i_vals, j_vals = _ranges(cfg)
    out = {"phi_relation": verify_dtoda_phi(params, i_vals, j_vals), **_constants(params)}
    try:
        params.c
    except UndefinedConstantError:
        out["ok"] = out["phi_relation"]["ok"]
    else:
        out["inverse_form"] = verify_dtoda3(params, i_vals, j_vals)
        _, _, V = build_grids(params, [i_vals[0] - 1] + i_vals + [i_vals[-1] + 1],
                              [j_vals[0] - 1] + j_vals + [j_vals[-1] + 1])
        out["V_relation"] = verify_dtodaV(params, V)
        out["ok"] = all(out[k]["ok"] for k in ("phi_relation", "inverse_form", "V_relation"))
    if not out["ok"]:
        raise VerificationFailed(out)
    return out


def cmd_utoda_grid(cfg):
    curve = _elliptic(cfg)
    pt = parse_valuation_point(curve, _require(cfg.point, "--point"))
    p, q = parse_pq(cfg.pq)
    i_vals, j_vals = _ranges(cfg)
    seq = PsiSequence(curve)
    grid = f_grid(seq, pt, p, q, cfg.n0, i_vals, j_vals)
    if cfg.format == "csv":
        return grid
    out = grid.to_json()
    out["equation"] = verify_uDTE(grid)
    out["genericity"] = genericity_check(seq, pt, p, q, cfg.n0, i_vals, j_vals)
    return out


def cmd_utoda_evolve(cfg):
    seeds = _load_json_arg(_require(cfg.seed_rows, "--rows-json"), "rows")
    if not (isinstance(seeds, list) and len(seeds) == 2 and all(isinstance(r, list) for r in seeds)):
        raise UsageError("--rows-json must be a JSON list of two rows")
    try:
        return evolve(seeds[0], seeds[1], ExtInt.of(_require(cfg.d, "--d")), cfg.steps,
                      cfg.boundary, cfg.left, cfg.right)
    except EvolutionError as exc:
        raise VerificationFailed({"ok": False, "error": str(exc)}) from exc
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_analytic_check(cfg):
    curve = _elliptic(cfg)
    if curve.is_symbolic:
        raise UsageError("analytic-check needs numeric lambdas")
    tol = {**analytic.TOLERANCES, **{k: float(v) for k, v in cfg.tolerances.items()}}
    w = analytic.WeierstrassData.from_lambdas(*curve.lambdas)
    pairs = analytic.random_admissible_pairs(w, cfg.samples, seed=cfg.seed)
    add1 = max(analytic.check_add1(w, u, v) for u, v in pairs)
    ode = max(analytic.ode_residual(w, u) for u, _ in pairs)
    sig = max(analytic.sigma_relation_residual(w, u) for u, _ in pairs[:10])
    probe = analytic.ContinuousTodaProbe(0.16 * w.u_max, 0.32j * w.u_max, [-1, 0, 1, 2, 3], cfg.h)
    toda = analytic.check_continuous_toda(w, probe)
    order = analytic.convergence_order(w, probe)
    out = {
        "g2": w.g2.real, "g3": w.g3.real, "u_max": w.u_max, "samples": len(pairs), "seed": cfg.seed,
        "ode_max": ode, "add1_max": add1, "sigma_max": sig,
        "toda_max": toda["max_residual"], "toda_h": cfg.h, "toda_order": order,
        "tolerances": tol,
    }
    out["ok"] = (ode < tol["ode"] and add1 < tol["add1"] and sig < tol["sigma"]
                 and toda["max_residual"] < tol["toda"] and abs(order - 2) < 0.25)
    if not out["ok"]:
        raise VerificationFailed(out)
    return out


def _divisor(curve, data):
    try:
        return MumfordDivisor.from_json(curve, data)
    except (KeyError, DivisorError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid divisor: {exc}") from exc


def cmd_g2_add(cfg):
    curve = _genus2(cfg)
    data = _load_json_arg(_require(cfg.divisors, "--divisors"), "divisors")
    if not isinstance(data, list) or not data:
        raise UsageError("--divisors must be a non-empty JSON list")
    total = curve.identity()
    for item in data:
        total = total + _divisor(curve, item)
    return {"curve": curve, "sum": total}


def cmd_g2_wp(cfg):
    curve = _genus2(cfg)
    D = _divisor(curve, _load_json_arg(_require(cfg.divisor, "--divisor"), "divisor"))
    try:
        return {"divisor": D, "wp": wp_values(D)}
    except DivisorError as exc:
        raise UsageError(str(exc)) from exc


def cmd_reproduce(cfg):
    from .reproduce import reproduce_all
    items = reproduce_all()
    out = {"items": items, "passed": sum(i["status"] == "pass" for i in items), "total": len(items)}
    if out["passed"] != out["total"]:
        raise VerificationFailed(out)
    return out


COMMANDS = {
    "psi-table": (cmd_psi_table, "psi_n polynomials as sorted term lists"),
    "psi-check": (cmd_psi_check, "structure, recursion, determinant and divisibility checks"),
    "eval": (cmd_eval, "psi values (or an expression in psiK, x, y) at a point"),
    "val-table": (cmd_val_table, "valuations g_n = val(psi_n) at a point"),
    "dtoda-grid": (cmd_dtoda_grid, "phi, U or V grid at a point"),
    "dtoda-verify": (cmd_dtoda_verify, "exact check of the discrete Toda relations"),
    "utoda-grid": (cmd_utoda_grid, "valuation-seeded ultradiscrete grid"),
    "utoda-evolve": (cmd_utoda_evolve, "iterate the ultradiscrete equation from two rows"),
    "analytic-check": (cmd_analytic_check, "numerical residuals of the Weierstrass layer"),
    "g2-add": (cmd_g2_add, "sum of Mumford divisors on a genus-2 curve"),
    "g2-wp": (cmd_g2_wp, "wp11, wp12, wp22 of a degree-2 divisor"),
    "reproduce-paper": (cmd_reproduce, "regenerate every reference table with pass/fail"),
}


# ---------------------------------------------------------------------------
# argument handling


def _add_common(sp):
    a = sp.add_argument
    a("--config", help="JSON file with RunConfig keys")
    a("--curve", help="preset name, JSON file, or inline JSON")
    a("--point", help="point JSON (inline or file)")
    a("--pq", help="p,q")
    a("--n0", type=int)
    a("--rows", type=int)
    a("--cols", type=int)
    a("--i-start", dest="i_start", type=int)
    a("--j-start", dest="j_start", type=int)
    a("--max-n", dest="max_n", type=int)
    a("--kind", choices=["phi", "U", "V"])
    a("--symbolic", action="store_true", default=None)
    a("--listing", help="preset name or JSON {n: expression}")
    a("--expr")
    a("--rows-json", dest="seed_rows", help="two seed rows as JSON")
    a("--d")
    a("--steps", type=int)
    a("--boundary", choices=["fixed", "periodic"])
    a("--left")
    a("--right")
    a("--samples", type=int)
    a("--seed", type=int)
    a("--h", type=float)
    a("--divisors")
    a("--divisor")
    a("--output", "-o")
    a("--format", choices=["json", "csv"])
    a("--tol", action="append", default=None, metavar="KEY=VALUE")
    a("--series-cap", dest="series_cap", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="todapsi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        _add_common(sub.add_parser(name, help=help_text))
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    data = {}
    if ns.config:
        raw = _load_json_arg(ns.config, "config")
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(raw) - RunConfig.keys()
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        data.update(raw)
    for key in RunConfig.keys():
        v = getattr(ns, key, None)
        if v is not None and key != "tolerances":
            data[key] = v
    if ns.tol:
        tol = dict(data.get("tolerances", {}))
        for item in ns.tol:
            k, sep, v = item.partition("=")
            if not sep:
                raise UsageError("--tol expects KEY=VALUE")
            tol[k] = v
        data["tolerances"] = tol
    try:
        cfg = RunConfig(**data)
        if not isinstance(cfg.tolerances, dict):
            raise UsageError("tolerances must be an object")
        for v in cfg.tolerances.values():
            float(v)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc
    cfg.validate()
    return cfg


def _emit(result, cfg):
    if cfg.format == "csv":
        if not hasattr(result, "to_csv"):
            raise UsageError("csv output is only available for utoda-grid and utoda-evolve")
        text = result.to_csv()
    else:
        text = dumps(result)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func = COMMANDS[ns.command][0]
    saved_cap = valuation.PRECISION_CAP
    try:
        cfg = make_config(ns)
        if cfg.series_cap is not None:
            valuation.PRECISION_CAP = int(cfg.series_cap)
        result = func(cfg)
        _emit(result, cfg)
        return 0
    except UsageError as exc:
        print(f"todapsi {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        if cfg.format == "csv":
            print(json.dumps(to_jsonable(exc.payload)), file=sys.stderr)
        else:
            _emit(exc.payload, cfg)
        return 1
    except (IndeterminateError, InexactDivisionError, valuation.PrecisionError,
            valuation.UnsupportedPointError, DivisorError, CurveError) as exc:
        print(f"todapsi {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    finally:
        valuation.PRECISION_CAP = saved_cap

if __name__ == "__main__":
    sys.exit(main())
