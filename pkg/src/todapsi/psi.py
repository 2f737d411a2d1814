"""Division polynomials psi_n of an elliptic curve.

``PsiSequence`` builds psi_n from the closed forms of psi_1..psi_4 and the
duplication recursions::

    psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m+1}^3 psi_{m-1}
    psi_{2m}   = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m+1}^2 psi_{m-2}) / psi_2

with psi_0 = 0 and psi_{-n} = -psi_n.  The Brioschi-Kiepert Hankel
determinant gives an independent route used as a cross-check.
"""
from __future__ import annotations

import os
import threading
from fractions import Fraction
from math import factorial, gcd
from typing import Mapping

from .curve import CurveElement, EllipticCurve, PointValue
from .exact import InexactDivisionError, MultiPoly, QuadExt, evaluate_expression, rational_roots

DEFAULT_MAX_N = int(os.environ.get("TODAPSI_MAX_N", "64"))
DEFAULT_BK_BOUND = 8


class PsiRangeError(ValueError):
    pass


def closed_form_psi3(curve: EllipticCurve) -> CurveElement:
    x = curve.x()
    l0, l1, l2 = (curve._coeff(i) for i in range(3))
    p = 3 * x.p**4 + 4 * l2 * x.p**3 + 6 * l1 * x.p**2 + 12 * l0 * x.p - l1 * l1 + 4 * l2 * l0
    return curve.element(p, 0)


def closed_form_psi4(curve: EllipticCurve) -> CurveElement:
    X = curve.x().p
    l0, l1, l2 = (curve._coeff(i) for i in range(3))
    inner = (
        X**6
        + 2 * l2 * X**5
        + 5 * l1 * X**4
        + 20 * l0 * X**3
        + (20 * l2 * l0 - 5 * l1 * l1) * X**2
        + (8 * l2 * l2 * l0 - 2 * l2 * l1 * l1 - 4 * l1 * l0) * X
        + 4 * l2 * l1 * l0
        - l1**3
        - 8 * l0 * l0
    )
    return curve.element(0, inner * -4)


class PsiSequence:
    """Memoized n -> psi_n for one curve.

    ``seeds`` may override psi_3 / psi_4 (useful for exploring what a
    different starting pair generates); by default the closed forms are used.
    """

    def __init__(self, curve: EllipticCurve, max_n: int | None = None,
                 seeds: Mapping[int, CurveElement] | None = None):
        self.curve = curve
        self.max_n = DEFAULT_MAX_N if max_n is None else int(max_n)
        self._lock = threading.Lock()
        memo = {
            0: curve.zero(),
            1: curve.one(),
            2: curve.element(0, -2),
            3: closed_form_psi3(curve),
            4: closed_form_psi4(curve),
        }
        if seeds:
            for k, v in seeds.items():
                if k not in (3, 4):
                    raise ValueError("only psi_3 and psi_4 may be seeded")
                memo[k] = v
        self._memo: dict[int, CurveElement] = memo

    def __getitem__(self, n: int) -> CurveElement:
        return self.psi(n)

    def psi(self, n: int) -> CurveElement:
        if n < 0:
            return -self.psi(-n)
        got = self._memo.get(n)
        if got is not None:
            return got
        if n > self.max_n:
            raise PsiRangeError(f"n = {n} exceeds max_n = {self.max_n}; raise max_n to go further")
        with self._lock:
            self._fill(n)
        return self._memo[n]

    def _fill(self, n: int):
        # collect every index the recursion needs, then build bottom-up
        need = set()
        stack = [n]
        while stack:
            k = stack.pop()
            if k in self._memo or k in need:
                continue
            need.add(k)
            m = k // 2
            deps = (m - 2, m - 1, m, m + 1, m + 2) if k % 2 == 0 else (m - 1, m, m + 1, m + 2)
            stack.extend(d for d in deps if d >= 0)
        for k in sorted(need):
            self._memo[k] = self._step(k)

    def _step(self, n: int) -> CurveElement:
        ps = self._memo
        m = n // 2
        if n % 2:
            return ps[m + 2] * ps[m] ** 3 - ps[m + 1] ** 3 * ps[m - 1]
        a = ps[m + 2] * ps[m - 1] ** 2 - ps[m + 1] ** 2 * ps[m - 2]
        num = ps[m] * a
        # dividing by psi_2 = -2y
        try:
            return num.divide_by_y() * Fraction(-1, 2)
        except InexactDivisionError as exc:
            raise InexactDivisionError(
                f"psi_{n}: division by psi_2 is not exact; the recursion is inconsistent"
            ) from exc

    def computed(self) -> list[int]:
        return sorted(self._memo)

    # -- values at a point ----------------------------------------------------

    def values_at(self, point: PointValue, n_max: int) -> list[QuadExt]:
        """[psi_0(P), ..., psi_{n_max}(P)] by running the recursion on scalars."""
        w2 = self.psi(2).evaluate(point)
        base = [self.psi(k).evaluate(point) for k in range(min(n_max, 4) + 1)]
        if n_max <= 4:
            return base
        if w2.is_zero():
            return [self.psi(k).evaluate(point) for k in range(n_max + 1)]
        w = base + [None] * (n_max - 4)
        inv2 = w2.inverse()

        def get(k):
            if w[k] is None:
                m = k // 2
                if k % 2:
                    w[k] = get(m + 2) * get(m) ** 3 - get(m + 1) ** 3 * get(m - 1)
                else:
                    w[k] = get(m) * (get(m + 2) * get(m - 1) ** 2 - get(m + 1) ** 2 * get(m - 2)) * inv2
            return w[k]

        for k in range(5, n_max + 1):
            get(k)
        return w


def signed_value(values: list, n: int):
    """psi_n from a table of psi_0..psi_N using psi_{-n} = -psi_n."""
    return values[n] if n >= 0 else -values[-n]


# ---------------------------------------------------------------------------
# Brioschi-Kiepert


def wp_derivatives(curve: EllipticCurve, count: int) -> list[CurveElement]:
    """[wp, wp', ..., wp^(count-1)] with wp = x and d/du acting as 2y d/dx."""
    out = [curve.x()]
    for _ in range(count - 1):
        out.append(out[-1].derivation())
    return out


def _det_laplace(matrix, one, zero):
    # division-free determinant by dynamic programming over column subsets
    n = len(matrix)
    dp = {0: one}
    for row in range(n):
        nxt = {}
        for mask, acc in dp.items():
            if acc.is_zero() if hasattr(acc, "is_zero") else acc == 0:
                continue
            for col in range(n):
                if mask >> col & 1:
                    continue
                entry = matrix[row][col]
                if hasattr(entry, "is_zero") and entry.is_zero():
                    continue
                sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                term = acc * entry
                if sign < 0:
                    term = -term
                key = mask | (1 << col)
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, zero)


def psi_bk(seq: PsiSequence, n: int, bound: int | None = DEFAULT_BK_BOUND) -> CurveElement:
    """psi_n from the Hankel determinant of derivatives of wp."""
    if n < 2:
        raise ValueError("the determinant formula needs n >= 2")
    if bound is not None and n > bound:
        raise PsiRangeError(f"n = {n} above the determinant bound {bound}")
    curve = seq.curve
    size = n - 1
    ders = wp_derivatives(curve, 2 * size)
    matrix = [[ders[i + j + 1] for j in range(size)] for i in range(size)]
    det = _det_laplace(matrix, curve.one(), curve.zero())
    scale = 1
    for k in range(1, n):
        scale *= factorial(k)
    coeff = Fraction((-1) ** (n - 1), scale * scale)
    return det * coeff


# ---------------------------------------------------------------------------
# identities and structure


def verify_recursion_identity(seq: PsiSequence, m: int, n: int) -> bool:
    """psi_{m+n} psi_{m-n} == psi_{m+1} psi_{m-1} psi_n^2 - psi_{n+1} psi_{n-1} psi_m^2."""
    lhs = seq[m + n] * seq[m - n]
    rhs = seq[m + 1] * seq[m - 1] * seq[n] ** 2 - seq[n + 1] * seq[n - 1] * seq[m] ** 2
    return (lhs - rhs).is_zero()


def master_identity_residual(seq: PsiSequence, p: int, q: int, N: int) -> CurveElement:
    """psi_p^2 psi_{N+q} psi_{N-q} - psi_q^2 psi_{N+p} psi_{N-p} - psi_N^2 psi_{p+q} psi_{p-q}."""
    return (
        seq[p] ** 2 * seq[N + q] * seq[N - q]
        - seq[q] ** 2 * seq[N + p] * seq[N - p]
        - seq[N] ** 2 * seq[p + q] * seq[p - q]
    )


def expected_degree(n: int) -> int:
    n = abs(n)
    return (n * n - 1) // 2 if n % 2 else (n * n - 4) // 2


def check_structure(seq: PsiSequence, n: int) -> dict:
    """Parity placement and x-degree of psi_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e = seq[n]
    part = e.p if n % 2 else e.q
    other = e.q if n % 2 else e.p
    degree = part.degree("x")
    expected = expected_degree(n)
    return {
        "n": n,
        "parity_ok": other.is_zero(),
        "degree": degree,
        "expected_degree": expected,
        "degree_ok": degree == expected,
        "generic": seq.curve.is_symbolic,
    }


def check_divisibility(seq: PsiSequence, n: int, m: int) -> bool:
    """True iff psi_n divides psi_m in the coordinate ring (requires n | m)."""
    if n < 1 or m % n:
        raise ValueError(f"{n} does not divide {m}")
    try:
        seq[m].exact_div(seq[n])
    except InexactDivisionError:
        return False
    return True


def condition_polynomial(seq: PsiSequence, p: int, q: int, flipped: bool = False) -> dict:
    """The element whose zeros are the points with c = 1, and its rational roots.

    With c = psi_{p+q} psi_{p-q} / (psi_p^2 - psi_q^2), the condition c = 1 is
    psi_{p+q} psi_{p-q} - psi_p^2 + psi_q^2 = 0.  ``flipped=True`` returns the
    opposite-sign combination psi_{p+q} psi_{p-q} + psi_p^2 - psi_q^2 instead
    (which characterizes c = -1).
    """
    if not (p > q >= 1) or gcd(p, q) != 1:
        raise ValueError("need p > q >= 1 with gcd(p, q) = 1")
    sign = 1 if flipped else -1
    elem = seq[p + q] * seq[p - q] + sign * (seq[p] ** 2 - seq[q] ** 2)
    roots = {}
    if not seq.curve.is_symbolic:
        for name, part in (("p_part", elem.p), ("q_part", elem.q)):
            if not part.is_zero():
                roots[name] = rational_roots(part)
    return {
        "element": elem,
        "degree": max(elem.p.degree("x"), elem.q.degree("x")),
        "rational_roots": roots,
    }


def parse_listing(curve: EllipticCurve, text: str, known: Mapping[int, CurveElement]) -> list[CurveElement]:
    """Evaluate a transcribed listing; '=' separates equivalent forms."""
    ns = {"x": curve.x(), "y": curve.y()}
    ns.update({f"psi{k}": v for k, v in known.items()})
    return [evaluate_expression(part, ns) for part in text.split("=")]


def check_listing(seq: PsiSequence, listing: Mapping[int, str]) -> list[dict]:
    """Compare psi_n against a factored listing, entry by entry.

    ``psiK`` inside an entry refers to the expansion of the listing's own
    entry K, so each listing is expanded on its own terms.
    """
    report = []
    expanded: dict[int, CurveElement] = {}
    for n in sorted(listing):
        actual = seq[n]
        forms = parse_listing(seq.curve, listing[n], expanded)
        expanded[n] = forms[0]
        ok = all(f == actual for f in forms)
        report.append({
            "n": n,
            "ok": ok,
            "negated": (not ok) and all(f == -actual for f in forms),
            "expected": forms[0],
            "actual": actual,
        })
    return report
