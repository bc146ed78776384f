"""Exhaustive interval verification of inequalities on the summatory
step functions, with exact per-interval endpoint logic.

m and M are constant on [n, n+1), so a bound against an increasing weight
is checked at the right endpoint (log(n+1)|m(n)| <= b covers every real x
in the interval); m1(x) = m(n) - M(n)/x is monotone per interval, so both
endpoints plus the closed-form critical point of the weighted product are
checked; mcheck(x) - 1 = m(n) log x - (ell(n) + 1) is smooth per interval
with a single closed-form critical point under the log^2 weight.

Every decision accounts for the certified error radius of the prefix
series; points whose margin falls inside the radius guard are escalated to
exact (rational or 40-digit) arithmetic and reported as indeterminate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath as mp
import numpy as np

from .errors import InvalidArgumentError, RangeError
from .tables import Tables

_ULP = 2.0 ** -53
_CHUNK = 1 << 18
_EXACT_FRACTION_LIMIT = 50000


@dataclass(frozen=True)
class Predicate:
    """An inequality on a summatory function, checkable from tables alone.

    kinds (bound constant c):
        const-bound : c * |f(x)| <= 1
        log-bound   : log x * |f(x)| <= c
        log2-bound  : log^2 x * |f(x)| <= c
        sqrt-bound  : sqrt(x) * |f(x)| <= c   (for M: |M(x)| <= c sqrt(x))
    """

    name: str
    kind: str
    target: str  # "m" | "m1" | "M" | "mcheck-minus-1"
    c: float

    def __post_init__(self):
        if self.kind not in ("const-bound", "log-bound", "log2-bound", "sqrt-bound"):
            raise InvalidArgumentError(f"unknown predicate kind {self.kind!r}")
        if self.target not in ("m", "m1", "M", "mcheck-minus-1"):
            raise InvalidArgumentError(f"unknown predicate target {self.target!r}")


PREDICATES = {
    "m4343": Predicate("m4343", "const-bound", "m", 4343.0),
    "m4345": Predicate("m4345", "const-bound", "m", 4345.0),
    "mlog0.0130073": Predicate("mlog0.0130073", "log-bound", "m", 0.0130073),
    "m1log2-0.138": Predicate("m1log2-0.138", "log2-bound", "m1", 0.138),
    "mchecklog2-0.162": Predicate("mchecklog2-0.162", "log2-bound",
                                  "mcheck-minus-1", 0.162),
    "Msqrt0.5": Predicate("Msqrt0.5", "sqrt-bound", "M", 0.5),
    "Msqrt0.571": Predicate("Msqrt0.571", "sqrt-bound", "M", 0.571),
    "msqrt0.5": Predicate("msqrt0.5", "sqrt-bound", "m", 0.5),
    "msqrt0.701": Predicate("msqrt0.701", "sqrt-bound", "m", 0.701),
}


@dataclass
class VerificationReport:
    predicate: str
    lo: int
    hi: int
    violations: List[Tuple[int, float, float]] = field(default_factory=list)
    indeterminate: List[int] = field(default_factory=list)
    max_ratio: float = 0.0
    argmax: int = 0
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# per-chunk quantity computation (vectorized, exact endpoint logic)

def _chunk_scan(pred: Predicate, a: int, b: int, tables: Tables):
    """Quantities q(n), guards g(n) and bound for integers n in [a, b).

    q(n) is the supremum of the weighted function over [n, n+1); the
    predicate holds on the interval iff q(n) <= bound.
    """
    n = np.arange(a, b, dtype=np.int64)
    nf = n.astype(np.float64)
    ser = tables.series
    if pred.target == "M":
        if pred.kind != "sqrt-bound":
            raise InvalidArgumentError("M predicates support sqrt-bound only")
        # |M(x)| = |M(n)| on [n, n+1); c sqrt(x) is smallest at x = n
        q = np.abs(tables.mu.mertens[n]).astype(np.float64) / np.sqrt(nf)
        return q, 4.0 * _ULP * q, pred.c
    if pred.target == "m":
        v = np.abs(ser.m.values[n])
        err = ser.m.error_radius[n]
        if pred.kind == "const-bound":
            return pred.c * v, pred.c * err + 4.0 * _ULP * pred.c * v, 1.0
        if pred.kind == "log-bound":
            w = np.log(nf + 1.0)
        elif pred.kind == "log2-bound":
            w = np.log(nf + 1.0) ** 2
        else:  # sqrt-bound
            w = np.sqrt(nf + 1.0)
        q = w * v
        return q, w * err + 4.0 * _ULP * q, pred.c
    if pred.target == "m1":
        if pred.kind != "log2-bound":
            raise InvalidArgumentError("m1 predicates support log2-bound only")
        q = np.empty(n.shape[0])
        av = ser.m.values
        Mv = tables.mu.mertens
        for i, ni in enumerate(n.tolist()):
            q[i] = _interval_sup_m1_log2(float(av[ni]), float(Mv[ni]),
                                         float(ni), float(ni + 1))
        w = np.log(nf + 1.0) ** 2
        guard = w * ser.m.error_radius[n] + 8.0 * _ULP * (np.abs(q) + 1.0)
        return q, guard, pred.c
    # mcheck-minus-1, log2-bound
    if pred.kind != "log2-bound":
        raise InvalidArgumentError("mcheck predicates support log2-bound only")
    a_ = ser.m.values[n]
    d_ = ser.ell.values[n] + 1.0
    L1 = np.log(nf)
    L2 = np.log(nf + 1.0)
    q = _sup_abs_aL_minus_d(a_, d_, L1, L2)
    err = (ser.m.error_radius[n] * L2 + ser.ell.error_radius[n]) * L2 * L2
    return q, err + 8.0 * _ULP * (np.abs(q) + 1.0), pred.c


def _sup_abs_aL_minus_d(a, d, L1, L2):
    """max over L in [L1, L2] of |a L - d| L^2, vectorized.

    Candidates: both endpoints and the interior critical point L = 2d/(3a)
    of (aL - d)L^2 (the |.| minimum aL = d is never a maximum).
    """
    v1 = np.abs(a * L1 - d) * L1 * L1
    v2 = np.abs(a * L2 - d) * L2 * L2
    with np.errstate(divide="ignore", invalid="ignore"):
        Lc = np.where(a != 0.0, 2.0 * d / (3.0 * np.where(a != 0.0, a, 1.0)), L1)
    Lc = np.clip(Lc, L1, L2)
    vc = np.abs(a * Lc - d) * Lc * Lc
    return np.maximum(np.maximum(v1, v2), vc)


def _interval_sup_m1_log2(a: float, b: float, x1: float, x2: float) -> float:
    """max over x in [x1, x2] of |a - b/x| log^2 x  (m1 on [n, n+1)).

    f'(x) has the sign of log(x) * (b log x + 2 a x - 2 b); the bracket
    u(x) = b log x + 2 a x - 2 b is unimodal (u' = b/x + 2a changes sign at
    most once), so it has at most two roots, located by bisection.
    """

    def f(x):
        lx = math.log(x)
        return abs(a - b / x) * lx * lx

    def u(x):
        return b * math.log(x) + 2.0 * a * x - 2.0 * b

    cands = [x1, x2]
    probes = [x1, x2]
    if a != 0.0:
        xs = -b / (2.0 * a)
        if x1 < xs < x2:
            probes = [x1, xs, x2]
    for lo, hi in zip(probes[:-1], probes[1:]):
        ulo, uhi = u(lo), u(hi)
        if ulo == 0.0:
            cands.append(lo)
        if ulo * uhi < 0.0:
            llo, hhi = lo, hi
            for _ in range(80):
                mid = 0.5 * (llo + hhi)
                if u(mid) == 0.0:
                    break
                if u(llo) * u(mid) < 0.0:
                    hhi = mid
                else:
                    llo = mid
            cands.append(0.5 * (llo + hhi))
    return max(f(x) for x in cands if x >= 1.0)


# ---------------------------------------------------------------------------
# exact escalation

def _exact_m(tables: Tables, n: int):
    """Exact (or 40-digit) value of m(n) for margin re-decision."""
    if n <= _EXACT_FRACTION_LIMIT:
        acc = Fraction(0)
        mu = tables.mu.mu
        for k in range(1, n + 1):
            v = int(mu[k])
            if v:
                acc += Fraction(v, k)
        return acc
    with mp.workdps(40):
        mu = tables.mu.mu
        acc = mp.mpf(0)
        for k in range(1, n + 1):
            v = int(mu[k])
            if v:
                acc += mp.mpf(v) / k
        return acc


def _exact_ell(tables: Tables, n: int):
    """40-digit value of ell(n) = sum_{k<=n} mu(k) log(k)/k."""
    with mp.workdps(40):
        mu = tables.mu.mu
        acc = mp.mpf(0)
        for k in range(2, n + 1):
            v = int(mu[k])
            if v:
                acc += v * mp.log(k) / k
        return acc


def _exact_recheck(pred: Predicate, n: int, tables: Tables) -> Tuple[float, bool]:
    """Re-decide a marginal interval in exact/high-precision arithmetic."""
    with mp.workdps(50):
        if pred.target == "M":
            q = abs(int(tables.mu.mertens[n])) / mp.sqrt(n)
            return float(q), bool(q <= pred.c)
        mv = _exact_m(tables, n)
        if isinstance(mv, Fraction):
            mv = mp.mpf(mv.numerator) / mv.denominator
        if pred.target == "m":
            if pred.kind == "const-bound":
                q = pred.c * abs(mv)
                return float(q), bool(q <= 1)
            if pred.kind == "log-bound":
                q = mp.log(n + 1) * abs(mv)
            elif pred.kind == "log2-bound":
                q = mp.log(n + 1) ** 2 * abs(mv)
            else:
                q = mp.sqrt(n + 1) * abs(mv)
            return float(q), bool(q <= pred.c)
        if pred.target == "m1":
            M = int(tables.mu.mertens[n])
            q = _interval_sup_m1_log2(float(mv), float(M), float(n), float(n + 1))
            return float(q), bool(q <= pred.c)
        # mcheck-minus-1 under the log^2 weight
        d = _exact_ell(tables, n) + 1
        L1 = mp.log(n)
        L2 = mp.log(n + 1)
        cands = [L1, L2]
        if mv != 0:
            Lc = 2 * d / (3 * mv)
            if L1 < Lc < L2:
                cands.append(Lc)
        q = max(abs(mv * L - d) * L * L for L in cands)
        return float(q), bool(q <= pred.c)


# ---------------------------------------------------------------------------
# public operations

def verify_range(pred: Predicate, lo: float, hi: float, tables: Tables,
                 jobs: int = 1, max_violations: int = 10000) -> VerificationReport:
    """Verify a predicate for every real x in [lo, hi).

    Exact per-interval supremum logic covers the continuum; the report's
    max_ratio is the largest weighted value divided by the bound.
    """
    n_lo = int(math.floor(lo))
    n_hi = int(math.ceil(hi))
    if n_lo < 1:
        raise InvalidArgumentError("range must start at x >= 1")
    if n_hi - 1 > tables.limit:
        raise RangeError(f"range end {hi} exceeds sieve limit {tables.limit}")
    spans = [(a, min(a + _CHUNK, n_hi)) for a in range(n_lo, n_hi, _CHUNK)]

    def work(span):
        return _chunk_scan(pred, span[0], span[1], tables)

    if jobs > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, spans))
    else:
        parts = [work(s) for s in spans]

    report = VerificationReport(predicate=pred.name, lo=n_lo, hi=n_hi)
    for (a, b), (q, guard, bound) in zip(spans, parts):
        report.checked += b - a
        i = int(np.argmax(q))
        if q[i] > report.max_ratio * bound:
            report.max_ratio = float(q[i]) / bound
            report.argmax = a + i
        margin = bound - q
        hard = np.nonzero(margin < -guard)[0]
        for j in hard.tolist():
            report.violations.append((a + j, float(q[j]), float(margin[j])))
        suspect = np.nonzero((margin <= guard) & (margin >= -guard))[0]
        for j in suspect.tolist():
            n = a + j
            value, ok = _exact_recheck(pred, n, tables)
            report.indeterminate.append(n)
            if not ok:
                report.violations.append((n, value, float(bound - value)))
        if len(report.violations) > max_violations:
            break
    report.violations.sort(key=lambda t: t[0])
    return report


def sup_scan(tables: Tables, target: str, weight: str, lo: float, hi: float,
             absolute: bool = True) -> Tuple[float, float]:
    """(sup, argmax_x) of the weighted summatory function on [lo, hi].

    Per-interval maxima are computed in closed form, so the argmax is exact
    even though x ranges over the continuum.
    """
    if hi > tables.limit:
        raise RangeError(f"scan end {hi} exceeds sieve limit {tables.limit}")
    n_lo = max(1, int(math.floor(lo)))
    n_hi = int(math.floor(hi))
    ser = tables.series
    best = -math.inf
    best_x = float(n_lo)

    if target in ("m", "M"):
        n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
        nf = n.astype(np.float64)
        right = np.minimum(nf + 1.0, float(hi))
        if target == "M":
            if weight != "sqrtx":
                raise InvalidArgumentError("M scans support the sqrtx weight")
            vals = np.abs(tables.mu.mertens[n]).astype(np.float64) / np.sqrt(nf)
            xs = nf
        else:
            v = np.abs(ser.m.values[n]) if absolute else ser.m.values[n]
            if weight == "1":
                vals, xs = v, nf
            elif weight == "logx":
                vals, xs = v * np.log(right), right
            elif weight == "log2x":
                vals, xs = v * np.log(right) ** 2, right
            elif weight == "sqrtx":
                vals, xs = v * np.sqrt(right), right
            else:
                raise InvalidArgumentError(f"unknown weight {weight!r}")
        i = int(np.argmax(vals))
        return float(vals[i]), float(xs[i])

    if target == "m1":
        if weight != "log2x":
            raise InvalidArgumentError("m1 scans support the log2x weight")
        for n in range(n_lo, n_hi + 1):
            a = float(ser.m.values[n])
            b = float(tables.mu.mertens[n])
            x2 = min(float(n + 1), float(hi))
            val, arg = _interval_argmax_m1_log2(a, b, float(n), x2, absolute)
            if val > best:
                best, best_x = val, arg
        return best, best_x

    if target == "mcheck-minus-1":
        if weight != "log2x":
            raise InvalidArgumentError("mcheck scans support the log2x weight")
        for n in range(n_lo, n_hi + 1):
            a = float(ser.m.values[n])
            d = float(ser.ell.values[n]) + 1.0
            L1 = math.log(n) if n > 1 else 0.0
            L2 = math.log(min(n + 1, hi))
            cands = [L1, L2]
            if a != 0.0:
                Lc = 2.0 * d / (3.0 * a)
                if L1 < Lc < L2:
                    cands.append(Lc)
            for L in cands:
                g = (a * L - d) * L * L
                v = abs(g) if absolute else g
                if v > best:
                    best, best_x = v, math.exp(L)
        return best, best_x

    raise InvalidArgumentError(f"unknown scan target {target!r}")


def _interval_argmax_m1_log2(a, b, x1, x2, absolute):
    """(max, argmax) of (|.| of) (a - b/x) log^2 x over [x1, x2]."""

    def f(x):
        lx = math.log(x)
        v = (a - b / x) * lx * lx
        return abs(v) if absolute else v

    def u(x):
        return b * math.log(x) + 2.0 * a * x - 2.0 * b

    cands = [x1, x2]
    probes = [x1, x2]
    if a != 0.0 and x1 < -b / (2.0 * a) < x2:
        probes = [x1, -b / (2.0 * a), x2]
    for lo, hi in zip(probes[:-1], probes[1:]):
        if u(lo) * u(hi) < 0.0:
            llo, hhi = lo, hi
            for _ in range(80):
                mid = 0.5 * (llo + hhi)
                if u(llo) * u(mid) <= 0.0:
                    hhi = mid
                else:
                    llo = mid
            cands.append(0.5 * (llo + hhi))
    vals = [(f(x), x) for x in cands if x >= 1.0]
    return max(vals, key=lambda t: t[0])


@dataclass
class RatioReport:
    lo: int
    hi: int
    min_ratio: float
    max_ratio: float
    argmin: int
    argmax: int
    violations: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def ratio_theorem_C(tables: Tables, x_max: int, lo: int = 94,
                    low: float = 2.0 / 3.0, high: float = 1.5) -> RatioReport:
    """Running-supremum ratio sup_{t<=x} t|m(t)| / sup_{t<=x} |M(t)|.

    The numerator supremum over the interval (n-1, n] closes at t = n with
    candidates n|m(n)| and n|m(n-1)|; both running suprema are cumulative
    maxima over exact (radius-certified) table values.
    """
    if x_max > tables.limit:
        raise RangeError(f"x_max {x_max} exceeds sieve limit {tables.limit}")
    n = np.arange(1, x_max + 1, dtype=np.int64)
    nf = n.astype(np.float64)
    mv = np.abs(tables.series.m.values[n])
    prev = np.abs(tables.series.m.values[n - 1])
    cand = np.maximum(nf * mv, nf * prev)
    run_m = np.maximum.accumulate(cand)
    run_M = np.maximum.accumulate(np.abs(tables.mu.mertens[n]).astype(np.float64))
    ratio = run_m / run_M
    window = ratio[lo - 1:]
    idx = np.arange(lo, x_max + 1)
    i_min = int(np.argmin(window))
    i_max = int(np.argmax(window))
    rep = RatioReport(lo=lo, hi=x_max,
                      min_ratio=float(window[i_min]), max_ratio=float(window[i_max]),
                      argmin=int(idx[i_min]), argmax=int(idx[i_max]))
    bad = np.nonzero((window < low) | (window > high))[0]
    rep.violations = [(int(idx[i]), float(window[i])) for i in bad.tolist()]
    return rep


def ratio_violation_below(tables: Tables, lo: int = 2, hi: int = 94,
                          low: float = 2.0 / 3.0, high: float = 1.5):
    """First x in [lo, hi) where the running-supremum ratio leaves the band
    (witness that the stated rank is minimal), or None."""
    n = np.arange(1, hi, dtype=np.int64)
    nf = n.astype(np.float64)
    mv = np.abs(tables.series.m.values[n])
    prev = np.abs(tables.series.m.values[n - 1])
    run_m = np.maximum.accumulate(np.maximum(nf * mv, nf * prev))
    run_M = np.maximum.accumulate(np.abs(tables.mu.mertens[n]).astype(np.float64))
    ratio = run_m / run_M
    for x in range(lo, hi):
        r = float(ratio[x - 1])
        if r < low or r > high:
            return x, r
    return None
