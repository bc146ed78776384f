"""Bound ledger and conversion machinery.

A BoundForm is a certified majorant  A x^(theta-1)/log^j x + sum coef x^-power
of |target(x)| for x >= T.  Conversions multiply the leading constant by a
Mellin closed-form factor and add explicit remainder terms; majorant descent
finds the rank from which the majorant falls below a simpler target shape;
range lowerings shrink validity ranks by comparison against sqrt-models or
previously derived bounds.

Ranks and remainder coefficients can be astronomically large (exp(18900) and
beyond), so ranks are stored as log T and remainder coefficients as
log(coef); all comparisons run in L = log x space.
"""

from __future__ import annotations

import math
import urllib.parse
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .errors import DomainError, InvalidArgumentError, NoDescentError, PlanError
from .special import (
    h2_integral_bound,
    mellin_G1_closed,
    mellin_G1check_closed,
    mellin_H1_closed,
    zeta_real,
)
from .weights import H2_ENVELOPE, EnvelopeParams

TARGETS = ("M-over-x", "m", "m1", "mcheck-minus-1")

_LOG_1E16 = math.log(1e16)


@dataclass(frozen=True)
class BoundForm:
    """Certified majorant of |target(x)| for x >= exp(log_T):

        A x^(theta-1)/log^j x + sum exp(log_coef) x^(-power).
    """

    target: str
    A: float
    theta: float = 1.0
    j: float = 0.0
    log_T: float = 0.0
    remainders: Tuple[Tuple[float, float], ...] = ()  # (log_coef, power)
    provenance: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.target not in TARGETS:
            raise InvalidArgumentError(f"unknown target {self.target!r}")
        if self.A < 0 or self.j < 0 or self.log_T < 0:
            raise InvalidArgumentError("BoundForm requires A >= 0, j >= 0, T >= 1")
        for _, p in self.remainders:
            if p <= 0:
                raise InvalidArgumentError("remainder powers must be positive")

    @property
    def T(self) -> float:
        try:
            return math.exp(self.log_T)
        except OverflowError:
            return math.inf

    def log_term_list(self, L: float):
        """log of each majorant term at L = log x, as (log_value) floats."""
        terms = []
        if self.A > 0:
            terms.append(math.log(self.A) + (self.theta - 1.0) * L - self.j * math.log(L))
        for lc, p in self.remainders:
            terms.append(lc - p * L)
        return terms

    def evaluate_log(self, L: float) -> float:
        """log of the majorant at L = log x."""
        terms = self.log_term_list(L)
        if not terms:
            return -math.inf
        return float(np.logaddexp.reduce(np.asarray(terms, dtype=np.float64)))

    def evaluate(self, x: float) -> float:
        if x <= 1.0:
            raise DomainError("evaluate requires x > 1")
        return math.exp(self.evaluate_log(math.log(x)))

    def with_provenance(self, note: str) -> "BoundForm":
        return replace(self, provenance=self.provenance + (note,))


@dataclass(frozen=True)
class SqrtModel:
    """|target(x)| <= c/sqrt(x) for m-like targets, or |M(x)| <= c sqrt(x),
    certified on [x_lo, x_hi]."""

    target: str
    c: float
    x_lo: float
    x_hi: float
    provenance: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.c <= 0 or self.x_lo > self.x_hi:
            raise InvalidArgumentError("SqrtModel requires c > 0 and x_lo <= x_hi")


def remainder(coef: float, power: float) -> Tuple[float, float]:
    """Encode a remainder term coef * x^-power in log-coefficient form."""
    if coef < 0:
        raise InvalidArgumentError("remainder coefficients must be nonnegative")
    return (math.log(coef) if coef > 0 else -math.inf, float(power))


def log_remainder(log_coef: float, power: float) -> Tuple[float, float]:
    return (float(log_coef), float(power))


# ---------------------------------------------------------------------------
# certified prefix-integral bounds used as conversion remainders

def abs_M_prefix_integral_bound(T: float, tables=None, strategy: str = "auto") -> float:
    """Certified upper bound on integral_1^T |M(t)| dt.

    strategies: "exact" (sieve tables), "sqrt" (|M| <= sqrt(t) up to 1e16),
    "sqrt-hurst" (0.571 sqrt(t) on [33, 1e16] plus exact head),
    "trivial" (|M| <= t), "auto" picks the tightest admissible.
    """
    if strategy == "auto":
        if tables is not None and T <= tables.limit:
            strategy = "exact"
        elif T <= 1e16:
            strategy = "sqrt"
        else:
            strategy = "trivial"
    if strategy == "exact":
        if tables is None or T > tables.limit:
            raise InvalidArgumentError("exact strategy needs tables covering T")
        n = int(math.floor(T))
        head = float(np.abs(tables.mertens[1:n]).sum())
        return head + abs(float(tables.mertens[n])) * (T - n)
    if strategy == "sqrt":
        if T > 1e16:
            raise InvalidArgumentError("|M| <= sqrt(t) is certified only up to 1e16")
        return (2.0 / 3.0) * T**1.5
    if strategy == "sqrt-hurst":
        if T > 1e16:
            raise InvalidArgumentError("0.571 sqrt(t) is certified only up to 1e16")
        # exact sum 59 below 33, |M(33)| = -1 on [32,33), then 0.571 sqrt(t)
        return 59.0 + 0.571 * (2.0 / 3.0) * (T**1.5 - 33.0**1.5)
    if strategy == "trivial":
        return 0.5 * T * T
    raise InvalidArgumentError(f"unknown strategy {strategy!r}")


def abs_m_prefix_integral_bound(T: float, const_beyond_1e16: Optional[float] = None) -> float:
    """Certified upper bound on integral_1^T |m(t)| dt.

    Piecewise: exact 1.5 on [1, 3]; 0.5/sqrt(t) on [3, 7.7e9];
    0.701/sqrt(t) on [7.7e9, 1e16]; a supplied constant bound beyond 1e16
    (required if T > 1e16).
    """
    total = 0.0
    t0 = 1.0
    if T <= 3.0:
        return min(T - 1.0, 1.5)
    total += 1.5
    t0 = 3.0
    hi = min(T, 7.7e9)
    total += 2.0 * 0.5 * (math.sqrt(hi) - math.sqrt(t0))
    if T <= 7.7e9:
        return total
    hi2 = min(T, 1e16)
    total += 2.0 * 0.701 * (math.sqrt(hi2) - math.sqrt(7.7e9))
    if T <= 1e16:
        return total
    if const_beyond_1e16 is None:
        raise InvalidArgumentError("need a constant |m| bound beyond 1e16")
    return total + const_beyond_1e16 * (T - 1e16)


def log_abs_m_prefix_integral_bound(log_T: float, const_hyp: float) -> float:
    """log of a certified bound on integral_1^T |m| for huge T = exp(log_T),
    using |m| <= 1 below 1e16 (already immaterial) and |m| <= const_hyp
    beyond: bound = 1e16 + const_hyp * T."""
    if log_T <= _LOG_1E16:
        raise InvalidArgumentError("use abs_m_prefix_integral_bound for T <= 1e16")
    return float(np.logaddexp(math.log(1e16), math.log(const_hyp) + log_T))


# ---------------------------------------------------------------------------
# conversions

def _shifted_exponent(theta: float, j: float, log_T_cut: float) -> float:
    return theta - (j / log_T_cut if j > 0 else 0.0)


def convert_via_G1(hyp: BoundForm, T_cut: float, tables=None,
                   M_integral: Optional[float] = None,
                   M_strategy: str = "auto") -> BoundForm:
    """Convert a bound on |M(x)|/x into a bound on |m1(x)|.

    Factor: closed-form Mellin integral of G1 at s = theta - j/log T_cut.
    Remainders: (8/3)/x and (integral_1^{T_cut} |M|)/x^2.
    """
    if hyp.target != "M-over-x":
        raise PlanError("convert_via_G1 needs an M-over-x hypothesis")
    if T_cut <= 1.0:
        raise InvalidArgumentError("T_cut must exceed 1")
    log_T_cut = math.log(T_cut)
    if hyp.log_T > log_T_cut + 1e-9:
        raise PlanError("hypothesis rank exceeds T_cut: sup range not covered")
    s = _shifted_exponent(hyp.theta, hyp.j, log_T_cut)
    if s <= -1.0:
        raise DomainError("shifted exponent s <= -1")
    factor = mellin_G1_closed(s)
    if M_integral is None:
        M_integral = abs_M_prefix_integral_bound(T_cut, tables=tables, strategy=M_strategy)
    return BoundForm(
        target="m1",
        A=hyp.A * (factor.value + factor.abs_error),
        theta=hyp.theta,
        j=hyp.j,
        log_T=max(hyp.log_T, log_T_cut),
        remainders=(remainder(8.0 / 3.0, 1.0), remainder(M_integral, 2.0)),
        provenance=hyp.provenance + (
            f"convert_via_G1(T_cut={T_cut:g}, s={s:.12g}, factor={factor.value:.12g})",
        ),
    )


def convert_via_G1check(hyp: BoundForm, T_cut: float, tables=None,
                        M_integral: Optional[float] = None,
                        M_strategy: str = "auto") -> BoundForm:
    """Convert a bound on |m1(x)| into a bound on |mcheck(x) - 1|.

    Factor: 1 + Mellin integral of G1 at s = theta - j/log T_cut.
    Remainders as in convert_via_G1.
    """
    if hyp.target != "m1":
        raise PlanError("convert_via_G1check needs an m1 hypothesis")
    if T_cut < 1.0 or (T_cut == 1.0 and hyp.j > 0):
        raise InvalidArgumentError("T_cut must exceed 1 (or equal 1 with j = 0)")
    log_T_cut = math.log(T_cut)
    if hyp.log_T > log_T_cut + 1e-9:
        raise PlanError("hypothesis rank exceeds T_cut: sup range not covered")
    s = _shifted_exponent(hyp.theta, hyp.j, log_T_cut)
    if s <= -1.0:
        raise DomainError("shifted exponent s <= -1")
    factor = mellin_G1check_closed(s)
    if M_integral is None:
        M_integral = abs_M_prefix_integral_bound(T_cut, tables=tables, strategy=M_strategy)
    return BoundForm(
        target="mcheck-minus-1",
        A=hyp.A * (factor.value + factor.abs_error),
        theta=hyp.theta,
        j=hyp.j,
        log_T=max(hyp.log_T, log_T_cut),
        remainders=(remainder(8.0 / 3.0, 1.0), remainder(M_integral, 2.0)),
        provenance=hyp.provenance + (
            f"convert_via_G1check(T_cut={T_cut:g}, s={s:.12g}, factor={factor.value:.12g})",
        ),
    )


def convert_via_H_envelope(hyp: BoundForm, T_cut_log: float,
                           env: EnvelopeParams = H2_ENVELOPE,
                           delta: Optional[float] = None,
                           m_integral_log: Optional[float] = None,
                           m_integral: Optional[float] = None) -> BoundForm:
    """Convert a bound on |m(x)| into a bound on |m1(x)| through the
    published envelope of the coefficient weight.

    Factor: the delta-integral bound (or the exact t^-2 integral bound when
    delta = 0), delta = (1 - theta) + j/log T_cut.  Remainder:
    (sup_norm * integral_1^{T_cut} |m| + sum_c)/x.  T_cut is passed in log
    form because the chains use ranks like exp(18900).
    """
    if hyp.target != "m":
        raise PlanError("convert_via_H_envelope needs an m hypothesis")
    if T_cut_log <= 0.0:
        raise InvalidArgumentError("T_cut must exceed 1")
    if hyp.log_T > T_cut_log + 1e-9:
        raise PlanError("hypothesis rank exceeds T_cut: sup range not covered")
    if delta is None:
        delta = (1.0 - hyp.theta) + (hyp.j / T_cut_log if hyp.j > 0 else 0.0)
    if delta >= 1.0:
        raise DomainError("delta >= 1: envelope integral diverges")
    if delta < 0.0:
        raise DomainError("delta must be nonnegative")
    factor = env.l1_mellin2 if delta == 0.0 else h2_integral_bound(delta)
    if m_integral_log is None:
        if m_integral is None:
            raise InvalidArgumentError("pass m_integral or m_integral_log")
        m_integral_log = math.log(m_integral)
    rem_log = float(np.logaddexp(math.log(env.sup_norm) + m_integral_log,
                                 math.log(env.sum_c)))
    return BoundForm(
        target="m1",
        A=hyp.A * factor,
        theta=hyp.theta,
        j=hyp.j,
        log_T=max(hyp.log_T, T_cut_log, math.log(max(5e13, env.max_r))),
        remainders=(log_remainder(rem_log, 1.0),),
        provenance=hyp.provenance + (
            f"convert_via_H_envelope(logT_cut={T_cut_log:g}, delta={delta:.6g}, "
            f"factor={factor:.12g})",
        ),
    )


def convert_via_H1(hyp: BoundForm, T_cut: float = 1.0,
                   um_integral: Optional[float] = None) -> BoundForm:
    """Convert a bound on |m(x)| into a bound on |m1(x)| via the analytic
    h-weight: factor is the H1 Mellin closed form at theta; remainder
    2/x + 2.1 (integral_1^T u|m(u)| du)/x^2."""
    if hyp.target != "m":
        raise PlanError("convert_via_H1 needs an m hypothesis")
    factor = mellin_H1_closed(hyp.theta)
    if um_integral is None:
        # Meissel |m| <= 1
        um_integral = 0.5 * T_cut * T_cut
    rems = [remainder(2.0, 1.0)]
    if um_integral > 0:
        rems.append(remainder(2.1 * um_integral, 2.0))
    return BoundForm(
        target="m1",
        A=hyp.A * (factor.value + factor.abs_error),
        theta=hyp.theta,
        j=hyp.j,
        log_T=max(hyp.log_T, math.log(T_cut) if T_cut > 1 else 0.0),
        remainders=tuple(rems),
        provenance=hyp.provenance + (
            f"convert_via_H1(T_cut={T_cut:g}, factor={factor.value:.12g})",
        ),
    )


def triangle_m(hyp_m1: BoundForm, hyp_M: BoundForm) -> BoundForm:
    """|m| <= |M/x| + |m1|: add leading constants and merge remainders."""
    if hyp_m1.target != "m1" or hyp_M.target != "M-over-x":
        raise PlanError("triangle_m needs an m1 and an M-over-x hypothesis")
    if (hyp_m1.theta, hyp_m1.j) != (hyp_M.theta, hyp_M.j):
        raise PlanError("triangle_m requires matching bound shapes")
    return BoundForm(
        target="m",
        A=hyp_m1.A + hyp_M.A,
        theta=hyp_m1.theta,
        j=hyp_m1.j,
        log_T=max(hyp_m1.log_T, hyp_M.log_T),
        remainders=hyp_m1.remainders + hyp_M.remainders,
        provenance=hyp_m1.provenance + hyp_M.provenance + ("triangle_m",),
    )


# ---------------------------------------------------------------------------
# descent and range lowering

def _ratio_pieces(form: BoundForm, target_A, target_j, target_theta):
    """(c_i, b_i, q_i) of each term ratio  exp(c_i + b_i L + q_i log L)
    against the target shape."""
    log_tA = math.log(target_A)
    a_t = target_theta - 1.0
    pieces = []
    if form.A > 0:
        pieces.append((math.log(form.A) - log_tA, form.theta - 1.0 - a_t,
                       target_j - form.j))
    for lc, p in form.remainders:
        if lc > -math.inf:
            pieces.append((lc - log_tA, -p - a_t, target_j))
    return pieces


def _log_ratio_sum(pieces, L: float) -> float:
    vals = np.asarray([c + b * L + q * math.log(L) for c, b, q in pieces])
    return float(np.logaddexp.reduce(vals))


def majorant_descent(form: BoundForm, target_A: float, target_j: Optional[float] = None,
                     target_theta: Optional[float] = None,
                     L_cap: float = 1e8) -> float:
    """Smallest log-rank L0 >= log form.T such that the majorant stays below
    target_A x^(target_theta-1)/log^target_j x for all x >= exp(L0).

    Certification: every term ratio is shown monotone nonincreasing past its
    closed-form critical point; a bisection locates the last crossing.
    """
    if target_j is None:
        target_j = form.j
    if target_theta is None:
        target_theta = form.theta
    pieces = _ratio_pieces(form, target_A, target_j, target_theta)
    const_log = -math.inf
    crit = 0.0
    for c, b, q in pieces:
        if b > 0 or (b == 0 and q > 0):
            raise NoDescentError("a majorant term eventually dominates the target")
        if b == 0 and q == 0:
            const_log = float(np.logaddexp(const_log, c))
        if b < 0 and q > 0:
            crit = max(crit, q / (-b))
    if const_log > 0.0:
        raise NoDescentError("constant part of the majorant already exceeds the target")
    L_min = max(form.log_T, 1.0 + 1e-9)
    L_start = max(L_min, crit, 1.0 + 1e-9)
    if _log_ratio_sum(pieces, L_start) > 0.0:
        lo = L_start
        hi = L_start
        while _log_ratio_sum(pieces, hi) > 0.0:
            hi *= 2.0
            if hi > L_cap:
                raise NoDescentError(f"no descent below the target up to log x = {L_cap:g}")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if _log_ratio_sum(pieces, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return hi
    # already below at L_start: scan [L_min, L_start] for the last crossing
    if L_start <= L_min:
        return L_min
    grid = np.linspace(L_min, L_start, 4097)
    vals = np.asarray([_log_ratio_sum(pieces, float(L)) for L in grid])
    above = np.nonzero(vals > 0.0)[0]
    if above.size == 0:
        return L_min
    lo = float(grid[above[-1]])
    hi = float(grid[above[-1] + 1])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _log_ratio_sum(pieces, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def descend_to(form: BoundForm, target_A: float, target_j: Optional[float] = None,
               target_theta: Optional[float] = None, rank_cap: Optional[float] = None,
               log_rank_cap: Optional[float] = None) -> BoundForm:
    """Descend a majorant below a clean target shape; returns the clean
    BoundForm at the certified rank (or at the supplied outward-rounded cap,
    checked against the certified rank)."""
    if target_j is None:
        target_j = form.j
    if target_theta is None:
        target_theta = form.theta
    L0 = majorant_descent(form, target_A, target_j, target_theta)
    if log_rank_cap is None and rank_cap is not None:
        log_rank_cap = math.log(rank_cap)
    if log_rank_cap is not None:
        if L0 > log_rank_cap + 1e-12:
            raise PlanError(
                f"descent rank log x = {L0:.6g} exceeds the stated cap {log_rank_cap:.6g}"
            )
        L0 = log_rank_cap
    return BoundForm(
        target=form.target,
        A=target_A,
        theta=target_theta,
        j=target_j,
        log_T=L0,
        provenance=form.provenance + (f"majorant_descent(A={target_A:.12g}, "
                                      f"j={target_j:g}, log_rank={L0:.6g})",),
    )


def sqrt_range_lowering(form: BoundForm, model: SqrtModel) -> BoundForm:
    """Lower the validity rank of a clean bound by a sqrt-model comparison.

    Certifies c/sqrt(x) <= A x^(theta-1)/log^j x on [T', form.T], where the
    model covers [T', form.T]; the new rank is max(threshold, model.x_lo).
    """
    if model.target != form.target:
        raise PlanError("sqrt model targets a different function")
    if form.remainders:
        raise PlanError("sqrt_range_lowering expects a clean (descended) form")
    if form.theta != 1.0:
        raise PlanError("sqrt_range_lowering supports theta = 1 forms")
    if form.j == 0:
        threshold = (model.c / form.A) ** 2
    else:
        # solve sqrt(x)/log^j x >= c/A; lhs increasing for x >= e^(2j)
        ratio = model.c / form.A
        lo = max(math.exp(2.0 * form.j), 4.0)
        if math.sqrt(lo) / math.log(lo) ** form.j > ratio:
            threshold = lo
        else:
            hi = lo
            while math.sqrt(hi) / math.log(hi) ** form.j <= ratio:
                hi *= 4.0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if math.sqrt(mid) / math.log(mid) ** form.j <= ratio:
                    lo = mid
                else:
                    hi = mid
            threshold = hi
    new_T = max(threshold, model.x_lo)
    if math.log(model.x_hi) < form.log_T - 1e-9:
        raise PlanError("sqrt model does not reach the form's current rank")
    if math.log(new_T) > form.log_T + 1e-9:
        raise PlanError("sqrt model cannot lower the rank (threshold above it)")
    return replace(
        form,
        log_T=math.log(new_T),
        provenance=form.provenance + (
            f"sqrt_range_lowering(c={model.c:g}, new_T={new_T:.6g})",
        ),
    )


def log_comparison_lowering(form: BoundForm, other: BoundForm) -> BoundForm:
    """Lower the validity rank of a clean log-power bound by comparison with
    an already certified bound of lower log-power (same target, theta = 1):
    other.A/log^jo x <= form.A/log^jf x  iff  log x <= (form.A/other.A)^(1/(jf-jo)).
    """
    if other.target != form.target:
        raise PlanError("comparison bound targets a different function")
    if form.remainders or other.remainders:
        raise PlanError("log_comparison_lowering expects clean forms")
    if form.theta != 1.0 or other.theta != 1.0 or other.j >= form.j:
        raise PlanError("need theta = 1 and other.j < form.j")
    L_max = (form.A / other.A) ** (1.0 / (form.j - other.j))
    if L_max < form.log_T - 1e-9:
        raise PlanError("comparison range does not reach the form's current rank")
    if other.log_T > form.log_T + 1e-9:
        raise PlanError("comparison bound starts above the form's rank")
    return replace(
        form,
        log_T=other.log_T,
        provenance=form.provenance + (
            f"log_comparison_lowering(vs A={other.A:.8g}/log^{other.j:g}, "
            f"valid to log x = {L_max:.6g})",
        ),
    )


def sqrt_model_from_form(form: BoundForm, c: float, x_lo: float, x_hi: float) -> SqrtModel:
    """Freeze a theta = 1/2 majorant into |target| <= c/sqrt(x) on
    [x_lo, x_hi]: sqrt(x) * majorant is decreasing (every term has
    x-exponent <= 0 after the shift), so the value at x_lo certifies c."""
    if form.theta != 0.5 or form.j != 0:
        raise PlanError("sqrt_model_from_form needs a theta = 1/2, j = 0 form")
    for _, p in form.remainders:
        if 0.5 - p > 0:
            raise PlanError("a remainder term grows after multiplication by sqrt(x)")
    if math.log(x_lo) < form.log_T - 1e-9:
        raise PlanError("x_lo below the form's validity rank")
    val = math.exp(form.evaluate_log(math.log(x_lo)) + 0.5 * math.log(x_lo))
    if val > c:
        raise PlanError(f"sqrt-model constant {c:g} not certified: value {val:.6g} at x_lo")
    return SqrtModel(target=form.target, c=c, x_lo=x_lo, x_hi=x_hi,
                     provenance=form.provenance + (f"sqrt_model(c={c:g})",))


def theorem_d_arithmetic(limsup_M: float) -> float:
    """limsup |m(x)| sqrt(x) >= limsup (|M(x)|/sqrt(x)) / (1 + b) with
    b = 2 + (368/315) zeta(1/2)."""
    b = 2.0 + (368.0 / 315.0) * zeta_real(0.5).value
    return limsup_M / (1.0 + b)


# ---------------------------------------------------------------------------
# ledger

@dataclass
class Ledger:
    """Named bound entries; every derived entry's provenance chain
    terminates in axioms."""

    axioms: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)

    def add_axiom(self, name: str, entry, source: str = ""):
        if name in self.axioms or name in self.derived:
            raise PlanError(f"duplicate ledger entry {name!r}")
        if source:
            entry = replace(entry, provenance=entry.provenance + (f"axiom:{source}",))
        self.axioms[name] = entry

    def add_derived(self, name: str, entry):
        if name in self.axioms or name in self.derived:
            raise PlanError(f"duplicate ledger entry {name!r}")
        self.derived[name] = entry

    def __getitem__(self, name: str):
        if name in self.axioms:
            return self.axioms[name]
        if name in self.derived:
            return self.derived[name]
        raise PlanError(f"unknown ledger entry {name!r}")

    def __contains__(self, name: str):
        return name in self.axioms or name in self.derived


def _fmt_prov(provenance):
    # provenance notes are free text; percent-encode them so every record
    # stays a single line of space-separated key=value fields
    return "|".join(urllib.parse.quote(p, safe="") for p in provenance)


def _parse_prov(text):
    return tuple(urllib.parse.unquote(p) for p in text.split("|") if p)


def _fmt_entry(kind, name, entry):
    if isinstance(entry, BoundForm):
        rems = ",".join(f"{lc!r}:{p!r}" for lc, p in entry.remainders)
        return (f"kind={kind} name={name} type=bound target={entry.target} "
                f"A={entry.A!r} theta={entry.theta!r} j={entry.j!r} "
                f"logT={entry.log_T!r} remainders={rems} "
                f"provenance={_fmt_prov(entry.provenance)}")
    return (f"kind={kind} name={name} type=sqrt target={entry.target} "
            f"c={entry.c!r} x_lo={entry.x_lo!r} x_hi={entry.x_hi!r} "
            f"provenance={_fmt_prov(entry.provenance)}")


def serialize_ledger(ledger: Ledger) -> str:
    lines = []
    for name in sorted(ledger.axioms):
        lines.append(_fmt_entry("axiom", name, ledger.axioms[name]))
    for name in ledger.derived:  # insertion order preserves derivation order
        lines.append(_fmt_entry("derived", name, ledger.derived[name]))
    return "\n".join(lines) + "\n"


def _parse_fields(line: str) -> dict:
    fields = {}
    for chunk in line.strip().split(" "):
        if "=" in chunk:
            k, v = chunk.split("=", 1)
            fields[k] = v
    return fields


def load_ledger(text: str) -> Ledger:
    ledger = Ledger()
    for line in text.splitlines():
        if not line.strip():
            continue
        f = _parse_fields(line)
        prov = _parse_prov(f.get("provenance", ""))
        if f["type"] == "bound":
            rems = tuple(
                (float(a), float(b))
                for a, b in (pair.split(":") for pair in f["remainders"].split(",") if pair)
            )
            entry = BoundForm(target=f["target"], A=float(f["A"]), theta=float(f["theta"]),
                              j=float(f["j"]), log_T=float(f["logT"]), remainders=rems,
                              provenance=prov)
        else:
            entry = SqrtModel(target=f["target"], c=float(f["c"]), x_lo=float(f["x_lo"]),
                              x_hi=float(f["x_hi"]), provenance=prov)
        if f["kind"] == "axiom":
            ledger.axioms[f["name"]] = entry
        else:
            ledger.derived[f["name"]] = entry
    return ledger


# ---------------------------------------------------------------------------
# plan execution

def parse_plan(text: str):
    """Plan file: blank-line-separated blocks of "key: value" lines."""
    steps = []
    block = {}
    for raw in text.splitlines() + [""]:
        line = raw.split("#", 1)[0].strip()
        if not line:
            if block:
                steps.append(block)
                block = {}
            continue
        if ":" not in line:
            raise PlanError(f"bad plan line {raw!r}")
        k, v = line.split(":", 1)
        block[k.strip()] = v.strip()
    return steps


def _num(step, key, default=None):
    if key not in step:
        if default is None:
            raise PlanError(f"plan step missing {key!r}")
        return default
    return float(step[key])


def run_plan_step(ledger: Ledger, step: dict):
    kind = step.get("step")
    out = step.get("id")
    if not out:
        raise PlanError("plan step missing result id")
    if kind == "convert_via_G1":
        res = convert_via_G1(ledger[step["hyp"]], _num(step, "T_cut"),
                             M_integral=_num(step, "M_integral", math.nan))
        if math.isnan(res.remainders[1][0]):
            raise PlanError("M_integral required in plan form")
    elif kind == "convert_via_G1check":
        res = convert_via_G1check(ledger[step["hyp"]], _num(step, "T_cut"),
                                  M_integral=_num(step, "M_integral"))
    elif kind == "convert_via_H_envelope":
        res = convert_via_H_envelope(ledger[step["hyp"]], _num(step, "log_T_cut"),
                                     delta=_num(step, "delta", -1.0) if "delta" in step else None,
                                     m_integral=_num(step, "m_integral"))
    elif kind == "convert_via_H1":
        res = convert_via_H1(ledger[step["hyp"]], _num(step, "T_cut", 1.0))
    elif kind == "triangle_m":
        res = triangle_m(ledger[step["hyp"]], ledger[step["hyp2"]])
    elif kind == "descend":
        res = descend_to(ledger[step["hyp"]], _num(step, "A"),
                         target_j=_num(step, "j", -1.0) if "j" in step else None,
                         rank_cap=_num(step, "rank_cap", math.inf))
    elif kind == "sqrt_lower":
        res = sqrt_range_lowering(ledger[step["hyp"]], ledger[step["model"]])
    elif kind == "log_lower":
        res = log_comparison_lowering(ledger[step["hyp"]], ledger[step["hyp2"]])
    else:
        raise PlanError(f"unknown plan step kind {kind!r}")
    ledger.add_derived(out, res)
    return res


def bootstrap(ledger: Ledger, plan) -> Ledger:
    """Execute an ordered list of conversion steps against the ledger."""
    for step in plan:
        run_plan_step(ledger, step)
    return ledger
