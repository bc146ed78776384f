"""Weight densities, their lattice sums, and related envelopes.

The two shipped analytic densities are
    g1(y) = 4 y (1 - y^2)        with  integral over [0,1] equal to 1,
    h1(y) = (2/3)(1 - y^2)(8y - 3) with integral 0,
and the generic weight given by a finite coefficient list (r, c_r) whose
density is h(y) = sum_r c_r 1_{[0,1]}(r y).

For a density g the lattice sum is G(t) = 1 - (1/t) sum_{n<=t} g(n/t);
for a density h it is H(t) = 1 - sum_{n<=t} h(n/t).  For the polynomial
densities these sums reduce exactly to power sums of N = floor(t); the
closed form is the default evaluation path (extended precision to tame
the cancellation of the leading 1) and the generic compensated direct sum
is kept as a cross-check route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, InvalidArgumentError, ResourceError

_SUM_GUARD = 10**7  # max number of lattice terms per call
_ULP = 2.0 ** -53


def g1(y: float) -> float:
    """Density 4 y (1 - y^2) on [0, 1]; unit integral."""
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"g1 requires y in [0,1]; got {y}")
    return 4.0 * y * (1.0 - y * y)


def h1(y: float) -> float:
    """Density (2/3)(1 - y^2)(8y - 3) on [0, 1]; zero integral."""
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"h1 requires y in [0,1]; got {y}")
    return (2.0 / 3.0) * (1.0 - y * y) * (8.0 * y - 3.0)


@dataclass(frozen=True)
class WeightSpec:
    """A weight density: a named analytic function or a coefficient list."""

    kind: str  # "analytic-g" | "analytic-h" | "coefficient-list"
    name: str = ""
    density: Optional[Callable[[float], float]] = None
    coeffs: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in ("analytic-g", "analytic-h", "coefficient-list"):
            raise InvalidArgumentError(f"unknown weight kind {self.kind!r}")
        if self.kind.startswith("analytic") and self.density is None:
            raise InvalidArgumentError("analytic weight needs a density")


@dataclass(frozen=True)
class EnvelopeParams:
    """Certified envelope constants of an external (unpublished) weight."""

    sup_norm: float
    l1_mellin2: float
    K: float
    sum_c: float
    max_r: float

    def __post_init__(self):
        for f in (self.sup_norm, self.l1_mellin2, self.K, self.sum_c, self.max_r):
            if f < 0:
                raise InvalidArgumentError("envelope parameters must be nonnegative")


G1_SPEC = WeightSpec(kind="analytic-g", name="g1", density=g1)
H1_SPEC = WeightSpec(kind="analytic-h", name="h1", density=h1)

# Published envelope of the Cohen–Dress–El Marraki coefficient weight.
# K is printed inconsistently in the sources (100822 vs 100882); kept
# configurable, defaulting to the larger value.
H2_ENVELOPE = EnvelopeParams(
    sup_norm=22527.5,
    l1_mellin2=(math.pi**2 / 6.0) / 4345.0,
    K=100882.0,
    sum_c=6.0,
    max_r=5.0e13,
)
H2_K_ALTERNATE = 100822.0


def _power_sums(N: int):
    """Exact integer power sums S1, S2, S3 of 1..N."""
    S1 = N * (N + 1) // 2
    S2 = N * (N + 1) * (2 * N + 1) // 6
    return S1, S2, S1 * S1


def _guard(t: float) -> int:
    N = math.floor(t)
    if N > _SUM_GUARD:
        raise ResourceError(f"lattice sum over {N} terms exceeds guard {_SUM_GUARD}")
    return N


def eval_G(spec: WeightSpec, t: float, method: str = "auto") -> float:
    """G(t) = 1 - (1/t) sum_{n<=t} g(n/t) for an analytic-g weight."""
    if spec.kind != "analytic-g":
        raise InvalidArgumentError("eval_G requires an analytic-g weight")
    if t < 1.0:
        raise DomainError("eval_G requires t >= 1")
    N = _guard(t)
    if method == "auto" and spec.name == "g1":
        # 1 - 4 S1/t^2 + 4 S3/t^4 in extended precision (the leading 1
        # cancels almost completely for large t)
        S1, _, S3 = _power_sums(N)
        tl = np.longdouble(t)
        val = np.longdouble(1.0) - 4 * np.longdouble(S1) / tl**2 + 4 * np.longdouble(S3) / tl**4
        return float(val)
    n = np.arange(1, N + 1, dtype=np.longdouble)
    s = np.sum(np.asarray([spec.density(float(v) / t) for v in n], dtype=np.longdouble))
    return float(np.longdouble(1.0) - s / np.longdouble(t))


def eval_H(spec: WeightSpec, t: float, method: str = "auto") -> float:
    """H(t) = 1 - sum_{n<=t} h(n/t) for an analytic-h weight."""
    if spec.kind != "analytic-h":
        raise InvalidArgumentError("eval_H requires an analytic-h weight")
    if t < 1.0:
        raise DomainError("eval_H requires t >= 1")
    N = _guard(t)
    if method == "auto" and spec.name == "h1":
        # 1 - (2/3)(8 S1/t - 3N - 8 S3/t^3 + 3 S2/t^2)
        S1, S2, S3 = _power_sums(N)
        tl = np.longdouble(t)
        inner = (
            8 * np.longdouble(S1) / tl
            - 3 * np.longdouble(N)
            - 8 * np.longdouble(S3) / tl**3
            + 3 * np.longdouble(S2) / tl**2
        )
        return float(np.longdouble(1.0) - np.longdouble(2.0) / 3 * inner)
    s = np.sum(
        np.asarray([spec.density(float(v) / t) for v in range(1, N + 1)], dtype=np.longdouble)
    )
    return float(np.longdouble(1.0) - s)


def _floor_quotient(t: float, r: float) -> int:
    """floor(t/r) with an exact re-decision when t/r sits within 4 ulp of
    an integer (floor discontinuities are the dominant hazard)."""
    q = t / r
    m = round(q)
    if abs(q - m) <= 4.0 * _ULP * max(1.0, abs(q)):
        return m if Fraction(t) >= Fraction(r) * m else m - 1
    return math.floor(q)


def eval_H_coeffs(
    coeffs: Sequence[Tuple[float, float]], t: float, form: str = "floor"
) -> float:
    """H(t) for a coefficient weight: 1 - sum_r c_r floor(t/r), or the
    algebraically equal fractional form 1 + sum_r c_r {t/r} (equality
    requires sum_r c_r / r = 0)."""
    if t < 1.0:
        raise DomainError("eval_H_coeffs requires t >= 1")
    if form == "floor":
        terms = [c * _floor_quotient(t, r) for r, c in coeffs]
        return 1.0 - math.fsum(terms)
    if form == "frac":
        terms = [c * (t / r - _floor_quotient(t, r)) for r, c in coeffs]
        return 1.0 + math.fsum(terms)
    raise InvalidArgumentError(f"unknown form {form!r}")


def epsilon1(t: float) -> float:
    """Closed form of the antiderivative of G1 from 1:

    1/3 - 1/(3t) + (4/3)({t}^3 - (3/2){t}^2 + {t}/2)/t^2
               - (1/3)({t}^4 - 2{t}^3 + {t}^2)/t^3.
    """
    if t < 1.0:
        raise DomainError("epsilon1 requires t >= 1")
    f = t - math.floor(t)
    a = f * f * f - 1.5 * f * f + 0.5 * f
    b = f * f * f * f - 2.0 * f * f * f + f * f
    return 1.0 / 3.0 - 1.0 / (3.0 * t) + (4.0 / 3.0) * a / (t * t) - b / (3.0 * t**3)


def em_H1_envelope(t: float) -> Tuple[float, float]:
    """Euler–Maclaurin approximation of H1(t) with certified error.

    approx = [(10/3)({t}^2 - {t}) + 1]/t,  err = 1.56/(6 t^2).
    """
    if t < 1.0:
        raise DomainError("em_H1_envelope requires t >= 1")
    f = t - math.floor(t)
    approx = ((10.0 / 3.0) * (f * f - f) + 1.0) / t
    return approx, 1.56 / (6.0 * t * t)


def partial_moebius_fractional_sum(table, K: int, t: float) -> float:
    """S_K(t) = sum_{k<=K} mu(k) {t/k}."""
    if K > table.limit:
        raise InvalidArgumentError(f"K={K} exceeds table limit {table.limit}")
    k = np.arange(1, K + 1, dtype=np.float64)
    q = t / k
    frac = q - np.floor(q)
    # near-integer quotients re-decided exactly
    near = np.abs(q - np.rint(q)) <= 4.0 * _ULP * np.maximum(1.0, np.abs(q))
    for idx in np.nonzero(near)[0]:
        kk = int(idx) + 1
        fq = _floor_quotient(t, float(kk))
        frac[idx] = t / kk - fq
    mu = table.mu[1 : K + 1].astype(np.float64)
    return float(math.fsum((mu * frac).tolist()))


def load_coeff_weight(path) -> WeightSpec:
    """Load a coefficient weight from a text file of lines "r c_r".

    Validates sum_r c_r / r = 0: exactly in rational arithmetic when every
    token parses as a finite decimal, else to 1e-15.
    """
    pairs = []
    tokens_rational = True
    rats = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidArgumentError(f"{path}:{lineno}: expected 'r c_r'")
            try:
                r, c = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: bad number") from exc
            if r <= 0:
                raise InvalidArgumentError(f"{path}:{lineno}: r must be positive")
            pairs.append((r, c))
            try:
                rats.append(Fraction(parts[1]) / Fraction(parts[0]))
            except ValueError:
                tokens_rational = False
    if tokens_rational:
        if sum(rats, Fraction(0)) != 0:
            raise InvalidArgumentError("coefficient weight violates sum c_r/r = 0")
    else:
        if abs(math.fsum(c / r for r, c in pairs)) > 1e-15:
            raise InvalidArgumentError("coefficient weight violates sum c_r/r = 0 (1e-15)")
    return WeightSpec(kind="coefficient-list", name="coeffs", coeffs=tuple(pairs))
