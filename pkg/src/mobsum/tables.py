"""Sieved Möbius tables and compensated prefix series.

Provides the integer layer (mu values and their exact prefix sums) and the
floating-point layer (prefix sums of mu(k)/k and mu(k)*log(k)/k with a
certified per-index error radius), plus point evaluation of the four
summatory functions

    M(x)      = sum_{n<=x} mu(n)                    (exact integer)
    m(x)      = sum_{n<=x} mu(n)/n
    m1(x)     = m(x) - M(x)/x
    mcheck(x) = sum_{n<=x} (mu(n)/n) log(x/n) = m(|x|) log x - ell(|x|)

where ell(n) = sum_{k<=n} mu(k) log(k)/k.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError, RangeError

_ULP = 2.0 ** -53  # unit roundoff for IEEE-754 binary64

_CACHE_MAGIC = "MOEBIUS-TABLE v1"
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


# ---------------------------------------------------------------------------
# integer layer


@dataclass(frozen=True)
class MuTable:
    """Möbius values mu(1..limit) and their exact prefix sums.

    ``mu[n]`` and ``mertens[n]`` are 1-indexed: index 0 is unused (zero).
    ``mertens[n] = sum_{k<=n} mu[k]`` held exactly in int64.
    """

    limit: int
    mu: np.ndarray        # int8, length limit+1
    mertens: np.ndarray   # int64, length limit+1

    def __post_init__(self):
        self.mu.setflags(write=False)
        self.mertens.setflags(write=False)


def _small_primes(bound: int) -> np.ndarray:
    """Primes up to ``bound`` by a plain boolean sieve."""
    if bound < 2:
        return np.empty(0, dtype=np.int64)
    comp = np.zeros(bound + 1, dtype=bool)
    comp[:2] = True
    for p in range(2, int(math.isqrt(bound)) + 1):
        if not comp[p]:
            comp[p * p :: p] = True
    return np.nonzero(~comp)[0].astype(np.int64)


def _sieve_block(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """mu values for n in [lo, hi) (lo >= 1), as int8."""
    n = hi - lo
    mu = np.ones(n, dtype=np.int8)
    val = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        p = int(p)
        start = (-lo) % p
        mu[start::p] *= -1
        q = p
        while q < hi:
            s = (-lo) % q
            val[s::q] //= p
            q *= p
        sq = p * p
        if sq < hi:
            mu[(-lo) % sq :: sq] = 0
    # entries whose residual cofactor exceeds 1 carry one extra large prime
    mu[val > 1] *= -1
    return mu


def sieve_mu(limit: int, block_size: int = 1 << 20, jobs: int = 1) -> MuTable:
    """Sieve mu(n) for 1 <= n <= limit and accumulate exact Mertens sums.

    Deterministic for any block size and worker count: blocks are merged in
    index order and the prefix sum is taken once over the merged array.
    """
    if limit < 1:
        raise InvalidArgumentError("limit must be a positive integer")
    if block_size < 1:
        raise InvalidArgumentError("block_size must be positive")
    primes = _small_primes(int(math.isqrt(limit)))
    spans = [(lo, min(lo + block_size, limit + 1)) for lo in range(1, limit + 1, block_size)]
    mu = np.zeros(limit + 1, dtype=np.int8)
    if jobs > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda s: _sieve_block(s[0], s[1], primes), spans))
        for (lo, hi), part in zip(spans, parts):
            mu[lo:hi] = part
    else:
        for lo, hi in spans:
            mu[lo:hi] = _sieve_block(lo, hi, primes)
    mertens = np.cumsum(mu, dtype=np.int64)
    return MuTable(limit=limit, mu=mu, mertens=mertens)


def abs_mertens_prefix_integral(table: MuTable, T: int) -> int:
    """Exact integer sum_{n=1}^{T-1} |M(n)| = integral of |M| over [1, T].

    Valid because M is constant on each [n, n+1).
    """
    if not 2 <= T <= table.limit:
        raise InvalidArgumentError("need 2 <= T <= table.limit")
    return int(np.abs(table.mertens[1:T]).sum())


# ---------------------------------------------------------------------------
# floating-point layer


@dataclass(frozen=True)
class PrefixSeries:
    """Compensated prefix sums with a certified absolute error radius.

    ``values[n]`` approximates the exact rational prefix sum of the first n
    terms; ``|values[n] - exact| <= error_radius[n]`` and the radius is
    monotone nondecreasing.  Index 0 is the empty sum (exactly 0).
    """

    limit: int
    values: np.ndarray        # float64, length limit+1
    error_radius: np.ndarray  # float64, length limit+1
    term_kind: str = "generic"

    def __post_init__(self):
        self.values.setflags(write=False)
        self.error_radius.setflags(write=False)


def _compensated_prefix(terms: np.ndarray, term_rep_error: np.ndarray) -> PrefixSeries:
    """Prefix sums of ``terms`` with one round of error-free correction.

    np.cumsum accumulates left to right, so with s_i the naive prefix and
    prev_i = s_{i-1} the quantities

        bb  = s - prev            (Neumaier branch-free TwoSum split)
        err = (prev - (s - bb)) + (t - bb)

    recover each step's exact rounding error; adding their running sum back
    gives values accurate to ~1 ulp.  The certified radius combines:
      * representation error of the terms themselves (given per term),
      * second-order error of the correction cumsum: ulp * running sum |err|
        plus n * ulp^2 * running sum |terms|,
      * the final uncompensated rounding: 2 ulp * running max |values|.
    """
    n = terms.shape[0]
    s = np.cumsum(terms)
    prev = np.empty_like(s)
    prev[0] = 0.0
    prev[1:] = s[:-1]
    bb = s - prev
    err = (prev - (s - bb)) + (terms - bb)
    values = s + np.cumsum(err)

    abs_run = np.cumsum(np.abs(terms))
    rep_run = np.cumsum(term_rep_error)
    err_run = np.cumsum(np.abs(err))
    idx = np.arange(1, n + 1, dtype=np.float64)
    radius = (
        rep_run
        + _ULP * err_run
        + idx * _ULP * _ULP * abs_run
        + 2.0 * _ULP * np.maximum.accumulate(np.abs(values))
    )
    radius = np.maximum.accumulate(radius)

    out_v = np.empty(n + 1)
    out_v[0] = 0.0
    out_v[1:] = values
    out_r = np.empty(n + 1)
    out_r[0] = 0.0
    out_r[1:] = radius
    return PrefixSeries(limit=n, values=out_v, error_radius=out_r)


def m_series(table: MuTable) -> PrefixSeries:
    """Prefix sums of mu(k)/k, certified to ~1e-14 absolute up to 1e8."""
    k = np.arange(1, table.limit + 1, dtype=np.float64)
    terms = table.mu[1:].astype(np.float64) / k
    # each quotient mu/k carries at most half an ulp of relative error
    rep = _ULP * np.abs(terms)
    ser = _compensated_prefix(terms, rep)
    return PrefixSeries(ser.limit, ser.values, ser.error_radius, term_kind="m")


def ell_series(table: MuTable) -> PrefixSeries:
    """Prefix sums of mu(k)*log(k)/k (the auxiliary series behind mcheck)."""
    k = np.arange(1, table.limit + 1, dtype=np.float64)
    logs = np.log(k)
    terms = table.mu[1:].astype(np.float64) * logs / k
    # log() is faithfully rounded (<=1 ulp) and the quotient adds one more
    rep = 3.0 * _ULP * np.abs(terms)
    ser = _compensated_prefix(terms, rep)
    return PrefixSeries(ser.limit, ser.values, ser.error_radius, term_kind="ell")


@dataclass(frozen=True)
class SeriesPair:
    """The two prefix series needed to evaluate m, m1 and mcheck."""

    m: PrefixSeries
    ell: PrefixSeries


@dataclass(frozen=True)
class EvaluationPoint:
    x: float
    m: float
    m1: float
    M_over_x: float
    m_check: float
    error_radius: float


@dataclass(frozen=True)
class Tables:
    """Bundle of a sieve and its derived prefix series."""

    mu: MuTable
    series: SeriesPair = field(repr=False)

    @property
    def limit(self) -> int:
        return self.mu.limit


def build_tables(limit: int, block_size: int = 1 << 20, jobs: int = 1) -> Tables:
    table = sieve_mu(limit, block_size=block_size, jobs=jobs)
    return Tables(mu=table, series=SeriesPair(m=m_series(table), ell=ell_series(table)))


def evaluate(table: MuTable, series: SeriesPair, x: float) -> EvaluationPoint:
    """Evaluate M/x, m, m1 and mcheck at a real point x >= 1."""
    if x < 1:
        raise InvalidArgumentError("x must be >= 1")
    if x >= table.limit + 1:
        raise RangeError(
            f"x={x} outside table range; sieve at least to limit={int(x)}"
        )
    n = int(math.floor(x))
    mv = float(series.m.values[n])
    Mv = float(table.mertens[n])
    lx = math.log(x)
    ellv = float(series.ell.values[n])
    m1 = mv - Mv / x
    m_check = mv * lx - ellv
    rad = float(series.m.error_radius[n])
    rad_check = rad * abs(lx) + float(series.ell.error_radius[n]) + 4.0 * _ULP * (
        abs(mv * lx) + abs(ellv)
    )
    return EvaluationPoint(
        x=float(x),
        m=mv,
        m1=m1,
        M_over_x=Mv / x,
        m_check=m_check,
        error_radius=max(rad, rad_check),
    )


def abel_residual(table: MuTable, series: SeriesPair, x: float) -> float:
    """m1(x) minus the exact piecewise value of integral_1^x M(u)/u^2 du.

    The identity is exact, so the residual is pure accumulated rounding.
    """
    if not 1 <= x <= table.limit:
        raise InvalidArgumentError("need 1 <= x <= table.limit")
    n = int(math.floor(x))
    pt = evaluate(table, series, x)
    M = table.mertens
    parts = [M[k] * (1.0 / k - 1.0 / (k + 1)) for k in range(1, n)]
    parts.append(M[n] * (1.0 / n - 1.0 / x))
    return pt.m1 - math.fsum(parts)


def exact_prefix_fraction(table: MuTable, n: int, kind: str = "m") -> Fraction:
    """Exact rational prefix sum, for escalation and small-n oracles."""
    if kind != "m":
        raise InvalidArgumentError("exact rational escalation only supports m")
    acc = Fraction(0)
    mu = table.mu
    for k in range(1, n + 1):
        v = int(mu[k])
        if v:
            acc += Fraction(v, k)
    return acc


# ---------------------------------------------------------------------------
# on-disk cache


def _fnv1a64(payload: bytes) -> int:
    h = _FNV_OFFSET
    for b in payload:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def cache_path(cache_dir: str, limit: int) -> str:
    return os.path.join(cache_dir, f"moebius-{limit}.tbl")


def save_table(table: MuTable, path: str) -> None:
    """Persist a MuTable: ASCII header, mu bytes, Mertens int64, FNV trailer."""
    mu_bytes = table.mu[1:].astype("<i1").tobytes()
    mert_bytes = table.mertens[1:].astype("<i8").tobytes()
    payload = mu_bytes + mert_bytes
    digest = _fnv1a64(payload)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(f"{_CACHE_MAGIC} limit={table.limit}\n".encode("ascii"))
        fh.write(payload)
        fh.write(digest.to_bytes(8, "little"))
    os.replace(tmp, path)


def load_table(path: str) -> MuTable:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").strip()
        if not header.startswith(_CACHE_MAGIC + " limit="):
            raise InvalidArgumentError(f"not a moebius table cache: {path}")
        limit = int(header.split("limit=")[1])
        payload = fh.read(limit * 9)
        trailer = fh.read(8)
    if len(payload) != limit * 9 or len(trailer) != 8:
        raise InvalidArgumentError(f"truncated cache file: {path}")
    if _fnv1a64(payload) != int.from_bytes(trailer, "little"):
        raise InvalidArgumentError(f"cache checksum mismatch: {path}")
    mu = np.zeros(limit + 1, dtype=np.int8)
    mu[1:] = np.frombuffer(payload[:limit], dtype="<i1")
    mertens = np.zeros(limit + 1, dtype=np.int64)
    mertens[1:] = np.frombuffer(payload[limit:], dtype="<i8")
    return MuTable(limit=limit, mu=mu, mertens=mertens)
