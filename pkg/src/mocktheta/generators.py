"""Coefficient streams for omega, the Cesaro function C and f.

``omega_series`` and ``f_series`` run the Eulerian sums incrementally: the
running denominator is updated by two binomial divisions per summand, so the
whole expansion costs ``O(N^1.5)`` ring operations.  ``cesaro_series`` uses
the theta-quotient form

    C(q) = 2 * prod (1-q^n)/(1-q^{2n})^2 * ( 1/2 + 2 sum_{m>=1} q^{m(m+1)/2}/(1+q^m) )

where the bilateral sum has been folded onto ``m >= 1``.  The Eulerian form of
C only converges in the Cesaro sense and is kept as :func:`cesaro_oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .series import (
    CoefficientRing,
    Series,
    ZZ,
    _as_ring,
    euler_product,
    mul_binomial,
)

SERIES_IDS = ("omega", "cesaro", "f")


def _check_precision(N: int) -> None:
    if N < 1:
        raise ValueError("precision N must be >= 1")


def omega_series(N: int, ring=None) -> Series:
    """``sum_{n>=0} q^{2n^2+2n} / ((1-q)^2 (1-q^3)^2 ... (1-q^{2n+1})^2)`` to precision N."""
    _check_precision(N)
    ring = _as_ring(ring)
    acc = ring.zeros(N)
    denom = Series(ring.array([1] + [0] * (N - 1)), 0, 1, ring)
    n = 0
    while 2 * n * n + 2 * n < N:
        e = 2 * n * n + 2 * n
        # only the first N - e coefficients of the running quotient are needed
        denom = mul_binomial(denom.truncate(N - e), 2 * n + 1, -1, -2)
        acc[e:] += denom.coeffs
        ring.reduce(acc[e:])
        n += 1
    return Series(acc, 0, 1, ring)


def f_series(N: int, ring=None) -> Series:
    """``sum_{n>=0} q^{n^2} / ((1+q)^2 ... (1+q^n)^2)`` to precision N."""
    _check_precision(N)
    ring = _as_ring(ring)
    acc = ring.zeros(N)
    denom = Series(ring.array([1] + [0] * (N - 1)), 0, 1, ring)
    n = 0
    while n * n < N:
        e = n * n
        denom = denom.truncate(N - e)
        if n:
            denom = mul_binomial(denom, n, 1, -2)
        acc[e:] += denom.coeffs
        ring.reduce(acc[e:])
        n += 1
    return Series(acc, 0, 1, ring)


def theta_quotient(N: int, ring=None) -> Series:
    """``prod (1-q^n) / (1-q^{2n})^2 = prod (1-q^{2n-1})/(1-q^{2n})`` to precision N."""
    ring = _as_ring(ring)
    p = euler_product(N, ring)
    for n in range(1, (N - 1) // 2 + 1):
        p = mul_binomial(p, 2 * n, -1, -2)
    return p


def doubled_bilateral_sum(N: int, ring=None) -> Series:
    """``2 * sum_{n in Z} q^{n(n+1)/2}/(1+q^n)`` folded: ``1 + 4 sum_{m>=1} q^{T_m}/(1+q^m)``."""
    ring = _as_ring(ring)
    out = ring.zeros(N)
    out[0] = 1
    m = 1
    while m * (m + 1) // 2 < N:
        t = m * (m + 1) // 2
        k = len(range(t, N, m))
        alt = np.where(np.arange(k) % 2 == 0, 4, -4)
        out[t::m] += alt if ring.dtype is not object else alt.astype(object)
        m += 1
    return Series(ring.reduce(out), 0, 1, ring)


def cesaro_series(N: int, ring=None) -> Series:
    """Coefficients ``a_C(n)`` for ``n < N``.

    Computes ``P * (2B)`` as ``P + 4 sum_m q^{T_m} P/(1+q^m)`` so that no dense
    product is ever formed.
    """
    _check_precision(N)
    ring = _as_ring(ring)
    p = theta_quotient(N, ring)
    acc = p.coeffs.copy()
    m = 1
    while m * (m + 1) // 2 < N:
        t = m * (m + 1) // 2
        term = mul_binomial(p.truncate(N - t), m, 1, -1)
        acc[t:] += 4 * term.coeffs
        ring.reduce(acc[t:])
        m += 1
    return Series(acc, 0, 1, ring)


@dataclass
class OracleResult:
    """Averaged Eulerian partial sums; ``unstable`` lists exponents that still moved."""

    coefficients: list[Fraction]
    terms: int
    unstable: list[int]

    def scaled(self, lam) -> list[Fraction]:
        return [lam * c for c in self.coefficients]


def _times_binomial_list(x: list[int], e: int, sign: int) -> list[int]:
    y = list(x)
    for i in range(e, len(x)):
        y[i] += sign * x[i - e]
    return y


def _over_binomial_list(x: list[int], e: int, sign: int) -> list[int]:
    y = list(x)
    for i in range(e, len(y)):
        y[i] -= sign * y[i - e]
    return y


def cesaro_oracle(N: int, terms: int | None = None) -> OracleResult:
    """Cesaro limit of the Eulerian series ``sum (-1)^n (q;q^2)_n / (-q;q)_n^2``.

    Works on plain integer lists (independently of the numpy kernels) and
    averages consecutive partial sums ``(S_T + S_{T+1})/2``.  A coefficient
    counts as stable when the next average ``(S_{T+1} + S_{T+2})/2`` agrees
    with it; the rest are reported in ``unstable``.
    """
    if terms is None:
        terms = 2 * N + 4
    term = [1] + [0] * (N - 1)
    partial = list(term)
    prev = partial
    history = [partial]
    for n in range(1, terms + 3):
        term = _times_binomial_list(term, 2 * n - 1, -1)
        term = _over_binomial_list(term, n, 1)
        term = _over_binomial_list(term, n, 1)
        term = [-c for c in term]
        partial = [a + b for a, b in zip(prev, term)]
        prev = partial
        history.append(partial)
        if len(history) > 3:
            history.pop(0)
    s_t, s_t1, s_t2 = history
    avg = [Fraction(a + b, 2) for a, b in zip(s_t, s_t1)]
    nxt = [Fraction(a + b, 2) for a, b in zip(s_t1, s_t2)]
    unstable = [i for i in range(N) if avg[i] != nxt[i]]
    return OracleResult(avg, terms, unstable)


# -- embeddings into harmonic-form expansions ----------------------------------

def embedding(family: str) -> tuple[int, int, int, int]:
    """``(w, scale, shift, factor)``: ``a(n)`` sits at numerator ``scale*n + shift`` times ``factor``."""
    if family == "cesaro":
        return 8, 8, -1, 1
    if family == "omega":
        return 1, 3, 2, 2
    raise ValueError(f"unknown family {family!r}")


def embedded_series(family: str, N: int, ring=None) -> Series:
    """``q^{-1/8} C(q)`` on the ``q^{1/8}`` lattice, or ``2 q^2 omega(q^3)``.

    Constant prefactors such as ``1/(4i)`` are dropped.
    """
    ring = _as_ring(ring)
    w, scale, shift, factor = embedding(family)
    raw = cesaro_series(N, ring) if family == "cesaro" else omega_series(N, ring)
    out = ring.zeros(scale * N)
    out[::scale] = raw.coeffs * factor
    return Series(ring.reduce(out), shift, w, ring)


def generate(series_id: str, N: int, ring=None) -> Series:
    try:
        fn = {"omega": omega_series, "cesaro": cesaro_series, "f": f_series}[series_id]
    except KeyError:
        raise ValueError(f"unknown series {series_id!r}; choose from {SERIES_IDS}") from None
    return fn(N, ring)


# -- non-holomorphic supports ----------------------------------------------------

@dataclass(frozen=True)
class NonholoSupport:
    """Exponent numerators carrying the non-holomorphic part.

    cesaro: ``-2(2k+1)^2`` on the ``q^{1/8}`` lattice, ``k`` in Z.
    omega:  ``-k^2`` on the integer lattice, ``k >= 1``, ``k = 1 (mod 3)``.
    """

    family: str
    w: int

    def __contains__(self, numerator: int) -> bool:
        e = int(numerator)
        if self.family == "cesaro":
            if e >= 0 or e % 2:
                return False
            sq = -e // 2
            r = isqrt(sq)
            return r * r == sq and r % 2 == 1
        if e >= 0:
            return False
        r = isqrt(-e)
        return r * r == -e and r % 3 == 1

    def parameter_values(self, period: int) -> range:
        """Parameters ``k`` covering every residue of the support modulo ``period``."""
        if self.family == "cesaro":
            return range(period)
        return range(1, 3 * period + 1, 3)

    def element(self, k: int) -> int:
        if self.family == "cesaro":
            return -2 * (2 * k + 1) ** 2
        return -k * k

    def residues(self, m: int) -> set[int]:
        return {self.element(k) % m for k in self.parameter_values(m)}


def nonholo_support(family: str) -> NonholoSupport:
    if family == "cesaro":
        return NonholoSupport("cesaro", 8)
    if family == "omega":
        return NonholoSupport("omega", 1)
    raise ValueError(f"unknown family {family!r}")
