"""Truncated q-series with exact coefficients.

A :class:`Series` stores the coefficients of ``q^{(offset+i)/w}`` for
``i = 0 .. len-1``.  Everything at or beyond ``offset + len`` is unknown, and
reading it raises :class:`PrecisionError`.

Coefficients live in a :class:`CoefficientRing`: the integers (modulus 0,
stored as Python ints in object arrays) or ``Z/mZ`` (stored as int64
residues in ``[0, m)``).  The large-scale generators only use the linear-time
kernels :func:`mul_binomial` and sparse convolution; :func:`mul_dense` is
schoolbook and meant for desk-sized inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "CoefficientRing",
    "ZZ",
    "PrecisionError",
    "RingMismatchError",
    "Series",
    "series",
    "add",
    "mul_dense",
    "mul_binomial",
    "invert",
    "euler_product",
    "euler_reciprocal",
    "sparse_mul",
    "sparse_divide",
    "rescale",
    "write_csv",
    "read_csv",
]

# residues below this bound are stored as int64; products of two residues fit
_WORD_MODULUS = 1 << 31


class PrecisionError(ValueError):
    """Raised when a coefficient beyond the trustworthy precision is read."""


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientRing:
    """The integers (``modulus == 0``) or the residues modulo ``modulus``."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError(f"modulus must be 0 or >= 2, got {self.modulus}")

    @property
    def is_integers(self) -> bool:
        return self.modulus == 0

    @property
    def dtype(self):
        if 0 < self.modulus < _WORD_MODULUS:
            return np.int64
        return object

    def zeros(self, n: int) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(n, dtype=object)
            out[:] = 0
            return out
        return np.zeros(n, dtype=np.int64)

    def array(self, values: Iterable[int]) -> np.ndarray:
        m = self.modulus
        vals = [int(v) % m if m else int(v) for v in values]
        out = self.zeros(len(vals))
        if vals:
            out[:] = vals
        return self.reduce(out)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Canonicalize an array in place (returns it for chaining)."""
        if self.modulus:
            np.remainder(arr, self.modulus, out=arr)
        return arr

    def element(self, x: int) -> int:
        x = int(x)
        return x % self.modulus if self.modulus else x

    def is_unit(self, x: int) -> bool:
        x = int(x)
        if self.modulus:
            return math.gcd(x, self.modulus) == 1
        return x in (1, -1)

    def inverse(self, x: int) -> int:
        x = int(x)
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit in {self}")
        if self.modulus:
            return pow(x, -1, self.modulus)
        return x

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}Z"


ZZ = CoefficientRing(0)


def _as_ring(ring) -> CoefficientRing:
    if ring is None:
        return ZZ
    if isinstance(ring, CoefficientRing):
        return ring
    return CoefficientRing(int(ring))


class Series:
    """Immutable truncated expansion ``sum_i coeffs[i] q^{(offset+i)/w}``."""

    __slots__ = ("coeffs", "offset", "w", "ring")

    def __init__(self, coeffs, offset: int = 0, w: int = 1, ring=None):
        ring = _as_ring(ring)
        if w < 1:
            raise ValueError("exponent denominator w must be positive")
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.dtype(ring.dtype):
            arr = coeffs.copy()
            ring.reduce(arr)
        else:
            arr = ring.array(coeffs)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "offset", int(offset))
        object.__setattr__(self, "w", int(w))
        object.__setattr__(self, "ring", ring)

    @classmethod
    def _wrap(cls, arr: np.ndarray, offset: int, w: int, ring: CoefficientRing) -> "Series":
        # trusted constructor: arr is already canonical and owned by the result
        obj = cls.__new__(cls)
        arr.flags.writeable = False
        object.__setattr__(obj, "coeffs", arr)
        object.__setattr__(obj, "offset", int(offset))
        object.__setattr__(obj, "w", int(w))
        object.__setattr__(obj, "ring", ring)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @property
    def precision(self) -> int:
        """Exclusive bound on trustworthy exponent numerators."""
        return self.offset + len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, numerator: int) -> int:
        numerator = int(numerator)
        if numerator >= self.precision:
            raise PrecisionError(
                f"exponent {numerator}/{self.w} is beyond precision {self.precision}/{self.w}"
            )
        if numerator < self.offset:
            return 0
        return int(self.coeffs[numerator - self.offset])

    def coefficient(self, exponent) -> int:
        """Coefficient of ``q^exponent`` for a rational exponent."""
        from fractions import Fraction

        e = Fraction(exponent) * self.w
        if e.denominator != 1:
            return 0
        return self[e.numerator]

    def items(self) -> Iterator[tuple[int, int]]:
        """Nonzero ``(numerator, coefficient)`` pairs in increasing order."""
        for i in np.flatnonzero(self.coeffs):
            yield self.offset + int(i), int(self.coeffs[i])

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def valuation(self) -> int | None:
        nz = np.flatnonzero(self.coeffs)
        return None if len(nz) == 0 else self.offset + int(nz[0])

    def relattice(self, w: int) -> "Series":
        """Re-express on the finer lattice ``q^{1/w}`` (``w`` a multiple of ``self.w``)."""
        if w == self.w:
            return self
        k, r = divmod(w, self.w)
        if r or k < 1:
            raise ValueError(f"cannot move from w={self.w} to w={w}")
        return _spread(self, k, w)

    def truncate(self, precision: int) -> "Series":
        if precision > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {precision}")
        n = max(precision - self.offset, 0)
        return Series._wrap(self.coeffs[:n].copy(), self.offset, self.w, self.ring)

    def reduce(self, modulus: int) -> "Series":
        """Reduce integer (or compatible residue) coefficients modulo ``modulus``."""
        target = _as_ring(modulus)
        if self.ring.modulus and target.modulus and self.ring.modulus % target.modulus:
            raise RingMismatchError(f"cannot reduce {self.ring} to {target}")
        if target.modulus == 0 and self.ring.modulus:
            raise RingMismatchError("cannot lift residues to the integers")
        return Series(self.tolist(), self.offset, self.w, target)

    def shift(self, k: int) -> "Series":
        """Multiply by ``q^{k/w}``."""
        return Series._wrap(self.coeffs.copy(), self.offset + k, self.w, self.ring)

    def scale(self, c: int) -> "Series":
        arr = self.coeffs * self.ring.element(c)
        return Series._wrap(self.ring.reduce(arr), self.offset, self.w, self.ring)

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul_dense(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.w == other.w
            and self.offset == other.offset
            and self.ring == other.ring
            and len(self) == len(other)
            and bool(np.all(self.coeffs == other.coeffs))
        )

    __hash__ = None

    def __repr__(self):
        head = ", ".join(str(int(c)) for c in self.coeffs[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"Series([{head}{more}], offset={self.offset}, w={self.w}, ring={self.ring}, precision={self.precision})"


def series(coeffs, offset: int = 0, w: int = 1, ring=None) -> Series:
    return Series(coeffs, offset, w, ring)


def _spread(a: Series, k: int, w: int) -> Series:
    # exponent e/a.w -> (k e)/w; precision scales with it
    n = len(a) * k
    out = a.ring.zeros(n)
    out[::k] = a.coeffs
    return Series._wrap(out, a.offset * k, w, a.ring)


def _common(a: Series, b: Series) -> tuple[Series, Series]:
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")
    w = math.lcm(a.w, b.w)
    return a.relattice(w), b.relattice(w)


def add(a: Series, b: Series) -> Series:
    """Coefficient-wise sum; precision is the smaller of the two."""
    a, b = _common(a, b)
    lo = min(a.offset, b.offset)
    hi = min(a.precision, b.precision)
    out = a.ring.zeros(max(hi - lo, 0))
    for s in (a, b):
        n = max(min(s.precision, hi) - s.offset, 0)
        start = s.offset - lo
        if n > 0:
            out[start:start + n] += s.coeffs[:n]
    return Series._wrap(a.ring.reduce(out), lo, a.w, a.ring)


def mul_dense(a: Series, b: Series) -> Series:
    """Schoolbook Cauchy product truncated to the jointly valid precision."""
    a, b = _common(a, b)
    ring = a.ring
    n = min(len(a), len(b))
    out = ring.zeros(n)
    bc = b.coeffs[:n]
    for i in np.flatnonzero(a.coeffs[:n]):
        ai = a.coeffs[i]
        out[i:] += ai * bc[:n - i]
        if ring.modulus:
            out %= ring.modulus
    return Series._wrap(ring.reduce(out), a.offset + b.offset, a.w, ring)


# -- binomial kernels on raw arrays ------------------------------------------

def _times_binomial(x: np.ndarray, e: int, sign: int, ring: CoefficientRing) -> np.ndarray:
    # x * (1 + sign q^e)
    y = x.copy()
    if e < len(x):
        if sign > 0:
            y[e:] += x[:-e]
        else:
            y[e:] -= x[:-e]
    return ring.reduce(y)


def _over_binomial(x: np.ndarray, e: int, sign: int, ring: CoefficientRing, times: int = 1) -> np.ndarray:
    # x / (1 + sign q^e)^times:  y_n = x_n - sign * y_{n-e}, applied `times` times
    n = len(x)
    if e >= n:
        return x.copy()
    rows = -(-n // e)
    pad = ring.zeros(rows * e)
    pad[:n] = x
    grid = pad.reshape(rows, e)
    alt = None
    if sign > 0:
        alt = np.ones((rows, 1), dtype=np.int64)
        alt[1::2] = -1
        if ring.dtype is object:
            alt = alt.astype(object)
        grid *= alt
    # residues stay below m * rows**times, so int64 needs no reduction in between
    fused = ring.dtype is object or ring.modulus * float(rows) ** times < 2.0 ** 62
    for _ in range(times):
        np.cumsum(grid, axis=0, out=grid)
        if not fused:
            ring.reduce(grid)
    if alt is not None:
        grid *= alt
    return ring.reduce(pad[:n])


def mul_binomial(a: Series, exp: int, sign: int, power: int) -> Series:
    """Multiply ``a`` by ``(1 + sign*q^{exp/w})**power``.

    ``exp`` is a numerator on ``a``'s lattice; negative ``power`` divides.
    Costs ``|power|`` linear passes.
    """
    if exp < 1:
        raise ValueError("exp must be a positive numerator")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    x = a.coeffs
    if power < 0:
        x = _over_binomial(x, exp, sign, a.ring, -power)
    else:
        for _ in range(power):
            x = _times_binomial(x, exp, sign, a.ring)
        if power == 0:
            x = x.copy()
    return Series._wrap(x, a.offset, a.w, a.ring)


def invert(a: Series) -> Series:
    """Multiplicative inverse to the working precision.

    The lowest nonzero coefficient must be a unit of the ring.
    """
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("cannot invert a series with no nonzero coefficient")
    ring = a.ring
    u = a.coeffs[v - a.offset:]
    n = len(u)
    lead = int(u[0])
    if not ring.is_unit(lead):
        raise ZeroDivisionError(f"leading coefficient {lead} is not a unit in {ring}")
    inv0 = ring.inverse(lead)
    uo = np.array([int(c) for c in u], dtype=object)
    b = np.empty(n, dtype=object)
    b[0] = ring.element(inv0)
    for k in range(1, n):
        s = np.dot(uo[1:k + 1], b[k - 1::-1])
        b[k] = ring.element(-inv0 * s)
    return Series(b, -v, a.w, ring)


def _pentagonal(n: int) -> Iterator[tuple[int, int]]:
    # (exponent, sign) of prod (1 - q^k) below n, increasing order
    yield 0, 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 >= n:
            break
        s = -1 if k % 2 else 1
        yield g1, s
        g2 = k * (3 * k + 1) // 2
        if g2 < n:
            yield g2, s
        k += 1


def euler_product(N: int, ring=None) -> Series:
    """``prod_{n>=1} (1 - q^n)`` to precision ``N`` via the pentagonal number theorem."""
    if N < 1:
        raise ValueError("precision must be >= 1")
    ring = _as_ring(ring)
    out = ring.zeros(N)
    for e, s in _pentagonal(N):
        out[e] = s
    return Series._wrap(ring.reduce(out), 0, 1, ring)


def sparse_mul(a: Series, s: Series) -> Series:
    """Product with a series ``s`` that has few nonzero terms and offset 0."""
    a, s = _common(a, s)
    ring = a.ring
    n = min(len(a), len(s))
    out = ring.zeros(n)
    for j, c in s.items():
        j -= s.offset
        if j < n:
            out[j:] += c * a.coeffs[:n - j]
    return Series._wrap(ring.reduce(out), a.offset + s.offset, a.w, ring)


def sparse_divide(a: Series, s: Series) -> Series:
    """Quotient ``a / s`` for a sparse ``s`` whose constant term is a unit.

    Runs the recurrence ``c_n = (a_n - sum_{j>0} s_j c_{n-j}) / s_0`` in
    ``O(len * nnz(s))``.
    """
    a, s = _common(a, s)
    if s.offset != 0:
        raise ValueError("divisor must start at q^0")
    ring = a.ring
    n = min(len(a), len(s))
    terms = [(j, c) for j, c in s.items() if 0 < j < n]
    s0 = s[0]
    inv0 = ring.inverse(s0)
    c = [0] * n
    src = a.coeffs
    m = ring.modulus
    for i in range(n):
        acc = int(src[i])
        for j, sj in terms:
            if j > i:
                break
            acc -= sj * c[i - j]
        acc *= inv0
        c[i] = acc % m if m else acc
    return Series(c, a.offset, a.w, ring)


def euler_reciprocal(N: int, ring=None) -> Series:
    """``prod_{n>=1} (1 - q^n)^{-1}``, the partition generating function."""
    ring = _as_ring(ring)
    one = Series._wrap(ring.array([1] + [0] * (N - 1)), 0, 1, ring)
    return sparse_divide(one, euler_product(N, ring))


def rescale(a: Series, delta: int) -> Series:
    """Substitute ``q -> q^delta``."""
    if delta < 1:
        raise ValueError("delta must be positive")
    if delta == 1:
        return a
    n = len(a) * delta
    out = a.ring.zeros(n)
    out[::delta] = a.coeffs
    return Series._wrap(out, a.offset * delta, a.w, a.ring)


# -- CSV dump ------------------------------------------------------------------

def write_csv(a: Series, path) -> None:
    """Write ``exponent_numerator,coefficient`` rows under a ``# w=.. modulus=.. precision=..`` header."""
    lines = [f"# w={a.w} modulus={a.ring.modulus} precision={a.precision}"]
    lines.extend(f"{a.offset + i},{int(c)}" for i, c in enumerate(a.coeffs))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text)


def read_csv(path) -> Series:
    text = path.read() if hasattr(path, "read") else Path(path).read_text()
    header = None
    rows: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = dict(tok.split("=", 1) for tok in line[1:].split())
            header = (int(fields["w"]), int(fields["modulus"]), int(fields["precision"]))
            continue
        e, c = line.split(",")
        rows[int(e)] = int(c)
    if header is None:
        raise ValueError("missing '# w=.. modulus=.. precision=..' header")
    w, modulus, precision = header
    offset = min(rows) if rows else precision
    coeffs = [rows.get(e, 0) for e in range(offset, precision)]
    return Series(coeffs, offset, w, modulus)
