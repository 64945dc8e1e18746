"""Integer SL2(Z) utilities: shift decompositions, component parity,
subgroup indices and cusp representatives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import divisors, factorint, totient


class DecompositionError(ArithmeticError):
    """An internal invariant of a shift decomposition failed."""


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det != 1:
            raise ValueError(f"determinant {self.det} != 1 for {self}")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def act(self, tau):
        return mobius((self.a, self.b, self.c, self.d), tau)

    def astuple(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d


S = Mat2(0, -1, 1, 0)
T = Mat2(1, 1, 0, 1)
I2 = Mat2(1, 0, 0, 1)


def mobius(m, tau):
    """Apply a 2x2 matrix (any entries, given as a 4-tuple) as a Moebius map."""
    a, b, c, d = m
    return (a * tau + b) / (c * tau + d)


def matmul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@dataclass(frozen=True)
class Cusp:
    """The cusp ``a/c`` with ``gcd(a, c) = 1`` and ``c >= 0``; infinity is ``1/0``."""

    a: int
    c: int

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("cusp denominator must be nonnegative")
        if math.gcd(self.a, self.c) != 1:
            raise ValueError(f"gcd({self.a}, {self.c}) != 1")
        if self.c == 0 and self.a != 1:
            raise ValueError("infinity is represented as 1/0")

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def matrix(self) -> Mat2:
        """A matrix of SL2(Z) sending infinity to this cusp."""
        if self.c == 0:
            return I2
        g, x, y = _ext_gcd(self.a, self.c)
        # a*x + c*y = 1  ->  (a, -y; c, x)
        return Mat2(self.a, -y, self.c, x)

    def __str__(self):
        return "oo" if self.c == 0 else f"{self.a}/{self.c}"


INFINITY = Cusp(1, 0)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class ShiftDecomposition:
    """``(l, t, a~, b~, c~, d~)`` with the shift family modulus ``m`` and divisor ``g``.

    The triangular factor is ``(l, t; 0, m^2/(g*l))``.
    """

    l: int
    t: int
    at: int
    bt: int
    ct: int
    dt: int
    m: int
    g: int

    @property
    def unimodular(self) -> tuple[int, int, int, int]:
        return self.at, self.bt, self.ct, self.dt

    @property
    def triangular(self) -> tuple[int, int, int, int]:
        return self.l, self.t, 0, self.m * self.m // (self.g * self.l)

    def rhs(self) -> tuple[int, int, int, int]:
        return matmul(self.unimodular, self.triangular)


def _decompose(top: int, bottom: int, dl_minus: int, M: Mat2, m: int, g: int) -> ShiftDecomposition:
    # first column of the scaled left-hand side is (top, bottom)
    l = math.gcd(bottom, top)
    at, ct = top // l, bottom // l
    dt = pow(at, -1, ct) if ct != 1 else 0
    bt, r = divmod(at * dt - 1, ct)
    if r:
        raise DecompositionError(f"b~ not integral for {M}, l={l}")
    t, r = divmod(M.d * l - dt * dl_minus, M.c)
    if r:
        raise DecompositionError(f"t not integral for {M}, l={l}")
    return ShiftDecomposition(l, t, at, bt, ct, dt, m, g)


def decompose_shift_cesaro(M: Mat2, sigma: int, m: int) -> ShiftDecomposition:
    """Split ``(1, sigma/m; 0, 1) M`` as ``(a~,b~;c~,d~) (l, t; 0, m^2/l)``.

    ``l = gcd(c m, sigma c + a m)``.  Callers pass ``sigma = w*s`` for the
    shift ``tau -> tau + w s/m``.  Requires ``c != 0``.
    """
    if M.c == 0:
        raise ValueError("c = 0 (the cusp at infinity) is handled without a decomposition")
    if m < 1:
        raise ValueError("m must be positive")
    return _decompose(sigma * M.c + M.a * m, M.c * m, m, M, m, 1)


def decompose_shift_omega(M: Mat2, s: int, m: int) -> ShiftDecomposition:
    """Split ``(6,0;0,1)(1, s/m; 0, 1) M`` as ``(a~,b~;c~,d~)(l, t; 0, m^2/(6l))``."""
    if m % 6:
        raise ValueError(f"6 must divide m, got m={m}")
    if M.c == 0:
        raise ValueError("c = 0 (the cusp at infinity) is handled without a decomposition")
    return _decompose(s * M.c + M.a * m, M.c * m // 6, m, M, m, 6)


def left_side_cesaro(M: Mat2, sigma: int, m: int) -> tuple[int, int, int, int]:
    """``m * (1, sigma/m; 0, 1) M`` as an integer matrix."""
    return matmul((m, sigma, 0, m), M.astuple())


def left_side_omega(M: Mat2, s: int, m: int) -> tuple[int, int, int, int]:
    """``m * (6,0;0,1)(1, s/m; 0, 1) M`` as an integer matrix."""
    return matmul((6, 0, 0, 1), matmul((m, s, 0, m), M.astuple()))


def check_identity(lhs, rhs, points) -> bool:
    """Exact agreement of two Moebius maps at rational test points.

    Compared cross-multiplied so that a pole at a test point is not an error.
    """
    a, b, c, d = lhs
    e, f, g, h = rhs
    for z in points:
        z = Fraction(z)
        if (a * z + b) * (g * z + h) != (e * z + f) * (c * z + d):
            return False
    return True


def classify_cesaro(M: Mat2) -> str:
    """Which of h1, h2, h3 the weight-1/2 slash of h1 by ``M`` is proportional to."""
    c, d = M.c % 2, M.d % 2
    if c == 0 and d == 1:
        return "h1"
    if c == 1 and d == 0:
        return "h2"
    if c == 1 and d == 1:
        return "h3"
    raise AssertionError(f"c and d both even in {M}")


def classify_omega(M: Mat2) -> str:
    """Which of H1, H2, H3 the slash of H2 by ``M`` is proportional to (parity of a, b)."""
    a, b = M.a % 2, M.b % 2
    if a == 0 and b == 1:
        return "H1"
    if a == 1 and b == 0:
        return "H2"
    if a == 1 and b == 1:
        return "H3"
    raise AssertionError(f"a and b both even in {M}")


# -- indices ----------------------------------------------------------------------

def _prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def sieve_group_index(m: int) -> Fraction:
    """``2 m^4 phi(m) / phi(2 m^2) * prod_{p | 2m^2} (1 - 1/p^2)``."""
    if m < 2:
        raise ValueError("m must be >= 2")
    value = Fraction(2 * m ** 4 * int(totient(m)), int(totient(2 * m * m)))
    for p in _prime_divisors(2 * m * m):
        value *= 1 - Fraction(1, p * p)
    return value


def gamma0_index(N: int) -> int:
    value = Fraction(N)
    for p in _prime_divisors(N):
        value *= 1 + Fraction(1, p)
    return int(value)


def gamma1_index(N: int) -> int:
    """Index of Gamma_1(N) in SL2(Z); for N <= 2 it coincides with Gamma_0(N)."""
    if N <= 2:
        return gamma0_index(N)
    value = Fraction(N * N)
    for p in _prime_divisors(N):
        value *= 1 - Fraction(1, p * p)
    return int(value)


def group_index(kind: str, N: int) -> int:
    if kind == "gamma0":
        return gamma0_index(N)
    if kind == "gamma1":
        return gamma1_index(N)
    raise ValueError(f"unknown group kind {kind!r}")


# -- cusps ----------------------------------------------------------------------

def gamma0_cusp_count(N: int) -> int:
    return sum(int(totient(math.gcd(d, N // d))) for d in divisors(N))


def gamma1_cusp_count(N: int) -> int:
    if N <= 2:
        return gamma0_cusp_count(N)
    if N == 4:
        return 3
    return sum(int(totient(d)) * int(totient(N // d)) for d in divisors(N)) // 2


def _lift_coprime(a: int, modulus: int, c: int) -> int:
    """Smallest ``a' >= 1`` with ``a' = a (mod modulus)`` and ``gcd(a', c) = 1``."""
    a %= modulus
    if a == 0:
        a = modulus
    while math.gcd(a, c) != 1:
        a += modulus
    return a


@lru_cache(maxsize=None)
def cusp_representatives(kind: str, N: int) -> tuple[Cusp, ...]:
    """A complete, duplicate-free list of cusp representatives, infinity first.

    Gamma_0(N): cusps ``a/c`` with ``c | N`` and ``a`` running over units mod
    ``gcd(c, N/c)``.  Gamma_1(N): pairs ``+-(a mod gcd(c,N), c mod N)``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    out: list[Cusp] = []
    if kind == "gamma0":
        for c in sorted(divisors(N), reverse=True):
            g = math.gcd(c, N // c)
            for a in range(g):
                if math.gcd(a, g) != 1 and g != 1:
                    continue
                if c == N:
                    out.append(INFINITY)
                elif c == 1:
                    out.append(Cusp(0, 1))
                else:
                    out.append(Cusp(_lift_coprime(a, g, c), c))
        return tuple(out)
    if kind != "gamma1":
        raise ValueError(f"unknown group kind {kind!r}")
    if N <= 2:
        return cusp_representatives("gamma0", N)
    seen = set()
    for c in range(N, 0, -1):
        cr = c % N
        g = math.gcd(cr, N)
        for a in range(g):
            if math.gcd(a, g) != 1 and g != 1:
                continue
            key = (a % g, cr)
            neg = ((-a) % g, (-cr) % N)
            if key in seen or neg in seen:
                continue
            seen.add(key)
            if cr == 0 and a % g in (1, g - 1):
                out.append(INFINITY)
            else:
                out.append(Cusp(_lift_coprime(a, g, c), c))
    out.sort(key=lambda x: (not x.is_infinity, -x.c, x.a))
    return tuple(out)


def equivalent_cusps(kind: str, N: int, x: Cusp, y: Cusp) -> bool:
    """Equivalence of two cusps under Gamma_0(N) or Gamma_1(N) (Cremona's criteria)."""
    p1, q1 = x.a, x.c
    p2, q2 = y.a, y.c
    if kind == "gamma1":
        g = math.gcd(q1, N)
        return any(
            (q1 - e * q2) % N == 0 and (p1 - e * p2) % g == 0 for e in (1, -1)
        )
    s1 = 1 if q1 == 0 else pow(p1, -1, q1) if q1 > 1 else 0
    s2 = 1 if q2 == 0 else pow(p2, -1, q2) if q2 > 1 else 0
    g = math.gcd(q1 * q2, N)
    return (s1 * q2 - s2 * q1) % g == 0


def cusp_width(kind: str, N: int, cusp: Cusp) -> int:
    """Smallest ``h > 0`` with ``M T^h M^{-1}`` in +-Gamma."""
    if cusp.is_infinity:
        return 1
    a, c = cusp.a, cusp.c
    for h in divisors(N):
        # M T^h M^{-1} = (1 - a c h, a^2 h; -c^2 h, 1 + a c h)
        lower = -c * c * h
        if lower % N:
            continue
        if kind == "gamma0":
            return h
        d_entry = 1 + a * c * h
        if (d_entry - 1) % N == 0 or (d_entry + 1) % N == 0:
            return h
    return N
