"""Eta quotients, orders at cusps, pole bounds of sieved expansions and the
cusp-by-cusp holomorphy ledger.

Orders are first computed in the variable ``q = e^{2 pi i tau}`` after slashing
with a matrix that sends infinity to the cusp ("tau units"), then multiplied
by the cusp width to land in the local uniformizer.  The sign of every margin
is unaffected by that scaling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .generators import embedding
from .modular import (
    Cusp,
    Mat2,
    classify_cesaro,
    classify_omega,
    cusp_representatives,
    cusp_width,
    decompose_shift_cesaro,
    decompose_shift_omega,
)
from .series import Series, ZZ, euler_product, rescale, sparse_divide, sparse_mul


@dataclass(frozen=True)
class EtaQuotient:
    """``prod_{delta | N} eta(delta tau)^{r_delta}``."""

    level: int
    exponents: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        cleaned = tuple(sorted((int(d), int(r)) for d, r in dict(self.exponents).items() if r))
        for d, _ in cleaned:
            if d < 1 or self.level % d:
                raise ValueError(f"{d} does not divide the level {self.level}")
        object.__setattr__(self, "exponents", cleaned)

    @classmethod
    def parse(cls, text: str, level: int) -> "EtaQuotient":
        """Parse ``"24:12,1:24"``; an empty string is the constant quotient 1."""
        exps: dict[int, int] = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            d, r = part.split(":")
            exps[int(d)] = exps.get(int(d), 0) + int(r)
        return cls(level, tuple(exps.items()))

    def __str__(self):
        if not self.exponents:
            return "1"
        return ",".join(f"{d}:{r}" for d, r in sorted(self.exponents, reverse=True))

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.exponents), 2)

    @property
    def sum_delta_r(self) -> int:
        return sum(d * r for d, r in self.exponents)

    @property
    def sum_codelta_r(self) -> int:
        return sum((self.level // d) * r for d, r in self.exponents)

    def order_tau(self, cusp: Cusp) -> Fraction:
        """Leading exponent in tau units at ``cusp``: ``sum gcd(c, delta)^2 r / (24 delta)``."""
        c = cusp.c
        return sum(
            (Fraction(math.gcd(c, d) ** 2 * r, 24 * d) for d, r in self.exponents),
            Fraction(0),
        )


def eta_weight_and_validity(Q: EtaQuotient) -> tuple[Fraction, bool]:
    """Weight and whether both 24-divisibility conditions hold."""
    valid = Q.sum_delta_r % 24 == 0 and Q.sum_codelta_r % 24 == 0
    return Q.weight, valid


def eta_order_at_cusp(Q: EtaQuotient, cusp: Cusp) -> Fraction:
    """Order of vanishing at ``cusp`` in the Gamma_0(N) local uniformizer (Ligozat)."""
    return Q.order_tau(cusp) * cusp_width("gamma0", Q.level, cusp)


def eta_quotient_series(Q: EtaQuotient, N: int) -> Series:
    """Integer q-expansion on the ``q^{1/24}`` lattice with ``N`` terms after the leading exponent."""
    out = Series([1] + [0] * (N - 1), 0, 1, ZZ)
    for d, r in Q.exponents:
        e = rescale(euler_product(-(-N // d), ZZ), d).truncate(N)
        for _ in range(abs(r)):
            out = sparse_mul(out, e) if r > 0 else sparse_divide(out, e)
    return Series(rescale(out, 24).coeffs, Q.sum_delta_r, 24, ZZ)


# -- pole bounds of sieved expansions -------------------------------------------

_LEADING = {
    # component -> (sign, denominator) of the leading exponent +-l^2/(den m^2)
    "h1": (-1, 8), "h2": (1, 4), "h3": (1, 4),
    "H1": (-1, 4), "H2": (1, 18), "H3": (1, 18),
}


def _infinity_exponent(family: str, residues: Iterable[int], m: int) -> Fraction:
    # smallest embedded exponent in the sieved residue classes
    w, scale, shift, _ = embedding(family)
    res = {r % m for r in residues}
    best = None
    for n in range(m):
        e = scale * n + shift
        if e % m in res:
            best = e if best is None else min(best, e)
    if best is None:
        raise ValueError(f"no coefficient of {family} lies in residues {sorted(res)} mod {m}")
    return Fraction(best, w)


@dataclass(frozen=True)
class ShiftBound:
    bound: Fraction
    shift: int
    component: str
    l: int


def shift_bounds(family: str, M: Mat2, m: int) -> list[ShiftBound]:
    """Leading-exponent lower bound for every shift ``s`` in ``0..m-1`` (``c != 0``)."""
    out = []
    if family == "cesaro":
        w = embedding("cesaro")[0]
        for s in range(m):
            D = decompose_shift_cesaro(M, w * s, m)
            comp = classify_cesaro(Mat2(*D.unimodular))
            sign, den = _LEADING[comp]
            out.append(ShiftBound(Fraction(sign * D.l * D.l, den * m * m), s, comp, D.l))
    elif family == "omega":
        if m % 6:
            raise ValueError("omega sieves need 6 | m")
        for s in range(m):
            D = decompose_shift_omega(M, s, m)
            comp = classify_omega(Mat2(*D.unimodular))
            sign, den = _LEADING[comp]
            out.append(ShiftBound(Fraction(sign * D.l * D.l, den * m * m), s, comp, D.l))
    else:
        raise ValueError(f"unknown family {family!r}")
    return out


def sieved_pole_bound(family: str, cusp: Cusp, m: int, residues: Iterable[int] = (),
                      M: Mat2 | None = None) -> Fraction:
    """Lower bound (tau units) for the leading exponent of the sieved expansion at ``cusp``.

    At infinity the shifts fix the cusp and the bound is the first exponent
    of the sieved q-series itself, which needs the target ``residues``.
    """
    return _pole_bound_detail(family, cusp, m, tuple(residues), M).bound


def _pole_bound_detail(family, cusp, m, residues, M=None) -> ShiftBound:
    if cusp.is_infinity:
        return ShiftBound(_infinity_exponent(family, residues, m), 0, "oo", 0)
    if M is None:
        M = cusp.matrix()
    elif (M.a, M.c) != (cusp.a, cusp.c) and (-M.a, -M.c) != (cusp.a, cusp.c):
        raise ValueError(f"{M} does not send infinity to {cusp}")
    return min(shift_bounds(family, M, m), key=lambda b: (b.bound, b.shift))


# -- the ledger -------------------------------------------------------------------

@dataclass(frozen=True)
class CuspLedgerEntry:
    cusp: Cusp
    width: int
    pole_bound: Fraction
    eta_order: Fraction
    margin: Fraction
    worst_shift: int
    component: str

    def as_dict(self) -> dict:
        return {
            "cusp": str(self.cusp),
            "width": self.width,
            "poleBound": fmt_rational(self.pole_bound),
            "etaOrder": fmt_rational(self.eta_order),
            "margin": fmt_rational(self.margin),
            "worstShift": self.worst_shift,
            "component": self.component,
        }


@dataclass
class HolomorphyCertificate:
    family: str
    m: int
    residues: tuple[int, ...]
    quotient: EtaQuotient
    group: str
    level: int
    entries: list[CuspLedgerEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.margin >= 0 for e in self.entries)

    @property
    def failures(self) -> list[CuspLedgerEntry]:
        return [e for e in self.entries if e.margin < 0]

    @property
    def min_margin(self) -> Fraction | None:
        return min((e.margin for e in self.entries), default=None)


def fmt_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _ledger_entry(args) -> CuspLedgerEntry:
    family, m, residues, Q, group, level, cusp = args
    detail = _pole_bound_detail(family, cusp, m, residues)
    width = cusp_width(group, level, cusp)
    pole = detail.bound * width
    order = Q.order_tau(cusp) * width
    return CuspLedgerEntry(cusp, width, pole, order, order + pole, detail.shift, detail.component)


def holomorphy_certificate(family: str, m: int, Q: EtaQuotient, group: str, N: int,
                           residues: Iterable[int] = (), threads: int = 1) -> HolomorphyCertificate:
    """Compare the sieved pole bound with the eta-quotient order at every cusp.

    Passes iff every margin (order + pole bound, local units) is nonnegative.
    """
    residues = tuple(sorted({r % m for r in residues}))
    cusps = cusp_representatives(group, N)
    jobs = [(family, m, residues, Q, group, N, c) for c in cusps]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(_ledger_entry, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        entries = [_ledger_entry(j) for j in jobs]
    return HolomorphyCertificate(family, m, residues, Q, group, N, entries)
