"""Residue-class sieving, quadratic-character indicators and support checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np
import sympy

from .generators import NonholoSupport
from .series import Series


def sieve(f: Series, r: int | Iterable[int], m: int) -> Series:
    """Keep only coefficients whose exponent numerator is congruent to ``r`` mod ``m``.

    ``r`` may also be a collection of residues.
    """
    if m < 1:
        raise ValueError("m must be positive")
    targets = {int(r) % m} if isinstance(r, int) else {int(x) % m for x in r}
    arr = f.coeffs.copy()
    idx = (f.offset + np.arange(len(arr), dtype=np.int64)) % m
    arr[~np.isin(idx, sorted(targets))] = 0
    return Series._wrap(arr, f.offset, f.w, f.ring)


def shift_representation_check(f: Series, r: int, m: int, samples: Iterable[complex] = (),
                               dps: int = 50, rtol: float = 1e-20) -> bool:
    """Numerically confirm ``U_{r,m} f(tau) = (1/m) sum_s zeta_m^{-rs} f(tau + w s/m)``.

    Both sides are finite sums over the known terms of ``f``, evaluated in
    ``dps``-digit complex arithmetic.  Raises ``ArithmeticError`` when the
    largest single term would cancel away more digits than the working
    precision can spare.  Validation only.
    """
    samples = list(samples) or [complex(0.1, 0.9), complex(-0.37, 1.3), complex(0.25, 0.7)]
    terms = list(f.items())
    with mpmath.workdps(dps):
        zeta = mpmath.exp(2j * mpmath.pi / m)

        def evaluate(tau, keep=None):
            total = mpmath.mpc(0)
            for e, c in terms:
                if keep is None or e % m == keep:
                    total += c * mpmath.exp(2j * mpmath.pi * e * tau / f.w)
            return total

        for z in samples:
            tau = mpmath.mpc(z.real, z.imag)
            biggest = max((abs(c * mpmath.exp(2j * mpmath.pi * e * tau / f.w)) for e, c in terms),
                          default=mpmath.mpf(0))
            lhs = evaluate(tau, r % m)
            rhs = sum(zeta ** (-r * s) * evaluate(tau + mpmath.mpf(f.w * s) / m) for s in range(m)) / m
            scale = max(abs(lhs), mpmath.mpf(1))
            if biggest > 0 and mpmath.log10(biggest / scale) > dps + mpmath.log10(rtol) - 5:
                raise ArithmeticError(f"{dps} digits are not enough at tau={z}")
            if abs(lhs - rhs) > rtol * scale:
                return False
    return True


# -- characters -----------------------------------------------------------------

CHI8 = {
    0: (0, 1, 0, 1, 0, 1, 0, 1),
    1: (0, 1, 0, 1, 0, -1, 0, -1),
    2: (0, 1, 0, -1, 0, 1, 0, -1),
    3: (0, 1, 0, -1, 0, -1, 0, 1),
}


def chi3(n: int) -> int:
    return int(sympy.jacobi_symbol(n % 3, 3)) if n % 3 else 0


def chi5(n: int) -> int:
    return int(sympy.jacobi_symbol(n % 5, 5)) if n % 5 else 0


def chi8(k: int, n: int) -> int:
    return CHI8[k][n % 8]


@dataclass(frozen=True)
class CharacterTable:
    """The quadratic characters mod 3, 5 and 8 used by the omega twist."""

    def basis(self, modulus: int) -> dict[str, callable]:
        """Character monomials available for the given modulus, constant first."""
        if modulus == 3:
            return {"1": lambda n: 1, "chi3": chi3, "chi3^2": lambda n: chi3(n) ** 2}
        if modulus == 5:
            return {"1": lambda n: 1, "chi5": chi5, "chi5^2": lambda n: chi5(n) ** 2}
        if modulus == 8:
            out = {"1": lambda n: 1}
            for k in range(4):
                out[f"chi8^({k})"] = (lambda kk: lambda n: chi8(kk, n))(k)
            return out
        raise ValueError(f"no character table for modulus {modulus}")


CHARACTERS = CharacterTable()


@dataclass(frozen=True)
class IndicatorCombo:
    modulus: int
    targets: frozenset[int]
    coefficients: tuple[tuple[str, Fraction], ...]

    def __call__(self, n: int) -> Fraction:
        basis = CHARACTERS.basis(self.modulus)
        return sum((c * basis[name](n) for name, c in self.coefficients), Fraction(0))

    def __str__(self):
        return " + ".join(f"({c})*{name}" for name, c in self.coefficients) or "0"


class UnrealizableError(ValueError):
    pass


def indicator_combo(targets: Iterable[int], modulus: int) -> IndicatorCombo:
    """Rational combination of character monomials equal to the indicator of ``targets``.

    Solved exactly over the residues; the result is re-checked on every residue.
    """
    targets = frozenset(t % modulus for t in targets)
    basis = CHARACTERS.basis(modulus)
    names = list(basis)
    A = sympy.Matrix([[basis[name](n) for name in names] for n in range(modulus)])
    b = sympy.Matrix([1 if n in targets else 0 for n in range(modulus)])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        raise UnrealizableError(f"{sorted(targets)} mod {modulus} is not a character combination") from None
    sol = sol.subs({p: 0 for p in params})
    coeffs = tuple(
        (name, Fraction(int(v.p), int(v.q))) for name, v in zip(names, sol) if v != 0
    )
    combo = IndicatorCombo(modulus, targets, coeffs)
    if any(combo(n) != (1 if n in targets else 0) for n in range(modulus)):
        raise UnrealizableError(f"solution for {sorted(targets)} mod {modulus} failed the residue check")
    return combo


OMEGA_TWIST = ((3, (2,)), (5, (2, 3)), (8, (3,)))


def twist_indicator(n: int, factors=OMEGA_TWIST) -> Fraction:
    """Product of the indicator combos for ``factors``."""
    value = Fraction(1)
    for modulus, targets in factors:
        value *= indicator_combo(targets, modulus)(n)
    return value


def verify_characteristic_product(expected=(83, 107), period: int = 120) -> tuple[bool, list[int]]:
    """Exhaustively compare the character-product with the indicator of ``expected`` mod ``period``.

    Returns ``(ok, mismatched residues)``.
    """
    combos = [indicator_combo(t, mod) for mod, t in OMEGA_TWIST]
    expected = {e % period for e in expected}
    bad = []
    for n in range(period):
        v = Fraction(1)
        for c in combos:
            v *= c(n)
        if v != (1 if n in expected else 0):
            bad.append(n)
    return not bad, bad


def literal_chi5_display(n: int) -> Fraction:
    """``(1 + chi5(n)) chi5(n) / 2`` exactly as displayed in the source; 1 on the squares mod 5."""
    return Fraction((1 + chi5(n)) * chi5(n), 2)


def residue_disjoint(targets: Iterable[int], m: int, support: NonholoSupport) -> bool:
    """True iff no element of ``support`` is congruent to a target residue mod ``m``."""
    targets = {t % m for t in targets}
    return not (support.residues(m) & targets)


def residue_collisions(targets: Iterable[int], m: int, support: NonholoSupport) -> set[int]:
    return support.residues(m) & {t % m for t in targets}
