"""Sturm bounds, claim planning, end-to-end verification and certificates."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np
from sympy import isprime, primerange

from . import __version__
from .eta import EtaQuotient, HolomorphyCertificate, fmt_rational, holomorphy_certificate
from .generators import embedding, generate, nonholo_support
from .modular import gamma0_index, sieve_group_index
from .series import PrecisionError, Series
from .sieve import literal_chi5_display, residue_collisions, verify_characteristic_product

BOUND_POLICIES = ("published", "computed", "max")
POLICY_ALIASES = {"paper": "published"}


class UnsupportedClaimError(ValueError):
    """No cusp-form machinery is known for this claim; only evidence can be gathered."""


@dataclass(frozen=True)
class CongruenceClaim:
    """``a(A n + B) = 0 (mod p)`` for every ``n >= 0`` and every ``B`` in ``residues``."""

    series_id: str
    p: int
    A: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.series_id not in ("omega", "cesaro", "f"):
            raise ValueError(f"unknown series {self.series_id!r}")
        if not isprime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.A < 1:
            raise ValueError("A must be positive")
        res = tuple(sorted(set(int(b) for b in self.residues)))
        if not res or any(not 0 <= b < self.A for b in res):
            raise ValueError(f"residues must lie in [0, {self.A})")
        object.__setattr__(self, "residues", res)

    def embedded(self) -> tuple[tuple[int, ...], int]:
        """Exponent residues and their modulus in the embedded expansion.

        cesaro: ``8B - 1 mod 8A`` on the ``q^{1/8}`` lattice; omega: ``3B + 2 mod 3A``.
        """
        _, scale, shift, _ = embedding(self.series_id)
        mod = scale * self.A
        return tuple(sorted((scale * b + shift) % mod for b in self.residues)), mod

    def as_dict(self) -> dict:
        return {"series": self.series_id, "p": self.p, "A": self.A, "B": list(self.residues)}

    def __str__(self):
        bs = ",".join(map(str, self.residues))
        return f"a_{self.series_id}({self.A}n+{{{bs}}}) = 0 mod {self.p}"


PRESETS = {
    "cesaro-3": CongruenceClaim("cesaro", 3, 3, (1,)),
    "cesaro-7": CongruenceClaim("cesaro", 7, 7, (2, 3, 5)),
    "omega-5": CongruenceClaim("omega", 5, 40, (27, 35)),
}


def sturm_bound(weight, index) -> int:
    """``ceil(weight * index / 24)``."""
    weight, index = Fraction(weight), Fraction(index)
    if weight <= 0:
        raise ValueError("weight must be positive")
    return math.ceil(weight * index / 24)


# sieve data per (family, A): (sieve modulus, group, level, eta quotient, published bound)
_MACHINERY = {
    ("cesaro", 3): (24, "gamma1", 1152, "24:12,1:24", 7104),
    ("cesaro", 7): (56, "gamma1", 6272, "56:48,1:48", 260736),
    ("omega", 40): (120, "gamma0", 86400, "120:240,1:48", 832320),
}


@dataclass
class Plan:
    claim: CongruenceClaim
    embedded_residues: tuple[int, ...]
    embedded_modulus: int
    sieve_modulus: int
    group: str
    level: int
    index: int
    eta: EtaQuotient
    weight: Fraction
    published_bound: int | None
    computed_bound: int

    def bound(self, policy: str) -> tuple[int, str]:
        """The Sturm bound to use and its provenance label."""
        policy = POLICY_ALIASES.get(policy, policy)
        if policy not in BOUND_POLICIES:
            raise ValueError(f"bound policy must be one of {BOUND_POLICIES}")
        if policy == "computed" or self.published_bound is None:
            return self.computed_bound, "computed"
        if policy == "published":
            return self.published_bound, "published"
        if self.published_bound >= self.computed_bound:
            return self.published_bound, "published"
        return self.computed_bound, "computed"

    def raw_limit(self, bound: int) -> int:
        """Largest raw coefficient index that must be checked for ``bound``."""
        return raw_limit(self.claim.series_id, bound)


def raw_limit(series_id: str, bound: int) -> int:
    if series_id == "cesaro":
        # 8n - 1 <= bound
        return (bound + 1) // 8
    if series_id == "omega":
        # the bound is applied to the raw index itself; this dominates 3n + 2 <= bound
        return bound
    return bound


def plan_claim(claim: CongruenceClaim) -> Plan:
    key = (claim.series_id, claim.A)
    if key not in _MACHINERY:
        raise UnsupportedClaimError(f"no cusp-form machinery for {claim}")
    m, group, level, eta_text, published = _MACHINERY[key]
    eta = EtaQuotient.parse(eta_text, level)
    if claim.series_id == "cesaro":
        index = sieve_group_index(m)
        if index.denominator != 1:
            raise ArithmeticError(f"sieve group index {index} is not integral")
        index = int(index)
    else:
        index = gamma0_index(level)
    weight = eta.weight + Fraction(1, 2)
    residues, mod = claim.embedded()
    if m % mod and mod % m:
        raise ArithmeticError(f"embedded modulus {mod} incompatible with sieve modulus {m}")
    return Plan(
        claim=claim,
        embedded_residues=residues,
        embedded_modulus=mod,
        sieve_modulus=m,
        group=group,
        level=level,
        index=index,
        eta=eta,
        weight=weight,
        published_bound=published,
        computed_bound=sturm_bound(weight, index),
    )


# -- coefficient checking ---------------------------------------------------------

@dataclass
class ProgressionCheck:
    checked: int
    first_failure: int | None
    limit: int


def check_progressions(coeffs: Series, A: int, residues: Iterable[int], limit: int, p: int) -> ProgressionCheck:
    """Check ``a(An+B) = 0 mod p`` for every ``An+B <= limit``."""
    if coeffs.offset != 0 or coeffs.w != 1:
        raise ValueError("expected a raw q-series with offset 0 and w = 1")
    if limit >= coeffs.precision:
        raise PrecisionError(f"need coefficients through {limit}, have {coeffs.precision - 1}")
    arr = coeffs.coeffs[: limit + 1]
    checked = 0
    first = None
    for b in residues:
        sub = arr[b::A]
        checked += len(sub)
        bad = np.flatnonzero(np.asarray(sub % p != 0))
        if len(bad):
            n = b + A * int(bad[0])
            first = n if first is None else min(first, n)
    return ProgressionCheck(checked, first, limit)


# -- certificates -------------------------------------------------------------------

@dataclass
class Certificate:
    claim: CongruenceClaim
    group_kind: str | None
    level: int | None
    index: int | None
    weight: Fraction | None
    eta_quotient: EtaQuotient | None
    ledger: HolomorphyCertificate | None
    sturm_bound: int
    provenance: str
    published_bound: int | None
    computed_bound: int | None
    raw_limit: int
    coefficients_checked: int
    first_failure: int | None
    residue_disjoint: bool | None
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def congruence_holds(self) -> bool:
        return self.first_failure is None

    @property
    def complete(self) -> bool:
        return self.ledger is not None and self.ledger.passed and bool(self.residue_disjoint)

    @property
    def passed(self) -> bool:
        return self.congruence_holds and self.complete

    def exit_code(self) -> int:
        if not self.congruence_holds:
            return 1
        if not self.complete:
            return 3
        return 0

    def as_dict(self, include_timings: bool = True) -> dict:
        ledger = None
        if self.ledger is not None:
            mm = self.ledger.min_margin
            ledger = {
                "family": self.ledger.family,
                "sieveModulus": self.ledger.m,
                "residues": list(self.ledger.residues),
                "cusps": len(self.ledger.entries),
                "negativeMargins": len(self.ledger.failures),
                "minMargin": None if mm is None else fmt_rational(mm),
                "entries": [e.as_dict() for e in self.ledger.entries],
            }
        out = {
            "claim": self.claim.as_dict(),
            "groupKind": self.group_kind,
            "level": self.level,
            "index": self.index,
            "weight": None if self.weight is None else fmt_rational(self.weight),
            "etaQuotient": None if self.eta_quotient is None else str(self.eta_quotient),
            "cuspLedger": ledger,
            "sturmBound": self.sturm_bound,
            "sturmBoundProvenance": self.provenance,
            "publishedBound": self.published_bound,
            "computedBound": self.computed_bound,
            "rawLimit": self.raw_limit,
            "coefficientsChecked": self.coefficients_checked,
            "firstFailure": self.first_failure,
            "residueDisjoint": self.residue_disjoint,
            "pass": self.passed,
            "notes": list(self.notes),
            "timings": {k: round(v, 3) for k, v in self.timings.items()} if include_timings else {},
            "toolVersion": __version__,
        }
        return out

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(self.as_dict(include_timings), indent=2)


def _coefficients_mod_p(claim: CongruenceClaim, limit: int, supplied: Series | None) -> Series:
    if supplied is None:
        return generate(claim.series_id, limit + 1, claim.p)
    if supplied.ring.modulus not in (0, claim.p) and supplied.ring.modulus % claim.p:
        raise ValueError(f"supplied coefficients mod {supplied.ring.modulus} cannot be reduced mod {claim.p}")
    if supplied.ring.modulus != claim.p:
        supplied = supplied.reduce(claim.p)
    return supplied


def verify_claim(claim: CongruenceClaim, policy: str = "max", threads: int = 1,
                 coefficients: Series | None = None, ledger: bool = True,
                 bound: int | None = None) -> Certificate:
    """Run the whole reduction for ``claim`` and assemble a :class:`Certificate`.

    ``bound`` overrides the Sturm bound (used for evidence-only claims and for
    monotonicity checks).  ``coefficients`` replaces generation with a
    previously dumped raw series.
    """
    timings: dict[str, float] = {}
    notes: list[str] = []
    try:
        plan = plan_claim(claim)
    except UnsupportedClaimError:
        plan = None
    if plan is None:
        if bound is None:
            raise UnsupportedClaimError(f"{claim}: no Sturm machinery; pass an explicit bound for evidence-only mode")
        sturm, provenance = bound, "user"
        notes.append("evidence only: no cusp form or Sturm bound is known for this progression")
    elif bound is not None:
        sturm, provenance = bound, "user"
    else:
        sturm, provenance = plan.bound(policy)
    limit = raw_limit(claim.series_id, sturm)

    t0 = time.perf_counter()
    coeffs = _coefficients_mod_p(claim, limit, coefficients)
    timings["generate"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    check = check_progressions(coeffs, claim.A, claim.residues, limit, claim.p)
    timings["check"] = time.perf_counter() - t0

    disjoint = None
    hol = None
    if plan is not None:
        family = claim.series_id
        support = nonholo_support(family)
        collisions = residue_collisions(plan.embedded_residues, plan.embedded_modulus, support)
        disjoint = not collisions
        if collisions:
            notes.append(f"non-holomorphic support meets residues {sorted(collisions)} mod {plan.embedded_modulus}")
        if ledger:
            t0 = time.perf_counter()
            hol = holomorphy_certificate(family, plan.sieve_modulus, plan.eta, plan.group, plan.level,
                                         residues=plan.embedded_residues, threads=threads)
            timings["cuspLedger"] = time.perf_counter() - t0
            if hol.failures:
                worst = hol.failures[0]
                notes.append(f"{len(hol.failures)} cusps with negative margin, first at {worst.cusp}")
        else:
            notes.append("cusp ledger skipped")
        notes.extend(_plan_notes(plan, sturm, provenance))
    if check.first_failure is not None:
        n = check.first_failure
        notes.append(f"counterexample: a({n}) is not divisible by {claim.p}")

    return Certificate(
        claim=claim,
        group_kind=None if plan is None else plan.group,
        level=None if plan is None else plan.level,
        index=None if plan is None else plan.index,
        weight=None if plan is None else plan.weight,
        eta_quotient=None if plan is None else plan.eta,
        ledger=hol,
        sturm_bound=sturm,
        provenance=provenance,
        published_bound=None if plan is None else plan.published_bound,
        computed_bound=None if plan is None else plan.computed_bound,
        raw_limit=limit,
        coefficients_checked=check.checked,
        first_failure=check.first_failure,
        residue_disjoint=disjoint,
        notes=notes,
        timings=timings,
    )


def _plan_notes(plan: Plan, sturm: int, provenance: str) -> list[str]:
    notes = [
        "raw coefficients are checked instead of the eta-multiplied form: the multiplier has "
        "leading coefficient 1, so vanishing mod p transfers term by term",
        f"weight {fmt_rational(plan.weight)} = eta weight {fmt_rational(plan.eta.weight)} + 1/2",
    ]
    if plan.published_bound is not None and plan.published_bound != plan.computed_bound:
        notes.append(
            f"published bound {plan.published_bound} differs from ceil(weight*index/24) = {plan.computed_bound}; "
            f"using {sturm} ({provenance})"
        )
    if plan.claim.series_id == "omega":
        notes.append("omega: raw indices are checked up to the bound itself, covering the embedded reading 3n+2 <= bound")
        ok, bad = verify_characteristic_product()
        notes.append(f"character product equals the indicator of {{83,107}} mod 120: {ok}")
        squares = [n for n in range(5) if literal_chi5_display(n) == 1]
        notes.append(
            f"(1+chi5)chi5/2 as displayed is 1 on residues {squares} mod 5; the verified indicator of {{2,3}} is (chi5^2-chi5)/2"
        )
    return notes


# -- scanning -------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    series_id: str
    p: int
    A: int
    B: int
    checked: int
    verified: bool = False

    def as_dict(self) -> dict:
        return {"series": self.series_id, "p": self.p, "A": self.A, "B": self.B,
                "checked": self.checked, "verified": self.verified}


def scan_progressions(series_id: str, N: int, p_max: int, A_max: int) -> list[Candidate]:
    """Every ``(p, A, B)`` with ``a(An+B) = 0 mod p`` for all ``An+B < N``; heuristic only."""
    out = []
    for p in primerange(2, p_max + 1):
        coeffs = generate(series_id, N, int(p)).coeffs
        zero = coeffs == 0
        for A in range(1, A_max + 1):
            for B in range(min(A, N)):
                sub = zero[B::A]
                if sub.all():
                    out.append(Candidate(series_id, int(p), A, B, len(sub)))
    return sorted(out, key=lambda c: (c.p, c.A, c.B))
