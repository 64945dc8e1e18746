"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines appear even when
output capture is on.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from mocktheta.eta import EtaQuotient, holomorphy_certificate
from mocktheta.generators import (
    cesaro_oracle,
    cesaro_series,
    embedded_series,
    f_series,
    generate,
    nonholo_support,
    omega_series,
)
from mocktheta.modular import (
    Mat2,
    check_identity,
    decompose_shift_cesaro,
    decompose_shift_omega,
    left_side_cesaro,
    left_side_omega,
    sieve_group_index,
)
from mocktheta.sieve import residue_disjoint, verify_characteristic_product
from mocktheta.sturm import PRESETS, CongruenceClaim, sturm_bound, verify_claim

from oracles import f_brute, omega_brute


def _report(capsys, number: int, title: str, check) -> None:
    try:
        detail = check()
        ok, msg = True, detail
    except AssertionError as exc:
        ok, msg = False, str(exc) or "assertion failed"
    with capsys.disabled():
        print(f"\nCRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {title} [{msg}]")
    if not ok:
        pytest.fail(f"criterion {number}: {msg}")


def test_criterion_01_cesaro_mod3(capsys):
    def check():
        t0 = time.perf_counter()
        cert = verify_claim(PRESETS["cesaro-3"], policy="published")
        dt = time.perf_counter() - t0
        assert cert.sturm_bound == 7104, cert.sturm_bound
        # 24n+7 <= 7104 means n <= 295: 296 members of 3n+1
        assert cert.coefficients_checked >= 296, cert.coefficients_checked
        assert cert.passed, cert.notes
        assert dt < 5, f"{dt:.2f}s"
        return f"bound 7104, {cert.coefficients_checked} coefficients, {dt:.2f}s"
    _report(capsys, 1, "a_C(3n+1) = 0 mod 3", check)


def test_criterion_02_cesaro_mod7(capsys):
    def check():
        t0 = time.perf_counter()
        cert = verify_claim(PRESETS["cesaro-7"], policy="published")
        dt = time.perf_counter() - t0
        assert cert.sturm_bound == 260736, cert.sturm_bound
        assert 8 * cert.raw_limit - 1 <= 260736 < 8 * (cert.raw_limit + 1) - 1
        assert cert.passed, cert.notes
        assert dt < 60, f"{dt:.2f}s"
        return f"raw n <= {cert.raw_limit}, {cert.coefficients_checked} coefficients, {dt:.1f}s"
    _report(capsys, 2, "a_C(7n+2), a_C(7n+3), a_C(7n+5) = 0 mod 7", check)


def test_criterion_03_omega_mod5(capsys):
    def check():
        t0 = time.perf_counter()
        coeffs = generate("omega", 1248481, 5)
        published = verify_claim(PRESETS["omega-5"], policy="published", coefficients=coeffs)
        conservative = verify_claim(PRESETS["omega-5"], policy="max", coefficients=coeffs)
        dt = time.perf_counter() - t0
        assert published.sturm_bound == 832320 and published.passed, published.notes
        assert conservative.sturm_bound == 1248480 and conservative.passed, conservative.notes
        assert dt < 300, f"{dt:.1f}s"
        return f"832320 and 1248480 both pass, {dt:.1f}s"
    _report(capsys, 3, "a_w(40n+27) = a_w(40n+35) = 0 mod 5", check)


def test_criterion_04_index(capsys):
    def check():
        got = (sieve_group_index(24), sieve_group_index(56))
        assert got == (9216, 129024), got
        return "9216, 129024"
    _report(capsys, 4, "sieve group index", check)


def test_criterion_05_sturm(capsys):
    def check():
        got = (sturm_bound(Fraction(37, 2), 9216), sturm_bound(Fraction(97, 2), 129024))
        assert got == (7104, 260736), got
        return "7104, 260736"
    _report(capsys, 5, "Sturm bounds", check)


def test_criterion_06_characters(capsys):
    def check():
        ok, bad = verify_characteristic_product((83, 107), 120)
        assert ok, f"mismatch at {bad}"
        return "all 120 residues"
    _report(capsys, 6, "character product = indicator of {83,107} mod 120", check)


def test_criterion_07_disjointness(capsys):
    def check():
        cs, om = nonholo_support("cesaro"), nonholo_support("omega")
        brute_c = {(-2 * (2 * k + 1) ** 2) % 8 for k in range(8)}
        brute_o = {(-k * k) % 120 for k in range(1, 361) if k % 3 == 1}
        assert brute_c == {6} and 7 not in brute_c
        assert not brute_o & {83, 107}
        assert residue_disjoint([7], 8, cs) and residue_disjoint([83, 107], 120, om)
        return "cesaro {7} vs {6} mod 8; omega {83,107} vs -k^2 mod 120"
    _report(capsys, 7, "residue disjointness", check)


def _random_sl2(rng):
    while True:
        a, c = rng.randint(-80, 80), rng.randint(1, 500)
        d = next((d for d in range(1, c + 1) if (a * d - 1) % c == 0), None) if c > 1 else 0
        if d is not None:
            return Mat2(a, (a * d - 1) // c, c, d)


def test_criterion_08_matrix_fuzz(capsys):
    def check():
        rng = random.Random(2024)
        fails = 0
        for _ in range(500):
            M = _random_sl2(rng)
            m = rng.choice([24, 56, 8 * rng.randint(1, 30), rng.randint(2, 300)])
            sigma = rng.randint(-4 * m, 4 * m)
            D = decompose_shift_cesaro(M, sigma, m)
            pts = [Fraction(rng.randint(-500, 500), rng.randint(1, 500)) for _ in range(5)]
            fails += not (check_identity(left_side_cesaro(M, sigma, m), D.rhs(), pts)
                          and D.at * D.dt - D.bt * D.ct == 1 and (m * m) % D.l == 0)
        for _ in range(500):
            M = _random_sl2(rng)
            m = 6 * rng.randint(1, 50)
            s = rng.randint(-4 * m, 4 * m)
            D = decompose_shift_omega(M, s, m)
            pts = [Fraction(rng.randint(-500, 500), rng.randint(1, 500)) for _ in range(5)]
            fails += not (check_identity(left_side_omega(M, s, m), D.rhs(), pts)
                          and D.at * D.dt - D.bt * D.ct == 1 and (m * m // 6) % D.l == 0)
        assert fails == 0, f"{fails} failures"
        return "500 + 500 decompositions, 0 failures"
    _report(capsys, 8, "matrix decomposition fuzzing", check)


def test_criterion_09_oracles(capsys):
    def check():
        res = cesaro_oracle(200)
        lam = Fraction(cesaro_series(1)[0]) / res.coefficients[0]
        assert lam == 2, lam
        assert not res.unstable, res.unstable[:5]
        assert res.scaled(lam) == [Fraction(x) for x in cesaro_series(200).tolist()]
        assert omega_series(500).tolist() == omega_brute(500)
        assert f_series(500).tolist() == f_brute(500)
        return f"lambda = {lam}; omega, f match to N=500"
    _report(capsys, 9, "oracle equivalence", check)


def test_criterion_10_first_coefficients(capsys):
    def check():
        assert cesaro_series(4).tolist() == [1, 3, -7, 14]
        assert omega_series(6).tolist() == [1, 2, 3, 4, 6, 8]
        e = embedded_series("cesaro", 2)
        assert (e[-1], e[7]) == (1, 3), (e[-1], e[7])
        return "(1,3,-7,14), (1,2,3,4,6,8), ratio 1:3 at q^{-1/8}, q^{7/8}"
    _report(capsys, 10, "first coefficients", check)


def test_criterion_11_cusp_certificates(capsys):
    def check():
        runs = [
            ("cesaro", 24, "24:12,1:24", "gamma1", 1152, (7,)),
            ("cesaro", 56, "56:48,1:48", "gamma1", 6272, (15, 23, 39)),
            ("omega", 120, "120:240,1:48", "gamma0", 86400, (83, 107)),
        ]
        parts = []
        for fam, m, eta, group, level, res in runs:
            good = holomorphy_certificate(fam, m, EtaQuotient.parse(eta, level), group, level, residues=res)
            assert good.passed, f"{fam} m={m}: {len(good.failures)} negative"
            parts.append(f"{fam} m={m}: {len(good.entries)} cusps, min {good.min_margin}")
        for fam, m, _, group, level, res in (runs[0], runs[2]):
            bad = holomorphy_certificate(fam, m, EtaQuotient(level), group, level, residues=res)
            assert bad.failures, f"{fam} without eta product did not fail"
            parts.append(f"{fam} bare: {len(bad.failures)} negative")
        return "; ".join(parts)
    _report(capsys, 11, "cusp certificates", check)


def test_criterion_12_negative_controls(capsys):
    def check():
        claims = [
            CongruenceClaim("cesaro", 3, 3, (0,)),
            CongruenceClaim("cesaro", 7, 7, (1,)),
            CongruenceClaim("omega", 5, 40, (7,)),
            CongruenceClaim("cesaro", 3, 3, (2,)),
        ]
        found = []
        for c in claims:
            cert = verify_claim(c, policy="published", ledger=False, bound=1000)
            assert cert.exit_code() == 1 and cert.first_failure is not None and cert.first_failure < 100, str(c)
            found.append(cert.first_failure)
        return f"counterexamples at {found}"
    _report(capsys, 12, "negative controls", check)
