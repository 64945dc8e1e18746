from __future__ import annotations

import random
from fractions import Fraction

import pytest
from sympy import divisors

from mocktheta.eta import (
    EtaQuotient,
    eta_order_at_cusp,
    eta_quotient_series,
    eta_weight_and_validity,
    holomorphy_certificate,
    shift_bounds,
    sieved_pole_bound,
)
from mocktheta.modular import INFINITY, Cusp, Mat2, S, cusp_representatives, gamma0_index

from oracles import geometric, poly_mul


def test_parse_and_str():
    Q = EtaQuotient.parse("24:12,1:24", 1152)
    assert Q.exponents == ((1, 24), (24, 12))
    assert str(Q) == "24:12,1:24"
    assert str(EtaQuotient.parse("", 10)) == "1"
    with pytest.raises(ValueError):
        EtaQuotient.parse("7:1", 12)


@pytest.mark.parametrize("text,level,weight", [
    ("24:12,1:24", 1152, 18),
    ("120:240,1:48", 86400, 144),
    ("56:48,1:48", 6272, 48),
])
def test_weights_and_validity(text, level, weight):
    w, valid = eta_weight_and_validity(EtaQuotient.parse(text, level))
    assert w == weight and valid


def test_sum_delta_r():
    assert EtaQuotient.parse("24:12,1:24", 1152).sum_delta_r == 312


def test_delta_at_infinity():
    assert eta_order_at_cusp(EtaQuotient.parse("1:24", 1), INFINITY) == 1


def test_order_at_zero_level_1152():
    Q = EtaQuotient.parse("24:12,1:24", 1152)
    assert eta_order_at_cusp(Q, Cusp(0, 1)) == 1176


def _random_quotient(rng, N):
    ds = divisors(N)
    exps = {d: rng.randint(-6, 12) for d in rng.sample(ds, min(len(ds), 3))}
    return EtaQuotient(N, tuple(exps.items()))


@pytest.mark.parametrize("N", [2, 3, 4, 6, 8, 9, 10, 12, 16, 18, 20, 24, 30, 36])
def test_valence_formula(N):
    rng = random.Random(N)
    for _ in range(5):
        Q = _random_quotient(rng, N)
        total = sum(eta_order_at_cusp(Q, c) for c in cusp_representatives("gamma0", N))
        assert total == Q.weight / 12 * gamma0_index(N)


def _eta_brute(Q: EtaQuotient, N: int) -> list[int]:
    # prod (1 - q^{delta n})^{r}, dense
    out = [1] + [0] * (N - 1)
    for d, r in Q.exponents:
        for n in range(1, N):
            if d * n >= N:
                break
            if r > 0:
                f = [0] * N
                f[0], f[d * n] = 1, -1
                for _ in range(r):
                    out = poly_mul(out, f, N)
            else:
                g = geometric(d * n, 1, N)
                for _ in range(-r):
                    out = poly_mul(out, g, N)
    return out


@pytest.mark.parametrize("text,N", [("1:24", 1), ("2:8,1:8", 2), ("4:8,2:-4,1:4", 4),
                                    ("1:2,2:1,4:1,8:2", 8), ("3:6,1:6", 3)])
def test_expansion_matches_order_at_infinity(text, N):
    Q = EtaQuotient.parse(text, N)
    s = eta_quotient_series(Q, 40)
    assert s.w == 24
    assert s.valuation() == Q.sum_delta_r
    assert Fraction(s.valuation(), 24) == eta_order_at_cusp(Q, INFINITY)
    assert s.tolist()[::24] == _eta_brute(Q, 40)[: len(s.tolist()[::24])]


def test_pole_bound_at_zero_cesaro():
    bounds = shift_bounds("cesaro", S, 24)
    assert {b.l for b in bounds} <= {8, 24}
    assert all(b.component in ("h2", "h3") for b in bounds)
    assert min(b.bound for b in bounds) == Fraction(64, 4 * 576)
    assert sieved_pole_bound("cesaro", Cusp(0, 1), 24, (7,)) > 0


def test_pole_bound_at_infinity():
    assert sieved_pole_bound("cesaro", INFINITY, 24, (7,)) == Fraction(7, 8)
    assert sieved_pole_bound("omega", INFINITY, 120, (83, 107)) == 83
    with pytest.raises(ValueError):
        sieved_pole_bound("omega", INFINITY, 120, (1,))


def test_bounds_follow_l_squared():
    for fam, m in (("cesaro", 24), ("cesaro", 48), ("omega", 120), ("omega", 240)):
        for b in shift_bounds(fam, Mat2(2, 1, 5, 3), m):
            ratio = b.bound * m * m / (b.l * b.l)
            assert abs(ratio) in (Fraction(1, 8), Fraction(1, 4), Fraction(1, 18))


def test_representative_invariance():
    rng = random.Random(3)
    for fam, kind, N, m, res in (("cesaro", "gamma1", 1152, 24, (7,)),
                                 ("omega", "gamma0", 86400, 120, (83, 107))):
        reps = cusp_representatives(kind, N)[1:]
        for _ in range(25):
            c = rng.choice(reps)
            M = c.matrix()
            k = rng.randint(-6, 6)
            alt = M @ Mat2(1, k, 0, 1)
            assert sieved_pole_bound(fam, c, m, res, M) == sieved_pole_bound(fam, c, m, res, alt)


def test_wrong_matrix_rejected():
    with pytest.raises(ValueError):
        sieved_pole_bound("cesaro", Cusp(1, 3), 24, (7,), S)


def test_cesaro_certificate_passes():
    Q = EtaQuotient.parse("24:12,1:24", 1152)
    cert = holomorphy_certificate("cesaro", 24, Q, "gamma1", 1152, residues=(7,))
    assert len(cert.entries) == 2560
    assert cert.passed and cert.min_margin == Fraction(103, 8)


def test_cesaro_adversarial_fails():
    cert = holomorphy_certificate("cesaro", 24, EtaQuotient(1152), "gamma1", 1152, residues=(7,))
    assert not cert.passed
    assert cert.failures and all(e.margin < 0 for e in cert.failures)


def test_omega_certificate_and_adversary():
    Q = EtaQuotient.parse("120:240,1:48", 86400)
    cert = holomorphy_certificate("omega", 120, Q, "gamma0", 86400, residues=(83, 107))
    assert len(cert.entries) == 576 and cert.passed
    bad = holomorphy_certificate("omega", 120, EtaQuotient(86400), "gamma0", 86400, residues=(83, 107))
    assert len(bad.failures) > 0


def test_threads_do_not_change_ledger():
    Q = EtaQuotient.parse("24:12,1:24", 1152)
    one = holomorphy_certificate("cesaro", 24, Q, "gamma1", 1152, residues=(7,))
    two = holomorphy_certificate("cesaro", 24, Q, "gamma1", 1152, residues=(7,), threads=2)
    assert one.entries == two.entries
