"""Truncated series arithmetic, Phi/omega, Weierstrass preparation, division."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwkit import (
    DegreeOverflowError,
    IwasawaSeries,
    ZeroSeriesError,
    divide_distinguished,
    omega,
    phi,
    weierstrass_prepare,
)
from iwkit.series import lambda_mu, reconstruction_residual_valuation

from conftest import ip_mul, ip_phi, ip_reduce_mod


def S(coeffs, p=3, n=24, cap=30):
    return IwasawaSeries.make(p, n, coeffs, cap)


class TestPhiOmega:
    def test_phi0_is_x(self):
        f = phi(0, prime=3, precision=24, degree_cap=5)
        assert f.coeffs[:3] == (0, 1, 0)

    def test_phi1_binomial(self):
        f = phi(1, prime=3, precision=24, degree_cap=5)
        assert f.coeffs[:4] == (3, 3, 1, 0)

    @pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2)])
    def test_phi_matches_exact_division_oracle(self, p, n):
        f = phi(n, prime=p, precision=20, degree_cap=p**n)
        want = ip_reduce_mod(ip_phi(p, n), p**20)
        assert list(f.coeffs[:len(want)]) == want
        assert all(c == 0 for c in f.coeffs[len(want):])

    def test_phi2_monic_degree6_constant3(self):
        f = phi(2, prime=3, precision=24, degree_cap=10)
        assert f.degree() == 6
        assert f.coeffs[6] == 1
        assert f.coeffs[0] == 3

    def test_omega_examples(self):
        w0 = omega(0, prime=3, precision=24, degree_cap=5)
        assert w0.coeffs[:3] == (0, 1, 0)
        w1 = omega(1, prime=3, precision=24, degree_cap=5)
        assert w1.coeffs[:5] == (0, 3, 3, 1, 0)

    def test_omega_is_product_of_phis(self):
        cap = 30
        w2 = omega(2, prime=3, precision=24, degree_cap=cap)
        prod = phi(0, prime=3, precision=24, degree_cap=cap)
        for k in (1, 2):
            prod = prod * phi(k, prime=3, precision=24, degree_cap=cap)
        assert prod.congruent(w2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_omega_recursion(self, n):
        cap = 90
        wn = omega(n, prime=3, precision=24, degree_cap=cap)
        rec = omega(n - 1, prime=3, precision=24, degree_cap=cap) * \
            phi(n, prime=3, precision=24, degree_cap=cap)
        assert wn.congruent(rec)

    def test_degree_overflow_names_required_cap(self):
        with pytest.raises(DegreeOverflowError) as err:
            omega(3, prime=3, precision=24, degree_cap=20)
        assert err.value.required_cap == 27


class TestWeierstrass:
    def test_already_distinguished(self):
        w = weierstrass_prepare(S([3, 1]))
        assert (w.mu, w.lambda_) == (0, 1)
        assert w.distinguished.coeffs == (3, 1)
        assert w.unit.coeffs[0] == 1 and w.unit.degree() == 0

    def test_p_times_unit(self):
        w = weierstrass_prepare(S([3, 3]))
        assert (w.mu, w.lambda_) == (1, 0)
        assert w.distinguished.coeffs == (1,)
        assert w.unit.coeffs[:2] == (1, 1)

    def test_product_oracle_p5(self):
        # (X^2 + 5)(1 + 5X) expanded exactly, then prepared
        p, n, cap = 5, 20, 30
        f = IwasawaSeries.make(p, n, ip_mul([5, 0, 1], [1, 5]), cap)
        w = weierstrass_prepare(f)
        assert (w.mu, w.lambda_) == (0, 2)
        want = IwasawaSeries.make(p, n, [5, 0, 1], 2)
        assert w.distinguished.congruent(want, mod_exp=16)

    def test_zero_series_rejected(self):
        with pytest.raises(ZeroSeriesError):
            weierstrass_prepare(IwasawaSeries.zero(3, 24, 10))

    def test_phi_invariants(self):
        for p in (3, 5):
            for n in (1, 2):
                f = phi(n, prime=p, precision=20, degree_cap=p**n + 4)
                lam, mu = lambda_mu(f)
                assert mu == 0
                assert lam == p**n - p ** (n - 1)
        lam, mu = lambda_mu(phi(0, prime=3, precision=20, degree_cap=4))
        assert (lam, mu) == (1, 0)

    @settings(max_examples=60, deadline=None)
    @given(
        p=st.sampled_from([3, 5]),
        seed=st.integers(0, 10**6),
        mu=st.integers(0, 2),
    )
    def test_reconstruction(self, p, seed, mu):
        rng = random.Random(seed)
        n, cap = 20, 30
        q = p**n
        coeffs = [rng.randrange(q) * p**mu for _ in range(cap + 1)]
        coeffs[rng.randint(0, 4)] = p**mu * (1 + p * rng.randrange(p**4))
        f = IwasawaSeries.make(p, n, coeffs, cap)
        w = weierstrass_prepare(f)
        assert w.mu == mu
        res = reconstruction_residual_valuation(f, w, up_to_degree=cap - 4)
        assert res >= n - mu - 2

    @settings(max_examples=40, deadline=None)
    @given(p=st.sampled_from([3, 5]), seed=st.integers(0, 10**6))
    def test_additivity_over_products(self, p, seed):
        rng = random.Random(seed)
        n, cap = 20, 40

        def small_series():
            lam = rng.randint(0, 4)
            mu = rng.randint(0, 1)
            coeffs = [p * rng.randrange(p**6) for _ in range(lam)]
            coeffs.append(1 + p * rng.randrange(p**6))
            coeffs += [rng.randrange(p**8) for _ in range(4)]
            return IwasawaSeries.make(p, n, [c * p**mu for c in coeffs], cap)

        f, g = small_series(), small_series()
        lf, mf = lambda_mu(f)
        lg, mg = lambda_mu(g)
        lp, mp = lambda_mu(f * g)
        assert (lp, mp) == (lf + lg, mf + mg)


class TestDivideDistinguished:
    def test_phi1_divides_omega2(self):
        cap = 30
        w2 = omega(2, prime=3, precision=24, degree_cap=cap)
        p1 = phi(1, prime=3, precision=24, degree_cap=cap)
        q, r = divide_distinguished(w2, p1)
        assert r.is_zero()

    def test_low_degree_passthrough(self):
        x = IwasawaSeries.monomial(1, 3, 24, 10)
        p1 = phi(1, prime=3, precision=24, degree_cap=10)
        q, r = divide_distinguished(x, p1)
        assert q.is_zero()
        assert r.coeffs[:2] == (0, 1)

    def test_non_monic_rejected(self):
        from iwkit import InputError

        with pytest.raises(InputError):
            divide_distinguished(S([1, 1, 1]), S([1, 2]))

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_reconstruction(self, seed):
        rng = random.Random(seed)
        p, n, cap = 3, 24, 20
        f = IwasawaSeries.make(p, n, [rng.randrange(p**n) for _ in range(10)], cap)
        p1 = phi(1, prime=p, precision=n, degree_cap=cap)
        q, r = divide_distinguished(f, p1)
        back = q.padded(cap) * p1 + r.padded(cap)
        assert back.congruent(f, up_to_degree=cap - 2)


class TestSeriesBasics:
    def test_min_cap_rule(self):
        a = S([1, 1, 1], cap=5)
        b = S([1, 1], cap=2)
        assert (a * b).degree_cap == 2
        assert (a + b).degree_cap == 2

    def test_mul_p_power_gains_precision(self):
        f = S([1, 2], cap=3).mul_p_power(2)
        assert f.precision == 26
        assert f.coeffs[:2] == (9, 18)

    def test_exact_div_p_power(self):
        f = S([9, 18], cap=2).exact_div_p_power(2)
        assert f.precision == 22
        assert f.coeffs[:2] == (1, 2)

    def test_min_valuation(self):
        assert S([9, 27]).min_valuation() == 2
        assert IwasawaSeries.zero(3, 24, 4).min_valuation() == 24
