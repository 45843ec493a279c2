"""Evaluation in Z_p[X]/(Phi_m(1+X), p^N) against exact-integer oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwkit import IwasawaSeries, cyclo_eval, omega, phi

from conftest import ip_divmod, ip_phi, ip_reduce_mod


def oracle_eval(coeffs, p, m, q):
    """Reduce exact integer coefficients mod Phi_m with plain integers."""
    _, rem = ip_divmod(list(coeffs), ip_phi(p, m))
    return ip_reduce_mod(rem, q)


class TestCycloEval:
    def test_defining_relation(self):
        for m in (1, 2, 3):
            f = phi(m, prime=3, precision=24, degree_cap=60)
            assert cyclo_eval(f, m).is_zero()

    @pytest.mark.parametrize("n,m", [(n, m) for n in range(5) for m in range(5)])
    def test_omega_vanishing_pattern(self, n, m):
        """omega_n(zeta_{p^m} - 1) = zeta^{p^n} - 1 is zero iff m <= n."""
        f = omega(n, prime=3, precision=24, degree_cap=85)
        ev = cyclo_eval(f, m)
        assert ev.is_zero() == (m <= n)

    @pytest.mark.parametrize("c,m", [(c, m) for c in range(5) for m in range(5)
                                     if c != m])
    def test_phi_nonvanishing_off_level_matches_oracle(self, c, m):
        p, prec = 3, 24
        q = p**prec
        f = phi(c, prime=p, precision=prec, degree_cap=85)
        ev = cyclo_eval(f, m)
        want = oracle_eval(ip_phi(p, c), p, m, q)
        got = list(ev.coeffs)
        assert got[:len(want)] == want
        assert all(x == 0 for x in got[len(want):])
        assert not ev.is_zero()

    def test_phi1_at_level2_norm(self):
        """Norm of Phi_1(zeta_9 - 1) down to Z_3, pinned by the resultant of
        the exact integer polynomials (computed with sympy): 9, valuation 2."""
        sympy = pytest.importorskip("sympy")
        x = sympy.symbols("x")

        def poly(coeffs):
            return sympy.Poly(list(reversed(coeffs)), x)

        res = int(sympy.resultant(poly(ip_phi(3, 2)), poly(ip_phi(3, 1))))
        assert res == 9

        f = phi(1, prime=3, precision=24, degree_cap=10)
        ev = cyclo_eval(f, 2)
        assert not ev.is_zero()
        norm = ev.norm()
        assert norm.residue == res % 3**24
        assert norm.valuation() == 2

    def test_level0_is_evaluation_at_zero(self):
        f = IwasawaSeries.make(3, 24, [7, 1, 4], 10)
        ev = cyclo_eval(f, 0)
        assert ev.coeffs == (7,)

    def test_truncation_warning_flag(self):
        # window ends below deg Phi_2 = 6 with a live top coefficient
        f = IwasawaSeries.make(3, 24, [1, 1, 1], 2)
        assert cyclo_eval(f, 2).truncation_warning
        padded = IwasawaSeries.make(3, 24, [1, 1, 1], 10)
        assert not cyclo_eval(padded, 2).truncation_warning

    @settings(max_examples=50, deadline=None)
    @given(
        m=st.integers(0, 3),
        a=st.lists(st.integers(0, 3**10), min_size=1, max_size=8),
        b=st.lists(st.integers(0, 3**10), min_size=1, max_size=8),
    )
    def test_ring_homomorphism(self, m, a, b):
        cap = 20
        f = IwasawaSeries.make(3, 24, a, cap)
        g = IwasawaSeries.make(3, 24, b, cap)
        ef, eg = cyclo_eval(f, m), cyclo_eval(g, m)
        assert cyclo_eval(f + g, m).coeffs == (ef + eg).coeffs
        assert cyclo_eval(f * g, m).coeffs == (ef * eg).coeffs
