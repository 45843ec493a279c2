"""Quotient towers of elementary modules and their Kobayashi ranks."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwkit import (
    ElementaryModule,
    InputError,
    IwasawaSeries,
    module_invariants,
    nabla_additivity_check,
    nabla_brute,
    nabla_closed,
    phi,
    quotient_presentation,
    rank_phi_omega,
    tower_report,
)
from iwkit.padic import padic_matrix


P, N, CAP = 3, 24, 89


def series(coeffs, p=P, n=N, cap=CAP):
    return IwasawaSeries.make(p, n, coeffs, cap)


def mod(*gens, p=P):
    return ElementaryModule(p, tuple(gens))


def phi_gen(c, p=P, n=N, cap=CAP):
    return phi(c, prime=p, precision=n, degree_cap=cap)


class TestQuotientPresentation:
    def test_x_mod_omega1(self):
        m = mod(series([0, 1]))
        pres = quotient_presentation(m, 1)
        assert len(pres) == 3
        assert module_invariants(pres) == (1, 0)

    def test_p_mod_omega1(self):
        m = mod(series([3]))
        pres = quotient_presentation(m, 1)
        assert [[x.residue for x in row] for row in pres] == [
            [3, 0, 0], [0, 3, 0], [0, 0, 3]]
        assert module_invariants(pres) == (0, 3)

    def test_phi1_mod_omega2(self):
        assert module_invariants(quotient_presentation(mod(phi_gen(1)), 2)) == (2, 0)

    def test_empty_module(self):
        assert quotient_presentation(mod(), 2) == []

    def test_block_diagonal_shape(self):
        pres = quotient_presentation(mod(series([3]), series([0, 1])), 1)
        assert len(pres) == 6
        for i in range(3):
            for j in range(3, 6):
                assert pres[i][j].is_zero()
                assert pres[j - 3][j].is_zero() or True  # off blocks vanish
        assert all(pres[i][j].is_zero() for i in range(3) for j in range(3, 6))
        assert all(pres[i][j].is_zero() for i in range(3, 6) for j in range(3))


class TestRankPhiOmega:
    def test_c_zero(self):
        assert rank_phi_omega(0, 3, prime=3) == 1
        assert rank_phi_omega(0, 0, prime=3) == 1

    def test_middle(self):
        assert rank_phi_omega(1, 2, prime=3) == 2
        assert rank_phi_omega(2, 2, prime=3) == 6
        assert rank_phi_omega(2, 4, prime=5) == 20

    def test_finite_for_c_above_n(self):
        assert rank_phi_omega(3, 2, prime=3) == 0

    @pytest.mark.parametrize("c", range(5))
    @pytest.mark.parametrize("n", range(5))
    def test_against_snf_oracle(self, c, n):
        free, _ = module_invariants(quotient_presentation(mod(phi_gen(c)), n))
        assert free == rank_phi_omega(c, n, prime=3)


class TestNabla:
    def test_mu_module(self):
        assert nabla_brute(mod(series([3])), 2) == 6

    def test_phi1_free_module(self):
        for n in (2, 3, 4):
            assert nabla_brute(mod(phi_gen(1)), n) == 2

    def test_x_at_level1(self):
        assert nabla_brute(mod(series([0, 1])), 1) == 1

    def test_undefined_on_rank_jump(self):
        assert nabla_brute(mod(phi_gen(1)), 1) is None
        assert nabla_brute(mod(phi_gen(2)), 2) is None

    def test_closed_form_values(self):
        assert nabla_closed(0, 1, 2, prime=3) == 6
        assert nabla_closed(5, 0, 7, prime=3) == 5
        assert nabla_closed(2, 1, 3, prime=5) == 102

    def test_additivity_examples(self):
        assert nabla_additivity_check(mod(series([3])), mod(phi_gen(1)), 2)
        m = mod(series([0, 1]))
        assert nabla_additivity_check(m, m, 1)

    def test_additivity_propagates_undefined(self):
        assert nabla_additivity_check(mod(phi_gen(1)), mod(series([3])), 1) is None

    def test_additivity_random_pairs(self):
        pool = {
            3: [series([3]), series([0, 1]), series([3, 1]), phi_gen(1)],
            5: [IwasawaSeries.make(5, N, [5], 40),
                IwasawaSeries.make(5, N, [0, 1], 40),
                IwasawaSeries.make(5, N, [5, 1], 40),
                phi(1, prime=5, precision=N, degree_cap=40)],
        }
        rng = random.Random(2024)
        checked = 0
        for _ in range(20):
            p = rng.choice([3, 5])
            n = rng.randint(1, 3)
            m1 = ElementaryModule(p, (rng.choice(pool[p]),))
            m2 = ElementaryModule(p, (rng.choice(pool[p]),))
            out = nabla_additivity_check(m1, m2, n)
            assert out is not False
            checked += out is True
        assert checked > 0


class TestTowerReport:
    def test_phi2_stabilizes_at_six(self):
        rep = tower_report(mod(phi_gen(2)), 4)
        values = {lv.n: lv.nabla for lv in rep.levels}
        assert values[3] == 6 and values[4] == 6
        assert rep.stabilization_level is not None
        assert rep.stabilization_level <= 3
        assert values[2] is None or values[2] != 6

    def test_p_phi1_matches_closed_form(self):
        rep = tower_report(mod(phi_gen(1) * 3), 4)
        assert rep.lambda_invariant == 2 and rep.mu_invariant == 1
        for lv in rep.levels:
            if lv.n > rep.stabilization_level and lv.n >= 1:
                assert lv.nabla == nabla_closed(2, 1, lv.n, prime=3)

    def test_zero_module(self):
        rep = tower_report(mod(), 3)
        for lv in rep.levels:
            assert (lv.zp_rank, lv.finite_length) == (0, 0)
            if lv.n >= 1:
                assert lv.nabla == 0
        assert rep.stabilization_level == 0

    def test_purely_finite_inner_consistency(self):
        rep = tower_report(mod(series([3])), 3)
        assert rep.inner_consistency is True
        lengths = [lv.finite_length for lv in rep.levels]
        assert lengths == [1, 3, 9, 27]

    def test_finite_fuzz_leaves_nabla_unchanged(self):
        fuzz = padic_matrix(P, N, [[9, 3], [0, 3]])
        base = mod(series([3]), phi_gen(1))
        for n in (1, 2, 3):
            assert nabla_brute(base, n) == nabla_brute(base, n, fuzz=fuzz)
        rep = tower_report(base, 3)
        rep_f = tower_report(base, 3, fuzz=fuzz)
        assert [lv.nabla for lv in rep.levels] == [lv.nabla for lv in rep_f.levels]
        assert rep_f.levels[1].finite_length > rep.levels[1].finite_length

    def test_infinite_fuzz_rejected(self):
        with pytest.raises(InputError):
            nabla_brute(mod(series([3])), 1, fuzz=padic_matrix(P, N, [[0]]))


class TestMwShape:
    def test_detected(self):
        m = mod(phi_gen(0), phi_gen(2), phi_gen(1))
        assert m.mw_shape() == (0, 1, 2)

    def test_rejected_for_non_phi(self):
        assert mod(series([3, 1])).mw_shape() is None
        assert mod(series([3])).mw_shape() is None

    def test_mw_stabilized_nabla_is_rank_sum(self):
        """For (+) Lambda/Phi_{c_i}, the stabilized index equals the total
        rank of the omega_{n0} quotients with n0 = max c_i."""
        shapes = [(0,), (1,), (2,), (0, 1), (1, 2), (0, 1, 2), (2, 2)]
        for shape in shapes:
            m = mod(*[phi_gen(c) for c in shape])
            n0 = max(shape)
            want = sum(rank_phi_omega(c, n0, prime=3) for c in shape)
            for n in (n0 + 1, 4):
                assert nabla_brute(m, n) == want


class TestDirectSumAdditivity:
    def test_ranks_lengths_and_nabla_add_at_every_level(self):
        pieces = [mod(series([3])), mod(phi_gen(1)), mod(series([3, 1]))]
        total = pieces[0].direct_sum(pieces[1]).direct_sum(pieces[2])
        for n in range(0, 4):
            parts = [module_invariants(quotient_presentation(m, n))
                     for m in pieces]
            whole = module_invariants(quotient_presentation(total, n))
            assert whole == (sum(f for f, _ in parts), sum(l for _, l in parts))
        for n in range(1, 4):
            nabs = [nabla_brute(m, n) for m in pieces]
            want = None if any(x is None for x in nabs) else sum(nabs)
            assert nabla_brute(total, n) == want


class TestOracleEquivalence:
    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(0, 10**6),
        p=st.sampled_from([3, 5]),
    )
    def test_brute_matches_closed_past_threshold(self, seed, p):
        rng = random.Random(seed)
        prec = 24 if p == 3 else 12
        cap = p**3 + 8
        pool = [
            (IwasawaSeries.make(p, prec, [p], cap), 0),
            (IwasawaSeries.make(p, prec, [0, 1], cap), 0),
            (IwasawaSeries.make(p, prec, [p, 1], cap), 0),
            (phi(1, prime=p, precision=prec, degree_cap=cap), 1),
        ]
        k = rng.randint(1, 2)
        gens = [rng.choice(pool) for _ in range(k)]
        m = ElementaryModule(p, tuple(g for g, _ in gens))
        lam, mu = m.lambda_mu()
        max_c = max(c for _, c in gens)
        n_top = 3
        for n in range(1, n_top + 1):
            if p ** (n - 1) >= lam + max_c:
                assert nabla_brute(m, n) == nabla_closed(lam, mu, n, prime=p)
