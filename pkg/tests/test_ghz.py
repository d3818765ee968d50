import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from propent.ghz import (
    amplitude_closed_form, coincidence_probability, cotangent_identity, decode_ghz, elementary_symmetric,
    ghz_fidelity, ghz_target, ghz_target_spec, identity_rhs, magic_product_state, target_weight_amplitude,
    verify_conditions, viete_polynomial,
)
from propent.postselect import farfield_symmetrize, symmetrized_amplitudes
from propent.qstate import PureState, basis_state, fidelity_upto_phase, normalize, single_qubit, tensor_product
from oracles import permutation_symmetrize

S2 = 1 / math.sqrt(2)


class TestMagicState:
    def test_two(self):
        np.testing.assert_allclose(magic_product_state(2).amps, [0, -1, 0, 0], atol=1e-15)

    def test_three_factors(self):
        r3 = math.sqrt(3) / 2
        expected = tensor_product([single_qubit(r3, 0.5), single_qubit(r3, -0.5), single_qubit(0, -1)])
        np.testing.assert_allclose(magic_product_state(3).amps, expected.amps, atol=1e-15)

    def test_four_factors(self):
        expected = tensor_product([single_qubit(S2, S2), single_qubit(1, 0), single_qubit(S2, -S2), single_qubit(0, -1)])
        np.testing.assert_allclose(magic_product_state(4).amps, expected.amps, atol=1e-15)

    def test_too_small(self):
        with pytest.raises(ValueError):
            magic_product_state(1)


class TestTargetAndDecode:
    def test_targets(self):
        np.testing.assert_allclose(ghz_target(2).amps, [S2, 0, 0, -S2])
        t3 = ghz_target(3).amps
        assert t3[0] == S2 and t3[7] == -S2 and np.count_nonzero(t3) == 2
        for n in range(2, 8):
            assert ghz_target(n).norm == pytest.approx(1, abs=1e-15)

    def test_decode_three(self):
        chi = farfield_symmetrize(magic_product_state(3))
        assert fidelity_upto_phase(decode_ghz(chi), ghz_target(3)) == pytest.approx(1, abs=1e-12)

    def test_decode_two_explicit(self):
        chi = farfield_symmetrize(magic_product_state(2))
        np.testing.assert_allclose(chi.amps, [0, -S2, -S2, 0], atol=1e-15)
        # S^dagger gives -i per V; H maps HV+VH to HH-VV
        np.testing.assert_allclose(decode_ghz(chi).amps, [1j * S2, 0, 0, -1j * S2], atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_decode_all_h(self, n):
        expected = tensor_product([single_qubit(S2, S2)] * n)
        np.testing.assert_allclose(decode_ghz(basis_state("H" * n)).amps, expected.amps, atol=1e-15)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_end_to_end(self, n):
        assert ghz_fidelity(n) >= 1 - 1e-10

    def test_end_to_end_through_literal_permutation_sum(self):
        n = 5
        c = permutation_symmetrize(magic_product_state(n).amps, n)
        chi = normalize(PureState(c))[0]
        assert fidelity_upto_phase(decode_ghz(chi), ghz_target(n)) >= 1 - 1e-10


class TestConditions:
    def test_three_amplitudes(self):
        r = verify_conditions(3)
        assert r.amplitudes[1] == pytest.approx(-1.5, abs=1e-14)
        assert r.amplitudes[3] == pytest.approx(1.5, abs=1e-14)
        assert abs(r.amplitudes[2]) < 1e-14 and abs(r.amplitudes[0]) < 1e-14
        assert r.holds

    def test_five_ratio(self):
        assert verify_conditions(5).ratios[3] == pytest.approx(-1, abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_both_parities(self, n):
        r = verify_conditions(n)
        assert r.condition_a and r.condition_b

    def test_cap(self):
        with pytest.raises(ValueError):
            verify_conditions(21)
        with pytest.raises(ValueError):
            verify_conditions(1)

    @pytest.mark.parametrize("n", range(2, 10))
    def test_equal_weight_amplitudes_equal(self, n):
        c = symmetrized_amplitudes(magic_product_state(n))
        for m in range(n + 1):
            vals = [c[i] for i in range(2**n) if bin(i).count("1") == m]
            assert max(abs(v - vals[0]) for v in vals) <= 1e-12 * max(1.0, np.abs(c).max())

    def test_target_spec(self):
        spec = ghz_target_spec(7)
        assert [spec.b_amps[m] for m in range(8)] == [0, 1, 0, -1, 0, 1, 0, -1]
        assert spec.c_over_c1 == {1: 1, 3: -1, 5: 1, 7: -1}
        with pytest.raises(ValueError):
            target_weight_amplitude(3, 4)

    @pytest.mark.parametrize("n", range(2, 14))
    def test_closed_form_matches(self, n):
        c = symmetrized_amplitudes(magic_product_state(n))
        for m in range(1, n + 1, 2):
            assert amplitude_closed_form(n, m) == pytest.approx(c[(1 << m) - 1].real, abs=1e-10 * np.abs(c).max())


class TestCotangentIdentity:
    def test_spot_values(self):
        lhs, rhs = cotangent_identity(3, 3)
        assert lhs == pytest.approx(1 / 3, rel=1e-14) and rhs == pytest.approx(1 / 3)
        lhs, rhs = cotangent_identity(5, 3)
        assert lhs == pytest.approx(2.0, rel=1e-14) and rhs == 2.0
        assert cotangent_identity(5, 1) == (1.0, 1.0)

    def test_all_odd(self):
        worst = 0.0
        for n in range(3, 22, 2):
            for m in range(1, n + 1, 2):
                lhs, rhs = cotangent_identity(n, m)
                worst = max(worst, abs(lhs - rhs) / rhs)
        assert worst <= 1e-9

    def test_all_even(self):
        for n in range(2, 21, 2):
            for m in range(1, n, 2):
                lhs, rhs = cotangent_identity(n, m)
                assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_rhs_exact(self):
        assert identity_rhs(5, 3) == Fraction(2)
        assert identity_rhs(21, 11) == Fraction(math.factorial(20), math.factorial(11) * math.factorial(10))

    @pytest.mark.parametrize("n,m", [(5, 2), (5, 0), (5, 7), (1, 1)])
    def test_bad_arguments(self, n, m):
        with pytest.raises(ValueError):
            cotangent_identity(n, m)

    @given(st.lists(st.floats(-10, 10), min_size=0, max_size=8), st.integers(0, 8))
    def test_elementary_symmetric_vs_subsets(self, values, k):
        expected = math.fsum(math.prod(c) for c in itertools.combinations(values, k)) if k <= len(values) else 0.0
        assert elementary_symmetric(values, k) == pytest.approx(expected, rel=1e-9, abs=1e-6)


class TestViete:
    def test_low_degrees(self):
        assert viete_polynomial(1).coeffs == (3, -1)
        q = viete_polynomial(2)
        assert q.coeffs == (5, -10, 1)
        assert q.roots[0] * q.roots[1] == pytest.approx(0.2, rel=1e-14)
        assert sum(q.roots) == pytest.approx(2.0, rel=1e-14)
        assert q.elementary_symmetric_from_coeffs(1) == 2
        assert q.elementary_symmetric_from_coeffs(2) == Fraction(1, 5)
        assert q.roots[0] == pytest.approx(1.8944, abs=1e-4)
        assert viete_polynomial(1).roots[0] == pytest.approx(1 / 3, rel=1e-14)

    @pytest.mark.parametrize("p", range(1, 11))
    def test_residuals(self, p):
        q = viete_polynomial(p)
        scale = max(abs(c) for c in q.coeffs)
        assert max(q.root_residuals()) <= 1e-8 * scale

    @pytest.mark.parametrize("p", range(1, 21))
    def test_float_residuals_relative(self, p):
        assert viete_polynomial(p).float_residuals().max() < 1e-12

    @pytest.mark.parametrize("p", range(1, 16))
    def test_roots_positive_distinct_decreasing(self, p):
        r = np.array(viete_polynomial(p).roots)
        assert np.all(r > 0) and np.all(np.diff(r) < 0)

    @pytest.mark.parametrize("p", range(1, 12))
    def test_coefficients_match_identity(self, p):
        q = viete_polynomial(p)
        for j in range(p + 1):
            assert q.elementary_symmetric_from_coeffs(j) == identity_rhs(2 * p + 1, 2 * j + 1)

    @pytest.mark.parametrize("p", range(1, 10))
    def test_even_n_variant(self, p):
        q = viete_polynomial(p, n=2 * p + 2)
        assert max(q.root_residuals()) <= 1e-8 * max(abs(c) for c in q.coeffs)
        for j in range(p + 1):
            assert q.elementary_symmetric_from_coeffs(j) == identity_rhs(2 * p + 2, 2 * j + 1)

    def test_guards(self):
        with pytest.raises(ValueError):
            viete_polynomial(0)
        with pytest.raises(ValueError):
            viete_polynomial(26)
        with pytest.raises(ValueError):
            viete_polynomial(3, n=9)
        viete_polynomial(25)


class TestCoincidence:
    def test_perfect_capture(self):
        assert coincidence_probability(1, 1, 4 * math.pi).p_n == pytest.approx(1, rel=1e-15)

    def test_example(self):
        c = coincidence_probability(3, 0.2, 0.1)
        assert c.eta == pytest.approx(0.02 / (12 * math.pi), rel=1e-14)
        assert c.eta == pytest.approx(5.305e-4, rel=1e-3)
        assert c.p_n == pytest.approx(8.96e-10, rel=1e-3)

    def test_exact_against_integers(self):
        for n in range(1, 21):
            for eta_q, omega in [(1.0, 4 * math.pi), (0.3, 1.0), (0.9, 0.01)]:
                c = coincidence_probability(n, eta_q, omega)
                exact = Fraction(math.factorial(n)) * Fraction(c.eta) ** n
                assert abs(Fraction(c.p_n) - exact) <= Fraction(1, 10**15) * exact

    def test_stirling(self):
        assert 0.99 <= coincidence_probability(30, 1, 4 * math.pi).stirling_ratio <= 1.01
        ratios = [coincidence_probability(n, 0.5, 2.0).stirling_ratio for n in (5, 10, 20, 40)]
        assert all(abs(a - 1) > abs(b - 1) for a, b in zip(ratios, ratios[1:]))

    @pytest.mark.parametrize("eta_q,omega", [(1.0, 4 * math.pi), (0.5, 1.0), (0.05, 0.3)])
    def test_monotone(self, eta_q, omega):
        p = [coincidence_probability(n, eta_q, omega).p_n for n in range(1, 40)]
        assert all(a > b for a, b in zip(p, p[1:]))

    @pytest.mark.parametrize("n,eta_q,omega", [(0, 1, 1), (2, 0, 1), (2, 1.5, 1), (2, 1, 0), (2, 1, 13)])
    def test_range(self, n, eta_q, omega):
        with pytest.raises(ValueError):
            coincidence_probability(n, eta_q, omega)
