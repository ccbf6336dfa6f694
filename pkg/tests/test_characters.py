import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schur_certify.characters import (
    DegenerateSpectrumError,
    Method,
    OracleTooLarge,
    char_bialternant,
    char_jacobi_trudi,
    char_spin,
    char_ssyt_oracle,
    char_staircase,
    character,
    evaluate,
)
from schur_certify.partitions import Partition, dim_irrep, enumerate_partitions, staircase_partition
from schur_certify.unitary import eigenphases, haar_random

phase_lists = st.lists(st.floats(0, 2 * math.pi, allow_nan=False), min_size=2, max_size=4)


class TestStaircase:
    def test_two_roots(self):
        assert char_staircase([0, math.pi], 3).value == pytest.approx(1)

    @pytest.mark.parametrize("d, s", [(2, 3), (3, 5), (4, 3)])
    def test_identity(self, d, s):
        chi = char_staircase(np.zeros(d), s)
        assert chi.value == pytest.approx(s ** math.comb(d, 2))
        assert chi.partition == staircase_partition(d, s)

    @pytest.mark.parametrize("s", [2, 3, 7])
    def test_degenerate_factor(self, s):
        phi = 0.7
        expected = s * cmath.exp(1j * (s - 1) * phi)
        assert abs(char_staircase([phi, phi], s).value - expected) <= 1e-12

    def test_accepts_eigenphases(self):
        u = haar_random(3, 1)
        ep = eigenphases(u)
        assert char_staircase(ep, 3).value == char_staircase(ep.phases, 3).value


class TestSpin:
    def test_antipodal(self):
        assert abs(char_spin([0, math.pi], 3).value) <= 1e-12

    def test_quarter_turn(self):
        assert abs(char_spin([0, math.pi / 2], 4).value - (-1)) <= 1e-12

    @pytest.mark.parametrize("n", [3, 4, 10, 31])
    def test_identity(self, n):
        assert char_spin([0, 0], n).value == pytest.approx(n - 1)

    def test_rejects_wrong_dimension(self):
        with pytest.raises(ValueError):
            char_spin([0, 1, 2], 4)

    def test_dirichlet_modulus(self):
        for n in (3, 5, 12):
            for delta in np.linspace(0.01, 2 * math.pi - 0.01, 101):
                expected = abs(math.sin((n - 1) * delta / 2) / math.sin(delta / 2))
                assert abs(abs(char_spin([0, delta], n).value) - expected) <= 1e-10

    def test_staircase_relation(self):
        # staircase with d = 2, s = n - 1 is lambda = (n - 2); |chi| matches the hook (n-1, 1)
        for n in (4, 7, 12):
            for delta in np.linspace(0.01, 2 * math.pi - 0.01, 57):
                a = abs(char_staircase([0.3, 0.3 + delta], n - 1).value)
                b = abs(char_spin([0.3, 0.3 + delta], n).value)
                expected = abs(math.sin((n - 1) * delta / 2) / math.sin(delta / 2))
                assert abs(a - b) <= 1e-10 and abs(a - expected) <= 1e-10


class TestBialternant:
    def test_defining_rep(self):
        u = haar_random(3, 9)
        ep = eigenphases(u)
        assert abs(char_bialternant(Partition((1,), 3), ep).value - np.trace(u.matrix)) <= 1e-10

    def test_staircase_at_cube_roots(self):
        phases = [0, 2 * math.pi / 3, 4 * math.pi / 3]
        lam = Partition((4, 2, 0))
        a = char_bialternant(lam, phases).value
        b = char_ssyt_oracle(lam, phases).value
        assert abs(a - b) <= 1e-9
        assert abs(a - char_staircase(phases, 3).value) <= 1e-9

    def test_h2_at_antipodal(self):
        assert char_bialternant(Partition((2, 0)), [0, math.pi]).value == pytest.approx(1)

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateSpectrumError):
            char_bialternant(Partition((2, 1)), [0.5, 0.5])

    def test_dispatch_falls_back(self):
        chi = character(Partition((2, 2)), [0.0, 0.0])
        assert chi.method is Method.jacobi_trudi
        assert chi.value == pytest.approx(1)


class TestJacobiTrudi:
    @pytest.mark.parametrize("seed", range(10))
    def test_matches_spin(self, seed):
        rng = np.random.default_rng(seed)
        phases = rng.uniform(0, 2 * np.pi, 2)
        n = int(rng.integers(3, 12))
        assert abs(char_jacobi_trudi(Partition((n - 1, 1)), phases).value - char_spin(phases, n).value) <= 1e-9

    @pytest.mark.parametrize("parts", [(3, 1, 0), (2, 2, 1), (5,), (4, 2, 0)])
    def test_identity(self, parts):
        lam = Partition(parts)
        assert char_jacobi_trudi(lam, np.zeros(lam.d)).value == pytest.approx(dim_irrep(lam))

    def test_degenerate(self):
        assert char_jacobi_trudi(Partition((2, 2)), [0, 0]).value == pytest.approx(1)

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            char_jacobi_trudi(Partition((10_000, 0)), [0, 1])


class TestOracle:
    def test_hook_at_antipodal(self):
        assert abs(char_ssyt_oracle(Partition((2, 1)), [0, math.pi]).value) <= 1e-12

    def test_single_box(self):
        u = haar_random(4, 2)
        ep = eigenphases(u)
        assert abs(char_ssyt_oracle(Partition((1,), 4), ep).value - np.trace(u.matrix)) <= 1e-10

    @pytest.mark.parametrize("parts", [(3, 1), (2, 2, 0), (4, 2, 0)])
    def test_identity_counts_tableaux(self, parts):
        lam = Partition(parts)
        assert char_ssyt_oracle(lam, np.zeros(lam.d)).value == dim_irrep(lam)

    def test_guard(self):
        with pytest.raises(OracleTooLarge):
            char_ssyt_oracle(staircase_partition(5, 5), np.zeros(5))


class TestCrossMethod:
    @pytest.mark.parametrize("d", [2, 3])
    def test_small_partitions(self, d):
        rng = np.random.default_rng(100 + d)
        for n in range(0, 5):
            for lam in enumerate_partitions(n, d):
                ep = eigenphases(haar_random(d, rng))
                truth = char_ssyt_oracle(lam, ep).value
                tol = 1e-9 * dim_irrep(lam)
                assert abs(char_bialternant(lam, ep).value - truth) <= tol
                assert abs(char_jacobi_trudi(lam, ep).value - truth) <= tol

    def test_evaluate_geometric_routes(self):
        phases = [0.2, 1.9, 4.0]
        assert evaluate(Partition((4, 2, 0)), phases, "geometric_product").value == pytest.approx(
            char_staircase(phases, 3).value
        )
        assert evaluate(Partition((3, 1)), phases[:2], "geometric_product").value == pytest.approx(
            char_spin(phases[:2], 4).value
        )
        with pytest.raises(ValueError):
            evaluate(Partition((3, 2)), phases[:2], "geometric_product")

    @settings(max_examples=200, deadline=None)
    @given(phase_lists, st.integers(0, 4), st.integers(0, 3))
    def test_modulus_bound(self, phases, a, b):
        d = len(phases)
        lam = Partition(tuple(sorted((a + b, a, b)[:d], reverse=True)), d)
        dim = dim_irrep(lam)
        for chi in (character(lam, phases), char_jacobi_trudi(lam, phases)):
            assert abs(chi.value) <= dim + 1e-6
        s = a + 2
        assert abs(char_staircase(phases, s).value) <= s ** math.comb(d, 2) + 1e-6


def test_modulus_bound_random_instances():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        phases = rng.uniform(0, 2 * np.pi, d)
        s = int(rng.integers(2, 8))
        assert abs(char_staircase(phases, s).value) <= s ** math.comb(d, 2) * (1 + 1e-12)
        if d == 2:
            n = int(rng.integers(3, 30))
            assert abs(char_spin(phases, n).value) <= (n - 1) * (1 + 1e-12)


def test_basis_invariance_of_phases():
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        u, w = haar_random(d, rng), haar_random(d, rng)
        conj = w.matrix @ u.matrix @ w.matrix.conj().T
        assert np.allclose(eigenphases(conj).phases, eigenphases(u).phases, atol=1e-8)
