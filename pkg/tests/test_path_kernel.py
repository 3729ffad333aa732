from __future__ import annotations

import cmath
import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlgdirac.errors import BudgetExceeded, DomainError, InvalidParity
from qlgdirac.evolution import step_eigenphase
from qlgdirac.numerics import unitarity_defect
from qlgdirac.path_kernel import (
    ENUMERATION_CAP,
    PathProblem,
    bend_histogram,
    count_paths,
    enumerate_kernel,
    iter_paths,
    kernel_matrix,
    mode_angles,
    transfer_generator_phase,
    transfer_kernel,
    transfer_matrix,
)

SPINS = (1, -1)


def naive_kernel(n, mag, eps, s0, sn, unitary=True):
    """Oracle: loop over all 2^N sequences with plain Python arithmetic."""
    c = math.sqrt(1 - eps * eps) if unitary else 1.0
    total = 0j
    for seq in product(SPINS, repeat=n):
        if sum(seq) != mag or (s0 is not None and seq[0] != s0):
            continue
        w = 1 + 0j
        chain = seq + (sn,)
        for a, b in zip(chain, chain[1:]):
            w *= c if a == b else 1j * eps
        total += w
    return total


def valid_problems(max_n=10):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.sampled_from(range(-n, n + 1, 2)), st.floats(0, 1))
    )


class TestCountPaths:
    @pytest.mark.parametrize("n, m, expected", [(9, 3, 84), (5, 1, 10), (7, 7, 1), (6, -6, 1), (4, 0, 6)])
    def test_examples(self, n, m, expected):
        assert count_paths(PathProblem(n, m)) == expected

    def test_parity(self):
        with pytest.raises(InvalidParity):
            PathProblem(4, 1)
        with pytest.raises(InvalidParity):
            list(iter_paths(4, 1))

    @given(valid_problems())
    def test_enumeration_count(self, nme):
        n, m, _ = nme
        paths = list(iter_paths(n, m))
        assert len(paths) == count_paths(PathProblem(n, m)) == len(set(paths))
        assert all(sum(p) == m and len(p) == n for p in paths)
        assert paths == sorted(paths)

    def test_weight_one_count(self):
        prob = PathProblem(9, 3, 0.0)
        hist = [sum(bend_histogram(9, 3, s0, sn)) for s0 in SPINS for sn in (1,)]
        assert sum(hist) == 84

    @pytest.mark.parametrize("kwargs", [dict(n_steps=0, magnetization=0), dict(n_steps=3, magnetization=5)])
    def test_invalid_problem(self, kwargs):
        with pytest.raises(ValueError):
            PathProblem(**kwargs)

    def test_mass_domain(self):
        with pytest.raises(DomainError):
            PathProblem(3, 1, mass=2.0)


class TestEnumerateKernel:
    def test_single_step(self):
        eps = 0.4
        prob = PathProblem(1, 1, eps)
        assert enumerate_kernel(prob, 1, 1) == pytest.approx(math.sqrt(1 - eps**2))
        assert enumerate_kernel(prob, 1, 1, unitary=False) == pytest.approx(1.0)
        assert enumerate_kernel(PathProblem(1, 1, 0.0), 1, 1) == 1.0
        assert enumerate_kernel(prob, 1, -1) == pytest.approx(1j * eps)
        assert enumerate_kernel(prob, -1, 1) == 0

    @pytest.mark.parametrize("n", [3, 6, 9])
    def test_massless_light_cone(self, n):
        k = kernel_matrix(PathProblem(n, n, 0.0))
        np.testing.assert_allclose(k, [[1, 0], [0, 0]], atol=1e-14)
        for m in range(-n + 2, n, 2):
            assert enumerate_kernel(PathProblem(n, m, 0.0), None, 1) == 0

    def test_total_bend_zigzag(self):
        prob = PathProblem(6, 0, 1.0)
        assert enumerate_kernel(prob, 1, 1) == pytest.approx((1j) ** 6)
        assert enumerate_kernel(prob, -1, -1) == pytest.approx((1j) ** 6)
        assert enumerate_kernel(prob, 1, -1) == 0

    @settings(max_examples=40, deadline=None)
    @given(valid_problems(max_n=9), st.sampled_from([None, 1, -1]), st.sampled_from(SPINS), st.booleans())
    def test_matches_naive_oracle(self, nme, s0, sn, unitary):
        n, m, eps = nme
        got = enumerate_kernel(PathProblem(n, m, eps), s0, sn, unitary=unitary)
        assert abs(got - naive_kernel(n, m, eps, s0, sn, unitary)) < 1e-12

    def test_s0_summed_column(self):
        prob = PathProblem(7, 1, 0.3)
        for sn in SPINS:
            assert enumerate_kernel(prob, None, sn) == pytest.approx(
                enumerate_kernel(prob, 1, sn) + enumerate_kernel(prob, -1, sn)
            )
            assert transfer_kernel(prob, None, sn) == pytest.approx(enumerate_kernel(prob, None, sn))

    def test_budget(self):
        prob = PathProblem(ENUMERATION_CAP + 2, 0, 0.1)
        with pytest.raises(BudgetExceeded):
            enumerate_kernel(prob, 1, 1)
        with pytest.raises(BudgetExceeded):
            list(iter_paths(ENUMERATION_CAP + 2, 0))

    def test_cap_is_tractable(self):
        prob = PathProblem(ENUMERATION_CAP, 2, 0.25)
        assert abs(enumerate_kernel(prob, 1, -1) - transfer_kernel(prob, 1, -1)) < 1e-12


class TestTransferKernel:
    def test_nine_three_cross_oracle(self):
        prob = PathProblem(9, 3, 0.3)
        for s0, sn in product(SPINS, SPINS):
            assert abs(enumerate_kernel(prob, s0, sn) - transfer_kernel(prob, s0, sn)) < 1e-13

    def test_zero_mode_is_collide(self):
        tm = transfer_matrix(PathProblem(5, 1, 0.4), 0)
        np.testing.assert_array_equal(tm.stream, np.eye(2))
        np.testing.assert_array_equal(tm.matrix, tm.collide)

    @given(valid_problems(), st.integers(-10, 10))
    def test_stream_collide_entries(self, nme, n):
        steps, m, eps = nme
        tm = transfer_matrix(PathProblem(steps, m, eps), n)
        c = math.sqrt(1 - eps**2)
        th = tm.theta
        want = np.array([[c * cmath.exp(-1j * th), 1j * eps], [1j * eps, c * cmath.exp(1j * th)]])
        np.testing.assert_allclose(tm.matrix, want, atol=1e-15)
        if 0 < eps < 1:
            np.testing.assert_allclose(tm.from_couplings(), want, atol=1e-14)
        if eps < 1:
            assert unitarity_defect(tm.matrix) < 1e-12

    def test_nu_branch_irrelevant(self):
        tm = transfer_matrix(PathProblem(3, 1, 0.6), 1)
        for shift in (1j * math.pi, -1j * math.pi, 3j * math.pi):
            assert cmath.exp(-2 * (tm.nu + shift)) == pytest.approx(cmath.exp(-2 * tm.nu))
        assert cmath.exp(-2 * tm.nu) == pytest.approx(0.6j)

    def test_modes_sorted_and_symmetric(self):
        n, th = mode_angles(4)
        assert list(n) == list(range(-4, 5))
        assert np.all(np.diff(th) > 0)

    def test_2n_mode_sum_would_alias(self):
        # With only 2N modes at 2 pi n / N, paths whose magnetization differs
        # from M by a multiple of N leak into the sum; the 2N+1 grid does not.
        n, mag, eps = 4, 0, 0.5
        c = math.sqrt(1 - eps**2)
        theta = 2 * np.pi * np.arange(-n, n) / n
        total = 0j
        for th in theta:
            u = np.array([[c * np.exp(-1j * th), 1j * eps], [1j * eps, c * np.exp(1j * th)]])
            z = np.linalg.matrix_power(u, n)
            total += np.exp(1j * th * mag) * z[0, 0]
        aliased = total / (2 * n)
        exact = enumerate_kernel(PathProblem(n, mag, eps), 1, 1)
        assert abs(aliased - exact) > 1e-3
        assert abs(transfer_kernel(PathProblem(n, mag, eps), 1, 1) - exact) < 1e-14


class TestGeneratorPhase:
    def test_massless_zero_mode(self):
        a, b = transfer_generator_phase(PathProblem(4, 0, 0.0), 0)
        assert a == pytest.approx(1) and b == pytest.approx(1)

    def test_rest_mode(self):
        a, b = transfer_generator_phase(PathProblem(4, 0, 0.5), 0)
        assert a == pytest.approx(cmath.exp(-1j * math.asin(0.5)))
        assert b == pytest.approx(cmath.exp(1j * math.asin(0.5)))

    @settings(max_examples=60)
    @given(valid_problems(max_n=12), st.integers(-12, 12))
    def test_matches_diagonalization(self, nme, n):
        steps, m, eps = nme
        n = max(-steps, min(steps, n))
        prob = PathProblem(steps, m, eps)
        ev = np.linalg.eigvals(transfer_matrix(prob, n).matrix)
        got = np.array(transfer_generator_phase(prob, n))
        assert np.allclose(np.sort(np.angle(ev)), np.sort(np.angle(got)), atol=1e-12) or np.allclose(
            np.sort(np.abs(np.angle(ev))), np.sort(np.abs(np.angle(got))), atol=1e-12
        )

    def test_same_spectrum_as_stepper(self):
        prob = PathProblem(6, 0, 0.35)
        for n in range(-6, 7):
            _, theta = mode_angles(6)
            a, _ = transfer_generator_phase(prob, n)
            assert abs(-cmath.phase(a) - step_eigenphase(theta[n + 6], 0.35)) < 1e-12
