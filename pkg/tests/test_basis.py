import math

import numpy as np
import pytest

from bernsing.basis import (
    basis_row,
    basis_value,
    bernstein_apply,
    central_moment_sum,
    inverse_moment_sum,
)
from bernsing.harness.checks import sequence_verdict

from oracles import naive_basis, naive_row


class TestBasisValue:
    def test_frozen_examples(self):
        # 2 * 0.5 * 0.5 by direct arithmetic
        assert basis_value(2, 1, 0.5) == pytest.approx(0.5, rel=1e-14)
        assert basis_value(2, 1, 0.5) == pytest.approx(naive_basis(2, 1, 0.5), rel=1e-14)

    def test_endpoint_convention(self):
        assert basis_value(7, 0, 0.0) == 1.0
        assert basis_value(7, 3, 0.0) == 0.0
        assert basis_value(7, 7, 1.0) == 1.0
        assert basis_value(7, 2, 1.0) == 0.0

    def test_partition_small(self):
        total = sum(basis_value(5, k, 0.3) for k in range(6))
        assert total == pytest.approx(1.0, abs=1e-14)

    def test_matches_naive_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 60))
            k = int(rng.integers(0, n + 1))
            x = float(rng.uniform(0.01, 0.99))
            assert basis_value(n, k, x) == pytest.approx(naive_basis(n, k, x), rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            basis_value(4, 5, 0.5)
        with pytest.raises(ValueError):
            basis_value(4, 2, 1.5)
        with pytest.raises(ValueError):
            basis_value(4, 2, -0.1)


class TestBasisRow:
    def test_frozen_examples(self):
        np.testing.assert_allclose(basis_row(1, 0.25).weights, [0.75, 0.25], rtol=1e-14)
        np.testing.assert_allclose(basis_row(3, 0.0).weights, [1, 0, 0, 0], atol=0)
        np.testing.assert_allclose(
            basis_row(4, 0.5).weights, np.array([1, 4, 6, 4, 1]) / 16.0, rtol=1e-14
        )

    def test_row_matches_basis_value(self, rng):
        for n in (7, 64, 511):
            x = float(rng.uniform(0.05, 0.95))
            row = basis_row(n, x).weights
            ks = rng.integers(0, n + 1, size=12)
            for k in ks:
                v = basis_value(n, int(k), x)
                assert abs(row[k] - v) <= 1e-14 * max(v, 1e-300)

    def test_partition_of_unity_sweep(self):
        xs = np.linspace(0.0, 1.0, 1001)
        for n in (16, 64, 256):
            err = max(abs(basis_row(n, float(x)).weights.sum() - 1.0) for x in xs)
            assert err <= 1e-12
        xs = np.linspace(0.0, 1.0, 101)
        for n in (1024, 4096):
            err = max(abs(basis_row(n, float(x)).weights.sum() - 1.0) for x in xs)
            assert err <= 1e-12

    def test_zero_pattern(self):
        # interior weights are strictly positive while float64 can
        # represent them (underflow sets in past n ~ 1024 at x = 1/2)
        for n in (16, 256, 1024):
            w = basis_row(n, 0.5).weights
            assert (w > 0.0).all()
        w = basis_row(9, 0.0).weights
        assert w[0] == 1.0 and (w[1:] == 0.0).all()
        w = basis_row(9, 1.0).weights
        assert w[-1] == 1.0 and (w[:-1] == 0.0).all()

    def test_symmetry(self, rng):
        # rounding of the reflected argument 1-x is amplified by the
        # log-derivative ~ n/x, so the 1e-13 comparison is made where it
        # is well-conditioned and relaxed (with a deep-tail cutoff) beyond
        for _ in range(20):
            n = int(rng.integers(2, 129))
            x = float(rng.uniform(0.2, 0.8))
            a = basis_row(n, x).weights
            b = basis_row(n, 1.0 - x).weights[::-1]
            np.testing.assert_allclose(a, b, rtol=1e-13)
        for _ in range(20):
            n = int(rng.integers(2, 300))
            x = float(rng.uniform(0.01, 0.99))
            a = basis_row(n, x).weights
            b = basis_row(n, 1.0 - x).weights[::-1]
            live = b > 1e-150
            np.testing.assert_allclose(a[live], b[live], rtol=1e-11)
            np.testing.assert_allclose(a[~live], b[~live], atol=1e-150)

    def test_non_negative(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 2000))
            x = float(rng.uniform(0, 1))
            assert (basis_row(n, x).weights >= 0.0).all()


class TestBernsteinApply:
    def test_preserves_linear(self):
        for n in (3, 17, 64, 1024):
            samples = 3.0 * np.arange(n + 1) / n - 1.0
            assert bernstein_apply(samples, 0.37) == pytest.approx(0.11, abs=1e-12)

    def test_quadratic_frozen(self):
        # brute force: sum (k/4)^2 p_{4,k}(1/2) = 5/16
        samples = (np.arange(5) / 4.0) ** 2
        brute = sum((k / 4.0) ** 2 * naive_basis(4, k, 0.5) for k in range(5))
        assert brute == pytest.approx(0.3125, abs=1e-15)
        assert bernstein_apply(samples, 0.5) == pytest.approx(0.3125, rel=1e-13)

    def test_constant(self, rng):
        samples = np.ones(33)
        for x in rng.uniform(0, 1, 20):
            assert bernstein_apply(samples, float(x)) == pytest.approx(1.0, abs=1e-13)

    def test_vector_matches_scalar(self, rng):
        # matrix-vector and dot accumulation may differ by an ulp
        samples = rng.standard_normal(65)
        xs = np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 40)])
        vec = bernstein_apply(samples, xs)
        scal = np.array([bernstein_apply(samples, float(x)) for x in xs])
        np.testing.assert_allclose(vec, scal, rtol=5e-15, atol=5e-15)

    def test_errors(self):
        with pytest.raises(ValueError):
            bernstein_apply([], 0.5)
        with pytest.raises(ValueError):
            bernstein_apply([1.0, 2.0], 1.5)


class TestCentralMomentSum:
    def test_frozen_examples(self):
        brute = sum((k - 2.0) ** 2 * naive_basis(4, k, 0.5) for k in range(5))
        assert brute == pytest.approx(1.0, abs=1e-15)
        assert central_moment_sum(4, 2.0, 0.5) == pytest.approx(1.0, rel=1e-13)
        assert central_moment_sum(17, 0.0, 0.31) == pytest.approx(1.0, abs=1e-13)
        # binomial variance identity n x (1-x), cross-checked brute force
        brute = sum((k - 30.0) ** 2 * naive_basis(100, k, 0.3) for k in range(101))
        assert brute == pytest.approx(21.0, rel=1e-12)
        assert central_moment_sum(100, 2.0, 0.3) == pytest.approx(21.0, rel=1e-12)

    def test_moment_bound_sweep(self, rng):
        # ratio to n^(g/2) varphi^g stays bounded with no growth trend
        xs = np.linspace(0.1, 0.9, 17)
        for g in (1.0, 2.0, 3.0):
            seq = []
            for n in (16, 64, 256, 1024, 4096):
                seq.append(
                    max(
                        central_moment_sum(n, g, float(x))
                        / (n ** (g / 2.0) * (x * (1.0 - x)) ** (g / 2.0))
                        for x in xs
                    )
                )
            ok, note = sequence_verdict(seq)
            assert ok, f"gamma={g}: {note}"

    def test_domain_error(self):
        with pytest.raises(ValueError):
            central_moment_sum(8, -1.0, 0.0)


class TestInverseMomentSum:
    def test_frozen_examples(self):
        # 1 - p_{10,0}(1/2) - p_{10,10}(1/2) = 1 - 2/1024
        expected = 1.0 - 2.0 / 1024.0
        brute = sum(naive_basis(10, k, 0.5) for k in range(1, 10))
        assert brute == pytest.approx(expected, abs=1e-15)
        assert inverse_moment_sum(10, 0.0, 0.0, 0.5) == pytest.approx(expected, rel=1e-13)
        # sum_{k=1}^{3} (4/k) p_{4,k}(1/2) = 25/12
        brute = sum((4.0 / k) * naive_basis(4, k, 0.5) for k in range(1, 4))
        assert brute == pytest.approx(25.0 / 12.0, abs=1e-15)
        assert inverse_moment_sum(4, 1.0, 0.0, 0.5) == pytest.approx(25.0 / 12.0, rel=1e-13)

    def test_bounded_constant_sweep(self):
        xs = np.linspace(0.1, 0.9, 17)
        for u, v in ((0.5, 0.0), (1.0, 0.0), (1.0, 1.0)):
            seq = []
            for n in (16, 64, 256, 1024, 4096):
                seq.append(
                    max(
                        inverse_moment_sum(n, u, v, float(x))
                        / (x**-u * (1.0 - x) ** -v)
                        for x in xs
                    )
                )
            ok, note = sequence_verdict(seq)
            assert ok, f"(u,v)=({u},{v}): {note}"

    def test_domain_errors(self):
        for bad_x in (0.0, 1.0):
            with pytest.raises(ValueError):
                inverse_moment_sum(8, 1.0, 1.0, bad_x)
        with pytest.raises(ValueError):
            inverse_moment_sum(1, 0.0, 0.0, 0.5)
