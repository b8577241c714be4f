import cmath
import math

import numpy as np
import pytest

from wavefock.corpus import random_biorthogonal_bank
from wavefock.errors import BadNormalizationError, NotReconstructiveError
from wavefock.filterbank import apply_S
from wavefock.laurent import LaurentPoly
from wavefock.subdivision import (
    SignalWindow,
    decimate_adjoint,
    dense_slanted_matrix,
    fourier_product,
    pyramid,
    pyramid_reconstruct,
    subdivide,
)

SQRT2 = math.sqrt(2.0)
HAAR_C = LaurentPoly({0: 1 / SQRT2, 1: 1 / SQRT2})


def haar_transform_oracle(t):
    # independent closed form: unit-interval indicator has FT e^{-it/2} sin(t/2)/(t/2)
    if t == 0.0:
        return 1.0 + 0j
    return cmath.exp(-1j * t / 2) * math.sin(t / 2) / (t / 2)


def random_signal(rng, span=8, terms=6):
    idx = rng.choice(np.arange(-span, span + 1), size=terms, replace=False)
    lo = int(idx.min())
    out = np.zeros(int(idx.max()) - lo + 1, dtype=complex)
    for k in idx:
        out[int(k) - lo] = complex(*rng.standard_normal(2))
    return SignalWindow(lo, out)


def random_filter(rng, span=4, terms=4):
    exps = rng.choice(np.arange(-span, span + 1), size=terms, replace=False)
    return LaurentPoly({int(k): complex(*rng.standard_normal(2)) for k in exps})


def pairing(x, y):
    lo = min(x.offset, y.offset) if not (x.is_zero or y.is_zero) else 0
    hi = max(x.last, y.last) if not (x.is_zero or y.is_zero) else -1
    return sum(x.value(i).conjugate() * y.value(i) for i in range(lo, hi + 1))


class TestSignalWindow:
    def test_trimming_and_zero(self):
        x = SignalWindow(3, [0, 0, 1.0, 2.0, 0])
        assert x.offset == 5
        assert len(x.samples) == 2
        assert SignalWindow(7, [0, 0]).is_zero

    def test_poly_round_trip(self, rng):
        for _ in range(20):
            x = random_signal(rng)
            assert SignalWindow.from_poly(x.to_poly()).isclose(x, 0.0)

    def test_json_round_trip(self):
        x = SignalWindow(-2, [1 + 2j, 0.5, -1j])
        y = SignalWindow.from_json(x.to_json())
        assert y.isclose(x, 0.0)

    def test_csv_round_trip(self):
        x = SignalWindow(-1, [0.25, -1.5 + 0.5j, 3.0])
        y = SignalWindow.from_csv(x.to_csv())
        assert y.isclose(x, 0.0)

    @pytest.mark.parametrize(
        "bad", [{"re": [1.0]}, {"offset": 0, "re": [1.0], "im": []}]
    )
    def test_json_malformed(self, bad):
        with pytest.raises(ValueError):
            SignalWindow.from_json(bad)

    def test_csv_malformed(self):
        with pytest.raises(ValueError):
            SignalWindow.from_csv("0,1.0\n")


class TestSubdivide:
    def test_haar_unit_sample(self):
        y = subdivide(HAAR_C, SignalWindow.unit(0), 2)
        assert y.offset == 0
        assert np.allclose(y.samples, [1 / SQRT2, 1 / SQRT2])

    def test_zero_signal(self):
        assert subdivide(HAAR_C, SignalWindow.zero(), 2).is_zero

    def test_fourier_consistency(self, rng):
        # sequence-side subdivide matches polynomial-side apply_S exactly
        for _ in range(100):
            N = int(rng.integers(2, 5))
            c = random_filter(rng)
            x = random_signal(rng)
            seq = subdivide(c, x, N).to_poly()
            pol = apply_S(c, x.to_poly(), N)
            assert seq.isclose(pol, 1e-12)

    def test_window_growth(self, rng):
        c = LaurentPoly({-1: 1.0, 2: 1.0})
        x = SignalWindow(3, [1.0, 0.0, 2.0])
        y = subdivide(c, x, 2)
        assert y.offset >= 2 * 3 + (-1)
        assert y.last <= 2 * 5 + 2


class TestDecimateAdjoint:
    def test_haar_unit_sample(self):
        y = decimate_adjoint(HAAR_C, SignalWindow.unit(0), 2)
        assert y.offset == 0
        assert np.allclose(y.samples, [1 / SQRT2])

    def test_adjointness(self, rng):
        for _ in range(100):
            N = int(rng.integers(2, 4))
            c = random_filter(rng)
            x = random_signal(rng)
            y = random_signal(rng)
            lhs = pairing(decimate_adjoint(c, x, N), y)
            rhs = pairing(x, subdivide(c, y, N))
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))

    def test_haar_isometry(self, rng):
        for _ in range(20):
            x = random_signal(rng)
            y = decimate_adjoint(HAAR_C, subdivide(HAAR_C, x, 2), 2)
            assert y.isclose(x, 1e-12)


class TestSlantedMatrix:
    def test_haar_window(self):
        m = dense_slanted_matrix(HAAR_C, 2, (0, 3))
        s = 1 / SQRT2
        expect = np.array(
            [
                [s, 0, 0, 0],
                [s, 0, 0, 0],
                [0, s, 0, 0],
                [0, s, 0, 0],
            ]
        )
        assert np.allclose(m, expect)

    def test_delta_filter(self):
        m = dense_slanted_matrix(LaurentPoly.monomial(0), 3, (0, 6), (0, 2))
        for i in range(7):
            for j in range(3):
                assert m[i, j] == (1.0 if i == 3 * j else 0.0)

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            dense_slanted_matrix(HAAR_C, 2, (3, 1))

    def test_matvec_matches_subdivide(self, rng):
        for _ in range(50):
            N = int(rng.integers(2, 4))
            c = random_filter(rng)
            x = random_signal(rng, span=5, terms=4)
            if x.is_zero or c.is_zero:
                continue
            rows = (N * x.offset + c.min_exp, N * x.last + c.max_exp)
            cols = (x.offset, x.last)
            m = dense_slanted_matrix(c, N, rows, cols)
            vec = np.array([x.value(j) for j in range(cols[0], cols[1] + 1)])
            y = subdivide(c, x, N)
            got = m @ vec
            want = np.array([y.value(i) for i in range(rows[0], rows[1] + 1)])
            assert np.allclose(got, want, atol=1e-12)


class TestPyramid:
    def test_haar_depth2_exact(self, haar):
        x = SignalWindow(0, [1.0, 2.0, 3.0, 4.0])
        pyr = pyramid(haar, x, 2)
        assert pyr.depth == 2
        y = pyramid_reconstruct(haar, pyr)
        assert y.isclose(x, 1e-12)

    def test_zero_signal(self, haar):
        pyr = pyramid(haar, SignalWindow.zero(), 3)
        assert pyr.approx.is_zero
        assert all(d.is_zero for level in pyr.details for d in level)

    def test_biorthogonal_depth3(self, rng):
        bank = random_biorthogonal_bank(2, rng)
        for _ in range(5):
            x = random_signal(rng, span=10, terms=8)
            pyr = pyramid(bank, x, 3)
            y = pyramid_reconstruct(bank, pyr)
            assert (y - x).norm() < 1e-10 * max(1.0, x.norm())

    def test_depth5_haar(self, haar, rng):
        x = random_signal(rng, span=16, terms=12)
        y = pyramid_reconstruct(haar, pyramid(haar, x, 5))
        assert (y - x).norm() < 1e-10

    def test_not_reconstructive(self, stretched):
        with pytest.raises(NotReconstructiveError):
            pyramid(stretched, SignalWindow.unit(0), 1)

    def test_band_count(self, stretched_dual):
        x = SignalWindow(0, np.arange(1.0, 9.0))
        pyr = pyramid(stretched_dual, x, 2)
        assert len(pyr.details) == 2
        assert all(len(level) == 3 for level in pyr.details)
        y = pyramid_reconstruct(stretched_dual, pyr)
        assert y.isclose(x, 1e-11)


class TestFourierProduct:
    def test_haar_at_zero(self):
        assert fourier_product(HAAR_C, 2, 0.0, J=10) == pytest.approx(1.0)

    def test_haar_at_pi(self):
        val = fourier_product(HAAR_C, 2, math.pi, J=40)
        assert abs(abs(val) - 2.0 / math.pi) < 1e-8

    def test_haar_closed_form_sweep(self):
        for k in range(1, 61):
            t = 0.1 * k
            val = fourier_product(HAAR_C, 2, t, J=40)
            assert abs(val - haar_transform_oracle(t)) < 1e-7

    def test_stretched_converges(self):
        m0 = LaurentPoly({0: 1.0, 2: 1.0})  # m0(1) = 2 = sqrt(4)
        a = fourier_product(m0, 4, 2 * math.pi, J=30)
        b = fourier_product(m0, 4, 2 * math.pi, J=60)
        assert np.isfinite(a.real) and np.isfinite(a.imag)
        assert abs(a - b) < 1e-10

    def test_bad_normalisation(self):
        with pytest.raises(BadNormalizationError):
            fourier_product(HAAR_C, 4, 1.0, J=10)

    def test_auto_depth(self):
        val = fourier_product(HAAR_C, 2, 0.5)
        assert abs(val - haar_transform_oracle(0.5)) < 1e-9
