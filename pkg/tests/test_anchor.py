"""Anchor subspace extraction, pull-back depths, and double cyclicity."""

import math

import numpy as np
import pytest

from wavefock.anchor import (
    AnchorSubspace,
    CyclicityReport,
    adjoint_on_mode,
    adjoint_on_mode_poly,
    compute_anchor,
    cyclicity_check,
    pullback_depth,
)
from wavefock.corpus import (
    haar_bank,
    random_biorthogonal_bank,
    random_causal_pair,
    random_orthogonal_bank,
    stretched_haar_bank,
)
from wavefock.errors import DepthExceededError, EmptyAnchorError
from wavefock.filterbank import FilterBank, apply_S_adjoint
from wavefock.laurent import LaurentPoly

SQRT2 = math.sqrt(2.0)


def pair_bank(seed):
    return random_causal_pair(2, np.random.default_rng(seed))


# ----------------------------------------------------------------------
# single-mode adjoints


def test_adjoint_on_mode_matches_direct_haar(haar):
    for i in range(2):
        for n in range(-8, 9):
            via_loop = adjoint_on_mode(haar, i, n)
            direct = apply_S_adjoint(haar.filters[i], LaurentPoly.monomial(n), 2)
            assert via_loop.isclose(direct, tol=0.0)


@pytest.mark.parametrize("seed", range(8))
def test_adjoint_on_mode_matches_direct_random(seed):
    bank = random_biorthogonal_bank(2, np.random.default_rng(seed))
    span = 4 * bank.N * bank.genus
    for dual in (False, True):
        filters = bank.duals_or_primaries if dual else bank.filters
        for i in range(bank.N):
            for n in range(-span, span + 1):
                via_loop = adjoint_on_mode(bank, i, n, dual=dual)
                direct = apply_S_adjoint(filters[i], LaurentPoly.monomial(n), bank.N)
                assert via_loop.isclose(direct, tol=1e-13)


def test_adjoint_on_mode_haar_frozen(haar):
    # S_i^* e_0 = e_0 / sqrt(2) for both filters
    for i in range(2):
        img = adjoint_on_mode(haar, i, 0)
        assert img.isclose(LaurentPoly.monomial(0, 1 / SQRT2), tol=1e-15)
    # e_{-1} picks up the sign of the highpass coefficient
    assert adjoint_on_mode(haar, 0, -1).isclose(
        LaurentPoly.monomial(-1, 1 / SQRT2), tol=1e-15
    )
    assert adjoint_on_mode(haar, 1, -1).isclose(
        LaurentPoly.monomial(-1, -1 / SQRT2), tol=1e-15
    )


def test_adjoint_on_mode_index_error(haar):
    with pytest.raises(ValueError):
        adjoint_on_mode(haar, 2, 0)


def test_adjoint_on_mode_poly_linear(haar, rng):
    p = LaurentPoly({k: complex(*rng.normal(size=2)) for k in range(-5, 6)})
    q = LaurentPoly({k: complex(*rng.normal(size=2)) for k in range(-3, 8)})
    for i in range(2):
        lhs = adjoint_on_mode_poly(haar, i, p + 2j * q)
        rhs = adjoint_on_mode_poly(haar, i, p) + 2j * adjoint_on_mode_poly(haar, i, q)
        assert lhs.isclose(rhs, tol=1e-12)
        direct = apply_S_adjoint(haar.filters[i], p + 2j * q, 2)
        assert lhs.isclose(direct, tol=1e-12)


# ----------------------------------------------------------------------
# the anchor subspace


def test_haar_anchor_is_the_window(haar):
    K = compute_anchor(haar)
    assert K.dimension == 2
    assert K.window_size == 2
    assert K.coinvariance_residual < 1e-12
    for n in (0, -1):
        assert K.contains(LaurentPoly.monomial(n))
    assert not K.contains(LaurentPoly.monomial(1))
    assert not K.contains(LaurentPoly.monomial(-2))


def test_anchor_basis_orthonormal(haar):
    K = compute_anchor(haar)
    gram = K.basis.conj().T @ K.basis
    assert np.allclose(gram, np.eye(K.dimension), atol=1e-12)


@pytest.mark.parametrize(
    "bank_fn",
    [
        haar_bank,
        lambda: stretched_haar_bank(with_duals=True),
        lambda: pair_bank(5),
        lambda: random_orthogonal_bank(3, np.random.default_rng(9)),
    ],
)
def test_anchor_invariant_under_all_adjoints(bank_fn):
    bank = bank_fn()
    K = compute_anchor(bank)
    assert 1 <= K.dimension <= bank.N * bank.genus
    for p in K.basis_polys():
        for dual in (False, True):
            for i in range(bank.N):
                img = adjoint_on_mode_poly(bank, i, p, dual=dual)
                assert K.leak(img) < 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_anchor_dimension_bounded(seed):
    bank = pair_bank(seed)
    K = compute_anchor(bank)
    assert 1 <= K.dimension <= bank.N * bank.genus


def test_anchor_empty_raises():
    # both polyphase rows are injective on the window and jointly force
    # every candidate vector out of it
    bank = FilterBank(
        2,
        [
            LaurentPoly({-2: 1.0, -3: 1.0}),
            LaurentPoly({-2: 1.0, -3: -1.0}),
        ],
    )
    with pytest.raises(EmptyAnchorError):
        compute_anchor(bank, check=False)


def test_anchor_report_json(haar):
    K = compute_anchor(haar)
    doc = K.to_json()
    assert doc["N"] == 2
    assert doc["dimension"] == 2
    assert doc["window_modes"] == [0, -1]
    assert len(doc["basis"]) == 2
    assert all(len(vec) == 2 for vec in doc["basis"])


# ----------------------------------------------------------------------
# pull-back depth


@pytest.mark.parametrize(
    "n, expected",
    [(0, 0), (-1, 0), (1, 1), (-2, 1), (2, 2), (-3, 2), (4, 3), (8, 4), (-8, 3)],
)
def test_haar_pullback_depth_frozen(haar, n, expected):
    assert pullback_depth(haar, n) == expected


def test_haar_pullback_depth_nondecreasing(haar):
    K = compute_anchor(haar)
    depths = [pullback_depth(haar, n, K) for n in range(33)]
    assert all(b >= a for a, b in zip(depths, depths[1:]))
    assert depths[0] == 0
    assert all(d <= 64 for d in depths)


def test_pullback_depth_cap(haar):
    assert pullback_depth(haar, 0, cap=0) == 0
    with pytest.raises(DepthExceededError):
        pullback_depth(haar, 4, cap=2)


@pytest.mark.parametrize("seed", [1, 3])
def test_random_pair_depths_finite(seed):
    bank = pair_bank(seed)
    K = compute_anchor(bank)
    for n in range(-6, 7):
        assert pullback_depth(bank, n, K) <= 64


# ----------------------------------------------------------------------
# cyclicity


def test_haar_cyclicity(haar):
    report = cyclicity_check(haar, n_range=8)
    assert isinstance(report, CyclicityReport)
    assert report.reconstruction_residual < 1e-10
    assert report.membership_residual < 1e-10
    assert report.depths[0] == 0
    assert report.depths[4] == 3


def test_stretched_cyclicity():
    bank = stretched_haar_bank(with_duals=True)
    report = cyclicity_check(bank, n_range=4)
    assert report.reconstruction_residual < 1e-10
    assert report.membership_residual < 1e-10


@pytest.mark.parametrize("seed", [0, 2])
def test_random_pair_cyclicity(seed):
    bank = pair_bank(seed)
    report = cyclicity_check(bank, n_range=6)
    assert report.reconstruction_residual < 1e-9
    assert report.membership_residual < 1e-9


def test_cyclicity_report_json(haar):
    doc = cyclicity_check(haar, n_range=2).to_json()
    assert set(doc) == {
        "n_range",
        "reconstruction_residual",
        "membership_residual",
        "depths",
    }
    assert doc["depths"]["0"] == 0
