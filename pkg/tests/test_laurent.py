import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavefock.laurent import (
    LaurentPoly,
    TorusPoint,
    adjoint_poly,
    decimate,
    poly_from_json,
    poly_to_json,
    torus_grid,
    upsample,
)

SQRT2 = math.sqrt(2.0)


def horner_eval(p, z):
    """Independent dense Horner evaluation, used as oracle for eval()."""
    if p.is_zero:
        return 0j
    lo, hi = p.min_exp, p.max_exp
    dense = [p.coeff(k) for k in range(lo, hi + 1)]
    acc = 0j
    for c in reversed(dense):
        acc = acc * z + c
    return acc * z**lo


coeff_st = st.complex_numbers(
    min_magnitude=0.0, max_magnitude=10.0, allow_nan=False, allow_infinity=False
)
poly_st = st.dictionaries(st.integers(-12, 12), coeff_st, max_size=9).map(LaurentPoly)


class TestTorusPoint:
    def test_angle_normalised(self):
        assert TorusPoint(2 * math.pi + 0.5).angle == pytest.approx(0.5)
        assert TorusPoint(-0.5).angle == pytest.approx(2 * math.pi - 0.5)

    def test_value_on_circle(self):
        for t in torus_grid(17):
            assert abs(abs(t.value) - 1.0) < 1e-15

    def test_principal_root(self):
        z = TorusPoint(math.pi)
        r = z.root(2)
        assert r.angle == pytest.approx(math.pi / 2)
        assert r.power(2).value == pytest.approx(z.value)

    def test_root_branches_cover_fiber(self):
        z = TorusPoint(1.0)
        roots = [z.root(3, b).value for b in range(3)]
        for w in roots:
            assert w**3 == pytest.approx(z.value)
        assert len({round(w.real, 9) for w in roots}) == 3


class TestEval:
    def test_direct_substitution(self):
        p = LaurentPoly({0: 1, 2: 1})
        assert p.eval(TorusPoint(math.pi / 2)) == pytest.approx(0.0)

    def test_lowpass_normalisation_at_one(self):
        p = LaurentPoly({0: 1 / SQRT2, 1: 1 / SQRT2})
        assert p.eval(TorusPoint(0.0)) == pytest.approx(SQRT2)

    def test_matches_horner_oracle(self):
        p = LaurentPoly({0: 1, 2: 1})
        z = TorusPoint(math.pi / 3)
        assert abs(p.eval(z) - horner_eval(p, z.value)) < 1e-14
        for t in torus_grid(128):
            assert abs(p.eval(t) - horner_eval(p, t.value)) < 1e-14

    @given(poly_st)
    @settings(max_examples=50, deadline=None)
    def test_horner_oracle_random(self, p):
        for t in torus_grid(8):
            n = max(len(p.support), 1)
            assert abs(p.eval(t) - horner_eval(p, t.value)) < 1e-10 * n

    def test_eval_grid_matches_pointwise(self):
        p = LaurentPoly({-2: 1j, 0: 0.5, 3: -1.0})
        vals = p.eval_grid(16)
        for i, t in enumerate(torus_grid(16)):
            assert vals[i] == pytest.approx(p.eval(t))


class TestAdjoint:
    def test_monomial(self):
        assert adjoint_poly(LaurentPoly({1: 1})) == LaurentPoly({-1: 1})

    def test_single_term_with_phase(self):
        assert adjoint_poly(LaurentPoly({3: 2 + 1j})) == LaurentPoly({-3: 2 - 1j})

    def test_haar_lowpass(self):
        p = LaurentPoly({0: 1 / SQRT2, 1: 1 / SQRT2})
        q = adjoint_poly(p)
        # oracle: pointwise conjugation on 64 torus samples
        for t in torus_grid(64):
            assert abs(q.eval(t) - p.eval(t).conjugate()) < 1e-14
        assert q == LaurentPoly({0: 1 / SQRT2, -1: 1 / SQRT2})

    @given(poly_st)
    @settings(max_examples=50, deadline=None)
    def test_involution_and_conjugation(self, p):
        q = adjoint_poly(p)
        assert adjoint_poly(q) == p
        for t in torus_grid(8):
            n = max(len(p.support), 1)
            assert abs(q.eval(t) - p.eval(t).conjugate()) < 1e-9 * n


class TestDecimate:
    def test_mode_divisible(self):
        assert decimate(LaurentPoly({6: 1}), 2) == LaurentPoly({3: 1})

    def test_mode_not_divisible(self):
        assert decimate(LaurentPoly({5: 1}), 2).is_zero

    def test_stretched_haar_magnitude_sum(self):
        # |1 + z^2|^2 = 2 + z^2 + z^-2; its 4-fold decimation is the constant 2
        p = LaurentPoly({0: 2, 2: 1, -2: 1})
        assert decimate(p, 4) == LaurentPoly({0: 2})

    @given(poly_st, st.integers(2, 5))
    @settings(max_examples=60, deadline=None)
    def test_fiber_average(self, p, N):
        # decimate(p, N)(z) = (1/N) sum of p over the N-th roots of z
        for t in torus_grid(6):
            avg = sum(p.eval(t.root(N, b)) for b in range(N)) / N
            n = max(len(p.support), 1)
            assert abs(decimate(p, N).eval(t) - avg) < 1e-10 * n


class TestUpsample:
    def test_monomial(self):
        assert upsample(LaurentPoly({3: 1}), 2) == LaurentPoly({6: 1})

    def test_binomial(self):
        assert upsample(LaurentPoly({0: 1, 1: 1}), 4) == LaurentPoly({0: 1, 4: 1})

    def test_round_trip_seeded(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            exps = rng.choice(np.arange(-10, 11), size=9, replace=False)
            p = LaurentPoly({int(k): complex(*rng.standard_normal(2)) for k in exps})
            assert decimate(upsample(p, 3), 3) == p

    @given(poly_st, st.integers(2, 5))
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, p, N):
        assert decimate(upsample(p, N), N) == p

    @given(poly_st, st.integers(2, 4))
    @settings(max_examples=30, deadline=None)
    def test_substitution(self, p, N):
        q = upsample(p, N)
        for t in torus_grid(5):
            n = max(len(p.support), 1)
            assert abs(q.eval(t) - p.eval(t.power(N))) < 1e-9 * n


class TestArithmetic:
    @given(poly_st, poly_st)
    @settings(max_examples=50, deadline=None)
    def test_product_rule(self, p, q):
        r = p * q
        bound = 1e-9 * max(len(p.support) * len(q.support), 1)
        for t in torus_grid(8):
            assert abs(r.eval(t) - p.eval(t) * q.eval(t)) < bound

    def test_product_rule_64_points(self):
        p = LaurentPoly({-1: 0.5j, 0: 1, 2: -0.25})
        q = LaurentPoly({0: 1 / SQRT2, 1: 1 / SQRT2})
        r = p * q
        for t in torus_grid(64):
            assert abs(r.eval(t) - p.eval(t) * q.eval(t)) < 1e-12 * 6

    def test_pruning(self):
        p = LaurentPoly({0: 1.0, 5: 1e-20})
        assert p.support == [0]
        q = LaurentPoly({0: 1.0}) - LaurentPoly({0: 1.0 - 1e-16})
        assert q.is_zero

    def test_scalar_and_shift(self):
        p = LaurentPoly({0: 1, 1: 2})
        assert 2 * p == LaurentPoly({0: 2, 1: 4})
        assert p.shift(-3) == LaurentPoly({-3: 1, -2: 2})


class TestJson:
    def test_round_trip(self):
        p = LaurentPoly({-2: 1j, 0: 0.5, 7: -3.0})
        obj = poly_to_json(p)
        assert obj == [[-2, 0.0, 1.0], [0, 0.5, 0.0], [7, -3.0, 0.0]]
        assert poly_from_json(json.loads(json.dumps(obj))) == p

    @given(poly_st)
    @settings(max_examples=30, deadline=None)
    def test_round_trip_random(self, p):
        assert poly_from_json(poly_to_json(p)) == p

    @pytest.mark.parametrize(
        "bad",
        [
            {"0": 1.0},
            [[0, 1.0]],
            [[0.5, 1.0, 0.0]],
            [[1, 0.0, 0.0], [0, 1.0, 0.0]],
            [[0, 1.0, 0.0], [0, 2.0, 0.0]],
        ],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            poly_from_json(bad)
