import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qaspectral.annulus import AnnulusParams
from qaspectral.errors import DomainError, InputError
from qaspectral.harness import gen_laurent, substream
from qaspectral.laurent import (
    BoundarySpec,
    LaurentPoly,
    all_sign_patterns,
    cauchy_check,
    coefficients_from_samples,
    decompose_2n,
    eval_operators,
    eval_point,
    sign_pattern_bound,
    bivariate_part_bounds,
    recompose,
    reconstruction_residual,
    sample_grid,
    split_univariate,
    sup_norm,
    verify_decomposition_estimates,
)
from qaspectral.operators import make_tuple

R2 = AnnulusParams(2.0)
SPEC2 = BoundarySpec("polyannulus_distinguished", 2.0)


def random_annulus_point(rng, n, r):
    rad = np.exp(rng.uniform(-np.log(r), np.log(r), size=n))
    ang = rng.uniform(0, 2 * np.pi, size=n)
    return rad * np.exp(1j * ang)


class TestLaurentPoly:
    def test_drops_zero_coefficients(self):
        g = LaurentPoly(1, {(0,): 0.0, (1,): 2.0})
        assert g.coeffs == {(1,): 2.0}

    def test_max_abs_degree(self):
        g = LaurentPoly(2, {(3, -2): 1.0, (0, 1): 1.0})
        assert g.max_abs_degree == 5

    def test_rejects_mismatched_exponent_length(self):
        with pytest.raises(InputError):
            LaurentPoly(2, {(1,): 1.0})

    def test_json_round_trip(self):
        g = LaurentPoly(2, {(1, -1): 1 + 2j, (0, 3): -0.5})
        assert LaurentPoly.from_json_dict(g.as_json_dict()) == g


class TestEvalPoint:
    def test_univariate(self):
        g = LaurentPoly(1, {(1,): 1.0, (-1,): 1.0})
        assert eval_point(g, [2.0]) == pytest.approx(2.5)

    def test_bivariate(self):
        g = LaurentPoly(2, {(1, 1): 1.0, (-1, -1): 1.0})
        assert eval_point(g, [2.0, 2.0]) == pytest.approx(4.25)

    def test_constant(self):
        g = LaurentPoly(3, {(0, 0, 0): 1.0})
        assert eval_point(g, [5.0, 1j, -2.0]) == pytest.approx(1.0)

    def test_rejects_zero_coordinate(self):
        g = LaurentPoly(1, {(-1,): 1.0})
        with pytest.raises(DomainError):
            eval_point(g, [0.0])


class TestEvalOperators:
    def test_diagonal_matches_pointwise(self):
        g = LaurentPoly(1, {(1,): 1.0, (-1,): 1.0})
        T = make_tuple([np.diag([2.0, 0.5])])
        np.testing.assert_allclose(eval_operators(g, T), np.diag([2.5, 2.5]))

    def test_product_monomial(self):
        g = LaurentPoly(2, {(1, 1): 1.0})
        T = make_tuple([np.diag([2.0, 1.0]), np.eye(2)])
        np.testing.assert_allclose(eval_operators(g, T), np.diag([2.0, 1.0]))

    def test_identity_calculus(self):
        g = LaurentPoly(1, {(1,): 1.0})
        rng = substream(6, 0)
        M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 3 * np.eye(3)
        np.testing.assert_allclose(eval_operators(g, make_tuple([M])), M)

    def test_diagonal_tuple_matches_eval_point(self):
        rng = substream(6, 1)
        g = gen_laurent(2, 4, rng)
        d1 = random_annulus_point(rng, 2, 2.0)
        d2 = random_annulus_point(rng, 2, 2.0)
        T = make_tuple([np.diag(d1), np.diag(d2)])
        G = eval_operators(g, T)
        for i in range(2):
            assert G[i, i] == pytest.approx(eval_point(g, [d1[i], d2[i]]), abs=1e-10)


class TestSupNorm:
    def test_univariate_example(self):
        g = LaurentPoly(1, {(1,): 1.0, (-1,): 1.0})
        res = sup_norm(g, SPEC2)
        assert res.value == pytest.approx(2.5, abs=1e-9)
        assert abs(res.arg_point[0] - 2.0) < 1e-6

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_gm_closed_form(self, m):
        c = 2.0 ** -m
        g = LaurentPoly(1, {(m,): c, (-m,): c})
        res = sup_norm(g, SPEC2)
        assert res.value == pytest.approx(1 + 2.0 ** (-2 * m), abs=1e-9)

    def test_constant_has_zero_error(self):
        g = LaurentPoly(1, {(0,): 7.0})
        res = sup_norm(g, SPEC2)
        assert res.value == 7.0
        assert res.certified_error == 0.0

    def test_zero_polynomial(self):
        res = sup_norm(LaurentPoly(1, {}), SPEC2)
        assert res.value == 0.0 and res.certified_error == 0.0

    def test_nested_grid_monotonicity(self):
        # doubling nests the grids; only roundoff at machine scale may
        # move the located maximum
        for k in range(5):
            g = gen_laurent(2, 6, substream(8, k))
            lo = sup_norm(g, BoundarySpec("polyannulus_distinguished", 2.0, 256), refine=False)
            hi = sup_norm(g, BoundarySpec("polyannulus_distinguished", 2.0, 512), refine=False)
            assert hi.value >= lo.value - 1e-12 * max(1.0, lo.value)

    def test_certified_upper_bound_against_dense_oracle(self):
        # value + certified error must dominate a 10x denser raw scan
        for k in range(5):
            g = gen_laurent(1, 6, substream(9, k))
            res = sup_norm(g, BoundarySpec("polyannulus_distinguished", 2.0, 256))
            dense = sup_norm(
                g, BoundarySpec("polyannulus_distinguished", 2.0, 2560), refine=False
            )
            assert res.value + res.certified_error >= dense.value
            assert res.value <= dense.value + dense.certified_error

    def test_grid_floor_enforced(self):
        g = LaurentPoly(1, {(10,): 1.0})
        with pytest.raises(InputError):
            sup_norm(g, BoundarySpec("polyannulus_distinguished", 2.0, 128))


class TestCoefficients:
    def test_two_term_recovery(self):
        g = LaurentPoly(1, {(1,): 1.0, (-1,): 1.0})
        samples = sample_grid(g, 8)
        rec = coefficients_from_samples(samples, [(-2, 2)])
        assert set(rec.coeffs) == {(1,), (-1,)}
        for c in rec.coeffs.values():
            assert c == pytest.approx(1.0, abs=1e-12)

    def test_constant(self):
        g = LaurentPoly(1, {(0,): 7.0})
        samples = sample_grid(g, 8)
        rec = coefficients_from_samples(samples, [(0, 0)])
        assert rec.coeffs[(0,)] == pytest.approx(7.0)

    def test_round_trip_random(self):
        for k in range(5):
            rng = substream(10, k)
            g = gen_laurent(2, 5, rng)
            samples = sample_grid(g, 16)
            rec = coefficients_from_samples(samples, [(-5, 5), (-5, 5)])
            assert set(rec.coeffs) == set(g.coeffs)
            for exp, c in g.coeffs.items():
                assert abs(rec.coeffs[exp] - c) <= 1e-12
            assert reconstruction_residual(samples, rec) <= 1e-10

    def test_window_wider_than_samples_is_aliasing(self):
        samples = np.ones((8,), dtype=complex)
        with pytest.raises(InputError):
            coefficients_from_samples(samples, [(-5, 5)])


class TestCauchyCheck:
    def test_consistent_pair(self):
        g = LaurentPoly(1, {(1,): 1.0, (-1,): 1.0})
        assert cauchy_check(g, R2, 2.5)

    def test_inconsistent_supnorm_is_flagged(self):
        g = LaurentPoly(1, {(1,): 1.0})
        assert not cauchy_check(g, R2, 1.0)

    def test_zero_polynomial_vacuous(self):
        assert cauchy_check(LaurentPoly(1, {}), R2, 0.0)


class TestSplitUnivariate:
    def test_bookkeeping(self):
        g = LaurentPoly(1, {(0,): 3.0, (1,): 2.0, (-2,): 5.0})
        s = split_univariate(g)
        assert s.a0 == 3.0
        assert s.g_plus.coeffs == {(0,): 2.0}
        assert s.g_minus.coeffs == {(1,): 5.0}

    def test_pure_z(self):
        s = split_univariate(LaurentPoly(1, {(1,): 1.0}))
        assert s.a0 == 0.0
        assert s.g_plus.coeffs == {(0,): 1.0}
        assert s.g_minus.is_zero

    def test_gm_split(self):
        g = LaurentPoly(1, {(2,): 0.25, (-2,): 0.25})
        s = split_univariate(g)
        assert s.a0 == 0.0
        assert s.g_plus.coeffs == {(1,): 0.25}
        assert s.g_minus.coeffs == {(1,): 0.25}

    def test_reconstruction_identity_exact(self):
        for k in range(10):
            g = gen_laurent(1, 8, substream(12, k))
            s = split_univariate(g)
            rebuilt = dict()
            if s.a0:
                rebuilt[(0,)] = s.a0
            for (e,), c in s.g_plus.coeffs.items():
                rebuilt[(e + 1,)] = rebuilt.get((e + 1,), 0) + c
            for (e,), c in s.g_minus.coeffs.items():
                rebuilt[(-e - 1,)] = rebuilt.get((-e - 1,), 0) + c
            assert LaurentPoly(1, rebuilt) == g

    def test_rejects_multivariate(self):
        with pytest.raises(InputError):
            split_univariate(LaurentPoly(2, {(1, 0): 1.0}))


class TestDecompose2n:
    def test_sign_routing(self):
        g = LaurentPoly(2, {(1, 1): 1.0, (1, -1): 1.0, (-1, -1): 1.0})
        parts = {p.label(): part for p, part in decompose_2n(g).items()}
        assert parts["++"].coeffs == {(1, 1): 1.0}
        assert parts["+-"].coeffs == {(1, 1): 1.0}
        assert parts["-+"].is_zero
        assert parts["--"].coeffs == {(1, 1): 1.0}

    def test_constant_goes_to_all_plus(self):
        g = LaurentPoly(3, {(0, 0, 0): 5.0})
        parts = {p.label(): part for p, part in decompose_2n(g).items()}
        assert parts["+++"].coeffs == {(0, 0, 0): 5.0}
        assert all(part.is_zero for label, part in parts.items() if label != "+++")

    def test_zero_exponent_routes_to_plus(self):
        g = LaurentPoly(2, {(0, -2): 1.0})
        parts = {p.label(): part for p, part in decompose_2n(g).items()}
        assert parts["+-"].coeffs == {(0, 2): 1.0}

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31), st.integers(min_value=1, max_value=3))
    def test_reconstruction_at_random_points(self, seed, n):
        rng = substream(seed, 1)
        g = gen_laurent(n, 6, rng)
        parts = decompose_2n(g)
        assert recompose(parts, n) == g
        for _ in range(5):
            z = random_annulus_point(rng, n, 2.0)
            direct = eval_point(g, z)
            total = 0j
            for pattern, part in parts.items():
                zz = np.array([zi ** s for zi, s in zip(z, pattern.signs)])
                total += eval_point(part, zz) if not part.is_zero else 0.0
            scale = max(1.0, abs(direct))
            assert abs(total - direct) <= 1e-12 * scale


class TestClosedFormBounds:
    def test_mu_estimate_values(self):
        assert sign_pattern_bound(R2, 1, 1) == pytest.approx(4 / 3)
        assert sign_pattern_bound(R2, 1, 0) == pytest.approx(7 / 3)
        assert sign_pattern_bound(R2, 2, 2) == pytest.approx(16 / 9)

    def test_mu_estimate_rejects_bad_t(self):
        with pytest.raises(InputError):
            sign_pattern_bound(R2, 2, 3)

    def test_bivariate_closed_forms(self):
        b = bivariate_part_bounds(R2)
        assert b.b1 == pytest.approx(1 + 2 / math.sqrt(15) + 1 / 9, rel=1e-14)
        assert b.b2 == pytest.approx(1 + 5 / math.sqrt(15) + 4 / 9, rel=1e-14)
        assert b.b3 == b.b2
        assert b.b4 == pytest.approx(1 + 8 / math.sqrt(15) + 16 / 9, rel=1e-14)

    def test_bivariate_below_product_of_univariate(self):
        # the dedicated bivariate constants undercut the generic ones
        b = bivariate_part_bounds(R2)
        assert b.b1 < sign_pattern_bound(R2, 2, 2)
        assert b.b4 < sign_pattern_bound(R2, 2, 0)


class TestVerifyDecomposition:
    def test_monomial_plus_part(self):
        g = LaurentPoly(2, {(1, 1): 1.0})
        report = verify_decomposition_estimates(g, R2, which="bivariate")
        rows = {row.pattern.label(): row for row in report.rows}
        assert rows["++"].ratio == pytest.approx(1.0, abs=1e-6)
        assert rows["++"].bound == pytest.approx(bivariate_part_bounds(R2).b1)
        assert report.all_passed

    def test_inverse_monomial_minus_part(self):
        g = LaurentPoly(2, {(-1, -1): 1.0})
        report = verify_decomposition_estimates(g, R2, which="bivariate")
        rows = {row.pattern.label(): row for row in report.rows}
        assert rows["--"].ratio == pytest.approx(1.0, abs=1e-6)
        assert report.all_passed

    def test_bivariate_requires_two_variables(self):
        with pytest.raises(InputError):
            verify_decomposition_estimates(LaurentPoly(1, {(1,): 1.0}), R2, "bivariate")

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random_estimates_hold(self, n):
        count = 6 if n == 3 else 12
        for k in range(count):
            g = gen_laurent(n, 5, substream(40 + n, k))
            report = verify_decomposition_estimates(g, R2, which="general")
            assert report.all_passed

    def test_bivariate_random_estimates_hold(self):
        for k in range(12):
            g = gen_laurent(2, 6, substream(50, k))
            report = verify_decomposition_estimates(g, R2, which="bivariate")
            assert report.all_passed


class TestSignPatterns:
    def test_ordering_matches_part_numbering(self):
        labels = [p.label() for p in all_sign_patterns(2)]
        assert labels == ["++", "+-", "-+", "--"]

    def test_t_counts_plus_entries(self):
        patterns = {p.label(): p.t for p in all_sign_patterns(2)}
        assert patterns == {"++": 2, "+-": 1, "-+": 1, "--": 0}
