import math

import numpy as np
import pytest

from _oracles import legendre_reference, monomial_brute_force
from gravinterp.basis import (
    BasisSpec,
    basis_count,
    legendre,
    legendre_table,
    monomial_row,
    scale_coordinates,
    spherical_harmonic_row,
)
from gravinterp.errors import ConfigError, DegenerateScaleError

# frozen column order of the cubic row, as exponent triples (i, j, k)
CUBIC_EXPONENTS = [
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
    (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1),
    (3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0), (1, 2, 0),
    (2, 0, 1), (1, 0, 2), (0, 2, 1), (0, 1, 2), (1, 1, 1),
]


class TestBasisCount:
    @pytest.mark.parametrize("v,expected", [(0, 1), (1, 4), (2, 10), (3, 20)])
    def test_closed_form(self, v, expected):
        assert basis_count(v) == expected

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            basis_count(-1)


class TestBasisSpec:
    def test_monomial_sizes(self):
        assert BasisSpec.monomial("planar").size == 4
        assert BasisSpec.monomial("quadratic").size == 10
        assert BasisSpec.monomial("cubic").size == 20

    def test_spherical_sizes(self):
        for j in range(11):
            assert BasisSpec.spherical_harmonics(j).size == (j + 1) ** 2

    def test_unknown_family(self):
        with pytest.raises(ConfigError):
            BasisSpec(family="quartic", degree=4)

    def test_inconsistent_degree(self):
        with pytest.raises(ConfigError):
            BasisSpec(family="planar", degree=2)


class TestScaleCoordinates:
    def test_self_is_origin(self):
        p = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(scale_coordinates(p, p, 5.0), np.zeros(3))

    def test_unit_offset(self):
        got = scale_coordinates([7.0, 0.0, 0.0], [2.0, 0.0, 0.0], 5.0)
        np.testing.assert_array_equal(got, [1.0, 0.0, 0.0])

    def test_componentwise(self, rng):
        p = rng.normal(size=(20, 3))
        ref = rng.normal(size=3)
        ell = 2.75
        np.testing.assert_array_equal(
            scale_coordinates(p, ref, ell), (p - ref) / ell
        )

    def test_zero_scale_rejected(self):
        with pytest.raises(DegenerateScaleError):
            scale_coordinates([1.0, 0.0, 0.0], [0.0, 0.0, 0.0], 0.0)


class TestMonomialRow:
    def test_origin_planar(self):
        np.testing.assert_array_equal(
            monomial_row([0.0, 0.0, 0.0], 1), [1.0, 0.0, 0.0, 0.0]
        )

    def test_quadratic_hand_case(self):
        np.testing.assert_array_equal(
            monomial_row([1.0, 2.0, 3.0], 2),
            [1.0, 1.0, 2.0, 3.0, 1.0, 4.0, 9.0, 2.0, 3.0, 6.0],
        )

    @pytest.mark.parametrize("v", [1, 2, 3])
    def test_lengths(self, rng, v):
        row = monomial_row(rng.normal(size=3), v)
        assert len(row) == basis_count(v)

    def test_cubic_matches_exponent_triples(self, rng):
        for _ in range(25):
            c = rng.uniform(-2, 2, size=3)
            row = monomial_row(c, 3)
            expected = [monomial_brute_force(c, e) for e in CUBIC_EXPONENTS]
            np.testing.assert_allclose(row, expected, rtol=1e-14, atol=0)

    def test_vectorized_shape(self, rng):
        pts = rng.normal(size=(7, 3))
        assert monomial_row(pts, 3).shape == (7, 20)

    def test_unsupported_degree(self):
        with pytest.raises(ValueError):
            monomial_row([0.0, 0.0, 0.0], 4)


class TestLegendre:
    def test_constant_term(self, rng):
        for t in rng.uniform(-1, 1, size=5):
            assert legendre(0, 0, t) == 1.0

    def test_degree_one_at_pole(self):
        assert legendre(1, 0, 1.0) == pytest.approx(math.sqrt(3.0), rel=1e-15)

    def test_matches_reference_recursion(self):
        # forward column recursion vs textbook degree recursion + factorials
        t_grid = np.linspace(-1.0, 1.0, 101)
        table = legendre_table(12, t_grid)
        for i in range(13):
            for j in range(i + 1):
                ref = np.array([legendre_reference(i, j, t) for t in t_grid])
                scale = np.maximum(1.0, np.abs(ref))
                assert np.max(np.abs(table[i, j] - ref) / scale) < 1e-12

    def test_order_above_degree_rejected(self):
        with pytest.raises(ValueError):
            legendre(2, 3, 0.5)

    def test_t_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            legendre(2, 1, 1.5)


class TestSphericalHarmonicRow:
    @pytest.mark.parametrize("j,length", [(1, 4), (3, 16), (10, 121)])
    def test_lengths(self, rng, j, length):
        row = spherical_harmonic_row(rng.uniform(-1, 1), rng.uniform(-3, 3), j)
        assert row.shape == (length,)

    def test_pole_keeps_only_zonal_terms(self):
        row = spherical_harmonic_row(math.pi / 2, 0.7, 4)
        # cosine block: i = 0..4, j = 0..i; zonal entries are j = 0
        position = 0
        for i in range(5):
            for j in range(i + 1):
                if j == 0:
                    assert row[position] != 0.0
                else:
                    assert row[position] == 0.0
                position += 1
        # sine block is entirely non-zonal, so it vanishes at the pole
        assert np.all(row[position:] == 0.0)

    def test_term_order_cos_then_sin(self):
        phi, lam = 0.3, 1.1
        row = spherical_harmonic_row(phi, lam, 2)
        t = math.sin(phi)
        expected = [
            legendre_reference(0, 0, t),
            legendre_reference(1, 0, t),
            legendre_reference(1, 1, t) * math.cos(lam),
            legendre_reference(2, 0, t),
            legendre_reference(2, 1, t) * math.cos(lam),
            legendre_reference(2, 2, t) * math.cos(2 * lam),
            legendre_reference(1, 1, t) * math.sin(lam),
            legendre_reference(2, 1, t) * math.sin(lam),
            legendre_reference(2, 2, t) * math.sin(2 * lam),
        ]
        np.testing.assert_allclose(row, expected, rtol=1e-12)

    def test_vectorized(self, rng):
        phi = rng.uniform(-1.2, 1.2, size=9)
        lam = rng.uniform(-3, 3, size=9)
        rows = spherical_harmonic_row(phi, lam, 5)
        assert rows.shape == (9, 36)
        one = spherical_harmonic_row(phi[4], lam[4], 5)
        np.testing.assert_array_equal(rows[4], one)
