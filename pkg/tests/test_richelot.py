from collections import Counter

import pytest

from superspecial.arith import Fp2
from superspecial.counting import PRODUCT_SHAPES, orbit_signature_table, product_signature_table
from superspecial.elliptic import supersingular_data
from superspecial.genus2 import (
    Genus2Curve,
    curves_from_supersingular_pairs,
    is_isomorphic,
    superspecial_family_curves,
)
from superspecial.richelot import (
    Jacobian,
    Product,
    ProductSplitting,
    codomain,
    delta,
    dual_splitting,
    format_signature,
    glue,
    orbit_decomposition,
    orbit_signature,
    product_is_decomposed,
    product_shape,
    product_splittings,
    richelot_step,
    splittings,
)


def _seed_curves(p):
    return superspecial_family_curves(p) + curves_from_supersingular_pairs(p)[:4]


def _products(p):
    curves = supersingular_data(p).curves()
    return [Product(a, b) for i, a in enumerate(curves) for b in curves[i:]]


def test_fifteen_distinct_splittings():
    c = superspecial_family_curves(13)[0]
    ss = splittings(c)
    assert len(ss) == len(set(ss)) == 15
    assert len(set(product_splittings())) == 15
    for s in ss:
        assert len({pt for pr in s.pairs for pt in pr}) == 6


def test_decomposed_splittings_of_x6_minus_1():
    c = Genus2Curve.from_coeffs(Fp2(11), [-1, 0, 0, 0, 0, 0, 1])
    assert sum(1 for s in splittings(c) if not delta(s)) == 4


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19])
def test_codomains_are_superspecial(p):
    for c in _seed_curves(p):
        for s in splittings(c):
            target = codomain(c, s)
            if isinstance(target, Jacobian):
                assert target.curve.is_superspecial()
            else:
                assert target.left.is_supersingular() and target.right.is_supersingular()


@pytest.mark.parametrize("p", [7, 11, 13, 17])
def test_double_richelot_returns_to_source(p):
    """The pairing by the roots of the H_i is the dual kernel."""
    for c in _seed_curves(p):
        src = Jacobian(c)
        for s in splittings(c):
            step = richelot_step(src, s)
            back = richelot_step(step.target, step.dual).target
            assert isinstance(back, Jacobian)
            assert is_isomorphic(back.curve, c)


def test_dual_search_agrees_with_construction():
    c = superspecial_family_curves(13)[2]
    for s in splittings(c):
        step = richelot_step(Jacobian(c), s)
        assert dual_splitting(c, s) == step.dual


class TestProducts:
    def test_shapes(self):
        assert sorted(product_shape(v) for v in _products(11)) == ["E2xE2", "E2xE3", "E3xE3"]
        assert [product_shape(v) for v in _products(13)] == ["ExE"]

    def test_glue_p13_matches_worked_example(self):
        (v,) = _products(13)
        images = [glue(v, s) for s in product_splittings() if not product_is_decomposed(v, s)]
        assert len(images) == 5
        counts = Counter(img.curve.ra_type.label for img in images)
        assert counts == {"S3": 2, "V4": 2, "S4": 1}

    def test_diagonal_splitting_maps_product_to_itself(self):
        (v,) = _products(13)
        diag = [s for s in product_splittings() if s.bijection() is not None and product_is_decomposed(v, s)]
        assert len(diag) == 1
        assert codomain(v, diag[0]).key == v.key
        with pytest.raises(ValueError):
            glue(v, diag[0])

    def test_non_isomorphic_factors_glue_along_every_bijection(self):
        for p in (29, 37):
            for v in _products(p):
                if product_shape(v) == "ExE'":
                    mixed = [s for s in product_splittings() if s.bijection() is not None]
                    assert not any(product_is_decomposed(v, s) for s in mixed)
                    return
        pytest.fail("no ExE' product found")

    @pytest.mark.parametrize("p", [7, 11, 13, 17, 23])
    def test_glue_round_trip(self, p):
        for v in _products(p):
            for s in product_splittings():
                step = richelot_step(v, s)
                if step.decomposed:
                    continue
                back = richelot_step(step.target, step.dual).target
                assert isinstance(back, Product)
                assert back.key == v.key

    def test_splitting_inside_one_factor_is_decomposed(self):
        (v,) = _products(13)
        s = ProductSplitting(((0, 1), (2, 3), (4, 5)))
        assert s.bijection() is None
        assert product_is_decomposed(v, s)
        assert isinstance(codomain(v, s), Product)


class TestOrbits:
    @pytest.mark.parametrize("p", [7, 11, 13, 17, 19, 23])
    def test_jacobian_signatures(self, p):
        for c in _seed_curves(p):
            orbits = orbit_decomposition(c)
            assert sum(o.size for o in orbits) == 15
            assert orbit_signature(orbits) == orbit_signature_table(c.ra_type)

    def test_product_signatures_cover_every_shape(self):
        seen = set()
        for p in (7, 11, 13, 17, 23, 29, 37, 47, 59):
            for v in _products(p):
                shape = product_shape(v)
                assert orbit_signature(orbit_decomposition(v)) == product_signature_table(shape)
                seen.add(shape)
        assert seen == set(PRODUCT_SHAPES)

    def test_orbits_share_codomains(self):
        for c in _seed_curves(17):
            for orbit in orbit_decomposition(c):
                keys = {codomain(c, s).key for s in orbit.splittings}
                assert len(keys) == 1

    def test_format(self):
        assert format_signature(orbit_signature_table("D12")) == "(2x1, 3x1, 6x1)(1x1, 3x1)"
        assert format_signature(orbit_signature_table("0")) == "(1x15)(0)"


def test_decomposed_step_factors_are_supersingular():
    for p in (11, 13, 17, 19):
        for c in _seed_curves(p):
            for s in splittings(c):
                if delta(s):
                    continue
                step = richelot_step(Jacobian(c), s)
                assert step.decomposed
                assert step.target.left.is_supersingular() and step.target.right.is_supersingular()
                back = richelot_step(step.target, step.dual).target
                assert is_isomorphic(back.curve, c)
