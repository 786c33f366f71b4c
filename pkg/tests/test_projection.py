"""Projection bodies and polars, the sharp product bound, affine
equivariance, and the polar-symmetral inclusion check."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pettybox import (BoxUnion, ConditionViolationError, InputError,
                      PolygonSet, affine_image_check, petty_product,
                      polar_projection_body, polar_projection_volume,
                      polar_steiner_inclusion_check, projection_body,
                      steiner_symmetrize, surface_measure)
from pettybox.corpus import (random_box_union, random_polygon, random_sl2,
                             regular_polygon)
from pettybox.geometry import circle_grid, rotation_2d
from pettybox.projection import PRODUCT_BOUND

E2 = np.array([0.0, 1.0])


def unit_square():
    return PolygonSet([[0, 0], [1, 0], [1, 1], [0, 1]])


def staircase():
    return BoxUnion([[0, 0], [1, 1]], [[1, 2], [2, 3]])


def unit_cube():
    return BoxUnion([[0, 0, 0]], [[1, 1, 1]])


# ------------------------------------------------------------ projection body

def test_projection_body_of_square_is_centered_square():
    Z = projection_body(unit_square())
    assert np.allclose(Z.axis_box_halfwidths(), [1.0, 1.0])
    assert Z.support([1.0, 1.0]) == 2.0
    # a surface measure passes through unchanged
    Z2 = projection_body(surface_measure(unit_square()))
    assert np.allclose(np.sort(Z.generators, axis=0),
                       np.sort(Z2.generators, axis=0))


def test_projection_body_of_staircase_is_box():
    Z = projection_body(staircase())
    assert np.allclose(Z.axis_box_halfwidths(), [3.0, 2.0])


def test_projection_body_of_cube():
    Z = projection_body(unit_cube())
    assert np.allclose(Z.axis_box_halfwidths(), [1.0, 1.0, 1.0])


def test_projection_body_of_inscribed_polygon_approaches_scaled_ball():
    # the projection body of a shape inscribed in the unit circle tends
    # to the ball of radius 2; the 64-gon is within 5e-3
    P = regular_polygon(64, phase=0.3)
    Z = projection_body(P)
    grid = circle_grid(4096)
    h = np.abs(grid.nodes @ Z.generators.T).sum(axis=1)
    dev = float(np.max(np.abs(h - 2.0)))
    assert dev <= 2.5e-3


def test_projection_body_shear_support_formula():
    # image of the unit square under the standard shear: the projection
    # body support becomes |z2| + |z1 - z2|
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    Z = projection_body(unit_square().transform(A))
    rng = np.random.default_rng(5)
    for _ in range(50):
        z = rng.normal(size=2)
        want = abs(z[1]) + abs(z[0] - z[1])
        assert abs(Z.support(z) - want) <= 1e-12 * (1.0 + want)


# ------------------------------------------------------------- polar volumes

def test_polar_projection_volume_closed_forms():
    pv = polar_projection_volume(unit_square())
    assert pv.error == 0.0
    assert abs(pv.value - 2.0) <= 1e-15
    pv = polar_projection_volume(unit_cube())
    assert pv.error == 0.0
    assert abs(pv.value - 4.0 / 3.0) <= 1e-15
    pv = polar_projection_volume(staircase())
    assert abs(pv.value - 1.0 / 3.0) <= 1e-15


def test_polar_projection_body_forms():
    body = polar_projection_body(unit_square())
    assert body.dim == 2
    assert abs(body.volume() - 2.0) <= 1e-15
    body3 = polar_projection_body(unit_cube())
    assert body3.dim == 3
    assert body3.radial([1.0, 0.0, 0.0]) == 1.0


# ------------------------------------------------------------------- product

def test_petty_product_square_exact():
    r = petty_product(unit_square())
    assert abs(r.product - 2.0) <= 1e-12
    assert r.bound == PRODUCT_BOUND[2]
    assert abs(r.slack - (PRODUCT_BOUND[2] - 2.0)) <= 1e-12
    assert r.error_estimate == 0.0


def test_petty_product_cube_exact():
    r = petty_product(unit_cube())
    assert abs(r.product - 4.0 / 3.0) <= 1e-9
    assert r.bound == PRODUCT_BOUND[3]


def test_petty_product_staircase_before_and_after():
    before = petty_product(staircase())
    assert abs(before.product - 4.0 / 3.0) <= 1e-12
    after = petty_product(steiner_symmetrize(staircase(), E2))
    assert abs(after.product - 2.0) <= 1e-12
    assert after.product - before.product >= 2.0 / 3.0 - 1e-12


def test_petty_product_approaches_bound_on_inscribed_polygons():
    devs = []
    for m in (16, 64, 256):
        r = petty_product(regular_polygon(m))
        assert r.slack >= 0.0
        devs.append(r.slack)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] <= 1e-3 * PRODUCT_BOUND[2]


def test_petty_product_never_exceeds_bound_on_corpus():
    for i in range(60):
        r = petty_product(random_polygon(100, index=i))
        assert r.slack >= -1e-9
    for i in range(30):
        r2 = petty_product(random_box_union(100, index=i))
        assert r2.slack >= -1e-9
        r3 = petty_product(random_box_union(100, index=i, dim=3))
        assert r3.slack >= -1e-9


def test_petty_report_json_fields():
    r = petty_product(unit_square())
    obj = r.to_json()
    assert set(obj) == {"volume", "polar_projection_volume",
                        "error_estimate", "product", "bound", "slack"}
    assert obj["volume"] == 1.0


# ---------------------------------------------------------------- affine maps

def test_affine_image_check_examples():
    sq = unit_square()
    assert affine_image_check(sq, np.eye(2)) <= 1e-15
    shear = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert affine_image_check(sq, shear) <= 1e-12
    assert affine_image_check(sq, rotation_2d(0.5)) <= 1e-12
    tri = PolygonSet([[0, 0], [2, 0], [0, 2]])
    for i in range(20):
        assert affine_image_check(tri, random_sl2(7, index=i)) <= 1e-9


def test_affine_image_check_rejects_non_unimodular():
    with pytest.raises(InputError):
        affine_image_check(unit_square(), 2.0 * np.eye(2))
    with pytest.raises(InputError):
        affine_image_check(unit_square(), np.eye(3))


def test_petty_product_is_affine_invariant():
    tri = PolygonSet([[0, 0], [2, 0], [0, 2]])
    base = petty_product(tri).product
    for i in range(20):
        A = random_sl2(11, index=i)
        img = PolygonSet(tri.vertices @ A.T)
        assert abs(petty_product(img).product - base) \
            <= 1e-9 * (1.0 + abs(base))


# ------------------------------------------------------- inclusion check

def test_polar_steiner_inclusion_requires_regular_frame():
    with pytest.raises(ConditionViolationError) as err:
        polar_steiner_inclusion_check(unit_square(), E2)
    assert err.value.mass == 2.0


def test_polar_steiner_inclusion_holds_on_diamond():
    diamond = PolygonSet(unit_square().vertices @ rotation_2d(math.pi / 4).T)
    holds, margin = polar_steiner_inclusion_check(diamond, E2)
    assert holds
    assert abs(margin - 1.0) <= 1e-9


def test_polar_steiner_inclusion_holds_on_rotated_triangle():
    tri = PolygonSet(
        np.array([[0, 0], [2, 0], [0, 2]]) @ rotation_2d(0.3).T)
    holds, margin = polar_steiner_inclusion_check(tri, E2)
    assert holds
    assert margin <= 1.0 + 1e-9


def test_polar_steiner_inclusion_near_equality_on_inscribed_polygon():
    P = regular_polygon(64, phase=0.1)
    holds, margin = polar_steiner_inclusion_check(P, E2)
    assert holds
    assert abs(margin - 1.0) <= 1e-6


def test_polar_steiner_inclusion_rejects_3d():
    with pytest.raises(InputError):
        polar_steiner_inclusion_check(unit_cube(), [0.0, 0.0, 1.0])
