import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import subspace_angles

from symclose.errors import DimensionMismatch, NotOrthogonal, NotUnit, ZeroDimensional
from symclose.subspace import (
    Subspace,
    coordinate_subspace,
    full_space,
    intersect,
    perp,
    principal_angles,
    project,
    projection_image,
    span,
    subspace_sum,
    subsphere,
    total_sum,
    zero_space,
)

from conftest import random_subspace, random_unit


def test_basis_must_be_orthonormal():
    with pytest.raises(NotOrthogonal):
        Subspace(2, np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_span_drops_dependent_vectors():
    h = span([[1, 0, 0], [2, 0, 0], [0, 1, 0]])
    assert h.dim == 2
    assert h.equals(coordinate_subspace(3, [0, 1]))


def test_span_length_mismatch():
    with pytest.raises(DimensionMismatch):
        span([[1, 0]], 3)


def test_sum_and_intersection_of_coordinate_planes():
    a = coordinate_subspace(4, [0, 1])
    b = coordinate_subspace(4, [1, 2])
    assert subspace_sum(a, b).equals(coordinate_subspace(4, [0, 1, 2]))
    assert intersect(a, b).equals(coordinate_subspace(4, [1]))
    assert intersect(a, coordinate_subspace(4, [2, 3])).dim == 0


def test_perp_of_extremes():
    assert perp(full_space(3)).dim == 0
    assert perp(zero_space(3)).equals(full_space(3))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.data())
def test_perp_is_complementary_and_involutive(n, data):
    k = data.draw(st.integers(0, n))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    h = random_subspace(rng, n, k)
    p = perp(h)
    assert p.dim == n - k
    assert h.is_orthogonal_to(p)
    assert perp(p).equals(h)
    assert np.allclose(h.projector + p.projector, np.eye(n), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.data())
def test_dimension_formula(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a = random_subspace(rng, n, data.draw(st.integers(1, n)))
    b = random_subspace(rng, n, data.draw(st.integers(1, n)))
    assert subspace_sum(a, b).dim + intersect(a, b).dim == a.dim + b.dim


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.data())
def test_principal_angles_match_scipy(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    k = data.draw(st.integers(1, n))
    i = data.draw(st.integers(1, k))
    h1, h2 = random_subspace(rng, n, k), random_subspace(rng, n, i)
    d = principal_angles(h1, h2)
    oracle = np.sort(subspace_angles(h1.basis.T, h2.basis.T))
    # scipy resolves angles near 0 only to ~sqrt(eps); compare cosines
    assert np.allclose(np.cos(d.angles), np.cos(oracle), atol=1e-9)
    assert np.all(np.diff(d.angles) >= -1e-12)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 9), st.data())
def test_adapted_basis_reconstructs_both_subspaces(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    k = data.draw(st.integers(1, n))
    i = data.draw(st.integers(1, k))
    h1, h2 = random_subspace(rng, n, k), random_subspace(rng, n, i)
    d = principal_angles(h1, h2)
    e = d.adapted_basis
    assert np.allclose(e @ e.T, np.eye(n), atol=1e-10)
    r1, r2 = d.reconstruct()
    assert r1.equals(h1) and r2.equals(h2)


def test_forced_zero_angles_when_dimensions_overlap():
    # two planes in R^3 always share a line
    rng = np.random.default_rng(3)
    d = principal_angles(random_subspace(rng, 3, 2), random_subspace(rng, 3, 2))
    assert d.angles[0] == 0.0
    assert d.angles[1] > 0


def test_principal_angles_preconditions():
    with pytest.raises(ZeroDimensional):
        principal_angles(coordinate_subspace(3, [0]), zero_space(3))
    with pytest.raises(DimensionMismatch):
        principal_angles(coordinate_subspace(3, [0]), coordinate_subspace(3, [1, 2]))


def test_known_angle_between_lines():
    a = np.arccos(1 / 3)
    d = principal_angles(span([[1, 0]]), span([[np.cos(a), np.sin(a)]]))
    assert d.angles[0] == pytest.approx(a, abs=1e-14)


def test_small_angles_are_resolved():
    # a clamp at sqrt(tau) would zero these out
    for a in (1e-3, 1e-5, 1e-7):
        d = principal_angles(span([[1, 0, 0]]), span([[np.cos(a), np.sin(a), 0]]))
        assert d.angles[0] == pytest.approx(a, rel=1e-6)


def test_subsphere_geometry():
    x = np.array([0.6, 0.0, 0.8])
    s = subsphere(coordinate_subspace(3, [0, 1]), x)
    assert s.radius == pytest.approx(0.6)
    assert np.allclose(s.center, [0, 0, 0.8])
    pts = s.sample(50, np.random.default_rng(0))
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    assert np.allclose(pts[:, 2], 0.8)


def test_subsphere_degenerate_and_not_unit():
    x = np.array([0.0, 0.0, 1.0])
    assert subsphere(coordinate_subspace(3, [0, 1]), x).degenerate
    with pytest.raises(NotUnit):
        subsphere(full_space(3), np.array([1.0, 1.0, 0.0]))


def test_projection_image_and_total_sum():
    h = coordinate_subspace(3, [0])
    l = span([[1, 1, 0], [0, 0, 1]])
    assert projection_image(l, h).equals(h)
    assert total_sum([h, l]).dim == 3
    assert np.allclose(project([1, 2, 3], h), [1, 0, 0])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.data())
def test_image_under_orthogonal_map(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    h = random_subspace(rng, n, data.draw(st.integers(1, n)))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    img = h.image(q)
    assert img.dim == h.dim
    x = random_unit(rng, n)
    assert np.allclose(q @ project(x, h), project(q @ x, img), atol=1e-10)
