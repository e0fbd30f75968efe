import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symclose.errors import DegenerateTarget, EmptyGenerators, EmptySet, HypothesisViolated, NotUnit
from symclose.isometry import identity, reflection
from symclose.orbit import (
    OrbitBFS,
    RandomWalk,
    RandomWords,
    StabilizerSpec,
    conserved_quantities,
    covering_radius,
    density_verdict,
    extension_experiment,
    invariance_check,
    sample_orbit,
)
from symclose.subspace import coordinate_subspace, full_space, perp, span, subspace_sum, subsphere
from symclose.witness import counterexample, duocylinder

from conftest import random_subspace, random_unit


def mirrors(*angles):
    return [reflection(span([[np.cos(a), np.sin(a)]])) for a in angles]


def test_identity_orbit_is_constant():
    x = np.array([0.6, 0.8])
    s = sample_orbit([identity(2)], x, 100)
    assert np.allclose(s.points, x)


def test_dihedral_orbit_has_eight_points():
    x = np.array([np.cos(0.3), np.sin(0.3)])
    s = sample_orbit(mirrors(0, np.pi / 4), x, 10_000, OrbitBFS())
    assert len(s) == 8
    # oracle: rotations by multiples of pi/2 and their mirror images
    rots = [np.array([np.cos(0.3 + j * np.pi / 2), np.sin(0.3 + j * np.pi / 2)]) for j in range(4)]
    refl = [np.array([np.cos(-0.3 + j * np.pi / 2), np.sin(-0.3 + j * np.pi / 2)]) for j in range(4)]
    oracle = np.array(rots + refl)
    d = np.linalg.norm(s.points[:, None, :] - oracle[None, :, :], axis=2)
    assert np.all(d.min(axis=1) < 1e-12) and np.all(d.min(axis=0) < 1e-12)


def test_irrational_mirrors_fill_the_circle():
    a = np.arccos(1 / 3)
    x = np.array([1.0, 0.0])
    s = sample_orbit(mirrors(0, a), x, 10_000, OrbitBFS())
    assert len(s) == 10_000
    target = subsphere(full_space(2), x)
    assert covering_radius(s, target) < 0.01
    # oracle: iterate the rotation by 2a directly
    m = np.arange(-2500, 2500)
    direct = np.stack([np.cos(2 * a * m), np.sin(2 * a * m)], axis=1)
    assert covering_radius(direct, target) < 0.01


def test_covering_radius_examples():
    circle = subsphere(full_space(2), np.array([1.0, 0.0]))
    assert covering_radius(np.array([[1.0, 0.0]]), circle, 1000) == pytest.approx(2.0, abs=0.01)
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((10_000, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    sphere = subsphere(full_space(3), np.array([0.0, 0.0, 1.0]))
    assert covering_radius(pts, sphere) < 0.1
    t = np.linspace(0, 2 * np.pi, 20_000)
    equator = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    assert covering_radius(equator, sphere) == pytest.approx(np.sqrt(2), abs=0.05)


def test_covering_radius_degenerate_target():
    x = np.array([0.0, 0.0, 1.0])
    with pytest.raises(DegenerateTarget):
        covering_radius(np.array([x]), subsphere(coordinate_subspace(3, [0, 1]), x))


def test_covering_radius_monotone_in_sample():
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((3000, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    sphere = subsphere(full_space(3), pts[0])
    radii = [covering_radius(pts[:m], sphere, 500, 1) for m in (10, 100, 1000, 3000)]
    assert all(b <= a for a, b in zip(radii, radii[1:]))


def test_preconditions():
    with pytest.raises(EmptyGenerators):
        sample_orbit([], np.array([1.0, 0.0]), 10)
    with pytest.raises(NotUnit):
        sample_orbit([identity(2)], np.array([1.0, 1.0]), 10)
    with pytest.raises(EmptySet):
        invariance_check(np.zeros((0, 2)), [identity(2)])


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 7), st.data())
def test_norms_and_complement_components(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    h1 = random_subspace(rng, n, data.draw(st.integers(1, n - 2)))
    h2 = random_subspace(rng, n, data.draw(st.integers(1, n - 2)))
    x = random_unit(rng, n)
    s = sample_orbit([reflection(h1), reflection(h2)], x, 500, RandomWords(9, 1))
    assert np.all(np.abs(np.linalg.norm(s.points, axis=1) - 1) < 1e-12)
    rest = perp(subspace_sum(h1, h2))
    if rest.dim:
        values = np.linalg.norm(s.points @ rest.basis.T, axis=1)
        assert np.ptp(values) < 1e-10


def test_stabilizer_orbit_keeps_fixed_component():
    rng = np.random.default_rng(5)
    h = random_subspace(rng, 5, 2)
    x = random_unit(rng, 5)
    s = sample_orbit([StabilizerSpec(h)], x, 2000, RandomWalk(3))
    assert np.allclose(s.points @ h.basis.T, h.basis @ x, atol=1e-12)


def test_results_do_not_depend_on_worker_count(monkeypatch):
    a = np.arccos(1 / 3)
    gens = mirrors(0, a)
    x = np.array([1.0, 0.0])
    monkeypatch.setenv("SYMCLOSE_THREADS", "1")
    one = sample_orbit(gens, x, 10_000, RandomWords(8, 4)).points
    monkeypatch.setenv("SYMCLOSE_THREADS", "3")
    three = sample_orbit(gens, x, 10_000, RandomWords(8, 4)).points
    assert np.array_equal(one, three)


def test_duocylinder_is_confined():
    c = duocylinder()
    x = np.array([0.5, 0.5, 0.5, 0.5])
    s = sample_orbit([StabilizerSpec(h) for h in c.subspaces], x, 20_000)
    cands = [("e1e2", coordinate_subspace(4, [0, 1])), ("e3e4", coordinate_subspace(4, [2, 3]))]
    r = density_verdict(s, subsphere(full_space(4), x), 0.15, cands)
    assert r.verdict == "confined"
    assert r.evidence["conserved"]["max_deviation"] < 1e-9


def test_inconclusive_without_candidates():
    c = duocylinder()
    x = np.array([0.5, 0.5, 0.5, 0.5])
    s = sample_orbit([StabilizerSpec(h) for h in c.subspaces], x, 5000)
    r = density_verdict(s, subsphere(full_space(4), x), 0.15, [])
    assert r.verdict == "inconclusive"


def test_small_samples_are_inconclusive():
    s = sample_orbit(mirrors(0, 1.0), np.array([1.0, 0.0]), 10)
    r = density_verdict(s, subsphere(full_space(2), np.array([1.0, 0.0])), 10.0)
    assert r.verdict == "inconclusive"


@settings(max_examples=10, deadline=None)
@given(st.integers(4, 7), st.data())
def test_orthogonal_parts_never_dense(n, data):
    d1 = data.draw(st.integers(2, n - 2))
    first = [n - d1]
    second = [data.draw(st.integers(n - (n - d1), n - 2))]
    c = counterexample(n, (first, second))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    x = random_unit(rng, n)
    s = sample_orbit([StabilizerSpec(h) for h in c.subspaces], x, 3000)
    r = density_verdict(s, subsphere(full_space(n), x), 0.15, list(c.conserved))
    assert r.verdict != "dense"


def test_invariance_of_dihedral_orbit():
    x = np.array([np.cos(0.3), np.sin(0.3)])
    gens = mirrors(0, np.pi / 4)
    orbit = sample_orbit(gens, x, 100, OrbitBFS()).points
    ok, err = invariance_check(orbit, gens)
    assert ok and err < 1e-12


def test_extension_experiment():
    h = span([[0, 1, 1]])
    l = coordinate_subspace(3, [0, 1])
    x = np.array([0.3, 0.4, np.sqrt(0.75)])
    r = extension_experiment(h, l, x, budget=100_000, threshold=0.2)
    assert r.verdict == "dense"
    assert r.target.direction.dim == 3


def test_extension_experiment_degenerate_and_violations():
    h = span([[1, 0, 0, 0]])
    l = coordinate_subspace(4, [0, 1])
    r = extension_experiment(h, l, np.array([0.0, 0.0, 0.0, 1.0]), budget=10)
    assert r.verdict == "dense" and r.target.degenerate
    with pytest.raises(HypothesisViolated, match="L\\^⊥"):
        extension_experiment(coordinate_subspace(3, [2]), coordinate_subspace(3, [0, 1]),
                             np.array([1.0, 0, 0]))
    with pytest.raises(HypothesisViolated, match="dim"):
        extension_experiment(coordinate_subspace(3, [0, 1]), coordinate_subspace(3, [0, 1]),
                             np.array([1.0, 0, 0]))


def test_conserved_quantities_report():
    x = np.array([0.6, 0.0, 0.8])
    s = sample_orbit([StabilizerSpec(coordinate_subspace(3, [2]))], x, 200)
    rep = conserved_quantities(s, [("z", coordinate_subspace(3, [2])), ("x", coordinate_subspace(3, [0]))])
    assert rep.best().label == "z" and rep.best().max_deviation < 1e-12
