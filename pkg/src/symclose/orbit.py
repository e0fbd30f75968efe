"""Orbit sampling, covering radii on sub-spheres, confinement detection.

Everything here is numerical evidence, never proof: a small covering radius
suggests that an orbit is dense in its target sub-sphere, and a quantity that
stays constant over a large sample suggests an invariant.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ._index import ToleranceIndex
from .errors import (
    DegenerateTarget,
    DimensionMismatch,
    EmptyGenerators,
    EmptySet,
    HypothesisViolated,
    NotUnit,
    TrivialStabilizer,
)
from .isometry import reflection
from .subspace import TAU_ORTHO, SubSphere, Subspace, intersect, perp, subspace_sum, subsphere

CHUNK = 4096
TAU_CONSERVE = 1e-8
DEFAULT_THRESHOLD = 0.15
DEFAULT_PROBES = 2000
DEFAULT_MIN_POINTS = 1000


@dataclass(frozen=True, eq=False)
class StabilizerSpec:
    """A letter standing for a fresh random element of the stabilizer of ``fixed``.

    Applied to x it keeps x|fixed and sends the remaining component to a
    uniformly random point of the same norm in the complement, which is
    exactly the distribution of g x for Haar-random g in SO(n)_fixed (or
    O(n)_fixed when ``full``).  SO needs a complement of dimension >= 2.
    """

    fixed: Subspace
    full: bool = False

    def __post_init__(self):
        d = self.fixed.ambient_dim - self.fixed.dim
        if d < (1 if self.full else 2):
            raise TrivialStabilizer(f"stabilizer of a {self.fixed.dim}-dim subspace is trivial")
        object.__setattr__(self, "_moving", perp(self.fixed).basis)

    @property
    def ambient_dim(self) -> int:
        return self.fixed.ambient_dim

    def apply_batch(self, points, rng):
        c = self._moving
        moving = points @ c.T
        radius = np.linalg.norm(moving, axis=1, keepdims=True)
        u = rng.standard_normal(moving.shape)
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        return points - moving @ c + (radius * u) @ c

    def to_dict(self):
        return {"kind": "stabilizer", "fixed_dim": self.fixed.dim, "group": "O" if self.full else "SO"}


@dataclass(frozen=True)
class RandomWords:
    """Each point is x pushed through a fresh word of ``length`` uniform letters."""

    length: int = 32
    seed: int = 0

    def to_dict(self):
        return {"policy": "random-words", "length": self.length, "seed": self.seed}


@dataclass(frozen=True)
class RandomWalk:
    """Successive points of one random walk, p_{t+1} = g p_t."""

    seed: int = 0

    def to_dict(self):
        return {"policy": "random-walk", "seed": self.seed}


@dataclass(frozen=True)
class OrbitBFS:
    """Breadth-first enumeration of distinct orbit points (fixed maps only)."""

    dedup_tol: float = 1e-9

    def to_dict(self):
        return {"policy": "bfs", "dedup_tol": self.dedup_tol}


@dataclass(frozen=True, eq=False)
class OrbitSample:
    seed_point: np.ndarray
    points: np.ndarray
    word_policy: dict
    budget_used: int

    def __len__(self):
        return len(self.points)


def worker_count() -> int:
    env = os.environ.get("SYMCLOSE_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value > 0:
            return value
    return os.cpu_count() or 1


def _check_generators(generators, x):
    generators = list(generators)
    if not generators:
        raise EmptyGenerators("need at least one generator")
    x = np.asarray(x, dtype=float)
    n = generators[0].ambient_dim
    if any(g.ambient_dim != n for g in generators) or x.shape != (n,):
        raise DimensionMismatch("generators and seed point disagree on the dimension")
    if abs(np.linalg.norm(x) - 1.0) > TAU_ORTHO:
        raise NotUnit(f"|x| = {np.linalg.norm(x)!r} is not 1")
    return generators, x


def _apply_letter(gen, pts, rng):
    if isinstance(gen, StabilizerSpec):
        return gen.apply_batch(pts, rng)
    return pts @ gen.matrix.T


def _word_chunk(generators, x, count, length, seed, chunk):
    rng = np.random.default_rng([seed, chunk])
    pts = np.tile(x, (count, 1))
    for _ in range(length):
        letters = rng.integers(len(generators), size=count)
        for g, gen in enumerate(generators):
            mask = letters == g
            if mask.any():
                pts[mask] = _apply_letter(gen, pts[mask], rng)
    return pts


def sample_orbit(generators, x, budget, policy=None) -> OrbitSample:
    """Up to ``budget`` points of the orbit of the unit vector ``x``.

    ``generators`` mixes OrthogonalMap and StabilizerSpec letters.  Results
    depend only on (generators, x, budget, policy); RandomWords splits the
    budget into fixed chunks seeded by (seed, chunk index), so the worker
    count (SYMCLOSE_THREADS) does not change the output.
    """
    generators, x = _check_generators(generators, x)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    policy = RandomWords() if policy is None else policy

    if isinstance(policy, RandomWords):
        sizes = [min(CHUNK, budget - start) for start in range(0, budget, CHUNK)]

        def run(c):
            return _word_chunk(generators, x, sizes[c], policy.length, policy.seed, c)

        workers = min(worker_count(), len(sizes))
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                parts = list(pool.map(run, range(len(sizes))))
        else:
            parts = [run(c) for c in range(len(sizes))]
        points = np.vstack(parts)
    elif isinstance(policy, RandomWalk):
        rng = np.random.default_rng(policy.seed)
        points = np.empty((budget, len(x)))
        p = x[None, :]
        for t, letter in enumerate(rng.integers(len(generators), size=budget)):
            p = _apply_letter(generators[letter], p, rng)
            points[t] = p[0]
    elif isinstance(policy, OrbitBFS):
        if any(isinstance(g, StabilizerSpec) for g in generators):
            raise ValueError("breadth-first orbits need fixed maps, not stabilizer letters")
        mats = [g.matrix for g in generators]
        index = ToleranceIndex(len(x), policy.dedup_tol)
        index.add(x)
        found = [x]
        head = 0
        while head < len(found) and len(found) < budget:
            p = found[head]
            head += 1
            for m in mats:
                q = m @ p
                if index.add(q)[1]:
                    found.append(q)
                    if len(found) >= budget:
                        break
        points = np.array(found)
    else:
        raise TypeError(f"unknown word policy {policy!r}")
    return OrbitSample(x.copy(), points, policy.to_dict(), len(points))


def covering_radius(sample, target: SubSphere, probe_count=DEFAULT_PROBES, probe_seed=0) -> float:
    """Max over seeded uniform probes on ``target`` of the chordal distance to the sample."""
    if target.degenerate:
        raise DegenerateTarget("target sub-sphere is a single point")
    points = sample.points if isinstance(sample, OrbitSample) else np.asarray(sample, dtype=float)
    if len(points) == 0:
        raise EmptySet("sample is empty")
    probes = target.sample(probe_count, np.random.default_rng(probe_seed))
    dist, _ = cKDTree(points).query(probes)
    return float(np.max(dist))


@dataclass(frozen=True)
class ConservedQuantity:
    label: str
    values: np.ndarray
    max_deviation: float

    def to_dict(self):
        return {"label": self.label, "max_deviation": self.max_deviation,
                "value": float(self.values[0]) if len(self.values) else None}


@dataclass(frozen=True)
class ConservedQuantityReport:
    quantities: tuple

    def best(self):
        return min(self.quantities, key=lambda q: q.max_deviation, default=None)


def _labelled(candidates):
    out = []
    for j, c in enumerate(candidates):
        out.append(c if isinstance(c, tuple) else (f"candidate {j}", c))
    return out


def conserved_quantities(sample, candidates) -> ConservedQuantityReport:
    """||p|S|| over the whole sample for each candidate S (Subspace or (label, Subspace))."""
    qs = []
    for label, s in _labelled(candidates):
        values = np.linalg.norm(sample.points @ s.basis.T, axis=1)
        qs.append(ConservedQuantity(label, values, float(np.ptp(values)) if len(values) else 0.0))
    return ConservedQuantityReport(tuple(qs))


@dataclass(frozen=True, eq=False)
class DensityReport:
    target: SubSphere
    covering_radius_estimate: float | None
    probes_used: int
    verdict: str  # dense | confined | inconclusive
    threshold: float
    points_used: int
    evidence: dict | None = field(default=None)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "threshold": self.threshold,
            "covering_radius_estimate": self.covering_radius_estimate,
            "probes_used": self.probes_used,
            "points_used": self.points_used,
            "target": {"dim": self.target.direction.dim, "radius": self.target.radius,
                       "center": self.target.center.tolist()},
            "evidence": self.evidence,
        }


def density_verdict(sample, target, threshold=DEFAULT_THRESHOLD, conserved_candidates=(),
                    probe_count=DEFAULT_PROBES, probe_seed=0, tau_conserve=TAU_CONSERVE,
                    min_points=DEFAULT_MIN_POINTS) -> DensityReport:
    """Dense, Confined or Inconclusive.

    Dense needs a covering radius below ``threshold``.  Confined needs a
    candidate S whose ||p|S|| varies by less than ``tau_conserve`` over the
    sample while varying across the target, so the quantity really keeps the
    orbit off part of the target.  Samples with fewer than ``min_points``
    points are always Inconclusive.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    n_pts = len(sample.points)
    if target.degenerate:
        return DensityReport(target, 0.0, 0, "dense", threshold, n_pts,
                             {"reason": "target is a single point"})
    radius = covering_radius(sample, target, probe_count, probe_seed)
    if n_pts < min_points:
        return DensityReport(target, radius, probe_count, "inconclusive", threshold, n_pts,
                             {"reason": f"fewer than {min_points} sample points"})
    if radius < threshold:
        return DensityReport(target, radius, probe_count, "dense", threshold, n_pts)
    probes = target.sample(probe_count, np.random.default_rng(probe_seed))
    conserved = []
    for q, (_, s) in zip(conserved_quantities(sample, conserved_candidates).quantities,
                         _labelled(conserved_candidates)):
        if 0 < s.dim < s.ambient_dim and q.max_deviation < tau_conserve:
            spread = float(np.ptp(np.linalg.norm(probes @ s.basis.T, axis=1)))
            if spread > 1e3 * tau_conserve:
                conserved.append(q)
    if conserved:
        best = min(conserved, key=lambda q: q.max_deviation)
        return DensityReport(target, radius, probe_count, "confined", threshold, n_pts,
                             {"conserved": best.to_dict(),
                              "all_conserved": [q.label for q in conserved]})
    return DensityReport(target, radius, probe_count, "inconclusive", threshold, n_pts,
                         {"reason": "covering radius above threshold and no conserved quantity"})


def invariance_check(points, maps, tol=1e-9):
    """Whether every map sends the finite set ``points`` onto itself: (invariant, max_error)."""
    e = np.asarray(points, dtype=float)
    if e.ndim != 2 or len(e) == 0:
        raise EmptySet("need a nonempty point set")
    tree = cKDTree(e)
    worst = 0.0
    for g in maps:
        if g.ambient_dim != e.shape[1]:
            raise DimensionMismatch("map and points disagree on the dimension")
        dist, _ = tree.query(e @ g.matrix.T)
        worst = max(worst, float(np.max(dist)))
    return worst < tol, worst


def extension_generators(h: Subspace, l: Subspace):
    """Letters for the group generated by O(n)_{L^perp} and R_H."""
    return [StabilizerSpec(perp(l), full=True), reflection(h)]


def extension_experiment(h: Subspace, l: Subspace, x, budget=100_000, threshold=0.2,
                         policy=None, probe_count=DEFAULT_PROBES, probe_seed=0,
                         min_points=DEFAULT_MIN_POINTS) -> DensityReport:
    """Is the orbit of x under <O(n)_{L^perp}, R_H> dense in S^{n-1} ∩ (H + L + x)?

    Requires H ∩ L^perp = {o} and dim H < dim L.
    """
    if h.ambient_dim != l.ambient_dim:
        raise DimensionMismatch("H and L live in different dimensions")
    if intersect(h, perp(l)).dim:
        raise HypothesisViolated("H ∩ L^⊥ ≠ {o}")
    if not h.dim < l.dim:
        raise HypothesisViolated("dim H < dim L fails")
    target = subsphere(subspace_sum(h, l), x)
    if target.degenerate:
        return DensityReport(target, 0.0, 0, "dense", threshold, 1,
                             {"reason": "target is a single point"})
    sample = sample_orbit(extension_generators(h, l), x, budget, policy)
    return density_verdict(sample, target, threshold, probe_count=probe_count,
                           probe_seed=probe_seed, min_points=min_points)

