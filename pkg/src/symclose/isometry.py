"""Orthogonal maps: subspace reflections, stabilizer rotations and words.

Maps act on column vectors, ``y = matrix @ x``.  A word lists letters in the
order they act, so ``word([r1, r2], [0, 1])`` is the map ``x -> r2(r1(x))``,
the product usually written ``R_{H2} R_{H1}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ._index import ToleranceIndex
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidCap,
    NotOrthogonal,
    TrivialStabilizer,
    ZeroDimensional,
)
from .subspace import PrincipalAngleDecomposition, Subspace, perp, principal_angles

TAU_MAP = 1e-9
DEFAULT_CAP = 10_000
DEFAULT_DEDUP_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Provenance:
    """Where a map came from.  Metadata only; never used for equality."""

    kind: str  # reflection | point-reflection | stabilizer | word | identity | matrix
    subspace: Subspace | None = None
    seed: int | None = None
    letters: tuple[int, ...] = ()

    def to_dict(self):
        out = {"kind": self.kind}
        if self.subspace is not None:
            out["subspace_dim"] = self.subspace.dim
        if self.seed is not None:
            out["seed"] = self.seed
        if self.letters:
            out["letters"] = list(self.letters)
        return out


@dataclass(frozen=True, eq=False)
class OrthogonalMap:
    matrix: np.ndarray
    provenance: Provenance = field(default_factory=lambda: Provenance("matrix"))

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
        defect = orthogonality_defect(m)
        if defect >= TAU_MAP:
            raise NotOrthogonal(f"max |Q^T Q - I| = {defect:.3e} exceeds {TAU_MAP}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def orthogonality_defect(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))))


def identity(n) -> OrthogonalMap:
    return OrthogonalMap(np.eye(n), Provenance("identity"))


def reflection(h: Subspace) -> OrthogonalMap:
    """R_H = 2 P_H - I; for H = {o} this is the point reflection -I."""
    n = h.ambient_dim
    m = 2.0 * h.projector - np.eye(n)
    kind = "point-reflection" if h.dim == 0 else "reflection"
    return OrthogonalMap(m, Provenance(kind, subspace=h))


def haar_special_orthogonal(rng, d, count=None) -> np.ndarray:
    """Haar-distributed element(s) of SO(d).

    QR of a Gaussian matrix with the signs of R's diagonal moved into Q gives
    Haar on O(d); flipping the last column when det = -1 lands in SO(d).
    """
    shape = (d, d) if count is None else (count, d, d)
    z = rng.standard_normal(shape)
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    q = q * signs[..., None, :]
    neg = np.linalg.det(q) < 0
    if count is None:
        if neg:
            q[:, -1] *= -1
    else:
        q[neg, :, -1] *= -1
    return q


def stabilizer_sample(h: Subspace, seed: int) -> OrthogonalMap:
    """A Haar-random element of SO(n)_H, deterministic in (H, seed)."""
    n = h.ambient_dim
    d = n - h.dim
    if d < 2:
        raise TrivialStabilizer(f"SO(n)_H is trivial for dim H = {h.dim} > n - 2 = {n - 2}")
    c = perp(h).basis
    q = haar_special_orthogonal(np.random.default_rng(seed), d)
    m = h.projector + c.T @ q @ c
    return OrthogonalMap(m, Provenance("stabilizer", subspace=h, seed=seed))


def word(factors, letters) -> OrthogonalMap:
    """Compose ``factors[letters[0]]`` first, then ``factors[letters[1]]``, ..."""
    factors = list(factors)
    if not factors:
        raise IndexOutOfRange("word() needs at least one factor to fix the dimension")
    n = factors[0].ambient_dim
    if any(f.ambient_dim != n for f in factors):
        raise DimensionMismatch("factors live in different dimensions")
    m = np.eye(n)
    for letter in letters:
        if not 0 <= letter < len(factors):
            raise IndexOutOfRange(f"letter {letter} outside 0..{len(factors) - 1}")
        m = factors[letter].matrix @ m
    return OrthogonalMap(m, Provenance("word", letters=tuple(int(t) for t in letters)))


# closed forms for a pair of reflections in the adapted basis


@dataclass(frozen=True)
class PairCoordinates:
    """x written as sum_j rho_j (cos t_j e_j + sin t_j e_partner) + y1 + y2."""

    rho: np.ndarray
    theta: np.ndarray
    y1: np.ndarray
    y2: np.ndarray


def pair_coordinates(decomp: PrincipalAngleDecomposition, x) -> PairCoordinates:
    e = decomp.adapted_basis
    k, i = decomp.k, decomp.i
    c = e @ np.asarray(x, dtype=float)
    rho = np.zeros(i)
    theta = np.zeros(i)
    used = np.zeros(len(c), dtype=bool)
    for j in range(i):
        p = decomp.partner(j)
        s = c[p] if p is not None else 0.0
        rho[j] = np.hypot(c[j], s)
        theta[j] = np.mod(np.arctan2(s, c[j]), 2 * np.pi)
        used[j] = True
        if p is not None:
            used[p] = True
    mid = np.zeros_like(used)
    mid[i:k] = True
    rest = ~(used | mid)
    y1 = (c * mid) @ e
    y2 = (c * rest) @ e
    return PairCoordinates(rho, theta, y1, y2)


def _assemble(decomp, rho, phase, y1, y2):
    e = decomp.adapted_basis
    out = y1 + y2
    for j in range(decomp.i):
        out = out + rho[j] * np.cos(phase[j]) * e[j]
        p = decomp.partner(j)
        if p is not None:
            out = out + rho[j] * np.sin(phase[j]) * e[p]
    return out


def reflect_first_closed_form(decomp, x) -> np.ndarray:
    """R_{H1} x: phases negate, y1 is kept and y2 flips."""
    pc = pair_coordinates(decomp, x)
    return _assemble(decomp, pc.rho, -pc.theta, pc.y1, -pc.y2)


def reflect_second_closed_form(decomp, x) -> np.ndarray:
    """R_{H2} x: phases become 2 alpha_j - theta_j, and both y1 and y2 flip."""
    pc = pair_coordinates(decomp, x)
    return _assemble(decomp, pc.rho, 2 * decomp.angles - pc.theta, -pc.y1, -pc.y2)


def double_reflection_power(h1: Subspace, h2: Subspace, x, m: int) -> np.ndarray:
    """(R_{H2} R_{H1})^m x without forming any matrix power.

    In the adapted basis of (H1, H2) the product rotates each plane
    span{e_j, e_partner} by 2 alpha_j, multiplies y1 by (-1)^m and keeps y2.
    Negative ``m`` gives the inverse map.  When dim H1 < dim H2 the roles are
    swapped and ``m`` negated, since R_{H2} R_{H1} = (R_{H1} R_{H2})^{-1}.
    """
    if h1.ambient_dim != h2.ambient_dim:
        raise DimensionMismatch("H1 and H2 live in different dimensions")
    x = np.asarray(x, dtype=float)
    if x.shape != (h1.ambient_dim,):
        raise DimensionMismatch(f"x must have length {h1.ambient_dim}")
    if min(h1.dim, h2.dim) == 0:
        raise ZeroDimensional("both subspaces must be nonzero")
    m = int(m)
    if h1.dim < h2.dim:
        h1, h2, m = h2, h1, -m
    if m == 0:
        return x.copy()
    decomp = principal_angles(h1, h2)
    pc = pair_coordinates(decomp, x)
    sign = -1.0 if m % 2 else 1.0
    return _assemble(decomp, pc.rho, 2 * m * decomp.angles + pc.theta, sign * pc.y1, pc.y2)


@dataclass(frozen=True, eq=False)
class FiniteClosureReport:
    outcome: str  # "finite" | "exceeded-cap"
    cap: int
    generators_count: int
    dedup_tol: float
    order: int | None = None
    elements: np.ndarray | None = None

    @property
    def finite(self) -> bool:
        return self.outcome == "finite"

    def to_dict(self):
        out = {
            "outcome": self.outcome,
            "cap": self.cap,
            "generators_count": self.generators_count,
            "dedup_tol": self.dedup_tol,
        }
        if self.order is not None:
            out["order"] = self.order
        return out


def finite_closure(generators, cap=DEFAULT_CAP, dedup_tol=DEFAULT_DEDUP_TOL) -> FiniteClosureReport:
    """Breadth-first closure of the group generated by ``generators``.

    Products are deduplicated when all entries agree to within ``dedup_tol``.
    Reaching more than ``cap`` distinct elements is reported as
    ``exceeded-cap``, which is evidence (not proof) of an infinite group.
    """
    if cap < 1:
        raise InvalidCap(f"cap must be >= 1, got {cap}")
    generators = list(generators)
    if not generators:
        raise InvalidCap("finite_closure needs at least one generator")
    n = generators[0].ambient_dim
    if any(g.ambient_dim != n for g in generators):
        raise DimensionMismatch("generators live in different dimensions")

    mats = [g.matrix for g in generators]
    index = ToleranceIndex(n * n, dedup_tol)
    elements = [np.eye(n)]
    index.add(elements[0].ravel())
    queue = deque([0])
    while queue:
        g = elements[queue.popleft()]
        for s in mats:
            prod = s @ g
            _, new = index.add(prod.ravel())
            if new:
                elements.append(prod)
                if len(elements) > cap:
                    return FiniteClosureReport("exceeded-cap", cap, len(mats), dedup_tol)
                queue.append(len(elements) - 1)
    return FiniteClosureReport(
        "finite", cap, len(mats), dedup_tol, order=len(elements), elements=np.array(elements)
    )
