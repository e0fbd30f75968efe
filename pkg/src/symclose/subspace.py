"""Linear subspaces of R^n held through orthonormal bases.

Every routine here is pure: a :class:`Subspace` is immutable once built and
the operations return new objects.  Rank decisions go through singular
values rather than pivoted elimination so that results do not depend on the
particular basis a caller happened to supply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DimensionMismatch, NotOrthogonal, NotUnit, ZeroDimensional

TAU_ORTHO = 1e-9
TAU_RANK = 1e-8
EQUALITY_TOL = 1e-8
MAX_AMBIENT_DIM = 64


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_ambient(n):
    if not 2 <= n <= MAX_AMBIENT_DIM:
        raise BadDimension(f"ambient dimension must lie in [2, {MAX_AMBIENT_DIM}], got {n}")


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace stored as ``basis``, a (dim, n) array of orthonormal rows."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        _check_ambient(self.ambient_dim)
        b = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        if b.shape[0] > self.ambient_dim:
            raise BadDimension("more basis vectors than the ambient dimension")
        gram = b @ b.T
        if b.shape[0] and np.max(np.abs(gram - np.eye(b.shape[0]))) > TAU_ORTHO:
            raise NotOrthogonal("basis rows are not orthonormal; use orthonormalize()")
        object.__setattr__(self, "basis", _frozen(b))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def contains(self, x, tol=EQUALITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.linalg.norm(x - project(x, self)) < tol)

    def equals(self, other: Subspace, tol=EQUALITY_TOL) -> bool:
        """Subspace equality: same dimension and each basis vector of one lies in the other."""
        _same_ambient(self, other)
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        resid = self.basis - self.basis @ other.projector
        return bool(np.max(np.linalg.norm(resid, axis=1)) < tol)

    def is_orthogonal_to(self, other: Subspace, tol=TAU_ORTHO) -> bool:
        _same_ambient(self, other)
        if self.dim == 0 or other.dim == 0:
            return True
        return bool(np.max(np.abs(self.basis @ other.basis.T)) <= tol)

    def image(self, matrix) -> Subspace:
        """The subspace ``matrix @ self``."""
        m = np.asarray(matrix, dtype=float)
        return span(self.basis @ m.T, self.ambient_dim)

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SubSphere:
    """The set S^{n-1} ∩ (direction + center), with ``center`` orthogonal to ``direction``."""

    direction: Subspace
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center))

    @property
    def ambient_dim(self) -> int:
        return self.direction.ambient_dim

    @property
    def degenerate(self) -> bool:
        return self.radius == 0.0

    def sample(self, count, rng) -> np.ndarray:
        """Uniform points on the sub-sphere, shape (count, n)."""
        g = rng.standard_normal((count, self.direction.dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return self.center + self.radius * (g @ self.direction.basis)


@dataclass(frozen=True, eq=False)
class PrincipalAngleDecomposition:
    """Principal angles of a pair (H1, H2) with an adapted orthonormal basis.

    With ``k = dim H1 >= i = dim H2`` the rows ``e[0..n-1]`` of
    ``adapted_basis`` satisfy ``H1 = span(e[0..k-1])`` and
    ``H2 = span(cos a_j e[j] + sin a_j e[i+k-1-j])`` (0-based ``j``); when
    ``i + k > n`` the first ``i + k - n`` angles vanish and have no partner.
    """

    k: int
    i: int
    angles: np.ndarray
    adapted_basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "angles", _frozen(self.angles))
        object.__setattr__(self, "adapted_basis", _frozen(self.adapted_basis))

    @property
    def ambient_dim(self) -> int:
        return self.adapted_basis.shape[0]

    def partner(self, j: int) -> int | None:
        """Row index paired with ``e[j]``, or None when it would fall outside R^n."""
        p = self.i + self.k - 1 - j
        return p if p < self.ambient_dim else None

    def reconstruct(self) -> tuple[Subspace, Subspace]:
        n = self.ambient_dim
        e = self.adapted_basis
        rows = []
        for j, a in enumerate(self.angles):
            p = self.partner(j)
            v = np.cos(a) * e[j]
            if p is not None:
                v = v + np.sin(a) * e[p]
            rows.append(v)
        return Subspace(n, e[: self.k]), span(np.array(rows), n)


def _same_ambient(*subspaces):
    dims = {h.ambient_dim for h in subspaces}
    if len(dims) > 1:
        raise DimensionMismatch(f"subspaces live in different ambient dimensions {sorted(dims)}")


def _vector(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def span(vectors, n=None) -> Subspace:
    """Column space of the rows of ``vectors`` via SVD thresholding."""
    m = np.asarray(vectors, dtype=float)
    if n is None:
        n = m.shape[-1]
    if m.size and m.shape[-1] != n:
        raise DimensionMismatch(f"vectors have length {m.shape[-1]}, expected {n}")
    m = m.reshape(-1, n)
    if m.shape[0] == 0:
        return Subspace(n, np.zeros((0, n)))
    _, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace(n, np.zeros((0, n)))
    r = int(np.sum(s > TAU_RANK * s[0]))
    return Subspace(n, vt[:r])


def full_space(n) -> Subspace:
    return Subspace(n, np.eye(n))


def zero_space(n) -> Subspace:
    return Subspace(n, np.zeros((0, n)))


def coordinate_subspace(n, indices) -> Subspace:
    """span{e_j : j in indices} with 0-based indices."""
    return Subspace(n, np.eye(n)[list(indices)])


def orthonormalize(vectors, tol=TAU_ORTHO) -> Subspace:
    """Gram-Schmidt with one reorthogonalisation pass.

    Vectors whose residual after removing the current span has norm below
    ``tol`` are dropped, so dependent input simply lowers the dimension.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        raise DimensionMismatch("cannot infer the ambient dimension from an empty list")
    n = vecs[0].shape[0]
    if any(v.shape != (n,) for v in vecs):
        raise DimensionMismatch("vectors have differing lengths")
    basis: list[np.ndarray] = []
    for v in vecs:
        r = v.copy()
        for _ in range(2):
            for b in basis:
                r -= (r @ b) * b
        norm = np.linalg.norm(r)
        if norm >= tol:
            basis.append(r / norm)
    return Subspace(n, np.array(basis).reshape(-1, n))


def subspace_sum(h1: Subspace, h2: Subspace) -> Subspace:
    _same_ambient(h1, h2)
    return span(np.vstack([h1.basis, h2.basis]), h1.ambient_dim)


def perp(h: Subspace) -> Subspace:
    n = h.ambient_dim
    if h.dim == 0:
        return full_space(n)
    _, _, vt = np.linalg.svd(h.basis, full_matrices=True)
    return Subspace(n, vt[h.dim:])


def intersect(h1: Subspace, h2: Subspace) -> Subspace:
    """H1 ∩ H2, computed as (H1^⊥ + H2^⊥)^⊥."""
    _same_ambient(h1, h2)
    return perp(subspace_sum(perp(h1), perp(h2)))


def project(x, h: Subspace) -> np.ndarray:
    x = _vector(x, h.ambient_dim)
    return (h.basis @ x) @ h.basis


def principal_angles(h1: Subspace, h2: Subspace) -> PrincipalAngleDecomposition:
    """Principal angles between H1 (dim k) and H2 (dim i <= k) with an adapted basis.

    Cosines are the singular values of the cross-Gram matrix; the angle is
    taken with ``arctan2`` against the residual norm so that small angles keep
    full relative accuracy.
    """
    _same_ambient(h1, h2)
    k, i, n = h1.dim, h2.dim, h1.ambient_dim
    if i == 0:
        raise ZeroDimensional("principal angles need a nonzero second subspace")
    if k < i:
        raise DimensionMismatch(f"expected dim H1 >= dim H2, got {k} < {i}; swap the arguments")
    u, s, vt = np.linalg.svd(h1.basis @ h2.basis.T)
    a = u.T @ h1.basis
    b = vt @ h2.basis
    cos = np.clip(s, 0.0, 1.0)
    resid = b - cos[:, None] * a[:i]
    resid -= (resid @ a.T) @ a
    sin = np.linalg.norm(resid, axis=1)
    angles = np.arctan2(sin, cos)
    forced = max(0, i + k - n)
    angles[:forced] = 0.0
    angles = np.maximum.accumulate(angles)

    # partner directions, most reliable (largest sine) first
    accepted: dict[int, np.ndarray] = {}
    pool = list(a)
    for j in sorted(range(forced, i), key=lambda j: -sin[j]):
        if sin[j] < 1e-13:
            break
        f = resid[j] / sin[j]
        for _ in range(2):
            for q in pool:
                f = f - (f @ q) * q
        norm = np.linalg.norm(f)
        if norm < 0.5:
            continue
        f = f / norm
        accepted[j] = f
        pool.append(f)

    e = np.zeros((n, n))
    e[:k] = a
    for j, f in accepted.items():
        e[i + k - 1 - j] = f
    free = perp(Subspace(n, np.array(pool))).basis
    slots = [i + k - 1 - j for j in range(forced, i) if j not in accepted]
    slots += list(range(k + i, n))
    for row, slot in zip(free, sorted(slots)):
        e[slot] = row
    return PrincipalAngleDecomposition(k=k, i=i, angles=angles, adapted_basis=e)


def subsphere(v: Subspace, x) -> SubSphere:
    """S^{n-1} ∩ (V + x) for a unit vector x."""
    x = _vector(x, v.ambient_dim)
    if abs(np.linalg.norm(x) - 1.0) > TAU_ORTHO:
        raise NotUnit(f"|x| = {np.linalg.norm(x)!r} is not 1")
    inside = project(x, v)
    radius = float(np.linalg.norm(inside))
    if radius < TAU_ORTHO:
        return SubSphere(v, x, 0.0)
    return SubSphere(v, x - inside, radius)


def projection_image(source: Subspace, target: Subspace) -> Subspace:
    """source|target: the span of the projections of source onto target."""
    _same_ambient(source, target)
    if source.dim == 0 or target.dim == 0:
        return zero_space(source.ambient_dim)
    return span(source.basis @ target.projector, source.ambient_dim)


def total_sum(subspaces) -> Subspace:
    subspaces = list(subspaces)
    _same_ambient(*subspaces)
    return span(np.vstack([h.basis for h in subspaces]), subspaces[0].ambient_dim)
