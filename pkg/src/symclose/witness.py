"""Concrete subspace families that meet the generation criteria, and counterexamples.

All constructors are deterministic.  Tilted directions use the angle
arccos(1/3), whose cosine is rational and outside {0, +-1/2, +-1}, so every
declared angle can be certified exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .conditions import AngleSpec
from .errors import BadDimension, BadPartition
from .subspace import MAX_AMBIENT_DIM, coordinate_subspace, perp, span, total_sum

_C = 1.0 / 3.0
_S = math.sqrt(8.0) / 3.0


@dataclass(frozen=True, eq=False)
class WitnessConfig:
    ambient_dim: int
    mode: str  # lines | hyperplanes | reflection | rotation
    subspaces: tuple
    theorem_tag: str
    angle_specs: tuple = ()

    @property
    def k(self) -> int:
        return len(self.subspaces)


@dataclass(frozen=True, eq=False)
class CounterexampleConfig:
    """A family splitting into two mutually orthogonal parts.

    ``conserved`` lists subspaces S for which ||x|S|| is constant along every
    orbit of the group generated by the family.
    """

    ambient_dim: int
    mode: str
    subspaces: tuple
    orthogonal_parts: tuple
    conserved: tuple
    invariant_set: np.ndarray | None = field(default=None)


def _check_n(n, low=2):
    if not isinstance(n, (int, np.integer)) or not low <= n <= MAX_AMBIENT_DIM:
        raise BadDimension(f"ambient dimension must be in [{low}, {MAX_AMBIENT_DIM}], got {n}")


def _unit(n, j):
    v = np.zeros(n)
    v[j] = 1.0
    return v


def expected_count(n, i, mode) -> int:
    """Family sizes promised by the constructions below."""
    if mode == "rotation":
        return math.ceil(n / (n - i))
    if i in (1, n - 1):
        return n
    return math.ceil(n / min(i, n - i)) + 1


def _line_directions(n):
    dirs = [_unit(n, 0)]
    s_prev = 1.0
    for j in range(1, n):
        # cosine 1/3 against the previous direction, orthogonal to all earlier ones
        c = _C / s_prev
        s = math.sqrt(1.0 - c * c)
        v = np.zeros(n)
        v[j - 1], v[j] = c, s
        dirs.append(v)
        s_prev = s
    return dirs


def lines_witness(n) -> WitnessConfig:
    """n lines forming a path of consecutive angles arccos(1/3) and spanning R^n.

    Each new direction lives in span{e_{j-1}, e_j}; the cosine with its
    predecessor is 1/3 and with every earlier line 0, so the orthogonality
    graph is a path.
    """
    _check_n(n)
    lines = tuple(span([d]) for d in _line_directions(n))
    specs = tuple(AngleSpec((j, j + 1), (Fraction(1, 3),)) for j in range(n - 1))
    return WitnessConfig(n, "lines", lines, "lines-irrational-angle", specs)


def hyperplanes_witness(n) -> WitnessConfig:
    """Orthogonal complements of :func:`lines_witness`; angle specs refer to the normals."""
    w = lines_witness(n)
    return WitnessConfig(n, "hyperplanes", tuple(perp(h) for h in w.subspaces),
                         "hyperplanes-irrational-angle", w.angle_specs)


def three_subspace_angles(i):
    """Cosines 1/(2j+1), j = 1..i, of increasing angles in (0, pi/2)."""
    return tuple(Fraction(1, 2 * j + 1) for j in range(1, i + 1))


def _three_subspaces(n, i):
    cos = [float(c) for c in three_subspace_angles(i)]
    sin = [math.sqrt(1.0 - c * c) for c in cos]
    h1 = [_unit(n, 2 * j) for j in range(i)]
    h2 = [cos[j] * _unit(n, 2 * j) + sin[j] * _unit(n, 2 * j + 1) for j in range(i)]
    h3 = [cos[0] * _unit(n, 0) + sin[0] * _unit(n, 2 * i - 1)]
    h3 += [cos[j] * _unit(n, 2 * j) + sin[j] * _unit(n, 2 * j - 1) for j in range(1, i)]
    return [span(h1), span(h2), span(h3)]


def reflection_witness(n, i) -> WitnessConfig:
    """i-dimensional subspaces, 2 <= i <= n-2, whose reflections generate O(n).

    For i <= n/2 the first three subspaces pair e_{2j-1} with e_{2j} and with
    e_{2j-2} at angles arccos(1/(2j+1)); each further subspace tilts
    e_1..e_r by arccos(1/3) towards r fresh coordinates, so it meets the
    complement of the running sum trivially and enlarges it by r.  For
    i > n/2 the (n, n-i) family is built and complemented.
    """
    _check_n(n)
    if not 2 <= i <= n - 2:
        raise BadDimension(f"reflection_witness needs 2 <= i <= n-2, got i={i}, n={n}; "
                           "use lines_witness for i = 1 and hyperplanes_witness for i = n-1")
    if 2 * i > n:
        w = reflection_witness(n, n - i)
        return WitnessConfig(n, "reflection", tuple(perp(h) for h in w.subspaces),
                             "three-subspace-chain-complemented", w.angle_specs)
    subspaces = _three_subspaces(n, i)
    d = 2 * i
    while d < n:
        r = min(i, n - d)
        vecs = [(_C * _unit(n, l) + _S * _unit(n, d + l)) if l < r else _unit(n, l) for l in range(i)]
        subspaces.append(span(vecs))
        d += r
    cos = three_subspace_angles(i)
    specs = (AngleSpec((0, 1), cos), AngleSpec((0, 2), cos))
    return WitnessConfig(n, "reflection", tuple(subspaces), "three-subspace-chain", specs)


def reflection_family(n, i) -> WitnessConfig:
    """Any 1 <= i <= n-1: lines, hyperplanes or the mid-dimensional chain."""
    _check_n(n)
    if i == 1:
        return lines_witness(n)
    if i == n - 1:
        return hyperplanes_witness(n)
    return reflection_witness(n, i)


def rotation_witness(n, i) -> WitnessConfig:
    """ceil(n/(n-i)) subspaces of dim i, 1 <= i <= n-2, with rotational symmetry generating SO(n).

    Works on the complements W_j (dim d = n-i): W_1 = span{e_1..e_d}, and each
    next W tilts e_1..e_r by arccos(1/3) toward r fresh coordinates, so it is
    never orthogonal to W_1 and the complements eventually span R^n.
    """
    _check_n(n, low=3)
    if not 1 <= i <= n - 2:
        raise BadDimension(f"rotation_witness needs 1 <= i <= n-2, got i={i}, n={n}")
    d = n - i
    comps = [coordinate_subspace(n, range(d))]
    s = d
    while s < n:
        r = min(d, n - s)
        vecs = [(_C * _unit(n, l) + _S * _unit(n, s + l)) if l < r else _unit(n, l) for l in range(d)]
        comps.append(span(vecs))
        s += r
    return WitnessConfig(n, "rotation", tuple(perp(w) for w in comps), "rotation-chain")


def counterexample(n, part_dims) -> CounterexampleConfig:
    """Rotation-mode family split into two mutually orthogonal parts.

    ``part_dims`` holds two lists of subspace dimensions.  The complements of
    the first part fill the last coordinates of R^n, those of the second part
    the first coordinates; the blocks must not overlap.  An empty second part
    gives the variant whose complements fail to span.
    """
    _check_n(n, low=3)
    first, second = (list(p) for p in part_dims)
    if not first:
        raise BadPartition("the first part must be nonempty")
    for i in first + second:
        if not 1 <= i <= n - 2:
            raise BadPartition(f"subspace dimension {i} outside [1, {n - 2}]")
    b1 = max(n - i for i in first)
    b2 = max((n - i for i in second), default=0)
    if b1 + b2 > n:
        raise BadPartition(f"complement blocks of sizes {b1} and {b2} overflow R^{n}")
    def complement_of(block):
        return coordinate_subspace(n, [j for j in range(n) if j not in block])

    subspaces = [complement_of(range(n - b1, 2 * n - b1 - i)) for i in first]
    subspaces += [complement_of(range(n - i)) for i in second]
    s1 = total_sum([perp(h) for h in subspaces[: len(first)]])
    s2 = total_sum([perp(h) for h in subspaces[len(first):]]) if second else perp(s1)
    parts = (tuple(range(len(first))), tuple(range(len(first), len(subspaces))))
    return CounterexampleConfig(n, "rotation", tuple(subspaces), parts, (s1, s2))


def duocylinder() -> CounterexampleConfig:
    """span{e1,e2} and span{e3,e4} in R^4; ||x|span{e1,e2}|| is conserved."""
    return counterexample(4, ([2], [2]))


def tetrahedron_fixture() -> CounterexampleConfig:
    """Regular tetrahedron in S^2 with the three lines through midpoints of opposite edges.

    The vertex set is invariant under the reflections in the three lines but
    not under the reflections in their orthogonal planes.
    """
    signs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    vertices = signs / math.sqrt(3.0)
    lines = tuple(coordinate_subspace(3, [j]) for j in range(3))
    return CounterexampleConfig(3, "lines", lines, ((0,), (1, 2)),
                                (lines[0], perp(lines[0])), vertices)

