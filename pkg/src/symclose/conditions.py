"""Hypothesis checkers for generation of O(n) / SO(n) by subspace families.

``evaluate`` dispatches on the family type:

* ``lines`` - reflections in lines: an angle that is an irrational multiple
  of pi, spanning, and no orthogonal bipartition;
* ``hyperplanes`` - the same three conditions on the unit normals;
* ``mid-reflections`` - reflections in i-dimensional subspaces,
  2 <= i <= n-2, matched against the explicit three-subspace construction
  followed by a chain of trivial-intersection extensions;
* ``rotations`` - full rotational symmetry about each subspace: the
  orthogonal complements must span and admit no orthogonal bipartition.

Irrationality of an angle is certified exactly with Niven's theorem when an
exact rational cosine is available; otherwise it is only supported
heuristically by an integer-relation search.
"""

from __future__ import annotations

import enum
import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import mpmath as mp
import numpy as np

from . import _pslq
from ._expr import parse_real
from .errors import AngleSpecMismatch, DimensionMismatch, ModeMismatch, OutOfRange, PrecisionTooLow
from .subspace import intersect, perp, principal_angles, total_sum

TAU_ORTH_EDGE = 1e-9
ANGLE_MATCH_TOL = 1e-9
PATTERN_TOL = 1e-7
DEFAULT_BOUND = 10_000
DEFAULT_DIGITS = 64
FLOAT_DIGITS = 15

# cos(theta) rational and theta/pi rational forces cos(theta) in this table
_NIVEN = {
    Fraction(1): Fraction(0),
    Fraction(1, 2): Fraction(1, 3),
    Fraction(0): Fraction(1, 2),
    Fraction(-1, 2): Fraction(2, 3),
    Fraction(-1): Fraction(1),
}


class Mode(str, enum.Enum):
    LINES = "lines"
    HYPERPLANES = "hyperplanes"
    MID_REFLECTIONS = "mid-reflections"
    ROTATIONS = "rotations"


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    HEURISTIC = "heuristic"
    INCONCLUSIVE = "inconclusive"


_SEVERITY = {Status.PASS: 0, Status.HEURISTIC: 1, Status.INCONCLUSIVE: 2, Status.FAIL: 3}


# --- orthogonality graph -------------------------------------------------


@dataclass(frozen=True)
class OrthogonalityGraph:
    node_count: int
    edges: frozenset
    components: tuple

    @property
    def connected(self) -> bool:
        return len(self.components) <= 1

    def bipartition(self):
        """An orthogonal split (first component, the rest), or None when connected."""
        if self.connected:
            return None
        first = self.components[0]
        rest = tuple(sorted(v for c in self.components[1:] for v in c))
        return first, rest


def _common_ambient(subspaces):
    subspaces = list(subspaces)
    if not subspaces:
        raise ValueError("need at least one subspace")
    n = subspaces[0].ambient_dim
    if any(h.ambient_dim != n for h in subspaces):
        raise DimensionMismatch("subspaces live in different ambient dimensions")
    return subspaces, n


def orthogonality_graph(subspaces, tol=TAU_ORTH_EDGE) -> OrthogonalityGraph:
    """Nodes are subspaces, edges join pairs that are not mutually orthogonal."""
    subspaces, _ = _common_ambient(subspaces)
    k = len(subspaces)
    edges = set()
    adj = {v: [] for v in range(k)}
    for p, q in combinations(range(k), 2):
        a, b = subspaces[p].basis, subspaces[q].basis
        if a.size and b.size and np.max(np.abs(a @ b.T)) > tol:
            edges.add((p, q))
            adj[p].append(q)
            adj[q].append(p)
    seen = set()
    comps = []
    for start in range(k):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return OrthogonalityGraph(k, frozenset(edges), tuple(comps))


class SpanCheck(NamedTuple):
    rank: int
    spans: bool


def spanning_check(subspaces) -> SpanCheck:
    subspaces, n = _common_ambient(subspaces)
    r = total_sum(subspaces).dim
    return SpanCheck(r, r == n)


# --- exact certificates -------------------------------------------------------


@dataclass(frozen=True)
class AngleCertificate:
    cosine: Fraction
    status: str  # irrational-multiple-of-pi | rational-multiple-of-pi | unknown
    multiple: Fraction | None = None
    squared: bool = False

    @property
    def irrational(self) -> bool:
        return self.status == "irrational-multiple-of-pi"

    def to_dict(self):
        out = {"status": self.status, "cosine" + ("_squared" if self.squared else ""): str(self.cosine)}
        if self.multiple is not None:
            out["multiple_of_pi"] = str(self.multiple)
        return out


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("exact certification needs a rational, not a float")
    return Fraction(value)


def certify_irrational_angle(cosine) -> AngleCertificate:
    """Certify whether arccos(p/q) is an irrational multiple of pi (Niven).

    A float cosine carries no exactness and yields status ``unknown``.
    """
    if isinstance(cosine, (float, np.floating)):
        if abs(cosine) > 1:
            raise OutOfRange(f"|cos| = {abs(cosine)} exceeds 1")
        return AngleCertificate(Fraction(float(cosine)), "unknown")
    c = _as_fraction(cosine)
    if abs(c) > 1:
        raise OutOfRange(f"|cos| = {abs(c)} exceeds 1")
    if c in _NIVEN:
        return AngleCertificate(c, "rational-multiple-of-pi", _NIVEN[c])
    return AngleCertificate(c, "irrational-multiple-of-pi")


def certify_from_cos_squared(cos_squared) -> AngleCertificate:
    """Same verdict for an angle in [0, pi/2] known through its squared cosine.

    cos(2a) = 2 cos^2(a) - 1 is rational, and a is a rational multiple of pi
    exactly when 2a is.
    """
    c2 = _as_fraction(cos_squared)
    if not 0 <= c2 <= 1:
        raise OutOfRange(f"cos^2 = {c2} outside [0, 1]")
    double = certify_irrational_angle(2 * c2 - 1)
    if double.irrational:
        return AngleCertificate(c2, "irrational-multiple-of-pi", squared=True)
    mult = double.multiple / 2
    return AngleCertificate(c2, "rational-multiple-of-pi", mult, squared=True)


# --- heuristic independence -----------------------------------------------------


@dataclass(frozen=True)
class IndependenceVerdict:
    values: tuple
    status: str  # relation-found | no-relation | unknown
    relation_found: tuple | None
    searched_bound: int
    precision_digits: int

    def to_dict(self):
        return {
            "values": list(self.values),
            "status": self.status,
            "relation_found": None if self.relation_found is None else list(self.relation_found),
            "searched_bound": self.searched_bound,
            "precision_digits": self.precision_digits,
        }


_DECIMAL = re.compile(r"^\s*[+-]?(\d*)\.?(\d*)(?:[eE][+-]?\d+)?\s*$")


def _to_mpf(value):
    if isinstance(value, str):
        m = _DECIMAL.match(value)
        if m and (m.group(1) or m.group(2)):
            # a decimal literal only carries its own significant digits
            digits = (m.group(1) + m.group(2)).lstrip("0")
            return parse_real(value), max(len(digits), 1)
        return parse_real(value), None
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator, None
    if isinstance(value, (float, np.floating)):
        return mp.mpf(float(value)), FLOAT_DIGITS
    if isinstance(value, (int, np.integer)):
        return mp.mpf(int(value)), None
    return mp.mpf(value), None


def _normalise_relation(rel):
    g = 0
    for c in rel:
        g = math.gcd(g, abs(c))
    rel = [c // g for c in rel] if g else list(rel)
    first = next((c for c in rel if c), 0)
    return tuple(-c for c in rel) if first < 0 else tuple(rel)


def heuristic_independence(angles, bound=DEFAULT_BOUND, precision_digits=DEFAULT_DIGITS,
                           deadline_ms=None) -> IndependenceVerdict:
    """Integer-relation search on (pi, angles...).

    Angles may be floats, exact Fractions, mpmath numbers, or strings such as
    ``"acos(1/3)"`` evaluated at the working precision.  Floats carry only
    ~15 significant digits, which lowers the effective precision and with it
    the coefficient bound that can be searched without spurious hits
    (``searched_bound`` reports what was actually searched).

    A found relation refutes independence.  Absence of a relation is only
    evidence.  ``deadline_ms`` makes the search give up with status
    ``unknown``.
    """
    angles = list(angles)
    if not angles:
        raise ValueError("need at least one angle")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if precision_digits < 16:
        raise PrecisionTooLow(f"precision_digits must be >= 16, got {precision_digits}")
    deadline = None if deadline_ms is None else time.monotonic() + deadline_ms / 1000.0
    with mp.workdps(precision_digits + 10):
        values, effective = [+mp.pi], precision_digits
        for a in angles:
            v, limit = _to_mpf(a)
            if limit is not None:
                effective = min(effective, limit)
            if not 0 < v < mp.pi / 2:
                raise OutOfRange(f"angle {mp.nstr(v, 17)} outside (0, pi/2)")
            values.append(v)
        d = len(values)
        cap = int(10 ** (effective / (2 * (d - 1))) / 10)
        searched = max(1, min(int(bound), cap))
        tol = mp.mpf(10) ** (-mp.mpf(effective) / 2)
        shown = tuple(mp.nstr(v, 20) for v in values[1:])
        try:
            rel = _pslq.pslq(values, tol, searched, deadline=deadline)
        except _pslq.DeadlineExceeded:
            return IndependenceVerdict(shown, "unknown", None, searched, effective)
        if rel is not None:
            rel = _normalise_relation(rel)
            if abs(mp.fsum(c * v for c, v in zip(rel, values))) >= tol or max(map(abs, rel)) > searched:
                rel = None
    if rel is None:
        return IndependenceVerdict(shown, "no-relation", None, searched, effective)
    return IndependenceVerdict(shown, "relation-found", rel, searched, effective)


# --- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class AngleSpec:
    """Exact cosines of the principal angles between members ``pair`` of a family.

    Cosines are listed for increasing angles (decreasing cosine).  Signs are
    ignored: only |cos| is compared with the computed angles.
    """

    pair: tuple
    cosines: tuple

    def __post_init__(self):
        object.__setattr__(self, "pair", tuple(int(p) for p in self.pair))
        object.__setattr__(self, "cosines", tuple(_as_fraction(c) for c in self.cosines))

    def to_dict(self):
        return {"pair": list(self.pair), "cos": [str(c) for c in self.cosines]}


@dataclass(frozen=True)
class HypothesisVerdict:
    name: str
    status: Status
    detail: str = ""
    witness: dict | None = None

    def to_dict(self):
        out = {"name": self.name, "status": self.status.value, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ConditionReport:
    mode: Mode
    hypotheses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def overall(self) -> Status:
        worst = Status.PASS
        for h in self.hypotheses:
            if _SEVERITY[h.status] > _SEVERITY[worst]:
                worst = h.status
        return worst

    def verdict(self, name) -> HypothesisVerdict:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def to_dict(self):
        return {
            "mode": self.mode.value,
            "overall": self.overall.value,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "notes": list(self.notes),
        }


# --- evaluation --------------------------------------------------------------


def _check_specs(family, specs):
    """Verify declared cosines against the computed principal angles."""
    checked = []
    for spec in specs:
        p, q = spec.pair
        if not (0 <= p < len(family) and 0 <= q < len(family)) or p == q:
            raise AngleSpecMismatch(f"angle spec pair {spec.pair} does not index two members")
        h1, h2 = family[p], family[q]
        if h1.dim < h2.dim:
            h1, h2 = h2, h1
        cos = np.cos(principal_angles(h1, h2).angles)
        declared = np.array(sorted((abs(float(c)) for c in spec.cosines), reverse=True))
        if declared.shape != cos.shape or np.max(np.abs(declared - cos)) > ANGLE_MATCH_TOL:
            raise AngleSpecMismatch(
                f"declared cosines {[str(c) for c in spec.cosines]} for pair {spec.pair} "
                f"do not match computed {np.round(cos, 12).tolist()}"
            )
        checked.append(spec)
    return checked


def _line_angle_hypothesis(lines, specs, exact, bound, deadline_ms):
    name = "(i) irrational angle"
    rational_pairs = []
    for spec in specs:
        cert = certify_irrational_angle(abs(spec.cosines[0]))
        if cert.irrational:
            return HypothesisVerdict(name, Status.PASS, "certified by an exact rational cosine",
                                     {"pair": list(spec.pair), **cert.to_dict()})
        rational_pairs.append(spec.pair)
    decided = set(rational_pairs)
    k = len(lines)
    if exact is not None:
        for p, q in combinations(range(k), 2):
            if exact[p] is None or exact[q] is None or (p, q) in decided:
                continue
            u, v = [Fraction(t) for t in exact[p]], [Fraction(t) for t in exact[q]]
            uu, vv = sum(t * t for t in u), sum(t * t for t in v)
            uv = sum(s * t for s, t in zip(u, v))
            cert = certify_from_cos_squared(uv * uv / (uu * vv))
            if cert.irrational:
                return HypothesisVerdict(name, Status.PASS, "certified by exact rational directions",
                                         {"pair": [p, q], **cert.to_dict()})
            decided.add((p, q))
            rational_pairs.append((p, q))
    for p, q in combinations(range(k), 2):
        if (p, q) in decided:
            continue
        angle = float(principal_angles(lines[p], lines[q]).angles[0])
        if angle < 1e-12 or abs(angle - np.pi / 2) < 1e-12:
            rational_pairs.append((p, q))
            continue
        verdict = heuristic_independence([angle], bound=bound, deadline_ms=deadline_ms)
        if verdict.status == "relation-found":
            rational_pairs.append((p, q))
            continue
        return HypothesisVerdict(name, Status.HEURISTIC,
                                 f"no integer relation between pi and the angle of pair ({p}, {q})",
                                 {"pair": [p, q], "angle": angle, "search": verdict.to_dict()})
    return HypothesisVerdict(name, Status.FAIL, "every pair forms a rational multiple of pi",
                             {"pairs": [list(pq) for pq in rational_pairs[:20]]})


def _span_hypothesis(name, family):
    sc = spanning_check(family)
    if sc.spans:
        return HypothesisVerdict(name, Status.PASS, f"rank {sc.rank}")
    return HypothesisVerdict(name, Status.FAIL, f"rank {sc.rank} < {family[0].ambient_dim}",
                             {"rank": sc.rank})


def _partition_hypothesis(name, family):
    g = orthogonality_graph(family)
    split = g.bipartition()
    if split is None:
        return HypothesisVerdict(name, Status.PASS, "orthogonality graph is connected")
    return HypothesisVerdict(name, Status.FAIL, "family splits into two mutually orthogonal parts",
                             {"bipartition": [list(split[0]), list(split[1])]})


def match_three_subspace_pattern(h1, h2, h3, tol=PATTERN_TOL):
    """Check (H1, H2, H3) against the explicit three-subspace construction.

    Up to an orthogonal change of coordinates the construction reads
    ``H1 = span{e1, e3, ..., e_{2i-1}}``, ``H2`` pairs ``e_{2j-1}`` with
    ``e_{2j}`` at angle ``a_j`` and ``H3`` pairs it with ``e_{2j-2}``
    (``e1`` with ``e_{2i}``) at the same angle.  Returns ``(ok, detail,
    angles)``.  Signs of the partner directions are not constrained.
    """
    i = h1.dim
    if not (h2.dim == h3.dim == i):
        return False, "subspaces differ in dimension", None
    d12, d13 = principal_angles(h1, h2), principal_angles(h1, h3)
    a = d12.angles
    if np.min(a) <= tol or np.max(a) >= np.pi / 2 - tol:
        return False, "angles between H1 and H2 must lie strictly inside (0, pi/2)", a
    if i > 1 and np.min(np.diff(a)) <= tol:
        return False, "angles between H1 and H2 are not distinct", a
    if np.max(np.abs(d13.angles - a)) > tol:
        return False, "H1-H3 angles differ from the H1-H2 angles", a
    e2, e3 = d12.adapted_basis, d13.adapted_basis
    for j in range(i):
        if abs(abs(e2[j] @ e3[j]) - 1) > tol:
            return False, f"principal direction {j + 1} in H1 differs between H2 and H3", a
        f3 = e3[d13.partner(j)]
        f2 = e2[d12.partner((j - 1) % i)]
        if abs(abs(f3 @ f2) - 1) > tol:
            return False, f"partner of direction {j + 1} in H3 is not the shifted partner from H2", a
    return True, "matches the three-subspace construction", a


def _mid_hypotheses(family, specs, bound, deadline_ms):
    out = []
    k = len(family)
    if k < 3:
        out.append(HypothesisVerdict("(i) three-subspace pattern", Status.INCONCLUSIVE,
                                     "needs at least three subspaces"))
    else:
        ok, detail, angles = match_three_subspace_pattern(*family[:3])
        if not ok:
            out.append(HypothesisVerdict("(i) three-subspace pattern", Status.INCONCLUSIVE, detail))
        else:
            out.append(HypothesisVerdict("(i) three-subspace pattern", Status.PASS, detail,
                                         {"angles": angles.tolist()}))
            spec = next((s for s in specs if set(s.pair) == {0, 1}), None)
            if spec is not None:
                with mp.workdps(DEFAULT_DIGITS + 10):
                    cosines = sorted((abs(c) for c in spec.cosines), reverse=True)
                    values = [mp.acos(mp.mpf(c.numerator) / c.denominator) for c in cosines]
                source = "exact cosines"
            else:
                values = [float(t) for t in angles]
                source = "floating-point angles"
            v = heuristic_independence(values, bound=bound, deadline_ms=deadline_ms)
            status = {"relation-found": Status.FAIL, "no-relation": Status.HEURISTIC,
                      "unknown": Status.INCONCLUSIVE}[v.status]
            out.append(HypothesisVerdict("(i) independence of pi and the angles", status,
                                         f"integer-relation search on {source}", v.to_dict()))
    out.append(_span_hypothesis("(ii) spanning", family))
    failures = []
    for j in range(3, k):
        prefix = total_sum(family[:j])
        if intersect(family[j], perp(prefix)).dim:
            failures.append(j)
    if failures:
        out.append(HypothesisVerdict("(iii) trivial intersection chain", Status.INCONCLUSIVE,
                                     "a later subspace meets the complement of the earlier sum",
                                     {"members": failures}))
    else:
        out.append(HypothesisVerdict("(iii) trivial intersection chain", Status.PASS,
                                     f"checked {max(0, k - 3)} extension steps"))
    return out


def resolve_mode(mode, subspaces) -> Mode:
    """Map user-facing mode names (including ``reflection``) to a Mode."""
    if isinstance(mode, Mode):
        return mode
    if mode == "rotation":
        return Mode.ROTATIONS
    if mode == "reflection":
        n = subspaces[0].ambient_dim
        dims = {h.dim for h in subspaces}
        if dims == {1}:
            return Mode.LINES
        if dims == {n - 1}:
            return Mode.HYPERPLANES
        return Mode.MID_REFLECTIONS
    return Mode(mode)


def _check_mode(mode, subspaces, n):
    dims = [h.dim for h in subspaces]
    if mode is Mode.LINES and any(d != 1 for d in dims):
        raise ModeMismatch("lines mode needs every subspace to be one-dimensional")
    if mode is Mode.HYPERPLANES and any(d != n - 1 for d in dims):
        raise ModeMismatch(f"hyperplanes mode needs every subspace to have dimension {n - 1}")
    if mode is Mode.MID_REFLECTIONS:
        if len(set(dims)) != 1 or not 2 <= dims[0] <= n - 2:
            raise ModeMismatch("mid-reflections mode needs a common dimension i with 2 <= i <= n-2")
    if mode is Mode.ROTATIONS and any(not 1 <= d <= n - 2 for d in dims):
        raise ModeMismatch("rotations mode needs every dimension in [1, n-2]")


def evaluate(subspaces, mode, angle_specs=(), exact_directions=None, bound=DEFAULT_BOUND,
             deadline_ms=None, closure_report=None) -> ConditionReport:
    """Fill a ConditionReport for ``subspaces`` under ``mode``.

    ``angle_specs`` declare exact cosines for pairs of the family that is
    actually checked (the normals in hyperplanes mode, the complements in
    mid-reflections mode when i > n/2).  ``exact_directions`` optionally
    gives rational direction vectors of those lines (None entries allowed).
    ``closure_report`` from :func:`symclose.isometry.finite_closure` only adds
    an informational note.
    """
    subspaces, n = _common_ambient(subspaces)
    mode = resolve_mode(mode, subspaces)
    _check_mode(mode, subspaces, n)
    report = ConditionReport(mode)

    if mode in (Mode.LINES, Mode.HYPERPLANES):
        family = subspaces if mode is Mode.LINES else [perp(h) for h in subspaces]
        specs = _check_specs(family, angle_specs)
        report.hypotheses = [
            _line_angle_hypothesis(family, specs, exact_directions, bound, deadline_ms),
            _span_hypothesis("(ii) spanning", family),
            _partition_hypothesis("(iii) no orthogonal bipartition", family),
        ]
        first = report.hypotheses[0]
        if first.status is not Status.PASS and closure_report is not None and not closure_report.finite:
            if mode is Mode.HYPERPLANES:
                report.notes.append(
                    "the reflections generated more than the closure cap of distinct elements, "
                    "evidence that they lie in no finite Coxeter group; for hyperplanes that "
                    "weaker condition already suffices together with (ii) and (iii)")
            else:
                report.notes.append(
                    "the reflections generated more than the closure cap of distinct elements; "
                    "whether the non-Coxeter condition can replace (i) for lines is not known")
    elif mode is Mode.MID_REFLECTIONS:
        i = subspaces[0].dim
        family = subspaces
        if 2 * i > n:
            family = [perp(h) for h in subspaces]
            report.notes.append("i > n/2: hypotheses checked on the orthogonal complements")
        specs = _check_specs(family, angle_specs)
        report.hypotheses = _mid_hypotheses(family, specs, bound, deadline_ms)
        report.notes.append("a pass certifies the sufficient conditions only; mid-dimensional "
                            "families failing them may still generate O(n)")
    else:
        family = [perp(h) for h in subspaces]
        report.hypotheses = [
            _span_hypothesis("(a) complements span", family),
            _partition_hypothesis("(b) complements admit no orthogonal bipartition", family),
        ]
    return report
