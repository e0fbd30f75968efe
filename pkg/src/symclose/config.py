"""JSON run configurations: parsing with located errors, and emission.

Layout::

    {"n": 3, "mode": "lines",
     "subspaces": [[[1, 0, 0]], [["1/3", 0.9428090415820634, 0]], ...],
     "options": {"angle_specs": [{"pair": [0, 1], "cos": ["1/3"]}], "budget": 100000}}

Each subspace is a list of spanning vectors.  Entries are JSON numbers or
strings holding an exact rational such as ``"1/3"``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

import numpy as np

from .conditions import AngleSpec
from .errors import ParseError
from .subspace import MAX_AMBIENT_DIM, Subspace, span

MODES = ("reflection", "rotation", "lines", "hyperplanes")
POLICIES = ("random-words", "random-walk", "bfs")


@dataclass
class Options:
    angle_specs: list = field(default_factory=list)
    budget: int = 100_000
    threshold: float = 0.15
    seed: int = 0
    probes: int = 2000
    probe_seed: int = 0
    word_length: int = 32
    policy: str = "random-words"
    min_points: int = 1000
    seed_point: list | None = None
    cap: int = 10_000
    dedup_tol: float = 1e-6
    bound: int = 10_000
    deadline_ms: int | None = None

    def to_dict(self):
        out = asdict(self)
        out["angle_specs"] = [s.to_dict() for s in self.angle_specs]
        return out


_OPTION_TYPES = {
    "budget": int, "seed": int, "probes": int, "probe_seed": int, "word_length": int,
    "min_points": int, "cap": int, "bound": int,
    "threshold": float, "dedup_tol": float,
}


@dataclass
class RunConfig:
    n: int
    mode: str
    subspaces: list
    raw_subspaces: list
    options: Options = field(default_factory=Options)

    def exact_directions(self):
        """Rational direction vectors for one-vector subspaces given exactly, else None."""
        out = []
        for vecs in self.raw_subspaces:
            if len(vecs) == 1 and all(isinstance(t, (int, str)) for t in vecs[0]):
                out.append(tuple(Fraction(t) for t in vecs[0]))
            else:
                out.append(None)
        return out

    def to_dict(self):
        return {"n": self.n, "mode": self.mode, "subspaces": self.raw_subspaces,
                "options": self.options.to_dict()}


def _entry(value, where):
    if isinstance(value, bool):
        raise ParseError("expected a number or a rational string", where)
    if isinstance(value, int):
        return value, float(value)
    if isinstance(value, float):
        if not np.isfinite(value):
            raise ParseError("entry is not finite", where)
        return value, value
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {value!r} as a rational", where) from None
        return value.strip(), float(q)
    raise ParseError("expected a number or a rational string", where)


def _int(value, where, low=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError("expected an integer", where)
    if low is not None and value < low:
        raise ParseError(f"must be >= {low}", where)
    return value


def _options(raw, k) -> Options:
    if raw is None:
        return Options()
    if not isinstance(raw, dict):
        raise ParseError("expected an object", "options")
    known = {f.name for f in fields(Options)}
    opts = Options()
    for key, value in raw.items():
        where = f"options.{key}"
        if key not in known:
            raise ParseError("unknown option", where)
        if key in _OPTION_TYPES:
            if _OPTION_TYPES[key] is int:
                value = _int(value, where, low=0)
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError("expected a number", where)
            else:
                value = float(value)
        elif key == "policy":
            if value not in POLICIES:
                raise ParseError(f"expected one of {', '.join(POLICIES)}", where)
        elif key == "deadline_ms":
            value = None if value is None else _int(value, where, low=1)
        elif key == "seed_point":
            if value is not None:
                if not isinstance(value, list):
                    raise ParseError("expected a list of numbers", where)
                value = [_entry(t, f"{where}[{j}]")[1] for j, t in enumerate(value)]
        elif key == "angle_specs":
            value = _angle_specs(value, k)
        setattr(opts, key, value)
    return opts


def _angle_specs(raw, k):
    if not isinstance(raw, list):
        raise ParseError("expected a list", "options.angle_specs")
    specs = []
    for j, item in enumerate(raw):
        where = f"options.angle_specs[{j}]"
        if not isinstance(item, dict) or set(item) != {"pair", "cos"}:
            raise ParseError('expected {"pair": [p, q], "cos": [...]}', where)
        pair = item["pair"]
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(p, int) and 0 <= p < k for p in pair) or pair[0] == pair[1]):
            raise ParseError(f"pair must hold two distinct indices below {k}", where + ".pair")
        cos = item["cos"]
        if not isinstance(cos, list) or not cos:
            raise ParseError("expected a nonempty list", where + ".cos")
        exact = []
        for t, c in enumerate(cos):
            if isinstance(c, float) or isinstance(c, bool):
                raise ParseError("declared cosines must be exact (integer or \"p/q\")", f"{where}.cos[{t}]")
            try:
                exact.append(Fraction(c))
            except (ValueError, TypeError, ZeroDivisionError):
                raise ParseError(f"cannot read {c!r} as a rational", f"{where}.cos[{t}]") from None
        specs.append(AngleSpec(tuple(pair), tuple(exact)))
    return specs


def parse_config(data) -> RunConfig:
    """Validate a decoded JSON object."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    for key in ("n", "mode", "subspaces"):
        if key not in data:
            raise ParseError("missing required key", key)
    extra = set(data) - {"n", "mode", "subspaces", "options"}
    if extra:
        raise ParseError("unknown key", sorted(extra)[0])
    n = _int(data["n"], "n", low=2)
    if n > MAX_AMBIENT_DIM:
        raise ParseError(f"must be <= {MAX_AMBIENT_DIM}", "n")
    mode = data["mode"]
    if mode not in MODES:
        raise ParseError(f"expected one of {', '.join(MODES)}", "mode")
    raw = data["subspaces"]
    if not isinstance(raw, list) or not raw:
        raise ParseError("expected a nonempty list of subspaces", "subspaces")
    subspaces, echo = [], []
    for p, vecs in enumerate(raw):
        if not isinstance(vecs, list) or not vecs:
            raise ParseError("expected a nonempty list of vectors", f"subspaces[{p}]")
        rows, kept = [], []
        for q, vec in enumerate(vecs):
            where = f"subspaces[{p}][{q}]"
            if not isinstance(vec, list):
                raise ParseError("expected a list of numbers", where)
            if len(vec) != n:
                raise ParseError(f"vector has length {len(vec)}, expected {n}", where)
            pairs = [_entry(t, f"{where}[{c}]") for c, t in enumerate(vec)]
            kept.append([a for a, _ in pairs])
            rows.append([b for _, b in pairs])
        h = span(np.array(rows), n)
        if h.dim == 0:
            raise ParseError("vectors span only the zero subspace", f"subspaces[{p}]")
        subspaces.append(h)
        echo.append(kept)
    return RunConfig(n, mode, subspaces, echo, _options(data.get("options"), len(subspaces)))


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return parse_config(data)


def family_to_config(n, mode, subspaces: list[Subspace], angle_specs=(), **options) -> dict:
    """A config dict for ``subspaces`` whose bases are written as floats."""
    out = {
        "n": int(n),
        "mode": mode,
        "subspaces": [[[float(t) for t in row] for row in h.basis] for h in subspaces],
    }
    opts = dict(options)
    if angle_specs:
        opts["angle_specs"] = [s.to_dict() for s in angle_specs]
    if opts:
        out["options"] = opts
    return out


def witness_to_config(w) -> dict:
    return family_to_config(w.ambient_dim, w.mode, list(w.subspaces), getattr(w, "angle_specs", ()))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
