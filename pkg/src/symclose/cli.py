"""Command-line interface: ``symclose {check,generate,orbit,closure,certify}``.

Every command prints a JSON report on stdout.  Exit code 3 always means an
input error; the other codes are command specific (see ``--help``).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .conditions import (
    Mode,
    Status,
    certify_irrational_angle,
    evaluate,
    heuristic_independence,
    orthogonality_graph,
    resolve_mode,
)
from .config import dumps, load_config, witness_to_config
from .errors import ModeMismatch, ParseError, SymcloseError
from .isometry import finite_closure, reflection
from .orbit import OrbitBFS, RandomWalk, RandomWords, StabilizerSpec, density_verdict, sample_orbit
from .subspace import full_space, perp, subsphere, total_sum
from .witness import hyperplanes_witness, lines_witness, reflection_witness, rotation_witness

EXIT_INPUT = 3
_CHECK_EXIT = {Status.PASS: 0, Status.FAIL: 1, Status.HEURISTIC: 2, Status.INCONCLUSIVE: 2}
_ORBIT_EXIT = {"dense": 0, "confined": 1, "inconclusive": 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _report(command, config=None, started=None, **parts):
    out = {"artifact_version": __version__, "command": command}
    if config is not None:
        out["config"] = config
    for key, value in parts.items():
        out[key] = value
    out["wall_time_ms"] = round(1000 * (time.perf_counter() - started), 3)
    return out


def _emit(report):
    sys.stdout.write(dumps(report))


def _reflection_maps(cfg):
    if cfg.mode == "rotation":
        raise ModeMismatch("rotation-mode configs have no reflection generators")
    return [reflection(h) for h in cfg.subspaces]


def _closure(cfg):
    return finite_closure(_reflection_maps(cfg), cfg.options.cap, cfg.options.dedup_tol)


def cmd_check(args):
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    if args.bound is not None:
        cfg.options.bound = args.bound
    if args.deadline_ms is not None:
        cfg.options.deadline_ms = args.deadline_ms
    mode = resolve_mode(cfg.mode, cfg.subspaces)
    exact = cfg.exact_directions() if mode is Mode.LINES else None
    report = evaluate(cfg.subspaces, mode, cfg.options.angle_specs, exact,
                      bound=cfg.options.bound, deadline_ms=cfg.options.deadline_ms)
    closure = None
    if mode in (Mode.LINES, Mode.HYPERPLANES) and report.hypotheses[0].status is not Status.PASS:
        closure = _closure(cfg)
        report = evaluate(cfg.subspaces, mode, cfg.options.angle_specs, exact,
                          bound=cfg.options.bound, deadline_ms=cfg.options.deadline_ms,
                          closure_report=closure)
    _emit(_report("check", cfg.to_dict(), t0, condition_report=report.to_dict(),
                  finite_closure_report=None if closure is None else closure.to_dict()))
    return _CHECK_EXIT[report.overall]


def cmd_generate(args):
    n, i, mode = args.n, args.i, args.mode
    if mode == "reflection":
        w = reflection_witness(n, i)
    elif mode == "rotation":
        w = rotation_witness(n, i)
    elif mode == "lines":
        if i != 1:
            raise ModeMismatch("lines witnesses have i = 1")
        w = lines_witness(n)
    else:
        if i != n - 1:
            raise ModeMismatch(f"hyperplane witnesses have i = n-1 = {n - 1}")
        w = hyperplanes_witness(n)
    text = dumps(witness_to_config(w))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        sys.stderr.write(f"wrote {w.k} subspaces to {args.output}\n")
    else:
        sys.stdout.write(text)
    return 0


def default_seed_point(n):
    x = np.arange(1, n + 1, dtype=float)
    return x / np.linalg.norm(x)


def _conserved_candidates(cfg):
    n = cfg.n
    acting = [perp(h) for h in cfg.subspaces] if cfg.mode == "rotation" else list(cfg.subspaces)
    out = []
    for j, h in enumerate(cfg.subspaces):
        out.append((f"|x|H{j + 1}|", h))
        out.append((f"|x|H{j + 1}^perp|", perp(h)))
    graph = orthogonality_graph(acting)
    if not graph.connected:
        for comp in graph.components:
            label = "+".join(f"{'W' if cfg.mode == 'rotation' else 'H'}{c + 1}" for c in comp)
            out.append((f"|x|span({label})|", total_sum([acting[c] for c in comp])))
    s = total_sum(acting)
    if s.dim < n:
        out.append(("|x|sum|", s))
        out.append(("|x|sum^perp|", perp(s)))
    return out


def cmd_orbit(args):
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    o = cfg.options
    for key in ("budget", "threshold", "seed", "probes", "probe_seed", "word_length", "policy", "min_points"):
        value = getattr(args, key)
        if value is not None:
            setattr(o, key, value)
    if o.budget < 1:
        raise ParseError("must be >= 1", "budget")
    if o.threshold <= 0:
        raise ParseError("must be positive", "threshold")
    if cfg.mode == "rotation":
        gens = [StabilizerSpec(h) for h in cfg.subspaces]
    else:
        gens = [reflection(h) for h in cfg.subspaces]
    if o.seed_point is None:
        x = default_seed_point(cfg.n)
    else:
        x = np.array(o.seed_point, dtype=float)
        if x.shape != (cfg.n,):
            raise ParseError(f"expected {cfg.n} coordinates", "options.seed_point")
        norm = np.linalg.norm(x)
        if norm == 0:
            raise ParseError("seed point is zero", "options.seed_point")
        if abs(norm - 1.0) > 1e-12:
            x = x / norm
    policy = {"random-words": RandomWords(o.word_length, o.seed), "random-walk": RandomWalk(o.seed),
              "bfs": OrbitBFS()}[o.policy]
    sample = sample_orbit(gens, x, o.budget, policy)
    target = subsphere(full_space(cfg.n), x)
    density = density_verdict(sample, target, o.threshold, _conserved_candidates(cfg),
                              probe_count=o.probes, probe_seed=o.probe_seed, min_points=o.min_points)
    if args.export:
        with open(args.export, "w", encoding="utf-8", newline="\n") as fh:
            for p in sample.points:
                fh.write(",".join(format(float(t), ".17g") for t in p) + "\n")
    echo = cfg.to_dict()
    echo["options"]["seed_point"] = [float(t) for t in x]
    _emit(_report("orbit", echo, t0, density_report=density.to_dict(),
                  word_policy=sample.word_policy, budget_used=sample.budget_used))
    return _ORBIT_EXIT[density.verdict]


def cmd_closure(args):
    t0 = time.perf_counter()
    cfg = load_config(args.config)
    if args.cap is not None:
        cfg.options.cap = args.cap
    if args.tol is not None:
        cfg.options.dedup_tol = args.tol
    result = _closure(cfg)
    _emit(_report("closure", cfg.to_dict(), t0, finite_closure_report=result.to_dict()))
    return 1 if result.finite else 0


def _read_angles(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            items = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
        if not isinstance(items, list) or not items:
            raise ParseError("expected a nonempty JSON list of angles")
        return [repr(v) if isinstance(v, float) else str(v) for v in items]
    angles = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            angles.append(line)
    if not angles:
        raise ParseError("no angles found", path)
    return angles


def cmd_certify(args):
    t0 = time.perf_counter()
    if args.cos is not None:
        try:
            c = Fraction(args.cos.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {args.cos!r} as a rational", "--cos") from None
        cert = certify_irrational_angle(c)
        _emit(_report("certify", {"cos": str(c)}, t0, certificate=cert.to_dict()))
        return 0 if cert.irrational else 1
    angles = _read_angles(args.angles_file)
    try:
        verdict = heuristic_independence(angles, bound=args.bound, precision_digits=args.digits,
                                         deadline_ms=args.deadline_ms)
    except ValueError as exc:
        if isinstance(exc, SymcloseError):
            raise
        raise ParseError(str(exc), args.angles_file) from None
    echo = {"angles": angles, "bound": args.bound, "digits": args.digits, "deadline_ms": args.deadline_ms}
    _emit(_report("certify", echo, t0, independence=verdict.to_dict()))
    return {"no-relation": 0, "relation-found": 1, "unknown": 2}[verdict.status]


def build_parser():
    p = _Parser(prog="symclose", description="Check, construct and test subspace families whose "
                "reflections or rotational symmetries generate O(n) or SO(n).")
    p.add_argument("--version", action="version", version=f"symclose {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="evaluate the generation hypotheses (exit 0 pass, 1 fail, "
                       "2 heuristic or inconclusive)")
    c.add_argument("config")
    c.add_argument("--bound", type=int, help="coefficient bound for integer-relation searches")
    c.add_argument("--deadline-ms", type=int)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("generate", help="write a witness family as a config file")
    g.add_argument("n", type=int)
    g.add_argument("i", type=int)
    g.add_argument("mode", choices=["reflection", "rotation", "lines", "hyperplanes"])
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    o = sub.add_parser("orbit", help="sample an orbit and judge density (exit 0 dense, 1 confined, "
                       "2 inconclusive)")
    o.add_argument("config")
    o.add_argument("--budget", type=int)
    o.add_argument("--threshold", type=float)
    o.add_argument("--seed", type=int)
    o.add_argument("--probes", type=int)
    o.add_argument("--probe-seed", type=int)
    o.add_argument("--word-length", type=int)
    o.add_argument("--policy", choices=["random-words", "random-walk", "bfs"])
    o.add_argument("--min-points", type=int)
    o.add_argument("--export", metavar="CSV", help="write the orbit points as CSV")
    o.set_defaults(func=cmd_orbit)

    cl = sub.add_parser("closure", help="enumerate the group generated by the reflections "
                        "(exit 0 exceeded cap, 1 finite)")
    cl.add_argument("config")
    cl.add_argument("--cap", type=int)
    cl.add_argument("--tol", type=float)
    cl.set_defaults(func=cmd_closure)

    ce = sub.add_parser("certify", help="certify an angle or search integer relations (exit 0 "
                        "certified or no relation, 1 rational or relation, 2 unknown)")
    src = ce.add_mutually_exclusive_group(required=True)
    src.add_argument("--cos", help="exact cosine p/q")
    src.add_argument("--angles-file", help="one angle per line (decimal or e.g. acos(1/3)), or a JSON list")
    ce.add_argument("--bound", type=int, default=10_000)
    ce.add_argument("--digits", type=int, default=64)
    ce.add_argument("--deadline-ms", type=int)
    ce.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SymcloseError, ValueError, OSError) as exc:
        sys.stderr.write(f"symclose {args.command}: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
