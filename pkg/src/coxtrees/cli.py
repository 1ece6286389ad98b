"""Command-line front end.

    coxtrees COMMAND (--input FILE | --system NAME) [--radius R] [--prime P]
             [--budget N] [--seed S] [--format json|dot|text]

Commands: classify, ball, davis, walls, trees, verify (Coxeter input),
raag (graph input) and orbifold (JSON input).  Exit status: 0 all checks
passed, 1 a check failed (witness in the report), 2 unreadable or invalid
input, 3 an enumeration budget was exceeded.

Input grammars
--------------
Coxeter matrix, text: the rank n on the first line, then n rows of n
whitespace-separated tokens, each a positive integer or ``inf``; 1 on the
diagonal, >= 2 off it, symmetric; nothing after the last row.  JSON:
``{"generators": [...], "matrix": [[...]]}`` with ``"inf"`` strings allowed.

Graph: lines ``v NAME`` declare vertices, lines ``u w`` add edges (declaring
their endpoints), ``#`` starts a comment.  A DOT ``graph { ... }`` block with
``a;`` and ``a -- b;`` statements is accepted too.

Orbifold: ``{"genus": g, "cone_points": [m1, m2, ...]}``.

``--system`` takes a type label (``H3``, ``I2(inf)``, ``affine-A2``) or
``triangle(p,q,r)`` / ``polygon(k)`` instead of a file.  The default budget
comes from ``COXTREES_BUDGET`` when set.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys as _sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .coxeter_core import (
    POSITIVE_DEFINITE,
    CoxeterSystem,
    InvariantViolation,
    ParseError,
    classify,
    components,
    named_system,
    parse_system,
    right_angled_polygon,
    triangle,
)
from .davis import CROSS, DISJOINT, EQUAL, _ensure_form, davis_ball, relation_of_roots, wall_inventory
from .elements import BudgetExceeded, ball as make_ball, default_budget, kernel
from .invariants import (
    classification_agreement,
    faithfulness,
    representation_soundness,
    wall_length_identity,
)
from .orbifold import euler_char, is_hyperbolic, orbifold_group_presentation, parse_orbifold
from .raag import dj_embedding, decompose, kahler_candidate_coxeter, kahler_candidate_raag, parse_graph, racg_of
from .wall_trees import TreeViolation, run_trees

COMMANDS = ("classify", "ball", "davis", "walls", "trees", "verify", "raag", "orbifold")
FORMATS = ("json", "dot", "text")
OK, VIOLATION, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3
MAX_RELATION_PAIRS = 20_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    system: str | None = None
    radius: int = 6
    prime: int | None = None
    budget: int | None = None
    seed: int = 0
    output: str = "json"
    max_trees: int = 64

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output not in FORMATS:
            raise ConfigError(f"unknown format {self.output!r}")
        if self.radius < 0:
            raise ConfigError("radius must be >= 0")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.prime is not None and (self.prime < 3 or self.prime % 2 == 0):
            raise ConfigError(f"prime must be odd, got {self.prime}")
        if (self.input_path is None) == (self.system is None):
            raise ConfigError("give exactly one of --input and --system")
        if self.system is not None and self.command in ("raag", "orbifold"):
            raise ConfigError(f"{self.command} reads its input from --input")
        if self.output == "dot" and self.command not in ("trees", "raag"):
            raise ConfigError("dot output is available for trees and raag only")

    @property
    def effective_budget(self) -> int:
        return self.budget if self.budget is not None else default_budget()


@dataclass
class Outcome:
    status: int
    report: dict
    dot: str | None = None


def system_from_label(label: str) -> CoxeterSystem:
    mt = re.fullmatch(r"triangle\((\w+),(\w+),(\w+)\)", label.replace(" ", ""))
    if mt:
        return triangle(*(float("inf") if x == "inf" else int(x) for x in mt.groups()))
    mt = re.fullmatch(r"polygon\((\d+)\)", label.replace(" ", ""))
    if mt:
        return right_angled_polygon(int(mt.group(1)))
    try:
        return named_system(label)
    except KeyError as exc:
        raise ParseError(str(exc.args[0])) from None


def _read(cfg: RunConfig) -> str:
    try:
        return Path(cfg.input_path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {cfg.input_path}: {exc.strerror}") from None


def _load_system(cfg: RunConfig) -> CoxeterSystem:
    if cfg.system is not None:
        return system_from_label(cfg.system)
    return parse_system(_read(cfg))


def _header(sys: CoxeterSystem) -> dict:
    return sys.to_json()


# ---------------------------------------------------------------------------
# commands


def _classify(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    verdict = classify(sys)
    parts = verdict.parts or (verdict,)
    comps = components(sys)
    report = {
        "system": _header(sys),
        "component_count": len(comps),
        "components": [dict(p.to_json(), generators=[sys.generators[i] for i in c])
                       for p, c in zip(parts, comps)],
        "kind": verdict.kind,
        "finite": verdict.kind == POSITIVE_DEFINITE,
    }
    return Outcome(OK, report)


def _ball(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    b = make_ball(sys, cfg.radius, cfg.effective_budget)
    report = {"system": _header(sys), "radius": cfg.radius, "size": len(b),
              "exhausted": b.exhausted, "growth": b.growth()}
    return Outcome(OK, report)


def _davis(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    cx = davis_ball(sys, cfg.radius, cfg.effective_budget)
    report = {"system": _header(sys), "radius": cfg.radius, "exhausted": cx.exhausted,
              "vertices": len(cx.vertices), "f_vector": cx.f_vector(),
              "euler_characteristic": cx.euler_characteristic()}
    return Outcome(OK, report)


def _walls(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    inv = wall_inventory(sys, cfg.radius, budget=cfg.effective_budget)
    k = kernel(sys)
    _ensure_form(k)
    n = len(inv)
    total = n * (n - 1) // 2
    if total <= MAX_RELATION_PAIRS:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    else:
        rng = random.Random(cfg.seed)
        pairs = sorted({tuple(sorted(rng.sample(range(n), 2))) for _ in range(MAX_RELATION_PAIRS)})
    hist = {EQUAL: 0, CROSS: 0, DISJOINT: 0}
    for a, b in pairs:
        hist[relation_of_roots(k, inv.keys[a], inv.keys[b])] += 1
    report = {
        "system": _header(sys), "radius": cfg.radius, "chambers": len(inv.ball),
        "walls": n, "reflections": [w.reflection.label(sys) for w in inv.walls[:256]],
        "relation_histogram": dict(sorted(hist.items())),
        "pairs": {"total": total, "examined": len(pairs), "sampled": len(pairs) < total},
    }
    # distinct inventory walls can never be equal
    return Outcome(OK if hist[EQUAL] == 0 else VIOLATION, report)


def _trees(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    run = run_trees(sys, cfg.radius, cfg.prime, cfg.seed, budget=cfg.budget)
    report = {"system": _header(sys), "radius": cfg.radius, "seed": cfg.seed}
    report.update(run.to_json())
    trees = run.projection.trees
    if len(trees) <= cfg.max_trees:
        report["trees"] = [t.to_json(run.inventory) for t in trees]
    else:
        report["trees_omitted"] = len(trees)
    dot = None
    if cfg.output == "dot":
        dot = "".join(t.to_dot(run.inventory) for t in trees[:cfg.max_trees])
    return Outcome(OK if run.passed else VIOLATION, report, dot)


def _verify(cfg: RunConfig) -> Outcome:
    sys = _load_system(cfg)
    budget = cfg.effective_budget
    checks = [representation_soundness(sys), classification_agreement(sys),
              faithfulness(sys, cfg.radius, budget), wall_length_identity(sys, cfg.radius, budget, seed=cfg.seed)]
    report = {"system": _header(sys), "radius": cfg.radius, "seed": cfg.seed,
              "checks": [c.to_json() for c in checks]}
    passed = all(c.passed for c in checks)
    if classify(sys).kind != POSITIVE_DEFINITE:
        run = run_trees(sys, cfg.radius, cfg.prime, cfg.seed, budget=cfg.budget)
        report["trees"] = run.to_json()
        passed = passed and run.passed
    report["passed"] = passed
    return Outcome(OK if passed else VIOLATION, report)


def _raag(cfg: RunConfig) -> Outcome:
    g = parse_graph(_read(cfg))
    decomposition = decompose(g)
    emb = dj_embedding(g, radius=cfg.radius, budget=cfg.effective_budget)
    report = {
        "graph": g.to_json(),
        "decomposition": decomposition.to_json(),
        "kahler_raag": kahler_candidate_raag(g).to_json(),
        "kahler_racg": [v.to_json() for v in kahler_candidate_coxeter(racg_of(g))],
        "embedding": emb.to_json(),
    }
    dot = g.to_dot() if cfg.output == "dot" else None
    return Outcome(OK if emb.passed else VIOLATION, report, dot)


def _orbifold(cfg: RunConfig) -> Outcome:
    o = parse_orbifold(_read(cfg))
    chi = euler_char(o)
    report = {
        "orbifold": o.to_json(),
        "euler_characteristic": str(chi),
        "hyperbolic": is_hyperbolic(o),
        "presentation": orbifold_group_presentation(o).to_json(),
    }
    return Outcome(OK, report)


_DISPATCH = {"classify": _classify, "ball": _ball, "davis": _davis, "walls": _walls,
             "trees": _trees, "verify": _verify, "raag": _raag, "orbifold": _orbifold}


def run(cfg: RunConfig) -> Outcome:
    """Execute one command; errors become exit statuses, never tracebacks."""
    try:
        return _DISPATCH[cfg.command](cfg)
    except ParseError as exc:
        return Outcome(BAD_INPUT, {"error": "parse", "message": str(exc)})
    except BudgetExceeded as exc:
        return Outcome(OVER_BUDGET, {"error": "budget", "message": str(exc), "partial": exc.partial})
    except (TreeViolation, InvariantViolation) as exc:
        return Outcome(VIOLATION, {"error": "violation", "message": str(exc),
                                   "witness": getattr(exc, "witness", None)})


# ---------------------------------------------------------------------------
# rendering


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_text(report: dict, prefix: str = "") -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.append(render_text(value, prefix + "  ").rstrip("\n"))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{prefix}{key}:")
            for item in value:
                lines.append(render_text(item, prefix + "  - ").rstrip("\n"))
        else:
            lines.append(f"{prefix}{key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(line for line in lines if line) + "\n"


def first_witness(report):
    """Depth-first search for the first non-null ``witness`` entry of a report."""
    if isinstance(report, dict):
        if report.get("witness") is not None:
            return report["witness"]
        items = report.values()
    elif isinstance(report, list):
        items = report
    else:
        return None
    for item in items:
        found = first_witness(item)
        if found is not None:
            return found
    return None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxtrees", description=__doc__.split("\n\n")[0],
                                epilog=__doc__.split("\n\n", 1)[1],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "-i", dest="input_path", help="input file (see grammars below)")
    src.add_argument("--system", "-s", help="built-in system label instead of a file")
    p.add_argument("--radius", "-r", type=int, default=6, help="ball radius (default 6)")
    p.add_argument("--prime", "-p", type=int, help="odd prime for W0 (default: first of 3,5,7,11 that works)")
    p.add_argument("--budget", "-b", type=int, help="element cap for enumerations (default $COXTREES_BUDGET or 2000000)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--format", "-f", dest="output", choices=FORMATS, default="json")
    p.add_argument("--max-trees", type=int, default=64, help="trees listed in full in reports and DOT output")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ConfigError as exc:
        print(f"coxtrees: {exc}", file=_sys.stderr)
        return BAD_INPUT
    outcome = run(cfg)
    if cfg.output == "dot" and outcome.dot is not None:
        _sys.stdout.write(outcome.dot)
    elif cfg.output == "text":
        _sys.stdout.write(render_text(outcome.report))
    else:
        _sys.stdout.write(render_json(outcome.report))
    if outcome.status == VIOLATION:
        print(f"coxtrees: violation, witness {json.dumps(first_witness(outcome.report))}", file=_sys.stderr)
    elif outcome.status != OK:
        print(f"coxtrees: {outcome.report.get('message')}", file=_sys.stderr)
    return outcome.status


if __name__ == "__main__":
    raise SystemExit(main())
