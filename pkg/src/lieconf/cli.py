"""Command line front end.

Exit codes: 0 success, 1 malformed input or usage, 2 axiom violation or failed
check, 3 degree cap or candidate budget exhausted, 4 outside the supported
scope (irrational weights, non-solvable input, product window too small).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .conformal import ConformalAlgebra
from .definition import Definition, parse_definition, parse_element, serialize
from .errors import (
    BudgetExhausted,
    CapExhausted,
    DefinitionError,
    LieConfError,
    NeedsFieldExtension,
    NotApplicable,
    NotSolvable,
    ParseError,
    PostconditionError,
    WindowError,
)
from .hmodule import Submodule
from .modify import modify
from .repweight import DEFAULT_MAX_CAP, LambdaAction, decompose, singularity
from .vertex import (
    DEFAULT_BUDGET,
    DEFAULT_TRUNCATION,
    build_example,
    check_vertex_axioms,
    lie_functor,
    root_space_decomposition,
)

SCHEMA_VERSION = 1
COMMANDS = ("check", "series", "classify", "decompose", "modify", "example", "report")
EXAMPLES = ("vertex-M",)

EXIT_OK, EXIT_INPUT, EXIT_AXIOMS, EXIT_EXHAUSTED, EXIT_SCOPE = 0, 1, 2, 3, 4

log = logging.getLogger("lieconf")


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    element_expr: str | None = None
    degree_cap: int = 4
    truncation_order: int = DEFAULT_TRUNCATION
    candidate_budget: int = DEFAULT_BUDGET
    seed: int = 0
    output_format: str = "text"
    example: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("degree_cap", "truncation_order", "candidate_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


class UsageError(LieConfError):
    pass


def _example_definition() -> Definition:
    V = build_example()
    return Definition("M", lie_functor(V), V)


def load(config: RunConfig) -> Definition:
    if config.input_path is None:
        return _example_definition()
    try:
        text = Path(config.input_path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {config.input_path}: {exc.strerror}") from None
    return parse_definition(text)


def _gens(S: Submodule) -> list[str]:
    return [g.to_str() for g in S.generator_elements]


def _element(defn: Definition, config: RunConfig):
    if not config.element_expr:
        raise UsageError(f"'{config.command}' needs --element")
    return parse_element(config.element_expr, defn.carrier)


def _classify(L: ConformalAlgebra) -> dict:
    return {
        "solvable": L.is_solvable(),
        "nilpotent": L.is_nilpotent(),
        "abelian": L.is_abelian(),
        "derived_length": L.derived_length(),
        "stabilized_ideal_rank": L.stabilized_ideal().rank(),
        "rank": L.carrier.rank(),
        "torsion_invariants": [d.to_str("D") for d in L.carrier.torsion_invariants()],
    }


def _series(L: ConformalAlgebra) -> dict:
    return {
        "derived_series": [_gens(S) for S in L.derived_series()],
        "central_series": [_gens(S) for S in L.central_series()],
        "stabilized_ideal": _gens(L.stabilized_ideal()),
    }


def _check(defn: Definition, config: RunConfig) -> tuple[dict, bool]:
    rep = defn.algebra.report or defn.algebra.check_axioms()
    out = {"conformal": rep.summary()}
    ok = rep.ok
    if defn.vertex is not None:
        vrep = check_vertex_axioms(defn.vertex, config.truncation_order)
        out["vertex"] = vrep.summary()
        ok = ok and vrep.ok
    return out, ok


def _decompose(defn: Definition, config: RunConfig) -> tuple[dict, bool]:
    cap = config.degree_cap
    L = defn.algebra
    if config.element_expr is None:
        if defn.vertex is None:
            raise UsageError("'decompose' needs --generator for a Lie conformal algebra")
        res = root_space_decomposition(
            defn.vertex, config.candidate_budget, config.truncation_order, config.seed, cap, DEFAULT_MAX_CAP
        )
        rep = dict(res.report)
        rep["U"] = _gens(res.U)
        rep["N"] = _gens(res.N)
        return rep, rep["ok"]
    a = _element(defn, config)
    # weight vectors need not exist otherwise; a larger cap would not help
    if not L.is_solvable(L.subalgebra_generated([a])):
        raise NotSolvable(f"<{a}> is not solvable")
    first = decompose(LambdaAction(L, a), cap, DEFAULT_MAX_CAP)
    out = {"element": a.to_str(), "covers_without_modification": first.covers}
    dec, abar = first, a
    if not first.covers:
        trace = modify(a, L, config.seed, cap, DEFAULT_MAX_CAP)
        abar = trace.result
        dec = decompose(LambdaAction(L, abar), cap, DEFAULT_MAX_CAP)
    out["modified"] = abar.to_str()
    out["weights"] = [str(w) for w in dec.weights()]
    out["components"] = {str(w): _gens(P) for w, P in sorted(dec.parts.items(), key=lambda t: t[0].key())}
    U = [P for w, P in dec.parts.items() if w.is_zero()]
    N = L.carrier.zero_submodule()
    for w, P in dec.parts.items():
        if not w.is_zero():
            N = N + P
    out["U"] = _gens(U[0]) if U else []
    out["N"] = _gens(N)
    out["covers"] = dec.covers
    return out, dec.covers


def _modify(defn: Definition, config: RunConfig) -> tuple[dict, bool]:
    a = _element(defn, config)
    L = defn.algebra
    cap = config.degree_cap
    trace = modify(a, L, config.seed, cap, DEFAULT_MAX_CAP)
    out = trace.to_dict()
    out["singularity"] = {
        "original": singularity(LambdaAction(L, a), cap, DEFAULT_MAX_CAP),
        "modified": singularity(LambdaAction(L, trace.result), cap, DEFAULT_MAX_CAP),
    }
    out["nilpotent_subalgebra"] = L.is_nilpotent(L.subalgebra_generated([trace.result]))
    return out, out["nilpotent_subalgebra"]


def run(config: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns ``(exit code, report)``."""
    report: dict = {"schema_version": SCHEMA_VERSION, "command": config.command}
    try:
        if config.command == "example":
            if config.example not in EXAMPLES:
                raise UsageError(f"unknown example {config.example!r}; available: {', '.join(EXAMPLES)}")
            V = build_example()
            vrep = check_vertex_axioms(V, config.truncation_order)
            report["definition"] = serialize(V, config.truncation_order)
            report["vertex_axioms"] = vrep.summary()
            return (EXIT_OK if vrep.ok else EXIT_AXIOMS), report
        defn = load(config)
        report["algebra"] = defn.name
        report["generators"] = list(defn.carrier.labels)
        if defn.warnings:
            report["warnings"] = list(defn.warnings)
        verified = defn.algebra.verified
        report["axioms_verified"] = verified
        if not verified:
            report["banner"] = "axioms unverified"
        ok = True
        cmd = config.command
        if cmd == "check":
            report["axioms"], ok = _check(defn, config)
        elif cmd == "series":
            report.update(_series(defn.algebra))
        elif cmd == "classify":
            report.update(_classify(defn.algebra))
        elif cmd == "decompose":
            report["decomposition"], ok = _decompose(defn, config)
        elif cmd == "modify":
            report["modification"], ok = _modify(defn, config)
        elif cmd == "report":
            report["axioms"], ok = _check(defn, config)
            report.update(_classify(defn.algebra))
            report.update(_series(defn.algebra))
            if defn.vertex is not None and report["solvable"]:
                report["decomposition"], dec_ok = _decompose(defn, config)
                ok = ok and dec_ok
        code = EXIT_OK if (ok and verified) else EXIT_AXIOMS
        return code, report
    except (ParseError, DefinitionError, UsageError) as exc:
        report["error"] = _error(exc, "input")
        return EXIT_INPUT, report
    except (CapExhausted, BudgetExhausted) as exc:
        report["error"] = _error(exc, "exhausted")
        if isinstance(exc.partial, dict):
            report["partial"] = exc.partial
        return EXIT_EXHAUSTED, report
    except (NeedsFieldExtension, NotSolvable, NotApplicable, WindowError) as exc:
        report["error"] = _error(exc, "scope")
        return EXIT_SCOPE, report
    except PostconditionError as exc:
        report["error"] = _error(exc, "postcondition")
        return EXIT_AXIOMS, report


def _error(exc: Exception, kind: str) -> dict:
    out = {"kind": kind, "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        out["message"] = exc.message
        out["line"] = exc.line
        out["column"] = exc.column
    return out


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def render_text(report: dict) -> str:
    if "definition" in report and report["command"] == "example":
        return report["definition"]
    lines = []
    if report.get("banner"):
        lines.append(f"!! {report['banner']}")
    if "error" in report:
        err = report["error"]
        where = f"line {err['line']}, column {err['column']}: " if err.get("line") else ""
        lines.append(f"error ({err['kind']}): {where}{err['message']}")
        return "\n".join(lines) + "\n"
    for key, value in report.items():
        if key in ("schema_version", "banner"):
            continue
        _render(lines, key, value, 0)
    return "\n".join(lines) + "\n"


def _render(lines: list, key, value, depth: int):
    pad = "  " * depth
    if isinstance(value, dict):
        lines.append(f"{pad}{key}:")
        for k, v in value.items():
            _render(lines, k, v, depth + 1)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        lines.append(f"{pad}{key}:")
        for i, v in enumerate(value):
            _render(lines, i, v, depth + 1)
    elif isinstance(value, list):
        lines.append(f"{pad}{key}: [{', '.join(map(str, value))}]")
    else:
        lines.append(f"{pad}{key}: {value}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", dest="input_path", help="algebra definition file (default: built-in example M)")
    common.add_argument("--cap", type=int, default=4, help="initial degree cap (doubles up to 64)")
    common.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION, help="product window for vertex checks")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="candidate budget for decompositions")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--element", "--generator", dest="element", help='element such as "u + D*n"')

    parser = _Parser(prog="lieconf", description="Solvable Lie conformal and finite vertex algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="verify the axioms")
    sub.add_parser("series", parents=[common], help="derived and central series")
    sub.add_parser("classify", parents=[common], help="solvable / nilpotent / abelian")
    sub.add_parser("decompose", parents=[common], help="generalized weight or root space decomposition")
    sub.add_parser("modify", parents=[common], help="modify an element to generate a nilpotent subalgebra")
    ex = sub.add_parser("example", parents=[common], help="print a built-in example")
    ex.add_argument("name", choices=EXAMPLES)
    sub.add_parser("report", parents=[common], help="everything at once")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = RunConfig(
            command=args.command,
            input_path=args.input_path,
            element_expr=args.element,
            degree_cap=args.cap,
            truncation_order=args.truncation,
            candidate_budget=args.budget,
            seed=args.seed,
            output_format=args.format,
            example=getattr(args, "name", None),
        )
    except ValueError as exc:
        parser.error(str(exc))
    try:
        code, report = run(config)
    except Exception as exc:  # never let a traceback escape
        log.debug("internal error", exc_info=True)
        code = EXIT_INPUT
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": config.command,
            "error": {"kind": "internal", "type": type(exc).__name__, "message": str(exc)},
        }
    if config.output_format == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        text = render_text(report)
        (sys.stderr if "error" in report else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
