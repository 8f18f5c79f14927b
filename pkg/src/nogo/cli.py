"""Command-line front end.

Exit status: 0 when the outcome matches expectations (a contradiction for the
built-ins and, by default, for scenario files), 2 when it does not, 3 on a
parse or validation failure, 1 on an internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from . import linalg_core as la
from .fiqt import DEFAULT_EPSILON, enumerate_cuts, predict_cut
from .possibilistic import EMPTY_TABLE, EXCLUDED_BUT_PREDICTED
from .report import build_report, render_frames, render_text, run, to_json
from .scenario import BUILTINS, Scenario, ScenarioError, parse_scenario, serialize_scenario, validate
from .spacetime import SIMULTANEITY_TOL

EXIT_OK, EXIT_INTERNAL, EXIT_UNEXPECTED, EXIT_INVALID = 0, 1, 2, 3

# What `verify` must find for each built-in.
EXPECTED = {
    "hardy": (EXCLUDED_BUT_PREDICTED, {"alice": "-", "bob": "-"}),
    "ghz": (EMPTY_TABLE, None),
}


class InvalidInput(Exception):
    def __init__(self, lines: list[str]):
        super().__init__("\n".join(lines))
        self.lines = lines


def _positive(kind):
    def convert(text: str):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return convert


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--epsilon", type=_positive(float), default=DEFAULT_EPSILON, help="zero-probability threshold")
    common.add_argument("--tolerance", type=_positive(float), default=SIMULTANEITY_TOL, help="simultaneity tolerance")
    common.add_argument("--max-dim", type=_positive(int), default=la.MAX_DIM, help="state-space dimension cap")
    common.add_argument(
        "--expect-consistent", action="store_true", help="treat 'no contradiction' as the success outcome"
    )

    parser = argparse.ArgumentParser(prog="nogo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", parents=[common], help="analyse a built-in scenario")
    p.add_argument("name", choices=sorted(BUILTINS))
    p = sub.add_parser("run", parents=[common], help="analyse a scenario file")
    p.add_argument("path", type=Path)
    p = sub.add_parser("frames", parents=[common], help="list the surfaces of simultaneity")
    p.add_argument("target", help="a built-in name or a scenario file")
    p = sub.add_parser("export", help="write a built-in scenario as JSON")
    p.add_argument("name", choices=sorted(BUILTINS))
    return parser


def load(path: Path, max_dim: int) -> Scenario:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InvalidInput([f"cannot read {path}: {exc.strerror or exc}"]) from None
    try:
        s = parse_scenario(data)
    except ScenarioError as exc:
        raise InvalidInput([str(i) for i in exc.issues]) from None
    violations = validate(s, max_dim)
    if violations:
        raise InvalidInput([str(v) for v in violations])
    return s


def _resolve_target(target: str, max_dim: int) -> Scenario:
    if target in BUILTINS and not Path(target).exists():
        return BUILTINS[target]()
    return load(Path(target), max_dim)


def _found(report: dict, expected: tuple[str, dict | None] | None) -> bool:
    if expected is None:
        return bool(report["contradictions"])
    kind, pattern = expected
    return any(r["kind"] == kind and (pattern is None or r["pattern"] == pattern) for r in report["contradictions"])


def _emit(report: dict, fmt: str, out) -> None:
    out.write(to_json(report) if fmt == "json" else render_text(report))


def _analyse(s: Scenario, args, expected, out) -> int:
    report = run(s, epsilon=args.epsilon, tolerance=args.tolerance, max_dim=args.max_dim)
    _emit(report, args.format, out)
    success = _found(report, expected) != args.expect_consistent
    return EXIT_OK if success else EXIT_UNEXPECTED


def _frames(s: Scenario, args, out) -> int:
    search = enumerate_cuts(s, args.tolerance)
    predictions = [predict_cut(s, c, epsilon=args.epsilon, max_dim=args.max_dim) for c in search]
    report = build_report(
        s, search, predictions, [], epsilon=args.epsilon, tolerance=args.tolerance, max_dim=args.max_dim
    )
    if args.format == "json":
        report = {k: report[k] for k in ("scenario", "cuts", "skipped", "settings", "version")}
        out.write(to_json(report))
    else:
        out.write(render_frames(report))
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "export":
            out.write(serialize_scenario(BUILTINS[args.name]()))
            return EXIT_OK
        if args.command == "verify":
            return _analyse(BUILTINS[args.name](), args, EXPECTED[args.name], out)
        if args.command == "run":
            return _analyse(load(args.path, args.max_dim), args, None, out)
        return _frames(_resolve_target(args.target, args.max_dim), args, out)
    except InvalidInput as exc:
        err.write("invalid scenario:\n" + "".join(f"  {line}\n" for line in exc.lines))
        return EXIT_INVALID
    except la.CapacityExceeded as exc:
        err.write(f"invalid scenario:\n  CapacityExceeded: {exc}\n")
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
