"""Command-line front end.

Exit status: 0 when every check passes, 1 when some property fails (the
report carries a witness), 2 on input, parse or size-cap errors.
"""

from __future__ import annotations

import argparse
import sys

from . import suites
from .coalgebra import DEFAULT_TENSOR_CAP, GroupTooLarge, NotAUnit, TensorCapExceeded
from .incidence import InvalidCover, ProductTooLarge
from .linalg import DimensionMismatch
from .modelfile import ModelError, load
from .report import Report

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

COMMANDS = {
    "validate": ("co-algebra axioms, unit and unital grading", suites.COALGEBRA_KINDS),
    "coradical": ("co-radical filtration and reduced co-multiplication identities", suites.COALGEBRA_KINDS),
    "strict": ("strictness and comparison of filtrations", suites.COALGEBRA_KINDS),
    "cogen": ("co-generation map into the truncated tensor co-algebra", suites.COALGEBRA_KINDS),
    "fano-check": ("eigenprojectors and the triangle computation", ("fano",)),
    "abelian-check": ("projector families, vanishing and group-algebra identities", ("abelian-trunc", "abelian-lazy")),
    "incidence": ("cover conditions, correspondence maps and compositions", ("incidence",)),
    "suite": ("every check that applies to the model kind", None),
}

INPUT_ERRORS = (
    ModelError,
    TensorCapExceeded,
    ProductTooLarge,
    GroupTooLarge,
    InvalidCover,
    DimensionMismatch,
    NotAUnit,
    OSError,
)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coradical", description="Exact checks for graded co-algebra models.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="model-definition file")
    common.add_argument("--kmax", type=int, default=None, help="largest k for iterated reduced co-multiplications (tower length n for cogen)")
    common.add_argument("--tensor-cap", type=int, default=DEFAULT_TENSOR_CAP,
                        help="largest tensor matrix (rows x columns) to materialize; 0 disables the cap")
    common.add_argument("--report", choices=("text", "structured"), default="text")
    common.add_argument("--timings", action="store_true", help="include per-check timings (not reproducible)")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (help_text, _) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return p


def _load(path, command: str, cap: int | None) -> suites.Context:
    d = load(path)
    kinds = COMMANDS[command][1]
    if kinds is not None and d.kind not in kinds:
        raise ModelError(f"command {command!r} does not apply to kind {d.kind!r}")
    return suites.Context(d, cap)


def _report(ctx: suites.Context, command: str) -> Report:
    return Report(ctx.label, ctx.d.kind, command)


def cmd_validate(path, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "validate", cap)
    report = _report(ctx, "validate")
    suites.run_validate(ctx, report)
    return report


def cmd_coradical(path, kmax: int | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "coradical", cap)
    report = _report(ctx, "coradical")
    suites.run_coradical(ctx, report, kmax)
    return report


def cmd_strict(path, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "strict", cap)
    report = _report(ctx, "strict")
    suites.run_strict(ctx, report)
    return report


def cmd_cogen(path, n: int | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "cogen", cap)
    report = _report(ctx, "cogen")
    suites.run_cogen(ctx, report, n)
    return report


def cmd_fano_check(path) -> Report:
    ctx = _load(path, "fano-check", None)
    report = _report(ctx, "fano-check")
    suites.run_fano(ctx, report)
    return report


def cmd_abelian_check(path, kmax: int | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "abelian-check", cap)
    report = _report(ctx, "abelian-check")
    if ctx.d.kind == "abelian-trunc":
        suites.run_abelian_trunc(ctx, report)
    else:
        if kmax is not None:
            ctx.kmax = kmax
        suites.run_abelian_lazy(ctx, report)
    return report


def cmd_incidence(path) -> Report:
    ctx = _load(path, "incidence", None)
    report = _report(ctx, "incidence")
    suites.run_incidence(ctx, report)
    return report


def cmd_suite(path, kmax: int | None = None, cap: int | None = DEFAULT_TENSOR_CAP) -> Report:
    ctx = _load(path, "suite", cap)
    if kmax is not None and ctx.d.kind == "abelian-lazy":
        ctx.kmax = kmax
    report = _report(ctx, "suite")
    suites.suite(ctx, report, kmax)
    return report


def exit_code(report: Report) -> int:
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _run(args) -> Report:
    if args.kmax is not None and args.kmax < 0:
        raise ModelError("--kmax must be non-negative")
    cap = args.tensor_cap or None
    cmd, path, kmax = args.command, args.model, args.kmax
    if cmd == "validate":
        return cmd_validate(path, cap)
    if cmd == "coradical":
        return cmd_coradical(path, kmax, cap)
    if cmd == "strict":
        return cmd_strict(path, cap)
    if cmd == "cogen":
        return cmd_cogen(path, kmax, cap)
    if cmd == "fano-check":
        return cmd_fano_check(path)
    if cmd == "abelian-check":
        return cmd_abelian_check(path, kmax, cap)
    if cmd == "incidence":
        return cmd_incidence(path)
    return cmd_suite(path, kmax, cap)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = _run(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError) as exc:
        print(f"error: invalid model: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = report.render_structured(args.timings) if args.report == "structured" else report.render_text(args.timings)
    sys.stdout.write(out)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
