import argparse
import logging
import sys
from typing import List, Optional, Sequence, TextIO

from pydantic import ValidationError

from qcoord.algebra.rewrite import Element, Variant
from qcoord.core.config import settings
from qcoord.core.exceptions import QcoordError
from qcoord.core.log_config import logging_settings
from qcoord.schemas.reports import CheckReport
from qcoord.schemas.run_config import OrderFlavor, OutputMode, RunConfig
from qcoord.services import computations
from qcoord.services.computations import CheckName

logger = logging.getLogger(logging_settings.LOGGER_NAME)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=settings.DEFAULT_N, help="matrix size")
    common.add_argument("--ell", type=int, default=None, help="odd root order; work over Z_eps")
    common.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=settings.DEFAULT_VARIANT,
        help="M_n, GL_n or SL_n",
    )
    common.add_argument(
        "--order",
        choices=[o.value for o in OrderFlavor],
        default=OrderFlavor.ROWMAJOR.value,
        help="generator order and basis flavor",
    )
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="qcoord",
        description="Exact computations in quantized coordinate rings of matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    nf = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    nf.add_argument("expr")
    sub.add_parser("det", parents=[common], help="print the quantum determinant")
    mul = sub.add_parser("mul", parents=[common], help="product of two expressions")
    mul.add_argument("left")
    mul.add_argument("right")
    expand = sub.add_parser("expand", parents=[common], help="module expansion over the Frobenius image")
    expand.add_argument("expr")
    phi = sub.add_parser("phi", parents=[common], help="the Frobenius form of an expression")
    phi.add_argument("expr")
    nakayama = sub.add_parser("nakayama", parents=[common], help="apply the Nakayama automorphism")
    nakayama.add_argument("expr")
    basis = sub.add_parser("basis", parents=[common], help="list the module basis keys")
    basis.add_argument("--limit", type=_non_negative_int, default=None, help="print at most this many keys")
    check = sub.add_parser("check", parents=[common], help="run a verification suite")
    check.add_argument("suite", choices=[c.value for c in CheckName])
    return parser


def _write_element(element: Element, run: RunConfig, out: TextIO) -> None:
    if run.output == OutputMode.JSON:
        print(computations.element_out(element, run).to_json(), file=out)
    else:
        print(element, file=out)


def _write_report(report: CheckReport, run: RunConfig, out: TextIO) -> None:
    if run.output == OutputMode.JSON:
        print(report.to_json(), file=out)
        return
    for case in report.failures:
        print(f"FAIL {case.input}: {case.residual}", file=out)
    print(report.summary(), file=out)


def _dispatch(args: argparse.Namespace, run: RunConfig, out: TextIO) -> int:
    json_mode = run.output == OutputMode.JSON
    command = args.command
    if command == "nf":
        _write_element(computations.normal_form(args.expr, run), run, out)
    elif command == "det":
        _write_element(computations.determinant(run), run, out)
    elif command == "mul":
        _write_element(computations.multiply_expressions(args.left, args.right, run), run, out)
    elif command == "nakayama":
        _write_element(computations.nakayama_expression(args.expr, run), run, out)
    elif command == "expand":
        result = computations.expand_expression(args.expr, run)
        if json_mode:
            print(result.to_json(), file=out)
        elif not result.entries:
            print("0", file=out)
        else:
            for entry in result.entries:
                print(f"{entry.basis_key}: {entry.classical_coeff}", file=out)
    elif command == "phi":
        result = computations.phi_expression(args.expr, run)
        print(result.to_json() if json_mode else result.value, file=out)
    elif command == "basis":
        result = computations.basis_keys(run, args.limit)
        if json_mode:
            print(result.to_json(), file=out)
        else:
            for key in result.keys:
                print(key, file=out)
            print(f"# {len(result.keys)} of {result.count} keys", file=out)
    elif command == "check":
        report = computations.run_check(CheckName(args.suite), run)
        _write_report(report, run, out)
        return EXIT_OK if report.passed else EXIT_CHECK_FAILED
    return EXIT_OK


def _error_message(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        return "; ".join(error["msg"] for error in exc.errors())
    return str(exc)


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        run_config = RunConfig(
            n=args.n,
            variant=args.variant,
            ell=args.ell,
            order=args.order,
            output=OutputMode.JSON if args.json else OutputMode.TEXT,
        )
        return _dispatch(args, run_config, out)
    except (QcoordError, ValidationError) as exc:
        logger.warning(f"Command {args.command} rejected: {_error_message(exc)}")
        print(f"qcoord: error: {_error_message(exc)}", file=err)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)
