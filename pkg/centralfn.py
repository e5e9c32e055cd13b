"""
SL(2,C) Central Functions - CLI Interface
Imports core functionality from modules
"""

import argparse
import json
import logging
import sys
import time
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from core.algebra.exactmath import Polynomial, poly_serialize
from core.algebra.reptheory import InadmissibleError
from core.config import CentralFunctionSettings, get_settings
from core.models import Algorithm, Command, FunctionRecord, OutputFormat, Request
from core.services import cf_cache
from core.services.recurrence_service import (
    BarbellLabel,
    Rank3Label,
    barbell,
    cfindex_to_label,
    enumerate_order,
    rank1_cf,
    rank1_label,
    rank2_cf,
    rank2_label,
    rank3_cf,
    to_rank1_coordinates,
    to_rank2_coordinates,
)
from core.services.tensorial_service import tensorial_central_function
from core.services.verification_service import (
    check_golden_table,
    check_loop_coefficients,
    cross_validate,
    cross_validate_order,
)

console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INTERRUPTED = 130


def setup_logging(settings: CentralFunctionSettings) -> None:
    handlers: List[logging.Handler] = [RichHandler(console=console, show_path=False)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file, encoding="utf-8"))
    logging.basicConfig(
        level=settings.log_level.upper(),
        format='%(asctime)s - %(levelname)s - [%(funcName)s] - %(message)s',
        handlers=handlers,
        force=True,
    )


def parse_tuple(text: Optional[str]) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.replace(" ", "").split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got '{text}'") from None


def format_tuple(values: Sequence[int]) -> str:
    return ",".join(str(v) for v in values)


# ============================================================================
# Computation
# ============================================================================

def compute_polynomial(request: Request, algorithm: Algorithm) -> Tuple[Polynomial, Optional[Rank3Label]]:
    """The requested function and, for rank 3, its diagram label"""
    if request.rank == 3:
        label = cfindex_to_label(*request.index) if request.index else Rank3Label(*request.label).require_admissible()
        if algorithm is Algorithm.TENSORIAL:
            return tensorial_central_function(label), label
        return rank3_cf(label), label

    if request.rank == 2:
        a, b, c = request.label
        if algorithm is Algorithm.TENSORIAL:
            return to_rank2_coordinates(tensorial_central_function(rank2_label(a, b, c).require_admissible())), None
        return rank2_cf(a, b, c), None

    (n,) = request.label
    if algorithm is Algorithm.TENSORIAL:
        return to_rank1_coordinates(tensorial_central_function(rank1_label(n))), None
    return rank1_cf(n), None


def render(records: List[Tuple[str, str, Polynomial]], fmt: OutputFormat, many: bool = False) -> str:
    """records: (index text, label text, polynomial)"""
    if fmt is OutputFormat.JSON and not many:
        return poly_serialize(records[0][2], "json").decode("utf-8")
    if fmt is OutputFormat.JSON:
        payload = [
            {"index": index, "label": label, "polynomial": json.loads(poly_serialize(poly, "json"))}
            for index, label, poly in records
        ]
        return json.dumps(payload, separators=(",", ":"))
    if fmt is OutputFormat.CSV:
        rows = [FunctionRecord(index=index, label=label, polynomial=str(poly)).model_dump() for index, label, poly in records]
        return pd.DataFrame(rows, columns=list(FunctionRecord.model_fields)).to_csv(index=False).rstrip("\n")
    if not many:
        return str(records[0][2])
    return "\n".join(f"{index}: {poly}" for index, _, poly in records)


# ============================================================================
# Subcommands
# ============================================================================

def run_compute(request: Request) -> int:
    algorithms = [Algorithm.COMBINATORIAL, Algorithm.TENSORIAL] if request.algorithm is Algorithm.BOTH else [request.algorithm]
    results = [compute_polynomial(request, algorithm) for algorithm in algorithms]
    poly, label = results[0]
    index_text = format_tuple(request.index or request.label)
    label_text = format_tuple(label.as_tuple()) if label else index_text

    if len(results) == 2 and results[1][0] != poly:
        console.print(f"[bold red]Engines disagree for {index_text}[/bold red]")
        print(f"combinatorial: {poly}")
        print(f"tensorial: {results[1][0]}")
        return EXIT_VERIFY_FAILED

    print(render([(index_text, label_text, poly)], request.format))
    return EXIT_OK


def run_enumerate(request: Request, count_only: bool) -> int:
    indices = enumerate_order(request.order)
    if count_only:
        print(len(indices))
        return EXIT_OK
    records = []
    for index in indices:
        label = cfindex_to_label(*index)
        records.append((format_tuple(index), format_tuple(label.as_tuple()), rank3_cf(label)))
    output = render(records, request.format, many=True)
    if request.format is OutputFormat.TEXT:
        output = f"{output}\ncount: {len(records)}" if output else f"count: {len(records)}"
    print(output)
    return EXIT_OK


def run_verify(request: Request, golden: bool) -> int:
    if golden:
        mismatches = check_golden_table()
        for index, expected, computed in mismatches:
            print(f"FAIL {format_tuple(index)}: expected {expected}, computed {computed}")
        print(f"golden: {'PASS' if not mismatches else 'FAIL'}")
        loop_mismatches = check_loop_coefficients()
        for loop, old, new, rational, radical in loop_mismatches:
            print(f"FAIL {loop.value} {format_tuple(old.as_tuple())} -> {format_tuple(new.as_tuple())}: {rational} != {radical}")
        print(f"loop coefficients: {'PASS' if not loop_mismatches else 'FAIL'}")
        return EXIT_OK if not mismatches and not loop_mismatches else EXIT_VERIFY_FAILED

    if request.order is not None:
        reports = cross_validate_order(request.order, request.trials, request.seed)
    else:
        label = cfindex_to_label(*request.index) if request.index else Rank3Label(*request.label)
        reports = [cross_validate(label, request.trials, request.seed)]

    failed = 0
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        agreeing = report.trials - len(report.mismatches)
        print(f"{format_tuple(report.label)}: {status} ({agreeing}/{report.trials})")
        failed += not report.passed
    print(f"verified {len(reports) - failed}/{len(reports)} labels")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def run_barbell(request: Request) -> int:
    poly = barbell(BarbellLabel(*request.label))
    text = format_tuple(request.label)
    print(render([(text, text, poly)], request.format))
    return EXIT_OK


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, choices=(1, 2, 3), default=3, help="Rank of the free group (default: 3)")
    common.add_argument("--index", type=parse_tuple, metavar="A,B,C,D,I,J", help="Rank-3 index form")
    common.add_argument("--raw-label", type=parse_tuple, metavar="A,B,C,D,E,F", help="Rank-3 diagram label")
    common.add_argument("--label", type=parse_tuple, metavar="LABEL", help="Rank-1 n, rank-2 a,b,c, or barbell a,c,b")
    common.add_argument("--algorithm", choices=[a.value for a in Algorithm], default=Algorithm.COMBINATORIAL.value)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    common.add_argument("--seed", type=int, help="Seed for random triples (default: settings)")
    common.add_argument("--trials", type=int, help="Random triples per label (default: settings)")
    common.add_argument("--order", type=int, help="Fundamental order a+b+c")

    parser = argparse.ArgumentParser(
        prog="centralfn",
        description="Exact SL(2,C) central functions of rank 1, 2 and 3 free groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Rank-3 function by index (a,b,c,d,i,j)
  centralfn compute --rank 3 --index 1,1,0,2,1,1

  # Same function from the tensor oracle
  centralfn compute --index 1,1,0,2,1,1 --algorithm tensorial

  # Rank-2 function as JSON
  centralfn compute --rank 2 --label 1,1,2 --format json

  # Count the functions of order 3
  centralfn enumerate --order 3 --count-only

  # Cross-validate both engines on every label of order 2
  centralfn verify --order 2 --trials 10

  # Check the built-in golden table and the loop coefficients
  centralfn verify --golden

  # Barbell function (a,c,b)
  centralfn barbell --label 2,2,4
        """
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser(Command.COMPUTE.value, parents=[common], help="Compute one central function")
    enumerate_parser = subparsers.add_parser(Command.ENUMERATE.value, parents=[common], help="List all functions of an order")
    enumerate_parser.add_argument("--count-only", action="store_true", help="Print only the number of functions")
    verify_parser = subparsers.add_parser(Command.VERIFY.value, parents=[common], help="Cross-validate the two engines")
    verify_parser.add_argument("--golden", action="store_true", help="Check the order 0-3 golden table and the loop coefficients")
    subparsers.add_parser(Command.BARBELL.value, parents=[common], help="Compute a barbell function")
    return parser


def build_request(args: argparse.Namespace) -> Request:
    label = args.raw_label if args.raw_label is not None else args.label
    if args.raw_label is not None and args.label is not None:
        raise ValueError("Use either --raw-label or --label")
    index = args.index
    if index is not None and len(index) != 6:
        raise ValueError("--index takes six entries a,b,c,d,i,j")
    rank = 3 if args.raw_label is not None or index is not None else args.rank
    return Request(
        command=Command(args.command),
        rank=rank,
        label=label,
        index=index,
        algorithm=Algorithm(args.algorithm),
        format=OutputFormat(args.format),
        seed=args.seed,
        trials=args.trials,
        order=args.order,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    settings = get_settings()
    setup_logging(settings)

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        request = build_request(args)
        if request.command is Command.VERIFY and not args.golden and request.order is None \
                and request.label is None and request.index is None:
            raise ValueError("verify needs --golden, --order, --index or --raw-label")
    except (ValidationError, ValueError) as e:
        console.print(f"[bold red]Invalid arguments:[/bold red] {e}")
        return EXIT_BAD_INPUT

    if settings.cache_dir:
        cf_cache.load_cache_file()

    start_time = time.time()
    try:
        if request.command is Command.COMPUTE:
            code = run_compute(request)
        elif request.command is Command.ENUMERATE:
            code = run_enumerate(request, args.count_only)
        elif request.command is Command.VERIFY:
            code = run_verify(request, args.golden)
        else:
            code = run_barbell(request)
    except InadmissibleError as e:
        console.print(f"[bold red]Inadmissible label:[/bold red] {e}")
        return EXIT_BAD_INPUT
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/]")
        return EXIT_INTERRUPTED

    if settings.cache_dir:
        cf_cache.save_cache_file()
    logger.info(f"{request.command.value} completed in {time.time() - start_time:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
