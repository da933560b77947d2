import argparse
import logging
import sys
from typing import List, Optional

from app import __version__
from app.cli import (EXIT_CONFIG, RunConfig, parse_criterion, parse_exports, parse_selector,
                     run_bench_command, run_generate, run_slice, run_verify)
from app.config import (BENCH_MAX_PLACES, BENCH_MIN_PLACES, BENCH_RUNS_PER_NET, BENCH_SEED,
                        BENCH_THREADS, BRUTE_FORCE_CEILING, BUNDLED_NETS_FOLDER, ORACLE_DEPTH,
                        OUTPUT_DIR, STATE_CAP)
from app.models.exceptions import PetriNetError
from app.models.net import Algorithm

# Get logger
logger = logging.getLogger(__name__)

COMMANDS = ('slice', 'verify', 'bench', 'generate')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='pn-slicer',
                                     description='Petri net slicing workbench')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest='command', required=True)

    slice_parser = commands.add_parser('slice', help='slice a PNML net')
    slice_parser.add_argument('pnml_file', metavar='PNML_FILE', help='path to the net')
    slice_parser.add_argument('criterion', metavar='SLICING_CRITERION',
                              help='comma-separated place ids, e.g. "P6,P9"')
    slice_parser.add_argument('selector', metavar='PROPERTY_LIST | ALGORITHM', nargs='?',
                              help='properties every reported slice must keep, or one '
                                   'algorithm (name or index); all algorithms by default')
    slice_parser.add_argument('-json', '--json', dest='json', action='store_true',
                              help='also write a JSON report')
    slice_parser.add_argument('--export', metavar='FORMATS',
                              help='extra renderings of each slice: dot,lola,apt')
    slice_parser.add_argument('-o', '--output', default=OUTPUT_DIR,
                              help='output directory (default: %(default)s)')
    slice_parser.add_argument('--state-cap', type=int, default=STATE_CAP,
                              help='markings explored by behavioural property checks')

    verify_parser = commands.add_parser('verify', help='check a slicer against the oracles')
    verify_parser.add_argument('pnml_file', metavar='PNML_FILE')
    verify_parser.add_argument('criterion', metavar='SLICING_CRITERION')
    verify_parser.add_argument('algorithm', metavar='ALGORITHM')
    verify_parser.add_argument('--depth', type=int, default=ORACLE_DEPTH,
                               help='firing sequence length bound (default: %(default)s)')
    verify_parser.add_argument('--ceiling', type=int, default=BRUTE_FORCE_CEILING,
                               help='largest net the oracles accept (default: %(default)s)')

    bench_parser = commands.add_parser('bench', help='benchmark every algorithm on a corpus')
    bench_parser.add_argument('directory', nargs='?', default=BUNDLED_NETS_FOLDER)
    bench_parser.add_argument('--runs', type=int, default=BENCH_RUNS_PER_NET,
                              help='criteria drawn per net (default: %(default)s)')
    bench_parser.add_argument('--min-places', type=int, default=BENCH_MIN_PLACES)
    bench_parser.add_argument('--max-places', type=int, default=BENCH_MAX_PLACES)
    bench_parser.add_argument('--seed', type=int, default=BENCH_SEED)
    bench_parser.add_argument('--threads', type=int, default=BENCH_THREADS)
    bench_parser.add_argument('-o', '--output', default=OUTPUT_DIR)

    generate_parser = commands.add_parser('generate', help='write seeded random nets')
    generate_parser.add_argument('directory')
    generate_parser.add_argument('--count', type=int, default=10)
    generate_parser.add_argument('--seed', type=int, default=BENCH_SEED)
    generate_parser.add_argument('--max-places', type=int, default=8)
    generate_parser.add_argument('--max-transitions', type=int, default=8)
    generate_parser.add_argument('--ordinary', action='store_true',
                                 help='draw every arc with weight 1')
    return parser


def _slice(args: argparse.Namespace) -> int:
    try:
        algorithm, properties = parse_selector(args.selector)
        cfg = RunConfig(
            input_path=args.pnml_file,
            criterion=parse_criterion(args.criterion),
            algorithm=algorithm,
            properties=properties,
            json=args.json,
            output_dir=args.output,
            exports=parse_exports(args.export),
            state_cap=args.state_cap,
        )
    except PetriNetError as e:
        logger.error(f"Invalid slice options: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run_slice(cfg)


def _verify(args: argparse.Namespace) -> int:
    try:
        algorithm = Algorithm.parse(args.algorithm)
        criterion = parse_criterion(args.criterion)
    except (ValueError, PetriNetError) as e:
        logger.error(f"Invalid verify options: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run_verify(args.pnml_file, criterion, algorithm, args.depth, args.ceiling)


def with_default_command(argv: List[str]) -> List[str]:
    """Bare `PNML_FILE SLICING_CRITERION ...` invocations run the slice command"""
    if argv and argv[0] not in COMMANDS and not argv[0].startswith('-'):
        return ['slice', *argv]
    return argv


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the command line"""
    argv = with_default_command(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_args(argv)
    logger.info(f"Running command {args.command}")
    try:
        if args.command == 'slice':
            return _slice(args)
        if args.command == 'verify':
            return _verify(args)
        if args.command == 'bench':
            return run_bench_command(args.directory, args.runs, args.min_places,
                                     args.max_places, args.seed, args.threads, args.output)
        return run_generate(args.directory, args.count, args.seed, args.max_places,
                            args.max_transitions, args.ordinary)
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {str(e)}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
