"""
Command implementations behind the pn-slicer entry point.

Each command takes parsed options, prints its report on stdout and returns a
process exit status. Library errors are converted to exit codes here and
nowhere else.
"""

import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app import __version__
from app.bench import run_bench
from app.config import (BRUTE_FORCE_CEILING, OUTPUT_DIR, ORACLE_DEPTH, ORACLE_NODE_BUDGET,
                        STATE_CAP)
from app.formats import EXPORTERS, export_dot, read_pnml, write_pnml
from app.models.exceptions import (BudgetExceeded, ConfigurationError, FormatError,
                                   NetValidationError, NoInputs, PetriNetError, PropertyError,
                                   TooLarge, UnknownNode, UnknownPlace)
from app.models.generator import write_random_corpus
from app.models.net import Algorithm, MarkedPetriNet, NetSizes, NodeId, SliceResult
from app.oracles import (brute_force_min_slice, increasing_sequences, is_maximal_slice,
                         is_valid_slice)
from app.properties import PreservationRow, PropertyId, preservation_report
from app.slicing import run_algorithm
from app.utils import format_percent, slugify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_VERIFY_FAILED = 4


@dataclass(frozen=True)
class RunConfig:
    """
    Options of a slice run.

    Without an algorithm every algorithm runs; with properties only the slices
    that keep every listed property are reported.
    """

    input_path: str
    criterion: Tuple[NodeId, ...]
    algorithm: Optional[Algorithm] = None
    properties: Tuple[PropertyId, ...] = ()
    json: bool = False
    output_dir: str = OUTPUT_DIR
    exports: Tuple[str, ...] = ()
    state_cap: int = STATE_CAP

    def __post_init__(self):
        if not self.criterion:
            raise ConfigurationError("The slicing criterion names no place")
        if self.algorithm is not None and self.properties:
            raise ConfigurationError("Give either an algorithm or a property list, not both")
        for name in self.exports:
            if name not in EXPORTERS:
                raise ConfigurationError(f"Unknown export format: {name}")

    @property
    def algorithms(self) -> List[Algorithm]:
        return [self.algorithm] if self.algorithm else list(Algorithm)


def parse_criterion(text: str) -> Tuple[NodeId, ...]:
    """
    Comma-separated place ids with surrounding whitespace trimmed.

    Raises:
        ConfigurationError: An id between two commas is empty
    """
    if not text.strip():
        return ()
    ids = tuple(part.strip() for part in text.split(','))
    if any(not part for part in ids):
        raise ConfigurationError(f"Empty place id in criterion {text!r}")
    return tuple(dict.fromkeys(ids))


def parse_selector(text: Optional[str]) -> Tuple[Optional[Algorithm], Tuple[PropertyId, ...]]:
    """
    The optional third argument: an algorithm name or index, or a property list.

    Raises:
        UnknownProperty: A listed property is not supported
    """
    if text is None or not text.strip():
        return None, ()
    try:
        return Algorithm.parse(text), ()
    except ValueError:
        pass
    return None, tuple(PropertyId.parse(part) for part in text.split(','))


def parse_exports(text: Optional[str]) -> Tuple[str, ...]:
    if not text:
        return ()
    return tuple(dict.fromkeys(part.strip().lower() for part in text.split(',') if part.strip()))


def _exit_code(error: Exception) -> int:
    if isinstance(error, (FormatError, NetValidationError)):
        return EXIT_PARSE
    if isinstance(error, (UnknownNode, ConfigurationError, PropertyError, NoInputs)):
        return EXIT_CONFIG
    if isinstance(error, (BudgetExceeded, TooLarge)):
        return EXIT_BUDGET
    return EXIT_PARSE


def _fail(error: Exception) -> int:
    code = _exit_code(error)
    logger.error(f"{type(error).__name__}: {error}")
    print(f"error: {error}", file=sys.stderr)
    return code


def _write_outputs(s: MarkedPetriNet, result: SliceResult, cfg: RunConfig, stem: str) -> str:
    """Write the slice PNML, the highlighted DOT rendering and any extra exports"""
    os.makedirs(cfg.output_dir, exist_ok=True)
    base = os.path.join(cfg.output_dir, f"{stem}_{result.algorithm.index}")
    with open(f"{base}.pnml", 'wb') as f:
        f.write(write_pnml(result.subnet))
    with open(f"{base}.dot", 'w', encoding='utf-8') as f:
        f.write(export_dot(s, highlight=result.nodes))
    for name in cfg.exports:
        if name == 'dot':
            continue
        with open(f"{base}.{name}", 'w', encoding='utf-8') as f:
            f.write(EXPORTERS[name](result.subnet))
    return f"{base}.pnml"


def _result_entry(result: SliceResult, output_file: str,
                  rows: Sequence[PreservationRow] = ()) -> Dict[str, Any]:
    entry = {
        'algorithm': result.algorithm.value,
        'label': result.algorithm.label,
        'sizes_before': result.sizes_before.as_dict(),
        'sizes_after': result.sizes_after.as_dict(),
        'reduction_pct': result.reduction_pct,
        'runtime_ms': round(result.runtime_ms, 3),
        'output_file': output_file,
        'warnings': list(result.warnings),
    }
    if rows:
        entry['properties'] = [{
            'property': str(row.property),
            'original': row.original.outcome.value,
            'sliced': row.sliced.outcome.value,
            'kept': row.kept,
        } for row in rows]
    return entry


def reduction_line(result: SliceResult) -> str:
    return (f"{result.algorithm.index}.- {result.algorithm.label} -> "
            f"Reduction: {format_percent(result.reduction_pct['total'])} %")


def run_slice(cfg: RunConfig) -> int:
    """
    Slice a PNML file and report the reduction of each algorithm.

    Returns:
        int: 0 on success, 1 on parse errors, 2 on an unknown place or bad
            configuration, 3 when an algorithm exhausted its budget
    """
    try:
        s = read_pnml(cfg.input_path)
        for place in cfg.criterion:
            if place not in s.net.places:
                raise UnknownPlace(place)
    except PetriNetError as e:
        return _fail(e)

    stem = slugify(s.name)
    print(f"Petri net named {s.name} successfully read.")
    print(f"Slicing criterion: [{', '.join(cfg.criterion)}]")

    entries = []
    status = EXIT_OK
    for algorithm in cfg.algorithms:
        try:
            result = run_algorithm(algorithm, s, cfg.criterion)
        except BudgetExceeded as e:
            logger.error(f"{algorithm.value} on {s.name}: {e}")
            print(f"{algorithm.index}.- {algorithm.label} -> {e}")
            status = EXIT_BUDGET
            continue
        rows: List[PreservationRow] = []
        if cfg.properties:
            rows = preservation_report(s, result, cfg.properties, cfg.state_cap)
            if not all(row.kept for row in rows):
                lost = ', '.join(str(row.property) for row in rows if not row.kept)
                logger.info(f"{algorithm.value} slice dropped: does not keep {lost}")
                continue
        output_file = _write_outputs(s, result, cfg, stem)
        print(reduction_line(result))
        entries.append(_result_entry(result, output_file, rows))

    if cfg.json:
        report = {
            'tool_version': __version__,
            'net': {'name': s.name, **NetSizes.of(s).as_dict()},
            'criterion': list(cfg.criterion),
            'results': entries,
        }
        if cfg.properties:
            report['properties'] = [str(p) for p in cfg.properties]
        os.makedirs(cfg.output_dir, exist_ok=True)
        path = os.path.join(cfg.output_dir, f"{stem}.json")
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(report, f, indent=2)
            f.write('\n')
        print(f"JSON report written to {path}")
    return status


@dataclass
class VerifyVerdict:
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: str = "") -> None:
        self.checks.append((name, passed, witness))

    @property
    def passed(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def lines(self) -> List[str]:
        lines = []
        for name, passed, witness in self.checks:
            line = f"{'PASS' if passed else 'FAIL'} {name}"
            lines.append(f"{line}: {witness}" if witness else line)
        return lines


def verify_slice(s: MarkedPetriNet, criterion: Sequence[NodeId], algorithm: Algorithm,
                 depth: int = ORACLE_DEPTH, ceiling: int = BRUTE_FORCE_CEILING,
                 node_budget: int = ORACLE_NODE_BUDGET) -> VerifyVerdict:
    """
    Slice s and check the result against the brute-force oracles: validity for
    every algorithm, maximality for the maximal slicer and the brute-force
    minimum size for the minimal slicer.

    Raises:
        TooLarge: The net has more than ceiling nodes
        UnknownPlace: The criterion names a place the net does not have
        BudgetExceeded: The slicer or an oracle exhausted its budget
    """
    size = len(s.net.nodes)
    if size > ceiling:
        raise TooLarge(size, ceiling)
    q = frozenset(criterion)
    result = run_algorithm(algorithm, s, q)
    verdict = VerifyVerdict()
    sequences = increasing_sequences(s, q, depth, node_budget)

    valid = is_valid_slice(s, q, result.subnet, depth, node_budget)
    if valid:
        verdict.add('valid', True)
    elif sequences:
        verdict.add('valid', False, f"no subsequence of {list(sequences[0])} fires")
    else:
        verdict.add('valid', False, "the slice is not a subnet of the net")
    if algorithm is Algorithm.MAXIMAL:
        maximal = is_maximal_slice(s, q, result.subnet, depth, node_budget)
        verdict.add('maximal', maximal, "" if maximal else "an increasing sequence is lost")
    if algorithm is Algorithm.MINIMAL and not sequences:
        verdict.add('minimal-size-match', True,
                    f"no increasing firing sequence within {depth} steps")
    elif algorithm is Algorithm.MINIMAL:
        best, witness = brute_force_min_slice(s, q, depth, ceiling, node_budget)
        got = len(result.nodes)
        detail = f"size {got}, brute-force minimum {best}"
        if got != best:
            detail += f" {sorted(witness.nodes)}"
        verdict.add('minimal-size-match', got == best, detail)
    return verdict


def run_verify(path: str, criterion: Sequence[NodeId], algorithm: Algorithm,
               depth: int = ORACLE_DEPTH, ceiling: int = BRUTE_FORCE_CEILING) -> int:
    """
    Returns:
        int: 0 when every check passes, 4 when one fails, otherwise the error exit code
    """
    try:
        s = read_pnml(path)
        verdict = verify_slice(s, criterion, algorithm, depth, ceiling)
    except PetriNetError as e:
        return _fail(e)
    print(f"{algorithm.index}.- {algorithm.label} on {s.name}, depth {depth}")
    for line in verdict.lines():
        print(line)
    return EXIT_OK if verdict.passed else EXIT_VERIFY_FAILED


def run_bench_command(directory: str, runs_per_net: int, min_places: int, max_places: int,
                      seed: int, threads: int, output_dir: str) -> int:
    try:
        stats = run_bench(directory, runs_per_net, min_places, max_places, seed, threads,
                          output_dir=output_dir)
    except PetriNetError as e:
        return _fail(e)
    print(stats.table(), end='')
    print(f"Stats written to {output_dir}")
    return EXIT_OK


def run_generate(directory: str, count: int, seed: int, max_places: int,
                 max_transitions: int, ordinary: bool) -> int:
    if count < 1:
        return _fail(ConfigurationError("count must be at least 1"))
    paths = write_random_corpus(directory, count, seed, max_places, max_transitions, ordinary)
    print(f"Wrote {len(paths)} nets to {directory}")
    return EXIT_OK
