"""
Benchmark harness.

Each bundled or user-supplied net is sliced with every algorithm for a number
of randomly drawn criteria. Criteria are drawn up front from seeded generators
so that the per-run results do not depend on thread scheduling; only the
runtimes do.
"""

import json
import logging
import os
import queue
import random
import threading
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from statistics import mean
from typing import Any, Dict, List, Optional, Tuple

from app.config import (BENCH_MAX_PLACES, BENCH_MIN_PLACES, BENCH_RUNS_PER_NET, BENCH_SEED,
                        BENCH_THREADS)
from app.formats import read_pnml
from app.models.exceptions import BudgetExceeded, FormatError, NetValidationError, NoInputs
from app.models.net import Algorithm, MarkedPetriNet, NetSizes, NodeId
from app.slicing import run_algorithm
from app.utils import format_percent, list_net_files

STATS_FILE = 'bench_stats.tsv'
TIMINGS_FILE = 'bench_timings.tsv'
RUNS_FILE = 'bench_runs.json'
TABLE_FILE = 'bench_table.txt'

STATS_HEADER = ('algorithm', 'runs', 'failed', 'places_reduced_pct', 'tokens_reduced_pct',
                'arcs_reduced_pct', 'transitions_reduced_pct', 'mean_relative_size_pct')
TIMINGS_HEADER = ('algorithm', 'runs', 'mean_runtime_ms')


class BenchProgressNotifier(ABC):
    """
    Abstract base class for benchmark progress notification.
    """

    @abstractmethod
    def notify_started(self, bench_id: str, total: int) -> None:
        """Notify that a benchmark with total jobs has started"""
        pass

    @abstractmethod
    def notify_progress(self, bench_id: str, percent: int, message: str) -> None:
        """Notify about benchmark progress"""
        pass

    @abstractmethod
    def notify_completed(self, bench_id: str, result: Dict[str, Any]) -> None:
        """Notify that a benchmark has completed"""
        pass

    @abstractmethod
    def notify_failed(self, bench_id: str, error: str) -> None:
        """Notify that a benchmark has failed"""
        pass


class LoggingProgressNotifier(BenchProgressNotifier):
    """Reports progress through the bench logger"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def notify_started(self, bench_id: str, total: int) -> None:
        self.logger.info(f"Benchmark {bench_id} started with {total} jobs")

    def notify_progress(self, bench_id: str, percent: int, message: str) -> None:
        self.logger.info(f"Benchmark {bench_id}: {percent}% {message}")

    def notify_completed(self, bench_id: str, result: Dict[str, Any]) -> None:
        self.logger.info(f"Benchmark {bench_id} completed: {result}")

    def notify_failed(self, bench_id: str, error: str) -> None:
        self.logger.error(f"Benchmark {bench_id} failed: {error}")


@dataclass(frozen=True)
class BenchJob:
    index: int
    net: MarkedPetriNet
    criterion: Tuple[NodeId, ...]


@dataclass(frozen=True)
class BenchRun:
    """Outcome of one algorithm on one (net, criterion) pair"""

    job: int
    net: str
    criterion: Tuple[NodeId, ...]
    algorithm: Algorithm
    sizes_before: NetSizes
    sizes_after: Optional[NetSizes] = None
    runtime_ms: float = 0.0
    error: Optional[str] = None

    @property
    def completed(self) -> bool:
        return self.error is None

    def as_dict(self) -> Dict[str, Any]:
        return {
            'job': self.job,
            'net': self.net,
            'criterion': list(self.criterion),
            'algorithm': self.algorithm.value,
            'sizes_before': self.sizes_before.as_dict(),
            'sizes_after': self.sizes_after.as_dict() if self.sizes_after else None,
            'runtime_ms': round(self.runtime_ms, 3),
            'error': self.error,
        }


@dataclass(frozen=True)
class AlgorithmStats:
    """The six aggregate rows of one algorithm, over completed runs"""

    algorithm: Algorithm
    runs: int
    failed: int
    places_reduced_pct: float
    tokens_reduced_pct: float
    arcs_reduced_pct: float
    transitions_reduced_pct: float
    mean_relative_size_pct: float
    mean_runtime_ms: float

    @classmethod
    def of(cls, algorithm: Algorithm, runs: List[BenchRun]) -> 'AlgorithmStats':
        done = [r for r in runs if r.completed]
        failed = len(runs) - len(done)

        def share(dimension: str) -> float:
            if not done:
                return 0.0
            reduced = sum(1 for r in done
                          if getattr(r.sizes_after, dimension) < getattr(r.sizes_before, dimension))
            return 100.0 * reduced / len(done)

        def relative(r: BenchRun) -> float:
            before = r.sizes_before.nodes
            return 100.0 * r.sizes_after.nodes / before if before else 100.0

        return cls(
            algorithm=algorithm,
            runs=len(done),
            failed=failed,
            places_reduced_pct=share('places'),
            tokens_reduced_pct=share('tokens'),
            arcs_reduced_pct=share('arcs'),
            transitions_reduced_pct=share('transitions'),
            mean_relative_size_pct=mean(relative(r) for r in done) if done else 0.0,
            mean_runtime_ms=mean(r.runtime_ms for r in done) if done else 0.0,
        )


@dataclass(frozen=True)
class BenchStats:
    seed: int
    nets: Tuple[str, ...]
    rows: Dict[Algorithm, AlgorithmStats]
    runs: Tuple[BenchRun, ...] = field(default=(), repr=False)

    def stats_tsv(self) -> str:
        """Deterministic rows only: identical inputs give identical bytes"""
        lines = ['\t'.join(STATS_HEADER)]
        for algorithm, row in self.rows.items():
            lines.append('\t'.join([
                algorithm.value, str(row.runs), str(row.failed),
                format_percent(row.places_reduced_pct), format_percent(row.tokens_reduced_pct),
                format_percent(row.arcs_reduced_pct), format_percent(row.transitions_reduced_pct),
                format_percent(row.mean_relative_size_pct),
            ]))
        return '\n'.join(lines) + '\n'

    def timings_tsv(self) -> str:
        lines = ['\t'.join(TIMINGS_HEADER)]
        for algorithm, row in self.rows.items():
            lines.append(f"{algorithm.value}\t{row.runs}\t{row.mean_runtime_ms:.3f}")
        return '\n'.join(lines) + '\n'

    def table(self) -> str:
        """Measures as rows, algorithms as columns"""
        measures = [
            ('Places reduced (% of runs)', lambda r: format_percent(r.places_reduced_pct)),
            ('Tokens reduced (% of runs)', lambda r: format_percent(r.tokens_reduced_pct)),
            ('Arcs reduced (% of runs)', lambda r: format_percent(r.arcs_reduced_pct)),
            ('Transitions reduced (% of runs)',
             lambda r: format_percent(r.transitions_reduced_pct)),
            ('Mean relative size (%)', lambda r: format_percent(r.mean_relative_size_pct)),
            ('Time (mean ms)', lambda r: f"{r.mean_runtime_ms:.2f}"),
        ]
        header = [''] + [a.value for a in self.rows]
        body = [[label] + [render(row) for row in self.rows.values()] for label, render in measures]
        widths = [max(len(line[i]) for line in [header] + body) for i in range(len(header))]

        def render_line(cells: List[str]) -> str:
            return '  '.join(c.ljust(w) if i == 0 else c.rjust(w)
                             for i, (c, w) in enumerate(zip(cells, widths))).rstrip()

        footer = f"{len(self.nets)} nets, {len(self.runs)} runs, seed {self.seed}"
        return '\n'.join([render_line(header)] + [render_line(b) for b in body] + [footer]) + '\n'

    def runs_json(self) -> str:
        return json.dumps({'seed': self.seed, 'nets': list(self.nets),
                           'runs': [r.as_dict() for r in self.runs]}, indent=2) + '\n'

    def write(self, output_dir: str) -> Dict[str, str]:
        """Write the stats, timings, per-run records and text table; returns their paths"""
        os.makedirs(output_dir, exist_ok=True)
        contents = {
            STATS_FILE: self.stats_tsv(),
            TIMINGS_FILE: self.timings_tsv(),
            RUNS_FILE: self.runs_json(),
            TABLE_FILE: self.table(),
        }
        paths = {}
        for name, text in contents.items():
            path = os.path.join(output_dir, name)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            paths[name] = path
        return paths


def draw_criteria(s: MarkedPetriNet, runs: int, min_places: int, max_places: int,
                  rng: random.Random) -> List[Tuple[NodeId, ...]]:
    """Uniform samples without replacement of min_places..max_places places"""
    places = s.net.sorted_places()
    if not places:
        return []
    low = min(min_places, len(places))
    high = min(max_places, len(places))
    criteria = []
    for _ in range(runs):
        k = rng.randint(low, high)
        criteria.append(tuple(sorted(rng.sample(places, k))))
    return criteria


class BenchRunner:
    """
    Runs benchmark jobs on a pool of worker threads and merges the results
    in job order.
    """

    def __init__(self, num_threads: int = BENCH_THREADS,
                 progress_notifier: Optional[BenchProgressNotifier] = None):
        self.logger = logging.getLogger(__name__)
        self.num_threads = max(1, num_threads)
        self.progress_notifier = progress_notifier or LoggingProgressNotifier()

    def _run_job(self, job: BenchJob) -> List[BenchRun]:
        before = NetSizes.of(job.net)
        runs = []
        for algorithm in Algorithm:
            try:
                started = time.perf_counter()
                result = run_algorithm(algorithm, job.net, job.criterion)
                elapsed = (time.perf_counter() - started) * 1000.0
                runs.append(BenchRun(job.index, job.net.name, job.criterion, algorithm,
                                     before, result.sizes_after, elapsed))
            except BudgetExceeded as e:
                self.logger.warning(f"{algorithm.value} on {job.net.name} "
                                    f"{list(job.criterion)}: {e}")
                runs.append(BenchRun(job.index, job.net.name, job.criterion, algorithm,
                                     before, error=str(e)))
        return runs

    def _worker(self, work_queue: queue.Queue, result_queue: queue.Queue) -> None:
        self.logger.debug("Worker thread started")
        while True:
            try:
                job = work_queue.get_nowait()
            except queue.Empty:
                break
            try:
                result_queue.put((job.index, self._run_job(job)))
            except Exception as e:
                self.logger.error(f"Error in worker thread on job {job.index}: {str(e)}",
                                  exc_info=True)
                runs = [BenchRun(job.index, job.net.name, job.criterion, algorithm,
                                 NetSizes.of(job.net), error=str(e)) for algorithm in Algorithm]
                result_queue.put((job.index, runs))
            finally:
                work_queue.task_done()
        self.logger.debug("Worker thread exiting")

    def _setup_worker_threads(self, work_queue: queue.Queue, result_queue: queue.Queue,
                              num_jobs: int) -> List[threading.Thread]:
        thread_count = min(self.num_threads, num_jobs)
        threads = []
        self.logger.info(f"Starting {thread_count} worker threads")
        for i in range(thread_count):
            thread = threading.Thread(target=self._worker, args=(work_queue, result_queue))
            thread.daemon = True
            thread.start()
            threads.append(thread)
        return threads

    def _monitor_progress(self, bench_id: str, result_queue: queue.Queue,
                          total: int) -> Dict[int, List[BenchRun]]:
        collected: Dict[int, List[BenchRun]] = {}
        while len(collected) < total:
            try:
                index, runs = result_queue.get(timeout=0.1)
            except queue.Empty:
                continue
            collected[index] = runs
            percent = int(len(collected) / total * 100)
            self.progress_notifier.notify_progress(bench_id, percent,
                                                   f"Jobs: {len(collected)} / {total}")
        return collected

    def run(self, jobs: List[BenchJob], bench_id: str = "bench") -> List[BenchRun]:
        """
        Run every job and return the runs ordered by job index, then algorithm index.
        """
        self.progress_notifier.notify_started(bench_id, len(jobs))
        if not jobs:
            return []
        work_queue: queue.Queue = queue.Queue()
        result_queue: queue.Queue = queue.Queue()
        for job in jobs:
            work_queue.put(job)

        self._setup_worker_threads(work_queue, result_queue, len(jobs))
        collected = self._monitor_progress(bench_id, result_queue, len(jobs))
        work_queue.join()
        self.logger.info(f"All {len(jobs)} benchmark jobs have completed")
        return [run for index in sorted(collected) for run in collected[index]]


def load_corpus(directory: str) -> List[MarkedPetriNet]:
    """Parse every net document in directory, skipping the ones that do not parse"""
    logger = logging.getLogger(__name__)
    nets = []
    for path in list_net_files(directory):
        try:
            nets.append(read_pnml(path))
        except (FormatError, NetValidationError) as e:
            logger.warning(f"Skipping {path}: {e}")
    return nets


def run_bench(directory: str, runs_per_net: int = BENCH_RUNS_PER_NET,
              min_places: int = BENCH_MIN_PLACES, max_places: int = BENCH_MAX_PLACES,
              seed: int = BENCH_SEED, threads: int = BENCH_THREADS,
              output_dir: Optional[str] = None,
              progress_notifier: Optional[BenchProgressNotifier] = None) -> BenchStats:
    """
    Benchmark every algorithm on the nets of a directory.

    Args:
        directory: Folder of PNML files
        runs_per_net: Criteria drawn per net
        min_places: Smallest criterion size
        max_places: Largest criterion size
        seed: Seed for criterion sampling
        threads: Worker threads
        output_dir: When given, the stats, timings, runs and table files are written there
        progress_notifier: Receives progress events

    Returns:
        BenchStats

    Raises:
        NoInputs: No parseable net, or nothing to run
    """
    logger = logging.getLogger(__name__)
    if runs_per_net < 1:
        raise NoInputs(f"runs_per_net must be at least 1, got {runs_per_net}")
    if min_places < 1 or max_places < min_places:
        raise NoInputs(f"Invalid criterion size range {min_places}..{max_places}")
    nets = [s for s in load_corpus(directory) if s.net.places]
    if not nets:
        raise NoInputs(f"No parseable net with places in {directory}")

    jobs = []
    for s in nets:
        rng = random.Random(f"{seed}:{s.name}")
        for criterion in draw_criteria(s, runs_per_net, min_places, max_places, rng):
            jobs.append(BenchJob(len(jobs), s, criterion))
    logger.info(f"Benchmarking {len(nets)} nets with {len(jobs)} criteria (seed {seed})")

    notifier = progress_notifier or LoggingProgressNotifier()
    bench_id = f"{os.path.basename(os.path.normpath(directory))}-{seed}"
    try:
        runs = BenchRunner(threads, notifier).run(jobs, bench_id)
    except Exception as e:
        notifier.notify_failed(bench_id, str(e))
        raise

    rows = {algorithm: AlgorithmStats.of(algorithm, [r for r in runs if r.algorithm is algorithm])
            for algorithm in Algorithm}
    stats = BenchStats(seed, tuple(s.name for s in nets), rows, tuple(runs))
    if output_dir:
        stats.write(output_dir)
    notifier.notify_completed(bench_id, {'nets': len(nets), 'runs': len(runs),
                                         'failed': sum(1 for r in runs if not r.completed)})
    return stats
