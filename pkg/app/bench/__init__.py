from .bench import (RUNS_FILE, STATS_FILE, STATS_HEADER, TABLE_FILE, TIMINGS_FILE,
                    TIMINGS_HEADER, AlgorithmStats, BenchJob, BenchProgressNotifier, BenchRun,
                    BenchRunner, BenchStats, LoggingProgressNotifier, draw_criteria, load_corpus,
                    run_bench)

__all__ = ['AlgorithmStats', 'BenchJob', 'BenchProgressNotifier', 'BenchRun', 'BenchRunner',
           'BenchStats', 'LoggingProgressNotifier', 'RUNS_FILE', 'STATS_FILE', 'STATS_HEADER',
           'TABLE_FILE', 'TIMINGS_FILE', 'TIMINGS_HEADER', 'draw_criteria', 'load_corpus',
           'run_bench']
