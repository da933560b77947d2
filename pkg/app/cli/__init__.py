from .commands import (EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_PARSE, EXIT_VERIFY_FAILED,
                       RunConfig, VerifyVerdict, parse_criterion, parse_exports, parse_selector,
                       reduction_line, run_bench_command, run_generate, run_slice, run_verify,
                       verify_slice)

__all__ = ['EXIT_BUDGET', 'EXIT_CONFIG', 'EXIT_OK', 'EXIT_PARSE', 'EXIT_VERIFY_FAILED',
           'RunConfig', 'VerifyVerdict', 'parse_criterion', 'parse_exports', 'parse_selector',
           'reduction_line', 'run_bench_command', 'run_generate', 'run_slice', 'run_verify',
           'verify_slice']
