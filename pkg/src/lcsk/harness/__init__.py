"""Benchmark harness: datasets, experiment grid and the command-line interface."""

from .datasets import (DatasetError, extract_from_file, generate_random, load_sequence,
                       parse_sequence_text, read_sequence_file)
from .experiment import (CSV_HEADER, AccuracyReport, ExperimentSpec, RunRow, derive_seed,
                         read_csv, run_experiment, write_csv)

__all__ = [
    "DatasetError", "extract_from_file", "generate_random", "load_sequence",
    "parse_sequence_text", "read_sequence_file", "CSV_HEADER", "AccuracyReport",
    "ExperimentSpec", "RunRow", "derive_seed", "read_csv", "run_experiment", "write_csv",
]
