"""Experiment grid, accuracy metrics and the CSV report.

Every random choice of a grid run derives from the master seed: the input
pair from ``(master, length index, trial)`` and the solver run from
``(master, length index, k index, epsilon index, trial)``.  The exact
baseline therefore runs once per pair and k and is shared by every epsilon.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, Iterable, List, Optional, Sequence as Seq, Tuple

import numpy as np

from .. import noisysearch
from ..baselines import fgku
from ..seqcore import Alphabet
from .datasets import extract_from_file, generate_random, read_sequence_file

CSV_HEADER = ("dataset,n,k,epsilon,trial,seed,lcs_exact,lcs_approx,witness_dist,ratio,"
              "time_exact_ms,time_approx_ms")
COLUMNS = tuple(CSV_HEADER.split(","))
TIMING_COLUMNS = ("time_exact_ms", "time_approx_ms")

DESK_LENGTHS = (1000, 2000, 5000, 10000)
PAPER_LENGTHS = tuple(range(5000, 60001, 5000))
PAPER_KS = (10, 25, 50)
PAPER_EPSILONS = (1.0, 1.25, 1.5, 1.75, 2.0)


@dataclass(frozen=True)
class ExperimentSpec:
    """A grid of (length, k, epsilon) cells with ``trials`` pairs each.

    ``dataset`` is ``"random"`` (uniform over ``alphabet``) or ``"file"``
    (both strings of a pair extracted independently, at uniform offsets,
    from ``source``).
    """

    dataset: str = "random"
    lengths: Tuple[int, ...] = DESK_LENGTHS
    ks: Tuple[int, ...] = (10, 25)
    epsilons: Tuple[float, ...] = (1.0,)
    trials: int = 10
    seed: int = 0
    source: Optional[str] = None
    alphabet: str = "ACGT"
    solver_options: Dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("lengths", "ks", "epsilons"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.dataset not in ("random", "file"):
            raise ValueError(f"unknown dataset {self.dataset!r}")
        if self.dataset == "file" and not self.source:
            raise ValueError("file dataset needs a source path")
        if not self.lengths or min(self.lengths) < 1:
            raise ValueError("lengths must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.ks or min(self.ks) < 0:
            raise ValueError("k values must be >= 0")
        if not self.epsilons or min(self.epsilons) <= 0:
            raise ValueError("epsilon values must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")

    @classmethod
    def paper_grid(cls, **overrides) -> "ExperimentSpec":
        """The full published grid (lengths up to 60000); hours of compute."""
        base = dict(lengths=PAPER_LENGTHS, ks=PAPER_KS, epsilons=PAPER_EPSILONS, trials=10)
        base.update(overrides)
        return cls(**base)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown grid keys: {', '.join(sorted(extra))}")
        return cls(**data)

    def to_dict(self) -> dict:
        out = asdict(self)
        for name in ("lengths", "ks", "epsilons"):
            out[name] = list(out[name])
        return out


@dataclass(frozen=True)
class RunRow:
    dataset: str
    n: int
    k: int
    epsilon: float
    trial: int
    seed: int
    lcs_exact: Optional[int]
    lcs_approx: Optional[int]
    witness_dist: Optional[int]
    ratio: Optional[float]
    time_exact_ms: Optional[float]
    time_approx_ms: Optional[float]

    def as_csv(self) -> List[str]:
        out = []
        for name in COLUMNS:
            v = getattr(self, name)
            if v is None:
                out.append("")
            elif name in TIMING_COLUMNS:
                out.append(f"{v:.3f}")
            else:
                out.append(repr(v) if isinstance(v, float) else str(v))
        return out

    @classmethod
    def from_csv(cls, record: Dict[str, str]) -> "RunRow":
        ints = ("n", "k", "trial", "seed", "lcs_exact", "lcs_approx", "witness_dist")
        vals = {}
        for name in COLUMNS:
            raw = record[name]
            if name == "dataset":
                vals[name] = raw
            elif raw == "":
                vals[name] = None
            else:
                vals[name] = int(raw) if name in ints else float(raw)
        return cls(**vals)


def ratio_of(approx: int, exact: int) -> float:
    """``approx / exact``; two empty answers count as a perfect 1."""
    if exact == 0:
        return 1.0 if approx == 0 else math.inf
    return approx / exact


@dataclass(frozen=True)
class AccuracyReport:
    """Ratio statistics over runs that have both an exact and an approximate length."""

    rows: Tuple[RunRow, ...]

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows if r.ratio is not None], dtype=float)

    @property
    def r_min(self) -> float:
        return float(self.ratios.min()) if self.ratios.size else math.nan

    @property
    def r_max(self) -> float:
        return float(self.ratios.max()) if self.ratios.size else math.nan

    @property
    def err(self) -> float:
        """Percentage of runs whose approximate length fell short of the exact one."""
        r = self.ratios
        return float(100.0 * np.count_nonzero(r < 1) / r.size) if r.size else math.nan

    def cells(self) -> Dict[Tuple[int, int, float], "AccuracyReport"]:
        groups: Dict[Tuple[int, int, float], List[RunRow]] = {}
        for row in self.rows:
            groups.setdefault((row.n, row.k, row.epsilon), []).append(row)
        return {key: AccuracyReport(tuple(v)) for key, v in groups.items()}

    def summary(self) -> str:
        lines = [f"{'n':>7} {'k':>4} {'eps':>5} {'runs':>5} {'r_min':>7} {'r_max':>7} {'err%':>6}"]
        for (n, k, eps), rep in sorted(self.cells().items()):
            lines.append(f"{n:>7} {k:>4} {eps:>5.2f} {len(rep.rows):>5} "
                         f"{rep.r_min:>7.3f} {rep.r_max:>7.3f} {rep.err:>6.1f}")
        return "\n".join(lines)


def derive_seed(master: int, *key: int) -> int:
    """63-bit seed hashed from the master seed and grid indices."""
    ss = np.random.SeedSequence(master, spawn_key=tuple(key))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_pair(spec: ExperimentSpec, length_index: int, trial: int, text: Optional[str] = None):
    n = spec.lengths[length_index]
    rng = np.random.default_rng(derive_seed(spec.seed, length_index, trial))
    alphabet = Alphabet(spec.alphabet)
    if spec.dataset == "random":
        return (generate_random(n, alphabet, rng), generate_random(n, alphabet, rng))
    return (extract_from_file(spec.source, n, seed=rng, alphabet=alphabet, text=text),
            extract_from_file(spec.source, n, seed=rng, alphabet=alphabet, text=text))


def _run_task(args) -> List[RunRow]:
    spec, li, ki, trial, text = args
    x, y = make_pair(spec, li, trial, text)
    k = spec.ks[ki]
    t0 = time.perf_counter()
    exact = fgku(x, y, k).length
    t_exact = 1000 * (time.perf_counter() - t0)
    rows = []
    for ei, eps in enumerate(spec.epsilons):
        seed = derive_seed(spec.seed, li, ki, ei, trial)
        t0 = time.perf_counter()
        res = noisysearch.lcs_approx_k(x, y, k, eps, seed=seed, **spec.solver_options)
        t_approx = 1000 * (time.perf_counter() - t0)
        rows.append(RunRow(spec.dataset, spec.lengths[li], k, float(eps), trial, seed, exact,
                           res.length, res.distance, ratio_of(res.length, exact), t_exact,
                           t_approx))
    return rows


def run_experiment(spec: ExperimentSpec, parallel: int = 1,
                   progress=None) -> AccuracyReport:
    """Run every cell of the grid; rows come back in (n, k, epsilon, trial) order.

    ``parallel > 1`` spreads (length, k, trial) tasks over worker processes.
    ``progress`` is called with the number of finished tasks.
    """
    text = read_sequence_file(spec.source) if spec.dataset == "file" else None
    tasks = [(spec, li, ki, t, text) for li in range(len(spec.lengths))
             for ki in range(len(spec.ks)) for t in range(spec.trials)]
    results: List[List[RunRow]] = []
    if parallel > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            for out in pool.map(_run_task, tasks):
                results.append(out)
                if progress:
                    progress(len(results))
    else:
        for task in tasks:
            results.append(_run_task(task))
            if progress:
                progress(len(results))
    order = {}
    for (_, li, ki, t, _), out in zip(tasks, results):
        for ei, row in enumerate(out):
            order[(li, ki, ei, t)] = row
    return AccuracyReport(tuple(order[key] for key in sorted(order)))


def write_csv(rows: Iterable[RunRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())


def read_csv(fh) -> List[RunRow]:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError("unexpected CSV header")
    return [RunRow.from_csv(rec) for rec in reader]


def to_csv_string(rows: Seq[RunRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
