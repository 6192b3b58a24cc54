"""Command-line interface: ``lcsk run|gen|bench|selftest``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 failed self-test.
``LCSK_SEED`` supplies the master seed when ``--seed`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .. import noisysearch
from ..baselines import fgku
from ..seqcore import Alphabet, SequenceError
from . import datasets, experiment

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SELFTEST = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lcsk", description="Longest common substring with approximately k mismatches.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("run", help="solve one instance")
    r.add_argument("--x", required=True, metavar="FILE", help="first string (FASTA or raw text)")
    r.add_argument("--y", required=True, metavar="FILE", help="second string (FASTA or raw text)")
    r.add_argument("--k", required=True, type=int)
    r.add_argument("--epsilon", type=float, default=1.0)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--mode", choices=("approx", "exact", "both"), default="both")
    r.add_argument("--format", choices=("text", "csv", "json"), default="text")
    r.add_argument("--alphabet", default="ACGT",
                   help="symbol set (default ACGT); 'auto' takes the letters found in the inputs")
    r.add_argument("--unknown", default=None, metavar="SYMBOL",
                   help="map characters outside the alphabet to SYMBOL instead of failing")

    g = sub.add_parser("gen", help="write a random string")
    g.add_argument("--len", dest="length", required=True, type=int)
    g.add_argument("--alphabet", default="ACGT")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default="-", metavar="FILE", help="output path, '-' for stdout")
    g.add_argument("--fasta", action="store_true", help="prepend a FASTA header")

    b = sub.add_parser(
        "bench", help="run an accuracy grid and write CSV",
        epilog="With --dataset file, the two strings of every pair are extracted "
               "independently at uniform random offsets of --source.")
    b.add_argument("--grid-spec", metavar="FILE", help="JSON grid; flags below override its keys")
    b.add_argument("--dataset", choices=("random", "file"))
    b.add_argument("--source", metavar="FILE", help="FASTA/raw genome for --dataset file")
    b.add_argument("--lengths", type=_int_list)
    b.add_argument("--ks", type=_int_list)
    b.add_argument("--epsilons", type=_float_list)
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--paper-grid", action="store_true",
                   help="lengths 5000..60000, k in {10,25,50}, 5 epsilons (hours of compute)")
    b.add_argument("--out", default="-", metavar="CSV")
    b.add_argument("--parallel", type=int, default=1, metavar="N")
    b.add_argument("--quiet", action="store_true", help="no summary on stderr")

    s = sub.add_parser("selftest", help="run the built-in oracle and statistical checks")
    s.add_argument("--seed", type=int, default=0)
    return p


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("LCSK_SEED")
    if env is None or env.strip() == "":
        return None
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"LCSK_SEED must be an integer, got {env!r}")


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}")


def cmd_run(args) -> int:
    if args.k < 0:
        raise UsageError("--k must be >= 0")
    if args.epsilon <= 0:
        raise UsageError("--epsilon must be > 0")
    seed = resolve_seed(args.seed)
    tx = datasets.read_sequence_file(args.x)
    ty = datasets.read_sequence_file(args.y)
    if not tx or not ty:
        raise InputError("input strings must be non-empty")
    if args.alphabet == "auto":
        odd = sorted(set(tx + ty) - set("ABCDEFGHIJKLMNOPQRSTUVWXYZ"))
        if odd:
            raise InputError(f"unknown symbol {odd[0]!r} in input")
        alphabet = Alphabet.from_texts(tx, ty)
    else:
        try:
            alphabet = Alphabet(args.alphabet.upper())
        except SequenceError as exc:
            raise UsageError(str(exc))
    if args.unknown is not None and args.unknown.upper() not in alphabet.symbols:
        raise UsageError(f"--unknown {args.unknown!r} is not in the alphabet")
    unknown = None if args.unknown is None else args.unknown.upper()
    try:
        x, y = alphabet.encode(tx, unknown), alphabet.encode(ty, unknown)
    except SequenceError as exc:
        raise InputError(str(exc))

    out = {"n_x": len(x), "n_y": len(y), "k": args.k, "epsilon": args.epsilon, "seed": seed}
    exact = approx = None
    t_exact = t_approx = None
    if args.mode in ("exact", "both"):
        t0 = time.perf_counter()
        exact = fgku(x, y, args.k)
        t_exact = 1000 * (time.perf_counter() - t0)
        out.update(exact_length=exact.length, exact_x_start=exact.x_start,
                   exact_y_start=exact.y_start, time_exact_ms=round(t_exact, 3))
    if args.mode in ("approx", "both"):
        t0 = time.perf_counter()
        approx = noisysearch.lcs_approx_k(x, y, args.k, args.epsilon, seed=seed)
        t_approx = 1000 * (time.perf_counter() - t0)
        out.update(approx_length=approx.length, approx_x_start=approx.x_start,
                   approx_y_start=approx.y_start, witness_dist=approx.distance,
                   time_approx_ms=round(t_approx, 3))
    if exact is not None and approx is not None:
        out["ratio"] = experiment.ratio_of(approx.length, exact.length)

    if args.format == "json":
        print(json.dumps(out))
    elif args.format == "csv":
        row = experiment.RunRow(
            "pair", min(len(x), len(y)), args.k, float(args.epsilon), 0,
            -1 if seed is None else seed,
            exact.length if exact is not None else None,
            approx.length if approx is not None else None,
            approx.distance if approx is not None else None, out.get("ratio"), t_exact, t_approx)
        experiment.write_csv([row], sys.stdout)
    else:
        for key, val in out.items():
            print(f"{key}: {val}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.length < 0:
        raise UsageError("--len must be >= 0")
    try:
        alphabet = Alphabet(args.alphabet)
    except SequenceError as exc:
        raise UsageError(str(exc))
    seq = datasets.generate_random(args.length, alphabet, resolve_seed(args.seed))
    fh, close = _open_out(args.out)
    try:
        if args.fasta:
            fh.write(f">random len={args.length}\n")
            text = str(seq)
            for i in range(0, len(text), 80):
                fh.write(text[i:i + 80] + "\n")
        else:
            fh.write(str(seq) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


def load_grid(args) -> experiment.ExperimentSpec:
    data = {}
    if args.grid_spec:
        try:
            with open(args.grid_spec) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {args.grid_spec}: {exc.strerror}")
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.grid_spec}: invalid JSON ({exc})")
        if not isinstance(data, dict):
            raise InputError(f"{args.grid_spec}: expected a JSON object")
    flags = dict(dataset=args.dataset, source=args.source, lengths=args.lengths, ks=args.ks,
                 epsilons=args.epsilons, trials=args.trials, seed=resolve_seed(args.seed))
    data.update({k: v for k, v in flags.items() if v is not None})
    data.setdefault("seed", 0)
    try:
        if args.paper_grid:
            return experiment.ExperimentSpec.paper_grid(**data)
        return experiment.ExperimentSpec.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise (InputError if args.grid_spec else UsageError)(f"bad grid: {exc}")


def cmd_bench(args) -> int:
    if args.parallel < 1:
        raise UsageError("--parallel must be >= 1")
    spec = load_grid(args)
    total = len(spec.lengths) * len(spec.ks) * spec.trials

    def progress(done):
        if not args.quiet:
            print(f"\r{done}/{total} tasks", end="", file=sys.stderr, flush=True)

    report = experiment.run_experiment(spec, parallel=args.parallel, progress=progress)
    fh, close = _open_out(args.out)
    try:
        experiment.write_csv(report.rows, fh)
    finally:
        if close:
            fh.close()
    if not args.quiet:
        print("", file=sys.stderr)
        print(report.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from ..selftest import run_selftest

    def show(res):
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")

    results = run_selftest(args.seed, report=show)
    return EXIT_OK if all(r.passed for r in results) else EXIT_SELFTEST


COMMANDS = {"run": cmd_run, "gen": cmd_gen, "bench": cmd_bench, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"lcsk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, datasets.DatasetError, SequenceError) as exc:
        print(f"lcsk: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
