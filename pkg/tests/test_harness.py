import csv
import io
import json
import math

import numpy as np
import pytest
from scipy import stats

from lcsk.harness import cli
from lcsk.harness.datasets import (DatasetError, extract_from_file, generate_random, load_sequence,
                                   parse_sequence_text)
from lcsk.harness.experiment import (CSV_HEADER, AccuracyReport, ExperimentSpec, RunRow,
                                     derive_seed, ratio_of, read_csv, run_experiment,
                                     to_csv_string, write_csv)
from lcsk.seqcore import DNA, Alphabet


@pytest.fixture
def fasta(tmp_path):
    p = tmp_path / "g.fa"
    p.write_text(">chr1 test genome\nACGTACGTTT\nGGCCAAtt\n\n>chr2\nACGA\n")
    return p


class TestDatasets:
    def test_generate(self):
        assert len(generate_random(0, seed=1)) == 0
        assert generate_random(50, seed=3) == generate_random(50, seed=3)
        assert generate_random(50, seed=3) != generate_random(50, seed=4)
        with pytest.raises(ValueError):
            generate_random(-1)

    def test_generate_uniform(self):
        codes = generate_random(1_000_000, seed=0).codes
        assert stats.chisquare(np.bincount(codes)[1:]).pvalue > 0.01

    def test_parse(self):
        assert parse_sequence_text(">h\nAC GT\n;note\nac\n") == "ACGTAC"
        assert parse_sequence_text("ACGT\n") == "ACGT"

    def test_raw_extract(self, tmp_path):
        p = tmp_path / "raw.txt"
        p.write_text("ACGT")
        assert str(extract_from_file(p, 2, offset=1)) == "CG"
        with pytest.raises(DatasetError):
            extract_from_file(p, 2, offset=3)
        with pytest.raises(DatasetError):
            extract_from_file(p, 5)

    def test_fasta_headers_ignored(self, fasta):
        assert str(load_sequence(fasta, DNA)) == "ACGTACGTTTGGCCAATTACGA"
        assert str(extract_from_file(fasta, 4, offset=0)) == "ACGT"

    def test_unknown_symbol(self, tmp_path):
        p = tmp_path / "n.fa"
        p.write_text(">x\nACGNT\n")
        with pytest.raises(DatasetError, match="'N'"):
            extract_from_file(p, 5, offset=0)
        with pytest.raises(DatasetError):
            load_sequence(p, DNA)
        assert load_sequence(p).alphabet.symbols == "ACGNT"

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError):
            extract_from_file(tmp_path / "nope", 1)

    def test_random_offsets_uniform(self, tmp_path):
        p = tmp_path / "idx.txt"
        p.write_text("".join("ACGT"[i % 4] for i in range(23)))
        rng = np.random.default_rng(0)
        # window length 20 leaves offsets 0..3, each identifiable by its first symbol
        firsts = [extract_from_file(p, 20, seed=rng).codes[0] for _ in range(8000)]
        assert stats.chisquare(np.bincount(firsts)[1:]).pvalue > 0.01


def small_spec(**kw):
    base = dict(lengths=(150, 300), ks=(2, 5), epsilons=(1.0, 2.0), trials=2, seed=11)
    base.update(kw)
    return ExperimentSpec(**base)


class TestExperiment:
    def test_spec_validation(self):
        for bad in (dict(lengths=()), dict(lengths=(0,)), dict(trials=0), dict(dataset="x"),
                    dict(dataset="file"), dict(ks=(-1,)), dict(epsilons=(0,)), dict(seed=-1)):
            with pytest.raises(ValueError):
                small_spec(**bad)
        with pytest.raises(ValueError):
            ExperimentSpec.from_dict({"lenghts": [1]})

    def test_paper_grid(self):
        g = ExperimentSpec.paper_grid()
        assert g.lengths[-1] == 60000 and len(g.lengths) == 12
        assert g.ks == (10, 25, 50) and len(g.epsilons) == 5

    def test_spec_dict_roundtrip(self):
        s = small_spec()
        assert ExperimentSpec.from_dict(json.loads(json.dumps(s.to_dict()))) == s

    def test_seed_derivation(self):
        assert derive_seed(1, 0, 0) == derive_seed(1, 0, 0)
        seeds = {derive_seed(1, a, b) for a in range(5) for b in range(5)}
        assert len(seeds) == 25 and max(seeds) < 2 ** 63
        assert derive_seed(2, 0, 0) != derive_seed(1, 0, 0)

    def test_ratio(self):
        assert ratio_of(0, 0) == 1.0 and ratio_of(3, 2) == 1.5 and math.isinf(ratio_of(1, 0))

    def test_run_and_report(self):
        rep = run_experiment(small_spec())
        assert len(rep.rows) == 2 * 2 * 2 * 2
        keys = [(r.n, r.k, r.epsilon, r.trial) for r in rep.rows]
        assert keys == sorted(keys)
        for r in rep.rows:
            assert r.witness_dist <= (1 + r.epsilon) * r.k
            assert r.ratio == r.lcs_approx / r.lcs_exact
        # exact baseline shared across epsilon for the same pair and k
        by = {}
        for r in rep.rows:
            by.setdefault((r.n, r.k, r.trial), set()).add(r.lcs_exact)
        assert all(len(v) == 1 for v in by.values())
        assert rep.r_min <= rep.r_max
        assert rep.err == 100 * np.mean([r.lcs_approx < r.lcs_exact for r in rep.rows])
        assert len(rep.cells()) == 8 and "r_min" in rep.summary()

    def test_csv_roundtrip(self):
        rep = run_experiment(small_spec(trials=1, lengths=(100,)))
        text = to_csv_string(rep.rows)
        assert text.splitlines()[0] == CSV_HEADER
        back = read_csv(io.StringIO(text))
        strip = lambda r: RunRow(**{**r.__dict__, "time_exact_ms": None, "time_approx_ms": None})
        assert [strip(r) for r in back] == [strip(r) for r in rep.rows]
        for a, b in zip(back, rep.rows):
            assert a.time_exact_ms == pytest.approx(b.time_exact_ms, abs=1e-3)
        recomputed = AccuracyReport(tuple(back))
        assert recomputed.err == rep.err and recomputed.r_min == rep.r_min

    def test_csv_header_checked(self):
        with pytest.raises(ValueError):
            read_csv(io.StringIO("a,b\n1,2\n"))

    def test_empty_fields_roundtrip(self):
        row = RunRow("pair", 5, 1, 1.0, 0, 3, None, 4, 1, None, None, 2.5)
        buf = io.StringIO()
        write_csv([row], buf)
        assert read_csv(io.StringIO(buf.getvalue())) == [row]

    def test_identical_pairs_give_ratio_one(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("".join("ACGT"[v] for v in np.random.default_rng(0).integers(0, 4, 120)))
        spec = ExperimentSpec(dataset="file", source=str(p), lengths=(120,), ks=(0, 3),
                              epsilons=(1.0,), trials=3, seed=0)
        rep = run_experiment(spec)
        assert all(r.ratio == 1.0 for r in rep.rows) and rep.err == 0

    def test_file_dataset_independent_extracts(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("".join("ACGT"[v] for v in np.random.default_rng(1).integers(0, 4, 5000)))
        spec = ExperimentSpec(dataset="file", source=str(p), lengths=(100,), ks=(3,), trials=2)
        rep = run_experiment(spec)
        assert all(r.lcs_exact < 100 for r in rep.rows)

    def test_parallel_same_rows(self):
        spec = small_spec(lengths=(120,), trials=3)
        strip = lambda rows: [r.as_csv()[:10] for r in rows]
        assert strip(run_experiment(spec, parallel=2).rows) == strip(run_experiment(spec).rows)


@pytest.fixture
def pair_files(tmp_path):
    x = tmp_path / "x.txt"
    y = tmp_path / "y.fa"
    assert cli.main(["gen", "--len", "200", "--seed", "1", "--out", str(x)]) == 0
    assert cli.main(["gen", "--len", "200", "--seed", "2", "--fasta", "--out", str(y)]) == 0
    return x, y


class TestCli:
    def test_gen(self, tmp_path, capsys):
        assert cli.main(["gen", "--len", "30", "--seed", "5"]) == 0
        out = capsys.readouterr().out.strip()
        assert out == str(generate_random(30, DNA, 5))
        p = tmp_path / "f.fa"
        cli.main(["gen", "--len", "170", "--seed", "5", "--fasta", "--out", str(p), "--alphabet", "AB"])
        lines = p.read_text().splitlines()
        assert lines[0].startswith(">") and len(lines) == 4 and set("".join(lines[1:])) <= {"A", "B"}

    def test_run_formats(self, pair_files, capsys):
        x, y = pair_files
        assert cli.main(["run", "--x", str(x), "--y", str(y), "--k", "3", "--seed", "1",
                         "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["witness_dist"] <= 6 and out["exact_length"] > 0
        assert cli.main(["run", "--x", str(x), "--y", str(y), "--k", "3", "--seed", "1",
                         "--format", "csv", "--mode", "approx"]) == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert rows[0]["lcs_exact"] == "" and rows[0]["lcs_approx"] == str(out["approx_length"])
        assert cli.main(["run", "--x", str(x), "--y", str(y), "--k", "3", "--mode", "exact"]) == 0
        text = capsys.readouterr().out
        assert "exact_length:" in text and "approx_length" not in text

    def test_env_seed_fallback(self, pair_files, capsys, monkeypatch):
        x, y = pair_files
        args = ["run", "--x", str(x), "--y", str(y), "--k", "4", "--format", "json", "--mode", "approx"]
        monkeypatch.setenv("LCSK_SEED", "77")
        cli.main(args)
        a = json.loads(capsys.readouterr().out)
        cli.main(args + ["--seed", "77"])
        b = json.loads(capsys.readouterr().out)
        assert a["seed"] == 77 and a == {**b, "time_approx_ms": a["time_approx_ms"]}
        monkeypatch.setenv("LCSK_SEED", "abc")
        assert cli.main(args) == cli.EXIT_USAGE

    def test_usage_errors(self, pair_files, capsys):
        x, y = pair_files
        with pytest.raises(SystemExit) as exc:
            cli.main(["run", "--k", "1"])
        assert exc.value.code == 1
        with pytest.raises(SystemExit) as exc:
            cli.main([])
        assert exc.value.code == 1
        assert cli.main(["run", "--x", str(x), "--y", str(y), "--k", "-1"]) == 1
        assert cli.main(["run", "--x", str(x), "--y", str(y), "--k", "1", "--epsilon", "0"]) == 1
        assert cli.main(["gen", "--len", "-3"]) == 1
        assert cli.main(["bench", "--trials", "0", "--quiet"]) == 1
        assert cli.main(["bench", "--parallel", "0"]) == 1

    def test_input_errors(self, pair_files, tmp_path, capsys):
        x, _ = pair_files
        bad = tmp_path / "bad.fa"
        bad.write_text(">b\nACGNN\n")
        assert cli.main(["run", "--x", str(bad), "--y", str(x), "--k", "1"]) == 2
        assert cli.main(["run", "--x", str(bad), "--y", str(x), "--k", "1", "--unknown", "A",
                         "--mode", "exact"]) == 0
        assert cli.main(["run", "--x", str(tmp_path / "missing"), "--y", str(x), "--k", "1"]) == 2
        empty = tmp_path / "e.txt"
        empty.write_text(">only header\n")
        assert cli.main(["run", "--x", str(empty), "--y", str(x), "--k", "1"]) == 2
        grid = tmp_path / "grid.json"
        grid.write_text("{not json")
        assert cli.main(["bench", "--grid-spec", str(grid)]) == 2
        assert cli.main(["bench", "--grid-spec", str(tmp_path / "none.json")]) == 2
        assert "error" in capsys.readouterr().err

    def test_auto_alphabet(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("HELLOWORLD")
        b.write_text("YELLOWWORD")
        assert cli.main(["run", "--x", str(a), "--y", str(b), "--k", "1", "--alphabet", "auto",
                         "--format", "json", "--seed", "0"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["exact_length"] == 6  # ELLOWO / ELLOWW
        a.write_text("HI#THERE")
        assert cli.main(["run", "--x", str(a), "--y", str(b), "--k", "1", "--alphabet", "auto"]) == 2

    def test_bench_grid_and_flags(self, tmp_path, capsys):
        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({"lengths": [80], "ks": [2], "epsilons": [1.0, 1.5],
                                    "trials": 2, "seed": 3}))
        out = tmp_path / "o.csv"
        assert cli.main(["bench", "--grid-spec", str(grid), "--out", str(out), "--trials", "1"]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER and len(lines) == 3
        assert "r_min" in capsys.readouterr().err
        assert cli.main(["bench", "--lengths", "60", "--ks", "1", "--epsilons", "1", "--trials", "1",
                         "--quiet"]) == 0
        assert capsys.readouterr().out.splitlines()[0] == CSV_HEADER

    def test_selftest(self, capsys):
        assert cli.main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 5 and "FAIL" not in out
