import math

import numpy as np
import pytest

from lcsk import lshdecide, noisysearch
from lcsk.baselines import exact_lcs, fgku
from lcsk.harness.datasets import generate_random
from lcsk.lshdecide import DecisionOutcome, Verdict
from lcsk.noisysearch import GameConfig, interval_bounds, twenty_questions
from lcsk.seqcore import DNA, hamming_distance
from _liar_games import KINDS, PyAdversary, play_games


class Counting:
    def __init__(self, fn):
        self.fn, self.calls = fn, 0

    def __call__(self, x):
        self.calls += 1
        return self.fn(x)


class TestGameConfig:
    def test_default_budget(self):
        cfg = GameConfig(8)
        assert cfg.Q == 2400  # 8 * log2(8) / 0.1**2
        assert cfg.lie_budget == math.ceil(0.3 * 2400)
        assert GameConfig(1).Q == GameConfig(2).Q  # log2 floored at N = 2

    def test_practical_budget(self):
        assert GameConfig.practical(30).Q == math.ceil(2 * math.log2(32)) == 10
        assert GameConfig(5, questions=3).Q == 3

    @pytest.mark.parametrize("kwargs", [dict(N=-1), dict(N=4, rho=1 / 3), dict(N=4, questions=0)])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            GameConfig(**kwargs)


class TestTwentyQuestions:
    def test_honest_search(self):
        assert twenty_questions(lambda x: x <= 5, GameConfig(8)) == 5

    def test_contract_case(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            got = twenty_questions(lambda x: x <= 3 or (x <= 7 and rng.random() < 0.5), GameConfig(15))
            assert 3 <= got <= 7

    def test_truthful_exhaustive(self):
        for N in range(0, 65):
            for A in range(N + 1):
                oracle = Counting(lambda x, A=A: x <= A)
                cfg = GameConfig(N)
                assert twenty_questions(oracle, cfg) == A
                assert oracle.calls <= cfg.Q

    def test_short_budget_truthful(self):
        # never overshoots; exact whenever the rounds cover a full binary search
        for N in range(0, 70):
            cfg = GameConfig.practical(N)
            for A in range(N + 1):
                got = twenty_questions(lambda x, A=A: x <= A, cfg)
                assert got <= A
                if cfg.Q // 2 >= math.ceil(math.log2(N + 1)):
                    assert got == A

    def test_never_asks_outside_range(self):
        seen = []
        twenty_questions(lambda x: seen.append(x) or True, GameConfig(6))
        assert seen and min(seen) >= 0 and max(seen) <= 6

    def test_replay_matches_implementation(self):
        rng = np.random.default_rng(0)
        for t in range(150):
            N = int(rng.integers(1, 33))
            A = int(rng.integers(0, N + 1))
            B = int(rng.integers(A, N + 1))
            cfg, kind, seed = GameConfig(N), t % KINDS, int(rng.integers(2 ** 63))
            adv = PyAdversary(A, B, kind, seed, cfg.Q, cfg.lie_budget)
            got = twenty_questions(adv, cfg)
            assert adv.lies_told <= cfg.lie_budget
            res, cnt = play_games(N, np.array([A]), np.array([B]), cfg.Q, cfg.lie_budget,
                                  np.array([seed], dtype=np.uint64), np.array([kind]))
            assert (got, adv.asked) == (int(res[0]), int(cnt[0]))

    def test_tolerates_lies_below_a_quarter(self):
        # two questions per round: a lie budget under Q/4 never spoils half the rounds
        for N in range(1, 17):
            cfg = GameConfig(N)
            budget = math.ceil(0.24 * cfg.Q)
            A, B = np.array([(a, b) for a in range(N + 1) for b in range(a, N + 1)]).T
            A, B = np.repeat(A, 40), np.repeat(B, 40)
            seeds = np.random.default_rng(N).integers(0, 2 ** 63, A.size).astype(np.uint64)
            res, cnt = play_games(N, A, B, cfg.Q, budget, seeds, np.arange(A.size) % KINDS)
            assert np.all((res >= A) & (res <= B)) and np.all(cnt <= cfg.Q)


class TestIntervalBounds:
    def test_examples(self):
        assert interval_bounds("ACGT", "ACGT", 0) == (4, 4)
        assert interval_bounds("AAAA", "CCCC", 2) == (2, 2)
        assert interval_bounds("ACGTT", "ACGAA", 4) == (5, 5)

    def test_bracket_contains_lcs_k(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            x, y = rng.integers(1, 5, 80), rng.integers(1, 5, 70)
            k = int(rng.integers(0, 6))
            lo, hi = interval_bounds(x, y, k)
            assert lo <= fgku(x, y, k).length <= hi
            assert lo == min(exact_lcs(x, y).length + k, 70)


class TestSolver:
    def test_identical_strings(self):
        x = generate_random(300, seed=1)
        res = noisysearch.lcs_approx_k(x, x, 5, 1.0, seed=0)
        assert res.length == 300 and res.distance == 0

    def test_input_errors(self):
        with pytest.raises(ValueError):
            noisysearch.lcs_approx_k("", "", 1, 1.0)
        assert noisysearch.lcs_approx_k("", "ACGT", 1, 1.0).length == 0
        for args in ((-1, 1.0), (1, 0.0)):
            with pytest.raises(ValueError):
                noisysearch.lcs_approx_k("ACGT", "ACGT", *args)
        with pytest.raises(ValueError):
            noisysearch.lcs_approx_k("ACGT", "AGTC", 1, 1.0, question_rule="bogus")
        with pytest.raises(ValueError):
            noisysearch.lcs_approx_k(DNA.encode("AC"), DNA.encode("AC"), 1, 1.0, repetitions=0)

    def test_deterministic(self):
        x, y = generate_random(800, seed=2), generate_random(800, seed=3)
        a = noisysearch.lcs_approx_k(x, y, 6, 1.0, seed=42)
        b = noisysearch.lcs_approx_k(x, y, 6, 1.0, seed=42)
        assert a == b

    def test_string_and_sequence_inputs_agree(self):
        x, y = generate_random(400, seed=4), generate_random(400, seed=5)
        a = noisysearch.lcs_approx_k(x, y, 4, 1.0, seed=1)
        b = noisysearch.lcs_approx_k(str(x), str(y), 4, 1.0, seed=1)
        assert a.length == b.length

    def test_witness_within_budget(self):
        rng = np.random.default_rng(9)
        for t in range(25):
            n = int(rng.integers(50, 700))
            x, y = rng.integers(1, 5, n), rng.integers(1, 5, n)
            k, eps = int(rng.integers(0, 12)), float(rng.choice([0.25, 0.5, 1.0, 2.0]))
            res = noisysearch.lcs_approx_k(x, y, k, eps, seed=t)
            d = hamming_distance(x[res.x_start:res.x_start + res.length],
                                 y[res.y_start:res.y_start + res.length])
            assert d == res.distance <= (1 + eps) * k
            assert res.lower <= res.length <= res.upper or res.length == exact_lcs(x, y).length

    def test_theory_question_rule(self):
        x, y = generate_random(300, seed=6), generate_random(300, seed=7)
        res = noisysearch.lcs_approx_k(x, y, 3, 1.0, seed=0, question_rule="theory", repetitions=1)
        assert res.decisions > 0 and res.distance <= 6

    def test_false_witnesses_demoted(self, monkeypatch):
        x, y = generate_random(400, seed=8), generate_random(400, seed=9)

        def liar(xa, ya, length, k, epsilon, **kw):
            # claims YES everywhere with a witness that is almost surely too far apart
            return DecisionOutcome(Verdict.YES, 0, 1, length, branch="sketch")

        monkeypatch.setattr(lshdecide, "decide", liar)
        res = noisysearch.lcs_approx_k(x, y, 3, 1.0, seed=0)
        lcs = exact_lcs(x, y)
        # either the exact-LCS fallback or a liar witness that really is close enough
        assert tuple(lcs) == (res.length, res.x_start, res.y_start) or (res.x_start, res.y_start) == (0, 1)
        assert hamming_distance(x.codes[res.x_start:res.x_start + res.length],
                                y.codes[res.y_start:res.y_start + res.length]) <= 6
        far = [L for L in range(res.lower, res.upper + 1)
               if hamming_distance(x.codes[:L], y.codes[1:L + 1]) > 6]
        assert res.length not in far or tuple(lcs) == (res.length, res.x_start, res.y_start)

    def test_reaches_lcs_k_on_random_dna(self):
        hits = 0
        for t in range(30):
            x, y = generate_random(5000, seed=[11, t, 0]), generate_random(5000, seed=[11, t, 1])
            res = noisysearch.lcs_approx_k(x, y, 25, 1.0, seed=[11, t])
            hits += res.length >= fgku(x, y, 25).length
        assert hits >= 27
