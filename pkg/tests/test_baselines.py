import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcsk.baselines import brute_lcs_k, exact_lcs, fgku
from lcsk.seqcore import DNA, hamming_distance
from oracles import all_substring_lcs_k


def check_witness(x, y, res, k):
    x, y = np.asarray(x), np.asarray(y)
    u = x[res.x_start:res.x_start + res.length]
    v = y[res.y_start:res.y_start + res.length]
    assert u.size == v.size == res.length
    assert hamming_distance(u, v) <= k


class TestFgku:
    @pytest.mark.parametrize("k", [0, 1, 5])
    def test_identical(self, k):
        s = DNA.encode("GATTACAGATTACA")
        assert fgku(s, s, k).length == 14

    def test_small_example(self):
        assert fgku("ACGT", "TGCA", 1).length == 2
        assert all_substring_lcs_k("ACGT", "TGCA", 1) == 2

    def test_empty_and_negative(self):
        assert fgku("", "ACGT", 2).length == 0
        with pytest.raises(ValueError):
            fgku("A", "A", -1)

    @settings(max_examples=80, deadline=None)
    @given(st.text("AC", max_size=14), st.text("AC", max_size=14), st.integers(0, 4))
    def test_vs_all_substrings(self, x, y, k):
        res = fgku(x, y, k)
        assert res.length == all_substring_lcs_k(x, y, k)
        if x and y:
            check_witness(DNA.encode(x).codes, DNA.encode(y).codes, res, k)

    def test_vs_brute_random(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            sigma = int(rng.choice([4, 26]))
            x = rng.integers(1, sigma + 1, int(rng.integers(1, 120)))
            y = rng.integers(1, sigma + 1, int(rng.integers(1, 120)))
            k = int(rng.choice([0, 1, 2, 5, 10]))
            res = fgku(x, y, k)
            assert res.length == brute_lcs_k(x, y, k).length
            check_witness(x, y, res, k)


class TestBrute:
    def test_large_k(self):
        assert brute_lcs_k("ACGTAC", "TTT", 3).length == 3
        assert brute_lcs_k("ACGTAC", "TTT", 10).length == 3

    @settings(max_examples=60, deadline=None)
    @given(st.text("ACG", max_size=12), st.text("ACG", max_size=12), st.integers(0, 3))
    def test_vs_all_substrings(self, x, y, k):
        res = brute_lcs_k(x, y, k)
        assert res.length == all_substring_lcs_k(x, y, k)
        if res.length:
            check_witness(DNA.encode(x).codes, DNA.encode(y).codes, res, k)

    def test_k0_is_exact_lcs(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            x, y = rng.integers(1, 4, 50), rng.integers(1, 4, 60)
            assert brute_lcs_k(x, y, 0).length == exact_lcs(x, y).length


class TestExactLcs:
    def test_examples(self):
        assert exact_lcs("GATTACA", "GATTACA").length == 7
        assert exact_lcs("ABAB", "BABA").length == 3
        assert exact_lcs("AAAA", "CCCC").length == 0
        assert exact_lcs("", "AC").length == 0

    @settings(max_examples=80, deadline=None)
    @given(st.text("AB", max_size=20), st.text("AB", max_size=20))
    def test_vs_all_substrings(self, x, y):
        res = exact_lcs(x, y)
        assert res.length == all_substring_lcs_k(x, y, 0)
        assert x[res.x_start:res.x_start + res.length] == y[res.y_start:res.y_start + res.length]
