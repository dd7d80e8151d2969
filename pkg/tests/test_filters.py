from __future__ import annotations

import random
import statistics
from fractions import Fraction

import pytest
from helpers import commit
from hypothesis import given, settings
from hypothesis import strategies as st

from commitforge.filters import (
    METRICS,
    FilterConfig,
    compute_iqr_fences,
    filter_bots,
    filter_ccs_format,
    filter_multi_type,
    filter_single_language,
    load_botlist,
    remove_outliers,
    run_filters,
)
from commitforge.tokens import count_tokens, tokenize


# --- oracle -------------------------------------------------------------------

def oracle_quartiles(values):
    """Q1/Q3 by sorting and interpolating with integer positions only."""
    xs = sorted(Fraction(v) for v in values)
    n = len(xs)

    def q(num, den):
        pos_num = (n - 1) * num  # position = pos_num / den
        lo, rem = divmod(pos_num, den)
        if rem == 0:
            return xs[lo]
        return xs[lo] + Fraction(rem, den) * (xs[lo + 1] - xs[lo])

    return q(1, 4), q(3, 4)


def oracle_flags(values, k):
    q1, q3 = oracle_quartiles(values)
    lo, hi = q1 - k * (q3 - q1), q3 + k * (q3 - q1)
    return {i for i, v in enumerate(values) if Fraction(v) < lo or Fraction(v) > hi}


DISTRIBUTIONS = {
    "uniform": lambda r: r.randint(0, 1000),
    "heavy_tail": lambda r: int(r.paretovariate(1.2) * 10),
    "lognormal": lambda r: int(r.lognormvariate(5, 1.5)),
    "few_values": lambda r: r.choice([1, 1, 1, 2, 3, 50]),
    "fractions": lambda r: Fraction(r.randint(-500, 500), r.randint(1, 9)),
}


def test_statistics_module_agrees_with_oracle():
    # the stdlib 'inclusive' method is the same interpolation rule
    r = random.Random(3)
    for _ in range(200):
        xs = [Fraction(r.randint(0, 99)) for _ in range(r.randint(2, 40))]
        qs = statistics.quantiles(xs, n=4, method="inclusive")
        assert (qs[0], qs[2]) == oracle_quartiles(xs)


@pytest.mark.parametrize("dist", sorted(DISTRIBUTIONS))
def test_fences_match_oracle(dist):
    r = random.Random(dist)
    draw = DISTRIBUTIONS[dist]
    for _ in range(1000):
        xs = [draw(r) for _ in range(r.randint(1, 60))]
        got = compute_iqr_fences(xs, Fraction(3, 2))
        q1, q3 = oracle_quartiles(xs)
        assert (got.q1, got.q3) == (q1, q3)
        assert got.lower_fence == q1 - Fraction(3, 2) * (q3 - q1)
        assert {i for i, v in enumerate(xs) if got.is_outlier(v)} == oracle_flags(xs, Fraction(3, 2))


def test_fence_examples():
    st_ = compute_iqr_fences([1, 1, 1, 1], 7)
    assert st_.iqr == 0 and (st_.lower_fence, st_.upper_fence) == (1, 1)
    st_ = compute_iqr_fences([1, 2, 3, 4, 100], Fraction(3, 2))
    assert (st_.q1, st_.q3) == (2, 4)
    assert st_.upper_fence == 7 and st_.is_outlier(100) and not st_.is_outlier(4)
    with pytest.raises(ValueError, match="empty-input"):
        compute_iqr_fences([])


def _vec_metrics(vec):
    return dict(zip(METRICS, vec))


def test_union_flagged_set_matches_oracle():
    r = random.Random(11)
    for _ in range(300):
        n = r.randint(1, 40)
        rows = [tuple(int(r.lognormvariate(3, 1)) for _ in METRICS) for _ in range(n)]
        _, _, _, reasons = remove_outliers(rows, Fraction(3, 2), "union", _vec_metrics)
        expect = set()
        for j in range(len(METRICS)):
            expect |= oracle_flags([row[j] for row in rows], Fraction(3, 2))
        assert set(reasons) == expect


def test_sequential_mode_refences_survivors():
    r = random.Random(12)
    for _ in range(200):
        rows = [tuple(int(r.lognormvariate(3, 1)) for _ in METRICS) for _ in range(r.randint(1, 40))]
        _, _, _, reasons = remove_outliers(rows, Fraction(3, 2), "sequential", _vec_metrics)
        alive = list(range(len(rows)))
        expect = set()
        for j in range(len(METRICS)):
            if not alive:
                break
            flagged = oracle_flags([rows[i][j] for i in alive], Fraction(3, 2))
            hit = {alive[k] for k in flagged}
            expect |= hit
            alive = [i for i in alive if i not in hit]
        assert set(reasons) == expect


def test_unknown_mode():
    with pytest.raises(ValueError):
        remove_outliers([], mode="iterative")


def test_multiplier_monotonicity():
    r = random.Random(5)
    rows = [tuple(int(r.paretovariate(1.5) * 5) for _ in METRICS) for _ in range(200)]
    for _ in range(100):
        a, b = sorted(Fraction(r.randint(0, 600), 100) for _ in range(2))
        _, _, _, ra = remove_outliers(rows, a, "union", _vec_metrics)
        _, _, _, rb = remove_outliers(rows, b, "union", _vec_metrics)
        assert set(rb) <= set(ra)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=30), st.randoms(use_true_random=False))
def test_partition_is_order_independent(xs, rnd):
    rows = [(x, x % 97, x % 13, x // 1000, 1) for x in xs]
    order = list(range(len(rows)))
    rnd.shuffle(order)
    _, _, _, r1 = remove_outliers(rows, Fraction(3, 2), "union", _vec_metrics)
    _, _, _, r2 = remove_outliers([rows[i] for i in order], Fraction(3, 2), "union", _vec_metrics)
    assert {rows[i] for i in r1} == {rows[order[j]] for j in r2}


def test_remove_outliers_examples():
    same = [commit("feat: same", ("a.py",), idx=i) for i in range(10)]
    kept, dropped, _, _ = remove_outliers(same)
    assert len(kept) == 10 and not dropped
    wide = [commit("feat: same", ("a.py",), idx=i) for i in range(12)]
    wide.append(commit("feat: same", tuple(f"f{j}.py" for j in range(10)), idx=99))
    _, dropped, _, reasons = remove_outliers(wide)
    assert [d.hash for d in dropped] == [wide[-1].hash]
    assert set(reasons) == {12}
    # fences only widen with the multiplier when the data has spread
    spread = [commit("feat: same", tuple(f"f{j}.py" for j in range(1 + i % 4)), idx=i) for i in range(12)]
    spread.append(commit("feat: same", tuple(f"f{j}.py" for j in range(40)), idx=99))
    assert remove_outliers(spread)[1] == [spread[-1]]
    assert remove_outliers(spread, multiplier=10**6)[1] == []


# --- tokenizer -----------------------------------------------------------------

def test_token_examples():
    assert count_tokens("") == 0
    assert count_tokens("add lookahead") == 2
    assert tokenize("fix(a): x+y") == ["fix", "(", "a", ")", ":", "x", "+", "y"]
    assert count_tokens("fix(a): x+y") == 8


@settings(max_examples=200)
@given(st.text(max_size=60))
def test_tokens_cover_non_space(text):
    # tokens are non-empty, contain no whitespace, and concatenate to the non-space characters
    toks = tokenize(text)
    assert all(t and not any(ch.isspace() for ch in t) for t in toks)
    assert "".join(toks) == "".join(ch for ch in text if not ch.isspace())


# --- per-commit stages ---------------------------------------------------------

def test_ccs_stage():
    assert filter_ccs_format(commit("feat: x")).passed
    assert filter_ccs_format(commit("WIP stuff")).reason == "missing-colon"
    assert filter_ccs_format(commit("wat: x")).reason == "unknown-type"


def test_single_language_stage():
    assert filter_single_language(commit(paths=("a.py", "b.py"))).reason == "Python"
    assert not filter_single_language(commit(paths=("a.py", "b.go")))
    assert not filter_single_language(commit(paths=("README.md",)))
    assert not filter_single_language(commit(paths=("a.py", "README.md")))
    assert filter_single_language(commit(paths=("a.py", "README.md")), ignore_nonsource=True).passed
    assert not filter_single_language(commit(paths=("README.md",)), ignore_nonsource=True)
    # C and C++ count as different languages
    assert not filter_single_language(commit(paths=("a.c", "b.cpp")))
    assert not filter_single_language(commit(paths=()))


def test_bot_stage(tmp_path):
    assert not filter_bots(commit(author="dependabot[bot]"))
    assert filter_bots(commit(author="Alice")).passed
    assert not filter_bots(commit(author="Robert Smith"))
    assert filter_bots(commit(author="Robert Smith"), robert_rule=False).passed
    assert not filter_bots(commit(author="ci-B0T"))
    assert not filter_bots(commit(author="Alice", email="builds-bot@example.org"))
    listfile = tmp_path / "bots.txt"
    listfile.write_text("# known automation\nRenovate\n\nmergify  # queue\n")
    names = load_botlist(listfile)
    assert names == {"renovate", "mergify"}
    assert not filter_bots(commit(author="renovate"), names)
    assert filter_bots(commit(author="renovated person"), names).passed


def test_multi_type_stage():
    assert not filter_multi_type(commit("fix: handle nil\nfeat: add flag"))
    assert filter_multi_type(commit("docs: explain the fix: step")).passed


def test_cascade_short_circuits():
    rows = [
        commit("update readme", idx=0),
        commit("feat: x", ("a.py", "b.go"), idx=1),
        commit("feat: x", author="renovate-bot", idx=2),
        commit("fix: a\nfeat: b", idx=3),
        commit("feat: fine", idx=4),
    ]
    out = run_filters(rows)
    assert [p.dropped_at for p in out.provenance] == ["ccs_format", "single_language", "bot", "multi_type", None]
    assert out.provenance[4].final == "kept"
    assert [len(p.stage_results) for p in out.provenance] == [1, 2, 3, 4, 5]
    assert out.stage_counts["ccs_format"] == {"in": 5, "removed": 1}
    assert out.stage_counts["outlier"] == {"in": 1, "removed": 0}
    assert out.kept_indices() == [4]


def test_cascade_config_flags():
    rows = [commit("feat: x", ("a.py", "notes.md"), author="Robert", idx=0)]
    assert run_filters(rows).provenance[0].dropped_at == "single_language"
    cfg = FilterConfig(ignore_nonsource=True)
    assert run_filters(rows, cfg).provenance[0].dropped_at == "bot"
    cfg = FilterConfig(ignore_nonsource=True, robert_rule=False)
    assert run_filters(rows, cfg).provenance[0].final == "kept"
