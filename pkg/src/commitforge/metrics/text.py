"""Reference-based text metrics: BLEU, ROUGE-L and METEOR.

All three tokenize with :func:`commitforge.tokens.tokenize` (lowercased).

BLEU
    Sentence BLEU on a 0-100 scale with clipped n-gram precisions for
    n = 1..max_n and the standard brevity penalty (closest reference length,
    shorter wins ties). For n > 1 the precision is smoothed by adding one to
    both numerator and denominator; unigram precision is unsmoothed, so a
    candidate sharing no token with any reference scores 0.

ROUGE-L
    LCS-based F-measure ``(1+β²)·P·R / (R + β²·P)`` with β = 1.2.

METEOR
    Alignment in stages: exact surface match, then Porter-stem match, then an
    optional synonym stage (off by default). Each stage adds the largest
    possible set of one-to-one matches among still-unaligned tokens and, among
    those, picks the alignment with the fewest crossings, then fewest chunks.
    ``Fmean = P·R / (α·P + (1-α)·R)`` and the fragmentation penalty is
    ``γ·(chunks/matches)^β`` with α = 0.9, β = 3.0, γ = 0.5.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from functools import lru_cache
from typing import Callable, Sequence

import snowballstemmer

from ..tokens import tokenize

ROUGE_BETA = 1.2
METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5
# alignment enumeration budget per stage before falling back to leftmost pairing
METEOR_SEARCH_LIMIT = 5000


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, references: Sequence[str] | str, max_n: int = 4) -> float:
    if isinstance(references, str):
        references = [references]
    cand = tokenize(candidate, lower=True)
    refs = [tokenize(r, lower=True) for r in references]
    if not cand or not refs:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        counts = _ngrams(cand, n)
        max_ref: Counter = Counter()
        for r in refs:
            max_ref |= _ngrams(r, n)
        matches = sum(min(c, max_ref[g]) for g, c in counts.items())
        total = max(len(cand) - n + 1, 0)
        if n == 1:
            if matches == 0:
                return 0.0
            p = matches / total
        else:
            p = (matches + 1) / (total + 1)
        log_sum += math.log(p)
    c = len(cand)
    r = min((len(x) for x in refs), key=lambda L: (abs(L - c), L))
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return 100.0 * bp * math.exp(log_sum / max_n)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str, beta: float = ROUGE_BETA) -> float:
    cand = tokenize(candidate, lower=True)
    ref = tokenize(reference, lower=True)
    lcs = lcs_length(cand, ref)
    if lcs == 0:
        return 0.0
    p, r = lcs / len(cand), lcs / len(ref)
    return (1 + beta**2) * p * r / (r + beta**2 * p)


_stemmer = snowballstemmer.stemmer("porter")


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    return _stemmer.stemWord(word)


Alignment = list[tuple[int, int]]  # (candidate index, reference index)


def crossings(pairs: Sequence[tuple[int, int]]) -> int:
    return sum(
        1
        for (i, j), (k, l) in itertools.combinations(pairs, 2)
        if (i - k) * (j - l) < 0
    )


def chunks(pairs: Sequence[tuple[int, int]]) -> int:
    out = 0
    prev = None
    for i, j in sorted(pairs):
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            out += 1
        prev = (i, j)
    return out


def _stage_align(
    cand: Sequence[str], ref: Sequence[str], fixed: Alignment, key: Callable[[str], str]
) -> Alignment:
    used_c = {i for i, _ in fixed}
    used_r = {j for _, j in fixed}
    cpos: dict[str, list[int]] = defaultdict(list)
    rpos: dict[str, list[int]] = defaultdict(list)
    for i, w in enumerate(cand):
        if i not in used_c:
            cpos[key(w)].append(i)
    for j, w in enumerate(ref):
        if j not in used_r:
            rpos[key(w)].append(j)
    keys = sorted(set(cpos) & set(rpos))
    if not keys:
        return list(fixed)
    # count before enumerating: repeated tokens make the option space explode
    budget = math.prod(math.comb(max(len(cpos[k]), len(rpos[k])), min(len(cpos[k]), len(rpos[k]))) for k in keys)
    if budget > METEOR_SEARCH_LIMIT:
        return list(fixed) + [p for k in keys for p in zip(cpos[k], rpos[k])]
    # per key: every order-preserving pairing of maximal size
    options: list[list[Alignment]] = []
    for k in keys:
        cs, rs = cpos[k], rpos[k]
        if len(cs) <= len(rs):
            opts = [list(zip(cs, sub)) for sub in itertools.combinations(rs, len(cs))]
        else:
            opts = [list(zip(sub, rs)) for sub in itertools.combinations(cs, len(rs))]
        options.append(opts)
    best: Alignment | None = None
    best_score = None
    for combo in itertools.product(*options):
        pairs = list(fixed) + [p for part in combo for p in part]
        score = (crossings(pairs), chunks(pairs))
        if best_score is None or score < best_score:
            best, best_score = pairs, score
    assert best is not None
    return best


def meteor_alignment(
    cand: Sequence[str], ref: Sequence[str], synonyms: Callable[[str], str] | None = None
) -> Alignment:
    stages: list[Callable[[str], str]] = [lambda w: w, stem]
    if synonyms is not None:
        stages.append(synonyms)
    pairs: Alignment = []
    for key in stages:
        pairs = _stage_align(cand, ref, pairs, key)
    return sorted(pairs)


def meteor(
    candidate: str,
    reference: str,
    synonyms: Callable[[str], str] | None = None,
    alpha: float = METEOR_ALPHA,
    beta: float = METEOR_BETA,
    gamma: float = METEOR_GAMMA,
) -> float:
    """METEOR in [0, 1]; ``synonyms`` maps a word to a canonical synonym-set key."""
    cand = tokenize(candidate, lower=True)
    ref = tokenize(reference, lower=True)
    if not cand or not ref:
        return 0.0
    pairs = meteor_alignment(cand, ref, synonyms)
    m = len(pairs)
    if m == 0:
        return 0.0
    p, r = m / len(cand), m / len(ref)
    fmean = p * r / (alpha * p + (1 - alpha) * r)
    penalty = gamma * (chunks(pairs) / m) ** beta
    return fmean * (1 - penalty)
