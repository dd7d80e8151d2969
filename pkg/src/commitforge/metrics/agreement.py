"""Cohen's kappa (two raters and pairwise-averaged) and the exact sign test."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Hashable, Sequence


@dataclass
class AgreementReport:
    kappa: float
    observed_agreement: float
    expected_agreement: float
    pairwise_kappas: list[float] | None = None

    @property
    def mean_pairwise_kappa(self) -> float | None:
        if not self.pairwise_kappas:
            return None
        return sum(self.pairwise_kappas) / len(self.pairwise_kappas)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "observed_agreement": self.observed_agreement,
            "expected_agreement": self.expected_agreement,
            "pairwise_kappas": self.pairwise_kappas,
            "mean_pairwise_kappa": self.mean_pairwise_kappa,
        }


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> AgreementReport:
    """κ = (p_o − p_e) / (1 − p_e).

    When p_e = 1 both raters used one identical label throughout; κ is then
    defined as 1.0. Any other p_e = 1 case is impossible, but is rejected
    explicitly rather than dividing by zero.
    """
    if len(a) != len(b):
        raise ValueError(f"length-mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n == 0:
        raise ValueError("cohen_kappa needs at least one item")
    p_o = Fraction(sum(x == y for x, y in zip(a, b)), n)
    ca, cb = Counter(a), Counter(b)
    p_e = Fraction(sum(ca[k] * cb[k] for k in ca), n * n)
    if p_e == 1:
        if list(a) != list(b):
            raise ValueError("degenerate: chance agreement is 1 but ratings differ")
        return AgreementReport(1.0, float(p_o), 1.0)
    kappa = (p_o - p_e) / (1 - p_e)
    return AgreementReport(float(kappa), float(p_o), float(p_e))


def pairwise_kappa(raters: Sequence[Sequence[Hashable]]) -> AgreementReport:
    """Mean Cohen's κ over every pair of raters (three raters give three pairs)."""
    if len(raters) < 2:
        raise ValueError("need at least two raters")
    reports = [cohen_kappa(x, y) for x, y in itertools.combinations(raters, 2)]
    ks = [r.kappa for r in reports]
    return AgreementReport(
        kappa=sum(ks) / len(ks),
        observed_agreement=sum(r.observed_agreement for r in reports) / len(reports),
        expected_agreement=sum(r.expected_agreement for r in reports) / len(reports),
        pairwise_kappas=ks,
    )


def sign_test_exact(wins: int, losses: int, two_sided: bool = False) -> Fraction:
    """Exact binomial sign test, ties already removed by the caller.

    One-sided: ``sum_{i=0}^{min(w,l)} C(n,i) / 2^n`` with ``n = w + l``.
    Two-sided doubles it, capped at 1.
    """
    if wins < 0 or losses < 0:
        raise ValueError("counts must be nonnegative")
    n = wins + losses
    if n == 0:
        raise ValueError("sign test needs at least one non-tied pair")
    k = min(wins, losses)
    p = Fraction(sum(comb(n, i) for i in range(k + 1)), 2**n)
    return min(Fraction(1), 2 * p) if two_sided else p


def sign_test_one_sided(wins: int, losses: int) -> float:
    return float(sign_test_exact(wins, losses))
