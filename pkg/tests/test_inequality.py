import random
from fractions import Fraction
from math import factorial

import pytest

from algebra.errors import DomainError
from algebra.exact import RationalFunction
from algebra.interval import Interval
from services.inequality_service import (
    HIGHER_TURAN,
    LAGUERRE2,
    CheckStatus,
    check_higher_turan,
    check_laguerre,
    check_log_concave,
    check_property,
    check_range,
    laguerre_margin,
    laguerre_sum,
    turan_quartic,
)
from services.sequence_service import RATIO, ROOT

x = RationalFunction.variable()


def table(*values, start=0):
    return {start + i: v for i, v in enumerate(values)}


def test_log_concave_examples(baxter):
    assert check_log_concave(table(1, 1, 1), 1).status is CheckStatus.HOLDS_WITH_EQUALITY
    outcome = check_log_concave(table(1, 2, 5), 1)
    assert outcome.status is CheckStatus.FAILS
    assert outcome.margin == Interval.exact(-1)
    # the raw Baxter numbers are not log-concave at n = 3
    raw = {k: baxter.term(k) for k in range(0, 6)}
    outcome = check_log_concave(raw, 3)
    assert outcome.status is CheckStatus.FAILS
    assert outcome.margin.lo == -8


def test_higher_turan_equality_cases():
    assert check_higher_turan(table(1, 1, 1, 1), 1).status is CheckStatus.HOLDS_WITH_EQUALITY
    powers = table(*(2 ** k for k in range(6)))
    assert check_higher_turan(powers, 2).status is CheckStatus.HOLDS_WITH_EQUALITY


def test_missing_index_is_reported():
    with pytest.raises(DomainError, match="missing value at index 3"):
        check_higher_turan(table(1, 1, 1), 1)


def test_higher_turan_agrees_with_direct_evaluation():
    rng = random.Random(17)
    for _ in range(1000):
        a = [Fraction(rng.randint(1, 30), rng.randint(1, 5)) for _ in range(4)]
        direct = 4 * (a[1] ** 2 - a[0] * a[2]) * (a[2] ** 2 - a[1] * a[3]) - (a[1] * a[2] - a[0] * a[3]) ** 2
        outcome = check_higher_turan(table(*a), 1)
        assert outcome.margin == Interval.exact(direct)
        expected = CheckStatus.HOLDS if direct > 0 else CheckStatus.FAILS if direct < 0 else CheckStatus.HOLDS_WITH_EQUALITY
        assert outcome.status is expected


def test_laguerre_examples():
    assert check_laguerre(table(*[1] * 5), 2, 0).status is CheckStatus.HOLDS_WITH_EQUALITY
    factorials = table(*(factorial(k) for k in range(15)))
    for k in range(1, 11):
        outcome = check_laguerre(factorials, 1, k)
        assert outcome.status is CheckStatus.FAILS
        assert outcome.margin.lo == -(k + 1) * factorial(k) ** 2


def test_laguerre_order_one_is_shifted_log_concavity():
    rng = random.Random(23)
    for _ in range(50):
        values = table(*(rng.randint(1, 50) for _ in range(5)))
        assert check_laguerre(values, 1, 1).margin == check_log_concave(values, 2).margin


def test_laguerre_expanded_form_matches_the_sum():
    rng = random.Random(29)
    for _ in range(100):
        values = [Fraction(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(5)]
        a = values.__getitem__
        assert laguerre_margin(a, 0, 2) == laguerre_sum(a, 0, 2)


def test_laguerre_rejects_order_zero():
    with pytest.raises(DomainError):
        check_laguerre(table(1, 1, 1), 0, 0)


def test_turan_quartic():
    assert turan_quartic(RationalFunction(0), RationalFunction(0)) == 3
    assert turan_quartic(RationalFunction(1), RationalFunction(1)) == 0
    p = x / (x + 1) * (1 - 1 / x ** 2)
    assert turan_quartic(p, p.shift(1)) == 4 / (x * (1 + x) ** 2)


def test_turan_quartic_is_symmetric():
    a, b = (x - 1) / (x + 2), x ** 2 / (x ** 2 + 3)
    assert turan_quartic(a, b) == turan_quartic(b, a)


def test_baxter_root_sequence_satisfies_higher_turan(baxter):
    outcomes = check_range(baxter.interval_values(ROOT), HIGHER_TURAN, 2, 20)
    assert all(o.status is CheckStatus.HOLDS for o in outcomes)


def test_h_root_sequence_satisfies_laguerre(h):
    outcomes = check_range(h.interval_values(ROOT), LAGUERRE2, 1, 20)
    assert all(o.status is CheckStatus.HOLDS for o in outcomes)


def test_precision_only_resolves_undecided(baxter):
    values = baxter.interval_values(RATIO)
    for k in range(2, 30):
        coarse = check_property(values, HIGHER_TURAN, k, start_precision=8, precision_cap=8)
        fine = check_property(values, HIGHER_TURAN, k, start_precision=64, precision_cap=1024)
        assert fine.status is CheckStatus.HOLDS
        assert coarse.status in (CheckStatus.HOLDS, CheckStatus.UNDECIDED)


def test_undecided_at_a_tiny_cap(baxter):
    outcome = check_higher_turan(baxter.interval_values(ROOT), 40, start_precision=8, precision_cap=8)
    assert outcome.status is CheckStatus.UNDECIDED
    assert outcome.margin.lo < 0 < outcome.margin.hi
    assert outcome.to_dict()["status"] == "undecided"
