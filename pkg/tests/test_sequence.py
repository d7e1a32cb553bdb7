import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import factorial

import pytest

from algebra.errors import DomainError, SingularRecurrenceError, ZeroTermError
from algebra.exact import Polynomial
from algebra.interval import Interval
from services import sequence_service
from services.sequence_service import RATIO, ROOT, PRecursiveSequence
from services.spec_service import list_bundled_specs
from tests.conftest import bundled_spec

n = Polynomial.variable()

TABLE_ROWS = ["motzkin", "cohen", "schroeder", "fine", "polyhex", "walks", "t_n", "domb"]


def geometric():
    return PRecursiveSequence("geometric2", [Polynomial([-2]), Polynomial([1])], [1])


def _reference(log_combination, bits=256):
    return log_combination(lambda k: Interval.exact(k, bits).log()).exp()


def test_baxter_terms(baxter):
    assert baxter.terms(0, 4) == [1, 1, 2, 6, 22]
    assert baxter.term(0) == 1


def test_h_terms(h):
    assert h.terms(0, 5) == [1, 0, 1, 6, 90, 2040]


def test_term_before_start_is_rejected(baxter):
    with pytest.raises(DomainError):
        baxter.term(-1)


def test_ratio(baxter, h, constant):
    assert baxter.ratio(3) == Fraction(11, 3)
    assert constant.ratio(10) == 1
    with pytest.raises(ZeroTermError) as exc:
        h.ratio(1)
    assert exc.value.index == 1


@pytest.mark.parametrize("name", list_bundled_specs())
def test_recurrence_residual_vanishes(name):
    # ten thousand terms over all bundled specs together
    count = -(-10_000 // len(list_bundled_specs()))
    seq = bundled_spec(name).sequence()
    assert all(seq.residual(k) == 0 for k in range(seq.start, seq.start + count))


def test_singular_recurrence_point_is_named():
    seq = PRecursiveSequence("singular", [Polynomial([-1]), n - 3], [1])
    assert seq.term(3) == Fraction(-1, 6)
    with pytest.raises(SingularRecurrenceError) as exc:
        seq.term(5)
    assert exc.value.index == 3


def test_u_term_inside_declared_bounds(baxter):
    u = baxter.u_term(14, 64)
    assert 1 - Fraction(1, 14 ** 2) < u.lo
    assert u.hi < 1 - Fraction(8, 14 ** 3)


def test_u_term_of_constant_sequence_is_exactly_one(constant):
    assert constant.u_term(5, 64) == Interval.exact(1, 64)


def test_u_term_of_geometric_sequence():
    u = geometric().u_term(5, 64)
    assert u.contains(1)
    assert u.width < Fraction(1, 2 ** 50)


def test_u_term_needs_positive_terms_below(h):
    with pytest.raises(DomainError):
        h.u_term(2, 64)
    assert h.u_term(3, 64).lo > 0


def test_derived_term_at_one(baxter, h):
    assert baxter.derived_term(ROOT, 1, 64) == Interval.exact(1, 64)
    assert h.derived_term(ROOT, 1, 64) == Interval.exact(0, 64)


def test_baxter_ratio_term():
    seq = bundled_spec("baxter").sequence()
    y3 = seq.derived_term(RATIO, 3, 64)
    reference = _reference(lambda log: log(22) / 4 - log(6) / 3) / 6
    assert y3.overlaps(reference)
    assert y3.width < Fraction(1, 2 ** 50)


def test_negative_terms_are_rejected():
    alternating = PRecursiveSequence("alternating", [Polynomial([1]), Polynomial([1])], [1])
    with pytest.raises(DomainError):
        alternating.derived_term(ROOT, 1, 64)
    with pytest.raises(DomainError):
        alternating.derived_term(RATIO, 2, 64)


@pytest.mark.parametrize("bits", [32, 64, 128, 512])
def test_root_target_contains_exact_values(bits):
    seq = geometric()
    for k in range(1, 25):
        assert seq.derived_term(ROOT, k, bits).contains(Fraction(2, factorial(k)))
        assert seq.derived_term(RATIO, k, bits).contains(Fraction(1, factorial(k)))


@pytest.mark.parametrize("name", ["baxter", "h", "motzkin", "domb"])
def test_refinement_is_nested(name):
    seq = bundled_spec(name).sequence()
    lo = max(seq.positivity_from, 1) + 2
    for k in range(lo, lo + 90):
        for target in (ROOT, RATIO):
            coarse, fine = seq.derived_term(target, k, 64), seq.derived_term(target, k, 256)
            assert coarse.contains(fine)
        assert seq.u_term(k, 64).contains(seq.u_term(k, 128))


@pytest.mark.parametrize("name", ["baxter", "h", "motzkin", "domb"])
def test_derived_sequences_match_the_u_identities(name):
    seq = bundled_spec(name).sequence()
    bits = 128
    lo = max(seq.positivity_from, 1) + 2
    for k in range(lo, lo + 50):
        w = Fraction(k, k + 1)
        x = [seq.derived_term(ROOT, j, bits) for j in (k - 1, k, k + 1)]
        assert (x[0] * x[2] / x[1].square()).overlaps(seq.u_term(k, bits) * w)
        y = [seq.derived_term(RATIO, j, bits) for j in (k - 1, k, k + 1)]
        assert (y[0] * y[2] / y[1].square()).overlaps(seq.u_term(k + 1, bits) * w / seq.u_term(k, bits))


def test_concurrent_readers_see_the_same_terms(baxter_spec):
    reference = baxter_spec.sequence().terms(0, 400)
    shared = baxter_spec.sequence()
    order = list(range(401))
    random.Random(5).shuffle(order)
    with ThreadPoolExecutor(max_workers=8) as pool:
        values = dict(zip(order, pool.map(shared.term, order)))
    assert [values[k] for k in range(401)] == reference


@pytest.mark.slow
@pytest.mark.parametrize("name", TABLE_ROWS)
def test_table_u_bounds_hold_on_two_hundred_indices(name):
    spec = bundled_spec(name)
    seq, bounds = spec.sequence(), spec.bounds
    start = bounds.declared_from["fu"]
    for k in range(start, start + 201):
        bits = 64
        while True:
            u = seq.u_term(k, bits)
            if (bounds.fu(k) < u.lo and u.hi < bounds.gu(k)) or bits >= 512:
                break
            bits *= 2
        assert bounds.fu(k) < u.lo and u.hi < bounds.gu(k), f"{name}: sandwich fails at n={k}"


@pytest.mark.slow
def test_cohen_sandwich_starts_at_nine():
    spec = bundled_spec("cohen")
    seq, bounds = spec.sequence(), spec.bounds
    assert bounds.declared_from["fu"] == bounds.declared_from["gu"] == 9

    def inside(k):
        u = seq.u_term(k, 128)
        return bounds.fu(k) < u.lo and u.hi < bounds.gu(k)

    assert not inside(8)
    assert all(inside(k) for k in range(9, 210))


def test_cohen_terms():
    assert bundled_spec("cohen").sequence().terms(0, 7) == [1, 6, 90, 1860, 44730, 1172556, 32496156, 936369720]


def test_enclosure_cache_is_capped_per_precision(monkeypatch, baxter_spec):
    monkeypatch.setattr(sequence_service, "MAX_CACHED_ENCLOSURES", 8)
    seq = baxter_spec.sequence()
    first = seq.log_term(5, 64)
    for k in range(1, 40):
        seq.log_term(k, 64)
    assert all(len(table) <= 8 for table in seq._enclosures.values())
    assert seq.log_term(5, 64) == first
