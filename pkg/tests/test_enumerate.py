import logging
from itertools import product

import pytest

from ffindicator.contrast import check_strength_marginal, compatible_sizes
from ffindicator.core import FractionalDesign, build_space, space_from_counts
from ffindicator.enumerate import (
    EnumerationTask,
    IncompatibleSizeError,
    count_orthogonal,
    enumerate_orthogonal,
    free_dimension,
    validate_task,
)
from ffindicator.polynomial import check_relations, indicator_of, is_indicator, relation_system
from ffindicator.symmetry import apply, canonical_form, classify, symmetry_group
from test_contrast import SMALL


def brute_force(sp, s, t):
    return [
        FractionalDesign(sp, y)
        for y in product((0, 1), repeat=sp.m)
        if sum(y) == s and check_strength_marginal(FractionalDesign(sp, y), t)
    ]


def test_2x2_diagonals():
    sp = space_from_counts([2, 2])
    sols = enumerate_orthogonal(sp, 2, 1)
    assert [F.y for F in sols] == [(0, 1, 1, 0), (1, 0, 0, 1)]


def test_full_design_only_fraction_of_full_strength():
    assert count_orthogonal(space_from_counts([2, 3]), 6, 2) == 1


@pytest.mark.parametrize("counts", SMALL)
def test_matches_brute_force(counts):
    sp = space_from_counts(counts)
    for t in range(1, sp.n + 1):
        for s in compatible_sizes(sp, t):
            got = enumerate_orthogonal(sp, s, t)
            assert got == brute_force(sp, s, t)
            assert count_orthogonal(sp, s, t) == len(got)


def test_2223_counts():
    sp = space_from_counts([2, 2, 2, 3])
    sols = enumerate_orthogonal(sp, 12, 2)
    assert len(sols) == 44
    assert [o.size for o in classify(sp, sols)] == [2, 6, 36]
    assert count_orthogonal(sp, 24, 2) == 1


def test_coding_does_not_change_counts():
    sp = build_space([(0, 1)] * 3 + [(0, 1, 2)])
    assert count_orthogonal(sp, 12, 2) == 44


def test_solutions_are_indicators_and_satisfy_relations():
    sp = space_from_counts([2, 2, 2, 3])
    system = relation_system(sp)
    for F in enumerate_orthogonal(sp, 12, 2):
        ind = indicator_of(sp, F)
        assert is_indicator(sp, ind)
        assert check_relations(system, ind)
        assert check_strength_marginal(F, 2)


def test_closed_under_symmetry():
    sp = space_from_counts([2, 2, 2, 3])
    sols = set(enumerate_orthogonal(sp, 12, 2))
    for g in symmetry_group(sp):
        for F in list(sols)[:5]:
            assert apply(sp, g, F) in sols


def test_sorted_and_deterministic():
    sp = space_from_counts([2, 2, 2, 3])
    a = enumerate_orthogonal(sp, 12, 2)
    assert [F.y for F in a] == sorted(F.y for F in a)
    assert a == enumerate_orthogonal(sp, 12, 2)


def test_parallel_matches_serial():
    sp = space_from_counts([2, 2, 2, 3])
    assert enumerate_orthogonal(sp, 12, 2, jobs=3) == enumerate_orthogonal(sp, 12, 2)
    assert count_orthogonal(sp, 12, 2, jobs=2) == 44


def test_canonical_only():
    sp = space_from_counts([2, 2, 2, 3])
    reps = enumerate_orthogonal(sp, 12, 2, canonical_only=True)
    assert len(reps) == 3
    assert all(canonical_form(sp, F) == F for F in reps)


def test_incompatible_size_is_empty_with_diagnostic(caplog):
    sp = space_from_counts([2, 2, 3])
    with caplog.at_level(logging.WARNING, logger="ffindicator"):
        assert enumerate_orthogonal(sp, 5, 1) == []
        assert count_orthogonal(sp, 5, 1) == 0
    assert "incompatible size" in caplog.text


def test_validation():
    sp = space_from_counts([2, 2, 3])
    with pytest.raises(IncompatibleSizeError):
        validate_task(sp, 4, 1)
    with pytest.raises(ValueError):
        validate_task(sp, 6, 0)
    with pytest.raises(ValueError):
        validate_task(sp, 6, 4)
    with pytest.raises(ValueError):
        validate_task(sp, -6, 1)
    with pytest.raises(ValueError):
        enumerate_orthogonal(sp, 6, 5)
    assert EnumerationTask(sp, 6, 1).s == 6
    with pytest.raises(IncompatibleSizeError):
        EnumerationTask(sp, 12, 1, proper_only=True)


def test_free_dimension():
    assert free_dimension(space_from_counts([2, 2, 2, 3]), 2) == 24 - 1 - 5 - 9
    assert free_dimension(space_from_counts([2, 2, 2, 2, 3]), 3) == 11
    assert free_dimension(space_from_counts([2, 2, 2, 2, 3]), 2) == 27


@pytest.mark.slow
def test_22223_counts():
    sp = space_from_counts([2, 2, 2, 2, 3])
    sols = enumerate_orthogonal(sp, 24, 3)
    assert len(sols) == 56
    assert [o.size for o in classify(sp, sols)] == [2, 6, 48]
