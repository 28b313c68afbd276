import random
from fractions import Fraction
from itertools import product
from math import prod

import pytest

import paper_data as pd
from ffindicator.contrast import (
    CONSTANT,
    ContrastLabel,
    check_strength_contrast,
    check_strength_marginal,
    compatible_sizes,
    contrast_labels,
    contrast_matrix,
    contrast_rep,
    contrast_rep_from_theta,
    expand_contrast,
    marginal,
    parse_label,
    strength,
    strength_constraints,
    z_basis,
)
from ffindicator.core import FractionalDesign, build_space, fraction_from_points, space_from_counts
from ffindicator.polynomial import indicator_of


def mu_dict(rep):
    out = {str(lab): v for lab, v in rep.nonzero_terms()}
    if rep.constant:
        out["const"] = rep.constant
    return out


def small_spaces(max_m=12):
    """Every level-count tuple (nondecreasing, r_j >= 2) with m <= max_m."""
    out = []

    def grow(prefix, lo):
        if prefix:
            out.append(tuple(prefix))
        for r in range(lo, max_m + 1):
            if prod(prefix) * r > max_m:
                break
            grow(prefix + [r], r)

    grow([], 2)
    return out


SMALL = small_spaces()


def test_small_space_list():
    assert (2, 2, 3) in SMALL and (12,) in SMALL and (2, 2, 2) in SMALL
    assert all(prod(c) <= 12 for c in SMALL)


def test_labels_order():
    labels = [str(lab) for lab in contrast_labels(space_from_counts([2, 2, 3]))]
    assert labels == list(pd.CONTRAST_2x2x3)


def test_contrast_matrix_matches_table():
    cm = contrast_matrix(space_from_counts([2, 2, 3]))
    for p, (label, row) in enumerate(pd.CONTRAST_2x2x3.items()):
        assert str(cm.labels[p]) == label
        assert list(cm.matrix.row(p)) == row


def test_stratum_sizes():
    cm = contrast_matrix(space_from_counts([2, 2, 3]))
    assert cm.stratum_sizes() == [4, 5, 2]
    cm = contrast_matrix(space_from_counts([2, 2, 2, 3]))
    assert cm.stratum_sizes()[:2] == [5, 9]


@pytest.mark.parametrize("counts", SMALL)
def test_contrast_matrix_nonsingular(counts):
    assert contrast_matrix(space_from_counts(counts)).matrix.determinant() != 0


def test_contrast_matrix_coding_free():
    a = contrast_matrix(space_from_counts([2, 2, 3]))
    b = contrast_matrix(build_space([(0, 1), (5, 7), (0, 1, 2)]))
    assert a.matrix == b.matrix


def test_contrast_f4():
    sp = space_from_counts([2, 2, 3])
    rep = contrast_rep(sp, fraction_from_points(sp, pd.F4))
    assert mu_dict(rep) == pd.parse_z_poly(pd.F4_MU)
    assert rep.format() == pd.F4_MU


def test_contrast_f3():
    sp = space_from_counts([3, 3, 3, 3])
    rep = contrast_rep(sp, fraction_from_points(sp, pd.F3))
    assert mu_dict(rep) == pd.parse_z_poly(pd.F3_MU)
    assert len(rep.nonzero_terms()) == 22


def test_contrast_full_and_empty():
    sp = space_from_counts([2, 3])
    full = contrast_rep(sp, FractionalDesign(sp, (1,) * 6))
    assert mu_dict(full) == {"const": 6}
    empty = contrast_rep(sp, FractionalDesign(sp, (0,) * 6))
    assert empty.format() == "0"


def test_contrast_from_theta_agrees():
    sp = space_from_counts([2, 2, 3])
    F = fraction_from_points(sp, pd.F4)
    assert contrast_rep_from_theta(sp, indicator_of(sp, F)).vector() == contrast_rep(sp, F).vector()


def test_label_parsing():
    assert parse_label("123(112)") == ContrastLabel((1, 2, 3), (1, 1, 2))
    assert parse_label("z{2(1)}") == ContrastLabel((2,), (1,))
    assert parse_label("const") == CONSTANT
    with pytest.raises(ValueError):
        parse_label("12(1")
    with pytest.raises(ValueError):
        ContrastLabel((1, 2), (1,))


def test_rep_indexing():
    sp = space_from_counts([2, 2, 3])
    rep = contrast_rep(sp, fraction_from_points(sp, pd.F4))
    assert rep["2(1)"] == 2 and rep["13(11)"] == 0 and rep.constant == 6


def test_z_basis_single_factor():
    sp = space_from_counts([2])
    z = z_basis(sp)
    # C = [[1,1],[1,-1]], X = [[1,-1],[1,1]]: f = mu0 z0 + mu1 z1
    assert z[CONSTANT].coefficient((0,)) == Fraction(1, 2)
    assert z[ContrastLabel((1,), (1,))].coefficient((1,)) == Fraction(-1, 2)


@pytest.mark.parametrize("counts", [(2, 2, 3), (2, 3), (3, 3)])
def test_expansion_recovers_indicator(counts):
    sp = space_from_counts(counts)
    rng = random.Random(11)
    for _ in range(20):
        F = FractionalDesign(sp, tuple(rng.randint(0, 1) for _ in range(sp.m)))
        assert expand_contrast(contrast_rep(sp, F)) == indicator_of(sp, F).poly


def test_marginal_table():
    sp = space_from_counts([2, 2, 3])
    F = fraction_from_points(sp, pd.F4)
    assert marginal(F, [2]).counts == {(1,): 4, (2,): 2}
    tab = marginal(F, [1, 3])
    assert set(tab.counts.values()) == {1} and tab.total == 6
    with pytest.raises(ValueError):
        marginal(F, [4])


def test_strength_examples():
    sp = space_from_counts([2, 2, 3])
    assert strength(fraction_from_points(sp, pd.F4)) == 0
    assert strength(FractionalDesign(sp, (1,) * 12)) == 3
    assert strength(FractionalDesign(sp, (0,) * 12)) == 3
    sp3 = space_from_counts([3, 3, 3, 3])
    assert strength(fraction_from_points(sp3, pd.F3)) == 2
    sp1 = space_from_counts([2, 2, 2, 2, 2])
    assert strength(fraction_from_points(sp1, pd.F1)) == 2


def test_f4_x1_x3_orthogonal():
    sp = space_from_counts([2, 2, 3])
    rep = contrast_rep(sp, fraction_from_points(sp, pd.F4))
    assert all(rep[lab] == 0 for lab in ("1(1)", "3(1)", "3(2)", "13(11)", "13(12)"))


@pytest.mark.parametrize("counts", SMALL)
def test_contrast_marginal_equivalence_exhaustive(counts):
    sp = space_from_counts(counts)
    for y in product((0, 1), repeat=sp.m):
        F = FractionalDesign(sp, y)
        for t in range(1, sp.n + 1):
            assert check_strength_contrast(F, t) == check_strength_marginal(F, t)


@pytest.mark.parametrize("counts", [(2, 2, 2, 3), (3, 3, 2), (2, 2, 2, 2, 3), (4, 4)])
def test_contrast_marginal_equivalence_random(counts):
    sp = space_from_counts(counts)
    rng = random.Random(sum(counts))
    for _ in range(1000):
        F = FractionalDesign(sp, tuple(rng.randint(0, 1) for _ in range(sp.m)))
        for t in range(1, sp.n + 1):
            assert check_strength_contrast(F, t) == check_strength_marginal(F, t)
    # random fractions are rarely orthogonal, so check the positive side explicitly
    F = FractionalDesign(sp, (1,) * sp.m)
    assert check_strength_contrast(F, sp.n) and check_strength_marginal(F, sp.n)


def test_strength_monotone():
    sp = space_from_counts([2, 2, 3])
    for y in product((0, 1), repeat=12):
        F = FractionalDesign(sp, y)
        flags = [check_strength_contrast(F, t) for t in range(1, 4)]
        assert flags == sorted(flags, reverse=True)


@pytest.mark.parametrize(
    "pair",
    [
        ([(-1, 0, 1)], [(0, 1, 2)]),
        ([(-1, 1)], [(0, 1)]),
        ([(-1, 1), (-1, 1), (-1, 0, 1)], [(0, 1), (0, 1), (0, 1, 2)]),
        ([(-1, 1), (-1, 0, 1)], [(0, 1), (0, 1, 2)]),
    ],
)
def test_coding_invariance(pair):
    a, b = build_space(pair[0]), build_space(pair[1])
    for y in product((0, 1), repeat=a.m):
        Fa, Fb = FractionalDesign(a, y), FractionalDesign(b, y)
        ra = contrast_rep_from_theta(a, indicator_of(a, Fa))
        rb = contrast_rep_from_theta(b, indicator_of(b, Fb))
        assert ra.vector() == rb.vector() == contrast_rep(a, Fa).vector()


def test_coding_invariance_random_larger():
    a = space_from_counts([2, 2, 2, 3])
    b = build_space([(0, 1)] * 3 + [(0, 1, 2)])
    rng = random.Random(3)
    for _ in range(50):
        y = tuple(rng.randint(0, 1) for _ in range(a.m))
        ra = contrast_rep_from_theta(a, indicator_of(a, FractionalDesign(a, y)))
        rb = contrast_rep_from_theta(b, indicator_of(b, FractionalDesign(b, y)))
        assert ra.vector() == rb.vector()


def test_compatible_sizes():
    assert compatible_sizes(space_from_counts([2, 2, 2, 3]), 2) == [12, 24]
    assert compatible_sizes(space_from_counts([2, 2, 2, 2, 3]), 3) == [24, 48]
    assert compatible_sizes(space_from_counts([2, 2, 3]), 1) == [6, 12]
    assert compatible_sizes(space_from_counts([2, 2, 3]), 1, proper=True) == [6]
    assert compatible_sizes(space_from_counts([2, 2, 2, 2, 3]), 3, proper=True) == [24]
    with pytest.raises(ValueError):
        compatible_sizes(space_from_counts([2, 2]), 3)


def test_strength_constraints_shape():
    sp = space_from_counts([2, 2, 3])
    cons = strength_constraints(sp, 1)
    assert len(cons) == 5
    assert cons[0].size_coeff == -1
    assert all(c.size_coeff == 0 for c in cons[1:])
    assert len(strength_constraints(sp, 1, size=False)) == 4
    assert len(strength_constraints(sp, 0)) == 1
