"""Contrast matrix, contrast representation and orthogonality strength."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import lcm, prod
from typing import Mapping, Sequence

from .core import DesignSpace, FractionalDesign, RunIndex
from .matrix import ExactMatrix
from .polynomial import IndicatorPoly, LinearConstraint, Poly, format_coefficient_term


@dataclass(frozen=True, order=True)
class ContrastLabel:
    """J(itilde): J is a sorted tuple of 1-based factor indices, itilde in prod [r_j - 1]."""

    J: tuple[int, ...]
    itilde: tuple[int, ...]

    def __post_init__(self):
        if len(self.J) != len(self.itilde):
            raise ValueError(f"label arity mismatch: J={self.J}, itilde={self.itilde}")

    @property
    def is_constant(self) -> bool:
        return not self.J

    def __str__(self) -> str:
        if not self.J:
            return "const"
        return "".join(map(str, self.J)) + "(" + "".join(map(str, self.itilde)) + ")"


CONSTANT = ContrastLabel((), ())


def subsets_by_size(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of {1..n}, lexicographic."""
    return list(combinations(range(1, n + 1), k))


def contrast_labels(space: DesignSpace) -> list[ContrastLabel]:
    """Row order of C: constant, then by |J|, J lexicographic, itilde lexicographic."""
    labels = [CONSTANT]
    for k in range(1, space.n + 1):
        for J in subsets_by_size(space.n, k):
            for it in product(*(range(1, space.r[j - 1]) for j in J)):
                labels.append(ContrastLabel(J, it))
    return labels


def contrast_entry(label: ContrastLabel, i: RunIndex) -> int:
    if not label.J:
        return 1
    iJ = tuple(i[j - 1] for j in label.J)
    head = label.itilde[:-1]
    if iJ[:-1] != head:
        return 0
    last = iJ[-1]
    if last == 1:
        return 1
    if last == label.itilde[-1] + 1:
        return -1
    return 0


@dataclass(frozen=True)
class ContrastMatrix:
    space: DesignSpace
    labels: tuple[ContrastLabel, ...]
    matrix: ExactMatrix

    def stratum_sizes(self) -> list[int]:
        """v_1..v_n: number of rows with |J| = k."""
        counts = [0] * (self.space.n + 1)
        for lab in self.labels:
            counts[len(lab.J)] += 1
        return counts[1:]

    def rows_of_order(self, k: int) -> list[int]:
        return [p for p, lab in enumerate(self.labels) if len(lab.J) == k]


@lru_cache(maxsize=64)
def contrast_matrix(space: DesignSpace) -> ContrastMatrix:
    labels = tuple(contrast_labels(space))
    rows = [[contrast_entry(lab, i) for i in space.runs] for lab in labels]
    return ContrastMatrix(space, labels, ExactMatrix(rows, space.m))


def stratum_size(space: DesignSpace, k: int) -> int:
    return sum(prod(space.r[j - 1] - 1 for j in J) for J in subsets_by_size(space.n, k))


@dataclass(frozen=True)
class ContrastRep:
    """mu over contrast labels; ``values`` lists every label in row order."""

    space: DesignSpace
    values: tuple[tuple[ContrastLabel, Fraction], ...]

    @property
    def constant(self) -> Fraction:
        return self.values[0][1]

    def as_dict(self) -> dict[ContrastLabel, Fraction]:
        return dict(self.values)

    def nonzero_terms(self) -> list[tuple[ContrastLabel, Fraction]]:
        return [(lab, v) for lab, v in self.values[1:] if v]

    def vector(self) -> list[Fraction]:
        return [v for _, v in self.values]

    def __getitem__(self, label) -> Fraction:
        if isinstance(label, str):
            label = parse_label(label)
        return self.as_dict()[label]

    def format(self) -> str:
        """``6 + 2*z{2(1)} + z{12(11)} - ...``"""
        out = str(self.constant)
        first = False
        if self.constant == 0:
            out, first = "", True
        for lab, v in self.nonzero_terms():
            out += format_coefficient_term(v, f"z{{{lab}}}", first)
            first = False
        return out or "0"


def parse_label(text: str) -> ContrastLabel:
    """Parse ``"123(112)"`` (or ``"const"``); single-digit indices only."""
    text = text.strip()
    if text in ("const", "", "()"):
        return CONSTANT
    if text.startswith("z{") and text.endswith("}"):
        text = text[2:-1]
    head, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise ValueError(f"malformed contrast label {text!r}")
    return ContrastLabel(tuple(int(c) for c in head), tuple(int(c) for c in rest[:-1]))


def contrast_rep(space: DesignSpace, F: FractionalDesign) -> ContrastRep:
    """mu = C y."""
    cm = contrast_matrix(space)
    mu = cm.matrix.matvec(F.y)
    return ContrastRep(space, tuple(zip(cm.labels, mu)))


def contrast_rep_from_theta(space: DesignSpace, theta) -> ContrastRep:
    """mu = C X theta, for any coefficient vector theta over L."""
    if isinstance(theta, IndicatorPoly):
        vec = theta.theta_vector()
    elif isinstance(theta, Poly):
        vec = [theta.coefficient(a) for a in space.exponents]
    elif isinstance(theta, Mapping):
        vec = [Fraction(theta.get(a, 0)) for a in space.exponents]
    else:
        vec = list(theta)
    cm = contrast_matrix(space)
    mu = cm.matrix.matvec(space.model_matrix.matvec(vec))
    return ContrastRep(space, tuple(zip(cm.labels, mu)))


@lru_cache(maxsize=64)
def cx_inverse(space: DesignSpace) -> ExactMatrix:
    return (contrast_matrix(space).matrix @ space.model_matrix).inverse()


@lru_cache(maxsize=64)
def contrast_inverse(space: DesignSpace) -> ExactMatrix:
    return contrast_matrix(space).matrix.inverse()


def z_basis(space: DesignSpace) -> dict[ContrastLabel, Poly]:
    """z = ((CX)^-1)^T x: one polynomial over L per contrast label."""
    inv = cx_inverse(space)  # rows indexed by exponents, columns by labels
    labels = contrast_matrix(space).labels
    exps = space.exponents
    return {
        lab: Poly({a: inv[r, c] for r, a in enumerate(exps)})
        for c, lab in enumerate(labels)
    }


def expand_contrast(rep: ContrastRep) -> Poly:
    """sum mu_label * z_label as a polynomial in x."""
    z = z_basis(rep.space)
    out = Poly()
    for lab, v in rep.values:
        if v:
            out = out + z[lab].scale(v)
    return out


@dataclass(frozen=True)
class MarginalTable:
    J: tuple[int, ...]
    counts: dict[tuple[int, ...], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def marginal(F: FractionalDesign, J: Sequence[int]) -> MarginalTable:
    """Counts of selected runs per level combination on the 1-based factor subset J."""
    space = F.space
    J = tuple(sorted(J))
    for j in J:
        if not 1 <= j <= space.n:
            raise ValueError(f"factor {j} out of range 1..{space.n}")
    counts = {cell: 0 for cell in product(*(range(1, space.r[j - 1] + 1) for j in J))}
    for i, v in zip(space.runs, F.y):
        if v:
            counts[tuple(i[j - 1] for j in J)] += 1
    return MarginalTable(J, counts)


def _check_t(space: DesignSpace, t: int) -> None:
    if not 0 <= t <= space.n:
        raise ValueError(f"strength {t} out of range 0..{space.n}")


def check_strength_contrast(F: FractionalDesign, t: int) -> bool:
    """C_k y = 0 for k = 1..t."""
    space = F.space
    _check_t(space, t)
    cm = contrast_matrix(space)
    y = F.y
    for p, lab in enumerate(cm.labels):
        if 1 <= len(lab.J) <= t:
            row = cm.matrix.row(p)
            if sum(c for c, v in zip(row, y) if v):
                return False
    return True


def check_strength_marginal(F: FractionalDesign, t: int) -> bool:
    """Every J-marginal with |J| <= t is constant at s / m_J."""
    space = F.space
    _check_t(space, t)
    s = F.size
    for k in range(1, t + 1):
        for J in subsets_by_size(space.n, k):
            mJ = prod(space.r[j - 1] for j in J)
            if s % mJ:
                return False
            target = s // mJ
            if any(c != target for c in marginal(F, J).counts.values()):
                return False
    return True


def strength(F: FractionalDesign) -> int:
    """Largest t with C_k y = 0 for all k <= t; the empty fraction has strength n."""
    t = 0
    while t < F.space.n and check_strength_contrast(F, t + 1):
        t += 1
    return t


def size_modulus(space: DesignSpace, t: int) -> int:
    return lcm(*(prod(space.r[j - 1] for j in J) for J in subsets_by_size(space.n, t)))


def compatible_sizes(space: DesignSpace, t: int, proper: bool = False) -> list[int]:
    """Sizes in [1, m] (or [1, m) when ``proper``) that are multiples of every t-subset product."""
    if not 1 <= t <= space.n:
        raise ValueError(f"strength {t} out of range 1..{space.n}")
    q = size_modulus(space, t)
    top = space.m - 1 if proper else space.m
    return list(range(q, top + 1, q))


def strength_constraints(space: DesignSpace, t: int, size: bool = True):
    """Linear constraints 1^T X theta = s and C_k X theta = 0 (k <= t) on theta."""
    cm = contrast_matrix(space)
    cx = cm.matrix @ space.model_matrix
    exps = space.exponents
    out = []
    for p, lab in enumerate(cm.labels):
        k = len(lab.J)
        if k == 0 and not size:
            continue
        if k > t:
            continue
        coeffs = {a: v for a, v in zip(exps, cx.row(p)) if v}
        out.append(LinearConstraint(coeffs, Fraction(-1) if k == 0 else Fraction(0)))
    return out
