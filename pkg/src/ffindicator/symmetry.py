"""Level and factor permutations acting on fractions; orbits and canonical forms.

The group acts on run indices: each factor's level positions are permuted
independently, and factors may be exchanged when they have the same number
of levels.  Because the action is on positions rather than level values it
does not depend on the coding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod
from typing import Iterator, Sequence

from .contrast import ContrastRep, contrast_inverse, contrast_matrix
from .core import DesignSpace, FractionalDesign, RunIndex
from .matrix import ExactMatrix
from .polynomial import IndicatorPoly, Poly


@dataclass(frozen=True)
class GroupElement:
    """``level_perms[j]`` maps 0-based level positions of factor j; ``factor_perm``
    sends factor j to position ``factor_perm[j]`` (0-based).

    Acting on a run i: the level of factor j is relabelled by ``level_perms[j]``
    and then moved to position ``factor_perm[j]``.
    """

    level_perms: tuple[tuple[int, ...], ...]
    factor_perm: tuple[int, ...]

    def act(self, i: RunIndex) -> RunIndex:
        out = [0] * len(i)
        for j, ij in enumerate(i):
            out[self.factor_perm[j]] = self.level_perms[j][ij - 1] + 1
        return tuple(out)

    def compose(self, other: "GroupElement") -> "GroupElement":
        """``self * other``: apply ``other`` first, then ``self``."""
        # factor j -> other.factor_perm[j] =: k -> self.factor_perm[k]
        fp = tuple(self.factor_perm[k] for k in other.factor_perm)
        lp = tuple(
            tuple(self.level_perms[other.factor_perm[j]][other.level_perms[j][l]] for l in range(len(other.level_perms[j])))
            for j in range(len(other.factor_perm))
        )
        return GroupElement(lp, fp)

    def inverse(self) -> "GroupElement":
        n = len(self.factor_perm)
        fp = [0] * n
        for j, k in enumerate(self.factor_perm):
            fp[k] = j
        lp: list[tuple[int, ...]] = [()] * n
        for j, k in enumerate(self.factor_perm):
            perm = self.level_perms[j]
            inv = [0] * len(perm)
            for a, b in enumerate(perm):
                inv[b] = a
            lp[k] = tuple(inv)
        return GroupElement(tuple(lp), tuple(fp))

    def is_identity(self) -> bool:
        return all(k == j for j, k in enumerate(self.factor_perm)) and all(
            all(b == a for a, b in enumerate(p)) for p in self.level_perms
        )


def identity_element(space: DesignSpace) -> GroupElement:
    return GroupElement(tuple(tuple(range(r)) for r in space.r), tuple(range(space.n)))


def _block_preserving_perms(r: Sequence[int]) -> list[tuple[int, ...]]:
    n = len(r)
    return [p for p in permutations(range(n)) if all(r[p[j]] == r[j] for j in range(n))]


def symmetry_group(space: DesignSpace) -> Iterator[GroupElement]:
    """All elements: factor permutations within equal-level blocks times per-factor level permutations."""
    fperms = _block_preserving_perms(space.r)
    level_choices = [list(permutations(range(r))) for r in space.r]
    for fp in fperms:
        for lp in product(*level_choices):
            yield GroupElement(tuple(lp), fp)


def group_order(space: DesignSpace) -> int:
    blocks: dict[int, int] = {}
    for r in space.r:
        blocks[r] = blocks.get(r, 0) + 1
    return prod(factorial(r) for r in space.r) * prod(factorial(c) for c in blocks.values())


def run_permutation(space: DesignSpace, g: GroupElement) -> tuple[int, ...]:
    """pi with pi[k] = position of g . runs[k]."""
    pos = space.run_position
    return tuple(pos[g.act(i)] for i in space.runs)


@lru_cache(maxsize=16)
def group_run_permutations(space: DesignSpace) -> tuple[tuple[int, ...], ...]:
    return tuple(run_permutation(space, g) for g in symmetry_group(space))


def _permute_y(y: Sequence[int], pi: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(y)
    for k, v in enumerate(y):
        out[pi[k]] = v
    return tuple(out)


def apply(space: DesignSpace, g: GroupElement, F: FractionalDesign) -> FractionalDesign:
    """The image fraction, with y'(g . i) = y(i)."""
    return FractionalDesign(space, _permute_y(F.y, run_permutation(space, g)))


def permutation_matrix(space: DesignSpace, g: GroupElement) -> ExactMatrix:
    pi = run_permutation(space, g)
    rows = [[0] * space.m for _ in range(space.m)]
    for k, target in enumerate(pi):
        rows[target][k] = 1
    return ExactMatrix(rows, space.m)


def theta_transform(space: DesignSpace, g: GroupElement, theta) -> dict:
    """theta' = X^-1 P_g X theta, keyed by exponent vector."""
    vec = _vector(space.exponents, theta)
    values = space.model_matrix.matvec(vec)
    permuted = _permute_y(values, run_permutation(space, g))
    return dict(zip(space.exponents, space.model_matrix_inverse.matvec(permuted)))


def mu_transform(space: DesignSpace, g: GroupElement, mu) -> dict:
    """mu' = C P_g C^-1 mu, keyed by contrast label."""
    cm = contrast_matrix(space)
    vec = _vector(cm.labels, mu)
    y = contrast_inverse(space).matvec(vec)
    permuted = _permute_y(y, run_permutation(space, g))
    return dict(zip(cm.labels, cm.matrix.matvec(permuted)))


def _vector(keys, data) -> list[Fraction]:
    if isinstance(data, IndicatorPoly):
        data = data.theta
    elif isinstance(data, Poly):
        data = {a: data.coefficient(a) for a in keys}
    elif isinstance(data, ContrastRep):
        data = data.as_dict()
    if isinstance(data, dict):
        return [Fraction(data.get(k, 0)) for k in keys]
    vec = [Fraction(v) for v in data]
    if len(vec) != len(keys):
        raise ValueError(f"expected {len(keys)} coefficients, got {len(vec)}")
    return vec


def complement(space: DesignSpace, F: FractionalDesign) -> FractionalDesign:
    return FractionalDesign(space, tuple(1 - v for v in F.y))


def orbit(space: DesignSpace, F: FractionalDesign) -> set[tuple[int, ...]]:
    return {_permute_y(F.y, pi) for pi in group_run_permutations(space)}


def canonical_y(space: DesignSpace, y: Sequence[int]) -> tuple[int, ...]:
    return min(_permute_y(y, pi) for pi in group_run_permutations(space))


def canonical_form(space: DesignSpace, F: FractionalDesign) -> FractionalDesign:
    """The lexicographically smallest response vector in the orbit of F."""
    return FractionalDesign(space, canonical_y(space, F.y))


@dataclass(frozen=True)
class Orbit:
    representative: FractionalDesign
    members: tuple[FractionalDesign, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def classify(space: DesignSpace, fractions: Sequence[FractionalDesign]) -> list[Orbit]:
    """Partition by canonical form; orbits sorted by (size, canonical y).

    Only the fractions passed in are counted, so an orbit's size is the number
    of inputs that fall in it.
    """
    seen = set()
    groups: dict[tuple[int, ...], list[FractionalDesign]] = {}
    for F in fractions:
        if F.space != space:
            raise ValueError("fraction belongs to a different design space")
        if F.y in seen:
            raise ValueError(f"duplicate fraction in input: {F}")
        seen.add(F.y)
        groups.setdefault(canonical_y(space, F.y), []).append(F)
    orbits = [
        Orbit(FractionalDesign(space, key), tuple(sorted(members, key=lambda f: f.y)))
        for key, members in groups.items()
    ]
    orbits.sort(key=lambda o: (o.size, o.representative.y))
    return orbits
