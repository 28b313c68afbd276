"""Full factorial design spaces, run/exponent indexing and the model matrix."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import prod
from typing import Iterable, Sequence

from .matrix import ExactMatrix, solve_exact

RunIndex = tuple[int, ...]
ExponentVector = tuple[int, ...]
Point = tuple[Fraction, ...]


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not level values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not an exact rational: {value!r}") from None
    if isinstance(value, float):
        # floats are accepted only when they are exactly representable small rationals
        f = Fraction(value)
        if f.denominator > 2**20:
            raise ValueError(f"refusing inexact float level {value!r}; pass 'p/q' instead")
        return f
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class FactorSpec:
    levels: tuple[Fraction, ...]

    def __post_init__(self):
        levels = tuple(to_rational(v) for v in self.levels)
        if len(levels) < 2:
            raise ValueError(f"a factor needs at least 2 levels, got {len(levels)}")
        if len(set(levels)) != len(levels):
            raise ValueError(f"duplicate levels in factor {[str(v) for v in levels]}")
        object.__setattr__(self, "levels", levels)

    @property
    def r(self) -> int:
        return len(self.levels)


def default_levels(r: int) -> tuple[int, ...]:
    """Default coding for an r-level factor, symmetric around zero.

    Odd r gives consecutive integers centred on 0 ({-1,0,1} for r=3); even r
    gives +-1 .. +-r/2 without 0 ({-1,1} for r=2).
    """
    if r < 2:
        raise ValueError(f"a factor needs at least 2 levels, got {r}")
    h = r // 2
    if r % 2:
        return tuple(range(-h, h + 1))
    return tuple(range(-h, 0)) + tuple(range(1, h + 1))


def exponent_sort_key(a: ExponentVector) -> tuple:
    """Graded lexicographic order: total degree first, then x1 > x2 > ... ."""
    return (sum(a), tuple(-e for e in a))


@dataclass(frozen=True)
class DesignSpace:
    """The full factorial design A_1 x ... x A_n."""

    factors: tuple[FactorSpec, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a design space needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def levels(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(f.levels for f in self.factors)

    @property
    def r(self) -> tuple[int, ...]:
        return tuple(f.r for f in self.factors)

    @property
    def m(self) -> int:
        return prod(self.r)

    @cached_property
    def runs(self) -> tuple[RunIndex, ...]:
        """Run indices (1-based), lexicographic with the first coordinate most significant."""
        return tuple(product(*(range(1, r + 1) for r in self.r)))

    @cached_property
    def run_position(self) -> dict[RunIndex, int]:
        return {i: k for k, i in enumerate(self.runs)}

    @cached_property
    def exponents(self) -> tuple[ExponentVector, ...]:
        """The exponent set L in graded lexicographic order (all-zero vector first)."""
        return tuple(sorted(product(*(range(r) for r in self.r)), key=exponent_sort_key))

    @cached_property
    def exponent_position(self) -> dict[ExponentVector, int]:
        return {a: k for k, a in enumerate(self.exponents)}

    @cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple(self.point_of(i) for i in self.runs)

    @cached_property
    def point_position(self) -> dict[Point, int]:
        return {p: k for k, p in enumerate(self.points)}

    def in_exponent_set(self, a: ExponentVector) -> bool:
        return len(a) == self.n and all(0 <= e < r for e, r in zip(a, self.r))

    def point_of(self, i: RunIndex) -> Point:
        if len(i) != self.n:
            raise IndexError(f"run index {i} has arity {len(i)}, space has {self.n} factors")
        for ij, r in zip(i, self.r):
            if not 1 <= ij <= r:
                raise IndexError(f"run index {i} out of range for level counts {self.r}")
        return tuple(f.levels[ij - 1] for f, ij in zip(self.factors, i))

    @cached_property
    def model_matrix(self) -> ExactMatrix:
        return model_matrix(self)

    @cached_property
    def model_matrix_inverse(self) -> ExactMatrix:
        return self.model_matrix.inverse()

    def describe(self) -> str:
        return " x ".join("{" + ",".join(str(v) for v in f.levels) + "}" for f in self.factors)

    def __repr__(self) -> str:
        return f"DesignSpace({self.describe()})"


def build_space(specs: Iterable) -> DesignSpace:
    """Build a design space from FactorSpecs or plain level sequences."""
    factors = tuple(s if isinstance(s, FactorSpec) else FactorSpec(tuple(s)) for s in specs)
    return DesignSpace(factors)


def space_from_counts(counts: Sequence[int]) -> DesignSpace:
    return build_space(default_levels(r) for r in counts)


def point_of(space: DesignSpace, i: RunIndex) -> Point:
    return space.point_of(tuple(i))


def monomial_value(point: Sequence[Fraction], a: ExponentVector) -> Fraction:
    v = Fraction(1)
    for d, e in zip(point, a):
        if e:
            v *= d**e
    return v


def model_matrix(space: DesignSpace) -> ExactMatrix:
    """X with entry (i, a) = d_i^a; rows in run order, columns in exponent order."""
    return ExactMatrix(
        [[monomial_value(p, a) for a in space.exponents] for p in space.points],
        space.m,
    )


@dataclass(frozen=True)
class FractionalDesign:
    """A fraction F of a design space, stored as its 0/1 response vector y."""

    space: DesignSpace
    y: tuple[int, ...]

    def __post_init__(self):
        y = tuple(int(v) for v in self.y)
        if len(y) != self.space.m:
            raise ValueError(f"response has length {len(y)}, space has {self.space.m} runs")
        if any(v not in (0, 1) for v in y):
            raise ValueError("response must be 0/1 valued")
        object.__setattr__(self, "y", y)

    @property
    def size(self) -> int:
        return sum(self.y)

    @property
    def runs(self) -> list[RunIndex]:
        return [i for i, v in zip(self.space.runs, self.y) if v]

    @property
    def points(self) -> list[Point]:
        return [p for p, v in zip(self.space.points, self.y) if v]

    @classmethod
    def from_runs(cls, space: DesignSpace, runs: Iterable[RunIndex]) -> "FractionalDesign":
        y = [0] * space.m
        for i in runs:
            i = tuple(i)
            if i not in space.run_position:
                raise IndexError(f"run index {i} not in space")
            y[space.run_position[i]] = 1
        return cls(space, tuple(y))

    def __repr__(self) -> str:
        return f"FractionalDesign(size={self.size}, y={''.join(map(str, self.y))})"


def fraction_from_points(space: DesignSpace, points: Iterable[Sequence]) -> FractionalDesign:
    """Encode a list of level-valued points as a fraction of ``space``.

    Raises ValueError for wrong arity, unknown level values and duplicate points.
    """
    y = [0] * space.m
    for raw in points:
        if len(raw) != space.n:
            raise ValueError(f"point {tuple(raw)} has arity {len(raw)}, expected {space.n}")
        pt = tuple(to_rational(v) for v in raw)
        for j, (v, f) in enumerate(zip(pt, space.factors)):
            if v not in f.levels:
                raise ValueError(f"unknown level {v} for factor {j + 1} (levels {[str(x) for x in f.levels]})")
        k = space.point_position[pt]
        if y[k]:
            raise ValueError(f"duplicate point {tuple(str(v) for v in pt)}")
        y[k] = 1
    return FractionalDesign(space, tuple(y))


def full_fraction(space: DesignSpace) -> FractionalDesign:
    return FractionalDesign(space, (1,) * space.m)


def empty_fraction(space: DesignSpace) -> FractionalDesign:
    return FractionalDesign(space, (0,) * space.m)


def interpolate(space: DesignSpace, values: Sequence) -> dict[ExponentVector, Fraction]:
    """Coefficients theta = X^-1 values of the interpolating polynomial, keyed by exponent."""
    # a single solve is cheaper than a full inverse; reuse the inverse once it exists
    if "model_matrix_inverse" in space.__dict__:
        theta = space.model_matrix_inverse.matvec(values)
    else:
        theta = solve_exact(space.model_matrix, values)
    return dict(zip(space.exponents, theta))
