"""Exhaustive enumeration of orthogonal fractions of a given size and strength.

Backtracking over the 0/1 response vector in run order, keeping every
J-marginal (1 <= |J| <= t) count together with the number of still
undecided runs feeding each marginal cell.  A branch is cut as soon as a cell
would overshoot s/m_J or can no longer reach it.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from math import prod
from typing import Sequence

from .contrast import compatible_sizes, stratum_size
from .core import DesignSpace, FractionalDesign
from .symmetry import canonical_y

log = logging.getLogger(__name__)


class IncompatibleSizeError(ValueError):
    """The requested size is not a common multiple of the t-factor level products."""


@dataclass(frozen=True)
class EnumerationTask:
    space: DesignSpace
    s: int
    t: int
    proper_only: bool = False
    jobs: int = 1

    def __post_init__(self):
        validate_task(self.space, self.s, self.t, self.proper_only)


def validate_task(space: DesignSpace, s: int, t: int, proper_only: bool = False) -> None:
    if not 1 <= t <= space.n:
        raise ValueError(f"strength {t} out of range 1..{space.n}")
    if s < 0:
        raise ValueError(f"size must be nonnegative, got {s}")
    if s not in compatible_sizes(space, t, proper=proper_only):
        raise IncompatibleSizeError(
            f"size {s} is incompatible with strength {t} for level counts {space.r}"
        )


def free_dimension(space: DesignSpace, t: int) -> int:
    """m minus the number of linear constraints (size plus strata 1..t)."""
    return space.m - 1 - sum(stratum_size(space, k) for k in range(1, t + 1))


class _Search:
    def __init__(self, r: Sequence[int], s: int, t: int):
        self.m = prod(r)
        self.s = s
        runs = list(product(*(range(r_j) for r_j in r)))
        cells_of_run: list[list[int]] = [[] for _ in runs]
        target: list[int] = []
        capacity: list[int] = []
        n = len(r)
        for k in range(1, t + 1):
            for J in combinations(range(n), k):
                mJ = prod(r[j] for j in J)
                base = len(target)
                strides = []
                acc = 1
                for j in reversed(J):
                    strides.append(acc)
                    acc *= r[j]
                strides.reverse()
                target.extend([s // mJ] * mJ)
                capacity.extend([self.m // mJ] * mJ)
                for p, i in enumerate(runs):
                    cells_of_run[p].append(base + sum(i[j] * st for j, st in zip(J, strides)))
        self.cells_of_run = [tuple(c) for c in cells_of_run]
        self.target = target
        self.capacity0 = capacity

    def run(self, prefix: Sequence[int] = (), depth: int | None = None, count_only: bool = False):
        """Complete all feasible extensions of ``prefix``; stop at ``depth`` if given.

        Returns the list of complete (or depth-truncated) y tuples, or their count.
        """
        m, s = self.m, self.s
        cells_of_run, target = self.cells_of_run, self.target
        count = [0] * len(target)
        remaining = list(self.capacity0)
        y: list[int] = []
        total = 0
        for v in prefix:
            cells = cells_of_run[len(y)]
            for c in cells:
                remaining[c] -= 1
                count[c] += v
                if count[c] > target[c] or count[c] + remaining[c] < target[c]:
                    return 0 if count_only else []
            total += v
            y.append(v)
        if total > s or total + (m - len(y)) < s:
            return 0 if count_only else []
        stop = m if depth is None else min(depth, m)
        out: list[tuple[int, ...]] = []
        found = 0

        def rec(pos: int, total: int) -> None:
            nonlocal found
            if pos == stop:
                if count_only:
                    found += 1
                else:
                    out.append(tuple(y))
                return
            cells = cells_of_run[pos]
            for c in cells:
                remaining[c] -= 1
            # branch 1
            if total < s and all(count[c] < target[c] for c in cells):
                for c in cells:
                    count[c] += 1
                y.append(1)
                rec(pos + 1, total + 1)
                y.pop()
                for c in cells:
                    count[c] -= 1
            # branch 0
            if total + (m - pos - 1) >= s and all(count[c] + remaining[c] >= target[c] for c in cells):
                y.append(0)
                rec(pos + 1, total)
                y.pop()
            for c in cells:
                remaining[c] += 1

        rec(len(y), total)
        return found if count_only else out


def _worker(args):
    r, s, t, prefix, count_only = args
    return _Search(r, s, t).run(prefix, count_only=count_only)


def _split_depth(m: int, jobs: int) -> int:
    return min(m, max(4, 2 * jobs.bit_length() + 4))


def _search_all(space: DesignSpace, s: int, t: int, jobs: int, count_only: bool):
    search = _Search(space.r, s, t)
    if jobs <= 1:
        return search.run(count_only=count_only)
    prefixes = search.run(depth=_split_depth(space.m, jobs))
    tasks = [(space.r, s, t, p, count_only) for p in prefixes]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_worker, tasks))
    if count_only:
        return sum(parts)
    return [y for part in parts for y in part]


def enumerate_orthogonal(
    space: DesignSpace,
    s: int,
    t: int,
    jobs: int = 1,
    canonical_only: bool = False,
) -> list[FractionalDesign]:
    """All fractions of size ``s`` with strength at least ``t``, ordered by y.

    An incompatible size yields an empty list and a logged diagnostic.
    """
    try:
        validate_task(space, s, t)
    except IncompatibleSizeError as exc:
        log.warning("incompatible size: %s", exc)
        return []
    ys = sorted(_search_all(space, s, t, jobs, count_only=False))
    if not ys:
        log.info("no solutions for size %d and strength %d", s, t)
    if canonical_only:
        ys = [y for y in ys if canonical_y(space, y) == y]
    return [FractionalDesign(space, y) for y in ys]


def count_orthogonal(space: DesignSpace, s: int, t: int, jobs: int = 1) -> int:
    try:
        validate_task(space, s, t)
    except IncompatibleSizeError as exc:
        log.warning("incompatible size: %s", exc)
        return 0
    return _search_all(space, s, t, jobs, count_only=True)
