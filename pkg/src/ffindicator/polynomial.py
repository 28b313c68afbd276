"""Sparse polynomials over Q, reduction modulo the design ideal, indicator functions.

The design ideal of a full factorial design is generated by the univariate
polynomials x_j^{r_j} - g_j, which already form a reduced Groebner basis for
every monomial order.  Normal forms are therefore obtained by repeatedly
substituting x_j^{r_j} -> g_j, one variable at a time.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .core import (
    DesignSpace,
    ExponentVector,
    FractionalDesign,
    exponent_sort_key,
    interpolate,
    to_rational,
)


class Poly:
    """Immutable sparse multivariate polynomial with Fraction coefficients.

    ``terms`` maps exponent tuples to nonzero coefficients.  Exponent tuples of
    different lengths are padded with zeros when polynomials are combined.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[ExponentVector, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExponentVector, Fraction] = {}
        for a, c in items:
            c = to_rational(c)
            if not c:
                continue
            a = tuple(int(e) for e in a)
            if any(e < 0 for e in a):
                raise ValueError(f"negative exponent in {a}")
            a = _trim(a)
            v = acc.get(a, 0) + c
            if v:
                acc[a] = v
            else:
                acc.pop(a, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def variable(cls, j: int, n: int | None = None) -> "Poly":
        """The variable x_j (1-based j) in n variables."""
        if j < 1:
            raise ValueError(f"variable index must be >= 1, got {j}")
        a = [0] * (j if n is None else n)
        a[j - 1] = 1
        return cls({tuple(a): 1})

    @property
    def terms(self) -> dict[ExponentVector, Fraction]:
        return dict(self._terms)

    def coefficient(self, a: ExponentVector) -> Fraction:
        return self._terms.get(_trim(tuple(a)), Fraction(0))

    def support(self) -> set[ExponentVector]:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def nvars(self) -> int:
        return max((len(a) for a in self._terms), default=0)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({a: -c for a, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def scale(self, c) -> "Poly":
        c = to_rational(c)
        if not c:
            return Poly()
        return Poly({a: c * v for a, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict[ExponentVector, Fraction] = {}
        for a1, c1 in self._terms.items():
            for a2, c2 in other._terms.items():
                a = _add_exponents(a1, a2)
                out[a] = out.get(a, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for a, c in self._terms.items():
            if len(a) > len(point):
                raise ValueError(f"point of arity {len(point)} for a polynomial in {len(a)} variables")
            v = c
            for d, e in zip(point, a):
                if e:
                    v *= d**e
            total += v
        return total

    def sorted_terms(self) -> list[tuple[ExponentVector, Fraction]]:
        n = self.nvars()
        return sorted(
            ((_pad(a, n), c) for a, c in self._terms.items()),
            key=lambda t: exponent_sort_key(t[0]),
        )

    def format(self, var: str = "x") -> str:
        return format_poly(self, var)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()})"


def _trim(a: ExponentVector) -> ExponentVector:
    k = len(a)
    while k and a[k - 1] == 0:
        k -= 1
    return a[:k]


def _pad(a: ExponentVector, n: int) -> ExponentVector:
    return a + (0,) * (n - len(a))


def _add_exponents(a1: ExponentVector, a2: ExponentVector) -> ExponentVector:
    if len(a1) < len(a2):
        a1, a2 = a2, a1
    return tuple(e + (a2[k] if k < len(a2) else 0) for k, e in enumerate(a1))


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.constant(v)
    return NotImplemented


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_scale(p: Poly, c) -> Poly:
    return p.scale(c)


def poly_multiply(p: Poly, q: Poly) -> Poly:
    return p * q


def format_coefficient_term(c: Fraction, body: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if body:
        text = body if mag == 1 else f"{mag}*{body}"
    else:
        text = str(mag)
    if first:
        return text if sign == "+" else f"-{text}"
    return f" {sign} {text}"


def format_monomial(a: ExponentVector, var: str = "x") -> str:
    parts = []
    for j, e in enumerate(a):
        if e == 1:
            parts.append(f"{var}{j + 1}")
        elif e > 1:
            parts.append(f"{var}{j + 1}^{e}")
    return "*".join(parts)


def format_poly(p: Poly, var: str = "x") -> str:
    """Render as e.g. ``1/4 - 1/4*x1 + 3/8*x1*x3^2``."""
    terms = p.sorted_terms()
    if not terms:
        return "0"
    return "".join(
        format_coefficient_term(c, format_monomial(a, var), k == 0) for k, (a, c) in enumerate(terms)
    )


# -- design ideal ----------------------------------------------------------


@dataclass(frozen=True)
class DivisorBasis:
    """Per factor j, the coefficients of g_j (lowest degree first), with
    x_j^{r_j} - g_j = prod_{a in A_j} (x_j - a).  ``g`` and ``divisor`` take 1-based j."""

    space: DesignSpace
    tails: tuple[tuple[Fraction, ...], ...]

    def g(self, j: int) -> Poly:
        n = self.space.n
        k0 = j - 1
        return Poly({tuple(e if k == k0 else 0 for k in range(n)): c for e, c in enumerate(self.tails[k0])})

    def divisor(self, j: int) -> Poly:
        n = self.space.n
        lead = tuple(self.space.r[j - 1] if k == j - 1 else 0 for k in range(n))
        return Poly({lead: 1}) - self.g(j)


def _expand_roots(levels: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest degree first) of prod (x - a)."""
    coeffs = [Fraction(1)]
    for a in levels:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= a * c
        coeffs = nxt
    return coeffs


def divisor_basis(space: DesignSpace) -> DivisorBasis:
    tails = []
    for f in space.factors:
        coeffs = _expand_roots(f.levels)
        # x^r - g = coeffs  =>  g = -(lower coefficients)
        tails.append(tuple(-c for c in coeffs[:-1]))
    return DivisorBasis(space, tuple(tails))


def _univariate_normal_forms(tail: Sequence[Fraction], r: int, max_exp: int) -> list[list[Fraction]]:
    """nf[e] = coefficients (length r) of the normal form of x^e, for e <= max_exp."""
    nf = []
    for e in range(max_exp + 1):
        if e < r:
            v = [Fraction(0)] * r
            v[e] = Fraction(1)
        else:
            # x^e = x * nf[e-1]; the overflowing x^r becomes g
            prev = nf[e - 1]
            v = [Fraction(0)] + prev[:-1]
            top = prev[-1]
            if top:
                for k, c in enumerate(tail):
                    v[k] += top * c
        nf.append(v)
    return nf


class _Reducer:
    """Caches univariate normal forms of x_j^e for one space."""

    def __init__(self, space: DesignSpace):
        self.space = space
        self.basis = divisor_basis(space)
        self._tables = [
            _univariate_normal_forms(t, r, 2 * (r - 1)) for t, r in zip(self.basis.tails, space.r)
        ]

    def univariate(self, j: int, e: int) -> list[Fraction]:
        table = self._tables[j]
        while e >= len(table):
            table.extend(
                _univariate_normal_forms(self.basis.tails[j], self.space.r[j], 2 * len(table))[len(table):]
            )
        return table[e]

    def monomial(self, a: ExponentVector) -> dict[ExponentVector, Fraction]:
        """Normal form of x^a as a dict over L."""
        n = self.space.n
        if len(a) > n:
            if any(a[n:]):
                raise ValueError(f"monomial {a} uses more variables than the space has")
            a = a[:n]
        a = _pad(a, n)
        out: dict[ExponentVector, Fraction] = {(): Fraction(1)}
        for j, e in enumerate(a):
            row = self.univariate(j, e)
            nxt: dict[ExponentVector, Fraction] = {}
            for partial, c in out.items():
                for k, v in enumerate(row):
                    if v:
                        key = partial + (k,)
                        nxt[key] = nxt.get(key, 0) + c * v
            out = nxt
        return out


_reducers: dict[DesignSpace, _Reducer] = {}


def _reducer(space: DesignSpace) -> _Reducer:
    red = _reducers.get(space)
    if red is None:
        red = _reducers[space] = _Reducer(space)
    return red


def reduce_mod_design(space: DesignSpace, p: Poly) -> Poly:
    """Normal form of ``p`` modulo the design ideal of ``space``; support within L."""
    red = _reducer(space)
    out: dict[ExponentVector, Fraction] = {}
    for a, c in p.terms.items():
        for b, v in red.monomial(a).items():
            out[b] = out.get(b, 0) + c * v
    return Poly(out)


# -- indicator functions -----------------------------------------------------


@dataclass(frozen=True)
class IndicatorPoly:
    """A polynomial with support in L, attached to its design space."""

    space: DesignSpace
    poly: Poly
    verified: bool = False

    def __post_init__(self):
        for a in self.poly.terms:
            if not self.space.in_exponent_set(_pad(a, self.space.n)):
                raise ValueError(f"exponent {a} is outside the exponent set of the space")

    @property
    def theta(self) -> dict[ExponentVector, Fraction]:
        """Coefficient map over the whole of L (zeros included)."""
        return {a: self.poly.coefficient(a) for a in self.space.exponents}

    def theta_vector(self) -> list[Fraction]:
        return [self.poly.coefficient(a) for a in self.space.exponents]

    @classmethod
    def from_theta(cls, space: DesignSpace, theta: Mapping[ExponentVector, object] | Sequence) -> "IndicatorPoly":
        if not isinstance(theta, Mapping):
            theta = dict(zip(space.exponents, theta))
        return cls(space, Poly(theta))

    def __str__(self) -> str:
        return self.poly.format()


def indicator_of(space: DesignSpace, F: FractionalDesign) -> IndicatorPoly:
    """The indicator function of ``F``: theta = X^-1 y."""
    if F.space != space:
        raise ValueError("fraction belongs to a different design space")
    theta = interpolate(space, F.y)
    return IndicatorPoly(space, Poly(theta), verified=True)


def fraction_of_indicator(space: DesignSpace, p: Poly | IndicatorPoly) -> FractionalDesign:
    """Evaluate ``p`` on every run; the result must be 0/1 valued."""
    if isinstance(p, IndicatorPoly):
        p = p.poly
    y = []
    for pt in space.points:
        v = p.evaluate(pt)
        if v not in (0, 1):
            raise ValueError(f"not an indicator function: value {v} at point {tuple(str(d) for d in pt)}")
        y.append(int(v))
    return FractionalDesign(space, tuple(y))


def is_indicator(space: DesignSpace, p: Poly | IndicatorPoly) -> bool:
    """True iff p^2 - p reduces to zero modulo the design ideal."""
    if isinstance(p, IndicatorPoly):
        p = p.poly
    return reduce_mod_design(space, p * p - p).is_zero()


# -- the theta = mu(theta) relation system -------------------------------------


@dataclass(frozen=True)
class RelationSystem:
    """For each a in L, the quadratic form mu_a(theta) = sum c * theta_{a1} theta_{a2}.

    Pairs are unordered and stored once, with a1 <= a2 in the space's exponent
    order; off-diagonal pairs carry the doubled coefficient.
    """

    space: DesignSpace
    forms: dict[ExponentVector, dict[tuple[ExponentVector, ExponentVector], Fraction]]

    def mu(self, a: ExponentVector, theta: Mapping[ExponentVector, Fraction]) -> Fraction:
        return sum(
            (c * theta.get(a1, 0) * theta.get(a2, 0) for (a1, a2), c in self.forms[a].items()),
            Fraction(0),
        )

    def sorted_form(self, a: ExponentVector) -> list[tuple[ExponentVector, ExponentVector, Fraction]]:
        pos = self.space.exponent_position
        return sorted(
            ((a1, a2, c) for (a1, a2), c in self.forms[a].items()),
            key=lambda t: (pos[t[0]], pos[t[1]]),
        )


def relation_system(space: DesignSpace) -> RelationSystem:
    """Square the generic polynomial sum theta_a x^a symbolically and reduce."""
    red = _reducer(space)
    exps = space.exponents
    forms: dict[ExponentVector, dict] = {a: {} for a in exps}
    for a1, a2 in combinations_with_replacement(exps, 2):
        mult = 1 if a1 == a2 else 2
        for b, v in red.monomial(_add_exponents(a1, a2)).items():
            form = forms[b]
            key = (a1, a2)
            c = form.get(key, 0) + mult * v
            if c:
                form[key] = c
            else:
                form.pop(key, None)
    return RelationSystem(space, forms)


def _theta_map(space: DesignSpace, theta) -> dict[ExponentVector, Fraction]:
    if isinstance(theta, IndicatorPoly):
        return theta.theta
    if isinstance(theta, Poly):
        return {a: theta.coefficient(a) for a in space.exponents}
    if isinstance(theta, Mapping):
        return {tuple(a): to_rational(v) for a, v in theta.items()}
    return dict(zip(space.exponents, (to_rational(v) for v in theta)))


def check_relations(system: RelationSystem, theta) -> bool:
    """True iff theta_a == mu_a(theta) for every a in L."""
    th = _theta_map(system.space, theta)
    return all(th.get(a, 0) == system.mu(a, th) for a in system.space.exponents)


def variable_name(a: ExponentVector) -> str:
    if any(e > 9 for e in a):
        raise ValueError(f"exponent vector {a} has an entry above 9; variable names need single digits")
    return "t" + "".join(str(e) for e in a)


@dataclass(frozen=True)
class LinearConstraint:
    """sum coeffs[a] * theta_a + size_coeff * s + constant = 0."""

    coeffs: dict[ExponentVector, Fraction]
    size_coeff: Fraction = Fraction(0)
    constant: Fraction = Fraction(0)


def _format_generator(linear, quadratic, size_coeff, constant=0) -> str:
    """linear: [(a, c)], quadratic: [(a1, a2, c)]."""
    pieces = []
    for a, c in linear:
        if c:
            pieces.append((c, variable_name(a)))
    for a1, a2, c in quadratic:
        if c:
            body = f"{variable_name(a1)}^2" if a1 == a2 else f"{variable_name(a1)}*{variable_name(a2)}"
            pieces.append((c, body))
    if size_coeff:
        pieces.append((size_coeff, "s"))
    if constant:
        pieces.append((constant, ""))
    if not pieces:
        return "0"
    return "".join(format_coefficient_term(c, body, k == 0) for k, (c, body) in enumerate(pieces))


def relation_generators(system: RelationSystem, constraints: Sequence[LinearConstraint] = ()) -> list[str]:
    """Generator polynomials theta_a - mu_a(theta), then the linear constraints."""
    space = system.space
    gens = []
    for a in space.exponents:
        quad = [(a1, a2, -c) for a1, a2, c in system.sorted_form(a)]
        gens.append(_format_generator([(a, Fraction(1))], quad, 0))
    pos = space.exponent_position
    for con in constraints:
        lin = sorted(con.coeffs.items(), key=lambda t: pos[t[0]])
        gens.append(_format_generator(lin, [], con.size_coeff, con.constant))
    return gens


EMIT_FORMATS = ("plain", "cas-ideal")


def emit_relations(
    system: RelationSystem,
    constraints: Sequence[LinearConstraint] | None = None,
    format: str = "plain",
) -> str:
    """Deterministic text for the system, for pasting into a computer algebra system.

    ``plain`` prints one ``<generator> = 0`` line per equation; ``cas-ideal``
    prints a ring declaration and the generators as one comma-separated ideal
    (Macaulay2 syntax).
    """
    if format not in EMIT_FORMATS:
        raise ValueError(f"unknown format {format!r}; choose from {', '.join(EMIT_FORMATS)}")
    constraints = list(constraints or ())
    gens = relation_generators(system, constraints)
    if format == "plain":
        return "".join(f"{g} = 0\n" for g in gens)
    names = [variable_name(a) for a in system.space.exponents]
    if any(c.size_coeff for c in constraints):
        names.append("s")
    body = ",\n  ".join(gens)
    return f"R = QQ[{','.join(names)}];\nI = ideal(\n  {body}\n);\n"
