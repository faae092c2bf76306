"""Truncated multivariate power series with exact rational coefficients.

A :class:`JetScalar` of order ``r`` in ``n`` variables is the r-jet at the
origin of a smooth function: a polynomial of total degree ``<= r`` whose
coefficients are :class:`fractions.Fraction`.  Binary operations truncate to
the smaller operand order, which is exactly jet projection.

A :class:`DiffeoJet` is the jet of a map fixing the origin with invertible
linear part.  :func:`substitute` composes, :func:`map_invert` inverts.

Multi-indices are exponent tuples ``(a_1, ..., a_n)``; variables are indexed
from 0 in this API.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .errors import DimensionMismatch, JetError, OrderError, SingularLinearPart

MultiIndex = tuple[int, ...]
Scalar = int | Fraction

_VARNAMES = {1: ("x",), 2: ("x", "y"), 3: ("x", "y", "z")}


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def grlex_key(alpha: MultiIndex) -> tuple:
    """Graded lexicographic sort key: lower degree first, then x before y."""
    return (sum(alpha), tuple(-a for a in alpha))


def monomials(dim: int, degree: int) -> list[MultiIndex]:
    """All exponent vectors of the given total degree, graded-lex ordered."""
    if dim == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(dim - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomials_upto(dim: int, order: int) -> list[MultiIndex]:
    return [a for d in range(order + 1) for a in monomials(dim, d)]


def multi_factorial(alpha: MultiIndex) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def unit(dim: int, axis: int) -> MultiIndex:
    return tuple(int(i == axis) for i in range(dim))


class JetScalar:
    """Immutable truncated power series ``sum c_alpha z^alpha`` with ``|alpha| <= order``."""

    __slots__ = ("dim", "order", "_coeffs", "_terms")

    def __init__(self, dim: int, order: int, coeffs: Mapping[MultiIndex, object] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        if order < 0:
            raise ValueError("order must be non-negative")
        clean: dict[MultiIndex, Fraction] = {}
        for alpha, c in (coeffs or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim or any(a < 0 for a in alpha):
                raise ValueError(f"multi-index {alpha} does not fit dimension {dim}")
            if sum(alpha) > order:
                raise OrderError(f"multi-index {alpha} has degree above order {order}")
            c = as_rational(c)
            if c:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
        self.dim = dim
        self.order = order
        self._coeffs = {a: c for a, c in clean.items() if c}
        self._terms = None

    @classmethod
    def _make(cls, dim: int, order: int, coeffs: dict[MultiIndex, Fraction]) -> JetScalar:
        # trusted fast path: coeffs already canonical and owned by the new object
        obj = object.__new__(cls)
        obj.dim = dim
        obj.order = order
        obj._coeffs = coeffs
        obj._terms = None
        return obj

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, order: int) -> JetScalar:
        return cls._make(dim, order, {})

    @classmethod
    def constant(cls, value, dim: int, order: int) -> JetScalar:
        c = as_rational(value)
        return cls._make(dim, order, {(0,) * dim: c} if c else {})

    @classmethod
    def variable(cls, axis: int, dim: int, order: int) -> JetScalar:
        if not 0 <= axis < dim:
            raise IndexError(f"axis {axis} out of range for dimension {dim}")
        if order == 0:
            return cls.zero(dim, order)
        return cls._make(dim, order, {unit(dim, axis): Fraction(1)})

    @classmethod
    def variables(cls, dim: int, order: int) -> list[JetScalar]:
        return [cls.variable(i, dim, order) for i in range(dim)]

    # inspection ---------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, alpha: MultiIndex) -> Fraction:
        return self._coeffs.get(tuple(alpha), Fraction(0))

    def terms(self) -> list[tuple[MultiIndex, Fraction]]:
        """Non-zero terms in graded-lex order."""
        return sorted(self._coeffs.items(), key=lambda t: grlex_key(t[0]))

    def _by_degree(self) -> list[tuple[int, MultiIndex, Fraction]]:
        if self._terms is None:
            self._terms = sorted(((sum(a), a, c) for a, c in self._coeffs.items()), key=lambda t: t[0])
        return self._terms

    def constant_term(self) -> Fraction:
        return self._coeffs.get((0,) * self.dim, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> int | None:
        """Lowest degree carrying a non-zero coefficient (None for the zero jet)."""
        return min((sum(a) for a in self._coeffs), default=None)

    def degree(self) -> int | None:
        return max((sum(a) for a in self._coeffs), default=None)

    def homogeneous(self, degree: int) -> JetScalar:
        return JetScalar._make(self.dim, self.order, {a: c for a, c in self._coeffs.items() if sum(a) == degree})

    def __iter__(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._coeffs)

    # order changes ------------------------------------------------------

    def truncate(self, order: int) -> JetScalar:
        if order > self.order:
            raise OrderError(f"cannot truncate an order-{self.order} jet to order {order}")
        if order == self.order:
            return self
        return JetScalar._make(self.dim, order, {a: c for a, c in self._coeffs.items() if sum(a) <= order})

    def with_order(self, order: int) -> JetScalar:
        """Re-tag the jet at another order.

        Raising the order treats the unknown higher terms as zero, so it is
        only sound when those terms cannot reach the degrees that are read
        off afterwards (for instance before multiplying by a factor of
        positive valuation).
        """
        if order <= self.order:
            return self.truncate(order)
        return JetScalar._make(self.dim, order, dict(self._coeffs))

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> JetScalar:
        if isinstance(other, JetScalar):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")
            return other
        return JetScalar.constant(other, self.dim, self.order)

    def __add__(self, other) -> JetScalar:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        order = min(self.order, other.order)
        out = {a: c for a, c in self._coeffs.items() if sum(a) <= order}
        for a, c in other._coeffs.items():
            if sum(a) > order:
                continue
            v = out.get(a, 0) + c
            if v:
                out[a] = v
            else:
                out.pop(a, None)
        return JetScalar._make(self.dim, order, out)

    __radd__ = __add__

    def __neg__(self) -> JetScalar:
        return JetScalar._make(self.dim, self.order, {a: -c for a, c in self._coeffs.items()})

    def __sub__(self, other) -> JetScalar:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> JetScalar:
        return (-self) + other

    def scale(self, factor) -> JetScalar:
        f = as_rational(factor)
        if not f:
            return JetScalar.zero(self.dim, self.order)
        return JetScalar._make(self.dim, self.order, {a: c * f for a, c in self._coeffs.items()})

    def __mul__(self, other) -> JetScalar:
        if not isinstance(other, JetScalar):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")
        order = min(self.order, other.order)
        out: dict[MultiIndex, Fraction] = {}
        rhs = other._by_degree()
        for da, a, ca in self._by_degree():
            room = order - da
            if room < 0:
                break
            for db, b, cb in rhs:
                if db > room:
                    break
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb
        return JetScalar._make(self.dim, order, {a: c for a, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> JetScalar:
        if isinstance(other, JetScalar):
            return self * other.reciprocal()
        return self.scale(1 / as_rational(other))

    def reciprocal(self) -> JetScalar:
        """``1/f`` for a unit jet, by the geometric series in ``f/f(0) - 1``."""
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        e = self.scale(1 / c0) - 1
        term = JetScalar.constant(1, self.dim, self.order)
        total = term
        for _ in range(self.order):
            term = -(term * e)
            if term.is_zero():
                break
            total = total + term
        return total.scale(1 / c0)

    def __pow__(self, k: int) -> JetScalar:
        if k < 0:
            return self.reciprocal() ** (-k)
        out = JetScalar.constant(1, self.dim, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # calculus -----------------------------------------------------------

    def partial(self, axis: int) -> JetScalar:
        """Partial derivative along ``axis``; the order drops by one (floored at 0)."""
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dimension {self.dim}")
        out = {}
        for a, c in self._coeffs.items():
            k = a[axis]
            if k:
                out[a[:axis] + (k - 1,) + a[axis + 1:]] = c * k
        order = max(self.order - 1, 0)
        return JetScalar._make(self.dim, order, {a: c for a, c in out.items() if sum(a) <= order})

    def euler(self) -> JetScalar:
        """Apply the degree operator ``sum z_i d/dz_i`` (scales degree-d terms by d)."""
        return JetScalar._make(self.dim, self.order, {a: c * sum(a) for a, c in self._coeffs.items() if sum(a)})

    def evaluate(self, point: Sequence):
        """Evaluate the polynomial at ``point``; works with any numeric type."""
        if len(point) != self.dim:
            raise DimensionMismatch("point has wrong dimension")
        total = 0
        for a, c in self._coeffs.items():
            term = c
            for x, e in zip(point, a):
                if e:
                    term = term * x**e
            total = total + term
        return total

    # comparison / display -----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, JetScalar):
            return self.dim == other.dim and self.order == other.order and self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == JetScalar.constant(other, self.dim, self.order)._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.dim, self.order, frozenset(self._coeffs.items())))

    def _names(self) -> tuple[str, ...]:
        return _VARNAMES.get(self.dim) or tuple(f"z{i + 1}" for i in range(self.dim))

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        names = self._names()
        parts = []
        for a, c in self.terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, a) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"JetScalar(dim={self.dim}, order={self.order}, {self})"


def series_arith(a: JetScalar, b: JetScalar, op: str) -> JetScalar:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def series_partial(a: JetScalar, axis: int) -> JetScalar:
    return a.partial(axis)


def polynomial(dim: int, order: int, terms: Iterable[tuple[MultiIndex, object]]) -> JetScalar:
    """Build a jet from ``(alpha, c)`` pairs, dropping terms above ``order``."""
    coeffs: dict[MultiIndex, Fraction] = {}
    for alpha, c in terms:
        if sum(alpha) <= order:
            coeffs[tuple(alpha)] = coeffs.get(tuple(alpha), Fraction(0)) + as_rational(c)
    return JetScalar(dim, order, coeffs)


class DiffeoJet:
    """Jet of a local diffeomorphism fixing the origin."""

    __slots__ = ("dim", "order", "components")

    def __init__(self, components: Sequence[JetScalar]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map jet needs at least one component")
        dim, order = comps[0].dim, comps[0].order
        if len(comps) != dim or any(c.dim != dim for c in comps):
            raise DimensionMismatch("a map jet needs one component per variable")
        if any(c.order != order for c in comps):
            raise OrderError("all components of a map jet must share one order")
        if any(c.constant_term() for c in comps):
            raise JetError("map jet does not fix the origin (non-zero constant term)")
        self.dim = dim
        self.order = order
        self.components = comps
        if order >= 1 and linalg.det(self.linear_part()) == 0:
            raise SingularLinearPart("linear part of the map jet is singular")
        if order == 0:
            raise OrderError("a map jet must have order at least 1")

    @classmethod
    def identity(cls, dim: int, order: int) -> DiffeoJet:
        return cls(JetScalar.variables(dim, order))

    @classmethod
    def linear(cls, matrix: Sequence[Sequence], order: int) -> DiffeoJet:
        """Linear map ``z -> A z``; ``matrix[k][i]`` is the coefficient of z_i in component k."""
        n = len(matrix)
        return cls([
            JetScalar(n, order, {unit(n, i): matrix[k][i] for i in range(n)}) for k in range(n)
        ])

    def linear_part(self) -> list[list[Fraction]]:
        return [[c[unit(self.dim, i)] for i in range(self.dim)] for c in self.components]

    def jacobian(self) -> list[list[JetScalar]]:
        """``J[k][i] = d(component k)/dz_i``."""
        return [[c.partial(i) for i in range(self.dim)] for c in self.components]

    def truncate(self, order: int) -> DiffeoJet:
        return DiffeoJet([c.truncate(order) for c in self.components])

    def __getitem__(self, k: int) -> JetScalar:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffeoJet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"DiffeoJet(order={self.order}, [{', '.join(map(str, self.components))}])"


class Substitution:
    """Composition with a fixed map ``z -> comps(z)``, sharing the cached powers ``comps^alpha``.

    ``comps`` must have zero constant terms and order at least ``order``.
    """

    def __init__(self, comps: Sequence[JetScalar], order: int):
        self.comps = [c.truncate(order) for c in comps]
        self.dim = len(self.comps)
        self.order = order
        self._powers: dict[MultiIndex, JetScalar] = {(0,) * self.dim: JetScalar.constant(1, self.dim, order)}

    def power(self, alpha: MultiIndex) -> JetScalar:
        got = self._powers.get(alpha)
        if got is None:
            k = next(i for i, e in enumerate(alpha) if e)
            parent = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
            got = self.power(parent) * self.comps[k]
            self._powers[alpha] = got
        return got

    def __call__(self, f: JetScalar) -> JetScalar:
        order = min(f.order, self.order)
        out: dict[MultiIndex, Fraction] = {}
        for alpha, c in f.terms():
            if sum(alpha) > order:
                break
            for b, v in self.power(alpha)._coeffs.items():
                if order == self.order or sum(b) <= order:
                    out[b] = out.get(b, 0) + c * v
        return JetScalar._make(self.dim, order, {a: c for a, c in out.items() if c})


def _compose(f: JetScalar, comps: Sequence[JetScalar], order: int) -> JetScalar:
    return Substitution(comps, order)(f.truncate(min(f.order, order)).with_order(order))


def substitute(f: JetScalar, tau: DiffeoJet | Sequence[JetScalar]) -> JetScalar:
    """``f o tau`` truncated to ``min(f.order, tau.order)``."""
    comps = tau.components if isinstance(tau, DiffeoJet) else tuple(tau)
    if len(comps) != f.dim or any(c.dim != f.dim for c in comps):
        raise DimensionMismatch("substitution needs one component per variable of f")
    if any(c.constant_term() for c in comps):
        raise JetError("cannot substitute a map with non-vanishing constant term")
    order = min([f.order] + [c.order for c in comps])
    return _compose(f, comps, order)


def compose(sigma: DiffeoJet, tau: DiffeoJet) -> DiffeoJet:
    """The map jet ``sigma o tau`` (apply tau first)."""
    return DiffeoJet([substitute(s, tau) for s in sigma.components])


def map_invert(tau: DiffeoJet) -> DiffeoJet:
    """Compositional inverse, solved one degree at a time.

    With ``tau = A z + N(z)`` and ``N`` of valuation >= 2, the degree-d part of
    the inverse ``psi`` is ``-A^{-1} [N o psi_{<d}]_d``.
    """
    n, r = tau.dim, tau.order
    try:
        a_inv = linalg.inverse(tau.linear_part())
    except ZeroDivisionError:
        raise SingularLinearPart("linear part of the map jet is singular") from None
    nonlinear = [c - c.homogeneous(1) for c in tau.components]
    psi = [JetScalar(n, r, {unit(n, i): a_inv[k][i] for i in range(n) if a_inv[k][i]}) for k in range(n)]
    for d in range(2, r + 1):
        lower = [p.truncate(d - 1).with_order(d) for p in psi]
        image = [_compose(nl.truncate(d), lower, d).homogeneous(d) for nl in nonlinear]
        psi = [
            p - sum((im.scale(a_inv[k][j]) for j, im in enumerate(image)), JetScalar.zero(n, d)).with_order(r)
            for k, p in enumerate(psi)
        ]
    return DiffeoJet(psi)
