"""Automorphism types of 2-dimensional metric jets.

In normal coordinates a 2-d jet is ``dx^2 + dy^2 + h (y dx - x dy)^2`` and
the residual coordinate freedom is ``O(2)`` acting on ``h``.  Writing ``h``
in ``z = x + iy`` and ``zbar``, the rotation ``rho_alpha`` multiplies the
coefficient of ``z^a zbar^b`` by ``alpha^(b - a)`` and the reflection
``z -> beta zbar`` sends ``c_ab`` to ``beta^(b - a) conj(c_ab)``.  Both
stabilizers and orbit equivalence therefore reduce to systems
``beta^e = u`` over unit Gauss rationals, which are decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import comb, gcd
from typing import Literal, Sequence

import mpmath

from .errors import DimensionMismatch, JetError, NonUnitError, OrderError
from .gaussian import GaussRational
from .jet import JetScalar
from .metric import MetricJet, curvature_data, require_unit_frame
from .normal_form import extract_h, metric_from_h, normalize

Exponents = tuple[int, int]


# z / zbar coordinates ----------------------------------------------------------


@dataclass(frozen=True)
class ZBarPoly:
    """``sum c_ab z^a zbar^b`` with ``a + b <= degree``; zero coefficients are dropped."""

    degree: int
    coeffs: dict[Exponents, GaussRational] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: v for k, v in self.coeffs.items() if v})

    def __getitem__(self, ab: Exponents) -> GaussRational:
        return self.coeffs.get(ab, GaussRational(0))

    def support(self) -> set[Exponents]:
        return set(self.coeffs)

    def is_real(self) -> bool:
        """Reality condition ``c_ba = conj(c_ab)``."""
        return all(self[(b, a)] == c.conjugate() for (a, b), c in self.coeffs.items())

    def rotate(self, alpha: GaussRational) -> ZBarPoly:
        """Action of the rotation ``rho_alpha``: ``c_ab -> alpha^(b - a) c_ab``."""
        _require_unit(alpha)
        return ZBarPoly(self.degree, {(a, b): c * alpha ** (b - a) for (a, b), c in self.coeffs.items()})

    def reflect(self, beta: GaussRational) -> ZBarPoly:
        """Action of the reflection ``z -> beta zbar``: ``c_ab -> beta^(b - a) conj(c_ab)``."""
        _require_unit(beta)
        return ZBarPoly(self.degree, {(a, b): c.conjugate() * beta ** (b - a) for (a, b), c in self.coeffs.items()})


def to_zbar(h: JetScalar) -> ZBarPoly:
    """Rewrite a real polynomial in ``x, y`` through ``x = (z + zbar)/2``, ``y = (z - zbar)/(2i)``."""
    if h.dim != 2:
        raise DimensionMismatch("z/zbar coordinates need a function of two variables")
    out: dict[Exponents, GaussRational] = {}
    minus_i = GaussRational(0, -1)
    for (p, q), c in h.coeffs.items():
        scale = GaussRational(c / 2 ** (p + q)) * minus_i**q
        for s in range(p + 1):
            for t in range(q + 1):
                key = (s + t, p - s + q - t)
                term = scale * (comb(p, s) * comb(q, t) * (-1) ** (q - t))
                out[key] = out.get(key, GaussRational(0)) + term
    return ZBarPoly(h.order, out)


def from_zbar(poly: ZBarPoly) -> JetScalar:
    """Inverse of :func:`to_zbar`; raises if the polynomial is not real."""
    acc: dict[tuple[int, int], GaussRational] = {}
    for (a, b), c in poly.coeffs.items():
        # (x + iy)^a (x - iy)^b
        for s in range(a + 1):
            for t in range(b + 1):
                key = (s + t, a - s + b - t)
                coef = c * GaussRational(0, 1) ** (a - s) * GaussRational(0, -1) ** (b - t) * (comb(a, s) * comb(b, t))
                acc[key] = acc.get(key, GaussRational(0)) + coef
    if any(v.im for v in acc.values()):
        raise JetError("z/zbar polynomial violates the reality condition")
    return JetScalar(2, poly.degree, {k: v.re for k, v in acc.items()})


# exact root systems --------------------------------------------------------------


def _require_unit(u: GaussRational) -> None:
    if not u.is_unit():
        raise NonUnitError(f"{u} does not have modulus 1")


def _bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    """``g = gcd(values)`` and multipliers with ``sum l_i v_i = g``."""
    g, coeffs = 0, []
    for v in values:
        # extended Euclid on (g, v)
        old_r, r, old_s, s, old_t, t = g, v, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        coeffs = [c * old_s for c in coeffs] + [old_t]
        g = old_r
    return g, coeffs


@dataclass(frozen=True)
class RootSolution:
    """Outcome of :func:`solve_unit_root_system`.

    When solvable, the witnesses are exactly the ``g``-th roots of ``w``
    (``g = 0`` means the system is empty and every unit works).
    """

    solvable: bool
    g: int
    w: GaussRational

    def witness(self, dps: int = 30) -> complex:
        """Principal ``g``-th root of ``w`` as a high-precision complex number."""
        if not self.solvable:
            raise JetError("unsolvable system has no witness")
        if self.g == 0:
            return mpmath.mpc(1)
        with mpmath.workdps(dps):
            w = mpmath.mpc(mpmath.mpf(self.w.re.numerator) / self.w.re.denominator,
                           mpmath.mpf(self.w.im.numerator) / self.w.im.denominator)
            return mpmath.root(w, self.g)


def solve_unit_root_system(constraints: Sequence[tuple[int, GaussRational]]) -> RootSolution:
    """Decide whether a unit ``beta`` with ``beta^e = u`` for every ``(e, u)`` exists.

    With ``g = gcd(e_i) = sum l_i e_i`` any solution has ``beta^g = w := prod u_i^l_i``;
    conversely every ``g``-th root of ``w`` solves the system iff
    ``w^(e_i / g) = u_i`` for all i.
    """
    for e, u in constraints:
        if int(e) != e or e <= 0:
            raise ValueError(f"exponent {e} must be a positive integer")
        _require_unit(u)
    if not constraints:
        return RootSolution(True, 0, GaussRational(1))
    exps = [int(e) for e, _ in constraints]
    g, lams = _bezout(exps)
    w = reduce(lambda acc, lu: acc * lu[1] ** lu[0], zip(lams, (u for _, u in constraints)), GaussRational(1))
    ok = all(w ** (e // g) == u for e, u in zip(exps, (u for _, u in constraints)))
    return RootSolution(ok, g, w)


def _oriented(e: int, u: GaussRational) -> tuple[int, GaussRational]:
    # beta^e = u with e < 0 is beta^(-e) = conj(u) for units
    return (e, u) if e > 0 else (-e, u.conjugate())


# group types ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class GroupType:
    """Conjugacy class of a closed subgroup of O(2).

    ``kind`` is ``"O2"``, ``"SO2"``, ``"D"`` (dihedral of order 2m) or ``"K"``
    (cyclic of order m).  ``SO2`` exists so that results can be compared
    against it; no jet has that stabilizer and the classifier never returns it.
    """

    kind: Literal["O2", "SO2", "D", "K"]
    m: int = 0

    def __post_init__(self):
        if self.kind in ("O2", "SO2"):
            if self.m:
                raise ValueError(f"{self.kind} carries no order parameter")
        elif self.kind in ("D", "K"):
            if self.m < 1:
                raise ValueError(f"{self.kind}_m needs m >= 1")
        else:
            raise ValueError(f"unknown group type {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> GroupType:
        text = text.strip()
        if text in ("O2", "O(2)"):
            return cls("O2")
        if text in ("SO2", "SO(2)"):
            return cls("SO2")
        kind, _, m = text.partition("_")
        return cls(kind, int(m))

    def __str__(self) -> str:
        if self.kind in ("O2", "SO2"):
            return f"{self.kind[:-1]}(2)"
        return f"{self.kind}_{self.m}"


O2 = GroupType("O2")
SO2 = GroupType("SO2")


def rotation_subgroup(h: JetScalar) -> int | None:
    """Order m of the rotations fixing ``h`` (``K_m``), or None when all of SO(2) does."""
    diffs = [abs(a - b) for (a, b) in to_zbar(h).support() if a != b]
    return reduce(gcd, diffs) if diffs else None


def reflection_system(h: JetScalar) -> RootSolution:
    """Solve for the reflections ``z -> beta zbar`` that fix ``h``."""
    z = to_zbar(h)
    cons = {
        _oriented(b - a, c / c.conjugate())
        for (a, b), c in z.coeffs.items()
        if a < b
    }
    return solve_unit_root_system(sorted(cons, key=lambda t: (t[0], t[1].re, t[1].im)))


def stabilizer(h: JetScalar) -> GroupType:
    """Type of the O(2)-stabilizer of the jet ``h`` (decided exactly)."""
    m = rotation_subgroup(h)
    if m is None:
        # SO(2)-invariant series are functions of x^2 + y^2, hence O(2)-invariant
        return O2
    return GroupType("D", m) if reflection_system(h).solvable else GroupType("K", m)


def h_jet(g: MetricJet) -> JetScalar:
    """Order ``r - 2`` jet of ``h`` for the normal form of a 2-d jet with ``g(0) = I``."""
    if g.dim != 2:
        raise DimensionMismatch("classification is only available in dimension 2")
    require_unit_frame(g)
    if g.order < 2:
        return JetScalar.zero(2, 0)
    return extract_h(normalize(g))


def type_of_jet(g: MetricJet) -> GroupType:
    if g.dim != 2:
        raise DimensionMismatch("classification is only available in dimension 2")
    require_unit_frame(g)
    if g.order < 2:
        return O2
    return stabilizer(h_jet(g))


# orbit equivalence ----------------------------------------------------------------


@dataclass(frozen=True)
class Equivalence:
    """Result of :func:`orbit_equivalent`.

    For ``kind == "rotation"`` the witnesses are the rotations ``rho_alpha``
    with ``alpha^g = w`` mapping the first ``h`` to the second; for
    ``"reflection"`` the maps ``z -> beta zbar`` with ``beta^g = w``.
    """

    equivalent: bool
    kind: Literal["rotation", "reflection"] | None = None
    solution: RootSolution | None = None

    def describe(self) -> str:
        if not self.equivalent:
            return "not equivalent"
        sym = "alpha" if self.kind == "rotation" else "beta"
        g = self.solution.g
        if g == 0:
            return f"equivalent; {self.kind} witness {sym} arbitrary (identity works)"
        lhs = sym if g == 1 else f"{sym}^{g}"
        return f"equivalent; {self.kind} witness {lhs} = {self.solution.w}"


def _match(src: ZBarPoly, dst: ZBarPoly) -> RootSolution | None:
    if src.support() != dst.support():
        return None
    cons = set()
    for (a, b), c in src.coeffs.items():
        d = dst[(a, b)]
        if a == b:
            if c != d:
                return None
            continue
        if c.norm2() != d.norm2():
            return None
        if a < b:
            cons.add(_oriented(b - a, d / c))
    sol = solve_unit_root_system(sorted(cons, key=lambda t: (t[0], t[1].re, t[1].im)))
    return sol if sol.solvable else None


def h_equivalent(h1: JetScalar, h2: JetScalar) -> Equivalence:
    """Decide whether some element of O(2) carries ``h1`` to ``h2``."""
    if h1.order != h2.order:
        raise OrderError("h jets of different orders cannot be compared")
    z1, z2 = to_zbar(h1), to_zbar(h2)
    sol = _match(z1, z2)
    if sol is not None:
        return Equivalence(True, "rotation", sol)
    mirrored = ZBarPoly(z1.degree, {k: c.conjugate() for k, c in z1.coeffs.items()})
    sol = _match(mirrored, z2)
    if sol is not None:
        return Equivalence(True, "reflection", sol)
    return Equivalence(False)


def orbit_equivalent(g1: MetricJet, g2: MetricJet) -> Equivalence:
    """Decide whether two 2-d metric jets differ by a diffeomorphism jet fixing the origin."""
    if g1.dim != 2 or g2.dim != 2:
        raise DimensionMismatch("orbit equivalence is only decided in dimension 2")
    if g1.order != g2.order:
        raise OrderError(f"jets of orders {g1.order} and {g2.order} cannot be compared")
    return h_equivalent(h_jet(g1), h_jet(g2))


# invariants for r <= 4 --------------------------------------------------------------


@dataclass(frozen=True)
class InvariantVector:
    order: int
    values: tuple[Fraction, ...]

    def __iter__(self):
        return iter(self.values)


def invariants(g: MetricJet, r: int) -> InvariantVector:
    """Curvature invariants classifying ``r``-jets, ``r`` in {2, 3, 4}.

    ``p1 = K``, ``p2 = |grad K|^2``, ``p3 = tr Hess K``, ``p4 = det Hess K``,
    ``p5 = Hess K(grad K, grad K)``, all at the base point.
    """
    if r not in (2, 3, 4):
        raise ValueError("invariants are available for r = 2, 3, 4")
    if g.dim != 2:
        raise DimensionMismatch("invariants are only defined in dimension 2")
    if g.order < r:
        raise OrderError(f"order-{r} invariants need a jet of order >= {r}, got {g.order}")
    require_unit_frame(g)
    data = curvature_data(normalize(g.truncate(r)), order=r)
    if r == 2:
        return InvariantVector(2, (data.K0,))
    gx, gy = data.grad
    p2 = gx * gx + gy * gy
    if r == 3:
        return InvariantVector(3, (data.K0, p2))
    (a, b), (_, c) = data.hess
    p5 = a * gx * gx + 2 * b * gx * gy + c * gy * gy
    return InvariantVector(4, (data.K0, p2, a + c, a * c - b * b, p5))


def y_membership(v: InvariantVector | Sequence) -> bool:
    """Exact check of the inequalities cutting out the image of the order-4 invariants."""
    if isinstance(v, InvariantVector):
        if v.order != 4:
            raise ValueError("membership is defined for order-4 invariant vectors")
        values = v.values
    else:
        values = tuple(v)
    if len(values) != 5:
        raise ValueError("membership needs five values")
    _, p2, p3, p4, p5 = (Fraction(x) for x in values)
    disc = p3 * p3 - 4 * p4
    return p2 >= 0 and disc >= 0 and (2 * p5 - p2 * p3) ** 2 <= p2 * p2 * disc


def eigen_type_r4(g: MetricJet) -> GroupType:
    """Order-4 type read from how ``grad K`` sits relative to the eigenvectors of ``Hess K``."""
    data = curvature_data(normalize(g.truncate(4)), order=4)
    gx, gy = data.grad
    (a, b), (_, c) = data.hess
    if gx or gy:
        hx, hy = a * gx + b * gy, b * gx + c * gy
        return GroupType("D", 1) if gx * hy - gy * hx == 0 else GroupType("K", 1)
    return O2 if (b == 0 and a == c) else GroupType("D", 2)


# strata census and presets -------------------------------------------------------


def census(r: int) -> list[GroupType]:
    """Types of the strata of the moduli space of 2-d ``r``-jets."""
    if r < 0:
        raise ValueError("order must be non-negative")
    out = [O2]
    out += [GroupType("D", m) for m in range(1, r - 1)]
    if r == 4:
        out.append(GroupType("K", 1))
    out += [GroupType("K", m) for m in range(1, r - 3)]
    return out


def p_poly(m: int, order: int) -> JetScalar:
    """``Re((x + iy)^m)``."""
    return JetScalar(2, order, {(m - k, k): comb(m, k) * (-1) ** (k // 2) for k in range(0, m + 1, 2)})


def q_poly(m: int, order: int) -> JetScalar:
    """``Im((x + iy)^m)``."""
    return JetScalar(2, order, {(m - k, k): comb(m, k) * (-1) ** (k // 2) for k in range(1, m + 1, 2)})


PRESETS = ("zero", "pm", "qm", "pm_plus_r2qm", "x_plus_xy")
PRESET_ALIASES = {"pmq": "pm_plus_r2qm", "xxy": "x_plus_xy"}


def preset_polynomial(kind: str, m: int, r: int) -> JetScalar:
    """The ``h`` of a named preset as a jet of order ``r - 2``."""
    kind = PRESET_ALIASES.get(kind, kind)
    if kind not in PRESETS:
        raise ValueError(f"unknown preset {kind!r}; choose from {', '.join(PRESETS)}")
    minimum = {"zero": 2, "pm": m + 2, "qm": m + 2, "pm_plus_r2qm": m + 4, "x_plus_xy": 4}[kind]
    if kind in ("pm", "qm", "pm_plus_r2qm") and m < 1:
        raise ValueError(f"preset {kind} needs m >= 1")
    if r < minimum:
        raise OrderError(f"preset {kind} with m={m} needs order r >= {minimum}, got {r}")
    order = r - 2
    if kind == "zero":
        return JetScalar.zero(2, order)
    if kind == "pm":
        return p_poly(m, order)
    if kind == "qm":
        return q_poly(m, order)
    if kind == "x_plus_xy":
        return JetScalar(2, order, {(1, 0): 1, (1, 1): 1})
    x, y = JetScalar.variables(2, order)
    return p_poly(m, order) + (x * x + y * y) * q_poly(m, order)


def preset_h(kind: str, m: int, r: int) -> MetricJet:
    """Normal-form metric jet ``metric_from_h`` of a named preset polynomial."""
    kind = PRESET_ALIASES.get(kind, kind)
    if kind == "zero" and r < 2:
        return MetricJet.flat(2, r)
    return metric_from_h(preset_polynomial(kind, m, r), r)
