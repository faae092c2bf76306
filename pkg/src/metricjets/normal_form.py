"""Normal coordinates for metric jets.

The normal form of a jet is its pullback by the formal exponential map.  In
those coordinates the metric satisfies the Gauss-lemma identities
``sum_j g_ij z_j = z_i`` and its Taylor coefficients are the normal tensors.
In dimension 2 the normal form is ``dx^2 + dy^2 + h (y dx - x dy)^2`` and the
jet of ``h`` carries everything that is left.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .errors import DimensionMismatch, JetError, NotNormalForm, OrderError
from .jet import (
    DiffeoJet,
    JetScalar,
    MultiIndex,
    Substitution,
    multi_factorial,
)
from .linalg import sparse_rank
from .metric import MetricJet, christoffel, pullback, require_unit_frame


# exponential map and normalization -------------------------------------------


def exp_map_jet(g: MetricJet) -> DiffeoJet:
    """Order ``r + 1`` jet of ``v -> exp_g(v)`` for an order-``r`` metric jet.

    Writing ``E = sum_k E_k`` in homogeneous parts, the geodesic equation for
    ``t -> E(t v)`` becomes ``k (k - 1) E_k = -[Gamma(E)(DE, DE)]_k`` with
    ``D`` the degree operator; the right side only involves ``E_j`` for
    ``j < k``.
    """
    require_unit_frame(g)
    n, r = g.dim, g.order
    top = r + 1
    exp = JetScalar.variables(n, top)
    if r == 0:
        return DiffeoJet(exp)
    gamma = christoffel(g)
    for k in range(2, top + 1):
        known = [e.truncate(k - 1).with_order(k) for e in exp]
        speed = [e.euler() for e in known]
        along = Substitution(known, k)
        for a in range(n):
            acc = JetScalar.zero(n, k)
            for i in range(n):
                for j in range(i, n):
                    coeff = gamma[a][i][j].truncate(k - 2)
                    if coeff.is_zero():
                        continue
                    term = along(coeff.with_order(k)) * speed[i] * speed[j]
                    acc = acc + (term if i == j else term.scale(2))
            step = acc.homogeneous(k)
            if not step.is_zero():
                exp[a] = exp[a] + step.scale(Fraction(-1, k * (k - 1))).with_order(top)
    return DiffeoJet(exp)


def normalize(g: MetricJet) -> MetricJet:
    """Pull ``g`` back by its exponential map; the result satisfies the Gauss lemma."""
    require_unit_frame(g)
    if g.order == 0:
        return g
    return pullback(exp_map_jet(g), g)


def gauss_check(g: MetricJet) -> bool:
    """True iff ``sum_j g_ij z_j = z_i`` holds up to order ``r + 1`` for every i."""
    require_unit_frame(g)
    n, top = g.dim, g.order + 1
    z = JetScalar.variables(n, top)
    for i in range(n):
        lhs = JetScalar.zero(n, top)
        for j in range(n):
            lhs = lhs + g[i, j].with_order(top) * z[j]
        if lhs != z[i]:
            return False
    return True


# normal tensors ---------------------------------------------------------------


def _canonical(i: int, j: int, ks: Sequence[int]) -> tuple[int, int, tuple[int, ...]]:
    return (min(i, j), max(i, j), tuple(sorted(ks)))


def _exponents(ks: Sequence[int], dim: int) -> MultiIndex:
    alpha = [0] * dim
    for k in ks:
        alpha[k] += 1
    return tuple(alpha)


def _indices(alpha: MultiIndex) -> tuple[int, ...]:
    return tuple(k for k, e in enumerate(alpha) for _ in range(e))


@dataclass(frozen=True)
class NormalTensor:
    """Covariant tensor ``T_{i j k_1 ... k_s}`` stored with ``i <= j`` and sorted ``k``.

    ``components`` maps ``(i, j, (k_1, ..., k_s))`` to the (non-zero) value.
    """

    dim: int
    order: int
    components: Mapping[tuple[int, int, tuple[int, ...]], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j, ks), v in self.components.items():
            if len(ks) != self.order:
                raise ValueError(f"index tuple {ks} has the wrong length for order {self.order}")
            key = _canonical(i, j, ks)
            if key in clean and clean[key] != v:
                raise JetError(f"conflicting values for symmetric components {key}")
            if v:
                clean[key] = Fraction(v)
        object.__setattr__(self, "components", clean)

    def __getitem__(self, idx: Sequence[int]) -> Fraction:
        i, j, *ks = idx
        return self.components.get(_canonical(i, j, ks), Fraction(0))

    def is_zero(self) -> bool:
        return not self.components

    def cyclic_sum(self, i: int, rest: Sequence[int]) -> Fraction:
        """Cyclic sum of ``T_{i m_0 m_1 ... m_s}`` over the last ``s + 1`` slots."""
        rest = list(rest)
        total = Fraction(0)
        for p in range(len(rest)):
            total += self[(i, rest[p], *rest[:p], *rest[p + 1:])]
        return total

    def satisfies_identities(self) -> bool:
        """Pair symmetry is structural; checks the cyclic identity on every index set."""
        if self.order == 0:
            return True
        for i in range(self.dim):
            for rest in itertools.combinations_with_replacement(range(self.dim), self.order + 1):
                if self.cyclic_sum(i, rest):
                    return False
        return True


def normal_tensors(gN: MetricJet) -> list[NormalTensor]:
    """Normal tensors of orders ``2..r`` of a jet already in normal coordinates.

    Components are the actual partial derivatives at the origin, i.e. the jet
    coefficient of ``z^alpha`` multiplied by ``alpha!``.
    """
    if not gauss_check(gN):
        raise NotNormalForm("normal tensors need a jet in normal coordinates")
    n = gN.dim
    out = []
    for s in range(1, gN.order + 1):
        comps = {}
        for (i, j), entry in gN.items():
            for alpha, c in entry.coeffs.items():
                if sum(alpha) == s:
                    comps[(i, j, _indices(alpha))] = c * multi_factorial(alpha)
        tensor = NormalTensor(n, s, comps)
        if s == 1:
            if not tensor.is_zero():
                raise NotNormalForm("first normal tensor does not vanish")
            continue
        out.append(tensor)
    return out


def metric_from_tensors(tensors: Sequence[NormalTensor], dim: int, order: int) -> MetricJet:
    """Rebuild ``g_ij = delta_ij + sum_s sum_alpha T_{ij alpha} z^alpha / alpha!``."""
    coeffs: dict[tuple[int, int], dict[MultiIndex, Fraction]] = {
        (i, j): ({(0,) * dim: Fraction(1)} if i == j else {}) for i in range(dim) for j in range(i, dim)
    }
    for t in tensors:
        if t.dim != dim:
            raise DimensionMismatch("tensor dimension differs from the requested metric dimension")
        if t.order > order:
            continue
        for (i, j, ks), v in t.components.items():
            alpha = _exponents(ks, dim)
            coeffs[(i, j)][alpha] = v / multi_factorial(alpha)
    return MetricJet({k: JetScalar(dim, order, c) for k, c in coeffs.items()})


# the dimension-2 h representation -----------------------------------------------


def metric_from_h(h: JetScalar, order: int) -> MetricJet:
    """``g = dx^2 + dy^2 + h (y dx - x dy)^2`` as an order-``order`` jet.

    ``h`` must be known to order ``order - 2``.
    """
    if h.dim != 2:
        raise DimensionMismatch("h must be a function of two variables")
    if order < 2:
        return MetricJet.flat(2, order)
    if h.order < order - 2:
        raise OrderError(f"an order-{order} metric needs h to order {order - 2}, got {h.order}")
    hh = h.truncate(order - 2).with_order(order)
    x, y = JetScalar.variables(2, order)
    one = JetScalar.constant(1, 2, order)
    return MetricJet({
        (0, 0): one + hh * y * y,
        (0, 1): -(hh * x * y),
        (1, 1): one + hh * x * x,
    })


def extract_h(gN: MetricJet) -> JetScalar:
    """Recover the order ``r - 2`` jet of ``h`` from a 2-d jet in normal form."""
    if gN.dim != 2:
        raise DimensionMismatch("the h representation exists only in dimension 2")
    if gN.order < 2:
        raise OrderError("h is only defined for metric jets of order >= 2")
    r = gN.order
    g22 = gN[1, 1]
    h = JetScalar(2, r - 2, {(p - 2, q): c for (p, q), c in g22.coeffs.items() if p >= 2})
    if metric_from_h(h, r) != gN:
        raise NotNormalForm("metric jet is not of the form dx^2 + dy^2 + h (y dx - x dy)^2")
    return h


# dimension counts ---------------------------------------------------------------


def dim_normal(n: int, s: int) -> int:
    """Closed form for the dimension of the space of order-``s`` normal tensors."""
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    return comb(n + 1, 2) * comb(n + s - 1, s) - n * comb(n + s, s + 1)


class _Classes:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while x != root:
            nxt = self.parent.get(x, x)
            self.parent[x] = root
            x = nxt
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def dim_normal_bruteforce(n: int, s: int) -> int:
    """Kernel dimension of the symmetry and cyclic-sum equations on all ``(s+2)``-index arrays.

    The symmetry equations ``T_a = T_b`` are eliminated by merging unknowns;
    the cyclic equations are then ranked by exact rational elimination.
    """
    if n < 1 or s < 1:
        raise ValueError("need n >= 1 and s >= 1")
    idx = list(itertools.product(range(n), repeat=s + 2))
    classes = _Classes()
    for t in idx:
        classes.union(t, (t[1], t[0]) + t[2:])
        for p in range(2, s + 1):
            swapped = list(t)
            swapped[p], swapped[p + 1] = swapped[p + 1], swapped[p]
            classes.union(t, tuple(swapped))
    reps = sorted({classes.find(t) for t in idx})
    column = {r: c for c, r in enumerate(reps)}
    rows = set()
    for t in idx:
        tail = t[1:]
        row: dict[int, Fraction] = {}
        for p in range(s + 1):
            rot = tail[p:] + tail[:p]
            c = column[classes.find((t[0],) + rot)]
            row[c] = row.get(c, 0) + 1
        rows.add(tuple(sorted((c, v) for c, v in row.items() if v)))
    rank = sparse_rank([dict(r) for r in rows if r])
    return len(reps) - rank


def dim_moduli(n: int, r: int) -> int:
    """Dimension of the moduli space of r-jets of Riemannian metrics in dimension n."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if r <= 1 or n == 1:
        return 0
    if n == 2:
        return 1 if r == 2 else (r + 1) * (r - 2) // 2
    value = n + Fraction((r - 1) * n * n - (r + 1) * n, 2 * (r + 1)) * comb(n + r, r)
    assert value.denominator == 1
    return int(value)


__all__ = [
    "NormalTensor",
    "dim_moduli",
    "dim_normal",
    "dim_normal_bruteforce",
    "exp_map_jet",
    "extract_h",
    "gauss_check",
    "metric_from_h",
    "metric_from_tensors",
    "normal_tensors",
    "normalize",
]
