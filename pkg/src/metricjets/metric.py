"""Metric jets, pullback, Christoffel symbols and Gaussian curvature."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

from . import linalg
from .errors import DimensionMismatch, FrameError, JetError, OrderError
from .jet import DiffeoJet, JetScalar, Substitution


class MetricJet:
    """Symmetric matrix of :class:`JetScalar` entries (the r-jet of a metric).

    Only entries with ``i <= j`` are stored; indices are 0-based.
    """

    __slots__ = ("dim", "order", "_entries")

    def __init__(self, entries: Mapping[tuple[int, int], JetScalar] | Sequence[Sequence[JetScalar]]):
        if not isinstance(entries, Mapping):
            rows = [list(r) for r in entries]
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise DimensionMismatch("metric matrix must be square")
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise JetError(f"metric entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")
            entries = {(i, j): rows[i][j] for i in range(n) for j in range(i, n)}
        keys = {(min(i, j), max(i, j)) for i, j in entries}
        n = max(j for _, j in keys) + 1 if keys else 0
        store: dict[tuple[int, int], JetScalar] = {}
        for (i, j), v in entries.items():
            key = (min(i, j), max(i, j))
            if key in store and store[key] != v:
                raise JetError(f"metric entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) differ")
            store[key] = v
        missing = [(i, j) for i in range(n) for j in range(i, n) if (i, j) not in store]
        if n == 0 or missing:
            raise DimensionMismatch(f"metric is missing entries {missing}")
        first = next(iter(store.values()))
        if any(v.dim != n for v in store.values()):
            raise DimensionMismatch(f"entries must be jets in {n} variables")
        if any(v.order != first.order for v in store.values()):
            raise OrderError("all metric entries must share one order")
        self.dim = n
        self.order = first.order
        self._entries = store
        if not _is_positive_definite(self.constant_matrix()):
            raise FrameError("g(0) is not positive definite")

    @classmethod
    def flat(cls, dim: int, order: int) -> MetricJet:
        return cls({(i, j): JetScalar.constant(int(i == j), dim, order) for i in range(dim) for j in range(i, dim)})

    def __getitem__(self, ij: tuple[int, int]) -> JetScalar:
        i, j = ij
        return self._entries[(min(i, j), max(i, j))]

    def matrix(self) -> list[list[JetScalar]]:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def items(self):
        return sorted(self._entries.items())

    def constant_matrix(self) -> list[list[Fraction]]:
        return [[self[i, j].constant_term() for j in range(self.dim)] for i in range(self.dim)]

    def has_unit_frame(self) -> bool:
        return self.constant_matrix() == linalg.identity(self.dim)

    def truncate(self, order: int) -> MetricJet:
        return MetricJet({k: v.truncate(order) for k, v in self._entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricJet):
            return NotImplemented
        return self.dim == other.dim and self.order == other.order and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"g{i + 1}{j + 1}={v}" for (i, j), v in self.items())
        return f"MetricJet(dim={self.dim}, order={self.order}, {body})"


def _is_positive_definite(m: list[list[Fraction]]) -> bool:
    n = len(m)
    return all(linalg.det([row[:k] for row in m[:k]]) > 0 for k in range(1, n + 1))


def require_unit_frame(g: MetricJet) -> None:
    if not g.has_unit_frame():
        raise FrameError(
            "g(0) must be the identity matrix; apply a linear change of frame first "
            "(unit_frame succeeds when the LDL^T pivots of g(0) are rational squares)"
        )


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def unit_frame(g: MetricJet) -> tuple[MetricJet, DiffeoJet | None]:
    """Bring ``g(0)`` to the identity by an exact linear change of coordinates.

    Uses ``g(0) = L D L^T``; the frame ``A = L^{-T} D^{-1/2}`` is rational only
    when every pivot of ``D`` is the square of a rational, otherwise
    :class:`FrameError` is raised.  Returns the transformed jet and the linear
    map used (None when ``g(0)`` already is the identity).
    """
    if g.has_unit_frame():
        return g, None
    g0 = g.constant_matrix()
    n = g.dim
    lower = linalg.identity(n)
    pivots = []
    for j in range(n):
        d = g0[j][j] - sum(lower[j][k] ** 2 * pivots[k] for k in range(j))
        pivots.append(d)
        for i in range(j + 1, n):
            lower[i][j] = (g0[i][j] - sum(lower[i][k] * lower[j][k] * pivots[k] for k in range(j))) / d
    roots = [_rational_sqrt(d) for d in pivots]
    if any(r is None for r in roots):
        raise FrameError(
            f"g(0) has LDL^T pivots {[str(d) for d in pivots]} that are not all rational squares; "
            "an exact orthonormal frame does not exist over the rationals"
        )
    lt_inv = linalg.inverse(linalg.transpose(lower))
    frame = [[lt_inv[i][j] / roots[j] for j in range(n)] for i in range(n)]
    tau = DiffeoJet.linear(frame, g.order + 1)
    return pullback(tau, g), tau


def pullback(tau: DiffeoJet, g: MetricJet) -> MetricJet:
    """``(tau^* g)_ij = sum_kl (g_kl o tau) d_i tau_k d_j tau_l`` at the order of ``g``."""
    if tau.dim != g.dim:
        raise DimensionMismatch(f"map dimension {tau.dim} differs from metric dimension {g.dim}")
    if tau.order < g.order + 1:
        raise OrderError(f"pullback of an order-{g.order} metric needs a map jet of order {g.order + 1}")
    n, r = g.dim, g.order
    tau = tau.truncate(r + 1)
    jac = tau.jacobian()
    along = Substitution(tau.components, r)
    moved = {k: along(v) for k, v in g._entries.items()}
    gm = [[moved[(min(k, l), max(k, l))] for l in range(n)] for k in range(n)]
    # half[k][j] = sum_l g_kl(tau) d_j tau_l
    half = [[_dot((gm[k][l] for l in range(n)), (jac[l][j] for l in range(n)), n, r) for j in range(n)] for k in range(n)]
    out = {}
    for i in range(n):
        for j in range(i, n):
            out[(i, j)] = _dot((jac[k][i] for k in range(n)), (half[k][j] for k in range(n)), n, r)
    return MetricJet(out)


def _dot(xs, ys, n: int, order: int) -> JetScalar:
    total = JetScalar.zero(n, order)
    for a, b in zip(xs, ys):
        total = total + a * b
    return total


def inverse_metric(g: MetricJet) -> list[list[JetScalar]]:
    """``g^{-1}`` as the finite Neumann series ``I - E + E^2 - ...`` with ``g = I + E``."""
    require_unit_frame(g)
    n, r = g.dim, g.order
    ident = [[JetScalar.constant(int(i == j), n, r) for j in range(n)] for i in range(n)]
    minus_e = [[ident[i][j] - g[i, j] for j in range(n)] for i in range(n)]
    total = ident
    power = ident
    for _ in range(r):
        power = _matmul(power, minus_e)
        if all(p.is_zero() for row in power for p in row):
            break
        total = [[total[i][j] + power[i][j] for j in range(n)] for i in range(n)]
    return total


def _matmul(a, b):
    n = len(a)
    order = a[0][0].order
    return [[_dot((a[i][k] for k in range(n)), (b[k][j] for k in range(n)), n, order) for j in range(n)] for i in range(n)]


def christoffel(g: MetricJet) -> list[list[list[JetScalar]]]:
    """Second-kind symbols ``gamma[k][i][j]`` of order ``r - 1``.

    ``gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)``.
    """
    ginv = inverse_metric(g)
    n = g.dim
    dg = [[[g[i, j].partial(l) for l in range(n)] for j in range(n)] for i in range(n)]
    # first kind: lower[l][i][j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    lower = [[[None] * n for _ in range(n)] for _ in range(n)]
    for l in range(n):
        for i in range(n):
            for j in range(i, n):
                v = (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]).scale(Fraction(1, 2))
                lower[l][i][j] = lower[l][j][i] = v
    order = dg[0][0][0].order
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                v = _dot((ginv[k][l].truncate(order) for l in range(n)), (lower[l][i][j] for l in range(n)), n, order)
                gamma[k][i][j] = gamma[k][j][i] = v
    return gamma


def gauss_curvature(g: MetricJet) -> JetScalar:
    """Gaussian curvature jet ``K = R_1212 / det g`` (order ``r - 2``), positive on the sphere.

    Uses ``R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}``
    and ``R_1212 = g_1a R^a_212``.
    """
    if g.dim != 2:
        raise DimensionMismatch("Gaussian curvature is only defined here for dimension 2")
    if g.order < 2:
        raise OrderError("curvature needs a metric jet of order at least 2")
    require_unit_frame(g)
    gam = christoffel(g)
    r = g.order - 2
    riem = []
    for a in range(2):
        v = gam[a][1][1].partial(0) - gam[a][0][1].partial(1)
        for e in range(2):
            v = v + gam[a][0][e] * gam[e][1][1] - gam[a][1][e] * gam[e][0][1]
        riem.append(v.truncate(r))
    r1212 = g[0, 0].truncate(r) * riem[0] + g[0, 1].truncate(r) * riem[1]
    det = (g[0, 0] * g[1, 1] - g[0, 1] * g[0, 1]).truncate(r)
    return r1212 * det.reciprocal()


@dataclass(frozen=True)
class CurvatureData:
    """``K(0)``, gradient and Hessian of the curvature at the base point.

    ``grad`` is None below order 3 and ``hess`` below order 4.
    """

    K0: Fraction
    grad: tuple[Fraction, Fraction] | None
    hess: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None


def curvature_data(g: MetricJet, order: int = 4) -> CurvatureData:
    """Read ``K(0)``, ``grad K`` and ``Hess K`` off a normal-form jet.

    In normal coordinates the Christoffel symbols vanish at the origin, so
    the covariant Hessian there equals the matrix of plain second partials.
    ``order`` (2, 3 or 4) states which parts are needed.
    """
    from .normal_form import gauss_check

    if order not in (2, 3, 4):
        raise ValueError("curvature data is read at order 2, 3 or 4")
    if g.dim != 2:
        raise DimensionMismatch("curvature data is only defined for dimension 2")
    if g.order < order:
        raise OrderError(f"curvature data at order {order} needs a metric jet of order >= {order}, got {g.order}")
    require_unit_frame(g)
    if not gauss_check(g):
        raise JetError("curvature data needs a jet in normal coordinates (Gauss-lemma check failed)")
    k = gauss_curvature(g.truncate(order))
    grad = hess = None
    if order >= 3:
        grad = (k[(1, 0)], k[(0, 1)])
    if order >= 4:
        hess = ((2 * k[(2, 0)], k[(1, 1)]), (k[(1, 1)], 2 * k[(0, 2)]))
    return CurvatureData(k.constant_term(), grad, hess)


def rotation_jet(matrix: Sequence[Sequence], order: int) -> DiffeoJet:
    """Linear map jet of an exact orthogonal matrix (checked)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if linalg.matmul(linalg.transpose(m), m) != linalg.identity(len(m)):
        raise JetError("matrix is not orthogonal")
    return DiffeoJet.linear(m, order)


__all__ = [
    "CurvatureData",
    "MetricJet",
    "christoffel",
    "curvature_data",
    "gauss_curvature",
    "inverse_metric",
    "pullback",
    "require_unit_frame",
    "rotation_jet",
    "unit_frame",
]
