"""Seeded random jets for property checks and the ``make --seed`` command."""
from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .jet import DiffeoJet, JetScalar, monomials_upto
from .metric import MetricJet


def random_rational(rng: random.Random, height: int = 5) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_jet(rng: random.Random, dim: int, order: int, *, low: int = 0, density: float = 0.6,
               height: int = 5) -> JetScalar:
    """Random jet with terms of degree ``low..order``."""
    terms = {a: random_rational(rng, height) for a in monomials_upto(dim, order)
             if sum(a) >= low and rng.random() < density}
    return JetScalar(dim, order, terms)


def random_h(rng: random.Random, order: int, density: float = 0.7, height: int = 6) -> JetScalar:
    return random_jet(rng, 2, order, density=density, height=height)


def random_metric(rng: random.Random, dim: int, order: int, density: float = 0.6, height: int = 5) -> MetricJet:
    """Random metric jet with ``g(0) = I``."""
    entries = {}
    for i in range(dim):
        for j in range(i, dim):
            e = random_jet(rng, dim, order, low=1, density=density, height=height)
            entries[(i, j)] = e + 1 if i == j else e
    return MetricJet(entries)


def random_orthogonal(rng: random.Random, dim: int, height: int = 4) -> list[list[Fraction]]:
    """Rational orthogonal matrix from the Cayley transform of a random skew matrix,
    composed with a reflection half of the time."""
    skew = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = random_rational(rng, height)
            skew[i][j], skew[j][i] = v, -v
    ident = linalg.identity(dim)
    minus = [[ident[i][j] - skew[i][j] for j in range(dim)] for i in range(dim)]
    plus = [[ident[i][j] + skew[i][j] for j in range(dim)] for i in range(dim)]
    q = linalg.matmul(minus, linalg.inverse(plus))
    if rng.random() < 0.5:
        q[0] = [-x for x in q[0]]
    return q


def random_diffeo(rng: random.Random, dim: int, order: int, *, orthogonal: bool = True,
                  density: float = 0.5, height: int = 4) -> DiffeoJet:
    """Random map jet fixing the origin; orthogonal linear part keeps ``g(0) = I``."""
    if orthogonal:
        lin = random_orthogonal(rng, dim)
    else:
        while True:
            lin = [[random_rational(rng, height) for _ in range(dim)] for _ in range(dim)]
            if linalg.det(lin):
                break
    comps = []
    for k in range(dim):
        linear = JetScalar(dim, order, {tuple(int(t == i) for t in range(dim)): lin[k][i] for i in range(dim)})
        comps.append(linear + random_jet(rng, dim, order, low=2, density=density, height=height))
    return DiffeoJet(comps)
