"""Atom weights on a finite node set.

For distinct nodes x_1..x_n the weights

    A(x_i) = 1 / prod_{j != i} (x_i - x_j)

have vanishing power moments of order 0..n-2 and unit moment of order n-1.
Rational nodes give exact rational weights; float and complex nodes are
handled in floating point with a log-magnitude fallback for products that
would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ._numeric import as_exact
from .errors import DegenerateNodes

SEPARATION_RTOL = 1e-8
_PRODUCT_RANGE = (1e-300, 1e300)


def separation_tolerance(nodes):
    return SEPARATION_RTOL * (1 + max((abs(x) for x in nodes), default=0.0))


def check_distinct(nodes, error=DegenerateNodes):
    """Raise ``error(i, j, xi, xj)`` for the closest pair closer than the tolerance."""
    tol = separation_tolerance(nodes)
    worst = None
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            gap = abs(nodes[i] - nodes[j])
            if gap < tol and (worst is None or gap < worst[0]):
                worst = (gap, i, j)
    if worst is not None:
        _, i, j = worst
        raise error(i, j, nodes[i], nodes[j])


@dataclass(frozen=True)
class NodeSet:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(as_exact(x) for x in self.nodes)
        if not nodes:
            raise ValueError("a node set needs at least one node")
        check_distinct(nodes)
        object.__setattr__(self, "nodes", nodes)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    @property
    def is_exact(self):
        return all(isinstance(x, Rational) for x in self.nodes)


@dataclass(frozen=True)
class AtomWeights:
    weights: tuple

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]


def _as_nodeset(x):
    return x if isinstance(x, NodeSet) else NodeSet(tuple(x))


def _weight_float(nodes, i):
    xi = nodes[i]
    prod = 1.0
    lo, hi = _PRODUCT_RANGE
    for j, xj in enumerate(nodes):
        if j == i:
            continue
        prod *= xi - xj
        if not lo <= abs(prod) <= hi:
            return _weight_log(nodes, i)
    return 1.0 / prod


def _weight_log(nodes, i):
    xi = nodes[i]
    log_mag = 0.0
    phase = 1.0 + 0j
    for j, xj in enumerate(nodes):
        if j == i:
            continue
        d = complex(xi - xj)
        log_mag += math.log(abs(d))
        phase *= d / abs(d)
    w = math.exp(-log_mag) / phase
    if all(not isinstance(x, complex) for x in nodes):
        return w.real
    return w


def compute_atoms(x) -> AtomWeights:
    """Atom weights ``1 / prod_{j != i}(x_i - x_j)`` aligned with the node order."""
    ns = _as_nodeset(x)
    nodes = ns.nodes
    if ns.is_exact:
        weights = []
        for i, xi in enumerate(nodes):
            prod = Fraction(1)
            for j, xj in enumerate(nodes):
                if j != i:
                    prod *= xi - xj
            weights.append(1 / prod)
        return AtomWeights(tuple(weights))
    nodes = tuple(float(v) if isinstance(v, Rational) else v for v in nodes)
    return AtomWeights(tuple(_weight_float(nodes, i) for i in range(len(nodes))))


def moment(a, x, s: int):
    """``sum_i x_i**s * A(x_i)``."""
    if s < 0:
        raise ValueError("moment order must be non-negative")
    nodes = _as_nodeset(x).nodes
    if len(a) != len(nodes):
        raise ValueError("weights and nodes are not aligned")
    return sum(xi**s * w for xi, w in zip(nodes, a))


def moment_scale(a, x, s: int):
    """Largest summand magnitude of :func:`moment`, used for relative cancellation checks."""
    nodes = _as_nodeset(x).nodes
    return max(abs(xi**s * w) for xi, w in zip(nodes, a))


def _polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def lagrange_leading_coefficients(x):
    """Coefficient of x**(n-1) in each Lagrange basis polynomial, by explicit expansion.

    Independent of :func:`compute_atoms`: each basis polynomial is multiplied
    out factor by factor, ascending coefficients, before reading off the top one.
    """
    ns = _as_nodeset(x)
    nodes = ns.nodes
    if not ns.is_exact:
        nodes = tuple(float(v) if isinstance(v, Rational) else v for v in nodes)
    out = []
    for i, xi in enumerate(nodes):
        poly = [Fraction(1) if ns.is_exact else 1.0]
        for j, xj in enumerate(nodes):
            if j != i:
                d = xi - xj
                poly = _polymul(poly, [-xj / d, 1 / d])
        out.append(poly[-1])
    return tuple(out)


__all__ = [
    "NodeSet",
    "AtomWeights",
    "compute_atoms",
    "moment",
    "moment_scale",
    "lagrange_leading_coefficients",
    "check_distinct",
    "separation_tolerance",
]
