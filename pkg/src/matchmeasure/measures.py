"""Root measures of the matching and independence polynomials and their statistics.

The matching measure puts mass ``multiplicity / v`` on each root of
``mu(G, x) = sum_k (-1)^k m_k x^(v - 2k)``; the independence measure does the
same for the roots of ``I(G, x) = sum_k i_k x^k`` (total mass alpha / v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
import sympy

from ._errors import NonRealRootError, ResourceCapError, RootSolverError
from .counting import CoefficientVector, independence_coefficients, matching_coefficients
from .graph import Graph

__all__ = [
    "AtomicMeasure",
    "MomentSequence",
    "MeasureStats",
    "MAX_MOMENT_ORDER",
    "MAX_WALK_ORDER",
    "polynomial_roots",
    "matching_measure",
    "independence_measure",
    "heilmann_lieb_check",
    "dobrushin_beta",
    "dobrushin_bound_check",
    "tail_mass",
    "tail_bound_check",
    "stats_from_measure",
    "pm_entropy_from_measure",
    "moments_from_coefficients",
    "tree_like_walk_moments",
    "quadrature_from_moments",
]

MAX_MOMENT_ORDER = 64
MAX_WALK_ORDER = 16
REAL_TOL = 1e-8
RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many atoms ``(location, weight)`` sorted by location."""

    atoms: tuple
    total_mass: Fraction = field(default=None)

    def __post_init__(self):
        atoms = tuple(sorted(((float(x), w) for x, w in self.atoms), key=lambda a: a[0]))
        if any(w <= 0 for _, w in atoms):
            raise ValueError("atom weights must be positive")
        object.__setattr__(self, "atoms", atoms)
        if self.total_mass is None:
            object.__setattr__(self, "total_mass", sum((w for _, w in atoms), Fraction(0)))

    @property
    def locations(self) -> np.ndarray:
        return np.array([x for x, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([float(w) for _, w in self.atoms])

    def integrate(self, func) -> float:
        return float(sum(float(w) * func(x) for x, w in self.atoms))

    def mass_at(self, x: float) -> Fraction:
        return sum((w for y, w in self.atoms if y == x), Fraction(0))

    def to_json(self) -> dict:
        def fmt(w):
            return str(w) if isinstance(w, Fraction) else float(w)

        return {"atoms": [{"x": x, "w": fmt(w)} for x, w in self.atoms], "mass": fmt(self.total_mass)}


@dataclass(frozen=True)
class MomentSequence:
    """Power sums ``p_k`` of the matching-polynomial roots, k = 0..K.

    ``values`` holds ``p_k / v`` as exact fractions, ``power_sums`` the raw integers.
    """

    values: tuple
    power_sums: tuple
    num_vertices: int
    normalized: bool = True

    @property
    def order(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class MeasureStats:
    entropy: float
    expectation: float
    variance: float
    ratio: Fraction


# root finding --------------------------------------------------------------------


def _polish(coeffs_desc: Sequence[int], z0: complex, steps: int = 60):
    f = [mpmath.mpf(int(c)) for c in coeffs_desc]
    df = [c * (len(f) - 1 - i) for i, c in enumerate(f[:-1])]
    z = mpmath.mpc(z0) if isinstance(z0, complex) and z0.imag else mpmath.mpf(float(np.real(z0)))
    for _ in range(steps):
        fz = mpmath.polyval(f, z)
        dz = mpmath.polyval(df, z)
        if dz == 0:
            break
        step = fz / dz
        z -= step
        if abs(step) <= mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)) * (1 + abs(z)):
            break
    return z, abs(mpmath.polyval(f, z))


def polynomial_roots(coeffs_desc: Sequence[int], real: bool = True) -> list:
    """Roots of an integer polynomial with multiplicities, ``[(root, mult), ...]``.

    Square-free factors come from an exact decomposition; each factor is
    solved by companion-matrix eigenvalues and Newton-polished at 40 digits.
    With ``real=True`` a non-real root raises :class:`NonRealRootError`.
    """
    coeffs = [int(c) for c in coeffs_desc]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return []
    y = sympy.Symbol("y")
    _, factors = sympy.Poly(coeffs, y, domain="ZZ").sqf_list()
    out = []
    with mpmath.workdps(40):
        for factor, mult in factors:
            fc = [int(c) for c in factor.all_coeffs()]
            if len(fc) <= 1:
                continue
            norm = max(abs(c) for c in fc)
            approx = np.roots(np.array(fc, dtype=float))
            found = []
            for z in approx:
                if real:
                    if abs(z.imag) > REAL_TOL * (1 + abs(z)):
                        raise NonRealRootError(f"non-real root {z} of a polynomial expected to be real-rooted")
                    r, res = _polish(fc, complex(z.real, 0.0))
                    r = float(r)
                else:
                    r, res = _polish(fc, complex(z))
                    r = complex(r)
                if res > RESIDUAL_TOL * norm * max(1.0, abs(r)) ** (len(fc) - 1):
                    raise RootSolverError(f"root {r} not certified (residual {float(res):.3g})")
                found.append(r)
            found.sort(key=lambda t: (np.real(t), np.imag(t)))
            for a, b in zip(found, found[1:]):
                if abs(a - b) <= 1e-10 * (1 + abs(a)):
                    raise RootSolverError("root separation failed for a square-free factor")
            out.extend((r, mult) for r in found)
    return out


# measures ------------------------------------------------------------------------


def matching_measure(g: Graph) -> AtomicMeasure:
    """Uniform distribution on the roots of the matching polynomial."""
    v = g.num_vertices
    if v == 0:
        raise ValueError("matching measure of the empty graph is undefined")
    m = matching_coefficients(g).coeffs
    nu = len(m) - 1
    atoms = []
    if nu:
        # mu(G, x) = x^(v - 2 nu) q(x^2), q(y) = sum_k (-1)^k m_k y^(nu - k)
        q = [(-1) ** k * c for k, c in enumerate(m)]
        for y, mult in polynomial_roots(q, real=True):
            if y <= 0:
                raise NonRealRootError(f"q has non-positive root {y}")
            s = math.sqrt(y)
            atoms.append((s, Fraction(mult, v)))
            atoms.append((-s, Fraction(mult, v)))
    if v > 2 * nu:
        atoms.append((0.0, Fraction(v - 2 * nu, v)))
    return AtomicMeasure(tuple(atoms))


def independence_measure(g: Graph) -> AtomicMeasure:
    """Atoms of weight ``multiplicity / v`` at the (real) roots of I(G, x).

    Graphs whose independence polynomial has non-real roots are rejected
    with :class:`NonRealRootError`; claw-free graphs never are.
    """
    v = g.num_vertices
    if v == 0:
        raise ValueError("independence measure of the empty graph is undefined")
    c = independence_coefficients(g).coeffs
    roots = polynomial_roots(list(reversed(c)), real=True)
    return AtomicMeasure(tuple((x, Fraction(mult, v)) for x, mult in roots))


def heilmann_lieb_check(g: Graph, tol: float = 1e-9) -> bool:
    """All matching roots lie in [-2 sqrt(d - 1), 2 sqrt(d - 1)], d = max(max degree, 2)."""
    d = max(g.max_degree, 2)
    bound = 2 * math.sqrt(d - 1)
    try:
        measure = matching_measure(g)
    except NonRealRootError:
        return False
    return all(abs(x) <= bound + tol for x, _ in measure.atoms)


def dobrushin_beta(d: int) -> float:
    return math.exp(-1) / (d + 1)


def _independence_root_moduli(g: Graph) -> list:
    c = independence_coefficients(g).coeffs
    return [(abs(z), mult) for z, mult in polynomial_roots(list(reversed(c)), real=False)]


def dobrushin_bound_check(g: Graph) -> bool:
    """Every root of I(G, x) has modulus greater than exp(-1) / (d + 1)."""
    beta = dobrushin_beta(g.max_degree)
    return all(r > beta for r, _ in _independence_root_moduli(g))


def tail_mass(g: Graph, radius: float) -> Fraction:
    """sigma_G(|x| >= R), counting complex roots by modulus."""
    v = g.num_vertices
    return sum((Fraction(m, v) for r, m in _independence_root_moduli(g) if r >= radius), Fraction(0))


def tail_bound_check(g: Graph, radius: float) -> bool:
    if radius <= 1:
        raise ValueError("R must exceed 1")
    beta = dobrushin_beta(g.max_degree)
    return float(tail_mass(g, radius)) <= math.log(1 / beta) / math.log(radius)


# statistics from atoms -------------------------------------------------------------


def stats_from_measure(m: AtomicMeasure, kind: str) -> MeasureStats:
    """Entropy, expectation, variance and ratio per vertex read off the atoms."""
    if kind == "matching":
        return MeasureStats(
            entropy=0.5 * m.integrate(lambda x: math.log1p(x * x)),
            expectation=0.5 * m.integrate(lambda x: x * x / (1 + x * x)),
            variance=0.5 * m.integrate(lambda x: x * x / (1 + x * x) ** 2),
            ratio=(1 - m.mass_at(0.0)) / 2,
        )
    if kind == "independence":
        if any(x in (0.0, 1.0) for x, _ in m.atoms):
            raise ValueError("independence measure has an atom at 0 or 1")
        # I(G, 0) = 1 gives I(G, x) = prod (1 - x / root), hence ln I(G, 1) = sum ln|1 - 1/root|
        return MeasureStats(
            entropy=m.integrate(lambda x: math.log(abs(1 - 1 / x))),
            expectation=m.integrate(lambda x: 1 / (1 - x)),
            variance=m.integrate(lambda x: -x / (1 - x) ** 2),
            ratio=m.total_mass,
        )
    raise ValueError(f"unknown measure kind {kind!r}")


def pm_entropy_from_measure(m: AtomicMeasure) -> float:
    if any(x == 0.0 for x, _ in m.atoms):
        return -math.inf
    return m.integrate(lambda x: math.log(abs(x)))


# moments -------------------------------------------------------------------------


def moments_from_coefficients(c: CoefficientVector, order: int) -> MomentSequence:
    """Power sums of the matching-polynomial roots by Newton's identities."""
    if c.kind != "matching":
        raise ValueError("moments are defined for matching coefficient vectors")
    if order > MAX_MOMENT_ORDER:
        raise ResourceCapError(f"moment order {order} exceeds cap {MAX_MOMENT_ORDER}")
    v = c.num_vertices
    # elementary symmetric functions: e_{2k} = (-1)^k m_k, odd ones vanish
    e = [0] * (order + 1)
    e[0] = 1
    for k, mk in enumerate(c.coeffs):
        if 2 * k <= order:
            e[2 * k] = (-1) ** k * mk
    p = [v] + [0] * order
    for k in range(1, order + 1):
        acc = (-1) ** (k - 1) * k * (e[k] if k <= v else 0)
        for i in range(1, k):
            if i <= v:
                acc += (-1) ** (i - 1) * e[i] * p[k - i]
        p[k] = acc
    return MomentSequence(tuple(Fraction(x, v) for x in p), tuple(p), v)


def tree_like_walk_moments(g: Graph, order: int) -> MomentSequence:
    """Closed-walk counts on each vertex's path tree, summed over roots.

    A closed walk from the root of a tree decomposes into excursions into
    child subtrees; the path tree is never materialized, its nodes are the
    self-avoiding paths explored depth-first.
    """
    if order > MAX_WALK_ORDER:
        raise ResourceCapError(f"walk order {order} exceeds cap {MAX_WALK_ORDER}")
    adj = g.adjacency
    memo = {}

    def closed(u: int, visited: int, length: int) -> list:
        # closed walks at u inside the subtree below path node (.., u), lengths 0..length
        key = (u, visited, length)
        hit = memo.get(key)
        if hit is not None:
            return hit
        exc = [0] * (length + 1)
        if length >= 2:
            for w in adj[u]:
                if not visited >> w & 1:
                    sub = closed(w, visited | 1 << w, length - 2)
                    for j, c in enumerate(sub):
                        exc[j + 2] += c
        f = [0] * (length + 1)
        f[0] = 1
        for ell in range(2, length + 1, 2):
            f[ell] = sum(exc[j] * f[ell - j] for j in range(2, ell + 1, 2))
        memo[key] = f
        return f

    totals = [0] * (order + 1)
    for s in range(g.num_vertices):
        for k, c in enumerate(closed(s, 1 << s, order)):
            totals[k] += c
    v = g.num_vertices
    return MomentSequence(tuple(Fraction(x, v) for x in totals), tuple(totals), v)


def quadrature_from_moments(p: MomentSequence, nodes: int) -> AtomicMeasure:
    """Gauss rule with ``nodes`` points matching moments 0 .. 2*nodes - 1.

    Recurrence coefficients come from the Chebyshev algorithm run in exact
    rationals; only the Jacobi-matrix eigensolve is floating point. A zero
    pivot means the moments belong to a measure with fewer atoms, and the
    rule is truncated there; a negative pivot is an error.
    """
    mom = [Fraction(x) for x in p.values]
    if nodes < 1:
        raise ValueError("need at least one node")
    if 2 * nodes > len(mom):
        raise ValueError(f"{nodes} nodes need moments up to order {2 * nodes - 1}")
    if mom[0] <= 0:
        raise ValueError("moment sequence is not positive definite")
    alpha = [mom[1] / mom[0]]
    beta = [mom[0]]
    prev = [Fraction(0)] * (2 * nodes)
    cur = list(mom[: 2 * nodes])
    for k in range(1, nodes):
        nxt = [Fraction(0)] * (2 * nodes)
        for ell in range(k, 2 * nodes - k):
            nxt[ell] = cur[ell + 1] - alpha[k - 1] * cur[ell] - beta[k - 1] * prev[ell]
        if nxt[k] == 0:
            break
        if nxt[k] < 0:
            raise ValueError(f"moment sequence is not positive definite at order {k}")
        alpha.append(nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1])
        beta.append(nxt[k] / cur[k - 1])
        prev, cur = cur, nxt
    n = len(alpha)
    jac = np.diag([float(a) for a in alpha])
    off = [math.sqrt(float(b)) for b in beta[1:]]
    jac += np.diag(off, 1) + np.diag(off, -1)
    locs, vecs = np.linalg.eigh(jac)
    w = float(beta[0]) * vecs[0, :] ** 2
    return AtomicMeasure(tuple((float(x), float(wt)) for x, wt in zip(locs, w) if wt > 0), total_mass=float(beta[0]))
