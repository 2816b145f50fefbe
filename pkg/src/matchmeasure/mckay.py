"""Kesten-McKay density, its closed-form integrals and the large-girth limit constants.

Closed forms use principal branches of ``sqrt`` and ``log``. Every integral
has a quadrature twin (``*_quad``) computed independently with the
substitution ``x = omega * sin(theta)``, which removes the square-root
behaviour at the spectral edges.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

__all__ = [
    "McKayParams",
    "density",
    "log_integral",
    "reciprocal_integral",
    "derivative_integral",
    "log_abs_integral",
    "theorem_limits",
    "gurvits_entropy_function",
    "gurvits_max",
    "integrate_against_density",
    "log_integral_quad",
    "reciprocal_integral_quad",
    "derivative_integral_quad",
    "log_abs_integral_quad",
]

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class McKayParams:
    d: int
    omega: float
    xi: float
    S_d: float
    schrijver_exponent: float

    @classmethod
    def from_degree(cls, d: int) -> "McKayParams":
        _check_degree(d)
        xi = 2 / (1 + math.sqrt(4 * d - 3))
        s_d = ((d - 1) / (d - xi)) ** (d - 2) / xi**2
        return cls(d, 2 * math.sqrt(d - 1), xi, s_d, log_abs_integral(d))

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "omega": self.omega,
            "xi": self.xi,
            "S_d": self.S_d,
            "schrijver_exponent": self.schrijver_exponent,
        }


def _check_degree(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"degree must be an integer >= 2, got {d}")


def density(d: int, x: float) -> float:
    """f_d(x) = d sqrt(4(d-1) - x^2) / (2 pi (d^2 - x^2)) on [-omega, omega], 0 elsewhere."""
    _check_degree(d)
    r = 4 * (d - 1) - x * x
    if r <= 0:
        return 0.0
    return d * math.sqrt(r) / (2 * math.pi * (d * d - x * x))


def _eta(d: int, gamma: complex) -> complex:
    gamma = complex(gamma)
    omega2 = 4 * (d - 1)
    if gamma.imag == 0 and omega2 * gamma.real**2 >= 1:
        raise ValueError(f"gamma={gamma} lies on a branch cut (real with |gamma| >= 1/omega)")
    return 2 / (1 + cmath.sqrt(1 - omega2 * gamma * gamma))


def log_integral(d: int, gamma: complex) -> complex:
    """Closed form of  int f_d(x) ln(1 - gamma x) dx."""
    _check_degree(d)
    eta = _eta(d, gamma)
    return (d - 2) / 2 * cmath.log((d - 1) / (d - eta)) - cmath.log(eta)


def reciprocal_integral(d: int, gamma: complex) -> complex:
    """Closed form of  int f_d(x) / (1 - gamma x) dx."""
    _check_degree(d)
    eta = _eta(d, gamma)
    return (d - 1) / (d / eta - 1)


def derivative_integral(d: int) -> complex:
    """Closed form of  int f_d(x) x / (1 - i x)^2 dx (purely imaginary).

    This is the gamma-derivative of :func:`reciprocal_integral` at gamma = i,
    where d / eta - 1 = (d - 2 + d sqrt(4d - 3)) / 2.
    """
    _check_degree(d)
    r = math.sqrt(4 * d - 3)
    return 1j * 8 * d * (d - 1) ** 2 / (r * (d - 2 + d * r) ** 2)


def log_abs_integral(d: int) -> float:
    """int f_d(x) ln|x| dx = ((d-1) ln(d-1) - (d-2) ln d) / 2."""
    _check_degree(d)
    return 0.5 * ((d - 1) * math.log(d - 1) - (d - 2) * math.log(d))


def theorem_limits(d: int) -> dict:
    """Per-vertex limits of the matching statistics along d-regular graphs of growing girth."""
    if d < 3:
        raise ValueError("limits are stated for d >= 3")
    p = McKayParams.from_degree(d)
    xi = p.xi
    r = math.sqrt(4 * d - 3)
    return {
        "entropy_limit": 0.5 * math.log(p.S_d),
        "expectation_limit": d / 2 * (1 - xi) / (d - xi),
        "variance_limit": 2 * d * (d - 1) ** 2 / (r * (d - 2 + d * r) ** 2),
        "pm_entropy_limit": p.schrijver_exponent,
    }


def gurvits_entropy_function(d: int, t: float) -> float:
    """t ln(d/t) + (d-t) ln(1-t/d) - 2(1-t) ln(1-t), extended continuously to [0, 1]."""
    _check_degree(d)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    a = t * math.log(d / t) if t > 0 else 0.0
    b = (d - t) * math.log1p(-t / d)
    c = -2 * (1 - t) * math.log1p(-t) if t < 1 else 0.0
    return a + b + c


def gurvits_max(d: int, tol: float = 1e-12) -> tuple:
    """Maximizer and maximum of :func:`gurvits_entropy_function` by golden-section search."""
    f = lambda t: gurvits_entropy_function(d, t)  # noqa: E731
    invphi = (math.sqrt(5) - 1) / 2
    lo, hi = 0.0, 1.0
    a = hi - invphi * (hi - lo)
    b = lo + invphi * (hi - lo)
    fa, fb = f(a), f(b)
    while hi - lo > tol:
        if fa < fb:
            lo, a, fa = a, b, fb
            b = lo + invphi * (hi - lo)
            fb = f(b)
        else:
            hi, b, fb = b, a, fa
            a = hi - invphi * (hi - lo)
            fa = f(a)
    t = (lo + hi) / 2
    return t, f(t)


# quadrature oracles --------------------------------------------------------------


def integrate_against_density(d: int, func: Callable[[float], complex], split_at_zero: bool = False) -> complex:
    """int f_d(x) func(x) dx by adaptive quadrature in theta, x = omega sin(theta)."""
    _check_degree(d)
    omega = 2 * math.sqrt(d - 1)

    def weight(theta: float) -> float:
        s = math.sin(theta)
        c = math.cos(theta)
        return d * omega * omega * c * c / (2 * math.pi * (d * d - omega * omega * s * s))

    pieces = [(-math.pi / 2, 0.0), (0.0, math.pi / 2)] if split_at_zero else [(-math.pi / 2, math.pi / 2)]

    def quad(g, lo, hi) -> float:
        val, _ = integrate.quad(g, lo, hi, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=400)
        return val

    re = im = 0.0
    for lo, hi in pieces:
        re += quad(lambda th: complex(func(omega * math.sin(th))).real * weight(th), lo, hi)
        im += quad(lambda th: complex(func(omega * math.sin(th))).imag * weight(th), lo, hi)
    return complex(re, im)


def log_integral_quad(d: int, gamma: complex) -> complex:
    _eta(d, gamma)
    return integrate_against_density(d, lambda x: cmath.log(1 - gamma * x))


def reciprocal_integral_quad(d: int, gamma: complex) -> complex:
    _eta(d, gamma)
    return integrate_against_density(d, lambda x: 1 / (1 - gamma * x))


def derivative_integral_quad(d: int) -> complex:
    return integrate_against_density(d, lambda x: x / (1 - 1j * x) ** 2)


def log_abs_integral_quad(d: int) -> float:
    return integrate_against_density(d, lambda x: math.log(abs(x)) if x else 0.0, split_at_zero=True).real
