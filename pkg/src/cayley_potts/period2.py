"""Parity-alternating (period-2) structure of the three-state model.

For q = 3, a boundary-field assignment that depends only on the parity of
the distance to the root is described by four positive numbers
z = (z1, z2, z3, z4): the exponentials of the two field components on the
even generations and on the odd generations.  ``period2_map`` is the
self-consistency map on these numbers for a vertex with k descendants; it
rebuilds the even class from the odd class and vice versa.

The set I = {z1 = z2, z3 = z4} is invariant under the map, and on it the
dynamics collapse to the scalar map ``f_scalar``.  Writing x for the even
value and y for the odd value, a consistent parity assignment needs
x = f(y) and y = f(x), so two-cycles of f are the non-trivial solutions.
They are found as roots of h(x) = ln f(x) - ln g(x), where ``g_scalar`` is
the closed-form inverse of f on (theta_1, theta_2).  Below the critical
activity ``theta_cr`` the slope of h at the fixed point x = 1 turns
negative, which is what creates the extra pair of roots; the polynomial
``p_coefficients`` controls the sign of h' and has at most two positive
roots by Descartes' rule.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np


class DomainError(ValueError):
    """Argument outside the open interval where g (hence h) is defined."""


def _check_theta_k(theta: float, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    if not (math.isfinite(theta) and theta > 0):
        raise ValueError(f"theta must be positive and finite, got {theta!r}")


def theta_cr(k: int) -> float:
    """Critical activity (k-2)/(k+1); the period-2 theory needs k >= 3."""
    if not isinstance(k, (int, np.integer)) or k < 3:
        raise ValueError(f"k must be an integer >= 3, got {k!r}")
    return (k - 2) / (k + 1)


class ThetaDomain(NamedTuple):
    theta_1: float
    theta_2: float


def domain_bounds(theta: float, k: int) -> ThetaDomain:
    """Endpoints ((theta+1)/2)^k and theta^-k of the interval where the
    inverse map g stays positive.  For theta < 1 they straddle 1."""
    _check_theta_k(theta, k)
    return ThetaDomain(((theta + 1.0) / 2.0) ** k, theta ** (-k))


def clamp_to_domain(x: float, theta: float, k: int,
                    margin: float = 1e-12) -> tuple[float, bool]:
    """Pull x to at least the given relative margin inside (theta_1, theta_2).

    Returns (possibly moved point, moved flag) so callers can tell an
    endpoint blow-up apart from an interior value instead of meeting a
    raised DomainError or an infinity.
    """
    lo, hi = domain_bounds(theta, k)
    if not lo < hi:
        raise DomainError(f"empty domain: theta_1={lo} >= theta_2={hi} "
                          f"(needs theta < 1)")
    a = lo * (1.0 + margin)
    b = hi * (1.0 - margin)
    if x < a:
        return a, True
    if x > b:
        return b, True
    return float(x), False


def period2_map(z, theta: float, k: int) -> np.ndarray:
    """One application of the parity-swapped consistency map:

        z1' = ((theta z3 + z4 + 1)/(z3 + z4 + theta))^k
        z2' = ((theta z4 + z3 + 1)/(z3 + z4 + theta))^k
        z3' = ((theta z1 + z2 + 1)/(z1 + z2 + theta))^k
        z4' = ((theta z2 + z1 + 1)/(z1 + z2 + theta))^k

    All denominators are positive for positive input, so the map is total.
    """
    _check_theta_k(theta, k)
    z = np.asarray(z, dtype=float)
    if z.shape != (4,):
        raise ValueError(f"z must have 4 components, got shape {z.shape}")
    if not (np.isfinite(z).all() and (z > 0).all()):
        raise ValueError("z components must be positive and finite")
    z1, z2, z3, z4 = z
    d34 = z3 + z4 + theta
    d12 = z1 + z2 + theta
    return np.array([
        ((theta * z3 + z4 + 1.0) / d34) ** k,
        ((theta * z4 + z3 + 1.0) / d34) ** k,
        ((theta * z1 + z2 + 1.0) / d12) ** k,
        ((theta * z2 + z1 + 1.0) / d12) ** k,
    ])


def _sign(x: float) -> int:
    return int(x > 0) - int(x < 0)


def sign_relation_check(z_in, z_out, theta: float) -> tuple[bool, bool, bool]:
    """Antiferromagnetic order relations between z_in and z_out = map(z_in),
    valid for 0 < theta < 1:

    (a) z1' - z2' has the opposite sign of z3 - z4;
    (b) z3 >= 1 forces z1' <= 1, and z3 <= 1 forces z1' >= 1;
    (c) the same with (z4, z2').

    Comparisons are non-strict on purpose: at boundary points (components
    equal, or equal to 1) both sides of an equivalence degenerate together.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError(f"sign relations hold for 0 < theta < 1, "
                         f"got theta={theta!r}")
    zi = np.asarray(z_in, dtype=float)
    zo = np.asarray(z_out, dtype=float)
    if zi.shape != (4,) or zo.shape != (4,):
        raise ValueError("z_in and z_out must have 4 components")

    a = _sign(zo[0] - zo[1]) == -_sign(zi[2] - zi[3])
    b = ((zo[0] <= 1.0 if zi[2] >= 1.0 else True)
         and (zo[0] >= 1.0 if zi[2] <= 1.0 else True))
    c = ((zo[1] <= 1.0 if zi[3] >= 1.0 else True)
         and (zo[1] >= 1.0 if zi[3] <= 1.0 else True))
    return a, b, c


def f_scalar(x: float, theta: float, k: int) -> float:
    """Scalar consistency map on the invariant set:
    f(x) = (((theta+1) x + 1)/(2x + theta))^k, strictly decreasing for
    theta < 1, with fixed point f(1) = 1."""
    _check_theta_k(theta, k)
    if not (math.isfinite(x) and x > 0):
        raise ValueError(f"x must be positive and finite, got {x!r}")
    return (((theta + 1.0) * x + 1.0) / (2.0 * x + theta)) ** k


def _kth_root(x: float, k: int) -> float:
    # exp(ln x / k) stays accurate across the many decades the domain spans
    return math.exp(math.log(x) / k)


def _check_g_domain(x: float, theta: float, k: int) -> None:
    _check_theta_k(theta, k)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if theta >= 1.0:
        raise DomainError(f"inverse map needs theta < 1, got theta={theta!r}")
    lo, hi = domain_bounds(theta, k)
    if not lo < x < hi:
        raise DomainError(f"x={x!r} outside the open interval "
                          f"({lo!r}, {hi!r})")


def g_scalar(x: float, theta: float, k: int) -> float:
    """Inverse of f on (theta_1, theta_2):
    g(x) = (1 - theta u)/(2u - theta - 1) with u = x^(1/k).

    Both factors are positive exactly on the open interval; g decreases
    from +infinity at theta_1 to 0 at theta_2."""
    _check_g_domain(x, theta, k)
    u = _kth_root(x, k)
    num = 1.0 - theta * u
    den = 2.0 * u - theta - 1.0
    if num <= 0.0 or den <= 0.0:
        # x is mathematically interior but u rounded onto an endpoint
        raise DomainError(f"x={x!r} rounds onto a domain endpoint")
    return num / den


def h_scalar(x: float, theta: float, k: int) -> float:
    """h(x) = ln f(x) - ln g(x) on (theta_1, theta_2).

    h(1) = 0 up to rounding; roots of h are the scalar two-cycles of f
    together with the fixed point x = 1.  h falls to -infinity at theta_1
    and climbs to +infinity at theta_2."""
    _check_g_domain(x, theta, k)
    u = _kth_root(x, k)
    num_g = 1.0 - theta * u
    den_g = 2.0 * u - theta - 1.0
    if num_g <= 0.0 or den_g <= 0.0:
        raise DomainError(f"x={x!r} rounds onto a domain endpoint")
    ratio_f = ((theta + 1.0) * x + 1.0) / (2.0 * x + theta)
    return k * math.log(ratio_f) - (math.log(num_g) - math.log(den_g))


def h_prime(x: float, theta: float, k: int) -> float:
    """Analytic derivative of h:

        h'(x) = ((theta-1)(theta+2)/k) * (
                  k^2 / (((theta+1)x + 1)(2x + theta))
                  - 1 / (x^((k-1)/k) (2u - theta - 1)(1 - theta u)) )

    with u = x^(1/k) and x^((k-1)/k) computed as x/u.  Shares g's domain.
    Negative at x = 1 exactly when theta < theta_cr(k)."""
    _check_g_domain(x, theta, k)
    u = _kth_root(x, k)
    num_g = 1.0 - theta * u
    den_g = 2.0 * u - theta - 1.0
    if num_g <= 0.0 or den_g <= 0.0:
        raise DomainError(f"x={x!r} rounds onto a domain endpoint")
    term_f = k * k / (((theta + 1.0) * x + 1.0) * (2.0 * x + theta))
    term_g = 1.0 / ((x / u) * den_g * num_g)
    return (theta - 1.0) * (theta + 2.0) / k * (term_f - term_g)


def p_coefficients(theta: float, k: int) -> dict[int, float]:
    """Sparse coefficients (degree -> value) of the polynomial in y = x^(1/k)
    whose sign controls the sign of h':

        p(y) = 2(theta+1) y^(2k) + 2 theta k^2 y^(k+1)
               - (k^2-1)(theta^2+theta+2) y^k
               + k^2 (theta+1) y^(k-1) + theta

    Exactly five terms; for k >= 3 the five degrees are distinct."""
    if not isinstance(k, (int, np.integer)) or k < 3:
        raise ValueError(f"k must be an integer >= 3, got {k!r}")
    if not (math.isfinite(theta) and theta > 0):
        raise ValueError(f"theta must be positive and finite, got {theta!r}")
    return {
        2 * k: 2.0 * (theta + 1.0),
        k + 1: 2.0 * theta * k * k,
        k: -(k * k - 1.0) * (theta * theta + theta + 2.0),
        k - 1: k * k * (theta + 1.0),
        0: theta,
    }


def descartes_positive_root_bound(coeffs: dict[int, float]) -> int:
    """Number of sign changes in the coefficients by descending degree,
    zeros skipped: an upper bound on the number of positive roots."""
    if not coeffs:
        raise ValueError("empty coefficient list")
    signs = [1 if c > 0 else -1
             for _, c in sorted(coeffs.items(), reverse=True) if c != 0]
    if not signs:
        raise ValueError("all coefficients are zero")
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)
