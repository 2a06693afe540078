"""Gamma-function constants used throughout the toolkit.

All constants are expressed in terms of the Euler Gamma function and are
evaluated in double precision (>= 12 significant digits, via log-Gamma for
stability at large arguments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

__all__ = [
    "FracOrder",
    "PoleError",
    "DomainError",
    "gamma",
    "riesz_fourier_constant",
    "laplacian_kernel_constant",
    "example_constant_dnq",
    "theorem3_factor",
    "eq7_lower_bound",
    "check_gamma_inequality",
    "unit_ball_volume",
    "sphere_surface_area",
]

#: window inside which a float is treated as an exact integer order
INTEGER_TOL = 1e-12


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


class DomainError(ValueError):
    """Parameter outside the validity range of a constant."""


@dataclass(frozen=True)
class FracOrder:
    """A differentiation / Laplacian order q with parity metadata.

    ``odd_k`` is set to the positive integer k with q = 2k - 1 when q is an
    odd positive integer (within INTEGER_TOL); such orders are routed to the
    renormalized odd-order pathway by callers.
    """

    q: float
    odd_k: int | None = None

    @classmethod
    def from_value(cls, q: float) -> "FracOrder":
        q = float(q)
        if q <= -1.0:
            raise DomainError(f"order q={q} must be > -1")
        k2 = round((q + 1.0) / 2.0)
        if k2 >= 1 and abs(q - (2 * k2 - 1)) <= INTEGER_TOL:
            return cls(q=float(2 * k2 - 1), odd_k=int(k2))
        return cls(q=q, odd_k=None)

    @property
    def is_odd_integer(self) -> bool:
        return self.odd_k is not None


def gamma(x: float) -> float:
    """Gamma(x) for real x, accurate to >= 12 significant digits.

    Raises PoleError at nonpositive integers.  Uses the reflection formula
    for x < 0 so that log-Gamma can be used on the positive axis.
    """
    x = float(x)
    if x <= 0.0 and abs(x - round(x)) <= INTEGER_TOL:
        raise PoleError(f"gamma pole at x={x}")
    if x > 0.0:
        return math.exp(gammaln(x)) if x > 170.0 else math.gamma(x)
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def unit_ball_volume(n: int) -> float:
    """Volume of the unit Euclidean ball in R^n."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_surface_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n (= n * omega_n)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def riesz_fourier_constant(n: int, q: float) -> float:
    """Constant C in (|x|^{-q})^ = C |xi|^{q-n}:  pi^{n/2} Gamma((n-q)/2) 2^{n-q} / Gamma(q/2).

    Valid for 0 < q < n.
    """
    if not 0.0 < q < n:
        raise DomainError(f"need 0 < q < n, got q={q}, n={n}")
    return (
        math.pi ** (n / 2.0) * gamma((n - q) / 2.0) * 2.0 ** (n - q) / gamma(q / 2.0)
    )


def laplacian_kernel_constant(n: int, q: float) -> float:
    """Constant c_{n,q} for the negative-order Laplacian as a Riesz convolution:

    (inverse order-q/2 Laplacian of f) = c_{n,q} |x|^{-n+q} * f,  0 < q < n,
    with c_{n,q} = riesz_fourier_constant(n, q) / (2 pi)^n.
    """
    return riesz_fourier_constant(n, q) / (2.0 * math.pi) ** n


def example_constant_dnq(n: int, q: float) -> float:
    """d_{n,q} = 2^{-q} n^{q/2} Gamma((n-q)/2) / (Gamma(n/2) Gamma(q/2+1)).

    Regular at q = 0 (value 1); valid for 0 <= q < n.
    """
    if not 0.0 <= q < n:
        raise DomainError(f"need 0 <= q < n, got q={q}, n={n}")
    return (
        2.0 ** (-q)
        * n ** (q / 2.0)
        * gamma((n - q) / 2.0)
        / (gamma(n / 2.0) * gamma(q / 2.0 + 1.0))
    )


def theorem3_factor(
    n: int, q: float, vol_K: float, dovr: float, odd_pathway: bool = False
) -> float:
    """Full multiplicative factor on the directional maximum in the
    fractional slicing bound:

        n / ((n-q-1) 2^q pi^{(q-1)/2} Gamma((q+1)/2)) * vol_K^{(q+1)/n} * dovr^{q+1}

    Requires -1 < q < n - 1.  Odd integer orders are rejected unless
    ``odd_pathway`` is set: the bound then applies to the renormalized
    odd-order quantity, with the same factor.
    """
    if vol_K <= 0.0:
        raise DomainError("vol_K must be positive")
    if dovr < 1.0:
        raise DomainError("dovr is an outer volume ratio distance, >= 1")
    order = FracOrder.from_value(q)
    if order.is_odd_integer and not odd_pathway:
        raise DomainError(
            f"q={q} is an odd integer; use the odd-order limit pathway"
        )
    if not -1.0 < q < n - 1.0:
        raise DomainError(f"need -1 < q < n-1, got q={q}, n={n}")
    front = n / (
        (n - q - 1.0)
        * 2.0**q
        * math.pi ** ((q - 1.0) / 2.0)
        * gamma((q + 1.0) / 2.0)
    )
    return front * vol_K ** ((q + 1.0) / n) * dovr ** (q + 1.0)


def eq7_lower_bound(n: int, q: float, c: float) -> float:
    """(c (q+1) / n)^{(q+1)/2}: the normalized lower bound on the maximal
    fractional derivative of the section profile of a probability density."""
    if n < 1 or q < 0.0 or c <= 0.0:
        raise DomainError(f"need n >= 1, q >= 0, c > 0; got n={n}, q={q}, c={c}")
    return (c * (q + 1.0) / n) ** ((q + 1.0) / 2.0)


def check_gamma_inequality(lam: float, mu: float, rel_tol: float = 1e-10):
    """Check lambda^mu Gamma(lambda - mu) >= Gamma(lambda) for 0 <= mu <= lambda.

    Returns (lhs, rhs, holds).  Compared in log space so large arguments do
    not overflow.  At mu = lambda > 0 the left side is a Gamma pole: reported
    as +inf, holds.  At mu = lambda = 0 both sides diverge identically: holds.
    """
    if not 0.0 <= mu <= lam:
        raise DomainError(f"need 0 <= mu <= lambda, got lambda={lam}, mu={mu}")
    if mu == lam:
        if lam == 0.0:
            return math.inf, math.inf, True
        return math.inf, math.exp(gammaln(lam)), True
    log_lhs = mu * math.log(lam) + gammaln(lam - mu) if lam > 0 else gammaln(lam - mu)
    log_rhs = float(gammaln(lam))
    holds = log_lhs >= log_rhs - rel_tol
    return math.exp(log_lhs), math.exp(log_rhs), bool(holds)
