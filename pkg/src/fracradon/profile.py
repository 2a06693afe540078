"""Even one-dimensional profiles and fractional derivatives of real order
at the origin.

The generic-order derivative is computed from the regularized
analytic-continuation formula with an m-term Taylor subtraction; odd
positive integer orders use the renormalized limit integral, which is a
distinct quantity (see ``frac_derivative_odd``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .constants import FracOrder, gamma

__all__ = [
    "Decay",
    "Profile",
    "gaussian_profile",
    "exponential_profile",
    "cauchy_profile",
    "bump_profile",
    "constant_profile",
    "tabulated_profile",
    "taylor_coeffs_at_zero",
    "frac_derivative_at_zero",
    "frac_derivative_odd",
    "FDConvergenceError",
    "NearOddOrderError",
    "DivergentTailError",
]

#: orders above this require analytic derivatives (finite differences get too noisy)
FD_ORDER_CAP = 6

#: guard band around odd integers inside which the generic formula is refused
NEAR_ODD_BAND = 1e-6

#: width inside which an order is treated as an exact nonnegative integer
INTEGER_BAND = 1e-9


class FDConvergenceError(RuntimeError):
    """Finite-difference derivative failed to converge; carries last estimates."""

    def __init__(self, msg, last_estimates=None):
        super().__init__(msg)
        self.last_estimates = last_estimates


class NearOddOrderError(ValueError):
    """Order within the ill-conditioned band around an odd integer."""


class DivergentTailError(ValueError):
    """Profile decay too slow for the requested order."""


@dataclass(frozen=True)
class Decay:
    """Decay metadata of a profile or density.

    kind: 'gaussian' (~exp(-t^2/2 scale^2)), 'exponential' (~exp(-t/scale)),
    'polynomial' (~t^-alpha), or 'compact' (vanishes beyond t = scale).
    """

    kind: str
    scale: float = 1.0
    alpha: float = 2.0

    def cutoff(self, rel: float = 1e-18) -> Optional[float]:
        """t beyond which the profile magnitude falls below rel (None if
        polynomial decay: no useful finite cutoff)."""
        if self.kind == "gaussian":
            return self.scale * math.sqrt(-2.0 * math.log(rel))
        if self.kind == "exponential":
            return -self.scale * math.log(rel)
        if self.kind == "compact":
            return self.scale
        return None


@dataclass(frozen=True)
class Profile:
    """An evaluable function of one variable t >= 0.

    ``smoothness_m`` is the number of continuous derivatives trusted near 0.
    ``is_even`` marks profiles that are restrictions of even functions (odd
    Taylor coefficients vanish identically).  ``analytic_derivs``, when
    present, returns the exact k-th derivative at 0 and lifts the
    finite-difference order cap.
    """

    eval_fn: Callable[[np.ndarray], np.ndarray]
    smoothness_m: int
    decay: Decay
    is_even: bool = True
    analytic_derivs: Optional[Callable[[int], float]] = None
    label: str = "profile"

    def __call__(self, t):
        return self.eval_fn(np.asarray(t, dtype=float))

    def scale_estimate(self) -> float:
        v = abs(float(self(0.0)))
        return v if v > 0.0 else 1.0


# ---------------------------------------------------------------------------
# built-in families


def gaussian_profile(sigma: float = 1.0, amplitude: float = 1.0) -> Profile:
    s2 = sigma * sigma

    def derivs(k: int) -> float:
        if k % 2:
            return 0.0
        i = k // 2
        return amplitude * (-1.0) ** i * math.factorial(k) / (
            2.0**i * math.factorial(i) * sigma ** k
        )

    return Profile(
        eval_fn=lambda t: amplitude * np.exp(-np.square(t) / (2.0 * s2)),
        smoothness_m=64,
        decay=Decay("gaussian", sigma),
        is_even=True,
        analytic_derivs=derivs,
        label=f"gaussian(sigma={sigma})",
    )


def exponential_profile(scale: float = 1.0, amplitude: float = 1.0) -> Profile:
    return Profile(
        eval_fn=lambda t: amplitude * np.exp(-t / scale),
        smoothness_m=64,
        decay=Decay("exponential", scale),
        is_even=False,
        analytic_derivs=lambda k: amplitude * (-1.0 / scale) ** k,
        label=f"exponential(scale={scale})",
    )


def cauchy_profile(amplitude: float = 1.0) -> Profile:
    def derivs(k: int) -> float:
        if k % 2:
            return 0.0
        return amplitude * (-1.0) ** (k // 2) * math.factorial(k)

    return Profile(
        eval_fn=lambda t: amplitude / (1.0 + np.square(t)),
        smoothness_m=64,
        decay=Decay("polynomial", 1.0, alpha=2.0),
        is_even=True,
        analytic_derivs=derivs,
        label="cauchy",
    )


def _poly_mul(a, b, nmax):
    out = [0.0] * (nmax + 1)
    for i, ai in enumerate(a):
        if i > nmax or ai == 0.0:
            continue
        for j, bj in enumerate(b):
            if i + j > nmax:
                break
            out[i + j] += ai * bj
    return out


def _bump_u_series(nmax: int):
    # series of exp(-u/(1-u)) = exp(-(u + u^2 + ...)) in powers of u
    a = [0.0] + [-1.0] * nmax
    result = [1.0] + [0.0] * nmax
    term = [1.0] + [0.0] * nmax
    for k in range(1, nmax + 1):
        term = _poly_mul(term, a, nmax)
        term = [c / k for c in term]
        result = [r + t for r, t in zip(result, term)]
    return result


_BUMP_SERIES = _bump_u_series(8)


def bump_profile(T: float = 1.0, amplitude: float = 1.0) -> Profile:
    """Smooth compactly supported bump: amplitude * e * exp(-1/(1-(t/T)^2))
    inside |t| < T, zero outside.  Value at 0 equals ``amplitude``."""

    def ev(t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        u = np.atleast_1d(np.square(t / T))
        out = np.zeros_like(u)
        inside = u < 1.0
        ui = u[inside]
        out[inside] = amplitude * np.exp(-ui / (1.0 - ui))
        return float(out[0]) if scalar else out

    def derivs(k: int) -> float:
        if k % 2:
            return 0.0
        i = k // 2
        if i >= len(_BUMP_SERIES):
            raise ValueError(f"bump analytic derivatives available to order {2*(len(_BUMP_SERIES)-1)}")
        return amplitude * _BUMP_SERIES[i] * math.factorial(k) / T ** k

    return Profile(
        eval_fn=ev,
        smoothness_m=16,
        decay=Decay("compact", T),
        is_even=True,
        analytic_derivs=derivs,
        label=f"bump(T={T})",
    )


def constant_profile(T: float = 1.0, value: float = 1.0) -> Profile:
    def ev(t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= T, value, 0.0)

    return Profile(
        eval_fn=ev,
        smoothness_m=64,
        decay=Decay("compact", T),
        is_even=True,
        analytic_derivs=lambda k: value if k == 0 else 0.0,
        label=f"constant(T={T})",
    )


def tabulated_profile(ts, values, is_even: bool = True) -> Profile:
    """Profile from (t_i, phi_i) samples with cubic interpolation; smoothness
    is then capped at 2.  Evaluates to 0 beyond the last sample."""
    from scipy.interpolate import CubicSpline

    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if ts.ndim != 1 or ts.shape != values.shape or len(ts) < 4:
        raise ValueError("need matching 1-d arrays with at least 4 samples")
    if ts[0] > 0.0:
        ts = np.concatenate([[0.0], ts])
        values = np.concatenate([[values[0]], values])
    bc = ((1, 0.0), "not-a-knot") if is_even else "not-a-knot"
    spline = CubicSpline(ts, values, bc_type=bc)
    T = float(ts[-1])

    def ev(t):
        t = np.asarray(t, dtype=float)
        out = spline(np.clip(t, 0.0, T))
        return np.where(t <= T, out, 0.0)

    return Profile(
        eval_fn=ev,
        smoothness_m=2,
        decay=Decay("compact", T),
        is_even=is_even,
        analytic_derivs=None,
        label="tabulated",
    )


# ---------------------------------------------------------------------------
# Taylor coefficients at 0


def _fd_stencil_solve(phi, h: float, orders_step: int, count: int):
    """Solve for derivatives at 0 from values at nodes j*h, j = 0..count-1.

    orders_step = 2 fits only even Taylor terms (even profiles), 1 fits all.
    Returns the fitted derivative array (orders 0, step, 2*step, ...).
    """
    j = np.arange(count, dtype=float)
    ks = np.arange(count) * orders_step
    # scaled Vandermonde: phi(j h) = sum_i d_i j^{k_i} with d_i = c_{k_i} h^{k_i}/k_i!
    A = np.power.outer(j, ks.astype(float))
    vals = np.array([float(phi(jj * h)) for jj in j])
    d = np.linalg.solve(A, vals)
    facts = np.array([math.factorial(int(k)) for k in ks], dtype=float)
    return d * facts / np.power(h, ks.astype(float))


def _fd_derivatives(phi: Profile, max_order: int):
    """Finite-difference derivatives 0..max_order at 0 with step halving and
    Richardson-style selection of the most stable estimate."""
    if max_order > FD_ORDER_CAP:
        raise ValueError(
            f"finite differences capped at order {FD_ORDER_CAP}; "
            "supply analytic_derivs for higher orders"
        )
    step = 2 if phi.is_even else 1
    top = max_order - (max_order % step if phi.is_even else 0)
    count = top // step + 3  # two extra fitted terms for accuracy
    h0 = 0.35 * phi.decay.scale if phi.decay.kind != "polynomial" else 0.35
    if phi.decay.kind == "compact":
        h0 = min(h0, 0.8 * phi.decay.scale / (count + 1))
    ladder = [h0 / 2.0**l for l in range(7)]
    estimates = np.array([_fd_stencil_solve(phi, h, step, count) for h in ladder])

    scale = phi.scale_estimate()
    out = np.zeros(max_order + 1)
    errs = np.zeros(max_order + 1)
    for k in range(0, max_order + 1):
        if phi.is_even and k % 2:
            continue
        col = estimates[:, k // step]
        deltas = np.abs(np.diff(col))
        best = int(np.argmin(deltas))
        out[k] = col[best + 1]
        errs[k] = deltas[best]
        if not np.isfinite(out[k]) or errs[k] > 1e-2 * max(scale, abs(out[k])):
            raise FDConvergenceError(
                f"derivative of order {k} did not converge",
                last_estimates=(col[best], col[best + 1]),
            )
    out[0] = float(phi(0.0))
    return out, errs


def taylor_coeffs_at_zero(phi: Profile, m: int) -> np.ndarray:
    """Derivatives of order 0..m-1 of the profile at 0.

    Uses exact analytic derivatives when the profile carries them, otherwise
    central/one-sided finite differences with Richardson extrapolation.  For
    even profiles odd orders are exactly 0.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > phi.smoothness_m:
        raise ValueError(f"m={m} exceeds profile smoothness {phi.smoothness_m}")
    if m == 1 and phi.analytic_derivs is None:
        return np.array([float(phi(0.0))])
    if phi.analytic_derivs is not None:
        return np.array([0.0 if (phi.is_even and k % 2) else phi.analytic_derivs(k)
                         for k in range(m)])
    coeffs, _ = _fd_derivatives(phi, m - 1)
    return coeffs


def _coeffs_with_extension(phi: Profile, m: int):
    """Coefficients 0..K with K >= m-1, extended past m for the stable
    evaluation of the subtracted integrand near 0."""
    want = m + 8  # analytic derivatives are cheap; deeper series, smaller truncation
    if phi.analytic_derivs is None:
        want = min(m + 4, FD_ORDER_CAP + 1, phi.smoothness_m)
    want = max(want, m)
    if phi.analytic_derivs is not None:
        out = []
        for k in range(want):
            if phi.is_even and k % 2:
                out.append(0.0)
                continue
            try:
                out.append(phi.analytic_derivs(k))
            except ValueError:
                if k >= m:
                    break  # family only tabulates so far; series just truncates earlier
                raise
        return np.array(out)
    coeffs, _ = _fd_derivatives(phi, want - 1)
    return coeffs


def _tail_quad(phi: Profile, weight_exp: float, lo: float, scale: float):
    """integral of t^{-weight_exp} phi(t) over [lo, infinity)."""
    T = phi.decay.cutoff(1e-19)
    f = lambda t: t ** (-weight_exp) * float(phi(t))
    if T is not None:
        if T <= lo:
            return 0.0
        val, _ = quad(f, lo, T, epsabs=1e-13 * scale, epsrel=1e-11, limit=400)
        return val
    val, _ = quad(f, lo, np.inf, epsabs=1e-13 * scale, epsrel=1e-11, limit=400)
    return val


def frac_derivative_at_zero(phi: Profile, q, m: Optional[int] = None) -> float:
    """Fractional derivative of order q of the profile at 0, by analytic
    continuation of (1/Gamma(-q)) * integral t^{-1-q} phi(t) dt.

    Valid for -1 < q < m with m <= profile smoothness.  Nonnegative integer
    orders fall back to the classical limit (-1)^k phi^(k)(0).  Orders inside
    a 1e-6 band around an odd integer (but not exactly integer) are rejected:
    use ``frac_derivative_odd`` for the renormalized odd-order quantity.
    """
    if isinstance(q, FracOrder):
        q = q.q
    q = float(q)
    if q <= -1.0:
        raise ValueError(f"order q={q} must be > -1")

    k = round(q)
    if k >= 0 and abs(q - k) <= INTEGER_BAND:
        coeffs = taylor_coeffs_at_zero(phi, k + 1)
        return float((-1.0) ** k * coeffs[k])
    k_odd = round((q + 1.0) / 2.0)
    if k_odd >= 1 and abs(q - (2 * k_odd - 1)) < NEAR_ODD_BAND:
        raise NearOddOrderError(
            f"q={q} is within {NEAR_ODD_BAND} of the odd integer {2*k_odd-1}; "
            "use frac_derivative_odd for the renormalized quantity"
        )

    if m is None:
        m = max(1, math.floor(q) + 2)
        m = min(m, phi.smoothness_m)
    if not q < m:
        raise ValueError(f"need q < m, got q={q}, m={m}")
    if m > phi.smoothness_m:
        raise ValueError(f"m={m} exceeds profile smoothness {phi.smoothness_m}")
    if phi.decay.kind == "polynomial" and phi.decay.alpha <= q:
        raise DivergentTailError(
            f"polynomial decay alpha={phi.decay.alpha} <= q={q}: tail diverges"
        )

    coeffs = _coeffs_with_extension(phi, m)
    K = len(coeffs) - 1
    scale = phi.scale_estimate()
    inv_fact = np.array([1.0 / math.factorial(j) for j in range(K + 1)])

    # endpoint sum of the split formula at s = 1
    S = sum(coeffs[j] * inv_fact[j] / (j - q) for j in range(m))

    # [0, a]: Taylor series of the subtracted integrand, integrated exactly
    a = 0.1
    if K >= m:
        series = sum(
            coeffs[j] * inv_fact[j] * a ** (j - q) / (j - q) for j in range(m, K + 1)
        )
    else:
        # no extension coefficients available: one-point estimate of the
        # leading remainder term (enters only low-smoothness profiles)
        taylor_a = sum(coeffs[j] * inv_fact[j] * a**j for j in range(m))
        cm_est = (float(phi(a)) - taylor_a) / a**m
        series = cm_est * a ** (m - q) / (m - q)

    # [a, 1]: numeric integration of the subtracted form (cancellation-safe)
    def subtracted(t):
        taylor = sum(coeffs[j] * inv_fact[j] * t**j for j in range(m))
        return t ** (-1.0 - q) * (float(phi(t)) - taylor)

    mid, _ = quad(subtracted, a, 1.0, epsabs=1e-13 * scale, epsrel=1e-11, limit=400)

    tail = _tail_quad(phi, 1.0 + q, 1.0, scale)

    return float((S + series + mid + tail) / gamma(-q))


def frac_derivative_unregularized(phi: Profile, q: float) -> float:
    """Direct evaluation (1/Gamma(-q)) * integral_0^inf t^{-1-q} phi(t) dt,
    convergent only for -1 < q < 0.  Test oracle for the continuation."""
    q = float(q)
    if not -1.0 < q < 0.0:
        raise ValueError("unregularized form converges only for -1 < q < 0")
    scale = phi.scale_estimate()
    head, _ = quad(lambda t: t ** (-1.0 - q) * float(phi(t)), 0.0, 1.0,
                   epsabs=1e-13 * scale, epsrel=1e-11, limit=400)
    tail = _tail_quad(phi, 1.0 + q, 1.0, scale)
    return float((head + tail) / gamma(-q))


def frac_derivative_odd(phi: Profile, k: int) -> float:
    """Renormalized odd-order quantity for q = 2k - 1:

        (-1)^k (2k-1)! * integral_0^inf t^{-2k} (phi(t) - T_{2k-2}(t)) dt,

    where T_{2k-2} is the even Taylor polynomial through order 2k-2.  Requires
    an even profile (otherwise the integral diverges at 0).
    """
    if k < 1 or k != int(k):
        raise ValueError("k must be a positive integer")
    k = int(k)
    if not phi.is_even:
        raise ValueError("odd-order quantity requires an even profile")
    if phi.smoothness_m < 2 * k:
        raise ValueError(f"profile smoothness {phi.smoothness_m} < {2*k}")

    m = 2 * k - 1  # subtraction through order 2k-2
    coeffs = _coeffs_with_extension(phi, max(m, 1) + 2)
    K = len(coeffs) - 1
    scale = phi.scale_estimate()
    inv_fact = np.array([1.0 / math.factorial(j) for j in range(K + 1)])

    a = 0.1
    series = sum(
        coeffs[j] * inv_fact[j] * a ** (j - 2 * k + 1) / (j - 2 * k + 1)
        for j in range(m, K + 1)
        if not (phi.is_even and j % 2)
    )

    def subtracted(t):
        taylor = sum(coeffs[j] * inv_fact[j] * t**j for j in range(m))
        return t ** (-2.0 * k) * (float(phi(t)) - taylor)

    s = 1.0
    mid, _ = quad(subtracted, a, s, epsabs=1e-13 * scale, epsrel=1e-11, limit=400)

    # beyond s: integrate t^{-2k} phi numerically, subtract the Taylor part
    # analytically (it decays only polynomially and would need a huge cutoff)
    phi_tail = _tail_quad(phi, 2.0 * k, s, scale)
    taylor_tail = sum(
        coeffs[j] * inv_fact[j] * s ** (j - 2 * k + 1) / (2 * k - j - 1)
        for j in range(m)
    )

    total = series + mid + phi_tail - taylor_tail
    return float((-1.0) ** k * math.factorial(2 * k - 1) * total)
