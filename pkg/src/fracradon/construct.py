"""Pipeline that turns a body/density pair into a normalized example with
small section-profile derivatives, plus the convolution-lower-bound
certificate and the discrete convolution inequality check.

The pipeline follows the scaling D = vol(K)^{-1/n} K and
g(x) = h(vol(2K)^{1/n} x) / Z with h the negative-order Laplacian of f; note
vol(2K)^{-1/n} (2K) is the same body as D, so the two scalings written in
the construction coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import body as body_mod
from . import field as field_mod
from .body import StarBody, contains_scaled_ball, dilate, integrate_over_body, volume
from .constants import laplacian_kernel_constant, sphere_surface_area
from .field import Density, GridField, grid_density, sample
from .profile import Decay
from .report import VerificationReport
from .sphere import direction_mesh

__all__ = [
    "ConstructionResult",
    "DegenerateNormalizationError",
    "negative_order_density",
    "build_example",
    "lower_bound_certificate",
    "check_convolution_lemma",
    "surrogate_example",
]


class DegenerateNormalizationError(RuntimeError):
    """The normalizing integral came out nonpositive."""


@dataclass
class ConstructionResult:
    D: StarBody
    g: Density
    K: StarBody
    f: Density
    q: float
    normalization: float
    arg_scale: float
    h: Density
    h_field: GridField
    clamp_mass: float
    grid: dict
    seed: int
    notes: list


def _grid_for_support(f: Density, K: Optional[StarBody], q: float, n: int):
    """Box size covering both the density mass and (when given) the doubled
    body, with resolution tied to the density scale."""
    L = 8.0 * f.decay.scale if f.decay.kind != "compact" else 1.5 * f.decay.scale
    if K is not None:
        reach = float(np.max(K.radial(direction_mesh(n, 64))))
        L = max(L, 1.25 * 2.0 * reach)
    M = 64 if n <= 3 else 32
    # keep the density core resolved
    delta_target = f.decay.scale / 4.0
    while 2.0 * L / M > delta_target and M < 160:
        M *= 2
    if M > 160:
        M = 160 if n <= 2 else 128
    return float(L), int(M)


def negative_order_density(
    f: Density,
    q: float,
    L: Optional[float] = None,
    M: Optional[int] = None,
    path: str = "spectral",
):
    """Negative-order Laplacian of f as a grid-backed density.

    Returns (density, field, clamp_mass).  'spectral' applies the |xi|^{-q}
    multiplier (periodizes the slowly decaying output); 'conv' uses the
    zero-padded real-space Riesz convolution, which keeps honest open-space
    tails inside the box.  Tiny negative values from ringing are clamped to
    zero; the clamped mass fraction is returned and must stay small (the
    exact kernel is positive)."""
    n = f.dim
    if abs(q) < 1e-9:
        L0, M0 = _grid_for_support(f, None, q, n)
        F = sample(f, L or L0, M or M0)
        dens = grid_density(F, even=f.even, nonnegative=f.nonnegative, label="identity")
        return dens, F, 0.0
    if not 0.0 < q < n:
        raise ValueError(f"need 0 < q < n (or q = 0), got q={q}")
    L0, M0 = _grid_for_support(f, None, q, n)
    L = L if L is not None else L0
    M = M if M is not None else M0
    F = sample(f, L, M)
    if path == "spectral":
        H = field_mod.fractional_laplacian(F, -q)
    elif path == "conv":
        H = field_mod.riesz_convolution(F, q)
    else:
        raise ValueError(f"unknown path {path!r}")
    vals = np.asarray(H.samples, dtype=float)
    neg = vals < 0.0
    clamp_mass = float(-vals[neg].sum() / max(np.abs(vals).sum(), 1e-300))
    vals = np.where(neg, 0.0, vals)
    Hc = GridField(L=H.L, samples=vals, domain="space")
    dens = grid_density(
        Hc,
        even=f.even,
        nonnegative=True,
        decay=Decay("compact", L * math.sqrt(n)),
        label=f"riesz_potential[{f.label}, q={q}]",
    )
    return dens, Hc, clamp_mass


def build_example(
    K: StarBody,
    f: Density,
    q: float,
    L: Optional[float] = None,
    M: Optional[int] = None,
    seed: int = 0,
    n_samples: int = 400_000,
    path: str = "conv",
    consistent_scaling: bool = False,
) -> ConstructionResult:
    """Normalized example: D = vol(K)^{-1/n} K (volume 1) and
    g(x) = h(a x)/Z with a = vol(2K)^{1/n} and Z = integral of h(a x) over D
    (so g integrates to 1 on D).

    The ``consistent_scaling`` switch rescales 2K by vol(2K)^{-1/n} instead;
    for the radial scaling used here that is the identical body, so both
    variants produce the same result (logged in the notes)."""
    n = K.dim
    if not K.symmetric:
        raise ValueError("the construction requires an origin-symmetric body")
    if not (f.even and f.nonnegative):
        raise ValueError("the construction requires an even nonnegative density")
    if not 0.0 <= q < n - 1.0:
        raise ValueError(f"need 0 <= q < n-1, got q={q}")

    volK = volume(K)
    D = dilate(K, volK ** (-1.0 / n))
    a = (2.0**n * volK) ** (1.0 / n)
    if consistent_scaling:
        # vol(2K)^{-1/n} (2K) has radial function vol(K)^{-1/n} rho_K: same D
        D_alt = dilate(dilate(K, 2.0), (2.0**n * volK) ** (-1.0 / n))
        D = D_alt

    L0, M0 = _grid_for_support(f, K, q, n)
    h, h_field, clamp_mass = negative_order_density(
        f, q, L=L if L is not None else L0, M=M if M is not None else M0, path=path
    )

    Z, Z_err = integrate_over_body(
        lambda pts: h(a * pts), D, seed=seed, n_samples=n_samples, sampler="sobol"
    )
    if Z <= 0.0:
        raise DegenerateNormalizationError(
            f"normalizing integral {Z} +- {Z_err} is nonpositive (q={q})"
        )

    def g_eval(pts):
        return np.asarray(h(a * np.asarray(pts, dtype=float))) / Z

    g = Density(
        dim=n,
        eval_fn=g_eval,
        even=f.even,
        nonnegative=True,
        smooth=True,
        decay=Decay("compact", h.decay.scale / a),
        isotropic=False,
        label=f"construction_g[q={q}]",
    )
    notes = [
        f"arg scale a = vol(2K)^(1/n) = {a:.12g}",
        f"normalization Z = {Z:.12g} +- {Z_err:.3g}",
        f"clamped mass fraction {clamp_mass:.3g} (path={path})",
        "consistent_scaling and literal scaling give the same D (radial scaling)",
    ]
    return ConstructionResult(
        D=D,
        g=g,
        K=K,
        f=f,
        q=q,
        normalization=float(Z),
        arg_scale=float(a),
        h=h,
        h_field=h_field,
        clamp_mass=float(clamp_mass),
        grid={"L": h_field.L, "M": h_field.M, "path": path},
        seed=seed,
        notes=notes,
    )


def lower_bound_certificate(
    K: StarBody,
    f: Density,
    q: float,
    L: Optional[float] = None,
    M: Optional[int] = None,
    seed: int = 0,
    n_samples: int = 1_000_000,
) -> VerificationReport:
    """Certificate for the convolution lower bound on the doubled body:

        integral_{2K} h  >=  c_{n,q} * [integral_{sqrt(n) B} |x|^{q-n} dx]
                             * integral_K f,

    with h the negative-order Laplacian of f and the middle factor in closed
    radial form  s_n n^{q/2} / q.  Requires sqrt(n) B inside K.  Both body
    integrals are Monte Carlo with reported standard errors; the verdict
    demands a margin beyond three combined standard errors."""
    n = K.dim
    if not 0.0 < q < n:
        raise ValueError(f"need 0 < q < n, got q={q}")
    if not contains_scaled_ball(K, math.sqrt(n)):
        raise ValueError("precondition failed: sqrt(n) ball not inside the body")
    if not (f.even and f.nonnegative):
        raise ValueError("density must be even and nonnegative")

    K2 = dilate(K, 2.0)
    h, h_field, clamp_mass = negative_order_density(f, q, L=L, M=M, path="conv")
    lhs, lhs_err = integrate_over_body(h, K2, seed=seed, n_samples=n_samples)

    mass_K, mass_err = integrate_over_body(f, K, seed=seed + 1, n_samples=n_samples)
    c_nq = laplacian_kernel_constant(n, q)
    radial_factor = sphere_surface_area(n) * n ** (q / 2.0) / q
    rhs = c_nq * radial_factor * mass_K
    rhs_err = c_nq * radial_factor * mass_err

    grid_budget = 5e-3 * abs(lhs)  # convolution-path bias at these grids
    rep = VerificationReport(
        statement="laplacian_lower_bound",
        params={
            "n": n,
            "q": q,
            "body": K.family,
            "density": f.label,
            "grid": {"L": h_field.L, "M": h_field.M},
            "n_samples": n_samples,
        },
        lhs=float(lhs),
        rhs=float(rhs),
        budgets={
            "mc_3sigma": 3.0 * (lhs_err + rhs_err),
            "grid": grid_budget,
        },
        notes=[
            f"mass over body = {mass_K:.9g} +- {mass_err:.2g}",
            f"radial factor s_n n^(q/2)/q = {radial_factor:.12g}",
            f"clamped h mass fraction {clamp_mass:.3g}",
            "equality route for the section side pairs orders (-q, q)",
        ],
        seed=seed,
    )
    return rep.decide_geq()


def _box_cells(box, shape):
    """Validate a per-axis ((start, stop), ...) cell-index box."""
    out = []
    for (lo, hi), size in zip(box, shape):
        lo, hi = int(lo), int(hi)
        if not 0 <= lo < hi <= size:
            raise ValueError(f"box range ({lo}, {hi}) invalid for size {size}")
        out.append((lo, hi))
    return tuple(out)


def check_convolution_lemma(
    f_samples, g_samples, delta: float, A, B
) -> VerificationReport:
    """Discrete check of  integral_{A+B} (f*g) >= (integral_A f)(integral_B g)
    for nonnegative step functions on a common lattice (n <= 2).

    f, g are cell values (steps); A and B are boxes given as per-axis cell
    ranges ((start, stop), ...).  The convolution of step functions is
    piecewise multilinear with knots on the lattice, so both sides are
    evaluated exactly (trapezoid over knots), and the verdict uses only
    roundoff slack."""
    f_arr = np.asarray(f_samples, dtype=float)
    g_arr = np.asarray(g_samples, dtype=float)
    if f_arr.ndim != g_arr.ndim or f_arr.ndim > 2:
        raise ValueError("need matching 1-d or 2-d sample arrays")
    if np.any(f_arr < 0) or np.any(g_arr < 0):
        raise ValueError("samples must be nonnegative")
    n = f_arr.ndim
    A = _box_cells(A, f_arr.shape)
    B = _box_cells(B, g_arr.shape)

    from scipy.signal import convolve

    # knot values of the continuum convolution: (f*g)(k delta) =
    # delta^n * sum_i f_i g_{k-i-1}  (per axis)
    conv = convolve(f_arr, g_arr, method="direct") * delta**n
    # conv index c corresponds to knot k = c + 1 (per axis)

    mass_A = f_arr[tuple(slice(lo, hi) for lo, hi in A)].sum() * delta**n
    mass_B = g_arr[tuple(slice(lo, hi) for lo, hi in B)].sum() * delta**n
    rhs = mass_A * mass_B

    # trapezoid over knots of A+B: knots k from a0+b0 .. a1+b1
    knot_ranges = [(a[0] + b[0], a[1] + b[1]) for a, b in zip(A, B)]
    vals = np.zeros(tuple(hi - lo + 1 for lo, hi in knot_ranges))
    for idx in np.ndindex(vals.shape):
        k = [lo + i for (lo, _), i in zip(knot_ranges, idx)]
        c = [ki - 1 for ki in k]
        if all(0 <= ci < s for ci, s in zip(c, conv.shape)):
            vals[idx] = conv[tuple(c)]
    w = np.ones_like(vals)
    for ax in range(n):
        sl_lo = [slice(None)] * n
        sl_hi = [slice(None)] * n
        sl_lo[ax] = 0
        sl_hi[ax] = -1
        w[tuple(sl_lo)] *= 0.5
        w[tuple(sl_hi)] *= 0.5
    lhs = float(np.sum(vals * w) * delta**n)

    scale = max(abs(lhs), abs(rhs), 1.0)
    rep = VerificationReport(
        statement="convolution_support_bound",
        params={"n": n, "delta": delta, "A": A, "B": B},
        lhs=lhs,
        rhs=rhs,
        budgets={"roundoff": 1e-10 * scale},
        notes=["exact knot-trapezoid evaluation of the step-function convolution"],
    )
    return rep.decide_geq()


def surrogate_example(n: int, family: str = "scaled_ball", coverage: float = 0.95):
    """Stand-in (body, density) pair with the checkable invariants: the body
    contains the sqrt(n) ball, the density is even, smooth, nonnegative, and
    carries most of its unit mass inside the body.

    The Gaussian width is set from the chi-square quantile so the mass inside
    the inscribed sqrt(n) ball is ``coverage`` (a standard normal holds only
    ~0.6 of its mass there)."""
    from scipy.stats import chi2

    if n > 6:
        raise ValueError("surrogates supported for n <= 6")
    if family == "scaled_ball":
        K = body_mod.ball(n, math.sqrt(n))
    elif family == "scaled_cube":
        K = body_mod.cube(n, math.sqrt(n))
    else:
        raise ValueError(f"unknown surrogate family {family!r}")
    sigma = math.sqrt(n / float(chi2.ppf(coverage, df=n)))
    f = field_mod.gaussian_density(n, sigma, normalized=True)
    if not contains_scaled_ball(K, math.sqrt(n)):
        raise AssertionError("surrogate body lost its inscribed ball")
    return K, f
