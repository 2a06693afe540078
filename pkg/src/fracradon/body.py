"""Star and convex bodies represented by their radial function on the sphere.

The radial function rho gives the boundary distance in each direction and is
extended to R^n \\ {0} with homogeneity of degree -1, so the gauge
(Minkowski functional) is |x|_2 / rho(x/|x|_2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .constants import sphere_surface_area, unit_ball_volume
from .sphere import direction_mesh, normalize

__all__ = [
    "StarBody",
    "ball",
    "cube",
    "lp_ball",
    "ellipsoid",
    "custom_body",
    "body_from_spec",
    "minkowski_functional",
    "volume",
    "volume_mc",
    "dilate",
    "radial_distance",
    "contains_scaled_ball",
    "integrate_over_body",
    "sample_in_body",
]


@dataclass(frozen=True)
class StarBody:
    """A star body: dim, vectorized radial function on unit directions,
    family tag with parameters, and an origin-symmetry flag."""

    dim: int
    rho: Callable[[np.ndarray], np.ndarray]
    family: str = "custom"
    params: dict = field(default_factory=dict)
    symmetric: bool = True

    def radial(self, directions) -> np.ndarray:
        """rho on unit directions, shape (..., dim) -> (...)."""
        d = np.asarray(directions, dtype=float)
        return np.asarray(self.rho(d), dtype=float)

    def __repr__(self):
        return f"StarBody({self.family}, dim={self.dim}, params={self.params})"


def ball(n: int, r: float = 1.0) -> StarBody:
    r = float(r)
    return StarBody(n, lambda d: np.full(d.shape[:-1], r), "ball", {"r": r})


def cube(n: int, a: float = 1.0) -> StarBody:
    """Axis-aligned cube [-a, a]^n (side 2a)."""
    a = float(a)
    return StarBody(
        n, lambda d: a / np.max(np.abs(d), axis=-1), "cube", {"a": a}
    )


def lp_ball(n: int, p: float, r: float = 1.0) -> StarBody:
    p, r = float(p), float(r)
    return StarBody(
        n,
        lambda d: r / np.sum(np.abs(d) ** p, axis=-1) ** (1.0 / p),
        "lp_ball",
        {"p": p, "r": r},
    )


def ellipsoid(n: int, axes) -> StarBody:
    axes = np.asarray(axes, dtype=float)
    if axes.shape != (n,) or np.any(axes <= 0):
        raise ValueError("need one positive semi-axis per dimension")
    return StarBody(
        n,
        lambda d: 1.0 / np.sqrt(np.sum(np.square(d / axes), axis=-1)),
        "ellipsoid",
        {"axes": axes.tolist()},
    )


def custom_body(n: int, rho: Callable, symmetric: bool = True) -> StarBody:
    return StarBody(n, rho, "custom", {}, symmetric)


def body_from_spec(spec) -> StarBody:
    """Build a body from a JSON spec {dim, family, params, symmetric} (dict
    or path to a file)."""
    if isinstance(spec, (str,)):
        with open(spec) as fh:
            spec = json.load(fh)
    n = int(spec["dim"])
    family = spec["family"]
    params = spec.get("params", {})
    if family == "ball":
        return ball(n, params.get("r", 1.0))
    if family == "cube":
        return cube(n, params.get("a", 1.0))
    if family == "lp_ball":
        return lp_ball(n, params["p"], params.get("r", 1.0))
    if family == "ellipsoid":
        return ellipsoid(n, params["axes"])
    raise ValueError(f"unknown body family {family!r}")


def minkowski_functional(K: StarBody, x):
    """Gauge of K: positive, homogeneous of degree 1, <= 1 exactly on K.
    The zero vector maps to 0 by convention (the origin is interior).
    Accepts point arrays of shape (..., dim)."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    lead = x.shape[:-1]
    pts = x.reshape(-1, K.dim)
    r = np.linalg.norm(pts, axis=-1)
    out = np.zeros_like(r)
    nz = r > 0.0
    if np.any(nz):
        out[nz] = r[nz] / K.radial(pts[nz] / r[nz][:, None])
    return float(out[0]) if scalar else out.reshape(lead)


def contains(K: StarBody, x, tol: float = 0.0) -> np.ndarray:
    return minkowski_functional(K, x) <= 1.0 + tol


def dilate(K: StarBody, lam: float) -> StarBody:
    """Scaled body lam*K (radial function multiplied by lam)."""
    if lam <= 0.0:
        raise ValueError("dilation factor must be positive")
    base = K.rho
    return replace(
        K,
        rho=lambda d, _b=base, _l=float(lam): _l * np.asarray(_b(d)),
        params={**K.params, "dilated_by": float(lam) * K.params.get("dilated_by", 1.0)},
    )


def _sphere_integral_radial_power(K: StarBody, power: float, epsrel: float = 1e-10):
    """integral over S^{n-1} of rho(xi)^power, by adaptive quadrature in the
    angular coordinates (n <= 4)."""
    n = K.dim
    if n == 1:
        d = np.array([[1.0], [-1.0]])
        return float(np.sum(K.radial(d) ** power))
    if n == 2:
        f = lambda th: float(K.radial(np.array([math.cos(th), math.sin(th)])) ** power)
        val, _ = quad(f, 0.0, 2.0 * math.pi, epsabs=0.0, epsrel=epsrel, limit=800)
        return val
    if n == 3:
        def inner(phi):
            g = lambda th: float(
                K.radial(
                    np.array(
                        [
                            math.sin(th) * math.cos(phi),
                            math.sin(th) * math.sin(phi),
                            math.cos(th),
                        ]
                    )
                )
                ** power
            ) * math.sin(th)
            v, _ = quad(g, 0.0, math.pi, epsabs=0.0, epsrel=epsrel, limit=400)
            return v
        val, _ = quad(inner, 0.0, 2.0 * math.pi, epsabs=0.0, epsrel=epsrel, limit=400)
        return val
    if n == 4:
        # tensor Gauss-Legendre in hyperspherical angles, vectorized
        N1, N2, N3 = 96, 96, 192
        x1, w1 = np.polynomial.legendre.leggauss(N1)
        x2, w2 = np.polynomial.legendre.leggauss(N2)
        t1 = 0.5 * math.pi * (x1 + 1.0)
        t2 = 0.5 * math.pi * (x2 + 1.0)
        t3 = 2.0 * math.pi * (np.arange(N3) + 0.5) / N3
        W1 = 0.5 * math.pi * w1 * np.sin(t1) ** 2
        W2 = 0.5 * math.pi * w2 * np.sin(t2)
        W3 = np.full(N3, 2.0 * math.pi / N3)
        T1, T2, T3 = np.meshgrid(t1, t2, t3, indexing="ij")
        dirs = np.stack(
            [
                np.cos(T1),
                np.sin(T1) * np.cos(T2),
                np.sin(T1) * np.sin(T2) * np.cos(T3),
                np.sin(T1) * np.sin(T2) * np.sin(T3),
            ],
            axis=-1,
        )
        vals = K.radial(dirs) ** power
        return float(np.einsum("ijk,i,j,k->", vals, W1, W2, W3))
    raise ValueError("radial quadrature supports n <= 4")


def exact_volume(K: StarBody):
    """Closed-form volume for the built-in families, None for custom bodies
    (dilations of closed-form families are handled)."""
    import scipy.special as sp

    lam = K.params.get("dilated_by", 1.0)
    n = K.dim
    if K.family == "ball":
        return unit_ball_volume(n) * (lam * K.params["r"]) ** n
    if K.family == "cube":
        return (2.0 * lam * K.params["a"]) ** n
    if K.family == "lp_ball":
        p, r = K.params["p"], K.params["r"]
        return (2.0 * lam * r) ** n * sp.gamma(1.0 + 1.0 / p) ** n / sp.gamma(1.0 + n / p)
    if K.family == "ellipsoid":
        return unit_ball_volume(n) * lam**n * float(np.prod(K.params["axes"]))
    return None


def volume(K: StarBody, method: str = "auto", epsrel: float = 1e-9) -> float:
    """Volume of K.

    method 'auto' uses the family closed form when one exists, falling back
    to the radial formula (1/n) * integral of rho^n over the sphere;
    'radial_quadrature' forces the quadrature path.  Quadrature refuses
    n > 4 (use volume_mc).
    """
    if method == "auto":
        v = exact_volume(K)
        if v is not None:
            return v
    elif method != "radial_quadrature":
        raise ValueError(f"unknown method {method!r}")
    if K.dim > 4:
        raise ValueError("radial quadrature refused for n > 4; use volume_mc")
    import warnings
    from scipy.integrate import IntegrationWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return _sphere_integral_radial_power(K, float(K.dim), epsrel) / K.dim


def volume_mc(K: StarBody, seed: int = 0, n_samples: int = 200_000):
    """Monte Carlo volume: surface measure times the mean of rho^n over
    uniform directions.  Returns (estimate, stderr)."""
    n = K.dim
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n, 1)))
    d = rng.standard_normal((n_samples, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    vals = K.radial(d) ** n
    s = sphere_surface_area(n) / n
    est = s * float(np.mean(vals))
    err = s * float(np.std(vals, ddof=1) / math.sqrt(n_samples))
    return est, err


def radial_distance(K: StarBody, L: StarBody, mesh_size: int = 0, seed: int = 0):
    """Sup-distance between radial functions on a deterministic direction
    mesh.  Returns (distance, mesh_size_used)."""
    if K.dim != L.dim:
        raise ValueError("bodies must share a dimension")
    mesh = direction_mesh(K.dim, mesh_size, seed)
    d = float(np.max(np.abs(K.radial(mesh) - L.radial(mesh))))
    return d, len(mesh)


def contains_scaled_ball(K: StarBody, r: float, mesh_size: int = 0, seed: int = 0) -> bool:
    """True iff min rho over the direction mesh is >= r."""
    if r <= 0.0:
        raise ValueError("radius must be positive")
    mesh = direction_mesh(K.dim, mesh_size, seed)
    return bool(np.min(K.radial(mesh)) >= r * (1.0 - 1e-12))


def sample_in_body(K: StarBody, count: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Importance sample points covering K: uniform directions, radius
    r = rho * u^{1/n}.  Returns (points, importance_weights) such that
    integral_K g = mean(g(points) * weights)."""
    n = K.dim
    d = rng.standard_normal((count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    rho = K.radial(d)
    u = rng.random(count)
    pts = d * (rho * u ** (1.0 / n))[:, None]
    weights = sphere_surface_area(n) / n * rho**n
    return pts, weights


def integrate_over_body(
    g: Callable,
    K: StarBody,
    seed: int = 0,
    n_samples: int = 200_000,
    sampler: str = "mc",
):
    """Integral of g over K with a standard-error estimate, by radial
    importance sampling.  g must be vectorized over points of shape (N, n).

    sampler 'mc' is plain Monte Carlo; 'sobol' uses scrambled Sobol points
    (8 independent scrambles, error from the scatter of their means), which
    converges much faster for smooth integrands."""
    n = K.dim
    s_factor = sphere_surface_area(n) / n
    if sampler == "mc":
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n, 2)))
        pts, w = sample_in_body(K, n_samples, rng)
        vals = np.asarray(g(pts), dtype=float) * w
        est = float(np.mean(vals))
        err = float(np.std(vals, ddof=1) / math.sqrt(n_samples))
        return est, err
    if sampler != "sobol":
        raise ValueError(f"unknown sampler {sampler!r}")

    from scipy.stats import norm, qmc

    n_scrambles = 8
    per = max(256, int(2 ** math.ceil(math.log2(max(n_samples // n_scrambles, 1)))))
    means = []
    for s in range(n_scrambles):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n, 3, s)))
        eng = qmc.Sobol(d=n + 1, scramble=True, seed=rng)
        u = eng.random(per)
        z = norm.ppf(np.clip(u[:, :n], 1e-12, 1.0 - 1e-12))
        d = z / np.linalg.norm(z, axis=1, keepdims=True)
        rho = K.radial(d)
        r = rho * u[:, n] ** (1.0 / n)
        pts = d * r[:, None]
        vals = np.asarray(g(pts), dtype=float) * (s_factor * rho**n)
        means.append(float(np.mean(vals)))
    est = float(np.mean(means))
    err = float(np.std(means, ddof=1) / math.sqrt(n_scrambles))
    return est, err
