"""Direction meshes on the unit sphere and orthonormal hyperplane frames.

Meshes are deterministic: uniform angles for n = 2, a Fibonacci spiral for
n = 3, and seeded uniform directions for n >= 4.  Frames come from a
Householder reflector so quadrature nodes are reproducible.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "direction_mesh",
    "householder_frame",
    "normalize",
    "random_directions",
]

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def normalize(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(nrm == 0.0):
        raise ValueError("cannot normalize the zero vector")
    return x / nrm


def random_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(n,)))
    v = rng.standard_normal((count, n))
    return normalize(v)


def direction_mesh(n: int, count: int = 0, seed: int = 0) -> np.ndarray:
    """Deterministic quasi-uniform mesh of unit directions, shape (N, n).

    Defaults: 256 angles (n=2), 400 spiral points (n=3), 512 seeded uniform
    directions (n >= 4).
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if count <= 0:
        count = {2: 256, 3: 400}.get(n, 512)
    if n == 2:
        th = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if n == 3:
        i = np.arange(count, dtype=float)
        z = 1.0 - (2.0 * i + 1.0) / count
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        th = GOLDEN_ANGLE * i
        return np.stack([r * np.cos(th), r * np.sin(th), z], axis=1)
    return random_directions(n, count, seed)


def householder_frame(xi) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to the unit vector xi.

    Returns an (n, n-1) matrix whose columns complete xi to an orthonormal
    basis, built from the reflector that maps e1 to xi (deterministic,
    no Gram-Schmidt drift).
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[0]
    if abs(np.linalg.norm(xi) - 1.0) > 1e-10:
        raise ValueError("xi must be a unit vector")
    e1 = np.zeros(n)
    e1[0] = 1.0
    v = xi - e1
    nv = np.linalg.norm(v)
    if nv < 1e-14:
        H = np.eye(n)
    else:
        u = v / nv
        H = np.eye(n) - 2.0 * np.outer(u, u)
    # column 0 of H is xi itself; the rest span the orthogonal hyperplane
    return H[:, 1:]
