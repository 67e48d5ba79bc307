"""PCA with Guttman-Kaiser retention and cosine-kernel 2D projection.

``pca_fit`` eigendecomposes the sample covariance of mean-centered rows and
keeps the full min(n-1, D) spectrum; ``guttman_kaiser_dim`` counts the
eigenvalues strictly above the mean eigenvalue (floor 1); ``reduce`` chains
the two. ``project2d_cosine_kernel`` double-centers the cosine Gram matrix
of one data point's vectors and lays the items out on its top two
eigenvectors scaled by sqrt(eigenvalue).

Component signs are fixed so the first non-negligible loading of every
axis is positive; outputs are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StatsError, ZeroVector

__all__ = [
    "PcaModel",
    "pca_fit",
    "guttman_kaiser_dim",
    "reduce_rows",
    "project2d_cosine_kernel",
    "DegenerateInput",
]

_SIGN_EPS = 1e-12


class DegenerateInput(StatsError):
    pass


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip rows so each one's first entry with |x| > eps is positive."""
    out = vectors.copy()
    for i, row in enumerate(out):
        for x in row:
            if abs(x) > _SIGN_EPS:
                if x < 0:
                    out[i] = -row
                break
    return out


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # K x D, rows orthonormal
    eigenvalues: np.ndarray  # K, non-increasing, >= 0
    explained_variance_ratio: np.ndarray

    def project(self, rows, k: int | None = None) -> np.ndarray:
        comps = self.components if k is None else self.components[:k]
        return (np.asarray(rows, dtype=np.float64) - self.mean) @ comps.T

    def reconstruct(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.float64)
        return coords @ self.components[: coords.shape[1]] + self.mean


def pca_fit(rows) -> PcaModel:
    """Covariance eigendecomposition of mean-centered rows."""
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DegenerateInput("need at least 2 rows")
    if not np.all(np.isfinite(X)):
        raise DegenerateInput("non-finite input")
    n, d = X.shape
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / (n - 1)
    total_var = float(np.trace(cov))
    if total_var <= 0.0:
        raise DegenerateInput("zero variance in every direction")
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    k = min(n - 1, d)
    eigvals = np.clip(eigvals[order][:k], 0.0, None)
    components = _fix_signs(eigvecs[:, order][:, :k].T)
    return PcaModel(
        mean=mean,
        components=components,
        eigenvalues=eigvals,
        explained_variance_ratio=eigvals / total_var,
    )


def guttman_kaiser_dim(eigenvalues) -> int:
    """Count of eigenvalues strictly above their mean; at least 1."""
    ev = np.asarray(eigenvalues, dtype=np.float64)
    if ev.size == 0:
        raise ValueError("empty spectrum")
    if np.any(ev < 0) or np.any(np.diff(ev) > 0):
        raise ValueError("eigenvalues must be sorted descending and non-negative")
    return max(int(np.sum(ev > ev.mean())), 1)


def reduce_rows(rows, force_dim: int | None = None):
    """Project rows onto the Guttman-Kaiser slice of their own PCA.

    Returns ``(coords, model, k)``. ``force_dim`` overrides the criterion
    (clamped to the available spectrum).
    """
    model = pca_fit(rows)
    k = force_dim if force_dim is not None else guttman_kaiser_dim(model.eigenvalues)
    k = max(1, min(k, model.components.shape[0]))
    return model.project(rows, k), model, k


def project2d_cosine_kernel(rows) -> np.ndarray:
    """2D layout of one data point's vectors from the centered cosine Gram.

    G_ij = cosine(x_i, x_j); after double-centering, the coordinates are
    the top-2 eigenvectors scaled by sqrt(eigenvalue). Translation of the
    inputs is irrelevant by construction; uniform scaling too, because the
    kernel only sees angles.
    """
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 3:
        raise DegenerateInput("need at least 3 vectors")
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector("cannot take cosine of a zero vector")
    unit = X / norms[:, None]
    gram = np.clip(unit @ unit.T, -1.0, 1.0)
    n = gram.shape[0]
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    centered = centering @ gram @ centering
    eigvals, eigvecs = np.linalg.eigh(centered)
    order = np.argsort(eigvals)[::-1][:2]
    top = np.clip(eigvals[order], 0.0, None)
    axes = _fix_signs(eigvecs[:, order].T)
    return (axes * np.sqrt(top)[:, None]).T
