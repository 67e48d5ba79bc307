"""PCA, retention criterion, and cosine-kernel projection against oracles."""

import numpy as np
import pytest

from rootspace.errors import ZeroVector
from rootspace.reduction import (
    DegenerateInput,
    guttman_kaiser_dim,
    pca_fit,
    project2d_cosine_kernel,
    reduce_rows,
)

from . import oracles


def test_rank_deficient_plane():
    rng = np.random.default_rng(1)
    basis = rng.normal(size=(2, 10))
    rows = rng.normal(size=(12, 2)) @ basis
    model = pca_fit(rows)
    assert np.all(model.eigenvalues[2:] <= 1e-10)
    assert model.explained_variance_ratio[:2].sum() == pytest.approx(1.0, abs=1e-12)


def test_full_rank_reconstruction():
    rng = np.random.default_rng(2)
    rows = rng.normal(size=(8, 5))
    model = pca_fit(rows)
    coords = model.project(rows)
    assert np.max(np.abs(model.reconstruct(coords) - rows)) < 1e-8


def test_orthonormal_components():
    rng = np.random.default_rng(3)
    model = pca_fit(rng.normal(size=(20, 7)))
    gram = model.components @ model.components.T
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) < 1e-8
    assert np.all(np.diff(model.eigenvalues) <= 1e-12)
    assert model.explained_variance_ratio.sum() <= 1 + 1e-9


def test_eigenvalues_match_jacobi_oracle():
    rng = np.random.default_rng(4)
    rows = rng.normal(size=(8, 5))
    model = pca_fit(rows)
    centered = rows - rows.mean(axis=0)
    cov = centered.T @ centered / (rows.shape[0] - 1)
    ref, _ = oracles.jacobi_eigh(cov)
    assert np.max(np.abs(model.eigenvalues - ref[: len(model.eigenvalues)])) < 1e-9


def test_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        pca_fit(np.zeros((1, 4)))
    with pytest.raises(DegenerateInput):
        pca_fit(np.ones((5, 4)))  # zero variance everywhere
    with pytest.raises(DegenerateInput):
        pca_fit(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_guttman_kaiser_examples():
    assert guttman_kaiser_dim([3, 1, 0.5, 0.5]) == 1
    assert guttman_kaiser_dim([2.0, 2.0, 2.0]) == 1
    assert guttman_kaiser_dim([5, 4, 1, 0.5, 0.2, 0.1]) == 2


def test_guttman_kaiser_scale_invariance():
    rng = np.random.default_rng(5)
    for _ in range(100):
        ev = np.sort(rng.uniform(0, 10, size=rng.integers(2, 30)))[::-1]
        k = guttman_kaiser_dim(ev)
        assert guttman_kaiser_dim(ev * 37.5) == k
        assert guttman_kaiser_dim(ev * 1e-6) == k


def test_reduce_output_dimension():
    rng = np.random.default_rng(6)
    rows = rng.normal(size=(15, 9))
    coords, model, k = reduce_rows(rows)
    assert coords.shape == (15, k)
    assert k == guttman_kaiser_dim(model.eigenvalues)
    coords_forced, _, k_forced = reduce_rows(rows, force_dim=3)
    assert k_forced == 3 and coords_forced.shape == (15, 3)


def test_reduce_preserves_distances_when_tail_is_zero():
    rng = np.random.default_rng(7)
    basis = np.eye(6)[:2]
    rows = rng.normal(size=(10, 2)) @ basis * 5
    coords, _, k = reduce_rows(rows)
    orig = np.linalg.norm(rows[:, None] - rows[None, :], axis=-1)
    red = np.linalg.norm(coords[:, None] - coords[None, :], axis=-1)
    assert np.max(np.abs(orig - red)) < 1e-8


def test_project2d_orthogonal_triple_is_equilateral():
    coords = project2d_cosine_kernel(np.eye(3) * 4.0)
    d01 = np.linalg.norm(coords[0] - coords[1])
    d02 = np.linalg.norm(coords[0] - coords[2])
    d12 = np.linalg.norm(coords[1] - coords[2])
    assert d01 == pytest.approx(d02, abs=1e-9)
    assert d01 == pytest.approx(d12, abs=1e-9)


def test_project2d_duplicate_vectors_coincide():
    rng = np.random.default_rng(8)
    v = rng.normal(size=4)
    rows = np.vstack([v, 2 * v, rng.normal(size=4), rng.normal(size=4)])
    coords = project2d_cosine_kernel(rows)
    assert np.max(np.abs(coords[0] - coords[1])) < 1e-10


def test_project2d_scale_invariance():
    rng = np.random.default_rng(9)
    rows = rng.normal(size=(5, 6))
    a = project2d_cosine_kernel(rows)
    b = project2d_cosine_kernel(rows * 12.0)
    assert np.max(np.abs(a - b)) < 1e-9
    # double-centering leaves the layout centered at the origin
    assert np.max(np.abs(a.sum(axis=0))) < 1e-9


def test_reduce_preserves_cosine_ordering_with_negligible_tail():
    # planted set: all signal in 3 dims, <1% variance in the other 7
    rng = np.random.default_rng(11)
    basis, _ = np.linalg.qr(rng.normal(size=(10, 3)))
    signal = rng.normal(size=(30, 3)) @ basis.T
    noise = rng.normal(size=(30, 10)) * 1e-3
    rows = signal + noise
    coords, _, k = reduce_rows(rows)
    assert k == 3  # the retention criterion keeps exactly the signal dims
    centered = rows - rows.mean(axis=0)

    def cos(u, v):
        return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

    before = np.argsort([cos(centered[0], r) for r in centered[1:]])
    after = np.argsort([cos(coords[0], c) for c in coords[1:]])
    assert np.array_equal(before, after)


def test_project2d_matches_dense_eigensolver():
    rng = np.random.default_rng(10)
    rows = rng.normal(size=(6, 7))
    coords = project2d_cosine_kernel(rows)
    unit = rows / np.linalg.norm(rows, axis=1)[:, None]
    gram = unit @ unit.T
    n = gram.shape[0]
    H = np.eye(n) - np.full((n, n), 1 / n)
    vals, vecs = oracles.jacobi_eigh(H @ gram @ H)
    expect = vecs[:, :2] * np.sqrt(np.clip(vals[:2], 0, None))
    for axis in range(2):
        direct = np.max(np.abs(coords[:, axis] - expect[:, axis]))
        flipped = np.max(np.abs(coords[:, axis] + expect[:, axis]))
        assert min(direct, flipped) < 1e-8


def test_project2d_errors():
    with pytest.raises(DegenerateInput):
        project2d_cosine_kernel(np.eye(2))
    with pytest.raises(ZeroVector):
        project2d_cosine_kernel(np.array([[1.0, 0], [0, 0], [0, 1.0]]))
