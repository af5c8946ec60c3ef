import numpy as np
import pytest

from restorekit.diversity import project_embeddings
from restorekit.errors import (
    PerplexityInfeasibleError,
    TooFewPointsError,
    TooManyPointsError,
)


def two_clusters(n_per=25, dim=8, gap=3.0, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.normal(0, 0.5, (n_per, dim)) + gap
    b = rng.normal(0, 0.5, (n_per, dim)) - gap
    return np.vstack([a, b]), np.array([0] * n_per + [1] * n_per)


def test_separated_clusters_stay_separated():
    x, labels = two_clusters()
    y = project_embeddings(x, perplexity=10, iterations=400, seed=1)
    intra, inter = [], []
    n = len(x)
    for i in range(n):
        for j in range(i + 1, n):
            d = np.linalg.norm(y[i] - y[j])
            (intra if labels[i] == labels[j] else inter).append(d)
    assert np.mean(inter) > np.mean(intra)


def test_deterministic_per_seed():
    x, _ = two_clusters(seed=3)
    a = project_embeddings(x, perplexity=8, iterations=300, seed=5)
    b = project_embeddings(x, perplexity=8, iterations=300, seed=5)
    assert np.array_equal(a, b)
    c = project_embeddings(x, perplexity=8, iterations=300, seed=6)
    assert not np.array_equal(a, c)


def test_kl_non_increasing_over_final_window():
    x, _ = two_clusters(seed=7)
    _, history = project_embeddings(x, perplexity=10, iterations=350, seed=2,
                                    return_kl_history=True)
    assert len(history) == 50
    for earlier, later in zip(history, history[1:]):
        assert later <= earlier + 1e-12


def test_exact_permutation_equivariance():
    x, _ = two_clusters(seed=9)
    rng = np.random.Generator(np.random.PCG64(11))
    perm = rng.permutation(len(x))
    y = project_embeddings(x, perplexity=9, iterations=300, seed=4)
    y_perm = project_embeddings(x[perm], perplexity=9, iterations=300, seed=4)
    assert np.array_equal(y_perm, y[perm])


def test_output_shape():
    x, _ = two_clusters(n_per=12)
    y = project_embeddings(x, perplexity=6, iterations=200, seed=0)
    assert y.shape == (24, 2)
    assert np.isfinite(y).all()


def test_perplexity_bounds():
    x, _ = two_clusters(n_per=13)  # N=26, (N-1)/3 ~ 8.33
    with pytest.raises(PerplexityInfeasibleError):
        project_embeddings(x, perplexity=8.34, iterations=200)
    with pytest.raises(PerplexityInfeasibleError):
        project_embeddings(x, perplexity=4.9, iterations=200)


def test_too_few_and_too_many_points():
    rng = np.random.Generator(np.random.PCG64(0))
    with pytest.raises(TooFewPointsError):
        project_embeddings(rng.normal(size=(15, 4)), perplexity=5, iterations=200)
    with pytest.raises(TooManyPointsError):
        project_embeddings(rng.normal(size=(2001, 4)), perplexity=5, iterations=200)
