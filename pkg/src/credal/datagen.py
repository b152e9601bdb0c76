"""Synthetic Gaussian-mixture scenarios for source/target experiments.

Eight benchmark scenarios come built in: two well-separated source/target
families in 3-d (S1-*/T1-*, cluster means 5 apart, target smaller or noisier
than the source) and two overlapping families in 2-d (S2-*/T2-*, cluster
means 1 apart, target slightly shifted).
"""

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset

__all__ = ["ScenarioSpec", "generate", "builtin_scenarios"]


@dataclass(frozen=True)
class ScenarioSpec:
    """Mixture recipe: per-cluster (mean, covariance, size) plus global noise.

    ``noise_sigma`` adds independent zero-mean Gaussian noise per coordinate
    on top of the sampled points (0 disables it).
    """

    name: str
    clusters: tuple
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.clusters:
            raise ValueError("spec needs at least one cluster")
        if not self.noise_sigma >= 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        norm = []
        p = None
        for entry in self.clusters:
            if len(entry) != 3:
                raise ValueError("each cluster must be (mean, covariance, size)")
            mean, cov, size = entry
            mean = np.asarray(mean, dtype=float)
            cov = np.asarray(cov, dtype=float)
            if mean.ndim != 1:
                raise ValueError("cluster mean must be a vector")
            if p is None:
                p = mean.size
            if mean.size != p:
                raise ValueError("all cluster means must share one dimension")
            if cov.shape != (p, p):
                raise ValueError(f"covariance must be {p}x{p}, got {cov.shape}")
            if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
                raise ValueError("cluster parameters must be finite")
            if not np.allclose(cov, cov.T):
                raise ValueError("covariance must be symmetric")
            eigs = np.linalg.eigvalsh(cov)
            if eigs.min() < -1e-10 * max(1.0, eigs.max()):
                raise ValueError("covariance must be positive semidefinite")
            if not (isinstance(size, (int, np.integer)) and size >= 1):
                raise ValueError(f"cluster size must be a positive integer, got {size}")
            norm.append((mean, cov, int(size)))
        object.__setattr__(self, "clusters", tuple(norm))

    @property
    def p(self) -> int:
        return self.clusters[0][0].size

    @property
    def n(self) -> int:
        return sum(size for _, _, size in self.clusters)


def _factor(cov: np.ndarray) -> np.ndarray:
    """Matrix L with L L^T = cov; Cholesky, or an eigen factor if singular."""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(cov)
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def generate(spec: ScenarioSpec) -> Dataset:
    """Sample the mixture described by ``spec``; deterministic per seed.

    Clusters are sampled in listed order (standard normals through the
    covariance factor, plus the mean), labels are 1-based cluster indices,
    then the optional noise is added to the whole feature matrix.
    """
    rng = np.random.default_rng(spec.seed)
    blocks = []
    labels = []
    for index, (mean, cov, size) in enumerate(spec.clusters, start=1):
        z = rng.standard_normal((size, spec.p))
        blocks.append(z @ _factor(cov).T + mean)
        labels.append(np.full(size, index, dtype=np.int64))
    features = np.vstack(blocks)
    if spec.noise_sigma > 0:
        features = features + rng.normal(0.0, spec.noise_sigma, features.shape)
    return Dataset(features=features, labels=np.concatenate(labels), name=spec.name)


def _spherical(name, means, variance, size, noise_sigma=0.0, seed=0):
    means = [np.asarray(m, dtype=float) for m in means]
    p = means[0].size
    cov = variance * np.eye(p)
    return ScenarioSpec(
        name=name,
        clusters=tuple((m, cov, size) for m in means),
        noise_sigma=noise_sigma,
        seed=seed,
    )


def builtin_scenarios() -> dict[str, ScenarioSpec]:
    """The named benchmark scenarios, keyed by name."""
    means3 = [[0, 0, 0], [0, 0, 5], [0, 5, 0]]
    means4 = means3 + [[5, 0, 0]]
    means2d2 = [[0, 0], [1, 0]]
    means2d2_shift = [[0, 0.2], [1, 0.2]]
    means2d4 = [[0, 0], [1, 0], [0, 1], [1, 1]]
    means2d4_shift = [[0.2, 0.2], [1.2, 0.2], [0.2, 1.2], [1.2, 1.2]]
    specs = [
        _spherical("S1-1", means3, 3.0, 200),
        _spherical("T1-1", means3, 4.0, 20),
        _spherical("S1-2", means4, 3.0, 200),
        _spherical("T1-2", means4, 4.0, 20),
        _spherical("T1-3", means3, 3.0, 200, noise_sigma=5.0),
        _spherical("T1-4", means4, 3.0, 200, noise_sigma=3.0),
        _spherical("S2-1", means2d2, 1.0, 100),
        _spherical("T2-1", means2d2_shift, 1.0, 10),
        _spherical("S2-2", means2d4, 1.0, 100),
        _spherical("T2-2", means2d4_shift, 1.0, 30),
    ]
    return {spec.name: spec for spec in specs}
