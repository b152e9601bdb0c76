"""Credal clustering engine.

Implements evidential c-means style alternating minimization. The objective
couples three ingredients: a data term weighing each object's mass on a focal
set by the squared distance to the set's barycenter, a fixed penalty ``delta``
for mass on the empty set (outliers), and optionally a transfer term that
pulls the fitted barycenters toward barycenters imported from a source domain
through a row-stochastic association matrix.

Each round updates, in order: the credal partition (closed form per object),
the association matrix (closed form per source focal set), and the singleton
centers (a c x c linear system assembled from both terms). Every step is the
exact block minimizer, so the objective trace is non-increasing.
"""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.spatial.distance import cdist

from .belief import (
    CredalPartition,
    FocalStructure,
    compute_barycenters,
    enumerate_focal_sets,
    harden,
)
from .dataset import Dataset

__all__ = [
    "FitConfig",
    "SourceKnowledge",
    "AssociationMatrix",
    "ClusterModel",
    "DegenerateFitError",
    "init_centers",
    "squared_distances",
    "update_masses",
    "update_association",
    "assemble_system",
    "solve_centers",
    "objective",
    "ecm_fit",
    "tecm_fit",
    "extract_source_knowledge",
    "grid_search_lambda",
    "resolve_workers",
    "DEFAULT_LAMBDA_GRID",
]

ROW_TOL = 1e-12

# Balance-coefficient grid used for lambda selection when none is given.
DEFAULT_LAMBDA_GRID = (0.0, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0, 300.0, 500.0, 1000.0)


class DegenerateFitError(RuntimeError):
    """Raised when the center system degenerates to all zeros."""


@dataclass(frozen=True)
class FitConfig:
    """Hyperparameters shared by all fits.

    alpha      exponent penalizing focal-set cardinality
    beta       mass exponent (> 1); 2 gives the quadratic standard form
    delta      outlier distance; objects farther than delta from every
               barycenter shed mass to the empty set
    gamma      association exponent (> 1)
    lam        transfer balance coefficient (0 disables the transfer term)
    epsilon    absolute objective-change threshold for convergence
    max_iter   iteration cap
    max_cardinality   focal-set size cap, None for the full structure
    seed       seed for center initialization
    ridge      diagonal boost factor for near-singular center systems
    """

    alpha: float = 1.0
    beta: float = 2.0
    delta: float = 10.0
    gamma: float = 2.0
    lam: float = 0.0
    epsilon: float = 1e-3
    max_iter: int = 100
    max_cardinality: int | None = None
    seed: int = 0
    ridge: float = 1e-9

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.beta > 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not self.lam >= 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not (isinstance(self.max_iter, (int, np.integer)) and self.max_iter >= 1):
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.max_cardinality is not None and not (
            isinstance(self.max_cardinality, (int, np.integer))
            and self.max_cardinality >= 1
        ):
            raise ValueError(
                f"max_cardinality must be a positive integer or None, "
                f"got {self.max_cardinality}"
            )
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed}")
        if not self.ridge >= 0:
            raise ValueError(f"ridge must be >= 0, got {self.ridge}")


@dataclass(frozen=True)
class SourceKnowledge:
    """Barycenters of every source focal set, plus the source structure."""

    barycenters: np.ndarray
    structure: FocalStructure

    def __post_init__(self):
        bary = np.array(self.barycenters, dtype=float)
        if bary.ndim != 2 or bary.shape[0] != self.structure.n_sets:
            raise ValueError(
                f"barycenters must have shape (f, p) with f={self.structure.n_sets}, "
                f"got {bary.shape}"
            )
        if not np.all(np.isfinite(bary)):
            raise ValueError("source barycenters must be finite")
        bary.setflags(write=False)
        object.__setattr__(self, "barycenters", bary)

    @property
    def p(self) -> int:
        return self.barycenters.shape[1]


@dataclass(frozen=True)
class AssociationMatrix:
    """Row-stochastic map from source focal sets to target focal sets."""

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        if r.ndim != 2:
            raise ValueError("association must be a 2-d array (source f x target f)")
        if not np.all(np.isfinite(r)):
            raise ValueError("association weights must be finite")
        if r.size and r.min() < -ROW_TOL:
            raise ValueError("association weights must be nonnegative")
        rows = r.sum(axis=1)
        if r.size and np.max(np.abs(rows - 1.0)) > ROW_TOL:
            k = int(np.argmax(np.abs(rows - 1.0)))
            raise ValueError(
                f"association row {k} sums to {float(rows[k])!r}, expected 1 within {ROW_TOL}"
            )
        r.setflags(write=False)
        object.__setattr__(self, "r", r)


@dataclass(frozen=True)
class ClusterModel:
    """Result of a fit: centers, barycenters, partition, and diagnostics."""

    centers: np.ndarray
    barycenters: np.ndarray
    structure: FocalStructure
    partition: CredalPartition
    association: AssociationMatrix | None
    config: FitConfig
    objective_trace: tuple[float, ...]
    converged: bool
    iterations: int

    def __post_init__(self):
        centers = np.array(self.centers, dtype=float)
        bary = np.array(self.barycenters, dtype=float)
        centers.setflags(write=False)
        bary.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "barycenters", bary)
        object.__setattr__(self, "objective_trace", tuple(float(v) for v in self.objective_trace))
        if centers.shape[0] != self.structure.c:
            raise ValueError("centers must have one row per cluster")
        expected = compute_barycenters(centers, self.structure)
        if np.max(np.abs(bary - expected)) > 1e-12:
            raise ValueError("barycenters are inconsistent with centers")
        if self.iterations != len(self.objective_trace):
            raise ValueError("iterations must equal the trace length")
        trace = np.asarray(self.objective_trace)
        if trace.size > 1 and np.max(np.diff(trace)) > 1e-9:
            warnings.warn(
                "objective trace is not non-increasing; the fit may be degenerate",
                RuntimeWarning,
                stacklevel=2,
            )


def init_centers(data: Dataset, c: int, seed: int) -> np.ndarray:
    """Pick c distinct data rows uniformly at random as initial centers."""
    if not (isinstance(c, (int, np.integer)) and c >= 1):
        raise ValueError(f"c must be a positive integer, got {c}")
    if c > data.n:
        raise ValueError(f"cannot place {c} centers with only {data.n} data rows")
    rng = np.random.default_rng(seed)
    idx = rng.choice(data.n, size=c, replace=False)
    return data.features[idx].copy()


def squared_distances(data: Dataset, barycenters: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from every object to every barycenter."""
    bary = np.asarray(barycenters, dtype=float)
    if bary.ndim != 2 or bary.shape[1] != data.p:
        raise ValueError(
            f"barycenters must have shape (f, {data.p}), got {bary.shape}"
        )
    return cdist(data.features, bary, "sqeuclidean")


def _scaled_inverse_weights(base: np.ndarray, expo: float):
    """Rowwise (base)**expo normalized against each row's smallest entry.

    base must be nonnegative with no exact zeros in the rows handled here.
    Scaling by the row minimum keeps the powers in [0, 1] for expo < 0, so
    huge distance ratios underflow to 0 instead of overflowing.
    """
    scale = base.min(axis=1)
    with np.errstate(over="ignore", under="ignore"):
        w = (base / scale[:, None]) ** expo
    return w, scale


def _zero_tie_rows(zero: np.ndarray, cards: np.ndarray) -> np.ndarray:
    """Split full weight equally over the zero-distance sets of least size."""
    masked = np.where(zero, cards[None, :], np.iinfo(np.int64).max)
    cmin = masked.min(axis=1)
    chosen = zero & (cards[None, :] == cmin[:, None])
    return chosen / chosen.sum(axis=1, keepdims=True)


def update_masses(
    distances: np.ndarray, structure: FocalStructure, config: FitConfig
) -> CredalPartition:
    """Closed-form mass update for fixed barycenters.

    Mass on focal set j is proportional to (c_j^alpha * d_ij)^(-1/(beta-1)),
    with the normalization including one delta term feeding the empty set.
    Objects at distance exactly 0 from some barycenter put all their mass on
    the tied zero-distance sets of minimal cardinality.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 2 or d.shape[1] != structure.n_sets:
        raise ValueError(
            f"distances must have shape (n, {structure.n_sets}), got {d.shape}"
        )
    if not np.all(np.isfinite(d)) or (d.size and d.min() < 0):
        raise ValueError("distances must be finite and nonnegative")
    cards = structure.cardinalities.astype(float)
    expo = -1.0 / (config.beta - 1.0)
    base = cards**config.alpha * d
    zero = base == 0.0
    masses = np.empty_like(base)
    empty = np.empty(base.shape[0])
    hit = zero.any(axis=1)
    if hit.any():
        masses[hit] = _zero_tie_rows(zero[hit], structure.cardinalities)
        empty[hit] = 0.0
    ok = ~hit
    if ok.any():
        w, scale = _scaled_inverse_weights(base[ok], expo)
        with np.errstate(over="ignore", under="ignore"):
            delta_term = (config.delta**2 / scale) ** expo
        denom = w.sum(axis=1) + delta_term
        masses[ok] = w / denom[:, None]
        # delta_term can overflow to inf for pathological distance scales;
        # all nonempty mass then underflows and the empty set takes the unit.
        with np.errstate(invalid="ignore"):
            empty[ok] = np.where(
                np.isfinite(delta_term), delta_term / denom, 1.0
            )
    return CredalPartition(masses=masses, empty_mass=empty)


def update_association(
    source_barycenters: np.ndarray,
    target_barycenters: np.ndarray,
    structure: FocalStructure,
    config: FitConfig,
) -> AssociationMatrix:
    """Closed-form association update for fixed barycenters.

    Each source focal set distributes one unit of weight over the target
    focal sets, inversely to (c_j^alpha * squared distance)^(1/(gamma-1)).
    There is no empty-set escape here: rows are exactly row-stochastic.
    """
    src = np.asarray(source_barycenters, dtype=float)
    tgt = np.asarray(target_barycenters, dtype=float)
    if src.ndim != 2 or tgt.ndim != 2 or src.shape[1] != tgt.shape[1]:
        raise ValueError("source and target barycenters must share the feature dim")
    if tgt.shape[0] != structure.n_sets:
        raise ValueError(
            f"target barycenters must have {structure.n_sets} rows, got {tgt.shape[0]}"
        )
    d = cdist(src, tgt, "sqeuclidean")
    cards = structure.cardinalities.astype(float)
    expo = -1.0 / (config.gamma - 1.0)
    base = cards**config.alpha * d
    zero = base == 0.0
    r = np.empty_like(base)
    hit = zero.any(axis=1)
    if hit.any():
        r[hit] = _zero_tie_rows(zero[hit], structure.cardinalities)
    ok = ~hit
    if ok.any():
        w, _ = _scaled_inverse_weights(base[ok], expo)
        r[ok] = w / w.sum(axis=1, keepdims=True)
    return AssociationMatrix(r=r)


def _mirror_upper(a: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one (exact symmetry)."""
    out = np.triu(a)
    out = out + np.triu(a, 1).T
    return out


def assemble_system(
    data: Dataset,
    partition: CredalPartition,
    association: AssociationMatrix | None,
    source: SourceKnowledge | None,
    structure: FocalStructure,
    config: FitConfig,
):
    """Build the c x c linear system whose solution is the new centers.

    Every focal set spreads its mass over its members, which couples the
    singleton centers; the transfer side contributes the same way through the
    association weights and enters scaled by lambda.
    """
    if (association is None) != (source is None):
        raise ValueError("association and source must be given together")
    if partition.n_objects != data.n or partition.n_sets != structure.n_sets:
        raise ValueError("partition shape does not match data/structure")
    cards = structure.cardinalities.astype(float)
    inc = structure.incidence  # (c, f)
    mb = partition.masses**config.beta
    b_weights = mb * cards ** (config.alpha - 1.0)  # (n, f)
    rhs = (b_weights @ inc.T).T @ data.features  # (c, p)
    h_weights = mb.sum(axis=0) * cards ** (config.alpha - 2.0)  # (f,)
    lhs = (inc * h_weights) @ inc.T  # (c, c)
    if source is not None:
        if association.r.shape != (source.structure.n_sets, structure.n_sets):
            raise ValueError("association shape does not match the structures")
        if source.p != data.p:
            raise ValueError("source barycenters feature dim does not match data")
        rg = association.r**config.gamma
        b2_weights = rg * cards ** (config.alpha - 1.0)
        rhs = rhs + config.lam * ((b2_weights @ inc.T).T @ source.barycenters)
        h2_weights = rg.sum(axis=0) * cards ** (config.alpha - 2.0)
        lhs = lhs + config.lam * ((inc * h2_weights) @ inc.T)
    return _mirror_upper(lhs), rhs


def solve_centers(lhs: np.ndarray, rhs: np.ndarray, ridge: float = 1e-9) -> np.ndarray:
    """Solve the center system by dense LU with partial pivoting.

    A pivot smaller than 1e-12 times the largest entry signals a (near)
    singular system; the diagonal then gets a ridge boost proportional to the
    mean diagonal mass and the solve is retried once, with a warning. An
    all-zero system cannot be repaired and raises DegenerateFitError.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.ndim != 2 or lhs.shape[0] != lhs.shape[1]:
        raise ValueError("lhs must be square")
    if rhs.ndim != 2 or rhs.shape[0] != lhs.shape[0]:
        raise ValueError("rhs rows must match lhs")
    if not np.any(lhs):
        raise DegenerateFitError(
            "center system is all zero: no mass left on any nonempty focal set"
        )
    c = lhs.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(lhs)
        if np.min(np.abs(np.diag(lu))) < 1e-12 * np.max(np.abs(lhs)):
            warnings.warn(
                "near-singular center system; retrying with ridge boost",
                RuntimeWarning,
                stacklevel=2,
            )
            boosted = lhs + (ridge * np.trace(lhs) / c) * np.eye(c)
            lu, piv = lu_factor(boosted)
        centers = lu_solve((lu, piv), rhs)
    if not np.all(np.isfinite(centers)):
        raise DegenerateFitError("center system is singular beyond repair")
    return centers


def objective(
    data: Dataset,
    partition: CredalPartition,
    centers: np.ndarray,
    structure: FocalStructure,
    config: FitConfig,
    association: AssociationMatrix | None = None,
    source: SourceKnowledge | None = None,
) -> float:
    """Value being minimized: data term + lambda * transfer term + outlier term."""
    if (association is None) != (source is None):
        raise ValueError("association and source must be given together")
    cards = structure.cardinalities.astype(float)
    ca = cards**config.alpha
    bary = compute_barycenters(centers, structure)
    d = squared_distances(data, bary)
    if partition.masses.shape != d.shape:
        raise ValueError("partition shape does not match data/structure")
    data_term = float(np.sum(ca * partition.masses**config.beta * d))
    empty_term = float(config.delta**2 * np.sum(partition.empty_mass**config.beta))
    if source is None:
        return data_term + empty_term
    gap = cdist(source.barycenters, bary, "sqeuclidean")
    transfer = float(np.sum(ca * association.r**config.gamma * gap))
    return data_term + config.lam * transfer + empty_term


def _fit(data: Dataset, c: int, source: SourceKnowledge | None, config: FitConfig):
    structure = enumerate_focal_sets(c, config.max_cardinality)
    if source is not None and source.p != data.p:
        raise ValueError(
            f"source knowledge has {source.p} features, data has {data.p}"
        )
    centers = init_centers(data, c, config.seed)
    partition = None
    association = None
    trace: list[float] = []
    converged = False
    # Virtual previous objective of 0 rather than +inf: J is nonnegative and
    # non-increasing, so J(1) < epsilon already means at most epsilon is left.
    prev = 0.0
    for _ in range(config.max_iter):
        bary = compute_barycenters(centers, structure)
        d = squared_distances(data, bary)
        partition = update_masses(d, structure, config)
        if source is not None:
            association = update_association(
                source.barycenters, bary, structure, config
            )
        lhs, rhs = assemble_system(
            data, partition, association, source, structure, config
        )
        centers = solve_centers(lhs, rhs, config.ridge)
        value = objective(
            data, partition, centers, structure, config,
            association=association, source=source,
        )
        trace.append(value)
        if abs(value - prev) < config.epsilon:
            converged = True
            break
        prev = value
    return ClusterModel(
        centers=centers,
        barycenters=compute_barycenters(centers, structure),
        structure=structure,
        partition=partition,
        association=association,
        config=config,
        objective_trace=tuple(trace),
        converged=converged,
        iterations=len(trace),
    )


def ecm_fit(data: Dataset, c: int, config: FitConfig | None = None) -> ClusterModel:
    """Fit a credal partition to one dataset.

    Alternates the mass and center updates until the objective change drops
    below ``config.epsilon`` or ``config.max_iter`` rounds have run.
    """
    config = FitConfig() if config is None else config
    return _fit(data, c, None, config)


def tecm_fit(
    data: Dataset, c: int, source: SourceKnowledge, config: FitConfig | None = None
) -> ClusterModel:
    """Fit a credal partition guided by source-domain barycenters.

    Identical to :func:`ecm_fit` except that each round also re-associates
    the source focal sets with the current target focal sets, and the center
    system includes the transfer term scaled by ``config.lam``. With
    ``lam=0`` the iterates coincide with :func:`ecm_fit` exactly.
    """
    config = FitConfig() if config is None else config
    if not isinstance(source, SourceKnowledge):
        raise ValueError("source must be a SourceKnowledge instance")
    return _fit(data, c, source, config)


def extract_source_knowledge(
    source_data: Dataset, c_source: int, config: FitConfig | None = None
) -> SourceKnowledge:
    """Cluster the source domain and keep only its focal-set barycenters.

    The barycenters are a compact stand-in for the raw source data, which
    never needs to be shared with the target side.
    """
    model = ecm_fit(source_data, c_source, config)
    return SourceKnowledge(barycenters=model.barycenters, structure=model.structure)


def _silhouette_score(data: Dataset, model: ClusterModel) -> float:
    from sklearn.metrics import silhouette_score

    hard = harden(model.partition, model.structure)
    keep = ~hard.outlier_flags
    labels = hard.labels[keep]
    if keep.sum() < 2 or np.unique(labels).size < 2:
        return -1.0
    try:
        return float(silhouette_score(data.features[keep], labels))
    except ValueError:
        return -1.0


def _ac_score(data: Dataset, model: ClusterModel) -> float:
    from .metrics import accuracy

    hard = harden(model.partition, model.structure)
    value, _ = accuracy(hard.labels, data.labels)
    return value


_SCORERS = {
    "silhouette": _silhouette_score,
    "internal-silhouette": _silhouette_score,
    "ac": _ac_score,
    "external-ac": _ac_score,
}


def grid_search_lambda(
    data: Dataset,
    c: int,
    source: SourceKnowledge,
    config: FitConfig | None = None,
    grid=DEFAULT_LAMBDA_GRID,
    scorer: str = "silhouette",
    seeds=None,
    workers: int | None = None,
):
    """Score every lambda in ``grid`` over repeated seeds and pick the best.

    Runs one fit per (lambda, seed) cell, averages the scores per lambda, and
    returns ``(best_lambda, table)`` where the table has one row per lambda
    with keys lam/mean/std/per_seed, in grid order. Ties on the mean go to
    the smaller lambda. ``workers`` > 1 runs cells in a thread pool; results
    are keyed by cell, so the outcome does not depend on completion order.
    """
    config = FitConfig() if config is None else config
    grid = [float(v) for v in grid]
    if not grid:
        raise ValueError("grid must contain at least one lambda")
    if any(v < 0 for v in grid):
        raise ValueError("lambda values must be nonnegative")
    if scorer not in _SCORERS:
        raise ValueError(
            f"unknown scorer {scorer!r}; choose from {sorted(_SCORERS)}"
        )
    if scorer in ("ac", "external-ac") and data.labels is None:
        raise ValueError("the ac scorer needs labeled data")
    score_fn = _SCORERS[scorer]
    if seeds is None:
        seeds = [config.seed + i for i in range(10)]
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("seeds must contain at least one seed")

    cells = [(lam, seed) for lam in grid for seed in seeds]

    def run(cell):
        lam, seed = cell
        model = tecm_fit(data, c, source, replace(config, lam=lam, seed=seed))
        return score_fn(data, model)

    if workers is None:
        workers = 1
    workers = max(1, min(int(workers), len(cells)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(run, cells))
    else:
        scores = [run(cell) for cell in cells]

    table = []
    for i, lam in enumerate(grid):
        per_seed = tuple(scores[i * len(seeds):(i + 1) * len(seeds)])
        table.append(
            {
                "lam": lam,
                "mean": float(np.mean(per_seed)),
                "std": float(np.std(per_seed)),
                "per_seed": per_seed,
            }
        )
    best = max(table, key=lambda row: (row["mean"], -row["lam"]))
    return best["lam"], table


def resolve_workers(requested: int | None = None) -> int:
    """Worker count for grid/sweep pools, capped by CREDAL_THREADS."""
    workers = os.cpu_count() or 1 if requested is None else int(requested)
    cap = os.environ.get("CREDAL_THREADS")
    if cap is not None:
        try:
            cap_value = int(cap)
        except ValueError as exc:
            raise ValueError(f"CREDAL_THREADS must be an integer, got {cap!r}") from exc
        if cap_value < 1:
            raise ValueError(f"CREDAL_THREADS must be >= 1, got {cap_value}")
        workers = min(workers, cap_value)
    return max(1, workers)
