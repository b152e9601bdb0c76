"""Focal-set structures and credal partitions.

A credal partition generalizes fuzzy and hard partitions: each object carries a
mass function over subsets of the frame of cluster labels. Mass on a singleton
expresses ordinary membership, mass on a larger set expresses ambiguity between
its members, and mass on the empty set flags the object as an outlier.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

__all__ = [
    "FocalStructure",
    "CredalPartition",
    "HardAssignment",
    "enumerate_focal_sets",
    "compute_barycenters",
    "pignistic_transform",
    "harden",
]

MAX_CLUSTERS = 16

MASS_TOL = 1e-12


def _frozen_array(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FocalStructure:
    """Ordered collection of nonempty focal sets over the frame {1, ..., c}.

    Sets are kept in canonical order: ascending cardinality, then
    lexicographically by member indices. ``incidence`` is the c x f 0/1 matrix
    with entry (k, j) = 1 iff cluster k belongs to focal set j.
    """

    c: int
    max_cardinality: int
    focal_sets: tuple[tuple[int, ...], ...]
    cardinalities: np.ndarray = field(init=False, repr=False, compare=False)
    incidence: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.c <= MAX_CLUSTERS:
            raise ValueError(f"c must be in 1..{MAX_CLUSTERS}, got {self.c}")
        if not 1 <= self.max_cardinality <= self.c:
            raise ValueError(
                f"max_cardinality must be in 1..c, got {self.max_cardinality}"
            )
        sets = tuple(tuple(sorted(s)) for s in self.focal_sets)
        if len(sets) == 0:
            raise ValueError("focal structure needs at least one focal set")
        for s in sets:
            if len(s) == 0:
                raise ValueError("empty focal set is not allowed in the structure")
            if not all(
                isinstance(k, (int, np.integer)) and not isinstance(k, bool)
                for k in s
            ):
                raise ValueError(f"focal set {s} has non-integer members")
            if len(set(s)) != len(s):
                raise ValueError(f"focal set {s} has repeated members")
            if s[0] < 1 or s[-1] > self.c:
                raise ValueError(f"focal set {s} has members outside 1..{self.c}")
            if len(s) > self.max_cardinality:
                raise ValueError(f"focal set {s} exceeds the cardinality cap")
        if len(set(sets)) != len(sets):
            raise ValueError("duplicate focal sets")
        if sets != tuple(sorted(sets, key=lambda s: (len(s), s))):
            raise ValueError("focal sets are not in canonical order")
        cards = _frozen_array([len(s) for s in sets], dtype=np.int64)
        inc = np.zeros((self.c, len(sets)))
        for j, s in enumerate(sets):
            for k in s:
                inc[k - 1, j] = 1.0
        object.__setattr__(self, "focal_sets", sets)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "incidence", _frozen_array(inc))

    @property
    def n_sets(self) -> int:
        return len(self.focal_sets)


def enumerate_focal_sets(c: int, max_cardinality: int | None = None) -> FocalStructure:
    """Build the canonical focal structure for ``c`` clusters.

    ``max_cardinality`` caps the size of the subsets (None means no cap, i.e.
    all 2^c - 1 nonempty subsets). The cap keeps the structure size polynomial:
    a cap of 2 yields c singletons plus c*(c-1)/2 pairs.
    """
    if not isinstance(c, (int, np.integer)) or isinstance(c, bool):
        raise ValueError(f"c must be an integer, got {c!r}")
    if not 1 <= c <= MAX_CLUSTERS:
        raise ValueError(f"c must be in 1..{MAX_CLUSTERS}, got {c}")
    cap = c if max_cardinality is None else max_cardinality
    if not isinstance(cap, (int, np.integer)) or isinstance(cap, bool):
        raise ValueError(f"max_cardinality must be an integer, got {cap!r}")
    if not 1 <= cap <= c:
        raise ValueError(f"max_cardinality must be in 1..c, got {cap}")
    sets = []
    for size in range(1, cap + 1):
        sets.extend(combinations(range(1, c + 1), size))
    return FocalStructure(c=int(c), max_cardinality=int(cap), focal_sets=tuple(sets))


@dataclass(frozen=True)
class CredalPartition:
    """Per-object mass functions over the focal sets plus the empty set.

    ``masses[i, j]`` is the mass object i puts on focal set j; ``empty_mass[i]``
    is its outlier mass. Every row must sum to 1 within 1e-12.
    """

    masses: np.ndarray
    empty_mass: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float)
        empty = np.array(self.empty_mass, dtype=float)
        if masses.ndim != 2:
            raise ValueError("masses must be a 2-d array of shape (n, f)")
        if empty.shape != (masses.shape[0],):
            raise ValueError("empty_mass must have one entry per object")
        if not np.all(np.isfinite(masses)) or not np.all(np.isfinite(empty)):
            raise ValueError("masses must be finite")
        if masses.size and (masses.min() < -MASS_TOL or empty.min() < -MASS_TOL):
            raise ValueError("masses must be nonnegative")
        total = masses.sum(axis=1) + empty
        if masses.size and np.max(np.abs(total - 1.0)) > MASS_TOL:
            i = int(np.argmax(np.abs(total - 1.0)))
            raise ValueError(
                f"mass row {i} sums to {float(total[i])!r}, expected 1 within {MASS_TOL}"
            )
        object.__setattr__(self, "masses", _frozen_array(masses))
        object.__setattr__(self, "empty_mass", _frozen_array(empty))

    @property
    def n_objects(self) -> int:
        return self.masses.shape[0]

    @property
    def n_sets(self) -> int:
        return self.masses.shape[1]


@dataclass(frozen=True)
class HardAssignment:
    """Hardened view of a credal partition.

    ``labels`` hold cluster indices in 1..c, ``outlier_flags`` marks objects
    whose empty-set mass exceeded the threshold, and ``pignistic`` keeps the
    probabilities the labels were drawn from.
    """

    labels: np.ndarray
    outlier_flags: np.ndarray
    pignistic: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", _frozen_array(self.labels, dtype=np.int64))
        object.__setattr__(
            self, "outlier_flags", _frozen_array(self.outlier_flags, dtype=bool)
        )
        object.__setattr__(self, "pignistic", _frozen_array(self.pignistic))


def _check_partition_structure(partition: CredalPartition, structure: FocalStructure):
    if partition.n_sets != structure.n_sets:
        raise ValueError(
            f"partition has {partition.n_sets} focal sets, "
            f"structure has {structure.n_sets}"
        )


def compute_barycenters(centers: np.ndarray, structure: FocalStructure) -> np.ndarray:
    """Barycenter of each focal set: mean of its member singleton centers.

    Returns an f x p array aligned with ``structure.focal_sets``. Singleton
    rows reproduce the corresponding centers exactly.
    """
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[0] != structure.c:
        raise ValueError(
            f"centers must have shape (c, p) with c={structure.c}, "
            f"got {centers.shape}"
        )
    if not np.all(np.isfinite(centers)):
        raise ValueError("centers must be finite")
    sums = structure.incidence.T @ centers
    return sums / structure.cardinalities[:, None].astype(float)


def pignistic_transform(
    partition: CredalPartition, structure: FocalStructure
) -> np.ndarray:
    """Spread each focal-set mass uniformly over its members.

    The empty-set mass is redistributed by renormalizing over the nonempty
    part; an object with all its mass on the empty set gets the uniform row.
    Output rows are probability vectors over the c clusters.
    """
    _check_partition_structure(partition, structure)
    share = structure.incidence / structure.cardinalities[None, :].astype(float)
    raw = partition.masses @ share.T  # (n, c)
    # Normalizing by the row's own nonempty contribution keeps the rows summing
    # to 1 at float precision even when the empty mass is close to 1.
    denom = raw.sum(axis=1)
    out = np.full((partition.n_objects, structure.c), 1.0 / structure.c)
    ok = denom > 0
    out[ok] = raw[ok] / denom[ok, None]
    return out


def harden(
    partition: CredalPartition,
    structure: FocalStructure,
    outlier_threshold: float = 0.5,
) -> HardAssignment:
    """Pick the most probable cluster per object and flag likely outliers.

    Ties go to the lowest cluster index. ``outlier_threshold`` is compared
    against the empty-set mass (strictly greater flags the object).
    """
    if not 0.0 <= outlier_threshold <= 1.0:
        raise ValueError("outlier_threshold must lie in [0, 1]")
    betp = pignistic_transform(partition, structure)
    labels = np.argmax(betp, axis=1) + 1
    flags = partition.empty_mass > outlier_threshold
    return HardAssignment(labels=labels, outlier_flags=flags, pignistic=betp)
