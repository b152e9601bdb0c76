"""Tour of the credal-partition building blocks.

A credal partition assigns each object a basic belief mass over *sets* of
clusters rather than single clusters. This script walks through the pieces
that make that work: focal-set enumeration, set barycenters, the mass
update for fixed centers, and the two ways to read a partition out
(pignistic probabilities and hard labels).
"""

import numpy as np

from credal import (
    CredalPartition,
    Dataset,
    FitConfig,
    compute_barycenters,
    enumerate_focal_sets,
    harden,
    pignistic_transform,
    squared_distances,
    update_masses,
)


def main():
    print("=== 1. Focal sets ===")
    structure = enumerate_focal_sets(3)
    print(f"c=3 clusters give {structure.n_sets} nonempty focal sets:")
    for s, card in zip(structure.focal_sets, structure.cardinalities):
        print(f"  {set(s)}  (cardinality {card})")
    capped = enumerate_focal_sets(3, max_cardinality=1)
    print(f"with max_cardinality=1 only the singletons remain: {capped.focal_sets}")

    print()
    print("=== 2. Barycenters ===")
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.0]])
    bary = compute_barycenters(centers, structure)
    print("each focal set is represented by the mean of its member centers:")
    for s, b in zip(structure.focal_sets, bary):
        print(f"  {set(s)} -> {b}")

    print()
    print("=== 3. Mass assignment ===")
    # three probe points: near cluster 1, between 1 and 2, far from everything
    probes = Dataset(np.array([[0.2, 0.1], [2.0, 0.0], [50.0, 50.0]]))
    d = squared_distances(probes, bary)
    config = FitConfig()
    part = update_masses(d, structure, config)
    names = [str(set(s)) for s in structure.focal_sets]
    for i, x in enumerate(probes.features):
        row = ", ".join(f"{n}:{m:.3f}" for n, m in zip(names, part.masses[i]))
        print(f"  x={x}  empty:{part.empty_mass[i]:.3f}  {row}")
    print("the far point dumps most of its mass on the empty set (outlier).")

    print()
    print("=== 4. Reading the partition out ===")
    betp = pignistic_transform(part, structure)
    print("pignistic probabilities (mass on sets split evenly over members):")
    for i in range(len(probes.features)):
        print(f"  x={probes.features[i]}  BetP={np.round(betp[i], 3)}")
    hard = harden(part, structure)
    print(f"hardened labels: {hard.labels}, outlier flags: {hard.outlier_flags}")

    print()
    print("=== 5. Partitions validate themselves ===")
    try:
        CredalPartition(
            masses=np.array([[0.9, 0.3, 0.0]]), empty_mass=np.array([0.0])
        )
    except ValueError as exc:
        print(f"rows that do not sum to one are rejected: {exc}")


if __name__ == "__main__":
    main()
