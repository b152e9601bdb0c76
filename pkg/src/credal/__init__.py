"""Credal clustering: evidential c-means with source-to-target transfer.

Objects are assigned mass functions over subsets of the cluster frame
(credal partitions), which subsume hard, fuzzy, and possibilistic
partitions and carry an explicit outlier mass. The transfer variant guides
the fit with barycenters extracted from a related source domain, balanced
by a single coefficient.
"""

from .belief import (
    CredalPartition,
    FocalStructure,
    HardAssignment,
    compute_barycenters,
    enumerate_focal_sets,
    harden,
    pignistic_transform,
)
from .datagen import ScenarioSpec, builtin_scenarios, generate
from .dataset import Dataset
from .engine import (
    DEFAULT_LAMBDA_GRID,
    AssociationMatrix,
    ClusterModel,
    DegenerateFitError,
    FitConfig,
    SourceKnowledge,
    assemble_system,
    ecm_fit,
    extract_source_knowledge,
    grid_search_lambda,
    init_centers,
    objective,
    solve_centers,
    squared_distances,
    tecm_fit,
    update_association,
    update_masses,
)
from .metrics import EvaluationReport, accuracy, evaluate_labels, nmi, rand_index
from .model_io import (
    ModelDocument,
    read_dataset_csv,
    read_labels_csv,
    read_model,
    read_partition,
    read_source_knowledge,
    write_dataset_csv,
    write_labels_csv,
    write_model,
    write_partition,
    write_source_knowledge,
)

__version__ = "0.1.0"

__all__ = [
    "AssociationMatrix",
    "ClusterModel",
    "CredalPartition",
    "Dataset",
    "DEFAULT_LAMBDA_GRID",
    "DegenerateFitError",
    "EvaluationReport",
    "FitConfig",
    "FocalStructure",
    "HardAssignment",
    "ModelDocument",
    "ScenarioSpec",
    "SourceKnowledge",
    "accuracy",
    "assemble_system",
    "builtin_scenarios",
    "compute_barycenters",
    "ecm_fit",
    "enumerate_focal_sets",
    "evaluate_labels",
    "extract_source_knowledge",
    "generate",
    "grid_search_lambda",
    "harden",
    "init_centers",
    "nmi",
    "objective",
    "pignistic_transform",
    "rand_index",
    "read_dataset_csv",
    "read_labels_csv",
    "read_model",
    "read_partition",
    "read_source_knowledge",
    "solve_centers",
    "squared_distances",
    "tecm_fit",
    "update_association",
    "update_masses",
    "write_dataset_csv",
    "write_labels_csv",
    "write_model",
    "write_partition",
    "write_source_knowledge",
]
