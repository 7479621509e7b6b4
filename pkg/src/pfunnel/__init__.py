"""Privacy funnel and information bottleneck via agglomerative clustering.

Given an empirical joint distribution of a sensitive variable S and a
released variable X, the package searches deterministic sanitizations
(hard clusterings of the released alphabet) that trade leakage I(S;X-hat)
against utility I(X;X-hat), by iteratively merging the subset of symbols
minimizing a difference of submodular merge costs.
"""

from .distributions import JointPMF, apply_partition, entropy, merge, mutual_information
from .errors import (
    ColumnNotFound,
    EmptyAfterFiltering,
    FileError,
    FunnelError,
    GroundSetTooLarge,
    InvalidPartition,
    InvalidPermutation,
    MergeTooSmall,
    NonSubmodularDetected,
    NotConverged,
)
from .funnel import (
    ClusteringResult,
    FrontierPoint,
    PairwiseConfig,
    RunConfig,
    iac_mdsf,
    pairwise_merge_ib,
    pairwise_merge_pf,
    pareto_exact,
    sweep,
)
from .ingest import DatasetSpec, load_joint, synth_joint
from .mdsf import (
    MdsfInstance,
    MdsfTrace,
    mdsf_bruteforce,
    modmod_minimize,
    modular_lower_bound,
    supsub_minimize,
)
from .set_functions import (
    MergeObjective,
    check_equivalence,
    f_value,
    g_value,
    ib_objective,
    lagrangian_direct,
    pf_objective,
)
from .sfm import SetFunctionOracle, greedy_base_vertex, min_norm_point, sfm_bruteforce

__version__ = "0.1.0"

__all__ = [
    "JointPMF", "apply_partition", "entropy", "merge", "mutual_information",
    "MergeObjective", "f_value", "g_value", "pf_objective", "ib_objective",
    "lagrangian_direct", "check_equivalence",
    "SetFunctionOracle", "greedy_base_vertex", "min_norm_point", "sfm_bruteforce",
    "MdsfInstance", "MdsfTrace", "modular_lower_bound", "supsub_minimize",
    "modmod_minimize", "mdsf_bruteforce",
    "RunConfig", "PairwiseConfig", "ClusteringResult", "FrontierPoint",
    "iac_mdsf", "pairwise_merge_pf", "pairwise_merge_ib", "sweep", "pareto_exact",
    "DatasetSpec", "load_joint", "synth_joint",
    "FunnelError", "MergeTooSmall", "InvalidPartition", "GroundSetTooLarge",
    "InvalidPermutation", "NotConverged", "NonSubmodularDetected",
    "FileError", "ColumnNotFound", "EmptyAfterFiltering",
]
