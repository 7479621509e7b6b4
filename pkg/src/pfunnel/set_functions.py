"""Merge-cost set functions over the released alphabet.

For the current joint p(s, x) two nonpositive set functions over subsets W
of the released alphabet drive everything:

    f(W) = sum_{x in W} p(x) log2[ p(x) / p(W) ]
    g(W) = sum_s sum_{x in W} p(s,x) log2[ p(s,x) / p(s,W) ]

with p(W) and p(s,W) the merged masses.  Both are submodular, nonincreasing
and normalized (f(empty) = g(empty) = 0; singletons are 0 too).  Merging W
changes the leakage by -(g(W) - f(W)) and the released entropy by f(W), so
the weighted merge objectives

    pf:  (1 - lam) * f(W) - g(W)        (minimize leakage, keep entropy)
    ib:  g(W) - (1 - lam) * f(W)        (keep leakage, shed entropy)

are each a difference of submodular functions, and their minimization over
all W is value-equivalent to minimizing the merged-distribution Lagrangian
I(S; X_W) - lam * I(X; X_W) directly (see :func:`check_equivalence`).
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .distributions import JointPMF, _xlog2x, entropy, merge, mutual_information
from .errors import GroundSetTooLarge
from .sfm import SetFunctionOracle

PROBLEMS = ("pf", "ib")


@dataclass(frozen=True)
class MergeObjective:
    """A merge-minimization problem: current joint, multiplier, direction."""

    pmf: JointPMF
    lam: float
    problem: str = "pf"

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam}")
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")


def f_value(pmf: JointPMF, w) -> float:
    """Released-marginal merge cost f(W); 0 for |W| <= 1, else negative."""
    idx = np.fromiter(w, dtype=int, count=len(w)) if not isinstance(w, np.ndarray) else w
    if idx.size <= 1:
        return 0.0
    px = pmf.x_marginal()[idx]
    return float(_xlog2x(px).sum() - _xlog2x(np.array([px.sum()])).sum())


def g_value(pmf: JointPMF, w) -> float:
    """Joint merge cost g(W); zero joint entries contribute nothing."""
    idx = np.fromiter(w, dtype=int, count=len(w)) if not isinstance(w, np.ndarray) else w
    if idx.size <= 1:
        return 0.0
    block = pmf.p[:, idx]
    return float(_xlog2x(block).sum() - _xlog2x(block.sum(axis=1)).sum())


def pf_objective(obj: MergeObjective, w) -> float:
    """(1 - lam) * f(W) - g(W)."""
    return (1.0 - obj.lam) * f_value(obj.pmf, w) - g_value(obj.pmf, w)


def ib_objective(obj: MergeObjective, w) -> float:
    """g(W) - (1 - lam) * f(W), the negation of the pf objective."""
    return -pf_objective(obj, w)


def lagrangian_direct(obj: MergeObjective, w=frozenset()) -> float:
    """I(S; X_W) - lam * I(X; X_W), evaluated by actually merging W.

    Sets of size <= 1 are no-op merges.  The second term equals the merged
    released entropy because the merge channel is deterministic.
    """
    merged = merge(obj.pmf, w) if len(w) >= 2 else obj.pmf
    return mutual_information(merged) - obj.lam * entropy(merged, "x")


def check_equivalence(obj: MergeObjective, max_ground=20) -> float:
    """Max deviation between the direct Lagrangian drop and the pf objective.

    Exhausts all W over the released alphabet, so the alphabet is capped.
    A correct implementation keeps this at floating-point noise; it is the
    test oracle for the set-function decomposition.
    """
    n = obj.pmf.n_x
    if n > max_ground:
        raise GroundSetTooLarge(f"|X| = {n} exceeds exhaustive cap {max_ground}")
    base = lagrangian_direct(obj, frozenset())
    worst = 0.0
    for r in range(n + 1):
        for w in itertools.combinations(range(n), r):
            drop = lagrangian_direct(obj, frozenset(w)) - base
            dev = abs(drop - pf_objective(obj, w))
            if dev > worst:
                worst = dev
    return worst


def f_prefix_gains(pmf: JointPMF, perm: np.ndarray) -> np.ndarray:
    """Greedy marginal gains of f along a permutation, in permutation order.

    Cumulative masses make every prefix value available at once:
    gain_i = xlx(p_i) - xlx(C_i) + xlx(C_{i-1}) with C the cumsum.
    """
    px = pmf.x_marginal()[perm]
    cum = np.concatenate([[0.0], np.cumsum(px)])
    xlx_cum = _xlog2x(cum)
    return _xlog2x(px) - xlx_cum[1:] + xlx_cum[:-1]


def g_prefix_gains(pmf: JointPMF, perm: np.ndarray) -> np.ndarray:
    """Greedy marginal gains of g along a permutation, in permutation order."""
    block = pmf.p[:, perm]
    cum = np.concatenate([np.zeros((pmf.n_s, 1)), np.cumsum(block, axis=1)], axis=1)
    xlx_cum = _xlog2x(cum)
    return (_xlog2x(block) - xlx_cum[:, 1:] + xlx_cum[:, :-1]).sum(axis=0)


def f_oracle(pmf: JointPMF) -> SetFunctionOracle:
    """f as a normalized submodular oracle with a vectorized greedy path."""
    return SetFunctionOracle(
        ground_size=pmf.n_x,
        evaluate=lambda w: f_value(pmf, w),
        prefix_gains=lambda perm: f_prefix_gains(pmf, perm),
    )


def g_oracle(pmf: JointPMF) -> SetFunctionOracle:
    """g as a normalized submodular oracle with a vectorized greedy path."""
    return SetFunctionOracle(
        ground_size=pmf.n_x,
        evaluate=lambda w: g_value(pmf, w),
        prefix_gains=lambda perm: g_prefix_gains(pmf, perm),
    )
