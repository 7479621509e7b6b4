"""Randomized property suites wired into the ``check`` CLI command.

Each suite draws reproducible random instances and verifies one structural
guarantee of the stack: the value identity between the direct merged
Lagrangian and the set-function objective, submodularity/monotonicity of
the merge costs, min-norm-point agreement with brute force, and descent of
the local difference-of-submodular solvers.
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .distributions import JointPMF, _xlog2x
from .mdsf import IMPROVEMENT_TOL, mdsf_bruteforce, modmod_minimize, supsub_minimize
from .set_functions import MergeObjective, f_value, g_value, lagrangian_direct
from .sfm import SetFunctionOracle, min_norm_point, sfm_bruteforce
from .errors import NotConverged

logger = logging.getLogger(__name__)

EQUIV_TOL = 1e-9
PROP_TOL = 1e-9
SFM_TOL = 1e-8


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    n_trials: int
    detail: str = ""


def random_pmf(rng, max_s: int = 5, max_x: int = 8, min_s: int = 2, min_x: int = 2) -> JointPMF:
    """Random joint with spread masses and some exact zeros (columns stay positive)."""
    n_s = int(rng.integers(min_s, max_s + 1))
    n_x = int(rng.integers(min_x, max_x + 1))
    w = rng.gamma(0.6, size=(n_s, n_x))
    w[rng.random((n_s, n_x)) < 0.25] = 0.0
    for j in np.flatnonzero(w.sum(axis=0) == 0):
        w[int(rng.integers(n_s)), j] = float(rng.gamma(0.6)) + 1e-3
    return JointPMF.from_joint(
        [f"s{i}" for i in range(n_s)], [f"x{j}" for j in range(n_x)], w
    )


def random_submodular_oracle(rng, n: int) -> SetFunctionOracle:
    """Weighted-coverage / graph-cut mixture plus a signed modular term."""
    m = n + int(rng.integers(1, n + 2))
    membership = rng.random((n, m)) < 0.4
    cover_w = rng.random(m) * 2.0
    cut_w = np.triu(rng.random((n, n)) * (rng.random((n, n)) < 0.5), k=1)
    cut_w = cut_w + cut_w.T
    modular = rng.normal(scale=1.2, size=n)

    def evaluate(s):
        idx = np.fromiter(s, dtype=int, count=len(s))
        if idx.size == 0:
            return 0.0
        inside = np.zeros(n, dtype=bool)
        inside[idx] = True
        cover = float(cover_w[membership[idx].any(axis=0)].sum())
        cut = float(cut_w[np.ix_(inside, ~inside)].sum())
        return cover + cut + float(modular[idx].sum())

    return SetFunctionOracle(ground_size=n, evaluate=evaluate)


def _all_subset_values(pmf: JointPMF):
    """f and g on every bitmask subset of the released alphabet."""
    n = pmf.n_x
    masks = np.arange(2**n, dtype=np.int64)
    member = (masks[:, None] >> np.arange(n)) & 1  # (2^n, n)
    px = pmf.x_marginal()
    f_all = member @ _xlog2x(px) - _xlog2x(member @ px)
    g_all = np.zeros(2**n)
    for s in range(pmf.n_s):
        row = pmf.p[s]
        g_all += member @ _xlog2x(row) - _xlog2x(member @ row)
    return masks, f_all, g_all


def equivalence_suite(trials: int, seed: int, max_n: int = 8, g_fn=None) -> CheckResult:
    """Value identity: merged-Lagrangian drop == weighted set-function objective."""
    rng = np.random.default_rng([seed, 1])
    g_eval = g_fn if g_fn is not None else g_value
    worst = 0.0
    for _ in range(trials):
        pmf = random_pmf(rng, max_x=max_n)
        n = pmf.n_x
        for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
            obj = MergeObjective(pmf, lam)
            base = lagrangian_direct(obj, frozenset())
            for r in range(n + 1):
                for w in itertools.combinations(range(n), r):
                    drop = lagrangian_direct(obj, frozenset(w)) - base
                    objective = (1.0 - lam) * f_value(pmf, w) - g_eval(pmf, w)
                    worst = max(worst, abs(drop - objective))
    return CheckResult("equivalence", worst <= EQUIV_TOL or trials == 0, worst, trials)


def submodularity_suite(trials: int, seed: int, max_n: int = 8) -> CheckResult:
    """Exhaustive pairwise submodularity, monotonicity and nonpositivity of f, g."""
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for _ in range(trials):
        pmf = random_pmf(rng, max_x=max_n)
        masks, f_all, g_all = _all_subset_values(pmf)
        union = np.bitwise_or.outer(masks, masks)
        inter = np.bitwise_and.outer(masks, masks)
        for vals in (f_all, g_all):
            pair = vals[:, None] + vals[None, :]
            violation = (vals[union] + vals[inter]) - pair
            worst = max(worst, float(violation.max()))
            is_subset = inter == masks[:, None]
            mono = np.where(is_subset, vals[None, :] - vals[:, None], -np.inf)
            worst = max(worst, float(mono.max()))
            worst = max(worst, float(vals.max()))
        worst = max(worst, float((f_all - g_all).max()))  # g - f >= 0
    return CheckResult("submodularity", worst <= PROP_TOL or trials == 0, worst, trials)


def sfm_suite(trials: int, seed: int, max_n: int = 12) -> CheckResult:
    """min_norm_point value vs exhaustive minimum on random submodular instances."""
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    detail = ""
    for t in range(trials):
        n = int(rng.integers(1, max_n + 1))
        oracle = random_submodular_oracle(rng, n)
        try:
            _, value = min_norm_point(oracle)
        except NotConverged as exc:
            return CheckResult("sfm", False, np.inf, trials, f"trial {t}: {exc}")
        _, brute = sfm_bruteforce(oracle)
        worst = max(worst, abs(value - brute))
    return CheckResult("sfm", worst <= SFM_TOL or trials == 0, worst, trials, detail)


def mdsf_descent_suite(trials: int, seed: int, max_n: int = 8) -> CheckResult:
    """Traces of both local solvers are nonincreasing; values bounded by the
    global optimum from below and by the empty set from above."""
    from .funnel import build_merge_instance  # late import to avoid a cycle

    rng = np.random.default_rng([seed, 4])
    worst = 0.0
    bound_ok = True
    global_hits = 0
    for t in range(trials):
        pmf = random_pmf(rng, max_x=max_n)
        lam = float(rng.choice([0.0, 0.2, 0.5, 0.8, 1.0]))
        problem = "pf" if t % 2 == 0 else "ib"
        inst = build_merge_instance(MergeObjective(pmf, lam, problem))
        _, brute_val = mdsf_bruteforce(inst)
        for solver in (supsub_minimize, modmod_minimize):
            _, value, trace = solver(inst, rng_seed=seed + t)
            seq = [v for _, v in trace.iterates]
            for a, b in zip(seq, seq[1:]):
                worst = max(worst, b - a)
            # local value sits between the global optimum and the empty set
            if value > 1e-12 or value < brute_val - 1e-9:
                bound_ok = False
            if solver is supsub_minimize and abs(value - brute_val) <= 1e-9:
                global_hits += 1
    if trials:
        logger.info("supsub matched the global optimum on %d/%d instances",
                    global_hits, trials)
    passed = trials == 0 or (worst <= IMPROVEMENT_TOL and bound_ok)
    return CheckResult("mdsf_descent", passed, worst, trials,
                       f"global hits {global_hits}/{trials}")


def run_all_checks(trials: int | None = None, seed: int = 0, max_n: int = 8, g_fn=None):
    """Run every suite with its contract-level trial count (or an override)."""
    eq_trials = 100 if trials is None else trials
    sub_trials = 100 if trials is None else trials
    sfm_trials = 200 if trials is None else trials
    mdsf_trials = 100 if trials is None else trials
    return [
        equivalence_suite(eq_trials, seed, min(max_n, 8), g_fn=g_fn),
        submodularity_suite(sub_trials, seed, min(max_n, 8)),
        sfm_suite(sfm_trials, seed, min(max_n, 12)),
        mdsf_descent_suite(mdsf_trials, seed, min(max_n, 8)),
    ]
