"""Agglomerative clustering drivers for the privacy-funnel and bottleneck problems.

:func:`iac_mdsf` repeatedly finds the best subset of the current released
alphabet to merge, where "best" minimizes the weighted merge objective
(privacy: shed leakage while keeping released entropy; bottleneck: the
reverse), and merges it.  Each inner search is a difference-of-submodular
minimization solved locally; the loop stops once no merge of two or more
symbols is returned, or a single symbol remains.

:func:`pairwise_merge_pf` / :func:`pairwise_merge_ib` are the classic
greedy baselines that only ever merge the best feasible pair per iteration
under an explicit utility (resp. relevance) floor.

:func:`sweep` traces the privacy-utility frontier by running the clustering
once per multiplier value; :func:`pareto_exact` grades those local results
against exhaustive partition enumeration on small alphabets.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import JointPMF, _xlog2x, apply_partition, entropy, merge, mutual_information
from .errors import GroundSetTooLarge
from .mdsf import MdsfInstance, modmod_minimize, supsub_minimize
from .set_functions import PROBLEMS, MergeObjective, f_oracle, g_oracle
from .sfm import scale_oracle

logger = logging.getLogger(__name__)

STRATEGIES = ("supsub", "modmod")

_FEAS_TOL = 1e-12


@dataclass(frozen=True)
class RunConfig:
    """Settings for one clustering run."""

    lam: float
    problem: str = "pf"
    strategy: str = "supsub"
    restarts: int = 1
    seed: int = 0
    max_outer_iters: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam}")
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class PairwiseConfig:
    """Settings for a greedy pairwise-merge run; threshold is in bits."""

    problem: str = "pf"
    threshold: float = 0.0

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0 bits")


@dataclass
class ClusteringResult:
    """Final state and per-iteration history of a clustering run.

    ``trajectory`` holds the monitored objective per state, starting with
    the unmerged input: the Lagrangian I(S;X-hat) - lam * I(X;X-hat) for
    the subset-merge runs, the leakage for pairwise-privacy runs, and the
    coding rate for pairwise-bottleneck runs.  ``iterations`` counts merges
    actually performed (= len(trajectory) - 1).
    """

    final_pmf: JointPMF
    merge_history: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)
    trajectory: list[float] = field(default_factory=list)
    leakage_bits: float = 0.0
    utility_bits: float = 0.0
    iterations: int = 0


@dataclass(frozen=True)
class FrontierPoint:
    """One achievable operating point of a multiplier sweep."""

    lam: float
    leakage_bits: float
    utility_bits: float
    leakage_norm: float
    utility_loss_norm: float
    alphabet_size: int
    iterations: int


def build_merge_instance(obj: MergeObjective) -> MdsfInstance:
    """Oracle pair (F, G) so that F - G is the problem's merge objective."""
    scaled_f = scale_oracle(f_oracle(obj.pmf), 1.0 - obj.lam)
    g = g_oracle(obj.pmf)
    if obj.problem == "pf":
        return MdsfInstance(F=scaled_f, G=g)
    return MdsfInstance(F=g, G=scaled_f)


def _derived_seed(*keys: int) -> int:
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def lagrangian(pmf: JointPMF, lam: float) -> float:
    """I(S;X) - lam * H(X) of the current joint (H(X) because the
    accumulated clustering channel is deterministic)."""
    return mutual_information(pmf) - lam * entropy(pmf, "x")


def _solve_one_merge(pmf, cfg: RunConfig, outer_iter: int):
    """Best merge set for the current joint, over all restarts."""
    inst = build_merge_instance(MergeObjective(pmf, cfg.lam, cfg.problem))
    solver = supsub_minimize if cfg.strategy == "supsub" else modmod_minimize
    n = pmf.n_x
    best = None
    for r in range(cfg.restarts):
        if r == 0:
            init = frozenset()
        else:
            rng = np.random.default_rng([cfg.seed, outer_iter, r])
            size = int(rng.integers(1, n + 1))
            init = frozenset(rng.choice(n, size=size, replace=False).tolist())
        w, value, _trace = solver(
            inst, init=init, rng_seed=_derived_seed(cfg.seed, outer_iter, r)
        )
        key = (value, len(w), tuple(sorted(w)))
        if best is None or key < best[0]:
            best = (key, w, value)
    return best[1], best[2]


def iac_mdsf(pmf: JointPMF, cfg: RunConfig) -> ClusteringResult:
    """Iterative agglomerative clustering via difference-of-submodular merges.

    Starts from the released alphabet itself and, per outer iteration,
    merges the minimizing subset of the current alphabet; stops when the
    minimizer has fewer than two elements, one symbol remains, or the
    outer-iteration cap (default: the alphabet size) is reached.
    """
    max_outer = cfg.max_outer_iters if cfg.max_outer_iters is not None else pmf.n_x
    current = pmf
    trajectory = [lagrangian(current, cfg.lam)]
    history: list[tuple[int, tuple[str, ...]]] = []
    for k in range(max_outer):
        if current.n_x <= 1:
            break
        w, value = _solve_one_merge(current, cfg, k)
        if len(w) < 2:
            break
        history.append((k, tuple(current.x_labels[i] for i in sorted(w))))
        logger.debug(
            "outer %d: merge %d symbols (objective %.6g)", k, len(w), value
        )
        current = merge(current, w)
        trajectory.append(lagrangian(current, cfg.lam))
    return ClusteringResult(
        final_pmf=current,
        merge_history=history,
        trajectory=trajectory,
        leakage_bits=mutual_information(current),
        utility_bits=entropy(current, "x"),
        iterations=len(history),
    )


def _pairwise_tables(pmf: JointPMF):
    """f and g of every pair {i, j}, as (n, n) matrices (off-diagonal)."""
    px = pmf.x_marginal()
    xlx = _xlog2x(px)
    f_pair = xlx[:, None] + xlx[None, :] - _xlog2x(px[:, None] + px[None, :])
    col_xlx = _xlog2x(pmf.p).sum(axis=0)
    pair_sum = pmf.p[:, :, None] + pmf.p[:, None, :]
    g_pair = col_xlx[:, None] + col_xlx[None, :] - _xlog2x(pair_sum).sum(axis=0)
    return f_pair, g_pair


def _pairwise_loop(pmf: JointPMF, cfg: PairwiseConfig) -> ClusteringResult:
    current = pmf
    leak = mutual_information(current)
    util = entropy(current, "x")
    trajectory = [leak if cfg.problem == "pf" else util]
    history: list[tuple[int, tuple[str, ...]]] = []
    k = 0
    while current.n_x >= 2:
        f_pair, g_pair = _pairwise_tables(current)
        leak_after = leak - (g_pair - f_pair)
        util_after = util + f_pair
        pairs = np.triu(np.ones_like(f_pair, dtype=bool), k=1)
        if cfg.problem == "pf":
            feasible = pairs & (util_after >= cfg.threshold - _FEAS_TOL)
            score = leak_after
        else:
            feasible = pairs & (leak_after >= cfg.threshold - _FEAS_TOL)
            score = util_after
        if not feasible.any():
            break
        masked = np.where(feasible, score, np.inf)
        i, j = np.unravel_index(int(np.argmin(masked)), masked.shape)
        history.append((k, (current.x_labels[i], current.x_labels[j])))
        current = merge(current, {int(i), int(j)})
        leak = mutual_information(current)
        util = entropy(current, "x")
        trajectory.append(leak if cfg.problem == "pf" else util)
        k += 1
    return ClusteringResult(
        final_pmf=current,
        merge_history=history,
        trajectory=trajectory,
        leakage_bits=leak,
        utility_bits=util,
        iterations=len(history),
    )


def pairwise_merge_pf(pmf: JointPMF, cfg: PairwiseConfig) -> ClusteringResult:
    """Greedy pairwise privacy merges under a utility floor.

    Per iteration, among all pairs whose post-merge utility I(X;X-hat)
    stays at or above the threshold, merge the one minimizing the
    post-merge leakage I(S;X-hat); stop when no pair is feasible.
    """
    if cfg.problem != "pf":
        raise ValueError("pairwise_merge_pf requires problem='pf'")
    return _pairwise_loop(pmf, cfg)


def pairwise_merge_ib(pmf: JointPMF, cfg: PairwiseConfig) -> ClusteringResult:
    """Greedy pairwise rate merges under a relevance floor (mirror image)."""
    if cfg.problem != "ib":
        raise ValueError("pairwise_merge_ib requires problem='ib'")
    return _pairwise_loop(pmf, cfg)


def frontier_point(result: ClusteringResult, lam: float, h_s: float, h_x: float) -> FrontierPoint:
    """Normalize a run result into frontier coordinates."""
    leak_norm = result.leakage_bits / h_s if h_s > 0 else 0.0
    loss_norm = -result.utility_bits / h_x if h_x > 0 else 0.0
    return FrontierPoint(
        lam=lam,
        leakage_bits=result.leakage_bits,
        utility_bits=result.utility_bits,
        leakage_norm=min(max(leak_norm, 0.0), 1.0),
        utility_loss_norm=min(max(loss_norm, -1.0), 0.0),
        alphabet_size=result.final_pmf.n_x,
        iterations=result.iterations,
    )


def _sweep_worker(args) -> FrontierPoint:
    pmf, lam, problem, strategy, restarts, seed, h_s, h_x = args
    cfg = RunConfig(lam=lam, problem=problem, strategy=strategy, restarts=restarts, seed=seed)
    return frontier_point(iac_mdsf(pmf, cfg), lam, h_s, h_x)


def sweep(
    pmf: JointPMF,
    lambdas,
    problem: str = "pf",
    strategy: str = "supsub",
    restarts: int = 1,
    seed: int = 0,
    n_jobs: int = 1,
) -> list[FrontierPoint]:
    """One clustering run per multiplier; returns points in input order.

    Runs are independent; ``n_jobs > 1`` fans them out over processes.
    Normalizers H(S) and H(X) are computed once on the input joint.
    """
    h_s = entropy(pmf, "s")
    h_x = entropy(pmf, "x")
    jobs = [(pmf, float(lam), problem, strategy, restarts, seed, h_s, h_x) for lam in lambdas]
    if n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            points = list(pool.map(_sweep_worker, jobs))
    else:
        points = [_sweep_worker(job) for job in jobs]
    for pt in points:
        logger.info(
            "lambda=%.4g: leakage=%.6g bits, utility=%.6g bits, %d merges",
            pt.lam, pt.leakage_bits, pt.utility_bits, pt.iterations,
        )
    _log_endpoint_checks(points, problem)
    return points


def _log_endpoint_checks(points, problem: str) -> None:
    """Empirical endpoint and trend sanity of a sweep (logged, never asserted)."""
    for pt in points:
        if pt.lam == 1.0 and problem == "pf" and pt.iterations != 0:
            logger.warning("lambda=1 privacy run performed %d merges; expected none",
                           pt.iterations)
    zero = [pt for pt in points if pt.lam == 0.0]
    if zero and problem == "pf" and len(points) > 1:
        least = min(pt.leakage_bits for pt in points)
        if zero[0].leakage_bits > least + 1e-9:
            logger.warning(
                "lambda=0 leakage %.6g above the sweep minimum %.6g (local optima)",
                zero[0].leakage_bits, least)
    if problem == "ib":
        # more weight on the rate means more merging: the normalized loss
        # should drift from -1 toward 0 as lambda grows
        ordered = sorted(points, key=lambda pt: pt.lam)
        losses = [pt.utility_loss_norm for pt in ordered]
        breaks = sum(b < a - 1e-9 for a, b in zip(losses, losses[1:]))
        logger.info("bottleneck sweep: utility-loss trend has %d non-monotone "
                    "steps over %d points", breaks, len(losses))


def _set_partitions(n: int):
    """All partitions of range(n), in a fixed canonical order."""
    if n == 0:
        yield []
        return
    for rest in _set_partitions(n - 1):
        # element n-1 joins each existing block, else forms its own
        for i in range(len(rest)):
            yield rest[:i] + [rest[i] + [n - 1]] + rest[i + 1 :]
        yield rest + [[n - 1]]


def pareto_exact(pmf: JointPMF, lam: float, problem: str = "pf", max_ground: int = 10):
    """Globally optimal partition by exhaustive enumeration (test oracle).

    Minimizes the Lagrangian I(S;X-hat) - lam * H(X-hat) over every
    partition of the released alphabet for the privacy problem, maximizes
    it for the bottleneck problem.  Returns (blocks, optimal value).
    """
    n = pmf.n_x
    if n > max_ground:
        raise GroundSetTooLarge(f"|X| = {n} exceeds partition-enumeration cap {max_ground}")
    if problem not in PROBLEMS:
        raise ValueError(f"problem must be one of {PROBLEMS}, got {problem!r}")
    sign = 1.0 if problem == "pf" else -1.0
    best_blocks = None
    best_value = np.inf
    for blocks in _set_partitions(n):
        merged = apply_partition(pmf, blocks)
        value = sign * lagrangian(merged, lam)
        if value < best_value:
            best_value = value
            best_blocks = tuple(frozenset(b) for b in blocks)
    return best_blocks, float(sign * best_value)
