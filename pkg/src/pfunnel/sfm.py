"""Exact submodular function minimization via the min-norm-point algorithm.

A set function F over ground set {0, .., n-1} with F(empty) = 0 is presented
through a :class:`SetFunctionOracle`.  For submodular F, Edmonds' greedy
procedure turns any permutation into a vertex of the base polytope

    B(F) = { y : y(W) <= F(W) for all W,  y(V) = F(V) },

and the minimum-norm point x* of B(F) identifies a global minimizer of F
through the signs of its coordinates.  Wolfe's algorithm computes x* by
alternating major cycles (add the greedy vertex most aligned against x)
with minor cycles (affine minimization over the current corral, dropping
vertices whose affine weight goes nonpositive).
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Collection, Optional

import numpy as np

from .errors import GroundSetTooLarge, NonSubmodularDetected, NotConverged


_AFFINE_EPS = 1e-12
_BRUTE_CAP = 22


@dataclass(frozen=True)
class SetFunctionOracle:
    """Evaluation interface for a real-valued set function.

    ``evaluate`` maps a collection of 0-based indices to a value and must be
    deterministic.  ``normalized`` asserts evaluate(empty) = 0, which the
    solvers rely on.  ``prefix_gains``, when provided, returns the greedy
    marginal gains along a permutation in one call (same values as nested
    ``evaluate`` differences, but typically vectorized).
    """

    ground_size: int
    evaluate: Callable[[Collection[int]], float]
    normalized: bool = True
    prefix_gains: Optional[Callable[[np.ndarray], np.ndarray]] = None


def modular_oracle(weights) -> SetFunctionOracle:
    """The modular function W -> sum(weights[W])."""
    w = np.asarray(weights, dtype=float)
    return SetFunctionOracle(
        ground_size=w.size,
        evaluate=lambda s: float(w[np.fromiter(s, dtype=int, count=len(s))].sum()),
        prefix_gains=lambda perm: w[perm],
    )


def scale_oracle(oracle: SetFunctionOracle, c: float) -> SetFunctionOracle:
    """c * F for c >= 0 (preserves submodularity and normalization)."""
    if c < 0:
        raise ValueError("scale must be nonnegative to preserve submodularity")
    return SetFunctionOracle(
        ground_size=oracle.ground_size,
        evaluate=lambda s: c * oracle.evaluate(s),
        normalized=oracle.normalized,
        prefix_gains=None
        if oracle.prefix_gains is None
        else (lambda perm: c * oracle.prefix_gains(perm)),
    )


def subtract_modular(oracle: SetFunctionOracle, weights) -> SetFunctionOracle:
    """F(W) - sum(weights[W]); submodular whenever F is."""
    w = np.asarray(weights, dtype=float)
    if w.size != oracle.ground_size:
        raise ValueError("weight vector length does not match ground size")

    def evaluate(s):
        idx = np.fromiter(s, dtype=int, count=len(s))
        return oracle.evaluate(s) - float(w[idx].sum())

    return SetFunctionOracle(
        ground_size=oracle.ground_size,
        evaluate=evaluate,
        normalized=oracle.normalized,
        prefix_gains=None
        if oracle.prefix_gains is None
        else (lambda perm: oracle.prefix_gains(perm) - w[perm]),
    )


def _check_permutation(n: int, perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=int)
    if perm.shape != (n,) or np.any(np.sort(perm) != np.arange(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm!r}")
    return perm


def greedy_base_vertex(oracle: SetFunctionOracle, perm) -> np.ndarray:
    """Edmonds' greedy vertex of the base polytope for a given permutation.

    coords[perm[i]] is the marginal gain of perm[i] on the prefix before it;
    the coordinates telescope to evaluate(V).
    """
    n = oracle.ground_size
    perm = _check_permutation(n, perm)
    coords = np.empty(n)
    if oracle.prefix_gains is not None:
        coords[perm] = np.asarray(oracle.prefix_gains(perm), dtype=float)
        return coords
    prefix: list[int] = []
    prev = 0.0
    for i in perm:
        prefix.append(int(i))
        val = oracle.evaluate(prefix)
        coords[i] = val - prev
        prev = val
    return coords


def _affine_minimizer(B: np.ndarray) -> np.ndarray:
    """Coefficients of the min-norm point in the affine hull of B's columns.

    Solves the normal equations on the Gram matrix; falls back to an
    SVD-based least-squares solve when the corral is affinely degenerate.
    """
    m = B.shape[1]
    gram = B.T @ B
    ones = np.ones(m)
    try:
        sol = np.linalg.solve(gram, ones)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(gram, ones, rcond=None)[0]
    total = float(ones @ sol)
    if not np.isfinite(sol).all() or abs(total) < 1e-300:
        sol = np.linalg.lstsq(gram, ones, rcond=None)[0]
        total = float(ones @ sol)
        if abs(total) < 1e-300:
            # fully degenerate corral; keep the first vertex
            sol = np.zeros(m)
            sol[0] = 1.0
            total = 1.0
    return sol / total


def _tie_key(value, w):
    return (value, len(w), tuple(sorted(w)))


def _level_set_chain(oracle, x):
    """Best set among the level-set chain of x (the minimizer candidates)."""
    order = np.argsort(x, kind="stable")
    best_v, best_w = 0.0, frozenset()
    prefix: list[int] = []
    for k in range(oracle.ground_size):
        prefix.append(int(order[k]))
        v = float(oracle.evaluate(prefix))
        cand = frozenset(prefix)
        if _tie_key(v, cand) < _tie_key(best_v, best_w):
            best_v, best_w = v, cand
    return best_w, best_v


def min_norm_point(
    oracle: SetFunctionOracle,
    tol: float = 1e-10,
    max_major: Optional[int] = None,
    init_perm=None,
) -> tuple[frozenset[int], float]:
    """Globally minimize a normalized submodular function.

    Parameters
    ----------
    oracle : SetFunctionOracle
        Must be submodular and normalized.
    tol : float
        Wolfe optimality tolerance on <x, x - q>.
    max_major : int, optional
        Major-cycle cap; defaults to 10 * n**2.  Exceeding it raises
        :class:`NotConverged` carrying the best iterate so far.
    init_perm : sequence of int, optional
        Permutation producing the starting vertex (identity by default);
        fixing it makes the run deterministic.

    Returns
    -------
    (minimizer, min_value)
        The minimizer is extracted from the sign pattern of the min-norm
        point by scanning its level-set chain and keeping the best set
        (ties: smaller, then lexicographically earlier).
    """
    n = oracle.ground_size
    if not oracle.normalized:
        raise ValueError("min_norm_point requires a normalized oracle")
    if n == 0:
        return frozenset(), 0.0
    if max_major is None:
        max_major = max(100, 10 * n * n)
    if tol <= 0:
        raise ValueError("tol must be positive")

    perm0 = np.arange(n) if init_perm is None else _check_permutation(n, init_perm)
    b0 = greedy_base_vertex(oracle, perm0)
    B = b0.reshape(n, 1)
    coef = np.array([1.0])
    x = b0.copy()
    sq_norm = float(x @ x)

    for _ in range(max_major):
        order = np.argsort(x, kind="stable")
        q = greedy_base_vertex(oracle, order)
        if sq_norm <= float(x @ q) + tol:
            break
        if B.shape[1] and np.min(np.max(np.abs(B - q[:, None]), axis=0)) <= 1e-14:
            # the linear oracle repeated a corral vertex: numerical optimum
            break
        B = np.hstack([B, q.reshape(n, 1)])
        coef = np.append(coef, 0.0)

        for _minor in range(3 * n + 10):
            beta = _affine_minimizer(B)
            if np.all(beta > _AFFINE_EPS):
                coef = beta
                break
            # move toward the affine minimizer until the first convex weight
            # vanishes, then drop the vertices that hit the boundary
            bad = beta <= _AFFINE_EPS
            shrink = coef - beta
            movable = bad & (shrink > _AFFINE_EPS)
            if not np.any(movable):
                coef = np.clip(beta, 0.0, None)
                coef /= coef.sum()
                break
            theta = float(np.min(coef[movable] / shrink[movable]))
            theta = min(max(theta, 0.0), 1.0)
            coef = (1.0 - theta) * coef + theta * beta
            keep = coef > _AFFINE_EPS
            if not np.any(keep):
                keep[int(np.argmax(coef))] = True
            B = B[:, keep]
            coef = np.clip(coef[keep], 0.0, None)
            coef /= coef.sum()

        x = B @ coef
        new_sq = float(x @ x)
        if new_sq > sq_norm + 1e-9 * max(1.0, sq_norm):
            raise NonSubmodularDetected(
                f"norm increased from {sq_norm!r} to {new_sq!r}; oracle is not submodular"
            )
        sq_norm = min(sq_norm, new_sq)
    else:
        w, v = _level_set_chain(oracle, x)
        raise NotConverged(
            f"min-norm point did not reach tol={tol} within {max_major} major cycles",
            minimizer=w,
            value=v,
            iterations=max_major,
        )

    return _level_set_chain(oracle, x)


def sfm_bruteforce(oracle: SetFunctionOracle) -> tuple[frozenset[int], float]:
    """Exhaustive minimizer over all subsets (test oracle).

    Ties break to the smallest cardinality, then lexicographic index order,
    via strict improvement over a canonical enumeration.
    """
    n = oracle.ground_size
    if n > _BRUTE_CAP:
        raise GroundSetTooLarge(f"n = {n} exceeds brute-force cap {_BRUTE_CAP}")
    best_w: frozenset[int] = frozenset()
    best_v = oracle.evaluate(()) if not oracle.normalized else 0.0
    for r in range(1, n + 1):
        for w in itertools.combinations(range(n), r):
            v = oracle.evaluate(w)
            if v < best_v:
                best_v, best_w = v, frozenset(w)
    return best_w, float(best_v)
