"""Finite joint distributions and deterministic merge (hard clustering) semantics.

A :class:`JointPMF` holds the dense joint probability matrix p(s, x) of a
sensitive variable S (rows) and a released variable X (columns).  All
information quantities in the package are computed from this one structure,
in bits (base-2 logarithms).

Merging a subset W of released symbols sums their columns into a single
super-symbol whose label joins the original labels with ``+``.  This is the
column-space analogue of a deterministic channel X -> X-hat: the merged
joint is p(s, W) = sum_{x in W} p(s, x).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPartition, MergeTooSmall

# Subsets of released-symbol column indices.
MergeSet = frozenset[int]

# Disjoint MergeSets covering all columns.
Partition = tuple[MergeSet, ...]

_SUM_TOL = 1e-12


def _xlog2x(v: np.ndarray) -> np.ndarray:
    """Elementwise v * log2(v) with the 0*log0 = 0 convention."""
    out = np.zeros_like(v, dtype=float)
    pos = v > 0
    out[pos] = v[pos] * np.log2(v[pos])
    return out


@dataclass(frozen=True)
class JointPMF:
    """Immutable joint pmf over (S, X) with labelled alphabets.

    Use :meth:`from_joint` to build one from raw weights; the constructor
    itself enforces the invariants (nonnegative entries, total mass 1,
    no all-zero column) and freezes the matrix.
    """

    s_labels: tuple[str, ...]
    x_labels: tuple[str, ...]
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (len(self.s_labels), len(self.x_labels)):
            raise ValueError(
                f"matrix shape {p.shape} does not match alphabets "
                f"({len(self.s_labels)}, {len(self.x_labels)})"
            )
        if len(set(self.s_labels)) != len(self.s_labels):
            raise ValueError("duplicate labels in S alphabet")
        if len(set(self.x_labels)) != len(self.x_labels):
            raise ValueError("duplicate labels in X alphabet")
        if np.any(p < 0):
            raise ValueError("negative probability entry")
        if abs(p.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"entries sum to {p.sum()!r}, not 1")
        if p.shape[1] == 0 or np.any(p.sum(axis=0) == 0):
            raise ValueError("released symbol with zero marginal")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_joint(cls, s_labels, x_labels, weights) -> "JointPMF":
        """Build a pmf from nonnegative weights, normalizing to total mass 1.

        Released symbols with zero marginal are dropped: they contribute
        nothing to any information quantity and would break the positive
        p(x) assumptions of the merge set functions.
        """
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise ValueError("negative weight")
        total = w.sum()
        if total <= 0:
            raise ValueError("weights sum to zero")
        w = w / total
        keep = w.sum(axis=0) > 0
        return cls(
            tuple(str(s) for s in s_labels),
            tuple(str(x) for x in np.asarray(x_labels, dtype=object)[keep]),
            w[:, keep],
        )

    @property
    def n_x(self) -> int:
        return len(self.x_labels)

    @property
    def n_s(self) -> int:
        return len(self.s_labels)

    def s_marginal(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def x_marginal(self) -> np.ndarray:
        return self.p.sum(axis=0)


def entropy(pmf: JointPMF, axis: str) -> float:
    """Shannon entropy in bits of the S ("s") or X ("x") marginal."""
    if axis == "s":
        marg = pmf.s_marginal()
    elif axis == "x":
        marg = pmf.x_marginal()
    else:
        raise ValueError(f"axis must be 's' or 'x', got {axis!r}")
    # total mass 1 within 1e-12 keeps this nonnegative up to float residue
    return max(float(-_xlog2x(marg).sum()), 0.0) + 0.0


def mutual_information(pmf: JointPMF) -> float:
    """I(S; X) in bits, clamped to [0, min(H(S), H(X))].

    Computed as sum p(s,x) log2[p(s,x) / (p(s) p(x))] with zero entries
    skipped; the clamp only absorbs floating-point residue (the defining
    sum cannot leave the bounds for a valid pmf).
    """
    ps = pmf.s_marginal()
    px = pmf.x_marginal()
    p = pmf.p
    pos = p > 0
    prod = np.outer(ps, px)
    mi = float(np.sum(p[pos] * (np.log2(p[pos]) - np.log2(prod[pos]))))
    upper = min(entropy(pmf, "s"), entropy(pmf, "x"))
    return min(max(mi, 0.0), upper) + 0.0


def _validate_merge_set(pmf: JointPMF, w) -> frozenset[int]:
    w = frozenset(int(i) for i in w)
    for i in w:
        if not 0 <= i < pmf.n_x:
            raise IndexError(f"merge index {i} out of range for |X| = {pmf.n_x}")
    return w


def merge(pmf: JointPMF, w) -> JointPMF:
    """Merge the released symbols indexed by ``w`` into one super-symbol.

    The merged column is the elementwise sum of the columns in ``w`` and is
    placed at the position of the smallest merged index, so symbol order is
    deterministic.  The new label joins the merged labels with ``+``.
    """
    w = _validate_merge_set(pmf, w)
    if len(w) < 2:
        raise MergeTooSmall(f"merge needs at least 2 symbols, got {len(w)}")
    order = sorted(w)
    anchor = order[0]
    labels = []
    cols = []
    for j in range(pmf.n_x):
        if j == anchor:
            labels.append("+".join(pmf.x_labels[i] for i in order))
            cols.append(pmf.p[:, order].sum(axis=1))
        elif j not in w:
            labels.append(pmf.x_labels[j])
            cols.append(pmf.p[:, j])
    return JointPMF(pmf.s_labels, tuple(labels), np.column_stack(cols))


def apply_partition(pmf: JointPMF, blocks) -> JointPMF:
    """Apply a full partition of the released alphabet in one step.

    Equivalent to merging every block of size >= 2; blocks are placed in
    order of their smallest member index.
    """
    blocks = [frozenset(int(i) for i in b) for b in blocks]
    flat = [i for b in blocks for i in b]
    if any(not b for b in blocks):
        raise InvalidPartition("empty block")
    if len(flat) != len(set(flat)):
        raise InvalidPartition("blocks overlap")
    if set(flat) != set(range(pmf.n_x)):
        raise InvalidPartition("blocks do not cover the alphabet")
    labels = []
    cols = []
    for b in sorted(blocks, key=min):
        order = sorted(b)
        labels.append("+".join(pmf.x_labels[i] for i in order))
        cols.append(pmf.p[:, order].sum(axis=1))
    return JointPMF(pmf.s_labels, tuple(labels), np.column_stack(cols))
