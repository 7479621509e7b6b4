"""Building joint distributions from delimited data files and synthetic models.

:func:`load_joint` turns tabular records into an empirical joint pmf: the
sensitive symbol is the tuple of selected S-column values, the released
symbol the tuple of X-column values, and probabilities are relative
frequencies over the rows that survive missing-value filtering.  Columns
may be chosen by header name or 0-based position; space- and
comma-delimited layouts (with or without a header row) are both handled,
which covers the usual UCI exports.

:func:`synth_joint` generates reproducible random joints with a tunable
coupling strength, used for property tests and synthetic experiments.
"""

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np

from .distributions import JointPMF
from .errors import ColumnNotFound, EmptyAfterFiltering, FileError

logger = logging.getLogger(__name__)

DEFAULT_MISSING = ("?", "-9")


@dataclass(frozen=True)
class DatasetSpec:
    """Where and how to read a delimited dataset.

    ``delimiter`` may be a literal character or None for auto-detection
    (comma if the first line contains one, else any whitespace).
    ``has_header`` None means auto: named columns imply a header row,
    all-integer columns imply positional data.
    """

    path: str
    s_columns: tuple
    x_columns: tuple
    delimiter: str | None = None
    missing_markers: tuple[str, ...] = DEFAULT_MISSING
    has_header: bool | None = None

    def __post_init__(self):
        if not self.s_columns or not self.x_columns:
            raise ValueError("s_columns and x_columns must be nonempty")


def _read_rows(spec: DatasetSpec) -> list[list[str]]:
    try:
        with open(spec.path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FileError(f"cannot read {spec.path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FileError(f"{spec.path} is empty")
    delim = spec.delimiter
    if delim is None:
        delim = "," if "," in lines[0] else None
    if delim is None:
        return [ln.split() for ln in lines]
    return list(csv.reader(io.StringIO("\n".join(lines)), delimiter=delim))


def _column_indices(columns, header: list[str] | None, width: int) -> list[int]:
    out = []
    for col in columns:
        if isinstance(col, int) or (isinstance(col, str) and col.lstrip("-").isdigit()):
            idx = int(col)
            if not 0 <= idx < width:
                raise ColumnNotFound(f"column index {idx} out of range (row width {width})")
        else:
            if header is None:
                raise ColumnNotFound(f"named column {col!r} needs a header row")
            try:
                idx = header.index(str(col))
            except ValueError:
                raise ColumnNotFound(f"column {col!r} not in header {header}") from None
        out.append(idx)
    return out


def load_joint(spec: DatasetSpec) -> JointPMF:
    """Empirical joint pmf of the selected S and X column tuples.

    Rows with a missing-value marker in any selected column are dropped
    before counting.  Symbols are ordered by first appearance; tuple
    components are joined with "," to form the label.
    """
    rows = _read_rows(spec)
    named = any(
        isinstance(c, str) and not c.lstrip("-").isdigit()
        for c in tuple(spec.s_columns) + tuple(spec.x_columns)
    )
    has_header = spec.has_header if spec.has_header is not None else named
    header = [h.strip() for h in rows[0]] if has_header else None
    data = rows[1:] if has_header else rows
    if not data:
        raise EmptyAfterFiltering(f"no data rows in {spec.path}")
    width = max(len(r) for r in data)
    s_idx = _column_indices(spec.s_columns, header, width)
    x_idx = _column_indices(spec.x_columns, header, width)

    markers = set(spec.missing_markers)
    counts: dict[tuple[str, str], int] = {}
    s_order: list[str] = []
    x_order: list[str] = []
    s_seen: set[str] = set()
    x_seen: set[str] = set()
    kept = 0
    short = 0
    for row in data:
        vals = [v.strip() for v in row]
        if max(s_idx + x_idx) >= len(vals):
            short += 1
            continue
        selected = [vals[i] for i in s_idx] + [vals[i] for i in x_idx]
        if any(v in markers for v in selected):
            continue
        s_sym = ",".join(vals[i] for i in s_idx)
        x_sym = ",".join(vals[i] for i in x_idx)
        if s_sym not in s_seen:
            s_seen.add(s_sym)
            s_order.append(s_sym)
        if x_sym not in x_seen:
            x_seen.add(x_sym)
            x_order.append(x_sym)
        counts[(s_sym, x_sym)] = counts.get((s_sym, x_sym), 0) + 1
        kept += 1
    if kept == 0:
        raise EmptyAfterFiltering(
            f"every row of {spec.path} was dropped by missing-value filtering"
        )
    logger.info("loaded %s: %d rows kept, |S|=%d, |X|=%d",
                spec.path, kept, len(s_order), len(x_order))
    mat = np.zeros((len(s_order), len(x_order)))
    s_pos = {s: i for i, s in enumerate(s_order)}
    x_pos = {x: j for j, x in enumerate(x_order)}
    for (s_sym, x_sym), c in counts.items():
        mat[s_pos[s_sym], x_pos[x_sym]] = c
    return JointPMF.from_joint(s_order, x_order, mat)


def synth_joint(n_s: int, n_x: int, rho: float = 0.5, seed: int = 0) -> JointPMF:
    """Reproducible random joint: rho-weighted mix of a deterministic
    block-diagonal coupling and a product of random marginals.

    rho = 0 gives an independent pair (zero mutual information); rho = 1
    with n_s = n_x gives a copy channel (leakage = released entropy).
    """
    if n_s < 1 or n_x < 1:
        raise ValueError("alphabet sizes must be >= 1")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must be in [0, 1]")
    rng = np.random.default_rng(seed)
    ps = rng.dirichlet(np.ones(n_s))
    px = rng.dirichlet(np.ones(n_x))
    coupled = np.zeros((n_s, n_x))
    coupled[np.arange(n_x) % n_s, np.arange(n_x)] = px
    joint = rho * coupled + (1.0 - rho) * np.outer(ps, px)
    labels_s = [f"s{i}" for i in range(n_s)]
    labels_x = [f"x{j}" for j in range(n_x)]
    return JointPMF.from_joint(labels_s, labels_x, joint)
