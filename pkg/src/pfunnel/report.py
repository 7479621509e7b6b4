"""Frontier/trajectory serialization, dominance comparison, and figures.

Frontier files use one fixed schema (CSV header order below, JSON as an
array of objects with the same keys) so plotting scripts and golden tests
can rely on it.  All numbers are serialized with 12 significant digits and
a "." decimal separator, independent of locale.  For pairwise-baseline
records the ``lambda`` column carries the threshold in bits and
``strategy`` is ``pairwise``.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass

logger = logging.getLogger(__name__)

FRONTIER_FIELDS = (
    "lambda",
    "problem",
    "strategy",
    "leakage_bits",
    "utility_bits",
    "leakage_norm",
    "utility_loss_norm",
    "alphabet_size",
    "iterations",
    "seed",
    "wall_time_ms",
)

_FLOAT_FIELDS = ("lambda", "leakage_bits", "utility_bits", "leakage_norm", "utility_loss_norm")
_INT_FIELDS = ("alphabet_size", "iterations", "seed", "wall_time_ms")


@dataclass(frozen=True)
class ReportRecord:
    """One run's frontier record; ``dataset_id`` is kept out of the pinned
    frontier schema but travels with single-run reports."""

    lam: float
    problem: str
    strategy: str
    leakage_bits: float
    utility_bits: float
    leakage_norm: float
    utility_loss_norm: float
    alphabet_size: int
    iterations: int
    seed: int
    wall_time_ms: int = 0
    dataset_id: str = ""


def fmt_number(v: float) -> str:
    """12 significant digits, '.' separator, no locale dependence."""
    v = float(v)
    if v == 0.0:  # normalize -0.0
        v = 0.0
    return f"{v:.12g}"


def round12(v: float) -> float:
    return float(fmt_number(v))


def _record_values(rec: ReportRecord) -> dict:
    return {
        "lambda": round12(rec.lam),
        "problem": rec.problem,
        "strategy": rec.strategy,
        "leakage_bits": round12(rec.leakage_bits),
        "utility_bits": round12(rec.utility_bits),
        "leakage_norm": round12(rec.leakage_norm),
        "utility_loss_norm": round12(rec.utility_loss_norm),
        "alphabet_size": int(rec.alphabet_size),
        "iterations": int(rec.iterations),
        "seed": int(rec.seed),
        "wall_time_ms": int(rec.wall_time_ms),
    }


def frontier_csv_text(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FRONTIER_FIELDS)
    for rec in records:
        vals = _record_values(rec)
        writer.writerow(
            [fmt_number(vals[f]) if f in _FLOAT_FIELDS else vals[f] for f in FRONTIER_FIELDS]
        )
    return buf.getvalue()


def frontier_json_text(records) -> str:
    return json.dumps([_record_values(r) for r in records], indent=2) + "\n"


def write_frontier(path: str, records, fmt: str = "csv") -> None:
    text = frontier_csv_text(records) if fmt == "csv" else frontier_json_text(records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_frontier(path: str) -> list[ReportRecord]:
    """Read a frontier file written by :func:`write_frontier` (either format)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("["):
        raw = json.loads(text)
    else:
        raw = list(csv.DictReader(io.StringIO(text)))
    records = []
    for row in raw:
        records.append(
            ReportRecord(
                lam=float(row["lambda"]),
                problem=str(row["problem"]),
                strategy=str(row["strategy"]),
                leakage_bits=float(row["leakage_bits"]),
                utility_bits=float(row["utility_bits"]),
                leakage_norm=float(row["leakage_norm"]),
                utility_loss_norm=float(row["utility_loss_norm"]),
                alphabet_size=int(row["alphabet_size"]),
                iterations=int(row["iterations"]),
                seed=int(row["seed"]),
                wall_time_ms=int(row["wall_time_ms"]),
            )
        )
    return records


def run_report_json_text(record: ReportRecord, trajectory) -> str:
    payload = _record_values(record)
    payload["dataset_id"] = record.dataset_id
    payload["trajectory"] = [round12(v) for v in trajectory]
    return json.dumps(payload, indent=2) + "\n"


def trajectory_csv_text(trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "value"])
    for k, v in enumerate(trajectory):
        writer.writerow([k, fmt_number(v)])
    return buf.getvalue()


def dominance(points, baseline_points, problem: str, tol: float = 1e-9):
    """Weak-dominance flags of candidate points over each baseline point.

    Privacy orientation: lower leakage and higher utility are better.
    Bottleneck orientation: higher extracted information and lower rate
    are better.  Returns (flags, percentage dominated).
    """
    flags = []
    for base in baseline_points:
        if problem == "pf":
            dominated = any(
                p.leakage_bits <= base.leakage_bits + tol
                and p.utility_bits >= base.utility_bits - tol
                for p in points
            )
        else:
            dominated = any(
                p.leakage_bits >= base.leakage_bits - tol
                and p.utility_bits <= base.utility_bits + tol
                for p in points
            )
        flags.append(bool(dominated))
    pct = 100.0 * sum(flags) / len(flags) if flags else 0.0
    return flags, pct


def comparison_csv_text(baseline_records, flags) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FRONTIER_FIELDS + ("dominated",))
    for rec, flag in zip(baseline_records, flags):
        vals = _record_values(rec)
        writer.writerow(
            [fmt_number(vals[f]) if f in _FLOAT_FIELDS else vals[f] for f in FRONTIER_FIELDS]
            + [int(flag)]
        )
    return buf.getvalue()


def comparison_json_text(baseline_records, flags, pct) -> str:
    rows = []
    for rec, flag in zip(baseline_records, flags):
        row = _record_values(rec)
        row["dominated"] = bool(flag)
        rows.append(row)
    return json.dumps({"points": rows, "dominance_pct": round12(pct)}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

_PNG_METADATA = {"Software": "pfunnel"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    return plt


def plot_trajectory(trajectory, path: str, label: str = "objective") -> None:
    """Objective value per outer iteration, saved as PNG."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.plot(range(len(trajectory)), trajectory, marker="o", lw=1.5)
    ax.set_xlabel("iteration")
    ax.set_ylabel(label)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_METADATA)
    plt.close(fig)


def plot_frontier(records, path: str, baseline_records=None) -> None:
    """Normalized leakage vs utility-loss scatter, saved as PNG."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    xs = [r.utility_loss_norm for r in records]
    ys = [r.leakage_norm for r in records]
    ax.scatter(xs, ys, marker="*", s=45, label="subset merges", color="tab:red")
    if baseline_records:
        bx = [r.utility_loss_norm for r in baseline_records]
        by = [r.leakage_norm for r in baseline_records]
        ax.scatter(bx, by, marker="D", s=30, label="pairwise merges", color="tab:green")
    ax.set_xlabel("utility loss  -I(X;X^)/H(X)")
    ax.set_ylabel("leakage  I(S;X^)/H(S)")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_METADATA)
    plt.close(fig)
