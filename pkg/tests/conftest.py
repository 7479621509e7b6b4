"""Shared fixtures: canonical small joints and a dataset-scale surrogate.

D1 is the 2x4 workhorse whose released marginal is (0.2, 0.3, 0.1, 0.4);
D3 has one pair of released symbols with identical conditionals (a and c)
and two sharply skewed ones, so lossless merges are isolated from lossy
ones.  The heart surrogate mimics the layout and scale of the UCI
Hungarian heart-disease export (space-delimited, positional columns,
"-9" missing markers, |X| around 200); tests use the real file instead
when PFUNNEL_HEART_DATA points at it or data/reprocessed.hungarian.data
exists.
"""

import os

import numpy as np
import pytest

from pfunnel import JointPMF

D1_MATRIX = [[0.1, 0.2, 0.0, 0.3], [0.1, 0.1, 0.1, 0.1]]
D3_MATRIX = [[0.10, 0.24, 0.12, 0.04], [0.10, 0.04, 0.12, 0.24]]


@pytest.fixture
def d1() -> JointPMF:
    return JointPMF.from_joint(["0", "1"], ["1", "2", "3", "4"], D1_MATRIX)


@pytest.fixture
def d3() -> JointPMF:
    return JointPMF.from_joint(["0", "1"], ["a", "b", "c", "d"], D3_MATRIX)


@pytest.fixture
def copy_channel() -> JointPMF:
    return JointPMF.from_joint(["0", "1", "2"], ["0", "1", "2"], np.eye(3) / 3)


def write_heart_surrogate(path: str, seed: int = 42, n_rows: int = 294) -> None:
    """Space-delimited (age sex chol ...) rows at the scale of the
    Hungarian heart-disease export; some cholesterol values are -9."""
    rng = np.random.default_rng(seed)
    age = np.clip(np.rint(rng.normal(48.5, 7.8, n_rows)), 28, 66).astype(int)
    sex = (rng.random(n_rows) < 0.72).astype(int)
    chol = np.clip(np.rint(rng.normal(250, 62, n_rows)), 85, 603).astype(int)
    chol = np.where(rng.random(n_rows) < 0.08, -9, chol)
    extra = rng.integers(0, 2, n_rows)  # unrelated trailing column
    with open(path, "w", encoding="utf-8") as fh:
        for row in zip(age, sex, chol, extra):
            fh.write(" ".join(str(v) for v in row) + "\n")


def heart_dataset_path(tmp_dir: str) -> tuple[str, bool]:
    """(path, is_real): the real UCI file when available, else the surrogate."""
    candidates = [os.environ.get("PFUNNEL_HEART_DATA", ""),
                  os.path.join(os.path.dirname(__file__), "..", "data",
                               "reprocessed.hungarian.data")]
    for cand in candidates:
        if cand and os.path.isfile(cand):
            return cand, True
    path = os.path.join(tmp_dir, "heart_surrogate.data")
    if not os.path.isfile(path):
        write_heart_surrogate(path)
    return path, False


@pytest.fixture(scope="session")
def heart_file(tmp_path_factory) -> tuple[str, bool]:
    return heart_dataset_path(str(tmp_path_factory.mktemp("heart")))


@pytest.fixture
def d1_csv(tmp_path) -> str:
    """D1 expressed as 40 raw records so empirical counting reproduces it."""
    rows = []
    counts = (np.array(D1_MATRIX) * 40).astype(int)
    for i, s in enumerate(["0", "1"]):
        for j, x in enumerate(["1", "2", "3", "4"]):
            rows.extend([f"{s},{x}"] * counts[i, j])
    path = tmp_path / "d1.csv"
    path.write_text("s,x\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return str(path)
