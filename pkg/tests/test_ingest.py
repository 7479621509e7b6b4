"""Empirical joint construction from files and the synthetic generator."""

import numpy as np
import pytest

from pfunnel import (
    ColumnNotFound,
    DatasetSpec,
    EmptyAfterFiltering,
    FileError,
    entropy,
    load_joint,
    mutual_information,
    synth_joint,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestLoadJoint:
    def test_exact_counts_small_csv(self, tmp_path):
        path = write(tmp_path, "toy.csv",
                     "sex,chol\n1,200\n1,200\n0,180\n1,240\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=("sex",),
                                     x_columns=("chol",)))
        assert pmf.s_labels == ("1", "0")
        assert pmf.x_labels == ("200", "180", "240")
        np.testing.assert_allclose(
            pmf.p, [[0.5, 0.0, 0.25], [0.0, 0.25, 0.0]], atol=1e-15)

    def test_composite_symbols_are_tuples(self, tmp_path):
        path = write(tmp_path, "toy.csv",
                     "a,b,c\n1,2,3\n1,2,4\n2,2,3\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=("a", "b"),
                                     x_columns=("b", "c")))
        assert pmf.s_labels == ("1,2", "2,2")
        assert pmf.x_labels == ("2,3", "2,4")

    def test_missing_markers_drop_rows(self, tmp_path):
        path = write(tmp_path, "toy.csv",
                     "s,x\n0,10\n0,?\n1,-9\n1,20\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=("s",), x_columns=("x",)))
        assert pmf.p.sum() == pytest.approx(1.0)
        assert pmf.x_labels == ("10", "20")

    def test_marker_in_unselected_column_is_ignored(self, tmp_path):
        path = write(tmp_path, "toy.csv",
                     "s,x,junk\n0,10,?\n1,20,-9\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=("s",), x_columns=("x",)))
        assert pmf.n_x == 2

    def test_all_rows_filtered(self, tmp_path):
        path = write(tmp_path, "toy.csv", "s,x\n0,?\n1,-9\n")
        with pytest.raises(EmptyAfterFiltering):
            load_joint(DatasetSpec(path=path, s_columns=("s",), x_columns=("x",)))

    def test_missing_file(self):
        with pytest.raises(FileError):
            load_joint(DatasetSpec(path="/nonexistent/file.csv",
                                   s_columns=("s",), x_columns=("x",)))

    def test_unknown_named_column(self, tmp_path):
        path = write(tmp_path, "toy.csv", "s,x\n0,1\n")
        with pytest.raises(ColumnNotFound):
            load_joint(DatasetSpec(path=path, s_columns=("nope",), x_columns=("x",)))

    def test_index_out_of_range(self, tmp_path):
        path = write(tmp_path, "toy.csv", "0,1\n1,0\n")
        with pytest.raises(ColumnNotFound):
            load_joint(DatasetSpec(path=path, s_columns=(0,), x_columns=(5,)))

    def test_positional_whitespace_layout(self, tmp_path):
        path = write(tmp_path, "toy.data",
                     "63 1 233\n67 1 286\n67 1 233\n41 0 -9\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=(0, 1),
                                     x_columns=(1, 2)))
        # integer columns imply no header: all four rows are data, one dropped
        assert pmf.p.sum() == pytest.approx(1.0)
        assert pmf.x_labels == ("1,233", "1,286")
        assert pmf.s_labels == ("63,1", "67,1")

    def test_named_columns_need_header(self, tmp_path):
        path = write(tmp_path, "toy.data", "63 1 233\n")
        with pytest.raises(ColumnNotFound):
            load_joint(DatasetSpec(path=path, s_columns=("age",),
                                   x_columns=("chol",), has_header=False))

    def test_row_permutation_leaves_information_unchanged(self, tmp_path):
        rows = ["0,10", "0,20", "1,10", "1,30", "1,30", "0,10"]
        p1 = write(tmp_path, "a.csv", "s,x\n" + "\n".join(rows) + "\n")
        p2 = write(tmp_path, "b.csv", "s,x\n" + "\n".join(reversed(rows)) + "\n")
        m1 = load_joint(DatasetSpec(path=p1, s_columns=("s",), x_columns=("x",)))
        m2 = load_joint(DatasetSpec(path=p2, s_columns=("s",), x_columns=("x",)))
        assert mutual_information(m1) == pytest.approx(
            mutual_information(m2), abs=1e-12)
        assert sorted(m1.x_labels) == sorted(m2.x_labels)

    def test_header_flag_override(self, tmp_path):
        path = write(tmp_path, "toy.csv", "7,8\n0,10\n1,20\n")
        pmf = load_joint(DatasetSpec(path=path, s_columns=(0,), x_columns=(1,),
                                     has_header=True))
        assert pmf.s_labels == ("0", "1")


class TestSynthJoint:
    def test_rho_zero_is_independent(self):
        pmf = synth_joint(3, 6, rho=0.0, seed=4)
        assert mutual_information(pmf) == pytest.approx(0.0, abs=1e-9)

    def test_rho_one_square_is_copy_channel(self):
        pmf = synth_joint(5, 5, rho=1.0, seed=4)
        assert mutual_information(pmf) == pytest.approx(
            entropy(pmf, "s"), abs=1e-9)

    def test_deterministic(self):
        a = synth_joint(3, 7, rho=0.4, seed=9)
        b = synth_joint(3, 7, rho=0.4, seed=9)
        np.testing.assert_array_equal(a.p, b.p)

    def test_validation(self):
        with pytest.raises(ValueError):
            synth_joint(0, 4)
        with pytest.raises(ValueError):
            synth_joint(2, 4, rho=1.5)
