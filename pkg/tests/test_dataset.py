"""CSV loading and the Dataset container."""

import numpy as np
import pytest

from warranty2d import DataError, Dataset, load_dataset


def test_bundled_dataset_shape_and_rows(dataset):
    assert len(dataset) == 40
    assert dataset.age.shape == (40,)
    assert dataset.usage.shape == (40,)
    assert dataset.age[0] == 1.66
    assert dataset.usage[0] == 0.9766
    assert dataset.age[-1] == 12.00
    assert dataset.usage[-1] == 5.7304
    assert dataset.source.startswith("bundled:")


def test_bundled_dataset_is_positive(dataset):
    assert np.all(dataset.age > 0)
    assert np.all(dataset.usage > 0)


def test_arrays_are_read_only(dataset):
    with pytest.raises(ValueError):
        dataset.age[0] = 99.0
    with pytest.raises(ValueError):
        dataset.usage[3] = -1.0


def test_load_from_explicit_path(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n1.5,0.25\n2.5,0.75\n")
    ds = load_dataset(p)
    assert len(ds) == 2
    assert ds.age.tolist() == [1.5, 2.5]
    assert ds.usage.tolist() == [0.25, 0.75]
    assert ds.source == str(p)


def test_mileage_alias_and_extra_columns(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("unit,mileage,age\nA,0.4,2.0\nB,0.6,3.0\n")
    ds = load_dataset(p)
    assert ds.usage.tolist() == [0.4, 0.6]
    assert ds.age.tolist() == [2.0, 3.0]


def test_blank_lines_are_skipped(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n1.0,1.0\n\n , \n2.0,2.0\n")
    assert len(load_dataset(p)) == 2


def test_empty_file(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("")
    with pytest.raises(DataError, match="file is empty"):
        load_dataset(p)


def test_header_only_file(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n")
    with pytest.raises(DataError, match="empty"):
        load_dataset(p)


def test_missing_column(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,km\n1.0,2.0\n")
    with pytest.raises(DataError, match="missing column 'usage'"):
        load_dataset(p)


def test_non_numeric_cell_reports_row_and_column(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n1.0,1.0\n2.0,oops\n")
    with pytest.raises(DataError, match=r"row 3, column 'usage'"):
        load_dataset(p)


def test_short_row(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n1.0\n")
    with pytest.raises(DataError, match="row 2 is missing 'usage'"):
        load_dataset(p)


def test_nonpositive_value_reports_row(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,usage\n1.0,1.0\n0.0,2.0\n")
    with pytest.raises(DataError, match="row 2"):
        load_dataset(p)


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="cannot open"):
        load_dataset(tmp_path / "nope.csv")


def test_direct_construction_validates():
    with pytest.raises(DataError, match="empty"):
        Dataset(np.array([]), np.array([]))
    with pytest.raises(DataError, match="40 records but usage has 2"):
        Dataset(np.ones(40), np.ones(2))
    with pytest.raises(DataError, match="row 2"):
        Dataset(np.array([1.0, -1.0]), np.array([1.0, 1.0]))
    with pytest.raises(DataError, match="non-finite usage in row 1"):
        Dataset(np.array([1.0]), np.array([np.nan]))
    with pytest.raises(DataError, match="one-dimensional"):
        Dataset(np.ones((2, 2)), np.ones((2, 2)))
