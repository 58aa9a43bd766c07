"""Matrix file format and canonical report writing."""

import json
import os

import numpy as np
import pytest

from qrelent import (
    HermitianMatrix,
    MatrixParseError,
    matrix_from_dict,
    matrix_to_dict,
    read_matrix,
    write_matrix,
    write_report,
)
from conftest import sample_hermitian, trial_rng


def test_identity_from_dict():
    m = matrix_from_dict({"dim": 2, "re": [1.0, 0.0, 0.0, 1.0]})
    assert np.array_equal(m.entries, np.eye(2, dtype=complex))


def test_missing_im_treated_as_zero():
    m = matrix_from_dict({"dim": 2, "re": [1.0, 2.0, 2.0, 1.0]})
    assert np.all(m.entries.imag == 0.0)


def test_round_trip_full_precision(tmp_path):
    m = sample_hermitian(trial_rng(301, 0), 5, 3.0)
    path = str(tmp_path / "m.json")
    write_matrix(m, path)
    back = read_matrix(path)
    assert np.array_equal(back.entries, m.entries)


def test_round_trip_real_matrix_omits_im(tmp_path):
    m = HermitianMatrix.diagonal([1.5, -2.25])
    path = str(tmp_path / "m.json")
    write_matrix(m, path)
    doc = json.loads(open(path).read())
    assert "im" not in doc
    assert np.array_equal(read_matrix(path).entries, m.entries)


def test_integer_entries_accepted():
    m = matrix_from_dict({"dim": 1, "re": [2]})
    assert m.entries[0, 0] == 2.0


@pytest.mark.parametrize(
    "doc",
    [
        {"dim": 2, "re": [1.0, 2.0, 3.0, 4.0]},  # anti-self-adjoint part too large
        {"dim": 2, "re": [1.0, 0.0, 0.0]},  # wrong length
        {"dim": 0, "re": []},  # bad dim
        {"dim": 2},  # missing re
        {"dim": 2, "re": [1.0, 0.0, 0.0, 1.0], "im": [0.0]},  # im wrong length
        {"dim": 2, "re": [1.0, 0.0, 0.0, "x"]},  # non-numeric
        {"dim": 2, "re": [1.0, 0.0, 0.0, True]},  # bool is not a number here
        {"dim": "2", "re": [1.0, 0.0, 0.0, 1.0]},  # dim not an int
        [1, 2, 3],  # not an object
    ],
)
def test_malformed_documents_rejected(doc):
    with pytest.raises(MatrixParseError):
        matrix_from_dict(doc)


def test_parse_error_names_the_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2, "re": [1.0, 2.0, 3.0, 4.0]}')
    with pytest.raises(MatrixParseError) as err:
        read_matrix(str(path))
    assert "bad.json" in str(err.value)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"dim": 2,\n  "re": [1.0,,]}')
    with pytest.raises(MatrixParseError) as err:
        read_matrix(str(path))
    assert "line 2" in str(err.value)


def test_non_finite_entries_rejected():
    with pytest.raises(MatrixParseError):
        matrix_from_dict({"dim": 1, "re": [float("nan")]})


def test_matrix_to_dict_round_trips_complex():
    m = sample_hermitian(trial_rng(302, 0), 3, 2.0)
    back = matrix_from_dict(matrix_to_dict(m))
    assert np.array_equal(back.entries, m.entries)


def test_report_written_canonically(tmp_path):
    path = str(tmp_path / "report.json")
    write_report({"b": 1, "a": {"z": 2.5, "y": [1.0]}}, path)
    text = open(path).read()
    assert text == '{"a": {"y": [1.0], "z": 2.5}, "b": 1}\n'


def test_write_is_atomic_no_temp_left_behind(tmp_path):
    path = str(tmp_path / "report.json")
    write_report({"k": 1}, path)
    write_report({"k": 2}, path)
    assert json.loads(open(path).read()) == {"k": 2}
    assert os.listdir(tmp_path) == ["report.json"]
