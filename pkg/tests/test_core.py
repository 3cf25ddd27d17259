import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minimaxlab.core import BiMatrix, IndexSequence, Tolerance, validate_bimatrix, validate_weights
from minimaxlab.exceptions import (
    EmptyDimension,
    IndexOutOfRange,
    LengthMismatch,
    NegativeWeight,
    NonFiniteEntry,
    RaggedRows,
    SumNotOne,
    ValidationError,
)
from tests.conftest import matrices


def test_well_formed_matrix():
    F = validate_bimatrix([[0, 1], [1, 0]])
    assert F.shape == (2, 2)
    assert F.rows == 2 and F.cols == 2


def test_nan_entry_reports_position():
    with pytest.raises(NonFiniteEntry) as info:
        validate_bimatrix([[0, float("nan")]])
    assert (info.value.i, info.value.j) == (0, 1)


@pytest.mark.parametrize("raw", [[], [[]], np.zeros((0, 3))])
def test_empty_rejected(raw):
    with pytest.raises(EmptyDimension):
        validate_bimatrix(raw)


def test_ragged_rejected():
    with pytest.raises(RaggedRows):
        validate_bimatrix([[1, 2], [3]])


def test_infinity_rejected():
    with pytest.raises(NonFiniteEntry):
        validate_bimatrix([[1.0], [float("inf")]])


def test_bimatrix_is_immutable():
    F = BiMatrix([[1.0, 2.0]])
    with pytest.raises(ValueError):
        F.data[0, 0] = 5.0


def test_bimatrix_copies_input():
    raw = np.array([[1.0, 2.0]])
    F = BiMatrix(raw)
    raw[0, 0] = 9.0
    assert F.data[0, 0] == 1.0


def test_json_schema_field_names():
    payload = BiMatrix([[1, 2, 3]]).to_dict()
    assert payload == {"kind": "bimatrix", "rows": 1, "cols": 3, "data": [[1.0, 2.0, 3.0]]}


def test_from_dict_rejects_declared_shape_mismatch():
    with pytest.raises(ValidationError, match="rows"):
        BiMatrix.from_dict({"kind": "bimatrix", "rows": 2, "cols": 1, "data": [[1.0]]})


def test_from_dict_names_data_field():
    with pytest.raises(NonFiniteEntry, match="'data'"):
        BiMatrix.from_dict({"kind": "bimatrix", "rows": 1, "cols": 1, "data": [[float("nan")]]})


@given(matrices())
def test_json_round_trip(data):
    F = BiMatrix(data)
    again = BiMatrix.from_dict(json.loads(json.dumps(F.to_dict())))
    assert again == F
    assert hash(again) == hash(F)


def test_uniform_weights():
    w = validate_weights([0.5, 0.5], 2)
    assert w.tolist() == [0.5, 0.5]
    assert not w.flags.writeable


def test_sum_not_one():
    with pytest.raises(SumNotOne):
        validate_weights([0.7, 0.4], 2)


def test_dust_clamped():
    w = validate_weights([1.0, -1e-12], 2, Tolerance(eps_feas=1e-9))
    assert w.tolist() == [1.0, 0.0]


def test_negative_weight():
    with pytest.raises(NegativeWeight):
        validate_weights([1.5, -0.5], 2)


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        validate_weights([1.0], 2)


@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=8).filter(lambda v: sum(v) > 1e-3))
def test_validate_weights_idempotent(raw):
    v = np.array(raw) / np.sum(raw)
    once = validate_weights(v, len(v))
    twice = validate_weights(once, len(v))
    assert np.array_equal(once, twice)


@pytest.mark.parametrize(
    "kwargs",
    [{"eps_feas": 0.0}, {"eps_opt": -1.0}, {"eps_cert": float("nan")}, {"eps_feas": 1e-3, "eps_cert": 1e-6}],
)
def test_tolerance_rejects_bad_values(kwargs):
    with pytest.raises(ValidationError):
        Tolerance(**kwargs)


def test_tolerance_defaults():
    assert Tolerance().to_dict() == {"eps_feas": 1e-9, "eps_opt": 1e-7, "eps_cert": 1e-7}


def test_index_sequence():
    seq = IndexSequence(cycle=(1, 2), prefix=(0,))
    assert seq.take(6) == [0, 1, 2, 1, 2, 1]
    F = validate_bimatrix(np.zeros((3, 1)))
    assert seq.validate_for(F) is seq
    with pytest.raises(IndexOutOfRange):
        IndexSequence(cycle=(3,)).validate_for(F)
    with pytest.raises(ValidationError):
        IndexSequence(cycle=())
