import json
import struct

import numpy as np
import pytest

from lueders.effects import build_effect_set, generate_commuting_resolution
from lueders.errors import NotHermitian, ParseError, SpectrumAboveOne
from lueders.serialize import (
    dump_effect_set,
    dump_operator,
    effect_set_to_json,
    format_float,
    load_effect_set,
    load_operator,
    matrix_to_lists,
    operator_to_json,
    parse_effect_set,
    parse_operator,
    write_text_atomic,
)


def _bits(x):
    return struct.pack("<d", x)


@pytest.mark.parametrize(
    "x", [0.0, 1.0, -1.0, 0.1, 1 / 3, np.pi, 1e-300, 1.7976931348623157e308, 5e-324]
)
def test_format_float_round_trips_bit_exactly(x):
    assert _bits(float(format_float(x))) == _bits(x)


def test_format_float_random_sweep():
    rng = np.random.Generator(np.random.Philox(1))
    for x in rng.standard_normal(1000) * 10.0 ** rng.integers(-30, 30, size=1000):
        assert _bits(float(format_float(x))) == _bits(float(x))


def test_matrix_to_lists_shape_and_values():
    m = np.array([[1.0, 2.0 + 3.0j], [0.0, -1.0j]])
    assert matrix_to_lists(m) == [[[1.0, 0.0], [2.0, 3.0]], [[0.0, 0.0], [0.0, -1.0]]]


def test_effect_set_json_is_valid_and_round_trips():
    es = generate_commuting_resolution(4, 3, seed=9)
    text = effect_set_to_json(es, meta={"flavor": "commuting-resolution", "seed": 9})
    doc = json.loads(text)
    assert doc["d"] == 4 and doc["n"] == 3
    assert doc["flavor"] == "commuting-resolution" and doc["seed"] == 9
    back = parse_effect_set(text)
    for a, b in zip(back.matrices, es.matrices):
        assert np.array_equal(a, b)
    assert back.normalization == es.normalization


def test_effect_set_json_is_deterministic():
    a = effect_set_to_json(generate_commuting_resolution(3, 2, seed=4), meta={"seed": 4})
    b = effect_set_to_json(generate_commuting_resolution(3, 2, seed=4), meta={"seed": 4})
    assert a == b


def test_operator_round_trip():
    rng = np.random.Generator(np.random.Philox(2))
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert np.array_equal(parse_operator(operator_to_json(m)), m)
    with pytest.raises(ParseError):
        operator_to_json(np.zeros((2, 3)))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"d": 2, "n": 1}',
        '{"d": 2.5, "n": 1, "effects": []}',
        '{"d": 2, "n": true, "effects": []}',
        '{"d": 0, "n": 1, "effects": []}',
        '{"d": 2, "n": 2, "effects": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}',
        '{"d": 2, "n": 1, "effects": [[[[1,0],[0,0]]]]}',
        '{"d": 1, "n": 1, "effects": [[[[1,0,0]]]]}',
        '{"d": 1, "n": 1, "effects": [[[["x",0]]]]}',
    ],
)
def test_parse_effect_set_schema_errors(text):
    with pytest.raises(ParseError):
        parse_effect_set(text)


def test_parse_effect_set_invariant_errors_are_typed():
    non_hermitian = '{"d": 2, "n": 1, "effects": [[[[0.5,0],[1,0]],[[0,0],[0.5,0]]]]}'
    with pytest.raises(NotHermitian):
        parse_effect_set(non_hermitian)
    too_large = '{"d": 1, "n": 1, "effects": [[[[1.5,0]]]]}'
    with pytest.raises(SpectrumAboveOne):
        parse_effect_set(too_large)


def test_parse_operator_schema_errors():
    with pytest.raises(ParseError):
        parse_operator('{"d": 2}')
    with pytest.raises(ParseError):
        parse_operator('{"d": 2, "matrix": [[[1,0]]]}')


def test_file_round_trip(tmp_path):
    es = build_effect_set([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    path = tmp_path / "set.json"
    dump_effect_set(path, es, meta={"flavor": "manual"})
    back = load_effect_set(path)
    assert back.n == 2 and back.dim == 2

    op_path = tmp_path / "op.json"
    dump_operator(op_path, np.eye(2) * (1 / 3))
    assert np.array_equal(load_operator(op_path), np.eye(2) / 3)


def test_write_text_atomic_replaces_and_leaves_no_droppings(tmp_path):
    path = tmp_path / "out.txt"
    write_text_atomic(path, "first")
    write_text_atomic(path, "second")
    assert path.read_text() == "second"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
