"""JSON/CSV codecs: exact strings, canonical ordering, round trips."""

import json
import re
from fractions import Fraction

import pytest

from eomkit import serialize
from eomkit.models import builtin_weight, label_distribution, weight_model
from eomkit.process import count_distribution

F = Fraction

RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def test_fraction_strings():
    assert serialize.fraction_to_str(F(1, 3)) == "1/3"
    assert serialize.fraction_to_str(F(2)) == "2"
    assert serialize.fraction_from_str("7/2") == F(7, 2)
    assert serialize.fraction_from_str("0") == 0


def test_occupancy_doc_round_trip():
    d = weight_model(builtin_weight("mb", 3), 2, 3)
    doc = serialize.occupancy_to_doc(d)
    assert doc["n"] == 2 and doc["r"] == 3
    assert doc["entries"] == sorted(doc["entries"])
    for entry in doc["entries"]:
        assert len(entry) == d.n + 1
        assert RATIONAL.match(entry[-1])
    assert serialize.occupancy_from_doc(doc) == d


def test_no_floats_anywhere():
    d = weight_model(builtin_weight("pc:3", 2), 3, 2)
    text = serialize.to_json(serialize.occupancy_to_doc(d))
    assert "." not in text
    parsed = json.loads(text)
    assert all(isinstance(e[-1], str) for e in parsed["entries"])


def test_label_doc():
    ld = label_distribution(weight_model(builtin_weight("be", 2), 2, 2))
    doc = serialize.labels_to_doc(ld)
    assert [e[:-1] for e in doc["entries"]] == [[1, 1], [1, 2], [2, 1], [2, 2]]


def test_occupancy_doc_requires_fields():
    with pytest.raises(ValueError):
        serialize.occupancy_from_doc({"n": 2})


def test_weight_doc_and_spec():
    a = builtin_weight("mb", 2)
    doc = serialize.weight_to_doc(a)
    assert doc == {"values": ["1", "1", "1/2"], "kind": "mb"}
    again = serialize.weight_from_spec(doc, x_max=2)
    assert again.values == a.values
    padded = serialize.weight_from_spec("be", 5)
    assert padded.x_max == 5
    bare = serialize.weight_from_spec(["1", "1", "5"], 2)
    assert bare.values == (F(1), F(1), F(5))
    with pytest.raises(ValueError):
        serialize.weight_from_spec({"kind": "mb"}, 2)


def test_process_doc():
    doc = {"weight": "be", "horizon": 1, "terminal_law": ["1/3", "1/3", "1/3"]}
    p = serialize.process_from_doc(doc)
    assert p.horizon == 1
    assert count_distribution(p, 1) == {0: F(1, 3), 1: F(1, 3), 2: F(1, 3)}
    table_doc = {
        "weight": ["1", "1", "1/2"],
        "horizon": 0,
        "terminal_law": ["1/2", "1/4", "1/4"],
    }
    q = serialize.process_from_doc(table_doc)
    assert q.joint == {(0,): F(1, 2), (1,): F(1, 4), (2,): F(1, 4)}
    with pytest.raises(ValueError):
        serialize.process_from_doc({"weight": "be"})


def test_csv_formats():
    text = serialize.compositions_to_csv([(0, 2), (1, 1)], 2)
    assert text == "x1,x2\n0,2\n1,1\n"
    text = serialize.paths_to_csv([(1, 0, 2)], 2)
    assert text == "j0,j1,j2\n1,0,2\n"
