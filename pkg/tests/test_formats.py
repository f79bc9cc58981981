"""Round trips and diagnostics for the box and wiring file formats."""

import json
from fractions import Fraction

import pytest

from rgbgame.formats import (
    BoxFormatError,
    WiringFormatError,
    box_from_json_dict,
    box_to_json_dict,
    dump_box,
    dump_wiring,
    load_box,
    load_box_file,
    load_wiring,
    probability_to_string,
    save_box,
    wiring_from_json_dict,
    wiring_to_json_dict,
)
from rgbgame.locality import pr_box
from rgbgame.quantum import quantum_strategy_table, singlet, trine_strategy
from rgbgame.strategies import l1_distance, rgb0, rgrb
from rgbgame.wiring import evaluate_wiring, pr_from_rgrb, rgrb_from_pr

F = Fraction


def test_probability_strings():
    assert probability_to_string(F(1, 2)) == "1/2"
    assert probability_to_string(F(1)) == "1/1"
    assert probability_to_string(F(2, 4)) == "1/2"
    assert probability_to_string(0.5) == "0.5"
    assert probability_to_string(0.1) == "0.10000000000000001"


def test_box_document_layout():
    doc = box_to_json_dict(rgrb())
    assert doc["alphabets"] == [3, 3, 3, 3]
    # 9 rows x 2 supported pairs, zeros omitted, sorted by (a, b, x, y).
    assert len(doc["table"]) == 18
    keys = [(r["a"], r["b"], r["x"], r["y"]) for r in doc["table"]]
    assert keys == sorted(keys)
    assert all(r["p"] == "1/2" for r in doc["table"])


def test_exact_round_trips():
    for table in (rgrb(), rgb0(), pr_box()):
        text = dump_box(table)
        again = load_box(text)
        assert again.shape == table.shape
        assert l1_distance(again, table) == 0
        assert dump_box(again) == text  # canonical form is a fixed point


def test_float_round_trip():
    table = quantum_strategy_table(singlet(), trine_strategy(), trine_strategy())
    again = load_box(dump_box(table))
    assert not again.is_exact
    assert l1_distance(again, table) == 0  # %.17g reproduces doubles exactly


def test_file_helpers(tmp_path):
    path = tmp_path / "box.json"
    save_box(rgrb(), path)
    assert l1_distance(load_box_file(path), rgrb()) == 0


def test_parser_accepts_plain_numbers():
    doc = {
        "alphabets": [1, 1, 2, 1],
        "table": [
            {"a": 0, "b": 0, "x": 0, "y": 0, "p": "0.25"},
            {"a": 0, "b": 0, "x": 1, "y": 0, "p": 0.75},
        ],
    }
    table = box_from_json_dict(doc)
    assert table.prob(0, 0, 0, 0) == 0.25


class TestBoxDiagnostics:
    def test_not_an_object(self):
        with pytest.raises(BoxFormatError, match="JSON object"):
            box_from_json_dict([1, 2])

    def test_missing_and_unknown_keys(self):
        with pytest.raises(BoxFormatError, match="lacks"):
            box_from_json_dict({"alphabets": [1, 1, 1, 1]})
        with pytest.raises(BoxFormatError, match="unknown"):
            box_from_json_dict({"alphabets": [1, 1, 1, 1], "table": [], "extra": 1})

    def test_bad_alphabets(self):
        with pytest.raises(BoxFormatError, match="alphabets"):
            box_from_json_dict({"alphabets": [3, 3, 3], "table": []})
        with pytest.raises(BoxFormatError, match="alphabets"):
            box_from_json_dict({"alphabets": [3, 3, 3, 0], "table": []})

    def test_record_diagnostics_name_the_index(self):
        doc = {
            "alphabets": [1, 1, 2, 1],
            "table": [
                {"a": 0, "b": 0, "x": 0, "y": 0, "p": "1/2"},
                {"a": 0, "b": 0, "x": 5, "y": 0, "p": "1/2"},
            ],
        }
        with pytest.raises(BoxFormatError, match=r"table\[1\].*'x'"):
            box_from_json_dict(doc)

    def test_duplicate_entries(self):
        doc = {
            "alphabets": [1, 1, 2, 1],
            "table": [
                {"a": 0, "b": 0, "x": 0, "y": 0, "p": "1/2"},
                {"a": 0, "b": 0, "x": 0, "y": 0, "p": "1/2"},
            ],
        }
        with pytest.raises(BoxFormatError, match="duplicate"):
            box_from_json_dict(doc)

    def test_unparseable_probability(self):
        doc = {
            "alphabets": [1, 1, 1, 1],
            "table": [{"a": 0, "b": 0, "x": 0, "y": 0, "p": "one half"}],
        }
        with pytest.raises(BoxFormatError, match="cannot parse"):
            box_from_json_dict(doc)

    def test_rows_must_still_normalize(self):
        doc = {
            "alphabets": [1, 1, 2, 1],
            "table": [{"a": 0, "b": 0, "x": 0, "y": 0, "p": "1/3"}],
        }
        with pytest.raises(BoxFormatError):
            box_from_json_dict(doc)

    def test_invalid_json_text(self):
        with pytest.raises(BoxFormatError, match="not valid JSON"):
            load_box("{")


# ---------------------------------------------------------------------------
# wirings


def test_wiring_round_trips_evaluate_identically():
    for build, base in ((pr_from_rgrb, rgrb()), (rgrb_from_pr, pr_box())):
        protocol = build()
        again = load_wiring(dump_wiring(protocol))
        assert again.calls == protocol.calls
        assert again.outer_shape == protocol.outer_shape
        direct = evaluate_wiring(protocol, base)
        reloaded = evaluate_wiring(again, base)
        assert l1_distance(direct, reloaded) == 0


def test_wiring_document_layout():
    doc = wiring_to_json_dict(rgrb_from_pr())
    assert doc["calls"] == 2
    assert doc["outer_alphabets"] == [3, 3, 3, 3]
    assert doc["inner_alphabets"] == [2, 2, 2, 2]
    # Second-call input maps see one earlier output.
    assert len(doc["alice_inputs"][0]) == 3      # 3 colours, no priors
    assert len(doc["alice_inputs"][1]) == 6      # 3 colours x 2 prior bits
    assert len(doc["alice_output"]) == 12        # 3 colours x 4 bit pairs
    assert all(len(row) == 4 for row in doc["alice_output"])


def test_wiring_totality_is_enforced():
    doc = wiring_to_json_dict(pr_from_rgrb())
    doc["alice_output"] = doc["alice_output"][:-1]
    with pytest.raises(WiringFormatError, match="covers"):
        wiring_from_json_dict(doc)


def test_wiring_duplicate_and_range_checks():
    doc = wiring_to_json_dict(pr_from_rgrb())
    doc["bob_output"][0] = list(doc["bob_output"][1])
    with pytest.raises(WiringFormatError, match="duplicate"):
        wiring_from_json_dict(doc)

    doc = wiring_to_json_dict(pr_from_rgrb())
    doc["alice_output"][0][3] = 7
    with pytest.raises(WiringFormatError, match="outside"):
        wiring_from_json_dict(doc)


def test_wiring_key_checks():
    with pytest.raises(WiringFormatError, match="lacks"):
        wiring_from_json_dict({"calls": 1})
    doc = wiring_to_json_dict(pr_from_rgrb())
    doc["surprise"] = True
    with pytest.raises(WiringFormatError, match="unknown"):
        wiring_from_json_dict(doc)
    with pytest.raises(WiringFormatError, match="not valid JSON"):
        load_wiring("nope")


def test_wiring_json_text_round_trip():
    text = dump_wiring(pr_from_rgrb())
    assert json.loads(text)["randomness"] == 1
    again = load_wiring(text)
    assert dump_wiring(again) == text
